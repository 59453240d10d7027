"""Ring location, azimuthal extrema and fringe-visibility extraction.

Works on any pointwise intensity function ``I(r, phi)`` (vectorized over
numpy arrays).  The ring of maximal intensity is found by a coarse polar
scan followed by alternating golden-section refinement in r and parabolic
refinement in phi; no closed-form ring radius is ever assumed, so the
machinery applies equally to paraxial and strongly focused fields.
Visibility is the fringe contrast (I_max - I_min) / (I_max + I_min)
measured on the azimuthal profile at the ring radius.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .parallel import map_indexed

__all__ = [
    "AnalysisError",
    "RingLocation",
    "AzimuthalExtrema",
    "VisibilityReport",
    "find_r_max",
    "azimuthal_extrema",
    "visibility",
    "fringe_spacing",
    "scaling_fit",
    "numerical_aperture",
    "analyze_intensity",
    "analyze_beam",
]

IntensityFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class AnalysisError(RuntimeError):
    """Raised when the intensity landscape defeats the search."""


@dataclass(frozen=True)
class RingLocation:
    r_max: float
    phi_at_max: float
    iterations: int
    radial_samples: int
    azimuthal_samples: int


@dataclass(frozen=True)
class AzimuthalExtrema:
    I_max: float
    I_min: float
    phi_at_max: float
    fringe_count: int
    samples: int
    warning: str | None = None


@dataclass(frozen=True)
class VisibilityReport:
    """Ring radius, extrema, visibility and solver diagnostics for one field."""

    r_max: float
    phi_at_max: float
    I_max: float
    I_min: float
    vis: float
    fringe_count: int
    radial_samples: int
    azimuthal_samples: int
    refine_iterations: int
    expected_fringes: int
    warning: str | None = None

    def to_dict(self) -> dict:
        out = {
            "r_max": self.r_max,
            "phi_at_max": self.phi_at_max,
            "I_max": self.I_max,
            "I_min": self.I_min,
            "vis": self.vis,
            "fringe_count": self.fringe_count,
            "radial_samples": self.radial_samples,
            "azimuthal_samples": self.azimuthal_samples,
            "refine_iterations": self.refine_iterations,
            "expected_fringes": self.expected_fringes,
            "warning": self.warning,
        }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VisibilityReport":
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)


def _golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Location of the maximum of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _parabolic_vertex(x0: float, x1: float, x2: float, y0: float, y1: float, y2: float) -> float:
    """Vertex abscissa of the parabola through three points; falls back to x1."""
    denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if denom == 0.0:
        return x1
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    vertex = x1 - 0.5 * num / denom
    if not (min(x0, x2) <= vertex <= max(x0, x2)):
        return x1
    return vertex


def find_r_max(
    intensity: IntensityFn,
    ell: int,
    w0_hint: float,
    *,
    n_r: int = 192,
    samples_per_fringe: int = 32,
    tol_factor: float = 1e-6,
    max_iterations: int = 60,
) -> RingLocation:
    """Global maximizer of the focal-plane intensity.

    Coarse scan over r in [w0_hint/10, 4 w0_hint sqrt(ell/2)] with at
    least `samples_per_fringe` azimuthal samples per expected fringe,
    then alternating golden-section (radial) / parabolic (azimuthal)
    refinement until the radius moves by less than tol_factor * w0_hint.
    """
    if ell < 1:
        raise AnalysisError("ring search requires ell >= 1")
    if w0_hint <= 0:
        raise AnalysisError("w0_hint must be positive")

    r_lo = w0_hint / 10.0
    r_hi = 4.0 * w0_hint * math.sqrt(ell / 2.0)
    n_phi = max(samples_per_fringe * 2 * ell, 64)
    rs = np.linspace(r_lo, r_hi, n_r)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)

    # scan phase: rows of constant r distributed across workers
    rows = map_indexed(lambda i: np.asarray(intensity(np.full_like(phis, rs[i]), phis)), n_r)
    values = np.stack(rows)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise AnalysisError(
            f"non-finite intensity at r={rs[bad[0]]!r}, phi={phis[bad[1]]!r}"
        )
    i_best, j_best = np.unravel_index(int(np.argmax(values)), values.shape)
    if i_best in (0, n_r - 1):
        raise AnalysisError(
            "intensity maximum sits on the radial search boundary; "
            "supply a better w0_hint or check the field"
        )

    r_cur = float(rs[i_best])
    phi_cur = float(phis[j_best])
    dr = float(rs[1] - rs[0])
    dphi = float(phis[1] - phis[0])
    tol = tol_factor * w0_hint

    iterations = 0
    for iterations in range(1, max_iterations + 1):
        r_prev = r_cur
        lo = max(r_cur - dr, 0.5 * r_lo)
        hi = r_cur + dr
        r_cur = _golden_section_max(
            lambda rv: float(intensity(np.asarray([rv]), np.asarray([phi_cur]))[0]),
            lo,
            hi,
            tol / 4.0,
        )
        # parabolic step around the current azimuth
        p0, p1, p2 = phi_cur - dphi, phi_cur, phi_cur + dphi
        y0, y1, y2 = (
            float(intensity(np.asarray([r_cur]), np.asarray([p])))
            for p in (p0, p1, p2)
        )
        if y0 > y1 or y2 > y1:
            phi_cur = p0 if y0 > y2 else p2
        else:
            phi_cur = _parabolic_vertex(p0, p1, p2, y0, y1, y2)
        dr *= 0.5
        dphi *= 0.5
        if abs(r_cur - r_prev) < tol:
            break

    return RingLocation(
        r_max=r_cur,
        phi_at_max=float(np.mod(phi_cur, 2.0 * np.pi)),
        iterations=iterations,
        radial_samples=n_r,
        azimuthal_samples=n_phi,
    )


def azimuthal_extrema(
    intensity: IntensityFn,
    r_max: float,
    ell: int,
    *,
    samples_per_fringe: int = 64,
) -> AzimuthalExtrema:
    """Extrema of the azimuthal intensity profile on the ring r = r_max.

    Dense scan with at least ``samples_per_fringe * ell`` samples and
    three-point parabolic refinement at every candidate extremum.  A
    fringe count different from 2*ell is reported as a warning, not an
    error.
    """
    if r_max <= 0:
        raise AnalysisError("r_max must be positive")
    n_phi = max(samples_per_fringe * ell, 256)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    ring = np.asarray(intensity(np.full_like(phis, r_max), phis))

    prev = np.roll(ring, 1)
    nxt = np.roll(ring, -1)
    is_max = (ring >= prev) & (ring > nxt)
    is_min = (ring <= prev) & (ring < nxt)

    def refined(indices: np.ndarray, kind: str) -> tuple[np.ndarray, np.ndarray]:
        vals, locs = [], []
        dphi = phis[1] - phis[0]
        for i in indices:
            p1 = phis[i]
            y0, y1, y2 = ring[(i - 1) % n_phi], ring[i], ring[(i + 1) % n_phi]
            vertex = _parabolic_vertex(p1 - dphi, p1, p1 + dphi, float(y0), float(y1), float(y2))
            value = float(intensity(np.asarray([r_max]), np.asarray([vertex]))[0])
            # keep the grid sample if refinement made the extremum worse
            worse = value < y1 if kind == "max" else value > y1
            if worse:
                vertex, value = p1, float(y1)
            vals.append(value)
            locs.append(vertex)
        return np.asarray(vals), np.asarray(locs)

    max_idx = np.flatnonzero(is_max)
    min_idx = np.flatnonzero(is_min)
    if len(max_idx) == 0:
        # flat ring: no strict local extrema
        return AzimuthalExtrema(
            I_max=float(ring.max()),
            I_min=float(ring.min()),
            phi_at_max=float(phis[int(np.argmax(ring))]),
            fringe_count=0,
            samples=n_phi,
            warning="no azimuthal modulation detected (flat ring)",
        )

    max_vals, max_locs = refined(max_idx, "max")
    min_vals, _ = refined(min_idx, "min")

    fringe_count = int(len(max_idx))
    warning = None
    if fringe_count != 2 * ell:
        warning = f"fringe count {fringe_count} differs from expected {2 * ell}"

    best = int(np.argmax(max_vals))
    return AzimuthalExtrema(
        I_max=float(max_vals[best]),
        I_min=float(min_vals.min()) if len(min_vals) else float(ring.min()),
        phi_at_max=float(np.mod(max_locs[best], 2.0 * np.pi)),
        fringe_count=fringe_count,
        samples=n_phi,
        warning=warning,
    )


def visibility(i_max: float, i_min: float) -> float:
    """Fringe contrast (I_max - I_min) / (I_max + I_min)."""
    if i_max < i_min:
        raise ValueError(f"I_max={i_max} must be >= I_min={i_min}")
    if i_min < 0:
        raise ValueError("intensities must be non-negative")
    total = i_max + i_min
    if total == 0.0:
        raise ValueError("visibility undefined for an identically zero ring")
    return (i_max - i_min) / total


def fringe_spacing(ell: int, w0: float) -> float:
    """Azimuthal arc distance between adjacent maxima: pi w0 / sqrt(2 ell)."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if w0 <= 0:
        raise ValueError("w0 must be positive")
    return math.pi * w0 / math.sqrt(2.0 * ell)


def scaling_fit(pairs: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(r_max) against log(ell)."""
    if len(pairs) < 4:
        raise ValueError("need at least 4 (ell, r_max) pairs")
    ells = np.asarray([p[0] for p in pairs], dtype=float)
    rmax = np.asarray([p[1] for p in pairs], dtype=float)
    if len(np.unique(ells)) != len(ells):
        raise ValueError("ell values must be distinct")
    slope, _ = np.polyfit(np.log(ells), np.log(rmax), 1)
    return float(slope)


def numerical_aperture(w0: float, wavelength: float) -> float:
    """Gaussian-beam numerical aperture lambda / (pi w0)."""
    if w0 <= 0 or wavelength <= 0:
        raise ValueError("w0 and wavelength must be positive")
    return wavelength / (math.pi * w0)


def analyze_intensity(
    intensity: IntensityFn,
    ell: int,
    w0_hint: float,
    **search_kwargs,
) -> VisibilityReport:
    """Full pipeline: ring search, azimuthal extrema, visibility."""
    ring = find_r_max(intensity, ell, w0_hint, **search_kwargs)
    extrema = azimuthal_extrema(intensity, ring.r_max, ell)
    vis = visibility(extrema.I_max, extrema.I_min)
    return VisibilityReport(
        r_max=ring.r_max,
        phi_at_max=extrema.phi_at_max,
        I_max=extrema.I_max,
        I_min=extrema.I_min,
        vis=vis,
        fringe_count=extrema.fringe_count,
        radial_samples=ring.radial_samples,
        azimuthal_samples=extrema.samples,
        refine_iterations=ring.iterations,
        expected_fringes=2 * ell,
        warning=extrema.warning,
    )


def analyze_beam(beam, **search_kwargs) -> VisibilityReport:
    """Analyze a species beam (anything exposing intensity/ell/w0_hint)."""
    return analyze_intensity(beam.intensity, beam.ell, beam.w0_hint, **search_kwargs)
