"""Independent residual checks tying the field constructions to their PDEs.

Positive checks (must pass at their thresholds):

* scalar wave-equation residual of the photon potential, from closed-form
  jets;
* divergence of the complex field vector (an algebraic identity of the
  construction) and its Maxwell evolution equation, both probed by
  finite differences of sampled fields;
* z-invariance of the paraxial LG intensity in waist-rescaled transverse
  coordinates;
* agreement of the transverse field intensity with the scalar paraxial
  model at large waists.

Each positive check has a deliberately broken twin (negative control)
that must fail, guarding against vacuous passes.  Thresholds are
configuration, not constants baked into the checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .jets import MultiIndex, SpacetimePoint
from .photon import PhotonBeam, rs_vector
from .potentials import (
    PHI_SYM,
    R_SYM,
    T_SYM,
    Z_SYM,
    ParaxialLGParams,
    PhotonPotentialParams,
    Potential,
    SuperpositionSpec,
    lg_paraxial,
)

import sympy as sp

__all__ = [
    "ValidationConfig",
    "ResidualReport",
    "dalembert_residual",
    "maxwell_residual",
    "steuernagel_invariance",
    "paraxial_agreement",
    "random_cloud",
    "corrupted_photon_potential",
    "run_standard_suite",
    "run_negative_controls",
]


@dataclass(frozen=True)
class ValidationConfig:
    """Thresholds and probe parameters for the validation suite."""

    dalembert_threshold: float = 1e-6
    divergence_threshold: float = 1e-8
    evolution_threshold: float = 1e-5
    steuernagel_threshold: float = 1e-8
    paraxial_threshold: float = 0.01
    n_points: int = 200
    seed: int = 2016
    probe_ell: int = 15
    probe_w0: float = 7.75       # wavelength units; the strongly focused regime
    paraxial_w0: float = 100.0   # wavelength units

    def with_threshold(self, name: str, value: float) -> "ValidationConfig":
        key = f"{name}_threshold"
        if not hasattr(self, key):
            raise KeyError(f"unknown threshold {name!r}")
        return replace(self, **{key: value})


@dataclass(frozen=True)
class ResidualReport:
    name: str
    description: str
    max_residual: float
    threshold: float
    n_points: int
    skipped: int = 0
    expected_fail: bool = False

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    @property
    def as_designed(self) -> bool:
        """True when the check behaves as intended (controls must fail)."""
        return self.passed != self.expected_fail

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "passed": self.passed,
            "n_points": self.n_points,
            "skipped": self.skipped,
            "expected_fail": self.expected_fail,
        }


def random_cloud(
    n: int, w0: float, seed: int, spread_t: float = 1.0, spread_z: float = 1.0
) -> SpacetimePoint:
    """Randomized probe points: r in [w0/10, 3 w0], t and z near the focus."""
    rng = np.random.default_rng(seed)
    return SpacetimePoint(
        t=rng.uniform(-spread_t, spread_t, n),
        r=rng.uniform(w0 / 10.0, 3.0 * w0, n),
        phi=rng.uniform(0.0, 2.0 * np.pi, n),
        z=rng.uniform(-spread_z, spread_z, n),
    )


# ---------------------------------------------------------------------------
# Scalar wave equation
# ---------------------------------------------------------------------------

def dalembert_residual(
    potential: Potential,
    points: SpacetimePoint,
    threshold: float,
    name: str = "dalembert",
    description: str = "scalar wave-equation residual (closed-form jets)",
    expected_fail: bool = False,
) -> ResidualReport:
    """max |d_t^2 chi - laplacian chi| / |d_t^2 chi| over the point cloud."""
    jet = potential.evaluate_jet(points, 2)
    r = np.asarray(points.r, dtype=float)
    d_tt = np.asarray(jet.entry(MultiIndex(2, 0, 0, 0)))
    lap = (
        np.asarray(jet.entry(MultiIndex(0, 2, 0, 0)))
        + np.asarray(jet.entry(MultiIndex(0, 1, 0, 0))) / r
        + np.asarray(jet.entry(MultiIndex(0, 0, 2, 0))) / r**2
        + np.asarray(jet.entry(MultiIndex(0, 0, 0, 2)))
    )
    scale = np.abs(d_tt)
    field_scale = float(scale.max())
    usable = scale > 1e-30 * field_scale
    residuals = np.abs(d_tt - lap)[usable] / scale[usable]
    return ResidualReport(
        name=name,
        description=description,
        max_residual=float(residuals.max()),
        threshold=threshold,
        n_points=int(usable.sum()),
        skipped=int((~usable).sum()),
        expected_fail=expected_fail,
    )


# ---------------------------------------------------------------------------
# Maxwell identities via finite differences of the sampled field vector
# ---------------------------------------------------------------------------

def _field_cartesian(potential: Potential) -> Callable:
    def F(t, x, y, z):
        point = SpacetimePoint(t=t, r=np.hypot(x, y), phi=np.arctan2(y, x), z=z)
        vec = rs_vector(point, potential)
        return np.stack([np.asarray(vec.F_x), np.asarray(vec.F_y), np.asarray(vec.F_z)])

    return F


def _fd_derivative(F: Callable, coords: list[np.ndarray], axis: int, h: float) -> np.ndarray:
    """4th-order central derivative with one Richardson extrapolation."""

    def stencil(step: float) -> np.ndarray:
        def shifted(mult: float):
            c = [np.array(v, copy=True) for v in coords]
            c[axis] = c[axis] + mult * step
            return F(*c)

        return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * step)

    coarse = stencil(h)
    fine = stencil(0.5 * h)
    return (16.0 * fine - coarse) / 15.0


def maxwell_residual(
    potential: Potential,
    points: SpacetimePoint,
    divergence_threshold: float,
    evolution_threshold: float,
    step_scale: float,
    expected_fail: bool = False,
    name_prefix: str = "maxwell",
) -> tuple[ResidualReport, ResidualReport]:
    """Divergence and evolution residuals of the generated field vector.

    Derivatives of the sampled field are estimated with 4th-order central
    differences (step ``step_scale * 1e-4`` with Richardson extrapolation)
    and normalized by the largest local field gradient.
    """
    t = np.asarray(points.t, dtype=float)
    r = np.asarray(points.r, dtype=float)
    phi = np.asarray(points.phi, dtype=float)
    z = np.asarray(points.z, dtype=float)
    x, y = r * np.cos(phi), r * np.sin(phi)
    coords = [t, x, y, z]

    F = _field_cartesian(potential)
    h = step_scale * 1.0e-4
    dF = {axis: _fd_derivative(F, coords, axis, h) for axis in range(4)}
    d_t, d_x, d_y, d_z = dF[0], dF[1], dF[2], dF[3]

    scale = np.max(
        [np.abs(d[c]) for d in (d_t, d_x, d_y, d_z) for c in range(3)], axis=0
    )
    ok = scale > 0

    divergence = np.abs(d_x[0] + d_y[1] + d_z[2])
    div_res = float((divergence[ok] / scale[ok]).max())

    curl = np.stack(
        [d_y[2] - d_z[1], d_z[0] - d_x[2], d_x[1] - d_y[0]]
    )
    evolution = np.max(np.abs(1j * d_t - curl), axis=0)
    evo_res = float((evolution[ok] / scale[ok]).max())

    n = int(ok.sum())
    skipped = int((~ok).sum())
    return (
        ResidualReport(
            name=f"{name_prefix}_divergence",
            description="div F = 0 (construction identity), finite differences",
            max_residual=div_res,
            threshold=divergence_threshold,
            n_points=n,
            skipped=skipped,
            expected_fail=False,
        ),
        ResidualReport(
            name=f"{name_prefix}_evolution",
            description="i dF/dt = curl F, finite differences",
            max_residual=evo_res,
            threshold=evolution_threshold,
            n_points=n,
            skipped=skipped,
            expected_fail=expected_fail,
        ),
    )


# ---------------------------------------------------------------------------
# Paraxial-model checks
# ---------------------------------------------------------------------------

def steuernagel_invariance(
    params: ParaxialLGParams,
    z_samples: Sequence[float],
    threshold: float,
    rescale: bool = True,
    expected_fail: bool = False,
) -> ResidualReport:
    """z-invariance of w(z)^2 |LG|^2 in waist-rescaled transverse coordinates.

    With ``rescale=False`` the w(z) factors are dropped (negative control).
    """
    rho = np.linspace(0.05, 3.0, 48)
    psi = np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False)
    RHO, PSI = np.meshgrid(rho, psi, indexing="ij")

    def scaled_intensity(z: float) -> np.ndarray:
        w = float(params.waist_at(z))
        r = RHO * w / math.sqrt(2.0)
        value = lg_paraxial(SpacetimePoint(t=0.0, r=r, phi=PSI, z=z), params)
        intensity = np.abs(value) ** 2
        return intensity * w**2 if rescale else intensity

    base = scaled_intensity(float(z_samples[0]))
    scale = float(np.abs(base).max())
    deviation = 0.0
    for z in z_samples[1:]:
        deviation = max(deviation, float(np.abs(scaled_intensity(float(z)) - base).max()) / scale)
    return ResidualReport(
        name="steuernagel" + ("" if rescale else "_unscaled"),
        description="scaled-intensity z-invariance of the paraxial LG mode",
        max_residual=deviation,
        threshold=threshold,
        n_points=base.size * len(z_samples),
        expected_fail=expected_fail,
    )


def paraxial_agreement(
    beam: PhotonBeam,
    threshold: float,
    expected_fail: bool = False,
    name: str = "paraxial_agreement",
) -> ResidualReport:
    """Peak-normalized L2 distance to the scalar model on the reference ring.

    Both azimuthal intensity profiles are taken at the scalar-model ring
    radius w0 sqrt(ell/2) and aligned by circular cross-correlation (the
    absolute fringe phase of the exact field is shifted by the spin-orbit
    charge split, a convention rather than a discrepancy).  The exact
    field's own ring sits at a slightly smaller radius where a residual
    w0-independent fringe asymmetry survives; on the scalar ring that
    asymmetry cancels and the deviation decreases monotonically with w0,
    leaving only genuine focusing contributions.
    """
    ell = beam.ell
    w0 = beam.params.w0_scaled
    ring = w0 * math.sqrt(ell / 2.0)
    phis = np.linspace(0.0, 2.0 * np.pi, max(64 * ell, 256), endpoint=False)
    r_ring = np.full_like(phis, ring)

    profile = np.asarray(beam.intensity(r_ring, phis))

    lg_params = ParaxialLGParams(ell=ell, w0=w0, wavelength=1.0)
    point = SpacetimePoint(t=0.0, r=r_ring, phi=phis, z=0.0)
    weights = dict(zip(beam.superposition.charges, [w for w, _ in beam.superposition.terms]))
    scalar_sum = sum(
        w * lg_paraxial(point, replace(lg_params, ell=ell_i))
        for ell_i, w in weights.items()
    )
    reference = np.abs(scalar_sum) ** 2

    profile = profile / profile.max()
    reference = reference / reference.max()
    correlation = np.fft.ifft(np.fft.fft(profile) * np.conj(np.fft.fft(reference))).real
    reference = np.roll(reference, int(np.argmax(correlation)))
    deviation = float(np.sqrt(np.sum((profile - reference) ** 2) / np.sum(reference**2)))
    return ResidualReport(
        name=name,
        description="intensity vs scalar paraxial model on the reference ring (L2)",
        max_residual=deviation,
        threshold=threshold,
        n_points=phis.size,
        expected_fail=expected_fail,
    )


# ---------------------------------------------------------------------------
# Negative controls
# ---------------------------------------------------------------------------

def corrupted_photon_potential(params: PhotonPotentialParams) -> Potential:
    """Photon potential with the waist parameter frozen at its focal value.

    Freezing a(t, z) = w0^2 destroys the wave-equation balance while
    keeping the focal-plane profile; the residual check must flag it.
    """
    la = abs(params.ell)
    w0 = params.w0_scaled
    a = sp.Float(w0**2)
    expr = (
        sp.exp(-sp.I * params.sigma * ((T_SYM - Z_SYM) - params.ell * PHI_SYM))
        * R_SYM**la
        * a ** (-(la + 1))
        * sp.exp(-(R_SYM**2) / a)
    )
    return Potential(expr, label="corrupted photon potential", params=params)


def _non_solution_potential() -> Potential:
    """A wave-equation violator whose defect varies transversally.

    The sampled evolution residual equals the transverse gradient of the
    wave-equation defect, so the control must violate the equation with
    r-dependence (r^4 t does; a defect constant across the transverse
    plane would slip through).
    """
    return Potential(R_SYM**4 * T_SYM, label="non-solution r^4 t")


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _probe_beam(config: ValidationConfig) -> PhotonBeam:
    params = PhotonPotentialParams(ell=config.probe_ell, w0=config.probe_w0)
    return PhotonBeam(params, SuperpositionSpec.cosine(config.probe_ell))


def run_standard_suite(config: ValidationConfig | None = None) -> list[ResidualReport]:
    """All positive checks at their configured thresholds."""
    config = config or ValidationConfig()
    beam = _probe_beam(config)
    chi = beam.potential
    w0 = config.probe_w0
    points = random_cloud(config.n_points, w0, config.seed)

    reports = [
        dalembert_residual(chi, points, config.dalembert_threshold)
    ]
    div_report, evo_report = maxwell_residual(
        chi,
        random_cloud(max(config.n_points // 4, 32), w0, config.seed + 1),
        config.divergence_threshold,
        config.evolution_threshold,
        step_scale=w0,
    )
    reports.extend([div_report, evo_report])

    lg = ParaxialLGParams(ell=3, w0=10.0, wavelength=1.0)
    z_r = lg.rayleigh_range
    reports.append(
        steuernagel_invariance(
            lg,
            [0.0, 0.3 * z_r, z_r, 2.0 * z_r, 3.0 * z_r, -z_r],
            config.steuernagel_threshold,
        )
    )

    paraxial_beam = PhotonBeam(
        PhotonPotentialParams(ell=config.probe_ell, w0=config.paraxial_w0),
        SuperpositionSpec.cosine(config.probe_ell),
    )
    reports.append(paraxial_agreement(paraxial_beam, config.paraxial_threshold))
    return reports


def run_negative_controls(config: ValidationConfig | None = None) -> list[ResidualReport]:
    """Deliberately broken inputs; every report must fail its threshold."""
    config = config or ValidationConfig()
    w0 = config.probe_w0
    points = random_cloud(config.n_points, w0, config.seed + 2)

    frozen = corrupted_photon_potential(
        PhotonPotentialParams(ell=config.probe_ell, w0=w0)
    )
    reports = [
        dalembert_residual(
            frozen,
            points,
            config.dalembert_threshold,
            name="dalembert_frozen_waist",
            description="wave-equation residual of the frozen-waist potential",
            expected_fail=True,
        )
    ]

    _, evo_bad = maxwell_residual(
        _non_solution_potential(),
        random_cloud(32, 1.0, config.seed + 3),
        config.divergence_threshold,
        config.evolution_threshold,
        step_scale=1.0,
        expected_fail=True,
        name_prefix="maxwell_non_solution",
    )
    reports.append(evo_bad)

    lg = ParaxialLGParams(ell=3, w0=10.0, wavelength=1.0)
    reports.append(
        steuernagel_invariance(
            lg,
            [0.0, lg.rayleigh_range],
            config.steuernagel_threshold,
            rescale=False,
            expected_fail=True,
        )
    )

    tight = PhotonBeam(
        PhotonPotentialParams(ell=config.probe_ell, w0=3.0),
        SuperpositionSpec.cosine(config.probe_ell),
    )
    reports.append(
        paraxial_agreement(
            tight,
            config.paraxial_threshold,
            expected_fail=True,
            name="paraxial_agreement_tight_focus",
        )
    )
    return reports
