"""Grid sampling and CSV / PNG / JSON export.

Grids are specified in waist-scaled units (1/q-scaled for electrons) so
files stay unit-portable; the physical scales travel in the metadata.
Sampling is data-parallel over grid rows and deterministic: identical
specs produce bit-identical CSV output regardless of the worker count.
Intensities are post-normalized to unit peak with the raw peak recorded,
so raw values can be reconstructed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from .analysis import VisibilityReport
from .parallel import map_indexed

__all__ = [
    "GridSpec",
    "FieldGrid",
    "GridSamplingError",
    "sample_grid",
    "write_csv",
    "read_csv",
    "write_png",
    "write_figure",
    "write_report",
    "read_report",
]


class GridSamplingError(RuntimeError):
    """Raised when a grid node evaluates to a non-finite value."""


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid over the focal plane.

    polar: axis 0 is radius in [r_min, r_max] (r_min > 0), axis 1 is the
    azimuth over the full circle.  cartesian: axis 0 is y, axis 1 is x,
    both spanning [-half_extent, +half_extent]; nodes that land on r = 0
    are rejected by construction (even resolutions avoid the origin).
    All lengths are in waist-scaled units.
    """

    kind: str = "polar"
    r_min: float = 0.05
    r_max: float = 4.0
    half_extent: float = 4.0
    resolution: tuple[int, int] = (128, 512)
    slice_t: float = 0.0
    slice_z: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("polar", "cartesian"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if min(self.resolution) < 2:
            raise ValueError("resolution must be at least 2 per axis")
        if self.kind == "polar" and self.r_min <= 0:
            raise ValueError("polar grids must exclude the origin (r_min > 0)")
        if self.kind == "polar" and self.r_max <= self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.kind == "cartesian" and self.half_extent <= 0:
            raise ValueError("half_extent must be positive")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        n0, n1 = self.resolution
        if self.kind == "polar":
            return (
                np.linspace(self.r_min, self.r_max, n0),
                np.linspace(0.0, 2.0 * np.pi, n1, endpoint=False),
            )
        # cell centers, symmetric about zero: never contains the exact origin
        edges0 = np.linspace(-self.half_extent, self.half_extent, n0 + 1)
        edges1 = np.linspace(-self.half_extent, self.half_extent, n1 + 1)
        return (
            0.5 * (edges0[:-1] + edges0[1:]),
            0.5 * (edges1[:-1] + edges1[1:]),
        )

    def to_metadata(self) -> dict:
        meta = {
            "kind": self.kind,
            "resolution_0": self.resolution[0],
            "resolution_1": self.resolution[1],
            "slice_t": self.slice_t,
            "slice_z": self.slice_z,
        }
        if self.kind == "polar":
            meta.update({"r_min": self.r_min, "r_max": self.r_max})
        else:
            meta.update({"half_extent": self.half_extent})
        return meta


@dataclass
class FieldGrid:
    """Sampled intensity (unit peak) plus optional complex components."""

    spec: GridSpec
    intensity: np.ndarray
    metadata: dict = field(default_factory=dict)
    components: Optional[dict[str, np.ndarray]] = None

    @property
    def peak(self) -> float:
        return float(self.metadata["peak"])

    def raw_intensity(self) -> np.ndarray:
        return self.intensity * self.peak


def _node_coordinates(spec: GridSpec, scale: float) -> tuple[np.ndarray, np.ndarray]:
    """Polar coordinates (r, phi) of every node in internal units."""
    a0, a1 = spec.axes()
    if spec.kind == "polar":
        R, P = np.meshgrid(a0 * scale, a1, indexing="ij")
        return R, P
    Y, X = np.meshgrid(a0 * scale, a1 * scale, indexing="ij")
    return np.hypot(X, Y), np.arctan2(Y, X)


def sample_grid(beam, spec: GridSpec, include_components: bool = False) -> FieldGrid:
    """Evaluate a beam on every grid node (row-parallel, deterministic).

    Aborts with the offending coordinates if any node comes back
    non-finite.  The stored intensity is normalized to unit peak.
    """
    R, P = _node_coordinates(spec, beam.file_scale)
    t, z = spec.slice_t, spec.slice_z

    rows = map_indexed(
        lambda i: np.asarray(beam.intensity(R[i], P[i], t=t, z=z), dtype=float),
        R.shape[0],
    )
    intensity = np.stack(rows)
    if not np.all(np.isfinite(intensity)):
        i, j = np.argwhere(~np.isfinite(intensity))[0]
        raise GridSamplingError(
            f"non-finite intensity at node ({i}, {j}): r={R[i, j]!r}, phi={P[i, j]!r}"
        )

    peak = float(intensity.max())
    normalized = intensity / peak if peak > 0 else intensity
    metadata = dict(beam.metadata())
    metadata.update(spec.to_metadata())
    metadata["peak"] = peak

    components = None
    if include_components:
        comp_rows = map_indexed(lambda i: beam.components(R[i], P[i], t=t, z=z), R.shape[0])
        names = comp_rows[0].keys()
        components = {
            name: np.stack([np.broadcast_to(row[name], R.shape[1:]) for row in comp_rows])
            for name in names
        }

    return FieldGrid(spec=spec, intensity=normalized, metadata=metadata, components=components)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def _format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)  # shortest round-trip decimal
    return str(v)


def write_csv(grid: FieldGrid, path) -> None:
    """Metadata header lines ('# key=value'), then one CSV row per first-axis index."""
    path = Path(path)
    lines = []
    for key in sorted(grid.metadata):
        lines.append(f"# {key}={_format_value(grid.metadata[key])}")
    for row in grid.intensity:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path) -> tuple[np.ndarray, dict[str, str]]:
    """Parse a grid CSV back into (values, metadata-strings)."""
    metadata: dict[str, str] = {}
    rows: list[list[float]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
            continue
        rows.append([float(tok) for tok in line.split(",")])
    return np.asarray(rows, dtype=float), metadata


# ---------------------------------------------------------------------------
# PNG
# ---------------------------------------------------------------------------

def write_png(grid: FieldGrid, path, colormap: str = "inferno") -> None:
    """8-bit raster: intensity mapped linearly [0, peak] -> [0, 255].

    ``colormap`` is any named matplotlib colormap ("gray" for grayscale).
    Row 0 of the grid is the top image row, matching the CSV layout.
    """
    import matplotlib

    levels = np.clip(np.round(grid.intensity * 255.0), 0, 255).astype(np.uint8)
    lut = matplotlib.colormaps[colormap](np.linspace(0.0, 1.0, 256))[:, :3]
    rgb = np.round(lut[levels] * 255.0).astype(np.uint8)
    Image.fromarray(rgb, mode="RGB").save(Path(path), format="PNG")


def write_figure(grid: FieldGrid, path, colormap: str = "inferno") -> None:
    """Annotated matplotlib rendering of the sampled intensity."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    species = grid.metadata.get("species", "field")
    if grid.spec.kind == "polar":
        fig, ax = plt.subplots(subplot_kw={"projection": "polar"}, figsize=(6, 5))
        rs, phis = grid.spec.axes()
        # close the azimuthal seam for a clean wrap
        P, R = np.meshgrid(np.append(phis, 2.0 * np.pi), rs)
        vals = np.concatenate([grid.intensity, grid.intensity[:, :1]], axis=1)
        mesh = ax.pcolormesh(P, R, vals, cmap=colormap, shading="auto")
        ax.set_yticklabels([])
    else:
        fig, ax = plt.subplots(figsize=(6, 5))
        h = grid.spec.half_extent
        mesh = ax.imshow(
            grid.intensity,
            cmap=colormap,
            origin="lower",
            extent=(-h, h, -h, h),
        )
        ax.set_xlabel("x / w0")
        ax.set_ylabel("y / w0")
    fig.colorbar(mesh, ax=ax, label="normalized intensity")
    ax.set_title(f"{species} intensity")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# JSON reports
# ---------------------------------------------------------------------------

def write_report(report: VisibilityReport, path) -> None:
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")


def read_report(path) -> VisibilityReport:
    return VisibilityReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
