"""Electromagnetic fields from a scalar potential via the complex field vector.

The complex field vector F packages the electric and magnetic fields as
``F = E / sqrt(2 eps0) + i B / sqrt(2 mu0)`` and is generated from a
scalar potential chi by second-order derivative operators (beam along z,
cylindrical coordinates, c = 1):

    F_x = (d_x d_z + i d_y d_t) chi
    F_y = (d_y d_z - i d_x d_t) chi
    F_z = -(d_r^2 + (1/r) d_r + (1/r^2) d_phi^2) chi

The Cartesian pair operators expand into azimuthal ladder terms acting on
the order-2 jet of chi, so the whole construction stays closed-form.
Divergence-freedom of F is an algebraic identity of this construction;
the Maxwell evolution equation i dF/dt = curl F holds whenever chi solves
the scalar wave equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .jets import (
    DiffOp,
    Jet,
    JetError,
    SpacetimePoint,
    dx_dz,
    dy_dz,
    evaluate_terms,
    i_dx_dt,
    i_dy_dt,
    scalar,
    transverse_laplacian,
)
from .potentials import (
    PhotonPotentialParams,
    Potential,
    SuperpositionSpec,
    photon_chi,
    superpose,
)

__all__ = [
    "EPSILON_0",
    "MU_0",
    "RSVector",
    "rs_vector",
    "rs_vector_from_jet",
    "em_intensity",
    "extract_EB",
    "PhotonBeam",
]

EPSILON_0 = 8.8541878128e-12   # F/m
MU_0 = 1.25663706212e-6        # H/m

# Component operators, expanded once at import time.
_FX_TERMS = DiffOp((dx_dz(),)).expanded() + DiffOp((i_dy_dt(),)).expanded()
_FY_TERMS = DiffOp((dy_dz(),)).expanded() + DiffOp((scalar(-1.0), i_dx_dt())).expanded()
_FZ_TERMS = DiffOp((scalar(-1.0), transverse_laplacian())).expanded()


@dataclass(frozen=True)
class RSVector:
    """Complex field vector components at one point (or arrays of points)."""

    F_x: complex
    F_y: complex
    F_z: complex

    def as_array(self) -> np.ndarray:
        return np.stack([np.asarray(self.F_x), np.asarray(self.F_y), np.asarray(self.F_z)])


def rs_vector_from_jet(jet: Jet) -> RSVector:
    """Contract a precomputed order-2 jet into the three field components."""
    return RSVector(
        F_x=evaluate_terms(_FX_TERMS, jet),
        F_y=evaluate_terms(_FY_TERMS, jet),
        F_z=evaluate_terms(_FZ_TERMS, jet),
    )


def rs_vector(point: SpacetimePoint, potential: Potential) -> RSVector:
    """Field vector of a potential at a point; requires r > 0."""
    if np.any(np.asarray(point.r) <= 0.0):
        raise JetError("field components involve 1/r factors; require r > 0")
    return rs_vector_from_jet(potential.evaluate_jet(point, 2))


def em_intensity(F: RSVector):
    """Electromagnetic intensity |F_x|^2 + |F_y|^2 + |F_z|^2."""
    return np.abs(F.F_x) ** 2 + np.abs(F.F_y) ** 2 + np.abs(F.F_z) ** 2


def extract_EB(F: RSVector) -> tuple[np.ndarray, np.ndarray]:
    """Physical fields: E = sqrt(2 eps0) Re F, B = sqrt(2 mu0) Im F."""
    stacked = F.as_array()
    E = np.sqrt(2.0 * EPSILON_0) * np.real(stacked)
    B = np.sqrt(2.0 * MU_0) * np.imag(stacked)
    return E, B


class PhotonBeam:
    """A (possibly superposed) photon beam with analysis-ready evaluators.

    Internally works in wavelength-scaled coordinates; ``file_scale``
    converts waist-scaled grid coordinates to internal ones.
    """

    species = "photon"

    def __init__(
        self,
        params: PhotonPotentialParams,
        superposition: SuperpositionSpec | None = None,
    ):
        self.params = params
        self.superposition = superposition or SuperpositionSpec.single(params.ell)

    @cached_property
    def potential(self) -> Potential:
        from dataclasses import replace

        return superpose(
            lambda ell: photon_chi(replace(self.params, ell=ell)), self.superposition
        )

    @property
    def ell(self) -> int:
        return abs(self.params.ell)

    @property
    def w0_hint(self) -> float:
        """Characteristic transverse scale in internal units."""
        return self.params.w0_scaled

    @property
    def file_scale(self) -> float:
        """Internal length units per waist-scaled grid unit."""
        return self.params.w0_scaled

    def _point(self, r, phi, t, z) -> SpacetimePoint:
        return SpacetimePoint(t=t, r=np.asarray(r, dtype=float), phi=np.asarray(phi, dtype=float), z=z)

    def rs_vector(self, r, phi, t=0.0, z=0.0) -> RSVector:
        return rs_vector(self._point(r, phi, t, z), self.potential)

    def intensity(self, r, phi, t=0.0, z=0.0):
        return em_intensity(self.rs_vector(r, phi, t, z))

    def transverse_intensity(self, r, phi, t=0.0, z=0.0):
        F = self.rs_vector(r, phi, t, z)
        return np.abs(F.F_x) ** 2 + np.abs(F.F_y) ** 2

    def longitudinal_intensity(self, r, phi, t=0.0, z=0.0):
        F = self.rs_vector(r, phi, t, z)
        return np.abs(F.F_z) ** 2

    def components(self, r, phi, t=0.0, z=0.0) -> dict[str, np.ndarray]:
        F = self.rs_vector(r, phi, t, z)
        return {"F_x": F.F_x, "F_y": F.F_y, "F_z": F.F_z}

    def metadata(self) -> dict:
        return {
            "species": self.species,
            "ell": self.params.ell,
            "w0": self.params.w0,
            "wavelength": self.params.wavelength,
            "w0_over_wavelength": self.params.w0_scaled,
            "sigma": self.params.sigma,
            "superposition": [[str(w), ell] for w, ell in self.superposition.terms],
        }
