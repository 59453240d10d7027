"""Linearized gravitational-wave curvature from a scalar potential.

The observable is the symmetric 3x3 complex tensor of time-time curvature
components, generated from the same scalar potential family as the photon
branch by fourth-order operators (wavelength-scaled coordinates, c = 1):

    phi_{l,n} = (d_t - d_z)^l (-exp(i phi)(d_r + (i/r) d_phi))^n chi,  l + n = 4

    G11 =  phi4,0 - 2 phi2,2 + phi0,4        G22 = -phi4,0 - 2 phi2,2 - phi0,4
    G12 =  i (phi4,0 - phi0,4)               G23 = -2i (phi3,1 + phi1,3)
    G13 =  2 (phi1,3 - phi3,1)               G33 =  4 phi2,2

written here as phi{l,n}.  The tensor is trace-free by construction.  The
azimuthal ladder does not commute with 1/r, so each operator is expanded
with full product-rule bookkeeping before contracting with the order-4
jet of chi.  Intensity sums the squared moduli of the six independent
components once each:

    I = (1/2) (|G11|^2 + |G12|^2 + |G13|^2 + |G22|^2 + |G23|^2 + |G33|^2)

which reproduces the reported visibilities of the reference beams.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .jets import (
    DiffOp,
    Jet,
    JetError,
    SpacetimePoint,
    Terms,
    evaluate_terms,
    light_cone_minus,
    neg_azimuthal_raising,
)
from .potentials import (
    PhotonPotentialParams,
    Potential,
    SuperpositionSpec,
    photon_chi,
    superpose,
)

__all__ = ["CurvatureTensor", "phi_abcd", "curvature", "gw_intensity", "GravitationalWaveBeam"]

OPERATOR_ORDER = 4


def _phi_terms(l: int, n: int) -> Terms:
    atoms = tuple([light_cone_minus()] * l + [neg_azimuthal_raising()] * n)
    return DiffOp(atoms).expanded()


# the five (l, n) operator expansions, shared by every potential
_PHI_TERMS: dict[tuple[int, int], Terms] = {
    (l, 4 - l): _phi_terms(l, 4 - l) for l in range(5)
}


@dataclass(frozen=True)
class CurvatureTensor:
    """Six independent components of the symmetric curvature tensor."""

    G11: complex
    G12: complex
    G13: complex
    G22: complex
    G23: complex
    G33: complex

    @property
    def trace(self) -> complex:
        return self.G11 + self.G22 + self.G33

    def components(self) -> dict[str, complex]:
        return {
            "G11": self.G11,
            "G12": self.G12,
            "G13": self.G13,
            "G22": self.G22,
            "G23": self.G23,
            "G33": self.G33,
        }


def phi_abcd(point: SpacetimePoint, chi: Potential, l: int, n: int) -> complex:
    """Spinor derivative phi_{l,n} of the potential; requires l + n = 4, r > 0."""
    if l < 0 or n < 0 or l + n != OPERATOR_ORDER:
        raise JetError(f"need l + n = {OPERATOR_ORDER} with l, n >= 0; got l={l}, n={n}")
    if np.any(np.asarray(point.r) <= 0.0):
        raise JetError("azimuthal ladder operators require r > 0")
    jet = chi.evaluate_jet(point, 4)
    return evaluate_terms(_PHI_TERMS[(l, n)], jet)


def curvature_from_jet(jet: Jet) -> CurvatureTensor:
    """Contract a precomputed order-4 jet into the six tensor components."""
    p40 = evaluate_terms(_PHI_TERMS[(4, 0)], jet)
    p31 = evaluate_terms(_PHI_TERMS[(3, 1)], jet)
    p22 = evaluate_terms(_PHI_TERMS[(2, 2)], jet)
    p13 = evaluate_terms(_PHI_TERMS[(1, 3)], jet)
    p04 = evaluate_terms(_PHI_TERMS[(0, 4)], jet)
    return CurvatureTensor(
        G11=p40 - 2.0 * p22 + p04,
        G12=1j * p40 - 1j * p04,
        G13=2.0 * p13 - 2.0 * p31,
        G22=-p40 - 2.0 * p22 - p04,
        G23=-2j * p31 - 2j * p13,
        G33=4.0 * p22,
    )


def curvature(point: SpacetimePoint, chi: Potential) -> CurvatureTensor:
    """Curvature tensor of a potential at a point; requires r > 0."""
    if np.any(np.asarray(point.r) <= 0.0):
        raise JetError("azimuthal ladder operators require r > 0")
    return curvature_from_jet(chi.evaluate_jet(point, 4))


def gw_intensity(G: CurvatureTensor):
    """Intensity from the six independent components, each counted once."""
    return 0.5 * (
        np.abs(G.G11) ** 2
        + np.abs(G.G12) ** 2
        + np.abs(G.G13) ** 2
        + np.abs(G.G22) ** 2
        + np.abs(G.G23) ** 2
        + np.abs(G.G33) ** 2
    )


class GravitationalWaveBeam:
    """A (possibly superposed) gravitational-wave beam.

    Reuses the photon potential family; all evaluation happens in
    wavelength-scaled coordinates to keep fourth-derivative magnitudes
    near unity.
    """

    species = "gw"

    def __init__(
        self,
        params: PhotonPotentialParams,
        superposition: SuperpositionSpec | None = None,
    ):
        self.params = params
        self.superposition = superposition or SuperpositionSpec.single(params.ell)

    @cached_property
    def potential(self) -> Potential:
        return superpose(
            lambda ell: photon_chi(replace(self.params, ell=ell)), self.superposition
        )

    @property
    def ell(self) -> int:
        return abs(self.params.ell)

    @property
    def w0_hint(self) -> float:
        return self.params.w0_scaled

    @property
    def file_scale(self) -> float:
        return self.params.w0_scaled

    def _jet(self, r, phi, t, z) -> Jet:
        point = SpacetimePoint(
            t=t, r=np.asarray(r, dtype=float), phi=np.asarray(phi, dtype=float), z=z
        )
        if np.any(np.asarray(point.r) <= 0.0):
            raise JetError("azimuthal ladder operators require r > 0")
        return self.potential.evaluate_jet(point, 4)

    def curvature(self, r, phi, t=0.0, z=0.0) -> CurvatureTensor:
        return curvature_from_jet(self._jet(r, phi, t, z))

    def intensity(self, r, phi, t=0.0, z=0.0):
        return gw_intensity(self.curvature(r, phi, t, z))

    def components(self, r, phi, t=0.0, z=0.0) -> dict[str, np.ndarray]:
        return self.curvature(r, phi, t, z).components()

    def metadata(self) -> dict:
        return {
            "species": self.species,
            "ell": self.params.ell,
            "w0_over_wavelength": self.params.w0_scaled,
            "wavelength": self.params.wavelength,
            "sigma": self.params.sigma,
            "superposition": [[str(w), ell] for w, ell in self.superposition.terms],
        }
