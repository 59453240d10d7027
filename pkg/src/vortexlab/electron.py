"""Dirac spinor wave packets generated from the electron scalar potential.

The four-component spinor is built from the generating function f by
first-order operators (1/q-scaled coordinates, c = 1):

    psi1 = f
    psi2 = 0                                   (identically, by construction)
    psi3 = i (gamma/b) (d_t + d_z) f
    psi4 = i (gamma/b) exp(i phi) (d_r + (i/r) d_phi) f

where gamma/b is the scaled form of lambdabar * q.  The fourth component
carries the opposite-spin admixture; relativistically it grows and fills
the azimuthal fringe minima of |psi1|^2.  The observable is the
probability density psi^dagger psi.
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
    azimuthal_raising,
    evaluate_terms,
    light_cone_plus,
    scalar,
)
from .potentials import (
    ElectronPacketParams,
    Potential,
    SuperpositionSpec,
    electron_f,
    superpose,
)

__all__ = ["DiracSpinor", "dirac_spinor", "superposed_spinor", "electron_density", "ElectronBeam"]

_PSI3_BASE = DiffOp((light_cone_plus(),)).expanded()
_PSI4_BASE = DiffOp((azimuthal_raising(),)).expanded()


@dataclass(frozen=True)
class DiracSpinor:
    """Spinor components at one point (or arrays of points); psi2 is always 0."""

    psi1: complex
    psi2: complex
    psi3: complex
    psi4: complex

    def __add__(self, other: "DiracSpinor") -> "DiracSpinor":
        return DiracSpinor(
            self.psi1 + other.psi1,
            self.psi2 + other.psi2,
            self.psi3 + other.psi3,
            self.psi4 + other.psi4,
        )

    def scaled(self, w: complex) -> "DiracSpinor":
        return DiracSpinor(w * self.psi1, w * self.psi2, w * self.psi3, w * self.psi4)


def _spinor_from_jet(jet: Jet, coupling: float) -> DiracSpinor:
    pref = 1j * coupling
    return DiracSpinor(
        psi1=jet.value,
        psi2=np.zeros_like(np.asarray(jet.value)) if np.ndim(jet.value) else 0.0,
        psi3=pref * evaluate_terms(_PSI3_BASE, jet),
        psi4=pref * evaluate_terms(_PSI4_BASE, jet),
    )


def dirac_spinor(point: SpacetimePoint, f: Potential) -> DiracSpinor:
    """Spinor of a generating potential at a point; requires r > 0.

    The potential must carry `ElectronPacketParams` (as produced by
    `electron_f` or a superposition of them) so the derivative coupling
    gamma/b is known.
    """
    if np.any(np.asarray(point.r) <= 0.0):
        raise JetError("spinor components involve 1/r factors; require r > 0")
    params = f.params
    if not isinstance(params, ElectronPacketParams):
        raise TypeError("potential does not carry electron packet parameters")
    return _spinor_from_jet(f.evaluate_jet(point, 1), params.spinor_prefactor)


def superposed_spinor(
    point: SpacetimePoint,
    params_plus: ElectronPacketParams,
    params_minus: ElectronPacketParams,
    weights: tuple[complex, complex] = (1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)),
) -> DiracSpinor:
    """Weighted spinor of two packets that differ only in the sign of ell."""
    if replace(params_plus, ell=0) != replace(params_minus, ell=0):
        raise ValueError("packet parameters differ in more than the sign of ell")
    if params_plus.ell != -params_minus.ell:
        raise ValueError("topological charges must be opposite")
    w_p, w_m = weights
    spin_p = dirac_spinor(point, electron_f(params_plus))
    spin_m = dirac_spinor(point, electron_f(params_minus))
    return spin_p.scaled(w_p) + spin_m.scaled(w_m)


def electron_density(psi: DiracSpinor):
    """Probability density |psi1|^2 + |psi2|^2 + |psi3|^2 + |psi4|^2."""
    return (
        np.abs(psi.psi1) ** 2
        + np.abs(psi.psi2) ** 2
        + np.abs(psi.psi3) ** 2
        + np.abs(psi.psi4) ** 2
    )


class ElectronBeam:
    """A (possibly superposed) electron packet with analysis-ready evaluators.

    Grid coordinates are already in the natural 1/q units, so
    ``file_scale`` is 1.
    """

    species = "electron"

    def __init__(
        self,
        params: ElectronPacketParams,
        superposition: SuperpositionSpec | None = None,
    ):
        self.params = params
        self.superposition = superposition or SuperpositionSpec.single(params.ell)

    @cached_property
    def potential(self) -> Potential:
        return superpose(
            lambda ell: electron_f(replace(self.params, ell=ell)), self.superposition
        )

    @property
    def ell(self) -> int:
        return abs(self.params.ell)

    @property
    def w0_hint(self) -> float:
        """Gaussian-equivalent waist sqrt(2/b) of the near-axis envelope."""
        return np.sqrt(2.0 / self.params.b)

    @property
    def file_scale(self) -> float:
        return 1.0

    def spinor(self, r, phi, t=0.0, z=0.0) -> DiracSpinor:
        point = SpacetimePoint(
            t=t, r=np.asarray(r, dtype=float), phi=np.asarray(phi, dtype=float), z=z
        )
        if np.any(np.asarray(point.r) <= 0.0):
            raise JetError("spinor components involve 1/r factors; require r > 0")
        return _spinor_from_jet(
            self.potential.evaluate_jet(point, 1), self.params.spinor_prefactor
        )

    def intensity(self, r, phi, t=0.0, z=0.0):
        return electron_density(self.spinor(r, phi, t, z))

    def components(self, r, phi, t=0.0, z=0.0) -> dict[str, np.ndarray]:
        psi = self.spinor(r, phi, t, z)
        return {"psi1": psi.psi1, "psi2": psi.psi2, "psi3": psi.psi3, "psi4": psi.psi4}

    def component_weights(self, r, phi, t=0.0, z=0.0) -> dict[str, np.ndarray]:
        """Per-component share of the density (records the breakdown)."""
        psi = self.spinor(r, phi, t, z)
        return {
            "psi1_sq": np.abs(psi.psi1) ** 2,
            "psi2_sq": np.abs(psi.psi2) ** 2,
            "psi3_sq": np.abs(psi.psi3) ** 2,
            "psi4_sq": np.abs(psi.psi4) ** 2,
        }

    def metadata(self) -> dict:
        return {
            "species": self.species,
            "ell": self.params.ell,
            "b": self.params.b,
            "gamma": self.params.gamma,
            "q_per_m": self.params.q,
            "p_z_kg_m_s": self.params.p_z,
            "superposition": [[str(w), ell] for w, ell in self.superposition.terms],
        }
