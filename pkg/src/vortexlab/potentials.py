"""Scalar generating potentials and their exact derivative tables.

Three analytic families are provided:

* ``lg_paraxial`` -- the paraxial Laguerre-Gauss mode (radial index fixed
  to 0), evaluated directly; serves as the reference/limit model.
* ``photon_chi`` -- the exact wave-equation potential used for the photon
  and gravitational-wave branches.
* ``electron_f`` -- the finite-energy generating function for the Dirac
  electron packet.

Unit conventions (``c = 1`` everywhere):

* photon / GW: lengths in units of the wavelength ``lambda = c / Omega``
  (the plain-frequency convention, not ``2 pi c / Omega``), time as
  ``c t / lambda``.  In these coordinates the complex waist parameter is
  ``a = w0^2 + i sigma (t + z)`` and the carrier phase is
  ``exp(-i sigma ((t - z) - ell phi))``.
* electron: lengths in units of ``1/q`` with ``q = gamma / (b lambdabar)``,
  time as ``q c t``.  The envelope ``exp(-b h)/h`` is expressed relative to
  its on-axis value ``exp(-b)`` (an overall constant) so that widths as
  large as ``b ~ 1500`` stay inside double-precision range; the exact
  rewrite ``h - 1 = (r^2 + 2 i t - t^2)/(h + 1)`` keeps the exponent
  well-conditioned near the axis.

Derivatives are obtained by symbolic differentiation of the closed-form
expression and compiled once per potential into a vectorized table; no
numerical differentiation enters the production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
import sympy as sp

from .jets import (
    MAX_ORDER,
    Jet,
    JetError,
    MultiIndex,
    SpacetimePoint,
    multi_indices_up_to,
)

__all__ = [
    "T_SYM",
    "R_SYM",
    "PHI_SYM",
    "Z_SYM",
    "C_LIGHT",
    "LAMBDA_BAR_COMPTON",
    "M_ELECTRON",
    "HBAR",
    "Potential",
    "BranchCutError",
    "ParaxialLGParams",
    "PhotonPotentialParams",
    "ElectronPacketParams",
    "SuperpositionSpec",
    "ParaxialScalarBeam",
    "lg_paraxial",
    "photon_chi",
    "electron_f",
    "superpose",
    "superpose_potentials",
]

T_SYM, R_SYM, PHI_SYM, Z_SYM = sp.symbols("t r phi z", real=True)
_SYMS = (T_SYM, R_SYM, PHI_SYM, Z_SYM)

C_LIGHT = 299_792_458.0            # m/s
LAMBDA_BAR_COMPTON = 3.86e-13      # reduced Compton wavelength of the electron, m
M_ELECTRON = 9.1093837015e-31      # kg
HBAR = 1.054571817e-34             # J s

SUPPORTED_JET_ORDERS = (1, 2, 4)


class BranchCutError(ValueError):
    """Square-root argument crossed the negative real axis (principal branch)."""


def _as_complex_array(value, like) -> np.ndarray | complex:
    """Normalize a lambdified result to complex, broadcast to the input shape."""
    shape = np.broadcast(*[np.asarray(v) for v in like]).shape
    out = np.asarray(value, dtype=complex)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy() if shape else complex(out)
    elif shape == ():
        out = complex(out)
    return out


class _CompiledTable:
    """All derivative entries up to one order, compiled as a single function."""

    def __init__(self, expr: sp.Expr, order: int):
        self.order = order
        self.indices = multi_indices_up_to(order)
        cache: dict[MultiIndex, sp.Expr] = {MultiIndex(0, 0, 0, 0): expr}

        def derive(alpha: MultiIndex) -> sp.Expr:
            if alpha in cache:
                return cache[alpha]
            for axis in range(4):
                if alpha[axis] > 0:
                    lower = alpha.lowered(axis)
                    e = sp.diff(derive(lower), _SYMS[axis])
                    cache[alpha] = e
                    return e
            raise AssertionError("unreachable")

        exprs = [derive(a) for a in self.indices]
        self._fn = sp.lambdify(_SYMS, exprs, modules="numpy", cse=True)
        self.position = {a: i for i, a in enumerate(self.indices)}

    def evaluate(self, point: SpacetimePoint) -> dict[MultiIndex, complex]:
        vals = self._fn(point.t, point.r, point.phi, point.z)
        like = (point.t, point.r, point.phi, point.z)
        return {a: _as_complex_array(vals[i], like) for i, a in enumerate(self.indices)}


class Potential:
    """A closed-form scalar potential, differentiable exactly to 4th order.

    ``expr`` is a sympy expression in the canonical coordinate symbols
    (`T_SYM`, `R_SYM`, `PHI_SYM`, `Z_SYM`) with all physical parameters
    already substituted as numbers.  Evaluation accepts scalars or numpy
    arrays in the point fields and broadcasts.
    """

    def __init__(
        self,
        expr: sp.Expr,
        label: str = "potential",
        params=None,
        domain_check: Optional[Callable[[SpacetimePoint], None]] = None,
    ):
        self.expr = sp.sympify(expr)
        self.label = label
        self.params = params
        self.domain_check = domain_check
        self._tables: dict[int, _CompiledTable] = {}
        self._entry_exprs: dict[MultiIndex, sp.Expr] = {MultiIndex(0, 0, 0, 0): self.expr}
        self._entry_fns: dict[MultiIndex, Callable] = {}

    def __repr__(self) -> str:
        return f"Potential({self.label})"

    # -- symbolic layer ----------------------------------------------------

    def derivative_expr(self, alpha: MultiIndex) -> sp.Expr:
        alpha = MultiIndex(*alpha)
        if alpha.order > MAX_ORDER:
            raise JetError(f"derivative order {alpha.order} exceeds {MAX_ORDER}")
        if alpha not in self._entry_exprs:
            for axis in range(4):
                if alpha[axis] > 0:
                    lower = self.derivative_expr(alpha.lowered(axis))
                    self._entry_exprs[alpha] = sp.diff(lower, _SYMS[axis])
                    break
        return self._entry_exprs[alpha]

    def _entry_fn(self, alpha: MultiIndex) -> Callable:
        if alpha not in self._entry_fns:
            self._entry_fns[alpha] = sp.lambdify(
                _SYMS, self.derivative_expr(alpha), modules="numpy", cse=True
            )
        return self._entry_fns[alpha]

    # -- numeric layer -----------------------------------------------------

    def value(self, point: SpacetimePoint) -> complex:
        if self.domain_check is not None:
            self.domain_check(point)
        raw = self._entry_fn(MultiIndex(0, 0, 0, 0))(point.t, point.r, point.phi, point.z)
        return _as_complex_array(raw, tuple(point))

    def derivative(self, alpha: MultiIndex, point: SpacetimePoint) -> complex:
        """Single mixed partial at a point (prefer `evaluate_jet` for many)."""
        if self.domain_check is not None:
            self.domain_check(point)
        alpha = MultiIndex(*alpha)
        raw = self._entry_fn(alpha)(point.t, point.r, point.phi, point.z)
        return _as_complex_array(raw, tuple(point))

    def table(self, order: int) -> _CompiledTable:
        if order not in self._tables:
            self._tables[order] = _CompiledTable(self.expr, order)
        return self._tables[order]

    def evaluate_jet(self, point: SpacetimePoint, order: int) -> Jet:
        """All mixed partials up to `order` at the point, in closed form."""
        if order not in SUPPORTED_JET_ORDERS:
            raise JetError(
                f"unsupported jet order {order}; supported orders are {SUPPORTED_JET_ORDERS}"
            )
        if self.domain_check is not None:
            self.domain_check(point)
        entries = self.table(order).evaluate(point)
        return Jet(point=point, entries=entries)


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParaxialLGParams:
    """Paraxial Laguerre-Gauss mode parameters (radial index p fixed to 0).

    ``w0`` and ``wavelength`` share one length unit of the caller's choice.
    """

    ell: int
    w0: float
    wavelength: float = 1.0
    p: int = 0

    def __post_init__(self) -> None:
        if self.w0 <= 0 or self.wavelength <= 0:
            raise ValueError("w0 and wavelength must be positive")
        if self.p != 0:
            raise ValueError("only the p = 0 radial mode is supported")

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.w0**2 / self.wavelength

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def waist_at(self, z) -> np.ndarray:
        return self.w0 * np.sqrt(1.0 + (np.asarray(z) / self.rayleigh_range) ** 2)


@dataclass(frozen=True)
class PhotonPotentialParams:
    """Photon / gravitational-wave potential parameters.

    ``w0`` is the focal waist in the same unit as ``wavelength``; the mean
    frequency follows the plain convention ``Omega = c / wavelength``.
    ``sigma`` is the circular polarization handedness and ``amplitude`` the
    free overall normalization (visibilities are scale-invariant).
    """

    ell: int
    w0: float
    wavelength: float = 1.0
    sigma: int = 1
    amplitude: complex = 1.0

    def __post_init__(self) -> None:
        if self.w0 <= 0 or self.wavelength <= 0:
            raise ValueError("w0 and wavelength must be positive")
        if self.sigma not in (+1, -1):
            raise ValueError("sigma must be +1 or -1")

    @property
    def w0_scaled(self) -> float:
        """Waist in wavelength units (the internal coordinate unit)."""
        return self.w0 / self.wavelength

    @property
    def omega(self) -> float:
        """Mean frequency c / wavelength (physical units of the inputs)."""
        return C_LIGHT / self.wavelength

    def waist_parameter(self, t: float = 0.0, z: float = 0.0) -> complex:
        """a(t, z) = w0^2 + i sigma (t + z) in scaled coordinates."""
        return self.w0_scaled**2 + 1j * self.sigma * (t + z)


@dataclass(frozen=True)
class ElectronPacketParams:
    """Dirac electron packet parameters.

    ``b`` is the dimensionless packet width and ``gamma`` the Lorentz
    factor; the longitudinal momentum follows from
    ``gamma = sqrt(1 + (p_z / m c)^2)``.
    """

    ell: int
    b: float
    gamma: float = 1.0
    amplitude: complex = 1.0

    def __post_init__(self) -> None:
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.gamma < 1.0:
            raise ValueError("gamma must be >= 1")

    @property
    def q(self) -> float:
        """Inverse length scale gamma / (b * lambdabar), 1/m."""
        return self.gamma / (self.b * LAMBDA_BAR_COMPTON)

    @property
    def p_z(self) -> float:
        """Longitudinal momentum, kg m/s."""
        return math.sqrt(self.gamma**2 - 1.0) * M_ELECTRON * C_LIGHT

    @property
    def p_z_scaled(self) -> float:
        """p_z / (hbar q) -- the plane-wave number in 1/q length units."""
        return math.sqrt(self.gamma**2 - 1.0) * self.b / self.gamma

    @property
    def spinor_prefactor(self) -> float:
        """lambdabar * q = gamma / b, the scaled derivative coupling."""
        return self.gamma / self.b


@dataclass(frozen=True)
class SuperpositionSpec:
    """Weighted combination of topological charges for one potential family."""

    terms: tuple[tuple[complex, int], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("superposition needs at least one term")

    @classmethod
    def single(cls, ell: int, weight: complex = 1.0) -> "SuperpositionSpec":
        return cls(terms=((weight, ell),))

    @classmethod
    def cosine(cls, ell: int) -> "SuperpositionSpec":
        """Equal-weight +-ell pair; azimuthal profile ~ cos(ell phi)."""
        w = 1.0 / math.sqrt(2.0)
        return cls(terms=((w, +ell), (w, -ell)))

    @classmethod
    def sine(cls, ell: int) -> "SuperpositionSpec":
        """+-ell pair with a relative pi phase; azimuthal profile ~ sin(ell phi)."""
        w = 1.0 / math.sqrt(2.0)
        return cls(terms=((-1j * w, +ell), (+1j * w, -ell)))

    @property
    def charges(self) -> tuple[int, ...]:
        return tuple(ell for _, ell in self.terms)


# ---------------------------------------------------------------------------
# Paraxial Laguerre-Gauss mode (direct evaluation, p = 0)
# ---------------------------------------------------------------------------

def lg_paraxial(point: SpacetimePoint, params: ParaxialLGParams):
    """Paraxial LG amplitude with Gouy and curvature phases included.

    At z = 0 this reduces to the real envelope times exp(-i ell phi).
    Accepts scalar or array point fields.
    """
    r = np.asarray(point.r, dtype=float)
    phi = np.asarray(point.phi, dtype=float)
    z = np.asarray(point.z, dtype=float)
    la = abs(params.ell)
    z_r = params.rayleigh_range
    w = params.w0 * np.sqrt(1.0 + (z / z_r) ** 2)
    inv_radius = z / (z**2 + z_r**2)          # 1/R(z), finite at z = 0
    gouy = (2 * params.p + la + 1) * np.arctan(z / z_r)
    norm = math.sqrt(2.0 / (math.pi * math.factorial(la)))
    envelope = (norm / w) * (np.sqrt(2.0) * r / w) ** la * np.exp(-(r**2) / w**2)
    phase = -(params.wavenumber * r**2 * inv_radius / 2.0 + params.ell * phi - gouy)
    return envelope * np.exp(1j * phase)


# ---------------------------------------------------------------------------
# Photon / gravitational-wave potential
# ---------------------------------------------------------------------------

def photon_chi(params: PhotonPotentialParams) -> Potential:
    """Exact vortex potential in wavelength-scaled coordinates.

    ``chi = N exp(-i sigma ((t - z) - ell phi)) r^|ell| a^-(|ell|+1) exp(-r^2/a)``
    with ``a = w0^2 + i sigma (t + z)``; satisfies the scalar wave equation
    identically for every ell, sigma and waist.
    """
    la = abs(params.ell)
    w0 = params.w0_scaled
    sigma = params.sigma
    a = w0**2 + sp.I * sigma * (T_SYM + Z_SYM)
    expr = (
        params.amplitude
        * sp.exp(-sp.I * sigma * ((T_SYM - Z_SYM) - params.ell * PHI_SYM))
        * R_SYM**la
        * a ** (-(la + 1))
        * sp.exp(-(R_SYM**2) / a)
    )
    return Potential(expr, label=f"photon_chi(ell={params.ell}, w0={w0}l)", params=params)


# ---------------------------------------------------------------------------
# Electron generating function
# ---------------------------------------------------------------------------

def _electron_branch_check(point: SpacetimePoint) -> None:
    """Flag evaluation on the principal-branch cut of h(r, t).

    The cut is reached only where ``(1 + i t)^2 + r^2`` lands on the
    negative real axis; with real coordinates that requires t = 0, where
    the argument is 1 + r^2 > 0, so the flag cannot fire on the focal
    slice.  Kept as a guard for future complex-path evaluation.
    """
    t = np.asarray(point.t, dtype=float)
    r = np.asarray(point.r, dtype=float)
    h_sq_re = 1.0 - t**2 + r**2
    h_sq_im = 2.0 * t
    on_cut = (np.abs(h_sq_im) < 1e-300) & (h_sq_re < 0.0)
    if np.any(on_cut):
        idx = np.argwhere(np.atleast_1d(on_cut))[0]
        raise BranchCutError(
            f"square-root argument crosses the negative real axis at sample {tuple(idx)}"
        )


def electron_f(params: ElectronPacketParams) -> Potential:
    """Finite-energy electron packet potential in 1/q-scaled coordinates.

    ``f = N exp(i p_z z) exp(i ell phi) exp(-b (h - 1)) / h *
    (r / (h + 1 + i t))^|ell|`` with ``h = sqrt((1 + i t)^2 + r^2)``
    (principal branch).  The envelope is referenced to its on-axis value;
    see the module docstring.
    """
    la = abs(params.ell)
    h = sp.sqrt((1 + sp.I * T_SYM) ** 2 + R_SYM**2)
    h_minus_1 = (R_SYM**2 + 2 * sp.I * T_SYM - T_SYM**2) / (h + 1)
    expr = (
        params.amplitude
        * sp.exp(sp.I * params.p_z_scaled * Z_SYM)
        * sp.exp(sp.I * params.ell * PHI_SYM)
        * sp.exp(-params.b * h_minus_1)
        / h
        * (R_SYM / (h + 1 + sp.I * T_SYM)) ** la
    )
    return Potential(
        expr,
        label=f"electron_f(ell={params.ell}, b={params.b}, gamma={params.gamma})",
        params=params,
        domain_check=_electron_branch_check,
    )


# ---------------------------------------------------------------------------
# Superpositions
# ---------------------------------------------------------------------------

def _params_without_ell(params):
    return replace(params, ell=0)


def superpose_potentials(components: Sequence[tuple[complex, Potential]]) -> Potential:
    """Pointwise weighted sum of potentials; jets distribute linearly."""
    if not components:
        raise ValueError("superposition needs at least one component")
    tagged = [p.params for _, p in components if p.params is not None]
    if len(tagged) == len(components) and len(components) > 1:
        base = _params_without_ell(tagged[0])
        for other in tagged[1:]:
            if _params_without_ell(other) != base:
                raise ValueError(
                    "superposition components differ in parameters other than ell: "
                    f"{base} vs {_params_without_ell(other)}"
                )
    expr = sp.Add(*[sp.sympify(w) * p.expr for w, p in components])
    label = " + ".join(f"({w})*{p.label}" for w, p in components)
    checks = [p.domain_check for _, p in components if p.domain_check is not None]

    def combined_check(point: SpacetimePoint) -> None:
        for check in checks:
            check(point)

    return Potential(
        expr,
        label=label,
        params=components[0][1].params,
        domain_check=combined_check if checks else None,
    )


def superpose(
    family: Callable[[int], Potential], spec: SuperpositionSpec
) -> Potential:
    """Superpose one potential family over the charges of a `SuperpositionSpec`.

    ``family`` maps a topological charge to a potential with all other
    parameters fixed, which guarantees the non-ell parameters agree.
    """
    return superpose_potentials([(w, family(ell)) for w, ell in spec.terms])


class ParaxialScalarBeam:
    """Superposed paraxial LG modes as a directly evaluated reference beam."""

    species = "paraxial-scalar"

    def __init__(
        self,
        params: ParaxialLGParams,
        superposition: SuperpositionSpec | None = None,
    ):
        self.params = params
        self.superposition = superposition or SuperpositionSpec.single(params.ell)

    @property
    def ell(self) -> int:
        return abs(self.params.ell)

    @property
    def w0_hint(self) -> float:
        return self.params.w0

    @property
    def file_scale(self) -> float:
        return self.params.w0

    def amplitude(self, r, phi, t=0.0, z=0.0):
        point = SpacetimePoint(t=t, r=r, phi=phi, z=z)
        total = 0.0
        for w, ell in self.superposition.terms:
            total = total + w * lg_paraxial(point, replace(self.params, ell=ell))
        return total

    def intensity(self, r, phi, t=0.0, z=0.0):
        return np.abs(self.amplitude(r, phi, t, z)) ** 2

    def components(self, r, phi, t=0.0, z=0.0) -> dict:
        return {"amplitude": self.amplitude(r, phi, t, z)}

    def metadata(self) -> dict:
        return {
            "species": self.species,
            "ell": self.params.ell,
            "w0": self.params.w0,
            "wavelength": self.params.wavelength,
            "superposition": [[str(w), ell] for w, ell in self.superposition.terms],
        }
