"""Derivative bookkeeping for scalar beam potentials.

Coordinates are cylindrical ``(t, r, phi, z)`` in the natural units of the
potential being differentiated (``c = 1``; see :mod:`vortexlab.potentials`
for the per-species scaling).  Two mechanisms live here:

* **Jets** -- the value of a potential together with all mixed partial
  derivatives up to a fixed order (at most 4) at one point, produced in
  closed form by the potential object.

* **Operator terms** -- first-order differential operators used to build
  vector / spinor / tensor fields out of a scalar potential.  A composed
  operator is expanded symbolically into a sum of terms

      coeff * exp(i*m*phi) * r**(-k) * d^alpha

  by repeated product-rule application; the expansion is exact and the
  final evaluation is a linear combination of jet entries.  Because the
  azimuthal ladder operators carry 1/r factors, atoms do not commute with
  the radial coordinate; the expansion re-derives every product-rule term
  each time an atom is applied.

A central finite-difference oracle (`finite_difference_partial`) is
provided for verification only; it never feeds production field values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

__all__ = [
    "MAX_ORDER",
    "MultiIndex",
    "SpacetimePoint",
    "Jet",
    "JetError",
    "OperatorTerm",
    "DiffOp",
    "light_cone_plus",
    "light_cone_minus",
    "azimuthal_raising",
    "neg_azimuthal_raising",
    "dx_dz",
    "dy_dz",
    "i_dx_dt",
    "i_dy_dt",
    "transverse_laplacian",
    "scalar",
    "apply_operator",
    "evaluate_terms",
    "multi_indices_up_to",
    "finite_difference_partial",
]

MAX_ORDER = 4

ArrayOrFloat = Union[float, np.ndarray]


class JetError(ValueError):
    """Raised for unsupported orders, depth overflow or r = 0 misuse."""


class MultiIndex(NamedTuple):
    """Orders of differentiation per coordinate (t, r, phi, z)."""

    n_t: int = 0
    n_r: int = 0
    n_phi: int = 0
    n_z: int = 0

    @property
    def order(self) -> int:
        return self.n_t + self.n_r + self.n_phi + self.n_z

    def raised(self, axis: int) -> "MultiIndex":
        """Increment the order along one coordinate axis (0=t,1=r,2=phi,3=z)."""
        new = list(self)
        new[axis] += 1
        out = MultiIndex(*new)
        if out.order > MAX_ORDER:
            raise JetError(
                f"derivative order {out.order} exceeds the supported maximum {MAX_ORDER}"
            )
        return out

    def lowered(self, axis: int) -> "MultiIndex":
        new = list(self)
        if new[axis] == 0:
            raise ValueError(f"cannot lower axis {axis} of {self}")
        new[axis] -= 1
        return MultiIndex(*new)


ZERO_INDEX = MultiIndex(0, 0, 0, 0)


def multi_indices_up_to(order: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with total order <= `order`, in a fixed canonical order."""
    if not 0 <= order <= MAX_ORDER:
        raise JetError(f"unsupported jet order {order}; must be between 0 and {MAX_ORDER}")
    out = []
    for total in range(order + 1):
        for nt in range(total + 1):
            for nr in range(total - nt + 1):
                for nphi in range(total - nt - nr + 1):
                    out.append(MultiIndex(nt, nr, nphi, total - nt - nr - nphi))
    return tuple(out)


class SpacetimePoint(NamedTuple):
    """A point (or broadcastable arrays of points) in (t, r, phi, z)."""

    t: ArrayOrFloat = 0.0
    r: ArrayOrFloat = 0.0
    phi: ArrayOrFloat = 0.0
    z: ArrayOrFloat = 0.0

    def replace_axis(self, axis: int, value: ArrayOrFloat) -> "SpacetimePoint":
        vals = list(self)
        vals[axis] = value
        return SpacetimePoint(*vals)

    def wrapped(self) -> "SpacetimePoint":
        """Same location with phi reduced modulo 2*pi (for equality tests)."""
        return SpacetimePoint(self.t, self.r, np.mod(self.phi, 2.0 * np.pi), self.z)


@dataclass(frozen=True)
class Jet:
    """Value and mixed partials of a scalar potential at one point.

    ``entries`` maps a `MultiIndex` to the complex derivative value; the
    zero index holds the potential value itself.  Entries may be numpy
    arrays when the point fields are arrays.
    """

    point: SpacetimePoint
    entries: Mapping[MultiIndex, complex]

    @property
    def value(self) -> complex:
        return self.entries[ZERO_INDEX]

    def entry(self, index: MultiIndex) -> complex:
        try:
            return self.entries[MultiIndex(*index)]
        except KeyError:
            raise KeyError(
                f"jet holds no entry for {tuple(index)}; available up to order "
                f"{max(a.order for a in self.entries)}"
            ) from None

    @property
    def order(self) -> int:
        return max(a.order for a in self.entries)


# ---------------------------------------------------------------------------
# Operator term algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorTerm:
    """One expanded term ``coeff * exp(i*phase*phi) * r**(-inv_r) * d^alpha``."""

    coeff: complex
    phase: int
    inv_r: int
    alpha: MultiIndex

    def coefficient_at(self, r: ArrayOrFloat, phi: ArrayOrFloat) -> complex:
        c = self.coeff
        if self.phase:
            c = c * np.exp(1j * self.phase * np.asarray(phi))
        if self.inv_r:
            c = c / np.asarray(r, dtype=float) ** self.inv_r
        return c


Terms = tuple[OperatorTerm, ...]

_IDENTITY: Terms = (OperatorTerm(1.0 + 0.0j, 0, 0, ZERO_INDEX),)

_AXIS_T, _AXIS_R, _AXIS_PHI, _AXIS_Z = 0, 1, 2, 3


def _collect(terms: Iterable[OperatorTerm]) -> Terms:
    acc: dict[tuple[int, int, MultiIndex], complex] = {}
    for tm in terms:
        key = (tm.phase, tm.inv_r, tm.alpha)
        acc[key] = acc.get(key, 0.0) + tm.coeff
    return tuple(
        OperatorTerm(c, m, k, a) for (m, k, a), c in acc.items() if c != 0.0
    )


def _d_axis(terms: Terms, axis: int) -> Terms:
    """Apply a bare partial derivative, product-ruling through coefficients."""
    out: list[OperatorTerm] = []
    for tm in terms:
        out.append(OperatorTerm(tm.coeff, tm.phase, tm.inv_r, tm.alpha.raised(axis)))
        if axis == _AXIS_R and tm.inv_r:
            # d/dr of r**(-k) contributes -k * r**(-k-1)
            out.append(OperatorTerm(-tm.inv_r * tm.coeff, tm.phase, tm.inv_r + 1, tm.alpha))
        elif axis == _AXIS_PHI and tm.phase:
            # d/dphi of exp(i*m*phi) contributes i*m
            out.append(OperatorTerm(1j * tm.phase * tm.coeff, tm.phase, tm.inv_r, tm.alpha))
    return _collect(out)


def _mul_inv_r(terms: Terms) -> Terms:
    return tuple(OperatorTerm(tm.coeff, tm.phase, tm.inv_r + 1, tm.alpha) for tm in terms)


def _mul_phase(terms: Terms, m: int) -> Terms:
    return tuple(OperatorTerm(tm.coeff, tm.phase + m, tm.inv_r, tm.alpha) for tm in terms)


def _mul_scalar(terms: Terms, c: complex) -> Terms:
    return tuple(OperatorTerm(c * tm.coeff, tm.phase, tm.inv_r, tm.alpha) for tm in terms)


def _ladder(terms: Terms, sign: int) -> Terms:
    """exp(+-i*phi) * (d_r +- (i/r) d_phi) -- the azimuthal ladder operators."""
    radial = _d_axis(terms, _AXIS_R)
    angular = _mul_inv_r(_mul_scalar(_d_axis(terms, _AXIS_PHI), sign * 1j))
    return _mul_phase(_collect(radial + angular), sign)


def _d_x(terms: Terms) -> Terms:
    # d_x = cos(phi) d_r - (sin(phi)/r) d_phi = (ladder_+ + ladder_-)/2
    return _collect(_mul_scalar(_ladder(terms, +1) + _ladder(terms, -1), 0.5))


def _d_y(terms: Terms) -> Terms:
    # d_y = sin(phi) d_r + (cos(phi)/r) d_phi = (ladder_+ - ladder_-)/(2i)
    plus = _ladder(terms, +1)
    minus = _mul_scalar(_ladder(terms, -1), -1.0)
    return _collect(_mul_scalar(plus + minus, -0.5j))


@dataclass(frozen=True)
class Atom:
    """A first-order operator atom: a named transformation on term sums."""

    name: str
    apply: Callable[[Terms], Terms]

    def __repr__(self) -> str:
        return f"Atom({self.name})"


def light_cone_plus() -> Atom:
    """(1/c) d_t + d_z  (c = 1 in scaled coordinates)."""
    return Atom("dt/c + dz", lambda t: _collect(_d_axis(t, _AXIS_T) + _d_axis(t, _AXIS_Z)))


def light_cone_minus() -> Atom:
    """(1/c) d_t - d_z."""
    return Atom(
        "dt/c - dz",
        lambda t: _collect(_d_axis(t, _AXIS_T) + _mul_scalar(_d_axis(t, _AXIS_Z), -1.0)),
    )


def azimuthal_raising() -> Atom:
    """exp(i*phi) (d_r + (i/r) d_phi)."""
    return Atom("exp(i phi)(dr + (i/r) dphi)", lambda t: _ladder(t, +1))


def neg_azimuthal_raising() -> Atom:
    """-exp(i*phi) (d_r + (i/r) d_phi)."""
    return Atom(
        "-exp(i phi)(dr + (i/r) dphi)", lambda t: _mul_scalar(_ladder(t, +1), -1.0)
    )


def dx_dz() -> Atom:
    return Atom("dx dz", lambda t: _d_x(_d_axis(t, _AXIS_Z)))


def dy_dz() -> Atom:
    return Atom("dy dz", lambda t: _d_y(_d_axis(t, _AXIS_Z)))


def i_dx_dt() -> Atom:
    """(i/c) d_x d_t."""
    return Atom("(i/c) dx dt", lambda t: _mul_scalar(_d_x(_d_axis(t, _AXIS_T)), 1j))


def i_dy_dt() -> Atom:
    """(i/c) d_y d_t."""
    return Atom("(i/c) dy dt", lambda t: _mul_scalar(_d_y(_d_axis(t, _AXIS_T)), 1j))


def transverse_laplacian() -> Atom:
    """d_x^2 + d_y^2 = d_r^2 + (1/r) d_r + (1/r^2) d_phi^2."""

    def apply(terms: Terms) -> Terms:
        rr = _d_axis(_d_axis(terms, _AXIS_R), _AXIS_R)
        r1 = _mul_inv_r(_d_axis(terms, _AXIS_R))
        pp = _mul_inv_r(_mul_inv_r(_d_axis(_d_axis(terms, _AXIS_PHI), _AXIS_PHI)))
        return _collect(rr + r1 + pp)

    return Atom("dx^2 + dy^2", apply)


def scalar(c: complex) -> Atom:
    return Atom(f"scale({c})", lambda t: _mul_scalar(t, c))


MAX_DEPTH = 4


@dataclass(frozen=True)
class DiffOp:
    """A composition of operator atoms, applied right-to-left.

    ``DiffOp((A, B))`` acts as ``A(B(chi))``: the rightmost atom touches the
    potential first, and every subsequent atom product-rules through the
    coefficients produced so far.
    """

    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if len(self.atoms) > MAX_DEPTH:
            raise JetError(
                f"operator composition depth {len(self.atoms)} exceeds {MAX_DEPTH}"
            )

    def expanded(self) -> Terms:
        terms = _IDENTITY
        for atom in reversed(self.atoms):
            terms = atom.apply(terms)
            if any(tm.alpha.order > MAX_ORDER for tm in terms):
                raise JetError("operator expansion exceeds maximum derivative order")
        return terms

    @property
    def max_order(self) -> int:
        return max((tm.alpha.order for tm in self.expanded()), default=0)

    def needs_positive_r(self) -> bool:
        return any(tm.inv_r > 0 for tm in self.expanded())


def evaluate_terms(terms: Terms, jet: Jet) -> complex:
    """Contract expanded operator terms against a jet: sum coeff(r,phi) * entry."""
    r, phi = jet.point.r, jet.point.phi
    if any(tm.inv_r > 0 for tm in terms) and np.any(np.asarray(r) <= 0.0):
        raise JetError("operator contains a 1/r factor but the point has r <= 0")
    total: complex = 0.0
    for tm in terms:
        total = total + tm.coefficient_at(r, phi) * jet.entry(tm.alpha)
    return total


def apply_operator(op: DiffOp, potential, point: SpacetimePoint) -> complex:
    """Evaluate a composed operator acting on a potential at a point.

    The potential must provide ``evaluate_jet(point, order)``; the operator
    is expanded once and contracted against the jet entries.
    """
    terms = op.expanded()
    order = max((tm.alpha.order for tm in terms), default=0)
    jet = potential.evaluate_jet(point, max(order, 1))
    return evaluate_terms(terms, jet)


# ---------------------------------------------------------------------------
# Finite-difference oracle (verification only)
# ---------------------------------------------------------------------------

def _stencil_first(fn: Callable[[float], complex], x: float, h: float) -> complex:
    """4th-order central first derivative (5-point)."""
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def default_fd_steps(
    spatial_scale: float, temporal_scale: float | None = None
) -> tuple[float, float, float, float]:
    """Conventional oracle steps: scale/1e3 spatially, matching step in t."""
    ts = temporal_scale if temporal_scale is not None else spatial_scale
    return (ts / 1.0e3, spatial_scale / 1.0e3, 1.0 / 1.0e3, spatial_scale / 1.0e3)


def finite_difference_partial(
    field: Callable[[SpacetimePoint], complex],
    point: SpacetimePoint,
    index: MultiIndex,
    steps: Sequence[float],
    richardson: bool = True,
) -> complex:
    """Central-difference estimate of a mixed partial derivative.

    Differentiation is nested coordinate by coordinate with 4th-order
    5-point stencils; with ``richardson=True`` the estimate is formed at
    steps h and h/2 and extrapolated to 6th order.  Step choice is owned
    by the caller.  Used only for verification.
    """
    index = MultiIndex(*index)

    def estimate(scale: float) -> complex:
        def recurse(pt: SpacetimePoint, idx: MultiIndex) -> complex:
            for axis in range(4):
                if idx[axis] > 0:
                    lower = idx.lowered(axis)
                    h = steps[axis] * scale

                    def g(x: float) -> complex:
                        return recurse(pt.replace_axis(axis, x), lower)

                    return _stencil_first(g, pt[axis], h)
            return field(pt)

        return recurse(point, idx)

    coarse = estimate(1.0)
    if not richardson:
        return coarse
    fine = estimate(0.5)
    # both estimates are 4th order accurate: eliminate the h^4 error term
    return (16.0 * fine - coarse) / 15.0
