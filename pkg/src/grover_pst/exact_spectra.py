"""Discriminant spectra with exact recognition, lifted to the walk spectrum.

The eigendecomposition itself is numerical (``numpy.linalg.eigh``); each
eigenvalue cluster is then snapped to an :class:`AlgebraicValue` so that
Chebyshev evaluations, periodicity and the period are decided exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .algebraic import (
    MINUS_ONE,
    ONE,
    QUADRATIC_TABLE,
    RATIONAL_TABLE,
    AlgebraicValue,
    CosPi,
    FloatValue,
    Quadratic,
    Rational,
    _FieldArithmetic,
    as_algebraic,
    cospi,
    snap,
)
from .graph_core import Graph
from .walk_operators import WalkOperators

CLUSTER_TOLERANCE = 1e-8


class EigensolverError(RuntimeError):
    pass


# --- Chebyshev polynomials -------------------------------------------------


def chebyshev_eval(m: int, x) -> AlgebraicValue:
    """T_m(x) for the first-kind Chebyshev polynomial.

    Rational and quadratic arguments run the three-term recurrence exactly;
    cos(r*pi) maps to cos(m*r*pi); floats use cos(m*arccos x) on [-1, 1].
    """
    if m < 0:
        raise ValueError("Chebyshev degree must be non-negative")
    x = as_algebraic(x)
    if isinstance(x, _FieldArithmetic):
        t0, t1 = ONE, x
        if m == 0:
            return t0
        for _ in range(m - 1):
            t0, t1 = t1, 2 * x * t1 - t0
        return t1
    if isinstance(x, CosPi):
        return cospi(m * x.r)
    v = x.float_value
    if -1.0 <= v <= 1.0:
        return FloatValue(math.cos(m * math.acos(v)))
    t0, t1 = 1.0, v
    if m == 0:
        return FloatValue(1.0)
    for _ in range(m - 1):
        t0, t1 = t1, 2 * v * t1 - t0
    return FloatValue(t1)


def chebyshev_float(m: int, x: float) -> float:
    """Plain float recurrence, used as an independent cross-check."""
    t0, t1 = 1.0, x
    if m == 0:
        return t0
    for _ in range(m - 1):
        t0, t1 = t1, 2 * x * t1 - t0
    return t1


def equals_int(value: AlgebraicValue, target: int, tol: float = 1e-9) -> bool:
    """Exact comparison for exact kinds, tolerance comparison for floats."""
    if value.exact:
        return value == Rational(Fraction(target))
    return abs(value.float_value - target) <= tol


# --- discriminant spectrum -------------------------------------------------


@dataclass(frozen=True, eq=False)
class Eigenspace:
    value: AlgebraicValue
    multiplicity: int
    projector: np.ndarray = field(repr=False)
    measured: float = 0.0


@dataclass(frozen=True, eq=False)
class DiscriminantSpectrum:
    """Distinct eigenvalues of P, strictly decreasing, with their projectors."""

    eigenspaces: tuple[Eigenspace, ...]
    regular: bool

    @property
    def values(self) -> list[AlgebraicValue]:
        return [e.value for e in self.eigenspaces]

    @property
    def multiplicities(self) -> list[int]:
        return [e.multiplicity for e in self.eigenspaces]

    @property
    def projectors(self) -> list[np.ndarray]:
        return [e.projector for e in self.eigenspaces]

    def __len__(self) -> int:
        return len(self.eigenspaces)

    def chebyshev_matrix(self, tau: int) -> np.ndarray:
        """T_tau(P) = sum_j T_tau(mu_j) E_j."""
        return sum(
            chebyshev_eval(tau, e.value).float_value * e.projector for e in self.eigenspaces
        )

    def reconstruct(self) -> np.ndarray:
        return sum(e.value.float_value * e.projector for e in self.eigenspaces)


def cluster_eigenvalues(vals: np.ndarray, tol: float = CLUSTER_TOLERANCE) -> list[list[int]]:
    """Group indices of ascending ``vals`` whose consecutive gaps are <= tol."""
    groups: list[list[int]] = []
    for i, v in enumerate(vals):
        if groups and v - vals[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def discriminant_spectrum(w: WalkOperators) -> DiscriminantSpectrum:
    p = w.P
    if not np.allclose(p, p.T, atol=1e-14):
        raise EigensolverError("discriminant is not symmetric")
    try:
        vals, vecs = np.linalg.eigh(p)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"symmetric eigensolver failed: {exc}") from exc
    k = w.valency
    hints = (k,) if k else ()
    spaces = []
    for idx in reversed(cluster_eigenvalues(vals)):
        measured = float(np.mean(vals[idx]))
        v = vecs[:, idx]
        proj = v @ v.T
        proj.setflags(write=False)
        spaces.append(Eigenspace(snap(measured, hints), len(idx), proj, measured))
    return DiscriminantSpectrum(tuple(spaces), regular=k is not None)


# --- time-evolution spectrum -----------------------------------------------


@dataclass(frozen=True)
class UnitCirclePoint:
    """e^{i*pi*angle}; angle is an exact Fraction in (-1, 1] or a float."""

    angle: Fraction | float
    multiplicity: int

    @property
    def exact(self) -> bool:
        return isinstance(self.angle, Fraction)

    @property
    def complex_value(self) -> complex:
        return cmath.exp(1j * math.pi * float(self.angle))

    def order(self) -> int | None:
        """Least k >= 1 with (e^{i*pi*angle})^k = 1, if the angle is exact."""
        if not self.exact:
            return None
        r = self.angle
        # e^{2 pi i * r/2}: order is the denominator of r/2
        return (r / 2).denominator


@dataclass(frozen=True)
class USpectrum:
    points: tuple[UnitCirclePoint, ...]
    b1: int
    bipartite_components: int
    components: int

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)

    def as_complex(self) -> np.ndarray:
        """The full multiset as a complex array sorted by angle in (-pi, pi]."""
        out = []
        for p in self.points:
            out.extend([p.complex_value] * p.multiplicity)
        return sort_by_angle(np.array(out, dtype=complex))

    def distinct(self) -> list[UnitCirclePoint]:
        return list(self.points)


def sort_by_angle(z: np.ndarray) -> np.ndarray:
    ang = np.angle(z)
    ang = np.where(ang <= -math.pi + 1e-9, math.pi, ang)
    return z[np.argsort(ang, kind="stable")]


def _normalise_angle(r):
    if isinstance(r, Fraction):
        r = r % 2
        return r - 2 if r > 1 else r
    r = math.fmod(r, 2.0)
    if r > 1:
        r -= 2
    elif r <= -1:
        r += 2
    return r


def u_spectrum(w: WalkOperators, ds: DiscriminantSpectrum, g: Graph | None = None) -> USpectrum:
    """Eigenvalues of U from those of P.

    Each discriminant eigenvalue mu other than +-1 contributes e^{+-i arccos mu};
    mu = +-1 contributes the single point +-1.  On top come 1 with multiplicity
    b1 = |E| - |V| + c and -1 with multiplicity b1 - c + (bipartite components),
    where c is the number of components (c = 1 for connected graphs).
    """
    g = g or w.graph
    c = len(g.components)
    b1 = g.edge_count - g.vertex_count + c
    extra_minus = b1 - c + g.bipartite_components
    acc: dict = {}

    def add(angle, mult):
        if mult <= 0:
            return
        angle = _normalise_angle(angle)
        if not isinstance(angle, Fraction):
            for key in acc:
                if not isinstance(key, Fraction) and abs(key - angle) <= 1e-9:
                    angle = key
                    break
        acc[angle] = acc.get(angle, 0) + mult

    for e in ds.eigenspaces:
        theta = e.value.angle()
        if theta is None:
            theta = math.acos(min(1.0, max(-1.0, e.value.float_value))) / math.pi
        if e.value in (ONE, MINUS_ONE):
            add(theta, e.multiplicity)
        else:
            add(theta, e.multiplicity)
            add(-theta, e.multiplicity)
    add(Fraction(0), b1)
    add(Fraction(1), extra_minus)
    pts = sorted(
        (UnitCirclePoint(a, m) for a, m in acc.items()), key=lambda p: float(p.angle)
    )
    return USpectrum(tuple(pts), b1, g.bipartite_components, c)


# --- periodicity ---------------------------------------------------------


@dataclass(frozen=True)
class PeriodicityVerdict:
    periodic: bool
    exact: bool
    witness: AlgebraicValue | None = None
    reason: str = ""


def _in_real_parts_of_roots_of_unity(v: AlgebraicValue) -> bool | None:
    if isinstance(v, Rational):
        return v in RATIONAL_TABLE
    if isinstance(v, Quadratic):
        return v in QUADRATIC_TABLE
    if isinstance(v, CosPi):
        return True
    return None


def is_periodic(ds: DiscriminantSpectrum, regular: bool | None = None) -> PeriodicityVerdict:
    """Decide whether the Grover walk is periodic from the discriminant spectrum.

    Regular graphs get the exact decision: rational eigenvalues must lie in
    {+-1, +-1/2, 0}, quadratic ones in the finite table, and every other
    eigenvalue must be a recognised cos(r*pi).  Irregular graphs get the same
    membership test on snapped values, flagged inexact.
    """
    regular = ds.regular if regular is None else regular
    unrecognised = None
    for v in ds.values:
        member = _in_real_parts_of_roots_of_unity(v)
        if member is False:
            return PeriodicityVerdict(
                False, regular, v, f"eigenvalue {v} is not the real part of a root of unity"
            )
        if member is None and unrecognised is None:
            unrecognised = v
    if unrecognised is not None:
        return PeriodicityVerdict(
            False,
            False,
            unrecognised,
            f"eigenvalue {unrecognised} has no recognised exact form; decision inexact",
        )
    return PeriodicityVerdict(True, regular, None, "all eigenvalues are real parts of roots of unity")


def period(us: USpectrum) -> int | None:
    """lcm of the orders of the distinct eigenvalues of U; None if any angle is inexact."""
    orders = []
    for p in us.points:
        k = p.order()
        if k is None:
            return None
        orders.append(k)
    return reduce(math.lcm, orders, 1)


def spectrum_report(ds: DiscriminantSpectrum, us: USpectrum) -> dict:
    """Exact and float eigenvalues of P with the periodicity verdict."""
    verdict = is_periodic(ds)
    return {
        "eigenvalues": [
            {
                "exact": str(e.value) if e.value.exact else None,
                "kind": e.value.kind,
                "float": e.value.float_value,
                "multiplicity": e.multiplicity,
            }
            for e in ds.eigenspaces
        ],
        "periodic": verdict.periodic,
        "period": period(us),
    }
