"""Association schemes: axioms, principal idempotents, eigenvalue tables, flip classes."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError
from .exact_spectra import cluster_eigenvalues
from .graph_core import MAX_VERTICES, DistanceStructure, build_family

SCHEME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SchemeCheck:
    valid: bool
    violated: str | None = None
    # intersection numbers p_ij^k, keyed (i, j, k), when closure holds
    intersection_numbers: dict = field(default_factory=dict, repr=False)

    def __bool__(self) -> bool:
        return self.valid


def verify_scheme(classes: Sequence[np.ndarray], tol: float = SCHEME_TOLERANCE) -> SchemeCheck:
    """Check the four axioms: A_0 = I, sum = J, symmetry, closure under products."""
    mats = [np.asarray(c) for c in classes]
    if not mats:
        raise ParameterError("need at least one class")
    n = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.ndim != 2 or m.shape != (n, n):
            raise ParameterError(f"class {i} has shape {m.shape}, expected {(n, n)}")
    for i, m in enumerate(mats):
        if not np.isin(m, (0, 1)).all():
            return SchemeCheck(False, f"class {i} is not a 0/1 matrix")
    if not np.array_equal(mats[0], np.eye(n, dtype=mats[0].dtype)):
        return SchemeCheck(False, "axiom (i): A_0 is not the identity")
    if not np.array_equal(sum(m.astype(np.int64) for m in mats), np.ones((n, n), dtype=np.int64)):
        return SchemeCheck(False, "axiom (ii): classes do not sum to J")
    for i, m in enumerate(mats):
        if not np.array_equal(m, m.T):
            return SchemeCheck(False, f"axiom (iii): A_{i} is not symmetric")
    fm = [m.astype(np.float64) for m in mats]
    supports = [m.astype(bool) for m in mats]
    numbers = {}
    for i in range(len(fm)):
        for j in range(i, len(fm)):
            prod = fm[i] @ fm[j]
            recon = np.zeros_like(prod)
            for k, sup in enumerate(supports):
                coeff = prod[sup][0] if sup.any() else 0.0
                recon += coeff * fm[k]
                numbers[(i, j, k)] = numbers[(j, i, k)] = int(round(coeff))
            if np.abs(prod - recon).max() > tol:
                return SchemeCheck(
                    False, f"axiom (iv): A_{i} A_{j} is not in the span of the classes"
                )
    return SchemeCheck(True, None, numbers)


@dataclass(frozen=True, eq=False)
class AssociationScheme:
    """Classes A_0..A_d with principal idempotents E_0..E_d.

    Idempotents are ordered with E_0 = J/n first and the rest by decreasing
    eigenvalue of A_1 (ties broken by A_2, ...), which matches the usual
    Krawtchouk / Johnson indexing for P-polynomial schemes.
    """

    classes: tuple[np.ndarray, ...] = field(repr=False)
    idempotents: tuple[np.ndarray, ...] = field(repr=False)
    p_table: np.ndarray = field(repr=False)  # p_table[i, j] = p_i(j)
    multiplicities: tuple[int, ...]
    name: str = ""

    @property
    def d(self) -> int:
        return len(self.classes) - 1

    @property
    def n(self) -> int:
        return self.classes[0].shape[0]

    def class_index(self, adjacency: np.ndarray) -> int | None:
        for i, c in enumerate(self.classes):
            if np.array_equal(c, adjacency):
                return i
        return None

    def in_span(self, matrix: np.ndarray, tol: float = SCHEME_TOLERANCE) -> bool:
        m = np.asarray(matrix, dtype=np.float64)
        recon = np.zeros_like(m)
        for c in self.classes:
            sup = c.astype(bool)
            recon += m[sup][0] * c
        return bool(np.abs(m - recon).max() <= tol)


def simultaneous_idempotents(
    classes: Sequence[np.ndarray], seed: int = 0, attempts: int = 8
) -> tuple[list[np.ndarray], np.ndarray]:
    """Principal idempotents of a commuting symmetric family via a random combination.

    Returns (idempotents, p_table) in the canonical order described on
    :class:`AssociationScheme`.
    """
    fm = [np.asarray(c, dtype=np.float64) for c in classes]
    n, d = fm[0].shape[0], len(fm) - 1
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeffs = rng.uniform(1.0, 2.0, size=len(fm))
        combo = sum(c * m for c, m in zip(coeffs, fm))
        vals, vecs = np.linalg.eigh(combo)
        groups = cluster_eigenvalues(vals, tol=1e-6 * max(1.0, np.abs(vals).max()))
        if len(groups) != d + 1:
            continue
        idem = []
        for g in groups:
            v = vecs[:, g]
            idem.append(v @ v.T)
        table = np.array([[np.sum(a * e) / np.trace(e) for e in idem] for a in fm])
        ok = all(
            np.abs(a @ e - table[i, j] * e).max() <= SCHEME_TOLERANCE
            for i, a in enumerate(fm)
            for j, e in enumerate(idem)
        )
        if not ok:
            continue
        j0 = int(np.argmin([np.abs(e - 1.0 / n).max() for e in idem]))
        rest = [j for j in range(d + 1) if j != j0]
        rest.sort(key=lambda j: tuple(-np.round(table[1:, j], 9)))
        order = [j0] + rest
        idem = [idem[j] for j in order]
        table = table[:, order]
        for e in idem:
            e.setflags(write=False)
        table.setflags(write=False)
        return idem, table
    raise RuntimeError("simultaneous diagonalisation did not separate d+1 eigenspaces")


def scheme_from_classes(classes: Sequence[np.ndarray], name: str = "") -> AssociationScheme:
    check = verify_scheme(classes)
    if not check:
        raise ParameterError(f"not an association scheme: {check.violated}")
    frozen = []
    for c in classes:
        c = np.array(c, dtype=np.int8)
        c.setflags(write=False)
        frozen.append(c)
    idem, table = simultaneous_idempotents(frozen)
    mults = tuple(int(round(np.trace(e))) for e in idem)
    return AssociationScheme(tuple(frozen), tuple(idem), table, mults, name)


def distance_scheme(ds: DistanceStructure) -> AssociationScheme:
    """The scheme of distance classes of a distance-regular graph."""
    return scheme_from_classes(ds.distance_classes, name="distance")


@lru_cache(maxsize=16)
def hamming_scheme(d: int, q: int) -> AssociationScheme:
    if d < 1 or q < 2:
        raise ParameterError(f"hamming scheme needs d >= 1 and q >= 2, got d={d}, q={q}")
    if q**d > MAX_VERTICES:
        raise CapacityError(f"H({d},{q}) has {q**d} points; dense cap is {MAX_VERTICES}")
    n = q**d
    classes = [np.eye(n, dtype=np.int8)] + [build_family("hamming", d, q, i).adjacency for i in range(1, d + 1)]
    return scheme_from_classes(classes, name=f"H({d},{q})")


@lru_cache(maxsize=16)
def johnson_scheme(n: int, k: int) -> AssociationScheme:
    """J(n, k) with class A_i = J(n, k, k - i), i.e. subsets meeting in k - i points."""
    if k < 1 or n < 2 * k:
        raise ParameterError(f"johnson scheme needs n >= 2k >= 2, got n={n}, k={k}")
    if comb(n, k) > MAX_VERTICES:
        raise CapacityError(f"J({n},{k}) has {comb(n, k)} points; dense cap is {MAX_VERTICES}")
    size = comb(n, k)
    classes = [np.eye(size, dtype=np.int8)] + [
        build_family("johnson", n, k, k - i).adjacency for i in range(1, k + 1)
    ]
    return scheme_from_classes(classes, name=f"J({n},{k})")


# --- closed-form eigenvalues ----------------------------------------------


def _binom(x: int, k: int) -> int:
    """Polynomial binomial C(x, k); zero for integer x < k, including negative x."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    num = 1
    for t in range(k):
        num *= x - t
    den = 1
    for t in range(1, k + 1):
        den *= t
    return num // den


def krawtchouk(k: int, x: int, d: int, q: int) -> Fraction:
    """K_k(x; d, q) = sum_l (-1)^l (q-1)^(k-l) C(x, l) C(d-x, k-l)."""
    if not 0 <= k <= d:
        raise ParameterError(f"krawtchouk needs 0 <= k <= d, got k={k}, d={d}")
    return Fraction(
        sum((-1) ** l * (q - 1) ** (k - l) * _binom(x, l) * _binom(d - x, k - l) for l in range(k + 1))
    )


def krawtchouk_binary(k: int, x: int, d: int) -> Fraction:
    """The q = 2 form sum_l (-2)^l C(d-l, k-l) C(x, l)."""
    return Fraction(sum((-2) ** l * _binom(d - l, k - l) * _binom(x, l) for l in range(k + 1)))


def johnson_eigenvalue(i: int, j: int, n: int, k: int) -> Fraction:
    """Eigenvalue on the j-th idempotent of J(n, k, i) (subsets meeting in i points)."""
    if not 0 <= i <= k:
        raise ParameterError(f"johnson eigenvalue needs 0 <= i <= k, got i={i}, k={k}")
    if not 0 <= j <= k:
        raise ParameterError(f"johnson eigenvalue needs 0 <= j <= k, got j={j}, k={k}")
    return Fraction(
        sum(
            (-1) ** l * _binom(j, l) * _binom(k - j, k - i - l) * _binom(n - k - j, k - i - l)
            for l in range(k - i + 1)
        )
    )


def johnson_valency(n: int, k: int, i: int) -> int:
    return comb(k, i) * comb(n - k, k - i)


def hamming_valency(d: int, q: int, i: int) -> int:
    return (q - 1) ** i * comb(d, i)


# --- flip classes --------------------------------------------------------


@dataclass(frozen=True)
class FlipClass:
    index: int
    pairing: tuple[int, ...]
    plus: tuple[int, ...]
    minus: tuple[int, ...]

    @property
    def sign_partition(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.plus, self.minus


def find_flip_classes(s: AssociationScheme, tol: float = SCHEME_TOLERANCE) -> list[FlipClass]:
    """Classes that are fixed-point-free symmetric permutation matrices, with sign partitions."""
    out = []
    for ell in range(1, s.d + 1):
        a = s.classes[ell]
        if not (np.all(a.sum(axis=1) == 1) and np.all(np.diag(a) == 0)):
            continue
        pairing = tuple(int(np.flatnonzero(row)[0]) for row in a)
        plus, minus = [], []
        af = a.astype(np.float64)
        for j, e in enumerate(s.idempotents):
            pij = s.p_table[ell, j]
            if abs(pij - 1.0) <= tol:
                sign = 1
            elif abs(pij + 1.0) <= tol:
                sign = -1
            else:
                raise RuntimeError(f"flip class A_{ell} has eigenvalue {pij} on E_{j}")
            if np.abs(af @ e - sign * e).max() > tol:
                raise RuntimeError(f"A_{ell} E_{j} != {sign:+d} E_{j}")
            (plus if sign > 0 else minus).append(j)
        out.append(FlipClass(ell, pairing, tuple(plus), tuple(minus)))
    return out


def match_idempotents(
    s: AssociationScheme, projectors: Sequence[np.ndarray], tol: float = SCHEME_TOLERANCE
) -> list[int] | None:
    """Map each graph projector to the scheme idempotent it equals, or None."""
    mapping = []
    for f in projectors:
        hit = [j for j, e in enumerate(s.idempotents) if np.abs(f - e).max() <= tol]
        if len(hit) != 1:
            return None
        mapping.append(hit[0])
    return mapping


def class_digest(a: np.ndarray) -> str:
    us, vs = np.nonzero(np.triu(a, 1))
    payload = ",".join(f"{u}-{v}" for u, v in zip(us.tolist(), vs.tolist()))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def scheme_report(s: AssociationScheme) -> dict:
    flips = find_flip_classes(s)
    return {
        "name": s.name,
        "n": s.n,
        "d": s.d,
        "classes": [
            {"index": i, "valency": int(c[0].sum()), "digest": class_digest(c)}
            for i, c in enumerate(s.classes)
        ],
        "p_table": [[_clean(x) for x in row] for row in s.p_table],
        "multiplicities": list(s.multiplicities),
        "flip_classes": [
            {"index": f.index, "sign_partition": {"plus": list(f.plus), "minus": list(f.minus)}}
            for f in flips
        ],
    }


def _clean(x: float) -> float | int:
    r = round(x)
    return int(r) if abs(x - r) <= 1e-9 else float(x)


def scheme_report_json(s: AssociationScheme) -> str:
    return json.dumps(scheme_report(s), sort_keys=True)
