"""Perfect state transfer decisions and certificates.

Three families of criteria are implemented:

* the Chebyshev column test T_tau(P) e_u = e_v, valid for any graph;
* the sign-partition test for graphs in an association scheme with a
  fixed-point-free involutive class B: PST at tau iff T_tau(mu_j) = +1 on the
  idempotents where B acts as +1 and -1 where it acts as -1;
* closed-form classifiers for Hamming, Johnson and distance-regular graphs.

For graphs in a scheme the minimal PST time tau satisfies period = 2 tau, so
those routes only ever test tau = period / 2.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .algebraic import MINUS_ONE, ONE, Rational
from .errors import NotDistanceRegularError, SchemeHypothesisError
from .exact_spectra import (
    DiscriminantSpectrum,
    USpectrum,
    chebyshev_eval,
    discriminant_spectrum,
    equals_int,
    is_periodic,
    period,
    u_spectrum,
)
from .graph_core import (
    Graph,
    antipodal_fibres,
    distance_structure,
    is_distance_regular,
)
from .scheme_algebra import (
    AssociationScheme,
    find_flip_classes,
    hamming_scheme,
    johnson_scheme,
    match_idempotents,
)
from .walk_operators import WalkOperators, build_walk

PST_TOLERANCE = 1e-8
DEFAULT_TAU_MAX = 64


@dataclass(frozen=True, order=True)
class PstCertificate:
    u: int
    v: int
    tau: int
    route: str = field(compare=False)
    flip_class: int | None = field(default=None, compare=False)
    sign_partition: tuple[tuple[int, ...], tuple[int, ...]] | None = field(default=None, compare=False)
    residual: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        sp = None
        if self.sign_partition is not None:
            sp = {"plus": list(self.sign_partition[0]), "minus": list(self.sign_partition[1])}
        return {
            "u": self.u,
            "v": self.v,
            "tau": self.tau,
            "route": self.route,
            "flip_class": self.flip_class,
            "sign_partition": sp,
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def chebyshev_column(ds: DiscriminantSpectrum, tau: int, u: int) -> np.ndarray:
    """Column u of T_tau(P) = sum_j T_tau(mu_j) E_j."""
    col = np.zeros(ds.eigenspaces[0].projector.shape[0])
    for e in ds.eigenspaces:
        col += chebyshev_eval(tau, e.value).float_value * e.projector[:, u]
    return col


def transfer_residual(ds: DiscriminantSpectrum, tau: int, u: int, v: int) -> float:
    col = chebyshev_column(ds, tau, u)
    col[v] -= 1.0
    return float(np.abs(col).max())


def pst_chebyshev(
    w: WalkOperators,
    ds: DiscriminantSpectrum,
    u: int,
    v: int,
    tau: int,
    tol: float = PST_TOLERANCE,
) -> tuple[bool, float]:
    """Does T_tau(P) e_u equal e_v?  Returns (decision, max-entry residual)."""
    n = w.vertex_count
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError(f"vertices ({u}, {v}) out of range 0..{n - 1}")
    if tau < 1:
        raise ValueError("tau must be >= 1")
    r = transfer_residual(ds, tau, u, v)
    return (u != v and r <= tol), r


# --- association schemes --------------------------------------------------


def pst_scheme(
    s: AssociationScheme, ds: DiscriminantSpectrum, us: USpectrum
) -> list[PstCertificate]:
    """Sign-partition criterion for a graph whose adjacency lies in ``s``.

    ``ds`` must have d+1 distinct eigenvalues so its projectors are the
    scheme idempotents; ``us`` supplies the walk period.
    """
    if len(ds) != s.d + 1:
        raise SchemeHypothesisError(
            f"graph has {len(ds)} distinct discriminant eigenvalues; the scheme needs {s.d + 1}"
        )
    mapping = match_idempotents(s, ds.projectors)
    if mapping is None:
        raise SchemeHypothesisError("graph eigenprojectors are not the scheme idempotents")
    flips = find_flip_classes(s)
    per = period(us)
    if not flips or per is None or per % 2:
        return []
    tau = per // 2
    certs = []
    for b in flips:
        plus = set(b.plus)
        ok = all(
            chebyshev_eval(tau, e.value) == (ONE if mapping[j] in plus else MINUS_ONE)
            for j, e in enumerate(ds.eigenspaces)
        )
        if not ok:
            continue
        for u, v in enumerate(b.pairing):
            certs.append(
                PstCertificate(
                    u, v, tau, "scheme", b.index, b.sign_partition, transfer_residual(ds, tau, u, v)
                )
            )
    return sorted(certs)


@dataclass(frozen=True)
class Classification:
    pst: bool
    tau: int | None = None
    reason: str = ""


def classify_hamming(d: int, q: int, i: int) -> Classification:
    """Closed form: H(d, q, i) has PST iff (d, q, i) is (d, 2, d) or (2, 2, 1)."""
    if d < 1 or q < 2 or not 1 <= i <= d:
        raise ValueError(f"invalid Hamming parameters ({d}, {q}, {i})")
    if q == 2 and i == d:
        return Classification(True, 1, "perfect matching A_d equals T_1(P)")
    if (d, q, i) == (2, 2, 1):
        return Classification(True, 2, "4-cycle: T_2 sends 1, 0, -1 to 1, -1, 1")
    if q != 2:
        return Classification(False, None, "no class of H(d, q) is a perfect matching when q > 2")
    return Classification(False, None, "discriminant spectrum fails the alternating-sign test")


def classify_johnson(n: int, k: int, i: int) -> Classification:
    """Closed form: J(n, k, i) has PST iff (n, k, i) is (2k, k, 0) or (4, 2, 1)."""
    if k < 1 or n < 2 * k or not 0 <= i <= k - 1:
        raise ValueError(f"invalid Johnson parameters ({n}, {k}, {i})")
    if n == 2 * k and i == 0:
        return Classification(True, 1, "complement matching equals T_1(P)")
    if (n, k, i) == (4, 2, 1):
        return Classification(True, 6, "12-periodic with T_6 = 1, -1, 1 on 1, 0, -1/2")
    if n != 2 * k:
        return Classification(False, None, "J(n, k) has no perfect-matching class unless n = 2k")
    return Classification(False, None, "C(k, i) must equal 2 for a periodic discriminant")


# --- distance-regular graphs ---------------------------------------------


@dataclass(frozen=True)
class PstVerdict:
    pst: bool
    certificates: tuple[PstCertificate, ...]
    route: str
    reason: str
    period: int | None = None
    conclusive: bool = True


# (order, valency, adjacency spectrum) -> (name, PST time)
_INTEGRAL_PST_GRAPHS = {
    (2, 1, ((1, 1), (-1, 1))): ("K2", 1),
    (4, 2, ((2, 1), (0, 2), (-2, 1))): ("C4", 2),
    (6, 2, ((2, 1), (1, 2), (-1, 2), (-2, 1))): ("C6", 3),
    (6, 4, ((4, 1), (0, 3), (-2, 2))): ("K2,2,2", 6),
}


def integral_fingerprint(g: Graph, ds: DiscriminantSpectrum) -> tuple | None:
    """(order, valency, adjacency spectrum) when the graph is regular and integral."""
    k = g.valency
    if k is None:
        return None
    spec = []
    for e in ds.eigenspaces:
        if not isinstance(e.value, Rational):
            return None
        lam = e.value.value * k
        if lam.denominator != 1:
            return None
        spec.append((int(lam), e.multiplicity))
    return (g.vertex_count, k, tuple(spec))


def _antipodal_certificates(fib, ds, tau, route) -> tuple[PstCertificate, ...]:
    certs = []
    for f in fib.fibres:
        a, b = sorted(f)
        for u, v in ((a, b), (b, a)):
            r = transfer_residual(ds, tau, u, v)
            if r > PST_TOLERANCE:
                raise RuntimeError(f"{route}: claimed PST {u}->{v} at {tau} has residual {r:.3g}")
            certs.append(PstCertificate(u, v, tau, route, residual=r))
    return tuple(sorted(certs))


def _alternating_sign_test(ds: DiscriminantSpectrum, tau: int) -> bool:
    return all(
        equals_int(chebyshev_eval(tau, e.value), (-1) ** j) for j, e in enumerate(ds.eigenspaces)
    )


def drg_generic(g: Graph, w: WalkOperators | None = None) -> PstVerdict:
    """Antipodal fibres of size 2 plus T_tau(mu_j) = (-1)^j at tau = period/2."""
    ds_dist = distance_structure(g)
    if is_distance_regular(g, ds_dist) is None:
        raise NotDistanceRegularError("graph is not distance-regular")
    w = w or build_walk(g)
    ds = discriminant_spectrum(w)
    per = period(u_spectrum(w, ds))
    fib = antipodal_fibres(g, ds_dist)
    if fib is None or fib.fibre_size != 2:
        return PstVerdict(False, (), "drg", "not antipodal with fibres of size 2", per)
    if per is None or per % 2:
        return PstVerdict(False, (), "drg", f"period {per} is not even", per)
    tau = per // 2
    if not _alternating_sign_test(ds, tau):
        return PstVerdict(False, (), "drg", f"T_{tau}(mu_j) != (-1)^j", per)
    return PstVerdict(True, _antipodal_certificates(fib, ds, tau, "drg"), "drg", f"alternating signs at {tau}", per)


def classify_distance_regular(g: Graph, w: WalkOperators | None = None) -> PstVerdict:
    """PST decision for a distance-regular graph, most specific rule first."""
    dist = distance_structure(g)
    array = is_distance_regular(g, dist)
    if array is None:
        raise NotDistanceRegularError("graph is not distance-regular")
    w = w or build_walk(g)
    ds = discriminant_spectrum(w)
    per = period(u_spectrum(w, ds))
    fib = antipodal_fibres(g, dist)

    def no(route, reason):
        return PstVerdict(False, (), route, reason, per)

    if fib is None:
        return no("drg:antipodal", "not antipodal")
    if fib.fibre_size != 2:
        return no("drg:antipodal", f"antipodal fibres have size {fib.fibre_size}, not 2")

    fp = integral_fingerprint(g, ds)
    named = _INTEGRAL_PST_GRAPHS.get(fp) if fp else None
    d = dist.diameter
    if d == 1:
        # fibre size 2 at diameter 1 means K2
        return PstVerdict(True, _antipodal_certificates(fib, ds, 1, "drg:complete"), "drg:complete", "K2", per)
    if d in (2, 3):
        route = f"drg:diameter-{d}"
        allowed = {"C4", "K2,2,2"} if d == 2 else {"C6"}
        if named and named[0] in allowed:
            return PstVerdict(True, _antipodal_certificates(fib, ds, named[1], route), route, named[0], per)
        names = " or ".join(sorted(allowed))
        return no(route, f"diameter-{d} graphs with PST are {names} only")
    if fp is not None:
        route = "drg:integral"
        if named:
            return PstVerdict(True, _antipodal_certificates(fib, ds, named[1], route), route, named[0], per)
        verdict = is_periodic(ds, regular=True)
        if not verdict.periodic:
            return no(route, f"integral but not periodic: {verdict.reason}")
        values = {str(v) for v in ds.values}
        if values >= {"1/2", "0", "-1/2"} and values <= {"1", "1/2", "0", "-1/2", "-1"}:
            t6 = chebyshev_eval(6, Rational(Fraction(1, 2)))
            return no(route, f"12-periodic, so tau = 6, but T_6(1/2) = {t6} on an odd index")
        return no(route, "integral distance-regular graphs with PST are K2, C4, C6, K2,2,2 only")
    v = drg_generic(g, w)
    return PstVerdict(v.pst, v.certificates, v.route, v.reason, per)


# --- dispatcher ----------------------------------------------------------


def _family_scheme(g: Graph) -> AssociationScheme | None:
    if g.family is None:
        return None
    name, params = g.family
    if name == "hamming":
        d, q, _ = params
        return hamming_scheme(d, q)
    if name == "johnson":
        n, k, _ = params
        return johnson_scheme(n, k)
    return None


def chebyshev_scan(
    ds: DiscriminantSpectrum, taus, route: str = "chebyshev", tol: float = PST_TOLERANCE
) -> list[PstCertificate]:
    """Every (u, v) with T_tau(P) e_u = e_v, keeping the least tau for each pair."""
    found: dict[tuple[int, int], PstCertificate] = {}
    for tau in taus:
        t = sum(chebyshev_eval(tau, e.value).float_value * e.projector for e in ds.eigenspaces)
        for u in range(t.shape[0]):
            v = int(np.argmax(t[:, u]))
            if v == u or (u, v) in found:
                continue
            col = t[:, u].copy()
            col[v] -= 1.0
            r = float(np.abs(col).max())
            if r <= tol:
                found[(u, v)] = PstCertificate(u, v, tau, route, residual=r)
    return sorted(found.values())


def analyze_pst(
    g: Graph, tau_max: int = DEFAULT_TAU_MAX, w: WalkOperators | None = None
) -> PstVerdict:
    """Route ``g`` to the most specific applicable criterion."""
    scheme = _family_scheme(g)
    w = w or build_walk(g)
    if scheme is not None:
        ds = discriminant_spectrum(w)
        us = u_spectrum(w, ds)
        per = period(us)
        if len(ds) == scheme.d + 1 and match_idempotents(scheme, ds.projectors) is not None:
            certs = pst_scheme(scheme, ds, us)
            return PstVerdict(bool(certs), tuple(certs), "scheme", f"{scheme.name} sign partition", per)
        # fewer eigenvalues than classes: PST still forces period = 2 tau
        if per is None or per % 2:
            verdict = is_periodic(ds)
            return PstVerdict(False, (), "chebyshev", f"period {per} is not even", per, verdict.exact or per is not None)
        certs = chebyshev_scan(ds, [per // 2])
        return PstVerdict(bool(certs), tuple(certs), "chebyshev", f"tested tau = {per // 2}", per)
    if g.is_connected and is_distance_regular(g) is not None:
        return classify_distance_regular(g, w)
    ds = discriminant_spectrum(w)
    per = period(u_spectrum(w, ds))
    if per is not None:
        certs = chebyshev_scan(ds, range(1, per))
        return PstVerdict(bool(certs), tuple(certs), "chebyshev", f"scanned one period ({per})", per)
    certs = chebyshev_scan(ds, range(1, tau_max + 1))
    return PstVerdict(
        bool(certs), tuple(certs), "chebyshev", f"aperiodic; scanned tau <= {tau_max}", None, conclusive=bool(certs)
    )


def pst_search(g: Graph, tau_max: int = DEFAULT_TAU_MAX) -> list[PstCertificate]:
    """Deduplicated PST certificates for ``g`` sorted by (u, v)."""
    return sorted(analyze_pst(g, tau_max).certificates, key=lambda c: (c.u, c.v))
