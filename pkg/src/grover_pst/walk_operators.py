"""Arc-space matrices of the Grover walk and the vertex-space discriminant."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, IsolatedVertexError, ParameterError
from .graph_core import Graph

MAX_ARCS = 16384


@dataclass(frozen=True, eq=False)
class ArcSpace:
    """Symmetric arcs sorted lexicographically by (origin, terminus)."""

    origin: np.ndarray
    terminus: np.ndarray
    inverse: np.ndarray
    # arcs leaving vertex v occupy [starts[v], starts[v+1])
    starts: np.ndarray

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.origin.tolist(), self.terminus.tolist()))

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {a: i for i, a in enumerate(self.arcs)}

    def __len__(self) -> int:
        return len(self.origin)


def arc_space(g: Graph) -> ArcSpace:
    us, vs = np.nonzero(g.adjacency)  # row-major, so already sorted by (u, v)
    us, vs = us.astype(np.int64), vs.astype(np.int64)
    n = g.vertex_count
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(g.degrees, out=starts[1:])
    pairs = list(zip(us.tolist(), vs.tolist()))
    lookup = {a: pos for pos, a in enumerate(pairs)}
    inverse = np.array([lookup[(v, u)] for u, v in pairs], dtype=np.int64)
    for arr in (us, vs, inverse, starts):
        arr.setflags(write=False)
    return ArcSpace(us, vs, inverse, starts)


@dataclass(frozen=True, eq=False)
class WalkOperators:
    """The Grover walk U = S K of a graph and its discriminant P = N S N*.

    Dense matrices are materialised lazily; :meth:`apply_U` evolves states
    through the factored form S(2N*N - I) without building U.
    """

    graph: Graph
    arcs: ArcSpace
    degrees: np.ndarray = field(repr=False)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @cached_property
    def _inv_sqrt_deg(self) -> np.ndarray:
        return 1.0 / np.sqrt(self.degrees.astype(np.float64))

    @cached_property
    def S(self) -> np.ndarray:
        m = self.arc_count
        s = np.zeros((m, m))
        s[np.arange(m), self.arcs.inverse] = 1.0
        return _frozen(s)

    @cached_property
    def N(self) -> np.ndarray:
        n, m = self.vertex_count, self.arc_count
        out = np.zeros((n, m))
        t = self.arcs.terminus
        out[t, np.arange(m)] = self._inv_sqrt_deg[t]
        return _frozen(out)

    @cached_property
    def K(self) -> np.ndarray:
        return _frozen(2.0 * self.N.T @ self.N - np.eye(self.arc_count))

    @cached_property
    def U(self) -> np.ndarray:
        return _frozen(self.S @ self.K)

    @cached_property
    def P(self) -> np.ndarray:
        a = self.graph.adjacency.astype(np.float64)
        s = self._inv_sqrt_deg
        return _frozen(s[:, None] * a * s[None, :])

    @cached_property
    def sparse_N(self) -> sp.csr_matrix:
        n, m = self.vertex_count, self.arc_count
        t = self.arcs.terminus
        return sp.csr_matrix((self._inv_sqrt_deg[t], (t, np.arange(m))), shape=(n, m))

    @cached_property
    def sparse_U(self) -> sp.csr_matrix:
        """U in CSR form: rows of 2N*N - I permuted by the arc reversal."""
        n = self.sparse_N
        k = (2.0 * (n.T @ n) - sp.identity(self.arc_count)).tocsr()
        return k[self.arcs.inverse].tocsr()

    @property
    def valency(self) -> int | None:
        return self.graph.valency

    def exact_P(self) -> list[list[Fraction]] | None:
        """P = A/k as exact rationals for a k-regular graph, otherwise None."""
        k = self.valency
        if k is None:
            return None
        return [[Fraction(int(x), k) for x in row] for row in self.graph.adjacency]

    def N_apply(self, x: np.ndarray) -> np.ndarray:
        """N @ x for an arc-indexed vector or arc-by-column matrix."""
        # arcs into v are the inverses of the contiguous block of arcs out of v
        gathered = x[self.arcs.inverse]
        sums = np.add.reduceat(gathered, self.arcs.starts[:-1], axis=0)
        scale = self._inv_sqrt_deg
        return sums * (scale if x.ndim == 1 else scale[:, None])

    def N_adjoint_apply(self, y: np.ndarray) -> np.ndarray:
        """N* @ y for a vertex-indexed vector or vertex-by-column matrix."""
        t = self.arcs.terminus
        scale = self._inv_sqrt_deg[t]
        return y[t] * (scale if y.ndim == 1 else scale[:, None])

    def apply_U(self, x: np.ndarray) -> np.ndarray:
        """U @ x = S(2 N*N x - x), vectorised over columns."""
        coin = 2.0 * self.N_adjoint_apply(self.N_apply(x)) - x
        return coin[self.arcs.inverse]

    def dump_csv(self, out_dir: str | Path) -> list[Path]:
        """Write S.csv, N.csv, K.csv, U.csv, P.csv (row-major) into ``out_dir``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in ("S", "N", "K", "U", "P"):
            p = out / f"{name}.csv"
            with p.open("w", newline="") as fh:
                w = csv.writer(fh)
                for row in getattr(self, name):
                    w.writerow([repr(float(v)) for v in row])
            written.append(p)
        return written


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_walk(g: Graph) -> WalkOperators:
    isolated = np.flatnonzero(g.degrees == 0)
    if len(isolated):
        raise IsolatedVertexError(
            f"vertex {int(isolated[0])} is isolated; the Grover walk needs minimum degree >= 1"
        )
    arcs = 2 * g.edge_count
    if arcs > MAX_ARCS:
        raise CapacityError(f"{arcs} arcs exceeds the walk cap of {MAX_ARCS}")
    return WalkOperators(g, arc_space(g), g.degrees)


def vertex_state(w: WalkOperators, u: int) -> np.ndarray:
    """Phi_u = N* e_u: weight 1/sqrt(deg u) on every arc terminating at u."""
    if not 0 <= u < w.vertex_count:
        raise ParameterError(f"vertex {u} out of range 0..{w.vertex_count - 1}")
    e = np.zeros(w.vertex_count)
    e[u] = 1.0
    return w.N_adjoint_apply(e)
