"""Graph families, distance structure and distance-regularity.

Graphs are stored as dense 0/1 adjacency matrices.  Every family builder
returns an immutable :class:`Graph` carrying deterministic vertex labels
(base-q lexicographic words for Hamming graphs, colex-ordered subsets for
Johnson graphs) so that downstream matrices are byte-stable.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    CapacityError,
    DisconnectedGraphError,
    EdgeListParseError,
    ParameterError,
)

MAX_VERTICES = 4096


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple undirected graph.

    ``family`` records how the graph was built, e.g. ``("johnson", (4, 2, 1))``;
    it lets the PST dispatcher find the association scheme a graph lives in.
    """

    adjacency: np.ndarray
    labels: tuple[str, ...] | None = None
    family: tuple[str, tuple[int, ...]] | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ParameterError("adjacency must be a square matrix")
        if a.shape[0] < 1:
            raise ParameterError("graph must have at least one vertex")
        if a.shape[0] > MAX_VERTICES:
            raise CapacityError(
                f"{a.shape[0]} vertices exceeds the dense cap of {MAX_VERTICES}"
            )
        a = a.astype(np.int8, copy=True)
        if not np.isin(a, (0, 1)).all():
            raise ParameterError("adjacency entries must be 0 or 1")
        if not np.array_equal(a, a.T):
            raise ParameterError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ParameterError("adjacency must have zero diagonal")
        if self.labels is not None and len(self.labels) != a.shape[0]:
            raise ParameterError("one label per vertex required")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def vertex_count(self) -> int:
        return self.adjacency.shape[0]

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    @cached_property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in np.flatnonzero(row)) for row in self.adjacency)

    @property
    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adjacency))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    @cached_property
    def valency(self) -> int | None:
        """Common degree when the graph is regular, otherwise ``None``."""
        d = self.degrees
        return int(d[0]) if np.all(d == d[0]) else None

    @property
    def is_regular(self) -> bool:
        return self.valency is not None

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.vertex_count
        comps = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            queue, comp = deque([s]), [s]
            while queue:
                x = queue.popleft()
                for y in self.neighbors[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def bipartite_components(self) -> int:
        """Number of connected components that are bipartite."""
        colour = [-1] * self.vertex_count
        count = 0
        for comp in self.components:
            colour[comp[0]] = 0
            queue, ok = deque([comp[0]]), True
            while queue:
                x = queue.popleft()
                for y in self.neighbors[x]:
                    if colour[y] < 0:
                        colour[y] = 1 - colour[x]
                        queue.append(y)
                    elif colour[y] == colour[x]:
                        ok = False
            count += ok
        return count

    @property
    def is_bipartite(self) -> bool:
        return self.bipartite_components == len(self.components)

    def to_json(self) -> str:
        doc = {
            "n": self.vertex_count,
            "edges": [list(e) for e in self.edges],
            "labels": list(self.labels) if self.labels is not None else None,
        }
        return json.dumps(doc, separators=(",", ":"))

    def __repr__(self) -> str:
        name = f"{self.family[0]}{self.family[1]}" if self.family else "graph"
        return f"<Graph {name} n={self.vertex_count} m={self.edge_count}>"


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[str] | None = None,
    family: tuple[str, tuple[int, ...]] | None = None,
) -> Graph:
    if n < 1:
        raise ParameterError("n must be >= 1")
    if n > MAX_VERTICES:
        raise CapacityError(f"{n} vertices exceeds the dense cap of {MAX_VERTICES}")
    a = np.zeros((n, n), dtype=np.int8)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise ParameterError(f"self-loop at vertex {u}")
        a[u, v] = a[v, u] = 1
    return Graph(a, tuple(labels) if labels is not None else None, family)


def parse_edge_list(text: str) -> Graph:
    """Parse ``n`` on the first line followed by 0-indexed ``u v`` lines."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise EdgeListParseError("empty edge list")
    try:
        n = int(lines[0])
    except ValueError:
        raise EdgeListParseError(f"first line must be the vertex count, got {lines[0]!r}")
    edges = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"line {lineno}: expected 'u v', got {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: non-integer vertex in {ln!r}")
    try:
        return from_edges(n, edges)
    except ParameterError as exc:
        raise EdgeListParseError(str(exc)) from exc


def graph_from_json(text: str) -> Graph:
    doc = json.loads(text)
    return from_edges(doc["n"], [tuple(e) for e in doc["edges"]], doc.get("labels"))


# --- families --------------------------------------------------------------


def _check_vertex_cap(n: int, what: str) -> None:
    if n > MAX_VERTICES:
        raise CapacityError(f"{what} has {n} vertices; dense cap is {MAX_VERTICES}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ParameterError(f"cycle needs n >= 3, got n={n}")
    _check_vertex_cap(n, f"cycle({n})")
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)], family=("cycle", (n,)))


def path(n: int) -> Graph:
    if n < 1:
        raise ParameterError(f"path needs n >= 1, got n={n}")
    _check_vertex_cap(n, f"path({n})")
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], family=("path", (n,)))


def complete(n: int) -> Graph:
    if n < 1:
        raise ParameterError(f"complete graph needs n >= 1, got n={n}")
    _check_vertex_cap(n, f"complete({n})")
    return from_edges(n, combinations(range(n), 2), family=("complete", (n,)))


def complete_multipartite(*parts: int) -> Graph:
    if not parts:
        raise ParameterError("multipartite graph needs at least one part")
    if any(p < 1 for p in parts):
        raise ParameterError(f"part sizes must be >= 1, got {parts}")
    n = sum(parts)
    _check_vertex_cap(n, f"multipartite{parts}")
    owner = np.repeat(np.arange(len(parts)), parts)
    a = (owner[:, None] != owner[None, :]).astype(np.int8)
    labels = tuple(f"{p}:{i}" for p, size in enumerate(parts) for i in range(size))
    return Graph(a, labels, ("multipartite", tuple(parts)))


def hamming(d: int, q: int, i: int) -> Graph:
    """H(d, q, i): words of length d over q letters, adjacent at Hamming distance i."""
    if d < 1:
        raise ParameterError(f"hamming needs d >= 1, got d={d}")
    if q < 2:
        raise ParameterError(f"hamming needs q >= 2, got q={q}")
    if not 1 <= i <= d:
        raise ParameterError(f"hamming needs 1 <= i <= d, got i={i}, d={d}")
    _check_vertex_cap(q**d, f"hamming({d},{q},{i})")
    words = np.array(list(product(range(q), repeat=d)), dtype=np.int64).reshape(-1, d)
    dist = (words[:, None, :] != words[None, :, :]).sum(axis=2)
    sep = "" if q <= 10 else ","
    labels = tuple(sep.join(str(c) for c in w) for w in words)
    return Graph((dist == i).astype(np.int8), labels, ("hamming", (d, q, i)))


def hypercube(d: int) -> Graph:
    return hamming(d, 2, 1)


def johnson_vertices(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of {1..n} in colex order."""
    return sorted(combinations(range(1, n + 1), k), key=lambda s: s[::-1])


def johnson(n: int, k: int, i: int) -> Graph:
    """J(n, k, i): k-subsets of {1..n}, adjacent when they meet in exactly i points."""
    if k < 1:
        raise ParameterError(f"johnson needs k >= 1, got k={k}")
    if n < 2 * k:
        raise ParameterError(f"johnson needs n >= 2k, got n={n}, k={k}")
    if not 0 <= i <= k - 1:
        raise ParameterError(f"johnson needs 0 <= i <= k-1, got i={i}, k={k}")
    _check_vertex_cap(comb(n, k), f"johnson({n},{k},{i})")
    subsets = johnson_vertices(n, k)
    inter = _intersection_sizes(subsets, n)
    labels = tuple("{" + ",".join(map(str, s)) + "}" for s in subsets)
    return Graph((inter == i).astype(np.int8), labels, ("johnson", (n, k, i)))


def _intersection_sizes(subsets: list[tuple[int, ...]], n: int) -> np.ndarray:
    member = np.zeros((len(subsets), n), dtype=np.float64)
    for r, s in enumerate(subsets):
        member[r, [x - 1 for x in s]] = 1.0
    return np.rint(member @ member.T).astype(np.int64)


def petersen() -> Graph:
    """Petersen graph as the Kneser graph on 2-subsets of {1..5}."""
    g = johnson(5, 2, 0)
    return Graph(g.adjacency, g.labels, ("petersen", ()))


FAMILIES = {
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "multipartite": complete_multipartite,
    "hypercube": hypercube,
    "hamming": hamming,
    "johnson": johnson,
    "petersen": petersen,
}


def build_family(name: str, *params: int) -> Graph:
    """Build a named family member, e.g. ``build_family("johnson", 4, 2, 1)``."""
    try:
        builder = FAMILIES[name]
    except KeyError:
        raise ParameterError(
            f"unknown family {name!r}; expected one of {sorted(FAMILIES)}"
        ) from None
    try:
        return builder(*params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {name}: {params}") from exc


def parse_family_spec(spec: str) -> Graph:
    """Parse ``name:p1,p2,...`` (parameters optional) and build the graph."""
    name, _, rest = spec.partition(":")
    try:
        params = [int(p) for p in rest.split(",") if p.strip()] if rest else []
    except ValueError:
        raise ParameterError(f"non-integer parameter in family spec {spec!r}") from None
    return build_family(name.strip(), *params)


# --- distance structure ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class DistanceStructure:
    dist: np.ndarray
    diameter: int
    distance_classes: tuple[np.ndarray, ...] = field(repr=False)


def distance_structure(g: Graph) -> DistanceStructure:
    if not g.is_connected:
        raise DisconnectedGraphError(
            f"graph has {len(g.components)} components; distances need a connected graph"
        )
    sp = shortest_path(csr_matrix(g.adjacency), method="D", unweighted=True)
    dist = sp.astype(np.int64)
    dist.setflags(write=False)
    diameter = int(dist.max())
    classes = []
    for i in range(diameter + 1):
        c = (dist == i).astype(np.int8)
        c.setflags(write=False)
        classes.append(c)
    return DistanceStructure(dist, diameter, tuple(classes))


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    @property
    def diameter(self) -> int:
        return len(self.c)

    @property
    def valency(self) -> int:
        return self.b[0]

    @property
    def a(self) -> tuple[int, ...]:
        k = self.b[0]
        bs = self.b[1:] + (0,)
        return tuple(k - bi - ci for bi, ci in zip(bs, self.c))

    def satisfies_monotonicity(self) -> bool:
        b, c = self.b, self.c
        return (
            all(b[i] >= b[i + 1] for i in range(len(b) - 1))
            and b[-1] > 0
            and c[0] == 1
            and all(c[i] <= c[i + 1] for i in range(len(c) - 1))
            and c[-1] <= b[0]
        )

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + "; " + ",".join(map(str, self.c)) + "}"


def is_distance_regular(
    g: Graph, ds: DistanceStructure | None = None
) -> IntersectionArray | None:
    """Return the intersection array if ``g`` is distance-regular, else ``None``."""
    if not g.is_connected:
        raise DisconnectedGraphError("distance-regularity needs a connected graph")
    if g.valency is None or g.vertex_count < 2:
        return None
    ds = ds or distance_structure(g)
    d = ds.diameter
    a = g.adjacency.astype(np.float64)
    # (A_j A)_{uv} = |Gamma_j(u) ∩ Gamma_1(v)|
    counts = [np.rint(c.astype(np.float64) @ a).astype(np.int64) for c in ds.distance_classes]
    b, c = [], []
    for i in range(d + 1):
        at_i = ds.dist == i
        if i < d:
            vals = np.unique(counts[i + 1][at_i])
            if len(vals) != 1:
                return None
            b.append(int(vals[0]))
        if i > 0:
            vals = np.unique(counts[i - 1][at_i])
            if len(vals) != 1:
                return None
            c.append(int(vals[0]))
    return IntersectionArray(tuple(b), tuple(c))


@dataclass(frozen=True)
class AntipodalFibres:
    fibre_size: int
    fibres: tuple[frozenset[int], ...]

    def antipode(self, u: int) -> int | None:
        """The unique other fibre member when fibres are pairs."""
        if self.fibre_size != 2:
            return None
        for f in self.fibres:
            if u in f:
                (v,) = f - {u}
                return v
        raise ParameterError(f"vertex {u} not in any fibre")


def antipodal_fibres(g: Graph, ds: DistanceStructure | None = None) -> AntipodalFibres | None:
    """Fibres of ``g`` if "distance d or equal" is an equivalence with equal classes."""
    ds = ds or distance_structure(g)
    if ds.diameter == 0:
        return None
    rel = ds.distance_classes[ds.diameter].astype(np.int64) + np.eye(g.vertex_count, dtype=np.int64)
    closure = (rel.astype(np.float64) @ rel.astype(np.float64)) > 0
    if not np.array_equal(closure, rel > 0):
        return None
    fibres = []
    seen = set()
    for u in range(g.vertex_count):
        if u in seen:
            continue
        f = frozenset(int(x) for x in np.flatnonzero(rel[u]))
        seen |= f
        fibres.append(f)
    sizes = {len(f) for f in fibres}
    if len(sizes) != 1:
        return None
    size = sizes.pop()
    if size < 2:
        return None
    return AntipodalFibres(size, tuple(fibres))
