"""Test-family graphs, BFS distances, and distance-regularity certification.

Vertex labelings are bit-exact and documented per family:

* ``hypercube`` Q_D: vertices are the 2^D bit-strings of length D in
  lexicographic order (vertex v has bit-string ``format(v, f"0{D}b")``);
  adjacent iff the strings differ in exactly one position.
* ``hamming`` H(D, q): strings over {0, ..., q-1} of length D in lexicographic
  order (vertex v spells its base-q digits, most significant first); adjacent
  iff they differ in exactly one coordinate.
* ``johnson`` J(n, k): the k-subsets of {0, ..., n-1} as sorted tuples, listed
  lexicographically; adjacent iff the subsets share k-1 elements.
* ``cycle`` C_n: vertices 0..n-1, i adjacent to (i ± 1) mod n.

The on-disk graph format is a JSON document ``{"name", "n", "edges"}`` with
0-based vertex indices and edges ``[u, v]``, ``u < v``, sorted
lexicographically on write.
"""

import itertools
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    DiameterTooSmall,
    Disconnected,
    GraphFileError,
    InvalidFamilyParams,
    NotDistanceRegular,
)

__all__ = [
    "Graph",
    "DistanceData",
    "IntersectionNumbers",
    "FAMILIES",
    "build_family",
    "distances",
    "certify_distance_regular",
    "graph_to_text",
    "write_graph",
    "read_graph",
]

FAMILIES = ("hypercube", "hamming", "johnson", "cycle")


@dataclass(frozen=True)
class Graph:
    """A finite simple connected graph given by sorted neighbor lists."""

    n: int
    neighbors: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        if self.n < 2 or len(self.neighbors) != self.n:
            raise GraphFileError(f"neighbor table has wrong size for n={self.n}")
        for u, nbrs in enumerate(self.neighbors):
            if len(set(nbrs)) != len(nbrs) or tuple(sorted(nbrs)) != tuple(nbrs):
                raise GraphFileError(f"neighbor list of {u} must be sorted and duplicate-free")
            for v in nbrs:
                if not (0 <= v < self.n):
                    raise GraphFileError(f"vertex {v} out of range in neighbor list of {u}")
                if v == u:
                    raise GraphFileError(f"loop at vertex {u}")
                if u not in self.neighbors[v]:
                    raise GraphFileError(f"edge ({u}, {v}) is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "") -> "Graph":
        nbrs = [set() for _ in range(n)]
        for edge in edges:
            u, v = int(edge[0]), int(edge[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFileError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFileError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), name)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edge list with u < v, sorted lexicographically."""
        return sorted(
            (u, v) for u, nbrs in enumerate(self.neighbors) for v in nbrs if u < v
        )

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, nbrs in enumerate(self.neighbors):
            a[u, list(nbrs)] = 1.0
        return a

    def degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self.neighbors], dtype=np.int64)


@dataclass(frozen=True)
class DistanceData:
    """All-pairs shortest-path distances and the diameter."""

    dist: np.ndarray  # (n, n) int64
    diameter: int


@dataclass(frozen=True)
class IntersectionNumbers:
    """The full table p[h, i, j] = #{z : d(x,z)=i, d(z,y)=j} for d(x,y)=h,
    plus the standard derived arrays."""

    p: np.ndarray  # (D+1, D+1, D+1) int64
    b: np.ndarray  # b[i] = p[i, 1, i+1], b[D] = 0
    c: np.ndarray  # c[i] = p[i, 1, i-1], c[0] = 0
    k: np.ndarray  # k[i] = p[0, i, i]
    n: int
    diameter: int

    @property
    def valency(self) -> int:
        return int(self.b[0])


def _check_param_count(family: str, params, count: int):
    if len(params) != count:
        raise InvalidFamilyParams(
            f"family {family!r} takes {count} parameter(s), got {list(params)}"
        )


def build_family(family: str, params) -> Graph:
    """Construct a named family member.  See the module docstring for the
    exact vertex labelings.

    Raises
    ------
    InvalidFamilyParams
        Malformed parameters, or parameters outside the documented domain.
    DiameterTooSmall
        Parameters that would produce diameter < 3 (a subclass of
        InvalidFamilyParams).
    """
    family = str(family).lower()
    try:
        params = [int(p) for p in params]
    except (TypeError, ValueError):
        raise InvalidFamilyParams(f"parameters must be integers, got {params!r}")

    if family == "hypercube":
        _check_param_count(family, params, 1)
        (d,) = params
        if d < 3:
            raise DiameterTooSmall(f"hypercube dimension {d} gives diameter {d} < 3")
        return _hamming_graph(d, 2, name=f"Q_{d}")

    if family == "hamming":
        _check_param_count(family, params, 2)
        d, q = params
        if q < 2:
            raise InvalidFamilyParams(f"hamming alphabet size must be >= 2, got {q}")
        if d < 3:
            raise DiameterTooSmall(f"hamming length {d} gives diameter {d} < 3")
        return _hamming_graph(d, q, name=f"H({d},{q})")

    if family == "johnson":
        _check_param_count(family, params, 2)
        n, k = params
        if k < 1 or n < 1:
            raise InvalidFamilyParams(f"johnson parameters must be positive, got ({n}, {k})")
        if n < 2 * k:
            raise InvalidFamilyParams(f"johnson requires n >= 2k, got ({n}, {k})")
        if min(k, n - k) < 3:
            raise DiameterTooSmall(
                f"johnson ({n}, {k}) gives diameter {min(k, n - k)} < 3"
            )
        return _johnson_graph(n, k)

    if family == "cycle":
        _check_param_count(family, params, 1)
        (n,) = params
        if n < 3:
            raise InvalidFamilyParams(f"cycle needs n >= 3 vertices, got {n}")
        if n // 2 < 3:
            raise DiameterTooSmall(f"cycle on {n} vertices has diameter {n // 2} < 3")
        if n < 7:
            raise InvalidFamilyParams(f"cycle family requires n >= 7, got {n}")
        nbrs = tuple(tuple(sorted(((i - 1) % n, (i + 1) % n))) for i in range(n))
        return Graph(n, nbrs, name=f"C_{n}")

    raise InvalidFamilyParams(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")


def _hamming_graph(d: int, q: int, name: str) -> Graph:
    words = list(itertools.product(range(q), repeat=d))  # lexicographic
    index = {w: i for i, w in enumerate(words)}
    nbrs = []
    for w in words:
        out = []
        for pos in range(d):
            for letter in range(q):
                if letter != w[pos]:
                    out.append(index[w[:pos] + (letter,) + w[pos + 1 :]])
        nbrs.append(tuple(sorted(out)))
    return Graph(len(words), tuple(nbrs), name)


def _johnson_graph(n: int, k: int) -> Graph:
    subsets = list(itertools.combinations(range(n), k))  # lexicographic
    index = {s: i for i, s in enumerate(subsets)}
    ground = set(range(n))
    nbrs = []
    for s in subsets:
        out = []
        rest = ground - set(s)
        for drop in s:
            kept = set(s) - {drop}
            for add in rest:
                out.append(index[tuple(sorted(kept | {add}))])
        nbrs.append(tuple(sorted(out)))
    return Graph(len(subsets), tuple(nbrs), name=f"J({n},{k})")


def distances(g: Graph) -> DistanceData:
    """All-pairs BFS.  Raises :class:`Disconnected` when some pair is unreachable."""
    n = g.n
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[s, u]
            for v in g.neighbors[u]:
                if dist[s, v] < 0:
                    dist[s, v] = du + 1
                    queue.append(v)
    if (dist < 0).any():
        s, t = map(int, np.argwhere(dist < 0)[0])
        raise Disconnected(f"no path between vertices {s} and {t}")
    return DistanceData(dist, int(dist.max()))


def certify_distance_regular(g: Graph, dd: DistanceData) -> IntersectionNumbers:
    """Exhaustively certify distance-regularity and return the intersection
    numbers.

    For every h and every ordered pair (x, y) at distance h the count
    #{z : d(x,z)=i, d(z,y)=j} must not depend on the pair; the counting is
    exact integer arithmetic (indicator-matrix products).  On failure the
    error message carries a witness: two pairs at the same distance with
    different counts.
    """
    diameter = dd.diameter
    if diameter < 3:
        raise DiameterTooSmall(f"diameter {diameter} < 3")
    n = g.n
    indicators = np.stack([(dd.dist == h) for h in range(diameter + 1)])
    masks = [indicators[h] for h in range(diameter + 1)]
    int_ind = indicators.astype(np.int64)
    p = np.zeros((diameter + 1,) * 3, dtype=np.int64)
    for i in range(diameter + 1):
        for j in range(diameter + 1):
            counts = int_ind[i] @ int_ind[j]
            for h in range(diameter + 1):
                vals = counts[masks[h]]
                first = int(vals[0])
                if not (vals == first).all():
                    pairs = np.argwhere(masks[h])
                    bad = int(np.nonzero(vals != first)[0][0])
                    x1, y1 = map(int, pairs[0])
                    x2, y2 = map(int, pairs[bad])
                    raise NotDistanceRegular(
                        f"count of z with d(x,z)={i}, d(z,y)={j} differs for pairs "
                        f"at distance {h}: pair ({x1},{y1}) gives {first}, "
                        f"pair ({x2},{y2}) gives {int(vals[bad])}"
                    )
                p[h, i, j] = first
    b = np.zeros(diameter + 1, dtype=np.int64)
    c = np.zeros(diameter + 1, dtype=np.int64)
    for i in range(diameter + 1):
        if i < diameter:
            b[i] = p[i, 1, i + 1]
        if i > 0:
            c[i] = p[i, 1, i - 1]
    k = np.array([p[0, i, i] for i in range(diameter + 1)], dtype=np.int64)
    return IntersectionNumbers(p=p, b=b, c=c, k=k, n=n, diameter=diameter)


def graph_to_text(g: Graph) -> str:
    """The canonical on-disk form (also the content that gets hashed)."""
    doc = {"name": g.name, "n": g.n, "edges": [list(e) for e in g.edges]}
    return json.dumps(doc, indent=2) + "\n"


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_text(g))


def read_graph(path) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphFileError(f"cannot read graph file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise GraphFileError(f"graph file {path} must hold a JSON object")
    for key in ("name", "n", "edges"):
        if key not in doc:
            raise GraphFileError(f"graph file {path} is missing field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or n < 2:
        raise GraphFileError(f"graph file {path}: n must be an integer >= 2")
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)
        for e in edges
    ):
        raise GraphFileError(f"graph file {path}: edges must be a list of [u, v] pairs")
    return Graph.from_edges(n, edges, name=str(doc["name"]))
