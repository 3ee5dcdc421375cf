"""Co-comparability graphs, even closed walks and their binomials.

Walk binomials live in the polynomial ring with one variable per edge; a
binomial is stored as its two monomials, each a sorted tuple of edges
(with repetition).
"""

from __future__ import annotations

from collections import Counter, deque
from itertools import combinations
from dataclasses import dataclass
from typing import Iterator, Sequence

from .poset import DistributiveLattice
from .polyalg import GeneratorSet, Polynomial

__all__ = [
    "CoCompGraph",
    "ClosedWalk",
    "WalkBinomial",
    "ToricGenerators",
    "cocomparability_graph",
    "two_coloring",
    "is_bipartite",
    "iter_even_cycles",
    "even_cycles",
    "iter_walk_binomials",
    "toric_generators",
    "substitute",
    "graph_to_dot",
]

Edge = tuple[int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CoCompGraph:
    """Simple graph on vertices ``0..n-1``; ``names`` label the vertices."""

    n: int
    edges: tuple[Edge, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        edges = tuple(sorted({_edge(a, b) for a, b in self.edges}))
        if any(a == b or not (0 <= a < self.n and 0 <= b < self.n) for a, b in edges):
            raise ValueError("edges must join two distinct vertices of the graph")
        object.__setattr__(self, "edges", edges)
        if not self.names:
            object.__setattr__(self, "names", tuple(str(k + 1) for k in range(self.n)))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(x)) for x in adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]]) -> "CoCompGraph":
        return cls(n, tuple(edges))


def cocomparability_graph(lat: DistributiveLattice) -> CoCompGraph:
    return CoCompGraph(len(lat), tuple(lat.incomparable_pairs()), tuple(lat.names))


def two_coloring(g: CoCompGraph) -> dict[int, int] | None:
    """BFS 2-colouring of every component, or ``None`` if some edge is monochromatic."""
    color: dict[int, int] = {}
    for s in range(g.n):
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def is_bipartite(g: CoCompGraph) -> bool:
    return two_coloring(g) is not None


@dataclass(frozen=True)
class ClosedWalk:
    """Closed walk given by its vertex sequence ``v_0 .. v_{k-1}`` (returning to ``v_0``)."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(_edge(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs)))

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def is_valid(self, g: CoCompGraph) -> bool:
        return len(self) >= 2 and len(self) % 2 == 0 and all(g.has_edge(a, b) for a, b in self.edges)

    def label(self, one_based: bool = True) -> list[list[int]]:
        off = 1 if one_based else 0
        return [[a + off, b + off] for a, b in self.edges]


def _norm_side(edges) -> tuple[Edge, ...]:
    return tuple(sorted(edges))


@dataclass(frozen=True)
class WalkBinomial:
    walk: ClosedWalk
    plus: tuple[Edge, ...]
    minus: tuple[Edge, ...]

    @classmethod
    def from_walk(cls, walk: ClosedWalk) -> "WalkBinomial":
        es = walk.edges
        return cls(walk, _norm_side(es[0::2]), _norm_side(es[1::2]))

    @property
    def degree(self) -> int:
        return len(self.plus)

    def key(self) -> tuple:
        """Orientation-free identity of the binomial (p and -p coincide)."""
        return tuple(sorted((self.plus, self.minus)))

    def is_zero(self) -> bool:
        return self.plus == self.minus

    def __str__(self) -> str:
        def side(es):
            return "*".join(f"X{{{a + 1},{b + 1}}}" for a, b in es)

        return f"{side(self.plus)} - {side(self.minus)}"


def _divides(small: tuple[Edge, ...], big: tuple[Edge, ...]) -> bool:
    cb = Counter(big)
    return all(cb[e] >= k for e, k in Counter(small).items())


def _sub_multisets(side: tuple[Edge, ...], max_size: int) -> set[tuple[Edge, ...]]:
    out = set()
    for size in range(2, max_size + 1):
        out.update(combinations(side, size))
    return out


class _DivisorIndex:
    """Kept binomials looked up by their sides, for termwise divisibility."""

    def __init__(self):
        self._partner: dict[tuple, list[tuple]] = {}

    def add(self, key: tuple) -> None:
        a, b = key
        self._partner.setdefault(a, []).append(b)
        if a != b:
            self._partner.setdefault(b, []).append(a)

    def divides(self, key: tuple) -> bool:
        """Is some indexed binomial of lower degree a termwise divisor of ``key``?"""
        plus, minus = key
        top = len(plus) - 1
        for side, other in ((plus, minus), (minus, plus)):
            for sub in _sub_multisets(side, top):
                for partner in self._partner.get(sub, ()):
                    if _divides(partner, other):
                        return True
        return False


def iter_even_cycles(g: CoCompGraph, length: int) -> Iterator[ClosedWalk]:
    """Even cycles of exactly ``length`` vertices, canonical and in lexicographic order.

    A cycle is written from its smallest vertex, in the direction whose
    second vertex is smaller than its last.
    """
    if length < 4 or length % 2:
        return
    for s in range(g.n):
        path = [s]
        on_path = {s}

        def dfs() -> Iterator[ClosedWalk]:
            v = path[-1]
            if len(path) == length:
                if g.has_edge(v, s) and path[1] < path[-1]:
                    yield ClosedWalk(tuple(path))
                return
            for w in g.neighbors(v):
                if w <= s or w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                yield from dfs()
                path.pop()
                on_path.discard(w)

        yield from dfs()


def even_cycles(g: CoCompGraph, max_length: int | None = None) -> list[ClosedWalk]:
    """All even cycles, ascending by length then canonical vertex sequence."""
    top = g.n if max_length is None else min(max_length, g.n)
    out: list[ClosedWalk] = []
    for length in range(4, top + 1, 2):
        out.extend(iter_even_cycles(g, length))
    return out


def _iter_closed_walks(g: CoCompGraph, length: int) -> Iterator[ClosedWalk]:
    """Even closed walks of exactly ``length`` edges whose smallest vertex is the start.

    Two kinds of walk are cut early because the divisibility filter would
    drop them anyway: an edge used at both an odd and an even position
    (the binomial shares a variable between its terms), and a vertex met
    twice at even distance short of closing the walk (the segment between
    is a shorter even closed walk whose nonzero binomial divides this one
    termwise).
    """
    for s in range(g.n):
        path = [s]
        seen_at: dict[int, list[int]] = {s: [0]}
        odd: Counter = Counter()
        even: Counter = Counter()

        def dfs() -> Iterator[ClosedWalk]:
            v = path[-1]
            k = len(path) - 1  # edges so far
            if k == length:
                if v == s:
                    yield ClosedWalk(tuple(path[:-1]))
                return
            mine, other = (odd, even) if k % 2 == 0 else (even, odd)
            for w in g.neighbors(v):
                if w < s:
                    continue
                e = _edge(v, w)
                if other[e]:
                    continue
                pos = k + 1
                closing = w == s and pos == length
                if not closing and any((pos - i) % 2 == 0 for i in seen_at.get(w, ())):
                    continue
                mine[e] += 1
                path.append(w)
                seen_at.setdefault(w, []).append(pos)
                yield from dfs()
                seen_at[w].pop()
                path.pop()
                mine[e] -= 1

        yield from dfs()


def iter_walk_binomials(g: CoCompGraph, bound: int | None = None) -> Iterator[WalkBinomial]:
    """Candidate generators of the toric ideal of the edge ring, lazily.

    Bipartite graphs give their even cycles.  Otherwise every even closed
    walk with at most ``bound`` edges is tried and its binomial is kept when
    it is nonzero, new, and not divided termwise by a binomial kept
    earlier.  Output is ascending by length, then canonical walk.
    """
    if bound is None:
        bound = default_bound(g)
    if is_bipartite(g):
        for length in range(4, g.n + 1, 2):
            for cyc in iter_even_cycles(g, length):
                yield WalkBinomial.from_walk(cyc)
        return
    index = _DivisorIndex()
    seen: set = set()
    for length in range(4, bound + 1, 2):
        layer: list[tuple] = []
        for walk in _iter_closed_walks(g, length):
            b = WalkBinomial.from_walk(walk)
            if b.is_zero():
                continue
            key = b.key()
            if key in seen:
                continue
            seen.add(key)
            # only strictly smaller degrees can divide without being equal
            if index.divides(key):
                continue
            layer.append(key)
            yield b
        for key in layer:
            index.add(key)


def default_bound(g: CoCompGraph) -> int:
    return max(4, 2 * len(g.edges))


@dataclass
class ToricGenerators:
    binomials: list[WalkBinomial]
    bound: int
    bipartite: bool

    @property
    def complete(self) -> bool:
        """Only the even-cycle set of a bipartite graph is known to generate."""
        return self.bipartite

    def to_dict(self) -> dict:
        return {
            "bipartite": self.bipartite,
            "bound": self.bound,
            "complete": self.complete,
            "binomials": [str(b) for b in self.binomials],
        }


def toric_generators(g: CoCompGraph, bound: int | None = None) -> ToricGenerators:
    if bound is None:
        bound = default_bound(g)
    if bound < 4 or bound % 2:
        raise ValueError("walk-length bound must be an even integer >= 4")
    return ToricGenerators(list(iter_walk_binomials(g, bound)), bound, is_bipartite(g))


def substitute(b: WalkBinomial, gens: GeneratorSet) -> Polynomial:
    """Replace each edge variable ``X_{j,k}`` by ``f_{a_j, a_k}`` and expand."""
    try:
        plus = gens.product(gens.index_of(*e) for e in b.plus)
        minus = gens.product(gens.index_of(*e) for e in b.minus)
    except KeyError as exc:
        raise KeyError(f"edge {exc.args[0]} has no generator") from None
    return plus - minus


def graph_to_dot(g: CoCompGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for k in range(g.n):
        lines.append(f'  {k + 1} [label="{g.names[k]}"];')
    for a, b in g.edges:
        lines.append(f"  {a + 1} -- {b + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"
