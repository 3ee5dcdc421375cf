"""Finite posets, their order ideals and the distributive lattice of ideals.

Elements are identified by string labels.  Internally every poset keeps, for
each element, a bitmask of the elements strictly below it; everything else
(covers, ideals, isomorphism) is derived from those masks.
"""

from __future__ import annotations

import re
from collections import deque
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Poset",
    "PosetError",
    "PosetParseError",
    "DistributiveLattice",
    "label_key",
    "chain",
    "antichain",
    "ordinal_sum",
    "disjoint_union",
    "ordinal_decompose",
    "downset",
    "upset",
    "width",
    "build_lattice",
    "join_irreducibles",
    "lattice_from_order",
    "find_isomorphism",
    "is_isomorphic",
    "canonical_form",
    "enumerate_posets",
    "parse_poset",
    "format_poset",
    "lattice_to_dot",
    "MAX_ENUMERATION_SIZE",
]

MAX_ENUMERATION_SIZE = 7


class PosetError(ValueError):
    pass


class PosetParseError(PosetError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_CHUNK = re.compile(r"(\d+)")


def label_key(label: str):
    """Natural sort key: digit runs compare numerically, so ``"10"`` sorts after ``"9"``."""
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part)
        for part in _CHUNK.split(label)
        if part
    )


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """An immutable finite poset.

    ``relations`` may be any set of pairs ``(a, b)`` meaning ``a < b``; the
    stored ``covers`` are always the transitive reduction.
    """

    __slots__ = ("labels", "covers", "_index", "_below", "_above", "_hash")

    def __init__(self, labels: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        labels = tuple(labels)
        if any(not isinstance(x, str) or not x for x in labels):
            raise PosetError("labels must be non-empty strings")
        index = {x: i for i, x in enumerate(labels)}
        if len(index) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1}, key=label_key)
            raise PosetError(f"duplicate labels: {' '.join(dup)}")
        n = len(labels)
        below = [0] * n
        for a, b in relations:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise PosetError(f"unknown label {missing!r} in relation {a}<{b}")
            below[index[b]] |= 1 << index[a]
        # transitive closure, Warshall on bitmasks
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if below[i] & bit:
                    below[i] |= below[k]
        for i in range(n):
            if below[i] >> i & 1:
                raise PosetError(f"relations contain a cycle through {labels[i]!r}")
        above = [0] * n
        for i in range(n):
            for j in _bits(below[i]):
                above[j] |= 1 << i
        covers = []
        for i in range(n):
            # j is covered by i unless some k strictly between them
            implied = 0
            for k in _bits(below[i]):
                implied |= below[k]
            for j in _bits(below[i] & ~implied):
                covers.append((labels[j], labels[i]))
        self.labels = labels
        self.covers = frozenset(covers)
        self._index = index
        self._below = tuple(below)
        self._above = tuple(above)
        self._hash = None

    # -- basic protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.labels) == set(other.labels) and self.covers == other.covers

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.labels), self.covers))
        return self._hash

    def __repr__(self) -> str:
        cov = ", ".join(f"{a}<{b}" for a, b in _sorted_pairs(self.covers))
        return f"Poset([{' '.join(self.labels)}]; {cov})"

    # -- order queries --------------------------------------------------

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PosetError(f"unknown element {label!r}") from None

    def lt(self, a: str, b: str) -> bool:
        return bool(self._below[self.index(b)] >> self.index(a) & 1)

    def leq(self, a: str, b: str) -> bool:
        return a == b or self.lt(a, b)

    def comparable(self, a: str, b: str) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def below_mask(self, i: int) -> int:
        return self._below[i]

    def above_mask(self, i: int) -> int:
        return self._above[i]

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(self.labels[i] for i in _bits(mask))

    def mask_of(self, members: Iterable[str]) -> int:
        mask = 0
        for x in members:
            mask |= 1 << self.index(x)
        return mask

    def relations(self) -> list[tuple[str, str]]:
        """All strict pairs ``(a, b)`` with ``a < b``."""
        return [
            (self.labels[j], self.labels[i])
            for i in range(len(self.labels))
            for j in _bits(self._below[i])
        ]

    def is_chain(self) -> bool:
        n = len(self.labels)
        return all((self._below[i] | self._above[i]) == ((1 << n) - 1) & ~(1 << i) for i in range(n))

    def subposet(self, members: Iterable[str]) -> "Poset":
        keep = [x for x in self.labels if x in set(members)]
        keep_set = set(keep)
        return Poset(keep, [(a, b) for a, b in self.relations() if a in keep_set and b in keep_set])

    def relabel(self, mapping: dict) -> "Poset":
        return Poset([mapping[x] for x in self.labels], [(mapping[a], mapping[b]) for a, b in self.covers])

    def dual(self) -> "Poset":
        return Poset(self.labels, [(b, a) for a, b in self.covers])

    def minimal_elements(self) -> list[str]:
        return [x for i, x in enumerate(self.labels) if not self._below[i]]

    def maximal_elements(self) -> list[str]:
        return [x for i, x in enumerate(self.labels) if not self._above[i]]


def _sorted_pairs(pairs):
    return sorted(pairs, key=lambda ab: (label_key(ab[0]), label_key(ab[1])))


# -- constructors --------------------------------------------------------


def chain(n: int, prefix: str = "c") -> Poset:
    labels = [f"{prefix}{i}" for i in range(n)]
    return Poset(labels, zip(labels, labels[1:]))


def antichain(n: int, prefix: str = "a") -> Poset:
    return Poset(f"{prefix}{i}" for i in range(n))


def ordinal_sum(p: Poset, q: Poset) -> Poset:
    """Stack ``q`` entirely above ``p``."""
    clash = set(p.labels) & set(q.labels)
    if clash:
        raise PosetError(f"label collision in ordinal sum: {' '.join(sorted(clash, key=label_key))}")
    rels = list(p.covers) + list(q.covers) + [(a, b) for a in p.labels for b in q.labels]
    return Poset(p.labels + q.labels, rels)


def disjoint_union(p: Poset, q: Poset) -> Poset:
    clash = set(p.labels) & set(q.labels)
    if clash:
        raise PosetError(f"label collision in disjoint union: {' '.join(sorted(clash, key=label_key))}")
    return Poset(p.labels + q.labels, list(p.covers) + list(q.covers))


def ordinal_decompose(p: Poset) -> list[Poset]:
    """Split ``p`` into its ordinal-irreducible summands, bottom first.

    At a cut of size k the lower part is forced to be the set of elements
    with fewer than k elements below them, so only n-1 candidates exist.
    """
    n = len(p)
    if n == 0:
        return []
    depth = [bin(p.below_mask(i)).count("1") for i in range(n)]
    full = (1 << n) - 1
    cuts = []
    for k in range(1, n):
        lower = 0
        for i in range(n):
            if depth[i] < k:
                lower |= 1 << i
        if bin(lower).count("1") != k:
            continue
        upper = full & ~lower
        if all(p.below_mask(i) & lower == lower for i in _bits(upper)):
            cuts.append(lower)
    blocks = []
    prev = 0
    for lower in cuts + [full]:
        blocks.append(p.subposet(p.labels_of(lower & ~prev)))
        prev = lower
    return blocks


def downset(p: Poset, a: str) -> frozenset:
    """Elements strictly below ``a``."""
    return p.labels_of(p.below_mask(p.index(a)))


def upset(p: Poset, a: str) -> frozenset:
    """Elements strictly above ``a``."""
    return p.labels_of(p.above_mask(p.index(a)))


def width(p: Poset) -> int:
    """Size of a largest antichain, by branch and bound."""
    n = len(p)
    comp = [p.below_mask(i) | p.above_mask(i) for i in range(n)]
    best = 0

    def grow(size: int, candidates: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if size + bin(candidates).count("1") <= best:
            return
        while candidates:
            low = candidates & -candidates
            i = low.bit_length() - 1
            candidates ^= low
            if size + 1 + bin(candidates).count("1") <= best:
                return
            grow(size + 1, candidates & ~comp[i])

    grow(0, (1 << n) - 1)
    return best


# -- isomorphism ---------------------------------------------------------


def _refined_colors(p: Poset) -> list[int]:
    """Colour refinement seeded by (|below|, |above|); returns stable colour ids."""
    n = len(p)
    below = [p.below_mask(i) for i in range(n)]
    above = [p.above_mask(i) for i in range(n)]
    sig = [(bin(below[i]).count("1"), bin(above[i]).count("1")) for i in range(n)]
    palette = {s: k for k, s in enumerate(sorted(set(sig)))}
    colors = [palette[s] for s in sig]
    while True:
        sig = [
            (
                colors[i],
                tuple(sorted(colors[j] for j in _bits(below[i]))),
                tuple(sorted(colors[j] for j in _bits(above[i]))),
            )
            for i in range(n)
        ]
        palette = {s: k for k, s in enumerate(sorted(set(sig)))}
        new = [palette[s] for s in sig]
        if len(palette) == len(set(colors)):
            return new
        colors = new


def find_isomorphism(p: Poset, q: Poset) -> dict | None:
    """Return an order isomorphism ``p -> q`` as a label map, or ``None``."""
    n = len(p)
    if n != len(q) or len(p.covers) != len(q.covers):
        return None
    # refinement colours are canonical, so they can be compared across posets
    sp, sq = _refined_colors(p), _refined_colors(q)
    if sorted(sp) != sorted(sq):
        return None
    order = sorted(range(n), key=lambda i: (sp.count(sp[i]), sp[i], i))
    assign = [-1] * n
    used = [False] * n

    def consistent(i: int, j: int) -> bool:
        for k in range(n):
            t = assign[k]
            if t < 0:
                continue
            if (p.below_mask(i) >> k & 1) != (q.below_mask(j) >> t & 1):
                return False
            if (p.above_mask(i) >> k & 1) != (q.above_mask(j) >> t & 1):
                return False
        return True

    def search(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if not used[j] and sq[j] == sp[i] and consistent(i, j):
                assign[i] = j
                used[j] = True
                if search(pos + 1):
                    return True
                assign[i] = -1
                used[j] = False
        return False

    if not search(0):
        return None
    return {p.labels[i]: q.labels[assign[i]] for i in range(n)}


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None


def canonical_form(p: Poset) -> tuple:
    """A complete isomorphism invariant: minimal relation matrix over colour-respecting orderings."""
    n = len(p)
    if n == 0:
        return (0,)
    colors = _refined_colors(p)
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(colors):
        classes.setdefault(c, []).append(i)
    keys = sorted(classes)
    best = None
    for perm_parts in product(*(permutations(classes[c]) for c in keys)):
        order = [i for part in perm_parts for i in part]
        pos = {v: k for k, v in enumerate(order)}
        rows = tuple(
            sum(1 << pos[j] for j in _bits(p.below_mask(i)))
            for i in order
        )
        if best is None or rows < best:
            best = rows
    return (n, tuple(sorted(colors)), best)


def _poset_from_form(form: tuple) -> Poset:
    n = form[0]
    if n == 0:
        return Poset([])
    rows = form[2]
    labels = [str(k + 1) for k in range(n)]
    rels = [(labels[j], labels[i]) for i in range(n) for j in _bits(rows[i])]
    return Poset(labels, rels)


_ENUM_CACHE: dict[int, list[tuple]] = {0: [(0,)]}


def _forms(n: int) -> list[tuple]:
    if n in _ENUM_CACHE:
        return _ENUM_CACHE[n]
    seen: dict[tuple, None] = {}
    for form in _forms(n - 1):
        q = _poset_from_form(form)
        new = str(n)
        for ideal in _ideal_masks(q):
            rels = list(q.covers) + [(x, new) for x in q.labels_of(ideal)]
            cand = Poset(q.labels + (new,), rels)
            seen.setdefault(canonical_form(cand), None)
    _ENUM_CACHE[n] = list(seen)
    return _ENUM_CACHE[n]


def enumerate_posets(n: int, bound: int = MAX_ENUMERATION_SIZE) -> Iterator[Poset]:
    """Yield one poset per isomorphism class on ``n`` elements, labelled ``"1".."n"``.

    Posets on n elements are obtained from posets on n-1 elements by adding a
    new maximal element above an arbitrary order ideal.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > bound:
        raise ValueError(f"poset enumeration is bounded by n <= {bound}, got {n}")
    for form in _forms(n):
        yield _poset_from_form(form)


# -- ideals and the lattice of ideals -----------------------------------


def _ideal_masks(p: Poset) -> list[int]:
    """All order ideals as bitmasks, by breadth-first extension from the empty ideal."""
    n = len(p)
    seen = {0}
    queue = deque([0])
    while queue:
        ideal = queue.popleft()
        for i in range(n):
            if not ideal >> i & 1 and p.below_mask(i) & ~ideal == 0:
                nxt = ideal | 1 << i
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted(seen)


def _set_name(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members, key=label_key)) + "}"


def _canonical_key(members: frozenset):
    return (len(members), tuple(label_key(x) for x in sorted(members, key=label_key)))


class DistributiveLattice:
    """A finite family of sets closed under union and intersection, ordered by inclusion.

    Elements are referred to by their position in ``elements``.  ``names``
    are display labels; ``base`` is the poset the sets are drawn from, when
    there is one.
    """

    def __init__(
        self,
        elements: Sequence[Iterable[str]],
        base: Poset | None = None,
        names: Sequence[str] | None = None,
    ):
        elems = tuple(frozenset(e) for e in elements)
        if not elems:
            raise PosetError("a lattice needs at least one element")
        index = {e: k for k, e in enumerate(elems)}
        if len(index) != len(elems):
            raise PosetError("repeated lattice element")
        n = len(elems)
        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                u, v = elems[i] | elems[j], elems[i] & elems[j]
                if u not in index or v not in index:
                    raise PosetError(
                        f"not closed under union/intersection at {_set_name(elems[i])}, {_set_name(elems[j])}"
                    )
                join[i][j] = join[j][i] = index[u]
                meet[i][j] = meet[j][i] = index[v]
        self.elements = elems
        self.base = base
        self.names = tuple(names) if names is not None else tuple(_set_name(e) for e in elems)
        if len(self.names) != n:
            raise PosetError("names and elements differ in length")
        self.join = tuple(tuple(r) for r in join)
        self.meet = tuple(tuple(r) for r in meet)
        self._index = index
        self._leq = tuple(
            sum(1 << j for j in range(n) if elems[i] <= elems[j]) for i in range(n)
        )

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"DistributiveLattice({len(self)} elements)"

    def index(self, members: Iterable[str]) -> int:
        return self._index[frozenset(members)]

    def leq(self, i: int, j: int) -> bool:
        return bool(self._leq[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    @property
    def bottom(self) -> int:
        return min(range(len(self)), key=lambda k: len(self.elements[k]))

    @property
    def top(self) -> int:
        return max(range(len(self)), key=lambda k: len(self.elements[k]))

    def incomparable_pairs(self) -> list[tuple[int, int]]:
        n = len(self)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if not self.comparable(i, j)]

    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``(i, j)`` with element i covered by element j."""
        n = len(self)
        out = []
        for i in range(n):
            ups = [j for j in range(n) if j != i and self.leq(i, j)]
            for j in ups:
                if not any(k != j and self.leq(k, j) for k in ups):
                    out.append((i, j))
        return sorted(out)

    def upper_covers(self, i: int) -> list[int]:
        return [j for a, j in self.covers() if a == i]

    def lower_covers(self, j: int) -> list[int]:
        return [i for i, b in self.covers() if b == j]

    def to_poset(self) -> Poset:
        return Poset(self.names, [(self.names[i], self.names[j]) for i, j in self.covers()])

    def is_distributive(self) -> bool:
        n = len(self)
        J, M = self.join, self.meet
        return all(
            M[a][J[b][c]] == J[M[a][b]][M[a][c]]
            for a in range(n)
            for b in range(n)
            for c in range(n)
        )


def build_lattice(p: Poset) -> DistributiveLattice:
    """The lattice of order ideals of ``p``, in (cardinality, lexicographic) order."""
    ideals = [p.labels_of(m) for m in _ideal_masks(p)]
    ideals.sort(key=_canonical_key)
    return DistributiveLattice(ideals, base=p)


def lattice_from_order(q: Poset) -> DistributiveLattice:
    """View a poset that is itself a distributive lattice as a :class:`DistributiveLattice`.

    Each element becomes the set of join-irreducible labels below or equal
    to it; element order and names follow ``q.labels``.  Raises
    ``PosetError`` if ``q`` is not a distributive lattice.
    """
    n = len(q)
    if n == 0:
        raise PosetError("the empty poset is not a lattice")
    lower_covers = [0] * n
    for _, b in q.covers:
        lower_covers[q.index(b)] += 1
    ji = sum(1 << i for i in range(n) if lower_covers[i] == 1)
    sets = [q.labels_of((q.below_mask(i) | 1 << i) & ji) for i in range(n)]
    if len(set(sets)) != n:
        raise PosetError("not a distributive lattice: two elements have the same join-irreducibles")
    lat = DistributiveLattice(sets, names=q.labels)
    for i in range(n):
        for j in range(n):
            if lat.leq(i, j) != (i == j or bool(q.below_mask(j) >> i & 1)):
                raise PosetError("not a distributive lattice: order is not inclusion of join-irreducibles")
    return lat


def join_irreducibles(lat: DistributiveLattice) -> Poset:
    """Elements covering exactly one element, with the induced order."""
    covers = lat.covers()
    lower_count = [0] * len(lat)
    for _, j in covers:
        lower_count[j] += 1
    ji = [k for k in range(len(lat)) if lower_count[k] == 1]
    rels = [(lat.names[a], lat.names[b]) for a in ji for b in ji if a != b and lat.leq(a, b)]
    return Poset([lat.names[k] for k in ji], rels)


def lattice_to_dot(lat: DistributiveLattice, name: str = "L") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for k, label in enumerate(lat.names):
        lines.append(f'  {k + 1} [label="{label}"];')
    for i, j in lat.covers():
        lines.append(f"  {i + 1} -> {j + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- text format ---------------------------------------------------------

_LABEL = re.compile(r"[^\s,<#]+")


def format_poset(p: Poset) -> str:
    labels = sorted(p.labels, key=label_key)
    covers = ", ".join(f"{a}<{b}" for a, b in _sorted_pairs(p.covers))
    return "poset\nelements: " + " ".join(labels) + "\ncovers:" + (" " + covers if covers else "") + "\n"


def parse_poset(text: str) -> Poset:
    """Parse the ``poset`` / ``elements:`` / ``covers:`` text format."""
    header_seen = False
    labels: list[str] | None = None
    label_pos: dict[str, tuple[int, int]] = {}
    pairs: list[tuple[str, str, int, int]] = []
    covers_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if not header_seen:
            if stripped != "poset":
                raise PosetParseError("expected header line 'poset'", lineno, col0)
            header_seen = True
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise PosetParseError(f"expected 'elements:' or 'covers:', got {stripped!r}", lineno, col0)
        offset = len(key) + line.index(key) + 2
        if key == "elements":
            if labels is not None:
                raise PosetParseError("duplicate 'elements:' line", lineno, col0)
            labels = []
            for m in _LABEL.finditer(rest):
                lab = m.group()
                if lab in label_pos:
                    raise PosetParseError(f"duplicate label {lab!r}", lineno, offset + m.start())
                label_pos[lab] = (lineno, offset + m.start())
                labels.append(lab)
            bad = re.search(r"[,<]", rest)
            if bad:
                raise PosetParseError(f"unexpected {bad.group()!r} in element list", lineno, offset + bad.start())
        elif key == "covers":
            if covers_seen:
                raise PosetParseError("duplicate 'covers:' line", lineno, col0)
            covers_seen = True
            pos = 0
            for chunk in rest.split(","):
                start = pos
                pos += len(chunk) + 1
                if not chunk.strip():
                    if rest.strip():
                        raise PosetParseError("empty cover entry", lineno, offset + start)
                    continue
                m = re.fullmatch(r"\s*([^\s,<]+)\s*<\s*([^\s,<]+)\s*", chunk)
                if not m:
                    raise PosetParseError(f"malformed cover {chunk.strip()!r}", lineno, offset + start)
                pairs.append((m.group(1), m.group(2), lineno, offset + start + m.start(1), offset + start + m.start(2)))
        else:
            raise PosetParseError(f"unknown key {key!r}", lineno, col0)
    if not header_seen:
        raise PosetParseError("missing header line 'poset'", 1, 1)
    if labels is None:
        raise PosetParseError("missing 'elements:' line", max(1, len(text.splitlines())), 1)
    known = set(labels)
    for a, b, ln, col_a, col_b in pairs:
        for lab, col in ((a, col_a), (b, col_b)):
            if lab not in known:
                raise PosetParseError(f"dangling label {lab!r} not in elements", ln, col)
    try:
        return Poset(labels, [(a, b) for a, b, *_ in pairs])
    except PosetError as exc:
        ln, col = (pairs[0][2], pairs[0][3]) if pairs else (1, 1)
        raise PosetParseError(str(exc), ln, col) from None
