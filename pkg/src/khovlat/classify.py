"""Forbidden subposets, composition matrices and generalized snake lattices."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .poset import (
    DistributiveLattice,
    Poset,
    PosetError,
    label_key,
    lattice_from_order,
    ordinal_decompose,
    width,
)

__all__ = [
    "Verdict",
    "CompositionMatrix",
    "contains_2plus2",
    "is_2plus2_free",
    "is_1plus1plus1_free",
    "is_free",
    "downset_chain",
    "composition_matrix",
    "poset_from_composition_matrix",
    "snake_covers",
    "snake_poset",
    "recognize_snake",
    "predict_khovanskii",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a Khovanskii-basis decision.

    ``status`` is ``"pass"``, ``"fail"`` or ``"pass-up-to-bound"``; the last
    one is a pass obtained from a bounded walk enumeration on a
    non-bipartite co-comparability graph.
    """

    khovanskii: bool
    method: str = "direct"
    status: str = ""
    witness: dict | None = None

    def __post_init__(self):
        if self.method not in ("direct", "predicted", "snake"):
            raise ValueError(f"unknown verdict method {self.method!r}")
        if not self.status:
            object.__setattr__(self, "status", "pass" if self.khovanskii else "fail")
        if (self.witness is not None) != (not self.khovanskii and self.method == "direct"):
            raise ValueError("a witness accompanies exactly the direct fail verdicts")

    def to_dict(self) -> dict:
        out = {"khovanskii": self.khovanskii, "status": self.status, "method": self.method}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# -- forbidden subposets ------------------------------------------------


def contains_2plus2(p: Poset) -> bool:
    """Direct search for a<b, c<d with a, b both incomparable to c, d."""
    rels = p.relations()
    for (a, b), (c, d) in combinations(rels, 2):
        if len({a, b, c, d}) < 4:
            continue
        if not any(p.comparable(x, y) for x in (a, b) for y in (c, d)):
            return True
    return False


def is_2plus2_free(p: Poset) -> bool:
    """True when the strict downsets of all elements form a chain under inclusion."""
    downs = sorted({p.below_mask(i) for i in range(len(p))}, key=lambda m: bin(m).count("1"))
    return all(a & b == a for a, b in zip(downs, downs[1:]))


def is_1plus1plus1_free(p: Poset) -> bool:
    return width(p) <= 2


def is_free(p: Poset) -> bool:
    return is_2plus2_free(p) and is_1plus1plus1_free(p)


# -- composition matrices -----------------------------------------------


def downset_chain(p: Poset) -> list[tuple[frozenset, frozenset, frozenset]]:
    """The chain of distinct downsets with its level sets.

    Returns ``(D_i, L_i, K_i)`` for i = 0..m where ``L_i`` holds the elements
    whose strict downset is ``D_i`` and ``K_i = D_{i+1} - D_i`` with
    ``D_{m+1}`` the whole ground set.
    """
    if not is_2plus2_free(p):
        raise PosetError("downset chain requires a (2+2)-free poset")
    masks = sorted({p.below_mask(i) for i in range(len(p))}, key=lambda m: bin(m).count("1"))
    if not masks:
        return []
    full = (1 << len(p)) - 1
    out = []
    for k, d in enumerate(masks):
        level = p.labels_of(sum(1 << i for i in range(len(p)) if p.below_mask(i) == d))
        nxt = masks[k + 1] if k + 1 < len(masks) else full
        out.append((p.labels_of(d), level, p.labels_of(nxt & ~d)))
    return out


@dataclass(frozen=True)
class CompositionMatrix:
    """Upper-triangular square matrix of label sets; nonempty cells partition the ground set."""

    cells: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(frozenset(c) for c in row) for row in self.cells)
        object.__setattr__(self, "cells", cells)
        self.validate()

    @property
    def size(self) -> int:
        return len(self.cells)

    def validate(self) -> None:
        n = len(self.cells)
        if any(len(row) != n for row in self.cells):
            raise PosetError("composition matrix must be square")
        seen: set = set()
        for i, row in enumerate(self.cells):
            for j, cell in enumerate(row):
                if cell and j < i:
                    raise PosetError(f"cell ({i + 1},{j + 1}) below the diagonal is nonempty")
                if seen & cell:
                    raise PosetError(f"label {sorted(seen & cell)[0]!r} appears in two cells")
                seen |= cell
        for k in range(n):
            if not any(self.cells[k]):
                raise PosetError(f"row {k + 1} has only empty cells")
            if not any(row[k] for row in self.cells):
                raise PosetError(f"column {k + 1} has only empty cells")

    def row_union(self, i: int) -> frozenset:
        return frozenset().union(*self.cells[i])

    def column_union(self, j: int) -> frozenset:
        return frozenset().union(*(row[j] for row in self.cells))

    def ground_set(self) -> frozenset:
        return frozenset().union(*(self.row_union(i) for i in range(self.size)))

    def to_json(self) -> list:
        return [[sorted(cell, key=label_key) for cell in row] for row in self.cells]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Sequence[Sequence[Sequence[str]]]) -> "CompositionMatrix":
        return cls(tuple(tuple(frozenset(c) for c in row) for row in data))


def composition_matrix(p: Poset) -> CompositionMatrix:
    """Cell (i, j) holds the elements of level ``L_i`` inside ``K_j``."""
    chain_ = downset_chain(p)
    if not chain_:
        raise PosetError("the empty poset has no composition matrix")
    levels = [lev for _, lev, _ in chain_]
    ks = [k for _, _, k in chain_]
    return CompositionMatrix(tuple(tuple(lev & k for k in ks) for lev in levels))


def poset_from_composition_matrix(m: CompositionMatrix) -> Poset:
    """Read the poset back: an element in row i lies above everything in columns < i."""
    m.validate()
    n = m.size
    cols = [m.column_union(j) for j in range(n)]
    labels = sorted(m.ground_set(), key=label_key)
    rels = []
    for i in range(n):
        below = frozenset().union(*cols[:i])
        for a in m.row_union(i):
            rels.extend((b, a) for b in below)
    return Poset(labels, rels)


# -- generalized snake lattices -----------------------------------------


def _check_word(word: str) -> str:
    word = word.strip()
    if word.startswith("ε"):
        word = word[1:]
    if any(ch not in "LR" for ch in word):
        raise ValueError(f"snake word must be over {{L, R}}, got {word!r}")
    return word


def snake_covers(word: str) -> list[tuple[int, int]]:
    """Cover pairs ``(i, j)``, meaning alpha_i is covered by alpha_j, of P(epsilon w)."""
    word = _check_word(word)
    covers = [(0, 1), (0, 2), (1, 3), (2, 3)]
    for l in range(1, len(word) + 1):
        cur = word[l - 1]
        if l == 1:
            turn = cur == "L"
        else:
            turn = word[l - 2] != cur
        low = 2 * l - 1 if turn else 2 * l
        covers += [(2 * l + 1, 2 * l + 3), (2 * l + 2, 2 * l + 3), (low, 2 * l + 2)]
    return sorted(covers)


def snake_poset(word: str) -> DistributiveLattice:
    """The generalized snake lattice P(epsilon w); elements are alpha_0.. in index order.

    Element ``k`` is named ``a{k}`` and is represented by the set of
    join-irreducible names below it.
    """
    word = _check_word(word)
    labels = [f"a{k}" for k in range(2 * len(word) + 4)]
    order = Poset(labels, [(labels[i], labels[j]) for i, j in snake_covers(word)])
    return lattice_from_order(order)


def recognize_snake(lat: DistributiveLattice) -> str | None:
    """Find ``w`` with ``lat`` equal to P(epsilon w) up to relabelling, or ``None``.

    The alpha-labelling is grown bottom-up following the recursive
    definition; the two choices for alpha_1/alpha_2 and the letter at each
    step are the only branch points (L before R).
    """
    n = len(lat)
    if n < 4 or n % 2:
        return None
    covers = lat.covers()
    ups: list[list[int]] = [[] for _ in range(n)]
    downs: list[list[int]] = [[] for _ in range(n)]
    for i, j in covers:
        ups[i].append(j)
        downs[j].append(i)
    bottom = lat.bottom
    if len(ups[bottom]) != 2:
        return None
    length = (n - 4) // 2

    def top_of(x: int, y: int) -> int | None:
        common = set(ups[x]) & set(ups[y])
        if len(common) != 1:
            return None
        z = common.pop()
        return z if sorted(downs[z]) == sorted((x, y)) else None

    def extend(alpha: list[int], word: str) -> str | None:
        l = len(word) + 1
        if l > length:
            return word if len(alpha) == n and not ups[alpha[-1]] else None
        assigned = set(alpha)
        for letter in "LR":
            if l == 1:
                turn = letter == "L"
            else:
                turn = word[-1] != letter
            low = alpha[2 * l - 1] if turn else alpha[2 * l]
            for new in sorted(ups[low]):
                if new in assigned or downs[new] != [low]:
                    continue
                z = top_of(alpha[2 * l + 1], new)
                if z is None or z in assigned:
                    continue
                found = extend(alpha + [new, z], word + letter)
                if found is not None:
                    return found
        return None

    first, second = sorted(ups[bottom])
    for a1, a2 in ((first, second), (second, first)):
        if downs[a1] != [bottom] or downs[a2] != [bottom]:
            continue
        a3 = top_of(a1, a2)
        if a3 is None:
            continue
        found = extend([bottom, a1, a2, a3], "")
        if found is not None:
            return found
    return None


def predict_khovanskii(p: Poset) -> bool:
    """Combinatorial prediction: every ordinal summand is {(2+2),(1+1+1)}-free."""
    return all(is_free(block) for block in ordinal_decompose(p))
