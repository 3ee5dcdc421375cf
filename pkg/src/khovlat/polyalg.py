"""Exact sparse polynomials, compatible degrevlex orders, Hibi binomials and subduction.

Variables are integers (lattice element indices).  Coefficients are
``fractions.Fraction``; a polynomial never stores a zero coefficient, so
structural equality is polynomial equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poset import DistributiveLattice, label_key

__all__ = [
    "Monomial",
    "Polynomial",
    "MonomialOrder",
    "Generator",
    "GeneratorSet",
    "SubductionStep",
    "SubductionResult",
    "SubductionLimitError",
    "OrderCompatibilityError",
    "canonical_extension",
    "is_linear_extension",
    "compatible_order",
    "hibi_generators",
    "represent_initial",
    "subduction",
    "plucker_lattice",
    "plucker_identity_check",
    "format_polynomial",
    "parse_polynomial",
]


class SubductionLimitError(RuntimeError):
    """Raised when subduction exceeds its iteration cap."""


class OrderCompatibilityError(AssertionError):
    """A supposedly compatible order gave some generator a wrong initial monomial."""


class Monomial:
    """Sparse exponent vector: a sorted tuple of ``(variable, exponent)`` with exponents > 0."""

    __slots__ = ("exps", "degree", "_hash")

    def __init__(self, exps: Iterable[tuple[int, int]] = ()):
        merged: dict[int, int] = {}
        for var, e in exps:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                merged[var] = merged.get(var, 0) + e
        self.exps = tuple(sorted(merged.items()))
        self.degree = sum(merged.values())
        self._hash = hash(self.exps)

    @classmethod
    def of(cls, *variables: int) -> "Monomial":
        """Product of the given variables, with repetition."""
        return cls((v, 1) for v in variables)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __repr__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(f"x{v}" + (f"^{e}" if e > 1 else "") for v, e in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.exps + other.exps)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial((v, e * k) for v, e in self.exps)

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    def divides(self, other: "Monomial") -> bool:
        od = dict(other.exps)
        return all(od.get(v, 0) >= e for v, e in self.exps)

    def variables(self) -> list[int]:
        return [v for v, _ in self.exps]

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.exps)


ONE = Monomial()


class Polynomial:
    """Immutable polynomial over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for mono, c in items:
            c = Fraction(c)
            if c:
                acc[mono] = acc.get(mono, Fraction(0)) + c
        self.terms = {m: c for m, c in acc.items() if c}

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def monomial(cls, mono: Monomial, c=1) -> "Polynomial":
        return cls({mono: c})

    @classmethod
    def variable(cls, v: int) -> "Polynomial":
        return cls({Monomial.of(v): 1})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        parts = sorted(self.terms.items(), key=lambda mc: (-mc[0].degree, mc[0].exps))
        return "Polynomial(" + " + ".join(f"{c}*{m}" for m, c in parts) + ")"

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.constant(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial({m: c * v for m, v in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self.terms}) <= 1

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m.variables()}

    def substitute(self, images: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace each variable ``v`` by ``images[v]``."""
        total = Polynomial()
        for m, c in self.terms.items():
            term = Polynomial.constant(c)
            for v, e in m.exps:
                term = term * images[v] ** e
            total = total + term
        return total

    def initial_term(self, order: "MonomialOrder") -> tuple[Fraction, Monomial]:
        if not self.terms:
            raise ValueError("the zero polynomial has no initial term")
        mono = max(self.terms, key=order.key)
        return self.terms[mono], mono

    def initial_monomial(self, order: "MonomialOrder") -> Monomial:
        return self.initial_term(order)[1]

    def sorted_terms(self, order: "MonomialOrder") -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)


@dataclass(frozen=True)
class MonomialOrder:
    """Degree reverse lexicographic order.

    ``ranking`` lists the variables from smallest to largest.  Monomials of
    equal degree are compared at the smallest variable where their
    exponents differ; the one with the smaller exponent there is larger.
    """

    ranking: tuple[int, ...]
    kind: str = "degrevlex"
    _pos: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.ranking)) != len(self.ranking):
            raise ValueError("ranking repeats a variable")
        object.__setattr__(self, "ranking", tuple(self.ranking))
        object.__setattr__(self, "_pos", {v: k for k, v in enumerate(self.ranking)})

    def rank(self, var: int) -> int:
        return self._pos[var]

    def key(self, m: Monomial) -> tuple:
        dense = [0] * len(self.ranking)
        pos = self._pos
        for v, e in m.exps:
            dense[pos[v]] = -e
        return (m.degree, tuple(dense))

    def less(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) < self.key(b)

    def describe(self, names: Sequence[str] | None = None) -> str:
        shown = [names[v] if names else str(v) for v in self.ranking]
        return "degrevlex: " + " < ".join(f"x{s}" for s in shown)


def canonical_extension(lat: DistributiveLattice) -> list[int]:
    """Elements sorted by (cardinality, lexicographic members)."""
    return sorted(
        range(len(lat)),
        key=lambda k: (
            len(lat.elements[k]),
            tuple(label_key(x) for x in sorted(lat.elements[k], key=label_key)),
        ),
    )


def is_linear_extension(lat: DistributiveLattice, order: Sequence[int]) -> bool:
    if sorted(order) != list(range(len(lat))):
        return False
    pos = {v: k for k, v in enumerate(order)}
    return all(pos[i] < pos[j] for i, j in lat.covers())


def compatible_order(lat: DistributiveLattice, extension: Sequence[int] | None = None) -> MonomialOrder:
    """Degrevlex with variables ranked along a linear extension of ``lat``.

    Raises ``ValueError`` for a sequence that is not a linear extension and
    ``OrderCompatibilityError`` if some ``f_{a,b}`` does not get ``x_a x_b``
    as its initial monomial.
    """
    if extension is None:
        extension = canonical_extension(lat)
    elif not is_linear_extension(lat, extension):
        raise ValueError("order is not a linear extension of the lattice")
    order = MonomialOrder(tuple(extension))
    for i, j in lat.incomparable_pairs():
        f = _hibi_binomial(lat, i, j)
        if f.initial_term(order) != (1, Monomial.of(i, j)):
            raise OrderCompatibilityError(f"initial term of f_{i},{j} is not x_{i}*x_{j}")
    return order


def _hibi_binomial(lat: DistributiveLattice, i: int, j: int) -> Polynomial:
    return Polynomial(
        [(Monomial.of(i, j), 1), (Monomial.of(lat.meet[i][j], lat.join[i][j]), -1)]
    )


@dataclass(frozen=True)
class Generator:
    pair: tuple[int, int]
    poly: Polynomial
    initial: Monomial


@dataclass(frozen=True)
class GeneratorSet:
    lattice: DistributiveLattice
    order: MonomialOrder
    gens: tuple[Generator, ...]

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def index_of(self, i: int, j: int) -> int:
        table = self.__dict__.get("_pair_index")
        if table is None:
            table = {g.pair: k for k, g in enumerate(self.gens)}
            object.__setattr__(self, "_pair_index", table)
        return table[(min(i, j), max(i, j))]

    def product(self, indices: Iterable[int]) -> Polynomial:
        result = Polynomial.constant(1)
        for k in indices:
            result = result * self.gens[k].poly
        return result

    def incidence(self) -> dict[int, list[tuple[int, int]]]:
        """variable -> [(generator index, other variable)] in generator order."""
        table = self.__dict__.get("_incidence")
        if table is None:
            table = {}
            for k, g in enumerate(self.gens):
                a, b = g.pair
                table.setdefault(a, []).append((k, b))
                table.setdefault(b, []).append((k, a))
            object.__setattr__(self, "_incidence", table)
        return table


def hibi_generators(lat: DistributiveLattice, order: MonomialOrder) -> GeneratorSet:
    """One ``x_a x_b - x_{a^b} x_{avb}`` per incomparable pair, in pair order."""
    gens = []
    for i, j in lat.incomparable_pairs():
        f = _hibi_binomial(lat, i, j)
        gens.append(Generator((i, j), f, f.initial_monomial(order)))
    return GeneratorSet(lat, order, tuple(gens))


def represent_initial(m: Monomial, gens: GeneratorSet) -> list[int] | None:
    """Write ``m`` as a product of generator initial monomials.

    All initial monomials are products of two distinct variables, so this
    is an edge decomposition of the exponent vector in the multigraph of
    generator pairs.  Returns generator indices (with repetition) or
    ``None``; the first solution in generator order wins.
    """
    if m.degree == 0 or m.degree % 2:
        return None
    if any(g.initial.degree != 2 or not g.initial.is_squarefree() for g in gens.gens):
        raise ValueError("representation search needs squarefree quadratic initial monomials")
    remaining = m.as_dict()
    incidence = gens.incidence()
    chosen: list[int] = []

    def search(left: int) -> bool:
        if left == 0:
            return True
        v = max(remaining, key=lambda u: (remaining[u], -u))
        e = remaining[v]
        if 2 * e > left:
            return False
        for k, w in incidence.get(v, ()):
            if remaining.get(w, 0) <= 0:
                continue
            remaining[v] -= 1
            remaining[w] -= 1
            for u in (v, w):
                if remaining[u] == 0:
                    del remaining[u]
            chosen.append(k)
            if search(left - 2):
                return True
            chosen.pop()
            remaining[v] = remaining.get(v, 0) + 1
            remaining[w] = remaining.get(w, 0) + 1
        return False

    return chosen if search(m.degree) else None


@dataclass(frozen=True)
class SubductionStep:
    kind: str  # "subduce" or "remainder"
    coefficient: Fraction
    monomial: Monomial
    generators: tuple[int, ...] = ()


@dataclass
class SubductionResult:
    q: Polynomial
    r: Polynomial
    trace: list[SubductionStep]

    @property
    def reduced(self) -> bool:
        """True when the input reduced to a constant, i.e. nothing went to the remainder."""
        return not self.r


def subduction(
    f: Polynomial,
    gens: GeneratorSet,
    order: MonomialOrder | None = None,
    max_steps: int = 10**6,
) -> SubductionResult:
    """Subduce ``f`` by the generators: ``f = q + r`` with ``q`` in the subalgebra.

    The constant left when the loop stops belongs to the subalgebra and is
    added to ``q``.
    """
    order = order or gens.order
    q = Polynomial()
    r = Polynomial()
    p = f
    trace: list[SubductionStep] = []
    steps = 0
    while not p.is_constant():
        steps += 1
        if steps > max_steps:
            raise SubductionLimitError(f"subduction exceeded {max_steps} steps")
        c, mono = p.initial_term(order)
        rep = represent_initial(mono, gens)
        if rep is not None:
            h = gens.product(rep) * c
            q = q + h
            p = p - h
            trace.append(SubductionStep("subduce", c, mono, tuple(rep)))
        else:
            lead = Polynomial.monomial(mono, c)
            r = r + lead
            p = p - lead
            trace.append(SubductionStep("remainder", c, mono))
    q = q + p
    return SubductionResult(q, r, trace)


# -- Pluecker ladders ----------------------------------------------------


def plucker_lattice(m: int) -> tuple[DistributiveLattice, list[int], list[int]]:
    """Divisor lattice of 2*3^m as the ideals of {p} + chain c1<..<cm.

    Returns the lattice with the indices of alpha_1..alpha_{m+1} (ideals
    containing ``p``) and beta_1..beta_{m+1} (ideals without ``p``).
    """
    from .poset import Poset, build_lattice

    if m < 1:
        raise ValueError("m must be at least 1")
    chain_labels = [f"c{k}" for k in range(1, m + 1)]
    base = Poset(["p"] + chain_labels, zip(chain_labels, chain_labels[1:]))
    lat = build_lattice(base)
    alphas, betas = [], []
    for k in range(m + 1):
        prefix = frozenset(chain_labels[:k])
        betas.append(lat.index(prefix))
        alphas.append(lat.index(prefix | {"p"}))
    return lat, alphas, betas


def plucker_identity_check(m: int) -> bool:
    """Every generator is a 2x2 minor with diagonal initial term."""
    lat, alpha, beta = plucker_lattice(m)
    order = compatible_order(lat)
    gens = hibi_generators(lat, order)
    expected = {}
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            a_i, a_j, b_i, b_j = alpha[i], alpha[j], beta[i], beta[j]
            minor = Polynomial.variable(a_i) * Polynomial.variable(b_j) - Polynomial.variable(
                b_i
            ) * Polynomial.variable(a_j)
            expected[(min(a_i, b_j), max(a_i, b_j))] = (minor, Monomial.of(a_i, b_j))
    if set(expected) != {g.pair for g in gens}:
        return False
    return all(expected[g.pair] == (g.poly, g.initial) for g in gens)


# -- text form -----------------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return f"{abs(c.numerator)}/{c.denominator}"


def format_polynomial(p: Polynomial, order: MonomialOrder, names: Sequence[str]) -> str:
    """Canonical text: terms by descending order, coefficients as ``p/q``, variables ``x{...}``.

    ``names`` are lattice element names such as ``{a,b}``; a variable is
    printed as ``x`` followed by its name.
    """
    if not p:
        return "0"
    out = []
    for k, (mono, c) in enumerate(p.sorted_terms(order)):
        factors = [_format_coeff(c)]
        for v in sorted(mono.variables(), key=order.rank, reverse=True):
            e = mono.as_dict()[v]
            factors.append(f"x{names[v]}" + (f"^{e}" if e > 1 else ""))
        body = "*".join(factors)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


_TERM = re.compile(r"\s*([+-])?\s*(\d+)/(\d+)((?:\*x[^*\s^]+(?:\^\d+)?)*)\s*")
_VAR = re.compile(r"\*x([^*\s^]+)(?:\^(\d+))?")


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    text = text.strip()
    if text == "0":
        return Polynomial()
    index = {name: k for k, name in enumerate(names)}
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at offset {pos}: {text[pos:pos + 20]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and m.group(1) is None:
            raise ValueError(f"missing sign at offset {pos}")
        coeff = Fraction(int(m.group(2)), int(m.group(3))) * sign
        exps = []
        for vm in _VAR.finditer(m.group(4)):
            name = vm.group(1)
            if name not in index:
                raise ValueError(f"unknown variable x{name}")
            exps.append((index[name], int(vm.group(2) or 1)))
        terms.append((Monomial(exps), coeff))
        pos = m.end()
    return Polynomial(terms)
