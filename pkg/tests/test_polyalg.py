import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, strategies as st

from khovlat.polyalg import (
    Monomial,
    MonomialOrder,
    OrderCompatibilityError,
    Polynomial,
    SubductionLimitError,
    canonical_extension,
    compatible_order,
    format_polynomial,
    hibi_generators,
    is_linear_extension,
    parse_polynomial,
    plucker_identity_check,
    plucker_lattice,
    represent_initial,
    subduction,
)
from khovlat.poset import Poset, antichain, build_lattice, chain, enumerate_posets

import oracles

NVARS = 4
TWO_PLUS_TWO = Poset("abcd", [("a", "b"), ("c", "d")])

exponents = st.tuples(*[st.integers(0, 3)] * NVARS)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
dense_polys = st.dictionaries(exponents, coeffs, max_size=5)
orders = st.permutations(range(NVARS)).map(lambda r: MonomialOrder(tuple(r)))


def mono(exp):
    return Monomial((v, e) for v, e in enumerate(exp) if e)


def poly(dense):
    return Polynomial((mono(m), c) for m, c in dense.items())


def dense(p):
    out = {}
    for m, c in p.terms.items():
        d = [0] * NVARS
        for v, e in m.exps:
            d[v] = e
        out[tuple(d)] = c
    return out


def v(k):
    return Polynomial.variable(k)


# -- monomials and polynomials -----------------------------------------


def test_monomial_basics():
    m = Monomial.of(2, 0, 2)
    assert m.as_dict() == {0: 1, 2: 2} and m.degree == 3
    assert Monomial([(1, 0)]) == Monomial()
    assert Monomial.of(0).divides(m) and not m.divides(Monomial.of(0))
    assert m * Monomial.of(1) == Monomial.of(0, 1, 2, 2)
    assert Monomial.of(1) ** 3 == Monomial([(1, 3)])


def test_polynomial_normalizes():
    x = v(0)
    assert x - x == Polynomial() and not (x - x)
    p = Polynomial([(Monomial.of(0), 1), (Monomial.of(0), Fraction(-1, 2))])
    assert p.terms == {Monomial.of(0): Fraction(1, 2)}
    assert Polynomial(p.terms) == p


@given(dense_polys, dense_polys, dense_polys)
def test_ring_axioms(a, b, c):
    pa, pb, pc = poly(a), poly(b), poly(c)
    assert pa + pb == pb + pa
    assert pa * pb == pb * pa
    assert (pa + pb) + pc == pa + (pb + pc)
    assert (pa * pb) * pc == pa * (pb * pc)
    assert pa * (pb + pc) == pa * pb + pa * pc
    assert pa - pa == Polynomial()
    assert pa * Polynomial.constant(1) == pa


@given(dense_polys, dense_polys)
def test_arithmetic_matches_oracle(a, b):
    assert dense(poly(a) * poly(b)) == oracles.poly_mul(a, b)
    assert dense(poly(a) + poly(b)) == oracles.poly_add(a, b)
    assert dense(poly(a) - poly(b)) == oracles.poly_add(a, b, -1)


# -- orders ------------------------------------------------------------


@given(orders, exponents, exponents, exponents)
def test_order_axioms(order, a, b, c):
    ma, mb, mc = mono(a), mono(b), mono(c)
    assert not order.less(ma, Monomial())
    assert order.less(ma, mb) or order.less(mb, ma) or ma == mb
    assert not (order.less(ma, mb) and order.less(mb, ma))
    if order.less(ma, mb):
        assert order.less(ma * mc, mb * mc)
        assert ma.degree <= mb.degree


def test_degrevlex_convention():
    order = MonomialOrder((0, 1, 2))  # x0 < x1 < x2
    assert order.less(Monomial.of(0), Monomial.of(1))
    # same degree: the one with less of the smallest variable is larger
    assert order.less(Monomial.of(0, 2), Monomial.of(1, 1))


@given(dense_polys.filter(bool), dense_polys.filter(bool), orders)
def test_initial_term_is_multiplicative(a, b, order):
    pa, pb = poly(a), poly(b)
    ca, ma = pa.initial_term(order)
    cb, mb = pb.initial_term(order)
    assert (pa * pb).initial_term(order) == (ca * cb, ma * mb)


def test_compatible_order_examples():
    lat = build_lattice(antichain(2))
    order = compatible_order(lat)
    assert order.ranking[0] == lat.bottom
    gens = hibi_generators(lat, order)
    assert [g.initial for g in gens] == [Monomial.of(1, 2)]
    fig3 = build_lattice(TWO_PLUS_TWO)
    gens = hibi_generators(fig3, compatible_order(fig3))
    assert gens.gens[gens.index_of(1, 2)].initial == Monomial.of(1, 2)
    boolean = build_lattice(antichain(3))
    gens = hibi_generators(boolean, compatible_order(boolean))
    assert gens.gens[gens.index_of(3, 4)].initial == Monomial.of(3, 4)


def test_compatible_order_rejects_non_extensions():
    lat = build_lattice(chain(2))
    with pytest.raises(ValueError):
        compatible_order(lat, [1, 0, 2])
    assert is_linear_extension(lat, canonical_extension(lat))


def test_compatibility_is_verified_for_every_extension():
    from khovlat.checker import linear_extensions

    for p in enumerate_posets(4):
        lat = build_lattice(p)
        for ext in linear_extensions(lat, 6, seed=3):
            compatible_order(lat, ext)  # raises OrderCompatibilityError on failure
    assert issubclass(OrderCompatibilityError, AssertionError)


# -- generators --------------------------------------------------------


def test_generator_counts():
    lat = build_lattice(chain(3))
    assert len(hibi_generators(lat, compatible_order(lat))) == 0
    lat = build_lattice(TWO_PLUS_TWO)
    assert len(hibi_generators(lat, compatible_order(lat))) == 9
    lat, _, _ = plucker_lattice(1)
    assert len(hibi_generators(lat, compatible_order(lat))) == 1


def test_generators_are_symmetric_quadrics():
    for p in enumerate_posets(4):
        lat = build_lattice(p)
        gens = hibi_generators(lat, compatible_order(lat))
        for g in gens:
            i, j = g.pair
            assert g.poly.is_homogeneous() and g.poly.degree() == 2
            assert lat.meet[i][j] == lat.meet[j][i] and lat.join[i][j] == lat.join[j][i]
            expected = v(i) * v(j) - v(lat.meet[i][j]) * v(lat.join[i][j])
            assert g.poly == expected and g.initial == Monomial.of(i, j)


# -- representation (*) ------------------------------------------------


def grid_gens():
    lat = build_lattice(TWO_PLUS_TWO)
    return hibi_generators(lat, compatible_order(lat))


def test_represent_initial_examples():
    gens = grid_gens()
    a = lambda k: k - 1  # 1-based element numbers
    rep = represent_initial(Monomial.of(a(2), a(3)), gens)
    assert [gens.gens[k].pair for k in rep] == [(a(2), a(3))]
    assert represent_initial(Monomial.of(a(1), a(9)), gens) is None
    rep = represent_initial(Monomial.of(a(2), a(3), a(4), a(6)), gens)
    assert sorted(gens.gens[k].pair for k in rep) == [(a(2), a(3)), (a(4), a(6))]
    assert represent_initial(Monomial(), gens) is None


def _small_lattices():
    for n in range(2, 5):
        for p in enumerate_posets(n):
            lat = build_lattice(p)
            if len(lat) <= 12:
                yield lat


def test_represent_initial_against_brute_force():
    rng = random.Random(11)
    for lat in _small_lattices():
        gens = hibi_generators(lat, compatible_order(lat))
        if not len(gens):
            continue
        n = len(lat)
        initials = [tuple(g.initial.as_dict().get(k, 0) for k in range(n)) for g in gens]
        targets = set()
        for deg in (2, 4):
            for combo in combinations_with_replacement(range(n), deg):
                if len(targets) > 400:
                    break
                targets.add(combo)
        for _ in range(40):
            targets.add(tuple(sorted(rng.randrange(n) for _ in range(6))))
        for combo in targets:
            m = Monomial.of(*combo)
            exp = tuple(combo.count(k) for k in range(n))
            brute = oracles.brute_representations(exp, initials, len(combo) // 2)
            rep = represent_initial(m, gens)
            assert (rep is None) == (not brute), (lat, combo)
            if rep is not None:
                prod = Monomial()
                for k in rep:
                    prod = prod * gens.gens[k].initial
                assert prod == m


# -- subduction --------------------------------------------------------


def test_subduction_examples():
    gens = grid_gens()
    res = subduction(Polynomial.constant(3), gens)
    assert not res.r and res.q == Polynomial.constant(3) and res.trace == []
    res = subduction(Polynomial(), gens)
    assert not res.q and not res.r
    f = gens.gens[gens.index_of(1, 2)].poly * gens.gens[gens.index_of(3, 5)].poly
    res = subduction(f, gens)
    assert res.reduced and res.q == f
    assert res.trace[0].kind == "subduce" and len(res.trace[0].generators) == 2


def test_subduction_limit():
    gens = grid_gens()
    f = gens.gens[0].poly * gens.gens[1].poly + Polynomial.variable(0) ** 4
    with pytest.raises(SubductionLimitError):
        subduction(f, gens, max_steps=1)


def test_subduction_reconstructs_random_inputs():
    rng = random.Random(5)
    for lat in list(_small_lattices())[::7]:
        gens = hibi_generators(lat, compatible_order(lat))
        n = len(lat)
        for _ in range(5):
            deg = rng.choice((2, 4))
            f = Polynomial(
                (Monomial.of(*(rng.randrange(n) for _ in range(deg))), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
                for _ in range(4)
            )
            res = subduction(f, gens)
            assert res.q + res.r == f


# -- Pluecker ladders --------------------------------------------------


@pytest.mark.parametrize("m", range(1, 6))
def test_plucker(m):
    lat, alphas, betas = plucker_lattice(m)
    assert len(lat) == 2 * (m + 1)
    assert len(set(alphas + betas)) == 2 * (m + 1)
    assert plucker_identity_check(m)


def test_plucker_bad_m():
    with pytest.raises(ValueError):
        plucker_lattice(0)


# -- text form ---------------------------------------------------------


def test_format_polynomial():
    order = MonomialOrder((0, 1, 2))
    names = ["{}", "{a}", "{a,b}"]
    p = v(1) * v(1) - v(0) * v(2) * Polynomial.constant(Fraction(3, 2)) + Polynomial.constant(2)
    text = format_polynomial(p, order, names)
    assert text == "1/1*x{a}^2 - 3/2*x{a,b}*x{} + 2/1"
    assert parse_polynomial(text, names) == p
    assert format_polynomial(Polynomial(), order, names) == "0"
    assert format_polynomial(-v(0), order, names) == "-1/1*x{}"


@given(dense_polys, orders)
def test_text_round_trip(a, order):
    names = ["{}", "{a}", "{b}", "{a,b}"]
    p = poly(a)
    text = format_polynomial(p, order, names)
    assert parse_polynomial(text, names) == p
    assert format_polynomial(parse_polynomial(text, names), order, names) == text


@pytest.mark.parametrize("bad", ["1/1*xq", "1/1*x{} 1/1", "x{}"])
def test_parse_polynomial_errors(bad):
    with pytest.raises(ValueError):
        parse_polynomial(bad, ["{}"])
