import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bezmf import (
    FactoredElement,
    Potential,
    factor_integer,
    gcd,
    gcd_many,
    index_set,
    is_critical_divisor,
    is_prime,
    lcm,
    lcm_many,
    parse_element,
    parse_potential,
    reduction,
    validate_potential,
)
from bezmf.errors import (
    BackendMismatch,
    BoundExceeded,
    DuplicatePrime,
    NonPrimeInteger,
    NotADivisor,
    OrderBelowTwo,
    ParseError,
    ZeroElement,
)


def fe(text):
    return parse_element(text)


class TestGcdLcm:
    def test_gcd_examples(self):
        assert gcd(fe("p^2*q"), fe("p*q^3")) == fe("p*q")
        assert gcd(fe("x"), fe("x")) == fe("x")
        assert gcd(fe("12"), fe("18")).value() == 6

    def test_lcm_examples(self):
        assert lcm(fe("p^2*q"), fe("p*q^3")) == fe("p^2*q^3")
        assert lcm(fe("1"), fe("x")) == fe("x")
        assert lcm(fe("4"), fe("6")).value() == 12

    def test_unit_is_canonical_positive(self):
        assert gcd(fe("-12"), fe("18")).sign == 1
        assert lcm(fe("-4"), fe("-6")).sign == 1


PRIMES = ("a", "b", "c")

factored = st.builds(
    FactoredElement.from_map,
    st.dictionaries(st.sampled_from(PRIMES), st.integers(0, 6), max_size=3),
)


class TestArithmeticLaws:
    @given(factored, factored)
    def test_product_law(self, x, y):
        assert gcd(x, y) * lcm(x, y) == (x * y).normalized()

    @given(factored, factored, factored)
    def test_triple_identity(self, a, b, c):
        lhs = lcm_many([a, b, c]) * gcd(a, b) * gcd(b, c) * gcd(c, a)
        rhs = (a * b * c).normalized() * gcd_many([a, b, c])
        assert lhs == rhs

    @given(factored, factored, factored)
    def test_gcd_multiplicative_on_coprime(self, x, y, r):
        if not gcd(x, y).is_unit():
            return
        assert gcd(x * y, r) == gcd(x, r) * gcd(y, r)

    @given(factored, factored)
    def test_gcd_symmetric_and_divides(self, x, y):
        g = gcd(x, y)
        assert g == gcd(y, x)
        assert g.divides(x) and g.divides(y)


class TestFactoredElement:
    def test_canonical_sparse_form(self):
        x = FactoredElement.from_map({"p": 2, "q": 0})
        assert x.exps == (("p", 2),)

    def test_association_ignores_unit(self):
        assert fe("-p").is_associate(fe("p"))
        assert fe("-p") != fe("p")

    def test_divide_exact_and_errors(self):
        assert fe("p^3*q").divide(fe("p")) == fe("p^2*q")
        with pytest.raises(NotADivisor):
            fe("p").divide(fe("q"))

    def test_value_and_str(self):
        assert fe("-8").value() == -8
        assert str(fe("2^3*3^3")) == "2^3*3^3"
        assert str(fe("1")) == "1"
        assert str(fe("-p^2")) == "-p^2"


class TestFactorInteger:
    def test_examples(self):
        assert factor_integer(216) == fe("2^3*3^3")
        assert factor_integer(-8) == FactoredElement.from_map({2: 3}, -1)
        assert factor_integer(1).is_unit()

    def test_zero_and_bound(self):
        with pytest.raises(ZeroElement):
            factor_integer(0)
        with pytest.raises(BoundExceeded):
            factor_integer(10**30)

    def test_large_semiprime(self):
        n = 1000003 * 1000033
        f = factor_integer(n)
        assert f.as_dict() == {1000003: 1, 1000033: 1}

    @given(st.integers(-10**9, 10**9).filter(lambda n: n != 0))
    @settings(max_examples=60)
    def test_roundtrip(self, n):
        f = factor_integer(n)
        assert f.value() == n
        assert all(is_prime(p) for p in f.support)


class TestPotential:
    def test_validate_basic(self):
        w = validate_potential([("p", 3), ("q", 2)])
        assert w.r == 2
        assert w.critical_indices_even() == frozenset({1})
        assert w.critical_indices_odd() == frozenset({0})

    def test_validate_errors(self):
        with pytest.raises(OrderBelowTwo):
            validate_potential([("p", 1)])
        with pytest.raises(DuplicatePrime):
            validate_potential([("p", 2), ("p", 3)])
        with pytest.raises(NonPrimeInteger):
            validate_potential([(4, 2)])
        with pytest.raises(BackendMismatch):
            validate_potential([("p", 2), (3, 2)])

    def test_integer_backend_from_value(self):
        w = parse_potential("216")
        assert w.critical == ((2, 3), (3, 3))
        assert w.w_value() == 216

    def test_reduction(self):
        assert reduction(parse_potential("p^3*q^2")) == fe("p*q")
        assert reduction(parse_potential("p^2")) == fe("p")
        assert reduction(parse_potential("216")).value() == 6

    def test_reduction_generates_critical_ideal(self, w216):
        wred = reduction(w216)
        wf = w216.w_factored()
        for nd in w216.all_divisors():
            d = nd.to_factored()
            if is_critical_divisor(d, w216):
                assert d.divides(wred)

    def test_is_critical_divisor(self):
        w = parse_potential("p^3")
        assert is_critical_divisor(fe("p"), w)
        assert not is_critical_divisor(fe("p^2"), w)
        assert not is_critical_divisor(fe("1"), w)

    def test_json_roundtrip(self, wp3q3):
        again = Potential.from_json(json.loads(json.dumps(wp3q3.to_json())))
        assert again == wp3q3

    def test_drop_primes(self, wp3q3):
        assert wp3q3.drop_primes([0]).critical == (("q", 3),)


class TestNormalizedDivisor:
    def test_roundtrip_on_a_w(self, wp3q3):
        for nd in wp3q3.all_divisors():
            assert wp3q3.divisor(nd.exps) == nd
            assert wp3q3.divisor(nd.to_factored()) == nd

    def test_index_set(self):
        w = parse_potential("p^3*q^2")
        assert index_set(w.divisor(fe("p^2"))) == {0}
        assert index_set(w.one()) == frozenset()
        assert index_set(w.divisor(fe("p*q"))) == {0, 1}

    def test_complement_and_bounds(self, w8):
        v = w8.divisor(2)
        assert v.complement().value() == 4
        with pytest.raises(NotADivisor):
            w8.divisor(16)
        with pytest.raises(NotADivisor):
            w8.divisor(5)


class TestGrammar:
    def test_parse_potential_variants(self):
        assert parse_potential("p^3*q^2").critical == (("p", 3), ("q", 2))
        assert parse_potential("2^3*3^3").critical == ((2, 3), (3, 3))
        assert parse_potential("p*q^2").noncritical == ("p",)
        assert parse_potential("8*9").critical == ((2, 3), (3, 2))

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_potential("")
        with pytest.raises(ParseError):
            parse_potential("p^")
        with pytest.raises(ParseError):
            parse_potential("1")
        with pytest.raises(NonPrimeInteger):
            parse_potential("4^2")

    def test_element_roundtrip_through_str(self):
        for text in ("p^3*q^2", "2^3*3^3", "-2^3", "1"):
            x = parse_element(text)
            assert parse_element(str(x)) == x
