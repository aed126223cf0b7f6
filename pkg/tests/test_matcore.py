import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from siegelsums.matcore import (
    GaussianInt,
    HalfIntegralForm,
    IntMat2,
    SingularModulusError,
    SymRat2,
    aut_count,
    elementary_divisors,
    gaussian_factor,
    gaussian_totient,
    gl2_equivalence,
    is_fundamental_discriminant,
    is_go2,
    kronecker,
    minkowski_reduce,
    representations,
    solve_integer_system,
)

I = IntMat2.identity()


class TestElementaryDivisors:
    def test_identity(self):
        c1, c2, u, v = elementary_divisors(I)
        assert (c1, c2) == (1, 1)

    def test_diagonal_with_divisibility(self):
        assert elementary_divisors(IntMat2(2, 0, 0, 4))[:2] == (2, 4)

    def test_upper_triangular(self):
        # oracle: c1 = gcd of entries, c2 = |det| / c1
        m = IntMat2(2, 1, 0, 3)
        c1, c2, _, _ = elementary_divisors(m)
        g = math.gcd(math.gcd(2, 1), 3)
        assert (c1, c2) == (g, abs(m.det()) // g) == (1, 6)

    def test_singular_rejected(self):
        with pytest.raises(SingularModulusError):
            elementary_divisors(IntMat2(1, 2, 2, 4))

    @settings(max_examples=150, deadline=None)
    @given(st.tuples(*[st.integers(-20, 20)] * 4))
    def test_round_trip(self, entries):
        c = IntMat2(*entries)
        if c.det() == 0:
            return
        c1, c2, u, v = elementary_divisors(c)
        assert u.mul(c).mul(v) == IntMat2.diag(c1, c2)
        assert c1 >= 1 and c2 % c1 == 0 and c1 * c2 == abs(c.det())
        assert u.is_unimodular() and v.is_unimodular()
        # gcd oracle for the first divisor
        assert c1 == math.gcd(math.gcd(abs(c.a), abs(c.b)),
                              math.gcd(abs(c.c), abs(c.d)))


class TestIntegerSolver:
    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_consistent_systems_solve(self, data):
        nr = data.draw(st.integers(1, 6))
        nc = data.draw(st.integers(1, 8))
        rows = [[data.draw(st.integers(-9, 9)) for _ in range(nc)]
                for _ in range(nr)]
        x0 = [data.draw(st.integers(-5, 5)) for _ in range(nc)]
        rhs = [sum(r[j] * x0[j] for j in range(nc)) for r in rows]
        x = solve_integer_system(rows, rhs)
        assert x is not None
        assert all(sum(r[j] * x[j] for j in range(nc)) == b
                   for r, b in zip(rows, rhs))

    def test_insoluble(self):
        assert solve_integer_system([[2]], [1]) is None


class TestMinkowskiReduce:
    def test_identity_fixed(self):
        red, u = minkowski_reduce(SymRat2.from_ints(1, 0, 1))
        assert red == SymRat2.from_ints(1, 0, 1)

    def test_already_reduced(self):
        red, _ = minkowski_reduce(SymRat2.from_ints(1, 0, 3))
        assert red == SymRat2.from_ints(1, 0, 3)

    def test_reduction_example(self):
        # exhaustive short-vector oracle: lattice minimum of [[5,4],[4,5]] is 2
        a = SymRat2.from_ints(5, 4, 5)
        minimum = min(a.evaluate(x, y)
                      for x in range(-10, 11) for y in range(-10, 11)
                      if (x, y) != (0, 0))
        red, u = minkowski_reduce(a)
        assert red.a11 == minimum == 2
        assert (red.a11, abs(red.a12), red.a22) == (2, 1, 5)
        assert a.conjugate(u) == red

    def test_non_positive_definite_rejected(self):
        with pytest.raises(ValueError):
            minkowski_reduce(SymRat2.from_ints(1, 3, 1))

    @settings(max_examples=120, deadline=None)
    @given(st.integers(1, 25), st.integers(-18, 18), st.integers(1, 25),
           st.integers(1, 4))
    def test_preserves_det_and_reduces(self, a11, a12, a22, den):
        a = SymRat2(Fraction(a11), Fraction(a12, den), Fraction(a22))
        if not a.is_positive_definite():
            return
        red, u = minkowski_reduce(a)
        assert red.det() == a.det()
        assert red.is_positive_definite()
        assert 2 * abs(red.a12) <= red.a11 <= red.a22
        assert red.a12 >= 0
        assert a.conjugate(u) == red


class TestFormEquivalence:
    def test_identity_aut_8(self):
        f = HalfIntegralForm.identity()
        u = gl2_equivalence(f, f)
        assert u is not None and f.conjugate_left(u) == f
        assert aut_count(f) == 8

    def test_swap_equivalence(self):
        q = HalfIntegralForm(1, 0, 2)
        t = HalfIntegralForm(2, 0, 1)
        u = gl2_equivalence(q, t)
        assert u is not None
        assert q.conjugate_left(u) == t

    def test_different_determinants(self):
        assert gl2_equivalence(HalfIntegralForm.identity(),
                               HalfIntegralForm(1, 0, 2)) is None

    def test_aut_counts_divide_24_and_even(self):
        for f in (HalfIntegralForm(1, 0, 1), HalfIntegralForm(1, 0, 2),
                  HalfIntegralForm(1, 1, 1), HalfIntegralForm(2, 1, 3),
                  HalfIntegralForm(3, 2, 5)):
            n = aut_count(f)
            assert 24 % n == 0 and n % 2 == 0

    def test_representation_enumeration(self):
        f = HalfIntegralForm.identity()
        assert representations(f, 1) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
        assert representations(f, 3) == []


class TestKronecker:
    def test_trivial_character(self):
        assert all(kronecker(1, n) == 1 for n in range(0, 60))

    def test_chi_minus4(self):
        # chi_{-4}(n) = (-1)^((n-1)/2) on odd n, 0 on even
        for n in range(1, 60):
            want = 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)
            assert kronecker(-4, n) == want
        assert kronecker(-4, 3) == -1

    def test_shared_factor(self):
        assert kronecker(5, 5) == 0

    def test_matches_legendre_on_odd_primes(self):
        for p in (3, 5, 7, 11, 13, 17, 19, 23):
            for q in (1, -4, 5, -3, 8, 13):
                if q % p == 0:
                    continue
                lg = pow(q % p, (p - 1) // 2, p)
                lg = -1 if lg == p - 1 else lg
                assert kronecker(q, p) == lg

    def test_periodicity_mod_4q(self):
        for q in (1, -4, 5, -3, 8, 13):
            m = 4 * abs(q)
            for n in range(1, 3 * m):
                assert kronecker(q, n) == kronecker(q, n + m)

    @settings(max_examples=120, deadline=None)
    @given(st.sampled_from([1, -4, 5, -3, 8, 13, -20, 65]),
           st.integers(1, 300), st.integers(1, 300))
    def test_completely_multiplicative(self, q, m, n):
        assert kronecker(q, m * n) == kronecker(q, m) * kronecker(q, n)


class TestGaussianTotient:
    def test_examples(self):
        assert gaussian_totient(GaussianInt(1, 0)) == 1
        assert gaussian_totient(GaussianInt(1, 1)) == 1
        assert gaussian_totient(GaussianInt(3, 0)) == 8

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            gaussian_totient(GaussianInt(0, 0))

    def test_factorization_reassembles(self):
        rng = random.Random(5)
        for _ in range(60):
            g = GaussianInt(rng.randint(-7, 7), rng.randint(-7, 7))
            if g.norm() == 0:
                continue
            prod_norm = 1
            for pi, e in gaussian_factor(g):
                prod_norm *= pi.norm() ** e
            assert prod_norm == g.norm()

    def test_multiplicative_on_coprime(self):
        gs = [GaussianInt(x, y) for x in range(-7, 8) for y in range(0, 8)
              if 1 <= x * x + y * y <= 50]
        for g1 in gs:
            for g2 in gs:
                if math.gcd(g1.norm(), g2.norm()) != 1:
                    continue
                assert (gaussian_totient(g1.mul(g2))
                        == gaussian_totient(g1) * gaussian_totient(g2))


class TestGO2:
    def test_examples(self):
        assert is_go2(I)
        assert is_go2(IntMat2(2, 1, -1, 2))
        assert not is_go2(IntMat2(1, 2, 3, 4))
        assert not is_go2(IntMat2.zero())

    def test_characterization_via_gram(self):
        # C in GO2 <=> C^T C = |det C| I, C != 0
        for a in range(-3, 4):
            for b in range(-3, 4):
                for c in range(-3, 4):
                    for d in range(-3, 4):
                        m = IntMat2(a, b, c, d)
                        if m.entries() == (0, 0, 0, 0):
                            continue
                        gram = m.t().mul(m)
                        ortho = (gram.b == 0 and gram.a == gram.d
                                 and gram.a == abs(m.det()))
                        assert is_go2(m) == ortho


def test_fundamental_discriminants():
    assert is_fundamental_discriminant(1)
    for q in (-4, 5, -3, 8, 12, 13, -20, -52, 65):
        assert is_fundamental_discriminant(q)
    for q in (2, 3, -5, 16, 0, -12, 9, 45):
        assert not is_fundamental_discriminant(q)
