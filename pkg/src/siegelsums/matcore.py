"""Exact 2x2 integer/rational matrix arithmetic and arithmetic functions.

Everything in this module is exact: arbitrary-precision integers and
`fractions.Fraction` rationals, no floating point.  The types defined here
(integer matrices, half-integral binary forms, rational symmetric matrices,
Gaussian integers) are frozen dataclasses and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class SingularModulusError(ValueError):
    """Raised when an operation requires a nonsingular matrix."""


# ---------------------------------------------------------------------------
# Integer 2x2 matrices


@dataclass(frozen=True)
class IntMat2:
    """2x2 integer matrix [[a, b], [c, d]] with exact arithmetic."""

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def adj(self) -> "IntMat2":
        """Adjugate; satisfies M @ adj(M) == det(M) * I exactly."""
        return IntMat2(self.d, -self.b, -self.c, self.a)

    def t(self) -> "IntMat2":
        return IntMat2(self.a, self.c, self.b, self.d)

    def mul(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def add(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(self.a + other.a, self.b + other.b,
                       self.c + other.c, self.d + other.d)

    def neg(self) -> "IntMat2":
        return IntMat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, n: int) -> "IntMat2":
        return IntMat2(n * self.a, n * self.b, n * self.c, n * self.d)

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_symmetric(self) -> bool:
        return self.b == self.c

    @staticmethod
    def identity() -> "IntMat2":
        return IntMat2(1, 0, 0, 1)

    @staticmethod
    def zero() -> "IntMat2":
        return IntMat2(0, 0, 0, 0)

    @staticmethod
    def scalar(n: int) -> "IntMat2":
        return IntMat2(n, 0, 0, n)

    @staticmethod
    def diag(x: int, y: int) -> "IntMat2":
        return IntMat2(x, 0, 0, y)


# ---------------------------------------------------------------------------
# Half-integral binary forms


@dataclass(frozen=True)
class HalfIntegralForm:
    """Symmetric matrix [[t1, t2/2], [t2/2, t4]] with integral t1, t2, t4.

    ``t2`` stores the doubled off-diagonal entry, so the doubled matrix
    [[2*t1, t2], [t2, 2*t4]] is integral.  Positive definiteness is not
    enforced at construction; exponential sums are well defined for any
    symmetric half-integral argument.  Use :meth:`require_positive_definite`
    where the analysis needs it.
    """

    t1: int
    t2: int
    t4: int

    def det4(self) -> int:
        """Four times the determinant, an integer: 4*t1*t4 - t2**2."""
        return 4 * self.t1 * self.t4 - self.t2 * self.t2

    def det(self) -> float:
        return self.det4() / 4.0

    def is_positive_definite(self) -> bool:
        return self.t1 >= 1 and self.det4() >= 1

    def require_positive_definite(self) -> "HalfIntegralForm":
        if not self.is_positive_definite():
            raise ValueError(f"form {self} is not positive definite")
        return self

    def doubled(self) -> IntMat2:
        return IntMat2(2 * self.t1, self.t2, self.t2, 2 * self.t4)

    def evaluate(self, x: int, y: int) -> int:
        """The integer t1*x^2 + t2*x*y + t4*y^2."""
        return self.t1 * x * x + self.t2 * x * y + self.t4 * y * y

    def conjugate_left(self, u: IntMat2) -> "HalfIntegralForm":
        """The form of u^T Q u (exact; stays half-integral)."""
        m = u.t().mul(self.doubled()).mul(u)
        assert m.a % 2 == 0 and m.d % 2 == 0 and m.b == m.c
        return HalfIntegralForm(m.a // 2, m.b, m.d // 2)

    def conjugate_right(self, u: IntMat2) -> "HalfIntegralForm":
        """The form of u Q u^T (exact; stays half-integral)."""
        return self.conjugate_left(u.t())

    def scale(self, n: int) -> "HalfIntegralForm":
        return HalfIntegralForm(n * self.t1, n * self.t2, n * self.t4)

    @staticmethod
    def scalar(m: int) -> "HalfIntegralForm":
        return HalfIntegralForm(m, 0, m)

    @staticmethod
    def identity() -> "HalfIntegralForm":
        return HalfIntegralForm(1, 0, 1)


# ---------------------------------------------------------------------------
# Exact rational symmetric 2x2 matrices


@dataclass(frozen=True)
class SymRat2:
    """Symmetric 2x2 matrix [[a11, a12], [a12, a22]] with Fraction entries."""

    a11: Fraction
    a12: Fraction
    a22: Fraction

    def det(self) -> Fraction:
        return self.a11 * self.a22 - self.a12 * self.a12

    def trace(self) -> Fraction:
        return self.a11 + self.a22

    def is_positive_definite(self) -> bool:
        return self.a11 > 0 and self.det() > 0

    def evaluate(self, x: int, y: int) -> Fraction:
        return self.a11 * x * x + 2 * self.a12 * x * y + self.a22 * y * y

    def conjugate(self, u: IntMat2) -> "SymRat2":
        """u^T A u, exact."""
        b11 = self.evaluate(u.a, u.c)
        b22 = self.evaluate(u.b, u.d)
        b12 = (self.a11 * u.a * u.b + self.a12 * (u.a * u.d + u.b * u.c)
               + self.a22 * u.c * u.d)
        return SymRat2(b11, b12, b22)

    @staticmethod
    def from_ints(a11, a12, a22) -> "SymRat2":
        return SymRat2(Fraction(a11), Fraction(a12), Fraction(a22))


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    """Gaussian integer x + i*y."""

    x: int
    y: int

    def norm(self) -> int:
        return self.x * self.x + self.y * self.y

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.x, -self.y)

    def mul(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.x * other.x - self.y * other.y,
                           self.x * other.y + self.y * other.x)

    def divides_exactly(self, other: "GaussianInt") -> bool:
        """True iff self divides other in Z[i]."""
        n = self.norm()
        if n == 0:
            return False
        w = other.mul(self.conj())
        return w.x % n == 0 and w.y % n == 0

    def exact_div(self, other: "GaussianInt") -> "GaussianInt":
        """self / other; raises if the quotient is not a Gaussian integer."""
        n = other.norm()
        w = self.mul(other.conj())
        if n == 0 or w.x % n or w.y % n:
            raise ValueError(f"{other} does not divide {self}")
        return GaussianInt(w.x // n, w.y // n)


# ---------------------------------------------------------------------------
# Small number-theory helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization of |n| as [(p, e), ...]."""
    n = abs(n)
    out = []
    for p in [2, 3]:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in prime_factors(n))


def is_fundamental_discriminant(q: int) -> bool:
    """True for q = 1 and for discriminants of quadratic fields."""
    if q == 1:
        return True
    if q % 4 == 1:
        return q != 1 and is_squarefree(q)
    if q % 4 == 0:
        m = q // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def kronecker(q: int, n: int) -> int:
    """Kronecker symbol (q/n), completely multiplicative in n."""
    if n == 0:
        return 1 if q in (1, -1) else 0
    if q % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if q < 0:
            result = -result
    # factor out 2s from n; (q/2) depends on q mod 8
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t % 2 == 1 and q % 8 in (3, 5):
        result = -result
    # Jacobi loop on odd positive n, with quadratic reciprocity
    q %= n
    while q != 0:
        while q % 2 == 0:
            q //= 2
            if n % 8 in (3, 5):
                result = -result
        q, n = n, q
        if q % 4 == 3 and n % 4 == 3:
            result = -result
        q %= n
    return result if n == 1 else 0


def gaussian_factor(g: GaussianInt) -> list[tuple[GaussianInt, int]]:
    """Factor a nonzero Gaussian integer into primes (up to units).

    Rational primes are split by residue mod 4: 2 ramifies as (1+i)^2,
    p = 3 mod 4 stays inert, p = 1 mod 4 splits into a conjugate pair
    found by searching a^2 + b^2 = p.
    """
    if g.norm() == 0:
        raise ValueError("zero has no factorization")
    out = []
    work = g
    for p, _ in prime_factors(g.norm()):
        if p == 2:
            candidates = [GaussianInt(1, 1)]
        elif p % 4 == 3:
            candidates = [GaussianInt(p, 0)]
        else:
            a = 1
            while (p - a * a) != math.isqrt(p - a * a) ** 2:
                a += 1
            b = math.isqrt(p - a * a)
            candidates = [GaussianInt(a, b), GaussianInt(a, -b)]
        for pi in candidates:
            e = 0
            while pi.divides_exactly(work):
                work = work.exact_div(pi)
                e += 1
            if e:
                out.append((pi, e))
    assert work.norm() == 1
    return out


def gaussian_totient(g: GaussianInt) -> int:
    """Euler's totient on Z[i]: N(g) * prod over primes pi | g of (1 - 1/N(pi))."""
    if g.norm() == 0:
        raise ValueError("totient of zero is undefined")
    phi = 1
    for pi, e in gaussian_factor(g):
        np_ = pi.norm()
        phi *= np_ ** (e - 1) * (np_ - 1)
    return phi


def is_go2(c: IntMat2) -> bool:
    """Membership in the integral similitude-orthogonal group.

    Matrices [[x, y], [-y, x]] or [[x, y], [y, -x]] with (x, y) != (0, 0);
    exactly the nonzero integer C with C^T C a multiple of the identity.
    """
    if c.entries() == (0, 0, 0, 0):
        return False
    return (c.a == c.d and c.b == -c.c) or (c.a == -c.d and c.b == c.c)


# ---------------------------------------------------------------------------
# Elementary divisors (2x2 Smith form) and general integer linear systems


def elementary_divisors(c: IntMat2) -> tuple[int, int, IntMat2, IntMat2]:
    """Elementary divisors of a nonsingular integer matrix.

    Returns (c1, c2, U, V) with U @ C @ V = diag(c1, c2), c1 | c2,
    c1, c2 >= 1, and U, V unimodular, all exact.
    """
    if c.det() == 0:
        raise SingularModulusError("singular modulus")
    m = [[c.a, c.b], [c.c, c.d]]
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]

    def row_op(s, t, p, q):  # rows <- [[s, t], [p, q]] @ rows, on m and u
        for mat in (m, u):
            r0 = [s * mat[0][j] + t * mat[1][j] for j in range(2)]
            r1 = [p * mat[0][j] + q * mat[1][j] for j in range(2)]
            mat[0], mat[1] = r0, r1

    def col_op(s, t, p, q):  # col0 <- s*c0 + t*c1, col1 <- p*c0 + q*c1, on m and v
        for mat in (m, v):
            c0 = [s * mat[i][0] + t * mat[i][1] for i in range(2)]
            c1 = [p * mat[i][0] + q * mat[i][1] for i in range(2)]
            for i in range(2):
                mat[i][0], mat[i][1] = c0[i], c1[i]

    def clear_offdiag():
        # plain elimination in the divisible case; gcd transforms otherwise
        # (the gcd branch strictly shrinks |m00|, so the loop terminates)
        while m[1][0] != 0 or m[0][1] != 0:
            if m[1][0] != 0:
                a, b = m[0][0], m[1][0]
                if a != 0 and b % a == 0:
                    row_op(1, 0, -(b // a), 1)
                else:
                    g, s, t = _xgcd(a, b)
                    row_op(s, t, -(b // g), a // g)
            if m[0][1] != 0:
                a, b = m[0][0], m[0][1]
                if a != 0 and b % a == 0:
                    col_op(1, 0, -(b // a), 1)
                else:
                    g, s, t = _xgcd(a, b)
                    col_op(s, t, -(b // g), a // g)

    clear_offdiag()
    while m[1][1] % m[0][0] != 0:
        col_op(1, 1, 0, 1)  # mix column 1 into column 0, then re-reduce
        clear_offdiag()
    if m[0][0] < 0:
        row_op(-1, 0, 0, 1)
    if m[1][1] < 0:
        row_op(1, 0, 0, -1)
    c1, c2 = m[0][0], m[1][1]
    um = IntMat2(u[0][0], u[0][1], u[1][0], u[1][1])
    vm = IntMat2(v[0][0], v[0][1], v[1][0], v[1][1])
    assert um.is_unimodular() and vm.is_unimodular()
    assert c1 >= 1 and c2 % c1 == 0 and c1 * c2 == abs(c.det())
    return c1, c2, um, vm


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g = gcd(a, b) > 0 with s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_integer_system(rows: list[list[int]], rhs: list[int]) -> list[int] | None:
    """A particular integer solution x of rows @ x = rhs, or None.

    Dense diagonalization with column-transform tracking; intended for the
    small systems arising in symplectic completion (at most ~8 unknowns).
    """
    nr = len(rows)
    nc = len(rows[0])
    m = [list(r) for r in rows]
    b = list(rhs)
    # column transforms accumulate into v (nc x nc); x = v @ y
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        b[i], b[j] = b[j], b[i]

    def addmul_row(i, j, f):  # row i += f * row j
        m[i] = [x + f * y for x, y in zip(m[i], m[j])]
        b[i] += f * b[j]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_col(i, j, f):  # col i += f * col j
        for r in m:
            r[i] += f * r[j]
        for r in v:
            r[i] += f * r[j]

    k = 0
    while k < min(nr, nc):
        # smallest nonzero |entry| in the remaining block becomes the pivot
        piv = min(
            ((i, j) for i in range(k, nr) for j in range(k, nc) if m[i][j] != 0),
            key=lambda ij: abs(m[ij[0]][ij[1]]),
            default=None,
        )
        if piv is None:
            break
        swap_rows(k, piv[0])
        swap_cols(k, piv[1])
        while True:
            for i in range(k + 1, nr):
                q = m[i][k] // m[k][k]
                if q:
                    addmul_row(i, k, -q)
            dirty = [i for i in range(k + 1, nr) if m[i][k] != 0]
            if dirty:
                # remainder is strictly smaller than the pivot; promote it
                swap_rows(k, dirty[0])
                continue
            for j in range(k + 1, nc):
                q = m[k][j] // m[k][k]
                if q:
                    addmul_col(j, k, -q)
            dirty = [j for j in range(k + 1, nc) if m[k][j] != 0]
            if dirty:
                swap_cols(k, dirty[0])
                continue
            break
        k += 1
    rank = k
    # m is now diagonal on the leading rank block: solve D y = b
    y = [0] * nc
    for i in range(nr):
        if i < rank:
            if b[i] % m[i][i] != 0:
                return None
            y[i] = b[i] // m[i][i]
        elif b[i] != 0:
            return None
    return [sum(v[i][j] * y[j] for j in range(rank)) for i in range(nc)]


# ---------------------------------------------------------------------------
# Minkowski reduction of positive-definite rational forms


def minkowski_reduce(a: SymRat2) -> tuple[SymRat2, IntMat2]:
    """Minkowski-reduce a positive definite rational symmetric matrix.

    Returns (A_red, U) with A_red = U^T A U exactly, |2*a12| <= a11 <= a22
    and a12 >= 0 (sign normalized via diag(1, -1)).
    """
    if not a.is_positive_definite():
        raise ValueError("matrix is not positive definite")
    u = IntMat2.identity()
    cur = a
    swap = IntMat2(0, -1, 1, 0)
    while True:
        # translate: a12 <- a12 - t*a11 with t = round(a12/a11)
        t = _round_frac(cur.a12 / cur.a11)
        if t != 0:
            step = IntMat2(1, -t, 0, 1)
            cur = cur.conjugate(step)
            u = u.mul(step)
        if cur.a11 > cur.a22:
            cur = cur.conjugate(swap)
            u = u.mul(swap)
            continue
        break
    if cur.a12 < 0:
        flip = IntMat2.diag(1, -1)
        cur = cur.conjugate(flip)
        u = u.mul(flip)
    assert 2 * abs(cur.a12) <= cur.a11 <= cur.a22
    return cur, u


def _round_frac(x: Fraction) -> int:
    # round half toward zero keeps |a12| <= a11/2 achievable
    fl = x.numerator // x.denominator
    rem = x - fl
    if rem > Fraction(1, 2):
        return fl + 1
    if rem == Fraction(1, 2):
        return fl if fl >= 0 else fl + 1
    return fl


# ---------------------------------------------------------------------------
# Form equivalence and automorphisms


def representations(t: HalfIntegralForm, s: int) -> list[tuple[int, int]]:
    """All integer vectors (x, y) with t1*x^2 + t2*x*y + t4*y^2 = s."""
    t.require_positive_definite()
    if s < 0:
        return []
    if s == 0:
        return [(0, 0)]
    out = []
    d4 = t.det4()
    ymax = math.isqrt(4 * t.t1 * s // d4)
    for y in range(-ymax, ymax + 1):
        # t1 x^2 + (t2 y) x + (t4 y^2 - s) = 0
        disc = t.t2 * t.t2 * y * y - 4 * t.t1 * (t.t4 * y * y - s)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for sgn in ((r, -r) if r else (r,)):
            num = -t.t2 * y + sgn
            if num % (2 * t.t1) == 0:
                out.append((num // (2 * t.t1), y))
    out.sort()
    return out


def gl2_equivalence(q: HalfIntegralForm, t: HalfIntegralForm) -> IntMat2 | None:
    """A unimodular U with U^T Q U = T, or None if the forms are inequivalent."""
    q.require_positive_definite()
    t.require_positive_definite()
    if q.det4() != t.det4():
        return None
    q2 = q.doubled()
    for u1 in representations(q, t.t1):
        for u2 in representations(q, t.t4):
            cand = IntMat2(u1[0], u2[0], u1[1], u2[1])
            if not cand.is_unimodular():
                continue
            # cross term: first column^T (2Q) second column must equal t2
            v = q2.apply(u2[0], u2[1])
            if u1[0] * v[0] + u1[1] * v[1] == t.t2:
                return cand
    return None


def aut_count(t: HalfIntegralForm) -> int:
    """Order of Aut(T) = {U in GL2(Z) : U^T T U = T}."""
    t.require_positive_definite()
    t2 = t.doubled()
    count = 0
    for u1 in representations(t, t.t1):
        for u2 in representations(t, t.t4):
            cand = IntMat2(u1[0], u2[0], u1[1], u2[1])
            if not cand.is_unimodular():
                continue
            v = t2.apply(u2[0], u2[1])
            if u1[0] * v[0] + u1[1] * v[1] == t.t2:
                count += 1
    return count
