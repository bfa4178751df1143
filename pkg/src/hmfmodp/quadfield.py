"""Exact arithmetic in a real quadratic field Q(sqrt(D)).

Elements are written x + y*omega over the integral basis {1, omega},
where omega = (1+sqrt(D))/2 if D = 1 mod 4 and omega = sqrt(D) otherwise.
Everything is integer arithmetic; there is no floating point anywhere.
Total positivity (both real embeddings positive) is decided by the sign
pattern trace > 0 and norm > 0, which is equivalent and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _sqrt_continued_fraction(D: int):
    """Period of the continued fraction of sqrt(D) plus the Pell convergent.

    Returns (x0, y0, ell) where x0 + y0*sqrt(D) is the smallest solution of
    x^2 - D*y^2 = (-1)^ell with x, y > 0, computed from the convergent just
    before the period of length ell closes.
    """
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise ValueError(f"{D} is a perfect square")
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    ell = 0
    while True:
        ell += 1
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        if d == 1 and ell >= 1 and a == 2 * a0:
            return p, q, ell
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev


def _fundamental_unit_halves(D: int) -> tuple[int, int]:
    """Smallest (a, b), a, b > 0, with a^2 - D*b^2 = +-4; unit is (a+b*sqrt(D))/2.

    Every unit > 1 of the maximal order is (a + b*sqrt(D))/2 with a, b > 0
    and a^2 - D*b^2 = +-4, and b strictly increases with the unit, so the
    smallest admissible b gives the fundamental unit.  The Pell solution of
    x^2 - D*y^2 = +-1 (doubled) bounds the search, so the scan terminates.
    For D != 1 mod 4 a parity argument rules out odd b and the result is the
    Pell unit itself.
    """
    x0, y0, _ = _sqrt_continued_fraction(D)
    limit = 2 * y0
    for b in range(1, limit + 1):
        t = D * b * b
        for target in (t - 4, t + 4):
            if target <= 0:
                continue
            a = isqrt(target)
            if a * a == target:
                return a, b
    return 2 * x0, 2 * y0


class QuadraticField:
    """Q(sqrt(D)) for squarefree D > 1, with its maximal order Z[omega]."""

    def __init__(self, D: int):
        if not isinstance(D, int) or D <= 1:
            raise ValueError(f"D must be an integer > 1, got {D}")
        if not is_squarefree(D):
            raise ValueError(f"D must be squarefree, got {D}")
        self.D = D
        self.omega_is_half = D % 4 == 1
        self.disc = D if self.omega_is_half else 4 * D
        # omega satisfies omega^2 = t*omega + n
        if self.omega_is_half:
            self.omega_trace = 1
            self.omega_norm = -(D - 1) // 4  # omega * conj(omega)
        else:
            self.omega_trace = 0
            self.omega_norm = -D
        a, b = _fundamental_unit_halves(D)
        if self.omega_is_half:
            # (a + b*sqrt(D))/2 = (a - b)/2 + b*omega
            assert (a - b) % 2 == 0
            self.fundamental_unit = FieldElement(self, (a - b) // 2, b)
        else:
            assert a % 2 == 0 and b % 2 == 0
            self.fundamental_unit = FieldElement(self, a // 2, b // 2)
        n = self.fundamental_unit.norm()
        assert n in (1, -1)
        self.unit_norm = int(n)

    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    def omega(self) -> FieldElement:
        return FieldElement(self, 0, 1)

    def sqrtD(self) -> FieldElement:
        """The element sqrt(D) itself (integral in both omega conventions)."""
        if self.omega_is_half:
            return FieldElement(self, -1, 2)  # 2*omega - 1
        return FieldElement(self, 0, 1)

    def unit_embedding_upper(self) -> int:
        """Integer upper bound for the fundamental unit under sqrt(D) > 0."""
        u = self.fundamental_unit
        # omega <= isqrt(D) + 1 in both conventions
        return abs(u.x) + abs(u.y) * (isqrt(self.D) + 1) + 1

    def __repr__(self) -> str:
        return f"QuadraticField({self.D})"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticField) and other.D == self.D

    def __hash__(self) -> int:
        return hash(("QuadraticField", self.D))


@dataclass(frozen=True, slots=True)
class FieldElement:
    """(x + y*omega)/den in canonical form: den > 0, gcd(x, y, den) = 1."""

    field: QuadraticField
    x: int
    y: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("zero denominator")
        x, y, den = self.x, self.y, self.den
        if den < 0:
            x, y, den = -x, -y, -den
        g = gcd(gcd(abs(x), abs(y)), den)
        if g > 1:
            x, y, den = x // g, y // g, den // g
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "den", den)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.den == 1

    def __add__(self, other: FieldElement) -> FieldElement:
        f = self.field
        return FieldElement(
            f,
            self.x * other.den + other.x * self.den,
            self.y * other.den + other.y * self.den,
            self.den * other.den,
        )

    def __sub__(self, other: FieldElement) -> FieldElement:
        return self + (-other)

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, -self.x, -self.y, self.den)

    def __mul__(self, other: FieldElement) -> FieldElement:
        f = self.field
        # omega^2 = t*omega - n with t = Tr(omega), n = N(omega)
        t, n = f.omega_trace, f.omega_norm
        yy = self.y * other.y
        x = self.x * other.x - yy * n
        y = self.x * other.y + self.y * other.x + yy * t
        return FieldElement(f, x, y, self.den * other.den)

    def __pow__(self, k: int) -> FieldElement:
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> FieldElement:
        """Image under the nontrivial automorphism sqrt(D) -> -sqrt(D)."""
        f = self.field
        # conj(omega) = Tr(omega) - omega
        return FieldElement(
            f, self.x + self.y * f.omega_trace, -self.y, self.den
        )

    def norm(self) -> Fraction:
        n = self.x * self.x + self.x * self.y * self.field.omega_trace \
            + self.y * self.y * self.field.omega_norm
        return Fraction(n, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.x + self.y * self.field.omega_trace, self.den)

    def inverse(self) -> FieldElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        # 1/a = conj(a)/N(a)
        num, den = n.numerator, n.denominator
        return FieldElement(self.field, c.x * den, c.y * den, c.den * num)

    def embedding_sign(self, conjugate: bool = False) -> int:
        """Sign of the element under sqrt(D) -> +sqrt(D) (or -sqrt(D)), exactly."""
        f = self.field
        # write the embedding as (u + v*sqrt(D)) / (2*den)
        if f.omega_is_half:
            u, v = 2 * self.x + self.y, self.y
        else:
            u, v = 2 * self.x, 2 * self.y
        if conjugate:
            v = -v
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return (v > 0) - (v < 0)
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        # opposite signs: compare u^2 with D*v^2
        diff = u * u - f.D * v * v
        if diff == 0:
            return 0
        return (u > 0) - (u < 0) if diff > 0 else (v > 0) - (v < 0)

    def __repr__(self) -> str:
        core = f"{self.x}+{self.y}w" if self.y else f"{self.x}"
        return core if self.den == 1 else f"({core})/{self.den}"


def make_field(D: int) -> QuadraticField:
    """Build Q(sqrt(D)); rejects D <= 1 and D not squarefree."""
    return QuadraticField(D)


def elem_norm(a: FieldElement) -> Fraction:
    """N(a) = a * conj(a), exactly."""
    return a.norm()


def is_totally_positive(a: FieldElement) -> bool:
    """True iff both real embeddings of a are positive.

    For real embeddings s1, s2: both positive iff s1+s2 > 0 and s1*s2 > 0,
    i.e. trace and norm positive.  Exact integer comparisons only.
    """
    if a.is_zero():
        raise ValueError("total positivity is undefined for 0")
    return a.trace() > 0 and a.norm() > 0
