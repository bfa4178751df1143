"""Arithmetic in GF(p^m) with a canonically chosen modulus.

The modulus is the lexicographically smallest monic irreducible of degree m
over F_p (ordering coefficient tuples from the X^(m-1) coefficient down to
the constant), so a context is reproducible from (p, m) alone.  Elements are
coefficient tuples of length m, least-significant first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NeedsExtension


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ------------------------------------------------ dense polynomials over F_p
# Coefficient lists, least-significant first, not normalised unless stated.

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic
    a = a[:]
    dm = len(mod) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(mod):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim(a)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _poly_rem(a, bm, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    out = [1]
    base = _poly_rem(base, mod, p)
    while e:
        if e & 1:
            out = _poly_rem(_poly_mul(out, base, p), mod, p)
        base = _poly_rem(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return out


def _is_irreducible(mod: list[int], p: int) -> bool:
    """Monic f of degree m is irreducible iff it shares no root with any
    GF(p^i), i <= m/2: gcd(f, X^(p^i) - X) = 1 for all such i."""
    m = len(mod) - 1
    if m == 1:
        return True
    xq = [0, 1]
    for _ in range(m // 2):
        xq = _poly_powmod(xq, p, mod, p)
        diff = xq[:] + [0] * (2 - len(xq))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd(mod, diff, p)) > 1:
            return False
    return True


def _canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    # scan monic X^m + a_{m-1} X^{m-1} + ... + a_0, lex on (a_{m-1},...,a_0)
    for top in itertools.product(range(p), repeat=m):
        coeffs = list(reversed(top)) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # impossible


class GFContext:
    """The field GF(p^m) with canonical modulus."""

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = _canonical_modulus(p, m)

    def elem(self, coeffs) -> GFElement:
        c = [x % self.p for x in coeffs]
        if len(c) < self.m:
            c += [0] * (self.m - len(c))
        elif len(c) > self.m:
            c = _poly_rem(c, list(self.modulus), self.p)
            c += [0] * (self.m - len(c))
        return GFElement(self, tuple(c))

    def from_int(self, n: int) -> GFElement:
        return self.elem([n])

    def zero(self) -> GFElement:
        if not hasattr(self, "_zero"):
            self._zero = self.elem([0])
        return self._zero

    def one(self) -> GFElement:
        if not hasattr(self, "_one"):
            self._one = self.elem([1])
        return self._one

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.m):
            yield GFElement(self, tup)

    def generator(self) -> GFElement:
        """A fixed multiplicative generator (first in element order)."""
        if not hasattr(self, "_gen"):
            n = self.q - 1
            prime_divs = list(factorint(n))
            for g in self.elements():
                if g.is_zero():
                    continue
                if all(g ** (n // r) != self.one() for r in prime_divs):
                    self._gen = g
                    break
        return self._gen

    def root_of_unity(self, order: int) -> GFElement:
        """Element of exact multiplicative order `order`."""
        n = self.q - 1
        if order <= 0 or n % order:
            raise NeedsExtension(_minimal_degree(self.p, order))
        return self.generator() ** (n // order)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GFContext)
            and (other.p, other.m) == (self.p, self.m)
        )

    def __hash__(self) -> int:
        return hash(("GFContext", self.p, self.m))


def _minimal_degree(p: int, order: int) -> int:
    m = 1
    while (p**m - 1) % order:
        m += 1
    return m


@dataclass(frozen=True, slots=True)
class GFElement:
    ctx: GFContext
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: GFElement) -> GFElement:
        p = self.ctx.p
        return GFElement(
            self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: GFElement) -> GFElement:
        p = self.ctx.p
        return GFElement(
            self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> GFElement:
        p = self.ctx.p
        return GFElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: GFElement) -> GFElement:
        ctx = self.ctx
        if ctx.m == 1:
            return GFElement(ctx, ((self.coeffs[0] * other.coeffs[0]) % ctx.p,))
        prod = _poly_mul(list(self.coeffs), list(other.coeffs), ctx.p)
        rem = _poly_rem(prod, list(ctx.modulus), ctx.p)
        rem += [0] * (ctx.m - len(rem))
        return GFElement(ctx, tuple(rem))

    def inverse(self) -> GFElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in GF")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other: GFElement) -> GFElement:
        return self * other.inverse()

    def __pow__(self, k: int) -> GFElement:
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def order(self) -> int:
        if self.is_zero():
            raise ValueError("0 has no multiplicative order")
        n = self.ctx.q - 1
        for p_i, e_i in factorint(n).items():
            for _ in range(e_i):
                if self ** (n // p_i) == self.ctx.one():
                    n //= p_i
                else:
                    break
        return n

    def __repr__(self) -> str:
        if self.ctx.m == 1:
            return str(self.coeffs[0])
        return "+".join(
            f"{c}t^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c
        ) or "0"


def gf_make(p: int, m: int) -> GFContext:
    """GF(p^m) with canonical (lexicographically smallest) modulus."""
    return GFContext(p, m)


def quadratic_roots(lam: GFElement, eps: GFElement):
    """Roots of X^2 - lam*X + eps in the coefficient field.

    Returns (alpha, beta, double) with the roots in canonical order and
    double = True iff alpha = beta.  Raises NeedsExtension(2m) when the
    polynomial is irreducible over GF(p^m).  eps = 0 is rejected: the
    constant term is a character value, which is never 0.
    """
    ctx = lam.ctx
    if eps.is_zero():
        raise ValueError("eps must be nonzero")
    if ctx.q <= 10**6:
        roots = [x for x in ctx.elements() if x * x - lam * x + eps == ctx.zero()]
        if not roots:
            raise NeedsExtension(2 * ctx.m)
        if len(roots) == 1:
            return roots[0], roots[0], True
        roots.sort(key=lambda r: r.coeffs)
        return roots[0], roots[1], False
    # large field: quadratic formula (characteristic 2 never reaches here
    # at these sizes with the exhaustive branch covering q <= 10^6)
    two = ctx.from_int(2)
    disc = lam * lam - ctx.from_int(4) * eps
    if disc.is_zero():
        r = lam / two
        return r, r, True
    if ctx.q % 4 == 3:
        s = disc ** ((ctx.q + 1) // 4)
        if s * s != disc:
            raise NeedsExtension(2 * ctx.m)
    else:
        s = next((x for x in ctx.elements() if x * x == disc), None)
        if s is None:
            raise NeedsExtension(2 * ctx.m)
    roots = sorted(((lam + s) / two, (lam - s) / two), key=lambda r: r.coeffs)
    return roots[0], roots[1], False
