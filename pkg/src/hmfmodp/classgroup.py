"""Narrow class group of a real quadratic field and its characters.

Classes are represented by small integral ideals; two ideals I, J are
narrowly equivalent iff I * conj(J) has a totally positive generator
(conj(J) plays the role of J^{-1} scaled by norm(J), which is totally
positive, so no fractional ideals are ever needed).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import NeedsExtension
from .gf import GFContext, GFElement, is_prime
from .ideals import (
    IdealHNF,
    factor_ideal,
    ideal_conj,
    ideal_mul,
    is_narrowly_principal,
    primes_above,
    principal_ideal,
    unit_ideal,
)
from .quadfield import QuadraticField


def narrowly_equivalent(I: IdealHNF, J: IdealHNF) -> bool:
    return is_narrowly_principal(ideal_mul(I, ideal_conj(J))) is not None


def minkowski_bound(field: QuadraticField) -> int:
    """ceil(sqrt(disc)/2); every ideal class contains an ideal of norm below it."""
    r = isqrt(field.disc)
    if r * r < field.disc:
        r += 1
    return max(2, (r + 1) // 2)


class NarrowClassGroup:
    """Cl_F^+ with a fixed list of representatives; identity at index 0."""

    def __init__(self, field: QuadraticField, reps, table):
        self.field = field
        self.reps = list(reps)
        self.order = len(self.reps)
        self.table = [list(row) for row in table]
        self.inverse = [row.index(0) for row in self.table]
        self.exponent = 1
        for i in range(self.order):
            k, j = 1, i
            while j != 0:
                j = self.table[j][i]
                k += 1
            lcm = self.exponent
            g = _gcd(lcm, k)
            self.exponent = lcm * k // g
        self._class_cache: dict[tuple, int] = {unit_ideal(field).key(): 0}

    def compose(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, e: int) -> int:
        out = 0
        for _ in range(e):
            out = self.table[out][i]
        return out

    def class_of(self, I: IdealHNF) -> int:
        """Index of the representative narrowly equivalent to I.

        Factors I and composes the (cached) classes of its prime divisors;
        the direct equivalence search is used only once per prime and is the
        test oracle for arbitrary ideals.
        """
        key = I.key()
        if key not in self._class_cache:
            idx = 0
            for P, e in factor_ideal(I):
                idx = self.table[idx][self.power(self._prime_class(P), e)]
            self._class_cache[key] = idx
        return self._class_cache[key]

    def _prime_class(self, P) -> int:
        key = P.ideal.key()
        if key not in self._class_cache:
            if P.residue_degree == 2:
                # inert primes are (ell), generated by a positive rational
                self._class_cache[key] = 0
            else:
                self._class_cache[key] = self.class_by_search(P.ideal)
        return self._class_cache[key]

    def class_by_search(self, I: IdealHNF) -> int:
        for i, rep in enumerate(self.reps):
            if narrowly_equivalent(I, rep):
                return i
        raise RuntimeError(
            f"no representative narrowly equivalent to {I}: "
            "class group was generated with too small a prime bound"
        )

    def __repr__(self) -> str:
        return f"NarrowClassGroup(D={self.field.D}, order={self.order})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NarrowClassGroup)
            and other.field == self.field
            and [r.key() for r in other.reps] == [r.key() for r in self.reps]
        )

    def __hash__(self) -> int:
        return hash((self.field, tuple(r.key() for r in self.reps)))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


_group_cache: dict[tuple[int, int], "NarrowClassGroup"] = {}


def narrow_class_group(field: QuadraticField, prime_bound: int | None = None) -> NarrowClassGroup:
    """Compute Cl_F^+ from the classes of primes up to the bound.

    The default bound is the Minkowski bound, which guarantees the wide
    class group is generated; when the fundamental unit has norm +1 the
    principal ideal (sqrt(D)) is added as an extra generator since its
    narrow class (the kernel of Cl+ -> Cl) need not come from small primes.
    Instances are cached per (field, bound): the group carries a growing
    class cache that is expensive to rebuild.
    """
    if prime_bound is None:
        prime_bound = minkowski_bound(field)
    cached = _group_cache.get((field.D, prime_bound))
    if cached is not None:
        return cached
    gens: list[IdealHNF] = []
    for ell in range(2, prime_bound + 1):
        if is_prime(ell):
            gens.extend(P.ideal for P in primes_above(field, ell))
    if field.unit_norm == 1:
        gens.append(principal_ideal(field.sqrtD()))
    gens.sort(key=IdealHNF.key)

    reps = [unit_ideal(field)]
    for g in gens:
        if not any(narrowly_equivalent(g, r) for r in reps):
            reps.append(g)
    # close the discovered classes under multiplication
    changed = True
    while changed:
        changed = False
        for i in range(len(reps)):
            for j in range(len(reps)):
                prod = ideal_mul(reps[i], reps[j])
                if not any(narrowly_equivalent(prod, r) for r in reps):
                    reps.append(prod)
                    changed = True
    table = []
    for i in range(len(reps)):
        row = []
        for j in range(len(reps)):
            prod = ideal_mul(reps[i], reps[j])
            matches = [k for k, r in enumerate(reps) if narrowly_equivalent(prod, r)]
            if len(matches) != 1:
                raise RuntimeError(
                    f"class group does not close: product {prod} matches {matches}"
                )
            row.append(matches[0])
        table.append(row)
    out = NarrowClassGroup(field, reps, table)
    _group_cache[(field.D, prime_bound)] = out
    return out


def class_of(G: NarrowClassGroup, I: IdealHNF) -> int:
    return G.class_of(I)


@dataclass(frozen=True)
class Character:
    """Character of the narrow class group valued in GF(p^m)^x."""

    group: NarrowClassGroup
    values: tuple[GFElement, ...]

    def __post_init__(self):
        assert len(self.values) == self.group.order

    def __call__(self, I: IdealHNF) -> GFElement:
        return self.values[self.group.class_of(I)]

    def at_class(self, i: int) -> GFElement:
        return self.values[i]

    def __mul__(self, other: Character) -> Character:
        assert other.group == self.group
        return Character(
            self.group, tuple(a * b for a, b in zip(self.values, other.values))
        )

    def inv(self) -> Character:
        return Character(
            self.group, tuple(self.values[self.group.inverse[i]] for i in range(self.group.order))
        )

    def is_trivial(self) -> bool:
        one = self.values[0].ctx.one()
        return all(v == one for v in self.values)

    def serialize(self) -> list[list[int]]:
        return [list(v.coeffs) for v in self.values]


def characters_of(G: NarrowClassGroup, gf: GFContext) -> list[Character]:
    """All characters of G with values in gf.

    Requires exponent(G) | p^m - 1; otherwise NeedsExtension carries the
    least sufficient extension degree.  Characters are enumerated from a
    greedy generating set; multiplicativity of each candidate is verified
    against the whole composition table, and exactly |G| must survive.
    """
    n = G.order
    if G.exponent % gf.p == 0:
        raise ValueError(
            f"characters of a group with exponent {G.exponent} cannot take "
            f"values in characteristic {gf.p}"
        )
    if (gf.q - 1) % G.exponent:
        m = 1
        while (gf.p**m - 1) % G.exponent:
            m += 1
        raise NeedsExtension(m)

    orders = [_element_order(G, i) for i in range(n)]
    gens: list[int] = []
    expressed: dict[int, tuple[int, ...]] = {0: ()}
    while len(expressed) < n:
        cand = max(
            (i for i in range(n) if i not in expressed),
            key=lambda i: (orders[i], -i),
        )
        gens.append(cand)
        for h in list(expressed):
            word = expressed[h]
            cur = h
            for k in range(1, orders[cand]):
                cur = G.table[cur][cand]
                if cur not in expressed:
                    expressed[cur] = word + ((len(gens) - 1, k),)

    roots = {g: gf.root_of_unity(orders[g]) for g in gens}
    chars = []
    seen = set()
    for assignment in _assignments([orders[g] for g in gens]):
        values = []
        for i in range(n):
            v = gf.one()
            for gen_idx, k in expressed[i]:
                v = v * roots[gens[gen_idx]] ** (assignment[gen_idx] * k)
            values.append(v)
        ok = all(
            values[G.table[i][j]] == values[i] * values[j]
            for i in range(n)
            for j in range(n)
        )
        if ok:
            key = tuple(v.coeffs for v in values)
            if key not in seen:
                seen.add(key)
                chars.append(Character(G, tuple(values)))
    assert len(chars) == n, f"found {len(chars)} characters, expected {n}"
    chars.sort(key=lambda ch: (not ch.is_trivial(), tuple(v.coeffs for v in ch.values)))
    return chars


def _element_order(G: NarrowClassGroup, i: int) -> int:
    k, j = 1, i
    while j != 0:
        j = G.table[j][i]
        k += 1
    return k


def _assignments(sizes):
    if not sizes:
        yield ()
        return
    for head in range(sizes[0]):
        for rest in _assignments(sizes[1:]):
            yield (head,) + rest
