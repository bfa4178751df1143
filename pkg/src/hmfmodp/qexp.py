"""Adelic q-expansions with truncation semantics.

A form is a coefficient table a(r) over the nonzero integral ideals of
norm <= B (missing keys read as zero inside the precision window, reading
past it is a hard error), plus a constant term in the group ring of the
narrow class group.  The weight is bookkeeping: in characteristic p only
N(q)^(k-1) mod p depends on it.  The nebentypus character is intrinsic:
only isotypic forms are modeled, the diamond operator acts through it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classgroup import Character, NarrowClassGroup
from .errors import PrecisionError
from .gf import GFContext, GFElement
from .ideals import IdealHNF, ideal_mul, ideal_quotient


@dataclass(frozen=True)
class GroupRingVector:
    """Element of GF[Cl_F^+], coefficients indexed by class representatives."""

    group: NarrowClassGroup
    values: tuple[GFElement, ...]

    def __post_init__(self):
        assert len(self.values) == self.group.order

    def add(self, other: GroupRingVector) -> GroupRingVector:
        return GroupRingVector(
            self.group, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def scale(self, c: GFElement) -> GroupRingVector:
        return GroupRingVector(self.group, tuple(c * v for v in self.values))

    def translate_class(self, idx: int) -> GroupRingVector:
        """Group-ring product [g_idx] * self."""
        G = self.group
        inv = G.inverse[idx]
        return GroupRingVector(
            G, tuple(self.values[G.table[inv][c]] for c in range(G.order))
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def serialize(self) -> list[list[int]]:
        return [list(v.coeffs) for v in self.values]


def zero_constant(group: NarrowClassGroup, gf: GFContext) -> GroupRingVector:
    return GroupRingVector(group, (gf.zero(),) * group.order)


def character_vector(phi: Character) -> GroupRingVector:
    """v_phi = sum_c phi(c) [c^{-1}]; satisfies [q] v_phi = phi(q) v_phi."""
    G = phi.group
    return GroupRingVector(
        G, tuple(phi.at_class(G.inverse[c]) for c in range(G.order))
    )


def constant_translate(v: GroupRingVector, I: IdealHNF) -> GroupRingVector:
    """Translation by the narrow class of I: [class(I)] * v."""
    return v.translate_class(v.group.class_of(I))


class AdelicQExpansion:
    """Truncated adelic q-expansion of an isotypic form."""

    __slots__ = ("gf", "group", "weight", "nebentypus", "precision", "constant", "coeffs")

    def __init__(
        self,
        weight: int,
        nebentypus: Character,
        precision: int,
        constant: GroupRingVector,
        coeffs: dict[IdealHNF, GFElement],
        gf: GFContext | None = None,
    ):
        if weight < 1:
            raise ValueError("weight must be >= 1")
        if precision < 1:
            raise PrecisionError("precision must be >= 1")
        self.weight = weight
        self.nebentypus = nebentypus
        self.precision = precision
        self.constant = constant
        self.group = nebentypus.group
        self.gf = gf if gf is not None else nebentypus.values[0].ctx
        table = {}
        for r, v in coeffs.items():
            if r.norm > precision:
                raise ValueError(f"coefficient at norm {r.norm} beyond precision {precision}")
            if not v.is_zero():
                table[r] = v
        self.coeffs = table

    @property
    def field(self):
        return self.group.field

    def a(self, r: IdealHNF) -> GFElement:
        """Coefficient at the nonzero ideal r; reading past precision is an error."""
        if r.norm > self.precision:
            raise PrecisionError(
                f"coefficient at norm {r.norm} requested, precision is {self.precision}"
            )
        return self.coeffs.get(r, self.gf.zero())

    def a0(self) -> GroupRingVector:
        return self.constant

    def is_zero_up_to_precision(self) -> bool:
        return not self.coeffs and self.constant.is_zero()

    def support(self) -> list[IdealHNF]:
        return sorted(self.coeffs, key=IdealHNF.key)

    def copy_with(self, **kw) -> AdelicQExpansion:
        args = dict(
            weight=self.weight,
            nebentypus=self.nebentypus,
            precision=self.precision,
            constant=self.constant,
            coeffs=self.coeffs,
            gf=self.gf,
        )
        args.update(kw)
        return AdelicQExpansion(**args)

    def truncate(self, B: int) -> AdelicQExpansion:
        if B > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {B}")
        return self.copy_with(
            precision=B, coeffs={r: v for r, v in self.coeffs.items() if r.norm <= B}
        )

    def serialize(self) -> dict:
        return {
            "weight": self.weight,
            "nebentypus": self.nebentypus.serialize(),
            "precision": self.precision,
            "constant": self.constant.serialize(),
            "coeffs": [
                [r.triple(), list(v.coeffs)] for r, v in sorted(self.coeffs.items(), key=lambda kv: kv[0].key())
            ],
        }

    def __repr__(self) -> str:
        return (
            f"AdelicQExpansion(weight={self.weight}, B={self.precision}, "
            f"{len(self.coeffs)} nonzero coefficients)"
        )


def same_nebentypus(f: AdelicQExpansion, g: AdelicQExpansion) -> bool:
    return (
        f.group == g.group
        and tuple(v.coeffs for v in f.nebentypus.values)
        == tuple(v.coeffs for v in g.nebentypus.values)
    )


def qexp_add(f: AdelicQExpansion, g: AdelicQExpansion) -> AdelicQExpansion:
    if f.weight != g.weight:
        raise ValueError(f"weight mismatch: {f.weight} != {g.weight}")
    if not same_nebentypus(f, g):
        raise ValueError("nebentypus mismatch")
    B = min(f.precision, g.precision)
    coeffs = {r: v for r, v in f.coeffs.items() if r.norm <= B}
    for r, v in g.coeffs.items():
        if r.norm <= B:
            coeffs[r] = coeffs.get(r, f.gf.zero()) + v
    return AdelicQExpansion(
        f.weight, f.nebentypus, B, f.constant.add(g.constant), coeffs, f.gf
    )


def qexp_scale(c: GFElement, f: AdelicQExpansion) -> AdelicQExpansion:
    return f.copy_with(
        constant=f.constant.scale(c),
        coeffs={r: c * v for r, v in f.coeffs.items()},
    )


def iota_shift(f: AdelicQExpansion, q: IdealHNF) -> AdelicQExpansion:
    """Index multiplication: a(rq, iota_q f) = a(r, f), zero off multiples of q.

    Output precision grows to B*norm(q); the constant term is copied
    unchanged (constant bookkeeping belongs to the Frobenius operators).
    """
    coeffs = {ideal_mul(r, q): v for r, v in f.coeffs.items()}
    return f.copy_with(precision=f.precision * q.norm, coeffs=coeffs)


def t_shift(f: AdelicQExpansion, q: IdealHNF) -> AdelicQExpansion:
    """Index division: a(r, t_q f) = a(rq, f); keeps only indices divisible by q."""
    newB = f.precision // q.norm
    if newB < 1:
        raise PrecisionError(
            f"t-shift by norm {q.norm} exhausts precision {f.precision}"
        )
    coeffs = {}
    for r, v in f.coeffs.items():
        s = ideal_quotient(r, q)
        if s is not None:
            coeffs[s] = v
    return f.copy_with(precision=newB, coeffs=coeffs)


def qexp_equal(f: AdelicQExpansion, g: AdelicQExpansion, up_to: int) -> bool:
    """Constants equal and coefficients agree on every ideal of norm <= up_to."""
    if up_to > min(f.precision, g.precision):
        raise PrecisionError(
            f"comparison up to {up_to} exceeds precision "
            f"min({f.precision}, {g.precision})"
        )
    if tuple(f.constant.values) != tuple(g.constant.values):
        return False
    keys = set(f.coeffs) | set(g.coeffs)
    zero = f.gf.zero()
    for r in keys:
        if r.norm <= up_to:
            if f.coeffs.get(r, zero) != g.coeffs.get(r, zero):
                return False
    return True
