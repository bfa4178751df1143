"""Hecke, diamond, Hasse and Frobenius operators on adelic q-expansions.

All operators act coefficientwise through exact index shifts:

  T_q^(k):  a(r) -> a(qr) + eps(q) N(q)^(k-1) a(r/q),
            constant -> constant[q] + eps(q) N(q)^(k-1) constant[q^{-1}]

with N(q)^(k-1) taken in the coefficient field, so for q above p the second
summand survives only in weight 1.  The Frobenius operator V_P (P squarefree
above p) sends weight 1 to weight p with a(r) -> a(r/P) and constant ->
constant[P^{-1}]; its recursive definition

  V_1 = h,   V_{Pq} = eps(q)^{-1} (V_P T_q^(1) - T_q^(p) V_P)

is implemented separately and must agree with the closed form, which is the
main recursion oracle of the test suite.
"""

from __future__ import annotations

from .errors import PrecisionError
from .ideals import (
    IdealHNF,
    PrimeIdeal,
    enumerate_ideals,
    factor_ideal,
    ideal_mul,
    ideal_quotient,
    primes_above,
)
from .qexp import AdelicQExpansion, qexp_add, qexp_equal, qexp_scale


def apply_diamond(f: AdelicQExpansion, q: IdealHNF) -> AdelicQExpansion:
    """Diamond operator on an isotypic form: multiplication by nebentypus(q)."""
    return qexp_scale(f.nebentypus(q), f)


def apply_T(
    f: AdelicQExpansion, q: PrimeIdeal, k_override: int | None = None
) -> AdelicQExpansion:
    """Hecke operator T_q^(k) at the prime q, k = weight(f) unless overridden.

    Valid both away from and above the characteristic: N(q)^(k-1) is
    computed in GF(p^m), hence vanishes for q above p once k > 1 and equals
    1 in weight 1.
    """
    k = f.weight if k_override is None else k_override
    Nq = q.norm
    newB = f.precision // Nq
    if newB < 1:
        raise PrecisionError(
            f"T at norm {Nq} exhausts precision {f.precision}"
        )
    gf = f.gf
    eps_q = f.nebentypus(q.ideal)
    nu = gf.from_int(Nq) ** (k - 1)
    factor = eps_q * nu

    coeffs: dict[IdealHNF, object] = {}
    zero = gf.zero()
    # a(qr, f) contributes to r = s/q for stored keys s divisible by q
    for s, v in f.coeffs.items():
        r = ideal_quotient(s, q.ideal)
        if r is not None and r.norm <= newB:
            coeffs[r] = coeffs.get(r, zero) + v
    # eps(q) N(q)^(k-1) a(r/q, f) contributes at r = s*q
    if not factor.is_zero():
        for s, v in f.coeffs.items():
            if s.norm * Nq <= newB:
                r = ideal_mul(s, q.ideal)
                coeffs[r] = coeffs.get(r, zero) + factor * v

    idx = f.group.class_of(q.ideal)
    const = f.constant.translate_class(idx)
    if not factor.is_zero():
        const = const.add(
            f.constant.translate_class(f.group.inverse[idx]).scale(factor)
        )
    return AdelicQExpansion(f.weight, f.nebentypus, newB, const, coeffs, gf)


def hasse_lift(f: AdelicQExpansion) -> AdelicQExpansion:
    """Multiplication by the Hasse invariant: same expansion, weight += p-1."""
    return f.copy_with(weight=f.weight + f.gf.p - 1)


def _squarefree_primes_above_p(f: AdelicQExpansion, P: IdealHNF) -> list[PrimeIdeal]:
    p = f.gf.p
    primes = []
    for prime, e in factor_ideal(P):
        if e > 1:
            raise ValueError(f"{P} is not squarefree")
        if prime.rational_prime != p:
            raise ValueError(
                f"{P} has the prime {prime} away from the characteristic {p}"
            )
        primes.append(prime)
    return primes


def apply_VP_direct(f: AdelicQExpansion, P: IdealHNF) -> AdelicQExpansion:
    """Frobenius operator in closed form: a(r) -> a(r/P), constant -> [P^{-1}].

    Requires weight 1 and P squarefree with every prime factor above the
    coefficient characteristic.  Output weight is p, precision B*norm(P).
    """
    if f.weight != 1:
        raise ValueError(f"V_P acts on weight 1, got weight {f.weight}")
    _squarefree_primes_above_p(f, P)
    p = f.gf.p
    coeffs = {ideal_mul(r, P): v for r, v in f.coeffs.items()}
    idx = f.group.class_of(P)
    const = f.constant.translate_class(f.group.inverse[idx])
    return AdelicQExpansion(p, f.nebentypus, f.precision * P.norm, const, coeffs, f.gf)


def apply_VP_recursive(f: AdelicQExpansion, P: IdealHNF) -> AdelicQExpansion:
    """Frobenius operator via the recursion, peeling primes in canonical order.

    The result agrees with apply_VP_direct up to the recursion's (smaller)
    precision; the two routes are kept fully independent.
    """
    if f.weight != 1:
        raise ValueError(f"V_P acts on weight 1, got weight {f.weight}")
    primes = _squarefree_primes_above_p(f, P)
    primes.sort(key=lambda pr: pr.ideal.key())
    return _vp_rec(f, primes)


def _vp_rec(f: AdelicQExpansion, primes: list[PrimeIdeal]) -> AdelicQExpansion:
    if not primes:
        return hasse_lift(f)
    q = primes[-1]
    rest = primes[:-1]
    p = f.gf.p
    eps_q = f.nebentypus(q.ideal)
    # V_{P'q} f = eps(q)^{-1} (V_{P'} T_q^(1) f - T_q^(p) V_{P'} f)
    left = _vp_rec(apply_T(f, q, k_override=1), rest)
    right = apply_T(_vp_rec(f, rest), q, k_override=p)
    return qexp_scale(eps_q.inverse(), qexp_add(left, qexp_scale(-f.gf.one(), right)))


def check_UV_lemma(
    f: AdelicQExpansion, p_prime: PrimeIdeal, P: IdealHNF
) -> bool:
    """Coefficientwise check of T_q^(p) V_P = V_{P/q} (q | P) resp.
    V_P T_q^(1) - eps(q) V_{Pq} (q coprime to P), with the closed-form V as
    the evaluation route on both sides."""
    primes = _squarefree_primes_above_p(f, P)
    lhs = apply_T(apply_VP_direct(f, P), p_prime)
    divides = any(pr.ideal == p_prime.ideal for pr in primes)
    if divides:
        rhs = apply_VP_direct(f, ideal_quotient(P, p_prime.ideal))
    else:
        eps_q = f.nebentypus(p_prime.ideal)
        rhs = qexp_add(
            apply_VP_direct(apply_T(f, p_prime, k_override=1), P),
            qexp_scale(-eps_q, apply_VP_direct(f, ideal_mul(P, p_prime.ideal))),
        )
    bound = min(lhs.precision, rhs.precision)
    s = len(primes_above(f.field, f.gf.p))
    if len(enumerate_ideals(f.field, bound)) < 2**s:
        raise PrecisionError(
            f"UV-lemma check at common precision {bound} compares fewer than "
            f"2^{s} + class-group coordinates"
        )
    return qexp_equal(lhs, rhs, up_to=bound)
