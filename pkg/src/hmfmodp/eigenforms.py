"""Concrete eigen-q-expansions: Eisenstein series and constant forms.

The Eisenstein series attached to a pair of narrow class characters
(phi1, phi2) is the normalized multiplicative solution of the Hecke
eigenvalue recurrence: a(r) = sum over divisors d | r of phi1(d) phi2(r/d),
a((1)) = 1, weight 1, nebentypus phi1*phi2.  Its eigenvalue at a prime q is
phi1(q) + phi2(q); the brute-force divisor-sum identity is re-verified in
the tests rather than assumed.  Constant forms live entirely in the group
ring: f = v_phi = sum_c phi(c) [c^{-1}] with T_q-eigenvalue
phi(q) + eps(q) phi^{-1}(q).
"""

from __future__ import annotations

from .classgroup import Character
from .errors import NotAnEigenform, PrecisionError
from .ideals import IdealHNF, PrimeIdeal, ideal_mul, primes_up_to, unit_ideal
from .operators import apply_T
from .qexp import (
    AdelicQExpansion,
    character_vector,
    qexp_equal,
    qexp_scale,
    zero_constant,
)

CONSTANT_MODES = ("zero", "v_phi1", "v_phi2")


def eisenstein(
    phi1: Character,
    phi2: Character,
    B: int,
    constant_mode: str = "zero",
) -> AdelicQExpansion:
    """Weight-1 Eisenstein series with a(r) = sum_{d | r} phi1(d) phi2(r/d).

    Coefficients are built multiplicatively along the prime-power
    enumeration of ideals of norm <= B, so construction is linear in the
    number of ideals; the divisor-sum definition is the test oracle.
    """
    if phi1.group != phi2.group:
        raise ValueError("characters live on different groups")
    if B < 1:
        raise ValueError("B must be >= 1")
    if constant_mode not in CONSTANT_MODES:
        raise ValueError(f"constant_mode must be one of {CONSTANT_MODES}")
    G = phi1.group
    field = G.field
    gf = phi1.values[0].ctx
    primes = sorted(primes_up_to(field, B), key=lambda P: P.ideal.key())
    values = [(phi1(P.ideal), phi2(P.ideal)) for P in primes]

    # grow multiplicatively: a(I * P^e) = a(I) * sum_{j<=e} phi1(P)^j phi2(P)^(e-j),
    # depth-first over primes sorted by norm so the budget check can break
    coeffs: dict[IdealHNF, object] = {}

    def grow(start: int, I: IdealHNF, nI: int, aI):
        coeffs[I] = aI
        for j in range(start, len(primes)):
            P = primes[j]
            nJ = nI * P.norm
            if nJ > B:
                break
            v1, v2 = values[j]
            J = ideal_mul(I, P.ideal)
            s1 = v1  # phi1(P)^e
            acc = s1 + v2  # sum_{j<=e} v1^j v2^(e-j), grown in place
            while True:
                grow(j + 1, J, nJ, aI * acc)
                nJ *= P.norm
                if nJ > B:
                    break
                J = ideal_mul(J, P.ideal)
                s1 = s1 * v1
                acc = s1 + acc * v2

    grow(0, unit_ideal(field), 1, gf.one())

    if constant_mode == "zero":
        const = zero_constant(G, gf)
    elif constant_mode == "v_phi1":
        const = character_vector(phi1)
    else:
        const = character_vector(phi2)
    return AdelicQExpansion(1, phi1 * phi2, B, const, coeffs, gf)


def constant_form(phi: Character, nebentypus: Character, B: int = 10) -> AdelicQExpansion:
    """Weight-1 form with zero coefficients and constant term v_phi."""
    if phi.group != nebentypus.group:
        raise ValueError("characters live on different groups")
    gf = phi.values[0].ctx
    return AdelicQExpansion(1, nebentypus, B, character_vector(phi), {}, gf)


def verify_eigenform(
    f: AdelicQExpansion, primes: list[PrimeIdeal]
) -> list[tuple[PrimeIdeal, object]]:
    """Eigenvalue table [(q, lambda_q)] with apply_T(f, q) = lambda_q * f.

    The scalar is read off the first nonzero coordinate (constant-term
    entries first, then coefficients in canonical order); the full
    proportionality is then checked on every comparable coordinate and a
    NotAnEigenform carrying the witnessing coordinate is raised on failure.
    """
    out = []
    for q in primes:
        Tf = apply_T(f, q)
        lam = None
        witness_index = None
        for c, v in enumerate(f.constant.values):
            if not v.is_zero():
                lam = Tf.constant.values[c] / v
                witness_index = ("constant", c)
                break
        if lam is None:
            for r in f.support():
                if r.norm <= Tf.precision:
                    lam = Tf.a(r) / f.a(r)
                    witness_index = ("coefficient", r.triple())
                    break
        if lam is None:
            raise PrecisionError(
                f"no nonzero coordinate of the form is visible at precision "
                f"{Tf.precision}"
            )
        scaled = qexp_scale(lam, f)
        if not qexp_equal(Tf, scaled, up_to=Tf.precision):
            witness = _first_difference(Tf, scaled, Tf.precision)
            raise NotAnEigenform(q, witness[0], witness[1], witness[2])
        out.append((q, lam))
    return out


def _first_difference(f: AdelicQExpansion, g: AdelicQExpansion, bound: int):
    for c in range(f.group.order):
        if f.constant.values[c] != g.constant.values[c]:
            return ("constant", c), f.constant.values[c], g.constant.values[c]
    keys = sorted(set(f.coeffs) | set(g.coeffs), key=IdealHNF.key)
    for r in keys:
        if r.norm <= bound and f.a(r) != g.a(r):
            return ("coefficient", r.triple()), f.a(r), g.a(r)
    raise AssertionError("no difference found")
