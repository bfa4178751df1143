import itertools

import pytest

from hmfmodp.classgroup import characters_of, narrow_class_group
from hmfmodp.errors import NotAnEigenform
from hmfmodp.gf import gf_make
from hmfmodp.eigenforms import constant_form, eisenstein, verify_eigenform
from hmfmodp.ideals import (
    divisors_of,
    enumerate_ideals,
    ideal_mul,
    ideal_quotient,
    primes_above,
    unit_ideal,
)
from hmfmodp.operators import apply_T
from hmfmodp.qexp import qexp_add, qexp_equal, qexp_scale
from hmfmodp.quadfield import make_field

F3 = make_field(3)
G3 = narrow_class_group(F3)
GF7 = gf_make(7, 1)
CH = characters_of(G3, GF7)
TRIV, CHI = CH


def divisor_sum_oracle(phi1, phi2, r):
    """a(r) by the literal divisor sum, using only divisors_of."""
    gf = phi1.values[0].ctx
    total = gf.zero()
    for d in divisors_of(r):
        total = total + phi1(d) * phi2(ideal_quotient(r, d))
    return total


def small_primes(field, bound):
    out = []
    for ell in range(2, bound + 1):
        from hmfmodp.gf import is_prime

        if is_prime(ell):
            out.extend(P for P in primes_above(field, ell) if P.norm <= bound)
    return out


# ---------------------------------------------------------------- eisenstein

def test_eisenstein_trivial_counts_divisors():
    E = eisenstein(TRIV, TRIV, 60)
    for r in enumerate_ideals(F3, 60):
        assert E.a(r) == GF7.from_int(len(divisors_of(r)))


def test_eisenstein_normalized():
    for p1, p2 in itertools.product(CH, repeat=2):
        E = eisenstein(p1, p2, 20)
        assert E.a(unit_ideal(F3)) == GF7.one()
        assert E.weight == 1


@pytest.mark.parametrize("i,j", list(itertools.product(range(2), range(2))))
def test_eisenstein_matches_divisor_sum_oracle(i, j):
    E = eisenstein(CH[i], CH[j], 80)
    for r in enumerate_ideals(F3, 80):
        assert E.a(r) == divisor_sum_oracle(CH[i], CH[j], r)


def test_eisenstein_symmetric_zero_mode():
    E12 = eisenstein(TRIV, CHI, 50, "zero")
    E21 = eisenstein(CHI, TRIV, 50, "zero")
    assert qexp_equal(E12, E21, up_to=50)


def test_eisenstein_multiplicative_on_coprime():
    E = eisenstein(TRIV, CHI, 900)
    pool = enumerate_ideals(F3, 30)
    for r in pool:
        for s in pool:
            # coprime iff no common prime divisor; test via quotient of gcd-free pairs
            from hmfmodp.ideals import factor_ideal

            pr = {P.ideal for P, _ in factor_ideal(r)}
            ps = {P.ideal for P, _ in factor_ideal(s)}
            if pr & ps:
                continue
            assert E.a(ideal_mul(r, s)) == E.a(r) * E.a(s)


def test_eisenstein_rejects_bad_mode():
    with pytest.raises(ValueError):
        eisenstein(TRIV, TRIV, 10, "bogus")


# ---------------------------------------------------------------- eigenvalue

@pytest.mark.parametrize("mode", ["zero", "v_phi1", "v_phi2"])
def test_eisenstein_eigenform_all_modes(mode):
    primes = small_primes(F3, 50)
    for p1, p2 in itertools.product(CH, repeat=2):
        E = eisenstein(p1, p2, 51 * 51, mode)
        table = verify_eigenform(E, primes)
        for q, lam in table:
            assert lam == p1(q.ideal) + p2(q.ideal), (mode, q)


def test_eisenstein_eigenvalue_brute_force_check():
    # independently: a(qr) + eps(q) a(r/q) = (phi1+phi2)(q) a(r), with both
    # sides computed by raw divisor sums
    p1, p2 = TRIV, CHI
    eps = p1 * p2
    q = primes_above(F3, 13)[0]
    for r in enumerate_ideals(F3, 25):
        lhs = divisor_sum_oracle(p1, p2, ideal_mul(q.ideal, r))
        rq = ideal_quotient(r, q.ideal)
        if rq is not None:
            lhs = lhs + eps(q.ideal) * divisor_sum_oracle(p1, p2, rq)
        rhs = (p1(q.ideal) + p2(q.ideal)) * divisor_sum_oracle(p1, p2, r)
        assert lhs == rhs


def test_eigenvalue_at_primes_above_11():
    # classes of both primes above 11 are nontrivial (norm-equation
    # obstruction mod 3), so the order-2 character gives lambda = 0
    gf11 = gf_make(11, 1)
    ch11 = characters_of(G3, gf11)
    E = eisenstein(ch11[0], ch11[1], 400)
    for q in primes_above(F3, 11):
        (pair,) = verify_eigenform(E, [q])
        assert pair[1] == gf11.zero()


# ---------------------------------------------------------------- constants

def test_constant_form_eigenvalue():
    primes = small_primes(F3, 50)
    for phi, eps in itertools.product(CH, repeat=2):
        f = constant_form(phi, eps, B=100)
        for q, lam in verify_eigenform(f, primes):
            assert lam == phi(q.ideal) + eps(q.ideal) * phi.inv()(q.ideal)


def test_constant_form_trivial_eigenvalue_two():
    f = constant_form(TRIV, TRIV, B=100)
    for q, lam in verify_eigenform(f, small_primes(F3, 30)):
        assert lam == GF7.from_int(2)


# ---------------------------------------------------------------- witnesses

def test_non_eigenform_witness():
    # same nebentypus (chi^2 = 1) but different eigenvalues at q above 11
    E1 = eisenstein(TRIV, TRIV, 200)
    E2 = eisenstein(CHI, CHI, 200)
    f = qexp_add(E1, E2)
    q = primes_above(F3, 11)[0]  # eigenvalues differ: 2 vs -2
    with pytest.raises(NotAnEigenform) as exc:
        verify_eigenform(f, [q])
    assert exc.value.prime == q
    assert exc.value.left != exc.value.right
