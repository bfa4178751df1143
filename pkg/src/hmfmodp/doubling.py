"""Doubling experiments: the 2^s-dimensional Hecke orbit of a weight-1 eigenform.

For a weight-1 eigenform f and a characteristic p with s primes above it,
the forms V_P f (P squarefree above p) span a 2^s-dimensional space W on
which each T_q above p satisfies the quadratic X^2 - lambda X + eps(q)
instead of a linear one; fixing eigenvalue choices at all primes but one
cuts W down to a 2-dimensional space on which that last operator acts with
the quadratic as its minimal polynomial, non-semisimply exactly in the
double-root case.

The operator matrices are computed from q-expansion data by exact solving,
not transcribed from the operator identities, so each experiment is a
falsifiable verification: a solver inconsistency or a failed annihilator
aborts loudly instead of being repaired.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

from . import linalg
from .classgroup import characters_of, narrow_class_group
from .eigenforms import CONSTANT_MODES, eisenstein, verify_eigenform
from .errors import FalsificationError, NeedsExtension, NotAnEigenform, PrecisionError
from .gf import GFElement, gf_make, is_prime, quadratic_roots
from .ideals import IdealHNF, enumerate_ideals, ideal_mul, primes_above, unit_ideal
from .operators import apply_T, apply_VP_direct, hasse_lift
from .qexp import AdelicQExpansion
from .quadfield import make_field


def squarefree_divisors_above(field, p: int) -> list[IdealHNF]:
    """The 2^s squarefree ideals dividing (p), in canonical order."""
    primes = primes_above(field, p)
    out = []
    for k in range(len(primes) + 1):
        for subset in itertools.combinations(primes, k):
            P = unit_ideal(field)
            for pr in subset:
                P = ideal_mul(P, pr.ideal)
            out.append(P)
    out.sort(key=IdealHNF.key)
    return out


def coordinates(f: AdelicQExpansion, ideals: list[IdealHNF]) -> list[GFElement]:
    """Constant-term entries (class order) followed by coefficients."""
    return list(f.constant.values) + [f.a(r) for r in ideals]


def build_W(f: AdelicQExpansion, p: int):
    """The forms V_P f with their coordinate matrix; asserts rank 2^s.

    Returns (labels, forms, index_ideals, matrix).  Rejects constant and
    zero forms: the doubling statement needs a nonzero coefficient a(r), and
    constant forms are covered by the group-ring eigenvalue identity checked
    in the eigenform module instead.
    """
    if f.weight != 1:
        raise ValueError(f"build_W needs a weight-1 form, got weight {f.weight}")
    if not f.coeffs:
        raise ValueError(
            "build_W rejects constant (and zero) forms; use the constant-form "
            "eigenvalue identity instead"
        )
    field = f.field
    labels = squarefree_divisors_above(field, p)
    forms = [apply_VP_direct(f, P) for P in labels]
    index_ideals = enumerate_ideals(field, f.precision)
    matrix = [coordinates(g, index_ideals) for g in forms]
    got = linalg.rank(matrix)
    if got != len(labels):
        raise PrecisionError(
            f"build_W: coordinate rank {got} < 2^s = {len(labels)} at "
            f"precision {f.precision}: insufficient precision"
        )
    return labels, forms, index_ideals, matrix


def matrix_of_T(
    f: AdelicQExpansion,
    labels: list[IdealHNF],
    forms: list[AdelicQExpansion],
    p_prime,
):
    """Matrix of T_{p'} on the basis (V_P f), columns = images, exact solve.

    Every image is expressed in the basis over all coordinates up to the
    common bound; a nonzero residual would falsify the operator identities
    and aborts, a rank-deficient restricted basis is a precision error.
    """
    bound = f.precision // p_prime.norm
    if bound < 1:
        raise PrecisionError(f"matrix_of_T: no common coordinates at norm {p_prime.norm}")
    index_ideals = enumerate_ideals(f.field, bound)
    basis_rows = [coordinates(g.truncate(bound), index_ideals) for g in forms]
    if linalg.rank(basis_rows) != len(labels):
        raise PrecisionError(
            f"matrix_of_T: basis rank < 2^s over coordinates of norm <= {bound}"
        )
    cols = []
    for g in forms:
        image = apply_T(g, p_prime)
        vec = coordinates(image.truncate(bound), index_ideals)
        coeffs = linalg.express_in_row_space(basis_rows, vec)
        if coeffs is None:
            raise FalsificationError(
                "matrix_of_T",
                f"T at {p_prime.ideal.triple()} maps a basis form outside "
                "the span of the V_P f",
            )
        cols.append(coeffs)
    n = len(labels)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def check_annihilator(M, lam: GFElement, eps: GFElement) -> bool:
    """M^2 - lam*M + eps*I = 0, exactly."""
    ctx = lam.ctx
    n = len(M)
    val = linalg.mat_add(
        linalg.mat_sub(linalg.mat_mul(M, M), linalg.mat_scale(lam, M)),
        linalg.mat_scale(eps, linalg.identity(ctx, n)),
    )
    return linalg.is_zero_matrix(val)


def build_Wp(matrices: list, target: int, alphas: dict[int, GFElement]):
    """Simultaneous kernel of (M_{p'} - alpha_{p'} I) over all p' != target.

    Returns a 2-dimensional basis in W-coordinates; any other dimension is
    reported as a falsification (a wrong alpha gives dimension 0).
    """
    n = len(matrices[0])
    ctx = matrices[0][0][0].ctx
    stacked = []
    for j, M in enumerate(matrices):
        if j == target:
            continue
        shifted = linalg.mat_sub(M, linalg.mat_scale(alphas[j], linalg.identity(ctx, n)))
        stacked.extend(shifted)
    if not stacked:
        basis = [row[:] for row in linalg.identity(ctx, n)]
    else:
        basis = linalg.kernel_basis(stacked)
    if len(basis) != 2:
        raise FalsificationError(
            "build_Wp",
            f"W_p at target {target} has dimension {len(basis)}, expected 2 "
            f"(roots {sorted((j, a) for j, a in alphas.items())})",
        )
    return basis


def minpoly_and_semisimplicity(M, wp_basis, lam: GFElement, eps: GFElement):
    """Minimal polynomial of M restricted to W_p; must be X^2 - lam X + eps.

    Returns (minpoly, semisimple) with semisimple decided by
    gcd(minpoly, minpoly') = 1.  A scalar restriction (degree-1 minimal
    polynomial) or any other mismatch is a falsification.
    """
    ctx = lam.ctx
    images = [linalg.mat_vec(M, w) for w in wp_basis]
    restricted_cols = []
    for img in images:
        coeffs = linalg.express_in_row_space(wp_basis, img)
        if coeffs is None:
            raise FalsificationError(
                "minpoly", "T does not preserve W_p"
            )
        restricted_cols.append(coeffs)
    R = [[restricted_cols[j][i] for j in range(2)] for i in range(2)]
    minpoly = linalg.minimal_polynomial(R)
    expected = [eps, -lam, ctx.one()]
    if [c.coeffs for c in minpoly] != [c.coeffs for c in expected]:
        raise FalsificationError(
            "minpoly",
            f"minimal polynomial on W_p is {[list(c.coeffs) for c in minpoly]}, "
            f"expected X^2 - lam X + eps = {[list(c.coeffs) for c in expected]}",
        )
    deriv = linalg.poly_derivative(minpoly)
    g = linalg.poly_gcd(minpoly, deriv)
    semisimple = len(g) == 1
    return minpoly, semisimple


def closure_of_hf_equals_W(
    f: AdelicQExpansion, primes, labels, forms
) -> bool:
    """Row-space comparison of {products of T's applied to h*f} with {V_P f}.

    The closure is materialized as T_S(h f) over all subsets S of the primes
    above p (higher powers are redundant once the quadratic annihilators
    hold, which is verified independently).  Both families must reach full
    rank 2^s over the common coordinate window, otherwise the comparison is
    not conclusive and a precision error asks for a larger B.
    """
    hf = hasse_lift(f)
    closure_forms = {(): hf}
    for k in range(1, len(primes) + 1):
        for subset in itertools.combinations(range(len(primes)), k):
            prev = closure_forms[subset[1:]]
            closure_forms[subset] = apply_T(prev, primes[subset[0]])
    bound = min(g.precision for g in closure_forms.values())
    index_ideals = enumerate_ideals(f.field, bound)
    v_rows = [coordinates(g.truncate(bound), index_ideals) for g in forms]
    c_rows = [
        coordinates(g.truncate(bound), index_ideals)
        for _, g in sorted(closure_forms.items())
    ]
    n = len(labels)
    if linalg.rank(v_rows) != n or linalg.rank(c_rows) != n:
        raise PrecisionError(
            f"closure check: restricted rank below 2^s = {n} at common "
            f"precision {bound}"
        )
    if linalg.rank(v_rows + c_rows) != n:
        raise FalsificationError(
            "closure",
            "the T-closure of h*f and the span of the V_P f disagree",
        )
    return True


@dataclass
class ExperimentConfig:
    D: int
    p: int
    m: int | None = None
    B: int | None = None
    phi1: int = 0
    phi2: int = 0
    constant_mode: str = "zero"
    root_choice: str = "first"
    max_retries: int = 8

    def validate(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.constant_mode not in CONSTANT_MODES:
            raise ValueError(f"constant_mode must be one of {CONSTANT_MODES}")
        if self.root_choice not in ("first", "second"):
            raise ValueError("root_choice must be 'first' or 'second'")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


@dataclass
class DoublingReport:
    D: int
    p: int
    m: int
    s: int
    eigenform: dict
    primes: list
    lam: list
    eps: list
    basis: list
    rank: int
    matrices: list
    annihilator_ok: list
    matrices_commute: bool
    roots: list
    wp: list
    semisimple: bool
    hf_closure_equals_W: bool
    precision_used: int

    def to_jsonable(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "m": self.m,
            "s": self.s,
            "eigenform": self.eigenform,
            "primes": self.primes,
            "lambda": self.lam,
            "epsilon": self.eps,
            "basis": self.basis,
            "rank": self.rank,
            "matrices": self.matrices,
            "annihilator_ok": self.annihilator_ok,
            "matrices_commute": self.matrices_commute,
            "roots": self.roots,
            "wp": self.wp,
            "semisimple": self.semisimple,
            "hf_closure_equals_W": self.hf_closure_equals_W,
            "precision_used": self.precision_used,
        }


def _minimal_extension_degree(p: int, exponent: int) -> int:
    if exponent % p == 0:
        raise ValueError(
            f"no coefficient field of characteristic {p} hosts characters of "
            f"order divisible by {p}"
        )
    m = 1
    while (p**m - 1) % exponent:
        m += 1
    return m


def run_experiment(config: ExperimentConfig) -> DoublingReport:
    """Full doubling pipeline with the retry policy.

    Precision errors double B (the required bound grows with the norm of
    the squarefree part of (p) and is awkward to precompute); NeedsExtension
    raises m.  Falsifications are never retried.
    """
    config.validate()
    field_ = make_field(config.D)
    G = narrow_class_group(field_)
    primes_p = primes_above(field_, config.p)
    m = config.m or _minimal_extension_degree(config.p, G.exponent)
    rad_norm = 1
    for pr in primes_p:
        rad_norm *= pr.norm
    B = config.B or 2 * rad_norm * rad_norm
    last_precision_error = None
    for _ in range(config.max_retries):
        try:
            return _pipeline(field_, G, config, m, B, primes_p)
        except PrecisionError as e:
            last_precision_error = e
            B *= 2
        except NeedsExtension as e:
            m = max(e.required_degree, m + 1)
    raise PrecisionError(
        f"precision exhausted after {config.max_retries} retries "
        f"(last B tried: {B // 2}): {last_precision_error}"
    )


def _pipeline(field_, G, config: ExperimentConfig, m: int, B: int, primes_p) -> DoublingReport:
    gf = gf_make(config.p, m)
    chars = characters_of(G, gf)
    if not (0 <= config.phi1 < len(chars) and 0 <= config.phi2 < len(chars)):
        raise ValueError(
            f"character indices must be in [0, {len(chars)}), got "
            f"({config.phi1}, {config.phi2})"
        )
    phi1, phi2 = chars[config.phi1], chars[config.phi2]
    f = eisenstein(phi1, phi2, B, config.constant_mode)

    try:
        eigen_table = verify_eigenform(f, primes_p)
    except NotAnEigenform as e:
        raise FalsificationError("verify_eigenform", str(e))
    lams = [lam for _, lam in eigen_table]
    epss = [f.nebentypus(pr.ideal) for pr in primes_p]

    labels, forms, _, matrix = build_W(f, config.p)
    rank = len(labels)

    matrices = [matrix_of_T(f, labels, forms, pr) for pr in primes_p]
    for i, (M, lam, eps) in enumerate(zip(matrices, lams, epss)):
        if not check_annihilator(M, lam, eps):
            raise FalsificationError(
                "annihilator",
                f"matrix at prime {primes_p[i].ideal.triple()} is not "
                f"annihilated by X^2 - lam X + eps",
            )
    commute = all(
        linalg.mat_mul(A, Bm) == linalg.mat_mul(Bm, A)
        for A, Bm in itertools.combinations(matrices, 2)
    )
    if not commute:
        raise FalsificationError("commutation", "operator matrices do not commute")

    roots = [quadratic_roots(lam, eps) for lam, eps in zip(lams, epss)]
    chosen = [r[0] if config.root_choice == "first" else r[1] for r in roots]

    wp_data = []
    for i, pr in enumerate(primes_p):
        alphas = {j: chosen[j] for j in range(len(primes_p)) if j != i}
        basis = build_Wp(matrices, i, alphas)
        minpoly, semisimple = minpoly_and_semisimplicity(
            matrices[i], basis, lams[i], epss[i]
        )
        wp_data.append(
            {
                "prime": pr.ideal.triple(),
                "dim": len(basis),
                "minpoly": [list(c.coeffs) for c in minpoly],
                "semisimple": semisimple,
            }
        )

    closure_ok = closure_of_hf_equals_W(f, primes_p, labels, forms)

    return DoublingReport(
        D=config.D,
        p=config.p,
        m=m,
        s=len(primes_p),
        eigenform={
            "phi1": config.phi1,
            "phi2": config.phi2,
            "constant_mode": config.constant_mode,
        },
        primes=[pr.ideal.triple() for pr in primes_p],
        lam=[list(v.coeffs) for v in lams],
        eps=[list(v.coeffs) for v in epss],
        basis=[P.triple() for P in labels],
        rank=rank,
        matrices=[
            [list(entry.coeffs) for row in M for entry in row] for M in matrices
        ],
        annihilator_ok=[True] * len(primes_p),
        matrices_commute=commute,
        roots=[
            {
                "pair": [list(r[0].coeffs), list(r[1].coeffs)],
                "double": r[2],
                "chosen": list(c.coeffs),
            }
            for r, c in zip(roots, chosen)
        ],
        wp=wp_data,
        semisimple=all(w["semisimple"] for w in wp_data),
        hf_closure_equals_W=closure_ok,
        precision_used=B,
    )
