"""Exact Gaussian elimination over a finite field.

Matrices are lists of rows of GFElement.  Pivots are always chosen as the
first nonzero entry in column order, so every result is deterministic.
"""

from __future__ import annotations

from .gf import GFContext, GFElement

Matrix = list[list[GFElement]]


def zeros(ctx: GFContext, rows: int, cols: int) -> Matrix:
    z = ctx.zero()
    return [[z] * cols for _ in range(rows)]


def identity(ctx: GFContext, n: int) -> Matrix:
    out = zeros(ctx, n, n)
    one = ctx.one()
    for i in range(n):
        out[i][i] = one
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Matrix, v: list[GFElement]) -> list[GFElement]:
    return [row[0] for row in mat_mul(A, [[x] for x in v])]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c: GFElement, A: Matrix) -> Matrix:
    return [[c * a for a in row] for row in A]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def is_zero_matrix(A: Matrix) -> bool:
    return all(a.is_zero() for row in A for a in row)


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices (copy, exact)."""
    M = [row[:] for row in A]
    if not M:
        return M, []
    rows, cols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(cols):
        pick = next((i for i in range(r, rows) if not M[i][c].is_zero()), None)
        if pick is None:
            continue
        M[r], M[pick] = M[pick], M[r]
        inv = M[r][c].inverse()
        M[r] = [inv * x for x in M[r]]
        for i in range(rows):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def row_space_equal(A: Matrix, B: Matrix) -> bool:
    ra, rb = rank(A), rank(B)
    return ra == rb == rank(A + B)


def express_in_row_space(basis: Matrix, v: list[GFElement]):
    """Coefficients x with sum_i x_i * basis_i = v, or None.

    The residual is checked on every coordinate, not only on the pivot
    block, so a successful answer certifies exact membership.
    """
    if not basis:
        return None
    ctx = basis[0][0].ctx
    k = len(basis)
    # augment with the identity to track row operations
    aug = [basis[i][:] + identity(ctx, k)[i] for i in range(k)]
    M, pivots = rref(aug[: len(aug)])
    # only pivots inside the original columns represent basis combinations
    ncols = len(basis[0])
    res = v[:]
    coeffs = [ctx.zero()] * k
    for r, c in enumerate(pivots):
        if c >= ncols:
            break
        if res[c].is_zero():
            continue
        f = res[c]
        res = [x - f * y for x, y in zip(res, M[r][:ncols])]
        coeffs = [x + f * y for x, y in zip(coeffs, M[r][ncols:])]
    if any(not x.is_zero() for x in res):
        return None
    return coeffs


def kernel_basis(A: Matrix) -> list[list[GFElement]]:
    """Basis of {x : A x = 0}, deterministic, over the columns of A."""
    if not A:
        return []
    ctx = A[0][0].ctx
    cols = len(A[0])
    M, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ctx.zero()] * cols
        vec[fc] = ctx.one()
        for r, pc in enumerate(pivots):
            vec[pc] = -M[r][fc]
        basis.append(vec)
    return basis


def minimal_polynomial(A: Matrix) -> list[GFElement]:
    """Minimal polynomial of a square matrix, lowest degree first, monic.

    Found as the first linear dependence among I, A, A^2, ... (viewed as
    vectors), which is the standard definition unwound.
    """
    n = len(A)
    ctx = A[0][0].ctx
    powers = [identity(ctx, n)]
    while True:
        powers.append(mat_mul(powers[-1], A))
        k = len(powers) - 1
        flat = [[p[i][j] for i in range(n) for j in range(n)] for p in powers[:-1]]
        target = [powers[-1][i][j] for i in range(n) for j in range(n)]
        coeffs = express_in_row_space(flat, target)
        if coeffs is not None:
            # A^k = sum c_i A^i  ->  minpoly = X^k - sum c_i X^i
            poly = [-c for c in coeffs] + [ctx.one()]
            return poly
        assert k <= n, "minimal polynomial must have degree <= n"


def poly_eval_matrix(poly: list[GFElement], A: Matrix) -> Matrix:
    ctx = A[0][0].ctx
    out = zeros(ctx, len(A), len(A))
    power = identity(ctx, len(A))
    for c in poly:
        out = mat_add(out, mat_scale(c, power))
        power = mat_mul(power, A)
    return out


def _poly_trim(p: list[GFElement]) -> list[GFElement]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_rem(a: list[GFElement], bm: list[GFElement]) -> list[GFElement]:
    """Remainder of a modulo the monic polynomial bm."""
    r = a[:]
    db = len(bm) - 1
    while len(r) - 1 >= db:
        lead = r[-1]
        if not lead.is_zero():
            shift = len(r) - 1 - db
            for i, c in enumerate(bm):
                r[shift + i] = r[shift + i] - lead * c
        r.pop()
        _poly_trim(r)
    return r


def poly_gcd(a: list[GFElement], b: list[GFElement]) -> list[GFElement]:
    """Monic gcd over GF[X]; coefficient lists, lowest degree first."""
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        inv = b[-1].inverse()
        bm = [inv * c for c in b]
        a, b = bm, _poly_rem(a, bm)
    if a:
        inv = a[-1].inverse()
        a = [inv * c for c in a]
    return a


def poly_derivative(p: list[GFElement]) -> list[GFElement]:
    if len(p) <= 1:
        return []
    ctx = p[0].ctx
    return [ctx.from_int(i) * c for i, c in enumerate(p)][1:]
