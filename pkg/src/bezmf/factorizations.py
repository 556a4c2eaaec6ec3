"""Two-step, elementary and finite-rank matrix factorizations of W.

An elementary factorization e_v is the rank-(1|1) object with twisted
differential [[0, v], [u, 0]], u = W/v.  General finite-rank objects are
pairs of square integer matrices with u*v = v*u = W*I; the integer
backend decomposes them into elementaries through the Smith normal form,
with unimodular certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .divisors import FactoredElement, NormalizedDivisor, Potential, factor_integer, gcd
from .errors import (
    NotAFactorization,
    NotADivisor,
    NotIntegerBackend,
    PotentialMismatch,
    ShapeMismatch,
    ZeroElement,
)

Matrix = tuple[tuple[int, ...], ...]


# --------------------------------------------------------------------------
# two-step factorizations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoStepFactorization:
    """An ordered pair (u, v) with u*v = W, signs included."""

    u: FactoredElement
    v: FactoredElement
    potential: Potential

    def __post_init__(self):
        prod = self.u * self.v
        if prod.exps != self.potential.w_factored().exps or prod.sign != 1:
            raise NotAFactorization(f"{self.u} * {self.v} != W")


def two_step(u: FactoredElement, v: FactoredElement, w: Potential) -> TwoStepFactorization:
    return TwoStepFactorization(u, v, w)


def opposite_transpose(t: TwoStepFactorization) -> TwoStepFactorization:
    """sigma(u, v) = (-v, -u); an involution preserving the support."""
    return TwoStepFactorization(t.v.negate(), t.u.negate(), t.potential)


def two_step_support(t: TwoStepFactorization) -> FactoredElement:
    return gcd(t.u, t.v)


# --------------------------------------------------------------------------
# elementary factorizations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryFactorization:
    """e_v for a normalized divisor v of W.

    ``unit`` records which associate of v the object was built from
    (suspension produces -u); all isomorphism decisions ignore it.
    """

    v: NormalizedDivisor
    unit: int = 1

    @property
    def potential(self) -> Potential:
        return self.v.potential

    @property
    def u(self) -> NormalizedDivisor:
        return self.v.complement()

    def as_two_step(self) -> TwoStepFactorization:
        return TwoStepFactorization(
            self.u.to_factored(self.unit),
            self.v.to_factored(self.unit),
            self.potential,
        )

    def as_matrix(self) -> "MatrixFactorization":
        if not self.potential.is_integer_backend():
            raise NotIntegerBackend("matrix form needs the integer backend")
        v = self.unit * self.v.value()
        u = self.unit * self.u.value()
        return MatrixFactorization(self.potential.w_value(), ((v,),), ((u,),))

    def __str__(self) -> str:
        return f"e_{self.v.to_factored(self.unit)}"


def elementary(v, w: Potential | None = None) -> ElementaryFactorization:
    """Build e_v.  ``v`` may be a NormalizedDivisor, FactoredElement or int."""
    if isinstance(v, NormalizedDivisor):
        return ElementaryFactorization(v)
    if w is None:
        raise NotADivisor("a potential is required for non-normalized input")
    if isinstance(v, int):
        fe = factor_integer(v)
    elif isinstance(v, FactoredElement):
        fe = v
    else:
        raise NotADivisor(f"cannot interpret {v!r} as a divisor")
    return ElementaryFactorization(w.divisor(fe.normalized()), fe.sign)


def support(e: ElementaryFactorization) -> NormalizedDivisor:
    """gcd(v, W/v); a critical divisor of W, or a unit exactly when e is
    a zero object."""
    return e.v.gcd(e.u)


def suspension(e: ElementaryFactorization) -> ElementaryFactorization:
    """Sigma e_v = e_{-u}.  Applying it twice returns e_v exactly."""
    return ElementaryFactorization(e.u, -e.unit)


def similar(e1: ElementaryFactorization, e2: ElementaryFactorization) -> bool:
    """Strong isomorphism test: equality of the normalized divisors."""
    if e1.potential != e2.potential:
        raise PotentialMismatch("similarity needs a common potential")
    return e1.v == e2.v


def is_zero_object(e: ElementaryFactorization) -> bool:
    return support(e).is_unit()


# --------------------------------------------------------------------------
# integer matrix helpers
# --------------------------------------------------------------------------


def _as_matrix(rows) -> Matrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out or any(len(r) != len(out[0]) for r in out):
        raise ShapeMismatch("ragged matrix")
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ShapeMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        raise ShapeMismatch("shape mismatch in addition")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(k: int, a: Matrix) -> Matrix:
    return tuple(tuple(k * x for x in row) for row in a)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_zero(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_det(a: Matrix) -> int:
    """Fraction-free Bareiss determinant."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ShapeMismatch("determinant of a non-square matrix")
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _block_diag(a: Matrix, b: Matrix) -> Matrix:
    n1, m1, n2, m2 = len(a), len(a[0]), len(b), len(b[0])
    top = tuple(row + (0,) * m2 for row in a)
    bottom = tuple((0,) * m1 + row for row in b)
    return top + bottom


# --------------------------------------------------------------------------
# finite-rank matrix factorizations (integer backend)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixFactorization:
    """Square integer matrices with u*v = v*u = W*I_rho, W != 0."""

    w: int
    v_mat: Matrix
    u_mat: Matrix

    def __post_init__(self):
        object.__setattr__(self, "v_mat", _as_matrix(self.v_mat))
        object.__setattr__(self, "u_mat", _as_matrix(self.u_mat))
        if self.w == 0:
            raise ZeroElement("W must be non-zero")
        rho = len(self.v_mat)
        if len(self.v_mat[0]) != rho or len(self.u_mat) != rho or len(self.u_mat[0]) != rho:
            raise ShapeMismatch("u and v must be square of equal size")
        wid = mat_scale(self.w, mat_identity(rho))
        if mat_mul(self.u_mat, self.v_mat) != wid or mat_mul(self.v_mat, self.u_mat) != wid:
            raise NotAFactorization("u*v = v*u = W*I fails")

    @property
    def rho(self) -> int:
        return len(self.v_mat)


def mf_validate(v_mat, u_mat, w: int) -> MatrixFactorization:
    return MatrixFactorization(int(w), v_mat, u_mat)


def direct_sum(a: MatrixFactorization, b: MatrixFactorization) -> MatrixFactorization:
    if a.w != b.w:
        raise PotentialMismatch(f"direct sum over different W: {a.w} vs {b.w}")
    return MatrixFactorization(
        a.w, _block_diag(a.v_mat, b.v_mat), _block_diag(a.u_mat, b.u_mat)
    )


@dataclass(frozen=True)
class SmithDecomposition:
    """A * v * B^{-1} = diag(d_1..d_rho), d_1 | d_2 | ... , each d_i | W."""

    elementaries: tuple[ElementaryFactorization, ...]
    diagonal: tuple[int, ...]
    a_mat: Matrix
    b_mat: Matrix


class _SmithWorker:
    # row ops act on A (left certificate); column ops act on B via the
    # inverse elementary, keeping A * M_orig * B^{-1} = M at all times.

    def __init__(self, mat: Matrix):
        self.n = len(mat)
        self.m = [list(r) for r in mat]
        self.a = [list(r) for r in mat_identity(self.n)]
        self.b = [list(r) for r in mat_identity(self.n)]

    def swap_rows(self, i, j):
        self.m[i], self.m[j] = self.m[j], self.m[i]
        self.a[i], self.a[j] = self.a[j], self.a[i]

    def swap_cols(self, i, j):
        for row in self.m:
            row[i], row[j] = row[j], row[i]
        self.b[i], self.b[j] = self.b[j], self.b[i]

    def negate_row(self, i):
        self.m[i] = [-x for x in self.m[i]]
        self.a[i] = [-x for x in self.a[i]]

    def add_row(self, src, dst, k):
        # row_dst += k * row_src
        self.m[dst] = [x + k * y for x, y in zip(self.m[dst], self.m[src])]
        self.a[dst] = [x + k * y for x, y in zip(self.a[dst], self.a[src])]

    def add_col(self, src, dst, k):
        # col_dst += k * col_src; B gets the inverse op on rows
        for row in self.m:
            row[dst] += k * row[src]
        self.b[src] = [x - k * y for x, y in zip(self.b[src], self.b[dst])]

    def _pivot(self, k):
        best = None
        for i in range(k, self.n):
            for j in range(k, self.n):
                x = self.m[i][j]
                if x != 0 and (best is None or abs(x) < abs(best[0])):
                    best = (x, i, j)
        return best

    def run(self):
        # At stage k: bring the minimal-|.|) entry to (k, k), clear its row
        # and column by remainders, and only advance once the pivot also
        # divides the whole trailing block -- the diagonal then satisfies
        # d_1 | d_2 | ... with no separate fix-up pass.
        n = self.n
        for k in range(n):
            while True:
                best = self._pivot(k)
                if best is None:
                    break
                _, bi, bj = best
                if bi != k:
                    self.swap_rows(k, bi)
                if bj != k:
                    self.swap_cols(k, bj)
                if self.m[k][k] < 0:
                    self.negate_row(k)
                pivot = self.m[k][k]
                clean = True
                for i in range(k + 1, n):
                    if self.m[i][k] != 0:
                        self.add_row(k, i, -(self.m[i][k] // pivot))
                        if self.m[i][k] != 0:
                            clean = False
                for j in range(k + 1, n):
                    if self.m[k][j] != 0:
                        self.add_col(k, j, -(self.m[k][j] // pivot))
                        if self.m[k][j] != 0:
                            clean = False
                if not clean:
                    continue
                witness = None
                for i in range(k + 1, n):
                    if any(self.m[i][j] % pivot for j in range(k + 1, n)):
                        witness = i
                        break
                if witness is None:
                    break
                self.add_row(witness, k, 1)
        return (
            tuple(self.m[i][i] for i in range(n)),
            tuple(tuple(r) for r in self.a),
            tuple(tuple(r) for r in self.b),
        )


def smith_decompose(a: MatrixFactorization) -> SmithDecomposition:
    """Decompose into elementaries via the Smith normal form of v.

    Returns the list e_{d_1}, ..., e_{d_rho} together with unimodular
    certificates A, B such that A * v * B^{-1} is exactly the diagonal.
    """
    worker = _SmithWorker(a.v_mat)
    diag, amat, bmat = worker.run()
    w_fe = factor_integer(abs(a.w))
    pot = _potential_of(w_fe)
    elems = tuple(
        ElementaryFactorization(pot.divisor(factor_integer(d))) for d in diag
    )
    return SmithDecomposition(elems, diag, amat, bmat)


def _potential_of(w_fe: FactoredElement) -> Potential:
    critical = tuple((p, e) for p, e in w_fe.exps if e >= 2)
    noncritical = tuple(p for p, e in w_fe.exps if e == 1)
    return Potential(critical, noncritical)


def mat_inverse_unimodular(a: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(a)
    det = mat_det(a)
    if det not in (1, -1):
        raise NotAFactorization(f"matrix has determinant {det}, not a unit")
    # Gauss-Jordan over the rationals stays integral at the end
    from fractions import Fraction

    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return tuple(tuple(int(x) for x in row[n:]) for row in m)


# --------------------------------------------------------------------------
# graded morphisms and the twisted differential
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedMorphismMatrix:
    """Matrix form of a graded morphism between matrix factorizations.

    parity 0: blocks = (f00, f11); parity 1: blocks = (g01, g10).
    Both blocks are rho2 x rho1.
    """

    parity: int
    blocks: tuple[Matrix, Matrix]

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ShapeMismatch("parity must be 0 or 1")
        b0, b1 = (_as_matrix(b) for b in self.blocks)
        if len(b0) != len(b1) or len(b0[0]) != len(b1[0]):
            raise ShapeMismatch("the two blocks must have equal shape")
        object.__setattr__(self, "blocks", (b0, b1))

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for blk in self.blocks for row in blk)


def identity_morphism(a: MatrixFactorization) -> GradedMorphismMatrix:
    i = mat_identity(a.rho)
    return GradedMorphismMatrix(0, (i, i))


def morphism_compose(
    g: GradedMorphismMatrix, f: GradedMorphismMatrix
) -> GradedMorphismMatrix:
    """Plain block composition g o f; parity adds mod 2."""
    if f.parity == 0 and g.parity == 0:
        return GradedMorphismMatrix(
            0, (mat_mul(g.blocks[0], f.blocks[0]), mat_mul(g.blocks[1], f.blocks[1]))
        )
    if f.parity == 0 and g.parity == 1:
        return GradedMorphismMatrix(
            1, (mat_mul(g.blocks[0], f.blocks[0]), mat_mul(g.blocks[1], f.blocks[1]))
        )
    if f.parity == 1 and g.parity == 0:
        return GradedMorphismMatrix(
            1, (mat_mul(g.blocks[1], f.blocks[0]), mat_mul(g.blocks[0], f.blocks[1]))
        )
    return GradedMorphismMatrix(
        0, (mat_mul(g.blocks[1], f.blocks[0]), mat_mul(g.blocks[0], f.blocks[1]))
    )


def morphism_add(a: GradedMorphismMatrix, b: GradedMorphismMatrix) -> GradedMorphismMatrix:
    if a.parity != b.parity:
        raise ShapeMismatch("cannot add morphisms of different parity")
    return GradedMorphismMatrix(
        a.parity, (mat_add(a.blocks[0], b.blocks[0]), mat_add(a.blocks[1], b.blocks[1]))
    )


def differential(
    f: GradedMorphismMatrix, a1: MatrixFactorization, a2: MatrixFactorization
) -> GradedMorphismMatrix:
    """d(f) = D2 o f - (-1)^kappa f o D1; squares to zero."""
    v1, u1, v2, u2 = a1.v_mat, a1.u_mat, a2.v_mat, a2.u_mat
    if f.parity == 0:
        f00, f11 = f.blocks
        if len(f00) != a2.rho or len(f00[0]) != a1.rho:
            raise ShapeMismatch("blocks do not match source/target ranks")
        g10 = mat_add(mat_mul(v2, f11), mat_scale(-1, mat_mul(f00, v1)))
        g01 = mat_add(mat_mul(u2, f00), mat_scale(-1, mat_mul(f11, u1)))
        return GradedMorphismMatrix(1, (g01, g10))
    g01, g10 = f.blocks
    if len(g01) != a2.rho or len(g01[0]) != a1.rho:
        raise ShapeMismatch("blocks do not match source/target ranks")
    f00 = mat_add(mat_mul(v2, g01), mat_mul(g10, u1))
    f11 = mat_add(mat_mul(u2, g10), mat_mul(g01, v1))
    return GradedMorphismMatrix(0, (f00, f11))


# --------------------------------------------------------------------------
# matrix JSON I/O
# --------------------------------------------------------------------------


def matrix_factorization_from_json(obj) -> MatrixFactorization:
    try:
        return mf_validate(obj["v"], obj["u"], int(obj["W"]))
    except KeyError as exc:
        raise NotAFactorization(f"matrix JSON needs key {exc}") from exc


def matrix_factorization_to_json(a: MatrixFactorization) -> dict:
    return {"W": a.w, "v": [list(r) for r in a.v_mat], "u": [list(r) for r in a.u_mat]}
