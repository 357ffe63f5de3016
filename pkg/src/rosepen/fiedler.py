"""Fiedler factors and Fiedler pencils of Rosenbrock system polynomials.

A degree-m system carries m+1 constant Fiedler factors of size (nm+r):
the middle factors embed the classical matrix-polynomial factors with an
identity state block, while the 0-th factor absorbs B, C and A and the m-th
carries the leading coefficient next to -E.  An ordering of the factor
product is described by a bijection sigma, stored here by its product order
sigma^{-1}; the consecution-inversion structure sequence of sigma fixes
where the single B-row and C-column land in the assembled pencil.

Three construction routes are provided and must agree entrywise: the direct
factor product, the row/column splicing algorithm, and the block formula
that borders a classical Fiedler pencil of P.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg
from .polymat import Poly, PolyMatrix

__all__ = [
    "Bijection",
    "CISS",
    "FiedlerFactor",
    "SystemPencil",
    "ciss",
    "make_factor",
    "factor_inverse",
    "pencil_direct",
    "pencil_algorithm1",
    "pencil_block_formula",
    "first_companion",
    "second_companion",
    "system_block_transpose",
    "is_block_pentadiagonal",
    "commutation_check",
]


@dataclass(frozen=True)
class Bijection:
    """Factor ordering, stored as the product order sigma^{-1}.

    inverse_order lists the factor indices as they appear in the product
    M_{sigma^{-1}(1)} ... M_{sigma^{-1}(m)} and must be a permutation of
    {0, ..., m-1}.
    """

    inverse_order: tuple

    def __post_init__(self):
        order = tuple(int(i) for i in self.inverse_order)
        object.__setattr__(self, "inverse_order", order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(
                f"{order} is not a permutation of 0..{max(len(order) - 1, 0)}"
            )
        if not order:
            raise ValueError("bijection must order at least one factor")

    @property
    def m(self):
        return len(self.inverse_order)

    def position(self, i):
        """sigma(i): 1-based position of factor i in the product."""
        return self.inverse_order.index(i) + 1

    def has_consecution_at(self, d):
        if not 0 <= d <= self.m - 2:
            raise ValueError(f"consecution index {d} out of range")
        return self.position(d) < self.position(d + 1)

    @classmethod
    def first_companion_order(cls, m):
        return cls(tuple(range(m - 1, -1, -1)))

    @classmethod
    def second_companion_order(cls, m):
        return cls(tuple(range(m)))

    @classmethod
    def from_string(cls, text):
        return cls(tuple(int(p) for p in text.split(",") if p.strip() != ""))


@dataclass(frozen=True)
class CISS:
    """Consecution-inversion structure sequence (c_1, i_1, ..., c_l, i_l)."""

    pairs: tuple

    @property
    def c1(self):
        return self.pairs[0] if self.pairs else 0

    @property
    def i1(self):
        return self.pairs[1] if self.pairs else 0

    @property
    def consecution_total(self):
        return sum(self.pairs[0::2])

    @property
    def inversion_total(self):
        return sum(self.pairs[1::2])


def ciss(sigma):
    """Scan d = 0..m-2 and aggregate maximal runs of consecutions and
    inversions; only c_1 and i_l may be zero."""
    m = sigma.m
    flags = [sigma.has_consecution_at(d) for d in range(m - 1)]
    pairs = []
    d = 0
    while d < m - 1:
        c = 0
        while d < m - 1 and flags[d]:
            c += 1
            d += 1
        i = 0
        while d < m - 1 and not flags[d]:
            i += 1
            d += 1
        pairs.extend((c, i))
    return CISS(tuple(pairs))


@dataclass(frozen=True)
class FiedlerFactor:
    index: int
    matrix: tuple
    n: int
    r: int
    m: int

    @property
    def size(self):
        return self.n * self.m + self.r


def _classical_factor(sys, i):
    """The nm x nm Fiedler factor of P alone."""
    n, m = sys.n, sys.m
    mode = sys.mode
    if i == 0:
        return _linalg.from_blocks(
            [
                [_linalg.eye((m - 1) * n, mode), _linalg.zeros((m - 1) * n, n, mode)],
                [_linalg.zeros(n, (m - 1) * n, mode), _linalg.neg(sys.coefficient(0))],
            ]
        )
    if i == m:
        return _linalg.from_blocks(
            [
                [sys.coefficient(m), _linalg.zeros(n, (m - 1) * n, mode)],
                [_linalg.zeros((m - 1) * n, n, mode), _linalg.eye((m - 1) * n, mode)],
            ]
        )
    top = (m - i - 1) * n
    bottom = (i - 1) * n
    core = _linalg.from_blocks(
        [
            [_linalg.neg(sys.coefficient(i)), _linalg.eye(n, mode)],
            [_linalg.eye(n, mode), _linalg.zeros(n, n, mode)],
        ]
    )
    return _linalg.from_blocks(
        [
            [_linalg.eye(top, mode), _linalg.zeros(top, 2 * n, mode), _linalg.zeros(top, bottom, mode)],
            [_linalg.zeros(2 * n, top, mode), core, _linalg.zeros(2 * n, bottom, mode)],
            [_linalg.zeros(bottom, top, mode), _linalg.zeros(bottom, 2 * n, mode), _linalg.eye(bottom, mode)],
        ]
    )


def make_factor(sys, i):
    """Fiedler factor of the system matrix: the classical factor bordered
    by the state data (index 0), by -E (index m), or by I_r (otherwise)."""
    n, r, m = sys.n, sys.r, sys.m
    if not 0 <= i <= m:
        raise ValueError(f"factor index {i} out of range 0..{m}")
    mode = sys.mode
    core = _classical_factor(sys, i)
    if r == 0:
        return FiedlerFactor(i, core, n, r, m)
    if i == 0:
        # column border -e_m (x) C: -C in the last block row
        col = []
        zero_row = tuple(_linalg.coerce_scalar(0, mode) for _ in range(r))
        for bi in range(m):
            for k in range(n):
                col.append(
                    tuple(-c for c in sys.C[k]) if bi == m - 1 else zero_row
                )
        row_border = []
        zero = _linalg.coerce_scalar(0, mode)
        for k in range(r):
            row_border.append(
                tuple([zero] * (m - 1) * n) + tuple(-b for b in sys.B[k])
            )
        grid = _linalg.from_blocks(
            [
                [core, tuple(col)],
                [tuple(row_border), _linalg.neg(sys.A)],
            ]
        )
        return FiedlerFactor(0, grid, n, r, m)
    corner = _linalg.neg(sys.E) if i == m else _linalg.eye(r, mode)
    grid = _linalg.from_blocks(
        [
            [core, _linalg.zeros(n * m, r, mode)],
            [_linalg.zeros(r, n * m, mode), corner],
        ]
    )
    return FiedlerFactor(i, grid, n, r, m)


def factor_inverse(factor):
    """Closed-form inverse, available for indices 1..m-1 only."""
    i, n, r, m = factor.index, factor.n, factor.r, factor.m
    if not 1 <= i <= m - 1:
        raise ValueError("closed-form inverse exists only for indices 1..m-1")
    mode = _linalg.grid_mode(factor.matrix)
    top = (m - i - 1) * n
    # recover A_i from the stored factor: the (top, top) block holds -A_i
    a_i = tuple(
        tuple(-factor.matrix[top + a][top + b] for b in range(n)) for a in range(n)
    )
    core = _linalg.from_blocks(
        [
            [_linalg.zeros(n, n, mode), _linalg.eye(n, mode)],
            [_linalg.eye(n, mode), a_i],
        ]
    )
    bottom = (i - 1) * n
    inv = _linalg.from_blocks(
        [
            [_linalg.eye(top, mode), _linalg.zeros(top, 2 * n, mode), _linalg.zeros(top, bottom, mode)],
            [_linalg.zeros(2 * n, top, mode), core, _linalg.zeros(2 * n, bottom, mode)],
            [_linalg.zeros(bottom, top, mode), _linalg.zeros(bottom, 2 * n, mode), _linalg.eye(bottom, mode)],
        ]
    )
    if r == 0:
        return inv
    return _linalg.from_blocks(
        [
            [inv, _linalg.zeros(n * m, r, mode)],
            [_linalg.zeros(r, n * m, mode), _linalg.eye(r, mode)],
        ]
    )


@dataclass(frozen=True)
class SystemPencil:
    """lam * lead + const_term with block metadata.

    const_term is the negated factor product, so the stored pencil equals
    lam*M_m - M_sigma; blocks 1..m have size n and block m+1 size r.
    b_row_block / c_col_block give the 1-based block positions of the
    single B-row and C-column inside the polynomial part.
    """

    lead: tuple
    const_term: tuple
    n: int
    r: int
    m: int
    b_row_block: int
    c_col_block: int

    @property
    def size(self):
        return self.n * self.m + self.r

    @property
    def mode(self):
        return _linalg.grid_mode(self.lead)

    def as_poly_matrix(self):
        mode = self.mode
        return PolyMatrix(
            [
                [
                    Poly((self.const_term[i][j], self.lead[i][j]), mode)
                    for j in range(self.size)
                ]
                for i in range(self.size)
            ]
        )

    def eval(self, lam0):
        return _linalg.add(
            _linalg.scale(self.lead, lam0), self.const_term
        )

    def __eq__(self, other):
        return (
            isinstance(other, SystemPencil)
            and (self.n, self.r, self.m) == (other.n, other.r, other.m)
            and _linalg.eq(self.lead, other.lead)
            and _linalg.eq(self.const_term, other.const_term)
        )


def _metadata(sigma):
    s = ciss(sigma)
    m = sigma.m
    if s.c1 > 0:
        return m - s.c1, m
    return m, m - s.i1


def pencil_direct(sys, sigma):
    """lam*M_m - M_{sigma^{-1}(1)} ... M_{sigma^{-1}(m)} by plain product."""
    if sigma.m != sys.m:
        raise ValueError("bijection length does not match the system degree")
    prod = None
    for i in sigma.inverse_order:
        f = make_factor(sys, i).matrix
        prod = f if prod is None else _linalg.mul(prod, f)
    lead = make_factor(sys, sys.m).matrix
    b_row, c_col = _metadata(sigma)
    return SystemPencil(
        lead=lead,
        const_term=_linalg.neg(prod),
        n=sys.n,
        r=sys.r,
        m=sys.m,
        b_row_block=b_row,
        c_col_block=c_col,
    )


def pencil_algorithm1(sys, sigma):
    """Factor product built by row/column splicing instead of multiplying.

    Starts from the 2x2-block seed fixed by the consecution/inversion at 0
    and grows one block row/column per step; the result must match
    pencil_direct exactly.
    """
    if sys.m < 2:
        raise ValueError("the splicing construction needs degree m >= 2")
    if sigma.m != sys.m:
        raise ValueError("bijection length does not match the system degree")
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode

    def neg_coeff(k):
        return _linalg.neg(sys.coefficient(k))

    eye_n = _linalg.eye(n, mode)
    neg_b = _linalg.neg(sys.B) if r else _linalg.zeros(0, n, mode)
    neg_c = _linalg.neg(sys.C) if r else _linalg.zeros(n, 0, mode)
    neg_a = _linalg.neg(sys.A) if r else ()

    def zblock(h, w):
        return _linalg.zeros(h, w, mode)

    # w is a block grid; sizes: (i+2) blocks of width n then one of width r
    if sigma.has_consecution_at(0):
        w = [
            [neg_coeff(1), eye_n, zblock(n, r)],
            [neg_coeff(0), zblock(n, n), neg_c],
            [neg_b, zblock(r, n), neg_a],
        ]
    else:
        w = [
            [neg_coeff(1), neg_coeff(0), neg_c],
            [eye_n, zblock(n, n), zblock(n, r)],
            [zblock(r, n), neg_b, neg_a],
        ]

    for i in range(1, m - 1):
        old = len(w)  # (i + 1) n-blocks + the state block
        if sigma.has_consecution_at(i):
            top = [neg_coeff(i + 1), eye_n] + [zblock(n, n)] * i + [zblock(n, r)]
            body = []
            for bi in range(old):
                h = n if bi < old - 1 else r
                body.append(
                    [w[bi][0], zblock(h, n)] + list(w[bi][1:])
                )
            w = [top] + body
        else:
            first_col = [neg_coeff(i + 1), eye_n] + [zblock(n, n)] * (i) + [zblock(r, n)]
            rest = [list(w[0])] + [[zblock(n, wd) for wd in [n] * (i + 1) + [r]]] + [
                list(w[bi]) for bi in range(1, old)
            ]
            w = [[first_col[bi]] + rest[bi] for bi in range(old + 1)]

    prod = _linalg.from_blocks(w)
    lead = make_factor(sys, m).matrix
    b_row, c_col = _metadata(sigma)
    return SystemPencil(
        lead=lead,
        const_term=_linalg.neg(prod),
        n=n,
        r=r,
        m=m,
        b_row_block=b_row,
        c_col_block=c_col,
    )


def pencil_block_formula(sys, sigma):
    """Assemble the system pencil from the classical Fiedler pencil of P
    plus a single bordered C-column and B-row placed per the CISS."""
    if sys.m < 2:
        raise ValueError("the block formula needs degree m >= 2")
    if sigma.m != sys.m:
        raise ValueError("bijection length does not match the system degree")
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode
    prod = None
    for i in sigma.inverse_order:
        f = _classical_factor(sys, i)
        prod = f if prod is None else _linalg.mul(prod, f)
    b_row, c_col = _metadata(sigma)
    const_poly = _linalg.neg(prod)
    lead = make_factor(sys, m).matrix
    if r == 0:
        return SystemPencil(lead, const_poly, n, r, m, b_row, c_col)
    col = []
    zero_row = tuple(_linalg.coerce_scalar(0, mode) for _ in range(r))
    for bi in range(1, m + 1):
        for k in range(n):
            col.append(tuple(sys.C[k]) if bi == c_col else zero_row)
    rows = []
    zero = _linalg.coerce_scalar(0, mode)
    for k in range(r):
        row = []
        for bi in range(1, m + 1):
            row.extend(tuple(sys.B[k]) if bi == b_row else [zero] * n)
        rows.append(tuple(row))
    const = _linalg.from_blocks(
        [
            [const_poly, tuple(col)],
            [tuple(rows), sys.A],
        ]
    )
    return SystemPencil(lead, const, n, r, m, b_row, c_col)


def first_companion(sys):
    """The companion pencil with sigma^{-1} = (m-1, ..., 1, 0).

    Built by the factor product and cross-checked against the direct
    layout: leading block row carries A_{m-1} ... A_0 and C, the identity
    subdiagonal is negated, and B sits in the last block column of the
    state row.
    """
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode
    pencil = pencil_direct(sys, Bijection.first_companion_order(m))
    if m >= 2:
        zero = _linalg.coerce_scalar(0, mode)
        size = n * m + r
        const = [[zero] * size for _ in range(size)]
        for bj in range(m):
            coeff = sys.coefficient(m - 1 - bj)
            for a in range(n):
                for b in range(n):
                    const[a][bj * n + b] = coeff[a][b]
        for bi in range(1, m):
            for a in range(n):
                const[bi * n + a][(bi - 1) * n + a] = -_linalg.coerce_scalar(1, mode)
        for a in range(n):
            for k in range(r):
                const[a][m * n + k] = sys.C[a][k]
        for k in range(r):
            for b in range(n):
                const[m * n + k][(m - 1) * n + b] = sys.B[k][b]
            for j in range(r):
                const[m * n + k][m * n + j] = sys.A[k][j]
        if not _linalg.eq(_linalg.freeze(const), pencil.const_term):
            raise RuntimeError("companion layout cross-check failed")
    return pencil


def second_companion(sys):
    """The companion pencil with sigma^{-1} = (0, 1, ..., m-1); equals the
    system block transpose of the first companion form."""
    return pencil_direct(sys, Bijection.second_companion_order(sys.m))


def _border_structure_ok(grid, n, r, m, row_block, col_block):
    """Verify the single e_i (x) X column / e_j^T (x) Y row shape."""
    size = n * m + r
    for bi in range(1, m + 1):
        if bi == col_block:
            continue
        for a in range(n):
            for k in range(r):
                if grid[(bi - 1) * n + a][m * n + k] != 0:
                    return False
    for bj in range(1, m + 1):
        if bj == row_block:
            continue
        for k in range(r):
            for b in range(n):
                if grid[m * n + k][(bj - 1) * n + b] != 0:
                    return False
    return True


def system_block_transpose(pencil):
    """Block transpose of a system pencil: blockwise transpose of the
    polynomial part with the B-row and C-column block indices swapped."""
    n, r, m = pencil.n, pencil.r, pencil.m

    def one_side(grid, row_block, col_block, new_row, new_col):
        if r and not _border_structure_ok(grid, n, r, m, row_block, col_block):
            raise ValueError("pencil border is not in e_i (x) X / e_j^T (x) Y form")
        size = n * m + r
        out = [[None] * size for _ in range(size)]
        for bi in range(m):
            for bj in range(m):
                for a in range(n):
                    for b in range(n):
                        out[bj * n + a][bi * n + b] = grid[bi * n + a][bj * n + b]
        for k in range(r):
            for j in range(r):
                out[m * n + k][m * n + j] = grid[m * n + k][m * n + j]
        for a in range(n):
            for k in range(r):
                out[(new_col - 1) * n + a][m * n + k] = grid[(col_block - 1) * n + a][m * n + k]
        for k in range(r):
            for b in range(n):
                out[m * n + k][(new_row - 1) * n + b] = grid[m * n + k][(row_block - 1) * n + b]
        zero = _linalg.coerce_scalar(0, pencil.mode)
        for i in range(size):
            for j in range(size):
                if out[i][j] is None:
                    out[i][j] = zero
        return _linalg.freeze(out)

    new_b, new_c = pencil.c_col_block, pencil.b_row_block
    return SystemPencil(
        lead=one_side(pencil.lead, pencil.b_row_block, pencil.c_col_block, new_b, new_c),
        const_term=one_side(pencil.const_term, pencil.b_row_block, pencil.c_col_block, new_b, new_c),
        n=n,
        r=r,
        m=m,
        b_row_block=new_b,
        c_col_block=new_c,
    )


def is_block_pentadiagonal(pencil):
    """Structural scan: every block outside the two block super- and
    sub-diagonals must vanish in both the lead and the constant term, the
    state row/column counting as one block."""
    n, r, m = pencil.n, pencil.r, pencil.m
    sizes = [n] * m + ([r] if r else [])
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    k = len(sizes)
    for grid in (pencil.lead, pencil.const_term):
        for bi in range(k):
            for bj in range(k):
                if abs(bi - bj) <= 2:
                    continue
                for a in range(offsets[bi], offsets[bi + 1]):
                    for b in range(offsets[bj], offsets[bj + 1]):
                        if grid[a][b] != 0:
                            return False
    return True


def commutation_check(sys, i, j):
    """Exact test of M_i M_j = M_j M_i for the system factors."""
    fi = make_factor(sys, i).matrix
    fj = make_factor(sys, j).matrix
    return _linalg.eq(_linalg.mul(fi, fj), _linalg.mul(fj, fi))
