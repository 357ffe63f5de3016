"""Scalar polynomials, rational functions, and their dense matrices.

Two scalar fields are supported and never mixed silently: ``exact`` works
over the rationals with `fractions.Fraction` coefficients, ``float`` over
binary64.  Everything structural (Smith form, Smith-McMillan form,
divisibility, gcd) is restricted to exact mode so that equality stays
decidable; float mode exists for evaluation and for the numeric eigenvalue
backend.

The zero polynomial is encoded with degree -1 and an empty coefficient
tuple, which keeps divisibility checks free of special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from ._linalg import EXACT, FLOAT, coerce_scalar

__all__ = [
    "EXACT",
    "FLOAT",
    "Poly",
    "RationalFn",
    "PolyMatrix",
    "RationalMatrix",
    "SmithForm",
    "SmithMcMillanForm",
    "poly_gcd",
    "poly_lcm",
    "square_free_decomposition",
    "poly_matrix_eval",
    "poly_matrix_det",
    "horner_shift",
    "smith_form",
    "smith_form_with_transforms",
    "smith_form_matrix",
    "smith_mcmillan",
    "zero_pole_polys",
    "multiplicity_index",
    "block_transpose",
]


class Poly:
    """Scalar polynomial, coefficients stored in ascending power order."""

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs=(), mode=None):
        coeffs = tuple(coeffs)
        if mode is None:
            mode = FLOAT if any(isinstance(c, float) for c in coeffs) else EXACT
        coeffs = tuple(coerce_scalar(c, mode) for c in coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c, mode=EXACT):
        return cls((c,), mode)

    @classmethod
    def zero(cls, mode=EXACT):
        return cls((), mode)

    @classmethod
    def one(cls, mode=EXACT):
        return cls((1,), mode)

    @classmethod
    def lam(cls, mode=EXACT):
        """The monomial corresponding to the indeterminate itself."""
        return cls((0, 1), mode)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def leading(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else coerce_scalar(0, self.mode)

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError("expected a Poly")
        if other.mode != self.mode:
            raise ValueError("field mode mismatch between polynomials")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            (self.coefficient(i) + other.coefficient(i) for i in range(n)), self.mode
        )

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(
            (self.coefficient(i) - other.coefficient(i) for i in range(n)), self.mode
        )

    def __neg__(self):
        return Poly((-c for c in self.coeffs), self.mode)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            c = coerce_scalar(other, self.mode)
            return Poly((c * x for x in self.coeffs), self.mode)
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.mode)
        zero = coerce_scalar(0, self.mode)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out, self.mode)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.one(self.mode)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = other.degree
        lead = other.coeffs[-1]
        q = [coerce_scalar(0, self.mode)] * max(len(rem) - dn, 0)
        for i in range(len(rem) - 1, dn - 1, -1):
            if rem[i] == 0:
                continue
            f = rem[i] / lead
            q[i - dn] = f
            for j in range(dn + 1):
                rem[i - dn + j] -= f * other.coeffs[j]
        return Poly(q, self.mode), Poly(rem[:dn], self.mode)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other):
        """Exact divisibility test (zero remainder)."""
        if self.is_zero:
            return other.is_zero
        return (other % self).is_zero

    def __call__(self, x):
        """Horner evaluation; accepts exact, float, or complex points."""
        if not self.coeffs:
            return 0 * x if isinstance(x, (float, complex)) else Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def monic(self):
        if self.is_zero:
            return self
        return self * (1 / Fraction(self.leading) if self.mode == EXACT else 1.0 / self.leading)

    def derivative(self):
        return Poly(
            (i * c for i, c in enumerate(self.coeffs) if i > 0), self.mode
        )

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.mode == other.mode
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.mode, self.coeffs))

    def pretty(self, var="λ"):
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficient(k)
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Poly<{self.pretty()}>"


def poly_gcd(a, b):
    """Monic greatest common divisor over the rationals (exact mode only)."""
    if a.mode != EXACT or b.mode != EXACT:
        raise ValueError("polynomial gcd requires exact mode")
    while not b.is_zero:
        r = a % b
        a, b = b, r.monic()
    return a.monic()


def poly_lcm(a, b):
    if a.is_zero or b.is_zero:
        return Poly.zero()
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


def square_free_decomposition(p):
    """Split a nonzero exact polynomial into square-free factors.

    Returns a list of (factor, multiplicity) pairs with pairwise-coprime
    monic factors whose weighted product is p up to its leading coefficient.
    """
    if p.mode != EXACT:
        raise ValueError("square-free decomposition requires exact mode")
    if p.is_zero:
        raise ValueError("square-free decomposition of the zero polynomial")
    f = p.monic()
    if f.degree == 0:
        return []
    out = []
    g = poly_gcd(f, f.derivative())
    w = f // g
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, g)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        w = y
        g = g // y
        i += 1
    return out


class RationalFn:
    """Quotient of two scalar polynomials with a monic denominator.

    In exact mode the fraction is always held in lowest terms.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Poly.one(num.mode)
        if num.mode != den.mode:
            raise ValueError("field mode mismatch in rational function")
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.mode == EXACT:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lead = den.leading
        if lead != 1:
            num = num * (1 / Fraction(lead) if num.mode == EXACT else 1.0 / lead)
            den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @property
    def mode(self):
        return self.den.mode

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.degree == 0

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly.one(p.mode))

    @classmethod
    def constant(cls, c, mode=EXACT):
        return cls(Poly.constant(c, mode), Poly.one(mode))

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly):
            return RationalFn.from_poly(other)
        if isinstance(other, (int, Fraction, float)):
            return RationalFn.constant(other, self.mode)
        raise TypeError("cannot combine RationalFn with " + type(other).__name__)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def order_at(self, lam0):
        """Order of the function at a rational point: multiplicity of lam0 in
        the numerator minus its multiplicity in the denominator."""
        return _root_multiplicity(self.num, lam0) - _root_multiplicity(self.den, lam0)

    def pretty(self, var="λ"):
        if self.is_polynomial:
            return self.num.pretty(var)
        return f"({self.num.pretty(var)}) / ({self.den.pretty(var)})"

    def __repr__(self):
        return f"RationalFn<{self.pretty()}>"


def _root_multiplicity(p, lam0):
    if p.is_zero:
        raise ValueError("zero polynomial has no root multiplicity")
    factor = Poly((-lam0, 1), p.mode)
    mult = 0
    while True:
        q, r = divmod(p, factor)
        if not r.is_zero:
            return mult
        p = q
        mult += 1


class PolyMatrix:
    """Dense matrix with polynomial entries sharing one field mode."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(e for e in row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("PolyMatrix must be non-empty")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("ragged rows in PolyMatrix")
        mode = entries[0][0].mode
        for row in entries:
            for e in row:
                if not isinstance(e, Poly):
                    raise TypeError("PolyMatrix entries must be Poly")
                if e.mode != mode:
                    raise ValueError("mixed field modes in PolyMatrix")
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @property
    def mode(self):
        return self.entries[0][0].mode

    @property
    def degree(self):
        return max(e.degree for row in self.entries for e in row)

    @property
    def is_square(self):
        return self.rows == self.cols

    @classmethod
    def from_scalar_grid(cls, grid, mode=None):
        if mode is None:
            mode = _linalg.grid_mode(grid)
        return cls(
            tuple(tuple(Poly((x,), mode) for x in row) for row in grid)
        )

    @classmethod
    def from_coefficient_grids(cls, grids, mode=EXACT):
        """Assemble sum_j lam^j A_j from constant coefficient grids."""
        rows, cols = _linalg.shape(grids[0])
        entries = [
            [Poly((g[i][j] for g in grids), mode) for j in range(cols)]
            for i in range(rows)
        ]
        return cls(entries)

    @classmethod
    def identity(cls, k, mode=EXACT):
        return cls.from_scalar_grid(_linalg.eye(k, mode), mode)

    @classmethod
    def zeros(cls, rows, cols, mode=EXACT):
        z = Poly.zero(mode)
        return cls(tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def coefficient_grid(self, k):
        """Constant coefficient matrix of lam^k."""
        return tuple(tuple(e.coefficient(k) for e in row) for row in self.entries)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __add__(self, other):
        self._check(other)
        return PolyMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other):
        self._check(other)
        return PolyMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __neg__(self):
        return PolyMatrix(tuple(tuple(-e for e in row) for row in self.entries))

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError("inner dimensions do not match")
            bt = tuple(zip(*other.entries))
            zero = Poly.zero(self.mode)
            return PolyMatrix(
                tuple(
                    tuple(
                        sum((a * b for a, b in zip(row, col) if not (a.is_zero or b.is_zero)), zero)
                        for col in bt
                    )
                    for row in self.entries
                )
            )
        return self.scale(other)

    def scale(self, c):
        """Entrywise multiplication by a scalar or a scalar polynomial."""
        if not isinstance(c, Poly):
            c = Poly.constant(c, self.mode)
        return PolyMatrix(tuple(tuple(c * e for e in row) for row in self.entries))

    def transpose(self):
        return PolyMatrix(tuple(zip(*self.entries)))

    def _check(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        if self.mode != other.mode:
            raise ValueError("field mode mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def is_zero_matrix(self):
        return all(e.is_zero for row in self.entries for e in row)

    def submatrix(self, drop_row, drop_col):
        return PolyMatrix(
            tuple(
                tuple(e for j, e in enumerate(row) if j != drop_col)
                for i, row in enumerate(self.entries)
                if i != drop_row
            )
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(e.pretty() for e in row) for row in self.entries
        )
        return f"PolyMatrix[{self.rows}x{self.cols}]({body})"


def poly_matrix_eval(matrix, lam0):
    """Evaluate a PolyMatrix at a scalar point, returning a constant grid."""
    if isinstance(lam0, (int, Fraction)):
        if matrix.mode != EXACT:
            raise ValueError("exact point for a float-mode matrix")
        lam0 = Fraction(lam0)
    elif isinstance(lam0, float):
        if matrix.mode != FLOAT:
            raise ValueError("float point for an exact-mode matrix")
    elif not isinstance(lam0, complex):
        raise TypeError("unsupported evaluation point")
    return tuple(tuple(e(lam0) for e in row) for row in matrix.entries)


def poly_matrix_det(matrix):
    """Exact determinant of a square polynomial matrix.

    Fraction-free Bareiss elimination over the polynomial ring: every
    division performed is exact, so intermediate entries remain polynomials.
    Float mode is rejected; numeric determinants belong to the eigen module.
    """
    if not matrix.is_square:
        raise ValueError("determinant of a non-square matrix")
    if matrix.mode != EXACT:
        raise ValueError("exact mode required for polynomial determinants")
    n = matrix.rows
    w = [list(row) for row in matrix.entries]
    sign = 1
    prev = Poly.one()
    for k in range(n - 1):
        if w[k][k].is_zero:
            for i in range(k + 1, n):
                if not w[i][k].is_zero:
                    w[k], w[i] = w[i], w[k]
                    sign = -sign
                    break
            else:
                return Poly.zero()
        pivot = w[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                w[i][j] = (w[i][j] * pivot - w[i][k] * w[k][j]) // prev
            w[i][k] = Poly.zero()
        prev = pivot
    return w[n - 1][n - 1] * sign


def horner_shift(matrix, k):
    """Degree-k Horner shift: A_{m-k} + lam*A_{m-k+1} + ... + lam^k*A_m."""
    m = matrix.degree
    if not 0 <= k <= m:
        raise ValueError(f"Horner shift index {k} out of range for degree {m}")
    grids = [matrix.coefficient_grid(m - k + j) for j in range(k + 1)]
    return PolyMatrix.from_coefficient_grids(grids, matrix.mode)


def block_transpose(matrix, block_rows, block_cols, block_size):
    """Blockwise transpose for a uniformly blocked polynomial matrix."""
    if matrix.rows != block_rows * block_size or matrix.cols != block_cols * block_size:
        raise ValueError("dimensions are not an exact multiple of the block size")
    s = block_size
    out = [
        [None] * (block_rows * s)
        for _ in range(block_cols * s)
    ]
    for bi in range(block_rows):
        for bj in range(block_cols):
            for i in range(s):
                for j in range(s):
                    out[bj * s + i][bi * s + j] = matrix.entries[bi * s + i][bj * s + j]
    return PolyMatrix(out)


@dataclass(frozen=True)
class SmithForm:
    """diag(I_p, phi_1, ..., phi_k, 0) up to unimodular equivalence."""

    identity_count: int
    invariant_polys: tuple
    zero_rows: int
    zero_cols: int

    @property
    def normal_rank(self):
        return self.identity_count + len(self.invariant_polys)


@dataclass(frozen=True)
class SmithMcMillanForm:
    """diag(phi_i / psi_i, 0) with the usual divisibility chains."""

    numerators: tuple
    denominators: tuple
    zero_rows: int
    zero_cols: int

    @property
    def normal_rank(self):
        return len(self.numerators)


def _smith_reduce(matrix, track=False):
    rows, cols = matrix.rows, matrix.cols
    w = [list(row) for row in matrix.entries]
    u = [list(row) for row in PolyMatrix.identity(rows).entries] if track else None
    v = [list(row) for row in PolyMatrix.identity(cols).entries] if track else None

    def swap_rows(a, b):
        w[a], w[b] = w[b], w[a]
        if track:
            u[a], u[b] = u[b], u[a]

    def swap_cols(a, b):
        for row in w:
            row[a], row[b] = row[b], row[a]
        if track:
            for row in v:
                row[a], row[b] = row[b], row[a]

    def row_op(dst, src, q):
        # row dst -= q * row src
        w[dst] = [x - q * y for x, y in zip(w[dst], w[src])]
        if track:
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def row_add(dst, src):
        w[dst] = [x + y for x, y in zip(w[dst], w[src])]
        if track:
            u[dst] = [x + y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, q):
        for row in w:
            row[dst] = row[dst] - q * row[src]
        if track:
            for row in v:
                row[dst] = row[dst] - q * row[src]

    def scale_row(i, c):
        w[i] = [c * x for x in w[i]]
        if track:
            u[i] = [c * x for x in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # gcd-pivot selection: minimal-degree nonzero entry of the active
        # submatrix, ties broken by lowest (row, col)
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if not w[i][j].is_zero and (
                    pivot is None or w[i][j].degree < w[pivot[0]][pivot[1]].degree
                ):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        while True:
            # clear the pivot column with row operations
            restart = False
            for i in range(t + 1, rows):
                if w[i][t].is_zero:
                    continue
                q, r = divmod(w[i][t], w[t][t])
                row_op(i, t, q)
                if not r.is_zero:
                    swap_rows(t, i)
                    restart = True
                    break
            if restart:
                continue
            # clear the pivot row with column operations
            for j in range(t + 1, cols):
                if w[t][j].is_zero:
                    continue
                q, r = divmod(w[t][j], w[t][t])
                col_op(j, t, q)
                if not r.is_zero:
                    swap_cols(t, j)
                    restart = True
                    break
            if restart:
                continue
            # enforce divisibility of the trailing block by the pivot
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if not (w[i][j] % w[t][t]).is_zero:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender)

        lead = w[t][t].leading
        if lead != 1:
            scale_row(t, Fraction(1, 1) / lead)
        t += 1

    pivots = [w[i][i] for i in range(t)]
    return pivots, t, u, v


def smith_form(matrix):
    """Smith form of an exact polynomial matrix.

    Elementary row/column reduction over Q[lam] with the minimal-degree
    pivot rule; guaranteed for sizes up to 12x12 with entry degrees up to
    16, merely slow beyond that.
    """
    if matrix.mode != EXACT:
        raise ValueError("Smith form requires exact mode")
    pivots, t, _, _ = _smith_reduce(matrix, track=False)
    identity = sum(1 for p in pivots if p.degree == 0)
    invariant = tuple(p for p in pivots if p.degree > 0)
    return SmithForm(
        identity_count=identity,
        invariant_polys=invariant,
        zero_rows=matrix.rows - t,
        zero_cols=matrix.cols - t,
    )


def smith_form_with_transforms(matrix):
    """Smith form together with unimodular U, V with U * M * V = SF(M)."""
    if matrix.mode != EXACT:
        raise ValueError("Smith form requires exact mode")
    pivots, t, u, v = _smith_reduce(matrix, track=True)
    identity = sum(1 for p in pivots if p.degree == 0)
    invariant = tuple(p for p in pivots if p.degree > 0)
    form = SmithForm(
        identity_count=identity,
        invariant_polys=invariant,
        zero_rows=matrix.rows - t,
        zero_cols=matrix.cols - t,
    )
    return form, PolyMatrix(u), PolyMatrix(v)


def smith_form_matrix(form, rows, cols, mode=EXACT):
    """Materialize a SmithForm as the canonical diagonal PolyMatrix."""
    zero = Poly.zero(mode)
    entries = [[zero] * cols for _ in range(rows)]
    diag = [Poly.one(mode)] * form.identity_count + list(form.invariant_polys)
    for i, p in enumerate(diag):
        entries[i][i] = p
    return PolyMatrix(entries)


class RationalMatrix:
    """Dense matrix of rational functions sharing one field mode."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(e for e in row) for row in entries)
        if not entries or not entries[0]:
            raise ValueError("RationalMatrix must be non-empty")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("ragged rows in RationalMatrix")
        mode = entries[0][0].mode
        for row in entries:
            for e in row:
                if not isinstance(e, RationalFn):
                    raise TypeError("RationalMatrix entries must be RationalFn")
                if e.mode != mode:
                    raise ValueError("mixed field modes in RationalMatrix")
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @property
    def mode(self):
        return self.entries[0][0].mode

    @classmethod
    def from_poly_matrix(cls, matrix):
        return cls(
            tuple(
                tuple(RationalFn.from_poly(e) for e in row)
                for row in matrix.entries
            )
        )

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return RationalMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __eq__(self, other):
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(
            ", ".join(e.pretty() for e in row) for row in self.entries
        )
        return f"RationalMatrix[{self.rows}x{self.cols}]({body})"


def smith_mcmillan(matrix):
    """Smith-McMillan form of an exact rational matrix.

    Clears denominators with d = monic lcm of all entry denominators, takes
    the Smith form of N = d * G, and reduces each epsilon_i / d to lowest
    terms with both parts monic.
    """
    if matrix.mode != EXACT:
        raise ValueError("Smith-McMillan form requires exact mode")
    d = Poly.one()
    for row in matrix.entries:
        for e in row:
            d = poly_lcm(d, e.den)
    numer = PolyMatrix(
        tuple(
            tuple(e.num * (d // e.den) for e in row)
            for row in matrix.entries
        )
    )
    sf = smith_form(numer)
    eps = [Poly.one()] * sf.identity_count + list(sf.invariant_polys)
    nums, dens = [], []
    for e in eps:
        g = poly_gcd(e, d)
        nums.append((e // g).monic())
        dens.append((d // g).monic())
    return SmithMcMillanForm(
        numerators=tuple(nums),
        denominators=tuple(dens),
        zero_rows=sf.zero_rows,
        zero_cols=sf.zero_cols,
    )


def zero_pole_polys(sm):
    """Zero and pole polynomials: the monic products of the phi_i and psi_i."""
    phi = Poly.one()
    psi = Poly.one()
    for p in sm.numerators:
        phi = phi * p
    for p in sm.denominators:
        psi = psi * p
    return phi.monic(), psi.monic()


def multiplicity_index(sm, lam0, kind):
    """Multiplicity index tuple of a point, as a zero or as a pole.

    kind="zero" returns (gamma_1, ..., gamma_k), nondecreasing; kind="pole"
    returns (alpha_k, ..., alpha_1), i.e. the pole multiplicities listed
    from the last invariant denominator to the first.  All-zero tuples are
    returned when the point is not a zero/pole.
    """
    lam0 = Fraction(lam0)
    if kind == "zero":
        return tuple(_root_multiplicity(p, lam0) for p in sm.numerators)
    if kind == "pole":
        return tuple(
            _root_multiplicity(p, lam0) for p in reversed(sm.denominators)
        )
    raise ValueError("kind must be 'zero' or 'pole'")
