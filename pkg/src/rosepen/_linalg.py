"""Dense constant-matrix helpers shared by the higher level modules.

Grids are tuples of tuple rows.  Entries are `fractions.Fraction` in exact
mode and `float` in float mode; nothing here ever mixes the two.  numpy only
enters through the float-mode rank helper, all exact work stays in pure
Python so equality is decidable.
"""

from __future__ import annotations

from fractions import Fraction

EXACT = "exact"
FLOAT = "float"


def scalar_mode(x):
    if isinstance(x, float):
        return FLOAT
    if isinstance(x, (int, Fraction)):
        return EXACT
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def coerce_scalar(x, mode):
    if mode == EXACT:
        if isinstance(x, float):
            raise ValueError("float scalar in exact mode")
        return Fraction(x)
    return float(x)


def freeze(grid):
    return tuple(tuple(row) for row in grid)


def coerce_grid(grid, mode):
    return tuple(tuple(coerce_scalar(x, mode) for x in row) for row in grid)


def shape(grid):
    rows = len(grid)
    cols = len(grid[0]) if rows else 0
    return rows, cols


def grid_mode(grid):
    for row in grid:
        for x in row:
            if isinstance(x, float):
                return FLOAT
    return EXACT


def zeros(rows, cols, mode=EXACT):
    z = coerce_scalar(0, mode)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def eye(k, mode=EXACT):
    one = coerce_scalar(1, mode)
    z = coerce_scalar(0, mode)
    return tuple(tuple(one if i == j else z for j in range(k)) for i in range(k))


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def neg(a):
    return tuple(tuple(-x for x in row) for row in a)


def scale(a, c):
    return tuple(tuple(c * x for x in row) for row in a)


def mul(a, b):
    """Matrix product of two grids; the inner dimensions must agree."""
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def transpose(a):
    return tuple(zip(*a))


def eq(a, b):
    return shape(a) == shape(b) and all(
        x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def is_zero(a):
    return all(x == 0 for row in a for x in row)


def from_blocks(blocks):
    """Flatten a 2-D list of grids into one grid.

    Block rows must have consistent heights and block columns consistent
    widths; zero-row/zero-column blocks are allowed and simply vanish.
    """
    out = []
    for block_row in blocks:
        heights = {len(b) for b in block_row if len(b)}
        if len(heights) > 1:
            raise ValueError("inconsistent block heights")
        height = heights.pop() if heights else 0
        for i in range(height):
            row = []
            for b in block_row:
                if len(b):
                    row.extend(b[i])
            out.append(tuple(row))
    return tuple(out)


def submatrix(a, drop_row, drop_col):
    return tuple(
        tuple(x for j, x in enumerate(row) if j != drop_col)
        for i, row in enumerate(a)
        if i != drop_row
    )


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return a / b


def det(a):
    """Exact determinant by fraction-free (Bareiss) elimination.

    Works over integers and rationals alike; integer-valued input is
    demoted to machine-free Python ints first, which keeps the hot
    pencil-sampling paths out of Fraction arithmetic.
    """
    n = len(a)
    if n == 0:
        return Fraction(1)
    w = [list(row) for row in a]
    if all(
        isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
        for row in w
        for x in row
    ):
        w = [[int(x) for x in row] for row in w]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if w[k][k] == 0:
            for i in range(k + 1, n):
                if w[i][k] != 0:
                    w[k], w[i] = w[i], w[k]
                    sign = -sign
                    break
            else:
                return 0 * w[0][0]
        pivot = w[k][k]
        for i in range(k + 1, n):
            wik = w[i][k]
            for j in range(k + 1, n):
                w[i][j] = _exact_div(w[i][j] * pivot - wik * w[k][j], prev)
            w[i][k] = 0
        prev = pivot
    return sign * w[n - 1][n - 1]


def rank(a):
    """Exact rank by Gaussian elimination over the rationals."""
    rows, cols = shape(a)
    w = [[Fraction(x) for x in row] for row in a]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if w[i][c] != 0), None)
        if piv is None:
            continue
        w[r], w[piv] = w[piv], w[r]
        inv = 1 / w[r][c]
        w[r] = [x * inv for x in w[r]]
        for i in range(rows):
            if i != r and w[i][c] != 0:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[r])]
        r += 1
        if r == rows:
            break
    return r


def rref(a):
    """Reduced row echelon form; returns (rref grid, pivot column indices)."""
    rows, cols = shape(a)
    w = [[Fraction(x) for x in row] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if w[i][c] != 0), None)
        if piv is None:
            continue
        w[r], w[piv] = w[piv], w[r]
        inv = 1 / w[r][c]
        w[r] = [x * inv for x in w[r]]
        for i in range(rows):
            if i != r and w[i][c] != 0:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return freeze(w), tuple(pivots)


def inverse(a):
    """Exact inverse via Gauss-Jordan; raises ValueError if singular."""
    n = len(a)
    w = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if w[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        w[c], w[piv] = w[piv], w[c]
        inv = 1 / w[c][c]
        w[c] = [x * inv for x in w[c]]
        for i in range(n):
            if i != c and w[i][c] != 0:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[c])]
    return tuple(tuple(row[n:]) for row in w)


def to_float_array(a):
    import numpy as np

    return np.array([[float(x) for x in row] for row in a], dtype=float)


def rank_float(a, rtol=None):
    """Numerical rank: singular values below max(dims) * eps * sigma_1 count
    as zero (eps = 2**-52) unless an explicit relative tolerance is given."""
    import numpy as np

    m = to_float_array(a)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    if rtol is None:
        rtol = max(m.shape) * 2.0 ** -52
    return int((s > rtol * s[0]).sum())
