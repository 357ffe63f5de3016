"""System-equivalence certificates for Fiedler pencils.

The auxiliary system polynomials Q_i, R_i, T_i, D_i couple consecutive
block rows of an (nm+r)-sized system matrix; chaining them according to the
consecution/inversion pattern of a bijection transforms a Fiedler pencil
step by step into diag(-I_{(m-1)n}, S(lam)).  Accumulating the left and
right factors yields explicit unimodular transforms U, V that act as the
identity on the r-by-r state block, i.e. a checkable certificate that the
pencil is a trimmed structured linearization of the system matrix.

Everything here is exact-mode only: the certificate is a proof artifact and
float residuals prove nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._linalg import EXACT
from .fiedler import make_factor, pencil_direct
from .polymat import Poly, PolyMatrix, horner_shift, poly_matrix_det
from .system import assemble_system_matrix

__all__ = [
    "AuxMatrix",
    "AuxRelationsReport",
    "CertificateError",
    "EquivalenceCertificate",
    "aux_matrix",
    "aux_block_transpose",
    "aux_relations_check",
    "intermediate_pencil",
    "build_certificate",
    "verify_rosenbrock_linearization",
]


class CertificateError(ValueError):
    """A certificate product failed to reproduce its target exactly."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class AuxMatrix:
    kind: str  # "Q" | "R" | "T" | "D"
    index: int
    matrix: PolyMatrix
    block_transposed: bool = False


@dataclass(frozen=True)
class AuxRelationsReport:
    failures: tuple

    def __bool__(self):
        return not self.failures


def _require_exact(sys):
    if sys.mode != EXACT:
        raise ValueError("equivalence certificates require exact mode")


def _block_entries(n, m, mode):
    zero = Poly.zero(mode)
    return [[zero for _ in range(n * m)] for _ in range(n * m)]


def _set_block(entries, n, bi, bj, block):
    for a in range(n):
        for b in range(n):
            entries[(bi - 1) * n + a][(bj - 1) * n + b] = block[a][b]


def _eye_block(n, mode):
    one = Poly.one(mode)
    zero = Poly.zero(mode)
    return [[one if a == b else zero for b in range(n)] for a in range(n)]


def _poly_core(sys, kind, i):
    """The nm x nm polynomial part of the auxiliary matrix."""
    n, m = sys.n, sys.m
    mode = sys.mode
    lam = Poly.lam(mode)
    entries = _block_entries(n, m, mode)
    eye = _eye_block(n, mode)

    if kind == "D":
        if not 1 <= i <= m:
            raise ValueError(f"D index {i} out of range 1..{m}")
        shift = horner_shift(sys.P, i - 1)
        if i == m:
            _set_block(entries, n, m, m, shift.entries)
            return PolyMatrix(entries)
        _set_block(entries, n, i, i, shift.entries)
        _set_block(entries, n, i + 1, i + 1, eye)
        for bk in range(i + 2, m + 1):
            _set_block(entries, n, bk, bk, eye)
        return PolyMatrix(entries)

    if not 1 <= i <= m - 1:
        raise ValueError(f"{kind} index {i} out of range 1..{m - 1}")
    for bk in range(1, m + 1):
        if bk not in (i, i + 1):
            _set_block(entries, n, bk, bk, eye)

    if kind == "Q":
        lam_eye = [[lam if a == b else Poly.zero(mode) for b in range(n)] for a in range(n)]
        _set_block(entries, n, i, i, eye)
        _set_block(entries, n, i + 1, i + 1, eye)
        _set_block(entries, n, i, i + 1, lam_eye)
        return PolyMatrix(entries)

    if kind == "R":
        shift = horner_shift(sys.P, i)
        _set_block(entries, n, i, i + 1, eye)
        _set_block(entries, n, i + 1, i, eye)
        _set_block(entries, n, i + 1, i + 1, shift.entries)
        return PolyMatrix(entries)

    if kind == "T":
        shift = horner_shift(sys.P, i - 1)
        lam_eye = [[lam if a == b else Poly.zero(mode) for b in range(n)] for a in range(n)]
        for bk in range(1, m + 1):
            if bk not in (i, i + 1):
                _set_block(entries, n, bk, bk, [[Poly.zero(mode)] * n for _ in range(n)])
        _set_block(entries, n, i, i + 1, shift.scale(lam).entries)
        _set_block(entries, n, i + 1, i, lam_eye)
        _set_block(entries, n, i + 1, i + 1, shift.scale(lam * lam).entries)
        return PolyMatrix(entries)

    raise ValueError("kind must be one of Q, R, T, D")


def _append_state_block(core, sys, corner):
    """diag(core, corner) where corner is I_r, 0_r, or -E as a PolyMatrix."""
    if sys.r == 0:
        return core
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode
    zero = Poly.zero(mode)
    size = n * m + r
    entries = [[zero] * size for _ in range(size)]
    for a in range(n * m):
        for b in range(n * m):
            entries[a][b] = core.entries[a][b]
    for a in range(r):
        for b in range(r):
            entries[n * m + a][n * m + b] = corner[a][b]
    return PolyMatrix(entries)


def aux_matrix(sys, kind, i):
    """Auxiliary system polynomial: Q and R get an I_r state block, T gets
    0_r and D gets -E.  D_1 coincides with the leading Fiedler factor."""
    _require_exact(sys)
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode
    core = _poly_core(sys, kind, i)
    if kind in ("Q", "R"):
        corner = _eye_block(r, mode) if r else ()
    elif kind == "T":
        corner = [[Poly.zero(mode)] * r for _ in range(r)] if r else ()
    else:
        corner = (
            [[Poly.constant(-sys.E[a][b], mode) for b in range(r)] for a in range(r)]
            if r
            else ()
        )
    return AuxMatrix(kind, i, _append_state_block(core, sys, corner))


def _system_block_transpose_poly(matrix, n, r, m):
    """Block transpose of a system polynomial whose B-row and C-column are
    identically zero (all auxiliary matrices are of this shape)."""
    zero = Poly.zero(matrix.mode)
    size = n * m + r
    for a in range(n * m):
        for k in range(r):
            if not matrix.entries[a][n * m + k].is_zero:
                raise ValueError("nonzero C-column; use the pencil-level block transpose")
    for k in range(r):
        for b in range(n * m):
            if not matrix.entries[n * m + k][b].is_zero:
                raise ValueError("nonzero B-row; use the pencil-level block transpose")
    entries = [[zero] * size for _ in range(size)]
    for bi in range(m):
        for bj in range(m):
            for a in range(n):
                for b in range(n):
                    entries[bj * n + a][bi * n + b] = matrix.entries[bi * n + a][bj * n + b]
    for a in range(r):
        for b in range(r):
            entries[n * m + a][n * m + b] = matrix.entries[n * m + a][n * m + b]
    return PolyMatrix(entries)


def aux_block_transpose(aux, sys):
    return AuxMatrix(
        aux.kind,
        aux.index,
        _system_block_transpose_poly(aux.matrix, sys.n, sys.r, sys.m),
        block_transposed=not aux.block_transposed,
    )


def _factor_pm(sys, i):
    return PolyMatrix.from_scalar_grid(make_factor(sys, i).matrix, sys.mode)


def aux_relations_check(sys, i):
    """Exact verification of the coupling identities at index i.

    (a) Q_i^B (lam D_i) R_i = lam D_{i+1} + T_i and the factor version,
    (b) the R/Q swapped identities, (c) T_i absorbs every factor with index
    at most m-i-2 from either side (vacuously true when none exist).
    """
    _require_exact(sys)
    m = sys.m
    if not 1 <= i <= m - 1:
        raise ValueError(f"relation index {i} out of range 1..{m - 1}")
    lam = Poly.lam()
    q = aux_matrix(sys, "Q", i)
    rr = aux_matrix(sys, "R", i)
    t = aux_matrix(sys, "T", i)
    d = aux_matrix(sys, "D", i)
    d_next = aux_matrix(sys, "D", i + 1)
    qb = aux_block_transpose(q, sys).matrix
    rb = aux_block_transpose(rr, sys).matrix
    tb = aux_block_transpose(t, sys).matrix
    lam_d = d.matrix.scale(lam)
    lam_d_next = d_next.matrix.scale(lam)
    failures = []

    if qb * lam_d * rr.matrix != lam_d_next + t.matrix:
        failures.append(f"(a) Q{i}^B (lam D{i}) R{i} != lam D{i + 1} + T{i}")
    lo = _factor_pm(sys, m - (i + 1))
    hi = _factor_pm(sys, m - i)
    if qb * (lo * hi) * rr.matrix != lo + t.matrix:
        failures.append(f"(a) Q{i}^B (M{m - i - 1} M{m - i}) R{i} != M{m - i - 1} + T{i}")
    if rb * lam_d * q.matrix != lam_d_next + tb:
        failures.append(f"(b) R{i}^B (lam D{i}) Q{i} != lam D{i + 1} + T{i}^B")
    if rb * (hi * lo) * q.matrix != lo + tb:
        failures.append(f"(b) R{i}^B (M{m - i} M{m - i - 1}) Q{i} != M{m - i - 1} + T{i}^B")
    for j in range(0, m - i - 1):
        fj = _factor_pm(sys, j)
        if t.matrix * fj != t.matrix or fj * t.matrix != t.matrix:
            failures.append(f"(c) T{i} M{j} = M{j} T{i} = T{i} fails")
        if tb * fj != tb or fj * tb != tb:
            failures.append(f"(c) T{i}^B M{j} = M{j} T{i}^B = T{i}^B fails")
    return AuxRelationsReport(tuple(failures))


def intermediate_pencil(sys, sigma, j):
    """lam * D_j - M_sigma^(j), keeping only factors with index <= m - j in
    their original relative order.  j=1 gives the Fiedler pencil itself and
    j=m gives diag(-I_{(m-1)n}, S(lam))."""
    _require_exact(sys)
    m = sys.m
    if not 1 <= j <= m:
        raise ValueError(f"intermediate index {j} out of range 1..{m}")
    kept = [i for i in sigma.inverse_order if i <= m - j]
    prod = None
    for i in kept:
        f = _factor_pm(sys, i)
        prod = f if prod is None else prod * f
    d = aux_matrix(sys, "D", j)
    return d.matrix.scale(Poly.lam()) - prod


def _target(sys):
    """diag(-I_{(m-1)n}, S(lam)) as one PolyMatrix."""
    n, r, m = sys.n, sys.r, sys.m
    mode = sys.mode
    s = assemble_system_matrix(sys)
    size = n * m + r
    zero = Poly.zero(mode)
    entries = [[zero] * size for _ in range(size)]
    lead = (m - 1) * n
    for a in range(lead):
        entries[a][a] = Poly.constant(-1, mode)
    for a in range(n + r):
        for b in range(n + r):
            entries[lead + a][lead + b] = s.entries[a][b]
    return PolyMatrix(entries)


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Unimodular transforms with U * pencil * V = diag(-I, S(lam)).

    u_factors and v_factors list the constituent auxiliary matrices in
    product order (left to right); each item is (kind, index,
    block_transposed).  The per-step chain records the intermediate system
    pencils that the transformation passes through.
    """

    U: PolyMatrix
    V: PolyMatrix
    u_factors: tuple
    v_factors: tuple
    residual: PolyMatrix
    target: PolyMatrix
    chain_checked: bool

    @property
    def residual_zero(self):
        return self.residual.is_zero_matrix()


def _first_nonzero(matrix):
    for i, row in enumerate(matrix.entries):
        for j, e in enumerate(row):
            if not e.is_zero:
                return i, j, e
    return None


def build_certificate(sys, sigma, pencil=None):
    """Construct and verify the equivalence certificate for one bijection.

    The consecution/inversion pattern selects Q- or R-type factors for each
    of the m-1 steps; each intermediate product is compared against the
    closed-form intermediate pencil, and the final product against
    diag(-I_{(m-1)n}, S(lam)).  Any mismatch raises CertificateError with
    the first differing entry; a forged pencil is never silently accepted.
    """
    _require_exact(sys)
    m = sys.m
    if m < 2:
        raise ValueError("certificates need degree m >= 2")
    if sigma.m != m:
        raise ValueError("bijection length does not match the system degree")
    if pencil is None:
        pencil = pencil_direct(sys, sigma)
    x = pencil.as_poly_matrix()

    left_steps = []
    right_steps = []
    chain_ok = True
    for i in range(1, m):
        consecution = sigma.has_consecution_at(m - i - 1)
        q = aux_matrix(sys, "Q", i)
        rr = aux_matrix(sys, "R", i)
        if consecution:
            left = aux_block_transpose(q, sys)
            right = rr
        else:
            left = aux_block_transpose(rr, sys)
            right = q
        x = left.matrix * x * right.matrix
        left_steps.append(left)
        right_steps.append(right)
        expected = intermediate_pencil(sys, sigma, i + 1)
        diff = x - expected
        if not diff.is_zero_matrix():
            chain_ok = False
            pos = _first_nonzero(diff)
            raise CertificateError(
                f"step {i} product deviates from the intermediate pencil "
                f"at entry {pos[:2]}: {pos[2]!r}",
                position=pos[:2],
            )

    u = None
    for aux in reversed(left_steps):
        u = aux.matrix if u is None else u * aux.matrix
    v = None
    for aux in right_steps:
        v = aux.matrix if v is None else v * aux.matrix

    u_factors = tuple(
        (aux.kind, aux.index, aux.block_transposed) for aux in reversed(left_steps)
    )
    v_factors = tuple(
        (aux.kind, aux.index, aux.block_transposed) for aux in right_steps
    )

    target = _target(sys)
    residual = u * pencil.as_poly_matrix() * v - target
    cert = EquivalenceCertificate(
        U=u,
        V=v,
        u_factors=u_factors,
        v_factors=v_factors,
        residual=residual,
        target=target,
        chain_checked=chain_ok,
    )
    if not cert.residual_zero:
        pos = _first_nonzero(residual)
        raise CertificateError(
            f"certificate residual is nonzero at entry {pos[:2]}: {pos[2]!r}",
            position=pos[:2],
        )
    return cert


def _is_identity_on_state_block(matrix, n, r, m):
    for a in range(r):
        for b in range(r):
            e = matrix.entries[n * m + a][n * m + b]
            want_one = a == b
            if want_one and e != Poly.one(matrix.mode):
                return False
            if not want_one and not e.is_zero:
                return False
    for a in range(n * m):
        for k in range(r):
            if not matrix.entries[a][n * m + k].is_zero:
                return False
            if not matrix.entries[n * m + k][a].is_zero:
                return False
    return True


def verify_rosenbrock_linearization(sys, sigma, pencil=None):
    """True iff the certificate builds with zero residual and its U, V are
    unimodular with the system-equivalence shape diag(*, I_r)."""
    try:
        cert = build_certificate(sys, sigma, pencil=pencil)
    except CertificateError:
        return False
    n, r, m = sys.n, sys.r, sys.m
    if not _is_identity_on_state_block(cert.U, n, r, m):
        return False
    if not _is_identity_on_state_block(cert.V, n, r, m):
        return False
    det_u = poly_matrix_det(cert.U)
    det_v = poly_matrix_det(cert.V)
    return (
        det_u.degree == 0
        and not det_u.is_zero
        and det_v.degree == 0
        and not det_v.is_zero
    )
