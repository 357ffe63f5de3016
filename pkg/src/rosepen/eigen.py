"""Generalized eigenvalue solving for system pencils, zero classification,
and the end-to-end pipeline for rational eigenvalue problems.

The exact backend works from the exact determinant of the pencil: rational
roots are isolated exactly, the deflated remainder goes to companion-matrix
eigenvalues.  The numeric backend runs a dense QZ solver on (-const, lead).
Every computed zero of a transfer function is classified as an eigenvalue
(a zero that is not a pole) or an eigenpole (a zero coinciding with a
pole): the pencil supplies the invariant zeros, the state pencil supplies
the poles, and the intersection decides.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import _linalg, _roots
from ._linalg import EXACT
from ._roots import MATCH_TOL
from .fiedler import Bijection, pencil_algorithm1, pencil_direct
from .polymat import (
    Poly,
    poly_gcd,
    poly_matrix_det,
    smith_mcmillan,
    square_free_decomposition,
    zero_pole_polys,
)
from .system import (
    SingularStateError,
    assemble_system_matrix,
    is_minimal,
    realize,
    state_pencil,
    transfer_function,
)

__all__ = [
    "GepResult",
    "ZeroEntry",
    "PoleEntry",
    "ZeroReport",
    "pencil_determinant",
    "solve_gep",
    "classify_zeros",
    "solve_rep",
    "eig_eip_split",
]

EIGENVALUE = "eigenvalue"
EIGENPOLE = "eigenpole"


@dataclass(frozen=True)
class GepResult:
    """Finite eigenvalues of a pencil as (value, multiplicity) pairs.

    infinite_flag is set iff the leading coefficient matrix is singular;
    a pencil with identically zero determinant is reported through the
    singular flag instead of raising.
    """

    eigenvalues: tuple
    infinite_flag: bool
    singular: bool
    backend: str
    det_poly: object = None

    @property
    def count_with_multiplicity(self):
        return sum(m for _, m in self.eigenvalues)


def _interpolate(points):
    """Newton interpolation through exact (x, y) samples."""
    xs = [Fraction(x) for x, _ in points]
    coeffs = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - j])
    poly = Poly.zero()
    basis = Poly.one()
    for j in range(n):
        poly = poly + basis * coeffs[j]
        basis = basis * Poly((-xs[j], 1))
    return poly


def pencil_determinant(pencil):
    """Exact determinant of lam*lead + const by sampling and interpolation.

    The determinant has degree at most the pencil size N, so N+1 exact
    constant determinants pin it down; this is far cheaper than eliminating
    over Q[lam] and is cross-checked against the Bareiss route in the test
    suite.
    """
    if pencil.mode != EXACT:
        raise ValueError("exact determinant requires an exact pencil")
    n = pencil.size
    points = []
    for x in range(n + 1):
        value = _linalg.det(pencil.eval(Fraction(x)))
        points.append((Fraction(x), Fraction(value)))
    return _interpolate(points)


def solve_gep(pencil, backend="exact", tol=MATCH_TOL):
    """Finite eigenvalues of a system pencil.

    backend="exact": roots of the exact determinant polynomial (rational
    roots isolated exactly, the rest from the companion matrix of the
    deflated factor).  backend="numeric": dense QZ on (-const, lead).
    """
    if backend == "exact":
        det = pencil_determinant(pencil)
        if det.is_zero:
            return GepResult((), _lead_singular(pencil), True, backend, det)
        eigs = tuple(_roots.all_roots(det, tol))
        return GepResult(eigs, _lead_singular(pencil), False, backend, det)
    if backend != "numeric":
        raise ValueError("backend must be 'exact' or 'numeric'")

    import numpy as np
    import scipy.linalg

    a = -_linalg.to_float_array(pencil.const_term)
    b = _linalg.to_float_array(pencil.lead)
    alpha, beta = scipy.linalg.eig(a, b, right=False, homogeneous_eigvals=True)
    finite = []
    degenerate = 0
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    for al, be in zip(alpha, beta):
        if abs(be) <= 1e-12 * scale and abs(al) <= 1e-12 * scale:
            degenerate += 1
        elif abs(be) > 1e-12 * max(1.0, abs(al)):
            finite.append(complex(al / be))
    infinite = _linalg.rank_float(pencil.lead) < pencil.size
    if degenerate > 0:
        # singular pencil: whatever else the QZ sweep produced is noise
        return GepResult((), infinite, True, backend)
    return GepResult(tuple(_roots.cluster(finite, tol)), infinite, False, backend)


def _lead_singular(pencil):
    if pencil.mode == EXACT:
        return _linalg.rank(pencil.lead) < pencil.size
    return _linalg.rank_float(pencil.lead) < pencil.size


def eig_eip_split(zero_poly, pole_poly, tol=MATCH_TOL):
    """Partition the roots of the zero polynomial by whether they are also
    roots of the pole polynomial: (eigenvalues, eigenpoles).

    Exact mode decides membership through gcd(zero_poly, pole_poly); float
    mode matches numeric root sets with the scale-relative tolerance.
    """
    zero_poly = zero_poly.monic()
    pole_poly = pole_poly.monic()
    if zero_poly.degree < 1:
        return [], []
    if zero_poly.mode == EXACT and pole_poly.mode == EXACT:
        common = poly_gcd(zero_poly, pole_poly)
        eip_roots = (
            [v for v, _ in _roots.all_roots(common, tol)] if common.degree > 0 else []
        )
        eig = []
        for v, _ in _roots.all_roots(zero_poly, tol):
            if isinstance(v, Fraction):
                shared = common(v) == 0
            else:
                shared = any(_roots.close(v, w, tol) for w in eip_roots)
            if not shared:
                eig.append(v)
        return eig, eip_roots
    zeros = [v for v, _ in _roots.all_roots(zero_poly, tol)]
    poles = (
        [v for v, _ in _roots.all_roots(pole_poly, tol)]
        if pole_poly.degree > 0
        else []
    )
    eig = [v for v in zeros if not any(_roots.close(v, p, tol) for p in poles)]
    eip = [v for v in zeros if any(_roots.close(v, p, tol) for p in poles)]
    return eig, eip


@dataclass(frozen=True)
class ZeroEntry:
    value: object
    classification: str
    ind_phi: tuple = None
    ind_psi: tuple = None


@dataclass(frozen=True)
class PoleEntry:
    value: object
    ind_psi: tuple = None


@dataclass(frozen=True)
class ZeroReport:
    """Classified zeros of a system together with the run provenance."""

    zeros: tuple
    poles: tuple
    decoupling: object
    minimal: bool
    backend: str
    sigma: tuple
    pencil_size: int
    det_constant: object = None
    singular: bool = False
    note: str = ""


def _index_for_value(polys, value, tol=MATCH_TOL):
    """Multiplicity of `value` as a root of each polynomial in order.

    Rational points are decided by exact division; other points are located
    inside the square-free decomposition, whose factors are pairwise
    coprime, so at most one multiplicity class can host the root.
    """
    out = []
    for p in polys:
        if p.degree < 1:
            out.append(0)
            continue
        if isinstance(value, Fraction):
            from .polymat import _root_multiplicity

            out.append(_root_multiplicity(p, value))
            continue
        best_k, best_val = 0, None
        for factor, k in square_free_decomposition(p):
            mag = abs(factor(complex(value)))
            if best_val is None or mag < best_val:
                best_val, best_k = mag, k
        scale = max(1.0, abs(complex(value))) ** p.degree
        out.append(best_k if best_val is not None and best_val <= 1e-6 * scale else 0)
    return tuple(out)


def _is_pole_value(value, pole_poly, pole_roots, tol):
    if isinstance(value, Fraction) and pole_poly is not None:
        return pole_poly(value) == 0
    return any(_roots.close(value, p, tol) for p in pole_roots)


def classify_zeros(sys, sigma=None, backend="exact", pencil=None, tol=MATCH_TOL):
    """Full zero report for a system: invariant zeros from a Fiedler pencil
    (first companion by default), poles from the state pencil, eigenpoles
    as the intersection, plus multiplicity indices from the Smith-McMillan
    form in exact mode.

    A non-minimal system still gets a report, flagged minimal=False: its
    pencil eigenvalues are then invariant zeros of the realization, not
    necessarily zeros of the transfer function.
    """
    if not sys.e_is_nonsingular():
        raise SingularStateError("E is singular")
    if sigma is None:
        sigma = Bijection.first_companion_order(sys.m)
    if pencil is None:
        pencil = pencil_direct(sys, sigma)
    minrep = is_minimal(sys)
    note = (
        "zeros are transmission zeros (= invariant zeros; realization is minimal)"
        if minrep.minimal
        else "realization is not minimal: zeros listed are invariant zeros of "
        "the realization and may differ from the zeros of G"
    )

    gep = solve_gep(pencil, backend=backend, tol=tol)
    if gep.singular:
        return ZeroReport(
            zeros=(),
            poles=(),
            decoupling=minrep.decoupling,
            minimal=minrep.minimal,
            backend=backend,
            sigma=sigma.inverse_order,
            pencil_size=pencil.size,
            singular=True,
            note="singular pencil: spectrum undefined at pencil level",
        )

    if backend == "exact":
        if sys.r > 0:
            state_det = poly_matrix_det(state_pencil(sys)).monic()
        else:
            state_det = Poly.one()
        pole_root_list = (
            _roots.all_roots(state_det, tol) if state_det.degree > 0 else []
        )
        pole_roots = [v for v, _ in pole_root_list]
        sm = smith_mcmillan(transfer_function(sys))
        phi_g, psi_g = zero_pole_polys(sm)

        det_s = poly_matrix_det(assemble_system_matrix(sys))
        q, rem = divmod(gep.det_poly, det_s)
        if not rem.is_zero or q.degree != 0:
            raise CertificateMismatch(
                "pencil determinant is not a constant multiple of det S"
            )
        det_constant = q.coefficient(0)

        zeros = []
        for value, _mult in gep.eigenvalues:
            is_pole = _is_pole_value(value, state_det, pole_roots, tol)
            ind_phi = _index_for_value(sm.numerators, value, tol)
            ind_psi = (
                _index_for_value(tuple(reversed(sm.denominators)), value, tol)
                if is_pole
                else None
            )
            zeros.append(
                ZeroEntry(
                    value=value,
                    classification=EIGENPOLE if is_pole else EIGENVALUE,
                    ind_phi=ind_phi,
                    ind_psi=ind_psi,
                )
            )
        poles = []
        if psi_g.degree > 0:
            for value, _mult in _roots.all_roots(psi_g, tol):
                poles.append(
                    PoleEntry(
                        value=value,
                        ind_psi=_index_for_value(
                            tuple(reversed(sm.denominators)), value, tol
                        ),
                    )
                )
        return ZeroReport(
            zeros=tuple(zeros),
            poles=tuple(poles),
            decoupling=minrep.decoupling,
            minimal=minrep.minimal,
            backend=backend,
            sigma=sigma.inverse_order,
            pencil_size=pencil.size,
            det_constant=det_constant,
            note=note,
        )

    # numeric backend: poles from a dense generalized eigensolver on (A, E)
    import numpy as np
    import scipy.linalg

    if sys.r > 0:
        a = _linalg.to_float_array(sys.A)
        e = _linalg.to_float_array(sys.E)
        raw = scipy.linalg.eig(a, e, right=False)
        pole_roots = [complex(v) for v in raw if np.isfinite(v)]
    else:
        pole_roots = []
    zeros = []
    for value, _mult in gep.eigenvalues:
        is_pole = any(_roots.close(value, p, tol) for p in pole_roots)
        zeros.append(
            ZeroEntry(
                value=value,
                classification=EIGENPOLE if is_pole else EIGENVALUE,
            )
        )
    poles = tuple(PoleEntry(value=v) for v, _ in _roots.cluster(pole_roots, tol))
    return ZeroReport(
        zeros=tuple(zeros),
        poles=poles,
        decoupling=minrep.decoupling,
        minimal=minrep.minimal,
        backend=backend,
        sigma=sigma.inverse_order,
        pencil_size=pencil.size,
        note=note,
    )


class CertificateMismatch(RuntimeError):
    """Internal consistency failure between a pencil and its system."""


def solve_rep(spec, sigma=None, backend="exact", tol=MATCH_TOL):
    """Direct method for a rational eigenproblem: realize the spec in
    state-space form, build a Fiedler pencil by the splicing construction,
    solve the GEP, classify.

    A non-minimal realization is not fatal: the pipeline proceeds with a
    warning and the report downgrades its claims accordingly.
    """
    sys = realize(spec)
    if sys.minimal is False:
        warnings.warn(
            "realization is not minimal; reported zeros are invariant zeros"
        )
    if sigma is None:
        sigma = Bijection.first_companion_order(sys.m)
    if sys.m >= 2:
        pencil = pencil_algorithm1(sys, sigma)
    else:
        pencil = pencil_direct(sys, sigma)
    return classify_zeros(sys, sigma=sigma, backend=backend, pencil=pencil, tol=tol)
