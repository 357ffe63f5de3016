"""Fiedler factors, bijections/CISS, the three pencil constructions,
companion forms, block transposition, and pentadiagonal structure."""

import random
from fractions import Fraction as F
from itertools import permutations

import pytest

from _helpers import LAM, ONE, desk1_system, grid_int, rand_grid, rand_system
from rosepen import _linalg as L
from rosepen.fiedler import (
    Bijection,
    CISS,
    ciss,
    commutation_check,
    factor_inverse,
    first_companion,
    is_block_pentadiagonal,
    make_factor,
    pencil_algorithm1,
    pencil_block_formula,
    pencil_direct,
    second_companion,
    system_block_transpose,
)
from rosepen.polymat import Poly, PolyMatrix, block_transpose, poly_matrix_det
from rosepen.system import RosenbrockSystem, assemble_system_matrix

DESK1 = desk1_system()


def block(grid, bi, bj, sizes):
    offs = [0]
    for s in sizes:
        offs.append(offs[-1] + s)
    return tuple(
        tuple(grid[a][b] for b in range(offs[bj - 1], offs[bj]))
        for a in range(offs[bi - 1], offs[bi])
    )


# --- bijections and CISS -----------------------------------------------------

def test_bijection_validation():
    with pytest.raises(ValueError):
        Bijection((0, 0))
    with pytest.raises(ValueError):
        Bijection((1, 2))
    assert Bijection.from_string("1,0,2,3").inverse_order == (1, 0, 2, 3)


def test_ciss_companion_orders():
    assert ciss(Bijection.first_companion_order(6)).pairs == (0, 5)
    assert ciss(Bijection.second_companion_order(6)).pairs == (5, 0)


def test_ciss_mixed_example():
    # inversion at 0, consecutions at 1 and 2
    assert ciss(Bijection((1, 0, 2, 3))).pairs == (0, 1, 2, 0)


def test_ciss_totals_sum_to_m_minus_one():
    rng = random.Random(5)
    for m in range(1, 7):
        order = list(range(m))
        rng.shuffle(order)
        s = ciss(Bijection(tuple(order)))
        assert s.consecution_total + s.inversion_total == m - 1
        interior = s.pairs[1:-1]
        assert all(x > 0 for x in interior)


# --- factors -------------------------------------------------------------------

def test_desk1_factors():
    assert grid_int(make_factor(DESK1, 0).matrix) == [[1, 0, 0], [0, 0, -1], [0, -1, -1]]
    assert grid_int(make_factor(DESK1, 1).matrix) == [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert grid_int(make_factor(DESK1, 2).matrix) == [[1, 0, 0], [0, 1, 0], [0, 0, -1]]


def test_factor_index_range():
    with pytest.raises(ValueError):
        make_factor(DESK1, 3)


def test_factor_inverse_desk1_self_inverse():
    inv = factor_inverse(make_factor(DESK1, 1))
    assert grid_int(inv) == [[0, 1, 0], [1, 0, 0], [0, 0, 1]]


def test_factor_inverse_defining_property():
    rng = random.Random(53)
    sys = rand_system(rng, 2, 2, 3)
    for i in (1, 2):
        f = make_factor(sys, i)
        inv = factor_inverse(f)
        assert L.eq(L.mul(f.matrix, inv), L.eye(f.size))
        assert L.eq(L.mul(inv, f.matrix), L.eye(f.size))


def test_factor_inverse_rejects_boundary_indices():
    with pytest.raises(ValueError):
        factor_inverse(make_factor(DESK1, 0))
    with pytest.raises(ValueError):
        factor_inverse(make_factor(DESK1, 2))


# --- pencil constructions -------------------------------------------------------

def test_pencil_direct_desk1():
    p = pencil_direct(DESK1, Bijection((1, 0)))
    assert grid_int(p.lead) == [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    assert grid_int(L.neg(p.const_term)) == [[0, 0, -1], [1, 0, 0], [0, -1, -1]]
    pm = p.as_poly_matrix()
    assert pm == PolyMatrix(
        [
            [LAM, Poly.zero(), ONE],
            [Poly([-1]), LAM, Poly.zero()],
            [Poly.zero(), ONE, Poly([1, -1])],
        ]
    )
    assert poly_matrix_det(pm) == Poly([-1, 0, 1, -1])
    assert (p.b_row_block, p.c_col_block) == (2, 1)


def test_pencil_direct_paper_m4_display():
    rng = random.Random(59)
    sys = rand_system(rng, 2, 2, 4)
    p = pencil_direct(sys, Bijection((1, 0, 2, 3)))
    sizes = [2] * 4 + [2]
    ms = L.neg(p.const_term)
    ai = [sys.coefficient(k) for k in range(5)]
    eye = L.eye(2)
    expect = {
        (1, 1): L.neg(ai[3]), (1, 2): eye,
        (2, 1): L.neg(ai[2]), (2, 3): eye,
        (3, 1): L.neg(ai[1]), (3, 4): L.neg(ai[0]), (3, 5): L.neg(sys.C),
        (4, 1): eye,
        (5, 4): L.neg(sys.B), (5, 5): L.neg(sys.A),
    }
    for bi in range(1, 6):
        for bj in range(1, 6):
            got = block(ms, bi, bj, sizes)
            if (bi, bj) in expect:
                assert L.eq(got, expect[(bi, bj)]), (bi, bj)
            else:
                assert all(x == 0 for row in got for x in row), (bi, bj)


def test_equivalent_bijections_same_pencil():
    rng = random.Random(61)
    sys = rand_system(rng, 2, 1, 4)
    tau = pencil_direct(sys, Bijection((2, 0, 1, 3)))
    delta = pencil_direct(sys, Bijection((0, 2, 3, 1)))
    assert tau == delta


def test_algorithm1_seed_matrices_desk1():
    consecution = pencil_algorithm1(DESK1, Bijection((0, 1)))
    assert grid_int(L.neg(consecution.const_term)) == [[0, 1, 0], [0, 0, -1], [-1, 0, -1]]
    inversion = pencil_algorithm1(DESK1, Bijection((1, 0)))
    assert grid_int(L.neg(inversion.const_term)) == [[0, 0, -1], [1, 0, 0], [0, -1, -1]]


def test_algorithm1_needs_degree_two():
    sys = RosenbrockSystem(PolyMatrix([[LAM]]), [[1]], [[1]], [[1]], [[1]])
    with pytest.raises(ValueError):
        pencil_algorithm1(sys, Bijection((0,)))


def test_three_constructions_agree_m4_exhaustive():
    rng = random.Random(67)
    sys = rand_system(rng, 2, 2, 4)
    for perm in permutations(range(4)):
        sigma = Bijection(perm)
        a = pencil_direct(sys, sigma)
        b = pencil_algorithm1(sys, sigma)
        c = pencil_block_formula(sys, sigma)
        assert a == b == c, perm


def test_block_formula_metadata_matches_ciss():
    rng = random.Random(71)
    for m in (2, 3, 4):
        sys = rand_system(rng, 1, 2, m)
        for perm in permutations(range(m)):
            sigma = Bijection(perm)
            s = ciss(sigma)
            p = pencil_direct(sys, sigma)
            if s.c1 > 0:
                assert (p.b_row_block, p.c_col_block) == (m - s.c1, m)
            else:
                assert (p.b_row_block, p.c_col_block) == (m, m - s.i1)
            # the borders really live in the advertised blocks
            sizes = [sys.n] * m + [sys.r]
            for bi in range(1, m + 1):
                cblock = block(p.const_term, bi, m + 1, sizes)
                bblock = block(p.const_term, m + 1, bi, sizes)
                assert L.eq(cblock, sys.C) == (bi == p.c_col_block)
                assert L.eq(bblock, sys.B) == (bi == p.b_row_block)


# --- companion forms -------------------------------------------------------------

def test_first_companion_desk1():
    p = first_companion(DESK1)
    assert p.as_poly_matrix() == PolyMatrix(
        [
            [LAM, Poly.zero(), ONE],
            [Poly([-1]), LAM, Poly.zero()],
            [Poly.zero(), ONE, Poly([1, -1])],
        ]
    )


def test_first_companion_r0_classical():
    sys = RosenbrockSystem(PolyMatrix([[LAM * LAM + ONE]]))
    p = first_companion(sys)
    assert p.as_poly_matrix() == PolyMatrix([[LAM, ONE], [Poly([-1]), LAM]])
    assert poly_matrix_det(p.as_poly_matrix()) == Poly([1, 0, 1])


def test_m1_pencil_is_system_matrix():
    sys = RosenbrockSystem(
        PolyMatrix.identity(2), [[2]], [[1]], [[0, 1]], [[1], [0]]
    )
    p = first_companion(sys)
    assert p.as_poly_matrix() == assemble_system_matrix(sys)
    assert p == second_companion(sys)


def test_second_companion_desk1():
    p = second_companion(DESK1)
    assert grid_int(L.neg(p.const_term)) == [[0, 1, 0], [0, 0, -1], [-1, 0, -1]]
    pm = p.as_poly_matrix()
    assert pm == PolyMatrix(
        [
            [LAM, Poly([-1]), Poly.zero()],
            [Poly.zero(), LAM, ONE],
            [ONE, Poly.zero(), Poly([1, -1])],
        ]
    )
    assert poly_matrix_det(pm) == Poly([-1, 0, 1, -1])


def test_second_companion_is_block_transpose_of_first():
    rng = random.Random(73)
    for m in (2, 3, 4, 5):
        sys = rand_system(rng, 2, 1, m)
        assert system_block_transpose(first_companion(sys)) == second_companion(sys)


# --- system block transpose ------------------------------------------------------

def test_system_block_transpose_involution():
    rng = random.Random(79)
    sys = rand_system(rng, 2, 2, 3)
    for perm in permutations(range(3)):
        p = pencil_direct(sys, Bijection(perm))
        assert system_block_transpose(system_block_transpose(p)) == p


def test_system_block_transpose_r0_matches_polymat():
    rng = random.Random(83)
    sys = rand_system(rng, 2, 0, 3)
    p = first_companion(sys)
    bt = system_block_transpose(p)
    assert bt.as_poly_matrix() == block_transpose(p.as_poly_matrix(), 3, 3, 2)


def test_system_block_transpose_rejects_scattered_border():
    p = first_companion(desk1_system())
    # misreport the C-column location: validation must notice the mismatch
    from rosepen.fiedler import SystemPencil

    forged = SystemPencil(
        p.lead, p.const_term, p.n, p.r, p.m, p.b_row_block, c_col_block=2
    )
    with pytest.raises(ValueError):
        system_block_transpose(forged)


# --- pentadiagonal ---------------------------------------------------------------

def pentadiagonal_bijections_m6():
    odd, even = (1, 3, 5), (2, 4)
    return {
        "case1": Bijection(odd + (0,) + even),
        "case2": Bijection((0,) + even + odd),
        "case3": Bijection((0,) + odd + even),
        "case4": Bijection(even + odd + (0,)),
    }


def test_pentadiagonal_m6_cases():
    rng = random.Random(89)
    sys = rand_system(rng, 2, 2, 6)
    cases = pentadiagonal_bijections_m6()
    assert is_block_pentadiagonal(pencil_direct(sys, cases["case1"]))
    assert is_block_pentadiagonal(pencil_direct(sys, cases["case2"]))
    assert not is_block_pentadiagonal(pencil_direct(sys, cases["case3"]))
    assert not is_block_pentadiagonal(pencil_direct(sys, cases["case4"]))


def test_first_companion_not_pentadiagonal_for_m4():
    rng = random.Random(97)
    sys = rand_system(rng, 1, 1, 4)
    assert not is_block_pentadiagonal(first_companion(sys))


def test_pentadiagonal_predicate_matches_structure_theorem():
    rng = random.Random(101)
    for m in (2, 3, 4, 5):
        sys = rand_system(rng, 2, 1, m)
        sys0 = RosenbrockSystem(sys.P)
        for perm in permutations(range(m)):
            sigma = Bijection(perm)
            s = ciss(sigma)
            predicted = (
                s.c1 <= 1
                and s.i1 <= 1
                and is_block_pentadiagonal(pencil_direct(sys0, sigma))
            )
            assert is_block_pentadiagonal(pencil_direct(sys, sigma)) == predicted


# --- commutation ----------------------------------------------------------------

def test_commutation_relations_m4():
    rng = random.Random(103)
    sys = rand_system(rng, 2, 2, 4)
    assert commutation_check(sys, 0, 2)
    assert not commutation_check(sys, 0, 4)
    assert not commutation_check(sys, 1, 2)  # adjacent, generically false


def test_inverse_factor_commutation():
    rng = random.Random(107)
    sys = rand_system(rng, 2, 2, 5)
    for i in range(1, 5):
        for j in range(1, 5):
            if abs(i - j) > 1:
                fi = factor_inverse(make_factor(sys, i))
                fj = factor_inverse(make_factor(sys, j))
                assert L.eq(L.mul(fi, fj), L.mul(fj, fi))


# --- deflation and counting ------------------------------------------------------

def test_lead_singular_iff_leading_coefficient_or_e_singular():
    rng = random.Random(109)
    good = rand_system(rng, 2, 2, 3, nonsingular_lead=True)
    assert L.rank(first_companion(good).lead) == good.n * good.m + good.r

    singular_am = RosenbrockSystem(
        PolyMatrix.from_coefficient_grids(
            [rand_grid(rng, 2, 2), rand_grid(rng, 2, 2), [[1, 0], [0, 0]]]
        ),
        rand_grid(rng, 2, 2),
        [[1, 0], [0, 1]],
        rand_grid(rng, 2, 2),
        rand_grid(rng, 2, 2),
    )
    assert L.rank(first_companion(singular_am).lead) < 2 * 2 + 2


def test_distinct_pencil_count_matches_classical():
    rng = random.Random(113)
    for m in (2, 3, 4, 5):
        sys = rand_system(rng, 1, 1, m)
        sys0 = RosenbrockSystem(sys.P)
        with_state = {
            pencil_direct(sys, Bijection(p)).const_term
            for p in permutations(range(m))
        }
        classical = {
            pencil_direct(sys0, Bijection(p)).const_term
            for p in permutations(range(m))
        }
        assert len(with_state) == len(classical)
