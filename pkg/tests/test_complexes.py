"""Tests for the free complex, its exactness, and the Ext computation."""

import pytest

from bcsurf import complexes, modes
from bcsurf.complexes import (
    COMPONENTS,
    MATRICES,
    composite_residuals,
    euler_identity,
    ext_dimensions,
    exactness_table,
    matrix,
    quotient_dims,
    tau_one_dual_rank,
    tau_one_quotient_dims,
    verify_composites,
)
from bcsurf.errors import CheckFailed
from bcsurf.skew import dim_formula

GEN = modes.generic()
TAU = modes.tau_one()
SPZ = modes.specialized(2, 3)


# ---------------------------------------------------------------------------
# shapes and composites
# ---------------------------------------------------------------------------


def test_matrix_shapes_match_components():
    assert COMPONENTS == (1, 4, 6, 4, 1)
    for s in (1, 2, 3, 4):
        mat = matrix(s)
        assert len(mat) == COMPONENTS[s - 1]
        assert all(len(row) == COMPONENTS[s] for row in mat)


def test_matrix_entries_are_known_letters():
    letters = {f"r{i}" for i in range(1, 5)} | {f"z{i}" for i in range(1, 11)}
    for s in (1, 2, 3, 4):
        for row in matrix(s):
            for entry in row:
                assert entry is None or entry in letters


def test_first_map_is_the_generator_row():
    assert matrix(1) == (("r1", "r2", "r3", "r4"),)


def test_last_map_is_the_distinguished_column():
    assert matrix(4) == ((None,), (None,), ("z9",), ("z10",))


def test_composites_vanish_generic():
    assert verify_composites(GEN) == {"QP": 6, "PN": 16, "NM": 6}


def test_composites_vanish_tau_one():
    assert verify_composites(TAU) == {"QP": 6, "PN": 16, "NM": 6}


def test_composites_vanish_specialized():
    assert verify_composites(SPZ) == {"QP": 6, "PN": 16, "NM": 6}


def test_composite_residuals_all_zero_forms():
    for s in (2, 3, 4):
        for form in composite_residuals(s, GEN).values():
            assert form is None or form.is_zero()


def test_broken_matrix_is_detected(monkeypatch):
    # swapping the two columns of the last matrix breaks both NM entries
    monkeypatch.setitem(complexes.MATRICES, 4, ((None,), (None,), ("z10",), ("z9",)))
    with pytest.raises(CheckFailed):
        verify_composites(TAU)


# ---------------------------------------------------------------------------
# Euler identity
# ---------------------------------------------------------------------------


def test_euler_identity_window():
    out = euler_identity(8)
    assert out[0] == 1
    assert all(out[n] == 0 for n in range(1, 9))


def test_euler_identity_is_the_alternating_binomial_sum():
    # dim R_n = C(n+3, 3); the alternating sum with weights 1,4,6,4,1
    # telescopes like a fourth difference
    for n in range(1, 9):
        total = sum(
            (-1) ** s * c * dim_formula(n - s)
            for s, c in enumerate(COMPONENTS)
            if n - s >= 0
        )
        assert total == 0


# ---------------------------------------------------------------------------
# exactness
# ---------------------------------------------------------------------------

# (rank_in, rank_out) per spot s = 0..4, frozen from the certified runs
EXACTNESS_RANKS = {
    0: [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
    1: [(4, 0), (0, 4), (0, 0), (0, 0), (0, 0)],
    2: [(10, 0), (6, 10), (0, 6), (0, 0), (0, 0)],
    3: [(20, 0), (20, 20), (4, 20), (0, 4), (0, 0)],
    4: [(35, 0), (45, 35), (15, 45), (1, 15), (0, 1)],
    5: [(56, 0), (84, 56), (36, 84), (4, 36), (0, 4)],
}


def test_exactness_tau_one():
    table = exactness_table(TAU, max_n=5)
    for n, spots in EXACTNESS_RANKS.items():
        for s, (rank_in, rank_out) in enumerate(spots):
            cell = table[(n, s)]
            assert cell["rank_in"] == rank_in
            assert cell["rank_out"] == rank_out
            assert cell["homology"] == 0
            if s >= 1 and cell["dim"]:
                assert rank_in + rank_out == cell["dim"]


def test_exactness_generic_matches_tau_one():
    table = exactness_table(GEN, max_n=4)
    for n in range(5):
        for s, (rank_in, rank_out) in enumerate(EXACTNESS_RANKS[n]):
            cell = table[(n, s)]
            assert cell["rank_in"] == rank_in
            assert cell["rank_out"] == rank_out
            assert cell["homology"] == 0


def test_exactness_degree_two_kernel_is_the_six_relations():
    # at spot 1 in degree 2 the incoming rank equals the number of defining
    # relations: the kernel of the generator row is spanned by them
    table = exactness_table(TAU, max_n=2)
    assert table[(2, 1)]["rank_in"] == 6
    assert table[(2, 1)]["rank_out"] == dim_formula(2)
    assert table[(2, 1)]["dim"] == 4 * dim_formula(1)


def test_exactness_augmentation_spot():
    table = exactness_table(TAU, max_n=3)
    for n in range(1, 4):
        assert table[(n, 0)]["rank_in"] == dim_formula(n)


def test_exactness_last_spot_injective():
    table = exactness_table(TAU, max_n=5)
    assert table[(4, 4)]["rank_out"] == dim_formula(0)
    assert table[(5, 4)]["rank_out"] == dim_formula(1)


# ---------------------------------------------------------------------------
# the quotient by the left ideal (z9, z10)
# ---------------------------------------------------------------------------

QUOTIENT_DIMS = {0: 1, 1: 2, 2: 4, 3: 6, 4: 8, 5: 10, 6: 12, 7: 14, 8: 16}


def test_quotient_dims_tau_one_meet():
    out = quotient_dims(TAU, max_n=8)
    for n, expected in QUOTIENT_DIMS.items():
        assert out[n]["exact"]
        assert out[n]["dim"] == expected


def test_quotient_dims_tau_one_monomial_oracle():
    # independent exact count: the ideal generators are single monomials at
    # tau-one, so the ideal's graded piece is a set of monomials
    assert tau_one_quotient_dims(8) == QUOTIENT_DIMS


def test_quotient_dims_generic_meet():
    out = quotient_dims(GEN, max_n=6)
    for n in range(7):
        assert out[n]["exact"]
        assert out[n]["dim"] == QUOTIENT_DIMS[n]


def test_quotient_dims_specialized():
    out = quotient_dims(SPZ, max_n=4)
    for n in range(5):
        assert out[n]["exact"]
        assert out[n]["dim"] == QUOTIENT_DIMS[n]


def test_quotient_growth_bound():
    # the acceptance window: dim >= n + 1 with equality checks at 0 and 1
    out = quotient_dims(TAU, max_n=4)
    for n in range(5):
        assert out[n]["lower"] >= n + 1
    assert out[0]["dim"] == 1
    assert out[1]["dim"] == 2


# ---------------------------------------------------------------------------
# Ext
# ---------------------------------------------------------------------------

EXT_DIMS = {
    n: {"ext0": 0, "ext1": 0, "ext2": 2 * n + 4, "ext3": 4 * n + 12, "ext4": 2 * n + 8}
    for n in range(5)
}


def test_ext_dimensions_tau_one():
    out = ext_dimensions(TAU, max_n=4)
    for n in range(5):
        for s in range(5):
            cell = out[n][f"ext{s}"]
            assert cell["exact"]
            assert cell["dim"] == EXT_DIMS[n][f"ext{s}"]


def test_ext_dimensions_generic_window():
    out = ext_dimensions(GEN, max_n=2)
    for n in range(3):
        for s in range(5):
            cell = out[n][f"ext{s}"]
            assert cell["exact"]
            assert cell["dim"] == EXT_DIMS[n][f"ext{s}"]


def test_ext_top_is_the_shifted_quotient():
    out = ext_dimensions(TAU, max_n=3)
    q = quotient_dims(TAU, max_n=7)
    for n in range(4):
        assert out[n]["ext4"]["dim"] == q[n + 4]["dim"]


def test_ext_three_contains_the_double_quotient():
    out = ext_dimensions(TAU, max_n=3)
    q = quotient_dims(TAU, max_n=6)
    for n in range(4):
        assert out[n]["ext3"]["dim"] >= 2 * q[n + 3]["dim"]


def test_ext_alternating_sum_identity():
    out = ext_dimensions(TAU, max_n=4)
    for n in range(5):
        e_n = sum(
            (-1) ** s * COMPONENTS[s] * dim_formula(n + s) for s in range(5)
        )
        alt = sum((-1) ** s * out[n][f"ext{s}"]["dim"] for s in range(5))
        assert alt == e_n


# ---------------------------------------------------------------------------
# exact tau-one cross-checks over Q
# ---------------------------------------------------------------------------


def test_tau_dual_rank_first_map_injective():
    # a -> (a r1, a r2, a r3, a r4) is injective degree by degree
    for d in range(4):
        assert tau_one_dual_rank(1, d) == dim_formula(d)


def test_tau_dual_rank_oracles():
    # frozen exact ranks over Q; the modular meets must reproduce them
    assert tau_one_dual_rank(2, 1) == 15
    assert tau_one_dual_rank(3, 2) == 41
    assert tau_one_dual_rank(4, 2) == 14
    assert tau_one_dual_rank(4, 3) == 27


def test_tau_dual_rank_last_map_vs_ideal():
    # rank of the last dual map = dimension of the ideal's graded piece
    for d in range(1, 5):
        ideal_dim = dim_formula(d + 1) - QUOTIENT_DIMS[d + 1]
        assert tau_one_dual_rank(4, d) == ideal_dim
