import itertools
from fractions import Fraction

import pytest

from mastereq.graded import (
    DegreeError,
    GradedLinearMap,
    GradedVector,
    GradedVectorSpace,
    koszul_sign,
)

HEIS3 = GradedVectorSpace([("x", 0), ("y", 0), ("z", 0)])


def test_shift_identity():
    assert HEIS3.shift(0) == HEIS3


def test_shift_moves_degrees():
    V = GradedVectorSpace([("x", 2)])
    assert V.shift(1).degree("x") == 1


def test_shift_round_trip():
    assert HEIS3.shift(3).shift(-3) == HEIS3


def test_dual_degree():
    V = GradedVectorSpace([("a", 1)])
    assert V.dual().degree("a*") == -1


def test_dual_involution():
    assert HEIS3.dual().dual() == HEIS3


def test_dual_of_shift_dimensions():
    # enumerated by hand: heis3 sits in degree 0, heis3[2] in degree -2, its
    # dual in degree +2, so dual(heis3[2])^p = dual(heis3)^{p-2}
    left = HEIS3.shift(2).dual().dims_by_degree()
    assert left == {2: 3}
    right = {p + 2: n for p, n in HEIS3.dual().dims_by_degree().items()}
    assert left == right
    assert HEIS3.shift(2).dual() == HEIS3.dual().shift(-2)


def test_dual_shift_functoriality_all_fixtures():
    for space in (HEIS3, GradedVectorSpace([("a", -2), ("b", 0), ("c", 3)])):
        for n in range(-3, 4):
            assert space.shift(n).dual() == space.dual().shift(-n)


def test_koszul_identity_perm():
    assert koszul_sign([0, 1, 2], [1, 5, -2]) == 1


def test_koszul_swap_odd():
    assert koszul_sign([1, 0], [1, 1]) == -1


def test_koszul_three_cycle():
    # moving (x1,x2,x3) of degrees (1,1,2) to (x3,x1,x2): two adjacent swaps
    # each contributing (-1)^{1*2}
    assert koszul_sign([2, 0, 1], [1, 1, 2]) == 1


def _check_multiplicative(n, degree_vectors):
    perms = list(itertools.permutations(range(n)))
    for degs in degree_vectors:
        for sigma in perms:
            for tau in perms:
                composed = [tau[sigma[k]] for k in range(n)]
                tau_degs = [degs[tau[k]] for k in range(n)]
                lhs = koszul_sign(composed, list(degs))
                rhs = koszul_sign(list(sigma), tau_degs) * koszul_sign(list(tau), list(degs))
                assert lhs == rhs


def test_koszul_multiplicative_exhaustive_small():
    # lengths <= 3: every permutation pair, every degree vector in {-2..2}
    for n in range(1, 4):
        _check_multiplicative(n, itertools.product([-2, -1, 0, 1, 2], repeat=n))


def test_koszul_multiplicative_lengths_four_five():
    # signs only see parities, so {-1, 2} covers all degree behavior; length 4
    # is parity-exhaustive, length 5 covers the generating parity patterns
    _check_multiplicative(4, itertools.product([-1, 2], repeat=4))
    patterns5 = [(-1,) * 5, (2,) * 5, (-1, 2, -1, 2, -1), (1, 1, -2, 1, -2)]
    _check_multiplicative(5, patterns5)


def test_koszul_length_mismatch():
    with pytest.raises(ValueError):
        koszul_sign([0, 1], [1])


def test_vector_rejects_float():
    with pytest.raises(TypeError):
        GradedVector(HEIS3, {"x": 0.5})


def test_vector_homogeneity_enforced():
    V = GradedVectorSpace([("a", 0), ("b", 1)])
    with pytest.raises(DegreeError):
        GradedVector(V, {"a": 1, "b": 1}, degree=0)


def test_map_degree_checked():
    V = GradedVectorSpace([("a", 0), ("b", 2)])
    with pytest.raises(DegreeError):
        GradedLinearMap(V, V, 1, {("a", "b"): 1})


def test_compose_identity():
    f = GradedLinearMap(HEIS3, HEIS3, 0, {("x", "y"): 2, ("z", "z"): 1})
    ident = GradedLinearMap.identity(HEIS3)
    assert ident.compose(f) == f
    assert f.compose(ident) == f


def test_zero_map_application():
    z = GradedLinearMap.zero(HEIS3, HEIS3, 0)
    v = HEIS3.basis_vector("x")
    assert z.apply(v).is_zero()


def test_compose_matches_dense_matrix_oracle():
    # random-ish 3x3 rational maps over heis3, multiplied densely
    f = GradedLinearMap(HEIS3, HEIS3, 0, {
        ("x", "x"): Fraction(1, 2), ("x", "z"): 3, ("y", "x"): -2, ("z", "y"): Fraction(5, 7)})
    g = GradedLinearMap(HEIS3, HEIS3, 0, {
        ("x", "y"): 4, ("y", "z"): Fraction(-1, 3), ("z", "x"): 1, ("z", "z"): 2})
    labels = HEIS3.labels
    Fm = [[f.entries.get((a, b), Fraction(0)) for b in labels] for a in labels]
    Gm = [[g.entries.get((a, b), Fraction(0)) for b in labels] for a in labels]
    # (g∘f) sends a -> sum_b F[a][b] G[b][c]
    prod = [[sum(Fm[i][k] * Gm[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    composite = g.compose(f)
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            assert composite.entries.get((a, b), Fraction(0)) == prod[i][j]


def test_exact_rational_arithmetic_properties():
    import random
    rng = random.Random(11)
    for _ in range(50):
        a, b, c = (Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
