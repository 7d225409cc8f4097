import random
from fractions import Fraction

import pytest

from mastereq import fixtures
from mastereq.artin import power_ring
from mastereq.bv import (
    antibracket,
    bvinfty_qme_residual,
    conjugation_identity_check,
    derived_bracket,
    derived_brackets_linfty_check,
    qme_exp_check,
    qme_residual,
    qme_solve_perturbative,
)
from mastereq.constructions import BiDgLieData, bv_from_bi_dg_lie, ce_bv_from_dg_lie, ce_bvinfty_from_linfty, qm_bidg_residual, corollary_bidg_check
from mastereq.diagnostics import PreconditionError
from mastereq.graded import GradedVectorSpace
from mastereq.linfty import DgLieAlgebra
from mastereq.operators import Operator, iterated_commutator_apply, operator_order_check
from mastereq.sampling import random_qme_element
from mastereq.series import HbarSeries
from mastereq.words import SymmetricWordAlgebra


def ce(name, n=4):
    return ce_bv_from_dg_lie(fixtures.get_dg_lie(name), n)


def test_order_check_derivation():
    bv = ce("bidg4-dglie", 4)
    assert operator_order_check(bv.algebra, bv.d, 1).ok


def test_order_check_multiplication_operator():
    # L_a is order <= 0 under graded commutators: graded-commutative algebras
    # make [L_a, L_b] vanish identically
    bv = ce("heis3", 4)
    A = bv.algebra

    def mult_by_x(w):
        return A.mul_words(("x",), w)

    L = Operator.from_function(A, 1, mult_by_x, name="L_x")
    assert operator_order_check(A, L, 0).ok
    assert operator_order_check(A, L, 1).ok


def test_order_witness_for_ce_delta():
    bv = ce("heis3", 4)
    low = operator_order_check(bv.algebra, bv.delta, 1)
    assert not low.ok
    assert set(low.witness["test_vectors"]) == {"x", "y"}


def test_antibracket_zero_delta():
    bv = ce("abelian2", 4)
    for w1 in bv.algebra.words:
        for w2 in bv.algebra.words:
            if len(w1) + len(w2) <= 4:
                assert antibracket(bv, w1, w2) == {}


def test_antibracket_unit_degenerates():
    bv = ce("sl2", 4)
    for w in bv.algebra.words:
        assert antibracket(bv, (), w) == {}
        assert antibracket(bv, w, ()) == {}


def test_antibracket_graded_jacobi_and_leibniz():
    # shifted-degree antisymmetry and the Leibniz deviation on word triples
    bv = ce("sl2", 4)
    A = bv.algebra
    singles = [w for w in A.words if len(w) == 1]
    for a in singles:
        for b in singles:
            ab = antibracket(bv, a, b)
            ba = antibracket(bv, b, a)
            sign = -1 if ((A.degree(a) - 1) * (A.degree(b) - 1)) % 2 else 1
            assert ab == {w: -sign * c for w, c in ba.items()}
    # biderivation property of the antibracket on length-1 times length-2
    for a in singles:
        for b in singles:
            for c in singles:
                bc = A.mul_words(b, c)
                lhs = {}
                for w, coeff in bc.items():
                    for u, v in antibracket(bv, a, w).items():
                        lhs[u] = lhs.get(u, 0) + coeff * v
                rhs = {}
                for u, v in A.mul(antibracket(bv, a, b), {c: Fraction(1)}).items():
                    rhs[u] = rhs.get(u, 0) + v
                sgn = -1 if ((A.degree(a) - 1) * A.degree(b)) % 2 else 1
                for u, v in A.mul({b: Fraction(1)}, antibracket(bv, a, c)).items():
                    rhs[u] = rhs.get(u, 0) + sgn * v
                diff = dict(lhs)
                for u, v in rhs.items():
                    diff[u] = diff.get(u, 0) - v
                assert not any(diff.values()), (a, b, c)


def test_antibracket_equals_iterated_commutator_form():
    # the two displayed forms agree: {a,b} = (-1)^{|a|} [[Delta, L_a], L_b](1),
    # including on a fixture where d and Delta are both nonzero
    from mastereq.constructions import BiDgLieData, bv_from_bi_dg_lie
    bv, _ = bv_from_bi_dg_lie(BiDgLieData(**fixtures.bidg_fixtures()["bidg4"],
                                          name="bidg4"), 4)
    A = bv.algebra
    words = [w for w in A.words if 0 < len(w) <= 2]
    for a in words[:8]:
        for b in words[:8]:
            if len(a) + len(b) > 3:
                continue
            commutator = iterated_commutator_apply(A, bv.delta, [a, b], ())
            sign = -1 if A.degree(a) % 2 else 1
            expect = {w: sign * c for w, c in commutator.items() if c}
            got = {w: c for w, c in antibracket(bv, a, b).items() if c}
            assert got == expect, (a, b)


def test_zero_morphism_on_trivial_coproduct_sources():
    # with the trivial coproduct the convolution exponential truncates after
    # one step; the zero morphism still intertwines because the augmentation
    # kills both operators
    from mastereq.constructions import AssociativeAlgebraData, bar_bv_from_associative
    from mastereq.morphisms import BVMorphism, check_bv_morphism
    data = fixtures.associative_fixtures()["dual-numbers"]
    bv, _ = bar_bv_from_associative(AssociativeAlgebraData(**data, name="dual"), 3,
                                    coproduct="trivial")
    V = bv.as_bvinfty(3)
    phi = BVMorphism(V, V, {}, name="0")
    assert check_bv_morphism(phi)["ok"]


def test_antibracket_shifted_jacobi_on_word_triples():
    # {a,{b,c}} = {{a,b},c} + (-1)^{|a|'|b|'} {b,{a,c}} with |.|' = deg - 1,
    # over all word triples of total length <= 4
    bv = ce("sl2", 4)
    A = bv.algebra
    words = [w for w in A.words if w]
    for a in words:
        for b in words:
            for c in words:
                if len(a) + len(b) + len(c) > 4:
                    continue
                lhs = {}
                for w, coeff in antibracket(bv, b, c).items():
                    for u, v in antibracket(bv, a, w).items():
                        lhs[u] = lhs.get(u, 0) + coeff * v
                rhs = {}
                for w, coeff in antibracket(bv, a, b).items():
                    for u, v in antibracket(bv, w, c).items():
                        rhs[u] = rhs.get(u, 0) + coeff * v
                sign = -1 if ((A.degree(a) - 1) * (A.degree(b) - 1)) % 2 else 1
                for w, coeff in antibracket(bv, a, c).items():
                    for u, v in antibracket(bv, b, w).items():
                        rhs[u] = rhs.get(u, 0) + sign * coeff * v
                diff = dict(lhs)
                for u, v in rhs.items():
                    diff[u] = diff.get(u, 0) - v
                assert not any(diff.values()), (a, b, c)


def test_derived_bracket_derivation_only():
    # dhat with only Delta_1 = d: all brackets of arity >= 2 vanish
    bvi = ce_bvinfty_from_linfty(fixtures.get_dg_lie("bidg4-dglie").to_linfty(), 4)
    only_d = type(bvi)(bvi.algebra, {1: bvi.operators[1]}, 3, name="d-only")
    singles = [w for w in bvi.algebra.words if len(w) == 1]
    for a in singles[:3]:
        for b in singles[:3]:
            assert derived_bracket(only_d, [a, b]).is_zero()


def test_derived_bracket_matches_antibracket_up_to_sign():
    bv = ce("sl2", 4)
    bvi = bv.as_bvinfty(3)
    singles = [w for w in bv.algebra.words if len(w) == 1]
    for a in singles:
        for b in singles:
            got = derived_bracket(bvi, [a, b])
            expect = antibracket(bv, a, b)
            sign = -1 if bv.algebra.degree(a) % 2 else 1
            assert got == HbarSeries({(w, "1", 0): sign * c for w, c in expect.items()}), (a, b)


def test_derived_bracket_arity3_matches_commutator_oracle():
    bvi = ce_bvinfty_from_linfty(fixtures.linfty_fixtures()["l3demo"], 4)
    A = bvi.algebra
    vs = [("x1",), ("x2",), ("x3",)]
    got = derived_bracket(bvi, vs)
    # independent oracle: word-level iterated commutators, one operator at a time
    expect = HbarSeries()
    for n, op in bvi.operators.items():
        val = iterated_commutator_apply(A, op, vs, ())
        shift = (n - 1) - (len(vs) - 1)
        expect = expect.add(HbarSeries({(w, "1", shift): c for w, c in val.items()}))
    assert got == expect
    assert not got.is_zero()


def test_derived_brackets_linfty_check_fixtures():
    for name in ("heis3", "sl2", "aff2", "bidg4-dglie"):
        bvi = ce_bvinfty_from_linfty(fixtures.get_dg_lie(name).to_linfty(), 4)
        assert derived_brackets_linfty_check(bvi, max_arity=4).ok, name
    bvi = ce_bvinfty_from_linfty(fixtures.linfty_fixtures()["l3demo"], 4)
    assert derived_brackets_linfty_check(bvi, max_arity=4).ok


def test_derived_brackets_corrupted_delta_detected():
    space = GradedVectorSpace([("x", 0), ("y", 0), ("z", 0)])
    bad = DgLieAlgebra(space, {}, {("x", "y"): {"z": 1}, ("x", "z"): {"x": 1}},
                       name="bad", validate=False)
    bvi = ce_bvinfty_from_linfty(bad.to_linfty(), 4)
    result = derived_brackets_linfty_check(bvi, max_arity=3)
    assert not result.ok
    assert result.witness is not None


def test_qme_residual_zero():
    bv = ce("heis3", 4)
    R = power_ring(3)
    assert qme_residual(bv, R, HbarSeries()).is_zero()


def test_qme_residual_frozen_value():
    # S = (x·y)(x)t + hbar.1(x)t over CE(heis3), k[t]/t^3:
    # dS = 0, hbar Delta S = -hbar z t, {S,S}/2 = (x·y·z) t^2
    bv = ce("heis3", 4)
    R = power_ring(3)
    S = HbarSeries({(("x", "y"), "t", 0): 1, ((), "t", 1): 1})
    res = qme_residual(bv, R, S, 3)
    assert res == HbarSeries({(("z",), "t", 1): -1, (("x", "y", "z"), "t^2", 0): 1})


def test_qme_residual_requires_degree_two():
    bv = ce("heis3", 4)
    R = power_ring(3)
    with pytest.raises(PreconditionError):
        qme_residual(bv, R, HbarSeries({(("x",), "t", 0): 1}), 3)


def test_qme_classical_reduction():
    # Delta S = 0 and S classical: residual reduces to the classical one
    bv = ce("lift3", 4)
    R = power_ring(3)
    # lift3 letters in g[-1]: x,u degree 2, w degree 3; classical MC part:
    # S = x(x)t has Delta S = 0 (no pair), residual = {S,S}/2 + dS
    S = HbarSeries({(("x",), "t", 0): 1})
    res = qme_residual(bv, R, S, 3)
    from mastereq.linfty import emce_residual
    classical = emce_residual(fixtures.get_dg_lie("lift3"), R, HbarSeries({("x", "t", 0): 1}))
    assert res == HbarSeries({((w,), r, h): c for (w, r, h), c in classical.terms.items()})


def test_bvinfty_residual_agrees_with_dg_bv():
    bv = ce("sl2", 4)
    R = power_ring(3)
    rng = random.Random(31)
    for _ in range(10):
        S = random_qme_element(bv, R, rng)
        assert qme_residual(bv, R, S, 3) == bvinfty_qme_residual(bv.as_bvinfty(3), R, S)


def test_qme_exp_check_equivalence_battery():
    rng = random.Random(101)
    R = power_ring(3)
    for name in ("heis3", "sl2", "aff2", "abelian2"):
        bv = ce(name, 4)
        solutions = 0
        for _ in range(20):
            S = random_qme_element(bv, R, rng)
            report = qme_exp_check(bv, R, S)
            assert report["ok"], (name, report)
            solutions += report["exp_zero"]
        assert solutions >= 0


def test_qme_exp_check_zero_solution():
    bv = ce("heis3", 4)
    report = qme_exp_check(bv, power_ring(3), HbarSeries())
    assert report["exp_zero"] and report["residual_zero"] and report["ok"]


def test_qme_exp_check_rejects_corrupted_structure():
    space = GradedVectorSpace([("x", 0), ("y", 0), ("z", 0)])
    bad = DgLieAlgebra(space, {}, {("x", "y"): {"z": 1}, ("y", "z"): {"y": 1}},
                       name="bad", validate=False)
    bv = ce_bv_from_dg_lie(bad, 4)
    with pytest.raises(PreconditionError):
        qme_exp_check(bv, power_ring(3), HbarSeries())


def test_conjugation_identity_zero_S():
    bv = ce("sl2", 4)
    result = conjugation_identity_check(bv, power_ring(3), HbarSeries())
    assert result.ok and not result.bound["skipped"]


def test_conjugation_identity_random_battery():
    rng = random.Random(55)
    R = power_ring(3)
    for name in ("heis3", "sl2", "aff2"):
        bv = ce(name, 4)
        for _ in range(10):
            S = random_qme_element(bv, R, rng)
            result = conjugation_identity_check(bv, R, S)
            assert result.ok, (name, result.witness)
            assert not result.bound["skipped"]


def test_conjugation_identity_bvinfty_generalization():
    rng = random.Random(56)
    R = power_ring(3)
    bvi = ce_bvinfty_from_linfty(fixtures.linfty_fixtures()["l3demo"], 6)
    words = [w for w in bvi.algebra.words if len(w) <= 2]
    for _ in range(5):
        S = random_qme_element(bvi, R, rng, word_len_cap=1)
        result = conjugation_identity_check(bvi, R, S, test_words=words)
        assert result.ok, result.witness


def test_qme_solver_trivial():
    bv = ce("abelian2", 4)
    R = power_ring(3)
    seed = HbarSeries({(("x", "y"), "t", 0): 1})
    result = qme_solve_perturbative(bv, R, seed)
    assert result.status == "solved"
    assert result.element == seed


def test_qme_solver_validates_output():
    bv = ce("sl2", 4)
    R = power_ring(3)
    rng = random.Random(77)
    solved = 0
    for _ in range(10):
        seed = random_qme_element(bv, R, rng)
        seed = seed.ring_project(R, 1)
        layer_ok = True
        bvi = bv.as_bvinfty(3)
        ctx = bvi.context(R)
        if not bvi.dhat(seed, ctx).is_zero():
            continue
        result = qme_solve_perturbative(bv, R, seed)
        if result.status == "solved":
            solved += 1
            assert qme_exp_check(bv, R, result.element)["exp_zero"]
    assert solved > 0


def test_qme_solver_obstruction_matches_residual():
    # obst2 as a bi-dg input: use CE of obst2 with S in the image letters
    bv = ce("obst2", 4)
    R = power_ring(3)
    # letters in g[-1]: x deg 2, w deg 3: S = x(x)t is degree-2
    seed = HbarSeries({(("x",), "t", 0): 1})
    result = qme_solve_perturbative(bv, R, seed)
    assert result.status == "obstructed"
    assert result.obstruction_order == 2
    direct = bvinfty_qme_residual(bv.as_bvinfty(3), R, result.partial).ring_project(R, 2)
    assert result.obstruction == direct


def test_qm_bidg_residual_routes_agree():
    data = fixtures.bidg_fixtures()["bidg4"]
    B = BiDgLieData(**data, name="bidg4")
    R = power_ring(3)
    rng = random.Random(91)
    labels1 = [(x, h) for x in B.space.labels for h in range(2) if B.space.degree(x) + 2 * h == 1]
    for _ in range(20):
        terms = {}
        for (x, h) in labels1:
            for r in R.ideal_labels:
                if rng.random() < 0.4:
                    terms[(x, r, h)] = Fraction(rng.randint(-2, 2))
        S = HbarSeries(terms)
        report = qm_bidg_residual(B, R, S, 3, max_len=4)
        assert report["ok"], report
    assert qm_bidg_residual(B, R, HbarSeries(), 3)["is_solution"]


def test_corollary_bidg_representability():
    data = fixtures.bidg_fixtures()["bidg4"]
    B = BiDgLieData(**data, name="bidg4")
    R = power_ring(3)
    rng = random.Random(92)
    labels1 = [(x, h) for x in B.space.labels for h in range(2) if B.space.degree(x) + 2 * h == 1]
    for _ in range(5):
        terms = {}
        for (x, h) in labels1:
            for r in R.ideal_labels:
                if rng.random() < 0.3:
                    terms[(x, r, h)] = Fraction(rng.randint(-1, 1))
        report = corollary_bidg_check(B, R, HbarSeries(terms), 3)
        assert report["ok"], report
