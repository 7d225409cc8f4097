"""Building BV and BV-infinity algebras from classical input data.

All constructions land on the word algebra of the once-desuspended space:
symmetric words for Lie-type inputs, tensor words for associative ones.  The
BV operator coming from a bracket follows the sum-over-pairs formula

    Delta(x_1 ... x_n) = sum_{i<j} (-1)^{|x_1|+...+|x_i|} eps_{ij}
                          x_1 ... [x_i, x_j] ... (x_j omitted) ... x_n,

with eps_{ij} the Koszul sign of commuting x_j next to x_i, computed by the
sign oracle on the explicit permutation rather than a closed-form shortcut.
Every construction certifies its axioms up to the requested word length, and
failures are returned as certificates with witnesses, not exceptions: a
nonassociative input is a legitimate negative fixture.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .artin import ArtinLocalAlgebra
from .bv import BVAlgebra, BVInftyAlgebra, antibracket, qme_residual
from .coalgebra import Coderivation
from .diagnostics import CheckResult, PreconditionError, StructureError
from .graded import GradedVectorSpace, as_scalar, koszul_sign
from .linfty import DgLieAlgebra, LInftyAlgebra, emce_residual, quillen_bijection_check
from .operators import Operator
from .series import HbarSeries
from .words import SymmetricWordAlgebra, TensorWordAlgebra, Word, WordAlgebra, vec_add_into

__all__ = [
    "LieBialgebraData",
    "BiDgLieData",
    "AssociativeAlgebraData",
    "derivation_extend",
    "ce_delta_operator",
    "ce_bv_from_dg_lie",
    "ce_bvinfty_from_linfty",
    "ce_bv_from_ibl",
    "bv_from_bi_dg_lie",
    "bar_bv_from_associative",
    "hbar_extended_dg_lie",
    "qm_bidg_residual",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def derivation_extend(algebra: WordAlgebra, values: Mapping[str, Mapping[Word, object]],
                      degree: int, name: str = "derivation") -> Operator:
    """Extend a generator-level map x -> word vector as a graded derivation.

    The operator passes over the first i-1 letters with the Koszul sign of
    its own degree, then multiplies the value back in place.
    """
    table = {x: {tuple(w): as_scalar(c) for w, c in val.items() if as_scalar(c) != 0}
             for x, val in values.items()}

    def act(word: Word) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for i, x in enumerate(word):
            val = table.get(x)
            if not val:
                continue
            prefix_deg = sum(algebra.space.degree(u) for u in word[:i])
            sign = -ONE if (degree * prefix_deg) % 2 else ONE
            left = {word[:i]: ONE}
            mid = algebra.mul(left, val)
            full = algebra.mul(mid, {word[i + 1:]: ONE})
            for w, c in full.items():
                vec_add_into(out, w, sign * c)
        return out

    return Operator.from_function(algebra, degree, act, name=name)


def ce_delta_operator(algebra: SymmetricWordAlgebra, bracket_labels, name: str = "Delta") -> Operator:
    """BV operator of a bracket on the word algebra of the desuspension.

    `bracket_labels(a, b)` returns the sparse bracket value; letter degrees
    are the word-algebra degrees (the desuspended grading).
    """

    def act(word: Word) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        n = len(word)
        degs = [algebra.space.degree(x) for x in word]
        for i in range(n):
            for j in range(i + 1, n):
                value = bracket_labels(word[i], word[j])
                if not value:
                    continue
                prefactor = sum(degs[: i + 1])
                perm = list(range(i + 1)) + [j] + [k for k in range(i + 1, n) if k != j]
                eps = koszul_sign(perm, degs)
                sign = eps if prefactor % 2 == 0 else -eps
                prefix = word[:i]
                suffix = word[i + 1:j] + word[j + 1:]
                for t, c in value.items():
                    # the bracket value replaces the pair in place at slot i
                    mid = algebra.mul({prefix: ONE}, {(t,): c})
                    for w, s in algebra.mul(mid, {suffix: ONE}).items():
                        vec_add_into(out, w, sign * s)
        return out

    return Operator.from_function(algebra, -1, act, name=name)


def _desuspension_algebra(space: GradedVectorSpace, max_len: int, coproduct: str = "shuffle") -> SymmetricWordAlgebra:
    return SymmetricWordAlgebra(space.shift(-1), max_len, coproduct=coproduct)


def ce_bv_from_dg_lie(L: DgLieAlgebra, max_len: int = 4, coproduct: str = "shuffle") -> BVAlgebra:
    """Homology-complex BV structure of a dg-Lie algebra on its desuspension.

    d is the derivation extension of the internal differential; Delta is the
    bracket contraction; Delta^2 = 0 re-proves Jacobi and is certified, not
    assumed.
    """
    algebra = _desuspension_algebra(L.space, max_len, coproduct)
    d_vals = {s: {(t,): c} for (s, t), c in L.d.entries.items()}
    d_op = derivation_extend(algebra, _merge_generator_values(d_vals), 1, name="d")
    delta_op = ce_delta_operator(algebra, L.bracket_labels)
    return BVAlgebra(algebra, d_op, delta_op, name=f"CE({L.name})")


def _merge_generator_values(entries: Mapping[str, Mapping[Word, object]]) -> dict:
    out: dict[str, dict[Word, Fraction]] = {}
    for x, val in entries.items():
        bucket = out.setdefault(x, {})
        for w, c in val.items():
            bucket[tuple(w)] = bucket.get(tuple(w), ZERO) + as_scalar(c)
    return out


def ce_bvinfty_from_linfty(g: LInftyAlgebra, max_len: int = 4, hbar_cutoff: int = 3,
                           coproduct: str = "shuffle") -> BVInftyAlgebra:
    """S(g[-1]) with one operator per bracket arity: Delta_n extends l_n.

    The structure constants transport verbatim from S(g[1]): the even shift
    preserves parities, so normal forms and signs agree; Delta_n is the
    coderivation expansion of l_n and in particular has order <= n.
    """
    algebra = _desuspension_algebra(g.space, max_len, coproduct)
    operators: dict[int, Operator] = {}
    for n, table in g.brackets.items():
        if n > max_len:
            continue
        cod = Coderivation(algebra, 3 - 2 * n, {w: dict(val) for w, val in table.items()})
        operators[n] = cod.as_operator()
        operators[n].name = f"Delta_{n}"
    return BVInftyAlgebra(algebra, operators, hbar_cutoff, name=f"CE({g.name})")


class LieBialgebraData:
    """Classical Lie bialgebra input: bracket and cobracket with validation.

    The cobracket is given on generators as delta(x) = sum c * a ^ b over
    canonical pairs.  Validation is by brute force: Jacobi through the Lie
    algebra constructor, co-Jacobi, the cocycle compatibility, and the
    involutivity flag bracket∘delta = 0.
    """

    def __init__(self, basis, bracket, cobracket, name: str = "bialgebra"):
        self.space = GradedVectorSpace(basis)
        if any(deg != 0 for _, deg in self.space.basis):
            raise PreconditionError("Lie bialgebra data is supported in degree zero")
        self.lie = DgLieAlgebra(self.space, {}, bracket, name=name)
        self.name = name
        self.cobracket: dict[str, dict[tuple[str, str], Fraction]] = {}
        for x, val in (cobracket or {}).items():
            clean: dict[tuple[str, str], Fraction] = {}
            for (a, b), c in val.items():
                c = as_scalar(c)
                if not c:
                    continue
                if a == b:
                    raise StructureError("cobracket value a^a vanishes identically")
                if self.space.index(a) > self.space.index(b):
                    a, b, c = b, a, -c
                clean[(a, b)] = clean.get((a, b), ZERO) + c
            if clean:
                self.cobracket[x] = {k: v for k, v in clean.items() if v}

    def delta_vec(self, x: str) -> dict[tuple[str, str], Fraction]:
        return self.cobracket.get(x, {})

    def involutive(self) -> bool:
        for x in self.space.labels:
            acc: dict[str, Fraction] = {}
            for (a, b), c in self.delta_vec(x).items():
                for t, v in self.lie.bracket_labels(a, b).items():
                    vec_add_into(acc, t, c * v)
            if any(acc.values()):
                return False
        return True

    def axiom_report(self) -> list[CheckResult]:
        out = list(self.lie.axiom_report())
        out.append(self._co_jacobi())
        out.append(self._cocycle())
        return out

    def _wedge_action(self, x: str, pair_vec: Mapping[tuple[str, str], Fraction]) -> dict[tuple[str, str], Fraction]:
        # x . (a ^ b) = [x,a] ^ b + a ^ [x,b], kept in canonical pair order
        out: dict[tuple[str, str], Fraction] = {}
        for (a, b), c in pair_vec.items():
            for t, v in self.lie.bracket_labels(x, a).items():
                self._add_pair(out, t, b, c * v)
            for t, v in self.lie.bracket_labels(x, b).items():
                self._add_pair(out, a, t, c * v)
        return out

    def _add_pair(self, acc, a, b, coeff) -> None:
        if a == b or not coeff:
            return
        if self.space.index(a) > self.space.index(b):
            a, b, coeff = b, a, -coeff
        vec_add_into(acc, (a, b), coeff)

    def _cocycle(self) -> CheckResult:
        for x in self.space.labels:
            for y in self.space.labels:
                lhs: dict[tuple[str, str], Fraction] = {}
                for t, v in self.lie.bracket_labels(x, y).items():
                    for pair, c in self.delta_vec(t).items():
                        vec_add_into(lhs, pair, c * v)
                rhs = self._wedge_action(x, self.delta_vec(y))
                for pair, c in self._wedge_action(y, self.delta_vec(x)).items():
                    vec_add_into(rhs, pair, -c)
                for pair, c in rhs.items():
                    vec_add_into(lhs, pair, -c)
                if any(lhs.values()):
                    return CheckResult("cocycle", False, witness=(x, y))
        return CheckResult("cocycle", True)

    def _co_jacobi(self) -> CheckResult:
        # alternation of (delta (x) id) ∘ delta vanishes
        for x in self.space.labels:
            acc: dict[tuple[str, str, str], Fraction] = {}
            for (a, b), c in self.delta_vec(x).items():
                for (u, v), c2 in self.delta_vec(a).items():
                    self._add_cyclic(acc, u, v, b, c * c2)
                for (u, v), c2 in self.delta_vec(b).items():
                    self._add_cyclic(acc, u, v, a, -c * c2)
            if any(acc.values()):
                return CheckResult("co-jacobi", False, witness=x)
        return CheckResult("co-jacobi", True)

    def _add_cyclic(self, acc, u, v, w, coeff) -> None:
        # antisymmetrized tensor (u^v)(x)w summed over cyclic rotations
        for (p, q, r) in ((u, v, w), (w, u, v), (v, w, u)):
            vec_add_into(acc, (p, q, r), coeff)
            vec_add_into(acc, (q, p, r), -coeff)


def ce_bv_from_ibl(B: LieBialgebraData, max_len: int = 4) -> tuple[BVAlgebra, dict]:
    """Desuspension complex of a Lie bialgebra: Delta from the bracket, d the
    derivation extension of the cobracket.

    For involutive data every BV axiom certifies; otherwise [Delta, d] != 0
    and the first witness word is reported in the diagnostics.
    """
    axioms = B.axiom_report()
    bad = [r for r in axioms if not r.ok]
    if bad:
        raise StructureError(f"{B.name}: bialgebra axiom {bad[0].name} fails", witness=bad[0].witness)
    algebra = _desuspension_algebra(B.space, max_len)
    d_values = {
        x: {_pair_word(algebra, a, b): c for (a, b), c in val.items()}
        for x, val in B.cobracket.items()
    }
    d_op = derivation_extend(algebra, d_values, 1, name="d(cobracket)")
    delta_op = ce_delta_operator(algebra, B.lie.bracket_labels)
    bv = BVAlgebra(algebra, d_op, delta_op, name=f"CE({B.name})")
    involutive = B.involutive()
    anti = delta_op.graded_commutator(d_op)
    anti.name = "[delta,d]"
    commutes = anti.is_zero_on_defined()
    report = {
        "involutive": involutive,
        "commutator_vanishes": commutes.ok,
        "witness": commutes.witness,
        "axioms": axioms,
    }
    return bv, report


def _pair_word(algebra: SymmetricWordAlgebra, a: str, b: str) -> Word:
    word, sign = algebra.normalize([a, b])
    if word is None:
        raise StructureError(f"pair {a}^{b} collapses in the word algebra")
    if sign != 1:
        raise StructureError("canonical pair came with a sign; normalize input pairs first")
    return word


class BiDgLieData:
    """Graded Lie algebra with two graded-commuting differentials d (degree 1)
    and delta (degree -1), both derivations of the bracket."""

    def __init__(self, basis, bracket, d, delta, name: str = "bidg"):
        self.space = GradedVectorSpace(basis)
        self.name = name
        self.lie = DgLieAlgebra(self.space, d, bracket, name=name)
        self.delta = _graded_map(self.space, delta, -1)

    def axiom_report(self) -> list[CheckResult]:
        out = list(self.lie.axiom_report())
        sq = self.delta.compose(self.delta)
        out.append(CheckResult("delta-squared", sq.is_zero(),
                               witness=None if sq.is_zero() else sorted(sq.entries)[0]))
        anti = self.delta.compose(self.lie.d) + self.lie.d.compose(self.delta)
        out.append(CheckResult("[delta,d]", anti.is_zero(),
                               witness=None if anti.is_zero() else sorted(anti.entries)[0]))
        out.append(self._delta_derivation())
        return out

    def _delta_derivation(self) -> CheckResult:
        for x in self.space.labels:
            for y in self.space.labels:
                lhs: dict[str, Fraction] = {}
                for t, c in self.lie.bracket_labels(x, y).items():
                    for u, v in self.delta.apply_label(t).coeffs.items():
                        vec_add_into(lhs, u, c * v)
                sx = -ONE if self.space.degree(x) % 2 else ONE
                rhs: dict[str, Fraction] = {}
                for u, v in self.delta.apply_label(x).coeffs.items():
                    for t, c in self.lie.bracket_labels(u, y).items():
                        vec_add_into(rhs, t, c * v)
                for u, v in self.delta.apply_label(y).coeffs.items():
                    for t, c in self.lie.bracket_labels(x, u).items():
                        vec_add_into(rhs, t, sx * c * v)
                for t, c in rhs.items():
                    vec_add_into(lhs, t, -c)
                if any(lhs.values()):
                    return CheckResult("delta-derivation", False, witness=(x, y))
        return CheckResult("delta-derivation", True)


def _graded_map(space: GradedVectorSpace, entries, degree: int):
    from .graded import GradedLinearMap
    if hasattr(entries, "entries"):
        return entries
    return GradedLinearMap(space, space, degree, {(s, t): c for (s, t), c in (entries or {}).items()})


def bv_from_bi_dg_lie(B: BiDgLieData, max_len: int = 4) -> tuple[BVAlgebra, dict]:
    """Desuspension BV algebra of a bi-dg-Lie algebra.

    d extends the degree-one differential as a derivation; Delta is the
    derivation extension of the internal delta plus the bracket contraction,
    which reproduces the recursion Delta(ab) = (Delta a)b + (-1)^{|a|} a
    (Delta b) + (-1)^{|a|} {a,b} with the Schouten extension of the bracket.
    The inclusion of generators is certified to intertwine d, Delta and the
    brackets.
    """
    axioms = B.axiom_report()
    bad = [r for r in axioms if not r.ok]
    if bad:
        raise StructureError(f"{B.name}: axiom {bad[0].name} fails", witness=bad[0].witness)
    algebra = _desuspension_algebra(B.space, max_len)
    d_vals = {s: {(t,): c} for (s, t), c in B.lie.d.entries.items()}
    d_op = derivation_extend(algebra, _merge_generator_values(d_vals), 1, name="d")
    delta_internal_vals = {s: {(t,): c} for (s, t), c in B.delta.entries.items()}
    delta_op = derivation_extend(algebra, _merge_generator_values(delta_internal_vals), -1,
                                 name="delta-internal")
    delta_op = delta_op.add(ce_delta_operator(algebra, B.lie.bracket_labels))
    delta_op.name = "Delta"
    bv = BVAlgebra(algebra, d_op, delta_op, name=f"S({B.name}[-1])")
    inclusion = _inclusion_report(bv, B)
    return bv, {"axioms": axioms, "inclusion": inclusion}


def _inclusion_report(bv: BVAlgebra, B: BiDgLieData) -> list[CheckResult]:
    algebra = bv.algebra
    out = []
    ok_d = all(bv.d.entries.get((x,), {}) == {(t,): c for t, c in B.lie.d.apply_label(x).coeffs.items()}
               for x in B.space.labels)
    out.append(CheckResult("inclusion-d", ok_d))
    ok_delta = all(
        bv.delta.entries.get((x,), {}) == {(t,): c for t, c in B.delta.apply_label(x).coeffs.items()}
        for x in B.space.labels)
    out.append(CheckResult("inclusion-delta", ok_delta))
    ok_bracket, witness = True, None
    for x in B.space.labels:
        for y in B.space.labels:
            got = antibracket(bv, (x,), (y,))
            want: dict[Word, Fraction] = {}
            for t, c in B.lie.bracket_labels(x, y).items():
                vec_add_into(want, (t,), c)
            diff = dict(got)
            for w, c in want.items():
                vec_add_into(diff, w, -c)
            if any(diff.values()):
                ok_bracket, witness = False, (x, y)
                break
        if not ok_bracket:
            break
    out.append(CheckResult("inclusion-bracket", ok_bracket, witness=witness))
    return out


class AssociativeAlgebraData:
    """Associative algebra input, optionally with a differential.

    Associativity is not assumed: the associator is computed on demand, and a
    failing input is a legitimate negative fixture for the bar construction.
    """

    def __init__(self, basis, product, differential=None, name: str = "A"):
        self.space = GradedVectorSpace(basis)
        self.name = name
        self.product: dict[tuple[str, str], dict[str, Fraction]] = {}
        for (a, b), val in (product or {}).items():
            clean = {c: as_scalar(v) for c, v in val.items() if as_scalar(v) != 0}
            if clean:
                self.product[(a, b)] = clean
        self.d = _graded_map(self.space, differential, 1)

    def mul_labels(self, a: str, b: str) -> dict[str, Fraction]:
        return self.product.get((a, b), {})

    def associator_witness(self):
        for a, b, c in itertools.product(self.space.labels, repeat=3):
            left: dict[str, Fraction] = {}
            for t, v in self.mul_labels(a, b).items():
                for u, v2 in self.mul_labels(t, c).items():
                    vec_add_into(left, u, v * v2)
            for t, v in self.mul_labels(b, c).items():
                for u, v2 in self.mul_labels(a, t).items():
                    vec_add_into(left, u, -v * v2)
            if any(left.values()):
                return (a, b, c)
        return None


def bar_bv_from_associative(A: AssociativeAlgebraData, max_len: int = 4,
                            coproduct: str = "shuffle") -> tuple[BVAlgebra, dict]:
    """Tensor words on the desuspension with the shuffle product; the BV
    operator contracts adjacent letters through the multiplication:

        Delta(a_1 (x) ... (x) a_n)
          = sum_i (-1)^{|a_1|+...+|a_i|} a_1 (x) ... (x) (a_i a_{i+1}) (x) ... (x) a_n.

    Delta^2 = 0 is certified and is exactly associativity of the input.
    """
    algebra = TensorWordAlgebra(A.space.shift(-1), max_len, coproduct=coproduct)

    def delta_act(word: Word) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        degs = [algebra.space.degree(x) for x in word]
        for i in range(len(word) - 1):
            val = A.mul_labels(word[i], word[i + 1])
            if not val:
                continue
            sign = -ONE if sum(degs[: i + 1]) % 2 else ONE
            for t, c in val.items():
                new_word = word[:i] + (t,) + word[i + 2:]
                vec_add_into(out, new_word, sign * c)
        return out

    delta_op = Operator.from_function(algebra, -1, delta_act, name="Delta")

    def d_act(word: Word) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        degs = [algebra.space.degree(x) for x in word]
        for i, x in enumerate(word):
            img = A.d.apply_label(x)
            if img.is_zero():
                continue
            sign = -ONE if sum(degs[:i]) % 2 else ONE
            for t, c in img.coeffs.items():
                vec_add_into(out, word[:i] + (t,) + word[i + 1:], sign * c)
        return out

    d_op = Operator.from_function(algebra, 1, d_act, name="d")
    bv = BVAlgebra(algebra, d_op, delta_op, name=f"T({A.name}[-1])")
    return bv, {"associator_witness": A.associator_witness()}


def hbar_extended_dg_lie(B: BiDgLieData, hbar_cutoff: int = 3) -> DgLieAlgebra:
    """g[[hbar]] mod hbar^K as a finite-dimensional dg-Lie algebra over k,
    with differential d + hbar delta; basis labels are x@h{j}, degree |x|+2j."""
    K = hbar_cutoff
    basis = [(f"{x}@h{j}", deg + 2 * j) for j in range(K) for (x, deg) in B.space.basis]
    space = GradedVectorSpace(basis)
    d_entries: dict[tuple[str, str], Fraction] = {}
    for j in range(K):
        for (s, t), c in B.lie.d.entries.items():
            d_entries[(f"{s}@h{j}", f"{t}@h{j}")] = c
        if j + 1 < K:
            for (s, t), c in B.delta.entries.items():
                d_entries[(f"{s}@h{j}", f"{t}@h{j + 1}")] = \
                    d_entries.get((f"{s}@h{j}", f"{t}@h{j + 1}"), ZERO) + c
    bracket: dict[tuple[str, str], dict[str, Fraction]] = {}
    for i in range(K):
        for j in range(K):
            if i + j >= K:
                continue
            for (a, b), val in B.lie.bracket.items():
                key = (f"{a}@h{i}", f"{b}@h{j}")
                tgt = {f"{t}@h{i + j}": c for t, c in val.items()}
                if key in bracket:
                    continue
                bracket[key] = tgt
    return DgLieAlgebra(space, d_entries, bracket, name=f"{B.name}[[h]]/h^{K}")


def qm_bidg_residual(B: BiDgLieData, ring: ArtinLocalAlgebra, S: HbarSeries,
                     hbar_cutoff: int = 3, max_len: int = 4) -> dict:
    """Master-equation residual for a length-one element of the bi-dg complex.

    Three independent routes agree exactly and are all reported: the direct
    computation dS + hbar delta S + [S,S]/2 inside g, the restriction of the
    ambient word-algebra residual, and the Maurer-Cartan residual over the
    hbar-extended dg-Lie algebra (whose representability is delegated to the
    general bijection check).
    """
    K = hbar_cutoff
    for (x, r, h) in S.terms:
        if x not in B.space._index:
            raise PreconditionError(f"unknown generator {x!r} in length-one element")
        if B.space.degree(x) + 2 * h != 1:
            raise PreconditionError("element must have total degree 1 in g[[hbar]]")
        if r not in ring.ideal_labels:
            raise PreconditionError("coefficients must lie in the maximal ideal")
    # direct residual in g
    direct_terms: dict = {}
    for (x, r, h), c in S.terms.items():
        for t, v in {t: v for (s, t), v in B.lie.d.entries.items() if s == x}.items():
            _add_term(direct_terms, (t, r, h), v * c, K)
        for t, v in {t: v for (s, t), v in B.delta.entries.items() if s == x}.items():
            _add_term(direct_terms, (t, r, h + 1), v * c, K)
    items = list(S.terms.items())
    for (x, r1, h1), c1 in items:
        for (y, r2, h2), c2 in items:
            rr = ring.mul_labels(r1, r2)
            if not rr:
                continue
            for t, v in B.lie.bracket_labels(x, y).items():
                for r, rc in rr.items():
                    _add_term(direct_terms, (t, r, h1 + h2), Fraction(1, 2) * v * c1 * c2 * rc, K)
    direct = HbarSeries(direct_terms)
    # ambient route
    bv, _ = bv_from_bi_dg_lie(B, max_len)
    S_words = HbarSeries({((x,), r, h): c for (x, r, h), c in S.terms.items()})
    ambient = qme_residual(bv, ring, S_words, K)
    ambient_len1 = all(len(w) == 1 for (w, _, _) in ambient.terms)
    ambient_match = ambient == HbarSeries({((x,), r, h): c for (x, r, h), c in direct.terms.items()})
    # Maurer-Cartan route over g[[hbar]]
    gh = hbar_extended_dg_lie(B, K)
    S_mc = HbarSeries({(f"{x}@h{h}", r, 0): c for (x, r, h), c in S.terms.items()})
    mc_res = emce_residual(gh, ring, S_mc)
    mc_match = mc_res == HbarSeries({(f"{x}@h{h}", r, 0): c for (x, r, h), c in direct.terms.items()})
    return {
        "residual": direct,
        "ambient_restricts": ambient_len1,
        "ambient_match": ambient_match,
        "mc_match": mc_match,
        "is_solution": direct.is_zero(),
        "ok": ambient_len1 and ambient_match and mc_match,
    }


def _add_term(acc: dict, key, coeff: Fraction, cutoff: int) -> None:
    if key[2] >= cutoff or not coeff:
        return
    cur = acc.get(key, ZERO) + coeff
    if cur:
        acc[key] = cur
    else:
        acc.pop(key, None)


def corollary_bidg_check(B: BiDgLieData, ring: ArtinLocalAlgebra, S: HbarSeries,
                         hbar_cutoff: int = 3) -> dict:
    """Representability of the length-one master equation over Spec R, checked
    through the hbar-extended dg-Lie algebra."""
    gh = hbar_extended_dg_lie(B, hbar_cutoff)
    S_mc = HbarSeries({(f"{x}@h{h}", r, 0): c for (x, r, h), c in S.terms.items()})
    report = quillen_bijection_check(gh, ring, S_mc)
    report["qm"] = qm_bidg_residual(B, ring, S, hbar_cutoff)["ok"]
    report["ok"] = report["ok"] and report["qm"]
    return report


__all__.append("corollary_bidg_check")
