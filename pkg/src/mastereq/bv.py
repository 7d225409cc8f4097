"""dg-BV and BV-infinity algebras: operator orders, antibrackets, the QME.

A dg-BV algebra is a truncated word algebra with a square-zero derivation d
of degree +1 and a square-zero second-order operator Delta of degree -1 that
kills 1 and graded-commutes with d; [Delta, d] is the graded commutator, so
"commutes" means the anticommutator of the two odd operators vanishes.

A BV-infinity algebra carries operators Delta_n of order <= n and degree
3 - 2n, assembled into dhat = sum_n hbar^{n-1} Delta_n of total degree one
(|hbar| = 2), with dhat(1) = 0 and dhat^2 = 0 modulo the hbar cutoff.

Everything QME-related reduces to iterated graded commutators of dhat with
left multiplications: with K_0 = dhat and K_j = [K_{j-1}, L_S],

    e^{-S/hbar} dhat e^{S/hbar} = sum_j (1/j!) hbar^{-j} K_j   (as operators),
    residual = sum_{j>=1} (1/j!) hbar^{-(j-1)} K_j(1),

which is the source of both QME forms and of the conjugation identity check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .artin import ArtinLocalAlgebra, TRIVIAL_RING
from .diagnostics import CheckResult, PreconditionError, StructureError
from .linalg import solve_linear
from .operators import Operator, operator_order_check
from .series import HbarSeries, SeriesContext
from .words import TruncationOverflow, Word, WordAlgebra, vec_add_into

__all__ = [
    "BVAlgebra",
    "BVInftyAlgebra",
    "antibracket",
    "derived_bracket",
    "derived_brackets_linfty_check",
    "qme_residual",
    "bvinfty_qme_residual",
    "qme_exp_check",
    "conjugation_identity_check",
    "qme_solve_perturbative",
    "QMESolveResult",
]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class BVAlgebra:
    def __init__(self, algebra: WordAlgebra, d: Operator, delta: Operator, name: str = "V"):
        self.algebra = algebra
        self.d = d
        self.delta = delta
        self.name = name
        self._certificates: list[CheckResult] | None = None

    def certify(self) -> list[CheckResult]:
        """All defining identities, each as its own certificate."""
        if self._certificates is not None:
            return self._certificates
        A = self.algebra
        out: list[CheckResult] = []
        bound = {"word_length": A.max_len}
        out.append(CheckResult("d(1)=0", not self.d.entries.get((), {}), bound=bound))
        out.append(CheckResult("delta(1)=0", not self.delta.entries.get((), {}), bound=bound))
        sq_d = self.d.compose(self.d)
        sq_d.name = "d-squared"
        out.append(sq_d.is_zero_on_defined())
        sq_delta = self.delta.compose(self.delta)
        sq_delta.name = "delta-squared"
        out.append(sq_delta.is_zero_on_defined())
        anti = self.delta.graded_commutator(self.d)
        anti.name = "[delta,d]"
        out.append(anti.is_zero_on_defined())
        out.append(operator_order_check(A, self.d, 1, name="d order<=1"))
        out.append(operator_order_check(A, self.delta, 2, name="delta order<=2"))
        out.append(self._augmentation_check())
        self._certificates = out
        return out

    def _augmentation_check(self) -> CheckResult:
        for op, label in ((self.d, "d"), (self.delta, "delta")):
            for w, img in op.entries.items():
                if img.get((), ZERO):
                    return CheckResult("augmentation-compatibility", False,
                                       witness={"operator": label, "word": self.algebra.label(w)})
        return CheckResult("augmentation-compatibility", True)

    def is_certified(self) -> bool:
        return all(self.certify())

    def as_bvinfty(self, hbar_cutoff: int = 3) -> "BVInftyAlgebra":
        if not hasattr(self, "_bvinfty_cache"):
            self._bvinfty_cache = {}
        if hbar_cutoff not in self._bvinfty_cache:
            self._bvinfty_cache[hbar_cutoff] = BVInftyAlgebra(
                self.algebra, {1: self.d, 2: self.delta}, hbar_cutoff, name=self.name)
        return self._bvinfty_cache[hbar_cutoff]

    def __repr__(self):
        return f"BVAlgebra({self.name}, words={len(self.algebra.words)})"


class BVInftyAlgebra:
    def __init__(self, algebra: WordAlgebra, operators: Mapping[int, Operator],
                 hbar_cutoff: int = 3, name: str = "V"):
        self.algebra = algebra
        self.operators = {int(n): op for n, op in operators.items() if op.entries}
        self.hbar_cutoff = int(hbar_cutoff)
        self.name = name
        self._certificates: list[CheckResult] | None = None

    def context(self, ring: ArtinLocalAlgebra = TRIVIAL_RING) -> SeriesContext:
        return SeriesContext(self.algebra, ring, self.hbar_cutoff)

    def dhat(self, s: HbarSeries, ctx: SeriesContext | None = None) -> HbarSeries:
        """sum_n hbar^{n-1} Delta_n, applied ring- and hbar-linearly."""
        ctx = ctx or self.context()
        out = HbarSeries()
        for n, op in sorted(self.operators.items()):
            out = out.add(ctx.apply_word_operator(op, s, hbar_shift=n - 1))
        return out

    def dhat_word(self, w: Word) -> HbarSeries:
        return self.dhat(HbarSeries({(w, "1", 0): ONE}))

    def certify(self) -> list[CheckResult]:
        if self._certificates is not None:
            return self._certificates
        A = self.algebra
        out: list[CheckResult] = []
        bound = {"word_length": A.max_len, "hbar_cutoff": self.hbar_cutoff}
        for n, op in sorted(self.operators.items()):
            expected = 3 - 2 * n
            out.append(CheckResult(f"degree(Delta_{n})={expected}", op.degree == expected, bound=bound))
            out.append(operator_order_check(A, op, n, name=f"Delta_{n} order<={n}"))
        unit_ok = all(not op.entries.get((), {}) for op in self.operators.values())
        out.append(CheckResult("dhat(1)=0", unit_ok, bound=bound))
        square_ok, witness = True, None
        skipped: list[str] = []
        common = set(A.words)
        for op in self.operators.values():
            common &= op.defined
        for w in sorted(A.words, key=lambda u: (len(u), u)):
            if w not in common:
                skipped.append(A.label(w))
                continue
            try:
                val = self.dhat(self.dhat_word(w))
            except TruncationOverflow:
                skipped.append(A.label(w))
                continue
            if not val.is_zero():
                square_ok, witness = False, {"word": A.label(w)}
                break
        out.append(CheckResult("dhat-squared", square_ok, witness=witness,
                               bound=dict(bound, skipped=skipped)))
        aug_ok = all(not img.get((), ZERO) for op in self.operators.values()
                     for img in op.entries.values())
        out.append(CheckResult("augmentation-compatibility", aug_ok, bound=bound))
        self._certificates = out
        return out

    def is_certified(self) -> bool:
        return all(self.certify())

    def __repr__(self):
        return f"BVInftyAlgebra({self.name}, operators={sorted(self.operators)}, K={self.hbar_cutoff})"


# -- brackets -----------------------------------------------------------------


def antibracket(bv: BVAlgebra, a: Mapping[Word, Fraction] | Word, b: Mapping[Word, Fraction] | Word) -> dict[Word, Fraction]:
    """{a,b} = (-1)^{|a|} (Delta(ab) - (Delta a) b - (-1)^{|a|} a (Delta b)).

    Arguments are homogeneous words or word vectors; the result measures the
    failure of Delta to be a derivation and has degree |a| + |b| - 1.
    """
    A = bv.algebra
    va = {a: ONE} if isinstance(a, tuple) else dict(a)
    vb = {b: ONE} if isinstance(b, tuple) else dict(b)
    deg_a = _homogeneous_degree(A, va)
    sa = -ONE if deg_a % 2 else ONE
    ab = A.mul(va, vb)
    t1 = bv.delta.apply(ab)
    t2 = A.mul(bv.delta.apply(va), vb)
    t3 = A.mul(va, bv.delta.apply(vb))
    out: dict[Word, Fraction] = {}
    for w, c in t1.items():
        vec_add_into(out, w, sa * c)
    for w, c in t2.items():
        vec_add_into(out, w, -sa * c)
    for w, c in t3.items():
        vec_add_into(out, w, -c)
    return out


def _homogeneous_degree(A: WordAlgebra, vec: Mapping[Word, Fraction]) -> int:
    degs = {A.degree(w) for w, c in vec.items() if c}
    if len(degs) > 1:
        raise PreconditionError(f"argument is not homogeneous: degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def _commutator_chain(bvi: BVInftyAlgebra, ctx: SeriesContext, args: Sequence[HbarSeries],
                      arg_degrees: Sequence[int], x: HbarSeries) -> HbarSeries:
    """Apply [...[dhat, L_{args[0]}], ..., L_{args[-1]}] to x, graded signs included."""

    def rec(j: int, y: HbarSeries) -> HbarSeries:
        if j < 0:
            return bvi.dhat(y, ctx)
        v = args[j]
        deg_k = 1 + sum(arg_degrees[:j])
        sign = -ONE if (deg_k * arg_degrees[j]) % 2 else ONE
        return rec(j - 1, ctx.mul(v, y)).sub(ctx.mul(v, rec(j - 1, y)).scale(sign))

    return rec(len(args) - 1, x)


def derived_bracket(bvi: BVInftyAlgebra, words: Sequence[Word],
                    ring: ArtinLocalAlgebra = TRIVIAL_RING) -> HbarSeries:
    """{v_1,...,v_n} = hbar^{-(n-1)} [...[dhat, L_{v_1}],...,L_{v_n}](1).

    The order bounds on the Delta_k guarantee no negative hbar powers; if one
    survives, the operator family violates its declared orders and a
    structure error is raised.
    """
    ctx = SeriesContext(bvi.algebra, ring, bvi.hbar_cutoff + len(words))
    args = [HbarSeries({(w, "1", 0): ONE}) for w in words]
    degs = [bvi.algebra.degree(w) for w in words]
    val = _commutator_chain(bvi, ctx, args, degs, ctx.unit())
    val = val.shift_hbar(-(len(words) - 1))
    low = val.min_hbar()
    if low is not None and low < 0:
        raise StructureError(
            "derived bracket has a negative hbar power; an operator exceeds its order",
            witness={"words": [bvi.algebra.label(w) for w in words], "min_power": low})
    return SeriesContext(bvi.algebra, ring, bvi.hbar_cutoff).truncate(val)


def derived_brackets_linfty_check(bvi: BVInftyAlgebra, max_arity: int = 4,
                                  deviation_samples: int = 12) -> CheckResult:
    """Certify the homotopy-Lie package carried by the derived brackets.

    Three ingredients, each exact within the truncation window: the master
    condition dhat^2 = 0 (equivalent to all generalized Jacobi identities for
    the brackets multiplied back by hbar^{n-1}); absence of negative hbar
    powers in every bracket of arity <= max_arity within the length budget;
    and the deviation identity expressing the failure of the n-th bracket to
    be a multiderivation through the (n+1)-st:

        {v,..,ab} = hbar {v,..,a,b} + (-1)^{(|K|+|a|)|b|} b {v,..,a}
                    + (-1)^{|K||a|} a {v,..,b},   |K| = 1 + sum |v_i|.
    """
    A = bvi.algebra
    square = next(r for r in bvi.certify() if r.name == "dhat-squared")
    if not square.ok:
        return CheckResult("derived-brackets", False, witness=square.witness)
    raise_bound = max((op.max_raise for op in bvi.operators.values()), default=0)
    budget = A.max_len - max(0, raise_bound)
    letters = [w for w in A.augmentation_ideal_words() if len(w) <= budget]
    checked = 0
    for n in range(1, max_arity + 1):
        for vs in itertools.combinations_with_replacement(letters, n):
            if sum(len(v) for v in vs) > budget:
                continue
            checked += 1
            try:
                derived_bracket(bvi, list(vs))
            except StructureError as err:
                return CheckResult("derived-brackets", False, witness=err.witness)
    # deviation identity on the first few in-budget triples (v-tuple, a, b)
    ctx = SeriesContext(A, TRIVIAL_RING, bvi.hbar_cutoff)
    sampled = 0
    for n in range(1, max_arity):
        for vs in itertools.combinations_with_replacement(letters, n - 1):
            for a in letters:
                for b in letters:
                    if sampled >= deviation_samples:
                        break
                    total = sum(len(v) for v in vs) + len(a) + len(b)
                    if total > budget:
                        continue
                    ab = A.mul_words(a, b)
                    lhs = HbarSeries()
                    for w, c in ab.items():
                        lhs = lhs.add(derived_bracket(bvi, list(vs) + [w]).scale(c))
                    da = A.degree(a)
                    db = A.degree(b)
                    deg_k = 1 + sum(A.degree(v) for v in vs)
                    rhs = derived_bracket(bvi, list(vs) + [a, b]).shift_hbar(1)
                    rhs = ctx.truncate(rhs)
                    s1 = -ONE if ((deg_k + da) * db) % 2 else ONE
                    s2 = -ONE if (deg_k * da) % 2 else ONE
                    rhs = rhs.add(ctx.mul(HbarSeries({(b, "1", 0): s1}),
                                          derived_bracket(bvi, list(vs) + [a])))
                    rhs = rhs.add(ctx.mul(HbarSeries({(a, "1", 0): s2}),
                                          derived_bracket(bvi, list(vs) + [b])))
                    if not lhs.sub(rhs).is_zero():
                        return CheckResult(
                            "derived-brackets", False,
                            witness={"deviation": [A.label(v) for v in vs],
                                     "a": A.label(a), "b": A.label(b)})
                    sampled += 1
    return CheckResult("derived-brackets", True,
                       bound={"word_length": A.max_len, "max_arity": max_arity,
                              "tuples": checked, "deviation_samples": sampled,
                              # the arity-2 derived bracket relates to the
                              # antibracket by this per-degree sign
                              "arity2_vs_antibracket_sign": "(-1)^|a|"})


# -- QME ----------------------------------------------------------------------


def _validate_qme_element(bvi: BVInftyAlgebra, ring: ArtinLocalAlgebra, S: HbarSeries,
                          require_degree: bool = True) -> None:
    ctx = bvi.context(ring)
    for key in S.terms:
        _, r, h = key
        if r not in ring.ideal_labels:
            raise PreconditionError("QME elements have coefficients in the maximal ideal")
        if h < 0:
            raise PreconditionError("QME elements are power series in hbar")
        if require_degree and ctx.degree(key) != 2:
            raise PreconditionError(
                f"QME elements are homogeneous of total degree 2; term {key} has degree {ctx.degree(key)}")


def qme_residual(bv: BVAlgebra, ring: ArtinLocalAlgebra, S: HbarSeries,
                 hbar_cutoff: int = 3) -> HbarSeries:
    """dS + hbar Delta S + {S,S}/2 for a dg-BV algebra, exact mod hbar cutoff."""
    bvi = bv.as_bvinfty(hbar_cutoff)
    _validate_qme_element(bvi, ring, S)
    ctx = SeriesContext(bv.algebra, ring, hbar_cutoff)
    dS = ctx.apply_word_operator(bv.d, S)
    deltaS = ctx.apply_word_operator(bv.delta, S, hbar_shift=1)
    delta_plain = ctx.apply_word_operator(bv.delta, S)
    ss = ctx.apply_word_operator(bv.delta, ctx.mul(S, S))
    ss = ss.sub(ctx.mul(delta_plain, S)).sub(ctx.mul(S, delta_plain))
    return dS.add(deltaS).add(ss.scale(HALF))


def bvinfty_qme_residual(bvi: BVInftyAlgebra, ring: ArtinLocalAlgebra, S: HbarSeries) -> HbarSeries:
    """dhat S + {S,S}/2! + {S,S,S}/3! + ..., via iterated commutators K_j(1).

    K_j(1) carries a coefficient in m^j, so the sum stops at the nilpotency
    order of the ring.
    """
    _validate_qme_element(bvi, ring, S)
    ctx = SeriesContext(bvi.algebra, ring, bvi.hbar_cutoff + ring.nilpotency)
    out = HbarSeries()
    for j in range(1, ring.nilpotency + 1):
        val = _k_apply(bvi, ctx, S, j, ctx.unit())
        if val.is_zero():
            continue
        out = out.add(val.shift_hbar(-(j - 1)).scale(Fraction(1, _factorial(j))))
    return bvi.context(ring).truncate(out)


def _k_apply(bvi: BVInftyAlgebra, ctx: SeriesContext, S: HbarSeries, j: int,
             x: HbarSeries) -> HbarSeries:
    """K_j applied to x, with K_0 = dhat and K_j = [K_{j-1}, L_S]; S is even."""
    if j == 0:
        return bvi.dhat(x, ctx)
    return _k_apply(bvi, ctx, S, j - 1, ctx.mul(S, x)).sub(
        ctx.mul(S, _k_apply(bvi, ctx, S, j - 1, x)))


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def qme_exp_check(V, ring: ArtinLocalAlgebra, S: HbarSeries, hbar_cutoff: int | None = None) -> dict:
    """dhat e^{S/hbar} = 0  <=>  QME residual = 0, both sides computed independently.

    Refuses uncertified structures: on a corrupted algebra the equivalence is
    meaningless, so failure of the axioms is reported as a precondition
    violation rather than folded into the boolean.
    """
    bvi = V.as_bvinfty(hbar_cutoff or 3) if isinstance(V, BVAlgebra) else V
    if not bvi.is_certified():
        bad = [r.name for r in bvi.certify() if not r.ok]
        raise PreconditionError(f"structure is not a certified BV algebra: {bad}")
    _validate_qme_element(bvi, ring, S)
    M = ring.nilpotency
    ctx = SeriesContext(bvi.algebra, ring, bvi.hbar_cutoff)
    wide = SeriesContext(bvi.algebra, ring, bvi.hbar_cutoff + M)
    exp_s = wide.exp_over_hbar(S)
    d_exp = ctx.truncate(bvi.dhat(exp_s, wide))
    exp_zero = d_exp.is_zero()
    if isinstance(V, BVAlgebra):
        residual = qme_residual(V, ring, S, bvi.hbar_cutoff)
    else:
        residual = bvinfty_qme_residual(bvi, ring, S)
    residual_zero = residual.is_zero()
    return {
        "exp_zero": exp_zero,
        "residual_zero": residual_zero,
        "equivalence": exp_zero == residual_zero,
        "ok": exp_zero == residual_zero,
        "bound": {"word_length": bvi.algebra.max_len, "hbar_cutoff": bvi.hbar_cutoff,
                  "nilpotency": M},
    }


def conjugation_identity_check(V, ring: ArtinLocalAlgebra, S: HbarSeries,
                               hbar_cutoff: int | None = None,
                               test_words: Sequence[Word] | None = None) -> CheckResult:
    """Exact operator identity, applied to basis words:

    e^{-S/hbar} dhat e^{S/hbar}
        = dhat + {S,-} + {S,S,-}/2! + ... + (1/hbar)(dhat S + {S,S}/2! + ...),

    with all brackets hbar-multilinear derived brackets.  Both sides are
    computed independently: the left by multiplying out exponentials, the
    right from iterated commutators K_j.
    """
    bvi = V.as_bvinfty(hbar_cutoff or 3) if isinstance(V, BVAlgebra) else V
    _validate_qme_element(bvi, ring, S)
    M = ring.nilpotency
    K = bvi.hbar_cutoff
    wide = SeriesContext(bvi.algebra, ring, K + 2 * M + 2)
    narrow = bvi.context(ring)
    exp_plus = wide.exp_over_hbar(S)
    exp_minus = wide.exp_over_hbar(S.scale(-ONE))
    # K_j(1), j >= 1, assembled into the residual sum_{j>=1} hbar^{-(j-1)} K_j(1)/j!
    k_of_one: list[HbarSeries] = []
    for j in range(1, M + 1):
        k_of_one.append(_k_apply(bvi, wide, S, j, wide.unit()))
    residual = HbarSeries()
    for idx, val in enumerate(k_of_one, start=1):
        residual = residual.add(val.shift_hbar(-(idx - 1)).scale(Fraction(1, _factorial(idx))))

    words = test_words if test_words is not None else bvi.algebra.words
    tested, skipped = 0, []
    for w in words:
        try:
            x = HbarSeries({(w, "1", 0): ONE})
            lhs = wide.mul(exp_minus, bvi.dhat(wide.mul(exp_plus, x), wide))
            deg_w = bvi.algebra.degree(w)
            sw = -ONE if deg_w % 2 else ONE
            rhs = bvi.dhat(x, wide)
            for idx, kj1 in enumerate(k_of_one, start=1):
                term = _k_apply(bvi, wide, S, idx, x)
                term = term.sub(wide.mul(x, kj1).scale(sw))
                rhs = rhs.add(term.shift_hbar(-idx).scale(Fraction(1, _factorial(idx))))
            rhs = rhs.add(wide.mul(residual, x).shift_hbar(-1))
            diff = narrow.truncate(lhs.sub(rhs))
            if not diff.is_zero():
                return CheckResult("conjugation-identity", False,
                                   witness={"word": bvi.algebra.label(w)},
                                   bound={"hbar_cutoff": K})
            tested += 1
        except TruncationOverflow:
            skipped.append(bvi.algebra.label(w))
    return CheckResult("conjugation-identity", True,
                       bound={"word_length": bvi.algebra.max_len, "hbar_cutoff": K,
                              "tested": tested, "skipped": skipped})


@dataclass
class QMESolveResult:
    status: str
    element: HbarSeries | None = None
    obstruction_order: int | None = None
    obstruction: HbarSeries | None = None
    partial: HbarSeries | None = None
    bound: dict = field(default_factory=dict)


def qme_solve_perturbative(V, ring: ArtinLocalAlgebra, seed: HbarSeries,
                           hbar_cutoff: int | None = None) -> QMESolveResult:
    """Order-by-order lift of a first-order QME solution along the m-adic
    filtration, with dhat = d + hbar Delta (+ higher) as the linear part.

    The linear solve couples the hbar components through the banded system
    sum_n Delta_n u_{j-(n-1)} = -rho_j; representatives pick the earliest
    coordinates in canonical word-then-power order.
    """
    bvi = V.as_bvinfty(hbar_cutoff or 3) if isinstance(V, BVAlgebra) else V
    if not ring.adapted:
        raise PreconditionError("ring basis is not adapted to the m-adic filtration")
    _validate_qme_element(bvi, ring, seed)
    M = ring.nilpotency
    K = bvi.hbar_cutoff
    ctx = bvi.context(ring)
    for (w, r, h) in seed.terms:
        if ring.order(r) != 1:
            raise PreconditionError("seed must live in m/m^2")
    for r in ring.ideal_labels:
        if ring.order(r) != 1:
            continue
        layer = HbarSeries({(w, rr, h): c for (w, rr, h), c in seed.terms.items() if rr == r})
        if not bvi.dhat(layer, ctx).is_zero():
            raise PreconditionError("seed is not closed under the linear part dhat")

    A = bvi.algebra
    unknown_keys = [(w, j) for j in range(K) for w in A.words
                    if A.degree(w) + 2 * j == 2 and all(w in op.defined for op in bvi.operators.values())]
    equation_keys = [(w, j) for j in range(K) for w in A.words if A.degree(w) + 2 * j == 3]
    rows = []
    for (u, i) in equation_keys:
        row = []
        for (w, j) in unknown_keys:
            coeff = ZERO
            n = i - j + 1
            op = bvi.operators.get(n)
            if op is not None and n >= 1:
                coeff = op.entries.get(w, {}).get(u, ZERO)
            row.append(coeff)
        rows.append(row)

    partial = seed
    for k in range(2, M):
        rho = bvinfty_qme_residual(bvi, ring, partial)
        rho_k = rho.ring_project(ring, k)
        if rho_k.is_zero():
            continue
        new_terms: dict = {}
        for r in ring.ideal_labels:
            if ring.order(r) != k:
                continue
            b = {(w, h): c for (w, rr, h), c in rho_k.terms.items() if rr == r}
            if not b:
                continue
            rhs = [-b.get(key, ZERO) for key in equation_keys]
            sol = solve_linear(rows, rhs)
            if sol is None:
                return QMESolveResult(status="obstructed", obstruction_order=k,
                                      obstruction=rho_k, partial=partial,
                                      bound={"nilpotency": M, "hbar_cutoff": K})
            for (w, j), c in zip(unknown_keys, sol):
                if c:
                    new_terms[(w, r, j)] = c
        partial = partial.add(HbarSeries(new_terms))
    report = qme_exp_check(V, ring, partial, hbar_cutoff)
    if not (report["exp_zero"] and report["residual_zero"]):
        raise StructureError("perturbative QME lift failed validation", witness=report)
    return QMESolveResult(status="solved", element=partial,
                          bound={"nilpotency": M, "hbar_cutoff": K})
