"""dg-Lie and L-infinity algebras, Maurer-Cartan theory, representability checks.

An L-infinity structure on g is stored as structure constants of the brackets
l_n : S^n(g[1]) -> g[1] of degree one, equivalently the corestriction of a
square-zero degree-one coderivation D on the truncated coalgebra S(g[1]).
A dg-Lie algebra embeds with l_1 = d and l_2(x, y) = (-1)^{|x|} [x, y] for
x, y in g[1], all higher brackets zero.

Over a local parameter ring (R, m) with m^M = 0 the completed tensor g âŠ— m is
plain g (x) m, and the extended Maurer-Cartan residual sum_n l_n(S,..,S)/n! is
a finite sum.  Elements of degree one in g (x) m are even in g[1] (x) m, so all
powers are sign-free and the residual is the corestriction applied to
exp(S) - 1 computed in the word algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .artin import ArtinLocalAlgebra
from .coalgebra import Coderivation, check_codifferential, conv_exp
from .diagnostics import CheckResult, PreconditionError, StructureError
from .graded import GradedLinearMap, GradedVectorSpace, as_scalar
from .linalg import solve_linear
from .series import HbarSeries, SeriesContext
from .words import SymmetricWordAlgebra, Word, vec_add_into

__all__ = [
    "DgLieAlgebra",
    "LInftyAlgebra",
    "MaurerCartanElement",
    "mc_element",
    "emce_residual",
    "mc_is_solution",
    "quillen_bijection_check",
    "chuang_lazarev_residual",
    "chuang_lazarev_morphism_defect",
    "mc_solve_perturbative",
    "MCSolveResult",
    "coderivation_dg_lie",
    "deformed_bracket_check",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class DgLieAlgebra:
    """Graded Lie algebra with a degree-one differential.

    The bracket table is completed by graded antisymmetry
    [y, x] = -(-1)^{|x||y|} [x, y]; for even x the diagonal [x, x] must vanish.
    """

    def __init__(self, space: GradedVectorSpace, d, bracket: Mapping, name: str = "g", validate: bool = True):
        self.space = space
        self.name = name
        if isinstance(d, GradedLinearMap):
            self.d = d
        else:
            self.d = GradedLinearMap(space, space, 1, {(s, t): c for (s, t), c in (d or {}).items()})
        table: dict[tuple[str, str], dict[str, Fraction]] = {}
        for (a, b), val in (bracket or {}).items():
            clean = {c: as_scalar(v) for c, v in val.items() if as_scalar(v) != 0}
            table[(a, b)] = clean
        for (a, b), val in list(table.items()):
            sign = -ONE if (space.degree(a) * space.degree(b)) % 2 == 0 else ONE
            flipped = {c: sign * v for c, v in val.items()}
            if (b, a) in table and (b, a) not in ((a, b),):
                if table[(b, a)] != flipped and (b, a) != (a, b):
                    raise StructureError(f"{name}: bracket table not graded antisymmetric", witness=(a, b))
            elif (b, a) != (a, b):
                table[(b, a)] = flipped
            else:
                # diagonal: for even generators [x, x] is forced to vanish
                if space.degree(a) % 2 == 0 and val:
                    raise StructureError(f"{name}: [x,x] must vanish for even x", witness=a)
        self.bracket = {k: v for k, v in table.items() if v}
        if validate:
            report = self.axiom_report()
            bad = [r for r in report if not r.ok]
            if bad:
                raise StructureError(f"{name}: {bad[0].name} fails", witness=bad[0].witness)

    def bracket_labels(self, a: str, b: str) -> dict[str, Fraction]:
        return self.bracket.get((a, b), {})

    def bracket_vec(self, v1: Mapping[str, Fraction], v2: Mapping[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for a, c1 in v1.items():
            for b, c2 in v2.items():
                for t, s in self.bracket_labels(a, b).items():
                    vec_add_into(out, t, s * c1 * c2)
        return out

    def axiom_report(self) -> list[CheckResult]:
        space = self.space
        labels = space.labels
        out = []
        # d^2 = 0
        dd = self.d.compose(self.d)
        out.append(CheckResult("d-squared", dd.is_zero(),
                               witness=None if dd.is_zero() else sorted(dd.entries)[0]))
        # Leibniz: d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
        leib_ok, leib_wit = True, None
        for x in labels:
            for y in labels:
                left: dict[str, Fraction] = {}
                for t, c in self.bracket_labels(x, y).items():
                    for u, v in self.d.apply_label(t).coeffs.items():
                        vec_add_into(left, u, c * v)
                right: dict[str, Fraction] = {}
                for u, v in self.d.apply_label(x).coeffs.items():
                    for t, c in self.bracket_labels(u, y).items():
                        vec_add_into(right, t, c * v)
                sx = -ONE if space.degree(x) % 2 else ONE
                for u, v in self.d.apply_label(y).coeffs.items():
                    for t, c in self.bracket_labels(x, u).items():
                        vec_add_into(right, t, sx * c * v)
                for t, c in right.items():
                    vec_add_into(left, t, -c)
                if any(left.values()):
                    leib_ok, leib_wit = False, (x, y)
                    break
            if not leib_ok:
                break
        out.append(CheckResult("leibniz", leib_ok, witness=leib_wit))
        # graded Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        jac_ok, jac_wit = True, None
        for x, y, z in itertools.product(labels, repeat=3):
            lhs = self.bracket_vec({x: ONE}, self.bracket_labels(y, z))
            rhs = self.bracket_vec(self.bracket_labels(x, y), {z: ONE})
            sxy = -ONE if (space.degree(x) * space.degree(y)) % 2 else ONE
            for t, c in self.bracket_vec({y: ONE}, self.bracket_labels(x, z)).items():
                vec_add_into(rhs, t, sxy * c)
            for t, c in rhs.items():
                vec_add_into(lhs, t, -c)
            if any(lhs.values()):
                jac_ok, jac_wit = False, (x, y, z)
                break
        out.append(CheckResult("jacobi", jac_ok, witness=jac_wit))
        return out

    def to_linfty(self) -> "LInftyAlgebra":
        shifted = self.space.shift(1)
        brackets: dict[int, dict[Word, dict[str, Fraction]]] = {1: {}, 2: {}}
        for (s, t), c in self.d.entries.items():
            brackets[1].setdefault((s,), {})[t] = c
        helper = SymmetricWordAlgebra(shifted, 2)
        seen = set()
        for (a, b) in self.bracket:
            word, sign = helper.normalize([a, b])
            if word is None or word in seen:
                continue
            seen.add(word)
            x = word[0]
            sx = -ONE if shifted.degree(x) % 2 else ONE
            val = {t: sx * sign0 for t, sign0 in self.bracket_labels(word[0], word[1]).items()}
            # `sign` is 1 here since word is already canonical from (a, b) sorted
            if val:
                brackets[2][word] = val
        return LInftyAlgebra(self.space, brackets, name=self.name)

    def __repr__(self):
        return f"DgLieAlgebra({self.name}, dim={self.space.dim})"


class LInftyAlgebra:
    """L-infinity algebra as bracket structure constants on S(g[1])."""

    def __init__(self, space: GradedVectorSpace, brackets: Mapping[int, Mapping[Word, Mapping[str, object]]],
                 name: str = "g", n_max: int | None = None):
        self.space = space
        self.shifted = space.shift(1)
        self.name = name
        self.brackets: dict[int, dict[Word, dict[str, Fraction]]] = {}
        for n, table in brackets.items():
            clean_table: dict[Word, dict[str, Fraction]] = {}
            for w, val in table.items():
                if len(w) != n:
                    raise StructureError(f"bracket arity {n} given a word of length {len(w)}")
                clean = {t: as_scalar(c) for t, c in val.items() if as_scalar(c) != 0}
                if clean:
                    clean_table[tuple(w)] = clean
            if clean_table:
                self.brackets[n] = clean_table
        self.n_max = n_max or max(self.brackets, default=1)
        self._algebras: dict[int, SymmetricWordAlgebra] = {}
        self._coderivations: dict[int, Coderivation] = {}

    def word_algebra(self, max_len: int) -> SymmetricWordAlgebra:
        if max_len not in self._algebras:
            self._algebras[max_len] = SymmetricWordAlgebra(self.shifted, max_len)
        return self._algebras[max_len]

    def codifferential(self, max_len: int) -> Coderivation:
        if max_len not in self._coderivations:
            algebra = self.word_algebra(max_len)
            cor: dict[Word, dict[str, Fraction]] = {}
            for n, table in self.brackets.items():
                if n > max_len:
                    continue
                for w, val in table.items():
                    cor[w] = dict(val)
            self._coderivations[max_len] = Coderivation(algebra, 1, cor)
        return self._coderivations[max_len]

    def corestriction_value(self, word: Word) -> dict[str, Fraction]:
        return self.brackets.get(len(word), {}).get(word, {})

    def validate(self, max_len: int = 4) -> CheckResult:
        return check_codifferential(self.codifferential(max_len), name=f"{self.name}: D-squared")

    def __repr__(self):
        return f"LInftyAlgebra({self.name}, dim={self.space.dim}, arities={sorted(self.brackets)})"


def _as_linfty(g) -> LInftyAlgebra:
    return g.to_linfty() if isinstance(g, DgLieAlgebra) else g


class MaurerCartanElement(HbarSeries):
    """Degree-one element of g (x) m, keyed by (label, ring label, 0)."""

    def __init__(self, g, ring: ArtinLocalAlgebra, terms: Mapping):
        super().__init__(terms)
        space = _as_linfty(g).space
        for (x, r, h) in self.terms:
            if h != 0:
                raise PreconditionError("Maurer-Cartan elements carry no hbar powers")
            if space.degree(x) != 1:
                raise PreconditionError(f"component on {x!r} of degree {space.degree(x)}, expected 1")
            if r not in ring.ideal_labels:
                raise PreconditionError(f"coefficient {r!r} is not in the maximal ideal")


def mc_element(g, ring: ArtinLocalAlgebra, terms: Mapping[tuple[str, str], object]) -> MaurerCartanElement:
    return MaurerCartanElement(g, ring, {(x, r, 0): c for (x, r), c in terms.items()})


def emce_residual(g, ring: ArtinLocalAlgebra, S: HbarSeries, max_len: int | None = None) -> HbarSeries:
    """sum_{n>=1} l_n(S,...,S)/n! in g (x) m; finite since m is nilpotent."""
    gl = _as_linfty(g)
    for (x, r, h) in S.terms:
        if gl.space.degree(x) + 2 * h != 1:
            raise PreconditionError(
                f"Maurer-Cartan elements have total degree 1; component on {x!r} has "
                f"degree {gl.space.degree(x) + 2 * h}")
        if r not in ring.ideal_labels:
            raise PreconditionError(f"coefficient {r!r} is not in the maximal ideal")
    M = ring.nilpotency
    N = max_len or max(M - 1, 1)
    algebra = gl.word_algebra(N)
    ctx = SeriesContext(algebra, ring)
    S_words = HbarSeries({((x,), r, h): c for (x, r, h), c in S.terms.items()})
    acc = HbarSeries()
    term = S_words
    n = 1
    while not term.is_zero():
        acc = acc.add(term)
        n += 1
        term = ctx.mul(term, S_words).scale(Fraction(1, n))
    out: dict = {}
    for (w, r, h), c in acc.terms.items():
        for t, v in gl.corestriction_value(w).items():
            key = (t, r, h)
            val = out.get(key, ZERO) + v * c
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return HbarSeries(out)


def mc_is_solution(g, ring: ArtinLocalAlgebra, S: HbarSeries, max_len: int | None = None) -> bool:
    return emce_residual(g, ring, S, max_len).is_zero()


def _exp_map_from_element(gl: LInftyAlgebra, ring: ArtinLocalAlgebra, S: HbarSeries,
                          algebra: SymmetricWordAlgebra):
    """S in (g (x) m)^1 as a map R* -> S(g[1]), then its convolution exponential."""
    dual = ring.dual_coalgebra()
    ctx = SeriesContext(algebra)
    by_label: dict[str, dict] = {}
    for (x, r, h), c in S.terms.items():
        if h != 0:
            raise PreconditionError("classical Maurer-Cartan elements carry no hbar powers")
        key = ((x,), "1", 0)
        bucket = by_label.setdefault(r, {})
        bucket[key] = bucket.get(key, ZERO) + c
    f = {r: HbarSeries(terms) for r, terms in by_label.items()}
    return dual, ctx, conv_exp(dual, ctx, f)


def _dual_morphism_check(dual, algebra: SymmetricWordAlgebra, F: Mapping) -> bool:
    """Coproduct compatibility of a map R* -> S(g[1]) with degree-zero values."""
    def word_vec(key) -> dict[Word, Fraction]:
        series = F.get(key)
        if series is None:
            return {}
        return {k[0]: c for k, c in series.terms.items()}

    for key in dual.basis_keys:
        lhs: dict[tuple[Word, Word], Fraction] = {}
        for u, c in word_vec(key).items():
            for l, r, s in algebra.coproduct(u):
                vec_add_into(lhs, (l, r), c * s)
        rhs: dict[tuple[Word, Word], Fraction] = {}
        for a, b, s in dual.coproduct(key):
            for u1, c1 in word_vec(a).items():
                for u2, c2 in word_vec(b).items():
                    vec_add_into(rhs, (u1, u2), s * c1 * c2)
        for k2, c in rhs.items():
            vec_add_into(lhs, k2, -c)
        if any(lhs.values()):
            return False
    return True


def quillen_bijection_check(g, ring: ArtinLocalAlgebra, S: HbarSeries,
                            max_len: int | None = None, corrupt=None) -> dict:
    """Representability instance check over Spec R.

    Builds exp(S): R* -> S(g[1]) by the convolution exponential and verifies
    independently that (D ∘ exp(S) = 0) <=> (the Maurer-Cartan residual of S
    vanishes), and that exp(S) is a coaugmented coalgebra morphism.  The
    tuple of booleans is returned so corrupted instances can be inspected.
    """
    gl = _as_linfty(g)
    M = ring.nilpotency
    N = max_len or M
    if N < M:
        raise PreconditionError(
            f"word truncation {N} is smaller than the nilpotency order {M}; "
            "exp(S) would be cut off, refusing")
    algebra = gl.word_algebra(N)
    D = gl.codifferential(N)
    dual, ctx, F = _exp_map_from_element(gl, ring, S, algebra)
    if corrupt is not None:
        key, word, delta = corrupt
        bumped = F.get(key, HbarSeries()).add(HbarSeries({(tuple(word), "1", 0): delta}))
        F[key] = bumped
    morphism_ok = _dual_morphism_check(dual, algebra, F)
    d_exp_zero = True
    for key in dual.basis_keys:
        series = F.get(key)
        if series is None:
            continue
        vec = {k[0]: c for k, c in series.terms.items()}
        if any(D.apply(vec).values()):
            d_exp_zero = False
            break
    residual_zero = emce_residual(gl, ring, S).is_zero()
    equivalence = d_exp_zero == residual_zero
    return {
        "morphism": morphism_ok,
        "d_exp_zero": d_exp_zero,
        "residual_zero": residual_zero,
        "equivalence": equivalence,
        "ok": morphism_ok and equivalence,
        "bound": {"word_length": N, "nilpotency": M},
    }


def _corestriction_map_series(S: Mapping[Word, Mapping[str, Fraction]]):
    return {w: HbarSeries({((t,), "1", 0): c for t, c in val.items()}) for w, val in S.items()}


def chuang_lazarev_residual(target, source, S: Mapping[Word, Mapping[str, object]],
                            max_len: int = 4) -> dict[Word, dict[str, Fraction]]:
    """DS + [S,S]/2 in the convolution algebra hom(S(g'[1]), g).

    Computed as the corestriction of the intertwining defect of the coalgebra
    morphism extending S: the target codifferential applied to exp(S), minus
    S applied to the source codifferential.  Zero exactly when S corestricts
    an L-infinity morphism source -> target.
    """
    tl, sl = _as_linfty(target), _as_linfty(source)
    Wsrc = sl.word_algebra(max_len)
    Dsrc = sl.codifferential(max_len)
    Wt = tl.word_algebra(max_len)
    S_clean: dict[Word, dict[str, Fraction]] = {}
    for w, val in S.items():
        clean = {t: as_scalar(c) for t, c in val.items() if as_scalar(c) != 0}
        for t in clean:
            if tl.shifted.degree(t) != Wsrc.degree(tuple(w)):
                raise PreconditionError(f"component {w} -> {t} is not a degree-one element of hom")
        if clean:
            S_clean[tuple(w)] = clean
    ctx = SeriesContext(Wt)
    F = conv_exp(Wsrc, ctx, _corestriction_map_series(S_clean))
    residual: dict[Word, dict[str, Fraction]] = {}
    for w in Wsrc.words:
        if not w:
            continue
        acc: dict[str, Fraction] = {}
        Fw = F.get(w)
        if Fw is not None:
            for (u, _, _), c in Fw.terms.items():
                for t, v in tl.corestriction_value(u).items():
                    vec_add_into(acc, t, v * c)
        for u, c in Dsrc.expand(w).items():
            for t, v in S_clean.get(u, {}).items():
                vec_add_into(acc, t, -v * c)
        if acc:
            residual[w] = acc
    return residual


def chuang_lazarev_morphism_defect(target, source, S: Mapping[Word, Mapping[str, object]],
                                   max_len: int = 4) -> CheckResult:
    """Independent route: D_target ∘ exp(S) - exp(S) ∘ D_source on every word."""
    tl, sl = _as_linfty(target), _as_linfty(source)
    Wsrc = sl.word_algebra(max_len)
    Dsrc = sl.codifferential(max_len)
    Dt = tl.codifferential(max_len)
    S_series = _corestriction_map_series({tuple(w): {t: as_scalar(c) for t, c in val.items()}
                                          for w, val in S.items()})
    ctx = SeriesContext(tl.word_algebra(max_len))
    F = conv_exp(Wsrc, ctx, S_series)

    def f_vec(w: Word) -> dict[Word, Fraction]:
        series = F.get(w)
        return {} if series is None else {k[0]: c for k, c in series.terms.items()}

    for w in Wsrc.words:
        lhs = Dt.apply(f_vec(w))
        rhs: dict[Word, Fraction] = {}
        for u, c in Dsrc.expand(w).items():
            for v, c2 in f_vec(u).items():
                vec_add_into(rhs, v, c * c2)
        for u, c in rhs.items():
            vec_add_into(lhs, u, -c)
        if any(lhs.values()):
            return CheckResult("intertwining", False, witness={"word": Wsrc.label(w)})
    return CheckResult("intertwining", True)


@dataclass
class MCSolveResult:
    status: str  # "solved" | "obstructed"
    element: HbarSeries | None = None
    obstruction_order: int | None = None
    obstruction: HbarSeries | None = None
    partial: HbarSeries | None = None
    bound: dict = field(default_factory=dict)


def mc_solve_perturbative(g, ring: ArtinLocalAlgebra, seed: HbarSeries,
                          max_len: int | None = None) -> MCSolveResult:
    """Lift a first-order solution along the m-adic filtration.

    At each order k the linear equation l_1(s_k) = -(residual at order k) is
    solved by exact row reduction, one ring monomial at a time; the first
    unsolvable layer is reported as an obstruction together with the residual
    representative.  Any returned solution satisfies the Maurer-Cartan
    equation exactly.
    """
    gl = _as_linfty(g)
    if not ring.adapted:
        raise PreconditionError("ring basis is not adapted to the m-adic filtration")
    M = ring.nilpotency
    for (x, r, h) in seed.terms:
        if h != 0 or ring.order(r) != 1 or gl.space.degree(x) != 1:
            raise PreconditionError("seed must be a degree-one element of g (x) m/m^2")
    l1 = gl.brackets.get(1, {})
    for r in ring.ideal_labels:
        if ring.order(r) != 1:
            continue
        vec = {x: c for (x, rr, _), c in seed.terms.items() if rr == r}
        img: dict[str, Fraction] = {}
        for x, c in vec.items():
            for t, v in l1.get((x,), {}).items():
                vec_add_into(img, t, v * c)
        if any(img.values()):
            raise PreconditionError("seed is not closed under l_1")

    unknowns = [x for x in gl.space.labels if gl.space.degree(x) == 1]
    equations = [x for x in gl.space.labels if gl.space.degree(x) == 2]
    rows = [[l1.get((x,), {}).get(e, ZERO) for x in unknowns] for e in equations]

    partial = seed
    for k in range(2, M):
        rho = emce_residual(gl, ring, partial)
        rho_k = rho.ring_project(ring, k)
        if rho_k.is_zero():
            continue
        new_terms: dict = {}
        for r in ring.ideal_labels:
            if ring.order(r) != k:
                continue
            b = {x: c for (x, rr, _), c in rho_k.terms.items() if rr == r}
            if not b:
                continue
            rhs = [-b.get(e, ZERO) for e in equations]
            sol = solve_linear(rows, rhs)
            if sol is None:
                return MCSolveResult(status="obstructed", obstruction_order=k,
                                     obstruction=rho_k, partial=partial,
                                     bound={"nilpotency": M})
            for x, c in zip(unknowns, sol):
                if c:
                    new_terms[(x, r, 0)] = c
        partial = partial.add(HbarSeries(new_terms))
    final = emce_residual(gl, ring, partial)
    if not final.is_zero():
        raise StructureError("perturbative lift left a nonzero residual", witness=final)
    return MCSolveResult(status="solved", element=partial, bound={"nilpotency": M})


def coderivation_dg_lie(h, max_len: int = 3, validate: bool = True) -> tuple[DgLieAlgebra, dict]:
    """The dg-Lie algebra of based coderivations of S(h[1]), truncated.

    Basis elements are single corestriction entries word -> generator; the
    bracket is the commutator of coderivation extensions and the differential
    is the bracket with the codifferential of h.  Returns the algebra and the
    label map {(word, target): basis label}.
    """
    hl = _as_linfty(h)
    W = hl.word_algebra(max_len)
    space_entries = []
    key_of: dict[tuple[Word, str], str] = {}
    for w in W.words:
        if not w:
            continue
        for t in hl.shifted.labels:
            label = f"{W.label(w)}>{t}"
            key_of[(w, t)] = label
            space_entries.append((label, hl.shifted.degree(t) - W.degree(w)))
    space_c = GradedVectorSpace(space_entries)

    def extension(cor: Mapping[Word, Mapping[str, Fraction]], degree: int) -> Coderivation:
        return Coderivation(W, degree, cor)

    def compose_cor(f: Mapping, g_ext: Coderivation) -> dict[tuple[Word, str], Fraction]:
        out: dict[tuple[Word, str], Fraction] = {}
        for w in W.words:
            if not w:
                continue
            img = g_ext.expand(w)
            for u, c in img.items():
                val = f.get(u)
                if not val:
                    continue
                for t, v in val.items():
                    key = (w, t)
                    cur = out.get(key, ZERO) + v * c
                    if cur:
                        out[key] = cur
                    else:
                        out.pop(key, None)
        return out

    def bracket_cor(f: Mapping, deg_f: int, g: Mapping, deg_g: int) -> dict[tuple[Word, str], Fraction]:
        left = compose_cor(f, extension(g, deg_g))
        right = compose_cor(g, extension(f, deg_f))
        sign = -ONE if (deg_f * deg_g) % 2 else ONE
        out = dict(left)
        for key, c in right.items():
            cur = out.get(key, ZERO) - sign * c
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
        return out

    mu: dict[Word, dict[str, Fraction]] = {}
    for n, table in hl.brackets.items():
        if n > max_len:
            continue
        for w, val in table.items():
            mu[w] = dict(val)

    bracket_table: dict[tuple[str, str], dict[str, Fraction]] = {}
    d_entries: dict[tuple[str, str], Fraction] = {}
    basis_keys = list(key_of)
    for (w1, t1) in basis_keys:
        lab1 = key_of[(w1, t1)]
        deg1 = space_c.degree(lab1)
        # differential: [mu, e]
        dmu = bracket_cor(mu, 1, {w1: {t1: ONE}}, deg1)
        for (w, t), c in dmu.items():
            d_entries[(lab1, key_of[(w, t)])] = c
        for (w2, t2) in basis_keys:
            lab2 = key_of[(w2, t2)]
            if space_c.index(lab2) < space_c.index(lab1):
                continue
            deg2 = space_c.degree(lab2)
            br = bracket_cor({w1: {t1: ONE}}, deg1, {w2: {t2: ONE}}, deg2)
            if br:
                bracket_table[(lab1, lab2)] = {key_of[key]: c for key, c in br.items()}
    algebra = DgLieAlgebra(space_c, d_entries, bracket_table,
                           name=f"Coder({hl.name},N={max_len})", validate=validate)
    return algebra, key_of


def deformed_bracket_check(h: DgLieAlgebra, ring: ArtinLocalAlgebra,
                           S: Mapping[tuple[str, str], Mapping[str, Mapping[str, object]]]) -> dict:
    """Deforming a Lie bracket by S over R: Jacobi for [x,y] + S(x,y) versus the
    Maurer-Cartan equation for the encoded element of the coderivation algebra.

    `S[(a, b)][c]` is a ring element (dict ring label -> coefficient) in m.
    Only classical inputs (everything in degree zero, d = 0) are supported,
    matching a deformation of an honest Lie algebra.
    """
    if any(deg != 0 for _, deg in h.space.basis) or not self_d_is_zero(h):
        raise PreconditionError("deformed-bracket check expects a classical Lie algebra")
    labels = h.space.labels
    table: dict[tuple[str, str], dict[str, dict[str, Fraction]]] = {}
    for (a, b), val in S.items():
        entry = {c: {r: as_scalar(v) for r, v in relt.items() if as_scalar(v) != 0}
                 for c, relt in val.items()}
        entry = {c: relt for c, relt in entry.items() if relt}
        for c, relt in entry.items():
            for r in relt:
                if r not in ring.ideal_labels:
                    raise PreconditionError("deformation coefficients must lie in m")
        table[(a, b)] = entry
        table.setdefault((b, a), {c: {r: -v for r, v in relt.items()} for c, relt in entry.items()})

    def deformed(u: Mapping[tuple[str, str], Fraction], v: Mapping[tuple[str, str], Fraction]):
        out: dict[tuple[str, str], Fraction] = {}
        for (x, r1), c1 in u.items():
            for (y, r2), c2 in v.items():
                coeff = c1 * c2
                rr = ring.mul_labels(r1, r2)
                if not rr:
                    continue
                for t, s in h.bracket_labels(x, y).items():
                    for r, rc in rr.items():
                        vec_add_into(out, (t, r), s * coeff * rc)
                for t, relt in table.get((x, y), {}).items():
                    for rs, sv in relt.items():
                        for r, rc in ring.mul({rs: ONE}, dict(rr)).items():
                            vec_add_into(out, (t, r), sv * coeff * rc)
        return out

    jacobi_ok = True
    witness = None
    for x, y, z in itertools.combinations(labels, 3):
        acc: dict[tuple[str, str], Fraction] = {}
        for (a, b, c) in ((x, y, z), (y, z, x), (z, x, y)):
            inner = deformed({(a, "1"): ONE}, {(b, "1"): ONE})
            for key, v in deformed(inner, {(c, "1"): ONE}).items():
                vec_add_into(acc, key, v)
        if any(acc.values()):
            jacobi_ok = False
            witness = (x, y, z)
            break

    coder, key_of = coderivation_dg_lie(h, max_len=3, validate=False)
    helper = _as_linfty(h).word_algebra(2)
    terms: dict = {}
    for (a, b), entry in S.items():
        word, sign = helper.normalize([a, b])
        if word is None:
            continue
        # encode with the same shift sign as the codifferential: -S(a,b) classically
        for c, relt in entry.items():
            lab = key_of[(word, c)]
            for r, v in relt.items():
                key = (lab, r, 0)
                cur = terms.get(key, ZERO) + (-ONE) * sign * as_scalar(v)
                if cur:
                    terms[key] = cur
    sigma = HbarSeries(terms)
    mc_ok = mc_is_solution(coder, ring, sigma)
    return {
        "jacobi": jacobi_ok,
        "mc": mc_ok,
        "agree": jacobi_ok == mc_ok,
        "witness": witness,
        "ok": jacobi_ok and jacobi_ok == mc_ok,
    }


def self_d_is_zero(h: DgLieAlgebra) -> bool:
    return h.d.is_zero()
