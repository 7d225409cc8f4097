"""Coderivations, coalgebra morphisms, and the convolution algebra with exp/log.

A coderivation of the truncated symmetric coalgebra is determined by its
corestriction, a map from words of positive length to the cogenerators; the
cofree expansion is D = mult ∘ (corestriction ⊗ id) ∘ coproduct.  A
coaugmentation-respecting coalgebra morphism is likewise determined by a
degree-zero corestriction into the target cogenerators, and its extension is
the convolution exponential of that corestriction.

Convolution: for f, g from a coalgebra C to a commutative algebra A,
(f ⋆ g)(w) = mult ∘ (f ⊗ g) ∘ Δ(w), with the Koszul sign of g crossing the
first tensor factor.  The exponential and logarithm are finite sums here
because every source coalgebra in this package is conilpotent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .diagnostics import CheckResult, PreconditionError
from .graded import GradedLinearMap
from .operators import Operator
from .series import HbarSeries, SeriesContext
from .words import SymmetricWordAlgebra, Word, vec_add_into

__all__ = [
    "Coderivation",
    "check_codifferential",
    "CoalgebraMorphism",
    "conv_unit",
    "convolve",
    "conv_exp",
    "conv_log",
    "MapSeries",
]

ZERO = Fraction(0)
ONE = Fraction(1)

# A linear map out of a coalgebra, sparse over its basis keys.
MapSeries = dict


class Coderivation:
    """Coderivation of a word coalgebra, given by its corestriction.

    `corestriction` maps normalized words of length >= 1 to sparse vectors
    over the cogenerator labels.  The expansion applies the corestriction to
    every coproduct factor and multiplies the result back in, which vanishes
    on the empty word and reproduces the usual sub-multiset sum with Koszul
    signs.
    """

    def __init__(self, algebra: SymmetricWordAlgebra, degree: int,
                 corestriction: Mapping[Word, Mapping[str, object]]):
        if not algebra.symmetric:
            raise PreconditionError("coderivations are implemented on symmetric word algebras")
        self.algebra = algebra
        self.degree = int(degree)
        cor: dict[Word, dict[str, Fraction]] = {}
        for w, val in corestriction.items():
            if len(w) < 1:
                raise PreconditionError("corestriction must vanish on the empty word")
            clean = {t: Fraction(c) for t, c in val.items() if Fraction(c) != 0}
            for t in clean:
                if algebra.space.degree(t) - algebra.degree(w) != self.degree:
                    raise PreconditionError(
                        f"corestriction entry {w} -> {t} violates degree {self.degree}")
            if clean:
                cor[w] = clean
        self.corestriction = cor
        self._cache: dict[Word, dict[Word, Fraction]] = {}

    def arity_components(self) -> dict[int, dict[Word, dict[str, Fraction]]]:
        out: dict[int, dict] = {}
        for w, val in self.corestriction.items():
            out.setdefault(len(w), {})[w] = val
        return out

    @property
    def corestriction_map(self) -> GradedLinearMap:
        entries = {}
        for w, val in self.corestriction.items():
            for t, c in val.items():
                entries[(self.algebra.label(w), t)] = c
        return GradedLinearMap(self.algebra.word_space, self.algebra.space, self.degree, entries)

    def expand(self, word: Word) -> dict[Word, Fraction]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        out: dict[Word, Fraction] = {}
        for left, right, c in self.algebra.coproduct(word):
            if not left:
                continue
            val = self.corestriction.get(left)
            if not val:
                continue
            for t, v in val.items():
                for w, s in self.algebra.mul_words((t,), right).items():
                    vec_add_into(out, w, c * v * s)
        self._cache[word] = out
        return out

    apply_word = expand

    def apply(self, vec: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for w, c in vec.items():
            if not c:
                continue
            for u, v in self.expand(w).items():
                vec_add_into(out, u, v * c)
        return out

    def as_operator(self) -> Operator:
        return Operator.from_function(self.algebra, self.degree, self.expand, name="coderivation")

    def __repr__(self):
        return f"Coderivation(degree={self.degree}, arities={sorted({len(w) for w in self.corestriction})})"


def check_codifferential(D: Coderivation, words=None, name: str = "codifferential") -> CheckResult:
    """D^2 = 0 on every word of the (possibly restricted) test set."""
    if D.degree != 1:
        raise PreconditionError("a codifferential must have degree 1")
    algebra = D.algebra
    test = algebra.words if words is None else tuple(words)
    for w in test:
        square = D.apply(D.expand(w))
        if any(square.values()):
            witness = {
                "word": algebra.label(w),
                "value": {algebra.label(u): str(c) for u, c in sorted(square.items()) if c},
            }
            return CheckResult(name, False, witness=witness, bound={"word_length": algebra.max_len})
    return CheckResult(name, True, bound={"word_length": algebra.max_len})


# -- convolution --------------------------------------------------------------


def conv_unit(coalg, ctx: SeriesContext) -> MapSeries:
    """Unit of the convolution product: unit ∘ counit."""
    out: MapSeries = {}
    for key in _basis_keys(coalg):
        c = coalg.counit_key(key) if hasattr(coalg, "counit_key") else (ONE if key == coalg.unit else ZERO)
        if c:
            out[key] = ctx.unit().scale(c)
    return out


def _basis_keys(coalg):
    if hasattr(coalg, "basis_keys"):
        return coalg.basis_keys
    return coalg.words


def _counit(coalg, key) -> Fraction:
    if hasattr(coalg, "counit_key"):
        return coalg.counit_key(key)
    return ONE if key == coalg.unit else ZERO


def _value(f: MapSeries, key) -> HbarSeries:
    v = f.get(key)
    return v if v is not None else HbarSeries()


def convolve(coalg, ctx: SeriesContext, f: MapSeries, g: MapSeries, g_degree: int = 0) -> MapSeries:
    """f ⋆ g; `g_degree` is the total degree of g (hbar weight included)."""
    out: MapSeries = {}
    for key in _basis_keys(coalg):
        acc = HbarSeries()
        for k1, k2, c in coalg.coproduct(key):
            fv = f.get(k1)
            gv = g.get(k2)
            if fv is None or gv is None:
                continue
            sign = -ONE if (g_degree * coalg.degree(k1)) % 2 else ONE
            acc = acc.add(ctx.mul(fv, gv).scale(sign * c))
        if not acc.is_zero():
            out[key] = acc
    return out


def _map_is_zero(f: MapSeries) -> bool:
    return all(v.is_zero() for v in f.values())


def conv_exp(coalg, ctx: SeriesContext, f: MapSeries, max_steps: int | None = None) -> MapSeries:
    """Convolution exponential of a degree-zero map killing the coaugmentation."""
    fu = _value(f, coalg.unit)
    if not fu.is_zero():
        raise PreconditionError("conv_exp requires f(1) = 0")
    out = conv_unit(coalg, ctx)
    power: MapSeries = dict(f)
    limit = max_steps or (len(list(_basis_keys(coalg))) + 4)
    n = 1
    while not _map_is_zero(power):
        for key, val in power.items():
            if key in out:
                out[key] = out[key].add(val)
            elif not val.is_zero():
                out[key] = val
        n += 1
        if n > limit:
            raise PreconditionError("convolution exponential did not terminate")
        power = convolve(coalg, ctx, power, f)
        power = {k: v.scale(Fraction(1, n)) for k, v in power.items()}
    return out


def conv_log(coalg, ctx: SeriesContext, F: MapSeries, max_steps: int | None = None) -> MapSeries:
    """Convolution logarithm of a map with F(1) = 1."""
    unit_val = _value(F, coalg.unit).sub(ctx.unit())
    if not unit_val.is_zero():
        raise PreconditionError("conv_log requires F(1) = 1")
    e = conv_unit(coalg, ctx)
    base: MapSeries = {}
    for key in _basis_keys(coalg):
        d = _value(F, key).sub(_value(e, key))
        if not d.is_zero():
            base[key] = d
    out: MapSeries = {}
    power = dict(base)
    limit = max_steps or (len(list(_basis_keys(coalg))) + 4)
    n = 1
    while not _map_is_zero(power):
        sign = ONE if n % 2 == 1 else -ONE
        for key, val in power.items():
            contrib = val.scale(sign * Fraction(1, n))
            out[key] = out.get(key, HbarSeries()).add(contrib)
        n += 1
        if n > limit:
            raise PreconditionError("convolution logarithm did not terminate")
        power = convolve(coalg, ctx, power, base)
    return {k: v for k, v in out.items() if not v.is_zero()}


class CoalgebraMorphism:
    """Coaugmented coalgebra morphism between word coalgebras.

    Determined by its corestriction: a degree-zero map from source words of
    positive length to the target cogenerators.  The induced map on words is
    the convolution exponential of the corestriction.
    """

    def __init__(self, source: SymmetricWordAlgebra, target: SymmetricWordAlgebra,
                 corestriction: Mapping[Word, Mapping[str, object]]):
        self.source = source
        self.target = target
        cor: dict[Word, dict[str, Fraction]] = {}
        for w, val in corestriction.items():
            if len(w) < 1:
                raise PreconditionError("corestriction must vanish on the coaugmentation")
            clean = {t: Fraction(c) for t, c in val.items() if Fraction(c) != 0}
            for t in clean:
                if target.space.degree(t) != source.degree(w):
                    raise PreconditionError(f"corestriction entry {w} -> {t} is not degree zero")
            if clean:
                cor[w] = clean
        self.corestriction = cor
        self._induced: MapSeries | None = None

    def induced(self) -> MapSeries:
        """The full morphism, as a map from source words to target-word series."""
        if self._induced is None:
            ctx = SeriesContext(self.target)
            f: MapSeries = {
                w: HbarSeries({((t,), "1", 0): c for t, c in val.items()})
                for w, val in self.corestriction.items()
            }
            self._induced = conv_exp(self.source, ctx, f)
        return self._induced

    def apply_word(self, w: Word) -> dict[Word, Fraction]:
        series = self.induced().get(w)
        if series is None:
            return {}
        return {key[0]: c for key, c in series.terms.items()}

    def respects_coproducts(self) -> CheckResult:
        """Δ_target ∘ F = (F ⊗ F) ∘ Δ_source on every basis word."""
        F = self.induced()
        for w in self.source.words:
            lhs: dict[tuple[Word, Word], Fraction] = {}
            for u, c in self.apply_word(w).items():
                for l, r, s in self.target.coproduct(u):
                    vec_add_into(lhs, (l, r), c * s)
            rhs: dict[tuple[Word, Word], Fraction] = {}
            for a, b, s in self.source.coproduct(w):
                for u1, c1 in ({(): ONE} if not a else self.apply_word(a)).items():
                    for u2, c2 in ({(): ONE} if not b else self.apply_word(b)).items():
                        vec_add_into(rhs, (u1, u2), s * c1 * c2)
            diff = dict(lhs)
            for key, c in rhs.items():
                vec_add_into(diff, key, -c)
            if any(diff.values()):
                return CheckResult("coalgebra-morphism", False,
                                   witness={"word": self.source.label(w)})
        return CheckResult("coalgebra-morphism", True)
