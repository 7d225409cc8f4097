"""BV-infinity morphisms: exp/log calculus, composition, representability.

A morphism V -> V' is a degree-two map phi = sum_n hbar^n phi_n with
phi(1) = 0, phi_n of order <= n+1 over the trivial algebra map (so phi_n
kills the (n+2)-nd power of the augmentation ideal), and

    dhat' ∘ exp(phi/hbar) = exp(phi/hbar) ∘ dhat

with exp taken in the convolution algebra Hom(V, V'((hbar))).  Composition
is exp-then-log; the log exists because the sources are conilpotent, and
finiteness of hbar·log at hbar -> 0 is certified by checking that every log
coefficient below hbar^{-1} vanishes.

The dual R* of a parameter ring, with zero operator and square-zero products
on m*, embeds the opposite category of parameter rings; a local ring map
gives hbar(f* - e) because (m*)^2 = 0.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping

from .artin import ArtinLocalAlgebra
from .bv import BVAlgebra, BVInftyAlgebra, qme_exp_check
from .coalgebra import conv_exp, conv_log
from .diagnostics import CheckResult, PreconditionError, StructureError
from .linfty import LInftyAlgebra, _as_linfty
from .series import HbarSeries, SeriesContext
from .words import Word, vec_add_into

__all__ = [
    "BVMorphism",
    "check_bv_morphism",
    "compose_bv_morphisms",
    "clalg_embed",
    "ring_map_to_bv_morphism",
    "theorem_first_bijection_check",
    "theorem_second_bijection_check",
    "linfty_morphism_to_bvinfty",
    "identity_bv_morphism",
    "twisted_linfty_morphism",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class BVMorphism:
    """phi = sum_n hbar^n phi_n between BV-infinity algebras.

    `components[n]` maps source basis keys to sparse target vectors; the
    degree of phi_n must be 2 - 2n so that phi has total degree two.
    """

    def __init__(self, source: BVInftyAlgebra, target: BVInftyAlgebra,
                 components: Mapping[int, Mapping], name: str = "phi"):
        self.source = source
        self.target = target
        self.name = name
        comps: dict[int, dict] = {}
        for n, table in components.items():
            n = int(n)
            clean_table = {}
            for key, val in table.items():
                clean = {t: Fraction(c) for t, c in val.items() if Fraction(c) != 0}
                for t in clean:
                    got = target.algebra.degree(t) - source.algebra.degree(key)
                    if got != 2 - 2 * n:
                        raise PreconditionError(
                            f"component {n} entry {key} -> {t} has degree {got}, expected {2 - 2 * n}")
                if clean:
                    clean_table[key] = clean
            if clean_table:
                comps[n] = clean_table
        self.components = comps

    def as_map(self) -> dict:
        """phi as a map source key -> target HbarSeries."""
        out: dict = {}
        for n, table in self.components.items():
            for key, val in table.items():
                acc = out.setdefault(key, HbarSeries())
                for t, c in val.items():
                    k = (t, "1", n)
                    acc.terms[k] = acc.terms.get(k, ZERO) + c
        return {k: HbarSeries(v.terms) for k, v in out.items()}

    def exp_map(self) -> dict:
        """exp(phi/hbar) in the convolution algebra, Laurent window included."""
        ctx = SeriesContext(self.target.algebra, hbar_cutoff=self._window())
        f = {k: v.shift_hbar(-1) for k, v in self.as_map().items()}
        return conv_exp(self.source.algebra, ctx, f)

    def _window(self) -> int:
        return self.target.hbar_cutoff + _conilpotency(self.source.algebra) + 1

    def __repr__(self):
        return f"BVMorphism({self.name}: {self.source.name} -> {self.target.name})"


def _conilpotency(algebra) -> int:
    if getattr(algebra, "max_len", None) is not None:
        return algebra.max_len
    return len(list(algebra.words))


def _same_algebra(a, b) -> bool:
    if a is b:
        return True
    return type(a) is type(b) and tuple(a.words) == tuple(b.words)


def _compose_word_vec(mapping: Mapping, vec: Mapping) -> dict:
    out: dict = {}
    for w, c in vec.items():
        for u, v in mapping.get(w, {}).items():
            vec_add_into(out, u, c * v)
    return out


def _source_keys(algebra):
    return algebra.words


def check_bv_morphism(phi: BVMorphism) -> dict:
    """The three defining conditions, each reported with a witness.

    (1) phi kills the coaugmentation; (2) the exp-intertwining equation holds
    on every basis key within the hbar window; (3) phi_n vanishes on the
    (n+2)-nd power of the source augmentation ideal, which for word algebras
    is spanned by the words of length >= n+2 and for dual rings is zero.
    """
    src, tgt = phi.source, phi.target
    cond1 = all(key != src.algebra.unit or val.is_zero()
                for key, val in phi.as_map().items())
    report: dict = {"unit": CheckResult("phi(1)=0", cond1)}

    # (3) vanishing on high powers of the augmentation ideal
    cond3_ok, cond3_wit = True, None
    for n, table in phi.components.items():
        for key, val in table.items():
            if src.algebra.length(key) >= n + 2 and val:
                cond3_ok, cond3_wit = False, {"component": n, "key": src.algebra.label(key)}
                break
        if not cond3_ok:
            break
    report["orders"] = CheckResult("phi_n kills m^{n+2}", cond3_ok, witness=cond3_wit)

    # (2) intertwining through the exponential
    window = phi._window()
    ctx = SeriesContext(tgt.algebra, hbar_cutoff=window)
    E = phi.exp_map()
    narrow = SeriesContext(tgt.algebra, hbar_cutoff=tgt.hbar_cutoff)
    cond2_ok, cond2_wit = True, None
    for key in _source_keys(src.algebra):
        Ew = E.get(key, HbarSeries())
        lhs = tgt.dhat(Ew, ctx)
        rhs = HbarSeries()
        d_src = src.dhat(HbarSeries({(key, "1", 0): ONE}),
                         SeriesContext(src.algebra, hbar_cutoff=window))
        for (u, r, h), c in d_src.terms.items():
            rhs = rhs.add(E.get(u, HbarSeries()).shift_hbar(h).scale(c))
        diff = narrow.truncate(lhs.sub(rhs))
        if not diff.is_zero():
            cond2_ok = False
            cond2_wit = {"key": src.algebra.label(key)}
            break
    report["intertwining"] = CheckResult("dhat' exp = exp dhat", cond2_ok, witness=cond2_wit,
                                         bound={"hbar_cutoff": tgt.hbar_cutoff})
    report["ok"] = cond1 and cond3_ok and cond2_ok
    return report


def compose_bv_morphisms(phi: BVMorphism, psi: BVMorphism) -> BVMorphism:
    """phi ∘ psi via hbar·log(exp(phi/hbar) ∘ exp(psi/hbar)).

    Raises if the log keeps any power below hbar^{-1}: such a term would
    obstruct finiteness of hbar·log as hbar -> 0 and signals invalid input.
    """
    if not _same_algebra(psi.target.algebra, phi.source.algebra):
        raise PreconditionError("composition mismatch: target(psi) != source(phi)")
    window = phi.target.hbar_cutoff + _conilpotency(psi.source.algebra) + _conilpotency(phi.source.algebra) + 2
    ctx = SeriesContext(phi.target.algebra, hbar_cutoff=window)
    E_phi = {k: v for k, v in phi.exp_map().items()}
    E_psi = psi.exp_map()
    composite: dict = {}
    for key, series in E_psi.items():
        acc = HbarSeries()
        for (u, r, h), c in series.terms.items():
            acc = acc.add(E_phi.get(u, HbarSeries()).shift_hbar(h).scale(c))
        if not acc.is_zero():
            composite[key] = acc
    log = conv_log(psi.source.algebra, ctx, composite)
    components: dict[int, dict] = {}
    for key, series in log.items():
        for (t, r, h), c in series.terms.items():
            if h < -1:
                raise StructureError(
                    "composition log has a power below hbar^{-1}; inputs are not morphisms",
                    witness={"key": psi.source.algebra.label(key), "power": h})
            n = h + 1
            if n >= phi.target.hbar_cutoff:
                continue
            components.setdefault(n, {}).setdefault(key, {})[t] = \
                components.get(n, {}).get(key, {}).get(t, ZERO) + c
    return BVMorphism(psi.source, phi.target, components,
                      name=f"{phi.name}∘{psi.name}")


def log_hbar_minus_one_coefficient(phi: BVMorphism, psi: BVMorphism) -> dict:
    """The hbar^{-1} log coefficient of the composite, for certification."""
    window = phi.target.hbar_cutoff + _conilpotency(psi.source.algebra) + _conilpotency(phi.source.algebra) + 2
    ctx = SeriesContext(phi.target.algebra, hbar_cutoff=window)
    E_phi = phi.exp_map()
    E_psi = psi.exp_map()
    composite: dict = {}
    for key, series in E_psi.items():
        acc = HbarSeries()
        for (u, r, h), c in series.terms.items():
            acc = acc.add(E_phi.get(u, HbarSeries()).shift_hbar(h).scale(c))
        composite[key] = acc
    log = conv_log(psi.source.algebra, ctx, composite)
    out = {}
    for key, series in log.items():
        coeff = series.hbar_coefficient(-1)
        if coeff:
            out[key] = coeff
    return out


__all__.append("log_hbar_minus_one_coefficient")


def clalg_embed(ring: ArtinLocalAlgebra, hbar_cutoff: int = 3) -> BVInftyAlgebra:
    """R* with zero operator and square-zero products on m*."""
    return BVInftyAlgebra(ring.dual_algebra(), {}, hbar_cutoff, name=f"{ring.name}*")


def ring_map_to_bv_morphism(source_ring: ArtinLocalAlgebra, target_ring: ArtinLocalAlgebra,
                            entries: Mapping[str, Mapping[str, object]],
                            hbar_cutoff: int = 3) -> BVMorphism:
    """The morphism hbar(f* - e): S* -> R* of a local ring map f: R -> S.

    `entries[r]` is f(r) as a sparse element of S for each ideal label r;
    f(1) = 1 is implied.  Locality (f(m_R) inside m_S) is enforced.
    """
    f_table: dict[str, dict[str, Fraction]] = {"1": {"1": ONE}}
    for r in source_ring.ideal_labels:
        img = {s: Fraction(c) for s, c in entries.get(r, {}).items() if Fraction(c) != 0}
        if "1" in img:
            raise PreconditionError(f"ring map is not local: f({r}) has a unit component")
        for s in img:
            if s not in target_ring.labels:
                raise PreconditionError(f"unknown target ring label {s!r}")
        f_table[r] = img
    # multiplicativity of f, checked exactly
    for a in source_ring.ideal_labels:
        for b in source_ring.ideal_labels:
            lhs: dict[str, Fraction] = {}
            for t, c in source_ring.mul_labels(a, b).items():
                for s, v in f_table.get(t, {}).items():
                    vec_add_into(lhs, s, c * v)
            rhs = target_ring.mul(f_table.get(a, {}), f_table.get(b, {}))
            for s, c in rhs.items():
                vec_add_into(lhs, s, -c)
            if any(lhs.values()):
                raise PreconditionError(f"entries do not define a ring map: ({a})({b})")
    # dual map: phi_1(b*) = sum_r <f(r), b> r*, minus e which only hits 1* -> 1*
    dual_table: dict[str, dict[str, Fraction]] = {}
    for r, img in f_table.items():
        for s, c in img.items():
            dual_table.setdefault(s, {})[r] = dual_table.get(s, {}).get(r, ZERO) + c
    phi1 = {}
    for s, val in dual_table.items():
        adjusted = dict(val)
        if s == "1":
            adjusted["1"] = adjusted.get("1", ZERO) - ONE
        adjusted = {r: c for r, c in adjusted.items() if c}
        if adjusted:
            phi1[s] = adjusted
    return BVMorphism(clalg_embed(target_ring, hbar_cutoff), clalg_embed(source_ring, hbar_cutoff),
                      {1: phi1}, name="hbar(f*-e)")


def identity_bv_morphism(V: BVInftyAlgebra) -> BVMorphism:
    """hbar·log(identity): the projection to cogenerators in arity one.

    Under the unshuffle coproduct the convolution logarithm of the identity
    morphism is exactly the projection onto words of length one.  Under the
    trivial coproduct the logarithm spreads over every word length and
    violates the vanishing conditions, so that case is refused.
    """
    if getattr(V.algebra, "coproduct_kind", "shuffle") != "shuffle":
        raise PreconditionError(
            "the identity is exp-representable only over the unshuffle coproduct")
    comp1 = {}
    for w in V.algebra.words:
        if V.algebra.length(w) == 1:
            comp1[w] = {w: ONE}
    return BVMorphism(V, V, {1: comp1}, name="id")


def theorem_first_bijection_check(V, ring: ArtinLocalAlgebra, S: HbarSeries,
                                  hbar_cutoff: int = 3) -> dict:
    """S solves the QME over R  <=>  the induced map R* -> V[[hbar]] is a
    morphism from (R*, 0); both sides computed independently.

    The vanishing condition (3) holds automatically because (m*)^{n+2} = 0.
    """
    bvi = V.as_bvinfty(hbar_cutoff) if isinstance(V, BVAlgebra) else V
    qme = qme_exp_check(V, ring, S, hbar_cutoff)
    components: dict[int, dict] = {}
    for (w, r, h), c in S.terms.items():
        components.setdefault(h, {}).setdefault(r, {})[w] = c
    phi = BVMorphism(clalg_embed(ring, hbar_cutoff), bvi, components, name="phi_S")
    morphism = check_bv_morphism(phi)
    solves = qme["exp_zero"] and qme["residual_zero"]
    return {
        "solves_qme": solves,
        "is_morphism": morphism["ok"],
        "equivalence": solves == morphism["ok"],
        "ok": qme["ok"] and solves == morphism["ok"],
        "qme": qme,
        "morphism": morphism,
    }


def _linfty_phi_components(g: LInftyAlgebra, table: Mapping[Word, Mapping[str, object]]) -> dict[int, dict]:
    components: dict[int, dict] = {}
    for w, val in table.items():
        n = len(w)
        clean = {(t,): Fraction(c) for t, c in val.items() if Fraction(c) != 0}
        if clean:
            components.setdefault(n, {})[tuple(w)] = clean
    return components


def linfty_morphism_to_bvinfty(g, h, table: Mapping[Word, Mapping[str, object]],
                               max_len: int = 4, hbar_cutoff: int = 4) -> BVMorphism:
    """An L-infinity morphism g -> h, given by corestriction components on
    words of S(g[1]), as the morphism sum_n hbar^n phi_n of the desuspension
    algebras."""
    from .constructions import ce_bvinfty_from_linfty
    gl, hl = _as_linfty(g), _as_linfty(h)
    source = ce_bvinfty_from_linfty(gl, max_len, hbar_cutoff)
    target = ce_bvinfty_from_linfty(hl, max_len, hbar_cutoff)
    return BVMorphism(source, target, _linfty_phi_components(gl, table), name="L-infinity phi")


def theorem_second_bijection_check(V, g, S_components: Mapping[Word, Mapping[str, object]],
                                   max_len: int = 4, hbar_cutoff: int = 4) -> dict:
    """QME in the convolution algebra hom(S(g[-1]), V)  <=>  S is a morphism
    S(g[-1]) -> V.

    S is given by its hbar^n components on words of length n (the shape
    constraints S_n = 0 on words longer than n+1 and degree 2-2n are
    enforced by the morphism constructor).  The convolution-QME side applies
    Dhat(Phi) = dhat_V ∘ Phi - (-1)^{|Phi|} Phi ∘ dhat_g to Phi = exp(S/hbar)
    computed in Hom(S(g[-1]), V((hbar))).
    """
    from .constructions import ce_bvinfty_from_linfty
    gl = _as_linfty(g)
    bvi = V.as_bvinfty(hbar_cutoff) if isinstance(V, BVAlgebra) else V
    source = ce_bvinfty_from_linfty(gl, max_len, hbar_cutoff)
    components = _components_by_weight(S_components)
    # shape: the hbar^n component lives on words of length <= n+1
    for n, table in components.items():
        for w in table:
            if len(w) > n + 1:
                raise PreconditionError(
                    f"component at hbar^{n} is supported on a word of length {len(w)} > {n + 1}")
    phi = BVMorphism(source, bvi, components, name="S")
    morphism = check_bv_morphism(phi)
    # convolution-QME route: Dhat e^{S/hbar} = dhat_V ∘ E - E ∘ dhat_g = 0
    window = phi._window()
    ctx = SeriesContext(bvi.algebra, hbar_cutoff=window)
    narrow = SeriesContext(bvi.algebra, hbar_cutoff=bvi.hbar_cutoff)
    E = phi.exp_map()
    qme_zero = True
    for w in source.algebra.words:
        lhs = bvi.dhat(E.get(w, HbarSeries()), ctx)
        d_src = source.dhat(HbarSeries({(w, "1", 0): ONE}),
                            SeriesContext(source.algebra, hbar_cutoff=window))
        rhs = HbarSeries()
        for (u, r, h), c in d_src.terms.items():
            rhs = rhs.add(E.get(u, HbarSeries()).shift_hbar(h).scale(c))
        if not narrow.truncate(lhs.sub(rhs)).is_zero():
            qme_zero = False
            break
    return {
        "qme_zero": qme_zero,
        "is_morphism": morphism["ok"],
        "equivalence": qme_zero == morphism["ok"],
        "ok": qme_zero == morphism["ok"],
        "morphism": morphism,
    }


def _components_by_weight(table: Mapping) -> dict[int, dict]:
    """Split a word-indexed table into hbar components: a word of length n
    carries weight n (the L-infinity dictionary).  Values are keyed by target
    basis keys already."""
    components: dict[int, dict] = {}
    for w, val in table.items():
        clean = {t: Fraction(c) for t, c in val.items() if Fraction(c) != 0}
        if clean:
            components.setdefault(len(w), {})[tuple(w)] = clean
    return components


def twisted_linfty_morphism(g, rng: random.Random, max_len: int = 3,
                            density: float = 0.5):
    """A genuinely nontrivial valid instance: conjugate the codifferential of
    g by a random coalgebra automorphism F = exp(id + c_2).

    Returns (g_twisted, corestriction of F); F is then an honest L-infinity
    morphism g_twisted -> g, so its Chuang-Lazarev residual vanishes and the
    induced BV-infinity morphism passes every condition.
    """
    from .sampling import random_corestriction_twist
    gl = _as_linfty(g)
    W = gl.word_algebra(max_len)
    ctx = SeriesContext(W)
    cor = random_corestriction_twist(gl, rng, max_len, density)
    f_map = {w: HbarSeries({((t,), "1", 0): c for t, c in val.items()})
             for w, val in cor.items()}
    F = conv_exp(W, ctx, f_map)

    def apply_map(mapping, vec):
        out: dict[Word, Fraction] = {}
        for w, c in vec.items():
            series = mapping.get(w)
            if series is None:
                continue
            for (u, r, h), c2 in series.terms.items():
                vec_add_into(out, u, c * c2)
        return out

    # compositional inverse: F = id + N with N strictly length-lowering, so
    # F^{-1} = sum_k (-N)^k terminates (the convolution inverse is not it)
    nil: dict[Word, dict[Word, Fraction]] = {}
    for w in W.words:
        img = apply_map(F, {w: ONE})
        vec_add_into(img, w, -ONE)
        if img:
            nil[w] = img
    F_inv: dict[Word, HbarSeries] = {w: HbarSeries({(w, "1", 0): ONE}) for w in W.words}
    power = {w: dict(img) for w, img in nil.items()}
    sign = -ONE
    while any(power.values()):
        for w, img in power.items():
            acc = F_inv[w]
            for u, c in img.items():
                key = (u, "1", 0)
                val = acc.terms.get(key, ZERO) + sign * c
                if val:
                    acc.terms[key] = val
                else:
                    acc.terms.pop(key, None)
        power = {w: _compose_word_vec(nil, img) for w, img in power.items()}
        power = {w: img for w, img in power.items() if img}
        sign = -sign
    F_inv = {w: HbarSeries(v.terms) for w, v in F_inv.items()}
    D = gl.codifferential(max_len)

    # D' = F^{-1} D F, so that F: (g', D') -> (g, D) intertwines D' with D
    twisted_cor: dict[int, dict] = {}
    for w in W.words:
        if not w:
            continue
        vec = apply_map(F, {w: ONE})
        vec = D.apply(vec)
        vec = apply_map(F_inv, vec)
        letters = {u[0]: c for u, c in vec.items() if len(u) == 1 and c}
        if letters:
            twisted_cor.setdefault(len(w), {})[w] = letters
    g_twisted = LInftyAlgebra(gl.space, twisted_cor, name=f"{gl.name}-twisted")
    return g_twisted, cor
