"""Sparse elements of A (x) R with formal hbar powers, |hbar| = 2.

Terms are keyed by (basis key of the ambient algebra A, ring label, hbar
power).  Nonnegative powers live in the truncated polynomial window
[0, cutoff); negative powers appear only inside e^{S/hbar} computations and
are bounded below by the ring nilpotency, since every hbar^{-n} comes with a
coefficient in m^n.  Multiplication drops powers at or above the cutoff,
which is sound because products and BV operators only ever raise the power.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .artin import ArtinLocalAlgebra, TRIVIAL_RING
from .diagnostics import PreconditionError
from .graded import as_scalar

__all__ = ["HbarSeries", "SeriesContext"]

ZERO = Fraction(0)
ONE = Fraction(1)

Key = tuple[object, str, int]


class HbarSeries:
    """Sparse A (x) R element with integer hbar powers."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean: dict[Key, Fraction] = {}
        for key, value in (terms or {}).items():
            c = as_scalar(value)
            if c:
                clean[key] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "HbarSeries") -> "HbarSeries":
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        s = HbarSeries.__new__(HbarSeries)
        s.terms = out
        return s

    def sub(self, other: "HbarSeries") -> "HbarSeries":
        return self.add(other.scale(-ONE))

    def scale(self, c) -> "HbarSeries":
        c = as_scalar(c)
        s = HbarSeries.__new__(HbarSeries)
        s.terms = {k: c * v for k, v in self.terms.items()} if c else {}
        return s

    def shift_hbar(self, j: int) -> "HbarSeries":
        s = HbarSeries.__new__(HbarSeries)
        s.terms = {(a, r, h + j): c for (a, r, h), c in self.terms.items()}
        return s

    def hbar_coefficient(self, j: int) -> dict[tuple[object, str], Fraction]:
        return {(a, r): c for (a, r, h), c in self.terms.items() if h == j}

    def min_hbar(self) -> int | None:
        return min((h for (_, _, h) in self.terms), default=None)

    def ring_project(self, ring: ArtinLocalAlgebra, order: int) -> "HbarSeries":
        """Terms whose ring label has exactly the given m-adic order."""
        s = HbarSeries.__new__(HbarSeries)
        s.terms = {k: c for k, c in self.terms.items() if ring.order(k[1]) == order}
        return s

    def __eq__(self, other) -> bool:
        return isinstance(other, HbarSeries) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "HbarSeries(0)"
        bits = []
        for (a, r, h), c in sorted(self.terms.items(), key=lambda kv: (kv[0][2], str(kv[0][0]), kv[0][1])):
            piece = f"({c})*{a}"
            if r != "1":
                piece += f"*{r}"
            if h:
                piece += f"*h^{h}"
            bits.append(piece)
        return "HbarSeries(" + " + ".join(bits) + ")"


class SeriesContext:
    """Arithmetic for HbarSeries over a fixed algebra, ring and hbar cutoff.

    The algebra must provide `mul_words(k1, k2) -> dict`, `degree(key)` and a
    `unit` key; word algebras and the dual-ring algebra both qualify.
    """

    def __init__(self, algebra, ring: ArtinLocalAlgebra = TRIVIAL_RING, hbar_cutoff: int | None = None):
        self.algebra = algebra
        self.ring = ring
        self.hbar_cutoff = hbar_cutoff

    # -- constructors --------------------------------------------------------

    def unit(self) -> HbarSeries:
        return HbarSeries({(self.algebra.unit, "1", 0): ONE})

    def from_vector(self, vec: Mapping[object, Fraction], rlabel: str = "1", hpow: int = 0) -> HbarSeries:
        return HbarSeries({(k, rlabel, hpow): c for k, c in vec.items()})

    # -- degree bookkeeping ----------------------------------------------------

    def degree(self, key: Key) -> int:
        a, _, h = key
        return self.algebra.degree(a) + 2 * h

    def is_homogeneous(self, s: HbarSeries, degree: int) -> bool:
        return all(self.degree(k) == degree for k in s.terms)

    # -- ring/hbar-bilinear multiplication ------------------------------------

    def keep(self, h: int) -> bool:
        return self.hbar_cutoff is None or h < self.hbar_cutoff

    def mul(self, s1: HbarSeries, s2: HbarSeries) -> HbarSeries:
        out: dict[Key, Fraction] = {}
        for (a1, r1, h1), c1 in s1.terms.items():
            for (a2, r2, h2), c2 in s2.terms.items():
                h = h1 + h2
                if not self.keep(h):
                    continue
                rprod = self.ring.mul_labels(r1, r2)
                if not rprod:
                    continue
                c = c1 * c2
                words = self.algebra.mul_words(a1, a2)
                for w, s in words.items():
                    for r, rc in rprod.items():
                        key = (w, r, h)
                        v = out.get(key, ZERO) + c * s * rc
                        if v:
                            out[key] = v
                        else:
                            out.pop(key, None)
        res = HbarSeries.__new__(HbarSeries)
        res.terms = out
        return res

    def truncate(self, s: HbarSeries) -> HbarSeries:
        res = HbarSeries.__new__(HbarSeries)
        res.terms = {k: c for k, c in s.terms.items() if self.keep(k[2])}
        return res

    # -- exponentials ----------------------------------------------------------

    def exp_over_hbar(self, s: HbarSeries) -> HbarSeries:
        """e^{s/hbar}; terminates because the coefficients of s lie in m.

        The n-th term carries a coefficient in m^n, so the series is finite,
        with hbar powers bounded below by -(M-1).
        """
        for (_, r, _) in s.terms:
            if r == "1":
                raise PreconditionError("exponent must have coefficients in the maximal ideal")
        shifted = s.shift_hbar(-1)
        out = self.unit()
        term = self.unit()
        n = 0
        while True:
            n += 1
            term = self.mul(term, shifted).scale(Fraction(1, n))
            if term.is_zero():
                break
            out = out.add(term)
            if n > len(self.ring.labels) + (self.hbar_cutoff or 0) + 4:
                raise PreconditionError("exponential did not terminate; exponent not nilpotent")
        return out

    # -- operator application ----------------------------------------------------

    def apply_word_operator(self, op, s: HbarSeries, hbar_shift: int = 0) -> HbarSeries:
        """Apply a word-level operator (key -> dict) hbar- and ring-linearly."""
        out: dict[Key, Fraction] = {}
        for (a, r, h), c in s.terms.items():
            hh = h + hbar_shift
            if not self.keep(hh):
                continue
            for w, v in op.apply_word(a).items():
                key = (w, r, hh)
                val = out.get(key, ZERO) + v * c
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        res = HbarSeries.__new__(HbarSeries)
        res.terms = out
        return res
