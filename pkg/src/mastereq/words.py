"""Truncated word algebras: the symmetric coalgebra S(V) and the tensor variant T(V).

Words are tuples of basis labels of an underlying graded space.  Symmetric
words are kept in a canonical normal form: factors sorted stably by
(degree, declaration index), with the Koszul sign of the sorting permutation
recorded; a repeated odd factor normalizes to zero.  Tensor words keep their
order.  Both flavors are cut at a hard word length N; products that would
overflow raise `TruncationOverflow` instead of silently truncating.

The multiplication is concatenation (symmetric) or the shuffle product
(tensor); the coproduct is the unshuffle coproduct by default, or the trivial
one (1 -> 1(x)1, w -> w(x)1 + 1(x)w) on request.  The empty word is the unit
and coaugmentation; the counit is the coefficient of the empty word.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .graded import GradedVectorSpace, koszul_sign

__all__ = [
    "Word",
    "TruncationOverflow",
    "WordAlgebra",
    "SymmetricWordAlgebra",
    "TensorWordAlgebra",
    "vec_add_into",
    "vec_scale",
    "vec_clean",
    "vec_is_zero",
]

Word = tuple[str, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class TruncationOverflow(ArithmeticError):
    """A product left the word-length truncation window.

    Checks must not be asserted on inputs whose expansion overflows; callers
    either budget their inputs or surface this flag in reports.
    """

    def __init__(self, left: Word, right: Word, max_len: int):
        self.left = left
        self.right = right
        self.max_len = max_len
        super().__init__(
            f"product of words of lengths {len(left)} and {len(right)} "
            f"exceeds truncation {max_len}"
        )


# -- small sparse-vector helpers (dict word -> Fraction) ---------------------

def vec_add_into(acc: dict, key, coeff: Fraction) -> None:
    c = acc.get(key, ZERO) + coeff
    if c:
        acc[key] = c
    else:
        acc.pop(key, None)


def vec_scale(vec: Mapping, c: Fraction) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in vec.items()}


def vec_clean(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if v}


def vec_is_zero(vec: Mapping) -> bool:
    return all(v == 0 for v in vec.values())


class WordAlgebra:
    """Shared interface of the symmetric and tensor word algebras."""

    symmetric: bool

    def __init__(self, space: GradedVectorSpace, max_len: int, coproduct: str = "shuffle"):
        if max_len < 1:
            raise ValueError("word-length truncation must be >= 1")
        if coproduct not in ("shuffle", "trivial"):
            raise ValueError(f"unknown coproduct {coproduct!r}")
        self.space = space
        self.max_len = max_len
        self.coproduct_kind = coproduct
        self._sort_key = {label: (space.degree(label), i) for i, (label, _) in enumerate(space.basis)}
        self.words: tuple[Word, ...] = tuple(self._enumerate_words())
        self._word_set = set(self.words)
        self._degree = {w: sum(space.degree(x) for x in w) for w in self.words}
        self._coproduct_cache: dict[Word, list] = {}
        self._word_space: GradedVectorSpace | None = None

    # -- basis ----------------------------------------------------------

    unit: Word = ()

    def __contains__(self, word: Word) -> bool:
        return word in self._word_set

    def degree(self, word: Word) -> int:
        return self._degree[word]

    def length(self, word: Word) -> int:
        return len(word)

    def label(self, word: Word) -> str:
        if not word:
            return "1"
        return self._joiner.join(word)

    def word_of_label(self, label: str) -> Word:
        if label == "1":
            return ()
        return tuple(label.split(self._joiner))

    @property
    def word_space(self) -> GradedVectorSpace:
        """The word basis repackaged as a plain graded space."""
        if self._word_space is None:
            self._word_space = GradedVectorSpace(
                (self.label(w), self._degree[w]) for w in self.words
            )
        return self._word_space

    def counit(self, vec: Mapping[Word, Fraction]) -> Fraction:
        return vec.get((), ZERO)

    def augmentation_ideal_words(self) -> tuple[Word, ...]:
        return tuple(w for w in self.words if w)

    # -- multiplication ---------------------------------------------------

    def mul_words(self, w1: Word, w2: Word) -> dict[Word, Fraction]:
        raise NotImplementedError

    def mul(self, v1: Mapping[Word, Fraction], v2: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {}
        for w1, c1 in v1.items():
            if not c1:
                continue
            for w2, c2 in v2.items():
                c = c1 * c2
                if not c:
                    continue
                for w, s in self.mul_words(w1, w2).items():
                    vec_add_into(out, w, s * c)
        return out

    # -- comultiplication -------------------------------------------------

    def coproduct(self, word: Word) -> list[tuple[Word, Word, Fraction]]:
        """Full coproduct of a basis word as a list of (left, right, coeff)."""
        cached = self._coproduct_cache.get(word)
        if cached is None:
            if self.coproduct_kind == "trivial":
                cached = self._trivial_coproduct(word)
            else:
                cached = self._shuffle_coproduct(word)
            self._coproduct_cache[word] = cached
        return cached

    def reduced_coproduct(self, word: Word) -> list[tuple[Word, Word, Fraction]]:
        return [(l, r, c) for (l, r, c) in self.coproduct(word) if l and r]

    def _trivial_coproduct(self, word: Word) -> list[tuple[Word, Word, Fraction]]:
        if not word:
            return [((), (), ONE)]
        return [(word, (), ONE), ((), word, ONE)]

    def _shuffle_coproduct(self, word: Word) -> list[tuple[Word, Word, Fraction]]:
        degs = [self.space.degree(x) for x in word]
        acc: dict[tuple[Word, Word], Fraction] = {}
        n = len(word)
        for mask in range(1 << n):
            left = tuple(word[i] for i in range(n) if mask >> i & 1)
            right = tuple(word[i] for i in range(n) if not mask >> i & 1)
            # Koszul sign of pulling the chosen positions to the front.
            exp = 0
            for j in range(n):
                if mask >> j & 1:
                    for i in range(j):
                        if not mask >> i & 1:
                            exp += degs[i] * degs[j]
            sign = ONE if exp % 2 == 0 else -ONE
            key = (left, right)
            acc[key] = acc.get(key, ZERO) + sign
        return [(l, r, c) for (l, r), c in acc.items() if c]

    def _enumerate_words(self) -> Iterable[Word]:
        raise NotImplementedError

    _joiner = "?"


class SymmetricWordAlgebra(WordAlgebra):
    """Symmetric words with Koszul normalization; concatenation product.

    Doubles as the truncated symmetric coalgebra S(V) (unshuffle coproduct)
    and as the free graded-commutative algebra on V, cut at length N.
    """

    symmetric = True
    _joiner = "·"  # middle dot

    def normalize(self, labels: Sequence[str]) -> tuple[Word | None, Fraction]:
        """Canonical form of an unordered word; (None, 0) if it collapses.

        Returns the sorted word and the Koszul sign of the sorting
        permutation.  A repeated factor of odd degree makes the word zero.
        """
        order = sorted(range(len(labels)), key=lambda i: self._sort_key[labels[i]])
        degs = [self.space.degree(x) for x in labels]
        sign = koszul_sign(order, degs)
        word = tuple(labels[i] for i in order)
        for a, b in zip(word, word[1:]):
            if a == b and self.space.degree(a) % 2 != 0:
                return None, ZERO
        return word, sign

    def _enumerate_words(self) -> Iterable[Word]:
        letters = sorted(self.space.labels, key=self._sort_key.__getitem__)
        odd = {x for x in letters if self.space.degree(x) % 2 != 0}
        for n in range(self.max_len + 1):
            for combo in itertools.combinations_with_replacement(letters, n):
                if any(a == b and a in odd for a, b in zip(combo, combo[1:])):
                    continue
                yield combo

    def mul_words(self, w1: Word, w2: Word) -> dict[Word, Fraction]:
        word, sign = self.normalize(list(w1) + list(w2))
        if word is None:
            return {}
        # normalize first: a vanishing product never overflows
        if len(word) > self.max_len:
            raise TruncationOverflow(w1, w2, self.max_len)
        return {word: sign}


class TensorWordAlgebra(WordAlgebra):
    """Ordered tensor words with the shuffle product.

    Order is preserved (no normal form); the shuffle product interleaves the
    two factors with Koszul signs, which is graded-commutative and
    associative, so the same operator-order and QME machinery applies.
    """

    symmetric = False
    _joiner = "⊗"  # tensor sign

    def _enumerate_words(self) -> Iterable[Word]:
        letters = self.space.labels
        for n in range(self.max_len + 1):
            yield from itertools.product(letters, repeat=n)

    def mul_words(self, w1: Word, w2: Word) -> dict[Word, Fraction]:
        p, q = len(w1), len(w2)
        if p + q > self.max_len:
            raise TruncationOverflow(w1, w2, self.max_len)
        degs1 = [self.space.degree(x) for x in w1]
        degs2 = [self.space.degree(x) for x in w2]
        out: dict[Word, Fraction] = {}
        for positions in itertools.combinations(range(p + q), p):
            chosen = set(positions)
            word: list[str] = []
            i = j = 0
            exp = 0
            for k in range(p + q):
                if k in chosen:
                    word.append(w1[i])
                    i += 1
                else:
                    # this letter of w2 jumps over the remaining letters of w1
                    exp += degs2[j] * sum(degs1[i:])
                    word.append(w2[j])
                    j += 1
            sign = ONE if exp % 2 == 0 else -ONE
            vec_add_into(out, tuple(word), sign)
        return out
