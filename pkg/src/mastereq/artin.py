"""Finite-dimensional local parameter rings with nilpotent maximal ideal.

A ring is given by a unital basis (the unit label is "1") and sparse
structure constants for products of non-unit basis elements.  The maximal
ideal m is the span of the non-unit labels; validation certifies
commutativity, associativity, unitality and computes the nilpotency order M
with m^M = 0 by an explicit closure computation.  Quotients R/m^n are never
formed: M is finite, so the ring itself plays the role of the completion.

The linear dual R* carries the coalgebra structure dual to multiplication
(used by the representability checks) and, separately, the near-trivial
algebra structure with zero products on m* (used by the morphism calculus).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .diagnostics import StructureError
from .graded import as_scalar
from .linalg import rref, span_contains

__all__ = ["ArtinLocalAlgebra", "DualRingCoalgebra", "DualRingAlgebra", "TRIVIAL_RING", "power_ring", "square_zero_ring"]

ZERO = Fraction(0)
ONE = Fraction(1)

RingElt = dict[str, Fraction]


class ArtinLocalAlgebra:
    def __init__(
        self,
        labels: Iterable[str],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        name: str = "R",
        validate: bool = True,
    ):
        self.name = name
        self.labels = tuple(str(x) for x in labels)
        if not self.labels or self.labels[0] != "1":
            raise StructureError("first basis label must be the unit '1'")
        if len(set(self.labels)) != len(self.labels):
            raise StructureError("duplicate ring basis labels")
        self.ideal_labels = self.labels[1:]
        table: dict[tuple[str, str], RingElt] = {}
        for (a, b), val in products.items():
            if a == "1" or b == "1":
                raise StructureError("unit products are implied; give only ideal products")
            if a not in self.ideal_labels or b not in self.ideal_labels:
                raise StructureError(f"unknown ring label in product ({a},{b})")
            table[(a, b)] = {c: as_scalar(v) for c, v in val.items() if as_scalar(v) != 0}
        # fill commutativity: missing mirror entries copied, both-present checked later
        for (a, b), val in list(table.items()):
            if (b, a) not in table:
                table[(b, a)] = dict(val)
        self.table = table
        self._orders: dict[str, int] | None = None
        self.nilpotency = 0
        self._compute_filtration()
        if validate:
            self.validate()

    # -- multiplication ----------------------------------------------------

    def mul_labels(self, a: str, b: str) -> RingElt:
        if a == "1":
            return {b: ONE}
        if b == "1":
            return {a: ONE}
        return self.table.get((a, b), {})

    def mul(self, x: Mapping[str, Fraction], y: Mapping[str, Fraction]) -> RingElt:
        out: RingElt = {}
        for a, ca in x.items():
            for b, cb in y.items():
                c = ca * cb
                if not c:
                    continue
                for t, s in self.mul_labels(a, b).items():
                    v = out.get(t, ZERO) + s * c
                    if v:
                        out[t] = v
                    else:
                        out.pop(t, None)
        return out

    # -- m-adic filtration ---------------------------------------------------

    def _coords(self, elt: RingElt) -> list[Fraction]:
        return [elt.get(x, ZERO) for x in self.ideal_labels]

    def _compute_filtration(self) -> None:
        """Nilpotency order and the m-adic order of each ideal basis label."""
        n = len(self.ideal_labels)
        layer_rows: list[list[list[Fraction]]] = []
        current = [[(ONE if j == i else ZERO) for j in range(n)] for i in range(n)]
        current, _ = rref(current)
        k = 1
        while current:
            layer_rows.append(current)
            nxt = []
            for a in self.ideal_labels:
                for row in current:
                    elt = self.mul({a: ONE}, dict(zip(self.ideal_labels, row)))
                    if elt:
                        nxt.append(self._coords(elt))
            current, _ = rref(nxt)
            k += 1
            if k > n + 2:
                raise StructureError(f"maximal ideal of {self.name} is not nilpotent")
        # layer_rows[k-1] spans m^k; the first vanishing power is M = len + 1
        self.nilpotency = len(layer_rows) + 1
        self._layers = layer_rows
        orders: dict[str, int] = {}
        for i, x in enumerate(self.ideal_labels):
            unit = [(ONE if j == i else ZERO) for j in range(n)]
            o = 0
            for depth, rows in enumerate(layer_rows, start=1):
                if span_contains(rows, unit):
                    o = depth
            if o == 0:
                raise StructureError(f"label {x} not in the maximal ideal span")
            orders[x] = o
        orders["1"] = 0
        self._orders = orders
        # adapted basis: each m^k must be spanned by the basis labels of order >= k
        self.adapted = all(
            len(rows) == sum(1 for x in self.ideal_labels if orders[x] >= depth)
            for depth, rows in enumerate(layer_rows, start=1)
        )

    def order(self, label: str) -> int:
        """m-adic order of a basis label (0 for the unit)."""
        return self._orders[label]

    # -- axioms -------------------------------------------------------------

    def validate(self) -> None:
        for a in self.ideal_labels:
            for b in self.ideal_labels:
                ab = self.mul_labels(a, b)
                ba = self.mul_labels(b, a)
                if ab != ba:
                    raise StructureError(f"{self.name}: not commutative", witness=(a, b))
                if "1" in ab:
                    raise StructureError(f"{self.name}: ideal product with unit component", witness=(a, b))
        for a in self.ideal_labels:
            for b in self.ideal_labels:
                for c in self.ideal_labels:
                    left = self.mul(self.mul_labels(a, b), {c: ONE})
                    right = self.mul({a: ONE}, self.mul_labels(b, c))
                    if left != right:
                        raise StructureError(f"{self.name}: not associative", witness=(a, b, c))

    # -- dual structures -----------------------------------------------------

    def dual_coalgebra(self) -> "DualRingCoalgebra":
        return DualRingCoalgebra(self)

    def dual_algebra(self) -> "DualRingAlgebra":
        return DualRingAlgebra(self)

    def __repr__(self):
        return f"ArtinLocalAlgebra({self.name}, dim={len(self.labels)}, M={self.nilpotency})"


class DualRingCoalgebra:
    """R* with the coproduct dual to multiplication; basis keys are ring labels."""

    def __init__(self, ring: ArtinLocalAlgebra):
        self.ring = ring
        self.unit = "1"  # the coaugmentation, dual to the augmentation R -> k
        self.basis_keys = ring.labels
        pairing: dict[str, list[tuple[str, str, Fraction]]] = {c: [] for c in ring.labels}
        for a in ring.labels:
            for b in ring.labels:
                for c, coeff in ring.mul_labels(a, b).items():
                    pairing[c].append((a, b, coeff))
        self._coproduct = pairing

    def coproduct(self, key: str) -> list[tuple[str, str, Fraction]]:
        return self._coproduct[key]

    def counit_key(self, key: str) -> Fraction:
        return ONE if key == "1" else ZERO

    def degree(self, key: str) -> int:
        return 0


class DualRingAlgebra(DualRingCoalgebra):
    """R* with the square-zero multiplication on m*; the unit is 1*.

    Together with the dual coalgebra structure and the zero operator this is
    the image of R in the morphism calculus.
    """

    max_len = None

    def mul_words(self, a: str, b: str) -> dict[str, Fraction]:
        if a == "1":
            return {b: ONE}
        if b == "1":
            return {a: ONE}
        return {}

    @property
    def words(self):
        return self.basis_keys

    def label(self, key: str) -> str:
        return key

    def augmentation_ideal_words(self):
        return tuple(k for k in self.basis_keys if k != "1")

    def length(self, key: str) -> int:
        return 0 if key == "1" else 1


TRIVIAL_RING = ArtinLocalAlgebra(["1"], {}, name="k")


def power_ring(order: int, variable: str = "t") -> ArtinLocalAlgebra:
    """k[t]/(t^order); basis 1, t, t^2, ..., t^{order-1}."""
    if order < 1:
        raise ValueError("order must be >= 1")

    def lab(i: int) -> str:
        return "1" if i == 0 else (variable if i == 1 else f"{variable}^{i}")

    labels = [lab(i) for i in range(order)]
    products = {}
    for i in range(1, order):
        for j in range(1, order):
            if i + j < order:
                products[(lab(i), lab(j))] = {lab(i + j): 1}
            else:
                products[(lab(i), lab(j))] = {}
    return ArtinLocalAlgebra(labels, products, name=f"k[{variable}]/({variable}^{order})")


def square_zero_ring(variables: Iterable[str] = ("s", "t")) -> ArtinLocalAlgebra:
    """k[x_1,..,x_n]/(all products of two variables)."""
    var = tuple(variables)
    labels = ["1", *var]
    products = {(a, b): {} for a in var for b in var}
    return ArtinLocalAlgebra(labels, products, name="k[" + ",".join(var) + "]/(m^2)")
