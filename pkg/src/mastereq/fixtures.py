"""Named fixture algebras and rings, shared by the test suite and the CLI.

Everything here is tiny on purpose: three-dimensional Lie algebras and rings
of length at most four already exercise every sign path in the kernel, and
exact arithmetic makes larger random sweeps pointless.
"""

from __future__ import annotations

from .artin import ArtinLocalAlgebra, power_ring, square_zero_ring
from .graded import GradedVectorSpace
from .linfty import DgLieAlgebra, LInftyAlgebra

__all__ = [
    "dg_lie_fixtures",
    "linfty_fixtures",
    "ring_fixtures",
    "bialgebra_fixtures",
    "bidg_fixtures",
    "associative_fixtures",
    "get_dg_lie",
    "get_ring",
]


def abelian2() -> DgLieAlgebra:
    space = GradedVectorSpace([("x", 0), ("y", 0)])
    return DgLieAlgebra(space, {}, {}, name="abelian2")


def heis3() -> DgLieAlgebra:
    space = GradedVectorSpace([("x", 0), ("y", 0), ("z", 0)])
    return DgLieAlgebra(space, {}, {("x", "y"): {"z": 1}}, name="heis3")


def aff2() -> DgLieAlgebra:
    space = GradedVectorSpace([("h", 0), ("e", 0)])
    return DgLieAlgebra(space, {}, {("h", "e"): {"e": 1}}, name="aff2")


def sl2() -> DgLieAlgebra:
    space = GradedVectorSpace([("e", 0), ("f", 0), ("h", 0)])
    bracket = {
        ("h", "e"): {"e": 2},
        ("h", "f"): {"f": -2},
        ("e", "f"): {"h": 1},
    }
    return DgLieAlgebra(space, {}, bracket, name="sl2")


def jacobi_violator() -> DgLieAlgebra:
    """[x,y] = z, [x,z] = x breaks Jacobi; kept for negative controls."""
    space = GradedVectorSpace([("x", 0), ("y", 0), ("z", 0)])
    return DgLieAlgebra(space, {}, {("x", "y"): {"z": 1}, ("x", "z"): {"x": 1}},
                        name="jacobi-violator", validate=False)


def obst2() -> DgLieAlgebra:
    """Graded algebra with an unkillable quadratic obstruction: [x,x] = w, d = 0."""
    space = GradedVectorSpace([("x", 1), ("w", 2)])
    return DgLieAlgebra(space, {}, {("x", "x"): {"w": 1}}, name="obst2")


def lift3() -> DgLieAlgebra:
    """Like obst2 but with d(u) = w available to cancel the obstruction."""
    space = GradedVectorSpace([("x", 1), ("u", 1), ("w", 2)])
    return DgLieAlgebra(space, {("u", "w"): 1}, {("x", "x"): {"w": 1}}, name="lift3")


def bidg_as_dg_lie() -> DgLieAlgebra:
    """The underlying (d-only) dg-Lie algebra of the bi-dg fixture bidg4."""
    space = GradedVectorSpace([("p", 0), ("q", 1), ("r", -1), ("s", 0)])
    bracket = {("q", "r"): {"p": 1}, ("s", "r"): {"r": 1}, ("s", "q"): {"q": -1}}
    return DgLieAlgebra(space, {("r", "p"): 1, ("s", "q"): 1}, bracket, name="bidg4-dglie")


def l3demo() -> LInftyAlgebra:
    """Only a ternary bracket: l_3(x1,x2,x3) = w, everything else zero."""
    space = GradedVectorSpace([("x1", 0), ("x2", 0), ("x3", 0), ("w", -1)])
    shifted = space.shift(1)
    word = tuple(sorted(["x1", "x2", "x3"],
                        key=lambda a: (shifted.degree(a), shifted.index(a))))
    return LInftyAlgebra(space, {3: {word: {"w": 1}}}, name="l3demo")


def dg_lie_fixtures() -> dict[str, DgLieAlgebra]:
    return {
        "abelian2": abelian2(),
        "heis3": heis3(),
        "aff2": aff2(),
        "sl2": sl2(),
        "obst2": obst2(),
        "lift3": lift3(),
        "bidg4-dglie": bidg_as_dg_lie(),
    }


def linfty_fixtures() -> dict[str, LInftyAlgebra]:
    out = {name: alg.to_linfty() for name, alg in dg_lie_fixtures().items()}
    out["l3demo"] = l3demo()
    return out


def ring_fixtures() -> dict[str, ArtinLocalAlgebra]:
    return {
        "k[t]/t2": power_ring(2),
        "k[t]/t3": power_ring(3),
        "k[t]/t4": power_ring(4),
        "k[s,t]/m2": square_zero_ring(),
    }


def get_dg_lie(name: str) -> DgLieAlgebra:
    return dg_lie_fixtures()[name]


def get_ring(name: str) -> ArtinLocalAlgebra:
    return ring_fixtures()[name]


# -- input data for the construction module ----------------------------------

def bialgebra_fixtures() -> dict[str, dict]:
    """Lie bialgebra raw data: bracket, cobracket delta: g -> g wedge g."""
    return {
        # delta = 0: involutive for trivial reasons
        "heis3-zero-cobracket": {
            "basis": [("x", 0), ("y", 0), ("z", 0)],
            "bracket": {("x", "y"): {"z": 1}},
            "cobracket": {},
        },
        # [h,e] = e, delta(e) = h^e: a bialgebra that is not involutive
        "noninv2": {
            "basis": [("h", 0), ("e", 0)],
            "bracket": {("h", "e"): {"e": 1}},
            "cobracket": {"e": {("h", "e"): 1}},
        },
        # [h,e] = e, delta(e) = e^z with z central: involutive with delta != 0
        "inv3": {
            "basis": [("h", 0), ("e", 0), ("z", 0)],
            "bracket": {("h", "e"): {"e": 1}},
            "cobracket": {"e": {("e", "z"): 1}},
        },
    }


def bidg_fixtures() -> dict[str, dict]:
    """Bi-dg-Lie raw data: bracket, d of degree 1, delta of degree -1."""
    return {
        "bidg4": {
            "basis": [("p", 0), ("q", 1), ("r", -1), ("s", 0)],
            "bracket": {("q", "r"): {"p": 1}, ("s", "r"): {"r": 1}, ("s", "q"): {"q": -1}},
            "d": {("r", "p"): 1, ("s", "q"): 1},
            "delta": {("q", "p"): -1, ("s", "r"): 1},
        },
        "abelian-zero": {
            "basis": [("a", 0), ("b", 1)],
            "bracket": {},
            "d": {},
            "delta": {},
        },
    }


def associative_fixtures() -> dict[str, dict]:
    return {
        "ground-field": {
            "basis": [("u", 0)],
            "product": {("u", "u"): {"u": 1}},
        },
        "dual-numbers": {
            "basis": [("u", 0), ("eps", 0)],
            "product": {("u", "u"): {"u": 1}, ("u", "eps"): {"eps": 1},
                        ("eps", "u"): {"eps": 1}, ("eps", "eps"): {}},
        },
        "nonassoc3": {
            "basis": [("u", 0), ("v", 0)],
            "product": {("u", "u"): {"v": 1}, ("u", "v"): {"u": 1}},
        },
    }
