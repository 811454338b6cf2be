"""The bundled corpus of decomposition data.

Every fixture is small enough to run the length-4 invariant and degree-4
surjectivity checks at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .quiver import DecompositionData, DimensionVector, Quiver, Summand, build_quiver


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    data: DecompositionData

    def to_json(self) -> dict:
        return {"name": self.name, "description": self.description,
                "decomposition": self.data.to_json()}


def _d(genus, *summands, ambient="orthogonal"):
    return DecompositionData(genus, tuple(Summand(*s) for s in summands), ambient=ambient)


_CORPUS = (
    Fixture("trivial-O2-g2", "trivial rank 2 orthogonal bundle, genus 2",
            _d(2, ("orthogonal", 1, 2))),
    Fixture("trivial-O3-g2", "trivial rank 3 orthogonal bundle, genus 2",
            _d(2, ("orthogonal", 1, 3))),
    Fixture("trivial-O2-g3", "trivial rank 2 orthogonal bundle, genus 3",
            _d(3, ("orthogonal", 1, 2))),
    Fixture("two-orth-r1-g2", "two distinct orthogonal line bundles, genus 2",
            _d(2, ("orthogonal", 1, 1), ("orthogonal", 1, 1))),
    Fixture("two-orth-r1-g3", "two distinct orthogonal line bundles, genus 3",
            _d(3, ("orthogonal", 1, 1), ("orthogonal", 1, 1))),
    Fixture("orth-r1m2-r1m1-g2", "L (x) k^2 + M with L, M orthogonal line bundles, genus 2",
            _d(2, ("orthogonal", 1, 2), ("orthogonal", 1, 1))),
    Fixture("symplectic-r2m2-g2", "symplectic double F (x) k^2, rank F = 2, genus 2",
            _d(2, ("symplectic", 2, 2))),
    Fixture("hyperbolic-r1-g2", "hyperbolic sum L + L^-1, genus 2",
            _d(2, ("dual_pair", 1, 1))),
    Fixture("hyperbolic-r1m2-g2", "(L + L^-1) (x) k^2, genus 2",
            _d(2, ("dual_pair", 1, 2))),
    Fixture("rank3-OLL-g2", "O + L + L^-1, genus 2",
            _d(2, ("orthogonal", 1, 1), ("dual_pair", 1, 1))),
    Fixture("plain-r1m2-g2", "L (x) k^2 with no form (GL-type point), genus 2",
            _d(2, ("plain", 1, 2))),
)

FIXTURES = {f.name: f for f in _CORPUS}


def fixture_names() -> list[str]:
    return [f.name for f in _CORPUS]


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; try 'fixtures list'") from None


def list_fixtures() -> list[dict]:
    return [f.to_json() for f in _CORPUS]


def _sign_quiver(arrows):
    verts = sorted({v for _, a, b in arrows for v in (a, b)})
    q = build_quiver(verts, ["orthogonal"] * len(verts), arrows)
    return q, DimensionVector({v: 1 for v in verts})


# Orthogonal quivers with all dimensions 1, where the group is {+-1}^n and
# invariants can be cross-checked against explicit averaging.
QUIVER_FIXTURES: dict[str, tuple[Quiver, DimensionVector]] = {
    "sign-loops3": _sign_quiver([(0, "s1", "s1"), (1, "s1", "s1"), (2, "s1", "s1")]),
    "sign-cycle": _sign_quiver([(0, "s1", "s2"), (1, "s2", "s1"), (2, "s1", "s1")]),
    "sign-parallel": _sign_quiver([(0, "s1", "s2"), (1, "s1", "s2"), (2, "s2", "s2")]),
}
