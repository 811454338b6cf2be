import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoquiv.errors import GenusTooSmall
from orthoquiv.fixtures import FIXTURES
from orthoquiv.groups import h1_values
from orthoquiv.local_models import (
    NOT_CLASSIFIED,
    PFAFFIAN_NOTE,
    SINGULAR,
    SMOOTH_EXC,
    SMOOTH_RS,
    aut_group,
    classify_smoothness,
    ext_dims,
    hyperbolic_multiplicity,
    local_model_report,
    orientation_fibers,
)
from orthoquiv.quiver import DecompositionData, Summand

from oracles import segre_multiplicity


def D(g, *summands, ambient="orthogonal"):
    return DecompositionData(g, tuple(Summand(*s) for s in summands), ambient=ambient)


# dimensions

def test_orthogonal_rank_two():
    e = ext_dims(D(2, ("orthogonal", 2, 1)))
    blk = e.blocks[0]
    assert (blk.h1_sym, blk.h1_alt) == (4, 1)
    assert e.ext1_asym_dim == 1
    assert e.ext1_dim == 5


@pytest.mark.parametrize("r,g", [(1, 2), (2, 2), (3, 3), (4, 2)])
def test_trivial_bundle_dims(r, g):
    ext1, asym, _ = ext_dims(D(g, ("orthogonal", 1, r)))
    assert asym == g * r * (r - 1) // 2
    assert ext1 == g * r * r


def test_dual_pair_line_bundle():
    e = ext_dims(D(2, ("dual_pair", 1, 1)))
    assert e.asym == 2
    assert e.ext1_dim == 2 * 2 + 2 * 1


def test_genus_one_rejected():
    with pytest.raises(GenusTooSmall):
        ext_dims(D(1, ("orthogonal", 1, 2)))
    with pytest.raises(GenusTooSmall):
        classify_smoothness(D(1, ("orthogonal", 3, 1)))


@given(st.sampled_from(["orthogonal", "symplectic"]), st.integers(1, 6), st.integers(2, 6),
       st.booleans())
def test_h1_consistency(kind, r, g, swap):
    h0 = (1, 0) if kind == "orthogonal" else (0, 1)
    if swap:
        h0 = h0[::-1]
    h1s, h1a = h1_values(r, g, *h0)
    assert h1s + h1a == r * r * (g - 1) + 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_asym_never_exceeds_ext1(name):
    e = ext_dims(FIXTURES[name].data)
    assert 0 <= e.ext1_asym_dim <= e.ext1_dim


# multiplicity

def test_multiplicity_values():
    assert [hyperbolic_multiplicity(d) for d in (1, 2, 3)] == [1, 2, 6]
    with pytest.raises(ValueError):
        hyperbolic_multiplicity(0)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_multiplicity_matches_segre_cone(d):
    assert hyperbolic_multiplicity(d) == segre_multiplicity(d)


def test_segre_oracle_frozen_values():
    assert [segre_multiplicity(d) for d in (2, 3, 4)] == [2, 6, 20]


def test_hyperbolic_report_multiplicity_two():
    # F of rank 2 on a genus-3 curve: h1(Lambda^2 F*) = 2
    rep = local_model_report(D(3, ("dual_pair", 2, 1)))
    assert rep.multiplicity == 2
    assert rep.smoothness == SINGULAR


def test_multiplicity_only_for_hyperbolic_points():
    assert local_model_report(FIXTURES["trivial-O3-g2"].data).multiplicity is None
    assert local_model_report(FIXTURES["hyperbolic-r1-g2"].data).multiplicity is not None


# classification

GOLDEN = [
    (D(2, ("orthogonal", 5, 1)), "SO", SMOOTH_RS),
    (D(3, ("orthogonal", 5, 1)), "SO", SMOOTH_RS),
    (D(3, ("orthogonal", 2, 1), ("orthogonal", 2, 1)), "O", SINGULAR),
    (D(3, ("dual_pair", 2, 1)), "SO", SINGULAR),
    (D(2, ("symplectic", 2, 2)), "SO", SMOOTH_EXC),
    (D(3, ("symplectic", 2, 2)), "SO", SINGULAR),
    (D(2, ("orthogonal", 1, 1), ("dual_pair", 1, 1)), "SO", SMOOTH_EXC),
    (D(3, ("orthogonal", 1, 1), ("dual_pair", 1, 1)), "SO", SINGULAR),
    (D(2, ("orthogonal", 1, 3)), "SO", SMOOTH_EXC),
    (D(3, ("orthogonal", 1, 1), ("orthogonal", 3, 1)), "SO", SMOOTH_RS),
]


@pytest.mark.parametrize("d,group,verdict", GOLDEN)
def test_golden_table(d, group, verdict):
    assert classify_smoothness(d, group).smoothness == verdict


def test_two_odd_summands_are_not_smooth_for_o():
    d = D(3, ("orthogonal", 1, 1), ("orthogonal", 3, 1))
    assert classify_smoothness(d, "O").smoothness == SINGULAR


def test_symplectic_double_not_singular_only_at_genus_two():
    assert classify_smoothness(D(2, ("symplectic", 2, 2))).smoothness != SINGULAR
    for g in (3, 4):
        assert classify_smoothness(D(g, ("symplectic", 2, 2))).smoothness == SINGULAR


def test_small_rank_is_not_classified():
    v = classify_smoothness(FIXTURES["trivial-O2-g2"].data)
    assert v.smoothness == NOT_CLASSIFIED and v.notes


def test_unlisted_genus_two_shape_is_not_classified():
    v = classify_smoothness(D(2, ("orthogonal", 1, 2), ("orthogonal", 1, 1)))
    assert v.smoothness == NOT_CLASSIFIED and v.notes


def test_sp_group():
    assert classify_smoothness(D(2, ("symplectic", 4, 1), ambient="symplectic"), "Sp").smoothness \
        == SMOOTH_RS
    assert classify_smoothness(D(2, ("symplectic", 2, 1), ("symplectic", 2, 1),
                                 ambient="symplectic"), "Sp").smoothness == SINGULAR


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_regularly_stable_has_central_isotropy(name):
    d = FIXTURES[name].data
    if classify_smoothness(d).smoothness == SMOOTH_RS:
        assert all(b.kind == "O" and b.size == 1 for b in aut_group(d).blocks)


# orientation

ORIENTATION = [
    (D(2, ("orthogonal", 3, 1)), 1),
    (D(2, ("orthogonal", 2, 1), ("orthogonal", 4, 1)), 2),
    (D(2, ("symplectic", 2, 2)), 2),
    (D(2, ("dual_pair", 1, 1)), 2),
    (D(2, ("orthogonal", 1, 1), ("orthogonal", 2, 1)), 1),
    (D(2, ("orthogonal", 1, 1), ("dual_pair", 1, 1)), 1),
]


@pytest.mark.parametrize("d,fibers", ORIENTATION)
def test_orientation_table(d, fibers):
    assert orientation_fibers(d) == fibers


@pytest.mark.parametrize("d,fibers", ORIENTATION)
def test_det_minus_one_reachable_iff_one_fiber(d, fibers):
    spec = aut_group(d, oriented=True)
    assert spec.det_minus_one_reachable == (fibers == 1)


# automorphism groups

def test_aut_group_examples():
    assert [(b.kind, b.size) for b in aut_group(D(2, ("orthogonal", 2, 3))).blocks] == [("O", 3)]
    assert [(b.kind, b.size) for b in aut_group(D(2, ("symplectic", 2, 2))).blocks] == [("Sp", 2)]
    blk = aut_group(D(2, ("dual_pair", 1, 3))).blocks[0]
    assert (blk.kind, blk.size, blk.vertex, blk.dual) == ("GL", 3, "u1", "u1*")


def test_report_json_fields():
    doc = local_model_report(FIXTURES["trivial-O2-g2"].data).to_json()
    assert set(doc) == {"ext1_dim", "ext1_asym_dim", "aut_group", "orientation_fibers",
                        "smoothness", "multiplicity", "notes"}
    assert PFAFFIAN_NOTE in doc["notes"]
