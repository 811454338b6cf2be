import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthoquiv.errors import (
    DuplicateArrowId,
    GenusTooSmall,
    InvalidDecomposition,
    NotComposable,
    UnknownVertex,
    UnpairedDualVertex,
)
from orthoquiv.fixtures import FIXTURES
from orthoquiv.quiver import (
    Cycle,
    DecompositionData,
    DimensionVector,
    Quiver,
    Summand,
    build_quiver,
    check_closed,
    double,
    enumerate_cycles,
    from_decomposition,
)

from oracles import brute_force_necklaces, one_vertex_necklace_count


def loops(k, kind="orthogonal"):
    return build_quiver(["s1"], [kind], [(i, "s1", "s1") for i in range(k)])


# build_quiver

def test_single_vertex_no_arrows():
    q = build_quiver(["s1"], ["plain"], [])
    assert q.arrows == ()


def test_dangling_arrow_rejected():
    with pytest.raises(UnknownVertex):
        build_quiver(["s1"], ["plain"], [(0, "s1", "s2")])


def test_two_cycle_quiver():
    q = build_quiver(["s1", "s2"], ["plain", "plain"], [(0, "s1", "s2"), (1, "s2", "s1")])
    assert len(q.arrows) == 2


def test_duplicate_arrow_id():
    with pytest.raises(DuplicateArrowId):
        build_quiver(["s1"], ["plain"], [(0, "s1", "s1"), (0, "s1", "s1")])


def test_unpaired_dual_vertex():
    with pytest.raises(UnpairedDualVertex):
        build_quiver(["u"], ["dual_pair_left"], [])
    with pytest.raises(UnpairedDualVertex):
        build_quiver(["u", "v"], ["dual_pair_left", "dual_pair_right"], [],
                     partners={"u": "v"})


def test_dual_vertices_pair_by_order():
    q = build_quiver(["a", "b", "a*", "b*"],
                     ["dual_pair_left", "dual_pair_left", "dual_pair_right", "dual_pair_right"], [])
    assert q.sigma("a") == "a*" and q.sigma("b*") == "b"
    assert q.sigma("a") != "a"


# double

def test_double_single_loop():
    dq = double(loops(1))
    assert len(dq.arrows) == 2
    a_star = dq.star(0)
    assert dq.star(a_star) == 0
    assert dq.arrow(a_star).src == "s1" == dq.arrow(a_star).dst
    assert dq.sign[0] == 1 and dq.sign[a_star] == -1


def test_double_no_arrows():
    dq = double(build_quiver(["s1"], ["orthogonal"], []))
    assert dq.arrows == () and dq.pairing == {}


def test_double_dual_pair_loop_goes_to_partner():
    q = build_quiver(["u", "u*"], ["dual_pair_left", "dual_pair_right"], [(0, "u", "u")])
    dq = double(q)
    star = dq.arrow(dq.star(0))
    assert (star.src, star.dst) == ("u*", "u*")


def test_double_plain_gets_partner():
    q = build_quiver(["r1"], ["plain"], [(0, "r1", "r1")])
    dq = double(q)
    assert "r1*" in dq.vertices
    star = dq.arrow(dq.star(0))
    assert (star.src, star.dst) == ("r1*", "r1*")


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 3))
def test_double_pairing_is_fixed_point_free_involution(n_loops, n_ab, n_ba):
    arrows = [(i, "s1", "s1") for i in range(n_loops)]
    arrows += [(10 + i, "s1", "s2") for i in range(n_ab)]
    arrows += [(20 + i, "s2", "s1") for i in range(n_ba)]
    q = build_quiver(["s1", "s2"], ["orthogonal", "symplectic"], arrows)
    dq = double(q)
    assert len(dq.arrows) == 2 * len(q.arrows)
    for a in dq.arrows:
        assert dq.star(a.id) != a.id
        assert dq.star(dq.star(a.id)) == a.id
        assert dq.sign[a.id] == -dq.sign[dq.star(a.id)]
    assert dict(dq.sigma) == {"s1": "s1", "s2": "s2"}


# cycles

def test_two_loops_length_two():
    cs = enumerate_cycles(loops(2), 2)
    assert [c.word for c in cs] == [(0,), (1,), (0, 0), (0, 1), (1, 1)]


def test_acyclic_has_no_cycles():
    q = build_quiver(["s1", "s2"], ["plain", "plain"], [(0, "s1", "s2")])
    for n in (1, 3, 6):
        assert enumerate_cycles(q, n) == []


def test_two_cycle_only_ab():
    q = build_quiver(["s1", "s2"], ["plain", "plain"], [(0, "s1", "s2"), (1, "s2", "s1")])
    assert [c.word for c in enumerate_cycles(q, 2)] == [(0, 1)]


def test_max_len_must_be_positive():
    with pytest.raises(ValueError):
        enumerate_cycles(loops(1), 0)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_one_vertex_count_matches_brute_force(k, length):
    assert len(enumerate_cycles(loops(k), length)) == one_vertex_necklace_count(k, length)


def test_five_cycle_example():
    # one vertex with two loops, words up to length 5: 2 + 3 + 4 + 6 + 8
    assert len(enumerate_cycles(loops(2), 5)) == 23


@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc")), min_size=1, max_size=5),
       st.integers(1, 4))
def test_multigraph_cycles_match_brute_force(edges, max_len):
    arrows = {i: e for i, e in enumerate(edges)}
    q = build_quiver(["a", "b", "c"], ["plain"] * 3, [(i, s, t) for i, (s, t) in arrows.items()])
    got = enumerate_cycles(q, max_len)
    expect = brute_force_necklaces(arrows, max_len)
    assert {frozenset(c.word[i:] + c.word[:i] for i in range(len(c))) for c in got} == expect
    assert len(got) == len(expect)
    assert got == sorted(got, key=Cycle.sort_key)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6), st.integers(0, 5))
def test_rotations_compare_equal(word, shift):
    shift %= len(word)
    assert Cycle(tuple(word)) == Cycle(tuple(word[shift:] + word[:shift]))


def test_check_closed():
    q = build_quiver(["s1", "s2"], ["plain", "plain"], [(0, "s1", "s2"), (1, "s2", "s1")])
    check_closed(q, (0, 1))
    with pytest.raises(NotComposable):
        check_closed(q, (0, 0))


# decompositions

def _arrows_between(q, v, w):
    return len(q.arrows_between(v, w))


def test_two_orthogonal_rank_one():
    d = DecompositionData(2, (Summand("orthogonal", 1, 2), Summand("orthogonal", 1, 3)))
    q, alpha, spec = from_decomposition(d)
    assert _arrows_between(q, "s1", "s1") == 2 and _arrows_between(q, "s2", "s2") == 2
    assert _arrows_between(q, "s1", "s2") == 1 and _arrows_between(q, "s2", "s1") == 1
    assert (alpha["s1"], alpha["s2"]) == (2, 3)
    assert [(b.kind, b.size) for b in spec.blocks] == [("O", 2), ("O", 3)]


@pytest.mark.parametrize("r,g", [(2, 2), (3, 4), (1, 5)])
def test_trivial_bundle_model(r, g):
    q, alpha, spec = from_decomposition(DecompositionData(g, (Summand("orthogonal", 1, r),)))
    assert q.vertices == ("s1",) and len(q.arrows) == g
    assert [(b.kind, b.size) for b in spec.blocks] == [("O", r)]


def test_plain_rank_two_genus_three():
    q, _, _ = from_decomposition(DecompositionData(3, (Summand("plain", 2, 1),)))
    assert len(q.arrows) == 9


def test_genus_one_rejected():
    with pytest.raises(GenusTooSmall):
        from_decomposition(DecompositionData(1, (Summand("orthogonal", 1, 2),)))


def test_symplectic_factor_gets_symplectic_multiplicity_space():
    q, alpha, spec = from_decomposition(DecompositionData(2, (Summand("symplectic", 2, 2),)))
    assert q.kind("t1") == "symplectic"
    assert spec.blocks[0].kind == "Sp" and alpha.is_admissible(q)


def test_odd_multiplicity_for_mismatched_parity_rejected():
    with pytest.raises(InvalidDecomposition):
        DecompositionData(2, (Summand("symplectic", 2, 1),))


summand_st = st.builds(
    Summand,
    st.sampled_from(["orthogonal", "dual_pair"]),
    st.integers(1, 2),
    st.integers(1, 3),
)


@given(st.lists(summand_st, min_size=1, max_size=3), st.integers(2, 4))
def test_total_ext1_identity(summands, g):
    d = DecompositionData(g, tuple(summands))
    q, alpha, _ = from_decomposition(d)
    from orthoquiv.quiver import vertex_info
    info = vertex_info(d)
    lhs = sum(alpha[a.src] * alpha[a.dst] for a in q.arrows)
    rank_sum = sum(info[v].rank * alpha[v] for v in q.vertices)
    rhs = rank_sum ** 2 * (g - 1) + sum(alpha[v] ** 2 for v in q.vertices)
    assert lhs == rhs


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_json_roundtrip(name):
    d = FIXTURES[name].data
    doc = json.loads(json.dumps(d.to_json()))
    assert DecompositionData.from_json(doc) == d
    q, _, _ = from_decomposition(d)
    assert Quiver.from_json(json.loads(json.dumps(q.to_json()))).arrows == q.arrows


def test_quiver_json_field_names():
    q = build_quiver(["s1"], ["orthogonal"], [(0, "s1", "s1")])
    assert q.to_json() == {"vertices": [{"id": "s1", "kind": "orthogonal"}],
                           "arrows": [{"id": 0, "src": "s1", "dst": "s1"}]}


def test_decomposition_json_field_names():
    d = DecompositionData(2, (Summand("orthogonal", 1, 2),))
    assert d.to_json() == {"genus": 2, "summands": [
        {"kind": "orthogonal", "rank": 1, "multiplicity": 2, "h0_sym": 1, "h0_alt": 0}]}


def test_summand_defaults():
    assert (Summand("symplectic", 2).h0_sym, Summand("symplectic", 2).h0_alt) == (0, 1)
    assert (Summand("dual_pair", 1).h0_sym, Summand("dual_pair", 1).h0_alt) == (0, 0)


def test_admissibility():
    q = build_quiver(["t", "u", "u*"], ["symplectic", "dual_pair_left", "dual_pair_right"], [])
    assert DimensionVector({"t": 2, "u": 1, "u*": 1}).is_admissible(q)
    assert not DimensionVector({"t": 3, "u": 1, "u*": 1}).is_admissible(q)
    assert not DimensionVector({"t": 2, "u": 2, "u*": 1}).is_admissible(q)
