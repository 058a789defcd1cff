from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zkfiber.complex import (
    ComplexError,
    SimplicialComplex,
    boundary_simplex,
    canonical_key,
    card,
    cycle,
    dumps,
    edge_contract,
    edge_stretch,
    from_document,
    full_subcomplex,
    induced_partition,
    isomorphic,
    join,
    link_condition,
    loads,
    members,
    minimal_transversals,
    star_delete,
    to_document,
    vset,
)

from conftest import complexes


def brute_faces(k: SimplicialComplex) -> set[int]:
    return {s for s in range(1 << 12) if s & ~k.vertices == 0 and any(s & f == s for f in k.facets)}


def test_boundary_simplex_has_one_nonface():
    k = boundary_simplex(2)
    assert k.minimal_nonfaces == (0b111,)
    assert sorted(k.facets) == [0b011, 0b101, 0b110]
    assert k.nu() == 3 and k.dim == 1


def test_cycle_nonfaces_are_diagonals():
    k = cycle(5)
    assert sorted(map(members, k.minimal_nonfaces)) == [[0, 2], [0, 3], [1, 3], [1, 4], [2, 4]]


def test_singleton_nonface_rejected():
    with pytest.raises(ComplexError):
        SimplicialComplex.from_nonfaces(0b111, [0b001])


def test_full_simplex_has_no_nonfaces():
    k = SimplicialComplex.from_facets([0b1111])
    assert k.minimal_nonfaces == ()
    assert k.nu() == float("inf")


def test_minimal_transversals_of_a_path():
    # edges 01, 12: minimal covers are {1} and {0,2}
    assert sorted(minimal_transversals([0b011, 0b110])) == [0b010, 0b101]


@settings(max_examples=150, deadline=None)
@given(complexes(max_m=12))
def test_facet_and_nonface_descriptions_agree(k):
    again = SimplicialComplex.from_nonfaces(k.vertices, k.minimal_nonfaces)
    assert sorted(again.facets) == sorted(k.facets)
    faces = brute_faces(k)
    assert set(k.faces()) == faces
    for s in range(1 << k.m):
        assert k.is_face(s) == (s in faces)


@settings(max_examples=100, deadline=None)
@given(complexes(max_m=12))
def test_document_round_trip(k):
    for use in ("facets", "minimal_nonfaces"):
        back = loads(dumps(k, use))
        assert back == k


def test_document_with_both_fields_must_agree():
    doc = {"m": 3, "facets": [[0, 1], [2]], "minimal_nonfaces": [[0, 2], [1, 2]]}
    assert from_document(doc).minimal_nonfaces == (0b101, 0b110)
    bad = {"m": 2, "facets": [[0, 1]], "minimal_nonfaces": [[0, 1]]}
    with pytest.raises(ComplexError, match="contained in a facet"):
        from_document(bad)


def test_parse_error_reports_position():
    with pytest.raises(ComplexError, match="line 2, column"):
        loads('{"m": 2,\n "facets": [[0, 1],]}')


def test_vertex_out_of_range_rejected():
    with pytest.raises(ComplexError, match="integers in 0..1"):
        from_document({"m": 2, "facets": [[0, 5]]})


def test_join_unions_nonfaces():
    k = join(boundary_simplex(1, 0), boundary_simplex(1, 2))
    assert sorted(k.minimal_nonfaces) == [0b0011, 0b1100]
    assert len(k.facets) == 4  # K_{2,2} = C_4


def test_star_delete_adds_the_face_as_nonface():
    k = join(boundary_simplex(1, 0), boundary_simplex(1, 2))
    sd = star_delete(k, 0b0101)
    assert 0b0101 in sd.minimal_nonfaces
    assert not sd.is_face(0b0101) and sd.is_face(0b0001)


def test_star_delete_at_a_vertex_drops_it():
    k = cycle(4)
    sd = star_delete(k, 0b0001)
    assert sd.vertices == 0b1110


def test_star_delete_rejects_nonface():
    with pytest.raises(ComplexError):
        star_delete(cycle(4), 0b0101)


def test_full_subcomplex_and_link():
    k = cycle(5)
    sub = full_subcomplex(k, 0b00111)
    assert sorted(sub.facets) == [0b00011, 0b00110]
    lk = k.link(0b1)
    assert set(lk.facets) == {0b00010, 0b10000}


def labelled_c5():
    # edges {1,5}, {5,2}, {2,3}, {3,4}, {4,1} on vertex ids 1..5
    labels = {v: str(v) for v in range(1, 6)}
    return SimplicialComplex.from_facets([{1, 5}, {5, 2}, {2, 3}, {3, 4}, {4, 1}], labels=labels)


def test_c5_to_c4_contraction():
    k = labelled_c5()
    assert link_condition(k, 1, 5)
    lk1 = k.link(1 << 1).vertices & ~(1 << 5)
    lk5 = k.link(1 << 5).vertices & ~(1 << 1)
    assert (lk1, lk5) == (1 << 4, 1 << 2)
    assert k.link(vset([1, 5])).vertices == 0
    c4, held = edge_contract(k, 1, 5)
    assert held
    assert sorted(map(members, c4.facets)) == [[1, 2], [1, 4], [2, 3], [3, 4]]


def test_link_condition_fails_on_triangle_boundary():
    k = boundary_simplex(2)
    assert not link_condition(k, 0, 1)
    _, held = edge_contract(k, 0, 1)
    assert not held


def test_bipartite_edge_satisfies_link_condition():
    # K_{2,2} on a=0, b=1 | c=2, d=3: lk a ∩ lk c away from the edge is empty
    k = join(boundary_simplex(1, 0), boundary_simplex(1, 2))
    assert link_condition(k, 0, 2)


def test_contract_rejects_nonedge():
    with pytest.raises(ComplexError):
        edge_contract(cycle(4), 0, 2)


def test_stretch_c4_gives_c5():
    c4 = SimplicialComplex.from_facets([{1, 2}, {2, 3}, {3, 4}, {4, 1}])
    c5 = edge_stretch(c4, 1, {4}, {2}, new_vertex=5)
    assert c5 == labelled_c5()


def test_stretch_rejects_uncovering_partition():
    with pytest.raises(ComplexError):
        edge_stretch(cycle(4), 0, {1}, {1})


@settings(max_examples=100, deadline=None)
@given(complexes(min_m=2, max_m=7), st.data())
def test_contract_then_stretch_round_trip(k, data):
    edges = [e for e in k.faces(max_size=2) if card(e) == 2]
    if not edges:
        return
    e = data.draw(st.sampled_from(sorted(edges)))
    u, v = members(e)
    a, b = induced_partition(k, u, v)
    hat, held = edge_contract(k, u, v)
    if held:
        assert edge_stretch(hat, u, a, b, new_vertex=v) == k
    # stretching always yields a link-condition edge that contracts back
    lk = hat.link(1 << u)
    s = edge_stretch(hat, u, lk.vertices, 0, new_vertex=v)
    assert link_condition(s, u, v)
    assert edge_contract(s, u, v)[0] == hat


@settings(max_examples=60, deadline=None)
@given(complexes(max_m=6), st.permutations(range(6)))
def test_isomorphism_detects_relabeling(k, perm):
    moved = k.relabeled({v: perm[v] for v in k.vertex_list()})
    assert isomorphic(k, moved)


def test_isomorphism_distinguishes():
    path = SimplicialComplex.from_facets([{0, 1}, {1, 2}, {2, 3}])
    assert not isomorphic(cycle(4), path)
    assert isomorphic(cycle(4), join(boundary_simplex(1, 0), boundary_simplex(1, 2)))


def test_canonical_key_equal_means_same_shape():
    assert canonical_key(cycle(5)) == canonical_key(cycle(5, offset=3))


def test_document_is_stable():
    k = cycle(5)
    assert json.loads(dumps(k)) == to_document(k)
    assert dumps(k) == dumps(loads(dumps(k)))
