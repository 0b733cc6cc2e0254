import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from kstfree.errors import BadArity, FormatError, PartiteViolation, VertexOutOfRange
from kstfree.hypergraph import (
    codegree,
    codegree_prune,
    complete_hypergraph,
    cover_hypergraph,
    format_hyp,
    hg_build,
    link,
    parse_hyp,
    random_hypergraph,
    read_hyp,
    star_hypergraph,
    write_hyp,
)
from oracles import naive_codegree, naive_links, naive_prune


@st.composite
def hypergraphs(draw, r_max=4, n_max=8):
    r = draw(st.integers(2, r_max))
    n = draw(st.integers(r, n_max))
    all_edges = list(combinations(range(n), r))
    chosen = draw(st.lists(st.sampled_from(all_edges), max_size=len(all_edges))) if all_edges else []
    return hg_build(r, n, chosen)


def test_build_sorts_and_dedups():
    H = hg_build(3, 5, [(2, 1, 0), (0, 1, 2), (4, 3, 1)])
    assert H.edges == ((0, 1, 2), (1, 3, 4))
    assert H.e == 2 and len(H) == 2
    assert H.has_edge((2, 0, 1)) and not H.has_edge((0, 1, 3))


def test_build_errors():
    with pytest.raises(BadArity):
        hg_build(3, 5, [(0, 1)])
    with pytest.raises(BadArity):
        hg_build(3, 5, [(0, 0, 1)])
    with pytest.raises(VertexOutOfRange):
        hg_build(3, 5, [(0, 1, 5)])
    with pytest.raises(PartiteViolation):
        hg_build(2, 4, [(0, 1)], parts=(2, 2))
    with pytest.raises(PartiteViolation):
        hg_build(2, 4, [(0, 2)], parts=(2, 1))
    H = hg_build(2, 4, [(0, 2), (1, 3)], parts=(2, 2))
    assert H.partite and H.part_of(0) == 0 and H.part_of(3) == 1


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_indexes_match_naive(H):
    links = naive_links(H.edges, H.n)
    for v in range(H.n):
        assert set(H.links[v]) == links[v]
        assert set(link(H, v).edges) == links[v]
        assert H.degree(v) == len(links[v])
    for S in combinations(range(H.n), H.r - 1):
        assert codegree(H, S) == naive_codegree(H.edges, S)
    for sub, d in H.codegree_index.items():
        assert d == naive_codegree(H.edges, sub) > 0


@settings(max_examples=150, deadline=None)
@given(hypergraphs(r_max=4, n_max=7), st.integers(1, 4), st.randoms(use_true_random=False))
def test_prune_matches_naive_fixpoint(H, D, rng):
    want = naive_prune(H.r, H.edges, D)
    assert list(codegree_prune(H, D).edges) == want
    assert list(codegree_prune(H, D, rng).edges) == want


@settings(max_examples=100, deadline=None)
@given(hypergraphs(r_max=4, n_max=7), st.integers(1, 4))
def test_prune_result_is_a_core(H, D):
    P = codegree_prune(H, D)
    assert set(P.edges) <= set(H.edges)
    for e in P.edges:
        for sub in combinations(e, H.r - 1):
            assert naive_codegree(P.edges, sub) >= D
    assert codegree_prune(P, D) == P


def test_codegree_arity_checked():
    H = complete_hypergraph(3, 5)
    with pytest.raises(BadArity):
        codegree(H, (0,))
    with pytest.raises(BadArity):
        codegree(H, (1, 1))


def test_prune_threshold_one_is_identity():
    H = random_hypergraph(3, 8, 0.4, random.Random(3))
    assert codegree_prune(H, 1) == H


def test_builders():
    assert complete_hypergraph(3, 6).e == comb(6, 3)
    assert star_hypergraph(3, 7).e == comb(6, 2)
    C = cover_hypergraph(3, 9, [0, 1])
    assert C.e == comb(9, 3) - comb(7, 3)
    assert all({0, 1} & set(e) for e in C.edges)


@settings(max_examples=80, deadline=None)
@given(hypergraphs())
def test_hyp_roundtrip(H):
    assert parse_hyp(format_hyp(H)) == H


def test_hyp_roundtrip_with_parts(tmp_path):
    H = hg_build(2, 5, [(0, 2), (1, 4)], parts=(2, 3))
    path = tmp_path / "g.hyp"
    write_hyp(H, path)
    assert path.read_text() == "hyp 2 5 2\nparts 2 2 3\n0 2\n1 4\n"
    G = read_hyp(path)
    assert G == H and G.partite


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("graph 3 4 0\n", 1),
        ("hyp 3 4 2\n0 1 2\n", 2),
        ("hyp 3 4 1\n0 1\n", 2),
        ("hyp 3 4 1\n2 1 0\n", 2),
        ("hyp 3 4 1\n0 1 4\n", 2),
        ("hyp 3 4 2\n0 1 2\n0 1 2\n", 3),
        ("hyp 3 4 1\n0 x 2\n", 2),
        ("hyp 2 4 1\nparts 2 2 2\n0 1\n", 3),
        ("hyp 2 4 0\nparts 2 2 1\n", 2),
    ],
)
def test_hyp_format_errors_carry_line(text, line):
    with pytest.raises(FormatError) as info:
        parse_hyp(text, path="in.hyp")
    assert info.value.line == line
    assert str(info.value).startswith(f"in.hyp:{line}:")


def test_read_missing_file_is_format_error(tmp_path):
    with pytest.raises(FormatError):
        read_hyp(tmp_path / "missing.hyp")
