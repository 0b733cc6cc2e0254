import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from kstfree.errors import BadParameters, BudgetExceeded, FormatError, PatternTooLarge, VertexOutOfRange
from kstfree.hypergraph import complete_hypergraph, cover_hypergraph, hg_build, random_hypergraph
from kstfree.verifier import (
    BipartitePattern,
    Embedding,
    RichCertificate,
    common_link,
    complete_bipartite,
    even_cycle,
    find_Kst,
    find_matching,
    find_pattern,
    is_t_rich,
    parse_certificate,
    parse_embedding,
    parse_pattern,
)
from oracles import naive_has_Kst, naive_has_pattern, naive_max_disjoint


@st.composite
def set_systems(draw):
    n = draw(st.integers(2, 8))
    k = draw(st.integers(1, 3))
    pool = list(combinations(range(n), k)) if k <= n else []
    return draw(st.lists(st.sampled_from(pool), max_size=10)) if pool else []


@settings(max_examples=200, deadline=None)
@given(set_systems(), st.integers(0, 4))
def test_matching_agrees_with_brute_force(sets, t):
    found = find_matching(sets, t)
    best = naive_max_disjoint(set(sets))
    assert (found is not None) == (t <= best)
    if found is not None:
        assert len(found) == t
        assert all(set(a).isdisjoint(b) for a, b in combinations(found, 2))
        assert set(found) <= set(sets)


def test_matching_needs_backtracking():
    # the only 2-matching is {0,1},{2,3}
    sets = [(0, 1), (1, 2), (2, 3)]
    assert find_matching(sets, 2) == [(0, 1), (2, 3)]


def test_budget_raises():
    H = complete_hypergraph(3, 9)
    with pytest.raises(BudgetExceeded):
        find_Kst(H, 2, 4, budget=3)


def graph_strategy(r, n, max_edges):
    return st.lists(st.sampled_from(list(combinations(range(n), r))), max_size=max_edges).map(
        lambda es: hg_build(r, n, es)
    )


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_find_Kst_agrees_with_brute_force(data):
    r = data.draw(st.integers(2, 3))
    n = data.draw(st.integers(r + 1, 7))
    H = data.draw(graph_strategy(r, n, 25))
    s = data.draw(st.integers(1, 2))
    t = data.draw(st.integers(1, 3))
    cert = find_Kst(H, s, t)
    assert (cert is not None) == naive_has_Kst(r, n, H.edges, s, t)
    if cert is not None:
        assert cert.is_valid(H) and cert.s == s and cert.t == t
        # first in lexicographic order
        for S in combinations(range(n), s):
            if S == cert.S:
                break
            assert is_t_rich(H, S, t) is None


def test_is_t_rich_and_common_link():
    H = hg_build(3, 6, [(0, 1, 2), (0, 3, 4), (1, 3, 4), (1, 2, 5), (0, 2, 5)])
    assert common_link(H, (0, 1)) == [(2, 5), (3, 4)]
    cert = is_t_rich(H, (0,), 2)
    assert cert is not None and cert.is_valid(H)
    with pytest.raises(VertexOutOfRange):
        common_link(H, (9,))
    with pytest.raises(BadParameters):
        is_t_rich(H, (), 1)


def test_common_link_small_cases():
    H = hg_build(3, 5, [(0, 1, 2), (0, 2, 3), (1, 2, 3)])
    assert common_link(H, (0, 1)) == [(2, 3)]
    assert common_link(H, (2,)) == [(0, 1), (0, 3), (1, 3)]
    assert common_link(H, (0, 2)) == []


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_find_pattern_agrees_with_brute_force(data):
    n = data.draw(st.integers(5, 7))
    H = data.draw(graph_strategy(3, n, 20))
    P = data.draw(st.sampled_from([even_cycle(2), complete_bipartite(1, 2), complete_bipartite(2, 1),
                                   BipartitePattern(2, ((0,), (0, 1)))]))
    if P.vertex_count(3) > n:
        return
    emb = find_pattern(H, P)
    assert (emb is not None) == naive_has_pattern(3, n, H.edges, P.x_size, P.y_adj)
    if emb is not None:
        assert emb.is_valid(H)


def test_find_pattern_cycle_in_dense_graph():
    H = random_hypergraph(3, 12, 0.7, random.Random(2))
    emb = find_pattern(H, even_cycle(3))
    assert emb is not None and emb.is_valid(H)


def test_kst_via_pattern_matches_find_Kst():
    rng = random.Random(4)
    for _ in range(20):
        H = random_hypergraph(3, 7, rng.uniform(0.2, 0.6), rng)
        a = find_Kst(H, 2, 2) is not None
        b = find_pattern(H, complete_bipartite(2, 2)) is not None
        assert a == b


def test_cover_graph_has_no_long_cycle():
    # every edge meets {0}; a C_4 needs cover number 2
    H = cover_hypergraph(3, 8, [0])
    assert find_pattern(H, even_cycle(2)) is None


def test_pattern_errors():
    with pytest.raises(BadParameters):
        BipartitePattern(2, ((),))
    with pytest.raises(BadParameters):
        BipartitePattern(2, ((0, 2),))
    with pytest.raises(BadParameters):
        even_cycle(1)
    with pytest.raises(PatternTooLarge):
        find_pattern(complete_hypergraph(3, 5), even_cycle(2))
    with pytest.raises(BadParameters):
        find_pattern(complete_hypergraph(3, 7), even_cycle(2), r=4)


def test_invalid_embeddings_rejected():
    H = complete_hypergraph(3, 7)
    P = even_cycle(2)
    assert Embedding(P, (0, 1), ((2, 3), (4, 5))).is_valid(H)
    assert not Embedding(P, (0, 1), ((2, 3), (3, 5))).is_valid(H)
    assert not Embedding(P, (0, 1), ((2, 3), (4,))).is_valid(H)
    assert not Embedding(P, (0, 1), ((2, 3), (4, 9))).is_valid(H)
    assert not RichCertificate((0, 1), ((0, 2),)).is_valid(H)


def test_text_roundtrips():
    cert = RichCertificate((0, 3), ((1, 2), (4, 5)))
    text = cert.to_text()
    assert text == "certificate s=2 t=2\n0 3\n1 2\n4 5\n"
    assert parse_certificate(text) == cert
    emb = Embedding(even_cycle(3), (0, 1, 2), ((3, 4), (5, 6), (7, 8)))
    assert emb.to_text().startswith("pattern x=3 y=3 adj=0,1;1,2;0,2\ncertificate s=3 t=3\n")
    assert parse_embedding(emb.to_text()) == emb
    P = even_cycle(4)
    assert parse_pattern(P.to_text()) == P


@pytest.mark.parametrize(
    "text",
    ["", "certificate s=2\n0 1\n", "certificate s=2 t=1\n0 1\n", "certificate s=2 t=1\n0\n1 2\n",
     "certificate s=1 t=1\n0\n1 x\n"],
)
def test_certificate_errors(text):
    with pytest.raises(FormatError):
        parse_certificate(text)


@pytest.mark.parametrize("text", ["", "pattern 2\n", "pattern 2 2\n0 1\n", "pattern 2 1\n0 5\n", "pattern 2 1\n\n"])
def test_pattern_errors_in_text(text):
    with pytest.raises(FormatError):
        parse_pattern(text)
