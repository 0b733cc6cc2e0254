"""Greedy constructions that turn a rich vertex set into a copy of a pattern.

These are the constructive steps of the upper-bound arguments: build the
graph of rich pairs on a candidate set, peel it to a dense core, then embed
C_{2t}^{(r)} or G_{X,Y}^{(r)} greedily.  All choices are lexicographic and
nothing backtracks, so ``NotFound`` only means the greedy procedure stopped;
:func:`kstfree.verifier.find_pattern` is the complete search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .drc import DrcAnalysis, DrcParams, DrcSampler
from .errors import EmptyAfterPrune, InternalError, PatternTooLarge
from .hypergraph import UniformHypergraph
from .verifier import BipartitePattern, Embedding, common_link, even_cycle, is_t_rich

EXHAUSTIVE_BELOW = 60


@dataclass(frozen=True)
class NotFound:
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class RichPairGraph:
    vertices: tuple[int, ...]
    edges: frozenset
    q: int

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree_within(self, u: int, subset) -> int:
        return sum(1 for v in subset if v != u and self.adjacent(u, v))

    def non_edges(self) -> int:
        return comb(len(self.vertices), 2) - len(self.edges)


def rich_pair_graph(H: UniformHypergraph, A, q: int, budget=None) -> RichPairGraph:
    A = tuple(sorted(set(A)))
    edges = frozenset(
        (u, v) for u, v in combinations(A, 2) if is_t_rich(H, (u, v), q, budget) is not None
    )
    return RichPairGraph(A, edges, q)


def peel(G: RichPairGraph, fraction=Fraction(3, 4)) -> tuple[int, ...]:
    """Repeatedly drop the smallest vertex whose degree inside the current
    set is below ``fraction`` times the set's size."""
    fraction = Fraction(fraction)
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    current = list(G.vertices)
    removed = 0
    while current:
        size = len(current)
        for u in current:
            if G.degree_within(u, current) < fraction * size:
                current.remove(u)
                removed += 1
                break
        else:
            break
    size0 = len(G.vertices)
    # deleting half of a set of size >= 32 forces more than C(|A|,2)/100 non-rich pairs
    if size0 >= 32 and 2 * removed >= size0 and 100 * G.non_edges() <= comb(size0, 2):
        raise InternalError("peel removed half the set although almost all pairs are rich")
    return tuple(current)


def _desk_params(H: UniformHypergraph, q: int, alpha=Fraction(100)) -> DrcParams:
    # s = 2 gives D = (C/2) alpha q; this C makes D = 1, i.e. no pruning
    return DrcParams(2, q, H.r, alpha, Fraction(2) / (alpha * q), H.n)


def _choose_A(H, params, mode, seeds):
    if mode == "exhaustive":
        analysis = DrcAnalysis(H, params)
        if not analysis.table.tuples:
            raise EmptyAfterPrune(f"no edges survive pruning at threshold {params.threshold}")
        i = analysis.best_outcome()
        if i is None:
            return None
        return sorted(analysis.A[i])
    sampler = DrcSampler(H, params)
    analysis = DrcAnalysis(H, params)
    index = {tup: i for i, tup in enumerate(analysis.table.tuples)}
    best, arg = None, None
    for seed in seeds:
        i = sampler.draw_index(seed)
        if i is None:
            continue
        v = analysis.outcome_value(index[sampler.table.tuples[i]])
        if best is None or v > best:
            best, arg = v, i
    return None if arg is None else sorted(analysis.A[arg])


def find_cycle(
    H: UniformHypergraph,
    t: int,
    r: int | None = None,
    params: DrcParams | None = None,
    mode: str | None = None,
    seeds=range(256),
) -> Embedding | NotFound:
    """Greedy C_{2t}^{(r)} embedding following the cycle upper-bound argument.

    Steps: pick A from the dependent-random-choice law (the best outcome of
    an exhaustive scan for small n, otherwise of a seed sweep) with s = 2 and
    richness parameter q = r t; build the q-rich pair graph on A; peel it at
    3/4; pick x_1..x_t along rich pairs; give each consecutive pair the
    smallest unused common-link set.
    """
    if t < 2:
        raise ValueError("cycles need t >= 2")
    r = H.r if r is None else r
    if r != H.r:
        raise ValueError(f"r={r} does not match hypergraph uniformity {H.r}")
    q = r * t
    if params is None:
        params = _desk_params(H, q)
    if mode is None:
        mode = "exhaustive" if H.n < EXHAUSTIVE_BELOW else "sample"
    try:
        A = _choose_A(H, params, mode, seeds)
    except EmptyAfterPrune:
        return NotFound("no edges survive co-degree pruning")
    if not A:
        return NotFound("dependent random choice produced an empty set")
    G = rich_pair_graph(H, A, q)
    core = peel(G)
    if len(core) < t:
        return NotFound(f"peeled core has {len(core)} < t = {t} vertices (|A| = {len(A)})")

    xs = [core[0]]
    for i in range(1, t):
        need = [xs[-1]] + ([xs[0]] if i == t - 1 else [])
        nxt = next(
            (v for v in core if v not in xs and all(G.adjacent(v, w) for w in need)),
            None,
        )
        if nxt is None:
            return NotFound(f"no rich partner for x_{i + 1} in the peeled core")
        xs.append(nxt)

    used = set(xs)
    ys = []
    for i in range(t):
        pair = (xs[i], xs[(i + 1) % t])
        T = next((T for T in common_link(H, pair) if used.isdisjoint(T)), None)
        if T is None:
            return NotFound(f"common link of {pair} exhausted while placing Y_{i + 1}")
        ys.append(T)
        used.update(T)
    emb = Embedding(even_cycle(t), tuple(xs), tuple(ys))
    if not emb.is_valid(H):
        raise InternalError(f"greedy cycle failed validation: {emb}")
    return emb


def rich_core_holds(H: UniformHypergraph, A_prime, s: int, t: int) -> bool:
    """Whether every s-subset of A_prime is t-rich."""
    return all(is_t_rich(H, S, t) is not None for S in combinations(sorted(A_prime), s))


def embed_from_rich_core(
    H: UniformHypergraph, P: BipartitePattern, r: int | None, A_prime
) -> Embedding | NotFound:
    """Map X onto the smallest vertices of A_prime, then give each y_i the
    lexicographically smallest unused set in the common link of its
    neighbours' images.  Never blocks when every s-subset of A_prime is
    t-rich with t = |V(G_{X,Y}^{(r)})| and s the largest Y-degree."""
    r = H.r if r is None else r
    if r != H.r:
        raise ValueError(f"r={r} does not match hypergraph uniformity {H.r}")
    need = P.vertex_count(r)
    if need > H.n:
        raise PatternTooLarge(f"pattern needs {need} vertices, host has {H.n}")
    A_prime = sorted(set(A_prime))
    if len(A_prime) < P.x_size:
        return NotFound(f"|A'| = {len(A_prime)} is smaller than |X| = {P.x_size}")
    xs = tuple(A_prime[: P.x_size])
    used = set(xs)
    ys = []
    for i, nbrs in enumerate(P.y_adj):
        images = tuple(xs[x] for x in nbrs)
        T = next((T for T in common_link(H, images) if used.isdisjoint(T)), None)
        if T is None:
            return NotFound(f"no unused common-link set for y_{i} (images {images})")
        ys.append(T)
        used.update(T)
    emb = Embedding(P, xs, tuple(ys))
    if not emb.is_valid(H):
        raise InternalError(f"greedy embedding failed validation: {emb}")
    return emb
