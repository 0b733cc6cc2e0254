"""Uniform hypergraphs with bitset incidence, co-degrees, links and core pruning."""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

from .errors import BadArity, FormatError, PartiteViolation, VertexOutOfRange


@dataclass(frozen=True, eq=False)
class UniformHypergraph:
    """An r-uniform hypergraph on vertices 0..n-1.

    ``edges`` is the lexicographically sorted tuple of sorted r-tuples.
    ``parts`` holds block sizes of consecutive index ranges, if any.
    Build instances with :func:`hg_build`; the constructor trusts its input.
    """

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    parts: tuple[int, ...] | None = None
    partite: bool = False

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, UniformHypergraph):
            return NotImplemented
        return (self.r, self.n, self.edges, self.parts) == (other.r, other.n, other.edges, other.parts)

    def __hash__(self):
        return hash((self.r, self.n, self.edges))

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, verts) -> bool:
        return tuple(sorted(verts)) in self.edge_set

    @cached_property
    def incidence(self) -> tuple[int, ...]:
        """Per-vertex bitset over edge indices."""
        bits = [0] * self.n
        for i, edge in enumerate(self.edges):
            for v in edge:
                bits[v] |= 1 << i
        return tuple(bits)

    @cached_property
    def codegree_index(self) -> dict[tuple[int, ...], int]:
        """Co-degrees of every (r-1)-set lying inside some edge."""
        index = defaultdict(int)
        for edge in self.edges:
            for sub in combinations(edge, self.r - 1):
                index[sub] += 1
        return dict(index)

    @cached_property
    def links(self) -> tuple[frozenset, ...]:
        """links[v] is the set of sorted (r-1)-tuples completing v to an edge."""
        out = [set() for _ in range(self.n)]
        for edge in self.edges:
            for j, v in enumerate(edge):
                out[v].add(edge[:j] + edge[j + 1:])
        return tuple(frozenset(s) for s in out)

    def degree(self, v: int) -> int:
        return self.incidence[v].bit_count()

    def part_of(self, v: int) -> int | None:
        if self.parts is None:
            return None
        start = 0
        for i, size in enumerate(self.parts):
            if v < start + size:
                return i
            start += size
        return None


def _normalize(edge, r, n):
    verts = tuple(sorted(int(v) for v in edge))
    if len(verts) != r or len(set(verts)) != r:
        raise BadArity(f"edge {tuple(edge)} does not have {r} distinct vertices")
    if verts[0] < 0 or verts[-1] >= n:
        raise VertexOutOfRange(f"edge {tuple(edge)} has a vertex outside 0..{n - 1}")
    return verts


def hg_build(r: int, n: int, edges, parts=None, partite: bool | None = None) -> UniformHypergraph:
    """Validate, sort and deduplicate ``edges``.

    ``parts`` is a sequence of block sizes summing to n.  The partite check
    (every edge meets each block at most once) runs when ``partite`` is true,
    which is the default whenever ``parts`` is given.
    """
    if r < 2:
        raise BadArity(f"uniformity must be >= 2, got {r}")
    if n < 0:
        raise VertexOutOfRange(f"negative vertex count {n}")
    normalized = sorted({_normalize(e, r, n) for e in edges})
    if parts is not None:
        parts = tuple(int(s) for s in parts)
        if sum(parts) != n or any(s < 0 for s in parts):
            raise PartiteViolation(f"part sizes {parts} do not sum to {n}")
    if partite is None:
        partite = parts is not None
    if partite:
        if parts is None:
            raise PartiteViolation("partite flag set without parts")
        block = []
        for i, size in enumerate(parts):
            block.extend([i] * size)
        for edge in normalized:
            if len({block[v] for v in edge}) != r:
                raise PartiteViolation(f"edge {edge} meets a part twice")
    return UniformHypergraph(r, n, tuple(normalized), parts, partite)


def codegree(H: UniformHypergraph, S) -> int:
    """Number of vertices v outside S such that S + {v} is an edge."""
    S = tuple(S)
    if len(S) != H.r - 1 or len(set(S)) != len(S):
        raise BadArity(f"co-degree needs {H.r - 1} distinct vertices, got {S}")
    for v in S:
        if not 0 <= v < H.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{H.n - 1}")
    bits = H.incidence[S[0]]
    for v in S[1:]:
        bits &= H.incidence[v]
    return bits.bit_count()


@dataclass(frozen=True)
class LinkHypergraph:
    vertex: int
    uniformity: int
    edges: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.edges)


def link(H: UniformHypergraph, v: int) -> LinkHypergraph:
    if not 0 <= v < H.n:
        raise VertexOutOfRange(f"vertex {v} outside 0..{H.n - 1}")
    return LinkHypergraph(v, H.r - 1, tuple(sorted(H.links[v])))


def codegree_prune(H: UniformHypergraph, D: int, rng: random.Random | None = None) -> UniformHypergraph:
    """Delete edges through (r-1)-sets of co-degree < D until none remain.

    The surviving edge set is the unique largest subfamily in which every
    (r-1)-subset of every edge has co-degree >= D, so the processing order
    does not matter.  ``rng`` shuffles that order and exists for testing.
    """
    if D < 1:
        raise ValueError("pruning threshold must be >= 1")
    r = H.r
    containing = defaultdict(list)
    for i, edge in enumerate(H.edges):
        for sub in combinations(edge, r - 1):
            containing[sub].append(i)
    deg = {sub: len(ids) for sub, ids in containing.items()}
    alive = [True] * H.e

    pending = [sub for sub, d in deg.items() if d < D]
    if rng is not None:
        rng.shuffle(pending)
    queue = deque(pending)
    queued = set(pending)
    while queue:
        if rng is not None and len(queue) > 1:
            k = rng.randrange(len(queue))
            queue.rotate(-k)
        sub = queue.popleft()
        queued.discard(sub)
        if deg[sub] == 0:
            continue
        for i in containing[sub]:
            if not alive[i]:
                continue
            alive[i] = False
            for other in combinations(H.edges[i], r - 1):
                deg[other] -= 1
                if 0 < deg[other] < D and other not in queued:
                    queue.append(other)
                    queued.add(other)
    kept = tuple(edge for edge, ok in zip(H.edges, alive) if ok)
    return UniformHypergraph(r, H.n, kept, H.parts, H.partite)


def complete_hypergraph(r: int, n: int) -> UniformHypergraph:
    return UniformHypergraph(r, n, tuple(combinations(range(n), r)))


def star_hypergraph(r: int, n: int, center: int = 0) -> UniformHypergraph:
    """All r-sets through ``center``."""
    return hg_build(r, n, (e for e in combinations(range(n), r) if center in e))


def cover_hypergraph(r: int, n: int, cover) -> UniformHypergraph:
    """All r-sets meeting ``cover``; its cover number is at most len(cover)."""
    cover = set(cover)
    return hg_build(r, n, (e for e in combinations(range(n), r) if cover & set(e)))


def random_hypergraph(r: int, n: int, density: float, rng: random.Random) -> UniformHypergraph:
    return UniformHypergraph(
        r, n, tuple(e for e in combinations(range(n), r) if rng.random() < density)
    )


# -- .hyp text format ------------------------------------------------------

def format_hyp(H: UniformHypergraph) -> str:
    lines = [f"hyp {H.r} {H.n} {H.e}"]
    if H.parts is not None:
        lines.append("parts " + " ".join(str(x) for x in (len(H.parts), *H.parts)))
    lines.extend(" ".join(map(str, edge)) for edge in H.edges)
    return "\n".join(lines) + "\n"


def write_hyp(H: UniformHypergraph, path) -> None:
    Path(path).write_text(format_hyp(H), encoding="utf-8", newline="\n")


def _ints(tokens, lineno, path):
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno, path) from None


def parse_hyp(text: str, path=None) -> UniformHypergraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", 1, path)
    head = lines[0].split()
    if len(head) != 4 or head[0] != "hyp":
        raise FormatError("header must be 'hyp <r> <n> <e>'", 1, path)
    r, n, e = _ints(head[1:], 1, path)
    if r < 2 or n < 0 or e < 0:
        raise FormatError(f"invalid header values r={r} n={n} e={e}", 1, path)
    body_start = 1
    parts = None
    if len(lines) > 1 and lines[1].startswith("parts"):
        toks = lines[1].split()
        vals = _ints(toks[1:], 2, path)
        if not vals or vals[0] != len(vals) - 1:
            raise FormatError("parts line must be 'parts <k> <size_1> ... <size_k>'", 2, path)
        parts = tuple(vals[1:])
        if sum(parts) != n:
            raise FormatError(f"part sizes sum to {sum(parts)}, expected {n}", 2, path)
        body_start = 2
    body = lines[body_start:]
    if len(body) != e:
        raise FormatError(f"header declares {e} edges, found {len(body)}", body_start + 1, path)
    block = None
    if parts is not None:
        block = [i for i, size in enumerate(parts) for _ in range(size)]
    edges = []
    seen = set()
    for offset, line in enumerate(body):
        lineno = body_start + 1 + offset
        verts = _ints(line.split(), lineno, path)
        if len(verts) != r:
            raise FormatError(f"edge has {len(verts)} vertices, expected {r}", lineno, path)
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise FormatError("edge vertices must be strictly increasing", lineno, path)
        if verts[0] < 0 or verts[-1] >= n:
            raise FormatError(f"vertex out of range 0..{n - 1}", lineno, path)
        t = tuple(verts)
        if t in seen:
            raise FormatError(f"duplicate edge {line.strip()}", lineno, path)
        if block is not None and len({block[v] for v in t}) != r:
            raise FormatError("edge meets a part twice", lineno, path)
        seen.add(t)
        edges.append(t)
    return UniformHypergraph(r, n, tuple(sorted(edges)), parts, parts is not None)


def read_hyp(path) -> UniformHypergraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=path) from exc
    return parse_hyp(text, path)
