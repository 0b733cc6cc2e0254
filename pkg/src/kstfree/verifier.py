"""Exact search for t-rich sets, K_{s,t}^{(r)} copies and G_{X,Y}^{(r)} embeddings.

Every search here is complete: ``None`` is only returned after the whole
space has been explored.  Searches that run out of their node budget raise
:class:`~kstfree.errors.BudgetExceeded` instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import BadParameters, BudgetExceeded, FormatError, PatternTooLarge, VertexOutOfRange
from .hypergraph import UniformHypergraph


class NodeBudget:
    """Counts search nodes and raises once ``limit`` is passed."""

    def __init__(self, limit: int | None = None):
        self.limit = limit
        self.used = 0

    def tick(self, k: int = 1):
        self.used += k
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.used, self.limit)


def _budget(budget) -> NodeBudget:
    if isinstance(budget, NodeBudget):
        return budget
    return NodeBudget(budget)


# -- matchings in a uniform set system ------------------------------------------

def find_matching(sets, t: int, budget=None):
    """Return t pairwise disjoint members of ``sets`` (sorted), or None.

    A greedy pass in scarcest-vertex-first order is tried first; if it falls
    short, an exhaustive branch on the least frequent vertex decides.
    """
    budget = _budget(budget)
    sets = sorted(set(tuple(x) for x in sets))
    if t <= 0:
        return []
    if len(sets) < t:
        return None
    freq = Counter(v for x in sets for v in x)
    order = sorted(sets, key=lambda x: (sum(freq[v] for v in x), x))
    chosen, used = [], set()
    for x in order:
        if used.isdisjoint(x):
            chosen.append(x)
            used.update(x)
            if len(chosen) == t:
                return sorted(chosen)
    found = _match(sets, t, budget)
    return None if found is None else sorted(found)


def _match(sets, t, budget):
    if t == 0:
        return []
    if len(sets) < t:
        return None
    freq = Counter(v for x in sets for v in x)
    if len(freq) < t * len(sets[0]):
        return None
    budget.tick()
    v = min(freq, key=lambda u: (freq[u], u))
    for x in sets:
        if v in x:
            xs = set(x)
            rest = [y for y in sets if xs.isdisjoint(y)]
            sub = _match(rest, t - 1, budget)
            if sub is not None:
                return [x] + sub
    return _match([y for y in sets if v not in y], t, budget)


# -- t-rich sets ----------------------------------------------------------------

@dataclass(frozen=True)
class RichCertificate:
    """S together with pairwise disjoint witnesses T_1..T_t."""

    S: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.S)

    @property
    def t(self) -> int:
        return len(self.witnesses)

    def is_valid(self, H: UniformHypergraph) -> bool:
        blocks = [self.S, *self.witnesses]
        flat = [v for b in blocks for v in b]
        if len(flat) != len(set(flat)):
            return False
        if any(len(T) != H.r - 1 for T in self.witnesses):
            return False
        return all(H.has_edge((u, *T)) for u in self.S for T in self.witnesses)

    def to_text(self) -> str:
        lines = [f"certificate s={self.s} t={self.t}", " ".join(map(str, self.S))]
        lines.extend(" ".join(map(str, T)) for T in self.witnesses)
        return "\n".join(lines) + "\n"

    def as_embedding(self) -> "Embedding":
        return Embedding(complete_bipartite(self.s, self.t), self.S, self.witnesses)


def _check_vertices(H, S):
    for v in S:
        if not 0 <= v < H.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{H.n - 1}")


def common_link(H: UniformHypergraph, S) -> list[tuple[int, ...]]:
    """Sorted (r-1)-sets T disjoint from S with {u} + T an edge for all u in S."""
    S = tuple(S)
    _check_vertices(H, S)
    links = sorted((H.links[u] for u in S), key=len)
    common = links[0]
    for other in links[1:]:
        common = common & other
    members = set(S)
    return sorted(T for T in common if members.isdisjoint(T))


def is_t_rich(H: UniformHypergraph, S, t: int, budget=None) -> RichCertificate | None:
    S = tuple(sorted(set(S)))
    if not S or t < 1:
        raise BadParameters("is_t_rich needs a nonempty S and t >= 1")
    _check_vertices(H, S)
    matching = find_matching(common_link(H, S), t, budget)
    if matching is None:
        return None
    return RichCertificate(S, tuple(matching))


def find_Kst(H: UniformHypergraph, s: int, t: int, budget=None) -> RichCertificate | None:
    """First t-rich s-set in lexicographic order, or None if H is K_{s,t}-free.

    s-sets are grown vertex by vertex; a prefix is abandoned as soon as the
    intersection of its links has fewer than t members, since adding vertices
    only shrinks it.
    """
    if s < 1 or t < 1:
        raise BadParameters("find_Kst needs s, t >= 1")
    budget = _budget(budget)
    n = H.n
    links = H.links

    def grow(prefix, common):
        budget.tick()
        if len(prefix) == s:
            members = set(prefix)
            cl = [T for T in common if members.isdisjoint(T)]
            if len(cl) < t:
                return None
            matching = find_matching(cl, t, budget)
            return None if matching is None else RichCertificate(prefix, tuple(matching))
        start = prefix[-1] + 1 if prefix else 0
        for v in range(start, n - (s - len(prefix)) + 1):
            nxt = links[v] if common is None else common & links[v]
            if len(nxt) < t:
                continue
            found = grow(prefix + (v,), nxt)
            if found is not None:
                return found
        return None

    return grow((), None)


# -- bipartite patterns G_{X,Y}^{(r)} ---------------------------------------------

@dataclass(frozen=True)
class BipartitePattern:
    """A bipartite graph G with ordered parts (X, Y).

    ``y_adj[i]`` lists the X-neighbours of y_i (X is 0..x_size-1).
    """

    x_size: int
    y_adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i, nbrs in enumerate(self.y_adj):
            if not nbrs:
                raise BadParameters(f"pattern vertex y_{i} has degree 0")
            if len(set(nbrs)) != len(nbrs) or min(nbrs) < 0 or max(nbrs) >= self.x_size:
                raise BadParameters(f"bad neighbour list {nbrs} for y_{i}")

    def vertex_count(self, r: int) -> int:
        return self.x_size + (r - 1) * len(self.y_adj)

    def x_degrees(self) -> list[int]:
        deg = [0] * self.x_size
        for nbrs in self.y_adj:
            for x in nbrs:
                deg[x] += 1
        return deg

    def to_text(self) -> str:
        lines = [f"pattern {self.x_size} {len(self.y_adj)}"]
        lines.extend(" ".join(map(str, nbrs)) for nbrs in self.y_adj)
        return "\n".join(lines) + "\n"

    def header(self) -> str:
        adj = ";".join(",".join(map(str, nbrs)) for nbrs in self.y_adj)
        return f"pattern x={self.x_size} y={len(self.y_adj)} adj={adj}"


def complete_bipartite(s: int, t: int) -> BipartitePattern:
    return BipartitePattern(s, tuple(tuple(range(s)) for _ in range(t)))


def even_cycle(t: int) -> BipartitePattern:
    """C_{2t} with X = x_0..x_{t-1} and y_i joined to x_i and x_{i+1 mod t}."""
    if t < 2:
        raise BadParameters("a cycle needs t >= 2")
    return BipartitePattern(t, tuple(tuple(sorted({i, (i + 1) % t})) for i in range(t)))


@dataclass(frozen=True)
class Embedding:
    pattern: BipartitePattern
    x_images: tuple[int, ...]
    y_images: tuple[tuple[int, ...], ...]

    def is_valid(self, H: UniformHypergraph) -> bool:
        P = self.pattern
        if len(self.x_images) != P.x_size or len(self.y_images) != len(P.y_adj):
            return False
        flat = list(self.x_images) + [v for Y in self.y_images for v in Y]
        if len(flat) != len(set(flat)) or any(not 0 <= v < H.n for v in flat):
            return False
        if any(len(Y) != H.r - 1 for Y in self.y_images):
            return False
        return all(
            H.has_edge((self.x_images[x], *Y))
            for Y, nbrs in zip(self.y_images, P.y_adj)
            for x in nbrs
        )

    def to_text(self) -> str:
        cert = RichCertificate(self.x_images, self.y_images)
        return self.pattern.header() + "\n" + cert.to_text()


def find_pattern(H: UniformHypergraph, P: BipartitePattern, r: int | None = None, budget=None) -> Embedding | None:
    """Exhaustive backtracking embedding of G_{X,Y}^{(r)} into H.

    X is mapped first (vertex by vertex); each y whose neighbours are all
    placed must keep a nonempty candidate set.  The Y-sets are then chosen
    most-constrained-first, re-evaluating candidate counts at every level.
    """
    if r is not None and r != H.r:
        raise BadParameters(f"pattern uniformity {r} does not match hypergraph ({H.r})")
    r = H.r
    if P.vertex_count(r) > H.n:
        raise PatternTooLarge(f"pattern needs {P.vertex_count(r)} vertices, host has {H.n}")
    budget = _budget(budget)
    links = H.links
    xdeg = P.x_degrees()
    ready_at = [[] for _ in range(P.x_size)]
    for y, nbrs in enumerate(P.y_adj):
        ready_at[max(nbrs)].append(y)
    cache = {}

    def cands(images, y):
        key = tuple(sorted(images[x] for x in P.y_adj[y]))
        if key not in cache:
            common = links[key[0]]
            for v in key[1:]:
                common = common & links[v]
            cache[key] = sorted(common)
        return cache[key]

    def place_y(images, remaining, used, chosen):
        if not remaining:
            return True
        budget.tick()
        best_y, best_list = None, None
        for y in remaining:
            lst = [T for T in cands(images, y) if used.isdisjoint(T)]
            if not lst:
                return False
            if best_list is None or len(lst) < len(best_list):
                best_y, best_list = y, lst
        rest = [y for y in remaining if y != best_y]
        for T in best_list:
            chosen[best_y] = T
            used.update(T)
            if place_y(images, rest, used, chosen):
                return True
            used.difference_update(T)
        del chosen[best_y]
        return False

    def place_x(j, images, used):
        if j == P.x_size:
            chosen = {}
            order = sorted(range(len(P.y_adj)), key=lambda y: -len(P.y_adj[y]))
            if place_y(images, order, set(used), chosen):
                return tuple(chosen[y] for y in range(len(P.y_adj)))
            return None
        for v in range(H.n):
            if v in used or len(links[v]) < xdeg[j]:
                continue
            budget.tick()
            images[j] = v
            used.add(v)
            if all(any(used.isdisjoint(T) for T in cands(images, y)) for y in ready_at[j]):
                found = place_x(j + 1, images, used)
                if found is not None:
                    return found
            used.discard(v)
            del images[j]
        return None

    images = {}
    ys = place_x(0, images, set())
    if ys is None:
        return None
    return Embedding(P, tuple(images[x] for x in range(P.x_size)), ys)


# -- text formats -----------------------------------------------------------------

def _int_line(line, lineno, path):
    try:
        return tuple(int(tok) for tok in line.split())
    except ValueError:
        raise FormatError(f"expected integers, got {line!r}", lineno, path) from None


def parse_certificate(text: str, path=None, first_line: int = 1) -> RichCertificate:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise FormatError("empty certificate", first_line, path)
    head = lines[0].split()
    try:
        if head[0] != "certificate":
            raise ValueError
        kv = dict(tok.split("=", 1) for tok in head[1:])
        s, t = int(kv["s"]), int(kv["t"])
    except (ValueError, KeyError, IndexError):
        raise FormatError("header must be 'certificate s=<s> t=<t>'", first_line, path) from None
    if len(lines) != 2 + t:
        raise FormatError(f"expected {t} witness lines", first_line, path)
    S = _int_line(lines[1], first_line + 1, path)
    if len(S) != s:
        raise FormatError(f"S has {len(S)} vertices, header says {s}", first_line + 1, path)
    Ts = tuple(_int_line(ln, first_line + 2 + i, path) for i, ln in enumerate(lines[2:]))
    return RichCertificate(S, Ts)


def parse_embedding(text: str, path=None) -> Embedding:
    lines = text.split("\n", 1)
    head = lines[0].split()
    try:
        if head[0] != "pattern":
            raise ValueError
        kv = dict(tok.split("=", 1) for tok in head[1:])
        xs = int(kv["x"])
        adj = tuple(tuple(int(v) for v in grp.split(",")) for grp in kv["adj"].split(";")) if kv["adj"] else ()
        if len(adj) != int(kv["y"]):
            raise ValueError
    except (ValueError, KeyError, IndexError):
        raise FormatError("header must be 'pattern x=<k> y=<m> adj=<a,b;...>'", 1, path) from None
    cert = parse_certificate(lines[1] if len(lines) > 1 else "", path, first_line=2)
    return Embedding(BipartitePattern(xs, adj), cert.S, cert.witnesses)


def parse_pattern(text: str, path=None) -> BipartitePattern:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty pattern file", 1, path)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "pattern":
        raise FormatError("header must be 'pattern <x_size> <y_count>'", 1, path)
    xs, ys = _int_line(" ".join(head[1:]), 1, path)
    if len(lines) - 1 != ys:
        raise FormatError(f"expected {ys} neighbour lines, found {len(lines) - 1}", 1, path)
    adj = tuple(_int_line(ln, i + 2, path) for i, ln in enumerate(lines[1:]))
    try:
        return BipartitePattern(xs, adj)
    except BadParameters as exc:
        raise FormatError(str(exc), None, path) from None


def read_pattern(path) -> BipartitePattern:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=path) from exc
    return parse_pattern(text, path)
