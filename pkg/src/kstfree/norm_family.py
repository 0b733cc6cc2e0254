"""Edge-disjoint bipartite families from the norm map, plus brute-force checks.

Both sides A and B are copies of GF(p^(s-1)); vertex i on either side is the
field element with packed index i.  The pair (x, y) gets colour i when
N(x + y) lies in the i-th coset of the order-h subgroup of GF(p)^*, and
colour 0 (no edge) when y = -x.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from math import factorial
from pathlib import Path

import numpy as np

from .errors import BadParameters, DuplicateShift, FormatError, NotDivisor
from .fields import CosetPartition, FieldSpec, make_field, subgroup_cosets


@dataclass(frozen=True, eq=False)
class EdgeColoredBipartiteFamily:
    """m pairwise edge-disjoint bipartite graphs G_1..G_m on parts A, B.

    ``color[a, b]`` is in 0..m, 0 meaning the pair is in no G_i.
    """

    color: np.ndarray
    m: int
    s: int
    h: int
    p: int
    field: FieldSpec | None = None
    cosets: CosetPartition | None = None

    @property
    def side_size(self) -> int:
        return self.color.shape[0]

    @property
    def union_edges(self) -> int:
        return int(np.count_nonzero(self.color))

    def class_sizes(self) -> list[int]:
        """Edge counts of G_1..G_m."""
        counts = np.bincount(self.color.ravel(), minlength=self.m + 1)
        return [int(c) for c in counts[1:]]

    def pairs_of_color(self, i: int) -> list[tuple[int, int]]:
        a, b = np.nonzero(self.color == i)
        return list(zip(a.tolist(), b.tolist()))

    @cached_property
    def neighbourhoods(self):
        """Per-colour neighbourhood bitsets.

        Returns (from_a, from_b) where from_a[i][a] is the set of B-vertices
        joined to a in colour i+1, as an int bitmask, and symmetrically.
        """
        n = self.side_size
        from_a = [[0] * n for _ in range(self.m)]
        from_b = [[0] * n for _ in range(self.m)]
        rows, cols = np.nonzero(self.color)
        for a, b in zip(rows.tolist(), cols.tolist()):
            c = int(self.color[a, b]) - 1
            from_a[c][a] |= 1 << b
            from_b[c][b] |= 1 << a
        return from_a, from_b


def build_norm_partition(s: int, h: int, p: int) -> EdgeColoredBipartiteFamily:
    if s < 2:
        raise BadParameters(f"s must be >= 2, got {s}")
    if h < 1 or (p - 1) % h:
        raise NotDivisor(h, p - 1)
    cosets = subgroup_cosets(p, h)
    F = make_field(p, s - 1)
    q = F.order
    coset_of = np.array(cosets.coset_of, dtype=np.int64)
    norms = F.norm_table
    color = np.empty((q, q), dtype=np.int64)
    for x in range(q):
        color[x] = coset_of[norms[F.add_row(x)]]
    return EdgeColoredBipartiteFamily(color, cosets.m, s, h, p, F, cosets)


def cover_bound(s: int, h: int) -> int:
    return h ** (s - 1) * factorial(s - 1)


@dataclass(frozen=True)
class CoverVerdict:
    passed: bool
    bound: int
    max_count: int
    # lexicographically smallest s-set attaining max_count: (side, vertices)
    worst: tuple[str, tuple[int, ...]] | None
    # first violating s-set in enumeration order, with its count and the
    # colour contributing most witnesses
    failure: tuple[str, tuple[int, ...], int, int] | None
    sets_checked: int


def verify_cover_property(F: EdgeColoredBipartiteFamily, s: int, bound: int) -> CoverVerdict:
    """Count, for every same-side s-set, the opposite vertices y joined to
    all of it in one common colour, and compare with ``bound``.

    Sets mixing both sides are skipped: in a bipartite graph a common
    neighbour of x_1..x_s forces all x_j onto one side, so their count is 0.
    Side A is enumerated before side B, each in lexicographic order.
    """
    from_a, from_b = F.neighbourhoods
    n = F.side_size
    best = -1
    worst = None
    failure = None
    checked = 0
    for side, nbrs in (("A", from_a), ("B", from_b)):
        full = [0] * n
        for colour_nbrs in nbrs:
            for v in range(n):
                full[v] |= colour_nbrs[v]
        for S in combinations(range(n), s):
            checked += 1
            common = full[S[0]]
            for v in S[1:]:
                common &= full[v]
            if not common:
                count, top_colour = 0, 0
            else:
                count, top_colour, top = 0, 0, -1
                for i in range(F.m):
                    bits = nbrs[i][S[0]]
                    for v in S[1:]:
                        bits &= nbrs[i][v]
                    c = bits.bit_count()
                    count += c
                    if c > top:
                        top, top_colour = c, i + 1
            if count > best:
                best, worst = count, (side, S)
            if count > bound and failure is None:
                failure = (side, S, count, top_colour)
    return CoverVerdict(failure is None, bound, max(best, 0), worst, failure, checked)


def common_colour_witnesses(F: EdgeColoredBipartiteFamily, side: str, S) -> list[int]:
    """Plain loop version of the witness set for one s-set (used by tests)."""
    out = []
    for y in range(F.side_size):
        cols = {int(F.color[x, y]) if side == "A" else int(F.color[y, x]) for x in S}
        if len(cols) == 1 and 0 not in cols:
            out.append(y)
    return out


# -- Kollar-Ronyai-Szabo system counts ------------------------------------

def _check_shifts(F: FieldSpec, a):
    idx = [F.index(x) for x in a]
    if len(set(idx)) != len(idx):
        raise DuplicateShift(f"shifts must be pairwise distinct, got {a}")
    return idx


def krs_solution_count(F: FieldSpec, a, b) -> int:
    """Number of z in GF(p^m) with N(z + a_j) = b_j for every j.

    Enumerates z directly with the polynomial-arithmetic norm; it shares
    nothing with the cover verifier beyond field arithmetic.
    """
    if len(a) != len(b):
        raise BadParameters("a and b must have equal length")
    _check_shifts(F, a)
    targets = [bj % F.p for bj in b]
    count = 0
    for z in F.elements():
        if all(F.norm(F.add(z, aj)) == bj for aj, bj in zip(a, targets)):
            count += 1
    return count


def krs_max_solutions(F: FieldSpec, k: int | None = None) -> tuple[int, tuple]:
    """Largest solution count over every system with k distinct shifts and
    nonzero right-hand sides (k defaults to m).

    One pass over z per shift sequence tallies the whole vector of norms,
    which counts the solutions of every right-hand side at once.  Returns
    (max_count, (a_indices, b)) for a lexicographically first maximiser.
    """
    if k is None:
        k = F.m
    q = F.order
    norm_of = [F.norm(x) for x in F.elements()]
    elems = F.elements()
    sum_index = [[F.index(F.add(x, y)) for y in elems] for x in elems]
    best, arg = 0, None
    for a in permutations(range(q), k):
        rows = [sum_index[aj] for aj in a]
        tally = Counter()
        for z in range(q):
            key = tuple(norm_of[row[z]] for row in rows)
            if 0 not in key:
                tally[key] += 1
        for key in sorted(tally):
            if tally[key] > best:
                best, arg = tally[key], (a, key)
    return best, arg


def all_krs_systems(F: FieldSpec, k: int):
    """Every (a, b) with distinct shifts a and nonzero residues b."""
    elems = F.elements()
    for a in permutations(range(F.order), k):
        for b in product(range(1, F.p), repeat=k):
            yield tuple(elems[i] for i in a), b


# -- .ebf text format --------------------------------------------------------

def format_ebf(F: EdgeColoredBipartiteFamily) -> str:
    n = F.side_size
    lines = [f"ebf {n} {F.m} {F.s} {F.h} {F.p}"]
    for row in F.color.tolist():
        lines.append(" ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def write_ebf(F: EdgeColoredBipartiteFamily, path) -> None:
    Path(path).write_text(format_ebf(F), encoding="utf-8", newline="\n")


def parse_ebf(text: str, path=None) -> EdgeColoredBipartiteFamily:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", 1, path)
    head = lines[0].split()
    if len(head) != 6 or head[0] != "ebf":
        raise FormatError("header must be 'ebf <sideSize> <m> <s> <h> <p>'", 1, path)
    try:
        n, m, s, h, p = (int(x) for x in head[1:])
    except ValueError:
        raise FormatError("header values must be integers", 1, path) from None
    if n < 1 or m < 1:
        raise FormatError("sideSize and m must be positive", 1, path)
    if len(lines) - 1 != n:
        raise FormatError(f"expected {n} colour rows, found {len(lines) - 1}", len(lines) + 1, path)
    color = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        lineno = a + 2
        toks = lines[a + 1].split()
        if len(toks) != n:
            raise FormatError(f"row has {len(toks)} entries, expected {n}", lineno, path)
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise FormatError("colours must be integers", lineno, path) from None
        if min(row) < 0 or max(row) > m:
            raise FormatError(f"colour outside 0..{m}", lineno, path)
        color[a] = row
    field = cosets = None
    try:
        field = make_field(p, s - 1)
        cosets = subgroup_cosets(p, h)
    except BadParameters:
        pass
    return EdgeColoredBipartiteFamily(color, m, s, h, p, field, cosets)


def read_ebf(path) -> EdgeColoredBipartiteFamily:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=path) from exc
    return parse_ebf(text, path)
