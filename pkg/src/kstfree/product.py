"""Residue-class products of a coloured bipartite family.

For k >= 1 and a residue rho in 1..m, G(rho) is the 2k-partite 2k-uniform
hypergraph on parts X_1..X_2k (each a copy of the family's side) whose edges
are the k-tuples of coloured pairs (x_1 x_2), (x_3 x_4), ... with colour sum
congruent to rho mod m.  Vertex ``j * side + v`` is vertex v of part X_{j+1};
even-indexed parts (0-based) are copies of A, odd ones copies of B.

The residue is called ``rho`` so it cannot be confused with the field
characteristic p.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from itertools import product
from math import factorial
from pathlib import Path

from .errors import BadParameters, BudgetExceeded, FormatError, InternalError
from .fields import find_prime, integer_root
from .hypergraph import UniformHypergraph
from .norm_family import EdgeColoredBipartiteFamily, build_norm_partition

DEFAULT_BUDGET = 10 ** 9


def _check(F: EdgeColoredBipartiteFamily, k: int, rho: int | None = None):
    if k < 1:
        raise BadParameters(f"k must be >= 1, got {k}")
    if rho is not None and not 1 <= rho <= F.m:
        raise BadParameters(f"rho must be in 1..{F.m}, got {rho}")


def residue_counts(F: EdgeColoredBipartiteFamily, k: int) -> list[int]:
    """counts[rho - 1] = e(G(rho)) for rho = 1..m, by convolving class sizes."""
    _check(F, k)
    m = F.m
    sizes = F.class_sizes()
    dist = [0] * m
    dist[0] = 1
    for _ in range(k):
        nxt = [0] * m
        for res, ways in enumerate(dist):
            if ways:
                for c, size in enumerate(sizes, start=1):
                    nxt[(res + c) % m] += ways * size
        dist = nxt
    return [dist[rho % m] for rho in range(1, m + 1)]


def build_product(
    F: EdgeColoredBipartiteFamily, k: int, rho: int, budget: int = DEFAULT_BUDGET
) -> UniformHypergraph:
    _check(F, k, rho)
    n = F.side_size
    work = n ** (2 * k)
    if work > budget:
        raise BudgetExceeded(work, budget)
    m = F.m
    # pair lists per colour, already shifted into each factor's two parts
    shifted = [
        [
            [(2 * ell * n + a, (2 * ell + 1) * n + b) for a, b in F.pairs_of_color(c)]
            for c in range(1, m + 1)
        ]
        for ell in range(k)
    ]
    edges = []
    # odometer over the first k-1 colours; the last is forced by the residue
    for head in product(range(1, m + 1), repeat=k - 1):
        last = (rho - sum(head)) % m or m
        colours = head + (last,)
        lists = [shifted[ell][c - 1] for ell, c in enumerate(colours)]
        if any(not lst for lst in lists):
            continue
        for choice in product(*lists):
            edges.append(tuple(v for pair in choice for v in pair))
    edges.sort()
    return UniformHypergraph(2 * k, 2 * k * n, tuple(edges), (n,) * (2 * k), True)


def best_residue(F: EdgeColoredBipartiteFamily, k: int, budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """(rho, e(G(rho))) maximising the edge count, smallest rho on ties."""
    _check(F, k)
    work = F.side_size ** (2 * k)
    if work > budget:
        raise BudgetExceeded(work, budget)
    counts = residue_counts(F, k)
    best = max(counts)
    rho = counts.index(best) + 1
    if best * F.m < F.union_edges ** k:
        raise InternalError(f"pigeonhole bound failed: {best} * {F.m} < {F.union_edges}^{k}")
    return rho, best


def pad_hypergraph(G: UniformHypergraph, n_total: int) -> UniformHypergraph:
    """Append isolated vertices as one extra part so the vertex count is n_total."""
    if n_total < G.n:
        raise BadParameters(f"cannot pad {G.n} vertices down to {n_total}")
    if n_total == G.n:
        return G
    parts = None if G.parts is None else G.parts + (n_total - G.n,)
    return UniformHypergraph(G.r, n_total, G.edges, parts, G.partite)


# -- end-to-end pipeline ------------------------------------------------------

def choose_h(s: int, t: int) -> int:
    """max(1, floor(((t-1)/(s-1)!)^(1/(s-1)))) in integer arithmetic."""
    if s < 2:
        raise BadParameters(f"s must be >= 2, got {s}")
    if t <= factorial(s - 1):
        raise BadParameters(f"t must exceed (s-1)! = {factorial(s - 1)}, got {t}")
    return max(1, integer_root((t - 1) // factorial(s - 1), s - 1))


def prime_window(s: int, k: int, n_target: int) -> tuple[int, int]:
    hi = integer_root(n_target // (2 * k), s - 1)
    lo = max(2, (hi + 1) // 2)
    return lo, hi


@dataclass
class ConstructionReport:
    s: int
    t: int
    k: int
    h: int
    p: int
    m: int
    rho: int
    n: int
    edges: int
    bound_ratio: float

    CSV_COLUMNS = ("s", "t", "k", "h", "p", "m", "rho", "n", "edges", "bound_ratio")

    @property
    def r(self) -> int:
        return 2 * self.k

    @property
    def union_edges(self) -> int:
        return self.p ** (2 * self.s - 2) - self.p ** (self.s - 1)

    @property
    def pigeonhole_bound(self) -> int:
        """ceil(e^k / m)."""
        return -(-self.union_edges ** self.k // self.m)

    @property
    def chain_lower(self) -> Fraction:
        """2^-k h p^(2(s-1)k - 1), the last exact link of the lower-bound chain."""
        return Fraction(self.h * self.p ** (2 * (self.s - 1) * self.k - 1), 2 ** self.k)

    @property
    def scale(self) -> float:
        """t^(1/(s-1)) n^(2k - 1/(s-1))."""
        e = 1 / (self.s - 1)
        return self.t ** e * float(self.n) ** (2 * self.k - e)

    @property
    def chain_ratio(self) -> float:
        return float(self.chain_lower) / self.scale

    def upper_bound(self, C) -> float:
        """C * 2^(1/(s-1)) * t^(1/(s-1)) n^(r - 1/(s-1)), the alpha = 2 upper bound."""
        return float(C) * 2 ** (1 / (self.s - 1)) * self.scale

    def row(self) -> dict:
        return asdict(self)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ConstructionReport.CSV_COLUMNS)
    for rep in reports:
        row = rep.row()
        writer.writerow([_fmt(row[c]) for c in ConstructionReport.CSV_COLUMNS])
    return buf.getvalue()


def reports_from_csv(text: str, path=None) -> list[ConstructionReport]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != ConstructionReport.CSV_COLUMNS:
        raise FormatError(f"expected header {','.join(ConstructionReport.CSV_COLUMNS)}", 1, path)
    types = {f.name: f.type for f in fields(ConstructionReport)}
    out = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} columns", lineno, path)
        try:
            vals = {
                c: (float(v) if types[c] in (float, "float") else int(v))
                for c, v in zip(header, row)
            }
        except ValueError:
            raise FormatError("non-numeric value", lineno, path) from None
        out.append(ConstructionReport(**vals))
    return out


def write_reports_csv(reports, path) -> None:
    Path(path).write_text(reports_to_csv(reports), encoding="utf-8", newline="\n")


@dataclass
class Construction:
    family: EdgeColoredBipartiteFamily
    hypergraph: UniformHypergraph
    report: ConstructionReport


def build_construction(s: int, t: int, k: int, n_target: int, budget: int = DEFAULT_BUDGET) -> Construction:
    """h, prime, norm family, best residue and G(rho) for (s, t, k, n_target).

    The prime is searched only inside the window [max(2, ceil(hi/2)), hi] with
    hi = floor((n_target/2k)^(1/(s-1))); an empty window raises NoPrimeInRange.
    """
    if k < 1:
        raise BadParameters(f"k must be >= 1, got {k}")
    h = choose_h(s, t)
    lo, hi = prime_window(s, k, n_target)
    p = find_prime(h, lo, hi)
    family = build_norm_partition(s, h, p)
    rho, count = best_residue(family, k, budget)
    G = build_product(family, k, rho, budget)
    if G.e != count:
        raise InternalError(f"enumerated {G.e} edges, convolution says {count}")
    n = G.n
    e = 1 / (s - 1)
    ratio = count / (t ** e * float(n) ** (2 * k - e))
    report = ConstructionReport(s, t, k, h, p, family.m, rho, n, count, ratio)
    return Construction(family, G, report)


def construction_report(s: int, t: int, k: int, n_target: int, budget: int = DEFAULT_BUDGET) -> ConstructionReport:
    return build_construction(s, t, k, n_target, budget).report
