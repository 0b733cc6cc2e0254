"""Weighted dependent random choice with exact expectations.

A random set A is drawn as follows.  Prune H at co-degree threshold ceil(D).
Each ordered tuple (v_2..v_r) of distinct vertices whose co-degree d in the
pruned graph is positive gets probability D / (n^(r-1) d); with the remaining
probability 1 - p, A is empty.  Given a tuple, A is the set of v_1 completing
it to an edge for which d(v_2..v_r) is the largest co-degree among the r
(r-1)-subsets of that edge.

D = (C/2) (alpha t)^(1/(s-1)) n^(1 - 1/(s-1)) is irrational in general, so it
is carried as its (s-1)-th power.  Every probability is D times a rational
"unit" value, and comparisons between such quantities cancel D exactly.
"""

from __future__ import annotations

import hashlib
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import comb, factorial

from .errors import BadArity, BadParameters, BudgetExceeded, EmptyAfterPrune
from .fields import integer_root
from .hypergraph import UniformHypergraph, codegree_prune
from .verifier import is_t_rich

MASK64 = (1 << 64) - 1


def ceil_root(value: Fraction, k: int) -> int:
    """Smallest integer z >= 0 with z**k >= value."""
    if value <= 0:
        return 0
    target = -(-value.numerator // value.denominator)
    z = integer_root(target, k)
    return z if z ** k >= target else z + 1


def exact_root(value: Fraction, k: int) -> Fraction | None:
    """value ** (1/k) if it is rational, else None."""
    num = integer_root(value.numerator, k)
    den = integer_root(value.denominator, k)
    if num ** k == value.numerator and den ** k == value.denominator:
        return Fraction(num, den)
    return None


def minimal_constant(s: int, r: int) -> int:
    """Smallest integer C with C >= 4s and C^(s-1)((r-1)!)^s / (2^s r! s^s) - r^2 >= 1."""
    num = factorial(r - 1) ** s
    den = 2 ** s * factorial(r) * s ** s
    C = 4 * s
    while Fraction(C ** (s - 1) * num, den) - r * r < 1:
        C += 1
    return C


@dataclass(frozen=True)
class DrcParams:
    s: int
    t: int
    r: int
    alpha: Fraction
    C: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "C", Fraction(self.C))
        if self.alpha <= 1:
            raise BadParameters(f"alpha must exceed 1, got {self.alpha}")
        if self.C <= 0:
            raise BadParameters(f"C must be positive, got {self.C}")
        if self.s < 2 or self.t < 1 or self.r < 3 or self.n < 1:
            raise BadParameters(f"need s >= 2, t >= 1, r >= 3, n >= 1; got {self}")

    @classmethod
    def with_minimal_C(cls, s, t, r, alpha, n):
        return cls(s, t, r, alpha, Fraction(minimal_constant(s, r)), n)

    @property
    def root(self) -> int:
        return self.s - 1

    @cached_property
    def D_power(self) -> Fraction:
        """D ** (s-1)."""
        j = self.root
        return (self.C / 2) ** j * self.alpha * self.t * Fraction(self.n) ** (j - 1)

    @cached_property
    def D(self) -> Fraction | None:
        """D when it is rational (always for s = 2), else None."""
        return exact_root(self.D_power, self.root)

    @property
    def D_float(self) -> float:
        return float(self.D_power) ** (1 / self.root)

    @cached_property
    def threshold(self) -> int:
        """ceil(D), floored at 1: the integer pruning threshold."""
        return max(1, ceil_root(self.D_power, self.root))

    def times_D(self, unit: Fraction) -> Fraction | float:
        """D * unit, exact when D is rational."""
        return unit * self.D if self.D is not None else float(unit) * self.D_float

    def ceil_times_D(self, unit: Fraction) -> int:
        """ceil(D * unit) for unit >= 0, exact."""
        return ceil_root(self.D_power * unit ** self.root, self.root)


def filter_set(H: UniformHypergraph, tup) -> frozenset:
    """A_{v_2..v_r}: the v_1 completing ``tup`` to an edge of H for which
    the co-degree of ``tup`` is maximal among the edge's (r-1)-subsets.
    Ties with other subsets do not exclude v_1."""
    tup = tuple(tup)
    if len(tup) != H.r - 1 or len(set(tup)) != len(tup):
        raise BadArity(f"expected {H.r - 1} distinct vertices, got {tup}")
    index = H.codegree_index
    key = tuple(sorted(tup))
    d_tup = index.get(key, 0)
    if d_tup == 0:
        return frozenset()
    out = []
    for v1 in range(H.n):
        if v1 in tup:
            continue
        edge = tuple(sorted(key + (v1,)))
        if edge not in H.edge_set:
            continue
        if all(index[sub] <= d_tup for sub in combinations(edge, H.r - 1)):
            out.append(v1)
    return frozenset(out)


@dataclass
class TupleWeightTable:
    """Ordered tuples with positive co-degree, in lexicographic order.

    ``units[i]`` is 1 / (n^(r-1) d_i); the tuple's probability is D * units[i].
    """

    tuples: list[tuple[int, ...]]
    codegrees: list[int]
    units: list[Fraction]

    @cached_property
    def total_unit(self) -> Fraction:
        return sum(self.units, Fraction(0))

    def digest(self) -> str:
        h = hashlib.sha256()
        for tup, u in zip(self.tuples, self.units):
            h.update(f"{tup}:{u.numerator}/{u.denominator};".encode())
        return h.hexdigest()[:16]


def weight_table(Hp: UniformHypergraph) -> TupleWeightTable:
    scale = Hp.n ** (Hp.r - 1)
    rows = []
    for key, d in Hp.codegree_index.items():
        if d > 0:
            for tup in permutations(key):
                rows.append((tup, d))
    rows.sort()
    return TupleWeightTable(
        [tup for tup, _ in rows],
        [d for _, d in rows],
        [Fraction(1, scale * d) for _, d in rows],
    )


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next128(self) -> int:
        return (self.next() << 64) | self.next()


@dataclass(frozen=True)
class DrcOutcome:
    A: tuple[int, ...]
    chosen: tuple[int, ...] | None
    seed: int
    weights_hash: str


class DrcSampler:
    """Pruned graph, weight table and inverse-CDF thresholds for one (H, params)."""

    def __init__(self, H: UniformHypergraph, params: DrcParams):
        if H.r != params.r or H.n != params.n:
            raise BadParameters(f"params (r={params.r}, n={params.n}) do not match hypergraph (r={H.r}, n={H.n})")
        self.params = params
        self.pruned = codegree_prune(H, params.threshold)
        self.table = weight_table(self.pruned)
        if not self.table.tuples:
            raise EmptyAfterPrune(f"no edges survive pruning at threshold {params.threshold}")
        self.digest = self.table.digest()
        # U < D * cum * 2^128  <=>  U < ceil(D * cum * 2^128) for integer U
        cum = Fraction(0)
        self.cutoffs = []
        for u in self.table.units:
            cum += u
            self.cutoffs.append(params.ceil_times_D(cum * (1 << 128)))

    @property
    def p_unit(self) -> Fraction:
        return self.table.total_unit

    def draw_index(self, seed: int) -> int | None:
        u = SplitMix64(seed).next128()
        i = bisect_right(self.cutoffs, u)
        return i if i < len(self.cutoffs) else None

    def sample(self, seed: int) -> DrcOutcome:
        i = self.draw_index(seed)
        if i is None:
            return DrcOutcome((), None, seed, self.digest)
        tup = self.table.tuples[i]
        return DrcOutcome(tuple(sorted(filter_set(self.pruned, tup))), tup, seed, self.digest)


def drc_sample(H: UniformHypergraph, params: DrcParams, seed: int) -> DrcOutcome:
    return DrcSampler(H, params).sample(seed)


# -- exact statistics -------------------------------------------------------------

@dataclass
class ClaimRow:
    claim_id: str
    lhs: object
    rhs: object
    verdict: str  # OK, VIOLATED, NA (hypothesis not met) or INFO


def format_value(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


@dataclass
class DrcStats:
    params: DrcParams
    rows: list[ClaimRow] = field(default_factory=list)

    @property
    def violations(self) -> list[ClaimRow]:
        return [row for row in self.rows if row.verdict == "VIOLATED"]

    def row(self, claim_id: str) -> ClaimRow:
        return next(r for r in self.rows if r.claim_id == claim_id)

    def to_csv(self) -> str:
        lines = ["claim_id,lhs,rhs,verdict"]
        lines.extend(f"{r.claim_id},{format_value(r.lhs)},{format_value(r.rhs)},{r.verdict}" for r in self.rows)
        return "\n".join(lines) + "\n"


class DrcAnalysis:
    """Full enumeration of the random set's law on a small instance."""

    def __init__(self, H: UniformHypergraph, params: DrcParams, budget: int | None = None):
        if H.r != params.r or H.n != params.n:
            raise BadParameters(f"params (r={params.r}, n={params.n}) do not match hypergraph (r={H.r}, n={H.n})")
        work = params.n ** (params.r - 1)
        if budget is not None and work > budget:
            raise BudgetExceeded(work, budget)
        self.H = H
        self.params = params
        self.pruned = codegree_prune(H, params.threshold)
        self.table = weight_table(self.pruned)
        self.A = [filter_set(self.pruned, tup) for tup in self.table.tuples]
        self._rich = {}

    def is_rich(self, U) -> bool:
        U = tuple(sorted(U))
        if U not in self._rich:
            self._rich[U] = is_t_rich(self.pruned, U, self.params.t) is not None
        return self._rich[U]

    def prob_unit(self, U, prefix=()) -> Fraction:
        """P(U subset of A and the tuple starts with ``prefix``) / D."""
        U = set(U)
        k = len(prefix)
        prefix = tuple(prefix)
        total = Fraction(0)
        for tup, A, unit in zip(self.table.tuples, self.A, self.table.units):
            if tup[:k] == prefix and U <= A:
                total += unit
        return total

    def bad_count(self, A) -> int:
        return sum(1 for U in combinations(sorted(A), self.params.s) if not self.is_rich(U))

    def outcome_value(self, i: int) -> Fraction:
        """C(|A|, s) - alpha * b for the i-th tuple's outcome."""
        A = self.A[i]
        return comb(len(A), self.params.s) - self.params.alpha * self.bad_count(A)

    def best_outcome(self) -> int | None:
        """Index of the tuple maximising C(|A|,s) - alpha*b (first on ties)."""
        best, arg = None, None
        for i in range(len(self.A)):
            v = self.outcome_value(i)
            if best is None or v > best:
                best, arg = v, i
        return arg

    def stats(self) -> DrcStats:
        P = self.params
        s, t, r, n = P.s, P.t, P.r, P.n
        units = self.table.units
        e_pruned = self.pruned.e
        rows = []

        def verdict(ok):
            return "OK" if ok else "VIOLATED"

        sum_a = sum(len(A) for A in self.A)
        rows.append(ClaimRow("sum_a_vs_edges", sum_a, factorial(r - 1) * e_pruned,
                             verdict(sum_a >= factorial(r - 1) * e_pruned)))

        U_total = self.table.total_unit
        p_ok = P.D_power * U_total ** P.root <= 1
        rows.append(ClaimRow("p_le_1", P.times_D(U_total), 1, verdict(p_ok)))

        # E|A|^s = D * sum(unit * a^s); Hoelder: >= D/n^((r-1)(s-1)) * (sum a)^s / sum d
        moment_unit = sum((u * len(A) ** s for u, A in zip(units, self.A)), Fraction(0))
        sum_d = sum(self.table.codegrees)
        holder_unit = (Fraction(sum_a ** s, n ** ((r - 1) * (s - 1)) * sum_d) if sum_d else Fraction(0))
        rows.append(ClaimRow("moment_holder", P.times_D(moment_unit), P.times_D(holder_unit),
                             verdict(moment_unit >= holder_unit)))

        # the full moment bound needs e(G') >= D n^(r-1); compare E|A|^s with ((r-1)!)^s/r! D^s
        full_coef = Fraction(factorial(r - 1) ** s, factorial(r))
        hyp = Fraction(e_pruned) ** P.root >= P.D_power * Fraction(n) ** ((r - 1) * P.root)
        holds = moment_unit >= full_coef * P.D_power
        rhs2 = full_coef * P.D ** s if P.D is not None else float(full_coef) * P.D_float ** s
        rows.append(ClaimRow("moment_full", P.times_D(moment_unit), rhs2,
                             ("OK" if holds else "VIOLATED") if hyp else "NA"))

        vertices = range(n)
        s_sets = list(combinations(vertices, s))

        # U inside A with the tuple's tail v_2..v_{r-1} fixed; bound D/n^(r-1)
        bound3 = Fraction(1, n ** (r - 1))
        worst3 = Fraction(0)
        for U in s_sets:
            rest = [v for v in vertices if v not in U]
            for prefix in permutations(rest, r - 2):
                worst3 = max(worst3, self.prob_unit(U, prefix))
        rows.append(ClaimRow("fixed_link_prob", P.times_D(worst3), P.times_D(bound3), verdict(worst3 <= bound3)))

        # U inside A with v_2 fixed; bound D/n^2
        bound4 = Fraction(1, n * n)
        worst4 = Fraction(0)
        for U in s_sets:
            for v2 in vertices:
                if v2 not in U:
                    worst4 = max(worst4, self.prob_unit(U, (v2,)))
        rows.append(ClaimRow("fixed_pair_prob", P.times_D(worst4), P.times_D(bound4), verdict(worst4 <= bound4)))

        # non-t-rich U inside A; bound (r-1)^2 (t-1) D / n^2
        bound5 = Fraction((r - 1) ** 2 * (t - 1), n * n)
        worst5 = Fraction(0)
        for U in s_sets:
            if not self.is_rich(U):
                worst5 = max(worst5, self.prob_unit(U))
        rows.append(ClaimRow("non_rich_prob", P.times_D(worst5), P.times_D(bound5), verdict(worst5 <= bound5)))

        # E[b], E[C(|A|,s)] and E[C(|A|,s) - alpha b]
        eb_unit = sum((u * self.bad_count(A) for u, A in zip(units, self.A)), Fraction(0))
        ec_unit = sum((u * comb(len(A), s) for u, A in zip(units, self.A)), Fraction(0))
        gap_unit = ec_unit - P.alpha * eb_unit
        rows.append(ClaimRow("expected_b", P.times_D(eb_unit), "", "INFO"))
        rows.append(ClaimRow("expected_binom_A", P.times_D(ec_unit), "", "INFO"))
        rows.append(ClaimRow("expected_gap", P.times_D(gap_unit), 0, "INFO"))

        # if the expected gap is positive some outcome has a positive gap, and
        # there the t-rich proportion is at least 1 - 1/alpha
        if gap_unit > 0:
            i = self.best_outcome()
            value = self.outcome_value(i)
            A = self.A[i]
            total = comb(len(A), s)
            ok = value > 0 and total > 0 and Fraction(total - self.bad_count(A), total) >= 1 - 1 / P.alpha
            rows.append(ClaimRow("success_outcome", value, 0, verdict(ok)))
        else:
            rows.append(ClaimRow("success_outcome", "", 0, "NA"))
        return DrcStats(P, rows)


def drc_exact_stats(H: UniformHypergraph, params: DrcParams, budget: int | None = None) -> DrcStats:
    return DrcAnalysis(H, params, budget).stats()
