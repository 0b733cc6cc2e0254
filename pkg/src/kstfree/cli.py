"""Command-line front end.

Exit codes: 0 success or passing verdict, 1 failing verdict (copy found,
cover violated, claim violated), 2 bad parameters, 3 I/O or format error,
4 budget exceeded.
"""

from __future__ import annotations

import functools
import os
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

import click

from . import drc as drc_mod
from .errors import EmptyAfterPrune, FormatError, KstError
from .fields import make_field
from .hypergraph import read_hyp, write_hyp
from .norm_family import (
    build_norm_partition,
    format_ebf,
    krs_max_solutions,
    read_ebf,
    verify_cover_property,
    write_ebf,
)
from .product import (
    DEFAULT_BUDGET,
    best_residue,
    build_construction,
    build_product,
    pad_hypergraph,
    reports_to_csv,
)
from .verifier import find_Kst, find_pattern, read_pattern


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except KstError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)
    return wrapper


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a rational number: {value!r}") from None


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise FormatError(f"cannot write: {exc.strerror}", path=path) from exc


budget_option = click.option(
    "--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
    help="Cap on elementary search steps.",
)


@click.group()
@click.option("--threads", type=int, default=None,
              help="Worker cap; searches currently run in one worker.")
@click.pass_context
def main(ctx, threads):
    """Norm-graph constructions and exact checks for K_{s,t}-free hypergraphs."""
    ctx.obj = {"threads": threads or os.cpu_count() or 1}


@main.command("construct-norm")
@click.option("--s", "s", type=int, required=True)
@click.option("--h", "h", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the .ebf family here.")
@_handle_errors
def construct_norm(s, h, p, out):
    """Build the norm-map family of edge-disjoint bipartite graphs."""
    F = build_norm_partition(s, h, p)
    if out:
        write_ebf(F, out)
        click.echo(f"wrote {out} sideSize={F.side_size} m={F.m} union_edges={F.union_edges}")
    else:
        click.echo(format_ebf(F), nl=False)


@main.command("construct-product")
@click.option("--family", "family_path", type=click.Path(dir_okay=False), required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--rho", type=int, default=None)
@click.option("--best", is_flag=True, help="Use the residue with the most edges.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the .hyp hypergraph here.")
@click.option("--pad-to", type=int, default=None, help="Pad with isolated vertices up to this count.")
@budget_option
@_handle_errors
def construct_product(family_path, k, rho, best, out, pad_to, budget):
    """Lift a family to the 2k-uniform residue-class hypergraph G(rho)."""
    if (rho is None) == (not best):
        raise click.UsageError("give exactly one of --rho or --best")
    F = read_ebf(family_path)
    if best:
        rho, count = best_residue(F, k, budget)
        floor = -(-F.union_edges ** k // F.m)
        if count < floor:
            click.echo(f"rho={rho} edges={count} below ceil(e^k/m)={floor}")
            sys.exit(1)
    G = build_product(F, k, rho, budget)
    click.echo(f"rho={rho} edges={G.e}")
    if out:
        if pad_to is not None:
            G = pad_hypergraph(G, pad_to)
        write_hyp(G, out)


@main.command()
@click.option("--input", "input_path", type=click.Path(dir_okay=False), required=True)
@click.option("--kst", nargs=2, type=int, default=None, metavar="S T")
@click.option("--pattern", "pattern_path", type=click.Path(dir_okay=False), default=None)
@click.option("--cover", type=int, default=None, metavar="BOUND")
@click.option("--krs", is_flag=True, help="Exhaustive solution counts of the norm systems.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write a found certificate here.")
@budget_option
@_handle_errors
def verify(input_path, kst, pattern_path, cover, krs, out, budget):
    """Run one exact check on a .hyp hypergraph or .ebf family."""
    modes = [kst is not None, pattern_path is not None, cover is not None, krs]
    if sum(modes) != 1:
        raise click.UsageError("give exactly one of --kst, --pattern, --cover, --krs")
    if kst is not None or pattern_path is not None:
        H = read_hyp(input_path)
        if kst is not None:
            found = find_Kst(H, kst[0], kst[1], budget)
        else:
            found = find_pattern(H, read_pattern(pattern_path), None, budget)
        if found is None:
            click.echo("FREE")
            return
        text = found.to_text()
        click.echo(text, nl=False)
        if out:
            _write(out, text)
        sys.exit(1)
    F = read_ebf(input_path)
    if cover is not None:
        verdict = verify_cover_property(F, F.s, cover)
        if verdict.passed:
            click.echo(f"PASS max={verdict.max_count} bound={cover}")
            return
        side, S, count, colour = verdict.failure
        click.echo(f"FAIL side={side} set={' '.join(map(str, S))} count={count} colour={colour} bound={cover}")
        sys.exit(1)
    field = make_field(F.p, F.s - 1)
    best, arg = krs_max_solutions(field)
    bound = factorial(F.s - 1)
    if best <= bound:
        click.echo(f"PASS max_solutions={best} bound={bound}")
        return
    click.echo(f"FAIL max_solutions={best} bound={bound} shifts={arg[0]} rhs={arg[1]}")
    sys.exit(1)


@main.command()
@click.option("--input", "input_path", type=click.Path(dir_okay=False), required=True)
@click.option("--s", "s", type=int, required=True)
@click.option("--t", "t", type=int, required=True)
@click.option("--alpha", type=str, required=True, callback=_fraction)
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), required=True)
@click.option("--C", "C", type=str, default=None, callback=_fraction,
              help="Leading constant C of the threshold D; defaults to the smallest feasible integer.")
@click.option("--exact-stats", is_flag=True, help="Print the exact inequality table as CSV.")
@budget_option
@_handle_errors
def drc(input_path, s, t, alpha, seed, C, exact_stats, budget):
    """Draw one weighted dependent-random-choice set, or tabulate exact inequalities."""
    H = read_hyp(input_path)
    if C is None:
        params = drc_mod.DrcParams.with_minimal_C(s, t, H.r, alpha, H.n)
    else:
        params = drc_mod.DrcParams(s, t, H.r, alpha, C, H.n)
    if exact_stats:
        stats = drc_mod.drc_exact_stats(H, params, budget)
        click.echo(stats.to_csv(), nl=False)
        if stats.violations:
            sys.exit(1)
        return
    try:
        sampler = drc_mod.DrcSampler(H, params)
    except EmptyAfterPrune:
        click.echo(f"EMPTY_AFTER_PRUNE threshold={params.threshold}")
        sys.exit(1)
    outcome = sampler.sample(seed)
    p = params.times_D(sampler.p_unit)
    click.echo(f"seed={seed}")
    click.echo(f"threshold={params.threshold}")
    click.echo(f"p={drc_mod.format_value(p)}")
    click.echo(f"weights={outcome.weights_hash}")
    click.echo("tuple=" + ("none" if outcome.chosen is None else " ".join(map(str, outcome.chosen))))
    click.echo("A=" + " ".join(map(str, outcome.A)))


@main.command("bound-table")
@click.option("--s", "s", type=int, required=True)
@click.option("--t", "ts", type=int, required=True, multiple=True)
@click.option("--k", "ks", type=int, required=True, multiple=True)
@click.option("--n-target", type=int, required=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@budget_option
@_handle_errors
def bound_table(s, ts, ks, n_target, csv_path, budget):
    """Run the full construction and tabulate edge counts against the bound scale."""
    reports = []
    for k in ks:
        for t in ts:
            rep = build_construction(s, t, k, n_target, budget).report
            reports.append(rep)
            click.echo(
                f"s={s} t={t} k={k}: chain_ratio={rep.chain_ratio:.12g} "
                f"pigeonhole={rep.pigeonhole_bound}",
                err=True,
            )
    text = reports_to_csv(reports)
    click.echo(text, nl=False)
    if csv_path:
        _write(csv_path, text)


if __name__ == "__main__":
    main()
