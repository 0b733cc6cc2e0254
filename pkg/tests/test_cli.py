import csv
import io
from fractions import Fraction
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from kstfree.cli import main
from kstfree.hypergraph import complete_hypergraph, hg_build, read_hyp, write_hyp
from kstfree.norm_family import build_norm_partition, parse_ebf, read_ebf
from kstfree.product import reports_from_csv
from kstfree.verifier import parse_certificate
from oracles import naive_codegree

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args], catch_exceptions=False)


@pytest.fixture
def family_225(tmp_path):
    path = tmp_path / "f.ebf"
    res = run("construct-norm", "--s", 2, "--h", 2, "--p", 5, "--out", path)
    assert res.exit_code == 0
    return path


def test_construct_norm_stdout_matches_golden():
    res = run("construct-norm", "--s", 2, "--h", 2, "--p", 5)
    assert res.exit_code == 0
    assert res.output == (GOLDEN / "norm_2_2_5.ebf").read_text()
    F = parse_ebf(res.output)
    assert res.output.splitlines()[0] == "ebf 5 2 2 2 5"
    assert np.count_nonzero(F.color) == 20


def test_construct_norm_writes_file(family_225):
    F = read_ebf(family_225)
    assert np.array_equal(F.color, build_norm_partition(2, 2, 5).color)


@pytest.mark.parametrize("args", [("--h", 2, "--p", 6), ("--h", 3, "--p", 5)])
def test_construct_norm_bad_parameters(args):
    res = run("construct-norm", "--s", 2, *args)
    assert res.exit_code == 2
    assert "error:" in res.output


def test_construct_product_best(family_225, tmp_path):
    out = tmp_path / "g.hyp"
    res = run("construct-product", "--family", family_225, "--k", 2, "--best", "--out", out)
    assert res.exit_code == 0
    assert res.output == "rho=1 edges=200\n"
    # ceil(20^2 / 2) = 200
    G = read_hyp(out)
    assert G.e == 200 and G.r == 4 and G.parts == (5, 5, 5, 5)


def test_construct_product_k1_reproduces_colour_class(family_225, tmp_path):
    F = read_ebf(family_225)
    for rho in (1, 2):
        out = tmp_path / f"g{rho}.hyp"
        res = run("construct-product", "--family", family_225, "--k", 1, "--rho", rho, "--out", out)
        assert res.exit_code == 0
        want = sorted((a, 5 + b) for a, b in F.pairs_of_color(rho))
        assert list(read_hyp(out).edges) == want


def test_construct_product_padding(family_225, tmp_path):
    out = tmp_path / "g.hyp"
    run("construct-product", "--family", family_225, "--k", 1, "--rho", 1, "--out", out, "--pad-to", 12)
    G = read_hyp(out)
    assert G.n == 12 and G.parts == (5, 5, 2)


def test_construct_product_missing_file(tmp_path):
    missing = tmp_path / "nope.ebf"
    res = run("construct-product", "--family", missing, "--k", 1, "--rho", 1)
    assert res.exit_code == 3
    assert str(missing) in res.output


def test_construct_product_rho_or_best(family_225):
    res = run("construct-product", "--family", family_225, "--k", 1)
    assert res.exit_code == 2
    res = run("construct-product", "--family", family_225, "--k", 1, "--rho", 1, "--best")
    assert res.exit_code == 2


def test_construct_product_budget(family_225):
    res = run("construct-product", "--family", family_225, "--k", 2, "--best", "--budget", 10)
    assert res.exit_code == 4


@pytest.fixture
def product_225(family_225, tmp_path):
    out = tmp_path / "g.hyp"
    run("construct-product", "--family", family_225, "--k", 2, "--best", "--out", out)
    return out


def test_verify_free(product_225):
    res = run("verify", "--input", product_225, "--kst", 2, 3)
    assert res.exit_code == 0
    assert res.output == "FREE\n"


def test_verify_finds_certificate_after_mutation(product_225, tmp_path):
    G = read_hyp(product_225)
    # a dense block inside the partite host forces a K_{2,2}
    extra = [(0, 5, 10, 15), (0, 6, 11, 16), (1, 5, 10, 15), (1, 6, 11, 16)]
    M = hg_build(4, G.n, list(G.edges) + extra)
    path = tmp_path / "m.hyp"
    write_hyp(M, path)
    cert_path = tmp_path / "cert.txt"
    res = run("verify", "--input", path, "--kst", 2, 2, "--out", cert_path)
    assert res.exit_code == 1
    cert = parse_certificate(res.output)
    assert cert.is_valid(M)
    assert cert_path.read_text() == res.output


def test_verify_pattern(tmp_path):
    H = complete_hypergraph(3, 7)
    hp = tmp_path / "k.hyp"
    write_hyp(H, hp)
    pp = tmp_path / "c4.pat"
    pp.write_text("pattern 2 2\n0 1\n0 1\n")
    res = run("verify", "--input", hp, "--pattern", pp)
    assert res.exit_code == 1
    assert res.output.startswith("pattern x=2 y=2 adj=0,1;0,1\ncertificate s=2 t=2\n")


def test_verify_cover_and_krs(family_225, tmp_path):
    res = run("verify", "--input", family_225, "--cover", 2)
    assert res.exit_code == 0 and res.output.startswith("PASS")
    res = run("verify", "--input", family_225, "--cover", 0)
    assert res.exit_code == 1 and res.output.startswith("FAIL side=A set=0 1 count=1")
    path = tmp_path / "f3.ebf"
    run("construct-norm", "--s", 3, "--h", 2, "--p", 5, "--out", path)
    res = run("verify", "--input", path, "--krs")
    assert res.exit_code == 0
    assert res.output == "PASS max_solutions=2 bound=2\n"


def test_verify_needs_one_mode(family_225):
    assert run("verify", "--input", family_225).exit_code == 2
    assert run("verify", "--input", family_225, "--cover", 2, "--krs").exit_code == 2


def test_verify_bad_file(tmp_path):
    path = tmp_path / "bad.hyp"
    path.write_text("hyp 3 4 1\n0 1\n")
    res = run("verify", "--input", path, "--kst", 2, 2)
    assert res.exit_code == 3
    assert f"{path}:2:" in res.output


@pytest.fixture
def small_hyp(tmp_path):
    path = tmp_path / "h.hyp"
    path.write_text((GOLDEN / "small.hyp").read_text())
    return path


def test_drc_sample_golden(small_hyp):
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 1, "--alpha", 2, "--C", 1, "--seed", 12345)
    assert res.exit_code == 0
    assert res.output == (GOLDEN / "drc_sample.txt").read_text()
    again = run("drc", "--input", small_hyp, "--s", 2, "--t", 1, "--alpha", 2, "--C", 1, "--seed", 12345)
    assert again.output == res.output
    # D = 1 and nothing is pruned: p = sum over ordered pairs of 1 / (n^2 d)
    H = read_hyp(small_hyp)
    degs = [naive_codegree(H.edges, T) for T in permutations(range(H.n), 2)]
    p = sum(Fraction(1, 36 * d) for d in degs if d)
    assert f"p={p.numerator}/{p.denominator}\n" in res.output


def test_drc_exact_stats_golden(small_hyp):
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 2, "--alpha", 2, "--C", 1, "--seed", 0, "--exact-stats")
    assert res.exit_code == 0
    assert res.output == (GOLDEN / "drc_stats.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert all(r["verdict"] in {"OK", "NA", "INFO"} for r in rows)


def test_drc_errors(small_hyp):
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 1, "--alpha", 1, "--seed", 0)
    assert res.exit_code == 2
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 1, "--alpha", "x", "--seed", 0)
    assert res.exit_code == 2
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 9, "--alpha", 2, "--C", 1, "--seed", 0)
    assert res.exit_code == 1 and res.output.startswith("EMPTY_AFTER_PRUNE")


def test_drc_default_constant_prunes_everything(small_hyp):
    # C = 240 gives D = 240 at s = 2, far above any co-degree here
    res = run("drc", "--input", small_hyp, "--s", 2, "--t", 1, "--alpha", 2, "--seed", 0)
    assert res.exit_code == 1 and res.output == "EMPTY_AFTER_PRUNE threshold=240\n"


def test_bound_table(tmp_path):
    out = tmp_path / "t.csv"
    res = CliRunner().invoke(
        main, ["bound-table", "--s", "2", "--t", "2", "--t", "3", "--k", "1", "--k", "2",
               "--n-target", "40", "--csv", str(out)]
    )
    assert res.exit_code == 0, res.output
    assert res.stdout == (GOLDEN / "bound_table.csv").read_text()
    assert out.read_text() == res.stdout
    assert "chain_ratio=" in res.stderr
    reps = reports_from_csv(res.stdout)
    assert len(reps) == 4
    for rep in reps:
        assert rep.bound_ratio > 0
        assert rep.bound_ratio >= rep.chain_ratio
        assert rep.edges >= rep.pigeonhole_bound
