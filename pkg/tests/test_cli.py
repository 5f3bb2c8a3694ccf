import io
import json
import subprocess
import sys

import pytest

from tameaut.approx import nagata
from tameaut.cli import main
from tameaut.endo import compose
from tameaut.errors import TameAutError
from tameaut.suites import run_suite
from tameaut.textio import format_endo, parse_endo, parse_word

from conftest import F101

NAGATA = format_endo(nagata())


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    rc = main(list(argv), stdout=out, stderr=err)
    return rc, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_parse_prints_canonical_text(files):
    path = files("e.endo", "[comm] n=3 field=q\nx = x;\ny = y;\nz = x*y + z;\n")
    rc, out, _ = run("parse", path)
    assert rc == 0
    assert out.splitlines() == ["[comm] n=3 field=q", "x1 = x1;", "x2 = x2;", "x3 = x3 + x1*x2;"]
    rc, out, _ = run("parse", path, "--aliases")
    assert out.splitlines()[-1] == "z = z + x*y;"


def test_parse_error_exit_code(files):
    path = files("bad.endo", "[comm] n=3 field=q\nx = x;\ny = y;\nz = z + 2x;\n")
    rc, _, err = run("parse", path)
    assert rc == 2 and "line 4" in err
    rc, out, _ = run("parse", path, "--json")
    rec = records(out)[0]
    assert rc == 2 and rec["error"] == "parse"


def test_usage_errors():
    assert run("nonsense")[0] == 2
    assert run("verify", "bogus")[0] == 2
    assert run("parse", "/no/such/file")[0] == 2


def test_field_flag_must_match_header(files):
    path = files("n.endo", NAGATA)
    assert run("parse", path, "--field", "fp:7")[0] == 2
    assert run("parse", path, "--field", "fp:6")[0] == 2
    assert run("parse", path, "--nc")[0] == 2


def test_filtration_json_is_stable(files):
    path = files("n.endo", NAGATA)
    rc1, out1, _ = run("filtration", path, "--json", "--cap", "8")
    rc2, out2, _ = run("filtration", path, "--json", "--cap", "8")
    assert rc1 == rc2 == 0 and out1 == out2
    rec = records(out1)[0]
    assert rec["level"] == 3


def test_compose_and_invert(files):
    f = files("f.endo", "[comm] n=2 field=q\nx1 = x1 + x2^2;\nx2 = x2;\n")
    rc, out, _ = run("invert", f)
    assert rc == 0 and parse_endo(out).images[0] == parse_endo(
        "[comm] n=2 field=q\nx1 = x1 - x2^2;\nx2 = x2;").images[0]
    g = files("g.endo", out)
    rc, out, _ = run("compose", f, g)
    assert rc == 0 and parse_endo(out).is_identity()


def test_nagata_exact_inverse(files):
    path = files("n.endo", NAGATA)
    rc, out, _ = run("invert", path)
    inv = parse_endo(out)
    assert rc == 0 and compose(nagata(), inv).is_identity()


def test_truncate_and_conjugate(files):
    path = files("n.endo", NAGATA)
    rc, out, _ = run("truncate", path, "--to", "4")
    assert rc == 0 and parse_endo(out) == nagata().truncate(4)
    a = files("a.endo", "[comm] n=3 field=q\nx1 = x1;\nx2 = x2;\nx3 = x3;\n")
    rc, out, _ = run("conjugate", a, path)
    assert rc == 0 and parse_endo(out) == nagata()


def test_synthesize_variants():
    rc, out, _ = run("synthesize", "power", "--coeff", "3/2", "--degree", "5", "--check")
    assert rc == 0
    assert "matches" in out and len(parse_word(out)) > 1
    rc, out, _ = run("synthesize", "nc", "--monomial", "x^2*y*x", "--field", "fp:5", "--check",
                     "--json")
    assert rc == 0 and records(out)[-1].get("verified", True)
    assert run("synthesize", "edge", "--degree", "2", "--field", "fp:2")[0] == 1
    assert run("synthesize", "poly", "--expr", "x*y + x^3", "--check")[0] == 0


def test_torus_valuation(files):
    path = files("e.endo", "[comm] n=3 field=q\nx1 = x1 + x2^2;\nx2 = x2;\nx3 = x3;\n")
    rc, out, _ = run("torus", "valuation", path, "--weights", "[7,2,0]", "--json")
    assert rc == 0 and records(out)[0]["valuation"] == 2 * 2 - 7


def test_approximate_writes_files(files, tmp_path):
    path = files("n.endo", NAGATA)
    outdir = tmp_path / "trace"
    rc, _, _ = run("approximate", path, "--to", "6", "--out", str(outdir))
    assert rc == 0
    names = sorted(p.name for p in outdir.iterdir())
    assert "residual.endo" in names and any(n.endswith(".word") for n in names)


def test_hike(files):
    path = files("h.endo", "[nc] n=3 field=q\nx = x;\ny = y + x*z*x + x^3;\nz = z;\n")
    rc, out, _ = run("hike", path, "--json")
    assert rc == 0 and records(out)


def test_verify_json_records():
    rc, out, _ = run("verify", "inclexcl", "--json", "--seed", "3")
    recs = records(out)
    assert rc == 0
    assert all(set(r) >= {"name", "status", "seed", "suite", "witness"} for r in recs[:-1])
    assert recs[-1]["status"] == "pass" and recs[-1]["seed"] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tameaut", "verify", "inclexcl"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0


# run_suite ------------------------------------------------------------------------------


def test_run_suite_inclexcl_fast():
    res = run_suite("inclexcl")
    assert res.status == "pass" and res.wall_time < 5 and res.exit_code == 0


def test_run_suite_star_f101():
    assert run_suite("star", field_spec=F101, quick=True).status == "pass"


def test_run_suite_bogus():
    with pytest.raises(TameAutError):
        run_suite("bogus")


def test_run_suite_is_deterministic():
    a = run_suite("torus", seed=5, quick=True).records()
    b = run_suite("torus", seed=5, quick=True).records()
    strip = [{k: v for k, v in r.items() if k != "wall_time"} for r in a]
    assert strip == [{k: v for k, v in r.items() if k != "wall_time"} for r in b]
