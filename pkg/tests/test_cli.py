import io
import json

import pytest

from collective_witness.cli import main, parse_grid, sweep_rows
from collective_witness.io import load_state
from collective_witness.quantifiers import f_pure
from collective_witness.spectral import evenly_spaced, qubit
from collective_witness.states import gaussian_grid_state, ghz_like, sample


def run(*argv, env=None):
    out = io.StringIO()
    code = main(list(map(str, argv)), out=out, environ=env or {})
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def path(name):
        return tmp_path / name
    return path


def test_describe_ghz(files):
    assert run("sample", "ghz", "--n", 3, "--d", 2, "--out", files("g.json"))[0] == 0
    doc = json.loads(files("g.json").read_text())
    assert sum(1 for re, im in doc["data"] if re or im) == 2
    code, text = run("describe", files("g.json"))
    assert code == 0
    assert "F = 9\n" in text and "zeta_hat = 0\n" in text and "support size = 2" in text


def test_describe_product_flags_no_entanglement(files):
    run("sample", "product", "--n", 4, "--out", files("p.json"), "--seed", 2)
    assert "no entanglement witnessed" in run("describe", files("p.json"))[1]


def test_describe_mixed(files):
    run("sample", "depolarized", "--n", 2, "--eps", 0.5, "--out", files("d.json"))
    code, text = run("describe", files("d.json"))
    assert code == 0 and "F_R = 1.33333333333 (exact)" in text and "bracket" in text


def test_describe_roof(files):
    run("sample", "ghzmix", "--n", 2, "--eps", 0.25, "--out", files("m.json"))
    code, text = run("describe", files("m.json"), "--roof")
    assert "F_CR = 3 (converged to lower bound" in text


def test_certify(files):
    run("sample", "ghz", "--n", 4, "--out", files("g4.json"))
    code, text = run("certify", files("g4.json"))
    assert code == 0 and text.startswith("depth >= 4")
    run("sample", "product", "--n", 4, "--out", files("p.json"))
    assert run("certify", files("p.json"))[1].startswith("depth >= 1")
    assert run("certify", files("g4.json"), "--zeta", 0.5)[0] == 3


def test_invalid_state_exit_code(files):
    files("bad.json").write_text(json.dumps(
        {"version": 1, "n": 1, "spectrum": [-1, 1], "kind": "pure", "data": [[1, 0], [1, 0]]}))
    assert run("describe", files("bad.json"))[0] == 2
    # a loose norm tolerance, from the flag or the environment, accepts it
    assert run("describe", files("bad.json"), "--tol-norm", 2)[0] == 0
    assert run("describe", files("bad.json"), env={"COLLECTIVE_WITNESS_TOL_NORM": "2"})[0] == 0
    assert run("--tol-norm", "1e-9", "describe", files("bad.json"),
               env={"COLLECTIVE_WITNESS_TOL_NORM": "2"})[0] == 2


def test_usage_errors(files):
    assert run("sample", "ghz", "--out", files("x.json"))[0] == 1
    assert run("sweep", "nope", "--n", 3)[0] == 1
    assert run("sweep", "k_for_f", "--n", 3)[0] == 1
    assert run("bogus")[0] == 1
    assert run("sweep", "bound_table", "--n", 3, env={"COLLECTIVE_WITNESS_SEED": "x"})[0] == 1


@pytest.mark.parametrize("kind,args", [
    ("ghz", ["--n", 3, "--d", 3]),
    ("haar", ["--n", 3]),
    ("ksep", ["--n", 6, "--k", 2]),
    ("gaussian", ["--points", 64, "--sum-width", 4, "--diff-width", 1]),
])
def test_sample_describe_round_trip(files, kind, args):
    path = files(f"{kind}.state.json")
    assert run("sample", kind, "--out", path, "--seed", 1, *args)[0] == 0
    state = load_state(path)
    if kind == "ghz":
        direct = ghz_like(evenly_spaced(3, spacing=1.0), 3)
    elif kind == "haar":
        direct = sample("haar", qubit(), 3, seed=1)
    elif kind == "gaussian":
        direct = gaussian_grid_state(evenly_spaced(64), 4, 1)
    else:
        direct = state
    assert abs(f_pure(state) - f_pure(direct)) < 1e-10
    reported = next(line for line in run("describe", path)[1].splitlines() if line.startswith("F = "))
    assert abs(float(reported[4:]) - f_pure(direct)) < 1e-10


def test_ksep_sidecar(files):
    run("sample", "ksep", "--n", 6, "--k", 2, "--seed", 1, "--out", files("k.state.json"))
    side = json.loads(files("k.partition.json").read_text())
    assert sum(side["blocks"]) == 6 and max(side["blocks"]) <= 2 and side["seed"] == 1


def test_sweep_examples(files):
    header, rows = sweep_rows("k_of_zeta", 10, parse_grid("0:1:11"))
    assert len(rows) == 11 and rows[0][2] == 10 and rows[-1][2] == 1
    _, rows = sweep_rows("zeta_for_f", 10, None, f=15)
    row = next(r for r in rows if r[2] == 2)
    assert row[3] == pytest.approx(1 / 3)
    assert rows[0][-1] == 0 and rows[0][3] is None  # k = 1 is degenerate
    _, rows = sweep_rows("bound_table", 6, None)
    assert rows == [(1, 6, 6), (2, 12, 12), (3, 18, 18), (4, 20, 24), (5, 26, 30), (6, 36, 36)]


def test_sweep_csv_is_deterministic(files):
    for i in (1, 2):
        assert run("sweep", "k_for_f", "--n", 4, "--f", 10, "--out", files(f"s{i}.csv"))[0] == 0
    a, b = files("s1.csv").read_bytes(), files("s2.csv").read_bytes()
    assert a == b and b"\r" not in a
    lines = a.decode().splitlines()
    assert lines[0] == "n,f,zeta,k,feasible"
    assert lines[1] == "4,10,0,2.5,1" and lines[-1] == "4,10,1,,0"


def test_reproduce_targets():
    for target in ("ghz_saturation", "popoviciu", "tradeoff", "appendixD"):
        code, text = run("reproduce", target)
        assert code == 0
        assert "FAIL" not in text
        done, total = text.splitlines()[-1].split()[0].split("/")
        assert done == total
