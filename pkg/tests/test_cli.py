import csv
import io

import numpy as np
import pytest

from wavepole import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    return [line for line in text.splitlines() if line.startswith("#")]


def test_bind_well(capsys):
    code, out, _ = run(capsys, "bind", "--potential", "well", "--U0", "2.8", "--a", "1.0")
    rows = table(out)
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["alpha"]) == pytest.approx(0.159, abs=5e-4)
    assert float(rows[0]["energy"]) == pytest.approx(-float(rows[0]["alpha"]) ** 2, rel=1e-15)


def test_bind_virtual(capsys):
    code, out, _ = run(capsys, "bind", "--potential", "well", "--U0", "21.913", "--a", "1.0", "--virtual")
    virtual = [r for r in table(out) if r["kind"] == "virtual"]
    assert code == 0
    assert float(virtual[0]["alpha"]) == pytest.approx(-0.159, abs=5e-4)


def test_bind_bargmann(capsys):
    code, out, _ = run(capsys, "bind", "--potential", "bargmann", "--beta", "1.0", "--alphab", "0.1")
    rows = table(out)
    assert code == 0 and len(rows) == 1
    assert float(rows[0]["alpha"]) == pytest.approx(0.1, abs=1e-9)


def test_bind_no_states_is_empty(capsys):
    code, _, err = run(capsys, "bind", "--potential", "well", "--U0", "1.0")
    assert code == 2 and "empty" in err


def test_crossover_bargmann(capsys):
    code, out, _ = run(capsys, "crossover", "--potential", "bargmann", "--beta", "1.0", "--alphab", "0.1",
                       "--k", "0.1")
    assert code == 0
    assert float(table(out)[0]["r_star"]) == pytest.approx(1.522, abs=0.005)


def test_crossover_without_crossing_is_empty(capsys):
    code, _, _ = run(capsys, "crossover", "--potential", "well", "--U0", "22.547", "--k", "0.1")
    assert code == 2


def test_coulomb_series(capsys):
    code, out, _ = run(capsys, "coulomb", "--eta", "1", "--terms", "10000")
    row = table(out)[0]
    assert code == 0
    assert abs(float(row["difference"])) < 1e-3
    assert -float(row["difference"]) == pytest.approx(float(row["tail_estimate"]), rel=1e-6)


def test_coulomb_pole_sum(capsys):
    code, out, _ = run(capsys, "coulomb", "--kappa", "1", "--k", "0.5,1", "--terms", "100000")
    assert code == 0
    assert all(float(r["residual"]) < 1e-3 for r in table(out))


def test_ratio_sign_flag(capsys):
    code, out, _ = run(capsys, "ratio", "--potential", "well", "--U0", "2.8", "--r", "0,0.5")
    m = "\n".join(meta(out))
    assert code == 0
    assert "# R1(0) sign: +" in m
    assert "# sign matches closed expansion: 0" in m
    assert "# sign matches curve ordering at the origin: 1" in m
    assert len(table(out)) == 2


def test_scatter_and_perturb(capsys):
    code, out, _ = run(capsys, "scatter", "--potential", "well", "--U0", "2.8", "--k", "0.1,0.5")
    rows = table(out)
    assert code == 0
    assert all(abs(complex(float(r["S_re"]), float(r["S_im"]))) == pytest.approx(1.0) for r in rows)
    code, out, _ = run(capsys, "perturb", "--potential", "well", "--U0", "2.8", "--eps", "0.02,0.01",
                       "--k", "0.1")
    assert code == 0 and len(table(out)) == 2


@pytest.mark.parametrize("argv", [
    ["bind", "--potential", "well"],
    ["bind", "--potential", "nonsense"],
    ["scatter", "--potential", "well", "--U0", "2.8", "--k", "-1"],
    ["bind", "--potential", "well", "--U0", "abc"],
    ["frobnicate"],
])
def test_bad_input(capsys, argv):
    assert cli.main(argv) == 3


def test_io_errors(capsys, tmp_path):
    missing = tmp_path / "nope" / "out.csv"
    assert cli.main(["bind", "--potential", "well", "--U0", "2.8", "-o", str(missing)]) == 4
    assert cli.main(["bind", "--scenario", str(tmp_path / "absent.ini")]) == 4


def test_scenario_file_and_override(capsys, tmp_path):
    path = tmp_path / "s.ini"
    path.write_text("[potential]\nkind = well\nU0 = 2.8\na = 1.0\n\n[sweep]\nk = 0.1, 0.2\n")
    code, out, _ = run(capsys, "scatter", "--scenario", str(path))
    assert code == 0 and len(table(out)) == 2
    code, out, _ = run(capsys, "scatter", "--scenario", str(path), "--k", "0.3")
    assert code == 0 and [float(r["k"]) for r in table(out)] == [0.3]
    bad = tmp_path / "bad.ini"
    bad.write_text("[potential]\ncolour = red\n")
    assert cli.main(["bind", "--scenario", str(bad)]) == 3


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["ratio", "--potential", "bargmann", "--beta", "1", "--alphab", "0.1", "--r", "0,1"]
    assert cli.main(args + ["-o", str(a)]) == 0
    assert cli.main(args + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    head = a.read_text().splitlines()
    assert head[0].startswith("# wavepole ")
    assert any(line.startswith("# scenario_sha256: ") for line in head)
    assert any(line.startswith("# grid_h: ") for line in head)


def test_fig1_outputs(capsys, tmp_path):
    out, svg = tmp_path / "fig.csv", tmp_path / "fig.svg"
    assert cli.main(["fig1", "--case", "1", "-o", str(out), "--svg", str(svg)]) == 0
    rows = table(out.read_text())
    r = np.array([float(x["r"]) for x in rows])
    assert len(r) == 301 and r[-1] == pytest.approx(3.0)
    cols = ["psi_k0.1", "psi_k0.2", "psi_k0.5", "psi_k1"]
    dev = [abs(float(rows[0][c]) - float(rows[0]["psi_bound"])) for c in cols]
    assert np.all(np.diff(dev) > 0)
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 5
    assert cli.main(["fig1", "--case", "3", "-o", str(out), "--svg", str(tmp_path / "x" / "f.svg")]) == 4


def test_fig1_virtual_case_has_no_bound_column(capsys, tmp_path):
    out = tmp_path / "fig3.csv"
    assert cli.main(["fig1", "--case", "3", "-o", str(out)]) == 0
    rows = table(out.read_text())
    assert all(row["psi_bound"] == "" for row in rows)
    small = [float(rows[5][c]) for c in ("psi_k0.1", "psi_k0.2")]
    assert abs(small[0] - small[1]) / abs(small[0]) < 0.01


def test_fig1_excited_state_has_one_node(capsys, tmp_path):
    out = tmp_path / "fig2.csv"
    assert cli.main(["fig1", "--case", "2", "-o", str(out)]) == 0
    psi = np.array([float(row["psi_bound"]) for row in table(out.read_text())])
    assert np.count_nonzero(np.diff(np.sign(psi[1:])) != 0) == 1
