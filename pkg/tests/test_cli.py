import csv
import json
import math

import numpy as np
import pytest

from coarsegrain.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(text.splitlines()))


def test_profile_stairs_monotone(capsys):
    code, out, _ = run(capsys, "profile", "--function", "stairs", "--alphas", "0.05,0.1,0.15,0.25,0.5,1.0")
    assert code == 0
    r = rows(out)
    assert r[0] == ["alpha", "L_alpha_analytic", "L_alpha_empirical"]
    la = [float(x[1]) for x in r[1:]]
    assert all(b <= a for a, b in zip(la, la[1:]))
    assert float(r[2][1]) == pytest.approx(2.0)


def test_profile_sine_row(capsys):
    code, out, _ = run(capsys, "profile", "--function", "sine", "--alphas", "0.5")
    assert code == 0
    _, row = rows(out)
    assert abs(float(row[1]) - 13.2) < 0.1
    assert float(row[2]) == pytest.approx(float(row[1]), rel=0.02)


def test_profile_errors(capsys):
    assert run(capsys, "profile", "--function", "sine", "--alphas", "")[0] == 2
    assert run(capsys, "profile", "--function", "sine", "--alphas", "0.5", "--omega", "-1")[0] == 2
    assert run(capsys, "profile", "--function", "cosine", "--alphas", "0.5")[0] == 2


def write_samples(path, xs, fs):
    path.write_text("x_0,f\n" + "".join(f"{float(x)!r},{float(f)!r}\n" for x, f in zip(xs, fs)))
    return str(path)


def test_envelope_single_sample(capsys, tmp_path):
    s = write_samples(tmp_path / "s.csv", [0.5], [2.0])
    code, out, _ = run(capsys, "envelope", "--samples", s, "--method", "lipschitz", "--L", "3", "--query-lo", "0.5", "--query-hi", "0.5", "--query-n", "1")
    assert code == 0
    assert rows(out) == [["x", "lower", "upper"], ["0.5", "2", "2"]]


def test_envelope_methods_and_truth(capsys, tmp_path):
    xs = np.array([0.2, 2.8])
    f = 3 * np.sin(2 * np.pi * 2 * xs) + 5 * xs
    s = write_samples(tmp_path / "s.csv", xs, f)
    common = ["--samples", s, "--query-lo", "0", "--query-hi", "3", "--query-n", "301", "--function", "sine"]
    code, lip, _ = run(capsys, "envelope", "--method", "lipschitz", "--L", str(12 * math.pi + 5), *common)
    assert code == 0
    code, la, _ = run(capsys, "envelope", "--method", "lalpha", "--alpha", "0.5", "--L-alpha", "13.19", *common)
    assert code == 0
    L = np.array([[float(v) for v in r] for r in rows(lip)[1:]])
    A = np.array([[float(v) for v in r] for r in rows(la)[1:]])
    assert rows(lip)[0] == ["x", "f_true", "lower", "upper"]
    # both contain f; the L_alpha envelope is narrower far from the samples
    for E in (L, A):
        assert np.all(E[:, 2] <= E[:, 1] + 1e-9) and np.all(E[:, 1] <= E[:, 3] + 1e-9)
    far = np.min(np.abs(A[:, :1] - xs[None, :]), axis=1) > 0.5
    assert far.any()
    assert np.all((A[far, 3] - A[far, 2]) < (L[far, 3] - L[far, 2]))

    prof = tmp_path / "p.json"
    prof.write_text(json.dumps({"L": 12 * math.pi + 5, "pairs": [[0.1, 30.0], [0.5, 13.19], [1.0, 8.0], [0.25, 20.0], [2.0, 6.0]]}))
    code, multi, _ = run(capsys, "envelope", "--method", "multi", "--profile", str(prof), *common)
    assert code == 0
    M = np.array([[float(v) for v in r] for r in rows(multi)[1:]])
    assert np.all(M[:, 3] - M[:, 2] <= A[:, 3] - A[:, 2] + 1e-9)
    assert run(capsys, "envelope", "--method", "relaxed", "--alpha", "0.5", "--L-alpha", "13.19", *common)[0] == 0


def test_envelope_missing_constants(capsys, tmp_path):
    s = write_samples(tmp_path / "s.csv", [0.0, 1.0], [0.0, 1.0])
    assert run(capsys, "envelope", "--samples", s, "--method", "lipschitz")[0] == 2
    assert run(capsys, "envelope", "--samples", s, "--method", "lalpha", "--alpha", "0.1")[0] == 2
    assert run(capsys, "envelope", "--samples", s, "--method", "multi")[0] == 2
    assert run(capsys, "envelope", "--samples", str(tmp_path / "missing.csv"), "--method", "lipschitz", "--L", "1")[0] == 2
    (tmp_path / "bad.csv").write_text("x_0,f\n0.1,abc\n")
    assert run(capsys, "envelope", "--samples", str(tmp_path / "bad.csv"), "--method", "lipschitz", "--L", "1")[0] == 2


def test_riverswim_exact_and_mc(capsys, tmp_path):
    code, out, _ = run(capsys, "riverswim", "--states", "50")
    assert code == 0
    r = rows(out)
    assert r[0] == ["s", "v_star"] and len(r) == 51
    v = [float(x[1]) for x in r[1:]]
    assert sorted(set(v)) == pytest.approx([0.95**3, 0.95**2, 0.95])
    code, out, _ = run(capsys, "riverswim", "--mode", "mc", "--states", "20", "--rollouts", "5")
    r = rows(out)
    assert r[0] == ["s", "v_star", "mc_mean", "mc_stderr"]
    assert all(float(x[1]) == pytest.approx(float(x[2])) for x in r[1:])
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"states": 10, "mode": "mc", "rollouts": 200, "env": {"noise_sigma": 0.03}}))
    code, out, _ = run(capsys, "riverswim", "--config", str(cfg))
    assert code == 0 and len(rows(out)) == 11
    cfg.write_text(json.dumps({"env": {"c": 1.0}}))
    assert run(capsys, "riverswim", "--config", str(cfg))[0] == 2
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "riverswim", "--config", str(cfg))[0] == 2


def test_sweep_determinism(capsys, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["sweep", "--values", "0.1,1", "--seeds", "2", "--episodes", "3", "--seed", "4"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    r = rows(a.read_text())
    assert r[0] == ["L_replacement", "seed", "total_reward"]
    assert [x[1] for x in r[1:]] == ["4", "5", "4", "5"]


def test_zoom_command(capsys):
    code, out, _ = run(capsys, "zoom", "--episodes", "3", "--horizon", "4")
    assert code == 0
    r = rows(out)
    assert r[0] == ["episode", "mode", "cumulative_reward", "num_balls", "min_radius"]
    assert {x[1] for x in r[1:]} == {"lipschitz", "l_alpha", "combined"}


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "thm2", "--quick")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["name"] == "thm2"
    code, out, _ = run(capsys, "verify", "prop2", "--corrupt-bound", "0.5")
    assert code == 1
    assert json.loads(out)["violations"] > 0
    assert run(capsys, "verify", "nonsense")[0] == 2


def test_verify_all_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--seed", "1")
    reports = [json.loads(l) for l in out.strip().splitlines()]
    assert code == 0, [r for r in reports if not r["passed"]]
    assert all(r["passed"] == (r["violations"] == 0) for r in reports)
    assert {r["name"].split("_")[0] for r in reports} >= {"thm1", "thm2", "prop1", "prop2", "prop3", "lemma1", "appB", "cor1", "eq7"}


def test_global_flags_after_subcommand(capsys, tmp_path):
    out = tmp_path / "o.csv"
    assert main(["--seed", "3", "profile", "--function", "stairs", "--alphas", "0.1", "--out", str(out)]) == 0
    assert out.read_text().startswith("alpha,")


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
