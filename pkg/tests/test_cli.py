import json
import subprocess
import sys

import numpy as np
import pytest

from symortho.cli import (
    EXIT_DEPENDENT,
    EXIT_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VIOLATION,
    RunConfig,
    RunReport,
    main,
)
from symortho.io import InputError, builtin_family, encode_array, parse_csv, parse_json

UNIT_PAIR = [[1.0, 0.0], [0.1, float(np.sqrt(0.99))]]


def write_csv(path, rows):
    path.write_text("\n".join(",".join(repr(float(v)) for v in r) for r in rows) + "\n")
    return str(path)


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--output", "json")
    assert code == EXIT_OK, err
    return json.loads(out), out


# orthonormalize


def test_monomials_text_output(capsys):
    code, out, _ = run_cli(capsys, "orthonormalize", "--builtin", "monomials:4", "--method", "loewdin")
    assert code == EXIT_OK
    assert "eps_1 = 1.8145 - 2.8273x + 2.0557x^2 - 0.6986x^3" in out
    assert "eps_4 = -0.6986 + 11.9872x - 39.9282x^2 + 32.5816x^3" in out
    assert "loss (direct): 2.2201" in out
    assert "violations 0" in out


def test_identity_csv(tmp_path, capsys):
    path = write_csv(tmp_path / "e.csv", np.eye(2))
    doc, _ = run_json(capsys, "orthonormalize", "--input", path, "--trials", "5")
    np.testing.assert_allclose(doc["coefficients"], np.eye(2), atol=1e-15)
    assert doc["loss"]["direct"] == pytest.approx(0.0, abs=1e-15)
    assert doc["payload"]["optimality"]["trials"] == 5


@pytest.mark.parametrize("method", ["gram_schmidt", "householder"])
def test_baseline_methods(tmp_path, capsys, method):
    path = write_csv(tmp_path / "a.csv", [[1.0, 0.0], [1.0, 1.0]])
    doc, _ = run_json(capsys, "orthonormalize", "--input", path, "--method", method, "--trials", "0")
    np.testing.assert_allclose(doc["coefficients"], [[1, 0], [-1, 1]], atol=1e-14)
    assert doc["loss"]["closed_form"] is None
    assert "optimality" not in doc["payload"]


def test_duplicated_row_exit_3(tmp_path, capsys):
    path = write_csv(tmp_path / "d.csv", [[1.0, 2.0], [1.0, 2.0]])
    code, _, err = run_cli(capsys, "orthonormalize", "--input", path)
    assert code == EXIT_DEPENDENT
    assert "lambda_min" in err and "condition" in err


def test_ill_conditioned_exit_3(capsys):
    code, _, err = run_cli(capsys, "orthonormalize", "--builtin", "hilbert:13")
    assert code == EXIT_DEPENDENT and "condition" in err


def test_near_singular_warning_in_report(capsys):
    doc, _ = run_json(capsys, "orthonormalize", "--builtin", "hilbert:9", "--trials", "0")
    assert doc["warnings"] and "near-singular" in doc["warnings"][0]


def test_complex_json_input(tmp_path, capsys):
    vectors = encode_array(np.array([[1.0, 1j], [1.0, 0.0]]))
    path = write_json(tmp_path / "c.json", {"field": "complex", "vectors": vectors})
    doc, _ = run_json(capsys, "orthonormalize", "--input", path, "--trials", "10")
    assert doc["field"] == "complex"
    y = np.array(doc["vectors"])
    y = y[..., 0] + 1j * y[..., 1]
    np.testing.assert_allclose(y.conj() @ y.T, np.eye(2), atol=1e-14)


def test_gram_only_json(tmp_path, capsys):
    path = write_json(tmp_path / "g.json", {"gram": [[1.0, 0.1], [0.1, 1.0]]})
    doc, _ = run_json(capsys, "orthonormalize", "--input", path, "--trials", "0")
    assert doc["vectors"] is None
    np.testing.assert_allclose(doc["coefficients"], [[1.003778, -0.050315], [-0.050315, 1.003778]], atol=1e-6)


def test_normalize_flag(tmp_path, capsys):
    path = write_csv(tmp_path / "s.csv", [[2.0, 0.0], [0.0, 3.0]])
    doc, _ = run_json(capsys, "orthonormalize", "--input", path, "--normalize", "--trials", "0")
    assert doc["loss"]["direct"] == pytest.approx(0.0, abs=1e-15)


# distance


def test_distance_gamma_last(tmp_path, capsys):
    path = write_csv(tmp_path / "g.csv", [[1.0, 0.0], [3.0, 4.0]])
    doc, _ = run_json(capsys, "distance", "--input", path, "--gamma-last")
    assert doc["payload"]["gram_determinant"]["distance"] == pytest.approx(4.0)
    assert doc["payload"]["projection_oracle"]["distance"] == pytest.approx(4.0)
    assert doc["payload"]["relative_difference"] < 1e-12


def test_distance_gamma_in_span(tmp_path, capsys):
    path = write_json(tmp_path / "s.json", {"vectors": [[1.0, 2.0, 0.0]], "gamma": [2.0, 4.0, 0.0]})
    doc, _ = run_json(capsys, "distance", "--input", path)
    assert doc["payload"]["gram_determinant"]["distance"] == pytest.approx(0.0, abs=1e-7)


def test_distance_monomial_builtin(capsys):
    doc, _ = run_json(capsys, "distance", "--builtin", "monomials:2", "--gamma-monomial", "2")
    assert doc["payload"]["gram_determinant"]["distance"] == pytest.approx(1 / (6 * np.sqrt(5)), abs=1e-10)
    assert doc["payload"]["projection_oracle"] is None


def test_distance_extended_gram_json(tmp_path, capsys):
    ext = [[1 / 5, 1 / 3, 1 / 4], [1 / 3, 1.0, 0.5], [1 / 4, 0.5, 1 / 3]]
    path = write_json(tmp_path / "x.json", {"gram": [[1.0, 0.5], [0.5, 1 / 3]], "extended_gram": ext})
    doc, _ = run_json(capsys, "distance", "--input", path)
    assert doc["payload"]["gram_determinant"]["distance"] == pytest.approx(0.0745356, abs=1e-7)


def test_distance_without_gamma_exit_2(tmp_path, capsys):
    path = write_csv(tmp_path / "e.csv", np.eye(2))
    code, _, err = run_cli(capsys, "distance", "--input", path)
    assert code == EXIT_INPUT and "gamma" in err


# analyze


def test_analyze_orthonormal(tmp_path, capsys):
    doc, _ = run_json(capsys, "analyze", "--input", write_csv(tmp_path / "e.csv", np.eye(3)))
    p = doc["payload"]
    assert p["epsilon"] == 0 and p["loewdin_loss"] == 0 and p["loss_bound"] == 0


def test_analyze_unit_pair(tmp_path, capsys):
    doc, _ = run_json(capsys, "analyze", "--input", write_csv(tmp_path / "p.csv", UNIT_PAIR))
    p = doc["payload"]
    assert p["loewdin_loss"] == pytest.approx(0.0050157, abs=1e-7)
    assert p["loss_bound"] == pytest.approx(0.2)
    assert p["comparison_bound"] == pytest.approx(0.6)
    assert p["gershgorin_interval"] == pytest.approx([0.9, 1.1])


def test_analyze_out_of_regime_exit_0(tmp_path, capsys):
    path = write_csv(tmp_path / "f.csv", [[1.0, 0.0], [0.8, 0.6]])
    doc, _ = run_json(capsys, "analyze", "--input", path)
    assert doc["payload"]["bound_applicable"] is False


# stability


def test_stability_identical(tmp_path, capsys):
    path = write_csv(tmp_path / "p.csv", UNIT_PAIR)
    doc, _ = run_json(capsys, "stability", "--input", path, "--perturbed", path, "--epsilon", "0.01")
    assert doc["payload"]["k_distance_sq"] == pytest.approx(0.0, abs=1e-15)
    assert doc["payload"]["bound_satisfied"] is True


def test_stability_rotation_within_delta(tmp_path, capsys):
    t = 1e-4
    a = write_csv(tmp_path / "a.csv", np.eye(2))
    b = write_csv(tmp_path / "b.csv", [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])
    doc, _ = run_json(capsys, "stability", "--input", a, "--perturbed", b, "--epsilon", "0.01")
    assert doc["payload"]["hypothesis_met"] and doc["payload"]["bound_satisfied"]


def test_stability_vacuous_note(tmp_path, capsys):
    a = write_csv(tmp_path / "a.csv", np.eye(2))
    b = write_csv(tmp_path / "b.csv", [[0.0, 1.0], [1.0, 0.0]])
    code, out, _ = run_cli(capsys, "stability", "--input", a, "--perturbed", b, "--epsilon", "0.01")
    assert code == EXIT_OK and "hypothesis not met" in out


def test_stability_shape_mismatch_exit_2(tmp_path, capsys):
    a = write_csv(tmp_path / "a.csv", np.eye(2))
    b = write_csv(tmp_path / "b.csv", np.eye(3)[:2])
    code, _, _ = run_cli(capsys, "stability", "--input", a, "--perturbed", b, "--epsilon", "0.01")
    assert code == EXIT_INPUT


def test_stability_requires_epsilon(tmp_path, capsys):
    a = write_csv(tmp_path / "a.csv", np.eye(2))
    code, _, err = run_cli(capsys, "stability", "--input", a, "--perturbed", a)
    assert code == EXIT_INPUT and "epsilon" in err


def test_stability_violation_exit_5(tmp_path, capsys, monkeypatch):
    # force the conclusion to fail so the exit path for a violation is exercised
    import symortho.cli as cli
    from symortho.analysis import bounds

    real = bounds.stability_check

    def broken(vs, perturbed, eps):
        rep = real(vs, perturbed, eps)
        return bounds.PerturbationReport(**{**rep.to_dict(), "bound_satisfied": False, "theorem_violation": True})

    monkeypatch.setattr(cli, "stability_check", broken)
    a = write_csv(tmp_path / "a.csv", np.eye(2))
    code, _, _ = run_cli(capsys, "stability", "--input", a, "--perturbed", a, "--epsilon", "0.01")
    assert code == EXIT_VIOLATION


# error classes


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\nx,y\n")
    assert run_cli(capsys, "analyze", "--input", str(bad))[0] == EXIT_INPUT
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    assert run_cli(capsys, "analyze", "--input", str(ragged))[0] == EXIT_INPUT
    assert run_cli(capsys, "analyze", "--input", str(tmp_path / "missing.csv"))[0] == EXIT_INPUT
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert run_cli(capsys, "analyze", "--input", str(bad_json))[0] == EXIT_INPUT


def test_non_hermitian_gram_exit_2(tmp_path, capsys):
    path = write_json(tmp_path / "g.json", {"gram": [[1.0, 0.5], [0.0, 1.0]]})
    assert run_cli(capsys, "orthonormalize", "--input", path)[0] == EXIT_INPUT


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["orthonormalize", "--method", "nope", "--builtin", "monomials:2"])
    assert exc.value.code == 2
    assert run_cli(capsys, "orthonormalize")[0] == EXIT_INPUT
    assert run_cli(capsys, "orthonormalize", "--builtin", "cubes:3")[0] == EXIT_INPUT
    assert run_cli(capsys, "orthonormalize", "--builtin", "monomials:2", "--tol", "0")[0] == EXIT_INPUT


def test_numerical_failure_exit_4(capsys, monkeypatch):
    import symortho.cli as cli
    from symortho.errors import NumericalError

    def fail(*args, **kwargs):
        raise NumericalError("Jacobi did not converge")

    monkeypatch.setattr(cli, "orthonormalize", fail)
    assert run_cli(capsys, "orthonormalize", "--builtin", "monomials:2")[0] == EXIT_NUMERICAL


def test_householder_gram_only_exit_2(capsys):
    assert run_cli(capsys, "orthonormalize", "--builtin", "monomials:3", "--method", "householder")[0] == EXIT_INPUT


# reports


def test_determinism(capsys):
    args = ["orthonormalize", "--builtin", "monomials:4", "--seed", "7", "--trials", "200"]
    _, first = run_json(capsys, *args)
    _, second = run_json(capsys, *args)
    assert first == second


def test_csv_and_json_give_identical_reports(tmp_path, capsys):
    rng = np.random.default_rng(8)
    x = rng.standard_normal((3, 5))
    csv_path = write_csv(tmp_path / "f.csv", x)
    json_path = write_json(tmp_path / "f.json", {"field": "real", "vectors": x.tolist()})
    for command in ("orthonormalize", "analyze"):
        _, a = run_json(capsys, command, "--input", csv_path, "--trials", "50")
        _, b = run_json(capsys, command, "--input", json_path, "--trials", "50")
        assert a == b


def test_report_round_trip(capsys):
    _, text = run_json(capsys, "orthonormalize", "--builtin", "monomials:4", "--trials", "20")
    report = RunReport.from_json(text)
    assert report.to_json() == text
    assert RunReport.from_json(report.to_json()) == report
    assert json.loads(text)["schema_version"] == 1


def test_report_replaces_non_finite():
    r = RunReport(command="analyze", config={}, field="real", n=1, labels=["a"], gram_condition=float("inf"))
    assert r.gram_condition is None
    assert "Infinity" not in r.to_json()


def test_stdin_input():
    proc = subprocess.run(
        [sys.executable, "-m", "symortho", "orthonormalize", "--input", "-", "--trials", "3", "--output", "json"],
        input='{"vectors": [[1, 0], [1, 1]]}',
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["n"] == 2


def test_run_config_invariants():
    with pytest.raises(InputError):
        RunConfig(command="orthonormalize", builtin="monomials:2", trials=-1)
    with pytest.raises(InputError):
        RunConfig(command="stability", input_path="a.csv")
    with pytest.raises(InputError):
        RunConfig(command="nope", builtin="monomials:2")


def test_io_parsers():
    fam = parse_csv("# comment\n1,0\n\n0,1\n3,4\n", gamma_last=True)
    assert fam.family.n == 2 and fam.gamma.tolist() == [3.0, 4.0]
    fam = parse_json('{"field": "complex", "vectors": [[[1, 0], [0, 1]]], "labels": ["z"]}')
    assert fam.family.coordinates[0, 1] == 1j and fam.family.label(0) == "z"
    with pytest.raises(InputError):
        parse_json('{"field": "complex", "vectors": [[1, 0]]}')
    with pytest.raises(InputError):
        parse_json('{"vectors": [[1, 0]], "gram": 3, "field": "quaternion"}')
    assert builtin_family("hilbert:3").family.n == 3
