import json
import subprocess
import sys

import pytest

from hypergen import catalog
from hypergen.algebra import GradedLieAlgebra, validate
from hypergen.cli import main

CORPUS = catalog.corpus_dir()


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_order_b27(capsys):
    code, out, _ = run(["order", str(CORPUS / "B27.json")], capsys)
    assert code == 0
    assert out.splitlines()[0] == "order=4 (Exact, PencilSturm)"


def test_order_d37_prints_minor(capsys):
    code, out, _ = run(["order", str(CORPUS / "D37_1.json")], capsys)
    assert code == 0
    assert "DefiniteMinor" in out and "NegDef" in out


def test_hypergen_exit_codes(capsys):
    code, out, _ = run(["hypergen", str(CORPUS / "heisenberg1.json"), "--k", "1"], capsys)
    assert code == 10
    assert "isotropic P" in out
    code, _, _ = run(["hypergen", str(CORPUS / "H3.json"), "--k", "2"], capsys)
    assert code == 0


def test_catalog_names_as_inputs(capsys):
    code, out, _ = run(["order", "H2"], capsys)
    assert code == 0 and out.startswith("order=4 (Exact, SingleForm)")
    code, _, _ = run(["hypergen", "heisenberg(3)", "--k", "2"], capsys)
    assert code == 0
    code, _, err = run(["order", "no_such_entry"], capsys)
    assert code == 1 and "cannot read" in err


def test_hypergen_unknown_exit(tmp_path, capsys):
    forms = [
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, 1], [0, 0, -3, 0], [0, 3, 0, 0], [-1, 0, 0, 0]],
    ]
    f = tmp_path / "forms.json"
    f.write_text(json.dumps(forms))
    alg = tmp_path / "g.json"
    assert run(["construct", "gs", str(f), "--out", str(alg)], capsys)[0] == 0
    code, out, _ = run(["hypergen", str(alg), "--k", "1", "--height", "3"], capsys)
    assert code == 20
    assert "exported Pfaffian system" in out


def test_input_errors(tmp_path, capsys):
    assert run(["order", str(tmp_path / "missing.json")], capsys)[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check", str(bad)], capsys)[0] == 1
    assert run(["hypergen", str(CORPUS / "B27.json")], capsys)[0] == 1  # --k missing
    assert run(["hypergen", str(CORPUS / "B27.json"), "--k", "9"], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1


def test_check_reports_series(capsys):
    code, out, _ = run(["check", str(CORPUS / "A137_1.json"), "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["layer_dims"] == [4, 2, 1]
    assert data["lower_central_series_dims"] == [7, 3, 1, 0]


def test_json_output_is_deterministic(capsys):
    a = run(["hypergen", str(CORPUS / "B27.json"), "--k", "2", "--format", "json"], capsys)[1]
    b = run(["hypergen", str(CORPUS / "B27.json"), "--k", "2", "--format", "json"], capsys)[1]
    assert a == b
    assert json.loads(a)["verdict"] == "NotHypergenerated"


@pytest.mark.parametrize(
    "argv,dims",
    [
        (["construct", "free-nilpotent", "--m", "3", "--s", "3"], [3, 3, 8]),
        (["construct", "free-metabelian", "--m", "3", "--s", "3"], [3, 3, 8]),
        (["construct", "quaternionic", "--s", "3"], [4, 3, 8]),
    ],
)
def test_construct(argv, dims, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    g = GradedLieAlgebra.loads(out)
    assert list(g.layer_dims) == dims
    assert validate(g).ok


def test_construct_product_and_quotient(tmp_path, capsys):
    h1 = str(CORPUS / "heisenberg1.json")
    code, out, _ = run(["construct", "product", h1, h1], capsys)
    assert code == 0 and GradedLieAlgebra.loads(out).layer_dims == (4, 2)
    ideal = tmp_path / "ideal.json"
    ideal.write_text(json.dumps([[0, 0, 0, 0, 0, 0, 1]]))
    code, out, _ = run(["construct", "quotient", str(CORPUS / "D37_1.json"), str(ideal)], capsys)
    assert code == 0 and GradedLieAlgebra.loads(out).layer_dims == (4, 2)


def test_construct_metabelian_quotient(tmp_path, capsys):
    f = tmp_path / "forms.json"
    f.write_text(json.dumps([[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]]))
    code, out, err = run(["construct", "metabelian-quotient", str(f), "--m", "4", "--s", "2", "--k", "1"], capsys)
    assert code == 0
    assert "dim W = 5" in err
    assert GradedLieAlgebra.loads(out).layer_dims == (4, 1)


def test_emit_word_listings(capsys):
    code, out, _ = run(["construct", "free-nilpotent", "--m", "2", "--s", "3", "--emit", "hall-words"], capsys)
    assert code == 0 and out.splitlines()[3] == "4\t[X1,[X1,X2]]"
    code, out, _ = run(["construct", "free-metabelian", "--m", "2", "--s", "3", "--emit", "metabelian-words"], capsys)
    assert out.splitlines()[2] == "3\t(X2,X1)"


def test_catalog_commands(capsys):
    code, out, _ = run(["catalog", "list"], capsys)
    assert code == 0 and "B27" in out.split()
    code, out, _ = run(["catalog", "get", "N6_4_4a"], capsys)
    assert GradedLieAlgebra.loads(out).dim == 6
    assert run(["catalog", "get", "nope"], capsys)[0] == 1
    code, out, _ = run(["catalog", "golden"], capsys)
    assert code == 0 and "golden: clean" in out


def test_minrank_export_and_embed(tmp_path, capsys):
    code, out, _ = run(["minrank", "export", str(CORPUS / "D37_1.json"), "--k", "1"], capsys)
    data = json.loads(out)
    assert (data["m"], data["d"], data["k"]) == (4, 3, 1)
    mats = tmp_path / "mats.json"
    mats.write_text(json.dumps({"k": 1, "matrices": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}))
    code, out, _ = run(["minrank", "embed", str(mats)], capsys)
    data = json.loads(out)
    assert (data["m"], data["d"], data["k"]) == (4, 2, 1)


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hypergen.cli", "order", str(CORPUS / "B27.json")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("order=4 (Exact, PencilSturm)")
