import json
import shutil

import pytest

from hypergen import catalog
from hypergen.catalog import catalog_get, catalog_list, run_golden, run_golden_all
from hypergen.kaplan import Verdict, is_hypergenerated, kaplan_pencil, metivier_order
from hypergen.algebra import step2_quotient


def test_list_contains_paper_entries():
    names = catalog_list()
    for n in ("heisenberg(1)", "heisenberg(2)", "N6_4_4a", "H3", "D37_1", "B27", "A137_1", "heisenberg(n)"):
        assert n in names


def test_get_examples():
    h1 = catalog_get("heisenberg(1)")
    assert h1.algebra.rank == 2
    assert h1.expected.hypergenerated[1] is Verdict.NOT_HYPERGENERATED
    assert catalog_get("H3").expected.hypergenerated[3] is Verdict.NOT_HYPERGENERATED
    assert catalog_get("N6_4_4a").dim == 6
    assert catalog_get("heisenberg(4)").algebra.dim == 9
    assert catalog_get("free_nilpotent(2,3)").algebra.layer_dims == (2, 1, 2)
    with pytest.raises(KeyError):
        catalog_get("E8")


def test_paper_signs_verbatim():
    # [X3,X2] = T2 is stored as [X2,X3] = -T2
    n6 = catalog_get("N6_4_4a").algebra
    assert n6.structure(1, 2) == {5: -1}
    d37 = catalog_get("D37_1").algebra
    assert d37.structure(2, 3) == {4: -1}  # [X4,X3] = T1


@pytest.mark.parametrize("name", ["heisenberg(1)", "heisenberg(2)", "N6_4_4a", "H3", "D37_1", "B27", "A137_1"])
def test_golden_entries_clean(name):
    rep = run_golden(catalog_get(name))
    assert rep.clean, rep.diffs


def test_golden_b27_uses_pencil_sturm():
    rep = run_golden(catalog_get("B27"))
    assert rep.certificates["order"]["method"] == "PencilSturm"


def test_metivier_entries_have_order_rank():
    for name in catalog_list():
        if name.endswith(("(n)", "(m,s)")):
            continue
        e = catalog_get(name)
        if e.expected and e.expected.is_metivier:
            res = metivier_order(kaplan_pencil(step2_quotient(e.algebra)))
            assert res.exact and res.lower_bound == e.algebra.rank
        if e.expected:
            for k, v in e.expected.hypergenerated.items():
                if v is Verdict.HYPERGENERATED:
                    assert e.algebra.rank >= 2 * (k + 1)


def test_heisenberg_family_order():
    for n in range(1, 5):
        g = catalog_get(f"heisenberg({n})").algebra
        if n > 1:
            assert is_hypergenerated(g, n - 1).verdict is Verdict.HYPERGENERATED
        assert is_hypergenerated(g, n).verdict is Verdict.NOT_HYPERGENERATED


def test_run_golden_all_clean_and_fast():
    summary = run_golden_all()
    assert summary.clean, [r.diffs for r in summary.reports if not r.clean]
    assert summary.seconds < 5


def test_corrupted_corpus_reports_jacobi(tmp_path, monkeypatch):
    src = catalog.corpus_dir()
    dst = tmp_path / "corpus"
    shutil.copytree(src, dst)
    data = json.loads((dst / "A137_1.json").read_text())
    # flip the sign of [X2,T2] = S: Jacobi breaks
    for b in data["brackets"]:
        if (b["i"], b["j"]) == (2, 6):
            b["terms"][0]["c"] = "-1"
    (dst / "A137_1.json").write_text(json.dumps(data))
    monkeypatch.setenv("HYPERGEN_CORPUS", str(dst))
    rep = run_golden(catalog_get("A137_1"))
    assert not rep.clean
    assert any("jacobi" in d for d in rep.diffs)
    assert not run_golden_all().clean
