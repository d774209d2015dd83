import json

import pytest

from fibcheck import fincat as fc
from fibcheck import twosided as ts
from fibcheck.lab import catalog, io, mutants, sampling
from fibcheck.lab.cli import main
from fibcheck.lab.suite import SuiteConfig, run_suite, shrink, replay
from fibcheck.search import isomorphic


def test_catalog_contents():
    assert len(catalog.seed_catalog()) == 12
    for n in catalog.names():
        assert catalog.fingerprint(catalog.get(n)) == catalog.FINGERPRINTS[n]
    assert (catalog.get("[2]").n_obj, catalog.get("[2]").n_mor) == (3, 6)
    assert (catalog.get("iso").n_obj, catalog.get("iso").n_mor) == (2, 4)


@pytest.mark.parametrize("kind", sampling.KINDS)
def test_sampling_deterministic(kind):
    a = [r for r, _ in sampling.samples(42, kind, 5)]
    b = [r for r, _ in sampling.samples(42, kind, 5)]
    assert json.dumps(a) == json.dumps(b)
    assert a != [r for r, _ in sampling.samples(43, kind, 5)]


def test_samples_respect_caps():
    for kind in sampling.KINDS:
        for _, obj in sampling.samples(7, kind, 10):
            for C in sampling._categories_of(obj):
                assert C.n_obj <= fc.CAPS.max_objects and C.n_mor <= fc.CAPS.max_morphisms


def test_fibration_samples_mixed():
    from fibcheck.fibrations import is_cocartesian_fibration
    verdicts = {is_cocartesian_fibration(p) for _, p in sampling.samples(1, "fibration", 60)}
    assert verdicts == {True, False}


def test_category_file_roundtrip(tmp_path, base):
    path = tmp_path / "c.json"
    io.write_json(path, fc.category_to_raw(base))
    assert isomorphic(io.load_category(str(path)), base)


def test_instance_roundtrip(tmp_path):
    h = ts.hom_span(catalog.get("span"))
    path = tmp_path / "h.json"
    io.write_json(path, io.instance_to_raw("two-sided", h))
    kind, back = io.load_instance(str(path))
    assert kind == "two-sided"
    assert isomorphic(back.total, h.total)
    assert ts.is_two_sided(back)


def test_functor_refs(tmp_path):
    (tmp_path / "w.json").write_text(json.dumps(
        {"objects": ["x", "y"], "morphisms": [{"id": "f", "src": "x", "dst": "y"}]}))
    raw = {"src": "w.json", "dst": "[1]", "on_objects": {"x": "0", "y": "1"},
           "on_morphisms": {"f": "(0, 1)"}}
    (tmp_path / "F.json").write_text(json.dumps(raw))
    F = io.load_functor("F.json", str(tmp_path))
    assert fc.is_isomorphism(F)
    G = io.load_functor(["cod", ["cat", "[1]"]])
    assert G.dst.n_obj == 2


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_cli_exit_codes(tmp_path, capsys):
    good = _write(tmp_path, "good.json", {"objects": ["x"]})
    bad = _write(tmp_path, "bad.json", {"objects": ["x", "y"],
                                        "morphisms": [{"id": "f", "src": "x", "dst": "y"},
                                                      {"id": "g", "src": "y", "dst": "x"}]})
    assert main(["validate", good]) == 0
    assert main(["validate", bad]) == 2
    hom = str(tmp_path / "hom.json")
    assert main(["construct", "--op", "comma", '["id", ["cat", "[1]"]]', '["id", ["cat", "[1]"]]',
                 "-o", hom]) == 0
    assert main(["check", "--kind", "two-sided", hom]) == 0
    assert main(["check", "--kind", "two-sided-discrete", "--method", "elementary", hom]) == 0
    assert main(["yoneda", hom]) == 0
    assert main(["yoneda", hom, "--at", "0,1"]) == 0
    neg = _write(tmp_path, "neg.json", {"kind": "fibration",
                                        "components": {"pi": ["dom", ["cat", "parallel"]]}})
    assert main(["check", "--kind", "cocart", neg]) == 1
    assert main(["check", "--kind", "two-sided", neg]) == 2
    big = str(tmp_path / "big.json")
    assert main(["construct", "--op", "exponential", "[3]", "[3]", "-o", big]) == 0
    assert main(["validate", big]) == 3
    capsys.readouterr()


def test_cli_construct_ops(tmp_path):
    hom = str(tmp_path / "hom.json")
    main(["construct", "--op", "comma", '["id", ["cat", "[1]"]]', '["id", ["cat", "[1]"]]', "-o", hom])
    for op, args in [("arrow", ["span"]), ("product", ["[1]", "iso"]),
                     ("pullback", ['["cod", ["cat", "[1]"]]', '["pick", ["cat", "[1]"], 0]']),
                     ("span-compose", [hom, hom]), ("free2s", [hom]), ("cotensor", ["[1]", hom]),
                     ("sliced-comma", ['["id", ["cat", "[1]"]]', '["id", ["cat", "[1]"]]',
                                       '["id", ["cat", "[1]"]]']),
                     ("sliced-product", ['["cod", ["cat", "[1]"]]', '["cod", ["cat", "[1]"]]']),
                     ("vert", ['["cod", ["cat", "[1]"]]'])]:
        out = str(tmp_path / f"{op}.json")
        assert main(["construct", "--op", op, *args, "-o", out]) == 0, op
        assert main(["validate", out]) == 0, op


def test_suite_catalog_only_green():
    rep = run_suite(SuiteConfig(samples=0, theorems=["laws", "catalog", "chevalley", "cocart-left",
                                                     "two-sided", "examples"]))
    assert rep.ok
    for r in rep.results.values():
        assert r.agreements + r.disagreements == r.instances


def test_suite_json_deterministic():
    cfg = SuiteConfig(seed=3, samples=15, theorems=["chevalley", "discrete", "fibered-adjunction"])
    assert run_suite(cfg).to_json() == run_suite(cfg).to_json()


def test_config_invariants():
    with pytest.raises(ValueError):
        SuiteConfig(max_objects=0)
    with pytest.raises(ValueError):
        SuiteConfig(samples=-1)


def test_mutant_corpus_shape():
    corpus = mutants.corpus()
    assert len(corpus) >= 20
    assert len({m.name for m in corpus}) == len(corpus)
    for m in corpus:
        C = m.category()
        base = catalog._built(m.target)
        changed = (sum(C.compose[k] != base.compose[k] for k in base.compose)
                   + sum(a != b for a, b in zip(C.identity, base.identity)))
        assert changed == 1


def test_mutant_killed_and_replayable():
    m = next(x for x in mutants.corpus() if x.name == "iso:comp(2,3)")
    res = mutants.run_mutant(m, theorems=["laws", "two-sided"])
    assert res.killed_by == ["laws", "two-sided"]
    cex = res.counterexamples["two-sided"]
    assert mutants.replay(m, "two-sided", cex["recipe"]) == cex["status"]
    # the unmutated catalog passes the same recipe
    assert replay("two-sided", cex["recipe"]) == "pass"


def test_shrink_keeps_failure():
    m = next(x for x in mutants.corpus() if x.name == "[2]:comp(4,1)")
    with mutants.installed(m):
        small = shrink("chevalley", "fibration", ["proj1", ["cat", "[2]"], ["cat", "iso"]])
        assert replay("chevalley", small) != "pass"
    assert json.dumps(small).count("[") <= json.dumps(["proj1", ["cat", "[2]"], ["cat", "iso"]]).count("[")
