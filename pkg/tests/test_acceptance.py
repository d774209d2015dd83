"""Acceptance criteria 1-12, one PASS/FAIL line each.

Criteria 1-4 and 6-10 read the per-theorem results of one full suite run
(seed 1, 500 samples); criterion 12 repeats that run to compare the JSON
reports byte for byte.  Run directly or under pytest; under pytest the lines
are printed in the terminal summary.
"""
import functools
import time

from fibcheck.lab import mutants
from fibcheck.lab.suite import SuiteConfig, examples_report, run_suite

RESULTS = {}
FULL = SuiteConfig(seed=1, samples=500)
MUTANT_THEOREMS = ["laws", "catalog", "chevalley", "cocart-left", "cart-right", "two-sided",
                   "discrete", "examples"]


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    return ok


@functools.lru_cache(maxsize=None)
def full_run():
    t0 = time.perf_counter()
    rep = run_suite(FULL)
    return rep, time.perf_counter() - t0


def theorem(name):
    return full_run()[0].results[name]


def _summary(r, need):
    return (f"instances={r.instances} (need {need}) disagreements={r.disagreements} "
            f"skipped={r.skipped} +{r.positives}/-{r.negatives}")


def _agreement(n, name, need, extra=True):
    r = theorem(name)
    ok = r.disagreements == 0 and r.instances >= need and extra
    assert record(n, ok, _summary(r, need)), r.counterexamples[:1]


def test_criterion_01_chevalley():
    r = theorem("chevalley")
    ok = r.disagreements == 0 and r.seconds <= 60 and r.positives and r.negatives
    assert record(1, ok, _summary(r, 500) + f" time={r.seconds:.1f}s")


def test_criterion_02_sliced():
    _agreement(2, "sliced", 300)


def test_criterion_03_cocart_on_left():
    _agreement(3, "cocart-left", 300)


def test_criterion_04_two_sided():
    _agreement(4, "two-sided", 200)


def test_criterion_05_examples():
    rep = examples_report()
    assert record(5, rep.all_true, f"{sum(rep.verdicts.values())}/{len(rep.verdicts)} example checks"), rep


def test_criterion_06_free():
    _agreement(6, "free", 1)


def test_criterion_07_closure():
    _agreement(7, "closure", 1)


def test_criterion_08_yoneda():
    _agreement(8, "yoneda", 1)


def test_criterion_09_discrete():
    _agreement(9, "discrete", 300)


def test_criterion_10_appendices():
    a, f = theorem("appendix"), theorem("fibered-adjunction")
    ok = a.disagreements == 0 and f.disagreements == 0
    assert record(10, ok, f"appendix reports={a.instances} fibered-adjunction instances={f.instances} "
                          f"disagreements={a.disagreements + f.disagreements}")


def test_criterion_11_mutants():
    results = mutants.run_corpus(theorems=MUTANT_THEOREMS)
    alive = [r.mutant.name for r in results if not r.killed]
    replay_bad = []
    beyond_laws = 0
    for r in results:
        sampled = [n for n in r.killed_by if n not in ("laws", "catalog", "examples")]
        beyond_laws += bool(sampled)
        for n in sampled[:1]:
            cex = r.counterexamples[n]
            if mutants.replay(r.mutant, n, cex["recipe"]) != cex["status"]:
                replay_bad.append(r.mutant.name)
    ok = len(results) >= 20 and not alive and not replay_bad
    assert record(11, ok, f"mutants={len(results)} killed={len(results) - len(alive)} "
                          f"killed-by-instance-theorems={beyond_laws} replay-mismatches={len(replay_bad)}"), \
        (alive, replay_bad)


def test_criterion_12_full_suite():
    rep, seconds = full_run()
    again = run_suite(FULL)
    same = rep.to_json() == again.to_json()
    ok = rep.ok and seconds <= 300 and same
    assert record(12, ok, f"green={rep.ok} time={seconds:.0f}s byte-identical-json={same}")


def lines():
    out = []
    for n in range(1, 13):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            out.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            out.append(f"criterion {n:2d}: FAIL  not run")
    return out


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(lines()))
