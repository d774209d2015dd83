"""Single-table mutations of catalog fixtures.

A mutant replaces one entry of a composition or identity table.  Running
the suite with the mutant installed in place of the catalog entry must turn
at least one theorem red.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

from ..fincat import FinCat
from . import catalog, sampling
from .suite import SuiteConfig, _evaluate, run_suite, THEOREMS


@dataclass(frozen=True)
class Mutant:
    name: str
    target: str
    table: str  # "compose" or "identity"
    entry: tuple
    value: int

    def category(self) -> FinCat:
        C = catalog._built(self.target)
        comp = dict(C.compose)
        ident = list(C.identity)
        if self.table == "compose":
            comp[self.entry] = self.value
        else:
            ident[self.entry[0]] = self.value
        return FinCat(C.objects, C.morphisms, C.src, C.dst, ident, comp, name=C.name)

    def describe(self):
        C = catalog._built(self.target)
        lab = C.morphisms
        if self.table == "compose":
            g, f = self.entry
            return (f"{self.target}: {lab[g]} . {lab[f]} = {lab[C.compose[self.entry]]} "
                    f"-> {lab[self.value]}")
        return f"{self.target}: id({C.objects[self.entry[0]]}) -> {lab[self.value]}"


def _compose_mutants(target, limit):
    """Flip composites, preferring well-typed replacements."""
    C = catalog._built(target)
    res = []
    for (g, f), gf in sorted(C.compose.items()):
        if g in C.identity or f in C.identity:
            continue
        same = [m for m in C.homset(C.src[f], C.dst[g]) if m != gf]
        other = [m for m in range(C.n_mor) if m != gf and m not in same]
        value = (same or other)[0]
        res.append(Mutant(f"{target}:comp({g},{f})", target, "compose", (g, f), value))
        if len(res) >= limit:
            break
    return res


def _unit_mutants(target, limit):
    """Break a unit law: ``f . id = f`` replaced by another arrow."""
    C = catalog._built(target)
    res = []
    for f in range(C.n_mor):
        if f in C.identity:
            continue
        i = C.identity[C.src[f]]
        value = next(m for m in range(C.n_mor) if m != f)
        res.append(Mutant(f"{target}:unit({f})", target, "compose", (f, i), value))
        if len(res) >= limit:
            break
    return res


def _identity_mutants(target):
    C = catalog._built(target)
    res = []
    for x in range(C.n_obj):
        endo = [m for m in C.homset(x, x) if m != C.identity[x]]
        if endo:
            res.append(Mutant(f"{target}:ident({x})", target, "identity", (x,), endo[0]))
    return res


def corpus():
    ms = []
    for t in ("Bidem", "BZ2", "iso", "[2]", "[3]", "square"):
        ms += _compose_mutants(t, 3)
    for t in ("parallel", "span", "cospan", "[1]", "Bidem", "BZ2", "iso", "[2]", "square", "[3]"):
        ms += _unit_mutants(t, 1)
    for t in ("Bidem", "BZ2"):
        ms += _identity_mutants(t)
    return ms


@contextmanager
def installed(m: Mutant):
    catalog._OVERRIDES[m.target] = m.category()
    sampling.clear_caches()
    try:
        yield
    finally:
        catalog._OVERRIDES.pop(m.target, None)
        sampling.clear_caches()


@dataclass
class MutantResult:
    mutant: Mutant
    killed_by: list
    counterexamples: dict

    @property
    def killed(self):
        return bool(self.killed_by)


def run_mutant(m: Mutant, samples=0, seed=0, theorems=None) -> MutantResult:
    with installed(m):
        rep = run_suite(SuiteConfig(seed=seed, samples=samples, theorems=theorems))
    killed = [n for n, r in rep.results.items() if r.disagreements]
    cex = {n: rep.results[n].counterexamples[0] for n in killed}
    return MutantResult(m, killed, cex)


def replay(m: Mutant, theorem: str, recipe) -> str:
    """Re-run a recorded counterexample with the mutant installed."""
    with installed(m):
        kind = THEOREMS[theorem][0]
        if kind is None:
            res = run_suite(SuiteConfig(samples=0, theorems=[theorem])).results[theorem]
            return "fail" if res.disagreements else "pass"
        return _evaluate(theorem, kind, recipe)[0]


def _run_one(args):
    return run_mutant(*args)


def run_corpus(samples=0, seed=0, theorems=None, workers=1):
    """Results in corpus order; each mutant runs in isolation."""
    args = [(m, samples, seed, theorems) for m in corpus()]
    if workers <= 1:
        return [_run_one(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, args))
