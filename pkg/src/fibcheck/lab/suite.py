"""Theorem suites: every equivalent criterion evaluated on catalog-derived
and sampled instances, with shrinking of counterexamples."""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .. import fincat as fc
from .. import twosided as ts
from ..adjunctions import fibered_adjunction_criteria_agree
from ..errors import FibcheckError, PreconditionFailed, SizeCapExceeded
from ..fibrations import (chevalley_criteria_agree, cocart_functor_criteria_agree,
                          is_cocartesian_fibration, is_cocartesian_functor)
from ..fincat import identity_functor, is_isofibration
from ..properness import (homotopy_invariance_check, product_fibered_equivalence_check,
                          right_properness_check, sliced_product_fibered_equivalence_check)
from ..report import CheckReport
from ..sliced import (cocart_in_cart_criteria_agree, is_cocart_in_cart, prod_comma_commutation_check,
                      sliced_cocart_criteria_agree, sliced_vs_absolute_check)
from ..yoneda import dependent_yoneda_check, yoneda_check
from . import catalog, sampling


@dataclass
class SuiteConfig:
    seed: int = 0
    samples: int = 100
    max_objects: int = 8
    max_morphisms: int = 40
    max_functor_candidates: int = 20000
    theorems: list | None = None
    report_format: str = "text"
    workers: int = 1

    def __post_init__(self):
        if min(self.max_objects, self.max_morphisms, self.max_functor_candidates) <= 0:
            raise ValueError("caps must be positive")
        if self.samples < 0:
            raise ValueError("samples must be non-negative")


@dataclass
class TheoremResult:
    name: str
    instances: int = 0
    agreements: int = 0
    disagreements: int = 0
    skipped: int = 0
    positives: int = 0
    negatives: int = 0
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self, timing=False):
        d = {"instances": self.instances, "agreements": self.agreements,
             "disagreements": self.disagreements, "skipped": self.skipped,
             "positives": self.positives, "negatives": self.negatives,
             "counterexamples": self.counterexamples}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class SuiteReport:
    config: SuiteConfig
    results: dict

    @property
    def ok(self):
        return all(r.disagreements == 0 for r in self.results.values())

    def to_json(self, timing=False) -> str:
        cfg = {k: v for k, v in self.config.__dict__.items() if k not in ("workers", "report_format")}
        body = {"config": cfg, "ok": self.ok,
                "theorems": {n: r.to_dict(timing) for n, r in self.results.items()}}
        return json.dumps(body, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for n, r in self.results.items():
            flag = "ok  " if r.disagreements == 0 else "FAIL"
            lines.append(f"{flag} {n:22s} instances={r.instances:4d} agree={r.agreements:4d} "
                         f"disagree={r.disagreements} skipped={r.skipped} "
                         f"(+{r.positives}/-{r.negatives}) {r.seconds:.2f}s")
        lines.append("suite: " + ("green" if self.ok else "red"))
        return "\n".join(lines)


# -- theorem checks ----------------------------------------------------------------
# each check maps an instance to a CheckReport; mode "agree" requires all
# verdicts equal, "all" requires all verdicts true

def _laws(obj):
    rep = CheckReport("laws")
    for C in sampling._categories_of(obj):
        if C.law_violations(limit=1):
            rep.verdicts[f"laws:{C.name}"] = False
    rep.verdicts["laws"] = all(rep.verdicts.values()) if rep.verdicts else True
    return rep


def _sliced_absolute(sm):
    B = sm.base
    if not (is_cocartesian_fibration(sm.xi) and is_cocartesian_fibration(sm.pi)
            and is_cocartesian_functor(sm.phi, identity_functor(B), sm.xi, sm.pi)):
        return None
    return sliced_vs_absolute_check(sm)


def _cocart_in_cart(sm):
    if not is_cocart_in_cart(sm):
        return None
    return cocart_in_cart_criteria_agree(sm)


def _cocart_left(inst):
    return ts.cocart_on_left_criteria_agree(inst)


def _cart_right(inst):
    return ts.cart_on_right_criteria_agree(inst)


def _discrete(inst):
    rep = ts.discrete_criteria_agree(inst)
    disc = rep.verdicts["leg-restrictions"]
    if disc and not ts.discrete_corollaries_hold(rep):
        rep.verdicts["corollaries"] = False
    elif disc:
        rep.verdicts["corollaries"] = True
    return rep


def _yoneda(inst):
    if not ts.is_two_sided(inst):
        return None
    rep = CheckReport("yoneda")
    try:
        r = yoneda_check(inst)
        rep.verdicts.update({f"abs:{k}": v for k, v in r.verdicts.items()})
    except PreconditionFailed:
        pass
    for a in range(inst.A.n_obj):
        for b in range(inst.B.n_obj):
            r = dependent_yoneda_check(inst, a, b)
            for k, v in r.verdicts.items():
                rep.verdicts[f"dep:{k}"] = rep.verdicts.get(f"dep:{k}", True) and v
    return rep


def _closure(inst):
    """Two-sided instances stay two-sided under every construction, and the
    comparison maps are two-sided functors."""
    if not ts.is_two_sided(inst):
        return None
    from ..fincat import bang, pick
    rep = CheckReport("closure")
    A, B = inst.A, inst.B
    for a in range(min(A.n_obj, 2)):
        for b in range(min(B.n_obj, 2)):
            pb, cone = ts.pullback_two_sided(inst, pick(A, a), pick(B, b))
            rep.verdicts[f"pullback({a},{b})"] = ts.is_two_sided(pb) and ts.is_two_sided_functor(cone)
    pb, cone = ts.pullback_two_sided(inst, identity_functor(A), identity_functor(B))
    rep.verdicts["pullback(id,id)"] = ts.is_two_sided(pb) and ts.is_two_sided_functor(cone)
    w = ts.whisker_two_sided(inst, bang(A), bang(B))
    rep.verdicts["whisker"] = ts.is_two_sided(w)
    hB = ts.hom_span(B)
    comp, lifts = ts.span_compose(inst, hB)
    rep.verdicts["span-compose"] = ts.is_two_sided(comp) and lifts is not False
    unit = ts.identity_instance(catalog.get("[1]"), catalog.get("1"))
    pr, maps = ts.two_sided_product([inst, unit])
    rep.verdicts["product"] = ts.is_two_sided(pr) and all(ts.is_two_sided_functor(m) for m in maps)
    sp, smaps = ts.two_sided_sliced_product([inst, inst])
    rep.verdicts["sliced-product"] = ts.is_two_sided(sp) and all(ts.is_two_sided_functor(m) for m in smaps)
    try:
        ct = ts.two_sided_cotensor(catalog.get("[1]"), inst)
        fc.check_input_size(ct.A)
        fc.check_input_size(ct.B)
        rep.verdicts["cotensor"] = ts.is_two_sided(ct)
        rep.verdicts["leibniz"] = ts.leibniz_cotensor_functor_check(pick(catalog.get("[1]"), 1),
                                                                    ts.identity_map(inst))
    except SizeCapExceeded:
        rep.notes.append("cotensor skipped: caps")
    return rep


def _free(inst):
    rep = CheckReport("free")
    free = ts.free_two_sided(inst)
    rep.verdicts["two-sided"] = ts.is_two_sided(free)
    rep.verdicts["bifiber-formula"] = ts.free_bifibers_match(inst, free)
    return rep


def _fibered_adj(pair):
    phi, psi, pE, pF = pair
    return fibered_adjunction_criteria_agree(phi, psi, pE, pF)


def _square(sq):
    return cocart_functor_criteria_agree(*sq)


def _check_two_sided(inst):
    return ts.two_sided_criteria_agree(inst)


THEOREMS = {
    # name: (sample kind or None, check, mode); kind None runs on the catalog only
    "laws": (None, None, "all"),
    "catalog": (None, None, "all"),
    "chevalley": ("fibration", chevalley_criteria_agree, "agree"),
    "cocart-functor": ("square", _square, "agree"),
    "sliced": ("sliced", sliced_cocart_criteria_agree, "agree"),
    "sliced-absolute": ("sliced", _sliced_absolute, "agree"),
    "cocart-in-cart": ("sliced", _cocart_in_cart, "agree"),
    "cocart-left": ("two-sided", _cocart_left, "agree"),
    "cart-right": ("two-sided", _cart_right, "agree"),
    "two-sided": ("two-sided", _check_two_sided, "agree"),
    "discrete": ("two-sided", _discrete, "discrete"),
    "yoneda": ("two-sided", _yoneda, "all"),
    "closure": ("two-sided", _closure, "all"),
    "free": ("two-sided", _free, "all"),
    "fibered-adjunction": ("fibered-pair", _fibered_adj, "agree"),
    "examples": (None, None, "all"),
    "appendix": (None, None, "all"),
}


def passes(mode, rep: CheckReport) -> bool:
    if mode == "agree":
        return rep.agree
    if mode == "discrete":
        return rep.agree and rep.verdicts.get("corollaries", True)
    return rep.all_true


# -- catalog-derived instances ---------------------------------------------------------

def _names():
    return catalog.base_names()


def catalog_recipes(kind):
    """Deterministic recipes built from every catalog entry."""
    out = []
    if kind == "fibration":
        for n in _names():
            c = ["cat", n]
            out += [["cod", c], ["dom", c], ["fop", ["cod", c]], ["fop", ["dom", c]], ["bang", c],
                    ["id", c], ["proj1", c, ["cat", "[1]"]], ["proj2", c, ["cat", "iso"]]]
    elif kind == "sliced":
        for n in _names():
            c = ["cat", n]
            out += [["sliced", ["id", ["arrow", c]], ["cod", c], ["cod", c]],
                    ["sliced", ["cod", ["arrow", c]], ["then", ["cod", ["arrow", c]], ["cod", c]], ["cod", c]],
                    ["sliced", ["dom", ["arrow", c]], ["then", ["dom", ["arrow", c]], ["dom", c]], ["dom", c]],
                    ["sliced", ["cod", c], ["then", ["cod", c], ["bang", c]], ["bang", c]]]
    elif kind == "two-sided":
        for n in _names():
            c = ["cat", n]
            out += [["hom", c], ["id2", c, ["cat", "[1]"]], ["swap", ["hom", c]],
                    ["comma-span", ["id", c], ["bang", c]]]
        out += [["noncomm"], ["compose2", ["hom", ["cat", "[1]"]], ["hom", ["cat", "[1]"]]],
                ["comma-span", ["pick", ["cat", "cospan"], 0], ["pick", ["cat", "cospan"], 2]]]
    elif kind == "fibered-pair":
        for n in ["1", "[1]", "[2]", "iso", "span"]:
            c = ["cat", n]
            out.append([["id", c], ["id", c], ["bang", c], ["bang", c]])
            out.append([["bang", c], ["functor", ["cat", "1"], c, 0], ["bang", c],
                        ["id", ["cat", "1"]]])
    elif kind == "square":
        for n in _names():
            c = ["cat", n]
            for j in (["id", c], ["pick", c, 0]):
                out.append([["pb-top", ["cod", c], j], j, ["pb", ["cod", c], j], ["cod", c]])
    return out


def _catalog_instances(kind):
    res = []
    for r in catalog_recipes(kind):
        try:
            obj = sampling.build_sample(kind, r)
        except (FibcheckError, KeyError, IndexError):
            continue
        if kind in ("fibration", "sliced", "two-sided") and not _iso_ok(kind, obj):
            continue
        res.append((r, obj))
    return res


def _iso_ok(kind, obj):
    if kind == "fibration":
        return is_isofibration(obj)
    if kind == "sliced":
        return all(is_isofibration(f) for f in (obj.phi, obj.xi, obj.pi))
    return is_isofibration(obj.phi)


# catalog-only theorems ------------------------------------------------------------

def examples_report() -> CheckReport:
    from ..search import exponential, isomorphic
    rep = CheckReport("examples")
    for n in _names():
        h = ts.hom_span(catalog.get(n))
        rep.verdicts[f"hom({n}) two-sided"] = ts.is_two_sided(h)
        rep.verdicts[f"hom({n}) discrete"] = ts.is_two_sided_discrete(h)
    cos = catalog.get("cospan")
    for x in range(3):
        for y in range(3):
            from ..fincat import pick
            cs = ts.comma_span(pick(cos, x), pick(cos, y))
            rep.verdicts[f"comma({x},{y}) discrete"] = ts.is_two_sided_discrete(cs)
    I = catalog.chain(1)
    R, _ = ts.span_compose(ts.hom_span(I), ts.hom_span(I))
    rep.verdicts["composite total = [1]^[2]"] = (R.total.n_obj == 4
                                                 and isomorphic(R.total, exponential(catalog.chain(2), I)[0]))
    bf = ts.bifiber(R, 1, 0)
    rep.verdicts["composite bifiber(1,0)"] = bf.n_obj == 2 and not bf.is_groupoid()
    rep.verdicts["composite not discrete"] = not ts.is_two_sided_discrete(R)
    return rep


def appendix_reports():
    from ..fincat import product, pick
    from ..search import enumerate_functors
    reps = []
    iso = catalog.get("iso")
    for n in _names():
        C = catalog.get(n)
        P, p1, _ = product(C, iso)
        rp = CheckReport(f"right-properness({n})")
        for X in ("1", "[1]", "span"):
            for j in enumerate_functors(catalog.get(X), C)[:6]:
                rp.verdicts[f"{X}:{j.obj}"] = right_properness_check(p1, j)
        reps.append(rp)
        hi = CheckReport(f"homotopy-invariance({n})")
        f = identity_functor(C)
        sec = pick_section(C, iso)
        for g in enumerate_functors(catalog.get("[1]"), C)[:3]:
            hi.verdicts[str(g.obj)] = homotopy_invariance_check(
                g, f, product_functor_iso(g, iso), product_functor_iso(f, iso),
                pick_section(g.src, iso), sec, sec)
        reps.append(hi)
        fe = CheckReport(f"fibered-equivalences({n})")
        triple = (p1, p1.then(identity_functor(C)), identity_functor(C))
        fe.verdicts["product"] = product_fibered_equivalence_check([triple, triple])
        fe.verdicts["sliced-product"] = sliced_product_fibered_equivalence_check([triple, triple])
        reps.append(fe)
    pc = CheckReport("prod-comma")
    small = [(pick(catalog.get("[1]"), 0), identity_functor(catalog.get("[1]")), fc.bang(catalog.get("[1]"))),
             (identity_functor(catalog.get("[1]")), identity_functor(catalog.get("[1]")),
              identity_functor(catalog.get("[1]"))),
             (identity_functor(iso), identity_functor(iso), fc.bang(iso))]
    for k in range(0, 4):
        for start in range(len(small)):
            cos = [small[(start + i) % len(small)] for i in range(k)]
            pc.verdicts[f"|I|={k} from {start}"] = prod_comma_commutation_check(cos)
    reps.append(pc)
    reps.append(fibered_adjunction_catalog())
    return reps


def pick_section(C, iso):
    """``C -> C x iso`` at the first object of ``iso``."""
    from ..fincat import pairing, product, constant
    P, _, _ = product(C, iso)
    return pairing(P, identity_functor(C), constant(C, iso, 0))


def product_functor_iso(F, iso):
    from ..fincat import product, product_functor
    P, _, _ = product(F.src, iso)
    Q, _, _ = product(F.dst, iso)
    return product_functor(P, Q, F, identity_functor(iso))


def fibered_adjunction_catalog():
    from ..fibrations import transport_adjunction, transport_map
    rep = CheckReport("fibered-adjunction-catalog")
    for n in _names():
        pi = fc.arrow_category(catalog.get(n))[2]
        iota, cod = transport_map(pi)
        adj = transport_adjunction(pi)
        if adj is None:
            continue
        r = fibered_adjunction_criteria_agree(iota, adj.adj.left, pi, cod)
        rep.verdicts[n] = r.agree and r.all_true
    return rep


def catalog_reports():
    rep = CheckReport("catalog")
    for n in catalog.names():
        try:
            fp = catalog.fingerprint(catalog.get(n))
        except (KeyError, IndexError):
            fp = None
        rep.verdicts[n] = fp == catalog.FINGERPRINTS[n]
    return [rep]


_CATALOG_ONLY = {
    "laws": lambda: [_laws(catalog.get(n)) for n in catalog.names()],
    "catalog": catalog_reports,
    "examples": lambda: [examples_report()],
    "appendix": appendix_reports,
}


# -- running ----------------------------------------------------------------------------

def _evaluate(theorem, kind, recipe):
    """Worker entry: ``(status, verdicts)`` where status is pass/fail/skip/error."""
    _, check, mode = THEOREMS[theorem]
    try:
        obj = sampling.build_sample(kind, recipe)
        rep = check(obj)
    except SizeCapExceeded:
        return "skip", None
    except Exception as exc:  # reported, not raised: the suite must finish
        return "error", {"error": f"{type(exc).__name__}: {exc}"}
    if rep is None:
        return "skip", None
    return ("pass" if passes(mode, rep) else "fail"), dict(rep.verdicts)


def _sample_recipes(cfg, kind, n):
    with fc.caps(max_objects=cfg.max_objects, max_morphisms=cfg.max_morphisms,
                 max_functor_candidates=cfg.max_functor_candidates):
        return [r for r, _ in sampling.samples(cfg.seed, kind, n)]


def shrink(theorem, kind, recipe, steps=40):
    """Prune the construction tree while the failure persists with the same
    status; candidates that do not even build are rejected."""
    want = _evaluate(theorem, kind, recipe)[0]

    def failing(r):
        try:
            sampling.build_sample(kind, r)
        except Exception:
            return False
        return _evaluate(theorem, kind, r)[0] == want

    best = recipe
    for _ in range(steps):
        for cand in _shrink_candidates(best):
            if failing(cand):
                best = cand
                break
        else:
            break
    return best


def _shrink_candidates(r):
    """Smaller variants: catalog leaves replaced by smaller entries and
    nodes replaced by same-sorted children."""
    order = ["1", "[1]", "iso", "[2]"]
    if isinstance(r, list) and r:
        if r[0] == "cat" and isinstance(r[1], str):
            for n in order:
                if n != r[1] and order.index(n) < (order.index(r[1]) if r[1] in order else 99):
                    yield ["cat", n]
            return
        for i, child in enumerate(r):
            if isinstance(child, list) and child and isinstance(child[0], str) and _sort(child) == _sort(r):
                yield child
        for i, child in enumerate(r):
            if isinstance(child, list):
                for c in _shrink_candidates(child):
                    yield r[:i] + [c] + r[i + 1:]
            elif isinstance(child, int) and child > 0 and i > 0:
                yield r[:i] + [0] + r[i + 1:]


def _sort(r):
    try:
        v = sampling.build(r)
    except Exception:
        return None
    return type(v).__name__


def run_theorem(name, cfg: SuiteConfig, recipes=None, pool=None) -> TheoremResult:
    kind, check, mode = THEOREMS[name]
    res = TheoremResult(name)
    t0 = time.perf_counter()
    if kind is None:
        try:
            reps = _CATALOG_ONLY[name]()
        except Exception as exc:
            res.instances += 1
            res.disagreements += 1
            res.counterexamples.append({"recipe": name, "status": "error",
                                        "verdicts": {"error": f"{type(exc).__name__}: {exc}"}})
            reps = []
        for rep in reps:
            res.instances += 1
            if passes(mode, rep):
                res.agreements += 1
            else:
                res.disagreements += 1
                res.counterexamples.append({"recipe": rep.name, "verdicts": rep.verdicts})
        res.seconds = time.perf_counter() - t0
        return res
    if recipes is None:
        recipes = [r for r, _ in _catalog_instances(kind)] + _sample_recipes(cfg, kind, cfg.samples)
    args = [(name, kind, r) for r in recipes]
    if pool is not None:
        outcomes = list(pool.map(_evaluate_star, args, chunksize=8))
    else:
        outcomes = [_evaluate(*a) for a in args]
    for r, (status, verdicts) in zip(recipes, outcomes):
        if status == "skip":
            res.skipped += 1
            continue
        res.instances += 1
        if status == "pass":
            res.agreements += 1
            vals = set(verdicts.values())
            if vals == {True}:
                res.positives += 1
            elif vals == {False}:
                res.negatives += 1
        else:
            res.disagreements += 1
            small = shrink(name, kind, r)
            res.counterexamples.append({"recipe": r, "shrunk": small, "status": status,
                                        "verdicts": verdicts})
    res.seconds = time.perf_counter() - t0
    return res


def _evaluate_star(a):
    return _evaluate(*a)


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    names = cfg.theorems or list(THEOREMS)
    unknown = [n for n in names if n not in THEOREMS]
    if unknown:
        raise ValueError(f"unknown theorems: {unknown}")
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.workers)
    try:
        with fc.caps(max_objects=cfg.max_objects, max_morphisms=cfg.max_morphisms,
                     max_functor_candidates=cfg.max_functor_candidates):
            results = {n: run_theorem(n, cfg, pool=pool) for n in names}
    finally:
        if pool is not None:
            pool.shutdown()
    return SuiteReport(cfg, results)


def default_workers():
    return max(1, min(4, os.cpu_count() or 1))


def replay(theorem: str, recipe) -> str:
    """Re-run one recorded instance; returns pass/fail/skip/error."""
    kind = THEOREMS[theorem][0]
    return _evaluate(theorem, kind, recipe)[0]
