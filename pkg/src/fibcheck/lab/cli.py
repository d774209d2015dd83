"""``fibcheck`` command line.

Exit codes: 0 all checks pass, 1 a negative verdict or a disagreement,
2 input or validation error, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from .. import fincat as fc
from .. import twosided as ts
from ..errors import FibcheckError, PreconditionFailed, SizeCapExceeded
from ..fibrations import (chevalley_criteria_agree, chevalley_lari_check, is_cocartesian_fibration,
                          is_covariant, transport_adjoint_check)
from ..report import CheckReport
from ..search import exponential
from ..sliced import (is_sliced_cocartesian, sliced_cocart_criteria_agree, sliced_comma,
                      sliced_product, vertical_arrows)
from ..yoneda import dependent_yoneda_check, yoneda_check
from . import io
from .suite import THEOREMS, SuiteConfig, run_suite

OK, NEGATIVE, INPUT_ERROR, CAP_EXCEEDED = 0, 1, 2, 3


def _fibration_report(pi, method, dual=False):
    if dual:
        pi = pi.op
    if method == "all":
        return chevalley_criteria_agree(pi)
    fn = {"elementary": is_cocartesian_fibration, "chevalley": chevalley_lari_check,
          "adjoint": transport_adjoint_check}[method]
    rep = CheckReport("cartesian" if dual else "cocartesian")
    rep.verdicts[method] = fn(pi)
    return rep


def _discrete_report(pi, method):
    """Covariant, or equivalently cocartesian with groupoid fibers."""
    rep = CheckReport("discrete")
    if method in ("elementary", "all"):
        rep.verdicts["covariant"] = is_covariant(pi)
    if method != "elementary":
        groupoids = all(fc.fiber(pi, b).is_groupoid() for b in range(pi.dst.n_obj))
        base = _fibration_report(pi, method)
        for k, v in base.verdicts.items():
            rep.verdicts[f"{k}+groupoid-fibers"] = v and groupoids
    return rep


def _sliced_report(sm, method):
    if method in ("all", "chevalley", "adjoint"):
        rep = sliced_cocart_criteria_agree(sm)
        if method != "all":
            key = "fibered-lari" if method == "chevalley" else "fibered-left-adjoint"
            rep.verdicts = {key: rep.verdicts[key]}
        return rep
    rep = CheckReport("sliced-cocartesian")
    rep.verdicts["elementary"] = is_sliced_cocartesian(sm)
    return rep


def _pick(rep, method, table):
    if method != "all":
        key = table[method]
        rep.verdicts = {key: rep.verdicts[key]}
    return rep


def _as_two_sided(kind, obj):
    if kind != "two-sided":
        raise PreconditionFailed(f"this check needs a two-sided instance, got {kind}")
    return obj


def _as_fibration(kind, obj):
    if kind == "fibration":
        return obj
    if kind == "sliced":
        return obj.phi
    raise PreconditionFailed(f"this check needs a fibration instance, got {kind}")


def check_instance(kind, obj, what, method) -> CheckReport:
    if what in ("cocart", "cart"):
        return _fibration_report(_as_fibration(kind, obj), method, dual=what == "cart")
    if what == "discrete":
        return _discrete_report(_as_fibration(kind, obj), method)
    if what == "sliced-cocart":
        if kind != "sliced":
            raise PreconditionFailed("sliced-cocart needs a sliced instance")
        return _sliced_report(obj, method)
    inst = _as_two_sided(kind, obj)
    if what == "cocart-on-left":
        return _pick(ts.cocart_on_left_criteria_agree(inst), method,
                     {"elementary": "elementary", "chevalley": "cocartesian-functor",
                      "adjoint": "fibered-left-adjoint"})
    if what == "two-sided":
        return _pick(ts.two_sided_criteria_agree(inst), method,
                     {"elementary": "definition", "chevalley": "chi-cartesian",
                      "adjoint": "adjoint-square"})
    if what == "two-sided-discrete":
        return _pick(ts.discrete_criteria_agree(inst), method,
                     {"elementary": "leg-restrictions", "chevalley": "groupoid-bifibers",
                      "adjoint": "groupoid-bifibers"})
    raise ValueError(what)


def _emit(rep: CheckReport, as_json):
    if as_json:
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    else:
        print(rep)
        for k, v in rep.witnesses.items():
            print(f"  witness {k}: {v}")
        for n in rep.notes:
            print(f"  note: {n}")


def _status(rep: CheckReport):
    return OK if rep.agree and rep.all_true else NEGATIVE


def cmd_validate(args):
    what, obj = io.load_any(args.file)
    if what == "category":
        fc.check_input_size(obj)
        print(f"category {obj.name!r}: {obj.n_obj} objects, {obj.n_mor} morphisms, valid")
    elif what == "functor":
        print(f"functor {obj.src.name} -> {obj.dst.name}: valid")
    else:
        kind, inst = obj
        print(f"{kind} instance: valid")
    return OK


def cmd_check(args):
    kind, obj = io.load_instance(args.instance)
    for C in _categories(kind, obj):
        fc.check_input_size(C)
    rep = check_instance(kind, obj, args.kind, args.method)
    _emit(rep, args.report == "json")
    return _status(rep)


def _categories(kind, obj):
    if kind == "fibration":
        return [obj.src, obj.dst]
    if kind == "sliced":
        return [obj.phi.src, obj.phi.dst, obj.base]
    return [obj.total, obj.A, obj.B]


def _two_sided_out(inst):
    return io.instance_to_raw("two-sided", inst)


def _construct(op, refs, base_dir="."):
    """Returns JSON data for the constructed object."""
    def cat(r):
        return io.load_category(r, base_dir)

    def fun(r):
        return io.load_functor(r, base_dir)

    def inst(r):
        kind, obj = io.load_instance(r) if isinstance(r, str) and r.endswith(".json") \
            else io.instance_from_raw(r, base_dir)
        return _as_two_sided(kind, obj)

    def need(n):
        if len(refs) != n:
            raise PreconditionFailed(f"{op} takes {n} argument(s), got {len(refs)}")

    if op == "arrow":
        need(1)
        return fc.category_to_raw(fc.arrow_category(cat(refs[0]))[0])
    if op == "product":
        need(2)
        return fc.category_to_raw(fc.product(cat(refs[0]), cat(refs[1]))[0])
    if op == "exponential":
        need(2)
        return fc.category_to_raw(exponential(cat(refs[0]), cat(refs[1]))[0])
    if op == "comma":
        need(2)
        return _two_sided_out(ts.comma_span(fun(refs[0]), fun(refs[1])))
    if op == "pullback":
        need(2)
        _, p1, _ = fc.pullback(fun(refs[0]), fun(refs[1]))
        return io.instance_to_raw("fibration", p1)
    if op == "span-compose":
        need(2)
        return _two_sided_out(ts.span_compose(inst(refs[0]), inst(refs[1]))[0])
    if op == "free2s":
        need(1)
        return _two_sided_out(ts.free_two_sided(inst(refs[0])))
    if op == "cotensor":
        need(2)
        return _two_sided_out(ts.two_sided_cotensor(cat(refs[0]), inst(refs[1])))
    if op == "sliced-comma":
        need(3)
        _, _, _, proj = sliced_comma(fun(refs[0]), fun(refs[1]), fun(refs[2]))
        return io.instance_to_raw("fibration", proj)
    if op == "sliced-product":
        if not refs:
            raise PreconditionFailed("sliced-product takes at least one functor")
        _, proj, _ = sliced_product([fun(r) for r in refs])
        return io.instance_to_raw("fibration", proj)
    if op == "vert":
        need(1)
        _, proj, _, _ = vertical_arrows(fun(refs[0]))
        return io.instance_to_raw("fibration", proj)
    raise ValueError(op)


CONSTRUCT_OPS = ["comma", "arrow", "product", "pullback", "exponential", "span-compose", "free2s",
                 "cotensor", "sliced-comma", "sliced-product", "vert"]


def _parse_ref(s):
    """Catalog names and paths stay strings; JSON lists are recipes."""
    if s.startswith("[") and s.endswith("]") and s not in ("[1]", "[2]", "[3]"):
        try:
            return json.loads(s)
        except json.JSONDecodeError:
            return s
    return s


def cmd_construct(args):
    data = _construct(args.op, [_parse_ref(a) for a in args.args])
    if args.output:
        io.write_json(args.output, data)
    else:
        print(json.dumps(data, indent=2))
    return OK


def cmd_yoneda(args):
    kind, obj = io.load_instance(args.instance)
    inst = _as_two_sided(kind, obj)
    for C in _categories(kind, obj):
        fc.check_input_size(C)
    if args.at:
        a, b = _parse_at(args.at, inst)
        rep = dependent_yoneda_check(inst, a, b)
    else:
        rep = yoneda_check(inst)
    _emit(rep, args.report == "json")
    return _status(rep)


def _parse_at(s, inst):
    parts = s.split(",")
    if len(parts) != 2:
        raise PreconditionFailed("--at expects 'a,b'")
    return _obj_ref(inst.A, parts[0].strip()), _obj_ref(inst.B, parts[1].strip())


def _obj_ref(C, tok):
    names = [str(o) for o in C.objects]
    if tok in names:
        return names.index(tok)
    if tok.isdigit() and int(tok) < C.n_obj:
        return int(tok)
    raise PreconditionFailed(f"unknown object {tok!r} of {C.name}")


def cmd_suite(args):
    theorems = args.theorems.split(",") if args.theorems else None
    cfg = SuiteConfig(seed=args.seed, samples=args.samples, max_objects=args.max_obj,
                      max_morphisms=args.max_mor, theorems=theorems, report_format=args.report,
                      workers=args.workers)
    rep = run_suite(cfg)
    print(rep.to_json() if args.report == "json" else rep.to_text())
    return OK if rep.ok else NEGATIVE


def cmd_mutants(args):
    from .mutants import run_corpus
    theorems = args.theorems.split(",") if args.theorems else None
    results = run_corpus(samples=args.samples, theorems=theorems, workers=args.workers)
    for r in results:
        print(f"{'killed' if r.killed else 'ALIVE '} {r.mutant.describe():50s} "
              f"{','.join(r.killed_by)}")
    return OK if all(r.killed for r in results) else NEGATIVE


def build_parser():
    p = argparse.ArgumentParser(prog="fibcheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a category, functor or instance file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("check", help="decide a fibration property of an instance")
    c.add_argument("--kind", required=True,
                   choices=["cocart", "cart", "discrete", "sliced-cocart", "cocart-on-left",
                            "two-sided", "two-sided-discrete"])
    c.add_argument("--method", default="all", choices=["elementary", "chevalley", "adjoint", "all"])
    c.add_argument("--report", default="text", choices=["text", "json"])
    c.add_argument("instance")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("construct", help="build a category or instance")
    k.add_argument("--op", required=True, choices=CONSTRUCT_OPS)
    k.add_argument("args", nargs="*", help="catalog names, file paths or JSON recipes")
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_construct)

    y = sub.add_parser("yoneda", help="check the Yoneda equivalence")
    y.add_argument("instance")
    y.add_argument("--at", help="'a,b': run the dependent version at these objects")
    y.add_argument("--report", default="text", choices=["text", "json"])
    y.set_defaults(func=cmd_yoneda)

    s = sub.add_parser("suite", help="run the theorem suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--max-obj", type=int, default=8)
    s.add_argument("--max-mor", type=int, default=40)
    s.add_argument("--theorems", help="comma-separated subset of: " + ",".join(THEOREMS))
    s.add_argument("--report", default="text", choices=["text", "json"])
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_suite)

    m = sub.add_parser("mutants", help="run the table-mutation corpus")
    m.add_argument("--samples", type=int, default=0)
    m.add_argument("--theorems")
    m.add_argument("--workers", type=int, default=1)
    m.set_defaults(func=cmd_mutants)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeCapExceeded as exc:
        print(f"size cap exceeded: {exc}", file=sys.stderr)
        return CAP_EXCEEDED
    except (FibcheckError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
