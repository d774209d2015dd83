"""Construction recipes and seeded sampling.

A recipe is a JSON tree ``[op, arg, ...]``; ``build`` turns it into a
category, functor or instance.  Random instances are always produced by
composing catalog seeds through constructions, never by drawing raw tables,
so every sample is a valid category and replays from its recipe alone.
"""
from __future__ import annotations

import json
import random
from functools import lru_cache

from .. import fincat as fc
from ..errors import FibcheckError, PreconditionFailed, SizeCapExceeded
from ..fibrations import is_cocartesian_fibration
from ..fincat import (Functor, arrow_category, bang, comma, identity_functor, is_isofibration,
                      pick, product, pullback)
from ..search import enumerate_functors, exponential, search_functors
from ..sliced import SlicedMap
from .. import twosided as ts
from . import catalog

SMALL = ["1", "[1]", "[2]", "parallel", "iso", "span", "cospan", "Bidem", "BZ2"]
TINY = ["1", "[1]", "iso", "BZ2", "Bidem"]


# -- building ---------------------------------------------------------------------

def key(recipe) -> str:
    return json.dumps(recipe, separators=(",", ":"))


def build(recipe):
    return _build(key(recipe))


@lru_cache(maxsize=4096)
def _build(k):
    r = json.loads(k)
    return _OPS[r[0]](*r[1:])


def clear_caches():
    """Forget built recipes, e.g. after the catalog has been overridden."""
    for f in (_build, _functor_list, _over_list):
        f.cache_clear()


def _functors(X, C):
    return _functor_list(key(X), key(C))


@lru_cache(maxsize=1024)
def _functor_list(kx, kc):
    return enumerate_functors(_build(kx), _build(kc))


@lru_cache(maxsize=1024)
def _over_list(kx, kp):
    xi, pi = _build(kx), _build(kp)
    if not fc.same_cat(xi.dst, pi.dst):
        return []
    F, E = xi.src, pi.src
    cands = [pi.obj_fibers[xi.obj[x]] for x in range(F.n_obj)]
    res = search_functors(F, E, cands, mor_ok=lambda m, v: pi.mor[v] == xi.mor[m],
                          cap=fc.CAPS.max_functor_candidates)
    return [Functor(F, E, o, m, name="over") for o, m in res]


def _over_functor_list(kx, kp, kj):
    """Functors ``src(x) -> src(p)`` over ``j: dst(x) -> dst(p)``."""
    xi, pi, j = _build(kx), _build(kp), _build(kj)
    F, E = xi.src, pi.src
    cands = [pi.obj_fibers[j.obj[xi.obj[x]]] for x in range(F.n_obj)]
    res = search_functors(F, E, cands, mor_ok=lambda m, v: pi.mor[v] == j.mor[xi.mor[m]],
                          cap=fc.CAPS.max_functor_candidates)
    return [Functor(F, E, o, m, name="over") for o, m in res]


def _nth(lst, i, what):
    if not lst:
        raise PreconditionFailed(f"no {what}")
    return lst[i % len(lst)]


def _cat_of(r):
    v = build(r)
    if isinstance(v, fc.FinCat):
        return v
    raise PreconditionFailed("not a category recipe")


_OPS = {
    # categories
    "cat": lambda n: catalog.get(n),
    "op": lambda c: _cat_of(c).op,
    "product": lambda c, d: product(_cat_of(c), _cat_of(d))[0],
    "arrow": lambda c: arrow_category(_cat_of(c))[0],
    "exp": lambda x, c: exponential(_cat_of(x), _cat_of(c))[0],
    "src": lambda f: build(f).src,
    "dst": lambda f: build(f).dst,
    "total": lambda i: build(i).total,
    "A": lambda i: build(i).A,
    "B": lambda i: build(i).B,
    # functors
    "id": lambda c: identity_functor(_cat_of(c)),
    "bang": lambda c: bang(_cat_of(c)),
    "pick": lambda c, x: pick(_cat_of(c), x % _cat_of(c).n_obj),
    "cod": lambda c: arrow_category(_cat_of(c))[2],
    "dom": lambda c: arrow_category(_cat_of(c))[1],
    "proj1": lambda c, d: product(_cat_of(c), _cat_of(d))[1],
    "proj2": lambda c, d: product(_cat_of(c), _cat_of(d))[2],
    "functor": lambda x, c, i: _nth(_functors(x, c), i, "functor"),
    "fop": lambda f: build(f).op,
    "pb": lambda f, g: pullback(build(f), build(g))[2],
    "pb-top": lambda f, g: pullback(build(f), build(g))[1],
    "then": lambda f, g: build(f).then(build(g)),
    "comma-cod": lambda f, g: comma(build(f), build(g))[2],
    "comma-dom": lambda f, g: comma(build(f), build(g))[1],
    "over": lambda x, p, i: _nth(_over_list(key(x), key(p)), i, "functor over the base"),
    "over-j": lambda x, p, j, i: _nth(_over_functor_list(key(x), key(p), key(j)), i,
                                      "functor over j"),
    # two-sided instances
    "hom": lambda c: ts.hom_span(_cat_of(c)),
    "id2": lambda a, b: ts.identity_instance(_cat_of(a), _cat_of(b)),
    "span": lambda x, p: ts.make_instance(build(x), build(p)),
    "comma-span": lambda f, g: ts.comma_span(build(f), build(g)),
    "free2s": lambda i: ts.free_two_sided(build(i)),
    "compose2": lambda p, q: ts.span_compose(build(p), build(q))[0],
    "pb2": lambda i, k, m: ts.pullback_two_sided(build(i), build(k), build(m))[0],
    "whisker": lambda i, k, m: ts.whisker_two_sided(build(i), build(k), build(m)),
    "prod2": lambda *xs: ts.two_sided_product([build(x) for x in xs])[0],
    "sprod2": lambda *xs: ts.two_sided_sliced_product([build(x) for x in xs])[0],
    "cotensor": lambda x, i: ts.two_sided_cotensor(_cat_of(x), build(i)),
    "swap": lambda i: ts.make_instance(build(i).pi, build(i).xi),
    "dual2": lambda i: build(i).dual,
    "noncomm": lambda: ts.noncomm_instance(),
    # sliced maps
    "sliced": lambda phi, xi, pi: SlicedMap(build(phi), build(xi), build(pi)),
}


# -- sampling ----------------------------------------------------------------------

def _cat(rng, pool=SMALL, depth=1):
    r = rng.random()
    if depth > 0 and r < 0.12:
        return ["op", _cat(rng, pool, depth - 1)]
    if depth > 0 and r < 0.2:
        return ["product", ["cat", rng.choice(["[1]", "iso", "BZ2"])], ["cat", rng.choice(["1", "[1]", "iso"])]]
    if depth > 0 and r < 0.25:
        return ["arrow", ["cat", rng.choice(["[1]", "iso"])]]
    return ["cat", rng.choice(pool)]


def _functor_into(rng, B, src_pool=SMALL):
    return ["functor", _cat(rng, src_pool, 0), B, rng.randrange(1 << 16)]


def fibration_recipe(rng, depth=2):
    t = rng.randrange(9 if depth > 0 else 6)
    if t == 0:
        return ["cod", _cat(rng, ["[1]", "[2]", "parallel", "iso", "span", "cospan", "Bidem", "BZ2"])]
    if t == 1:
        return ["dom", _cat(rng, ["[1]", "[2]", "parallel", "iso", "span", "cospan", "Bidem", "BZ2"])]
    if t == 2:
        return [rng.choice(["proj1", "proj2"]), _cat(rng, TINY, 0), _cat(rng, TINY, 0)]
    if t in (3, 4):
        return ["functor", _cat(rng), _cat(rng, SMALL, 0), rng.randrange(1 << 16)]
    if t == 5:
        f = _functor_into(rng, ["cat", rng.choice(TINY)])
        g = _functor_into(rng, f[2])
        return [rng.choice(["comma-cod", "comma-dom"]), f, g]
    if t == 6:
        inner = fibration_recipe(rng, depth - 1)
        return ["pb", inner, _functor_into(rng, ["dst", inner])]
    if t == 7:
        return ["fop", fibration_recipe(rng, depth - 1)]
    inner = fibration_recipe(rng, depth - 1)
    post = rng.choice([["bang", ["dst", inner]],
                       ["functor", ["dst", inner], _cat(rng, TINY, 0), rng.randrange(1 << 16)]])
    return ["then", inner, post]


def sliced_recipe(rng):
    pi = fibration_recipe(rng, 1)
    B = ["dst", pi]
    t = rng.randrange(4)
    if t == 0:
        # pulling back pi along a functor into B gives a map over B
        g = _functor_into(rng, B)
        top = ["pb-top", pi, g]
        return ["sliced", top, ["then", top, pi], pi]
    if t == 1:
        xi = ["functor", _cat(rng), B, rng.randrange(1 << 16)]
        return ["sliced", ["over", xi, pi, rng.randrange(1 << 16)], xi, pi]
    if t == 2:
        return ["sliced", ["id", ["src", pi]], pi, pi]
    inner = ["cod", ["src", pi]]
    xi = ["then", inner, pi]
    return ["sliced", inner, xi, pi]


def _leaf_instance(rng):
    t = rng.randrange(8)
    if t == 0:
        return ["hom", _cat(rng)]
    if t == 1:
        return ["id2", _cat(rng, TINY, 0), _cat(rng, TINY, 0)]
    if t == 2:
        X = ["cat", rng.choice(TINY)]
        return ["comma-span", _functor_into(rng, X), _functor_into(rng, X)]
    if t == 3:
        E = _cat(rng)
        return ["span", ["functor", E, _cat(rng, TINY, 0), rng.randrange(1 << 16)],
                ["functor", E, _cat(rng, TINY, 0), rng.randrange(1 << 16)]]
    if t == 4:
        return ["noncomm"]
    if t == 5:
        return ["swap", ["hom", _cat(rng)]]
    if t == 6:
        E = _cat(rng, ["1", "[1]", "iso", "span"], 0)
        return ["free2s", ["span", ["functor", E, _cat(rng, ["1", "[1]", "iso"], 0), rng.randrange(1 << 16)],
                           ["functor", E, _cat(rng, ["1", "[1]", "iso"], 0), rng.randrange(1 << 16)]]]
    return ["dual2", ["hom", _cat(rng)]]


def two_sided_recipe(rng, depth=1):
    if depth <= 0 or rng.random() < 0.5:
        return _leaf_instance(rng)
    inner = two_sided_recipe(rng, depth - 1)
    t = rng.randrange(6)
    if t == 0:
        return ["pb2", inner, _functor_into(rng, ["A", inner], TINY), _functor_into(rng, ["B", inner], TINY)]
    if t == 1:
        A, B = ["A", inner], ["B", inner]
        k = rng.choice([["id", A], ["bang", A]])
        m = rng.choice([["id", B], ["bang", B]])
        return ["whisker", inner, k, m]
    if t == 2:
        C = _cat(rng, ["1", "[1]", "iso"], 0)
        return ["compose2", ["hom", C], ["id2", C, _cat(rng, TINY, 0)]]
    if t == 3:
        return ["prod2", inner, ["id2", ["cat", "1"], ["cat", rng.choice(["1", "[1]"])]]]
    if t == 4:
        return ["sprod2", inner, inner]
    return ["cotensor", ["cat", "1"], inner]


def fibered_pair_recipe(rng):
    """``(phi, psi, pE, pF)`` over a common base."""
    B = ["cat", rng.choice(["1", "[1]", "iso", "[2]"])]
    pE = ["functor", _cat(rng, TINY + ["[2]"], 0), B, rng.randrange(1 << 16)]
    pF = ["functor", _cat(rng, TINY + ["[2]"], 0), B, rng.randrange(1 << 16)]
    return [["over", pE, pF, rng.randrange(1 << 16)], ["over", pF, pE, rng.randrange(1 << 16)], pE, pF]


def square_recipe(rng):
    """``(phi, j, xi, pi)`` between cocartesian fibrations."""
    pi = fibration_recipe(rng, 1)
    j = _functor_into(rng, ["dst", pi], TINY + ["[2]"])
    if rng.random() < 0.5:
        return [["pb-top", pi, j], j, ["pb", pi, j], pi]
    xi = fibration_recipe(rng, 0)
    jj = ["functor", ["dst", xi], ["dst", pi], rng.randrange(1 << 16)]
    return [["over-j", xi, pi, jj, rng.randrange(1 << 16)], jj, xi, pi]


KINDS = {
    "fibration": fibration_recipe,
    "sliced": sliced_recipe,
    "two-sided": two_sided_recipe,
    "fibered-pair": fibered_pair_recipe,
    "square": square_recipe,
}


def _categories_of(obj):
    if isinstance(obj, fc.FinCat):
        return [obj]
    if isinstance(obj, Functor):
        return [obj.src, obj.dst]
    if isinstance(obj, SlicedMap):
        return [obj.phi.src, obj.phi.dst, obj.base]
    if isinstance(obj, ts.TwoSidedInstance):
        return [obj.total, obj.A, obj.B]
    if isinstance(obj, (list, tuple)):
        return [c for x in obj for c in _categories_of(x)]
    return []


def build_sample(kind, recipe):
    if kind in ("fibered-pair", "square"):
        return tuple(build(r) for r in recipe)
    return build(recipe)


def admissible(kind, obj) -> bool:
    """Caps on every category, and the isofibration side condition on the
    projections under test."""
    for C in _categories_of(obj):
        fc.check_input_size(C)
    if kind == "fibration":
        return is_isofibration(obj)
    if kind == "sliced":
        return all(is_isofibration(f) for f in (obj.phi, obj.xi, obj.pi))
    if kind == "two-sided":
        return is_isofibration(obj.phi)
    if kind == "fibered-pair":
        phi, psi, pE, pF = obj
        return (fc.commutes_over(phi, pE, pF) and fc.commutes_over(psi, pF, pE)
                and is_isofibration(pE) and is_isofibration(pF))
    if kind == "square":
        phi, j, xi, pi = obj
        return (is_isofibration(xi) and is_isofibration(pi)
                and is_cocartesian_fibration(xi) and is_cocartesian_fibration(pi))
    return True


def sample_instance(rng: random.Random, kind: str, max_tries=200):
    """``(recipe, object)`` for a random admissible instance of ``kind``."""
    gen = KINDS[kind]
    last = None
    for _ in range(max_tries):
        recipe = gen(rng)
        try:
            obj = build_sample(kind, recipe)
            if admissible(kind, obj):
                return recipe, obj
        except SizeCapExceeded as exc:
            last = exc
        except (FibcheckError, KeyError, IndexError, AssertionError):
            continue
    if last is not None:
        raise last
    raise PreconditionFailed(f"no admissible {kind} instance after {max_tries} draws")


def samples(seed: int, kind: str, n: int):
    """``n`` deterministic samples of one kind; each draw has its own stream."""
    out = []
    for i in range(n):
        rng = random.Random(f"{seed}:{kind}:{i}")
        out.append(sample_instance(rng, kind))
    return out
