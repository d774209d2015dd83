"""Backtracking searches: functors, lifts, isomorphisms, natural transformations."""
from __future__ import annotations

import sys
from collections import Counter

from . import fincat as fc
from .errors import SizeCapExceeded
from .fincat import FinCat, Functor, NatTrans

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def search_functors(X: FinCat, E: FinCat, obj_cands, mor_ok=None, injective=False,
                    limit=None, cap=None):
    """Yield functors ``X -> E`` as ``(obj, mor)`` tuples.

    ``obj_cands[x]`` lists the allowed images of object x and
    ``mor_ok(m, v)`` filters images of morphism m.  Composition constraints
    are propagated eagerly, so composites are never branched on.
    """
    n, nm = X.n_obj, X.n_mor
    after = [[] for _ in range(nm)]
    before = [[] for _ in range(nm)]
    for (g, f), c in X.compose.items():
        after[f].append((g, c))
        before[g].append((f, c))
    # morphisms are branched on once both endpoints are placed
    tasks = []
    for x in range(n):
        tasks.append((0, x))
        for m in range(nm):
            s, d = X.src[m], X.dst[m]
            if max(s, d) == x and m != X.identity[x]:
                tasks.append((1, m))
    oimg = [None] * n
    mimg = [None] * nm
    used_o, used_m = set(), set()
    trail = []
    found = 0

    def assign(m, v):
        queue = [(m, v)]
        while queue:
            m, v = queue.pop()
            cur = mimg[m]
            if cur is not None:
                if cur != v:
                    return False
                continue
            if E.src[v] != oimg[X.src[m]] or E.dst[v] != oimg[X.dst[m]]:
                return False
            if mor_ok is not None and not mor_ok(m, v):
                return False
            if injective:
                if v in used_m:
                    return False
                used_m.add(v)
            mimg[m] = v
            trail.append(m)
            for g, c in after[m]:
                w = mimg[g]
                if w is not None:
                    queue.append((c, E.compose[(w, v)]))
            for f, c in before[m]:
                w = mimg[f]
                if w is not None:
                    queue.append((c, E.compose[(v, w)]))
        return True

    def undo(mark):
        while len(trail) > mark:
            m = trail.pop()
            if injective:
                used_m.discard(mimg[m])
            mimg[m] = None

    def rec(i):
        nonlocal found
        if i == len(tasks):
            found += 1
            if cap is not None and found > cap:
                raise SizeCapExceeded(f"more than {cap} functors")
            yield tuple(oimg), tuple(mimg)
            return
        kind, k = tasks[i]
        if kind == 0:
            for e in obj_cands[k]:
                if injective and e in used_o:
                    continue
                oimg[k] = e
                if injective:
                    used_o.add(e)
                mark = len(trail)
                if assign(X.identity[k], E.identity[e]):
                    yield from rec(i + 1)
                undo(mark)
                if injective:
                    used_o.discard(e)
                oimg[k] = None
        else:
            if mimg[k] is not None:
                yield from rec(i + 1)
                return
            for v in E.homset(oimg[X.src[k]], oimg[X.dst[k]]):
                mark = len(trail)
                if assign(k, v):
                    yield from rec(i + 1)
                undo(mark)

    count = 0
    for res in rec(0):
        yield res
        count += 1
        if limit is not None and count >= limit:
            return


def enumerate_functors(X: FinCat, C: FinCat, cap=None) -> list:
    cap = fc.CAPS.max_functor_candidates if cap is None else cap
    if C.n_obj ** X.n_obj > cap:
        raise SizeCapExceeded(f"{C.n_obj}^{X.n_obj} object assignments exceed cap {cap}")
    cands = [list(range(C.n_obj))] * X.n_obj
    return [Functor(X, C, o, m) for o, m in search_functors(X, C, cands, cap=cap)]


def enumerate_lifts(G: Functor, phi: Functor, cap=None, limit=None) -> list:
    """All functors ``s: X -> E`` with ``phi . s = G`` (``G: X -> B``)."""
    cap = fc.CAPS.max_functor_candidates if cap is None else cap
    X = G.src
    cands = [phi.obj_fibers[G.obj[x]] for x in range(X.n_obj)]
    res = search_functors(X, phi.src, cands, mor_ok=lambda m, v: phi.mor[v] == G.mor[m],
                          cap=cap, limit=limit)
    return [Functor(X, phi.src, o, m) for o, m in res]


def _signature(C: FinCat, x):
    return (len(C.out[x]), len(C.inn[x]), len(C.homset(x, x)),
            sum(1 for m in C.homset(x, x) if m in C.inverses))


def find_isomorphism(C: FinCat, D: FinCat):
    """An isomorphism of categories ``C -> D`` or None."""
    if C.n_obj != D.n_obj or C.n_mor != D.n_mor or len(C.compose) != len(D.compose):
        return None
    sc = [_signature(C, x) for x in range(C.n_obj)]
    sd = [_signature(D, y) for y in range(D.n_obj)]
    if Counter(sc) != Counter(sd):
        return None
    cands = [[y for y in range(D.n_obj) if sd[y] == sc[x]] for x in range(C.n_obj)]
    for o, m in search_functors(C, D, cands, injective=True, limit=1):
        return Functor(C, D, o, m, name="iso")
    return None


def isomorphic(C: FinCat, D: FinCat) -> bool:
    return find_isomorphism(C, D) is not None


def search_nat_trans(F: Functor, G: Functor, cands=None, limit=None):
    """Yield natural transformations ``F => G``; ``cands[x]`` restricts components."""
    C, D = F.src, F.dst
    n = C.n_obj
    checks = [[] for _ in range(n)]
    for m in range(C.n_mor):
        s, d = C.src[m], C.dst[m]
        checks[max(s, d)].append((m, s, d))
    if cands is None:
        cands = [D.homset(F.obj[x], G.obj[x]) for x in range(n)]
    comp = [None] * n
    count = 0

    def rec(x):
        nonlocal count
        if x == n:
            count += 1
            yield NatTrans(F, G, comp)
            return
        for a in cands[x]:
            comp[x] = a
            ok = True
            for m, s, d in checks[x]:
                if D.compose[(G.mor[m], comp[s])] != D.compose[(comp[d], F.mor[m])]:
                    ok = False
                    break
            if ok:
                yield from rec(x + 1)
                if limit is not None and count >= limit:
                    return
        comp[x] = None

    yield from rec(0)


def find_nat_iso(F: Functor, G: Functor, vertical_over: Functor | None = None):
    """A natural isomorphism ``F => G`` (optionally with vertical components)."""
    D = F.dst
    cands = []
    for x in range(F.src.n_obj):
        cs = [a for a in D.homset(F.obj[x], G.obj[x]) if a in D.inverses and
              (vertical_over is None or vertical_over.is_vertical(a))]
        cands.append(cs)
    for t in search_nat_trans(F, G, cands, limit=1):
        return t
    return None


def exponential(X: FinCat, C: FinCat, cap=None):
    """Functor category ``C^X``; object labels are ``(obj_map, mor_map)``.

    Returns ``(C^X, functors)`` with ``functors[i]`` the functor of object i.
    """
    funs = enumerate_functors(X, C, cap=cap)
    labels = [(F.obj, F.mor) for F in funs]
    mors = []
    for i, F in enumerate(funs):
        for j, G in enumerate(funs):
            for t in search_nat_trans(F, G):
                mors.append(((i, j, t.comp), i, j))
    fc._check_aux(len(mors), "exponential")
    index = {lab: k for k, (lab, _, _) in enumerate(mors)}
    ident = [index[(i, i, tuple(C.identity[y] for y in F.obj))] for i, F in enumerate(funs)]

    def compfn(k2, k1):
        i, _, a = mors[k1][0]
        _, j, b = mors[k2][0]
        return index[(i, j, tuple(C.compose[(b[x], a[x])] for x in range(X.n_obj)))]

    E = fc.build(f"{C.name}^{X.name}", labels, mors, ident, compfn)
    E.functors = funs
    return E, funs


def evaluation(E: FinCat, X: FinCat, C: FinCat, x: int) -> Functor:
    """Evaluation ``C^X -> C`` at the object x of X."""
    funs = E.functors
    return Functor(E, C, [F.obj[x] for F in funs], [lab[2][x] for lab in E.morphisms],
                   name=f"ev_{x}")


def exponential_functor(X: FinCat, P: Functor, EX: FinCat, BX: FinCat) -> Functor:
    """Post-composition ``E^X -> B^X`` with ``P: E -> B``."""
    fidx = {lab: i for i, lab in enumerate(BX.objects)}
    obj = []
    for F in EX.functors:
        G = F.then(P)
        obj.append(fidx[(G.obj, G.mor)])
    mor = []
    for (i, j, comps) in EX.morphisms:
        mor.append(BX.mor_id[(obj[i], obj[j], tuple(P.mor[a] for a in comps))])
    return Functor(EX, BX, obj, mor, name=f"{P.name}^X")


def precompose_functor(j: Functor, EX: FinCat, EY: FinCat) -> Functor:
    """Restriction ``E^X -> E^Y`` along ``j: Y -> X``."""
    fidx = {lab: i for i, lab in enumerate(EY.objects)}
    obj = []
    for F in EX.functors:
        G = j.then(F)
        obj.append(fidx[(G.obj, G.mor)])
    mor = []
    for (i, k, comps) in EX.morphisms:
        mor.append(EY.mor_id[(obj[i], obj[k], tuple(comps[j.obj[y]] for y in range(j.src.n_obj)))])
    return Functor(EX, EY, obj, mor, name="restrict")
