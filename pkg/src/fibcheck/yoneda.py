"""Two-sided cartesian sections and the two-sided Yoneda equivalence.

With a initial in A and b terminal in B, evaluation at ``(a, b)`` from
two-sided cartesian sections to the bifiber has the quasi-inverse ``yon``:
transport d cartesianly along ``y -> b`` and then cocartesianly along
``a -> x``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingLift, NoInitial, NoTerminal, PreconditionFailed
from .fibrations import cart_fill, cartesian_arrows, cocart_fill, cocartesian_arrows
from .fincat import Functor, NatTrans, comma, extremal_objects, identity_functor, pair_mor, pair_obj, pick
from .report import CheckReport
from .search import enumerate_lifts, search_nat_trans
from .twosided import (TwoSidedInstance, bifiber_objects, is_two_sided, left_lift,
                       pullback_two_sided, right_lift)


@dataclass
class Section:
    instance: TwoSidedInstance
    functor: Functor

    def __post_init__(self):
        self.functor.validate()
        if not self.functor.then(self.instance.phi).same_as(identity_functor(self.instance.base)):
            raise PreconditionFailed("not a section of phi")

    def at(self, a, b):
        return self.functor.obj[pair_obj(self.instance.base, a, b)]

    def on(self, u, v):
        return self.functor.mor[pair_mor(self.instance.base, u, v)]


def enumerate_sections(inst: TwoSidedInstance, cap=None):
    return [Section(inst, s) for s in enumerate_lifts(identity_functor(inst.base), inst.phi, cap=cap)]


def is_ts_cartesian_section(inst: TwoSidedInstance, s: Section) -> bool:
    A, B = inst.A, inst.B
    xc, pc = cocartesian_arrows(inst.xi), cartesian_arrows(inst.pi)
    for b in range(B.n_obj):
        for u in range(A.n_mor):
            if s.on(u, B.identity[b]) not in xc:
                return False
    for a in range(A.n_obj):
        for v in range(B.n_mor):
            if s.on(A.identity[a], v) not in pc:
                return False
    return True


def extremal_pair(inst: TwoSidedInstance):
    """All initial objects of A and terminal objects of B."""
    inits, _ = extremal_objects(inst.A)
    _, terms = extremal_objects(inst.B)
    if not inits:
        raise NoInitial(f"{inst.A.name} has no initial object")
    if not terms:
        raise NoTerminal(f"{inst.B.name} has no terminal object")
    return inits, terms


def _check_extremal(inst, a, b):
    inits, terms = extremal_pair(inst)
    if a not in inits:
        raise NoInitial(f"object {a} is not initial")
    if b not in terms:
        raise NoTerminal(f"object {b} is not terminal")


def _lift(x, what):
    if x is None:
        raise MissingLift(what)
    return x


def yon(inst: TwoSidedInstance, a: int, b: int, d: int) -> Section:
    """The section ``(x, y) |-> (a -> x)_! (y -> b)^* d``."""
    _check_extremal(inst, a, b)
    if d not in bifiber_objects(inst, a, b):
        raise PreconditionFailed(f"{d} is not in the bifiber over ({a}, {b})")
    A, B, E = inst.A, inst.B, inst.total
    P = inst.base
    to_b = [B.homset(y, b)[0] for y in range(B.n_obj)]
    from_a = [A.homset(a, x)[0] for x in range(A.n_obj)]
    r = [_lift(right_lift(inst, to_b[y], d), "cartesian transport") for y in range(B.n_obj)]
    c = {}
    for x in range(A.n_obj):
        for y in range(B.n_obj):
            c[(x, y)] = _lift(left_lift(inst, from_a[x], E.src[r[y]]), "cocartesian transport")
    obj = [None] * P.n_obj
    for (x, y), k in c.items():
        obj[pair_obj(P, x, y)] = E.dst[k]
    mor = [None] * P.n_mor
    for u in range(A.n_mor):
        for v in range(B.n_mor):
            x, x2, y, y2 = A.src[u], A.dst[u], B.src[v], B.dst[v]
            w = cart_fill(inst.pi, r[y2], r[y], v)
            t = cocart_fill(inst.xi, c[(x, y)], E.compose[(c[(x2, y2)], w)], u)
            mor[pair_mor(P, u, v)] = _lift(t, "transport filler")
    return Section(inst, Functor(P, E, obj, mor, name=f"yon({d})"))


def ev(inst: TwoSidedInstance, s: Section, a: int, b: int) -> int:
    return s.at(a, b)


def _comparison(inst, s: Section, a, b):
    """Vertical arrows ``s(x, y) -> yon(s(a, b))(x, y)`` built from fillers."""
    A, B, E = inst.A, inst.B, inst.total
    P = inst.base
    d = s.at(a, b)
    y_sec = yon(inst, a, b, d)
    comps = [None] * P.n_obj
    for y in range(B.n_obj):
        v = B.homset(y, b)[0]
        r = right_lift(inst, v, d)
        w = cart_fill(inst.pi, r, s.on(A.identity[a], v), B.identity[y])
        for x in range(A.n_obj):
            u = A.homset(a, x)[0]
            c = y_sec.functor.mor[pair_mor(P, u, B.identity[y])]
            sc = s.on(u, B.identity[y])
            k = None if w is None else cocart_fill(inst.xi, sc, E.compose[(c, w)], A.identity[x])
            comps[pair_obj(P, x, y)] = k
    return y_sec, comps


def coherence_ok(inst, s: Section, a, b) -> bool:
    """``(y -> b)^* s(a, b) ~ s(a, y)`` and ``(a -> x)_! s(a, b) ~ s(x, b)``."""
    A, B, E = inst.A, inst.B, inst.total
    d = s.at(a, b)
    for y in range(B.n_obj):
        v = B.homset(y, b)[0]
        r = right_lift(inst, v, d)
        w = cart_fill(inst.pi, r, s.on(A.identity[a], v), B.identity[y])
        if w is None or not E.is_iso(w):
            return False
    for x in range(A.n_obj):
        u = A.homset(a, x)[0]
        k = left_lift(inst, u, d)
        t = cocart_fill(inst.xi, k, s.on(u, B.identity[b]), A.identity[x])
        if t is None or not E.is_iso(t):
            return False
    return True


def _vertical_nat(inst, s: Section, t: Section, limit=None):
    E = inst.total
    cands = [[m for m in E.homset(s.functor.obj[p], t.functor.obj[p]) if inst.phi.is_vertical(m)]
             for p in range(inst.base.n_obj)]
    return search_nat_trans(s.functor, t.functor, cands, limit=limit)


def _sections_equivalence(inst, sections, a, b):
    """Evaluation from cartesian sections with vertical transformations to the
    bifiber is fully faithful and essentially surjective."""
    E, phi = inst.total, inst.phi
    fib = bifiber_objects(inst, a, b)
    p = pair_obj(inst.base, a, b)
    for s in sections:
        for t in sections:
            images = [n.comp[p] for n in _vertical_nat(inst, s, t)]
            target = {m for m in E.homset(s.at(a, b), t.at(a, b)) if phi.is_vertical(m)}
            if len(images) != len(set(images)) or set(images) != target:
                return False
    hit = {s.at(a, b) for s in sections}
    for d in fib:
        if not any(m in E.inverses and phi.is_vertical(m) for h in hit for m in E.homset(d, h)):
            return False
    return True


def _iso_classes(inst, objs):
    E, phi = inst.total, inst.phi
    classes = []
    for d in objs:
        for cl in classes:
            if any(m in E.inverses and phi.is_vertical(m) for m in E.homset(d, cl[0])):
                cl.append(d)
                break
        else:
            classes.append([d])
    return classes


def yoneda_check(inst: TwoSidedInstance, at=None, sections=None) -> CheckReport:
    """Evaluate the Yoneda equivalence at every (initial, terminal) pair, or
    only at ``at``."""
    if not is_two_sided(inst):
        raise PreconditionFailed("instance is not two-sided")
    if at is None:
        inits, terms = extremal_pair(inst)
        pairs = [(a, b) for a in inits for b in terms]
    else:
        _check_extremal(inst, *at)
        pairs = [tuple(at)]
    if sections is None:
        sections = enumerate_sections(inst)
    cart = [s for s in sections if is_ts_cartesian_section(inst, s)]
    rep = CheckReport("yoneda")
    v = dict.fromkeys(["yon-cartesian", "ev-yon", "yon-ev", "coherence", "equivalence"], True)
    for a, b in pairs:
        fib = bifiber_objects(inst, a, b)
        for d in fib:
            s = yon(inst, a, b, d)
            if not is_ts_cartesian_section(inst, s):
                v["yon-cartesian"] = False
                rep.witnesses.setdefault("yon-not-cartesian", (a, b, d))
            if ev(inst, s, a, b) != d:
                v["ev-yon"] = False
                rep.witnesses.setdefault("ev-yon", (a, b, d))
        for s in cart:
            y_sec, comps = _comparison(inst, s, a, b)
            t = None if None in comps else NatTrans(s.functor, y_sec.functor, comps)
            if t is None or not (t.is_natural() and t.is_iso()
                                 and all(inst.phi.is_vertical(m) for m in comps)):
                v["yon-ev"] = False
                rep.witnesses.setdefault("yon-ev", (a, b, s.functor.obj))
            if not coherence_ok(inst, s, a, b):
                v["coherence"] = False
                rep.witnesses.setdefault("coherence", (a, b, s.functor.obj))
        if not _sections_equivalence(inst, cart, a, b):
            v["equivalence"] = False
        n_cls = len(_iso_classes(inst, fib))
        s_cls = len(_iso_classes(inst, sorted({s.at(a, b) for s in cart})))
        rep.notes.append(f"({a},{b}): bifiber objects={len(fib)} iso classes={n_cls} "
                         f"cartesian sections={len(cart)} classes hit={s_cls}")
    rep.verdicts.update(v)
    return rep


def dependent_yoneda_check(inst: TwoSidedInstance, a: int, b: int) -> CheckReport:
    """Yoneda check on the pullback along ``a/A -> A`` and ``B/b -> B``."""
    A, B = inst.A, inst.B
    KA, _, dA, _ = comma(pick(A, a), identity_functor(A))
    KB, dB, _, _ = comma(identity_functor(B), pick(B, b))
    pb, _ = pullback_two_sided(inst, dA, dB)
    a0 = KA.obj_index[(0, a, A.identity[a])]
    b0 = KB.obj_index[(b, 0, B.identity[b])]
    rep = yoneda_check(pb, at=(a0, b0))
    rep.name = f"dependent-yoneda({a},{b})"
    return rep
