"""Finite categories, functors and natural transformations.

Objects and morphisms are dense integer ids.  Labels are kept alongside for
display and serialization; constructions use tuples of component ids as
labels so that lookups by structure are cheap.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BaseMismatch,
    BoundaryMismatch,
    DanglingId,
    MissingComposite,
    NonAssociative,
    NotAFunctor,
    SizeCapExceeded,
    UnitLawViolation,
    UnknownObject,
)


@dataclass
class Caps:
    max_objects: int = 8
    max_morphisms: int = 40
    max_functor_candidates: int = 20000
    # auxiliary categories (arrow categories, commas of totals, ...) are
    # allowed to be larger than inputs
    max_aux_morphisms: int = 20000


CAPS = Caps()


@contextlib.contextmanager
def caps(**kw):
    global CAPS
    old = CAPS
    CAPS = Caps(**{**old.__dict__, **kw})
    try:
        yield CAPS
    finally:
        CAPS = old


def check_input_size(C: "FinCat"):
    if C.n_obj > CAPS.max_objects or C.n_mor > CAPS.max_morphisms:
        raise SizeCapExceeded(
            f"category {C.name!r} has {C.n_obj} objects and {C.n_mor} morphisms "
            f"(caps {CAPS.max_objects}/{CAPS.max_morphisms})")


def _check_aux(n_mor: int, what: str):
    if n_mor > CAPS.max_aux_morphisms:
        raise SizeCapExceeded(f"{what}: {n_mor} morphisms exceeds cap {CAPS.max_aux_morphisms}")


class FinCat:
    """A finite category given by explicit tables.

    ``compose[(g, f)]`` is ``g . f`` and is defined for every pair with
    ``dst[f] == src[g]``.
    """

    def __init__(self, objects, morphisms, src, dst, identity, compose, name=""):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.identity = tuple(identity)
        self.compose = compose

    def __repr__(self):
        return f"FinCat({self.name!r}, {self.n_obj} obj, {self.n_mor} mor)"

    @property
    def n_obj(self):
        return len(self.objects)

    @property
    def n_mor(self):
        return len(self.morphisms)

    def comp(self, g, f):
        return self.compose[(g, f)]

    @cached_property
    def out(self):
        res = [[] for _ in self.objects]
        for m, s in enumerate(self.src):
            res[s].append(m)
        return tuple(tuple(r) for r in res)

    @cached_property
    def inn(self):
        res = [[] for _ in self.objects]
        for m, d in enumerate(self.dst):
            res[d].append(m)
        return tuple(tuple(r) for r in res)

    @cached_property
    def hom(self):
        res = {}
        for m in range(self.n_mor):
            res.setdefault((self.src[m], self.dst[m]), []).append(m)
        return {k: tuple(v) for k, v in res.items()}

    def homset(self, x, y):
        return self.hom.get((x, y), ())

    @cached_property
    def obj_id(self):
        return {lab: i for i, lab in enumerate(self.objects)}

    @cached_property
    def mor_id(self):
        return {lab: i for i, lab in enumerate(self.morphisms)}

    @cached_property
    def identity_set(self):
        return frozenset(self.identity)

    def is_identity(self, m):
        return m in self.identity_set

    @cached_property
    def inverses(self):
        """Map from each isomorphism to its inverse."""
        inv = {}
        for m in range(self.n_mor):
            s, d = self.src[m], self.dst[m]
            for g in self.homset(d, s):
                if self.compose.get((g, m)) == self.identity[s] and \
                        self.compose.get((m, g)) == self.identity[d]:
                    inv[m] = g
                    break
        return inv

    def is_iso(self, m):
        return m in self.inverses

    def is_groupoid(self):
        return len(self.inverses) == self.n_mor

    @cached_property
    def op(self) -> "FinCat":
        comp = {(f, g): h for (g, f), h in self.compose.items()}
        D = FinCat(self.objects, self.morphisms, self.dst, self.src, self.identity,
                   comp, name=f"{self.name}^op")
        D.__dict__["op"] = self
        return D

    def table_key(self):
        return (self.n_obj, self.src, self.dst, self.identity,
                tuple(sorted(self.compose.items())))

    def same_tables(self, other: "FinCat"):
        return self.table_key() == other.table_key()

    # -- laws -------------------------------------------------------------
    def law_violations(self, limit=None):
        """List of human-readable violations of the category axioms."""
        bad = []
        n, m = self.n_obj, self.n_mor
        for x in range(n):
            i = self.identity[x] if x < len(self.identity) else None
            if i is None or not (0 <= i < m) or self.src[i] != x or self.dst[i] != x:
                bad.append(("identity", x))
        for f in range(m):
            if not (0 <= self.src[f] < n and 0 <= self.dst[f] < n):
                bad.append(("dangling", f))
        if bad:
            return bad
        for (g, f), h in self.compose.items():
            if not (0 <= g < m and 0 <= f < m and 0 <= h < m) or self.dst[f] != self.src[g]:
                bad.append(("composite-domain", g, f, h))
            elif self.src[h] != self.src[f] or self.dst[h] != self.dst[g]:
                bad.append(("composite-type", g, f, h))
        for f in range(m):
            for g in self.out[self.dst[f]]:
                if (g, f) not in self.compose:
                    bad.append(("missing", g, f))
        if bad:
            return bad
        for f in range(m):
            if self.compose[(self.identity[self.dst[f]], f)] != f or \
                    self.compose[(f, self.identity[self.src[f]])] != f:
                bad.append(("unit", f))
        for f in range(m):
            for g in self.out[self.dst[f]]:
                gf = self.compose[(g, f)]
                for h in self.out[self.dst[g]]:
                    if self.compose[(h, gf)] != self.compose[(self.compose[(h, g)], f)]:
                        bad.append(("assoc", h, g, f))
                        if limit and len(bad) >= limit:
                            return bad
        return bad

    def validate(self):
        bad = self.law_violations(limit=1)
        if not bad:
            return self
        kind = bad[0][0]
        msg = f"{self.name}: {bad[0]}"
        if kind in ("identity", "dangling", "composite-domain", "composite-type"):
            raise DanglingId(msg)
        if kind == "missing":
            raise MissingComposite(msg)
        if kind == "unit":
            raise UnitLawViolation(msg)
        raise NonAssociative(msg)


def build(name, obj_labels, mors, identity, compfn, check_size=True) -> FinCat:
    """Assemble a FinCat from morphism specs ``(label, src, dst)``.

    ``compfn(g, f)`` returns the id of ``g . f``; it is called once per
    composable pair.
    """
    n_mor = len(mors)
    if check_size:
        _check_aux(n_mor, name)
    src = [s for _, s, _ in mors]
    dst = [d for _, _, d in mors]
    out = [[] for _ in obj_labels]
    for m, s in enumerate(src):
        out[s].append(m)
    comp = {}
    for f in range(n_mor):
        for g in out[dst[f]]:
            comp[(g, f)] = compfn(g, f)
    return FinCat(obj_labels, [lab for lab, _, _ in mors], src, dst, identity, comp, name=name)


# -- functors ---------------------------------------------------------------

class Functor:
    def __init__(self, src: FinCat, dst: FinCat, obj, mor, name=""):
        self.src = src
        self.dst = dst
        self.obj = tuple(obj)
        self.mor = tuple(mor)
        self.name = name

    def __repr__(self):
        return f"Functor({self.name or '?'}: {self.src.name} -> {self.dst.name})"

    @cached_property
    def op(self) -> "Functor":
        F = Functor(self.src.op, self.dst.op, self.obj, self.mor, name=f"{self.name}^op")
        F.__dict__["op"] = self
        return F

    def then(self, G: "Functor") -> "Functor":
        """The composite ``G . self``."""
        if G.src is not self.dst and not G.src.same_tables(self.dst):
            raise BoundaryMismatch(f"cannot compose {self} with {G}")
        return Functor(self.src, G.dst, [G.obj[x] for x in self.obj],
                       [G.mor[m] for m in self.mor], name=f"{G.name}.{self.name}")

    def violations(self):
        C, D = self.src, self.dst
        bad = []
        if len(self.obj) != C.n_obj or len(self.mor) != C.n_mor:
            return [("arity",)]
        for m in range(C.n_mor):
            fm = self.mor[m]
            if D.src[fm] != self.obj[C.src[m]] or D.dst[fm] != self.obj[C.dst[m]]:
                bad.append(("endpoints", m))
        if bad:
            return bad
        for x in range(C.n_obj):
            if self.mor[C.identity[x]] != D.identity[self.obj[x]]:
                bad.append(("identity", x))
        for (g, f), h in C.compose.items():
            if D.compose[(self.mor[g], self.mor[f])] != self.mor[h]:
                bad.append(("compose", g, f))
        return bad

    def is_functor(self):
        return not self.violations()

    def validate(self):
        bad = self.violations()
        if bad:
            raise NotAFunctor(f"{self.name}: {bad[0]}")
        return self

    def same_as(self, other: "Functor"):
        return self.obj == other.obj and self.mor == other.mor

    @cached_property
    def obj_fibers(self):
        res = [[] for _ in range(self.dst.n_obj)]
        for x, y in enumerate(self.obj):
            res[y].append(x)
        return tuple(tuple(r) for r in res)

    def is_vertical(self, m):
        return self.dst.is_identity(self.mor[m])


def identity_functor(C: FinCat) -> Functor:
    return Functor(C, C, range(C.n_obj), range(C.n_mor), name=f"id_{C.name}")


def _terminal() -> FinCat:
    return FinCat(["*"], ["id_*"], [0], [0], [0], {(0, 0): 0}, name="1")


ONE = _terminal()
EMPTY = FinCat([], [], [], [], [], {}, name="0")


def bang(C: FinCat) -> Functor:
    return Functor(C, ONE, [0] * C.n_obj, [0] * C.n_mor, name=f"!_{C.name}")


def pick(C: FinCat, x: int) -> Functor:
    if not 0 <= x < C.n_obj:
        raise UnknownObject(x)
    return Functor(ONE, C, [x], [C.identity[x]], name=f"pick_{C.objects[x]}")


def constant(C: FinCat, D: FinCat, d: int) -> Functor:
    return Functor(C, D, [d] * C.n_obj, [D.identity[d]] * C.n_mor, name=f"const_{d}")


# -- natural transformations -------------------------------------------------

class NatTrans:
    def __init__(self, src: Functor, dst: Functor, comp):
        self.src = src
        self.dst = dst
        self.comp = tuple(comp)

    def __repr__(self):
        return f"NatTrans({self.src.name} => {self.dst.name})"

    def __getitem__(self, x):
        return self.comp[x]

    def violations(self):
        F, G = self.src, self.dst
        C, D = F.src, F.dst
        bad = []
        for x in range(C.n_obj):
            a = self.comp[x]
            if D.src[a] != F.obj[x] or D.dst[a] != G.obj[x]:
                bad.append(("component", x))
        if bad:
            return bad
        for m in range(C.n_mor):
            x, y = C.src[m], C.dst[m]
            if D.compose[(G.mor[m], self.comp[x])] != D.compose[(self.comp[y], F.mor[m])]:
                bad.append(("naturality", m))
        return bad

    def is_natural(self):
        return not self.violations()

    def is_iso(self):
        D = self.src.dst
        return all(D.is_iso(a) for a in self.comp)


def _check_parallel(F: Functor, G: Functor):
    if F.src is not G.src and not F.src.same_tables(G.src):
        raise BoundaryMismatch("functors have different domains")
    if F.dst is not G.dst and not F.dst.same_tables(G.dst):
        raise BoundaryMismatch("functors have different codomains")


def nat_identity(F: Functor) -> NatTrans:
    return NatTrans(F, F, [F.dst.identity[y] for y in F.obj])


def nat_vcompose(b: NatTrans, a: NatTrans) -> NatTrans:
    """Vertical composite ``b . a``."""
    if not a.dst.same_as(b.src):
        raise BoundaryMismatch("vertical composition boundary mismatch")
    D = a.src.dst
    return NatTrans(a.src, b.dst, [D.compose[(b.comp[x], a.comp[x])]
                                   for x in range(a.src.src.n_obj)])


def whisker_left(F: Functor, a: NatTrans) -> NatTrans:
    """``a F`` for ``F: X -> C`` and ``a: G => H`` between functors out of C."""
    if F.dst is not a.src.src and not F.dst.same_tables(a.src.src):
        raise BoundaryMismatch("whisker_left boundary mismatch")
    return NatTrans(F.then(a.src), F.then(a.dst), [a.comp[F.obj[x]] for x in range(F.src.n_obj)])


def whisker_right(a: NatTrans, F: Functor) -> NatTrans:
    """``F a`` for ``a: G => H`` between functors into the domain of F."""
    if a.src.dst is not F.src and not a.src.dst.same_tables(F.src):
        raise BoundaryMismatch("whisker_right boundary mismatch")
    return NatTrans(a.src.then(F), a.dst.then(F), [F.mor[c] for c in a.comp])


# -- spans ---------------------------------------------------------------------

@dataclass
class Span:
    apex: FinCat
    left: Functor
    right: Functor

    def __post_init__(self):
        if self.left.src is not self.apex or self.right.src is not self.apex:
            raise BoundaryMismatch("span legs must start at the apex")


# -- basic constructions ------------------------------------------------------

def opposite(C: FinCat) -> FinCat:
    return C.op


def product(C: FinCat, D: FinCat):
    """Binary product with projections.

    Object ``(c, d)`` has id ``c * |D| + d``; morphism ``(f, g)`` has id
    ``f * |mor D| + g``.
    """
    nd, md = D.n_obj, D.n_mor
    objs = [(c, d) for c in range(C.n_obj) for d in range(nd)]
    mors = [((f, g), C.src[f] * nd + D.src[g], C.dst[f] * nd + D.dst[g])
            for f in range(C.n_mor) for g in range(md)]
    ident = [C.identity[c] * md + D.identity[d] for c in range(C.n_obj) for d in range(nd)]

    def compfn(h, k):
        return C.compose[(h // md, k // md)] * md + D.compose[(h % md, k % md)]

    P = build(f"{C.name}x{D.name}", objs, mors, ident, compfn)
    P.factors = (C, D)
    p1 = Functor(P, C, [c for c, _ in objs], [f // md for f in range(P.n_mor)], name="proj1")
    p2 = Functor(P, D, [d for _, d in objs], [f % md for f in range(P.n_mor)], name="proj2")
    return P, p1, p2


def pair_obj(P: FinCat, c: int, d: int) -> int:
    return c * P.factors[1].n_obj + d


def pair_mor(P: FinCat, f: int, g: int) -> int:
    return f * P.factors[1].n_mor + g


def pairing(P: FinCat, F: Functor, G: Functor) -> Functor:
    """The functor ``<F, G>`` into a product category built by ``product``."""
    nd, md = P.factors[1].n_obj, P.factors[1].n_mor
    return Functor(F.src, P, [F.obj[x] * nd + G.obj[x] for x in range(F.src.n_obj)],
                   [F.mor[m] * md + G.mor[m] for m in range(F.src.n_mor)],
                   name=f"<{F.name},{G.name}>")


def product_functor(P: FinCat, Q: FinCat, F: Functor, G: Functor) -> Functor:
    """``F x G: P -> Q`` for products P, Q built by ``product``."""
    nd, md = P.factors[1].n_obj, P.factors[1].n_mor
    qn, qm = Q.factors[1].n_obj, Q.factors[1].n_mor
    obj = [F.obj[x // nd] * qn + G.obj[x % nd] for x in range(P.n_obj)]
    mor = [F.mor[m // md] * qm + G.mor[m % md] for m in range(P.n_mor)]
    return Functor(P, Q, obj, mor, name=f"{F.name}x{G.name}")


def arrow_category(C: FinCat):
    """Objects are the morphisms of C (object id = morphism id).

    A morphism ``f -> g`` is a commuting square ``(a, b)`` with
    ``g . a = b . f``.  Returns ``(C^[1], dom, cod)``.
    """
    mors = []
    for f in range(C.n_mor):
        x, y = C.src[f], C.dst[f]
        for a in C.out[x]:
            for b in C.out[y]:
                bf = C.compose[(b, f)]
                for g in C.homset(C.dst[a], C.dst[b]):
                    if C.compose[(g, a)] == bf:
                        mors.append(((f, g, a, b), f, g))
    _check_aux(len(mors), f"{C.name}^[1]")
    index = {lab: i for i, (lab, _, _) in enumerate(mors)}
    ident_of = [index[(f, f, C.identity[C.src[f]], C.identity[C.dst[f]])] for f in range(C.n_mor)]

    def compfn(k2, k1):
        f, _, a1, b1 = mors[k1][0]
        _, h, a2, b2 = mors[k2][0]
        return index[(f, h, C.compose[(a2, a1)], C.compose[(b2, b1)])]

    A = build(f"{C.name}^[1]", list(range(C.n_mor)), mors, ident_of, compfn)
    A.morphism_of = index
    dom = Functor(A, C, [C.src[f] for f in range(C.n_mor)], [lab[2] for lab, _, _ in mors], name="dom")
    cod = Functor(A, C, [C.dst[f] for f in range(C.n_mor)], [lab[3] for lab, _, _ in mors], name="cod")
    return A, dom, cod


def comma(F: Functor, G: Functor):
    """Comma category ``F / G``: objects ``(c, d, m: F c -> G d)``.

    Morphism labels are ``(o, o2, s, t)`` with object ids o, o2.
    Returns ``(K, pF, pG, alpha)`` where ``alpha: F pF => G pG``.
    """
    if F.dst is not G.dst and not F.dst.same_tables(G.dst):
        raise BaseMismatch("comma: functors have different codomains")
    A, C, D = F.dst, F.src, G.src
    objs = []
    by_pair = {}
    for c in range(C.n_obj):
        for d in range(D.n_obj):
            for m in A.homset(F.obj[c], G.obj[d]):
                by_pair.setdefault((c, d), []).append(len(objs))
                objs.append((c, d, m))
    mors = []
    for o, (c, d, m) in enumerate(objs):
        for s in C.out[c]:
            fs = F.mor[s]
            for t in D.out[d]:
                lhs = A.compose[(G.mor[t], m)]
                for o2 in by_pair.get((C.dst[s], D.dst[t]), ()):
                    if A.compose[(objs[o2][2], fs)] == lhs:
                        mors.append(((o, o2, s, t), o, o2))
    _check_aux(len(mors), "comma")
    index = {lab: i for i, (lab, _, _) in enumerate(mors)}
    ident = [index[(o, o, C.identity[c], D.identity[d])] for o, (c, d, _) in enumerate(objs)]

    def compfn(k2, k1):
        o, _, s1, t1 = mors[k1][0]
        _, o3, s2, t2 = mors[k2][0]
        return index[(o, o3, C.compose[(s2, s1)], D.compose[(t2, t1)])]

    K = build(f"({F.name}/{G.name})", objs, mors, ident, compfn)
    K.obj_index = {lab: i for i, lab in enumerate(objs)}
    K.mor_index = index
    pF = Functor(K, C, [c for c, _, _ in objs], [lab[2] for lab, _, _ in mors], name="pF")
    pG = Functor(K, D, [d for _, d, _ in objs], [lab[3] for lab, _, _ in mors], name="pG")
    alpha = NatTrans(pF.then(F), pG.then(G), [m for _, _, m in objs])
    return K, pF, pG, alpha


def pullback(F: Functor, G: Functor):
    """Strict pullback of ``F: C -> A`` and ``G: D -> A``.

    Labels are pairs of component ids.  Returns ``(P, p1, p2)``.
    """
    if F.dst is not G.dst and not F.dst.same_tables(G.dst):
        raise BaseMismatch("pullback: functors have different codomains")
    C, D = F.src, G.src
    g_over = {}
    for d in range(D.n_obj):
        g_over.setdefault(G.obj[d], []).append(d)
    objs = [(c, d) for c in range(C.n_obj) for d in g_over.get(F.obj[c], ())]
    oidx = {lab: i for i, lab in enumerate(objs)}
    gm_over = {}
    for t in range(D.n_mor):
        gm_over.setdefault(G.mor[t], []).append(t)
    mors = []
    for s in range(C.n_mor):
        for t in gm_over.get(F.mor[s], ()):
            mors.append(((s, t), oidx[(C.src[s], D.src[t])], oidx[(C.dst[s], D.dst[t])]))
    _check_aux(len(mors), "pullback")
    index = {lab: i for i, (lab, _, _) in enumerate(mors)}
    ident = [index[(C.identity[c], D.identity[d])] for c, d in objs]

    def compfn(k2, k1):
        s1, t1 = mors[k1][0]
        s2, t2 = mors[k2][0]
        return index[(C.compose[(s2, s1)], D.compose[(t2, t1)])]

    P = build(f"({C.name}x_{F.dst.name}{D.name})", objs, mors, ident, compfn)
    P.obj_index = oidx
    P.mor_index = index
    p1 = Functor(P, C, [c for c, _ in objs], [lab[0] for lab, _, _ in mors], name="p1")
    p2 = Functor(P, D, [d for _, d in objs], [lab[1] for lab, _, _ in mors], name="p2")
    return P, p1, p2


def pullback_mediator(P: FinCat, H1: Functor, H2: Functor) -> Functor:
    """The functor ``X -> P`` induced by a commuting cone ``(H1, H2)``."""
    X = H1.src
    try:
        obj = [P.obj_index[(H1.obj[x], H2.obj[x])] for x in range(X.n_obj)]
        mor = [P.mor_index[(H1.mor[m], H2.mor[m])] for m in range(X.n_mor)]
    except KeyError:
        raise BoundaryMismatch("cone does not commute") from None
    return Functor(X, P, obj, mor, name="mediator")


def subcategory(C: FinCat, objs, mors, name=None):
    """Subcategory on the given ids (must be closed under composition and
    contain the identities).  Returns ``(S, inclusion)``."""
    objs = sorted(objs)
    mors = sorted(mors)
    oidx = {x: i for i, x in enumerate(objs)}
    midx = {m: i for i, m in enumerate(mors)}
    specs = [(C.morphisms[m], oidx[C.src[m]], oidx[C.dst[m]]) for m in mors]
    ident = [midx[C.identity[x]] for x in objs]

    def compfn(g, f):
        return midx[C.compose[(mors[g], mors[f])]]

    S = build(name or f"sub({C.name})", [C.objects[x] for x in objs], specs, ident, compfn)
    inc = Functor(S, C, objs, mors, name="incl")
    return S, inc


def full_subcategory(C: FinCat, objs, name=None):
    keep = set(objs)
    mors = [m for m in range(C.n_mor) if C.src[m] in keep and C.dst[m] in keep]
    return subcategory(C, keep, mors, name=name)


def fiber(pi: Functor, b: int, with_inclusion=False):
    """Strict fiber of ``pi`` over ``b``."""
    if not 0 <= b < pi.dst.n_obj:
        raise UnknownObject(b)
    B = pi.dst
    ib = B.identity[b]
    objs = pi.obj_fibers[b]
    mors = [m for m in range(pi.src.n_mor) if pi.mor[m] == ib]
    S, inc = subcategory(pi.src, objs, mors, name=f"{pi.src.name}|{B.objects[b]}")
    return (S, inc) if with_inclusion else S


def extremal_objects(C: FinCat):
    initials = [x for x in range(C.n_obj)
                if all(len(C.homset(x, y)) == 1 for y in range(C.n_obj))]
    terminals = [y for y in range(C.n_obj)
                 if all(len(C.homset(x, y)) == 1 for x in range(C.n_obj))]
    return initials, terminals


# -- equivalences ---------------------------------------------------------------

def is_fully_faithful(F: Functor) -> bool:
    C, D = F.src, F.dst
    for x in range(C.n_obj):
        for y in range(C.n_obj):
            h = C.homset(x, y)
            img = {F.mor[m] for m in h}
            if len(img) != len(h) or len(img) != len(D.homset(F.obj[x], F.obj[y])):
                return False
    return True


def is_essentially_surjective(F: Functor) -> bool:
    D = F.dst
    image = set(F.obj)
    reach = set(image)
    for m in D.inverses:
        if D.src[m] in image:
            reach.add(D.dst[m])
    return len(reach) == D.n_obj


def is_equivalence(F: Functor) -> bool:
    return is_fully_faithful(F) and is_essentially_surjective(F)


def is_isomorphism(F: Functor) -> bool:
    return len(set(F.obj)) == F.dst.n_obj == F.src.n_obj and \
        len(set(F.mor)) == F.dst.n_mor == F.src.n_mor


def is_isofibration(F: Functor) -> bool:
    E, B = F.src, F.dst
    for e in range(E.n_obj):
        lifted = {F.mor[a] for a in E.out[e] if a in E.inverses}
        for beta in B.out[F.obj[e]]:
            if beta in B.inverses and beta not in lifted:
                return False
    return True


def commutes_over(phi: Functor, pE: Functor, pF: Functor) -> bool:
    """Whether ``pF . phi == pE`` strictly."""
    return all(pF.obj[phi.obj[x]] == pE.obj[x] for x in range(phi.src.n_obj)) and \
        all(pF.mor[phi.mor[m]] == pE.mor[m] for m in range(phi.src.n_mor))


def is_fibered_equivalence(phi: Functor, pE: Functor, pF: Functor) -> bool:
    """``phi: E -> F`` over B is a fibered equivalence.

    Fully faithful, and every object of F is vertically isomorphic to an
    object in the image; a quasi-inverse with vertical unit and counit is
    then assembled from these choices.
    """
    from .errors import NotOverBase
    if not commutes_over(phi, pE, pF):
        raise NotOverBase("phi does not commute with the projections")
    if not is_fully_faithful(phi):
        return False
    F = phi.dst
    image = set(phi.obj)
    reach = set(image)
    for m in F.inverses:
        if F.src[m] in image and pF.is_vertical(m):
            reach.add(F.dst[m])
    return len(reach) == F.n_obj


def same_cat(C: FinCat, D: FinCat) -> bool:
    return C is D or C.same_tables(D)


def validate_category(raw: dict, name: str = "", check_size: bool = False) -> FinCat:
    """Parse and validate a category description.

    ``raw`` has keys ``objects`` (names), ``morphisms`` (dicts with ``id``,
    ``src``, ``dst``) and ``compose`` (triples ``[g, f, gf]``).  Identities
    are implicit as ``id_<obj>`` and need not be listed; composites with an
    identity are synthesized.
    """
    try:
        objects = [str(o) for o in raw["objects"]]
        mspecs = raw.get("morphisms", [])
        triples = raw.get("compose", [])
    except (KeyError, TypeError) as exc:
        raise DanglingId(f"malformed category description: {exc}") from None
    if len(set(objects)) != len(objects):
        raise DanglingId("duplicate object names")
    oid = {o: i for i, o in enumerate(objects)}
    labels, src, dst = [], [], []
    for o in objects:
        labels.append(f"id_{o}")
        src.append(oid[o])
        dst.append(oid[o])
    identity = list(range(len(objects)))
    for spec in mspecs:
        try:
            mid, s, d = str(spec["id"]), str(spec["src"]), str(spec["dst"])
        except (KeyError, TypeError):
            raise DanglingId(f"malformed morphism entry {spec!r}") from None
        if s not in oid or d not in oid:
            raise DanglingId(f"morphism {mid} refers to an unknown object")
        if mid in labels:
            if mid == f"id_{s}" and s == d:
                continue
            raise DanglingId(f"duplicate morphism id {mid}")
        labels.append(mid)
        src.append(oid[s])
        dst.append(oid[d])
    mid = {lab: i for i, lab in enumerate(labels)}
    comp = {}
    for f in range(len(labels)):
        comp[(identity[dst[f]], f)] = f
        comp[(f, identity[src[f]])] = f
    for t in triples:
        try:
            g, f, h = (str(x) for x in t)
        except (TypeError, ValueError):
            raise DanglingId(f"malformed composition triple {t!r}") from None
        for x in (g, f, h):
            if x not in mid:
                raise DanglingId(f"composition ({g}, {f}, {h}) mentions unknown morphism {x}")
        gi, fi, hi = mid[g], mid[f], mid[h]
        if dst[fi] != src[gi]:
            raise DanglingId(f"composition ({g}, {f}, {h}): {g} and {f} are not composable")
        if src[hi] != src[fi] or dst[hi] != dst[gi]:
            raise DanglingId(f"composition ({g}, {f}, {h}): {h} has the wrong source or target")
        prev = comp.get((gi, fi))
        if prev is not None and prev != hi:
            if gi in identity or fi in identity:
                raise UnitLawViolation(f"composition ({g}, {f}, {h}) contradicts the unit law")
            raise NonAssociative(f"composition ({g}, {f}) declared as both "
                                 f"{labels[prev]} and {h}")
        comp[(gi, fi)] = hi
    for f in range(len(labels)):
        for g in range(len(labels)):
            if src[g] == dst[f] and (g, f) not in comp:
                raise MissingComposite(f"missing composite ({labels[g]}, {labels[f]})")
    C = FinCat(objects, labels, src, dst, identity, comp, name=name or raw.get("name", ""))
    bad = C.law_violations(limit=1)
    if bad:
        kind = bad[0][0]
        if kind == "unit":
            raise UnitLawViolation(f"unit law fails at {labels[bad[0][1]]}")
        if kind == "assoc":
            h, g, f = bad[0][1:]
            raise NonAssociative(f"associativity fails for ({labels[h]}, {labels[g]}, {labels[f]})")
        raise DanglingId(str(bad[0]))
    if check_size:
        check_input_size(C)
    return C


def category_to_raw(C: FinCat) -> dict:
    """Inverse of ``validate_category`` (names are stringified labels)."""
    onames = [str(o) for o in C.objects]
    mnames = []
    for m, lab in enumerate(C.morphisms):
        if C.is_identity(m) and C.identity[C.src[m]] == m:
            mnames.append(f"id_{onames[C.src[m]]}")
        else:
            mnames.append(str(lab))
    if len(set(mnames)) != len(mnames):
        mnames = [n if C.is_identity(m) else f"m{m}" for m, n in enumerate(mnames)]
    morphisms = [{"id": mnames[m], "src": onames[C.src[m]], "dst": onames[C.dst[m]]}
                 for m in range(C.n_mor) if not C.is_identity(m)]
    compose = [[mnames[g], mnames[f], mnames[h]] for (g, f), h in sorted(C.compose.items())
               if not C.is_identity(g) and not C.is_identity(f)]
    return {"name": C.name, "objects": onames, "morphisms": morphisms, "compose": compose}
