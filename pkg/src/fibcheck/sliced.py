"""Constructions over a fixed base and sliced cocartesian maps."""
from __future__ import annotations

from dataclasses import dataclass

from .adjunctions import find_fibered_lari, find_fibered_left_adjoint
from .errors import BaseMismatch, NotOverBase, PreconditionFailed
from .fibrations import (cart_fill, cartesian_arrows, cartesian_lift, cocart_fill,
                         cocartesian_arrows, is_cartesian_fibration, is_cartesian_functor,
                         is_cocartesian_fibration, is_cocartesian_functor)
from .fincat import (ONE, FinCat, Functor, arrow_category, comma, commutes_over,
                     full_subcategory, identity_functor, product, product_functor, pullback,
                     same_cat)
from .report import CheckReport
from .search import search_functors


@dataclass
class SlicedMap:
    """``phi: F -> E`` over B, with ``xi: F -> B`` and ``pi: E -> B``."""
    phi: Functor
    xi: Functor
    pi: Functor

    def __post_init__(self):
        if not same_cat(self.xi.dst, self.pi.dst):
            raise BaseMismatch("projections have different bases")
        if not commutes_over(self.phi, self.xi, self.pi):
            raise NotOverBase("phi does not commute with the projections")

    @property
    def base(self) -> FinCat:
        return self.pi.dst


def identity_sliced(pi: Functor) -> SlicedMap:
    return SlicedMap(identity_functor(pi.src), pi, pi)


def vertical_arrows(pi: Functor):
    """Full subcategory of ``E^[1]`` on the pi-vertical arrows.

    Returns ``(V, proj, dom, cod)`` with ``proj: V -> B`` and the two
    endpoint functors ``V -> E``.  Object labels are the arrows of E.
    """
    E = pi.src
    A, dom, cod = arrow_category(E)
    verts = [f for f in range(E.n_mor) if pi.is_vertical(f)]
    V, inc = full_subcategory(A, verts, name=f"Vert({E.name})")
    d = inc.then(dom)
    c = inc.then(cod)
    proj = d.then(pi)
    proj.name = "vproj"
    return V, proj, d, c


def sliced_product(maps):
    """Fiberwise product of the projections in ``maps`` (all into one B).

    Returns ``(P, proj, factors)`` with ``factors[i]: P -> E_i``.
    """
    maps = list(maps)
    if not maps:
        raise BaseMismatch("sliced_product needs at least one map; use the base itself")
    B = maps[0].dst
    for p in maps:
        if not same_cat(p.dst, B):
            raise BaseMismatch("sliced_product: maps over different bases")
    P, proj = maps[0].src, maps[0]
    factors = [identity_functor(P)]
    for p in maps[1:]:
        Q, q1, q2 = pullback(proj, p)
        factors = [q1.then(f) for f in factors] + [q2]
        proj = q1.then(proj)
        P = Q
    proj.name = "sproj"
    return P, proj, factors


def sliced_comma(phi: Functor, psi: Functor, pG: Functor):
    """Sliced comma ``phi /_B psi`` for ``phi: E -> G``, ``psi: F -> G``.

    Objects are ``(e, f, k: phi e -> psi f)`` with k vertical over B.  Returns
    ``(K, p_dom, p_cod, proj)`` where ``p_dom: K -> E``, ``p_cod: K -> F``
    and ``proj: K -> B``.
    """
    if not (same_cat(phi.dst, pG.src) and same_cat(psi.dst, pG.src)):
        raise BaseMismatch("sliced_comma: maps do not share a codomain fibration")
    C, pE, pF, _ = comma(phi, psi)
    keep = [o for o, (_, _, k) in enumerate(C.objects) if pG.is_vertical(k)]
    K, inc = full_subcategory(C, keep, name="sliced-comma")
    K.obj_index = {lab: i for i, lab in enumerate(K.objects)}
    # morphism labels of the comma refer to comma object ids; re-key them
    cid = {o: i for i, o in enumerate(sorted(keep))}
    K.mor_index = {(cid[o], cid[o2], s, t): i for i, (o, o2, s, t) in enumerate(K.morphisms)}
    p_dom = inc.then(pE)
    p_cod = inc.then(pF)
    proj = p_cod.then(psi).then(pG)
    return K, p_dom, p_cod, proj


# -- sliced cocartesian maps ----------------------------------------------------

def sliced_cocartesian_failure(sm: SlicedMap):
    """First ``(f, x)`` with f pi-vertical and no phi-cocartesian lift at x."""
    phi, pi = sm.phi, sm.pi
    F, E = phi.src, phi.dst
    cocart = cocartesian_arrows(phi)
    lifts = {}
    for k in cocart:
        lifts.setdefault((F.src[k], phi.mor[k]), True)
    for f in range(E.n_mor):
        if not pi.is_vertical(f):
            continue
        for x in phi.obj_fibers[E.src[f]]:
            if (x, f) not in lifts:
                return (f, x)
    return None


def is_sliced_cocartesian(sm: SlicedMap) -> bool:
    return sliced_cocartesian_failure(sm) is None


def sliced_lift(sm: SlicedMap, f: int, x: int):
    """Smallest-id phi-cocartesian arrow from x over the vertical arrow f."""
    phi = sm.phi
    cocart = cocartesian_arrows(phi)
    for k in phi.src.out[x]:
        if phi.mor[k] == f and k in cocart:
            return k
    return None


def _comma_over_E(sm: SlicedMap):
    """``phi /_B E`` with its projections."""
    return sliced_comma(sm.phi, identity_functor(sm.phi.dst), sm.pi)


def sliced_chevalley_map(sm: SlicedMap):
    """``i0 /_B phi: Vert_xi(F) -> phi /_B E`` with both projections to B."""
    phi = sm.phi
    F = phi.src
    V, vproj, vdom, vcod = vertical_arrows(sm.xi)
    K, _, _, kproj = _comma_over_E(sm)
    oi = K.obj_index
    obj = []
    for v in V.objects:
        obj.append(oi[(F.src[v], phi.obj[F.dst[v]], phi.mor[v])])
    mor = []
    A_labels = V.morphisms
    for m, (f, g, a, b) in enumerate(A_labels):
        mor.append(K.mor_index[(obj[V.src[m]], obj[V.dst[m]], a, phi.mor[b])])
    kappa = Functor(V, K, obj, mor, name="i0/phi")
    return kappa, vproj, kproj


def sliced_transport_map(sm: SlicedMap):
    """``iota_phi: F -> phi /_B E`` over E (projections phi and the codomain)."""
    phi = sm.phi
    F, E = phi.src, phi.dst
    K, _, kcod, _ = _comma_over_E(sm)
    oi = K.obj_index
    obj = [oi[(x, phi.obj[x], E.identity[phi.obj[x]])] for x in range(F.n_obj)]
    mor = [K.mor_index[(obj[F.src[s]], obj[F.dst[s]], s, phi.mor[s])] for s in range(F.n_mor)]
    return Functor(F, K, obj, mor, name="iota_phi"), kcod


def sliced_cocart_criteria_agree(sm: SlicedMap) -> CheckReport:
    rep = CheckReport("sliced-cocartesian")
    rep.verdicts["elementary"] = is_sliced_cocartesian(sm)
    kappa, vproj, kproj = sliced_chevalley_map(sm)
    rep.verdicts["fibered-lari"] = find_fibered_lari(kappa, vproj, kproj) is not None
    iota, kcod = sliced_transport_map(sm)
    rep.verdicts["fibered-left-adjoint"] = find_fibered_left_adjoint(iota, sm.phi, kcod) is not None
    fail = sliced_cocartesian_failure(sm)
    if fail is not None:
        rep.witnesses["vertical-arrow-without-lift"] = fail
    return rep


def sliced_vs_absolute_check(sm: SlicedMap) -> CheckReport:
    """Under the precondition, sliced cocartesian iff phi is a cocartesian
    fibration in the absolute sense."""
    B = sm.base
    if not (is_cocartesian_fibration(sm.xi) and is_cocartesian_fibration(sm.pi)
            and is_cocartesian_functor(sm.phi, identity_functor(B), sm.xi, sm.pi)):
        raise PreconditionFailed("xi, pi must be cocartesian fibrations and phi a cocartesian functor")
    rep = CheckReport("sliced-vs-absolute")
    rep.verdicts["sliced"] = is_sliced_cocartesian(sm)
    rep.verdicts["absolute"] = is_cocartesian_fibration(sm.phi)
    return rep


def sliced_comma_codomain_check(phi: Functor, psi: Functor, pG: Functor) -> bool:
    """Whether ``p_cod: phi /_B psi -> F`` is a cocartesian fibration, and
    the identity-extension squares over vertical arrows are cocartesian."""
    K, p_dom, p_cod, _ = sliced_comma(phi, psi, pG)
    if not is_cocartesian_fibration(p_cod):
        return False
    return tautological_lifts_ok(K, p_cod, psi, pG)


def sliced_comma_codomain_sliced_check(phi: Functor, psi: Functor, pG: Functor) -> bool:
    """The version over B: ``p_cod`` lifts the arrows of F that are vertical
    over B, cocartesianly and by the identity-extension squares.

    The absolute version above fails already for ``phi = pick_0: 1 -> [1]``
    and ``psi = pG = id``: the comma is a point and ``0 -> 1`` has no lift.
    """
    K, _, p_cod, proj = sliced_comma(phi, psi, pG)
    sm = SlicedMap(p_cod, proj, psi.then(pG))
    return is_sliced_cocartesian(sm) and tautological_lifts_ok(K, p_cod, psi, pG)


def tautological_lifts_ok(K, p_cod, psi, pG) -> bool:
    """For every object ``(e, f, k)`` and every ``t: f -> f'`` over an
    identity of B, the square ``(id_e, t)`` is a cocartesian lift."""
    F = p_cod.dst
    cocart = cocartesian_arrows(p_cod)
    G = pG.src
    for o, (e, f, k) in enumerate(K.objects):
        for t in F.out[f]:
            if not pG.is_vertical(psi.mor[t]):
                continue
            target = K.obj_index.get((e, F.dst[t], G.compose[(psi.mor[t], k)]))
            if target is None:
                return False
            m = K.mor_index.get((o, target, _identity_of_dom(p_cod, K, o), t))
            if m is None or m not in cocart:
                return False
    return True


def _identity_of_dom(p_cod, K, o):
    # the E-component of the identity square at o
    ident = K.identity[o]
    return K.morphisms[ident][2]


# -- cocartesian fibrations in cartesian fibrations ------------------------------

def is_cocart_in_cart(sm: SlicedMap) -> bool:
    B = sm.base
    return (is_cartesian_fibration(sm.xi) and is_cartesian_fibration(sm.pi)
            and is_cartesian_functor(sm.phi, identity_functor(B), sm.xi, sm.pi)
            and is_sliced_cocartesian(sm))


def lifting_functors(sm: SlicedMap):
    """``(chi_B, tau_B, proj_K, proj_V)`` from the fibered LARI of ``i0 /_B phi``."""
    kappa, vproj, kproj = sliced_chevalley_map(sm)
    lari = find_fibered_lari(kappa, vproj, kproj)
    if lari is None:
        raise PreconditionFailed("phi is not sliced cocartesian")
    chi = lari.adj.left
    V = kappa.src
    # object labels of V are arrows of F; cod of an arrow
    F = sm.phi.src
    cod = Functor(V, F, [F.dst[v] for v in V.objects], [lab[3] for lab in V.morphisms], name="cod")
    tau = chi.then(cod)
    return chi, tau, kproj, vproj


def cocart_in_cart_fillers(sm: SlicedMap):
    """Yield the named arrows for every ``(v, f, x)``.

    ``v: b' -> b`` in B, ``f: e' -> e`` pi-vertical over b, x over e'.  Arrows:
    ``g, f'`` cartesian lifts of v at e' and e; ``g'`` the vertical fill;
    ``k`` a xi-cartesian arrow over g into x; ``m`` the sliced lift of f at x;
    ``m'`` the sliced lift of g' at the source of k; ``k'`` the fill from m'
    over f'; ``k''`` a xi-cartesian arrow over f' into the target of m; ``m''``
    the fill into the source of k''.
    """
    phi, xi, pi = sm.phi, sm.xi, sm.pi
    F, E, B = phi.src, phi.dst, sm.base
    xi_cart = cartesian_arrows(xi)
    for f in range(E.n_mor):
        if not pi.is_vertical(f):
            continue
        e1, e = E.src[f], E.dst[f]
        b = pi.obj[e]
        for v in B.inn[b]:
            bp = B.src[v]
            g = cartesian_lift(pi, v, e1)
            fp = cartesian_lift(pi, v, e)
            if g is None or fp is None:
                raise PreconditionFailed("pi is not a cartesian fibration")
            g, fp = g.lift, fp.lift
            gp = cart_fill(pi, fp, E.compose[(f, g)], B.identity[bp])
            for x in phi.obj_fibers[e1]:
                k = next((a for a in F.inn[x] if phi.mor[a] == g and a in xi_cart), None)
                m = sliced_lift(sm, f, x)
                if k is None or m is None:
                    raise PreconditionFailed("missing cartesian or sliced lift")
                mp = sliced_lift(sm, gp, F.src[k])
                if mp is None:
                    raise PreconditionFailed("missing sliced lift")
                mk = F.compose[(m, k)]
                kp = cocart_fill(phi, mp, mk, fp)
                kpp = next((a for a in F.inn[F.dst[m]] if phi.mor[a] == fp and a in xi_cart), None)
                if kp is None or kpp is None:
                    raise PreconditionFailed("missing filler")
                mpp = cart_fill(xi, kpp, mk, B.identity[bp])
                yield {"v": v, "f": f, "x": x, "g": g, "f'": fp, "g'": gp, "k": k, "m": m,
                       "m'": mp, "k'": kp, "k''": kpp, "m''": mpp}


def cocart_in_cart_criteria_agree(sm: SlicedMap) -> CheckReport:
    B = sm.base
    if not (is_cartesian_fibration(sm.xi) and is_cartesian_fibration(sm.pi)
            and is_cartesian_functor(sm.phi, identity_functor(B), sm.xi, sm.pi)
            and is_sliced_cocartesian(sm)):
        raise PreconditionFailed("needs cartesian fibrations, a cartesian functor and a sliced cocartesian map")
    rep = CheckReport("cocart-in-cart")
    chi, tau, kproj, vproj = lifting_functors(sm)
    idB = identity_functor(B)
    rep.verdicts["chi-cartesian"] = is_cartesian_functor(chi, idB, kproj, vproj)
    rep.verdicts["tau-cartesian"] = is_cartesian_functor(tau, idB, kproj, sm.xi)
    xi_cart = cartesian_arrows(sm.xi)
    phi_cocart = cocartesian_arrows(sm.phi)
    ok3 = ok4 = True
    for d in cocart_in_cart_fillers(sm):
        if d["k'"] not in xi_cart:
            ok3 = False
            rep.witnesses.setdefault("k'-not-cartesian", d)
        if d["m''"] is None or d["m''"] not in phi_cocart:
            ok4 = False
            rep.witnesses.setdefault("m''-not-cocartesian", d)
    rep.verdicts["k'-cartesian"] = ok3
    rep.verdicts["m''-cocartesian"] = ok4
    return rep


# -- closure and commutation -----------------------------------------------------

def sliced_product_map(maps):
    """Fiberwise product of sliced maps over one base, as a sliced map."""
    maps = list(maps)
    F, xi, fF = sliced_product([m.xi for m in maps])
    E, pi, fE = sliced_product([m.pi for m in maps])
    # build phi componentwise through the iterated pullbacks
    obj, mor = [], []
    comps = [m.phi for m in maps]
    for x in range(F.n_obj):
        key = [c.obj[f.obj[x]] for c, f in zip(comps, fF)]
        obj.append(_locate(E, fE, key, objects=True))
    for a in range(F.n_mor):
        key = [c.mor[f.mor[a]] for c, f in zip(comps, fF)]
        mor.append(_locate(E, fE, key, objects=False))
    return SlicedMap(Functor(F, E, obj, mor, name="prod-phi"), xi, pi)


def _locate(P, factors, key, objects):
    idx = P.__dict__.get("_factor_index_o" if objects else "_factor_index_m")
    if idx is None:
        n = P.n_obj if objects else P.n_mor
        idx = {tuple((f.obj if objects else f.mor)[i] for f in factors): i for i in range(n)}
        P.__dict__["_factor_index_o" if objects else "_factor_index_m"] = idx
    return idx[tuple(key)]


def compose_sliced(first: SlicedMap, second: SlicedMap) -> SlicedMap:
    """``second.phi . first.phi`` over the shared base."""
    return SlicedMap(first.phi.then(second.phi), first.xi, second.pi)


def pullback_sliced(sm: SlicedMap, k: Functor) -> SlicedMap:
    """Pullback of a sliced map along ``k: A -> B``."""
    E2, q1, q2 = pullback(sm.pi, k)
    F2, r1, r2 = pullback(sm.xi, k)
    obj = [E2.obj_index[(sm.phi.obj[x], a)] for (x, a) in F2.objects]
    mor = [E2.mor_index[(sm.phi.mor[s], t)] for (s, t) in F2.morphisms]
    return SlicedMap(Functor(F2, E2, obj, mor, name="k*phi"), r2, q2)


_PRODUCT_CACHE = {}


def _cached_product(C, D):
    key = (id(C), id(D))
    hit = _PRODUCT_CACHE.get(key)
    if hit is None or hit[0] is not C or hit[1] is not D:
        hit = (C, D, product(C, D))
        _PRODUCT_CACHE[key] = hit
        if len(_PRODUCT_CACHE) > 512:
            _PRODUCT_CACHE.pop(next(iter(_PRODUCT_CACHE)))
    return hit[2]


def _fold_products(cats):
    if not cats:
        return ONE, []
    P = cats[0]
    chain = [P]
    for C in cats[1:]:
        P = _cached_product(P, C)[0]
        chain.append(P)
    return P, chain


def _fold_functors(funcs, src_chain, dst_chain):
    if not funcs:
        return identity_functor(ONE)
    F = funcs[0]
    for i, G in enumerate(funcs[1:], start=1):
        F = product_functor(src_chain[i], dst_chain[i], F, G)
    return F


def prod_comma_commutation_check(cospans) -> bool:
    """Product of sliced commas vs. sliced comma of products.

    ``cospans`` is a list of ``(phi_i, psi_i, pG_i)``; the two sides must be
    isomorphic over the product of the bases.
    """
    cospans = list(cospans)
    commas = [sliced_comma(*c) for c in cospans]
    L, lchain = _fold_products([k[0] for k in commas])
    Bs = [c[2].dst for c in cospans]
    Bp, bchain = _fold_products(Bs)
    lproj = _fold_functors([k[3] for k in commas], lchain, bchain)
    Es, echain = _fold_products([c[0].src for c in cospans])
    Fs, fchain = _fold_products([c[1].src for c in cospans])
    Gs, gchain = _fold_products([c[2].src for c in cospans])
    Phi = _fold_functors([c[0] for c in cospans], echain, gchain)
    Psi = _fold_functors([c[1] for c in cospans], fchain, gchain)
    PG = _fold_functors([c[2] for c in cospans], gchain, bchain)
    if not cospans:
        Phi = Psi = PG = identity_functor(ONE)
    R, _, _, rproj = sliced_comma(Phi, Psi, PG)
    if L.n_obj != R.n_obj or L.n_mor != R.n_mor:
        return False
    cands = [rproj.obj_fibers[lproj.obj[x]] for x in range(L.n_obj)]
    res = next(search_functors(L, R, cands, mor_ok=lambda m, v: rproj.mor[v] == lproj.mor[m],
                               injective=True, limit=1), None)
    return res is not None
