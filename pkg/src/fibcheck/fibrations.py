"""Cocartesian and cartesian arrows, fibrations, and their adjoint criteria.

Every cartesian notion is the cocartesian one for the opposite functor;
opposite categories share morphism ids, so results need no translation.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .adjunctions import compute_mate, find_fibered_left_adjoint, has_lari
from .errors import NotOverSource, PreconditionFailed, SquareMismatch, UnknownMorphism
from .fincat import Functor, NatTrans, arrow_category, comma, identity_functor
from .report import CheckReport


@dataclass(frozen=True)
class LiftWitness:
    base_arrow: int
    source: int
    lift: int
    target: int


def _is_cocart(pi: Functor, f: int) -> bool:
    E, B = pi.src, pi.dst
    e1 = E.dst[f]
    pf = pi.mor[f]
    counts = Counter()
    for g in E.out[e1]:
        key = (pi.mor[g], E.compose[(g, f)])
        counts[key] += 1
        if counts[key] > 1:
            return False
    need = 0
    b1 = B.dst[pf]
    for h in E.out[E.src[f]]:
        ph = pi.mor[h]
        for v in B.homset(b1, B.dst[ph]):
            if B.compose[(v, pf)] == ph:
                need += 1
    return need == len(counts)


def cocartesian_arrows(pi: Functor) -> frozenset:
    cached = pi.__dict__.get("_cocart")
    if cached is None:
        cached = frozenset(f for f in range(pi.src.n_mor) if _is_cocart(pi, f))
        pi.__dict__["_cocart"] = cached
    return cached


def cartesian_arrows(pi: Functor) -> frozenset:
    return cocartesian_arrows(pi.op)


def is_cocartesian_arrow(pi: Functor, f: int) -> bool:
    if not 0 <= f < pi.src.n_mor:
        raise UnknownMorphism(f)
    return f in cocartesian_arrows(pi)


def is_cartesian_arrow(pi: Functor, f: int) -> bool:
    return is_cocartesian_arrow(pi.op, f)


def cocartesian_lift(pi: Functor, u: int, e: int):
    E = pi.src
    if pi.obj[e] != pi.dst.src[u]:
        raise NotOverSource(f"object {e} is not over the source of {u}")
    cocart = cocartesian_arrows(pi)
    for f in E.out[e]:
        if pi.mor[f] == u and f in cocart:
            return LiftWitness(u, e, f, E.dst[f])
    return None


def cartesian_lift(pi: Functor, u: int, e: int):
    """Cartesian lift of ``u`` ending at ``e`` (so ``pi(e) = dst u``)."""
    w = cocartesian_lift(pi.op, u, e)
    return None if w is None else LiftWitness(u, e, w.lift, w.target)


def cocartesian_failure(pi: Functor):
    """First ``(u, e)`` without a cocartesian lift, or None."""
    B = pi.dst
    for u in range(B.n_mor):
        for e in pi.obj_fibers[B.src[u]]:
            if cocartesian_lift(pi, u, e) is None:
                return (u, e)
    return None


def is_cocartesian_fibration(pi: Functor) -> bool:
    return cocartesian_failure(pi) is None


def is_cartesian_fibration(pi: Functor) -> bool:
    return is_cocartesian_fibration(pi.op)


def cocart_fill(pi: Functor, f: int, h: int, v: int):
    """The unique ``g`` over ``v`` with ``g . f = h``, or None."""
    E = pi.src
    res = [g for g in E.out[E.dst[f]] if pi.mor[g] == v and E.compose[(g, f)] == h]
    return res[0] if len(res) == 1 else None


def cart_fill(pi: Functor, f: int, h: int, v: int):
    """The unique ``g`` over ``v`` with ``f . g = h``, or None."""
    return cocart_fill(pi.op, f, h, v)


# -- discrete variants -----------------------------------------------------------

def is_discrete_opfibration(pi: Functor) -> bool:
    """Strict: exactly one arrow from e over every u."""
    E, B = pi.src, pi.dst
    for e in range(E.n_obj):
        c = Counter(pi.mor[f] for f in E.out[e])
        if any(c.get(u, 0) != 1 for u in B.out[pi.obj[e]]):
            return False
    return True


def is_discrete_fibration(pi: Functor) -> bool:
    return is_discrete_opfibration(pi.op)


def is_covariant(pi: Functor) -> bool:
    """The groupoid of lifts of every ``(u, e)`` is contractible.

    Lifts exist, and any two lifts ``f, f'`` are related by exactly one
    vertical isomorphism ``i`` with ``i . f = f'``.  This is the invariant
    form of unique lifting; for isofibrations with discrete fibers it agrees
    with the strict notion.
    """
    E, B = pi.src, pi.dst
    for e in range(E.n_obj):
        by_u = {}
        for f in E.out[e]:
            by_u.setdefault(pi.mor[f], []).append(f)
        for u in B.out[pi.obj[e]]:
            lifts = by_u.get(u)
            if not lifts:
                return False
            for f in lifts:
                for f2 in lifts:
                    n = sum(1 for i in E.homset(E.dst[f], E.dst[f2])
                            if pi.is_vertical(i) and i in E.inverses and E.compose[(i, f)] == f2)
                    if n != 1:
                        return False
    return True


def is_contravariant(pi: Functor) -> bool:
    return is_covariant(pi.op)


# -- adjoint criteria ------------------------------------------------------------

def chevalley_map(pi: Functor):
    """The Leibniz map ``E^[1] -> pi/B``, ``f |-> (src f, pi f)``."""
    E, B = pi.src, pi.dst
    A, dom, cod = arrow_category(E)
    K, pE, pB, _ = comma(pi, identity_functor(B))
    oi = K.obj_index
    obj = [oi[(E.src[f], pi.obj[E.dst[f]], pi.mor[f])] for f in range(E.n_mor)]
    mor = []
    for (f, g, a, b) in A.morphisms:
        mor.append(K.mor_index[(obj[f], obj[g], a, pi.mor[b])])
    return Functor(A, K, obj, mor, name="i0^pi")


def transport_map(pi: Functor):
    """``iota: E -> pi/B`` with its projection to B (the codomain)."""
    E, B = pi.src, pi.dst
    K, pE, pB, _ = comma(pi, identity_functor(B))
    oi = K.obj_index
    obj = [oi[(e, pi.obj[e], B.identity[pi.obj[e]])] for e in range(E.n_obj)]
    mor = [K.mor_index[(obj[E.src[s]], obj[E.dst[s]], s, pi.mor[s])] for s in range(E.n_mor)]
    return Functor(E, K, obj, mor, name="iota"), pB


def chevalley_lari_check(pi: Functor) -> bool:
    return has_lari(chevalley_map(pi)) is not None


def transport_adjunction(pi: Functor):
    iota, cod = transport_map(pi)
    return find_fibered_left_adjoint(iota, pi, cod)


def transport_adjoint_check(pi: Functor) -> bool:
    return transport_adjunction(pi) is not None


def chevalley_criteria_agree(pi: Functor) -> CheckReport:
    rep = CheckReport("chevalley")
    rep.verdicts["elementary"] = is_cocartesian_fibration(pi)
    rep.verdicts["lari"] = chevalley_lari_check(pi)
    rep.verdicts["transport"] = transport_adjoint_check(pi)
    fail = cocartesian_failure(pi)
    if fail is not None:
        rep.witnesses["missing-lift"] = fail
    return rep


# -- cocartesian functors --------------------------------------------------------

def _square_commutes(phi, k, piSrc, piDst):
    F = phi.src
    return all(piDst.obj[phi.obj[x]] == k.obj[piSrc.obj[x]] for x in range(F.n_obj)) and \
        all(piDst.mor[phi.mor[m]] == k.mor[piSrc.mor[m]] for m in range(F.n_mor))


def cocartesian_functor_failure(phi: Functor, k: Functor, piSrc: Functor, piDst: Functor):
    if not _square_commutes(phi, k, piSrc, piDst):
        raise SquareMismatch("square does not commute")
    target = cocartesian_arrows(piDst)
    for f in sorted(cocartesian_arrows(piSrc)):
        if phi.mor[f] not in target:
            return f
    return None


def is_cocartesian_functor(phi: Functor, k: Functor, piSrc: Functor, piDst: Functor) -> bool:
    return cocartesian_functor_failure(phi, k, piSrc, piDst) is None


def is_cartesian_functor(phi: Functor, k: Functor, piSrc: Functor, piDst: Functor) -> bool:
    return is_cocartesian_functor(phi.op, k.op, piSrc.op, piDst.op)


def comma_functor(phi: Functor, j: Functor, K1, K2) -> Functor:
    """``phi/j: xi/A -> pi/B``, ``(x, a, u) |-> (phi x, j a, j u)``."""
    oi = K2.obj_index
    obj = [oi[(phi.obj[x], j.obj[a], j.mor[u])] for (x, a, u) in K1.objects]
    mor = [K2.mor_index[(obj[o], obj[o2], phi.mor[s], j.mor[t])] for (o, o2, s, t) in K1.morphisms]
    return Functor(K1, K2, obj, mor, name="phi/j")


def cocart_functor_mate(phi: Functor, j: Functor, xi: Functor, pi: Functor) -> NatTrans:
    """The mate ``tau_pi . (phi/j) => phi . tau_xi`` of the identity square
    ``iota_pi . phi = (phi/j) . iota_xi``."""
    if not _square_commutes(phi, j, xi, pi):
        raise SquareMismatch("square does not commute")
    a1 = transport_adjunction(xi)
    a2 = transport_adjunction(pi)
    if a1 is None or a2 is None:
        raise PreconditionFailed("both verticals must be cocartesian fibrations")
    adj1, adj2 = a1.adj, a2.adj
    K1, K2 = adj1.right.dst, adj2.right.dst
    m = comma_functor(phi, j, K1, K2)
    # the given 2-cell lives between right adjoints; pass to opposites so it
    # sits between left adjoints as compute_mate expects
    L1, L2 = adj1.op(), adj2.op()
    alpha = NatTrans(phi.op.then(L2.left), L1.left.then(m.op),
                     [K2.identity[adj2.right.obj[phi.obj[x]]] for x in range(phi.src.n_obj)])
    t = compute_mate(phi.op, m.op, alpha, L1, L2)
    # t: phi^op tau_xi^op => tau_pi^op (phi/j)^op; as arrows of E these are
    # tau_pi (phi/j) y -> phi tau_xi y
    return t


def cocart_functor_mate_check(phi: Functor, j: Functor, xi: Functor, pi: Functor) -> bool:
    t = cocart_functor_mate(phi, j, xi, pi)
    E = phi.dst
    return all(E.is_iso(a) for a in t.comp)


def cocart_functor_criteria_agree(phi, j, xi, pi) -> CheckReport:
    rep = CheckReport("cocartesian-functor")
    rep.verdicts["elementary"] = is_cocartesian_functor(phi, j, xi, pi)
    rep.verdicts["mate"] = cocart_functor_mate_check(phi, j, xi, pi)
    return rep
