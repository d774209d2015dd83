"""Equivalences under pullback and products.

Strict pullbacks only compute homotopy pullbacks when one leg is an
isofibration, so every check here requires that side condition and raises
PreconditionFailed otherwise.
"""
from __future__ import annotations

from .errors import PreconditionFailed
from .fincat import (Functor, is_equivalence, is_fibered_equivalence, is_isofibration,
                     pullback, pullback_mediator)
from .sliced import _fold_functors, _fold_products, sliced_product


def right_properness_check(k: Functor, j: Functor) -> bool:
    """The pullback of an isofibration equivalence ``k: B -> A`` along
    ``j: C -> A`` is an equivalence."""
    if not (is_isofibration(k) and is_equivalence(k)):
        raise PreconditionFailed("k must be an equivalence and an isofibration")
    _, p1, _ = pullback(j, k)
    return is_equivalence(p1)


def homotopy_invariance_check(g: Functor, f: Functor, g2: Functor, f2: Functor,
                              r: Functor, p: Functor, q: Functor) -> bool:
    """A map of cospans ``C -> A <- B`` to ``C' -> A' <- B'`` by
    equivalences induces an equivalence of pullbacks.

    Needs f and f2 to be isofibrations and both squares to commute strictly.
    """
    if not (is_isofibration(f) and is_isofibration(f2)):
        raise PreconditionFailed("right legs must be isofibrations")
    if not all(is_equivalence(x) for x in (r, p, q)):
        raise PreconditionFailed("vertical maps must be equivalences")
    if not (g.then(p).same_as(r.then(g2)) and f.then(p).same_as(q.then(f2))):
        raise PreconditionFailed("squares do not commute")
    P, c, b = pullback(g, f)
    P2, _, _ = pullback(g2, f2)
    return is_equivalence(pullback_mediator(P2, c.then(r), b.then(q)))


def product_fibered_equivalence_check(triples) -> bool:
    """``(phi_i, pE_i, pF_i)`` fibered equivalences give a fibered
    equivalence of products over the product of the bases."""
    triples = list(triples)
    for phi, pE, pF in triples:
        if not is_fibered_equivalence(phi, pE, pF):
            raise PreconditionFailed("inputs must be fibered equivalences")
    E, echain = _fold_products([t[0].src for t in triples])
    F, fchain = _fold_products([t[0].dst for t in triples])
    B, bchain = _fold_products([t[1].dst for t in triples])
    phi = _fold_functors([t[0] for t in triples], echain, fchain)
    pE = _fold_functors([t[1] for t in triples], echain, bchain)
    pF = _fold_functors([t[2] for t in triples], fchain, bchain)
    return is_fibered_equivalence(phi, pE, pF)


def sliced_product_fibered_equivalence_check(triples) -> bool:
    """Same over a common base, using fiberwise products; the projections
    must be isofibrations."""
    triples = list(triples)
    for phi, pE, pF in triples:
        if not is_fibered_equivalence(phi, pE, pF):
            raise PreconditionFailed("inputs must be fibered equivalences")
        if not (is_isofibration(pE) and is_isofibration(pF)):
            raise PreconditionFailed("projections must be isofibrations")
    E, pE, fE = sliced_product([t[1] for t in triples])
    F, pF, fF = sliced_product([t[2] for t in triples])
    idx_o = {tuple(f.obj[y] for f in fF): y for y in range(F.n_obj)}
    idx_m = {tuple(f.mor[y] for f in fF): y for y in range(F.n_mor)}
    obj = [idx_o[tuple(t[0].obj[f.obj[x]] for t, f in zip(triples, fE))] for x in range(E.n_obj)]
    mor = [idx_m[tuple(t[0].mor[f.mor[x]] for t, f in zip(triples, fE))] for x in range(E.n_mor)]
    return is_fibered_equivalence(Functor(E, F, obj, mor, name="sliced-prod"), pE, pF)
