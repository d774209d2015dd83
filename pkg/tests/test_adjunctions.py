import pytest

from fibcheck import fincat as fc
from fibcheck.adjunctions import (check_adjunction, compute_mate, fibered_adjunction_criteria_agree,
                                  find_fibered_left_adjoint, find_left_adjoint, find_right_adjoint,
                                  has_lari, is_natural_iso)
from fibcheck.errors import BoundaryMismatch, NotOverBase
from fibcheck.fibrations import transport_adjunction, transport_map
from fibcheck.fincat import NatTrans, identity_functor
from fibcheck.lab import catalog

# bang has a left adjoint iff there is an initial object, a right one iff terminal
EXTREMA = {"[1]": (True, True), "[2]": (True, True), "span": (True, False),
           "cospan": (False, True), "iso": (True, True), "parallel": (False, False)}


@pytest.mark.parametrize("name", list(EXTREMA))
def test_adjoints_of_bang(name):
    C = catalog.get(name)
    inits, terms = fc.extremal_objects(C)
    left, right = EXTREMA[name]
    assert (bool(inits), bool(terms)) == (left, right)
    L = find_left_adjoint(fc.bang(C))
    assert (L is not None) == left
    assert (find_right_adjoint(fc.bang(C)) is not None) == right
    if L is not None:
        assert check_adjunction(L)
        assert L.left.obj[0] in inits
        assert has_lari(fc.bang(C)) is not None


def test_adjunction_op_is_adjunction():
    adj = find_left_adjoint(fc.bang(catalog.get("[2]")))
    assert check_adjunction(adj.op())


def test_identity_mate_is_identity():
    C = catalog.get("[2]")
    adj = find_left_adjoint(fc.bang(C))
    k, m = identity_functor(adj.left.src), identity_functor(C)
    alpha = NatTrans(adj.left, adj.left, [C.identity[x] for x in adj.left.obj])
    mate = compute_mate(k, m, alpha, adj, adj)
    assert is_natural_iso(mate)
    assert all(mate.src.dst.is_identity(c) for c in mate.comp)


def test_mate_boundary_check():
    adj = find_left_adjoint(fc.bang(catalog.get("[1]")))
    other = find_left_adjoint(fc.bang(catalog.get("[2]")))
    k = identity_functor(adj.left.src)
    with pytest.raises(BoundaryMismatch):
        compute_mate(k, identity_functor(catalog.get("[1]")),
                     NatTrans(adj.left, adj.left, [0]), adj, other)


def test_transport_adjunctions_fibered(base):
    _, _, cod = fc.arrow_category(base)
    iota, kcod = transport_map(cod)
    fa = transport_adjunction(cod)
    assert fa is not None and fa.is_valid()
    rep = fibered_adjunction_criteria_agree(iota, fa.adj.left, cod, kcod)
    assert rep.agree and rep.all_true


def test_fibered_adjunction_negative():
    C = catalog.get("[1]")
    one = catalog.get("1")
    # the top element is a right, not a left, adjoint section of bang
    top = fc.pick(C, 1)
    rep = fibered_adjunction_criteria_agree(fc.bang(C), top, fc.bang(C), identity_functor(one))
    assert rep.agree and rep.verdict is False


def test_not_over_base():
    C = catalog.get("[1]")
    const0 = fc.bang(C).then(fc.pick(C, 0))
    with pytest.raises(NotOverBase):
        find_fibered_left_adjoint(identity_functor(C), identity_functor(C), const0)
