import pytest

from fibcheck import fincat as fc
from fibcheck.fibrations import (cartesian_arrows, chevalley_criteria_agree, cocart_functor_criteria_agree,
                                 cocartesian_arrows, is_cartesian_fibration, is_cocartesian_fibration,
                                 is_cocartesian_functor, is_covariant)
from fibcheck.lab import catalog

# (dom cocartesian, cod cartesian); cod is always a cocartesian fibration
ARROW_FIBRATIONS = {
    "1": (True, True), "[1]": (True, True), "[2]": (True, True), "[3]": (True, True),
    "parallel": (False, False), "iso": (True, True), "square": (True, True),
    "span": (False, True), "cospan": (True, False), "Bidem": (False, False), "BZ2": (True, True),
}


def brute_cocartesian(pi, f):
    """Unique factorization through f over every factorization in the base."""
    E, B = pi.src, pi.dst
    for h in E.out[E.src[f]]:
        for w in B.homset(pi.obj[E.dst[f]], pi.obj[E.dst[h]]):
            if B.compose[(w, pi.mor[f])] != pi.mor[h]:
                continue
            fills = [g for g in E.homset(E.dst[f], E.dst[h])
                     if pi.mor[g] == w and E.compose[(g, f)] == h]
            if len(fills) != 1:
                return False
    return True


@pytest.mark.parametrize("name", list(ARROW_FIBRATIONS))
def test_arrow_fibrations(name):
    C = catalog.get(name)
    _, dom, cod = fc.arrow_category(C)
    assert is_cocartesian_fibration(cod)
    assert (is_cocartesian_fibration(dom), is_cartesian_fibration(cod)) == ARROW_FIBRATIONS[name]
    # dom is always cartesian
    assert is_cartesian_fibration(dom)


def test_cocartesian_arrows_match_brute_force(base):
    _, dom, cod = fc.arrow_category(base)
    for pi in (dom, cod):
        expected = {f for f in range(pi.src.n_mor) if brute_cocartesian(pi, f)}
        assert cocartesian_arrows(pi) == expected


def test_cod_cocartesian_count():
    # over [1]: the three identities and the square (id_0 -> u) with identity top
    _, _, cod = fc.arrow_category(catalog.get("[1]"))
    assert len(cocartesian_arrows(cod)) == 4
    assert len(cartesian_arrows(cod)) == 5


def test_chevalley_uniform_on_catalog(base):
    _, dom, cod = fc.arrow_category(base)
    for pi in (dom, cod, dom.op, fc.bang(base), fc.identity_functor(base)):
        rep = chevalley_criteria_agree(pi)
        assert rep.agree, rep


def test_chevalley_negative_has_witness():
    rep = chevalley_criteria_agree(fc.arrow_category(catalog.get("parallel"))[1])
    assert rep.verdict is False
    assert "missing-lift" in rep.witnesses


def test_non_isofibration_divergence():
    """A point of the walking iso is an equivalence, not an isofibration, and
    the strict criteria split on it."""
    p = fc.pick(catalog.get("iso"), 0)
    rep = chevalley_criteria_agree(p)
    assert not rep.agree
    assert rep.verdicts == {"elementary": False, "lari": True, "transport": False}


def test_covariance():
    for name, expected in [("1", True), ("iso", True), ("BZ2", True), ("[1]", False)]:
        _, dom, _ = fc.arrow_category(catalog.get(name))
        assert is_covariant(dom) is expected


def test_cocartesian_functor_square():
    C = catalog.get("[2]")
    _, _, cod = fc.arrow_category(C)
    j = fc.pick(C, 0)
    P, top, left = fc.pullback(cod, j)
    assert is_cocartesian_functor(top, j, left, cod)
    rep = cocart_functor_criteria_agree(top, j, left, cod)
    assert rep.agree and rep.all_true
