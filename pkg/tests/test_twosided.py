import pytest
from hypothesis import given, settings, strategies as st

from fibcheck import fincat as fc
from fibcheck import twosided as ts
from fibcheck.errors import BaseMismatch, SquareMismatch, UnknownObject
from fibcheck.lab import catalog, sampling
from fibcheck.search import exponential, isomorphic


def test_hom_span_is_two_sided_discrete(base):
    h = ts.hom_span(base)
    rep = ts.two_sided_criteria_agree(h)
    assert rep.agree and rep.all_true, rep
    assert ts.is_two_sided_discrete(h)
    disc = ts.discrete_criteria_agree(h)
    assert disc.agree and disc.all_true and ts.discrete_corollaries_hold(disc)


def test_hom_span_bifibers_are_homsets(base):
    h = ts.hom_span(base)
    for a in range(base.n_obj):
        for b in range(base.n_obj):
            # legs are (cod, dom): the bifiber over (a, b) is hom(b, a)
            assert len(ts.bifiber_objects(h, a, b)) == len(base.homset(b, a))


def test_identity_instance(base):
    inst = ts.identity_instance(base, catalog.get("[1]"))
    assert ts.two_sided_criteria_agree(inst).all_true
    assert ts.cocart_on_left_criteria_agree(inst).all_true


def test_noncomm_separates():
    inst = ts.noncomm_instance()
    assert ts.cocart_on_left_criteria_agree(inst).all_true
    assert ts.cart_on_right_criteria_agree(inst).all_true
    rep = ts.two_sided_criteria_agree(inst)
    assert rep.agree and rep.verdict is False
    assert ts.commutation_failure(inst) == (1, 1, 1, 8)
    sizes = sorted(len(ts.bifiber_objects(inst, a, b)) for a in range(2) for b in range(2))
    assert sizes == [1, 1, 1, 2]


def test_commutation_identities_hold_without_invertibility():
    inst = ts.noncomm_instance()
    for u, v, e in ts.triples(inst):
        d = ts.commutation_data(inst, u, v, e)
        E = inst.total
        assert d["h"] == d["h'"]
        assert E.compose[(d["f'"], d["h"])] == d["g"]
        assert E.compose[(d["h"], d["f"])] == d["g'"]


def test_swapped_legs_fail_everywhere():
    Ar, dom, cod = fc.arrow_category(catalog.get("parallel"))
    inst = ts.make_instance(dom, cod)
    assert ts.cocart_on_left_criteria_agree(inst).verdict is False
    assert ts.two_sided_criteria_agree(inst).verdict is False


def test_composite_of_hom_spans():
    I = catalog.get("[1]")
    R, lifts_ok = ts.span_compose(ts.hom_span(I), ts.hom_span(I))
    assert lifts_ok is True
    assert (R.total.n_obj, R.total.n_mor) == (4, 10)
    assert isomorphic(R.total, exponential(catalog.get("[2]"), I)[0])
    bf = ts.bifiber(R, 1, 0)
    assert bf.n_obj == 2 and not bf.is_groupoid()
    assert ts.is_two_sided(R) and not ts.is_two_sided_discrete(R)
    assert ts.two_sided_criteria_agree(R).all_true


def test_span_compose_mismatch():
    with pytest.raises(BaseMismatch):
        ts.span_compose(ts.hom_span(catalog.get("[1]")), ts.hom_span(catalog.get("[2]")))


def test_bifiber_unknown_object():
    with pytest.raises(UnknownObject):
        ts.bifiber(ts.hom_span(catalog.get("[1]")), 5, 0)


def test_free_two_sided():
    h = ts.hom_span(catalog.get("[1]"))
    free = ts.free_two_sided(h)
    assert (free.total.n_obj, free.total.n_mor) == (5, 15)
    assert ts.is_two_sided(free)
    assert ts.free_bifibers_match(h, free)


def test_products_and_cotensors():
    h = ts.hom_span(catalog.get("[1]"))
    P, maps = ts.two_sided_product([h, h])
    assert (P.total.n_obj, P.total.n_mor) == (9, 36)
    assert ts.is_two_sided(P) and all(ts.is_two_sided_functor(m) for m in maps)
    S, smaps = ts.two_sided_sliced_product([h, h])
    assert ts.is_two_sided(S) and all(ts.is_two_sided_functor(m) for m in smaps)
    C = ts.two_sided_cotensor(catalog.get("[1]"), h)
    assert (C.total.n_obj, C.total.n_mor) == (6, 20)
    assert ts.is_two_sided(C)
    assert isomorphic(ts.two_sided_cotensor(catalog.get("1"), h).total, h.total)
    assert ts.leibniz_cotensor_functor_check(fc.pick(catalog.get("[1]"), 1), ts.identity_map(h))


def test_pullback_cone_is_two_sided_functor():
    A = catalog.get("[2]")
    h = ts.hom_span(A)
    pb, cone = ts.pullback_two_sided(h, fc.pick(A, 0), fc.identity_functor(A))
    assert ts.is_two_sided(pb) and ts.is_two_sided_functor(cone)
    inst, p1, p2 = ts.pullback_cone(cone, ts.identity_map(h))
    assert ts.is_two_sided(inst)
    assert ts.is_two_sided_functor(p1) and ts.is_two_sided_functor(p2)


def test_whisker():
    A = catalog.get("span")
    w = ts.whisker_two_sided(ts.hom_span(A), fc.bang(A), fc.bang(A))
    assert ts.is_two_sided(w)


def test_square_mismatch():
    h = ts.hom_span(catalog.get("[1]"))
    I = catalog.get("[1]")
    bad = ts.TwoSidedMap(h, h, fc.identity_functor(h.total), fc.bang(I).then(fc.pick(I, 0)),
                         fc.identity_functor(I))
    with pytest.raises(SquareMismatch):
        ts.is_two_sided_functor(bad)


def test_comma_spans_discrete():
    cos = catalog.get("cospan")
    for x in range(3):
        for y in range(3):
            assert ts.is_two_sided_discrete(ts.comma_span(fc.pick(cos, x), fc.pick(cos, y)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_sampled_two_sided_criteria_agree(seed):
    (_, inst), = sampling.samples(seed, "two-sided", 1)
    assert ts.two_sided_criteria_agree(inst).agree
    assert ts.cocart_on_left_criteria_agree(inst).agree
    rep = ts.discrete_criteria_agree(inst)
    assert rep.agree
    if rep.verdict:
        assert ts.discrete_corollaries_hold(rep) and ts.is_two_sided(inst)
