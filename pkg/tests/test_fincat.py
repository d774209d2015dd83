import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fibcheck import fincat as fc
from fibcheck.errors import (DanglingId, MissingComposite, NonAssociative, NotAFunctor,
                             SizeCapExceeded, UnitLawViolation)
from fibcheck.lab import catalog, sampling
from fibcheck.search import enumerate_functors, exponential, isomorphic

# (objects, morphisms, arrow-category morphisms, endofunctors), frozen from
# brute-force enumeration
SIZES = {
    "1": (1, 1, 1, 1), "[1]": (2, 3, 6, 3), "[2]": (3, 6, 20, 10), "[3]": (4, 10, 50, 35),
    "parallel": (2, 4, 10, 6), "iso": (2, 4, 16, 4), "square": (4, 9, 36, 36),
    "span": (3, 5, 11, 11), "cospan": (3, 5, 11, 11), "Bidem": (1, 2, 10, 2), "BZ2": (1, 2, 8, 2),
}


def commuting_squares(C):
    """Independent count of morphisms of the arrow category."""
    n = 0
    for f, g in itertools.product(range(C.n_mor), repeat=2):
        for a in C.homset(C.src[f], C.src[g]):
            for b in C.homset(C.dst[f], C.dst[g]):
                n += C.compose[(g, a)] == C.compose[(b, f)]
    return n


@pytest.mark.parametrize("name", list(SIZES))
def test_catalog_sizes(name):
    C = catalog.get(name)
    n_obj, n_mor, n_sq, n_end = SIZES[name]
    assert (C.n_obj, C.n_mor) == (n_obj, n_mor)
    A, dom, cod = fc.arrow_category(C)
    assert A.n_obj == C.n_mor and A.n_mor == n_sq == commuting_squares(C)
    assert len(enumerate_functors(C, C)) == n_end


def test_catalog_entries_validate(base):
    assert base.law_violations() == []
    again = fc.validate_category(fc.category_to_raw(base))
    assert isomorphic(again, base)


def test_chain_is_triangular():
    for n in range(4):
        C = catalog.chain(n)
        assert C.n_mor == (n + 1) * (n + 2) // 2


def test_validation_errors():
    objs = {"objects": ["x", "y"]}
    with pytest.raises(DanglingId):
        fc.validate_category({**objs, "morphisms": [{"id": "f", "src": "x", "dst": "z"}]})
    with pytest.raises(MissingComposite):
        fc.validate_category({**objs, "morphisms": [{"id": "f", "src": "x", "dst": "y"},
                                                    {"id": "g", "src": "y", "dst": "x"}]})
    with pytest.raises(UnitLawViolation):
        fc.validate_category({"objects": ["x"], "morphisms": [{"id": "e", "src": "x", "dst": "x"}],
                              "compose": [["e", "id_x", "id_x"], ["e", "e", "e"]]})
    # e.e = id and e.e = e at once
    with pytest.raises(NonAssociative):
        fc.validate_category({"objects": ["x"], "morphisms": [{"id": "e", "src": "x", "dst": "x"}],
                              "compose": [["e", "e", "e"], ["e", "e", "id_x"]]})


def test_nonassociative_table_rejected():
    # e.e = f, f.e = e, e.f = f: (e.e).e = f.e = e but e.(e.e) = e.f = f
    raw = {"objects": ["x"],
           "morphisms": [{"id": "e", "src": "x", "dst": "x"}, {"id": "f", "src": "x", "dst": "x"}],
           "compose": [["e", "e", "f"], ["f", "e", "e"], ["e", "f", "f"], ["f", "f", "f"]]}
    with pytest.raises(NonAssociative):
        fc.validate_category(raw)


def test_functor_validation():
    I, iso = catalog.get("[1]"), catalog.get("iso")
    with pytest.raises(NotAFunctor):
        fc.Functor(I, iso, [0, 1], [0, 3, 3]).validate()


def test_caps():
    with fc.caps(max_objects=2):
        with pytest.raises(SizeCapExceeded):
            fc.check_input_size(catalog.get("[2]"))
    fc.check_input_size(catalog.get("[2]"))


def test_op_and_products(base):
    assert base.op.op.same_tables(base)
    P, p1, p2 = fc.product(base, catalog.get("[1]"))
    assert (P.n_obj, P.n_mor) == (2 * base.n_obj, 3 * base.n_mor)
    assert p1.validate() and p2.validate()


def test_exponential_of_chains():
    E, _ = exponential(catalog.get("[2]"), catalog.get("[1]"))[:2]
    # monotone maps [2] -> [1]: 4, ordered pointwise: the chain [3]
    assert isomorphic(E, catalog.get("[3]"))


def test_comma_counts_triples(base):
    I = fc.identity_functor(base)
    K, _, _, _ = fc.comma(I, I)
    assert K.n_obj == base.n_mor
    assert isomorphic(K, fc.arrow_category(base)[0])


def test_pullback_over_point():
    C, D = catalog.get("[1]"), catalog.get("span")
    P, _, _ = fc.pullback(fc.bang(C), fc.bang(D))
    assert isomorphic(P, fc.product(C, D)[0])


def test_isofibration_examples():
    iso = catalog.get("iso")
    # the inclusion of a point into the walking iso is not an isofibration
    assert not fc.is_isofibration(fc.pick(iso, 0))
    assert fc.is_isofibration(fc.bang(iso))
    assert fc.is_equivalence(fc.pick(iso, 0))


recipes = st.sampled_from(["1", "[1]", "[2]", "iso", "span", "cospan", "parallel", "Bidem", "BZ2"])


@settings(max_examples=40, deadline=None)
@given(recipes, recipes, st.sampled_from(["product", "op", "arrow"]))
def test_constructions_satisfy_laws(a, b, op):
    r = {"product": ["product", ["cat", a], ["cat", b]], "op": ["op", ["cat", a]],
         "arrow": ["arrow", ["cat", a]]}[op]
    C = sampling.build(r)
    assert C.law_violations() == []
