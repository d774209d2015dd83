import pytest

from fibcheck import fincat as fc
from fibcheck import twosided as ts
from fibcheck.errors import NoInitial, NoTerminal, PreconditionFailed
from fibcheck.lab import catalog
from fibcheck.yoneda import (dependent_yoneda_check, enumerate_sections, is_ts_cartesian_section,
                             yon, yoneda_check)

WITH_EXTREMA = ["1", "[1]", "[2]", "[3]", "iso", "square", "BZ2", "Bidem"]


@pytest.mark.parametrize("name", WITH_EXTREMA)
def test_yoneda_on_hom_spans(name):
    h = ts.hom_span(catalog.get(name))
    inits, terms = fc.extremal_objects(h.A)
    if not inits or not fc.extremal_objects(h.B)[1]:
        with pytest.raises((NoInitial, NoTerminal)):
            yoneda_check(h)
        return
    assert yoneda_check(h).all_true


def test_missing_extremal_objects():
    h = ts.hom_span(catalog.get("parallel"))
    with pytest.raises(NoInitial):
        yoneda_check(h)


def test_requires_two_sided():
    with pytest.raises(PreconditionFailed):
        yoneda_check(ts.noncomm_instance())


def test_dependent_yoneda_everywhere(base):
    h = ts.hom_span(base)
    for a in range(base.n_obj):
        for b in range(base.n_obj):
            assert dependent_yoneda_check(h, a, b).all_true


def test_yon_evaluates_back():
    I = catalog.get("[1]")
    R, _ = ts.span_compose(ts.hom_span(I), ts.hom_span(I))
    rep = yoneda_check(R)
    assert rep.all_true
    inits, _ = fc.extremal_objects(R.A)
    _, terms = fc.extremal_objects(R.B)
    a, b = inits[0], terms[0]
    for d in ts.bifiber_objects(R, a, b):
        s = yon(R, a, b, d)
        assert s.at(a, b) == d
        assert is_ts_cartesian_section(R, s)


def test_sections_of_identity_instance():
    inst = ts.identity_instance(catalog.get("[1]"), catalog.get("[1]"))
    secs = enumerate_sections(inst)
    assert len(secs) == 1
    assert is_ts_cartesian_section(inst, secs[0])
    assert yoneda_check(inst).all_true


def test_vacuous_bifiber_note():
    # (initial, terminal) = (0, 1) in hom([1]) has the empty bifiber hom(1, 0)
    rep = yoneda_check(ts.hom_span(catalog.get("[1]")))
    assert any("bifiber objects=0" in n for n in rep.notes)
