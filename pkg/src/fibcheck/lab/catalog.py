"""Fixed seed categories."""
from __future__ import annotations

from functools import lru_cache

from ..fincat import FinCat, build, validate_category


def poset(name, elements, leq) -> FinCat:
    """Category of a finite poset given by a reflexive, transitive ``leq``."""
    elements = list(elements)
    mors, idx = [], {}
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            if leq(x, y):
                idx[(i, j)] = len(mors)
                mors.append(((x, y), i, j))
    ident = [idx[(i, i)] for i in range(len(elements))]
    return build(name, elements, mors, ident, lambda g, f: idx[(mors[f][1], mors[g][2])])


def chain(n: int) -> FinCat:
    return poset(f"[{n}]", range(n + 1), lambda a, b: a <= b)


def monoid(name, elements, mult) -> FinCat:
    """Delooping of a monoid; ``elements[0]`` is the unit."""
    elements = list(elements)
    idx = {e: i for i, e in enumerate(elements)}
    mors = [(e, 0, 0) for e in elements]
    return build(name, ["*"], mors, [0], lambda g, f: idx[mult(elements[g], elements[f])])


def terminal() -> FinCat:
    return validate_category({"objects": ["*"]}, name="1")


def parallel_pair() -> FinCat:
    return validate_category({"objects": ["0", "1"],
                              "morphisms": [{"id": "a", "src": "0", "dst": "1"},
                                            {"id": "b", "src": "0", "dst": "1"}]},
                             name="parallel")


def walking_iso() -> FinCat:
    return validate_category({"objects": ["0", "1"],
                              "morphisms": [{"id": "s", "src": "0", "dst": "1"},
                                            {"id": "t", "src": "1", "dst": "0"}],
                              "compose": [["t", "s", "id_0"], ["s", "t", "id_1"]]},
                             name="iso")


def commutative_square() -> FinCat:
    return poset("square", ["00", "01", "10", "11"],
                 lambda x, y: x[0] <= y[0] and x[1] <= y[1])


def walking_span() -> FinCat:
    return validate_category({"objects": ["a", "c", "b"],
                              "morphisms": [{"id": "l", "src": "c", "dst": "a"},
                                            {"id": "r", "src": "c", "dst": "b"}]},
                             name="span")


def walking_cospan() -> FinCat:
    return validate_category({"objects": ["a", "c", "b"],
                              "morphisms": [{"id": "l", "src": "a", "dst": "c"},
                                            {"id": "r", "src": "b", "dst": "c"}]},
                             name="cospan")


def monoid_idempotent() -> FinCat:
    return monoid("Bidem", ["1", "e"], lambda x, y: "1" if x == y == "1" else "e")


def monoid_z2() -> FinCat:
    return monoid("BZ2", ["0", "1"], lambda x, y: str((int(x) + int(y)) % 2))


NONCOMM_OBJECTS = ["e00", "e01", "p", "q", "e11"]
NONCOMM_ORDER = {("e00", "e01"), ("e00", "e11"), ("e00", "p"), ("e00", "q"),
                 ("e01", "e11"), ("p", "q"), ("p", "e11"), ("q", "e11")}
# position of each object over [1] x [1]
NONCOMM_OVER = {"e00": (0, 0), "e01": (0, 1), "p": (1, 0), "q": (1, 0), "e11": (1, 1)}


def noncomm_total() -> FinCat:
    """Total category of the separating fixture: bifibers 1, 1, 1, [1]."""
    return poset("noncomm", NONCOMM_OBJECTS,
                 lambda x, y: x == y or (x, y) in NONCOMM_ORDER)


_BUILDERS = {
    "1": terminal,
    "[1]": lambda: chain(1),
    "[2]": lambda: chain(2),
    "[3]": lambda: chain(3),
    "parallel": parallel_pair,
    "iso": walking_iso,
    "square": commutative_square,
    "span": walking_span,
    "cospan": walking_cospan,
    "Bidem": monoid_idempotent,
    "BZ2": monoid_z2,
    "noncomm": noncomm_total,
}


_OVERRIDES: dict = {}


def get(name: str) -> FinCat:
    """Catalog entry by name (shared instance)."""
    if name in _OVERRIDES:
        return _OVERRIDES[name]
    return _built(name)


@lru_cache(maxsize=None)
def _built(name: str) -> FinCat:
    return _BUILDERS[name]()


def fingerprint(C: FinCat):
    """``(objects, morphisms, isomorphisms, idempotents)``; isomorphism
    invariants used to pin the catalog tables."""
    idem = sum(1 for m in range(C.n_mor)
               if C.src[m] == C.dst[m] and C.compose.get((m, m)) == m)
    return (C.n_obj, C.n_mor, len(C.inverses), idem)


# frozen from the unmutated builders; each value is also checkable by hand
FINGERPRINTS = {
    "1": (1, 1, 1, 1), "[1]": (2, 3, 2, 2), "[2]": (3, 6, 3, 3), "[3]": (4, 10, 4, 4),
    "parallel": (2, 4, 2, 2), "iso": (2, 4, 4, 2), "square": (4, 9, 4, 4),
    "span": (3, 5, 3, 3), "cospan": (3, 5, 3, 3), "Bidem": (1, 2, 1, 2), "BZ2": (1, 2, 2, 1),
    "noncomm": (5, 13, 5, 5),
}


def names():
    return list(_BUILDERS)


def base_names():
    """Catalog entries used as bases and seeds (the fixture total excluded)."""
    return [n for n in _BUILDERS if n != "noncomm"]


def seed_catalog():
    return [get(n) for n in names()]
