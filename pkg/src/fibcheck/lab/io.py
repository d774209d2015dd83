"""JSON files for categories, functors and instances.

A category reference is a catalog name, a path to a category file or an
inline category dict.  A functor reference is a path to a functor file, an
inline functor dict or a construction recipe (a JSON list such as
``["cod", ["cat", "[1]"]]``) over the catalog.
"""
from __future__ import annotations

import json
import os

from .. import twosided as ts
from ..errors import DanglingId, NotAFunctor, ValidationError
from ..fincat import FinCat, Functor, category_to_raw, validate_category
from ..sliced import SlicedMap
from . import catalog, sampling


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _resolve(ref, base_dir):
    return ref if os.path.isabs(ref) else os.path.join(base_dir, ref)


def load_category(ref, base_dir=".") -> FinCat:
    if isinstance(ref, dict):
        return validate_category(ref)
    if isinstance(ref, list):
        C = sampling.build(ref)
        if not isinstance(C, FinCat):
            raise ValidationError(f"recipe {ref!r} does not build a category")
        return C
    if not isinstance(ref, str):
        raise ValidationError(f"bad category reference {ref!r}")
    if ref in catalog.names():
        return catalog.get(ref)
    path = _resolve(ref, base_dir)
    if not os.path.exists(path):
        raise ValidationError(f"no catalog entry or file named {ref!r}")
    name = os.path.splitext(os.path.basename(path))[0]
    return validate_category(read_json(path), name=name)


def functor_from_raw(raw: dict, base_dir=".") -> Functor:
    try:
        C = load_category(raw["src"], base_dir)
        D = load_category(raw["dst"], base_dir)
        on_obj = raw["on_objects"]
        on_mor = raw.get("on_morphisms", {})
    except (KeyError, TypeError) as exc:
        raise DanglingId(f"malformed functor description: missing {exc}") from None
    oid = {str(o): i for i, o in enumerate(C.objects)}
    doid = {str(o): i for i, o in enumerate(D.objects)}
    dmid = {str(m): i for i, m in enumerate(D.morphisms)}
    mid = {str(m): i for i, m in enumerate(C.morphisms)}
    for k in on_obj:
        if k not in oid:
            raise DanglingId(f"functor maps unknown object {k!r}")
    for k in on_mor:
        if k not in mid:
            raise DanglingId(f"functor maps unknown morphism {k!r}")
    obj = []
    for o in C.objects:
        tgt = on_obj.get(str(o))
        if tgt is None:
            raise NotAFunctor(f"object {o!r} has no image")
        if str(tgt) not in doid:
            raise DanglingId(f"object image {tgt!r} is not an object of the codomain")
        obj.append(doid[str(tgt)])
    mor = []
    for m, lab in enumerate(C.morphisms):
        tgt = on_mor.get(str(lab))
        if tgt is None:
            if m != C.identity[C.src[m]]:
                raise NotAFunctor(f"morphism {lab!r} has no image")
            mor.append(D.identity[obj[C.src[m]]])
            continue
        if str(tgt) not in dmid:
            raise DanglingId(f"morphism image {tgt!r} is not a morphism of the codomain")
        mor.append(dmid[str(tgt)])
    F = Functor(C, D, obj, mor, name=raw.get("name", ""))
    F.validate()
    return F


def load_functor(ref, base_dir=".") -> Functor:
    if isinstance(ref, dict):
        return functor_from_raw(ref, base_dir)
    if isinstance(ref, list):
        F = sampling.build(ref)
        if not isinstance(F, Functor):
            raise ValidationError(f"recipe {ref!r} does not build a functor")
        return F
    if not isinstance(ref, str):
        raise ValidationError(f"bad functor reference {ref!r}")
    path = _resolve(ref, base_dir)
    if not os.path.exists(path):
        raise ValidationError(f"no functor file {ref!r}")
    return functor_from_raw(read_json(path), os.path.dirname(path))


def functor_to_raw(F: Functor, inline=True) -> dict:
    src = category_to_raw(F.src)
    dst = category_to_raw(F.dst)
    snames = _mor_names(F.src, src)
    dnames = _mor_names(F.dst, dst)
    return {
        "name": F.name,
        "src": src if inline else F.src.name,
        "dst": dst if inline else F.dst.name,
        "on_objects": {src["objects"][x]: dst["objects"][F.obj[x]] for x in range(F.src.n_obj)},
        "on_morphisms": {snames[m]: dnames[F.mor[m]] for m in range(F.src.n_mor)},
    }


def _mor_names(C: FinCat, raw):
    """Morphism names matching ``category_to_raw`` output."""
    names = [None] * C.n_mor
    listed = iter(raw["morphisms"])
    for m in range(C.n_mor):
        if C.is_identity(m) and C.identity[C.src[m]] == m:
            names[m] = f"id_{raw['objects'][C.src[m]]}"
        else:
            names[m] = next(listed)["id"]
    return names


KINDS = {
    "two-sided": ("xi", "pi"),
    "fibration": ("pi",),
    "sliced": ("phi", "xi", "pi"),
}


def load_instance(path):
    """``(kind, object)`` from an instance file."""
    raw = read_json(path)
    base_dir = os.path.dirname(os.path.abspath(path))
    return instance_from_raw(raw, base_dir)


def instance_from_raw(raw, base_dir="."):
    try:
        kind = raw["kind"]
        comps = raw["components"]
    except (KeyError, TypeError):
        raise DanglingId("instance file needs 'kind' and 'components'") from None
    if kind not in KINDS:
        raise ValidationError(f"unknown instance kind {kind!r}")
    missing = [c for c in KINDS[kind] if c not in comps]
    if missing:
        raise DanglingId(f"{kind} instance is missing components {missing}")
    fs = {c: load_functor(comps[c], base_dir) for c in KINDS[kind]}
    if kind == "fibration":
        return kind, fs["pi"]
    if kind == "sliced":
        return kind, SlicedMap(fs["phi"], fs["xi"], fs["pi"])
    return kind, ts.make_instance(fs["xi"], fs["pi"], name=raw.get("name", ""))


def instance_to_raw(kind, obj) -> dict:
    if kind == "fibration":
        comps = {"pi": functor_to_raw(obj)}
    elif kind == "sliced":
        comps = {"phi": functor_to_raw(obj.phi), "xi": functor_to_raw(obj.xi),
                 "pi": functor_to_raw(obj.pi)}
    else:
        comps = {"xi": functor_to_raw(obj.xi), "pi": functor_to_raw(obj.pi)}
    return {"kind": kind, "components": comps}


def load_any(path):
    """Category, functor or instance file, told apart by their keys."""
    raw = read_json(path)
    base_dir = os.path.dirname(os.path.abspath(path))
    if not isinstance(raw, dict):
        raise ValidationError("top-level JSON value must be an object")
    if "kind" in raw:
        return "instance", instance_from_raw(raw, base_dir)
    if "on_objects" in raw:
        return "functor", functor_from_raw(raw, base_dir)
    name = os.path.splitext(os.path.basename(path))[0]
    return "category", validate_category(raw, name=name)
