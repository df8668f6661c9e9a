"""Named example groups. ``resolve("bs(2,3)")`` builds a model from its name."""

from __future__ import annotations

import re
from typing import Callable

from .amalgam import Amalgam, amalgam_from_json
from .hnn import HnnExtension
from .models import FreeAbelianGroup, FreeGroup, GroupModel, InfiniteDihedral


class CatalogError(KeyError):
    def __str__(self):
        return str(self.args[0])


def dihedral_inf() -> InfiniteDihedral:
    """<x, y | x^2, x y x y>."""
    return InfiniteDihedral()


def klein_bottle() -> HnnExtension:
    """<g, t | t^-1 g t = g^-1>, an HNN extension of Z where both sides are everything."""
    base = FreeAbelianGroup(1, ("g",))
    return HnnExtension(base, [(1,)], [(-1,)])


def sl2z_amalgam() -> Amalgam:
    """Z/4 *_{Z/2} Z/6 with a^2 = b^3."""
    return amalgam_from_json({"factor1": 4, "factor2": 6, "amalgam": [["a^2", "b^3"]]})


def psl2z() -> Amalgam:
    """Z/2 * Z/3."""
    return amalgam_from_json({"factor1": 2, "factor2": 3, "amalgam": []})


def dihedral_amalgam() -> Amalgam:
    """Z/2 * Z/2, isomorphic to the infinite dihedral group (both indices are 2)."""
    return amalgam_from_json({"factor1": 2, "factor2": 2, "amalgam": []})


def z4_z2_z4() -> Amalgam:
    """Z/4 *_{Z/2} Z/4: both indices 2, so the centre formula does not apply."""
    return amalgam_from_json({"factor1": 4, "factor2": 4, "amalgam": [["a^2", "b^2"]]})


def bs(m: int, n: int) -> HnnExtension:
    """Baumslag-Solitar <a, t | t^-1 a^m t = a^n>."""
    if m == 0 or n == 0:
        raise ValueError("BS(m, n) needs nonzero m and n")
    return HnnExtension(FreeAbelianGroup(1, ("a",)), [(m,)], [(n,)])


def hnn_flip() -> HnnExtension:
    """<a, t | t^-1 a^2 t = a^-2>."""
    return HnnExtension(FreeAbelianGroup(1, ("a",)), [(2,)], [(-2,)])


def free(n: int) -> FreeGroup:
    return FreeGroup(n)


def zn(n: int) -> FreeAbelianGroup:
    return FreeAbelianGroup(n)


CATALOG: dict[str, Callable[..., GroupModel]] = {
    "dihedral_inf": dihedral_inf,
    "klein_bottle": klein_bottle,
    "sl2z_amalgam": sl2z_amalgam,
    "psl2z": psl2z,
    "bs": bs,
    "hnn_flip": hnn_flip,
    "free": free,
    "zn": zn,
    "z4_z2_z4": z4_z2_z4,
    "dihedral_amalgam": dihedral_amalgam,
}

_CALL = re.compile(r"^\s*([a-z_][a-z0-9_]*)\s*(?:\(\s*([-\d\s,]*)\))?\s*$")


def resolve(name: str) -> GroupModel:
    """Build a catalog model from ``name`` or ``name(args)``, e.g. ``free(2)``."""
    m = _CALL.match(name)
    if not m or m.group(1) not in CATALOG:
        raise CatalogError(f"unknown group {name!r}; known: {', '.join(sorted(CATALOG))}")
    args = [int(a) for a in m.group(2).split(",")] if m.group(2) and m.group(2).strip() else []
    try:
        return CATALOG[m.group(1)](*args)
    except TypeError as e:
        raise CatalogError(f"bad arguments for {m.group(1)}: {e}") from None


# named automorphisms: group name -> list of (label, images, inverse_images)
AUTOMORPHISMS: dict[str, list[tuple[str, dict, dict]]] = {
    "dihedral_inf": [
        ("x->xy", {"x": "x*y", "y": "y"}, {"x": "x*y^-1", "y": "y"}),
        ("identity", {"x": "x", "y": "y"}, {"x": "x", "y": "y"}),
        ("inner by y", {"x": "y*x*y^-1", "y": "y"}, {"x": "y^-1*x*y", "y": "y"}),
        ("inner by x", {"x": "x", "y": "y^-1"}, {"x": "x", "y": "y^-1"}),
    ],
    "klein_bottle": [
        ("t->gt", {"g": "g", "t": "g*t"}, {"g": "g", "t": "g^-1*t"}),
        ("inner by t", {"g": "g^-1", "t": "t"}, {"g": "g^-1", "t": "t"}),
        ("inner by g", {"g": "g", "t": "g^2*t"}, {"g": "g", "t": "g^-2*t"}),
    ],
    "sl2z_amalgam": [
        ("identity", {"a": "a", "b": "b"}, {"a": "a", "b": "b"}),
        ("inner by a", {"a": "a", "b": "a*b*a^-1"}, {"a": "a", "b": "a^-1*b*a"}),
    ],
    "hnn_flip": [
        ("inner by a^2", {"a": "a", "t": "a^2*t*a^-2"}, {"a": "a", "t": "a^-2*t*a^2"}),
    ],
    "zn(2)": [
        ("swap", {"x": "y", "y": "x"}, {"x": "y", "y": "x"}),
    ],
}


def automorphisms(name: str):
    from .autos import validate_automorphism
    m = resolve(name)
    return m, [(label, validate_automorphism(m, im, inv)) for label, im, inv in AUTOMORPHISMS[name]]
