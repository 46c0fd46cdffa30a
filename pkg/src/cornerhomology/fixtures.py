"""Built-in example automata and categories used by the CLI and the tests."""

from __future__ import annotations

import json

from .config import Config, default_config
from .molecule import (
    OmegaCategory,
    build_free_category,
    build_In,
    build_presented,
    counterexample_category,
)
from .precub import PrecubicalSet, parse_precubical, standard_cube, serialize

# the two-branch automaton: u,v one branch, w,x the other, from state s
FIG1_JSON = json.dumps({
    "cubes": [
        {"id": "s", "dim": 0, "faces": {}},
        {"id": "a", "dim": 0, "faces": {}},
        {"id": "b", "dim": 0, "faces": {}},
        {"id": "c", "dim": 0, "faces": {}},
        {"id": "d", "dim": 0, "faces": {}},
        {"id": "u", "dim": 1, "faces": {"d1-": "s", "d1+": "a"}},
        {"id": "v", "dim": 1, "faces": {"d1-": "a", "d1+": "b"}},
        {"id": "w", "dim": 1, "faces": {"d1-": "s", "d1+": "c"}},
        {"id": "x", "dim": 1, "faces": {"d1-": "c", "d1+": "d"}},
    ]
})


def fig1() -> PrecubicalSet:
    return parse_precubical(FIG1_JSON)


def filled_square() -> PrecubicalSet:
    return standard_cube(2)


def filled_cube3() -> PrecubicalSet:
    return standard_cube(3)


def builtin_category(name: str, cfg: Config | None = None) -> OmegaCategory:
    """Resolve a builtin:<name> category: 2_p, G_p, I_n, fig1, square,
    cube3, counterexample."""
    cfg = cfg or default_config()
    if name.startswith("2_"):
        return build_presented("2_p", int(name[2:]), cfg)
    if name.startswith("G_"):
        return build_presented("G_p", int(name[2:]), cfg)
    if name.startswith("I_"):
        return build_In(int(name[2:]), cfg)
    if name == "fig1":
        return build_free_category(fig1(), cfg)
    if name == "square":
        return build_free_category(filled_square(), cfg)
    if name == "cube3":
        return build_free_category(filled_cube3(), cfg)
    if name == "counterexample":
        return counterexample_category()
    raise KeyError(f"unknown builtin {name!r}")


def builtin_json(name: str) -> str:
    """Wire-format document for the precubical builtins."""
    if name == "fig1":
        return FIG1_JSON
    if name == "square":
        return serialize(filled_square())
    if name == "cube3":
        return serialize(filled_cube3())
    raise KeyError(f"no JSON form for builtin {name!r}")
