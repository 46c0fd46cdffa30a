"""Finite precubical sets: data model, JSON wire format, validation.

A precubical set is a graded family of cubes with face maps d_i^- / d_i^+
(1-based i) satisfying the face-commutation identity; it is the input model
of a higher dimensional automaton.  The classic baseline chain complexes
(one per sign) live here as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DanglingFace, DimensionMismatch, InvalidInput, ParseError
from .linalg import ChainComplex

SIGNS = ("-", "+")


@dataclass(frozen=True)
class Cube:
    dim: int
    faces: dict  # (i, sign) -> CubeId


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple

    def as_json(self):
        return {
            "ok": self.ok,
            "violations": [
                {"rule": v.rule, "cube": v.cube, "indices": list(v.indices),
                 "message": v.message}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class Violation:
    rule: str
    cube: str
    indices: tuple
    message: str


class PrecubicalSet:
    """Immutable cube table; all queries are pure."""

    def __init__(self, cubes: dict[str, Cube]):
        self.cubes = dict(cubes)
        self._by_dim: dict[int, list[str]] = {}
        for cid in sorted(cubes):
            self._by_dim.setdefault(cubes[cid].dim, []).append(cid)

    def dim(self, cid: str) -> int:
        return self.cubes[cid].dim

    def face(self, cid: str, i: int, sign: str) -> str:
        return self.cubes[cid].faces[(i, sign)]

    def by_dim(self, n: int) -> list[str]:
        return self._by_dim.get(n, [])

    @property
    def max_dim(self) -> int:
        return max(self._by_dim) if self._by_dim else 0

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(sorted(self.cubes))


_FACE_KEY_OK = None


def _parse_face_key(key: str):
    if len(key) >= 3 and key[0] == "d" and key[-1] in SIGNS:
        try:
            i = int(key[1:-1])
        except ValueError:
            return None
        if i >= 1:
            return i, key[-1]
    return None


def parse_precubical(text: str) -> PrecubicalSet:
    """Parse the JSON wire format; reject dangling or mis-dimensioned faces."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("cubes"), list):
        raise ParseError('document must be an object with a "cubes" array')
    cubes: dict[str, Cube] = {}
    for entry in doc["cubes"]:
        if not isinstance(entry, dict):
            raise ParseError("cube entries must be objects")
        cid = entry.get("id")
        if not isinstance(cid, str) or not cid:
            raise ParseError("cube id must be a non-empty string")
        if cid in cubes:
            raise ParseError(f"duplicate cube id {cid!r}")
        dim = entry.get("dim")
        if not isinstance(dim, int) or dim < 0:
            raise ParseError(f"cube {cid!r}: dim must be a natural number")
        raw = entry.get("faces", {})
        if not isinstance(raw, dict):
            raise ParseError(f"cube {cid!r}: faces must be an object")
        faces = {}
        for key, tgt in raw.items():
            parsed = _parse_face_key(key)
            if parsed is None:
                raise ParseError(f"cube {cid!r}: bad face key {key!r}")
            i, sign = parsed
            if i > dim:
                raise ParseError(f"cube {cid!r}: face index {i} exceeds dim {dim}")
            faces[(i, sign)] = tgt
        expected = {(i, s) for i in range(1, dim + 1) for s in SIGNS}
        if set(faces) != expected:
            raise ParseError(f"cube {cid!r}: needs exactly the faces d1..d{dim} with both signs")
        cubes[cid] = Cube(dim, faces)
    for cid, cube in cubes.items():
        for (i, sign), tgt in cube.faces.items():
            if tgt not in cubes:
                raise DanglingFace(f"cube {cid!r}: face d{i}{sign} -> missing id {tgt!r}")
            if cubes[tgt].dim != cube.dim - 1:
                raise DimensionMismatch(
                    f"cube {cid!r}: face d{i}{sign} -> {tgt!r} has dim "
                    f"{cubes[tgt].dim}, expected {cube.dim - 1}")
    return PrecubicalSet(cubes)


def serialize(K: PrecubicalSet) -> str:
    """Emit the wire format, cubes sorted by (dim, id)."""
    entries = []
    for cid in sorted(K.cubes, key=lambda c: (K.cubes[c].dim, c)):
        cube = K.cubes[cid]
        faces = {f"d{i}{s}": cube.faces[(i, s)]
                 for i in range(1, cube.dim + 1) for s in SIGNS}
        entries.append({"id": cid, "dim": cube.dim, "faces": faces})
    return json.dumps({"cubes": entries}, indent=1)


def validate(K: PrecubicalSet) -> ValidationReport:
    """Check face dimensions, the face-commutation identity and acyclicity.

    Reports every violation, not only the first.
    """
    violations = []
    for cid in K:
        cube = K.cubes[cid]
        for (i, sign), tgt in sorted(cube.faces.items()):
            if K.cubes[tgt].dim != cube.dim - 1:
                violations.append(Violation(
                    "FaceDimension", cid, (i,),
                    f"face d{i}{sign} has dim {K.cubes[tgt].dim}, expected {cube.dim - 1}"))
    for cid in K:
        cube = K.cubes[cid]
        for j in range(2, cube.dim + 1):
            for i in range(1, j):
                for a in SIGNS:
                    for b in SIGNS:
                        left = K.face(K.face(cid, j, b), i, a)
                        right = K.face(K.face(cid, i, a), j - 1, b)
                        if left != right:
                            violations.append(Violation(
                                "CubeAxiom", cid, (i, j),
                                f"d{i}{a} d{j}{b} = {left!r} but d{j-1}{b} d{i}{a} = {right!r}"))
    # 1-skeleton must be a DAG (keeps the free category finite)
    adj: dict[str, list[str]] = {}
    for e in K.by_dim(1):
        adj.setdefault(K.face(e, 1, "-"), []).append(K.face(e, 1, "+"))
    state: dict[str, int] = {}
    cycle_found = []

    def visit(v, stack):
        state[v] = 1
        for w in adj.get(v, ()):
            if state.get(w, 0) == 1:
                cycle_found.append(stack + [w])
                continue
            if state.get(w, 0) == 0:
                visit(w, stack + [w])
        state[v] = 2

    for v in K.by_dim(0):
        if state.get(v, 0) == 0:
            visit(v, [v])
    for cyc in cycle_found[:1]:
        violations.append(Violation(
            "Acyclicity", cyc[-1], (),
            "directed cycle in the 1-skeleton: " + " -> ".join(cyc)))
    return ValidationReport(not violations, tuple(violations))


def require_valid(K: PrecubicalSet) -> None:
    report = validate(K)
    if not report.ok:
        raise InvalidInput("; ".join(v.message for v in report.violations))


# ---------------------------------------------------------------------------
# builders for standard shapes


def standard_cube(n: int) -> PrecubicalSet:
    """The solid n-cube: one k-cube per word over {-,0,+} with k zeros."""
    if n == 0:
        return PrecubicalSet({"pt": Cube(0, {})})
    cubes = {}
    words = [""]
    for _ in range(n):
        words = [w + ch for w in words for ch in "-0+"]
    for w in words:
        dim = w.count("0")
        faces = {}
        zeros = [k for k, ch in enumerate(w) if ch == "0"]
        for i, pos in enumerate(zeros, start=1):
            for s in SIGNS:
                faces[(i, s)] = w[:pos] + s + w[pos + 1:]
        cubes[w] = Cube(dim, faces)
    return PrecubicalSet(cubes)


_HALF_FACES = {"a": {"-": "-", "+": "m"}, "b": {"-": "m", "+": "+"}}


def double_cube(n: int, j: int) -> PrecubicalSet:
    """Two solid n-cubes glued along direction j (1-based).

    Coordinate j runs over the subdivided interval - a m b +, where a and b
    are the two halves and m the shared midpoint.
    """
    if not 1 <= j <= n:
        raise ValueError("direction out of range")
    alphabets = ["-amb+" if k == j - 1 else "-0+" for k in range(n)]
    words = [""]
    for alpha in alphabets:
        words = [w + ch for w in words for ch in alpha]
    cubes = {}
    for w in words:
        zl = [k for k, ch in enumerate(w) if ch in "0ab"]
        faces = {}
        for i, pos in enumerate(zl, start=1):
            ch = w[pos]
            for s in SIGNS:
                rep = _HALF_FACES[ch][s] if ch in _HALF_FACES else s
                faces[(i, s)] = w[:pos] + rep + w[pos + 1:]
        cubes[w] = Cube(len(zl), faces)
    return PrecubicalSet(cubes)


# ---------------------------------------------------------------------------
# baseline corner chain complexes on the cube table itself


def goubault_complex(K: PrecubicalSet, side: str) -> ChainComplex:
    """Chain complex ZK_* with boundary sum_i (-1)^(i+1) d_i^side.

    Degree-n group is free on the n-cubes; the face-commutation identity
    makes the composite boundary vanish.
    """
    if side not in SIGNS:
        raise InvalidInput("side must be '-' or '+'")
    require_valid(K)
    top = K.max_dim
    basis = [list(K.by_dim(n)) for n in range(top + 1)]
    index = [{cid: k for k, cid in enumerate(bn)} for bn in basis]
    boundary: list[list[dict]] = [[]]
    for n in range(1, top + 1):
        cols = []
        for cid in basis[n]:
            col: dict = {}
            for i in range(1, n + 1):
                row = index[n - 1][K.face(cid, i, side)]
                coef = col.get(row, 0) + (1 if i % 2 == 1 else -1)
                if coef:
                    col[row] = coef
                else:
                    col.pop(row, None)
            cols.append(col)
        boundary.append(cols)
    return ChainComplex(basis, boundary)
