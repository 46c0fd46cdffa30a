"""Exact integer homology of the corner, reduced, formal and baseline
complexes, plus the T-equivalence decision procedure and the simplicial
cross-check for categories of length at most one.

All bases are ordered by the serialized image table of the cube (or by
morphism label), so certificates and transcripts are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import Config, default_config
from .errors import (
    CornerError,
    DimensionCap,
    NotLengthAtMostOne,
    NotNonContracting,
)
from .linalg import (  # noqa: F401  (re-exported: this module owns the API)
    ChainComplex,
    HomologyGroup,
    HomologySummary,
    IntLattice,
    QuotientComplex,
    complex_homology,
    invariant_factors,
    kernel_basis,
    lattice_of,
    smith_normal_form,
    solve_columns,
    vec_axpy,
)
from .molecule import OmegaCategory, evaluate_tree, path_shift
from .nerve import (
    SingularCube,
    classify,
    enumerate_cubes,
    face,
    is_thin,
    words,
)


def _cube_key(x: SingularCube) -> tuple:
    return x.images


def _sorted_basis(cubes) -> list[SingularCube]:
    return sorted(cubes, key=_cube_key)


def _boundary_column(x: SingularCube, side: str, index: dict) -> dict:
    col: dict = {}
    for i in range(1, x.n + 1):
        f = face(x, i, side)
        row = index.get(f)
        if row is None:
            raise CornerError(
                "face of a corner cube left the corner complex; "
                "this contradicts the closure property of the nerve")
        c = col.get(row, 0) + (1 if i % 2 == 1 else -1)
        if c:
            col[row] = c
        else:
            col.pop(row, None)
    return col


def corner_complex(C: OmegaCategory, side: str, up_to: int,
                   cfg: Config | None = None) -> ChainComplex:
    """Branching (side '-') or merging (side '+') complex up to degree
    up_to+1, with the alternating-sign boundary on that side."""
    cfg = cfg or default_config()
    if not C.is_non_contracting:
        raise NotNonContracting("corner complexes need a non-contracting category")
    if up_to + 1 > cfg.max_dim:
        raise DimensionCap(
            f"need degree {up_to + 1} cubes but max_dim is {cfg.max_dim}")
    which = "branching" if side == "-" else "merging"
    layers = [_sorted_basis(enumerate_cubes(C, n, which, cfg))
              for n in range(up_to + 2)]
    indexes = [{x: k for k, x in enumerate(layer)} for layer in layers]
    basis = [[repr(x) for x in layer] for layer in layers]
    boundary: list[list[dict]] = [[]]
    for n in range(1, up_to + 2):
        boundary.append([_boundary_column(x, side, indexes[n - 1])
                         for x in layers[n]])
    cx = ChainComplex(basis, boundary)
    cx.cubes = layers
    return cx


def reduced_corner_complex(C: OmegaCategory, up_to: int,
                           cfg: Config | None = None) -> QuotientComplex:
    """Branching complex modulo thin elements and boundaries of thin
    elements (the reduced branching complex)."""
    cfg = cfg or default_config()
    base = corner_complex(C, "-", up_to, cfg)
    layers = base.cubes
    relators: list[list[dict]] = []
    for n in range(len(layers)):
        rel = [{k: 1} for k, x in enumerate(layers[n]) if is_thin(x)]
        if n + 1 < len(layers):
            cols = base.boundary[n + 1]
            for k, x in enumerate(layers[n + 1]):
                if is_thin(x) and cols[k]:
                    rel.append(dict(cols[k]))
        relators.append(rel)
    cx = QuotientComplex(base.basis, base.boundary, relators)
    cx.cubes = layers
    return cx


def formal_complex(C: OmegaCategory, up_to: int,
                   cfg: Config | None = None) -> QuotientComplex:
    """Formal branching complex: free on the n-morphisms, modulo the
    composition relations (x *_0 y = x, x *_p y = x + y for p >= 1, all
    read modulo morphisms of lower dimension), with boundary s - t."""
    cfg = cfg or default_config()
    top = min(up_to + 1, max(C.by_dim) if C.by_dim else 0)
    layers = [sorted(C.by_dim.get(n, []), key=C.label) for n in range(top + 1)]
    index = [{m: k for k, m in enumerate(layer)} for layer in layers]
    basis = [[C.label(m) for m in layer] for layer in layers]
    boundary: list[list[dict]] = [[]]
    for n in range(1, top + 1):
        cols = []
        for m in layers[n]:
            col: dict = {}
            if n == 1:
                col[index[0][C.s(m, 0)]] = 1
            else:
                s, t = C.s(m, n - 1), C.t(m, n - 1)
                if s != t:
                    col[index[n - 1][s]] = 1
                    col[index[n - 1][t]] = -1
            cols.append(col)
        boundary.append(cols)
    relators: list[list[dict]] = [[] for _ in range(top + 1)]
    for (a, b, p), z in sorted(C.comp.items()):
        n = C.dim(z)
        if n > top:
            continue
        col = {index[n][z]: 1}
        if C.dim(a) == n:
            vec_axpy(col, -1, {index[n][a]: 1})
        if p >= 1 and C.dim(b) == n:
            vec_axpy(col, -1, {index[n][b]: 1})
        if col:
            relators[n].append(col)
    return QuotientComplex(basis, boundary, relators)


# ---------------------------------------------------------------------------
# T-equivalence


@dataclass
class TEquivalence:
    equivalent: bool
    certificate: dict | None  # {'thin': {cube: coef}, 'boundary': {cube: coef}}
    mode: str


def _chainify(x) -> dict:
    if isinstance(x, SingularCube):
        return {x: 1}
    if x is None:
        return {}
    return dict(x)


class _TSolver:
    """Integer solver for membership in M_n^- + boundary(M_{n+1}^-).

    Thin degree-n cubes absorb their own coordinates (thinness is a pure
    predicate of a cube), so only non-thin rows enter the lattice;
    solutions come back as (thin remainder, boundary combination)
    certificates.
    """

    def __init__(self, wit_np1):
        self.wits = list(wit_np1)
        self.rows: dict = {}
        self.lat = IntLattice()
        for j, w in enumerate(self.wits):
            self.lat.insert(self._boundary_row(w), {j: 1})

    def _row(self, c):
        rows = self.rows
        if c not in rows:
            rows[c] = len(rows)
        return rows[c]

    def _boundary_row(self, w) -> dict:
        col: dict = {}
        for i in range(1, w.n + 1):
            f = face(w, i, "-")
            if is_thin(f):
                continue
            r = self._row(f)
            c = col.get(r, 0) + (1 if i % 2 == 1 else -1)
            if c:
                col[r] = c
            else:
                col.pop(r, None)
        return col

    def solve(self, diff: dict):
        target: dict = {}
        for cube, coef in diff.items():
            if is_thin(cube) or not coef:
                continue
            if cube not in self.rows:
                return None  # a non-thin cube no witness boundary can reach
            target[self.rows[cube]] = coef
        sol = self.lat.solve(target)
        if sol is None:
            return None
        boundary_part = {self.wits[j]: c for j, c in sol.items() if c}
        residue = dict(diff)
        for w, c in boundary_part.items():
            for i in range(1, w.n + 1):
                f = face(w, i, "-")
                residue[f] = residue.get(f, 0) - c * (1 if i % 2 == 1 else -1)
                if not residue[f]:
                    del residue[f]
        bad = [k for k, v in residue.items() if v and not is_thin(k)]
        if bad:
            raise CornerError("solver left a non-thin residue")
        return ({k: v for k, v in residue.items() if v}, boundary_part)


def t_equivalent(x, y, n: int, C: OmegaCategory, cfg: Config | None = None,
                 witnesses=None) -> TEquivalence:
    """Decide whether two branching n-chains differ by thin elements plus a
    negative boundary of thin elements.

    With `witnesses` given, only those thin (n+1)-cubes are used as boundary
    generators (a positive answer is then a verified certificate; a negative
    one is not conclusive and signalled by mode 'witness-failed').  Without
    it, the full thin part of degree n+1 is enumerated and the answer is
    exact.
    """
    cfg = cfg or default_config()
    diff = _chainify(x)
    for k, v in _chainify(y).items():
        diff[k] = diff.get(k, 0) - v
        if not diff[k]:
            del diff[k]
    if not diff:
        return TEquivalence(True, {"thin": {}, "boundary": {}}, "trivial")
    if witnesses is not None:
        for w in witnesses:
            if w.n != n + 1 or not is_thin(w) or not classify(w).branching:
                raise CornerError("witnesses must be thin branching (n+1)-cubes")
        got = _TSolver(list(witnesses)).solve(diff)
        if got is None:
            return TEquivalence(False, None, "witness-failed")
        return TEquivalence(True, {"thin": got[0], "boundary": got[1]}, "witness")
    if n + 1 > cfg.max_dim:
        raise DimensionCap(
            f"deciding T-equivalence at degree {n} needs degree {n + 1} cubes")
    solver = C._nerve_cache.get(("tsolver", n))
    if solver is None:
        wit = [c for c in enumerate_cubes(C, n + 1, "branching", cfg) if is_thin(c)]
        solver = _TSolver(wit)
        C._nerve_cache[("tsolver", n)] = solver
    got = solver.solve(diff)
    if got is None:
        return TEquivalence(False, None, "full")
    return TEquivalence(True, {"thin": got[0], "boundary": got[1]}, "full")


def normalized_boundary_solve(diff_chain: dict, C: OmegaCategory, n: int,
                              cfg: Config | None = None) -> bool:
    """Is the degree-n chain a boundary in the normalized branching
    simplicial complex?  Degenerate simplices are the connection images
    of branching (n-1)-cubes, appended as extra generators."""
    from .nerve import connection
    cfg = cfg or default_config()
    wit = enumerate_cubes(C, n + 1, "branching", cfg)
    degen = []
    for z in enumerate_cubes(C, n - 1, "branching", cfg):
        for i in range(1, z.n + 1):
            degen.append(connection(z, i, "-"))
    rows: dict = {}

    def row(c):
        if c not in rows:
            rows[c] = len(rows)
        return rows[c]

    degen_set = set(degen)
    cols = []
    tags = []
    for w in wit:
        col: dict = {}
        for i in range(1, w.n + 1):
            f = face(w, i, "-")
            if f in degen_set:
                continue
            r = row(f)
            c = col.get(r, 0) + (1 if i % 2 == 1 else -1)
            if c:
                col[r] = c
            else:
                col.pop(r, None)
        cols.append(col)
        tags.append(w)
    target = {}
    for cube, coef in diff_chain.items():
        if cube in degen_set or not coef:
            continue
        target[row(cube)] = coef
    return solve_columns(cols, target) is not None


# ---------------------------------------------------------------------------
# simplicial nerve of a shifted category, and the cross-check


def _simplex_boundary_tree(n: int, sigma: tuple, k: int, side: str):
    from .molecule import SimplexSite, cells_boundary, cells_decompose
    site = _SIMPLEX_SITES.get(n)
    if site is None:
        site = SimplexSite(n)
        _SIMPLEX_SITES[n] = site
    key = (sigma, k, side)
    got = _SIMPLEX_TREES.get((n, key))
    if got is None:
        cells = cells_boundary(site, site.closure(sigma), k, side)
        got = cells_decompose(site, cells)
        if got is None:
            raise CornerError("simplex boundary failed to decompose")
        _SIMPLEX_TREES[(n, key)] = got
    return got


_SIMPLEX_SITES: dict = {}
_SIMPLEX_TREES: dict = {}


def enumerate_simplices(C: OmegaCategory, n: int) -> list[tuple]:
    """Functors from the n-th oriental to C, as image tuples over the
    increasing sequences in {0..n} ordered by (length, sequence)."""
    cells = []
    for r in range(1, n + 2):
        cells.extend(itertools.combinations(range(n + 1), r))
    cells.sort(key=lambda c: (len(c), c))
    cidx = {c: k for k, c in enumerate(cells)}
    out = []

    def extend(k, images):
        if k == len(cells):
            out.append(tuple(images))
            return
        sigma = cells[k]
        p = len(sigma) - 1
        if p == 0:
            for m in C.by_dim.get(0, []):
                images.append(m)
                extend(k + 1, images)
                images.pop()
            return

        def lookup(cell):
            return images[cidx[cell]]

        src = evaluate_tree(_simplex_boundary_tree(n, sigma, p - 1, "-"), _Lookup(lookup), C)
        tgt = evaluate_tree(_simplex_boundary_tree(n, sigma, p - 1, "+"), _Lookup(lookup), C)
        cands = []
        if src == tgt:
            cands.append(src)
        cands.extend(C.st_index(p).get((src, tgt), ()))
        for u in cands:
            images.append(u)
            extend(k + 1, images)
            images.pop()

    extend(0, [])
    out.sort()
    return out


class _Lookup(dict):
    def __init__(self, fn):
        super().__init__()
        self.fn = fn

    def __missing__(self, key):
        return self.fn(key)


def simplicial_homology(C: OmegaCategory, up_to: int) -> HomologySummary:
    """Homology of the non-normalized simplicial nerve of C."""
    layers = [enumerate_simplices(C, n) for n in range(up_to + 2)]
    indexes = [{x: k for k, x in enumerate(layer)} for layer in layers]
    basis = [[str(x) for x in layer] for layer in layers]

    def cells_of(n):
        cs = []
        for r in range(1, n + 2):
            cs.extend(itertools.combinations(range(n + 1), r))
        cs.sort(key=lambda c: (len(c), c))
        return cs

    boundary: list[list[dict]] = [[]]
    for n in range(1, up_to + 2):
        big = cells_of(n)
        big_pos = {c: k for k, c in enumerate(big)}
        small = cells_of(n - 1)
        maps = []
        for i in range(n + 1):
            # precompose with the i-th coface: insert a gap at value i
            maps.append([big_pos[tuple(v if v < i else v + 1 for v in c)]
                         for c in small])
        cols = []
        for x in layers[n]:
            col: dict = {}
            for i in range(n + 1):
                fx = tuple(x[maps[i][k]] for k in range(len(small)))
                r = indexes[n - 1][fx]
                c = col.get(r, 0) + (1 if i % 2 == 0 else -1)
                if c:
                    col[r] = c
                else:
                    col.pop(r, None)
            cols.append(col)
        boundary.append(cols)
    return complex_homology(ChainComplex(basis, boundary), up_to)


def calcul_crosscheck(C: OmegaCategory, up_to: int,
                      cfg: Config | None = None) -> dict:
    """Compare corner homology of C with simplicial homology of the shifted
    category: H_{n+1}^-(C) against H_n(PC) for 1 <= n <= up_to-1."""
    cfg = cfg or default_config()
    if not C.is_length_at_most_one:
        raise NotLengthAtMostOne("the cross-check needs length at most 1")
    PC = path_shift(C)
    corner = complex_homology(corner_complex(C, "-", up_to, cfg), up_to)
    simp = simplicial_homology(PC, up_to - 1)
    rows = []
    ok = True
    for n in range(1, up_to):
        a = corner.group(n + 1)
        b = simp.group(n)
        match = (a.betti, a.torsion) == (b.betti, b.torsion)
        ok = ok and match
        rows.append({"n": n, "corner_degree": n + 1,
                     "corner": {"betti": a.betti, "torsion": list(a.torsion)},
                     "simplicial": {"betti": b.betti, "torsion": list(b.torsion)},
                     "match": match})
    return {"ok": ok, "rows": rows}


# ---------------------------------------------------------------------------
# the differential identities for folded cubes


def diff_formula_check(C: OmegaCategory, n: int, cfg: Config | None = None) -> dict:
    """Check, in the reduced branching complex, that the folded source of a
    branching n-cube is the sum of the folded odd negative faces, and the
    folded target the sum of the even ones."""
    from .folding import box_minus
    cfg = cfg or default_config()
    if n > cfg.max_dim:
        raise DimensionCap(f"degree {n} exceeds max_dim {cfg.max_dim}")
    checked = failed = 0
    failures = []
    for x in enumerate_cubes(C, n, "branching", cfg):
        lhs_s = {box_minus(C, C.s(x.interior, n - 1), n - 1, cfg): 1}
        rhs_s: dict = {}
        lhs_t = {box_minus(C, C.t(x.interior, n - 1), n - 1, cfg): 1}
        rhs_t: dict = {}
        for i in range(1, n + 1):
            cube = box_minus(C, face(x, i, "-").interior, n - 1, cfg)
            tgt = rhs_s if i % 2 == 1 else rhs_t
            tgt[cube] = tgt.get(cube, 0) + 1
        for lhs, rhs in ((lhs_s, rhs_s), (lhs_t, rhs_t)):
            checked += 1
            if not t_equivalent(lhs, rhs, n - 1, C, cfg).equivalent:
                failed += 1
                if len(failures) < 5:
                    failures.append(repr(x))
    return {"ok": failed == 0, "checked": checked, "failed": failed,
            "failures": failures}
