"""Free omega-category engine on cube-like and simplex-like cell complexes.

A morphism of a free omega-category generated by a cell complex is stored as
the set of cells it covers (a "molecule"): composition, where defined, is
plain union.  Sources and targets of molecules are computed by peeling top
cells off the appropriate side; pasting decompositions are recovered by a
deterministic split search.  The same machinery drives the cube categories
I^n, the free category F(K) on a precubical set, and the orientals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import Config, default_config
from .errors import (
    BadLevel,
    ClosureBudgetExceeded,
    CornerError,
    DimensionCap,
    IncompatibleAssignment,
    NotDecomposable,
    NotLengthAtMostOne,
    NotNonContracting,
    UnknownState,
)
from .precub import PrecubicalSet, require_valid, standard_cube

# ---------------------------------------------------------------------------
# cell sites
#
# A site provides, per cell: dimension, the set of iterated faces (closure),
# and the two facet families b/e that feed the source/target of its atom.
# After canonicalizing the gluing relation, the cells of F(K) are exactly the
# cubes of K, so a precubical set is itself a site.


class PrecubSite:
    def __init__(self, K: PrecubicalSet, name: str = ""):
        self.K = K
        self.name = name or f"precub:{id(K)}"
        self._closure: dict[str, frozenset] = {}
        self._bset: dict[str, frozenset] = {}
        self._eset: dict[str, frozenset] = {}
        self._bnd: dict = {}
        self._decomp: dict = {}

    def cells(self):
        return list(self.K)

    def dim(self, c) -> int:
        return self.K.dim(c)

    def closure(self, c) -> frozenset:
        got = self._closure.get(c)
        if got is None:
            acc = {c}
            for (i, s), tgt in self.K.cubes[c].faces.items():
                acc |= self.closure(tgt)
            got = frozenset(acc)
            self._closure[c] = got
        return got

    def bset(self, c) -> frozenset:
        got = self._bset.get(c)
        if got is None:
            d = self.K.dim(c)
            got = frozenset(
                self.K.face(c, i, "-" if i % 2 == 1 else "+") for i in range(1, d + 1))
            self._bset[c] = got
        return got

    def eset(self, c) -> frozenset:
        got = self._eset.get(c)
        if got is None:
            d = self.K.dim(c)
            got = frozenset(
                self.K.face(c, i, "+" if i % 2 == 1 else "-") for i in range(1, d + 1))
            self._eset[c] = got
        return got

    def sort_key(self, c):
        return (self.K.dim(c), c)


class SimplexSite:
    """Cells are strictly increasing tuples drawn from {0..n}.

    Facets deleting an even position feed the source, odd positions the
    target; the orientation is the one forced by the word correspondence
    with the cubical branching nerve.
    """

    def __init__(self, n: int):
        self.n = n
        self.name = f"simplex:{n}"
        self._bnd: dict = {}
        self._decomp: dict = {}

    def cells(self):
        out = []
        for r in range(1, self.n + 2):
            out.extend(itertools.combinations(range(self.n + 1), r))
        return out

    def dim(self, c) -> int:
        return len(c) - 1

    def closure(self, c) -> frozenset:
        out = []
        for r in range(1, len(c) + 1):
            out.extend(itertools.combinations(c, r))
        return frozenset(out)

    def bset(self, c) -> frozenset:
        return frozenset(c[:k] + c[k + 1:] for k in range(0, len(c), 2))

    def eset(self, c) -> frozenset:
        return frozenset(c[:k] + c[k + 1:] for k in range(1, len(c), 2))

    def sort_key(self, c):
        return (len(c), c)


# ---------------------------------------------------------------------------
# molecule primitives (cell-set level)


def cells_dim(site, cells) -> int:
    return max(site.dim(c) for c in cells)


def maximal_cells(site, cells):
    shadow = set()
    for c in cells:
        shadow.update(site.closure(c) - {c})
    return sorted((c for c in cells if c not in shadow), key=site.sort_key)


def _peel(site, cells: frozenset, side: str) -> frozenset:
    d = cells_dim(site, cells)
    tops = [c for c in cells if site.dim(c) == d]
    drop = set(tops)
    for c in tops:
        if side == "-":
            drop |= site.eset(c) - site.bset(c)
        else:
            drop |= site.bset(c) - site.eset(c)
    surv = cells - drop
    whiskers = set(maximal_cells(site, cells)) - set(tops)
    out = set()
    # survivors of the new top dimension span the boundary; lower survivors
    # stay only if they were maximal already (whiskers), the rest are
    # orphaned corners of the dropped facets
    for c in maximal_cells(site, surv):
        if site.dim(c) == d - 1 or c in whiskers:
            out |= site.closure(c)
    return frozenset(out)


def cells_boundary(site, cells: frozenset, k: int, side: str) -> frozenset:
    """k-source (side '-') or k-target (side '+') of a molecule's cell set."""
    if k < 0:
        raise BadLevel(f"negative level {k}")
    key = (cells, k, side)
    got = site._bnd.get(key)
    if got is not None:
        return got
    cur = cells
    while cells_dim(site, cur) > k:
        cur = _peel(site, cur, side)
    site._bnd[key] = cur
    return cur


@dataclass(frozen=True)
class PastingTree:
    """Leaf(atom cell) or Node(level, left, right)."""

    level: int | None
    cell: object
    left: "PastingTree | None"
    right: "PastingTree | None"

    @staticmethod
    def leaf(cell) -> "PastingTree":
        return PastingTree(None, cell, None, None)

    @staticmethod
    def node(level, left, right) -> "PastingTree":
        return PastingTree(level, None, left, right)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def leaves(self):
        if self.is_leaf:
            yield self.cell
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def size(self) -> int:
        return 1 if self.is_leaf else self.left.size() + self.right.size()


def cells_decompose(site, cells: frozenset):
    """Pasting tree for a molecule's cell set, or None.

    A level-p split's left factor is forced to be R(A) ∪ s_p(M) for a subset
    A of the maximal cells above dimension p, so the search runs over subsets
    of maximal cells (smallest first, then lexicographic) and levels from the
    top down.  Memoized per site.
    """
    got = site._decomp.get(cells, "?")
    if got != "?":
        return got
    site._decomp[cells] = None  # cuts accidental reentry
    maxima = maximal_cells(site, cells)
    if len(maxima) == 1:
        tree = PastingTree.leaf(maxima[0])
        site._decomp[cells] = tree
        return tree
    d = cells_dim(site, cells)
    result = None
    for p in range(d - 1, -1, -1):
        sp = cells_boundary(site, cells, p, "-")
        tp = cells_boundary(site, cells, p, "+")
        tops = [c for c in maxima if site.dim(c) > p]
        if len(tops) < 2:
            continue
        found = False
        for size in range(1, len(tops)):
            for A in itertools.combinations(tops, size):
                aset = set(A)
                x = set(sp)
                for c in A:
                    x |= site.closure(c)
                y = set(tp)
                for c in tops:
                    if c not in aset:
                        y |= site.closure(c)
                x = frozenset(x)
                y = frozenset(y)
                if x | y != cells:
                    continue
                mid = cells_boundary(site, x, p, "+")
                if cells_boundary(site, y, p, "-") != mid:
                    continue
                if x & y != mid:
                    continue
                lt = cells_decompose(site, x)
                if lt is None:
                    continue
                rt = cells_decompose(site, y)
                if rt is None:
                    continue
                result = PastingTree.node(p, lt, rt)
                found = True
                break
            if found:
                break
        if found:
            break
    site._decomp[cells] = result
    return result


# ---------------------------------------------------------------------------
# molecules as values


class Molecule:
    """Face-closed cell subset representing one morphism."""

    __slots__ = ("site", "cells", "_dim")

    def __init__(self, site, cells):
        self.site = site
        self.cells = frozenset(cells)
        self._dim = cells_dim(site, self.cells)

    @property
    def dim(self) -> int:
        return self._dim

    def __eq__(self, other):
        return isinstance(other, Molecule) and self.cells == other.cells \
            and self.site is other.site

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        maxima = maximal_cells(self.site, self.cells)
        names = ",".join(str(c) for c in maxima)
        return ("R{%s}" % names) if len(maxima) == 1 else ("{%s}" % names)


def boundary_of(M: Molecule, k: int, side: str) -> Molecule:
    """s_k / t_k of a molecule; at or above its own dimension it is itself."""
    if k >= M.dim:
        return M
    return Molecule(M.site, cells_boundary(M.site, M.cells, k, side))


def compose(M: Molecule, N: Molecule, p: int):
    """Union composition at level p, or None when undefined.

    Side condition: the factors must meet exactly in the shared p-boundary.
    """
    if M.site is not N.site:
        raise CornerError("molecules from different complexes")
    tM = cells_boundary(M.site, M.cells, p, "+") if p < M.dim else M.cells
    sN = cells_boundary(N.site, N.cells, p, "-") if p < N.dim else N.cells
    if tM != sN:
        return None
    if M.dim <= p:
        return N
    if N.dim <= p:
        return M
    if M.cells & N.cells != tM:
        return None
    return Molecule(M.site, M.cells | N.cells)


def decompose(M: Molecule) -> PastingTree:
    tree = cells_decompose(M.site, M.cells)
    if tree is None:
        raise NotDecomposable(f"no pasting decomposition for {M!r}")
    return tree


def evaluate_tree(tree: PastingTree, images, cat) -> int:
    """Evaluate a pasting tree in `cat` under a leaf-cell assignment."""
    if tree.is_leaf:
        try:
            return images[tree.cell]
        except KeyError as exc:
            raise IncompatibleAssignment(f"no image for atom {tree.cell!r}") from exc
    a = evaluate_tree(tree.left, images, cat)
    b = evaluate_tree(tree.right, images, cat)
    out = cat.compose(a, b, tree.level)
    if out is None:
        raise IncompatibleAssignment(
            f"images not composable at level {tree.level}")
    return out


def evaluate(assignment, M: Molecule, cat) -> int:
    """Image of a molecule under an atom-cell assignment into `cat`."""
    return evaluate_tree(decompose(M), assignment, cat)


# ---------------------------------------------------------------------------
# finite enumerated omega-categories


class OmegaCategory:
    """Finite omega-category: a morphism table with boundaries and products.

    Morphisms are ids 0..n-1.  `sources[x]` / `targets[x]` list s_k(x) /
    t_k(x) for k < dim(x); `comp` holds the non-degenerate compositions
    (unit laws are supplied by `compose`).  Cell-backed categories also keep
    the molecule of every morphism.
    """

    def __init__(self, dims, sources, targets, comp, atoms, labels,
                 site=None, cellsets=None):
        self.dims = dims
        self.sources = sources
        self.targets = targets
        self.comp = comp
        self.atoms = atoms
        self.labels = labels
        self.site = site
        self.cellsets = cellsets
        self.by_dim: dict[int, list[int]] = {}
        for x, d in enumerate(dims):
            self.by_dim.setdefault(d, []).append(x)
        self._meta: dict[str, bool] = {}
        self._nerve_cache: dict = {}
        self._st_index: dict = {}

    def __len__(self):
        return len(self.dims)

    def dim(self, x: int) -> int:
        return self.dims[x]

    def s(self, x: int, k: int) -> int:
        return self.sources[x][k] if k < self.dims[x] else x

    def t(self, x: int, k: int) -> int:
        return self.targets[x][k] if k < self.dims[x] else x

    def d(self, x: int, k: int, side: str) -> int:
        return self.s(x, k) if side == "-" else self.t(x, k)

    def compose(self, a: int, b: int, p: int):
        if self.t(a, p) != self.s(b, p):
            return None
        if self.dims[a] <= p:
            return b
        if self.dims[b] <= p:
            return a
        return self.comp.get((a, b, p))

    def label(self, x: int) -> str:
        return self.labels[x]

    def molecule(self, x: int) -> Molecule:
        if self.site is None:
            raise CornerError("not a cell-backed category")
        return Molecule(self.site, self.cellsets[x])

    def id_of_cells(self, cells) -> int:
        if self.site is None:
            raise CornerError("not a cell-backed category")
        return self._cell_index[frozenset(cells)]

    @property
    def is_non_contracting(self) -> bool:
        got = self._meta.get("nc")
        if got is None:
            got = all(
                self.dims[self.s(x, 1)] == 1 and self.dims[self.t(x, 1)] == 1
                for x in range(len(self.dims)) if self.dims[x] >= 2)
            self._meta["nc"] = got
        return got

    @property
    def is_length_at_most_one(self) -> bool:
        got = self._meta.get("len1")
        if got is None:
            got = not any(p == 0 for (_, _, p) in self.comp)
            self._meta["len1"] = got
        return got

    def st_index(self, n: int):
        """Morphisms of dimension n indexed by (s_{n-1}, t_{n-1})."""
        got = self._st_index.get(n)
        if got is None:
            got = {}
            for x in self.by_dim.get(n, []):
                got.setdefault((self.s(x, n - 1), self.t(x, n - 1)), []).append(x)
            self._st_index[n] = got
        return got


def _molecule_label(site, cells) -> str:
    maxima = maximal_cells(site, cells)
    names = ",".join(str(c) for c in maxima)
    return ("R{%s}" % names) if len(maxima) == 1 else ("{%s}" % names)


def close_under_composition(site, atom_cells, budget: int) -> OmegaCategory:
    """Closure of the atoms under all union compositions, with full tables.

    Boundaries are computed by peeling; composite tables are cross-checked
    against the boundary recursion (union of factor boundaries) and any
    mismatch aborts the build.
    """
    index: dict[frozenset, int] = {}
    cellsets: list[frozenset] = []
    dims: list[int] = []
    sources: list[tuple] = []
    targets: list[tuple] = []

    def add(cells: frozenset) -> int:
        got = index.get(cells)
        if got is not None:
            return got
        d = cells_dim(site, cells)
        ss = tuple(add(cells_boundary(site, cells, k, "-")) for k in range(d))
        ts = tuple(add(cells_boundary(site, cells, k, "+")) for k in range(d))
        if len(cellsets) >= budget:
            raise ClosureBudgetExceeded(f"more than {budget} morphisms")
        xid = len(cellsets)
        index[cells] = xid
        cellsets.append(cells)
        dims.append(d)
        sources.append(ss)
        targets.append(ts)
        return xid

    atoms = [add(site.closure(c)) for c in sorted(atom_cells, key=site.sort_key)]
    comp: dict = {}
    while True:
        grew = False
        by_src: dict[tuple, list[int]] = {}
        for y in range(len(cellsets)):
            for p in range(dims[y]):
                by_src.setdefault((p, sources[y][p]), []).append(y)
        n_before = len(cellsets)
        for x in range(len(cellsets)):
            for p in range(dims[x]):
                for y in by_src.get((p, targets[x][p]), ()):
                    if (x, y, p) in comp:
                        continue
                    cx, cy = cellsets[x], cellsets[y]
                    mid = cellsets[targets[x][p]]
                    if cx & cy != mid:
                        continue
                    u = cx | cy
                    z = index.get(u)
                    if z is None:
                        z = add(u)
                        grew = True
                        dz = dims[z]
                        for k in range(dz):
                            want_s = cellsets[sources[x][k] if k < dims[x] else x] | \
                                cellsets[sources[y][k] if k < dims[y] else y] \
                                if k > p else cellsets[sources[x][k]]
                            want_t = cellsets[targets[x][k] if k < dims[x] else x] | \
                                cellsets[targets[y][k] if k < dims[y] else y] \
                                if k > p else (cellsets[targets[y][k]] if k == p
                                               else cellsets[targets[x][k]])
                            if cellsets[sources[z][k]] != want_s or \
                                    cellsets[targets[z][k]] != want_t:
                                raise CornerError(
                                    "internal consistency: peeled boundary of a "
                                    "composite disagrees with the boundary recursion")
                    comp[(x, y, p)] = z
                    grew = True
        if not grew and len(cellsets) == n_before:
            break
    labels = [_molecule_label(site, cs) for cs in cellsets]
    cat = OmegaCategory(dims, sources, targets, comp, atoms, labels,
                        site=site, cellsets=cellsets)
    cat._cell_index = index
    return cat


# ---------------------------------------------------------------------------
# builders


def build_free_category(K: PrecubicalSet, cfg: Config | None = None) -> OmegaCategory:
    """Free omega-category on a validated precubical set."""
    cfg = cfg or default_config()
    require_valid(K)
    site = PrecubSite(K)
    return close_under_composition(site, site.cells(), cfg.budget)


_IN_CACHE: dict[int, OmegaCategory] = {}


def build_In(n: int, cfg: Config | None = None) -> OmegaCategory:
    """The free omega-category I^n of the solid n-cube."""
    cfg = cfg or default_config()
    if n > cfg.max_dim + 1:
        raise DimensionCap(f"I^{n} exceeds max_dim+1 = {cfg.max_dim + 1}")
    got = _IN_CACHE.get(n)
    if got is None:
        site = PrecubSite(standard_cube(n), name=f"cube:{n}")
        got = close_under_composition(site, site.cells(), cfg.budget)
        _IN_CACHE[n] = got
    return got


_ORIENTAL_CACHE: dict[int, OmegaCategory] = {}


def build_oriental(n: int, cfg: Config | None = None) -> OmegaCategory:
    """Street's n-th oriental, as molecules of increasing sequences."""
    cfg = cfg or default_config()
    if n > cfg.max_dim + 1:
        raise DimensionCap(f"oriental {n} exceeds max_dim+1 = {cfg.max_dim + 1}")
    got = _ORIENTAL_CACHE.get(n)
    if got is None:
        site = SimplexSite(n)
        got = close_under_composition(site, site.cells(), cfg.budget)
        _ORIENTAL_CACHE[n] = got
    return got


def build_presented(kind: str, p: int, cfg: Config | None = None) -> OmegaCategory:
    """The categories freely generated by one p-morphism (2_p) or by two
    parallel ones sharing their (p-1)-boundaries (G_p<A,B>)."""
    cfg = cfg or default_config()
    if p < 1:
        raise CornerError("p must be >= 1")
    if p > cfg.max_dim:
        raise DimensionCap(f"p={p} exceeds max_dim {cfg.max_dim}")
    dims, sources, targets, labels = [], [], [], []
    s_ids, t_ids = [], []
    for k in range(p):
        s_ids.append(len(dims))
        dims.append(k)
        sources.append(tuple(s_ids[:k]))
        targets.append(tuple(t_ids[:k]))
        labels.append(f"s{k}A")
        t_ids.append(len(dims))
        dims.append(k)
        sources.append(tuple(s_ids[:k]))
        targets.append(tuple(t_ids[:k]))
        labels.append(f"t{k}A")
    a_id = len(dims)
    dims.append(p)
    sources.append(tuple(s_ids))
    targets.append(tuple(t_ids))
    labels.append("A")
    atoms = [a_id]
    if kind == "G_p":
        b_id = len(dims)
        dims.append(p)
        sources.append(tuple(s_ids))
        targets.append(tuple(t_ids))
        labels.append("B")
        atoms.append(b_id)
    elif kind != "2_p":
        raise CornerError(f"unknown presented kind {kind!r}")
    return OmegaCategory(dims, sources, targets, {}, atoms, labels)


def counterexample_category() -> OmegaCategory:
    """The square with its two source edges identified and both composite
    paths equal: the quotient that defeats the thin-elements conjecture.

    Morphisms: states v0, vm, v1; edges e1: v0->vm, a,b: vm->v1 and the
    common composite c = e1*a = e1*b: v0->v1.  There is no 2-morphism, so
    the identity-induced square of the nerve has the composite as its
    (thin) interior.
    """
    labels = ["v0", "vm", "v1", "e1", "a", "b", "c"]
    dims = [0, 0, 0, 1, 1, 1, 1]
    sources = [(), (), (), (0,), (1,), (1,), (0,)]
    targets = [(), (), (), (1,), (2,), (2,), (2,)]
    comp = {(3, 4, 0): 6, (3, 5, 0): 6}
    return OmegaCategory(dims, sources, targets, comp, [3, 4, 5], labels)


def path_shift(C: OmegaCategory) -> OmegaCategory:
    """Drop the 0-morphisms: n-morphisms of the result are the (n+1)-
    morphisms of C, with boundaries and compositions shifted down."""
    if not C.is_non_contracting:
        raise NotNonContracting("path shift needs a non-contracting category")
    if not C.is_length_at_most_one:
        raise NotLengthAtMostOne("path shift needs length at most 1")
    keep = [x for x in range(len(C)) if C.dim(x) >= 1]
    remap = {x: i for i, x in enumerate(keep)}
    dims = [C.dim(x) - 1 for x in keep]
    sources = [tuple(remap[s] for s in C.sources[x][1:]) for x in keep]
    targets = [tuple(remap[t] for t in C.targets[x][1:]) for x in keep]
    comp = {(remap[a], remap[b], p - 1): remap[z]
            for (a, b, p), z in C.comp.items() if p >= 1}
    atoms = [remap[x] for x in C.atoms if C.dim(x) >= 1]
    labels = [C.label(x) for x in keep]
    return OmegaCategory(dims, sources, targets, comp, atoms, labels)


def _restrict(C: OmegaCategory, keep: list[int]) -> OmegaCategory:
    kept = set(keep)
    remap = {x: i for i, x in enumerate(keep)}
    dims = [C.dim(x) for x in keep]
    sources = [tuple(remap[s] for s in C.sources[x]) for x in keep]
    targets = [tuple(remap[t] for t in C.targets[x]) for x in keep]
    comp = {(remap[a], remap[b], p): remap[z]
            for (a, b, p), z in C.comp.items()
            if a in kept and b in kept and z in kept}
    atoms = [remap[x] for x in C.atoms if x in kept]
    labels = [C.label(x) for x in keep]
    cellsets = [C.cellsets[x] for x in keep] if C.cellsets is not None else None
    return OmegaCategory(dims, sources, targets, comp, atoms, labels,
                         site=C.site, cellsets=cellsets)


def bilocalize(C: OmegaCategory, initial, final) -> OmegaCategory:
    """Sub-category of morphisms running from the states in `initial` to the
    states in `final`, plus those states themselves."""
    initial = set(initial)
    final = set(final)
    for x in initial | final:
        if not (0 <= x < len(C)) or C.dim(x) != 0:
            raise UnknownState(f"{x} is not a 0-morphism")
    keep = sorted(initial | final) + [
        x for x in range(len(C))
        if C.dim(x) >= 1 and C.s(x, 0) in initial and C.t(x, 0) in final]
    return _restrict(C, keep)


def generated_subcategory(C: OmegaCategory, seeds) -> tuple[OmegaCategory, dict]:
    """Smallest sub-omega-category of C containing the seed morphisms.

    Returns the subcategory and the id map {parent id -> sub id}.
    """
    kept: set[int] = set()
    stack = list(seeds)
    while stack:
        x = stack.pop()
        if x in kept:
            continue
        kept.add(x)
        for k in range(C.dim(x)):
            stack.append(C.s(x, k))
            stack.append(C.t(x, k))
    changed = True
    while changed:
        changed = False
        for (a, b, p), z in C.comp.items():
            if a in kept and b in kept and z not in kept:
                stack = [z]
                while stack:
                    x = stack.pop()
                    if x in kept:
                        continue
                    kept.add(x)
                    for k in range(C.dim(x)):
                        stack.append(C.s(x, k))
                        stack.append(C.t(x, k))
                changed = True
    keep = sorted(kept)
    sub = _restrict(C, keep)
    return sub, {x: i for i, x in enumerate(keep)}
