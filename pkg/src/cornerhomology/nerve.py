"""Cubical singular nerve of a finite omega-category.

A degree-n cube is an omega-functor out of the free category of the solid
n-cube, stored as its full atom-image table (a tuple indexed by the 3^n
words over -0+).  Faces, degeneracies and connections are then pure index
substitutions; the concatenations +_j are evaluated through the pasting
decomposition of the doubled cube.  Enumeration proceeds degree by degree
through shells.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .config import Config, default_config
from .errors import (
    BadIndex,
    CornerError,
    DimensionCap,
    IncompatibleAssignment,
    NotComposable,
    NotFillable,
    NotNonContracting,
    SourceMismatch,
)
from .molecule import (
    Molecule,
    OmegaCategory,
    PastingTree,
    PrecubSite,
    cells_boundary,
    cells_decompose,
    evaluate_tree,
)
from .precub import double_cube, standard_cube

# ---------------------------------------------------------------------------
# words and index tables

_WORDS: dict[int, list[str]] = {}
_IDX: dict[int, dict[str, int]] = {}


def words(n: int) -> list[str]:
    got = _WORDS.get(n)
    if got is None:
        got = sorted("".join(w) for w in itertools.product("-0+", repeat=n))
        _WORDS[n] = got
        _IDX[n] = {w: k for k, w in enumerate(got)}
    return got


def word_index(n: int) -> dict[str, int]:
    words(n)
    return _IDX[n]


def _ins(w: str, i: int, ch: str) -> str:
    return w[: i - 1] + ch + w[i - 1:]


def _del(w: str, i: int) -> str:
    return w[: i - 1] + w[i:]


_ORD = {"-": 0, "0": 1, "+": 2}
_CHR = "-0+"


def _merge(w: str, i: int, kind: str) -> str:
    a, b = w[i - 1], w[i]
    m = max(_ORD[a], _ORD[b]) if kind == "-" else min(_ORD[a], _ORD[b])
    return w[: i - 1] + _CHR[m] + w[i + 1:]


_FACE_TAB: dict = {}
_EPS_TAB: dict = {}
_GAMMA_TAB: dict = {}


def _face_table(n: int, i: int, sign: str):
    key = (n, i, sign)
    got = _FACE_TAB.get(key)
    if got is None:
        idx = word_index(n)
        got = tuple(idx[_ins(w, i, sign)] for w in words(n - 1))
        _FACE_TAB[key] = got
    return got


def _eps_table(n: int, i: int):
    key = (n, i)
    got = _EPS_TAB.get(key)
    if got is None:
        idx = word_index(n)
        got = tuple(idx[_del(w, i)] for w in words(n + 1))
        _EPS_TAB[key] = got
    return got


def _gamma_table(n: int, i: int, sign: str):
    key = (n, i, sign)
    got = _GAMMA_TAB.get(key)
    if got is None:
        idx = word_index(n)
        got = tuple(idx[_merge(w, i, sign)] for w in words(n + 1))
        _GAMMA_TAB[key] = got
    return got


# ---------------------------------------------------------------------------
# singular cubes


@dataclass(frozen=True)
class CubeClass:
    branching: bool
    merging: bool
    thin: bool


class SingularCube:
    """Omega-functor I^n -> C as its atom-image tuple."""

    __slots__ = ("cat", "n", "images", "_hash", "_cls", "_faces")

    def __init__(self, cat: OmegaCategory, n: int, images: tuple):
        self.cat = cat
        self.n = n
        self.images = images
        self._hash = hash((n, images))
        self._cls = None
        self._faces = None

    @property
    def interior(self) -> int:
        return self.images[word_index(self.n)["0" * self.n]] if self.n else self.images[0]

    def __eq__(self, other):
        return (isinstance(other, SingularCube) and self.n == other.n
                and self.images == other.images and self.cat is other.cat)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        ws = words(self.n)
        body = ",".join(f"{w}:{self.cat.label(m)}" for w, m in zip(ws, self.images))
        return f"<{self.n}-cube {body}>"

    def as_json(self):
        return {w: self.cat.label(m) for w, m in zip(words(self.n), self.images)}


def face(x: SingularCube, i: int, sign: str) -> SingularCube:
    if not 1 <= i <= x.n:
        raise BadIndex(f"face index {i} out of 1..{x.n}")
    if x._faces is None:
        x._faces = {}
    got = x._faces.get((i, sign))
    if got is None:
        tab = _face_table(x.n, i, sign)
        got = SingularCube(x.cat, x.n - 1, tuple(x.images[k] for k in tab))
        x._faces[(i, sign)] = got
    return got


def degeneracy(x: SingularCube, i: int) -> SingularCube:
    if not 1 <= i <= x.n + 1:
        raise BadIndex(f"degeneracy index {i} out of 1..{x.n + 1}")
    tab = _eps_table(x.n, i)
    return SingularCube(x.cat, x.n + 1, tuple(x.images[k] for k in tab))


def connection(x: SingularCube, i: int, sign: str) -> SingularCube:
    if x.n < 1 or not 1 <= i <= x.n:
        raise BadIndex(f"connection index {i} out of 1..{x.n}")
    tab = _gamma_table(x.n, i, sign)
    return SingularCube(x.cat, x.n + 1, tuple(x.images[k] for k in tab))


# ---------------------------------------------------------------------------
# pasting trees of cube boundaries, cached per degree

_CUBE_SITE: dict[int, PrecubSite] = {}


def cube_site(n: int) -> PrecubSite:
    got = _CUBE_SITE.get(n)
    if got is None:
        got = PrecubSite(standard_cube(n), name=f"cube:{n}")
        _CUBE_SITE[n] = got
    return got


_ATOM_TREES: dict = {}


def atom_boundary_tree(n: int, w: str, k: int, side: str) -> PastingTree:
    """Pasting tree (leaves are words) of s_k/t_k of the atom R(w) in I^n."""
    key = (n, w, k, side)
    got = _ATOM_TREES.get(key)
    if got is None:
        site = cube_site(n)
        cells = cells_boundary(site, site.closure(w), k, side)
        got = cells_decompose(site, cells)
        if got is None:
            raise CornerError(f"cube boundary failed to decompose: {key}")
        _ATOM_TREES[key] = got
    return got


def _eval_words(tree: PastingTree, lookup, cat) -> int:
    if tree.is_leaf:
        return lookup(tree.cell)
    a = _eval_words(tree.left, lookup, cat)
    b = _eval_words(tree.right, lookup, cat)
    out = cat.compose(a, b, tree.level)
    if out is None:
        raise IncompatibleAssignment(f"not composable at level {tree.level}")
    return out


def verify_cube(cat: OmegaCategory, n: int, images: tuple) -> None:
    """Functoriality check of an atom-image table (raises on failure)."""
    idx = word_index(n)

    def lookup(w):
        return images[idx[w]]

    for w in words(n):
        dw = w.count("0")
        m = images[idx[w]]
        if cat.dim(m) > dw:
            raise IncompatibleAssignment(f"image of {w} has dimension > {dw}")
        for k in range(dw):
            for side, bnd in (("-", cat.s), ("+", cat.t)):
                tree = atom_boundary_tree(n, w, k, side)
                if _eval_words(tree, lookup, cat) != bnd(m, k):
                    raise IncompatibleAssignment(
                        f"boundary mismatch at atom {w}, level {k}, side {side}")


def make_cube(cat: OmegaCategory, n: int, images, verify: bool = False) -> SingularCube:
    images = tuple(images)
    if verify:
        verify_cube(cat, n, images)
    return SingularCube(cat, n, images)


# ---------------------------------------------------------------------------
# concatenations +_j through the doubled cube

_GLUE_RECIPE: dict = {}


def _glue_recipe(n: int, j: int):
    """Per-word programs for +_j: either a direct copy from one operand or a
    postfix pasting program whose leaves index into the operand tables."""
    key = (n, j)
    got = _GLUE_RECIPE.get(key)
    if got is not None:
        return got
    D = double_cube(n, j)
    site = PrecubSite(D, name=f"double:{n}:{j}")
    idx = word_index(n)

    def retag(cell: str):
        ch = cell[j - 1]
        if ch in "-a":
            return (0, idx[cell[: j - 1] + ("-" if ch == "-" else "0") + cell[j:]])
        if ch == "m":
            return (0, idx[cell[: j - 1] + "+" + cell[j:]])
        return (1, idx[cell[: j - 1] + ("0" if ch == "b" else "+") + cell[j:]])

    recipe = []
    for w in words(n):
        ch = w[j - 1]
        if ch == "-":
            recipe.append((0, idx[w]))
        elif ch == "+":
            recipe.append((1, idx[w]))
        else:
            ca = w[: j - 1] + "a" + w[j:]
            cb = w[: j - 1] + "b" + w[j:]
            cells = site.closure(ca) | site.closure(cb)
            tree = cells_decompose(site, cells)
            if tree is None:
                raise CornerError(f"doubled cube failed to decompose at {w}")
            ops: list[tuple] = []

            def walk(t):
                if t.is_leaf:
                    ops.append((-1,) + retag(t.cell))
                else:
                    walk(t.left)
                    walk(t.right)
                    ops.append((t.level, 0, 0))

            walk(tree)
            recipe.append((2, tuple(ops)))
    _GLUE_RECIPE[key] = recipe
    return recipe


def cubical_compose(x: SingularCube, y: SingularCube, j: int) -> SingularCube:
    """x +_j y; defined when the j-faces match."""
    if x.n != y.n or x.cat is not y.cat:
        raise NotComposable("operands of +_j must be cubes of the same degree")
    n = x.n
    if not 1 <= j <= n:
        raise BadIndex(f"+_j index {j} out of 1..{n}")
    cat = x.cat
    memo = cat._nerve_cache.setdefault("glue", {})
    mkey = (x, y, j)
    got = memo.get(mkey)
    if got is not None:
        return got
    if len(memo) > 300_000:
        memo.clear()
    if face(x, j, "+") != face(y, j, "-"):
        raise NotComposable(f"d{j}+ of the left must equal d{j}- of the right")
    recipe = _glue_recipe(n, j)
    tabs = (x.images, y.images)
    compose = cat.compose
    out = []
    for item in recipe:
        if item[0] != 2:
            out.append(tabs[item[0]][item[1]])
            continue
        st = []
        push = st.append
        for level, side, k in item[1]:
            if level < 0:
                push(tabs[side][k])
            else:
                b = st.pop()
                a = st.pop()
                v = compose(a, b, level)
                if v is None:
                    raise IncompatibleAssignment(
                        f"+_{j} images not composable at level {level}")
                push(v)
        out.append(st[0])
    got = SingularCube(cat, n, tuple(out))
    memo[mkey] = got
    return got


# ---------------------------------------------------------------------------
# branching / merging / thin classification

_BRANCH_PATHS: dict = {}


def _corner_steps(n: int, sign: str):
    """DFS step table for monotone paths out of -_n (sign '-') or the
    reversed paths into +_n (sign '+')."""
    key = (n, sign)
    got = _BRANCH_PATHS.get(key)
    if got is None:
        idx = word_index(n)
        steps = {}
        for v in itertools.product("-+", repeat=n):
            v = "".join(v)
            out = []
            for i, ch in enumerate(v):
                if ch == sign:
                    e = v[:i] + "0" + v[i + 1:]
                    nxt = v[:i] + ("+" if sign == "-" else "-") + v[i + 1:]
                    out.append((idx[e], nxt))
            steps[v] = out
        got = steps
        _BRANCH_PATHS[key] = got
    return got


def _corner_ok(x: SingularCube, sign: str) -> bool:
    # every 1-morphism of I^n leaving -_n (resp. entering +_n) must map to a
    # 1-dimensional morphism; paths are checked prefix by prefix
    cat = x.cat
    steps = _corner_steps(x.n, sign)

    def dfs(v, acc):
        for eidx, nxt in steps[v]:
            img = x.images[eidx]
            if sign == "-":
                m = img if acc is None else cat.compose(acc, img, 0)
            else:
                m = img if acc is None else cat.compose(img, acc, 0)
            if m is None:
                raise CornerError("functor image failed to compose along a path")
            if cat.dim(m) != 1:
                return False
            if not dfs(nxt, m):
                return False
        return True

    return dfs(("-" if sign == "-" else "+") * x.n, None)


def classify(x: SingularCube) -> CubeClass:
    """Branching/merging membership and thinness of a cube."""
    if not x.cat.is_non_contracting:
        raise NotNonContracting("classification needs a non-contracting category")
    if x._cls is None:
        thin = x.cat.dim(x.interior) < x.n
        if x.n == 0:
            cls = CubeClass(True, True, False)
        else:
            cls = CubeClass(_corner_ok(x, "-"), _corner_ok(x, "+"), thin)
        x._cls = cls
    return x._cls


def is_branching(x: SingularCube) -> bool:
    return classify(x).branching


def is_thin(x: SingularCube) -> bool:
    return x.cat.dim(x.interior) < x.n


# ---------------------------------------------------------------------------
# shells and fillers


@dataclass
class Shell:
    """2(n+1) degree-n cubes x_i^± satisfying the shell relations."""

    n: int
    faces: dict  # (i, sign) -> SingularCube

    def check(self) -> None:
        for j in range(2, self.n + 2):
            for i in range(1, j):
                for a in "-+":
                    for b in "-+":
                        if face(self.faces[(j, b)], i, a) != \
                                face(self.faces[(i, a)], j - 1, b):
                            raise NotFillable(
                                f"shell relation fails at i={i},j={j},{a}{b}")


def _shell_images(shell: Shell, interior: int) -> tuple:
    n1 = shell.n + 1
    out = []
    for w in words(n1):
        for i, ch in enumerate(w, start=1):
            if ch != "0":
                out.append(shell.faces[(i, ch)].images[word_index(n1 - 1)[_del(w, i)]])
                break
        else:
            out.append(interior)
    return tuple(out)


def _shell_boundary_eval(shell: Shell, side: str) -> int:
    n1 = shell.n + 1
    idx = word_index(n1)
    imgs = _shell_images(shell, -1)  # interior slot never read below

    def lookup(w):
        m = imgs[idx[w]]
        if m == -1:
            raise CornerError("interior atom reached while evaluating a shell")
        return m

    cat = next(iter(shell.faces.values())).cat
    tree = atom_boundary_tree(n1, "0" * n1, n1 - 1, side)
    return _eval_words(tree, lookup, cat)


def fill_shell(shell: Shell, u: int) -> SingularCube:
    """The unique cube with the given fillable shell and interior u."""
    shell.check()
    cat = next(iter(shell.faces.values())).cat
    n1 = shell.n + 1
    fam_src = [(i, "-" if i % 2 == 1 else "+") for i in range(1, n1 + 1)]
    fam_tgt = [(i, "+" if i % 2 == 1 else "-") for i in range(1, n1 + 1)]
    nonthin_src = [key for key in fam_src if not is_thin(shell.faces[key])]
    nonthin_tgt = [key for key in fam_tgt if not is_thin(shell.faces[key])]
    if len(nonthin_src) != 1 or len(nonthin_tgt) != 1:
        raise NotFillable(
            f"{len(nonthin_src)}/{len(nonthin_tgt)} non-thin faces per parity class")
    if cat.dim(u) > n1:
        raise SourceMismatch(f"interior has dimension > {n1}")
    if cat.s(u, shell.n) != shell.faces[nonthin_src[0]].interior:
        raise SourceMismatch("s_n of the interior does not match the shell")
    if cat.t(u, shell.n) != shell.faces[nonthin_tgt[0]].interior:
        raise SourceMismatch("t_n of the interior does not match the shell")
    return SingularCube(cat, n1, _shell_images(shell, u))


def fill_thin_shell(shell: Shell) -> SingularCube:
    """Fill a shell whose filler must be thin: the interior is forced to be
    the common value of the two composite boundaries."""
    shell.check()
    cat = next(iter(shell.faces.values())).cat
    src = _shell_boundary_eval(shell, "-")
    tgt = _shell_boundary_eval(shell, "+")
    if src != tgt:
        raise NotFillable("composite boundaries differ; no thin filler")
    return SingularCube(cat, shell.n + 1, _shell_images(shell, src))


def shell_of(x: SingularCube) -> Shell:
    return Shell(x.n - 1, {(i, s): face(x, i, s)
                           for i in range(1, x.n + 1) for s in "-+"})


# ---------------------------------------------------------------------------
# enumeration


def enumerate_cubes(cat: OmegaCategory, n: int, which: str = "all",
                    cfg: Config | None = None) -> list[SingularCube]:
    """All degree-n cubes of the nerve, assembled shell by shell.

    `which` filters to 'branching' or 'merging' (classification applies to
    non-contracting categories only).
    """
    cfg = cfg or default_config()
    if n > cfg.max_dim:
        raise DimensionCap(f"degree {n} exceeds max_dim {cfg.max_dim}")
    key = ("enum", n)
    full = cat._nerve_cache.get(key)
    if full is None:
        full = _enumerate_all(cat, n, cfg)
        cat._nerve_cache[key] = full
    if which == "all":
        return list(full)
    if which == "branching":
        return [x for x in full if classify(x).branching]
    if which == "merging":
        return [x for x in full if classify(x).merging]
    raise CornerError(f"unknown filter {which!r}")


def _compile_tree(n: int, side: str):
    """Flatten the boundary tree of the degree-n interior atom into a
    postfix program whose leaves are (face slot, subword index) triples."""
    tree = atom_boundary_tree(n, "0" * n, n - 1, side)
    sub = word_index(n - 1)
    ops: list[tuple] = []
    leaves: list[tuple] = []

    def walk(t: PastingTree):
        if t.is_leaf:
            w = t.cell
            for i, ch in enumerate(w, start=1):
                if ch != "0":
                    ops.append((-1, len(leaves)))
                    leaves.append((i, ch, sub[_del(w, i)]))
                    return
            raise CornerError("interior atom inside its own boundary tree")
        walk(t.left)
        walk(t.right)
        ops.append((t.level, -1))

    walk(tree)
    return ops, leaves


def _run_prog(ops, vals, cat):
    st = []
    push = st.append
    for level, slot in ops:
        if level < 0:
            push(vals[slot])
        else:
            b = st.pop()
            a = st.pop()
            v = cat.compose(a, b, level)
            if v is None:
                raise IncompatibleAssignment(
                    f"shell images not composable at level {level}")
            push(v)
    return st[0]


def _enumerate_all(cat: OmegaCategory, n: int, cfg: Config) -> list[SingularCube]:
    if n == 0:
        return [SingularCube(cat, 0, (m,)) for m in cat.by_dim.get(0, [])]
    prev = enumerate_cubes(cat, n - 1, "all", cfg)
    slots = [(j, s) for j in range(1, n + 1) for s in "-+"]
    fcache: dict = {}

    def faces_of(z):
        got = fcache.get(z)
        if got is None:
            got = {(i, a): face(z, i, a) for i in range(1, n) for a in "-+"}
            fcache[z] = got
        return got

    # index candidates for slot j >= 2 by their forced lower faces
    slot_index: dict = {}

    def index_for(j):
        got = slot_index.get(j)
        if got is None:
            got = {}
            for z in prev:
                fz = faces_of(z)
                keym = tuple(fz[(i, a)] for i in range(1, j) for a in "-+")
                got.setdefault(keym, []).append(z)
            slot_index[j] = got
        return got

    ops_s, leaves_s = _compile_tree(n, "-")
    ops_t, leaves_t = _compile_tree(n, "+")
    # interior-assembly program: per word, the face slot providing its image
    asm = []
    subidx = word_index(n - 1)
    for w in words(n):
        for i, ch in enumerate(w, start=1):
            if ch != "0":
                asm.append((i, ch, subidx[_del(w, i)]))
                break
        else:
            asm.append(None)
    out = []
    budget = cfg.budget
    memo_s: dict = {}
    memo_t: dict = {}
    st_idx = cat.st_index(n)

    def extend(k, chosen):
        if k == len(slots):
            vals = tuple(chosen[(i, ch)].images[si] for i, ch, si in leaves_s)
            src = memo_s.get(vals, -1)
            if src < 0:
                src = _run_prog(ops_s, vals, cat)
                memo_s[vals] = src
            vals = tuple(chosen[(i, ch)].images[si] for i, ch, si in leaves_t)
            tgt = memo_t.get(vals, -1)
            if tgt < 0:
                tgt = _run_prog(ops_t, vals, cat)
                memo_t[vals] = tgt
            interiors = []
            if src == tgt:
                interiors.append(src)
            interiors.extend(st_idx.get((src, tgt), ()))
            if not interiors:
                return
            base = [0 if slot is None else chosen[(slot[0], slot[1])].images[slot[2]]
                    for slot in asm]
            hole = asm.index(None)
            for u in interiors:
                base[hole] = u
                out.append(SingularCube(cat, n, tuple(base)))
            if len(out) > budget:
                raise CornerError(f"nerve enumeration exceeded budget {budget}")
            return
        j, beta = slots[k]
        if j == 1:
            cands = prev
        else:
            fz = [faces_of(chosen[(i, a)]) for i in range(1, j) for a in "-+"]
            want = tuple(f[(j - 1, beta)] for f in fz)
            cands = index_for(j).get(want, ())
        for z in cands:
            chosen[(j, beta)] = z
            extend(k + 1, chosen)
        chosen.pop((j, beta), None)

    extend(0, {})
    out.sort(key=lambda c: c.images)
    return out


# ---------------------------------------------------------------------------
# exhaustive-by-default law harness


def _pairs(cubes, j):
    """Composable pairs (x, y) with d_j^+ x = d_j^- y."""
    left: dict = {}
    for z in cubes:
        left.setdefault(face(z, j, "-"), []).append(z)
    out = []
    for z in cubes:
        for w in left.get(face(z, j, "+"), ()):
            out.append((z, w))
    return out


def axiom_report(cat: OmegaCategory, n_max: int, sample_budget=None, seed: int = 0,
                 cfg: Config | None = None) -> dict:
    """Check the cubical-set and cubical-omega-category laws on the nerve.

    With sample_budget=None every law runs over every enumerated operand
    tuple up to degree n_max.  With a budget, the cube layers are first
    subsampled (seed-deterministically) so that pair/triple streams stay
    bounded, and each law checks at most sample_budget instances.
    Returns a per-law report of checked/failed counts.
    """
    cfg = cfg or default_config()
    cubes = {m: enumerate_cubes(cat, m, "all", cfg) for m in range(n_max + 1)}
    if sample_budget is not None:
        rng = random.Random(f"{seed}|layers")
        layer_cap = max(40, int(sample_budget ** 0.5))
        for m in cubes:
            if len(cubes[m]) > layer_cap:
                cubes[m] = sorted(rng.sample(cubes[m], layer_cap),
                                  key=lambda c: c.images)
    report: dict = {}
    failures: list[str] = []

    def run(law, instances, check):
        checked = failed = 0
        stream = iter(instances)
        if sample_budget is not None:
            stream = itertools.islice(stream, sample_budget)
        for inst in stream:
            checked += 1
            try:
                good = check(*inst)
            except CornerError:
                good = False  # an operator blew up on a legal operand
            if not good:
                failed += 1
                if len(failures) < 10:
                    failures.append(f"{law}: {inst!r}")
        report[law] = {"checked": checked, "failed": failed}

    def all_cubes(min_deg=0, max_deg=None):
        hi = n_max if max_deg is None else max_deg
        for m in range(min_deg, hi + 1):
            yield from cubes[m]

    # --- cubical set laws ------------------------------------------------
    run("C1 faces commute",
        ((x, i, j, a, b) for x in all_cubes(2) for j in range(2, x.n + 1)
         for i in range(1, j) for a in "-+" for b in "-+"),
        lambda x, i, j, a, b:
        face(face(x, j, b), i, a) == face(face(x, i, a), j - 1, b))
    run("C2 degeneracies commute",
        ((x, i, j) for x in all_cubes(0) for j in range(1, x.n + 2)
         for i in range(1, j + 1)),
        lambda x, i, j: degeneracy(degeneracy(x, j), i)
        == degeneracy(degeneracy(x, i), j + 1))
    run("C3/C4 face of degeneracy",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 2)
         for i in range(1, x.n + 2) if i != j for a in "-+"),
        lambda x, i, j, a: face(degeneracy(x, j), i, a)
        == (degeneracy(face(x, i, a), j - 1) if i < j
            else degeneracy(face(x, i - 1, a), j)))
    run("C5 face of own degeneracy",
        ((x, i, a) for x in all_cubes(0) for i in range(1, x.n + 2) for a in "-+"),
        lambda x, i, a: face(degeneracy(x, i), i, a) == x)

    # --- connection laws (items 1-10) ------------------------------------
    run("1 d_i Γ_j (i<j)",
        ((x, i, j, a, b) for x in all_cubes(2) for j in range(2, x.n + 1)
         for i in range(1, j) for a in "-+" for b in "-+"),
        lambda x, i, j, a, b: face(connection(x, j, b), i, a)
        == connection(face(x, i, a), j - 1, b))
    run("2 d_i Γ_j (i>j+1)",
        ((x, i, j, a, b) for x in all_cubes(1) for j in range(1, x.n + 1)
         for i in range(j + 2, x.n + 2) for a in "-+" for b in "-+"),
        lambda x, i, j, a, b: face(connection(x, j, b), i, a)
        == connection(face(x, i - 1, a), j, b))
    run("3 d_j Γ_j same sign",
        ((x, j, a) for x in all_cubes(1) for j in range(1, x.n + 1) for a in "-+"),
        lambda x, j, a: face(connection(x, j, a), j, a) == x
        and face(connection(x, j, a), j + 1, a) == x)
    run("4 d_j Γ_j mixed sign",
        ((x, j, a) for x in all_cubes(1) for j in range(1, x.n + 1) for a in "-+"),
        lambda x, j, a: face(connection(x, j, "-" if a == "+" else "+"), j, a)
        == degeneracy(face(x, j, a), j)
        and face(connection(x, j, "-" if a == "+" else "+"), j + 1, a)
        == degeneracy(face(x, j, a), j))
    run("5 Γ_i Γ_j same sign (i<=j)",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 1)
         for i in range(1, j + 1) for a in "-+"),
        lambda x, i, j, a: connection(connection(x, j, a), i, a)
        == connection(connection(x, i, a), j + 1, a))
    run("6 Γ_i Γ_j mixed (i<j)",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 1)
         for i in range(1, j) for a in "-+"),
        lambda x, i, j, a: connection(connection(x, j, "-" if a == "+" else "+"), i, a)
        == connection(connection(x, i, a), j + 1, "-" if a == "+" else "+"))
    run("7 Γ_i Γ_j mixed (i>j+1)",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 1)
         for i in range(j + 2, x.n + 2) for a in "-+"),
        lambda x, i, j, a: connection(connection(x, j, "-" if a == "+" else "+"), i, a)
        == connection(connection(x, i - 1, a), j, "-" if a == "+" else "+"))
    run("8 Γ_i ε_j (i<j)",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 2)
         for i in range(1, min(j, x.n + 1)) for a in "-+"),
        lambda x, i, j, a: connection(degeneracy(x, j), i, a)
        == degeneracy(connection(x, i, a), j + 1))
    run("9 Γ_i ε_i",
        ((x, i, a) for x in all_cubes(0) for i in range(1, x.n + 2) for a in "-+"),
        lambda x, i, a: connection(degeneracy(x, i), i, a)
        == degeneracy(degeneracy(x, i), i))
    run("10 Γ_i ε_j (i>j)",
        ((x, i, j, a) for x in all_cubes(1) for j in range(1, x.n + 2)
         for i in range(j + 1, x.n + 2) for a in "-+"),
        lambda x, i, j, a: connection(degeneracy(x, j), i, a)
        == degeneracy(connection(x, i - 1, a), j))

    # --- composition laws (items 11-21) -----------------------------------
    def triples(m, j):
        left: dict = {}
        right: dict = {}
        for z in cubes[m]:
            left.setdefault(face(z, j, "-"), []).append(z)
            right.setdefault(face(z, j, "+"), []).append(z)
        for y in cubes[m]:
            for x in right.get(face(y, j, "-"), ()):
                for z in left.get(face(y, j, "+"), ()):
                    yield (x, y, z, j)

    def pair_insts():
        for m in range(1, n_max + 1):
            for j in range(1, m + 1):
                for (x, y) in _pairs(cubes[m], j):
                    yield (x, y, j)

    run("11 associativity of +_j",
        (t for m in range(1, n_max + 1) for j in range(1, m + 1)
         for t in triples(m, j)),
        lambda x, y, z, j: cubical_compose(cubical_compose(x, y, j), z, j)
        == cubical_compose(x, cubical_compose(y, z, j), j))
    run("12 d_j^- of +_j", pair_insts(),
        lambda x, y, j: face(cubical_compose(x, y, j), j, "-") == face(x, j, "-"))
    run("13 d_j^+ of +_j", pair_insts(),
        lambda x, y, j: face(cubical_compose(x, y, j), j, "+") == face(y, j, "+"))
    run("14 d_i of +_j (i≠j)",
        ((x, y, j, i, a) for (x, y, j) in pair_insts()
         for i in range(1, x.n + 1) if i != j for a in "-+"),
        lambda x, y, j, i, a: face(cubical_compose(x, y, j), i, a)
        == cubical_compose(face(x, i, a), face(y, i, a), j - 1 if i < j else j))
    def interchange_insts():
        # both orientations must compose: the axiom equates the two members
        # only when each makes sense
        for m in range(1, n_max + 1):
            for i in range(1, m + 1):
                ps = _pairs(cubes[m], i)
                for j in range(1, m + 1):
                    if j == i:
                        continue
                    by_minus: dict = {}
                    for (z, t) in ps:
                        by_minus.setdefault(
                            (face(z, j, "-"), face(t, j, "-")), []).append((z, t))
                    for (x, y) in ps:
                        key = (face(x, j, "+"), face(y, j, "+"))
                        for (z, t) in by_minus.get(key, ()):
                            yield (x, y, z, t, i, j)
    run("15 interchange",
        interchange_insts(),
        lambda x, y, z, t, i, j: cubical_compose(
            cubical_compose(x, y, i), cubical_compose(z, t, i), j)
        == cubical_compose(cubical_compose(x, z, j), cubical_compose(y, t, j), i))
    run("16 ε_i of +_j",
        ((x, y, j, i) for (x, y, j) in pair_insts() for i in range(1, x.n + 2)),
        lambda x, y, j, i: degeneracy(cubical_compose(x, y, j), i)
        == cubical_compose(degeneracy(x, i), degeneracy(y, i),
                           j + 1 if i <= j else j))
    run("17 Γ_i of +_j (i≠j)",
        ((x, y, j, i, a) for (x, y, j) in pair_insts()
         for i in range(1, x.n + 1) if i != j for a in "-+"),
        lambda x, y, j, i, a: connection(cubical_compose(x, y, j), i, a)
        == cubical_compose(connection(x, i, a), connection(y, i, a),
                           j + 1 if i < j else j))

    def matrix2(tl, tr, bl, br, jj):
        # [[tl tr],[bl br]] with columns joined by +_jj, rows by +_(jj+1)
        return cubical_compose(cubical_compose(bl, tl, jj),
                               cubical_compose(br, tr, jj), jj + 1)

    run("18 Γ_j^- of +_j", pair_insts(),
        lambda x, y, j: connection(cubical_compose(x, y, j), j, "-")
        == matrix2(degeneracy(y, j + 1), connection(y, j, "-"),
                   connection(x, j, "-"), degeneracy(y, j), j))
    run("19 Γ_j^+ of +_j", pair_insts(),
        lambda x, y, j: connection(cubical_compose(x, y, j), j, "+")
        == matrix2(degeneracy(x, j), connection(y, j, "+"),
                   connection(x, j, "+"), degeneracy(x, j + 1), j))
    run("20 Γ_j^+ +_(j+1) Γ_j^- = ε_j",
        ((x, j) for x in all_cubes(1) for j in range(1, x.n + 1)),
        lambda x, j: cubical_compose(connection(x, j, "+"), connection(x, j, "-"),
                                     j + 1) == degeneracy(x, j)
        and cubical_compose(connection(x, j, "+"), connection(x, j, "-"), j)
        == degeneracy(x, j + 1))
    run("21 degenerate units of +_i",
        ((x, i) for x in all_cubes(1) for i in range(1, x.n + 1)),
        lambda x, i: cubical_compose(degeneracy(face(x, i, "-"), i), x, i) == x
        and cubical_compose(x, degeneracy(face(x, i, "+"), i), i) == x)

    ok = all(v["failed"] == 0 for v in report.values())
    return {"ok": ok, "laws": report, "failures": failures,
            "degrees": {m: len(cubes[m]) for m in cubes}}
