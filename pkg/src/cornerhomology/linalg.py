"""Exact integer linear algebra: Smith normal form, lattice solving, homology.

Everything runs on arbitrary-precision Python ints.  Sparse vectors are plain
dicts {row_index: nonzero_coefficient}; matrices are lists of such columns.
Homology of a (possibly quotiented) chain complex is computed by presenting
kernel/image lattices exactly and reading Betti numbers and torsion off the
invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import IllFormedComplex

# ---------------------------------------------------------------------------
# sparse vector helpers


def vec_axpy(dst: dict, k: int, src: dict) -> None:
    """dst += k * src, in place, dropping zeros."""
    if k == 0:
        return
    for r, v in src.items():
        nv = dst.get(r, 0) + k * v
        if nv:
            dst[r] = nv
        else:
            dst.pop(r, None)


def vec_scale(v: dict, k: int) -> dict:
    return {r: k * c for r, c in v.items()} if k else {}


def vec_combine(a: int, u: dict, b: int, w: dict) -> dict:
    out = vec_scale(u, a)
    vec_axpy(out, b, w)
    return out


def xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# incremental column echelon form over Z with expression tracking


class IntLattice:
    """Column lattice in Z^rows maintained in echelon form.

    Each basis vector keeps an expression over the originally inserted
    columns, so membership tests come with certificates and the kernel of the
    inserted column family can be read off insertion by insertion.
    """

    def __init__(self):
        self.basis = {}  # leading row -> (vector dict, expression dict)

    def insert(self, vec: dict, expr: dict):
        """Insert a column; return a kernel expression if it reduces to zero.

        The returned dict e satisfies sum_j e[j] * col_j = 0 and has a unit
        coefficient on the newly inserted tag, so collected returns form a
        basis of the kernel lattice.
        """
        v = dict(vec)
        e = dict(expr)
        while v:
            r = min(v)
            if r not in self.basis:
                if v[r] < 0:
                    v = vec_scale(v, -1)
                    e = vec_scale(e, -1)
                self.basis[r] = (v, e)
                return None
            w, ew = self.basis[r]
            p, q = w[r], v[r]
            if q % p == 0:
                k = -(q // p)
                vec_axpy(v, k, w)
                vec_axpy(e, k, ew)
            else:
                g, a, b = xgcd(p, q)
                nw = vec_combine(a, w, b, v)
                ne = vec_combine(a, ew, b, e)
                v = vec_combine(p // g, v, -(q // g), w)
                e = vec_combine(p // g, e, -(q // g), ew)
                self.basis[r] = (nw, ne)
        return e

    def solve(self, target: dict):
        """Express target over the inserted columns; None if not in lattice."""
        v = dict(target)
        e: dict = {}
        while v:
            r = min(v)
            if r not in self.basis:
                return None
            w, ew = self.basis[r]
            if v[r] % w[r] != 0:
                return None
            k = v[r] // w[r]
            vec_axpy(v, -k, w)
            vec_axpy(e, k, ew)
        return e

    def contains(self, target: dict) -> bool:
        return self.solve(target) is not None

    def vectors(self):
        return [v for v, _ in self.basis.values()]


def lattice_of(columns) -> IntLattice:
    lat = IntLattice()
    for j, col in enumerate(columns):
        lat.insert(col, {j: 1})
    return lat


def kernel_basis(columns) -> list[dict]:
    """Basis of {z : sum_j z[j]*col_j = 0} as sparse coefficient dicts."""
    lat = IntLattice()
    out = []
    for j, col in enumerate(columns):
        e = lat.insert(col, {j: 1})
        if e is not None:
            out.append(e)
    return out


def solve_columns(columns, target: dict):
    """Integer solution z of sum_j z[j]*col_j = target, or None."""
    return lattice_of(columns).solve(target)


def span_basis(columns) -> list[dict]:
    """Echelon basis of the lattice spanned by the columns (same span)."""
    lat = IntLattice()
    for col in columns:
        if col:
            lat.insert(col, {})
    return [dict(v) for _, (v, _) in sorted(lat.basis.items())]


# ---------------------------------------------------------------------------
# Smith normal form

def _matmul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    if Bt[j]:
                        Oi[j] += a * Bt[j]
    return out


def smith_normal_form(M):
    """Diagonalize an integer matrix: returns (U, D, V) with U*M*V = D.

    U and V are unimodular and the diagonal of D is the divisibility chain
    d1 | d2 | ... (nonnegative).  Dense algorithm, meant for small matrices;
    the homology pipeline uses the sparse lattice machinery instead.
    """
    A = [list(row) for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addrow(dst, src, k):  # row_dst += k*row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def addcol(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def negrow(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while True:
        pi = pj = -1
        best = None
        for i in range(t, n):
            for j in range(t, m):
                a = abs(A[i][j])
                if a and (best is None or a < best):
                    best, pi, pj = a, i, j
        if best is None:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        if A[t][t] < 0:
            negrow(t)
        dirty = False
        for i in range(t + 1, n):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                addrow(i, t, -q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, m):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                addcol(j, t, -q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot divides its row/col; enforce divisibility into the rest
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if A[i][j] % A[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            addrow(t, bad, 1)
            continue
        t += 1
    D = A
    return U, D, V


def diagonal_of(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def invariant_factors(columns, nrows=None) -> list[int]:
    """Nonzero invariant factors of a sparse integer column family.

    Classic alternating row/column elimination at a smallest pivot,
    maintained sparsely (dict-of-columns plus a row occupancy index); the
    divisibility chain is fixed up at the end with gcd/lcm swaps.
    """
    cols = {j: dict(c) for j, c in enumerate(columns) if c}
    rows: dict[object, set] = {}
    for j, c in cols.items():
        for r in c:
            rows.setdefault(r, set()).add(j)

    def set_entry(j, r, v):
        col = cols[j]
        if v:
            if r not in col:
                rows.setdefault(r, set()).add(j)
            col[r] = v
        else:
            if r in col:
                del col[r]
                rows[r].discard(j)

    def col_axpy(dst, k, src):  # col_dst += k*col_src
        if k == 0:
            return
        for r, v in list(cols[src].items()):
            set_entry(dst, r, cols[dst].get(r, 0) + k * v)

    def row_axpy(dst, k, src):  # row_dst += k*row_src (across all live cols)
        if k == 0:
            return
        for j in list(rows.get(src, ())):
            set_entry(j, dst, cols[j].get(dst, 0) + k * cols[j][src])

    factors = []
    while True:
        best = None
        for j, c in cols.items():
            if not c:
                continue
            for r, v in c.items():
                a = abs(v)
                if best is None or a < best[0]:
                    best = (a, j, r)
                    if a == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pj, pr = best
        while True:
            p = cols[pj][pr]
            done = True
            for j in list(rows.get(pr, ())):
                if j == pj:
                    continue
                v = cols[j].get(pr, 0)
                if not v:
                    continue
                col_axpy(j, -(v // p), pj)
                if cols[j].get(pr, 0):
                    # remainder smaller than p: swap pivot role
                    pj = j
                    p = cols[pj][pr]
                    done = False
            if not done:
                continue
            for r, v in list(cols[pj].items()):
                if r == pr or not v:
                    continue
                row_axpy(r, -(v // p), pr)
                if cols[pj].get(r, 0):
                    pr = r
                    p = cols[pj][pr]
                    done = False
            if done:
                break
        factors.append(abs(cols[pj][pr]))
        set_entry(pj, pr, 0)
        if not cols[pj]:
            del cols[pj]
        cols = {j: c for j, c in cols.items() if c}
        rows = {}
        for j, c in cols.items():
            for r in c:
                rows.setdefault(r, set()).add(j)

    factors.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            a, b = factors[i], factors[i + 1]
            if b % a != 0:
                g = gcd(a, b)
                factors[i], factors[i + 1] = g, a * b // g
                changed = True
        factors.sort()
    return factors


# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """Bounded complex of free Z-modules with chosen ordered bases.

    basis[n] is the ordered list of degree-n basis labels; boundary[n] is the
    list of sparse columns of D_n (rows index basis[n-1]).  Degrees beyond
    len(basis)-1 are zero.
    """

    basis: list[list[str]]
    boundary: list[list[dict]]

    def dim(self, n: int) -> int:
        return len(self.basis[n]) if 0 <= n < len(self.basis) else 0

    def columns(self, n: int) -> list[dict]:
        if 1 <= n < len(self.boundary):
            return self.boundary[n]
        return [{} for _ in range(self.dim(n))]

    def relator_columns(self, n: int) -> list[dict]:
        return []


@dataclass
class QuotientComplex(ChainComplex):
    """Chain complex together with per-degree relator vectors.

    Degree-n chains are Z^{basis[n]} / span(relators[n]); the boundary must
    map degree-(n+1) relators into the degree-n relator span.
    """

    relators: list[list[dict]] = field(default_factory=list)

    def relator_columns(self, n: int) -> list[dict]:
        if 0 <= n < len(self.relators):
            return self.relators[n]
        return []


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...]

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologySummary:
    groups: tuple[HomologyGroup, ...]

    def group(self, n: int) -> HomologyGroup:
        return self.groups[n]

    def as_json(self):
        return [
            {"degree": g.degree, "betti": g.betti, "torsion": list(g.torsion)}
            for g in self.groups
        ]

    def __str__(self):
        return ", ".join(f"H{g.degree} = {g}" for g in self.groups)

    def isomorphic(self, other: "HomologySummary", degrees=None) -> bool:
        ds = degrees if degrees is not None else range(
            min(len(self.groups), len(other.groups)))
        return all(
            self.groups[n].betti == other.groups[n].betti
            and self.groups[n].torsion == other.groups[n].torsion
            for n in ds
        )


def _verify_complex(cx: ChainComplex, up_to: int) -> None:
    top = min(up_to + 1, len(cx.basis) - 1)
    for n in range(1, top + 1):
        cols = cx.columns(n)
        rel_lat = lattice_of(span_basis(cx.relator_columns(n - 1))) \
            if cx.relator_columns(n - 1) else None
        # relators of degree n must map into the degree n-1 relator span
        for r in cx.relator_columns(n):
            img: dict = {}
            for j, c in r.items():
                vec_axpy(img, c, cols[j])
            if img and (rel_lat is None or not rel_lat.contains(img)):
                raise IllFormedComplex(
                    f"degree-{n} relator leaves the relator span in degree {n-1}")
        if n >= 2:
            prev = cx.columns(n - 1)
            prev_rel = span_basis(cx.relator_columns(n - 2))
            prev_lat = lattice_of(prev_rel) if prev_rel else None
            for col in cols:
                img = {}
                for j, c in col.items():
                    vec_axpy(img, c, prev[j])
                if img and (prev_lat is None or not prev_lat.contains(img)):
                    raise IllFormedComplex(f"d∘d != 0 between degrees {n} and {n-2}")


def complex_homology(cx: ChainComplex, up_to: int, verify: bool = True) -> HomologySummary:
    """Exact H_n for 0 <= n <= up_to, with relators folded into the images.

    H_n = ker(q ∘ D_n) / (im D_{n+1} + span relators_n), where q is the
    quotient by the degree-(n-1) relator span.  All lattices are handled by
    integer echelon forms; torsion comes out exact.
    """
    if verify:
        _verify_complex(cx, up_to)
    groups = []
    for n in range(up_to + 1):
        b_n = cx.dim(n)
        if b_n == 0:
            groups.append(HomologyGroup(n, 0, ()))
            continue
        d_cols = cx.columns(n)
        rel_prev = span_basis(cx.relator_columns(n - 1)) if n >= 1 else []
        # kernel of x -> D_n x  modulo span(rel_prev): stack both column
        # families and keep the x-part of the kernel expressions
        lat = IntLattice()
        gens = []
        if n == 0:
            gens = [{j: 1} for j in range(b_n)]
        else:
            for j in range(b_n):
                e = lat.insert(d_cols[j], {j: 1})
                if e is not None:
                    gens.append(e)
            for k, r in enumerate(rel_prev):
                e = lat.insert(r, {b_n + k: 1})
                if e is not None:
                    gens.append({j: c for j, c in e.items() if j < b_n})
        # re-echelon the generators into an honest basis of the kernel lattice
        klat = IntLattice()
        for g in gens:
            klat.insert(dict(g), {})
        kbasis = sorted(klat.vectors(), key=lambda v: min(v) if v else -1)
        kbasis = [v for v in kbasis if v]
        solver = IntLattice()
        for i, v in enumerate(kbasis):
            solver.insert(dict(v), {i: 1})
        # image generators: D_{n+1} columns plus degree-n relators, reduced
        # to an echelon spanning set before presenting the quotient
        img_cols = span_basis(cx.columns(n + 1) + cx.relator_columns(n))
        pres = []
        for c in img_cols:
            expr = solver.solve(c)
            if expr is None:
                raise IllFormedComplex(
                    f"degree-{n} image generator is not a cycle of the quotient complex")
            if expr:
                pres.append(expr)
        facs = invariant_factors(pres)
        betti = len(kbasis) - len(facs)
        torsion = tuple(f for f in facs if f > 1)
        groups.append(HomologyGroup(n, betti, torsion))
    return HomologySummary(tuple(groups))
