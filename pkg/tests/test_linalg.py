from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerhomology.errors import IllFormedComplex
from cornerhomology.linalg import (
    ChainComplex,
    IntLattice,
    QuotientComplex,
    complex_homology,
    diagonal_of,
    invariant_factors,
    kernel_basis,
    smith_normal_form,
    solve_columns,
    span_basis,
)

try:
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf
    from sympy import Matrix as SympyMatrix

    HAVE_SYMPY = True
except Exception:  # pragma: no cover
    HAVE_SYMPY = False


def det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    out = Fraction(sign)
    for c in range(n):
        out *= A[c][c]
    return out


def test_snf_worked_example():
    # hand row-reduction: [[2,4],[6,8]] ~ diag(2, 4): the gcd of entries is
    # 2 and the determinant is -8, so the factors are 2 and 8/2
    U, D, V = smith_normal_form([[2, 4], [6, 8]])
    assert diagonal_of(D) == [2, 4]


def test_snf_zero_and_identity():
    U, D, V = smith_normal_form([[0, 0], [0, 0]])
    assert diagonal_of(D) == [0, 0] and U == [[1, 0], [0, 1]]
    U, D, V = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert diagonal_of(D) == [1, 1, 1]


@st.composite
def small_matrices(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    m = draw(st.integers(min_value=1, max_value=4))
    return [[draw(st.integers(min_value=-9, max_value=9)) for _ in range(m)]
            for _ in range(n)]


@given(small_matrices())
@settings(max_examples=80, deadline=None)
def test_snf_decomposition_properties(M):
    U, D, V = smith_normal_form(M)
    n, m = len(M), len(M[0])
    # U*M*V == D
    UM = [[sum(U[i][k] * M[k][j] for k in range(n)) for j in range(m)]
          for i in range(n)]
    UMV = [[sum(UM[i][k] * V[k][j] for k in range(m)) for j in range(m)]
           for i in range(n)]
    assert UMV == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = diagonal_of(D)
    for i in range(n):
        for j in range(m):
            if i != j:
                assert D[i][j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


@pytest.mark.skipif(not HAVE_SYMPY, reason="sympy unavailable")
@given(small_matrices())
@settings(max_examples=40, deadline=None)
def test_snf_matches_sympy(M):
    _, D, _ = smith_normal_form(M)
    ours = sorted(abs(d) for d in diagonal_of(D) if d)
    theirs = sympy_snf(SympyMatrix(M))
    ref = sorted(abs(x) for x in theirs.diagonal() if x)
    assert ours == ref


@given(small_matrices())
@settings(max_examples=60, deadline=None)
def test_invariant_factors_match_dense_snf(M):
    cols = [{i: row[j] for i, row in enumerate(M) if row[j]}
            for j in range(len(M[0]))]
    _, D, _ = smith_normal_form(M)
    assert invariant_factors(cols) == [d for d in diagonal_of(D) if d]


@given(small_matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_basis_annihilates(M):
    cols = [{i: row[j] for i, row in enumerate(M) if row[j]}
            for j in range(len(M[0]))]
    for z in kernel_basis(cols):
        acc = {}
        for j, c in z.items():
            for r, v in cols[j].items():
                acc[r] = acc.get(r, 0) + c * v
        assert all(v == 0 for v in acc.values())


def test_solve_columns_certificates_and_torsion():
    cols = [{0: 2}]
    assert solve_columns(cols, {0: 1}) is None  # 2x = 1 has no integer root
    assert solve_columns(cols, {0: 6}) == {0: 3}
    cols = [{0: 1, 1: 1}, {1: 1, 2: 1}]
    sol = solve_columns(cols, {0: 1, 2: -1})
    assert sol == {0: 1, 1: -1}


def test_span_basis_preserves_membership():
    cols = [{0: 2, 1: 4}, {0: 4, 1: 8}, {1: 6}]
    basis = span_basis(cols)
    lat = IntLattice()
    for b in basis:
        lat.insert(dict(b), {})
    for c in cols:
        assert lat.solve(c) is not None


def test_homology_point():
    cx = ChainComplex([["pt"]], [[]])
    h = complex_homology(cx, 0)
    assert (h.group(0).betti, h.group(0).torsion) == (1, ())


def test_homology_torsion():
    # Z --2--> Z presents Z/2 in degree 0
    cx = ChainComplex([["a"], ["b"]], [[], [{0: 2}]])
    h = complex_homology(cx, 0)
    assert (h.group(0).betti, h.group(0).torsion) == (0, (2,))


def test_homology_circle_and_killed_circle():
    basis = [["p", "q"], ["e", "f"]]
    bnd = [[], [{0: -1, 1: 1}, {0: -1, 1: 1}]]
    h = complex_homology(ChainComplex(basis, bnd), 1)
    assert h.group(1).betti == 1
    q = QuotientComplex(basis, bnd, [[], [{0: 1, 1: -1}]])
    hq = complex_homology(q, 1)
    assert hq.group(1).betti == 0 and hq.group(0).betti == 1


def test_homology_rejects_bad_complex():
    cx = ChainComplex([["a"], ["b"], ["c"]], [[], [{0: 1}], [{0: 1}]])
    with pytest.raises(IllFormedComplex):
        complex_homology(cx, 1)
    # relator whose boundary leaves the lower relator span
    q = QuotientComplex([["a"], ["b"]], [[], [{0: 1}]], [[], [{0: 1}]])
    with pytest.raises(IllFormedComplex):
        complex_homology(q, 1)


def test_homology_invariant_under_basis_permutation():
    basis = [["p", "q"], ["e", "f"]]
    bnd = [[], [{0: -1, 1: 1}, {0: -1, 1: 1}]]
    h1 = complex_homology(ChainComplex(basis, bnd), 1)
    basis2 = [["q", "p"], ["f", "e"]]
    bnd2 = [[], [{1: -1, 0: 1}, {1: -1, 0: 1}]]
    h2 = complex_homology(ChainComplex(basis2, bnd2), 1)
    assert h1.isomorphic(h2)
