import pytest

from cornerhomology.errors import BadIndex, NotBranching, WitnessUnavailable
from cornerhomology.folding import (
    FoldPipeline,
    box_minus,
    box_plus,
    box_usual,
    composition_witness,
    elementary_move,
    fold_pipeline,
    glue_witness,
    hpsi,
    is_folded,
    phi_minus,
    t_witness,
    theta,
    theta_witness_3,
    vpsi,
)
from cornerhomology.nerve import (
    classify,
    connection,
    cubical_compose,
    degeneracy,
    enumerate_cubes,
    face,
    is_thin,
    verify_cube,
)


def branching(C, n, cfg):
    return enumerate_cubes(C, n, "branching", cfg)


# ---------------------------------------------------------------------------
# box operators


def test_box1_is_the_edge_cube(fig1_cat, cfg):
    for u in fig1_cat.by_dim[1]:
        b = box_minus(fig1_cat, u, 1, cfg)
        assert b.interior == u
        assert face(b, 1, "-").interior == fig1_cat.s(u, 0)


def test_box2_face_clauses(square_cat, cfg):
    v = square_cat.by_dim[2][0]
    b = box_minus(square_cat, v, 2, cfg)
    assert face(b, 1, "-") == box_minus(square_cat, square_cat.s(v, 1), 1, cfg)
    assert face(b, 2, "-") == box_minus(square_cat, square_cat.t(v, 1), 1, cfg)
    for i in (1, 2):
        f = face(b, i, "+")
        assert len(set(f.images)) == 1  # totally degenerate positive faces
    assert classify(b).branching
    verify_cube(square_cat, 2, b.images)


def test_box_of_lower_morphism_is_connection_chain(square_cat, cfg):
    for u in square_cat.by_dim[1]:
        b = box_minus(square_cat, u, 2, cfg)
        assert b == connection(box_minus(square_cat, u, 1, cfg), 1, "-")
    u = square_cat.by_dim[1][0]
    b3 = box_minus(square_cat, u, 3, cfg)
    assert b3 == connection(connection(box_minus(square_cat, u, 1, cfg), 1, "-"), 2, "-")


def test_box_same_faces_on_source_and_target(cfg):
    from cornerhomology.molecule import build_presented
    C = build_presented("2_p", 3)
    a = C.atoms[0]
    for i in (1, 2):
        for sign in "-+":
            left = face(box_minus(C, C.s(a, 2), 2, cfg), i, sign)
            right = face(box_minus(C, C.t(a, 2), 2, cfg), i, sign)
            assert left == right


def test_box_usual_clauses_and_non_branching(square_cat, cfg):
    v = square_cat.by_dim[2][0]
    b = box_usual(square_cat, v, 2, cfg)
    assert b.interior == v
    assert face(b, 1, "-") == box_usual(square_cat, square_cat.s(v, 1), 1, cfg)
    assert not classify(b).branching  # the (-0) edge image is a state
    verify_cube(square_cat, 2, b.images)


def test_box_plus_mirror(fig1_cat, cfg):
    names = {fig1_cat.label(x): x for x in range(len(fig1_cat))}
    u = names["R{u}"]
    for n in (1, 2):
        b = box_plus(fig1_cat, u, n, cfg)
        f = face(b, 1, "-")
        assert set(f.images) == {fig1_cat.s(u, 0)}  # eps_1^{n-1} of the source


# ---------------------------------------------------------------------------
# phi and the characterization


def test_phi_identity_on_one_cubes(fig1_cat, cfg):
    for x in branching(fig1_cat, 1, cfg):
        assert phi_minus(x) == x
        assert is_folded(x)


def test_phi_idempotent_and_folded(square_cat, cfg):
    for x in branching(square_cat, 2, cfg):
        fx = phi_minus(x)
        assert phi_minus(fx) == fx
        assert is_folded(fx)


def test_phi_requires_branching(square_cat, cfg):
    v = square_cat.by_dim[2][0]
    b = box_usual(square_cat, v, 2, cfg)
    with pytest.raises(NotBranching):
        phi_minus(b)


def test_is_folded_iff_fixed_point(square_cat, cube3_cat, cfg):
    for C, n in ((square_cat, 2), (cube3_cat, 2)):
        for x in branching(C, n, cfg):
            assert is_folded(x) == (x == phi_minus(x))


def test_folded_characterization_on_box3(cube3_cat, cfg):
    v = cube3_cat.by_dim[3][0]
    b = box_minus(cube3_cat, v, 3, cfg)
    assert is_folded(b)
    assert phi_minus(b) == b


# ---------------------------------------------------------------------------
# elementary moves


def test_move_face_equalities(square_cat, cfg):
    for x in branching(square_cat, 2, cfg):
        assert face(elementary_move(x, vpsi("-", 1)), 1, "-") == face(x, 1, "-")
        assert face(elementary_move(x, vpsi("-", 1)), 2, "+") == face(x, 2, "+")
        lhs = face(elementary_move(x, hpsi("-", 1)), 1, "-")
        assert lhs == cubical_compose(face(x, 1, "-"), face(x, 2, "+"), 1)


def test_moves_idempotent(square_cat, cfg):
    for x in branching(square_cat, 2, cfg)[:10]:
        for mv in (vpsi("-", 1), hpsi("-", 1), vpsi("+", 1), hpsi("+", 1)):
            once = elementary_move(x, mv)
            assert elementary_move(once, mv) == once


def test_theta_on_connections(cube3_cat, cfg):
    # theta_i on Γ-images of 2-cubes (degree 3 allows only i = 1) and of
    # 3-cubes (degree 4 allows i = 1, 2)
    for x in enumerate_cubes(cube3_cat, 2, "all", cfg)[:40]:
        assert elementary_move(connection(x, 1, "-"), theta(1)) == \
            connection(x, 2, "-")
        assert elementary_move(connection(x, 2, "-"), theta(1)) == \
            connection(x, 2, "-")
    for x in enumerate_cubes(cube3_cat, 3, "all", cfg)[:15]:
        for i in (1, 2):
            assert elementary_move(connection(x, i, "-"), theta(i)) == \
                connection(x, i + 1, "-")
            assert elementary_move(connection(x, i + 1, "-"), theta(i)) == \
                connection(x, i + 1, "-")


def test_move_bad_index(square_cat, cfg):
    x = branching(square_cat, 2, cfg)[0]
    with pytest.raises(BadIndex):
        elementary_move(x, vpsi("-", 2))
    with pytest.raises(BadIndex):
        elementary_move(x, theta(1))  # needs degree >= 3


def test_braid_relation_for_psi(cube3_cat, cfg):
    for x in enumerate_cubes(cube3_cat, 3, "all", cfg)[:25]:
        for fam in (vpsi, hpsi):
            a = elementary_move
            lhs = a(a(a(x, fam("-", 1)), fam("-", 2)), fam("-", 1))
            rhs = a(a(a(x, fam("-", 2)), fam("-", 1)), fam("-", 2))
            assert lhs == rhs


def test_vh_commutation_far_apart(cube3_cat, cfg):
    for x in enumerate_cubes(cube3_cat, 3, "all", cfg)[:25]:
        a = elementary_move
        assert a(a(x, vpsi("-", 1)), hpsi("-", 2)) == a(a(x, hpsi("-", 2)), vpsi("-", 1))


# ---------------------------------------------------------------------------
# the pipeline


def test_pipeline_degree2_word(cfg):
    pipe = fold_pipeline(2, cfg)
    assert [str(m) for m in pipe.moves] == ["hψ1-", "vψ1-"]


def test_pipeline_matches_phi_degree2(square_cat, fig1_cat, cfg):
    for C in (square_cat, fig1_cat):
        pipe = fold_pipeline(2, cfg)
        for x in branching(C, 2, cfg):
            assert pipe.apply(x) == phi_minus(x)


def test_pipeline_matches_phi_degree3_sample(cube3_cat, cfg):
    pipe = fold_pipeline(3, cfg)
    cubes = branching(cube3_cat, 3, cfg)
    step = max(1, len(cubes) // 150)
    for x in cubes[::step]:
        assert pipe.apply(x) == phi_minus(x)


def test_aspiration_of_positive_faces(square_cat, cube3_cat, cfg):
    # after the psi prefix, every positive face is totally degenerate
    for C, n in ((square_cat, 2), (cube3_cat, 3)):
        moves = []
        for k in range(n - 1, 0, -1):
            moves.extend(hpsi("-", i) for i in range(1, k + 1))
            moves.extend(vpsi("-", i) for i in range(1, k + 1))
        cubes = branching(C, n, cfg)
        step = max(1, len(cubes) // 60)
        for x in cubes[::step]:
            y = x
            for mv in moves:
                y = elementary_move(y, mv)
            corner = face(x, 1, "+")
            for _ in range(n - 1):
                corner = face(corner, 1, "+")
            want = corner.interior  # (d_1^+)^n of x, as a state
            for i in range(1, n + 1):
                f = face(y, i, "+")
                assert set(f.images) == {want}


# ---------------------------------------------------------------------------
# witnesses


def test_hpsi_witness_boundary_equation(square_cat, cfg):
    # the negative boundary of the witness is move(x) - x plus thin terms
    for x in branching(square_cat, 2, cfg)[:12]:
        (w,) = t_witness(x, hpsi("-", 1))
        assert is_thin(w) and classify(w).branching
        terms = {}
        for i in range(1, 4):
            f = face(w, i, "-")
            terms[f] = terms.get(f, 0) + (1 if i % 2 == 1 else -1)
        moved = elementary_move(x, hpsi("-", 1))
        assert terms.get(moved, 0) - (0 if moved == x else terms.get(x, 0)) != 0 or moved == x
        nonthin = {c: v for c, v in terms.items() if not is_thin(c) and v}
        want = {}
        if moved != x:
            want = {moved: 1, x: -1}
            if is_thin(x):
                want.pop(x)
            if is_thin(moved):
                want.pop(moved)
        assert nonthin == {k: v for k, v in want.items() if v}


def test_glue_witness_faces(fig1_cat, cfg):
    names = {fig1_cat.label(x): x for x in range(len(fig1_cat))}
    cubes = {x.interior: x for x in enumerate_cubes(fig1_cat, 1, "all", cfg)}
    x, y = cubes[names["R{u}"]], cubes[names["R{v}"]]
    z = glue_witness(x, y, 1)
    assert is_thin(z)
    assert face(z, 1, "-") == x
    assert face(z, 2, "-") == cubical_compose(x, y, 1)
    assert face(z, 2, "+") == y


def test_theta_witness_faces(cube3_cat, cfg):
    xs = branching(cube3_cat, 3, cfg)
    x = next(c for c in xs if cube3_cat.dim(c.interior) == 3)
    w = theta_witness_3(x)
    assert is_thin(w) and w.n == 4
    assert face(w, 3, "-") == x
    assert face(w, 2, "-") == elementary_move(x, theta(1))
    assert face(w, 1, "-") == connection(face(x, 1, "-"), 2, "-")
    assert face(w, 2, "+") == connection(face(x, 2, "+"), 2, "-")


def test_theta_witness_unavailable_elsewhere(cube3_cat, cfg):
    x = branching(cube3_cat, 3, cfg)[0]
    with pytest.raises(WitnessUnavailable):
        t_witness(x, vpsi("+", 1))


def test_composition_witness_faces(cube3_cat, cfg):
    comp2 = [(a, b, z) for (a, b, p), z in cube3_cat.comp.items()
             if p == 1 and cube3_cat.dim(z) == 2]
    assert comp2, "fixture should have *_1-composable 2-morphisms"
    a, b, z = comp2[0]
    B = composition_witness(cube3_cat, a, b, cfg)
    assert is_thin(B) and B.n == 3
    assert face(B, 1, "-") == box_minus(cube3_cat, a, 2, cfg)
    assert face(B, 2, "-") == box_minus(cube3_cat, z, 2, cfg)
    assert face(B, 3, "-") == box_minus(cube3_cat, b, 2, cfg)
    for i in (1, 2, 3):
        f = face(B, i, "+")
        assert set(f.images) == {cube3_cat.t(a, 0)}
