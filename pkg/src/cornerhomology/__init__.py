"""Exact corner-homology toolkit for finite higher dimensional automata.

Computes branching/merging, reduced, formal and baseline chain complexes of
the free omega-category on a precubical set, together with the folding
operator algebra of its cubical singular nerve.
"""

from .config import Config, default_config
from .precub import (
    PrecubicalSet,
    goubault_complex,
    parse_precubical,
    serialize,
    standard_cube,
    validate,
)
from .molecule import (
    Molecule,
    OmegaCategory,
    PastingTree,
    bilocalize,
    boundary_of,
    build_free_category,
    build_In,
    build_oriental,
    build_presented,
    compose,
    counterexample_category,
    decompose,
    evaluate,
    path_shift,
)
from .nerve import (
    CubeClass,
    Shell,
    SingularCube,
    axiom_report,
    classify,
    connection,
    cubical_compose,
    degeneracy,
    enumerate_cubes,
    face,
    fill_shell,
    fill_thin_shell,
)
from .folding import (
    FoldPipeline,
    MoveKind,
    box_minus,
    box_usual,
    elementary_move,
    fold_pipeline,
    hpsi,
    is_folded,
    phi_minus,
    t_witness,
    theta,
    vpsi,
)
from .homology import (
    ChainComplex,
    HomologySummary,
    QuotientComplex,
    calcul_crosscheck,
    complex_homology,
    corner_complex,
    diff_formula_check,
    formal_complex,
    reduced_corner_complex,
    smith_normal_form,
    t_equivalent,
)

__version__ = "0.1.0"
