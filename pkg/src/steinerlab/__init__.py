"""Unit-coverage block designs: validation, minimal-subdesign structure,
exact intersection statistics, and pair-colour refinement."""

from .core import (
    Design,
    DesignParams,
    BlockMeetProfile,
    admissible,
    block_meet_profile,
    derived_block_tbd,
    is_symmetric,
    new_design,
    pair_block,
    params,
    relabel,
    serialize,
)
from .subdesigns import (
    SubDesign,
    WDProfile,
    check_size_bound,
    closure,
    minimal_subdesigns,
    subdesign_intersection,
    wd_profile,
)
from .intersections import (
    BoundsReport,
    MeanProfile,
    PairStats,
    TripleProfile,
    all_triple_profiles,
    bounds_report,
    mean_profiles,
    pair_stats,
    solve_dependent_counts,
    triple_profile,
    verify_connor_sums,
    verify_mean_system,
)
from .wl import (
    GipClassification,
    IncidenceGraph,
    PairColoring,
    QuotientDesign,
    SplitResult,
    automorphism_transfer,
    classify_gip_case,
    find_automorphisms,
    incidence_graph,
    individualize,
    individualize_many,
    quotient_design,
    steiner3_split,
    verify_lambda1_stable,
    wl2_refine,
)
from .constructions import (
    PasteRecipe,
    TransferReport,
    affine_plane,
    example_15,
    example_40,
    fano_plane,
    paste,
    paste_copies,
    projective_plane,
    transfer_check,
)
from .pipeline import emit, parse_design, run_pipeline

__version__ = "0.1.0"
