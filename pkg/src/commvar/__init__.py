"""Computing with commuting k-tuples in compact matrix Lie groups.

Substrate groups are ((S^1)^r x SU(p_1) x ... x SU(p_s)) / K for a finite
central K.  The package classifies tuples into connected components by
commutator fingerprints of lifts, realizes the conjugation map sigma_k and
its inverse on the regular part, constructs explicit homotopies inside the
variety, and verifies the component-count and fundamental-group tables at
desk scale.
"""

from .central import ComponentClass, LiftedTuple, classify_component, deck_action, fingerprint, lift_tuple, project_lift
from .errors import CommvarError
from .fingerprint import Fingerprint
from .finmodel import (
    FinGroup,
    census_commuting,
    census_fingerprints,
    count_components_formula,
    cyclic_group,
    decompose_rank_two,
    extraspecial,
    rank_alternating,
)
from .homotopy import (
    ContractionParams,
    GroupPath,
    TupleHomotopy,
    contract_loop,
    coordinate_loop_homotopy,
    loop_diameter,
    make_path,
    path_to_identity,
    random_loop,
    refine_loop,
    winding_vector,
)
from .matgroup import (
    CentralGenerator,
    GroupDescriptor,
    GroupElement,
    LieAlgebraElement,
    central_product_su,
    descriptor_from_name,
    distance,
    group_exp,
    group_log,
    haar_sample,
    identity_element,
    su,
    torus_group,
)
from .pi1 import FgAbelianGroup, FiniteGroupTag, check_exact_sequence, pi1_of_group, pi1_of_hom
from .variety import (
    CommutingTuple,
    ValidationReport,
    conjugate_tuple,
    make_tuple,
    sample_exotic,
    sample_identity_component,
    su_clock_shift,
    tuple_distance,
    validate_tuple,
)
from .weyl import (
    RegularityReport,
    SigmaPreimage,
    TorusTuple,
    is_regular,
    joint_diagonalize,
    section_s,
    sigma_inverse_regular,
    sigma_k,
    weyl_normal_form,
)

__version__ = "0.1.0"
