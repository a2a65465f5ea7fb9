"""Finite quasigroups, loops and quandles given by Cayley tables."""

from .cayley import (
    AlgebraError,
    BracketingWarning,
    CayleyTable,
    LoopView,
    PropertyId,
    TableError,
    find_unit,
    format_table,
    has_property,
    is_latin_quandle,
    is_quandle,
    nucleus,
    parse_table,
    property_witness,
    subalgebra_generated,
)
from .census import (
    BoundError,
    are_isomorphic,
    canonical_form,
    count_bo,
    enumerate_latin_quandles,
    enumerate_loops,
    enumerate_medial_idempotent,
    enumerate_quandles,
)
from .construct import (
    AffineMapSpec,
    affine_quasigroup,
    bloop15,
    bo_loop_from_ldq,
    bo_quandle,
    boloop15,
    boloop15_automorphism,
    cml81,
    conjugation_quandle,
    core_of_loop,
    coset_quandle,
    dq81,
    galkin_ldq15,
    ildq15,
    principal_loop_isotope,
)
from .identities import Identity, find_all_models, find_model, holds, parse
from .multgroup import (
    automorphism_group,
    is_connected,
    is_homogeneous,
    lmlt,
    mlt,
    rmlt,
)
from .represent import (
    AffineForm,
    Envelope,
    bloop_from_ildq,
    check_bo_module,
    envelope_is_latin,
    envelope_of,
    ildq_from_bloop,
    is_bloop,
    is_bo_loop,
    is_trimedial,
    medial_to_affine,
    quandle_from_envelope,
)

__version__ = "0.1.0"
