"""SLOCC entanglement classes of 2 x 2 x n pure states.

Example
-------
>>> from slocc224 import PureState, classify
>>> ghz = PureState.from_terms({"000": 1, "111": 1})
>>> classify(ghz).label.value
'GHZ'
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .classifier import (
    ClassificationReport,
    SloccClass,
    classify,
    classify_by_hyperdets,
    classify_by_ranks,
)
from .errors import (
    AmbiguousClassification,
    ClassifierDisagreement,
    InvalidInput,
    InvalidState,
    PreconditionError,
    SamplingError,
    ShapeError,
)
from .invariants import (
    InvariantSignature,
    admits_hyperdeterminant,
    det224,
    hdet222,
    hdet223,
    invariant_signature,
    magic_T,
    r_matrix,
    rank_pair,
    so4_from_sl2_pair,
)
from .mixed import MixedClass, MixedEnsemble, class_separation_evidence, lemma_bounds, mixed_class_of_decomposition
from .orbits import (
    CATALOG,
    LocalOp,
    OrderEdge,
    apply_local,
    conversion_witness,
    dominates,
    dual_tangency_at_origin,
    is_maximally_entangled_rep,
    necessary_condition,
    order_dot,
    random_orbit_sample,
    representative,
)
from .preparation import PovmEnsemble, build_povm, two_bell_pairs, verify_povm
from .states import (
    LocalRanks,
    PureState,
    clare_normal_support,
    flatten,
    local_ranks,
    overlap,
    reduced_density,
    unflatten,
)
