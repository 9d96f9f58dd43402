"""Linear-time feasibility decisions for labeled pebbles moving on graphs."""

from .contraction import ContractedInstance, contract, expand_classes, prepare_occupancy
from .decision import FeasibilityReport, decide, decide_multi, decide_split
from .decomposition import (
    Decomposition,
    GraphAnalysis,
    GraphClass,
    GraphTag,
    analyze,
    biconnected_components,
    classify,
    decompose,
    theta0_check,
)
from .equivalence import EquivalenceClasses, decide_ppt, tree_classes
from .generate import generate_instance
from .graph import (
    EMPTY,
    Configuration,
    ErrorCode,
    Graph,
    PebbleError,
    Permutation,
    PmgInstance,
    PpgInstance,
    apply_move,
    dump_instance,
    load_instance,
    validate_instance,
)
from .oracle import oracle_exchange_classes, oracle_orbit, oracle_reachable, oracle_search
from .reduction import ReductionResult, pmg_to_ppg, pmt_to_ppt, reposition
from .special import RuleTag

__all__ = [name for name in dir() if not name.startswith("_")]
