"""Asynchronous linear threshold dynamics with external fields, viewed as
network coordination games."""

from .config import CapExceeded, Settings, get_settings, load_settings, set_settings
from .game import (
    ConsensusKind,
    Field,
    FieldRange,
    GameClass,
    as_field,
    best_response,
    classify_field,
    classify_range,
    is_equilibrium,
    stubborn_set,
    utility,
    zero_field,
)
from .lattice import (
    AdmissiblePath,
    EquilibriumSet,
    NotAnEquilibrium,
    check_path,
    closure,
    enumerate_equilibria,
    ireachable_extremes,
    is_polarizable,
    lattice_ops,
)
from .network import (
    Configuration,
    Network,
    ParseError,
    consensus,
    format_network,
    parse_configuration,
    parse_network,
    parse_rational,
    restricted_out_degree,
    split_weights,
)
from .robustness import (
    DecompositionWitness,
    Indecomposability,
    NotIndecomposable,
    cohesive_check,
    decomposition_witness,
    is_indecomposable,
    robust_consensus_path,
    unique_biased_check,
)
from .simulation import (
    FieldSchedule,
    HittingSummary,
    RateMap,
    Trajectory,
    hitting_stats,
    mix_seed,
    oscillation_schedule,
    simulate,
    transition_rates,
)

__version__ = "0.1.0"
