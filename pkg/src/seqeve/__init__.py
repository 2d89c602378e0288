"""Simulator and planner for sequential unsharp-measurement eavesdropping
of a steering-based QKD link."""

__version__ = "0.1.0"

from .chain import (
    BOB,
    ChainSpec,
    ConditionalTable,
    PartySettings,
    ZeroProbabilityError,
    assemblage,
    conditional_table,
    eve1_conditional,
    mub_chain,
    mub_sharp_pair,
    mub_unsharp_pair,
    post_measurement_state,
    propagate,
)
from .linalg import (
    ATOL,
    COMPOSED_ATOL,
    BlochDirection,
    X_DIR,
    Z_DIR,
    direction_operator,
    kron,
    partial_trace,
    psd_sqrt,
)
from .measurement import (
    SharpSetting,
    TradeoffPair,
    UnsharpSetting,
    WeakKrausSetting,
    effect,
    projector,
    sqrt_effect,
    tradeoff,
    weak_kraus,
)
from .planner import (
    InfeasibleError,
    PlanResult,
    bob_rate,
    closed_form_chain,
    lambda_min_for_rate,
    max_eves,
    shrink_factor,
)
from .scenario import Scenario, ScenarioError, load_scenario, loads_scenario
from .states import PureTwoQubitState, TwoQubitState, bell_state, tilted_state
from .steering import (
    SteeringReport,
    delta_for_rate,
    fgi_lhs,
    key_rate,
    report,
    report_from_table,
)
from .unbounded import (
    ADAPTED,
    CANONICAL,
    AdaptedMeasurement,
    BranchNode,
    DegenerateStateError,
    SchmidtForm,
    adapted_alice_measurement,
    branch_tree,
    canonical_settings,
    correct_and_forward,
    evaluate_branch,
    schmidt_decompose,
    weak_step,
)

__all__ = [
    "ADAPTED",
    "ATOL",
    "BOB",
    "CANONICAL",
    "COMPOSED_ATOL",
    "AdaptedMeasurement",
    "BlochDirection",
    "BranchNode",
    "ChainSpec",
    "ConditionalTable",
    "DegenerateStateError",
    "InfeasibleError",
    "PartySettings",
    "PlanResult",
    "PureTwoQubitState",
    "Scenario",
    "ScenarioError",
    "SchmidtForm",
    "SharpSetting",
    "SteeringReport",
    "TradeoffPair",
    "TwoQubitState",
    "UnsharpSetting",
    "WeakKrausSetting",
    "X_DIR",
    "Z_DIR",
    "ZeroProbabilityError",
    "adapted_alice_measurement",
    "assemblage",
    "bell_state",
    "bob_rate",
    "branch_tree",
    "canonical_settings",
    "closed_form_chain",
    "conditional_table",
    "correct_and_forward",
    "delta_for_rate",
    "direction_operator",
    "effect",
    "eve1_conditional",
    "evaluate_branch",
    "fgi_lhs",
    "key_rate",
    "kron",
    "lambda_min_for_rate",
    "load_scenario",
    "loads_scenario",
    "max_eves",
    "mub_chain",
    "mub_sharp_pair",
    "mub_unsharp_pair",
    "partial_trace",
    "post_measurement_state",
    "projector",
    "propagate",
    "psd_sqrt",
    "report",
    "report_from_table",
    "schmidt_decompose",
    "shrink_factor",
    "sqrt_effect",
    "tilted_state",
    "tradeoff",
    "weak_kraus",
    "weak_step",
]
