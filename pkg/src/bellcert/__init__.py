"""bellcert: symmetry-based certification of maximal randomness in Bell tests.

The toolkit finds relabeling symmetries of Bell functionals, converts them
(conditional on a unique maximal violator) into uniformity certificates for
measurement outcomes, and cross-validates the certificates against
numerically maximized quantum violations.
"""

from .scenario import (
    Behavior,
    CorrelatorForm,
    JointQuery,
    LocalQuery,
    Scenario,
    ScenarioMismatchError,
    SignalingWarning,
    ValidationError,
    behavior_from_correlators,
    behavior_from_dict,
    behavior_from_table,
    behavior_to_dict,
    correlators_from_behavior,
    deterministic_behavior,
    is_no_signaling,
    marginal,
    uniform_behavior,
)
from .functionals import (
    BellFunctional,
    CapExceededError,
    LocalBoundReport,
    chained_correlator,
    chained_modular,
    chsh,
    correlator_terms,
    evaluate,
    evaluate_on_strategy,
    from_correlator_terms,
    functional_from_dict,
    functional_to_dict,
    lifted_chsh_c,
    local_bound,
    mermin,
    tilted_chsh,
)
from .symmetry import (
    Relabeling,
    SearchCapExceededError,
    UniformityCertificate,
    apply_to_behavior,
    certificate_to_dict,
    certify_all,
    certify_uniform,
    find_symmetries,
    global_outcome_flip,
    identity_relabeling,
    is_symmetry,
    outcome_shift,
    pushforward_functional,
    relabeling_from_dict,
    relabeling_to_dict,
    search_space_size,
)
from .quantum import (
    OptimizationResult,
    QuantumModel,
    behavior_from_model,
    bell_operator,
    model_from_dict,
    model_to_dict,
    optimize_violation,
    phase_measurement_model,
    qubit_model,
    qubit_projectors,
)
from .randomness import (
    RandomnessReport,
    certified_report,
    guessing_probability,
    min_entropy,
    observed_report,
    report_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "Behavior",
    "BellFunctional",
    "CapExceededError",
    "CorrelatorForm",
    "JointQuery",
    "LocalBoundReport",
    "LocalQuery",
    "OptimizationResult",
    "QuantumModel",
    "RandomnessReport",
    "Relabeling",
    "Scenario",
    "ScenarioMismatchError",
    "SearchCapExceededError",
    "SignalingWarning",
    "UniformityCertificate",
    "ValidationError",
    "apply_to_behavior",
    "behavior_from_correlators",
    "behavior_from_dict",
    "behavior_from_model",
    "behavior_from_table",
    "behavior_to_dict",
    "bell_operator",
    "certificate_to_dict",
    "certified_report",
    "certify_all",
    "certify_uniform",
    "chained_correlator",
    "chained_modular",
    "chsh",
    "correlator_terms",
    "correlators_from_behavior",
    "deterministic_behavior",
    "evaluate",
    "evaluate_on_strategy",
    "find_symmetries",
    "from_correlator_terms",
    "functional_from_dict",
    "functional_to_dict",
    "global_outcome_flip",
    "guessing_probability",
    "identity_relabeling",
    "is_no_signaling",
    "is_symmetry",
    "lifted_chsh_c",
    "local_bound",
    "marginal",
    "mermin",
    "min_entropy",
    "model_from_dict",
    "model_to_dict",
    "observed_report",
    "optimize_violation",
    "outcome_shift",
    "phase_measurement_model",
    "pushforward_functional",
    "qubit_model",
    "qubit_projectors",
    "relabeling_from_dict",
    "relabeling_to_dict",
    "report_to_dict",
    "search_space_size",
    "tilted_chsh",
    "uniform_behavior",
]
