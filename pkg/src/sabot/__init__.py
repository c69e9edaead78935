"""sabot: surrogate-assisted budgeted optimization toolkit."""

from .assist import AssistConfig, assisted_step, initialize_doe, probabilistic_knockout
from .core import (
    Archive,
    Budget,
    Evaluation,
    Problem,
    ProblemSpec,
    Provenance,
    Solution,
    evaluate_approximate,
    evaluate_expensive,
)
from .dominance import (
    constrained_dominates,
    crowding_distance,
    Dominance,
    dominates,
    non_dominated_sort,
)
from .algorithms import (
    das_dennis_directions,
    DifferentialEvolution,
    GeneticAlgorithm,
    make_algorithm,
    NSGA2,
    NSGA3,
    nsga3_survive,
)
from .external import ExternalEvaluator
from .metrics import hypervolume, hypervolume_monte_carlo, igd, igd_plus
from .problems import make_problem
from .runner import run, RunResult
from .surrogates import RBFSurrogate, select_model, SurrogateEnsemble

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "AssistConfig",
    "Budget",
    "DifferentialEvolution",
    "Dominance",
    "Evaluation",
    "ExternalEvaluator",
    "GeneticAlgorithm",
    "NSGA2",
    "NSGA3",
    "Problem",
    "ProblemSpec",
    "Provenance",
    "RBFSurrogate",
    "RunResult",
    "Solution",
    "SurrogateEnsemble",
    "assisted_step",
    "constrained_dominates",
    "crowding_distance",
    "das_dennis_directions",
    "dominates",
    "evaluate_approximate",
    "evaluate_expensive",
    "hypervolume",
    "hypervolume_monte_carlo",
    "igd",
    "igd_plus",
    "initialize_doe",
    "make_algorithm",
    "make_problem",
    "non_dominated_sort",
    "nsga3_survive",
    "probabilistic_knockout",
    "run",
    "select_model",
]
