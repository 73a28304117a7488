"""Bipartite word-meaning networks, degree-biased walks and the meaning-frequency law."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateFitError,
    DisconnectedGraphError,
    GraphError,
    InfeasibleParametersError,
    MeaningWalkError,
)
from .lexicon import (  # noqa: E402
    BipartiteGraph,
    degrees,
    edge_degrees,
    generate_contrast_graph,
    generate_mi_optimal,
    generate_random_bipartite,
    is_connected,
    parse,
    rows_pairwise_orthogonal,
    serialize,
)
from .probability import (  # noqa: E402
    JointDistribution,
    MeaningPrior,
    conditional_word_given_meaning,
    joint_probability,
    meaning_marginal,
    minimalist_joint,
    model_family_joint,
    word_marginal,
)
from .info import (  # noqa: E402
    MIReport,
    Verdict,
    check_mi_optimal_configuration,
    conditional_entropy,
    entropy,
    mutual_information,
)
from .laws import (  # noqa: E402
    check_bounds,
    check_meaning_frequency_law,
    check_trivial_bounds,
    counts_to_probabilities,
    fit_power_law,
    mean_independence_check,
    zipf_chain_check,
)
from .walk import (  # noqa: E402
    UnipartiteGraph,
    WalkCensus,
    WalkConfig,
    analytical_stationary,
    empirical_joint,
    entropy_rate,
    simulate_walk,
    transition_meaning_to_word,
    transition_word_to_meaning,
    unipartite_stationary,
)
