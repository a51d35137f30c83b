"""Divergences between finite distributions and Pinsker-type bounds.

All quantities are in nats.  Submodules:

``measure``       distributions, pairs, seeded pair generation
``divergence``    KL, TV, chi-square, Renyi, Bhattacharyya, L2
``fdivergence``   generic f-divergences and Jensen-gap sandwiches
``bounds``        forward/reverse Pinsker bounds and the bound report
``oracle``        brute-force minimization and counterexample search
``exponent``      non-typicality exponent bracket and Monte-Carlo estimate
``partial_sums``  Poisson-binomial laws and the Renyi chain
``verify``        numerical verification suites
"""

from .bounds import (
    BoundReport,
    BoundValue,
    attainment_construction,
    beta2_floor,
    bound_report,
    corollary_upper,
    csiszar_talata_upper,
    equiprobable_example,
    euclidean_upper,
    general_measure_chain,
    gilardoni_dual_lower,
    ow_refined_pinsker_lower,
    pinsker_lower,
    renyi_pinsker_lower,
    renyi_reverse_upper,
    thm1_upper,
    thm3_upper,
    tv_lower_relinfo,
    tv_lower_two_param,
    tv_upper_from_kl,
    verdu_upper,
)
from .divergence import (
    DivergenceValue,
    bhattacharyya,
    binary_divergence,
    chi_square,
    euclidean_l2,
    kl,
    renyi,
    total_variation,
)
from .errors import RevPinskerError
from .exponent import ExponentBracket, exponent_bracket, montecarlo_nontypical
from .fdivergence import (
    ConvexGenerator,
    dragomir_sandwich,
    f_divergence,
    jensen_functional,
    proposition_sandwich,
    register_generator,
)
from .measure import (
    DiscreteDistribution,
    MeasurePair,
    PairSampler,
    balance_coefficient,
    build_distribution,
    make_pair,
    pair_from_arrays,
    sample_pair,
)
from .oracle import (
    TypeClassGrid,
    counterexample_search,
    d_star,
    sanov_exponent_exact,
    sanov_exponent_grid,
)
from .partial_sums import partial_sum_pmf, renyi_chain_check, summability_caps

__version__ = "0.1.0"
