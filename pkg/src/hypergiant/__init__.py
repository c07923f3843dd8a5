"""Giant component of random d-uniform hypergraphs: samplers, predictions and checks."""
from ._errors import DomainError, HGFormatError, HypergiantError, ParameterError, StatisticsError
from .components import (ComponentSummary, components, components_oracle, count_crossing_edges,
                         largest_component, largest_order)
from .exposure import (ArtificialTrace, ExposureConfig, FourRoundTrace, classify_round3,
                       estimate_reach_stats, isolated_attach, run_artificial, run_four_rounds,
                       split_probabilities)
from .hypergraph import (EdgeFamily, Hypergraph, parse_hg, read_hg, sample_family, sample_hnm,
                         sample_hnp, write_hg)
from .rng import mix64, trial_rng
from .stats import (LinearResponse, SampleSet, TestReport, chi_square, ks_normal, linear_response,
                    local_law_report, moments, q_k_empirical)
from .stein import IndicatorFamily, stein_audit
from .theory import (AttachCoefficients, GammaInputs, GiantPrediction, ModelParams,
                     attach_coefficients, binomial_exact_pmf, binomial_local_approx, chernoff_bound,
                     compose_distributions, gamma_variance, interval_probability,
                     local_probability, predict, solve_rho, subcritical_bound)

__version__ = "0.1.0"
