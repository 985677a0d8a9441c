from .probabilities import exact_round_success, q_pair, rho
from .enumeration import enumerate_round
from .bounds import alpha_sup, cost_C, expected_time_sum, j_star, optimal_alpha, theory_bounds
from .special import fourier_amplitude, gamma_abs, log_gamma_abs, max_fourier_amplitude
from .mellin import fluctuation_mean, mellin_asymptote, mellin_check, mellin_sweep
from .constants import PUBLISHED, lemma_constants
from .dominance import dkw_band, dominance_check, reference_cdf

__all__ = [
    "exact_round_success",
    "q_pair",
    "rho",
    "enumerate_round",
    "alpha_sup",
    "cost_C",
    "expected_time_sum",
    "j_star",
    "optimal_alpha",
    "theory_bounds",
    "fourier_amplitude",
    "gamma_abs",
    "log_gamma_abs",
    "max_fourier_amplitude",
    "fluctuation_mean",
    "mellin_asymptote",
    "mellin_check",
    "mellin_sweep",
    "PUBLISHED",
    "lemma_constants",
    "dkw_band",
    "dominance_check",
    "reference_cdf",
]
