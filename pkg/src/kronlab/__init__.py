"""kronlab: quantized Kronecker flows and almost periodic free fields at desk scale."""

from .apalgebra import TrigPolynomial, bohr_mean, delta_truncated, evaluate, kronecker_flow, multiply, project
from .counting import CountResult, count_N, spectrum_up_to, window_ratio
from .fock import FockSpace, SparseOperator
from .frequencies import FrequencySystem, check_axioms, explicit, generate
from .specfun import gamma_zeta
from .tauber import PhiEvaluator, solve_saddle

__version__ = "0.1.0"

__all__ = [
    "FockSpace",
    "FrequencySystem",
    "PhiEvaluator",
    "SparseOperator",
    "TrigPolynomial",
    "CountResult",
    "bohr_mean",
    "check_axioms",
    "count_N",
    "delta_truncated",
    "evaluate",
    "explicit",
    "gamma_zeta",
    "generate",
    "kronecker_flow",
    "multiply",
    "project",
    "solve_saddle",
    "spectrum_up_to",
    "window_ratio",
]
