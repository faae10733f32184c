"""Classical simulation lab for amplitude estimation by polynomial sampling.

The estimators toss coins whose bias is the squared value of a fixed-parity
polynomial at the unknown amplitude, with exact bookkeeping of oracle queries
and polynomial degrees.  See README.md for the CLI and the acceptance suite.
"""

from ._backend import BACKEND
from .baselines import MlaeSchedule, bhmt_queries, classical_mc, make_mlae_schedule, mlae_estimate
from .chebae import ChebAEConfig, chebae_estimate, find_next_cheb, invert_cheb_ci
from .errors import (AmpestError, ConstructionFailed, DegenerateLikelihood,
                     DomainError, InsufficientData, IterationCap, KindMismatch,
                     MonotonicityViolated, PreconditionViolated)
from .grover import GroverLabel, decompose_psi, phase_rotation, qsp_unitary
from .harness import SweepConfig, fit_models, run_sweep
from .hybrid import HybridConfig, RoundParams, hybrid_estimate, round_params
from .polys import (PolySpec, SupNormCertificate, build_chebyshev, build_erf_poly,
                    build_hybrid_poly, build_line_poly, build_monomial,
                    build_repair_pair, cheb_T, kappa_of_tau, verify_semi_pellian)
from .records import RunRecord
from .repair import RepairConfig, nondestructive_chebae, repair_state
from .sampling import (REPREPARED, QueryLedger, SampleOutcome, measure_basis_swap,
                       sample_pellian, sample_semi_pellian, target_of)
from .stats import ConfidenceInterval, clopper_pearson, cp_max_halfwidth, hoeffding_shots
from .unbiased import UnbiasedConfig, unbiased_estimate

__version__ = "0.1.0"
