"""Concentration inequalities for dependent finite-alphabet sequences.

Mixing coefficients, martingale-difference norms, BAR extremal functions,
tail certificates and Monte Carlo checks, computed exactly on small
alphabets and sequence lengths.
"""

__version__ = "0.1.0"

from .certificates import (
    Certificate,
    azuma_bound,
    certify_general,
    certify_markov,
    concentration_alpha,
    median_bound,
)
from .errors import (
    BudgetError,
    CapacityError,
    ConditioningError,
    ConventionError,
    MixconcError,
    OutOfValidityError,
    ValidationError,
)
from .functions import LipschitzFn
from .mixing import contraction_profile, eta, eta_bar, mixing_profile, theta
from .norms import KernelFn, kappa_pair, kappa_prefix, phi_norm, psi, psi_norm
from .process import (
    Alphabet,
    HmmSpec,
    JointDist,
    MarkovSpec,
    Pmf,
    build_hmm_joint,
    build_markov_joint,
    conditional,
    truncate,
    tv_distance,
)
