"""Fixed-step first-order methods for smooth convex minimization.

Gradient method, Nesterov's fast gradient method, the optimized gradient
method (OGM, OGM') and Nes13, together with their worst-case functions,
closed-form convergence bounds and dual certificates of the relaxed
performance estimation problem.
"""

from .algorithms import Trajectory, run_fgm, run_fo, run_gm, run_nes13, run_ogm
from .certificates import (
    DualCertificate,
    MultiplierError,
    Multipliers,
    assemble_S,
    ogm_multipliers,
    ogm_prime_multipliers,
    verify_certificate,
)
from .coefficients import StepMatrix, constant_step_matrix, ogm_prime_step_matrix, ogm_step_matrix
from .oracles import (
    FunctionOracle,
    HuberSpec,
    huber_oracle,
    quadratic_oracle,
    random_quadratic_oracle,
)
from .sequences import SequenceTable, t_sequence, theta_sequence
from .worst_case import (
    BoundReport,
    analytic_bound,
    closed_form_trajectory,
    gm_worst_bound,
    h_opt,
    reproduce_table1,
)

__version__ = "0.1.0"
