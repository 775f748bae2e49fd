"""Coexistence (joint measurability) of quantum effect operators.

Numerical checkers for the five sufficient conditions (commutation,
comparability, infimum, Jordan product, generalized infimum), a convex
feasibility oracle for ground truth, exact qubit criteria, and the
concrete effect families they are calibrated on.
"""

from .conditions import (
    COMMU, COMP, CONDITIONS, GINF, INF, JOR,
    CoexWitness, CombinatorialLimit, ConditionVerdict, PairReport,
    check_comp, check_commu, check_ginf, check_inf, check_jor,
    check_jor_multi, full_report, jordan_general, verify_witness,
    witness_violations,
)
from .effects import (
    EXISTS, NOT_EXISTS, Effect, InfimumResult, NotAProjection,
    SpectrumOutOfRange, complement, generalized_infimum, infimum,
    infimum_with_projection, intersection_projector, jordan_product,
    leq, range_projector, validate_effect,
)
from .exemplars import (
    InvalidBloch, QubitEffect, busch_criterion, lambda_jor, lambda_max,
    liu_criterion, liu_pair, mixed_commuting_pair, mub_pair, noisy_pair,
    qubit_effect, rank_one_pair,
)
from .hermitian import (
    DimensionMismatch, EigenDecomposition, apply_spectral, commutator_norm,
    eigh, eigvalsh, hermitian_part, hermitize, is_psd, matrix_abs,
    min_eigenvalue, mul, pseudo_inverse, psd_clip, spectral_projector,
)
from .oracle import (
    FEASIBLE, LIKELY_INFEASIBLE, LOWER, UNDETERMINED, UPPER,
    OracleOutcome, OracleParams, decide_pair, project_shifted_cone, violation,
)
from .survey import SurveyRow, SurveyStats, emit_csv, run_survey, sample_effect

__version__ = "0.1.0"
