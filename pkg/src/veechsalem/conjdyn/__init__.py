"""Conjugate cocycle dynamics: coding, contraction, tracking and Cantor directions."""

from .cantor import (DirectionConstruction, EigenvalueCandidate, calibration_grid, cantor_direction,
                     eigenvalue_candidate)
from .cocycle import (BudgetExhausted, CorrectionWord, LatticeVector, WVector, contraction_word,
                      expansion_word, growth_family, log_norm_series, lyapunov_ratio,
                      salem_word)
from .coding import (HeckeSystem, code, code_mp, coding_step, digit_matrix, hecke_system,
                     trace_field_embeddings, trajectory)
from .dimension import box_counting_dimension, field_ratio_check, middle_thirds
from .tracking import DigitDictionary, TrackingRun, default_dictionary, tracking_run

__all__ = [
    "BudgetExhausted", "CorrectionWord", "DigitDictionary", "DirectionConstruction",
    "EigenvalueCandidate", "HeckeSystem", "LatticeVector", "TrackingRun", "WVector",
    "box_counting_dimension", "calibration_grid", "cantor_direction", "code", "code_mp",
    "coding_step", "contraction_word", "default_dictionary", "digit_matrix", "eigenvalue_candidate",
    "expansion_word", "field_ratio_check", "growth_family", "hecke_system", "log_norm_series",
    "lyapunov_ratio",
    "middle_thirds", "salem_word", "trace_field_embeddings", "tracking_run", "trajectory",
]
