"""Minimum-average-digit analysis of beta representations with unrestricted
digits: greedy expansions, reduction to the expansion, digit-average bounds,
and a certified coverage search."""

from .errors import (BetaminError, BracketError, BudgetExhausted,
                     HorizonTooShort, IncompleteBlock, PrecisionExhausted,
                     UsageError)
from .numeric import (Beta, Certified, DEFAULT_PRECISION, gamma_k, multinacci,
                      named_beta, solve_increasing_root, NAMED_BASES)
from .words import (DigitWord, average_digit_prefix, format_compact,
                    format_pointed, parse_compact, parse_pointed)
from .expansion import (GreedyExpansion, Monotone, UnityExpansion,
                        detect_eventual_period, expansion_of_unity,
                        greedy_expand, is_admissible, is_monotone_MB)
from .representation import (AffineTrajectory, BetaRepresentation,
                             digits_to_switching, evaluate, shift_to_zero,
                             signal_length_identity, simulate_affine,
                             switching_to_digits)
from .reduction import (DisallowedWordTable, ReduceResult, TableEntry,
                        Violation, build_disallowed_table, find_violation,
                        reduce_step, reduce_to_expansion,
                        replacement_identity_check,
                        representations_with_sum_at_most)
from .bounds import (BoundEvaluation, ShiftAutomaton, WitnessReport,
                     build_shift_automaton, conditional_lower_bound,
                     entropy_functional, evaluate_bounds,
                     greedy_average_upper, locate_run_interval,
                     lower_bound_via_entropy_root, max_mean_cycle,
                     run_replacement_upper_bound, run_replacement_witness)
from .coverage import (CoverageGrid, CoverageReport, SweepPoint,
                       coverage_upper_bound, cumulative_word_count,
                       enumerate_by_digit_sum, sweep, sweep_point,
                       witness_values)
from .switched import (MatrixSystem, MatrixTrajectory, ProbeTable,
                       empirical_rate_probe, greedy_angle_strategy,
                       linearized_rate, simulate_matrix)

__version__ = "0.1.0"
