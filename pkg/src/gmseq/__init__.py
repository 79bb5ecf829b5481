"""Two-sided coefficient sequences: general monotone classes, net-space and
Lorentz norms, Paley-type functionals and L_p norms of trigonometric sums."""

from .classes import (ClassDiagnostic, block_harmonic_sum, gm_bar_diagnostic,
                      gm_classic_diagnostic, gm_real_inclusion_diagnostic, gm_star_diagnostic,
                      one_sided, sector_check, verdict, wm_diagnostic)
from .functionals import (DyadicProfile, NormReport, conjugate, default_levels, dyadic_profile,
                          hardy_lhs_rhs, i_p, j_p, j_p_star, majorant, theta_blocks)
from .netspace import (PrefixSums, TildeProfile, hat_average, hat_dyadic, lorentz_norm,
                       net_norm, net_norm_dyadic, tilde_average, tilde_dyadic, tilde_profile)
from .sequence import (EXAMPLES, FAMILIES, RearrangedSequence, SequenceFormatError,
                       TwoSidedSequence, delta_abs, delta_abs_array, make_example, make_family,
                       read_sequence, symmetric_rearrangement, write_sequence, zigzag_indices)
from .trig import (MULTIPLIERS, LpResult, QuadratureSpec, apply_multiplier, evaluate,
                   evaluate_direct, grid, lp_norm, multiplier_values, partial_sum)

__version__ = "0.1.0"
