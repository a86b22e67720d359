"""Shift spaces over {0, ..., r-1}: block languages, exact counting and
certified entropy, including subordinate shifts of prescribed entropy."""

from .blocks import (Alphabet, Block, BlockSet, block_text, concat, dominated_count,
                     dominated_enumerate, dominates, is_prefix, parse_block, power)
from .entropy import (EntropyInterval, EntropySeries, check_subadditive, count_blocks,
                      entropy_series, fekete_estimate, rational_case_check,
                      subordinate_count_fast, theorem3_counts, theorem3_interval)
from .errors import BudgetError, InputError, PrecisionError, SubshiftError
from .language import (FiniteLanguage, GapSet, Status, is_factorial, is_irreducible_at_horizon,
                       is_prolongable, language_of_point, membership_check, prune_forbidden,
                       sgap_forbidden, subordinate_closure)
from .points import (ConstructionTrace, DecimalTarget, PointGenerator, periodic_point,
                     prefix_limit, round_up_decimal, shift_point, squarefree_eta,
                     squarefree_point, theorem3_point, theorem3_trace, verify_trace)
from .recode import RecodeMap, entropy_scaling_check, recode_block, recode_language
from .sgap import SgapSolution, sgap_entropy, sgap_f

__version__ = "0.1.0"
