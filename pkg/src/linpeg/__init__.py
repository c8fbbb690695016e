"""Linear parsing expression grammars: recognition, compilation to DFAs via
boolean finite automata, and the way back from regexes and DFAs."""
from .automata import (
    BFA, DFA, bfa_accepts, bfa_accepts_backward, bfa_consume, bfa_run, bfa_step,
    bfa_to_dfa, bfa_to_dot, dfa_equiv, dfa_from_json, dfa_match, dfa_minimize,
    dfa_to_dot, dfa_to_json,
)
from .boolfn import canonical, eval_f, eval_p, parse_boolfn, show
from .conversion import (
    cg, construct_bfa, copy_expr, lpeg_to_bfa, lpeg_to_dfa, phi, rewrite_choices,
    run_pipeline, substitute_temps,
)
from .errors import (
    ConversionError, GrammarError, IllFormedError, LpegError, NotLpegError,
    RecursionDepthExceeded, ResourceLimitExceeded,
)
from .grammar import Grammar, check_wellformed, desugar, format_grammar, is_lpeg, parse_grammar
from .interp import Consumed, FAIL, consume, expr_equiv_bounded, lang_member
from .regex import dfa_to_lpeg, dfa_to_regex, matches, parse_regex, pi_regex, regex_to_lpeg

__version__ = "0.1.0"
