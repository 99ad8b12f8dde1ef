from uniflab.modules.rewrite.theories import (
    RewriteRule, TheorySpec, make_theory, theory_of, BUILTIN_THEORIES,
    R1_THEORY, R4_THEORY, R5_THEORY, ACUN_THEORY, ACUNH_THEORY,
)
from uniflab.modules.rewrite.engine import (
    match, normalize, is_normal_form, joinable, verify_solution, failing_items,
    redexes, rewrite_step, normalize_randomized, lpo_greater, check_orientation,
)
