import pytest

from uniflab.util import UnsupportedProblem, SignatureError
from uniflab.modules.term import (
    Var, Const, App, ZERO, plus, theory_signature, term_size,
    R1, R4, R5, ACUN, ACUNH, CUSTOM,
)
from uniflab.modules.rewrite import (
    RewriteRule, make_theory, match, normalize, is_normal_form, joinable, verify_solution,
    failing_items, redexes, rewrite_step, normalize_randomized, lpo_greater, check_orientation,
    R1_THEORY, R4_THEORY, R5_THEORY, ACUN_THEORY, ACUNH_THEORY,
)
from uniflab.loader import random_term

a, b, c = Const("a"), Const("b"), Const("c")
c1, c2 = Const("c1"), Const("c2")
x, y = Var("x"), Var("y")


def f(*args):
    return App("f", tuple(args))


def h(t):
    return App("h", (t,))


def g(t):
    return App("g", (t,))


SECTION3 = """\
theory custom
consts a
vars u v w
rule x + a -> x
asym u + v =v v + w
"""

SECTION4 = """\
theory custom
consts a b
vars u v
rule x + a -> x
diseq u + v != v + u
"""


def test_r1_normal_forms():
    assert normalize(h(a), R1_THEORY) == f(a, c)
    assert normalize(h(h(a)), R1_THEORY) == h(f(a, c))
    assert normalize(f(h(b), h(c)), R1_THEORY) == f(f(b, c), h(c))
    assert is_normal_form(h(c), R1_THEORY)
    assert not is_normal_form(h(b), R1_THEORY)


def test_r4_and_r5_normal_forms():
    faaa = f(a, a, a)
    assert normalize(faaa, R4_THEORY) == g(a)
    assert normalize(f(faaa, faaa, faaa), R4_THEORY) == f(g(a), g(a), g(a))
    assert normalize(f(a, b, a), R4_THEORY) == f(a, b, a)
    assert normalize(g(g(b)), R5_THEORY) == g(f(b, b, b))


def test_xor_normal_forms():
    assert normalize(plus(x, x, c1), ACUN_THEORY) == c1
    assert normalize(plus(x, ZERO), ACUN_THEORY) == x
    assert normalize(plus(x, x), ACUN_THEORY) == ZERO
    assert normalize(plus(x, plus(y, x)), ACUN_THEORY) == y


def test_homomorphism_distributes():
    assert normalize(plus(h(plus(x, c1)), h(x)), ACUNH_THEORY) == h(c1)
    assert normalize(h(ZERO), ACUNH_THEORY) == ZERO
    assert normalize(h(h(plus(x, y))), ACUNH_THEORY) == plus(h(h(x)), h(h(y)))
    assert normalize(h(plus(c1, c1)), ACUNH_THEORY) == ZERO
    # ACUN has no homomorphism rule
    assert normalize(h(plus(x, c1)), ACUN_THEORY) == h(plus(x, c1))


def test_xor_cancellation_and_unit(rng):
    sig = theory_signature(ACUNH, ("c1", "c2"))
    for _ in range(300):
        t = random_term(rng, sig, ("x", "y"), 4)
        assert normalize(plus(t, t), ACUNH_THEORY) == ZERO
        assert normalize(plus(t, ZERO), ACUNH_THEORY) == normalize(t, ACUNH_THEORY)


def test_match_binds_consistently():
    assert match(f(x, c), f(h(a), c)) == {"x": h(a)}
    assert match(f(x, x), f(a, b)) is None
    assert match(h(a), h(b)) is None


def test_asymmetric_unifier_modulo_custom_rule(problem):
    p = problem(SECTION3)
    v = Var("v")
    assert verify_solution(p, {"u": v, "w": v})
    assert not verify_solution(p, {"u": a, "v": a, "w": a})
    assert failing_items(p, {"u": a, "v": a, "w": a}) == [0]


def test_disunifier_modulo_custom_rule(problem):
    p = problem(SECTION4)
    theta = {"u": a, "v": b}
    assert verify_solution(p, theta)
    # a + x -> x makes both sides collapse to b
    both = make_theory(CUSTOM, p.rules + ((plus(a, x, ac=frozenset()), x),))
    assert not verify_solution(p, theta, both)


def test_verify_xor_example(xor_example):
    sigma = {"x1": c2, "x2": plus(c1, Const("c3")), "x3": Const("c3")}
    assert verify_solution(xor_example, sigma)
    assert not verify_solution(xor_example, {"x1": c2, "x2": ZERO, "x3": Const("c3")})


def test_joinable():
    assert joinable(h(a), f(a, c), R1_THEORY)
    assert not joinable(h(c), f(c, c), R1_THEORY)
    assert joinable(plus(c1, c2, c1), c2, ACUN_THEORY)


@pytest.mark.parametrize("theory", [R1_THEORY, R4_THEORY, R5_THEORY])
def test_syntactic_theories_are_oriented(theory):
    assert check_orientation(theory)


def test_orientation_needs_precedence():
    assert not lpo_greater(h(a), f(a, c), ("f", "h", "a", "b", "c"))
    assert lpo_greater(h(a), f(a, c), ("h", "f", "a", "b", "c"))
    with pytest.raises(UnsupportedProblem):
        check_orientation(ACUN_THEORY)


def test_make_theory_errors():
    assert make_theory(R1) is R1_THEORY
    with pytest.raises(UnsupportedProblem):
        make_theory(CUSTOM)
    with pytest.raises(UnsupportedProblem):
        make_theory("z3")
    with pytest.raises(SignatureError):
        RewriteRule(x, a)
    with pytest.raises(SignatureError):
        RewriteRule(h(a), f(a, y))


@pytest.mark.parametrize("theory, tag, consts", [
    (R1_THEORY, R1, None),
    (R4_THEORY, R4, None),
    (R5_THEORY, R5, None),
    (ACUN_THEORY, ACUN, ("c1", "c2")),
    (ACUNH_THEORY, ACUNH, ("c1", "c2")),
])
def test_randomized_strategy_reaches_the_same_normal_form(rng, theory, tag, consts):
    sig = theory_signature(tag, consts)
    for _ in range(200):
        t = random_term(rng, sig, ("x", "y"), 4)
        assert normalize_randomized(t, theory, rng) == normalize(t, theory)


def test_r1_steps_grow_terms(rng):
    sig = theory_signature(R1)
    steps = 0
    while steps < 500:
        t = random_term(rng, sig, (), 4)
        for pos in redexes(t, R1_THEORY):
            assert term_size(rewrite_step(t, pos, R1_THEORY)) == term_size(t) + 1
            steps += 1


def test_zero_value_makes_asymmetric_sum_reducible(problem):
    p = problem("theory acun\nconsts c1\nvars x\nasym c1 =v x + c1\n")
    assert not verify_solution(p, {"x": ZERO})
    q = problem("theory acunh\nconsts c1 c2\nvars x y\nasym y =v h(x) + c1\n")
    assert not verify_solution(q, {"x": ZERO, "y": c1})
    assert verify_solution(q, {"x": c2, "y": plus(h(c2), c1)})
