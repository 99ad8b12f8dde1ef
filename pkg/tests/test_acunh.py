import pytest

from uniflab.util import UnsupportedProblem, SizeCapExceeded
from uniflab.modules.term import Var, Const, App, ZERO, plus, h_power
from uniflab.modules.linalg import GF2Poly
from uniflab.modules.rewrite import verify_solution
from uniflab.models.acunh_ground import (
    linear_form, build_component_systems, poly_term, decide_ground_disunif_acunh,
)
from uniflab.models.acunh_automata import (
    AEq, SUM, HOM, CONST, standardize_acunh, ground_asym_unify_acunh,
)
from uniflab.modules.oracles.brute import brute_ground_search
from uniflab.loader import random_acunh_problem

a, c1, c2 = Const("a"), Const("c1"), Const("c2")
x = Var("x")


def h(t):
    return App("h", (t,))


def test_linear_form_groups_powers():
    form = linear_form(plus(h(plus(x, c1)), x))
    assert form.var_coeffs == {"x": GF2Poly(0b11)}
    assert form.const_coeffs == {"c1": GF2Poly(0b10)}


def test_component_systems_share_the_matrix(problem):
    p = problem("theory acunh\nconsts c1 c2\nvars x y\neq h(x) + y = c1 + h(c2)\ndiseq x != c2\n")
    lp = build_component_systems(p)
    assert lp.variables == ("x", "y", "_v1")
    assert lp.diseq_vars == ("_v1",)
    c1_system, c2_system = lp.systems
    assert c1_system.A is c2_system.A
    assert c1_system.b == [GF2Poly(1), GF2Poly(0)]
    assert c2_system.b == [GF2Poly(0b10), GF2Poly(1)]


def test_poly_term():
    assert poly_term(GF2Poly(0b101), "c1") == plus(c1, h(h(c1)))
    assert poly_term(GF2Poly(0), "c1") == ZERO


def test_homomorphic_equation_is_solved(problem):
    p = problem("theory acunh\nconsts c1\nvars x\neq h(x) + x = h(c1) + c1\n")
    decision = decide_ground_disunif_acunh(p)
    assert decision.substitution == {"x": c1}


@pytest.mark.parametrize("text", [
    "theory acunh\nconsts c1\nvars x\neq x = 0\ndiseq x != 0\n",
    "theory acunh\nconsts c1\nvars x\neq h(x) = c1\n",
    "theory acunh\nconsts c1 c2\nvars x\neq h(x) + x = c2\neq x = c1\n",
])
def test_ground_disunification_failures(problem, text):
    assert not decide_ground_disunif_acunh(problem(text)).solvable


def test_disequation_picks_a_non_zero_value(problem):
    p = problem("theory acunh\nconsts c1\nvars x\ndiseq h(x) != x\n")
    decision = decide_ground_disunif_acunh(p)
    assert decision.solvable
    assert decision.substitution["x"] != ZERO
    assert verify_solution(p, decision.substitution)


def test_snf_backend_rejects_asymmetry(c5_example):
    with pytest.raises(UnsupportedProblem):
        build_component_systems(c5_example)


def test_ground_backend_agrees_with_bounded_search(rng):
    for _ in range(60):
        p = random_acunh_problem(rng, num_vars=1, num_consts=1, num_items=2, degree=1,
                                 asym_prob=0.0, diseq_prob=0.5)
        decision = decide_ground_disunif_acunh(p)
        oracle = brute_ground_search(p, 3)
        if oracle.solvable:
            assert decision.solvable, p
        if decision.solvable:
            assert verify_solution(p, decision.substitution)


def test_standardize_worked_example(c5_example):
    equations, tracks = standardize_acunh(c5_example)
    assert tracks == ("V", "W", "Y", "U")
    assert equations == [
        AEq("U", SUM, ("V", "Y"), asym=True),
        AEq("W", HOM, ("V",)),
        AEq("Y", HOM, ("W",), asym=True),
    ]


def test_standardize_splits_long_sums(problem):
    p = problem("theory acunh\nconsts a\nvars X Y Z\nasym X =v Y + Z + a\n")
    equations, tracks = standardize_acunh(p)
    assert tracks == ("X", "Y", "Z", "_v1", "_v2")
    assert equations == [
        AEq("X", SUM, ("Y", "_v1"), asym=True),
        AEq("_v1", SUM, ("Z", "_v2"), asym=True),
        AEq("_v2", CONST, symbol="a", asym=True),
    ]


def test_worked_example_unifier(c5_example):
    decision = ground_asym_unify_acunh(c5_example)
    assert decision.solvable
    assert decision.substitution == {
        "V": a,
        "W": h(a),
        "Y": h_power(2, a),
        "U": plus(a, h_power(2, a)),
    }
    assert decision.stats["witness"] == [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 1]]


def test_asymmetric_homomorphism_needs_a_single_power(problem):
    asym = problem("theory acunh\nconsts a\nvars x y\nasym x =v h(y)\neq y = 0\n")
    assert not ground_asym_unify_acunh(asym).solvable
    sym = problem("theory acunh\nconsts a\nvars x y\neq x = h(y)\neq y = 0\n")
    assert ground_asym_unify_acunh(sym).substitution == {"x": ZERO, "y": ZERO}


def test_components_are_guessed_per_constant(problem):
    p = problem("theory acunh\nconsts c1 c2\nvars x y\nasym x =v y + c2\neq y = h(c1)\n")
    decision = ground_asym_unify_acunh(p)
    assert decision.substitution == {"x": plus(h(c1), c2), "y": h(c1)}
    with pytest.raises(SizeCapExceeded):
        ground_asym_unify_acunh(p, max_guesses=2)


def test_distinct_constants_do_not_unify(problem):
    p = problem("theory acunh\nconsts c1 c2\nvars x\neq x = c1\neq x = c2\n")
    assert not ground_asym_unify_acunh(p).solvable


def test_without_constants_only_zero_is_ground(problem):
    p = problem("theory acunh\nvars x\neq x = h(x)\n")
    assert ground_asym_unify_acunh(p).substitution == {"x": ZERO}


def test_automata_agree_with_bounded_search(rng):
    for _ in range(40):
        p = random_acunh_problem(rng, num_vars=2, num_consts=1, num_items=2, degree=1, asym_prob=0.5)
        decision = ground_asym_unify_acunh(p)
        oracle = brute_ground_search(p, 3)
        if oracle.solvable:
            assert decision.solvable, p
        if decision.solvable:
            assert verify_solution(p, decision.substitution)


def test_many_free_disequations_are_separated(problem):
    text = "theory acunh\nconsts c\nvars x1 x2 x3 x4 x5\n"
    text += "".join("diseq x{} != 0\n".format(j) for j in range(1, 6))
    p = problem(text)
    decision = decide_ground_disunif_acunh(p)
    assert decision.solvable
    assert not decision.bounded
    assert verify_solution(p, decision.substitution)


def test_disequations_sharing_parameters_are_separated(problem):
    text = "theory acunh\nconsts c\nvars x1 x2 x3 x4\n"
    text += "diseq x1 != x2\ndiseq x2 != x3\ndiseq x3 != x4\ndiseq x1 + x2 != x3 + x4\n"
    text += "diseq h(x1) != x4\ndiseq x1 + x3 != h(x2)\n"
    p = problem(text)
    decision = decide_ground_disunif_acunh(p, small_cap=0)
    assert decision.solvable
    assert verify_solution(p, decision.substitution)


def test_ground_backend_finds_every_bounded_solution(rng):
    for _ in range(60):
        p = random_acunh_problem(rng, num_vars=2, num_consts=1, num_items=3, degree=2,
                                 asym_prob=0.0, diseq_prob=0.7)
        decision = decide_ground_disunif_acunh(p, small_cap=0)
        if brute_ground_search(p, 2).solvable:
            assert decision.solvable, p
        if decision.solvable:
            assert verify_solution(p, decision.substitution)
