import pytest

from uniflab.util import TermSyntaxError, SignatureError, FreshNames
from uniflab.modules.term import (
    Var, Const, App, ZERO, plus, h_power, apply_subst, instantiate, canonical, summands, compose,
    subterms, subterm_at, replace_at, variables, constants, term_size, term_depth, is_ground,
    print_term, format_substitution, term_order, parse_term, theory_signature, Problem, Item,
    R1, R4, ACUN, ACUNH, CUSTOM, EQ, ASYM,
)
from uniflab.loader import random_term

a, b, c = Const("a"), Const("b"), Const("c")
x, y, u, v, w = Var("x"), Var("y"), Var("u"), Var("v"), Var("w")

R1_SIG = theory_signature(R1)
ACUN_SIG = theory_signature(ACUN, ("c1", "c2", "c3"))
ACUNH_SIG = theory_signature(ACUNH, ("c1", "c2"))


def test_parse_function_terms():
    assert parse_term("f(a,c)", R1_SIG) == App("f", (a, c))
    assert parse_term("h(x1)", R1_SIG) == App("h", (Var("x1"),))
    assert parse_term(" f( h(b) , x ) ", R1_SIG) == App("f", (App("h", (b,)), x))


def test_parse_sums_are_flattened_and_sorted():
    expected = App("+", (Var("y1"), Var("y3"), Var("z1")))
    assert parse_term("y1 + y3 + z1", ACUN_SIG) == expected
    assert parse_term("z1 + (y3 + y1)", ACUN_SIG) == expected
    assert parse_term("xor(c2, c1, x)", ACUN_SIG) == App("+", (x, Const("c1"), Const("c2")))


def test_parse_drops_zero_and_keeps_duplicates():
    assert parse_term("x + x + 0", ACUN_SIG) == App("+", (x, x))
    assert parse_term("x + 0", ACUN_SIG) == x
    assert parse_term("0 + 0", ACUN_SIG) == ZERO


def _random_bracketing(rng, parts):
    if len(parts) == 1:
        return parts[0]
    k = rng.randint(1, len(parts) - 1)
    return App("+", (_random_bracketing(rng, parts[:k]), _random_bracketing(rng, parts[k:])))


def test_canonical_form_is_idempotent(rng):
    for _ in range(300):
        t = random_term(rng, ACUNH_SIG, ("x", "y"), 3)
        assert canonical(t) == t
        assert canonical(canonical(t)) == canonical(t)


def test_sums_canonicalize_independently_of_order_and_bracketing(rng):
    for _ in range(300):
        t = random_term(rng, ACUNH_SIG, ("x", "y"), 3)
        parts = list(summands(t)) + [ZERO] * rng.randint(0, 2)
        rng.shuffle(parts)
        assert canonical(_random_bracketing(rng, parts)) == t


def test_parse_non_ac_plus_keeps_bracketing():
    sig = theory_signature(CUSTOM, ("a",))
    t = parse_term("u + v + w", sig)
    assert t == App("+", (App("+", (u, v)), w))
    assert print_term(t) == "(u + v) + w"


@pytest.mark.parametrize("text, position", [
    ("f(a", 3),
    ("a $", 2),
    ("f(a,)", 4),
    ("", 0),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text, R1_SIG)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["f(a)", "g(a)", "h", "h(a, b)", "0"])
def test_signature_errors(text):
    with pytest.raises(SignatureError):
        parse_term(text, R1_SIG)


def test_reserved_fresh_prefix_is_rejected():
    with pytest.raises(TermSyntaxError):
        parse_term("f(_v1, a)", R1_SIG)


def test_declared_variables_restrict_identifiers():
    sig = theory_signature(R4, None, ("x1",))
    assert parse_term("g(x1)", sig) == App("g", (Var("x1"),))
    with pytest.raises(SignatureError):
        parse_term("g(x2)", sig)


def test_apply_subst_recanonicalizes_without_rewriting():
    t = plus(u, v)
    assert apply_subst({"u": v, "w": v}, t) == App("+", (v, v))
    assert apply_subst({}, t) == t
    assert apply_subst({"x": a, "y": b}, App("f", (x, y))) == App("f", (a, b))


def test_instantiation_keeps_introduced_zeros():
    t = plus(x, y)
    assert apply_subst({"x": ZERO}, t) == y
    kept = instantiate({"x": ZERO}, t)
    assert sorted(map(print_term, kept.args)) == ["0", "y"]


def test_compose_definition():
    assert compose({"x": y}, {"y": a}) == {"x": a, "y": a}
    tau = {"y": App("h", (a,))}
    assert compose({}, tau) == tau


def test_compose_agrees_with_double_application(rng):
    names = ("x", "y", "z")
    for _ in range(300):
        sigma = {n: random_term(rng, R1_SIG, names, 2) for n in rng.sample(names, 2)}
        tau = {n: random_term(rng, R1_SIG, names, 2) for n in rng.sample(names, 2)}
        t = random_term(rng, R1_SIG, names, 3)
        assert apply_subst(compose(sigma, tau), t) == apply_subst(tau, apply_subst(sigma, t))


def test_term_order_is_total_and_natural():
    assert term_order(x, a) == 1
    assert term_order(a, x) == -1
    assert term_order(Var("x2"), Var("x10")) == 1
    assert term_order(App("h", (a,)), App("h", (a,))) == 0
    assert term_order(c, App("h", (a,))) == 1


def test_positions_and_sizes():
    t = App("f", (a, App("h", (b,))))
    assert [p for p, _ in subterms(t)] == [(), (0,), (1,), (1, 0)]
    assert subterm_at(t, (1, 0)) == b
    assert replace_at(t, (1,), c) == App("f", (a, c))
    assert term_size(t) == 4
    assert term_depth(t) == 2
    assert is_ground(t)


def test_variables_and_constants_in_first_occurrence_order():
    t = App("f", (y, App("f", (x, App("h", (y,))))))
    assert variables(t) == ("y", "x")
    assert constants(plus(Const("c2"), ZERO, Const("c1"))) == ("c1", "c2")


def test_printing():
    assert print_term(h_power(2, a)) == "h(h(a))"
    assert print_term(plus(Const("c2"), Const("c1"))) == "c1 + c2"
    assert print_term(plus()) == "0"
    assert format_substitution({"x10": a, "x2": b}) == "{x2 -> b, x10 -> a}"


def test_fresh_names_skip_taken():
    fresh = FreshNames(taken=("_v1",))
    assert fresh() == "_v2"
    assert fresh() == "_v3"


def test_problem_build_infers_names():
    items = [Item(App("h", (x,)), App("f", (x, c)), EQ), Item(y, App("h", (x,)), ASYM)]
    p = Problem.build(R1, items)
    assert p.variables == ("x", "y")
    assert p.constants == ("a", "b", "c")
    assert p.has(ASYM)
    q = Problem.build(ACUNH, [Item(x, plus(Const("c2"), Const("c1")), EQ)])
    assert q.constants == ("c1", "c2")
