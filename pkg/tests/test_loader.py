import pytest

from uniflab.util import InstanceFormatError, InstanceStream
from uniflab.modules.term import Var, App, ASYM
from uniflab.modules.oracles.instances import CnfFormula, Graph
from uniflab.loader import (
    instance_paths, parse_problem, format_problem, read_problem, write_problem, read_dimacs,
    write_dimacs, read_edge_list, write_edge_list, random_cnf, random_nae, random_graph,
    odd_wheel, random_syntactic_problem, random_xor_problem, random_acunh_problem,
)
from conftest import XOR_EXAMPLE, COLORING_EXAMPLE, C5_EXAMPLE

CUSTOM_EXAMPLE = """\
theory custom
consts a
vars u v w
rule x + a -> x
asym u + v =v v + w
"""

DIMACS = """\
c two clauses
p cnf 3 2
1 -2 3 0
-1 -2 3 0
"""


@pytest.mark.parametrize("text", [XOR_EXAMPLE, COLORING_EXAMPLE, C5_EXAMPLE, CUSTOM_EXAMPLE])
def test_problem_text_is_stable(text):
    assert format_problem(parse_problem(text)) == text


def test_comments_and_blank_lines(problem):
    p = problem("# header\ntheory r1\n\nvars X Y   # two of them\nasym X =v h(Y)\n")
    assert p.variables == ("X", "Y")
    assert p.items[0].relation == ASYM
    assert p.items[0].rhs == App("h", (Var("Y"),))


def test_custom_functions_are_declared(problem):
    p = problem("theory custom\nconsts a\nfuncs g/1\nrule g(a) -> a\neq g(x) = a\n")
    assert [s.name for s in p.functions] == ["g"]
    assert "funcs g/1" in format_problem(p)


@pytest.mark.parametrize("text, line", [
    ("theory r1\nfoo X\n", 2),
    ("theory r9\n", 1),
    ("theory r1\nvars X\neq X = h(\n", 3),
    ("theory r1\nvars X\neq X =v a\n", 3),
    ("theory r1\nrule h(c) -> c\n", 2),
    ("theory custom\nfuncs g\n", 2),
])
def test_problem_errors_carry_line(text, line):
    with pytest.raises(InstanceFormatError) as info:
        parse_problem(text, "p.txt")
    assert info.value.line == line
    assert str(info.value).startswith("p.txt:{}:".format(line))


def test_missing_theory():
    with pytest.raises(InstanceFormatError):
        parse_problem("vars X\n")


def test_undeclared_variable_is_an_error():
    with pytest.raises(InstanceFormatError):
        parse_problem("theory r1\nvars X\neq X = h(Z)\n")


def test_problem_files(tmp_path):
    path = tmp_path / "nested" / "xor.txt"
    write_problem(parse_problem(XOR_EXAMPLE), path)
    assert read_problem(path) == parse_problem(XOR_EXAMPLE)
    assert read_problem(str(path)) == parse_problem(XOR_EXAMPLE)


def test_instance_paths(tmp_path, capsys):
    (tmp_path / "b.txt").write_text(C5_EXAMPLE)
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "a.txt").write_text(XOR_EXAMPLE)
    assert instance_paths(tmp_path) == [tmp_path / "b.txt", tmp_path / "sub" / "a.txt"]
    assert "Found 2 instance file(s)" in capsys.readouterr().out
    assert instance_paths(tmp_path / "b.txt") == [tmp_path / "b.txt"]
    with pytest.raises(InstanceFormatError):
        instance_paths(tmp_path / "missing")
    (tmp_path / "empty").mkdir()
    with pytest.raises(InstanceFormatError):
        instance_paths(tmp_path / "empty")


def test_dimacs():
    formula = read_dimacs(DIMACS)
    assert formula == CnfFormula(3, ((1, -2, 3), (-1, -2, 3)))
    assert write_dimacs(formula) == "p cnf 3 2\n1 -2 3 0\n-1 -2 3 0\n"
    assert read_dimacs("p cnf 2 1\n1\n2 0\n").clauses == ((1, 2),)


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\n1 x 0\n",
    "p dnf 2 1\n1 0\n",
    "p cnf 2 1\n3 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(InstanceFormatError):
        read_dimacs(text)


def test_edge_lists():
    graph = read_edge_list("p edge 4 4\ne 1 3\ne 1 2\ne 2 3\ne 3 4\n")
    assert graph == Graph(4, ((1, 3), (1, 2), (2, 3), (3, 4)))
    assert read_edge_list(write_edge_list(graph)) == graph
    assert read_edge_list("1 2\n2 5\n") == Graph(5, ((1, 2), (2, 5)))


@pytest.mark.parametrize("text", ["e 1\n", "p edge 3 1\ne 1 1\n", "p edge 2 1\ne 1 3\n", "e 1 x\n"])
def test_edge_list_errors(text):
    with pytest.raises(InstanceFormatError):
        read_edge_list(text)


def test_random_instances_are_well_formed(rng):
    for _ in range(50):
        formula = random_cnf(rng, 5, 7)
        assert len(formula.clauses) == 7
        assert all(len(set(map(abs, c))) == 3 for c in formula.clauses)
        assert random_nae(rng, 4, 3).is_monotone
        graph = random_graph(rng, 5, 0.5)
        assert graph.num_vertices == 5
    assert len(odd_wheel(5).edges) == 10


def test_random_problems_use_declared_names(rng):
    p = random_syntactic_problem(rng, "r5", num_vars=2, num_items=3)
    assert p.variables == ("x1", "x2") and p.constants == ("a", "b")
    q = random_xor_problem(rng, num_vars=3, num_consts=2)
    assert q.constants == ("c1", "c2")
    r = random_acunh_problem(rng, num_vars=2, num_consts=1)
    for text in (format_problem(p), format_problem(q), format_problem(r)):
        assert format_problem(parse_problem(text)) == text


def test_instance_stream_is_repeatable():
    stream = InstanceStream(lambda rng: rng.random(), 5, "7:suite")
    first = list(stream)
    assert len(first) == len(stream) == 5
    assert list(stream) == first
    assert first != list(InstanceStream(lambda rng: rng.random(), 5, "8:suite"))


def test_xor_problems_over_a_single_atom(rng):
    for _ in range(50):
        p = random_xor_problem(rng, num_vars=1, num_consts=0, num_items=3)
        assert p.variables == ("x1",) and p.constants == ()


def test_small_instances_are_accepted():
    assert CnfFormula(2, ((1,), (-1, 2))).clauses == ((1,), (-1, 2))
    assert Graph(2, ((1, 2),)).num_vertices == 2
    assert Graph(0, ()).edges == ()
