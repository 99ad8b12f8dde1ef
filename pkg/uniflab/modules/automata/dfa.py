import itertools as it
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from uniflab.modules.term.term import Const, ZERO, plus, h_power

logger = logging.getLogger(__name__)

BitSymbol = Tuple[int, ...]
DEAD = -1


def alphabet(width: int) -> List[BitSymbol]:
    """All bit-vectors of the given width, in lexicographic order."""
    return list(it.product((0, 1), repeat=width))


class EqAutomaton(object):
    '''Deterministic automaton over bit-vector symbols for one equation.

    Each track of a symbol carries one bit of one variable's coefficient at
    the current power of ``h``. The transition table is total: rejected
    symbols lead to the absorbing ``DEAD`` state.
    '''

    def __init__(self, name: str, width: int, initial: int, accepting,
                 step: Callable[[int, BitSymbol], Optional[int]]):
        self.name = name
        self.width = width
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.delta: Dict[Tuple[int, BitSymbol], int] = {}
        symbols = alphabet(width)
        todo, seen = [initial], {initial, DEAD}
        for s in symbols:
            self.delta[(DEAD, s)] = DEAD
        while todo:
            q = todo.pop()
            for s in symbols:
                nxt = step(q, s)
                nxt = DEAD if nxt is None else nxt
                self.delta[(q, s)] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        self.states = frozenset(seen)

    def __call__(self, state: int, symbol: BitSymbol) -> int:
        return self.delta[(state, symbol)]

    def accepts(self, word: Sequence[BitSymbol]) -> bool:
        q = self.initial
        for s in word:
            q = self(q, s)
        return q in self.accepting

    def __repr__(self):
        return "EqAutomaton({}, states={})".format(self.name, len(self.states))


def xor_automaton(width, p, q, r):
    """``P = Q + R``: every symbol must satisfy ``P = Q xor R``."""
    def step(state, s):
        return 0 if s[p] == s[q] ^ s[r] else None
    return EqAutomaton("xor", width, 0, {0}, step)


def asym_xor_automaton(width, p, q, r):
    """``P =v Q + R``: disjoint, both non-empty, ``P`` their union.

    States record which of ``Q`` and ``R`` has shown a 1 so far.
    """
    allowed = {(0, 0, 0), (1, 1, 0), (1, 0, 1)}
    def step(state, s):
        bits = (s[p], s[q], s[r])
        if bits not in allowed:
            return None
        return state | (1 if bits[1] else 0) | (2 if bits[2] else 0)
    return EqAutomaton("asym-xor", width, 0, {3}, step)


def hom_automaton(width, x, y):
    """``X = h(Y)``: ``X`` is ``Y`` shifted by one position; the state is the pending bit."""
    def step(state, s):
        if s[x] != state:
            return None
        return s[y]
    return EqAutomaton("hom", width, 0, {0}, step)


def asym_hom_automaton(width, x, y):
    """``X =v h(Y)``: ``Y`` is a single power ``h^i`` and ``X`` is ``h^(i+1)``."""
    def step(state, s):
        bx, by = s[x], s[y]
        if state == 0:
            if bx == 0:
                return 1 if by else 0
            return None
        if state == 1:
            return 2 if (bx, by) == (1, 0) else None
        return 2 if (bx, by) == (0, 0) else None
    return EqAutomaton("asym-hom", width, 0, {2}, step)


def const_automaton(width, x):
    """``X = c`` for the single constant: a 1 in the first position only."""
    def step(state, s):
        if state == 0:
            return 1 if s[x] else None
        return 1 if not s[x] else None
    return EqAutomaton("const", width, 0, {1}, step)


def zero_automaton(width, x):
    return EqAutomaton("zero", width, 0, {0}, lambda state, s: None if s[x] else 0)


def nonzero_automaton(width, x):
    return EqAutomaton("nonzero", width, 0, {1}, lambda state, s: 1 if (state or s[x]) else 0)


def copy_automaton(width, x, y):
    return EqAutomaton("copy", width, 0, {0}, lambda state, s: 0 if s[x] == s[y] else None)


class ProductAutomaton(object):
    """Synchronous product of equation automata, explored on demand."""

    def __init__(self, automata: Sequence[EqAutomaton], width: int):
        self.automata = list(automata)
        self.width = width
        self.initial = tuple(a.initial for a in self.automata)

    def accepting(self, state) -> bool:
        return all(q in a.accepting for q, a in zip(state, self.automata))

    def step(self, state, symbol):
        return tuple(a(q, symbol) for q, a in zip(state, self.automata))

    def explore(self) -> nx.DiGraph:
        """Reachable part of the product; each edge keeps its first symbol."""
        graph = nx.DiGraph()
        graph.add_node(self.initial)
        symbols = alphabet(self.width)
        frontier = [self.initial]
        while frontier:
            nxt = []
            for state in frontier:
                for s in symbols:
                    succ = self.step(state, s)
                    if DEAD in succ:
                        continue
                    if succ not in graph:
                        graph.add_node(succ)
                        nxt.append(succ)
                    if not graph.has_edge(state, succ):
                        graph.add_edge(state, succ, symbol=s)
            frontier = nxt
        return graph


def intersect(automata: Sequence[EqAutomaton], width: Optional[int] = None) -> ProductAutomaton:
    if width is None:
        width = automata[0].width if automata else 0
    return ProductAutomaton(automata, width)


def is_empty(product: ProductAutomaton) -> Tuple[bool, Optional[List[BitSymbol]]]:
    """Emptiness check by breadth-first search; returns a shortest witness."""
    graph = product.explore()
    paths = nx.single_source_shortest_path(graph, product.initial)
    best = None
    for state, path in paths.items():
        if product.accepting(state) and (best is None or len(path) < len(best)):
            best = path
    logger.debug("product explored %d states", graph.number_of_nodes())
    if best is None:
        return True, None
    word = [graph.edges[u, v]["symbol"] for u, v in zip(best, best[1:])]
    return False, strip_trailing_zeros(word)


def strip_trailing_zeros(word):
    word = list(word)
    while word and not any(word[-1]):
        word.pop()
    return word


def decode(witness: Sequence[BitSymbol], tracks: Sequence[str], constant: str):
    """Read each track as a set of powers of ``h`` applied to ``constant``."""
    c = Const(constant)
    out = {}
    for k, name in enumerate(tracks):
        powers = [i for i, s in enumerate(witness) if s[k]]
        out[name] = plus(*[h_power(i, c) for i in powers]) if powers else ZERO
    return out
