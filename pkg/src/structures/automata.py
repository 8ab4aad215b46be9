"""Deterministic finite automata and their shortest reset words."""

from collections.abc import Iterator, Mapping
from dataclasses import dataclass

from src.algorithms.search import BfsProblem, bfs
from src.domains.base import Domain
from src.domains.compositions import Mappings
from src.domains.elementary import USet
from src.values.objects import MapValue
from src.values.uset import Atom, Uset


@dataclass(frozen=True)
class AutomatonTable:
    """Transition tables delta: (state, symbol) -> state over unlabeled states and symbols."""

    states: Uset
    symbols: Uset

    @classmethod
    def create(cls, n_states: int, n_symbols: int) -> "AutomatonTable":
        if n_states < 1 or n_symbols < 1:
            raise ValueError(f"Need at least one state and one symbol, got {n_states} and {n_symbols}")
        return cls(USet(n_states, "q").uset, USet(n_symbols, "a").uset)

    def domain(self) -> Domain:
        states = USet.of(self.states)
        return Mappings(states * USet.of(self.symbols), states)

    def delta(self, transitions: Mapping[tuple[int, int], int]) -> MapValue:
        """Table from (state index, symbol index) -> state index."""
        q, a = self.states.atoms, self.symbols.atoms
        return MapValue(((q[s], a[x]), q[t]) for (s, x), t in transitions.items())


def max_reset_depth(n_states: int) -> int:
    """Upper bound on the length of a shortest reset word."""
    return (n_states**3 - n_states) // 6


def check_automaton(delta: MapValue, *, unsynchronized: int = 0) -> int:
    """Length of a shortest reset word of `delta`, or `unsynchronized` if there is none.

    An automaton with one state is already synchronized and yields 0.
    """
    states = frozenset(s for (s, _) in delta)
    alphabet = sorted({a for (_, a) in delta}, key=lambda a: a.index)

    def successors(current: frozenset[Atom]) -> Iterator[frozenset[Atom]]:
        for a in alphabet:
            yield frozenset(delta[(s, a)] for s in current)

    problem = BfsProblem(
        initial=states,
        successors=successors,
        goal=lambda node, depth: depth if len(node) == 1 else None,
        max_depth=max_reset_depth(len(states)),
        not_found_value=unsynchronized,
    )
    return bfs(problem)
