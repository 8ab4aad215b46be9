"""Directed graphs on n unlabeled vertices, as sets of edges."""

from src.domains.base import Domain
from src.domains.compositions import Subsets
from src.domains.elementary import USet
from src.domains.predicates import no_loops


def digraphs(n: int, loops: bool = True, name: str = "n") -> Domain:
    if n < 1:
        raise ValueError(f"A digraph needs at least one vertex, got {n}")
    nodes = USet(n, name)
    graphs = Subsets(nodes * nodes)
    if loops:
        return graphs
    return graphs.filter(no_loops, strict=True)
