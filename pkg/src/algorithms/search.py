import logging
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

logger = logging.getLogger(__name__)

Node = TypeVar("Node", bound=Hashable)


@dataclass(frozen=True)
class BfsProblem(Generic[Node]):
    """Level-by-level search from `initial`.

    `goal(node, depth)` returns None to keep searching, anything else to stop with that value.
    """

    initial: Node
    successors: Callable[[Node], Iterable[Node]]
    goal: Callable[[Node, int], Any]
    max_depth: int
    not_found_value: Any = None


def bfs(problem: BfsProblem[Node]) -> Any:
    """Goal value at the shallowest depth where it is not None, or `not_found_value`.

    Nodes are visited once across all levels. Depths above `max_depth` are not explored.
    """
    level = [problem.initial]
    visited = {problem.initial}
    depth = 0
    while level:
        for node in level:
            value = problem.goal(node, depth)
            if value is not None:
                return value
        if depth >= problem.max_depth:
            break
        depth += 1
        following = []
        for node in level:
            for successor in problem.successors(node):
                if successor not in visited:
                    visited.add(successor)
                    following.append(successor)
        level = following
    logger.debug(f"Search exhausted after depth {depth} with {len(visited)} nodes")
    return problem.not_found_value
