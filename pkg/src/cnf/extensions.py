import bisect
import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Protocol

from src.values.isomorphism import prefix_counts
from src.values.objects import BasicObject, atoms, relabel, sort_key
from src.values.permutation import group_by_uset
from src.values.uset import Atom, Uset


class CanonicalSource(Protocol):
    def canonical_forms(self) -> Sequence[BasicObject]: ...


@dataclass(frozen=True)
class SearchNode:
    partial: BasicObject
    depth: int
    used: Mapping[Uset, int] = field(default_factory=dict)

    @classmethod
    def of(cls, partial: BasicObject, depth: int) -> "SearchNode | None":
        """Node for `partial`, or None when its atoms have a gap."""
        used = prefix_counts(atoms(partial))
        if used is None:
            return None
        return cls(partial, depth, used)

    def using(self, extra: BasicObject) -> "SearchNode | None":
        """Same node with the atoms of `extra` counted as used."""
        used = prefix_counts(atoms(extra) | {u.atoms[i] for u, n in self.used.items() for i in range(n)})
        if used is None:
            return None
        return SearchNode(self.partial, self.depth, used)


def _gap_free_assignments(uset: Uset, sources: Sequence[Atom], used: int) -> list[dict[Atom, Atom]]:
    """Injective maps of `sources` into `uset` whose images extend the used prefix without a gap."""
    limit = min(used + len(sources), uset.size)
    result = []
    for image in itertools.permutations(range(limit), len(sources)):
        fresh = sorted(i for i in image if i >= used)
        if fresh == list(range(used, used + len(fresh))):
            result.append({s: uset.atoms[i] for s, i in zip(sources, image)})
    return result


def images(c: BasicObject, used: Mapping[Uset, int]) -> list[BasicObject]:
    """Distinct relabelings of `c` that keep `used` plus their own atoms gap-free, sorted."""
    groups = group_by_uset(atoms(c))
    if not groups:
        return [c]
    choices = [_gap_free_assignments(u, srcs, used.get(u, 0)) for u, srcs in groups.items()]
    found: dict[tuple, BasicObject] = {}
    for combo in itertools.product(*choices):
        mapping: dict[Atom, Atom] = {}
        for part in combo:
            mapping.update(part)
        image = relabel(c, mapping)
        found.setdefault(sort_key(image), image)
    return [found[k] for k in sorted(found)]


class Extender:
    """Candidate extensions drawn from one subdomain: every image of one of its canonical forms
    that keeps the used atoms gap-free, optionally only those above a bound. Memoized on the
    used-prefix counts that matter."""

    def __init__(self, sub: CanonicalSource) -> None:
        forms = list(sub.canonical_forms())
        self._forms = forms
        self._usets = [sorted({a.uset for a in atoms(c)}, key=lambda u: u.id) for c in forms]
        self._memo: dict[tuple, tuple[list[tuple], list[BasicObject]]] = {}

    def __call__(self, node: SearchNode, above: BasicObject | None = None) -> list[BasicObject]:
        bound = sort_key(above) if above is not None else None
        result: list[BasicObject] = []
        for i, c in enumerate(self._forms):
            signature = (i, tuple(node.used.get(u, 0) for u in self._usets[i]))
            entry = self._memo.get(signature)
            if entry is None:
                found = images(c, node.used)
                entry = ([sort_key(x) for x in found], found)
                self._memo[signature] = entry
            keys, found = entry
            start = 0 if bound is None else bisect.bisect_right(keys, bound)
            result.extend(found[start:])
        return result


def extensions(node: SearchNode, sub: CanonicalSource, above: BasicObject | None = None) -> list[BasicObject]:
    """Candidate extensions of `node` drawn from `sub`, sorted per canonical form of `sub`."""
    return Extender(sub)(node, above)
