from collections.abc import Iterable

from src.values.objects import BasicObject, atoms, relabel, sort_key
from src.values.permutation import bijections, group_by_uset
from src.values.uset import Atom, Uset


def prefix_counts(found: Iterable[Atom]) -> dict[Uset, int] | None:
    """Per-uset count of used atoms, or None when some uset's atoms are not a prefix."""
    groups = group_by_uset(found)
    counts: dict[Uset, int] = {}
    for uset, group in groups.items():
        if group[-1].index != len(group) - 1:
            return None
        counts[uset] = len(group)
    return counts


def has_gap(found: Iterable[Atom]) -> bool:
    """True iff some atom is present while a smaller atom of its uset is missing."""
    return prefix_counts(found) is None


def _shape(o: BasicObject) -> tuple:
    """Sort key with every atom reduced to its uset; equal for isomorphic objects."""
    if isinstance(o, Atom):
        return (4, o.uset.id)
    if isinstance(o, tuple):
        return (5, len(o), tuple(_shape(c) for c in o))
    key = sort_key(o)
    if key[0] in (6, 7):
        return (key[0], len(o))
    return key


def is_isomorphic(a: BasicObject, b: BasicObject) -> bool:
    """True iff some uset-respecting permutation maps `b` onto `a`."""
    if _shape(a) != _shape(b):
        return False
    groups_a = group_by_uset(atoms(a))
    groups_b = group_by_uset(atoms(b))
    if {u: len(g) for u, g in groups_a.items()} != {u: len(g) for u, g in groups_b.items()}:
        return False
    target = sort_key(a)
    return any(sort_key(relabel(b, m)) == target for m in bijections(groups_b, groups_a))


def canonical_form_oracle(o: BasicObject) -> BasicObject:
    """Minimal member of the isomorphism class of `o`, by brute force.

    Only relabelings of the atoms of `o` onto the first atoms of each uset are tried: the
    minimum never has a gap, so it uses exactly those atoms.
    """
    sources = group_by_uset(atoms(o))
    targets = {u: u.atoms[: len(g)] for u, g in sources.items()}
    best, best_key = o, sort_key(o)
    for mapping in bijections(sources, targets):
        image = relabel(o, mapping)
        key = sort_key(image)
        if key < best_key:
            best, best_key = image, key
    return best
