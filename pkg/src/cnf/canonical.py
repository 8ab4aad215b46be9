"""Parent tree and canonicity test.

An object is canonical when no uset-respecting permutation of its atoms gives a smaller
object. Sets whose items are atoms, or tuples of atoms with a fixed uset per position, are
checked in bulk with numpy: every relabeling is applied to integer item codes at once. Any
other object goes through a backtracking search that assigns image atoms in order and drops
a partial assignment as soon as a lower bound of its image exceeds the object.
"""

import itertools
import logging
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from functools import cache

import numpy as np

from src.values.isomorphism import prefix_counts
from src.values.objects import BasicObject, MapValue, SetValue, atoms, sort_key
from src.values.uset import Atom, Uset

logger = logging.getLogger(__name__)

MAX_RELABELINGS = 40_320
BATCH_CELLS = 4_000_000


class Bottom(Enum):
    """Root of the parent tree."""

    BOTTOM = "⊥"

    def __repr__(self) -> str:
        return self.value


BOTTOM = Bottom.BOTTOM


def parent(o: BasicObject) -> BasicObject | Bottom:
    """Object `o` is built from: tuples drop their last component, sets and maps their max element."""
    match o:
        case tuple() if o:
            return o[:-1]
        case SetValue() if len(o):
            return o.without_max()
        case MapValue() if len(o):
            return MapValue(o.pairs()[:-1])
        case _:
            return BOTTOM


def is_canonical(o: BasicObject) -> bool:
    """True iff no uset-respecting permutation maps `o` to a smaller object."""
    return canonical_mask([o])[0]


def canonical_mask(objects: Sequence[BasicObject]) -> list[bool]:
    """`is_canonical` for many objects; encodable sets of equal shape share one numpy pass."""
    result = [False] * len(objects)
    batches: dict[tuple, list[tuple[int, list[tuple[int, ...]]]]] = {}
    codes: dict[tuple, tuple | None] = {}
    for i, o in enumerate(objects):
        counts = prefix_counts(atoms(o))
        if counts is None:
            continue
        if all(n == 1 for n in counts.values()):
            result[i] = True
            continue
        encoded = _encode(o, {u.id: n for u, n in counts.items()}, codes)
        if encoded is None:
            result[i] = not _has_smaller_image(o)
        else:
            shape, rows = encoded
            batches.setdefault(shape, []).append((i, rows))

    for (uids, sizes, _), members in batches.items():
        for i, keep in zip((i for i, _ in members), _batch_mask(uids, sizes, [rows for _, rows in members])):
            result[i] = bool(keep)
    return result


def _item_code(key: tuple) -> tuple | None:
    """(rank and uset id per position, atom index per position) for an atom or a tuple of atoms."""
    if key[0] == 4:
        return (4, key[1]), (key[2],)
    if key[0] == 5 and key[1] and all(c[0] == 4 for c in key[2]):
        return (5, *(c[1] for c in key[2])), tuple(c[2] for c in key[2])
    return None


def _encode(o: BasicObject, counts: Mapping[int, int], codes: dict[tuple, tuple | None]) -> tuple | None:
    """Batch shape and index rows of `o`, or None when it needs the general search."""
    if not isinstance(o, SetValue) or not len(o):
        return None
    signature = None
    rows = []
    for key in o.item_keys:
        if key in codes:
            code = codes[key]
        else:
            code = codes[key] = _item_code(key)
        if code is None:
            return None
        if signature is None:
            signature = code[0]
        elif code[0] != signature:
            return None
        rows.append(code[1])
    uids = signature[1:]
    if any(uid not in counts for uid in uids):
        return None
    sizes = tuple((uid, counts[uid]) for uid in sorted(set(uids)))
    if math.prod(math.factorial(n) for _, n in sizes) > MAX_RELABELINGS:
        return None
    if sum(n for _, n in sizes) ** len(uids) >= 2**62:
        return None
    return (uids, sizes, len(rows)), rows


@cache
def _relabelings(sizes: tuple[int, ...]) -> np.ndarray:
    """Every product of per-uset permutations, as rows over one combined index space."""
    blocks = []
    offset = 0
    for n in sizes:
        blocks.append([tuple(offset + i for i in p) for p in itertools.permutations(range(n))])
        offset += n
    table = np.array([sum(choice, ()) for choice in itertools.product(*blocks)], dtype=np.int64)
    logger.debug(f"Built {len(table)} relabelings for uset sizes {sizes}")
    return table


def _batch_mask(uids: tuple[int, ...], sizes: tuple[tuple[int, int], ...], rows: list) -> np.ndarray:
    """Canonicity of same-shape sets given as atom index rows, one numpy pass per chunk."""
    offsets = dict(zip((uid for uid, _ in sizes), itertools.accumulate((n for _, n in sizes), initial=0)))
    table = _relabelings(tuple(n for _, n in sizes))
    width = table.shape[1]
    weights = width ** np.arange(len(uids) - 1, -1, -1, dtype=np.int64)
    items = np.asarray(rows, dtype=np.int64) + np.array([offsets[uid] for uid in uids], dtype=np.int64)

    # Items are stored sorted, and codes preserve their order
    original = items @ weights
    chunk = max(1, BATCH_CELLS // (len(table) * items[0].size))
    keep = []
    for start in range(0, len(items), chunk):
        part = items[start : start + chunk]
        image = table[:, part] @ weights
        image.sort(axis=-1)
        diff = image - original[start : start + chunk]
        first = (diff != 0).argmax(axis=-1)
        lead = np.take_along_axis(diff, first[..., None], axis=-1)[..., 0]
        keep.append(~(lead < 0).any(axis=0))
    return np.concatenate(keep)


def _bound_key(o: BasicObject, assigned: Mapping[Atom, tuple], floor: Mapping[Uset, tuple]) -> tuple:
    """Sort key of the image of `o` with unassigned atoms at the smallest free target.

    Never above the key of any completion of `assigned`: tuples and sorted item lists only
    grow when a part grows.
    """
    match o:
        case Atom():
            key = assigned.get(o)
            return key if key is not None else floor.get(o.uset, o.sort_key)
        case tuple():
            return (5, len(o), tuple(_bound_key(c, assigned, floor) for c in o))
        case SetValue():
            if not atoms(o):
                return o.sort_key
            return (6, len(o), tuple(sorted(_bound_key(c, assigned, floor) for c in o)))
        case MapValue():
            if not atoms(o):
                return o.sort_key
            pairs = ((_bound_key(k, assigned, floor), _bound_key(v, assigned, floor)) for k, v in o.pairs())
            return (7, len(o), tuple(sorted(pairs)))
        case _:
            return sort_key(o)


def _has_smaller_image(o: BasicObject) -> bool:
    """Assign preimages to the atoms of `o` in order, pruning by `_bound_key`."""
    targets = sorted(atoms(o), key=lambda a: a.sort_key)
    original = sort_key(o)
    present: dict[Uset, list[Atom]] = {}
    for a in targets:
        present.setdefault(a.uset, []).append(a)
    assigned: dict[Atom, tuple] = {}
    taken = dict.fromkeys(present, 0)

    def search(position: int) -> bool:
        if position == len(targets):
            return _bound_key(o, assigned, {}) < original
        target = targets[position]
        uset = target.uset
        taken[uset] += 1
        floor = {u: (4, u.id, n) for u, n in taken.items()}
        for source in present[uset]:
            if source in assigned:
                continue
            assigned[source] = target.sort_key
            if _bound_key(o, assigned, floor) <= original and search(position + 1):
                return True
            del assigned[source]
        taken[uset] -= 1
        return False

    return search(0)
