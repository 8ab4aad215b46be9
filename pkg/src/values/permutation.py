import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence

from src.values.objects import BasicObject, relabel
from src.values.uset import Atom, Uset


class InvalidPermutationError(ValueError):
    pass


class Permutation:
    """Uset-respecting bijection on atoms, identity outside its support."""

    __slots__ = ("_mapping",)

    def __init__(self, mapping: Mapping[Atom, Atom] | None = None) -> None:
        mapping = {a: b for a, b in (mapping or {}).items() if a != b}
        for a, b in mapping.items():
            if a.uset != b.uset:
                raise InvalidPermutationError(f"{a!r} -> {b!r} crosses usets")
        if set(mapping) != set(mapping.values()):
            raise InvalidPermutationError(f"Not a bijection on its support: {mapping!r}")
        self._mapping = mapping

    @classmethod
    def identity(cls) -> "Permutation":
        return cls()

    @classmethod
    def swap(cls, a: Atom, b: Atom) -> "Permutation":
        return cls({a: b, b: a})

    @classmethod
    def from_indices(cls, uset: Uset, images: Sequence[int]) -> "Permutation":
        """Permutation of `uset` sending atom i to atom images[i]."""
        if sorted(images) != list(range(uset.size)):
            raise InvalidPermutationError(f"{images!r} is not a permutation of {uset!r}")
        return cls({uset.atoms[i]: uset.atoms[j] for i, j in enumerate(images)})

    @property
    def support(self) -> frozenset[Atom]:
        return frozenset(self._mapping)

    def __call__(self, atom: Atom) -> Atom:
        return self._mapping.get(atom, atom)

    def inverse(self) -> "Permutation":
        return Permutation({b: a for a, b in self._mapping.items()})

    def compose(self, inner: "Permutation") -> "Permutation":
        """self ∘ inner: apply `inner` first."""
        domain = self.support | inner.support
        return Permutation({a: self(inner(a)) for a in domain})

    def as_mapping(self) -> Mapping[Atom, Atom]:
        return dict(self._mapping)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and other._mapping == self._mapping

    def __hash__(self) -> int:
        return hash(frozenset(self._mapping.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{a!r}->{b!r}" for a, b in sorted(self._mapping.items(), key=lambda p: p[0].sort_key))
        return f"Permutation({body})"


def apply(o: BasicObject, p: Permutation) -> BasicObject:
    return relabel(o, p._mapping)


def group_by_uset(found: Iterable[Atom]) -> dict[Uset, list[Atom]]:
    """Atoms grouped per uset, each group sorted by index, usets in id order."""
    groups: dict[Uset, list[Atom]] = {}
    for atom in sorted(found, key=lambda a: a.sort_key):
        groups.setdefault(atom.uset, []).append(atom)
    return groups


def bijections(
    sources: Mapping[Uset, Sequence[Atom]],
    targets: Mapping[Uset, Sequence[Atom]],
) -> Iterator[dict[Atom, Atom]]:
    """All per-uset bijections from `sources` onto `targets` (same group sizes)."""
    usets = list(sources)
    per_uset = [itertools.permutations(targets[u]) for u in usets]
    for choice in itertools.product(*per_uset):
        mapping: dict[Atom, Atom] = {}
        for u, image in zip(usets, choice):
            mapping.update(zip(sources[u], image))
        yield mapping
