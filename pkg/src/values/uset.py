import logging
import threading
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Uset:
    """A partition class of atoms that may be freely permuted among themselves."""

    id: int
    name: str
    size: int
    atoms: tuple["Atom", ...] = field(default=(), repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Uset) and other.id == self.id

    def __hash__(self) -> int:
        return hash(("uset", self.id))

    def __repr__(self) -> str:
        return f"<Uset {self.name!r} id={self.id} size={self.size}>"


class Atom:
    """Element of a uset. Identified by (uset.id, index); the name is display only."""

    __slots__ = ("uset", "index", "_key")

    def __init__(self, uset: Uset, index: int) -> None:
        if not 0 <= index < uset.size:
            raise IndexError(f"Atom index {index} out of range for {uset!r}")
        self.uset = uset
        self.index = index
        self._key = (4, uset.id, index)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return self._key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Atom) and other._key == self._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"{self.uset.name}{self.index}"


class UsetRegistry:
    """Append-only registry of usets. Ids follow creation order."""

    def __init__(self) -> None:
        self._usets: list[Uset] = []
        self._lock = threading.Lock()

    def register(self, size: int, name: str) -> Uset:
        """Create a fresh uset of `size` atoms. Names need not be unique."""
        if size < 1:
            raise ValueError(f"Uset size must be positive, got {size}")
        with self._lock:
            uset = Uset(id=len(self._usets), name=name, size=size)
            object.__setattr__(uset, "atoms", tuple(Atom(uset, i) for i in range(size)))
            self._usets.append(uset)
        logger.debug(f"Registered uset {name!r} with id {uset.id} and {size} atoms")
        return uset

    def get(self, uset_id: int) -> Uset | None:
        if 0 <= uset_id < len(self._usets):
            return self._usets[uset_id]
        return None

    def find(self, name: str) -> Uset | None:
        """Most recently registered uset with the given name."""
        for uset in reversed(self._usets):
            if uset.name == name:
                return uset
        return None

    def list_usets(self) -> list[Uset]:
        return list(self._usets)


REGISTRY = UsetRegistry()
