from collections.abc import Mapping
from typing import Any

from src.values.objects import BasicObject, MapValue, NotBasicObjectError, SetValue
from src.values.uset import REGISTRY, Atom, Uset


def to_json(o: BasicObject) -> Any:
    """JSON-ready form: atoms {"uset", "i"}, tuples as arrays, {"set": [...]}, {"map": [[k, v], ...]}."""
    match o:
        case None | bool() | int() | str():
            return o
        case Atom():
            return {"uset": o.uset.name, "i": o.index}
        case tuple():
            return [to_json(c) for c in o]
        case SetValue():
            return {"set": [to_json(c) for c in o]}
        case MapValue():
            return {"map": [[to_json(k), to_json(v)] for k, v in o.pairs()]}
        case _:
            raise NotBasicObjectError(f"Cannot encode {o!r}")


def from_json(data: Any, usets: Mapping[str, Uset] | None = None) -> BasicObject:
    """Inverse of `to_json`. Atom names resolve through `usets`, else the global registry."""
    match data:
        case None | bool() | int() | str():
            return data
        case list():
            return tuple(from_json(c, usets) for c in data)
        case {"uset": str(name), "i": int(index)}:
            uset = (usets or {}).get(name) or REGISTRY.find(name)
            if uset is None:
                raise ValueError(f"Unknown uset {name!r}")
            return uset.atoms[index]
        case {"set": list(items)}:
            return SetValue(from_json(c, usets) for c in items)
        case {"map": list(pairs)}:
            return MapValue((from_json(k, usets), from_json(v, usets)) for k, v in pairs)
        case _:
            raise ValueError(f"Not an encoded basic object: {data!r}")
