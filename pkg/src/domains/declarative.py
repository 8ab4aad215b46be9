"""Domains described as plain data.

A description is a mapping with a ``type`` key::

    {"type": "subsets",
     "domain": {"type": "product",
                "domains": [{"type": "uset", "ref": "n", "size": 3}, {"type": "uset", "ref": "n"}]}}

The first occurrence of a uset ``ref`` must give its ``size``; later occurrences reuse the
same uset. Filters name a registered predicate. Files may be JSON or YAML.
"""

import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml

from src.domains.base import DEFAULT_REJECTION_BUDGET, Domain, DomainError
from src.domains.compositions import Join, Mappings, Product, Sequences, Subsets
from src.domains.elementary import Boolean, CnfValues, NoneDomain, Range, USet, Values
from src.domains.predicates import PREDICATES, PredicateRegistry
from src.values.codec import from_json
from src.values.uset import Uset

logger = logging.getLogger(__name__)


class DomainSpecError(DomainError):
    pass


class _Builder:
    def __init__(self, predicates: PredicateRegistry) -> None:
        self._predicates = predicates
        self.usets: dict[str, Uset] = {}

    def _field(self, spec: Mapping[str, Any], key: str) -> Any:
        if key not in spec:
            raise DomainSpecError(f"{spec.get('type')!r} description is missing {key!r}")
        return spec[key]

    def _uset(self, spec: Mapping[str, Any]) -> Domain:
        ref = self._field(spec, "ref")
        if ref in self.usets:
            uset = self.usets[ref]
            if "size" in spec and spec["size"] != uset.size:
                raise DomainSpecError(f"Uset {ref!r} declared with sizes {uset.size} and {spec['size']}")
            return USet.of(uset)
        domain = USet(self._field(spec, "size"), ref)
        self.usets[ref] = domain.uset
        return domain

    def _filter(self, spec: Mapping[str, Any]) -> Domain:
        name = self._field(spec, "predicate")
        predicate = self._predicates.get(name)
        if predicate is None:
            available = [p.name for p in self._predicates.list_predicates()]
            raise DomainSpecError(f"Unknown predicate {name!r}. Available predicates: {available}")
        strict = spec.get("strict", predicate.invariant)
        if strict and not predicate.invariant:
            raise DomainSpecError(f"Predicate {name!r} is not isomorphism-invariant")
        return self.build(self._field(spec, "domain")).filter(
            predicate.fn,
            strict=strict,
            rejection_budget=spec.get("rejection_budget", DEFAULT_REJECTION_BUDGET),
        )

    def build(self, spec: Any) -> Domain:
        if not isinstance(spec, Mapping):
            raise DomainSpecError(f"Domain description must be a mapping, got {spec!r}")
        match spec.get("type"):
            case "range":
                return Range(spec.get("start", 0), self._field(spec, "stop"), spec.get("step", 1))
            case "values":
                return Values(self._field(spec, "items"))
            case "boolean":
                return Boolean()
            case "none":
                return NoneDomain()
            case "uset":
                return self._uset(spec)
            case "cnf_values":
                return CnfValues(from_json(i, self.usets) for i in self._field(spec, "items"))
            case "product":
                return Product(self.build(d) for d in self._field(spec, "domains"))
            case "sequences":
                return Sequences(self.build(self._field(spec, "domain")), self._field(spec, "length"))
            case "subsets":
                return Subsets(self.build(self._field(spec, "domain")), spec.get("size"))
            case "mappings":
                return Mappings(self.build(self._field(spec, "key")), self.build(self._field(spec, "value")))
            case "join":
                return Join(self.build(d) for d in self._field(spec, "domains"))
            case "filter":
                return self._filter(spec)
            case other:
                raise DomainSpecError(f"Unknown domain type: {other!r}")


def domain_from_spec(spec: Mapping[str, Any], predicates: PredicateRegistry = PREDICATES) -> Domain:
    builder = _Builder(predicates)
    try:
        domain = builder.build(spec)
    except DomainSpecError:
        raise
    except (DomainError, TypeError, ValueError) as e:
        raise DomainSpecError(f"Invalid domain description: {e}") from e
    logger.debug(f"Built {domain.name} with usets {sorted(builder.usets)}")
    return domain


def load_domain_spec(path: str | Path) -> Domain:
    """Load a domain description from a JSON or YAML file."""
    path = Path(path)
    try:
        with open(path) as f:
            spec = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise DomainSpecError(f"Failed to read domain description {path}: {e}") from e
    logger.info(f"Loaded domain description from {path}")
    return domain_from_spec(spec)
