"""
Search space and parameter assignment classes.  Both are immutable once
built; a SearchSpace validates its dimensions on construction and produces
validated ParamAssignment objects.
"""
from logging import getLogger
from types import MappingProxyType
from collections.abc import Mapping
from typing import Any, Dict, Iterator
from ..exceptions import SpaceDefinitionError, InvalidArgumentError
from .space_models import Distribution

logger = getLogger(__name__)


class ParamAssignment(Mapping):
    """
    One concrete hyperparameter configuration: dimension name -> value.
    Behaves as a read-only mapping in the space's dimension order.
    """
    def __init__(self, values: "Mapping[str, Any]"):
        self._values = MappingProxyType(dict(values))

    def __getitem__(self, name: str) -> Any:
        return self._values[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamAssignment):
            return list(self.items()) == list(other.items())
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        return f"ParamAssignment({dict(self._values)})"

    def __reduce__(self):
        return ParamAssignment, (dict(self._values),)

    @property
    def dict(self) -> Dict[str, Any]:
        """
        :return: plain dict copy of the assignment
        """
        return dict(self._values)


class SearchSpace:
    """
    Ordered mapping of dimension name -> Distribution.
    """
    def __init__(self, dimensions: "Mapping[str, Distribution]"):
        """
        :param dimensions: ordered mapping of unique, non-empty names to
            distribution models
        :raises:
            SpaceDefinitionError: if the mapping is empty, a name is empty or
                a value is not a Distribution
        """
        if not dimensions:
            raise SpaceDefinitionError("A search space needs at least one dimension")
        for name, distribution in dimensions.items():
            if not isinstance(name, str) or not name.strip():
                raise SpaceDefinitionError(f"Dimension names must be non-empty strings: {name!r}")
            if not isinstance(distribution, Distribution):
                raise SpaceDefinitionError(f"Dimension '{name}': {distribution!r} "
                                           f"is not a distribution")
        self._dimensions = MappingProxyType(dict(dimensions))

    def __repr__(self):
        return f"SearchSpace({list(self._dimensions)})"

    def __reduce__(self):
        # mappingproxy does not pickle; rebuild from a plain dict
        return SearchSpace, (dict(self._dimensions),)

    def __len__(self):
        return len(self._dimensions)

    def __iter__(self):
        return iter(self._dimensions)

    def __getitem__(self, name: str) -> Distribution:
        return self._dimensions[name]

    def __eq__(self, other):
        if isinstance(other, SearchSpace):
            return list(self._dimensions.items()) == list(other.dimensions.items())
        return NotImplemented

    __hash__ = None

    @property
    def dimensions(self) -> "Mapping[str, Distribution]":
        """
        :return: read-only view of the dimensions
        """
        return self._dimensions

    @property
    def names(self):
        """
        :return: tuple of dimension names in order
        """
        return tuple(self._dimensions)

    def contains(self, values: "Mapping[str, Any]") -> bool:
        """
        :param values: candidate assignment
        :return: True if the keys match the dimensions exactly and every
            value lies in its distribution's support
        """
        if set(values) != set(self._dimensions):
            return False
        return all(dist.in_support(values[name]) for name, dist in self._dimensions.items())

    def assignment(self, values: "Mapping[str, Any]") -> ParamAssignment:
        """
        Build a validated ParamAssignment ordered like the space.

        :param values: mapping of dimension name -> value
        :raises:
            InvalidArgumentError: on missing/extra keys or out-of-support
                values
        :return: ParamAssignment
        """
        missing = [name for name in self._dimensions if name not in values]
        extra = [name for name in values if name not in self._dimensions]
        if missing or extra:
            raise InvalidArgumentError(f"Assignment keys do not match the space: "
                                       f"missing {missing}, unexpected {extra}")
        for name, dist in self._dimensions.items():
            if not dist.in_support(values[name]):
                raise InvalidArgumentError(f"Dimension '{name}': value {values[name]!r} "
                                           f"is outside the support of {dist!r}")
        return ParamAssignment({name: values[name] for name in self._dimensions})
