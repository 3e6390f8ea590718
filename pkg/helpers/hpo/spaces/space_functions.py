"""
Sampling, grid enumeration and density primitives over a SearchSpace, plus
the JSON space file reader/writer.
"""
from itertools import product
from json import load as json_load, JSONDecodeError
from logging import getLogger
from math import prod
from typing import Any, Dict, List, Mapping, Optional, Union
import numpy as np
from pydantic import ValidationError
from ..exceptions import SpaceDefinitionError, InvalidArgumentError
from .space_classes import SearchSpace, ParamAssignment
from .space_models import (Distribution,
                           Uniform,
                           LogUniform,
                           QUniform,
                           QLogUniform,
                           Normal,
                           QNormal,
                           LogNormal,
                           QLogNormal,
                           Choice)
from .space_vars import distribution_fields

logger = getLogger(__name__)

# Map JSON "dist" tags to the pydantic model used to validate the entry.
distribution_classes = {
    "uniform": Uniform,
    "loguniform": LogUniform,
    "quniform": QUniform,
    "qloguniform": QLogUniform,
    "normal": Normal,
    "qnormal": QNormal,
    "lognormal": LogNormal,
    "qlognormal": QLogNormal,
    "choice": Choice,
}


def sample(space: SearchSpace, rng: np.random.Generator) -> ParamAssignment:
    """
    Draw every dimension independently from its distribution, in dimension
    order.  The same seeded Generator always yields the same stream.

    :param space: SearchSpace to sample
    :param rng: numpy random Generator owned by the caller
    :return: ParamAssignment
    """
    return ParamAssignment({name: dist.draw(rng) for name, dist in space.dimensions.items()})


def in_support(dist: Distribution, value: Any) -> bool:
    """
    Support predicate for a single distribution.

    :param dist: Distribution model
    :param value: candidate value
    :return: True if value lies in the support
    """
    return dist.in_support(value)


def log_density(dist: Distribution, value: Any) -> float:
    """
    Natural log of the density (continuous variants) or probability mass
    (quantized variants and Choice).

    :param dist: Distribution model
    :param value: point to evaluate
    :return: log density/mass, negative infinity outside the support
    """
    return float(dist.log_density(value))


def _resolution_for(name: str, resolution: Union[int, Mapping[str, int]]) -> int:
    if isinstance(resolution, Mapping):
        points = resolution.get(name, 1)
    else:
        points = resolution
    if not isinstance(points, (int, np.integer)) or isinstance(points, bool) or points < 1:
        raise InvalidArgumentError(f"Dimension '{name}': grid resolution must be an "
                                   f"integer >= 1, got {points!r}")
    return int(points)


def _coarsen(values: List[Any]) -> List[Any]:
    """
    Keep roughly half of an ordered list of grid values, evenly spaced and
    always including both ends.
    """
    keep = max(2, (len(values) + 1) // 2)
    indices = sorted({int(round(i)) for i in np.linspace(0, len(values) - 1, keep)})
    return [values[i] for i in indices]


def dimension_values(space: SearchSpace,
                     resolution: Union[int, Mapping[str, int]],
                     max_points: Optional[int] = None) -> Dict[str, List[Any]]:
    """
    Per-dimension grid values.  When max_points is given, quantized
    dimensions (the largest first) are coarsened until the cartesian product
    fits, or until no quantized dimension has more than two values left.

    :param space: SearchSpace to discretize
    :param resolution: point count for every continuous dimension, or a
        mapping of dimension name -> point count (missing names get 1)
    :param max_points: optional cap on the product of the per-dimension counts
    :raises:
        InvalidArgumentError: if any resolution is below 1
    :return: dict of dimension name -> ordered list of values
    """
    values = {name: dist.grid(_resolution_for(name, resolution))
              for name, dist in space.dimensions.items()}

    if max_points is not None:
        quantized = [name for name, dist in space.dimensions.items()
                     if getattr(dist, "step", None) is not None]
        while prod(len(v) for v in values.values()) > max_points:
            reducible = [name for name in quantized if len(values[name]) > 2]
            if not reducible:
                logger.warning("Grid still has %s points after coarsening every quantized "
                               "dimension; cap of %s not reached",
                               prod(len(v) for v in values.values()), max_points)
                break
            widest = max(reducible, key=lambda name: len(values[name]))
            values[widest] = _coarsen(values[widest])
    return values


def grid_points(space: SearchSpace,
                resolution: Union[int, Mapping[str, int]],
                max_points: Optional[int] = None) -> List[ParamAssignment]:
    """
    Cartesian product grid over the space.  Continuous dimensions are spaced
    linearly between their bounds (geometrically for the log variants; mu +/-
    2 sigma for the normal family), quantized dimensions enumerate every
    multiple of q in range and Choice enumerates its options.  Order is
    deterministic: dimension order, then value order (last dimension varies
    fastest).

    :param space: SearchSpace to discretize
    :param resolution: point count per continuous dimension (int or mapping)
    :param max_points: optional cap, see dimension_values()
    :raises:
        InvalidArgumentError: if any resolution is below 1
    :return: ordered list of ParamAssignment
    """
    values = dimension_values(space, resolution, max_points)
    names = list(values)
    return [ParamAssignment(dict(zip(names, combination)))
            for combination in product(*(values[name] for name in names))]


def parse_distribution(name: str, entry: Mapping[str, Any]) -> Distribution:
    """
    Validate a single JSON space file entry against the matching model.

    :param name: dimension name (used in error messages)
    :param entry: dict with a "dist" tag and its parameters
    :raises:
        SpaceDefinitionError: naming the dimension and offending field
    :return: Distribution model
    """
    if not isinstance(entry, Mapping):
        raise SpaceDefinitionError(f"Dimension '{name}': entry must be an object, "
                                   f"got {type(entry).__name__}")
    tag = entry.get("dist")
    if tag not in distribution_classes:
        raise SpaceDefinitionError(f"Dimension '{name}': field 'dist': unknown distribution "
                                   f"{tag!r}, expected one of {sorted(distribution_classes)}")

    unexpected = [field for field in entry if field != "dist"
                  and field not in distribution_fields[tag]]
    if unexpected:
        raise SpaceDefinitionError(f"Dimension '{name}': field '{unexpected[0]}': not valid "
                                   f"for '{tag}' (allowed: {distribution_fields[tag]})")

    parameters = {field: value for field, value in entry.items() if field != "dist"}
    if tag == "choice" and isinstance(parameters.get("options"), list):
        parameters["options"] = tuple(parameters["options"])

    try:
        return distribution_classes[tag](**parameters)
    except ValidationError as err:
        first_error = err.errors()[0]
        field = first_error["loc"][0] if first_error["loc"] else "dist"
        if field == "__root__":
            field = "lo/hi"
        raise SpaceDefinitionError(f"Dimension '{name}': field '{field}': "
                                   f"{first_error['msg']}") from err


def parse_space(space_dict: Mapping[str, Any]) -> SearchSpace:
    """
    Build a SearchSpace from the JSON object form.

    :param space_dict: mapping of dimension name -> entry
    :raises:
        SpaceDefinitionError: on any invalid entry or an empty object
    :return: SearchSpace
    """
    if not isinstance(space_dict, Mapping):
        raise SpaceDefinitionError("A space definition must be a JSON object")
    return SearchSpace({name: parse_distribution(name, entry)
                        for name, entry in space_dict.items()})


def load_space(path) -> SearchSpace:
    """
    Read a JSON space file.

    :param path: path to the JSON file
    :raises:
        SpaceDefinitionError: if the file can't be read, isn't JSON or
            contains an invalid entry
    :return: SearchSpace
    """
    try:
        with open(path, "r", encoding="utf-8") as space_file:
            space_dict = json_load(space_file)
    except (OSError, JSONDecodeError) as err:
        raise SpaceDefinitionError(f"Unable to read space file {path}: {err}") from err
    space = parse_space(space_dict)
    logger.debug("Loaded search space %s from %s", space, path)
    return space


def space_to_json(space: SearchSpace) -> Dict[str, Dict[str, Any]]:
    """
    Inverse of parse_space.

    :param space: SearchSpace
    :return: JSON-serializable dict
    """
    space_json = {}
    for name, dist in space.dimensions.items():
        entry = dist.dict()
        if "options" in entry:
            entry["options"] = list(entry["options"])
        space_json[name] = entry
    return space_json
