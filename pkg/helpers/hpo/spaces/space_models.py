"""
pydantic classes describing the sampling distribution of a single
hyperparameter dimension.  Each model validates its own parameters on
construction and knows how to draw from, enumerate and evaluate itself.

Continuous variants are described by an "internal" scale (the log of the
value for the log variants, the value itself otherwise) on which the prior is
either uniform between two bounds or normal.  Quantized variants round a draw
of the matching continuous variant to the nearest multiple of q.
"""
# pylint: disable=too-few-public-methods, no-self-argument, no-name-in-module
from logging import getLogger
from math import ceil, floor, isfinite, log as math_log
from typing import Any, ClassVar, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, Extra, confloat, root_validator, validator
from scipy.special import ndtr
from scipy.stats import norm
from .space_vars import (QUANTIZATION_TOLERANCE,
                         NORMAL_GRID_HALF_WIDTH,
                         LABEL_TYPES)

logger = getLogger(__name__)

PositiveFloat = confloat(gt=0)


def _log_or_neg_inf(values):
    """
    Natural log that maps non-positive input to negative infinity instead of
    raising a floating point warning.

    :param values: scalar or array of reals
    :return: np.ndarray (or numpy scalar) of logs
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.asarray(values) > 0, np.log(np.maximum(values, 1e-300)), -np.inf)


class Distribution(BaseModel):
    """
    Base distribution model.  Not instantiated directly - each concrete
    variant sets its "dist" tag, which is also the tag used in JSON space
    files.
    """
    dist: str

    # True when the TPE surrogate should treat the dimension as a finite set
    # of labelled points (Choice and the bounded quantized variants).
    categorical: ClassVar[bool] = False

    class Config:
        """pydantic configuration: immutable, unknown fields rejected"""
        frozen = True
        extra = Extra.forbid

    def draw(self, rng: np.random.Generator) -> Any:
        """
        Draw a single value.

        :param rng: numpy random Generator owned by the caller
        :return: sampled value
        """
        raise NotImplementedError

    def in_support(self, value: Any) -> bool:
        """
        Support predicate.

        :param value: candidate value
        :return: True if value can be produced by draw()
        """
        raise NotImplementedError

    def log_density(self, value: Any) -> float:
        """
        Natural log of the density (continuous) or mass (quantized, Choice).

        :param value: point to evaluate
        :return: log density, -inf outside the support
        """
        raise NotImplementedError

    def grid(self, resolution: int) -> List[Any]:
        """
        Deterministic ordered list of grid values for this dimension.

        :param resolution: requested point count (ignored by enumerable
            variants)
        :return: list of values
        """
        raise NotImplementedError


class Choice(Distribution):
    """
    Uniform choice between a non-empty list of distinct labels.
    """
    dist: str = "choice"
    options: Tuple[Any, ...]

    categorical: ClassVar[bool] = True

    @validator("options")
    def check_options(cls, options):
        """
        Options must be non-empty, distinct and plain labels (str, int, float
        or bool).

        :param options: tuple of labels
        :raises:
            ValueError: on empty, duplicated or non-label options
        :return: validated options
        """
        if not options:
            raise ValueError("Choice requires at least one option")
        for option in options:
            if not isinstance(option, LABEL_TYPES):
                raise ValueError(f"Choice option {option!r} is not a str/int/float/bool label")
        if len(set(options)) != len(options):
            raise ValueError(f"Choice options must be distinct: {options}")
        return options

    def draw(self, rng):
        return self.options[int(rng.integers(len(self.options)))]

    def in_support(self, value):
        return any(value == option and type(value) is type(option)  # pylint: disable=unidiomatic-typecheck
                   for option in self.options)

    def log_density(self, value):
        if not self.in_support(value):
            return -np.inf
        return -math_log(len(self.options))

    def grid(self, resolution):
        return list(self.options)

    def support_points(self) -> List[Any]:
        """
        :return: the enumerable support, in option order
        """
        return list(self.options)

    def prior_masses(self) -> np.ndarray:
        """
        :return: probability of each support point under this distribution
        """
        return np.full(len(self.options), 1.0 / len(self.options))


class ContinuousDistribution(Distribution):
    """
    Shared behaviour for the uniform and normal families, their log variants
    and their quantized variants.
    """
    log_scale: ClassVar[bool] = False

    @property
    def step(self) -> Optional[float]:
        """
        Quantization step q, None for unquantized variants.
        """
        return getattr(self, "q", None)

    def to_internal(self, values):
        """
        Map values onto the internal scale.

        :param values: scalar or array
        :return: log(values) for log variants (non-positive -> -inf), values
            otherwise
        """
        if self.log_scale:
            return _log_or_neg_inf(values)
        return np.asarray(values, dtype=float)

    def from_internal(self, values):
        """
        Inverse of to_internal.
        """
        if self.log_scale:
            return np.exp(values)
        return np.asarray(values, dtype=float)

    def internal_bounds(self) -> Optional[Tuple[float, float]]:
        """
        :return: (low, high) bounds of the internal prior, None if unbounded
        """
        return None

    def internal_scale(self) -> float:
        """
        :return: width of the bounded internal range, or the normal sigma
        """
        raise NotImplementedError

    def prior_logpdf_internal(self, internal_values):
        """
        Log density of the prior on the internal scale.
        """
        raise NotImplementedError

    def prior_cdf_internal(self, internal_values):
        """
        Cumulative distribution of the prior on the internal scale.
        """
        raise NotImplementedError

    def prior_draw_internal(self, rng: np.random.Generator) -> float:
        """
        Draw one value from the prior on the internal scale.
        """
        raise NotImplementedError

    def quantize(self, value: float) -> float:
        """
        Round to the nearest multiple of q (half rounds up).  Identity for
        unquantized variants.
        """
        if self.step is None:
            return float(value)
        return float(floor(value / self.step + 0.5) * self.step)

    def support_bounds(self) -> Optional[Tuple[float, float]]:
        """
        :return: (lo, hi) of the unquantized support in value space, None if
            unbounded
        """
        return None

    def clip(self, value: float) -> float:
        """
        Clip an unquantized value into the support bounds, guarding against
        round-off from the exp/log mapping.
        """
        bounds = self.support_bounds()
        if bounds is None:
            return float(value)
        return float(min(max(value, bounds[0]), bounds[1]))

    def draw(self, rng):
        internal = self.prior_draw_internal(rng)
        value = self.clip(float(self.from_internal(internal)))
        return self.quantize(value)

    def bin_bounds(self, value: float) -> Tuple[float, float]:
        """
        Preimage of a quantized value: the values that round onto it,
        intersected with the support of the unquantized variant.

        :param value: a multiple of q
        :return: (low, high) in value space
        """
        low, high = value - self.step / 2.0, value + self.step / 2.0
        bounds = self.support_bounds()
        if bounds is not None:
            low, high = max(low, bounds[0]), min(high, bounds[1])
        elif self.log_scale:
            low = max(low, 0.0)
        return low, high

    def _is_multiple_of_q(self, value: float) -> bool:
        steps = value / self.step
        return abs(steps - round(steps)) <= QUANTIZATION_TOLERANCE * max(1.0, abs(steps))

    def _quantized_mass(self, value: float) -> float:
        low, high = self.bin_bounds(value)
        if high <= low:
            return 0.0
        low_cdf, high_cdf = self.prior_cdf_internal(self.to_internal(np.array([low, high])))
        return float(max(high_cdf - low_cdf, 0.0))

    def in_support(self, value):
        if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
            return False
        value = float(value)
        if not isfinite(value):
            return False
        if self.step is not None:
            return self._is_multiple_of_q(value) and self._quantized_mass(
                round(value / self.step) * self.step) > 0.0
        if self.log_scale and value <= 0.0:
            return False
        bounds = self.support_bounds()
        if bounds is not None:
            return bounds[0] <= value <= bounds[1]
        return True

    def log_density(self, value):
        if not self.in_support(value):
            return -np.inf
        value = float(value)
        if self.step is not None:
            mass = self._quantized_mass(round(value / self.step) * self.step)
            return math_log(mass) if mass > 0 else -np.inf
        internal = float(self.to_internal(value))
        log_pdf = float(self.prior_logpdf_internal(internal))
        if self.log_scale:
            # Change of variables x = exp(y): p(x) = p(y) / x
            log_pdf -= internal
        return log_pdf

    def grid_range(self) -> Tuple[float, float]:
        """
        :return: (low, high) value range spanned by grid points
        """
        raise NotImplementedError

    def grid(self, resolution):
        low, high = self.grid_range()
        if self.step is not None:
            first = ceil(low / self.step - QUANTIZATION_TOLERANCE)
            last = floor(high / self.step + QUANTIZATION_TOLERANCE)
            points = [self.quantize(k * self.step) for k in range(first, last + 1)]
            return [point for point in points if self.in_support(point)]
        if resolution == 1:
            midpoint = self.from_internal((self.to_internal(low) + self.to_internal(high)) / 2.0)
            return [float(midpoint)]
        if self.log_scale:
            return [float(x) for x in np.geomspace(low, high, resolution)]
        return [float(x) for x in np.linspace(low, high, resolution)]


class UniformFamily(ContinuousDistribution):
    """
    Bounded variants: prior uniform between the internal bounds.
    """
    lo: float
    hi: float

    @root_validator(skip_on_failure=True)
    def check_bounds(cls, values):
        """
        Require lo < hi.

        :param values: dict of field values
        :raises:
            ValueError: if lo >= hi
        :return: values
        """
        if not values["lo"] < values["hi"]:
            raise ValueError(f"lo ({values['lo']}) must be below hi ({values['hi']})")
        return values

    def support_bounds(self):
        return self.lo, self.hi

    def internal_bounds(self):
        low, high = self.to_internal(np.array([self.lo, self.hi]))
        return float(low), float(high)

    def internal_scale(self):
        low, high = self.internal_bounds()
        return high - low

    def prior_logpdf_internal(self, internal_values):
        low, high = self.internal_bounds()
        internal_values = np.asarray(internal_values, dtype=float)
        inside = (internal_values >= low) & (internal_values <= high)
        return np.where(inside, -math_log(high - low), -np.inf)

    def prior_cdf_internal(self, internal_values):
        low, high = self.internal_bounds()
        return np.clip((np.asarray(internal_values, dtype=float) - low) / (high - low), 0.0, 1.0)

    def prior_draw_internal(self, rng):
        low, high = self.internal_bounds()
        return float(rng.uniform(low, high))

    def grid_range(self):
        return self.lo, self.hi

    def support_points(self) -> List[float]:
        """
        Enumerate the support of a bounded quantized variant: every multiple
        of q whose preimage inside [lo, hi] has positive length.

        :return: ordered list of support values
        """
        first = floor(self.lo / self.step + 0.5)
        last = floor(self.hi / self.step + 0.5)
        points = []
        for index in range(first, last + 1):
            point = self.quantize(index * self.step)
            low, high = self.bin_bounds(point)
            if high > low:
                points.append(point)
        return points

    def prior_masses(self) -> np.ndarray:
        """
        :return: probability of each support point (aligned with
            support_points)
        """
        return np.array([self._quantized_mass(point) for point in self.support_points()])


class NormalFamily(ContinuousDistribution):
    """
    Unbounded variants: prior normal on the internal scale.
    """
    mu: float
    sigma: PositiveFloat

    def internal_scale(self):
        return float(self.sigma)

    def prior_logpdf_internal(self, internal_values):
        return norm.logpdf(np.asarray(internal_values, dtype=float), loc=self.mu, scale=self.sigma)

    def prior_cdf_internal(self, internal_values):
        return ndtr((np.asarray(internal_values, dtype=float) - self.mu) / self.sigma)

    def prior_draw_internal(self, rng):
        return float(rng.normal(self.mu, self.sigma))

    def grid_range(self):
        low, high = self.from_internal(np.array([self.mu - NORMAL_GRID_HALF_WIDTH * self.sigma,
                                                 self.mu + NORMAL_GRID_HALF_WIDTH * self.sigma]))
        return float(low), float(high)


class Uniform(UniformFamily):
    """Uniform(lo, hi)"""
    dist: str = "uniform"


class LogUniform(UniformFamily):
    """exp(Uniform(log lo, log hi))"""
    dist: str = "loguniform"
    lo: PositiveFloat

    log_scale: ClassVar[bool] = True


class QUniform(UniformFamily):
    """round(Uniform(lo, hi) / q) * q"""
    dist: str = "quniform"
    q: PositiveFloat

    categorical: ClassVar[bool] = True


class QLogUniform(UniformFamily):
    """round(exp(Uniform(log lo, log hi)) / q) * q"""
    dist: str = "qloguniform"
    lo: PositiveFloat
    q: PositiveFloat

    log_scale: ClassVar[bool] = True
    categorical: ClassVar[bool] = True


class Normal(NormalFamily):
    """Normal(mu, sigma), not truncated"""
    dist: str = "normal"


class QNormal(NormalFamily):
    """round(Normal(mu, sigma) / q) * q"""
    dist: str = "qnormal"
    q: PositiveFloat


class LogNormal(NormalFamily):
    """exp(Normal(mu, sigma))"""
    dist: str = "lognormal"

    log_scale: ClassVar[bool] = True


class QLogNormal(NormalFamily):
    """round(exp(Normal(mu, sigma)) / q) * q"""
    dist: str = "qlognormal"
    q: PositiveFloat

    log_scale: ClassVar[bool] = True
