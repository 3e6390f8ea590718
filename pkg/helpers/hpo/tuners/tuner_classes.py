"""
Per-dimension Parzen estimators for the TPE surrogate.

CategoricalParzen models Choice and bounded quantized dimensions as a finite
set of points; ContinuousParzen models the other continuous variants as a
mixture, on the internal (log for log variants) scale, of the dimension's
own prior and one Gaussian kernel per observation.
"""
from logging import getLogger
from typing import Any, List, Sequence
import numpy as np
from scipy.special import logsumexp, ndtr
from scipy.stats import norm, truncnorm
from ..spaces import Distribution, ContinuousDistribution

logger = getLogger(__name__)


class CategoricalParzen:
    """
    Smoothed categorical estimator over a finite support.  With n
    observations over K support points, the mass of point k is

        (w * prior_k + n * (count_k + 1) / (n + K)) / (w + n)

    where w is the prior weight, so it reduces to the prior when n = 0.
    """
    def __init__(self, dist: Distribution, observations: Sequence[Any], prior_weight: float):
        self.dist = dist
        self.points = list(dist.support_points())
        prior = np.asarray(dist.prior_masses(), dtype=float)
        prior = prior / prior.sum()
        counts = np.zeros(len(self.points))
        for position in self.positions(observations):
            counts[position] += 1.0
        n_obs = float(len(observations))
        smoothed = n_obs * (counts + 1.0) / (n_obs + len(self.points))
        self.masses = (prior_weight * prior + smoothed) / (prior_weight + n_obs)

    def __repr__(self):
        return f"CategoricalParzen({self.dist.dist}, points={len(self.points)})"

    def positions(self, values: Sequence[Any]) -> List[int]:
        """
        :param values: support values
        :return: index of each value in self.points
        """
        if self.dist.categorical and getattr(self.dist, "step", None) is None:
            return [self.points.index(value) for value in values]
        points = np.asarray(self.points, dtype=float)
        return [int(np.argmin(np.abs(points - float(value)))) for value in values]

    def draw(self, rng: np.random.Generator, size: int) -> List[Any]:
        """
        :param rng: numpy Generator
        :param size: number of draws
        :return: list of support values
        """
        return [self.points[position] for position in rng.choice(len(self.points), size=size,
                                                                  p=self.masses)]

    def log_pdf(self, values: Sequence[Any]) -> np.ndarray:
        """
        :param values: support values
        :return: log mass of each value
        """
        with np.errstate(divide="ignore"):
            return np.log(self.masses[self.positions(values)])


class ContinuousParzen:
    """
    Prior plus Gaussian kernels on the internal scale.  Kernel i is centred
    on an observation with bandwidth max(distance to the nearest other
    centre, floor * scale), where scale is the internal prior's width (or
    sigma); a lone centre gets bandwidth scale.  Kernels of bounded
    dimensions are truncated to the bounds.
    """
    def __init__(self, dist: ContinuousDistribution, observations: Sequence[float],
                 prior_weight: float, bandwidth_floor: float):
        self.dist = dist
        self.bounds = dist.internal_bounds()
        scale = dist.internal_scale()
        centres = np.asarray(dist.to_internal(np.asarray(observations, dtype=float)),
                             dtype=float).ravel()
        # QLogNormal may observe 0, which has no log: keep those out of the kernels
        centres = centres[np.isfinite(centres)]
        self.centres = centres
        self.bandwidths = self._bandwidths(centres, scale, bandwidth_floor)
        n_kernels = centres.size
        self.log_prior_weight = np.log(prior_weight / (prior_weight + n_kernels))
        self.log_kernel_weight = -np.log(prior_weight + n_kernels) if n_kernels else -np.inf
        if self.bounds is not None and n_kernels:
            low, high = self.bounds
            self._a = (low - centres) / self.bandwidths
            self._b = (high - centres) / self.bandwidths
            self._log_norm = np.log(np.maximum(ndtr(self._b) - ndtr(self._a), 1e-300))
        else:
            self._a = self._b = None
            self._log_norm = np.zeros(n_kernels)

    def __repr__(self):
        return f"ContinuousParzen({self.dist.dist}, kernels={self.centres.size})"

    @staticmethod
    def _bandwidths(centres: np.ndarray, scale: float, floor: float) -> np.ndarray:
        if centres.size == 0:
            return np.zeros(0)
        if centres.size == 1:
            return np.array([scale])
        order = np.argsort(centres, kind="stable")
        ordered = centres[order]
        gaps = np.diff(ordered)
        nearest = np.minimum(np.append(gaps, np.inf), np.insert(gaps, 0, np.inf))
        bandwidths = np.empty(centres.size)
        bandwidths[order] = np.maximum(nearest, floor * scale)
        return bandwidths

    def draw_internal(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """
        Draw from the mixture on the internal scale.

        :param rng: numpy Generator
        :param size: number of draws
        :return: array of internal values
        """
        n_kernels = self.centres.size
        weights = np.exp(np.append(self.log_prior_weight,
                                   np.full(n_kernels, self.log_kernel_weight)))
        components = rng.choice(n_kernels + 1, size=size, p=weights / weights.sum())
        draws = np.empty(size)
        for position, component in enumerate(components):
            if component == 0:
                draws[position] = self.dist.prior_draw_internal(rng)
                continue
            kernel = component - 1
            if self._a is None:
                draws[position] = rng.normal(self.centres[kernel], self.bandwidths[kernel])
            else:
                draws[position] = truncnorm.rvs(self._a[kernel], self._b[kernel],
                                                loc=self.centres[kernel],
                                                scale=self.bandwidths[kernel],
                                                random_state=rng)
        return draws

    def draw(self, rng: np.random.Generator, size: int) -> List[float]:
        """
        :param rng: numpy Generator
        :param size: number of draws
        :return: values in the dimension's support (clipped, then quantized)
        """
        internal = self.draw_internal(rng, size)
        values = self.dist.from_internal(internal)
        return [self.dist.quantize(self.dist.clip(float(value))) for value in values]

    def log_pdf_internal(self, internal_values) -> np.ndarray:
        """
        :param internal_values: array of internal values
        :return: log mixture density at each value
        """
        internal_values = np.atleast_1d(np.asarray(internal_values, dtype=float))
        terms = [self.log_prior_weight + self.dist.prior_logpdf_internal(internal_values)]
        if self.centres.size:
            kernel_terms = (norm.logpdf(internal_values[:, None], loc=self.centres,
                                        scale=self.bandwidths) - self._log_norm)
            if self.bounds is not None:
                low, high = self.bounds
                outside = (internal_values < low) | (internal_values > high)
                kernel_terms[outside, :] = -np.inf
            terms.append((self.log_kernel_weight + kernel_terms).T)
        stacked = np.vstack([np.atleast_2d(term) for term in terms])
        return logsumexp(stacked, axis=0)

    def cdf_internal(self, internal_values) -> np.ndarray:
        """
        :param internal_values: array of internal values
        :return: mixture CDF at each value
        """
        internal_values = np.atleast_1d(np.asarray(internal_values, dtype=float))
        total = np.exp(self.log_prior_weight) * self.dist.prior_cdf_internal(internal_values)
        if self.centres.size:
            if self._a is None:
                kernel_cdf = ndtr((internal_values[:, None] - self.centres) / self.bandwidths)
            else:
                kernel_cdf = np.clip(truncnorm.cdf(internal_values[:, None], self._a, self._b,
                                                   loc=self.centres, scale=self.bandwidths),
                                     0.0, 1.0)
            total = total + np.exp(self.log_kernel_weight) * kernel_cdf.sum(axis=1)
        return total

    def log_pdf(self, values: Sequence[float]) -> np.ndarray:
        """
        Score values for the surrogate.  Unquantized values use the mixture
        density on the internal scale (the change-of-variables term is the
        same for both estimators, so it cancels in the l/g ratio);
        quantized values use the mixture mass of their rounding interval.

        :param values: values in the dimension's support
        :return: log density or log mass per value
        """
        values = np.asarray(values, dtype=float)
        if self.dist.step is None:
            return self.log_pdf_internal(self.dist.to_internal(values))
        bins = np.array([self.dist.bin_bounds(float(value)) for value in values])
        low = self.dist.to_internal(bins[:, 0])
        high = self.dist.to_internal(bins[:, 1])
        mass = self.cdf_internal(high) - self.cdf_internal(low)
        with np.errstate(divide="ignore"):
            return np.log(np.maximum(mass, 0.0))
