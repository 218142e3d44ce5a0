"""One-dimensional Gaussian AR models: simulation, autocovariance and
Yule-Walker fits on nested orders or arbitrary lag supports.

Sign convention follows ``X_t = -sum_{i in S} a_i X_{t-i} + E_t``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .criteria import Criterion, penalty
from .errors import DegenerateFitError, SingularSystemError, UnstableModelError
from .selection import IcEvaluator


@dataclass(frozen=True)
class ArModel1D:
    coeffs: Mapping[int, float]
    sigma2: float = 1.0

    def __post_init__(self):
        if any(int(lag) != lag or lag < 1 for lag in self.coeffs):
            raise ValueError("lags must be positive integers")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")
        object.__setattr__(
            self, "coeffs", {int(k): float(v) for k, v in sorted(self.coeffs.items())}
        )

    @classmethod
    def from_vector(cls, a: Iterable[float], sigma2: float = 1.0) -> ArModel1D:
        """Build from ``(a_1, ..., a_p)``; zero entries are left off the support."""
        return cls({i + 1: v for i, v in enumerate(a) if v != 0}, sigma2)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.coeffs)

    @property
    def order(self) -> int:
        return max(self.coeffs, default=0)

    def vector(self, length: int | None = None) -> np.ndarray:
        """Dense ``(a_1, ..., a_length)`` with zeros off the support."""
        p = self.order if length is None else length
        out = np.zeros(p)
        for lag, v in self.coeffs.items():
            if lag <= p:
                out[lag - 1] = v
        return out


@dataclass(frozen=True)
class Autocovariance:
    values: np.ndarray = field(repr=False)
    n: int

    @property
    def max_lag(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]


def stability_check(model: ArModel1D) -> tuple[bool, float]:
    """Return ``(stable, min |root|)`` for ``1 + sum a_i z^i``."""
    a = np.trim_zeros(model.vector(), "b")
    if len(a) == 0:
        return True, float("inf")
    # np.roots wants the highest degree first
    roots = np.roots(np.concatenate([a[::-1], [1.0]]))
    modulus = float(np.min(np.abs(roots)))
    return modulus > 1 + 1e-12, modulus


def simulate(model: ArModel1D, n: int, seed: int, burn_in: int = 1000) -> np.ndarray:
    stable, modulus = stability_check(model)
    if not stable:
        raise UnstableModelError(modulus)
    if n < 1 or burn_in < 0:
        raise ValueError("need n >= 1 and burn_in >= 0")
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + burn_in) * np.sqrt(model.sigma2)
    x = lfilter([1.0], np.concatenate([[1.0], model.vector()]), e)
    return x[burn_in:]


def autocovariance(series, max_lag: int) -> Autocovariance:
    """Biased, mean-removed sample autocovariance up to ``max_lag``."""
    x = np.asarray(series, dtype=float).ravel()
    n = len(x)
    if n == 0:
        raise ValueError("empty series")
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    x = x - x.mean()
    r = np.array([x[: n - k] @ x[k:] for k in range(max_lag + 1)]) / n
    return Autocovariance(r, n)


def levinson_durbin(r, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve the Yule-Walker systems of orders ``0..order``.

    Returns the order-``order`` coefficients and the prediction-error
    variances of every intermediate order (length ``order + 1``).
    """
    r = np.asarray(r, dtype=float)
    if order > len(r) - 1:
        raise ValueError(f"order {order} exceeds max lag {len(r) - 1}")
    if r[0] <= 0:
        raise SingularSystemError("r(0) <= 0: constant series")
    a = np.zeros(order)
    err = np.empty(order + 1)
    err[0] = r[0]
    for k in range(1, order + 1):
        if err[k - 1] <= 0:
            raise SingularSystemError(f"Toeplitz system singular at order {k}")
        refl = -(r[k] + a[: k - 1] @ r[k - 1 : 0 : -1]) / err[k - 1]
        if k > 1:
            a[: k - 1] = a[: k - 1] + refl * a[k - 2 :: -1]
        a[k - 1] = refl
        err[k] = err[k - 1] * (1.0 - refl * refl)
    return a, err


def fit_order(acov: Autocovariance, k: int) -> tuple[np.ndarray, float]:
    if k < 0 or k > acov.max_lag:
        raise ValueError(f"order {k} outside [0, {acov.max_lag}]")
    if k == 0:
        return np.zeros(0), float(acov.values[0])
    a, err = levinson_durbin(acov.values, k)
    return a, float(err[k])


def _solve(matrix, rhs):
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            f"normal equations of size {len(rhs)} are singular"
        ) from None


def fit_support(acov: Autocovariance, support: Iterable[int]) -> tuple[np.ndarray, float]:
    """Restricted Yule-Walker fit; coefficients are returned in sorted lag order."""
    lags = np.array(sorted(set(support)), dtype=int)
    r = acov.values
    if len(lags) == 0:
        return np.zeros(0), float(r[0])
    if lags[0] < 1 or lags[-1] > acov.max_lag:
        raise ValueError(f"support must lie in [1, {acov.max_lag}]")
    matrix = r[np.abs(lags[:, None] - lags[None, :])]
    a = _solve(matrix, -r[lags])
    return a, float(r[0] + a @ r[lags])


def _size(support_or_order):
    if isinstance(support_or_order, (int, np.integer)):
        return int(support_or_order)
    return len(set(support_or_order))


def ic_from_sigma2(sigma2: float, size: int, c: Criterion, n: int) -> float:
    if not sigma2 > 0:
        raise DegenerateFitError(f"residual variance {sigma2!r} is not positive")
    return n * np.log(sigma2) + size * penalty(c, n)


def ic_term_1d(acov: Autocovariance, support_or_order, c: Criterion, n: int) -> float:
    """``n log sigma2_hat + size * alpha(n)``; an int selects the nested order."""
    if isinstance(support_or_order, (int, np.integer)):
        _, s2 = fit_order(acov, int(support_or_order))
    else:
        _, s2 = fit_support(acov, support_or_order)
    return ic_from_sigma2(s2, _size(support_or_order), c, n)


class FitCache:
    """Memoised fits for one autocovariance.

    Fits do not depend on the criterion, so a beta sweep reuses them.
    """

    def __init__(self, acov: Autocovariance):
        self.acov = acov
        self._support: dict[tuple[int, ...], tuple[np.ndarray, float]] = {}
        self._orders: np.ndarray | None = None

    def fit(self, support: Iterable[int]) -> tuple[np.ndarray, float]:
        key = tuple(sorted(set(support)))
        if key not in self._support:
            self._support[key] = fit_support(self.acov, key)
        return self._support[key]

    def sigma2(self, support: Iterable[int]) -> float:
        return self.fit(support)[1]

    def sigma2_order(self, k: int) -> float:
        if k == 0:
            return float(self.acov.values[0])
        if self._orders is None:
            self._orders = levinson_durbin(self.acov.values, self.acov.max_lag)[1]
        return float(self._orders[k])

    def model(self, support: Iterable[int]) -> ArModel1D:
        key = tuple(sorted(set(support)))
        a, s2 = self.fit(key)
        return ArModel1D(dict(zip(key, a)), s2)


def evaluator(
    acov: Autocovariance, m: int, c: Criterion, n: int | None = None,
    cache: FitCache | None = None,
) -> IcEvaluator:
    """IC evaluator over lags ``1..m`` for the selection strategies."""
    n = acov.n if n is None else n
    cache = FitCache(acov) if cache is None else cache
    alpha = penalty(c, n)

    def evaluate(support):
        s2 = cache.sigma2(support)
        if not s2 > 0:
            raise DegenerateFitError(f"residual variance {s2!r} is not positive")
        return n * np.log(s2) + len(support) * alpha

    def evaluate_order(k):
        s2 = cache.sigma2_order(k)
        if not s2 > 0:
            raise DegenerateFitError(f"residual variance {s2!r} is not positive")
        return n * np.log(s2) + k * alpha

    return IcEvaluator(tuple(range(1, m + 1)), evaluate, evaluate_order)
