"""Quality of a selected 1-D model: prediction-error variance and the
Kullback distance to the generating model."""

from __future__ import annotations

import numpy as np
from scipy.signal import lfilter

from .ar1d import ArModel1D, autocovariance, fit_support


def fitted_variance(series, support) -> float:
    """Residual variance ``sigma2_hat_S`` of the Yule-Walker fit on ``support``.

    Non-increasing along nested supports.
    """
    support = sorted(set(support))
    acov = autocovariance(series, max(support, default=0))
    return fit_support(acov, support)[1]


def prediction_error_variance(series, model: ArModel1D) -> float:
    """Mean squared one-step prediction error of ``model`` on the
    (mean-removed) series, over the samples whose full history is observed."""
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    p = model.order
    if p >= len(x):
        raise ValueError(f"series of length {len(x)} too short for lag {p}")
    e = x[p:].copy()
    for lag, a in model.coeffs.items():
        e += a * x[p - lag : len(x) - lag]
    return float(e @ e / len(e))


def pev(series, support) -> float:
    """Prediction-error variance of the model fitted on ``support``.

    The coefficients come from the Yule-Walker fit; the error is measured
    on the data. The empty support gives ``r_hat(0)``.
    """
    support = sorted(set(support))
    acov = autocovariance(series, max(support, default=0))
    a, s2 = fit_support(acov, support)
    return prediction_error_variance(series, ArModel1D(dict(zip(support, a)), s2))


def filter_matrix(model: ArModel1D, n: int) -> np.ndarray:
    """Dense ``n x n`` unit lower-triangular Toeplitz matrix with ``a_j`` on
    the ``j``-th subdiagonal. Only used by oracles and small examples."""
    A = np.eye(n)
    for lag, a in model.coeffs.items():
        if lag < n:
            A += a * np.eye(n, k=-lag)
    return A


def transfer_trace(true_model: ArModel1D, est_model: ArModel1D, n: int) -> float:
    """``||Ahat A^{-1}||_F^2`` without forming either matrix.

    Both matrices are lower-triangular Toeplitz, so ``A^{-1}`` and the
    product are too; the product is fixed by its first column, obtained
    by one forward substitution against a unit impulse followed by the
    ``Ahat`` band. Row ``j`` of that column appears ``n - j`` times.
    """
    impulse = np.zeros(n)
    impulse[0] = 1.0
    h = lfilter([1.0], np.concatenate([[1.0], true_model.vector()]), impulse)
    g = lfilter(np.concatenate([[1.0], est_model.vector()]), [1.0], h)
    return float(np.arange(n, 0, -1) @ (g * g))


def kullback(true_model: ArModel1D, est_model: ArModel1D, n: int) -> float:
    """``-n/2 + log(sig_hat/sig) + sig^2/(2 sig_hat^2) * ||Ahat A^-1||_F^2``.

    The log term carries no factor ``n``; identical models give 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    trace = transfer_trace(true_model, est_model, n)
    s2, s2_hat = true_model.sigma2, est_model.sigma2
    return -n / 2 + 0.5 * np.log(s2_hat / s2) + s2 / (2 * s2_hat) * trace
