"""Penalty functions of the information-criterion family.

All logarithms are natural. ``phi_beta`` uses ``alpha(n) = n**beta * log(log(n))``;
``beta = 0`` is the Hannan-Quinn ``phi`` criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import ConfigError, DomainError

Kind = Literal["aic", "bic", "phi_beta"]


@dataclass(frozen=True)
class Criterion:
    kind: Kind
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in ("aic", "bic", "phi_beta"):
            raise ValueError(f"unknown criterion kind {self.kind!r}")
        if self.kind == "phi_beta":
            if self.beta is None or not math.isfinite(self.beta):
                raise ValueError("phi_beta needs a finite beta")
        elif self.beta is not None:
            raise ValueError(f"{self.kind} takes no beta")

    @classmethod
    def aic(cls) -> Criterion:
        return cls("aic")

    @classmethod
    def bic(cls) -> Criterion:
        return cls("bic")

    @classmethod
    def phi_beta(cls, beta: float) -> Criterion:
        return cls("phi_beta", float(beta))

    @classmethod
    def phi(cls) -> Criterion:
        return cls("phi_beta", 0.0)

    def __str__(self):
        if self.kind == "phi_beta":
            return f"phi_beta({self.beta:g})"
        return self.kind.upper()


def _check_n(n, minimum, what):
    if n < minimum:
        raise DomainError(f"{what} needs n >= {minimum}, got n={n}")


def penalty(c: Criterion, n: int) -> float:
    """Per-parameter penalty ``alpha(n)``.

    Negative ``beta`` is accepted so that the AIC-equivalent beta can be
    evaluated for large ``n``.
    """
    if c.kind == "aic":
        _check_n(n, 1, "AIC")
        return 2.0
    _check_n(n, 3, str(c))
    if c.kind == "bic":
        return math.log(n)
    return n ** c.beta * math.log(math.log(n))


def beta_equivalent(target: Literal["aic", "bic"], n: int) -> float:
    """The beta for which ``phi_beta`` has the same penalty as AIC or BIC."""
    _check_n(n, 16, "beta_equivalent")
    logn = math.log(n)
    loglogn = math.log(logn)
    logloglogn = math.log(loglogn)
    if target == "aic":
        return (math.log(2.0) - logloglogn) / logn
    if target == "bic":
        return (loglogn - logloglogn) / logn
    raise ValueError(f"target must be 'aic' or 'bic', got {target!r}")


def beta_bounds(n: int) -> tuple[float, float]:
    """``(beta_min, beta_max)`` with ``beta_min = log log n / log n``."""
    _check_n(n, 3, "beta_bounds")
    beta_min = math.log(math.log(n)) / math.log(n)
    return beta_min, 1.0 - beta_min


def ic_value(fit_term: float, size: int, c: Criterion, n: int) -> float:
    return fit_term + size * penalty(c, n)


def parse_criterion(text: str, n: int | None = None) -> Criterion:
    """Parse ``aic``, ``bic``, ``phi``, ``phibeta:BETA`` or ``phibetamin``.

    ``phibetamin`` resolves to ``phi_beta(beta_min(n))`` and therefore needs ``n``.
    """
    key = text.strip().lower()
    if key == "aic":
        return Criterion.aic()
    if key == "bic":
        return Criterion.bic()
    if key == "phi":
        return Criterion.phi()
    if key == "phibetamin":
        if n is None:
            raise ConfigError("phibetamin needs the sample size")
        return Criterion.phi_beta(beta_bounds(n)[0])
    if key.startswith("phibeta:"):
        try:
            beta = float(key.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad beta in criterion {text!r}") from None
        return Criterion.phi_beta(beta)
    raise ConfigError(f"unknown criterion {text!r}")
