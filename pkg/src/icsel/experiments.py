"""Monte-Carlo beta sweeps on 1-D AR data and support maps on textures."""

from __future__ import annotations

import io
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import ar2d
from .ar1d import (
    ArModel1D,
    FitCache,
    autocovariance,
    evaluator,
    simulate,
    stability_check,
)
from .criteria import Criterion, beta_bounds, beta_equivalent, parse_criterion
from .errors import ConfigError, UnstableModelError
from .metrics import kullback, prediction_error_variance
from .selection import select_classical, select_nishii

PAPER_COEFFS = (0.5, 0.4) + (0.0,) * 12 + (0.45,)

SWEEP_COLUMNS = (
    "beta",
    "classical_success_pct",
    "nishii_success_pct",
    "mean_pev_classical",
    "mean_pev_nishii",
    "mean_kullback_classical",
    "mean_kullback_nishii",
)
TEXTURE_COLUMNS = ("orientation", "method", "i1", "i2", "kept")


@dataclass(frozen=True)
class SweepConfig:
    n: int = 1000
    runs: int = 100
    true_model: ArModel1D = field(
        default_factory=lambda: ArModel1D.from_vector(PAPER_COEFFS, 1.0)
    )
    max_order: int = 20
    beta_grid: tuple[float, float, float] = (0.0, 1.0, 0.01)
    base_seed: int = 0
    success_support: tuple[int, ...] | None = None
    burn_in: int = 1000
    workers: int = 1

    def __post_init__(self):
        start, stop, step = self.beta_grid
        if not (0 <= start <= stop <= 1 and step > 0):
            raise ConfigError(f"bad beta grid {self.beta_grid}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.n < 16:
            raise ConfigError("n must be >= 16 for the beta markers")
        if not 1 <= self.max_order < self.n:
            raise ConfigError(f"max_order must be in [1, n - 1], got {self.max_order}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        support = tuple(sorted(self.target_support))
        if support and support[-1] > self.max_order:
            raise ConfigError("success support exceeds max_order")

    @property
    def target_support(self) -> tuple[int, ...]:
        if self.success_support is None:
            return self.true_model.support
        return tuple(sorted(self.success_support))

    def betas(self) -> np.ndarray:
        start, stop, step = self.beta_grid
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return np.round(start + step * np.arange(count), 10)


@dataclass(frozen=True)
class SweepRow:
    beta: float
    classical_success_pct: float
    nishii_success_pct: float
    mean_pev_classical: float
    mean_pev_nishii: float
    mean_kullback_classical: float
    mean_kullback_nishii: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    markers: dict[str, float]
    # per beta, per replicate: classical order and Nishii support
    classical_choices: list[list[int]]
    nishii_choices: list[list[tuple[int, ...]]]

    def modal_classical(self, i: int):
        return Counter(self.classical_choices[i]).most_common(1)[0]

    def modal_nishii(self, i: int):
        return Counter(self.nishii_choices[i]).most_common(1)[0]


def marker_betas(n: int) -> dict[str, float]:
    beta_min, beta_max = beta_bounds(n)
    return {
        "beta_aic": beta_equivalent("aic", n),
        "beta_bic": beta_equivalent("bic", n),
        "beta_min": beta_min,
        "beta_max": beta_max,
    }


def _replicate(cfg: SweepConfig, r: int):
    x = simulate(cfg.true_model, cfg.n, cfg.base_seed + r, cfg.burn_in)
    cache = FitCache(autocovariance(x, cfg.max_order))
    memo: dict[tuple[int, ...], tuple[float, float]] = {}

    def scores(support):
        if support not in memo:
            est = cache.model(support)
            memo[support] = (
                prediction_error_variance(x, est),
                kullback(cfg.true_model, est, cfg.n),
            )
        return memo[support]

    out = []
    for beta in cfg.betas():
        e = evaluator(cache.acov, cfg.max_order, Criterion.phi_beta(beta), cfg.n, cache)
        k = select_classical(e).chosen
        s = select_nishii(e).chosen
        pev_c, kl_c = scores(tuple(range(1, k + 1)))
        pev_n, kl_n = scores(s)
        out.append((k, s, pev_c, pev_n, kl_c, kl_n))
    return out


def _replicate_star(args):
    return _replicate(*args)


def run_beta_sweep(cfg: SweepConfig) -> SweepResult:
    stable, modulus = stability_check(cfg.true_model)
    if not stable:
        raise UnstableModelError(modulus)
    jobs = [(cfg, r) for r in range(cfg.runs)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            per_run = list(pool.map(_replicate_star, jobs))
    else:
        per_run = [_replicate_star(j) for j in jobs]

    target = cfg.target_support
    target_order = max(target, default=0)
    rows, kc, sn = [], [], []
    for i, beta in enumerate(cfg.betas()):
        cells = [run[i] for run in per_run]
        ks = [c[0] for c in cells]
        ss = [c[1] for c in cells]
        mean = lambda j: float(np.mean([c[j] for c in cells]))  # noqa: E731
        rows.append(SweepRow(
            beta=float(beta),
            classical_success_pct=100.0 * sum(k == target_order for k in ks) / cfg.runs,
            nishii_success_pct=100.0 * sum(s == target for s in ss) / cfg.runs,
            mean_pev_classical=mean(2),
            mean_pev_nishii=mean(3),
            mean_kullback_classical=mean(4),
            mean_kullback_nishii=mean(5),
        ))
        kc.append(ks)
        sn.append(ss)
    return SweepResult(rows, marker_betas(cfg.n), kc, sn)


def run_kullback_report(cfg: SweepConfig, beta_cap: float = 0.35) -> SweepResult:
    """Sweep restricted to ``beta <= beta_cap``, where the nested scan has
    not started to drop true lags yet."""
    start, stop, step = cfg.beta_grid
    stop = min(stop, beta_cap)
    if start > stop:
        raise ConfigError(f"beta grid starts above {beta_cap}")
    return run_beta_sweep(replace(cfg, beta_grid=(start, stop, step)))


def _fmt(x: float) -> str:
    return repr(float(x))


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO(newline="")
    for name, value in result.markers.items():
        buf.write(f"# {name}={_fmt(value)}\n")
    buf.write(",".join(SWEEP_COLUMNS) + "\n")
    for row in result.rows:
        buf.write(",".join(_fmt(getattr(row, c)) for c in SWEEP_COLUMNS) + "\n")
    return buf.getvalue()


# -- config files -----------------------------------------------------------

_INT_KEYS = {"n", "runs", "max_order", "seed", "burn_in", "workers"}


def _parse_grid(text: str) -> tuple[float, float, float]:
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"beta grid must be A:B:STEP, got {text!r}") from None
    return a, b, step


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_config(raw: dict[str, str]) -> SweepConfig:
    raw = dict(raw)
    kwargs = {}
    for key in list(raw):
        if key in _INT_KEYS:
            try:
                kwargs["base_seed" if key == "seed" else key] = int(raw.pop(key))
            except ValueError:
                raise ConfigError(f"{key} must be an integer") from None
    coeffs = _parse_floats(raw.pop("coeffs")) if "coeffs" in raw else PAPER_COEFFS
    try:
        sigma2 = float(raw.pop("sigma2", "1.0"))
        kwargs["true_model"] = ArModel1D.from_vector(coeffs, sigma2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if "beta_grid" in raw:
        kwargs["beta_grid"] = _parse_grid(raw.pop("beta_grid"))
    if "success_support" in raw:
        lags = _parse_floats(raw.pop("success_support"))
        if any(v != int(v) or v < 1 for v in lags):
            raise ConfigError("success_support must list positive integer lags")
        kwargs["success_support"] = tuple(int(v) for v in lags)
    if raw:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(raw))}")
    return SweepConfig(**kwargs)


# -- textures ---------------------------------------------------------------


@dataclass(frozen=True)
class TextureResult:
    m1: int
    m2: int
    n_pixels: int
    criterion: Criterion
    classical: dict[str, tuple[int, int]]
    nishii: dict[str, ar2d.Support2D]

    def kept(self, orientation, method) -> set[tuple[int, int]]:
        if method == "classical":
            k1, k2 = self.classical[orientation]
            return set(ar2d.qp_support(orientation, k1, k2).indices)
        return set(self.nishii[orientation].indices)


def run_texture(image, m1: int = 18, m2: int = 18, criterion="phibetamin") -> TextureResult:
    """Classical and Nishii selection in both quarter planes.

    ``image`` is a PGM path or an already mean-removed array.
    """
    img = ar2d.load_pgm(image) if isinstance(image, (str, Path)) else np.asarray(image)
    n = img.size
    c = parse_criterion(criterion, n) if isinstance(criterion, str) else criterion
    acov = ar2d.acov2d(img, m1, m2)
    classical, nishii = {}, {}
    for orient in ar2d.ORIENTATIONS:
        classical[orient] = ar2d.select_classical_2d(acov, m1, m2, c, orient)
        nishii[orient] = ar2d.select_nishii_2d(acov, m1, m2, c, orient)
    return TextureResult(m1, m2, n, c, classical, nishii)


def texture_csv(res: TextureResult) -> str:
    lines = [",".join(TEXTURE_COLUMNS)]
    for orient in ar2d.ORIENTATIONS:
        universe = ar2d.qp_support(orient, res.m1, res.m2).indices
        for method in ("classical", "nishii"):
            kept = res.kept(orient, method)
            for i1, i2 in universe:
                lines.append(f"{orient},{method},{i1},{i2},{int((i1, i2) in kept)}")
    return "\n".join(lines) + "\n"


def _grid(kept, orient, m1, m2) -> list[str]:
    sign = 1 if orient == "QP1" else -1
    # QP1 columns run from the farthest-left lag to the current site,
    # QP2 from the current site to the farthest-right lag
    offsets = range(m1, -1, -1) if orient == "QP1" else range(0, m1 + 1)
    rows = []
    for i2 in range(m2, -1, -1):
        cells = []
        for off in offsets:
            i1 = sign * off
            if (i1, i2) == (0, 0):
                cells.append("X")
            else:
                cells.append("#" if (i1, i2) in kept else ".")
        rows.append("".join(cells))
    return rows


def texture_ascii(res: TextureResult) -> str:
    """Support maps: QP1 left of the current site ``X``, QP2 right of it."""
    out = [f"# criterion={res.criterion} N={res.n_pixels} max_order={res.m1}x{res.m2}"]
    for method in ("classical", "nishii"):
        if method == "classical":
            detail = " ".join(
                f"{o}=({k1},{k2})" for o, (k1, k2) in res.classical.items()
            )
        else:
            detail = " ".join(f"{o}:{len(s)} sites" for o, s in res.nishii.items())
        out.append(f"{method} {detail}")
        left = _grid(res.kept("QP1", method), "QP1", res.m1, res.m2)
        right = _grid(res.kept("QP2", method), "QP2", res.m1, res.m2)
        out.extend(f"{a}   {b}" for a, b in zip(left, right))
        out.append("")
    return "\n".join(out)
