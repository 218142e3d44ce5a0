"""Quarter-plane (QP) autoregressive models on images.

Pixels are stored as ``img[row, col]``. A lag ``(i1, i2)`` is a
horizontal offset ``i1`` and a vertical offset ``i2``: the model reads

    X[t2, t1] = -sum a[i1, i2] X[t2 - i2, t1 - i1] + E[t2, t1]

so QP1 (``i1 >= 0``) looks up and to the left of the current site and
QP2 (``i1 <= 0``) up and to the right. QP2 is the horizontal mirror of QP1.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.signal import lfilter

from .criteria import Criterion, penalty
from .errors import (
    DegenerateFitError,
    PgmHeaderError,
    PgmMagicError,
    PgmTruncatedError,
    SingularSystemError,
)
from .selection import IcEvaluator, select_nishii

Orientation = Literal["QP1", "QP2"]
ORIENTATIONS: tuple[Orientation, ...] = ("QP1", "QP2")

DEFAULT_MAX_ORDER = (18, 18)


def _sort_key(p):
    return (p[1], abs(p[0]))


@dataclass(frozen=True)
class Support2D:
    orientation: Orientation
    indices: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be QP1 or QP2, got {self.orientation!r}")
        idx = tuple(sorted({(int(a), int(b)) for a, b in self.indices}, key=_sort_key))
        sign = 1 if self.orientation == "QP1" else -1
        for i1, i2 in idx:
            if (i1, i2) == (0, 0):
                raise ValueError("(0, 0) is the current site, not a lag")
            if sign * i1 < 0 or i2 < 0:
                raise ValueError(f"{(i1, i2)} is not in {self.orientation}")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, item):
        return tuple(item) in self.indices

    def mirrored(self) -> Support2D:
        other = "QP2" if self.orientation == "QP1" else "QP1"
        return Support2D(other, tuple((-a, b) for a, b in self.indices))


def qp_support(orientation: Orientation, k1: int, k2: int) -> Support2D:
    """Rectangle ``[0, k1] x [0, k2]`` minus the origin (i1 negated for QP2)."""
    if k1 < 0 or k2 < 0:
        raise ValueError("orders must be non-negative")
    sign = 1 if orientation == "QP1" else -1
    return Support2D(
        orientation,
        tuple((sign * a, b) for b in range(k2 + 1) for a in range(k1 + 1) if a or b),
    )


@dataclass(frozen=True)
class ArModel2D:
    support: Support2D
    coeffs: Mapping[tuple[int, int], float]
    sigma2: float = 1.0

    def __post_init__(self):
        if set(self.coeffs) != set(self.support.indices):
            raise ValueError("need exactly one coefficient per support index")
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be > 0")

    @classmethod
    def from_dict(cls, coeffs, sigma2=1.0, orientation: Orientation = "QP1"):
        coeffs = {tuple(k): float(v) for k, v in coeffs.items()}
        return cls(Support2D(orientation, tuple(coeffs)), coeffs, sigma2)


@dataclass(frozen=True)
class Acov2D:
    """Biased autocovariance on lags ``l1 in [-m1, m1]``, ``l2 in [0, m2]``.

    ``table[l1 + m1, l2]``; negative ``l2`` is served by ``r(-l) = r(l)``.
    """

    table: np.ndarray = field(repr=False)
    n: int
    m1: int
    m2: int

    def lookup(self, l1, l2):
        l1 = np.asarray(l1)
        l2 = np.asarray(l2)
        flip = l2 < 0
        l1 = np.where(flip, -l1, l1)
        l2 = np.where(flip, -l2, l2)
        if np.any(np.abs(l1) > self.m1) or np.any(l2 > self.m2):
            raise ValueError("lag outside the autocovariance table")
        return self.table[l1 + self.m1, l2]

    def __call__(self, l1: int, l2: int) -> float:
        return float(self.lookup(l1, l2))


def acov2d(img, m1: int, m2: int) -> Acov2D:
    x = np.asarray(img, dtype=float)
    if x.ndim != 2 or x.size == 0:
        raise ValueError("image must be a non-empty 2-D array")
    h, w = x.shape
    if not (0 <= m1 < w and 0 <= m2 < h):
        raise ValueError(f"lags ({m1}, {m2}) too large for a {h}x{w} image")
    x = x - x.mean()
    table = np.empty((2 * m1 + 1, m2 + 1))
    for l2 in range(m2 + 1):
        top, bottom = x[: h - l2], x[l2:]
        for l1 in range(-m1, m1 + 1):
            if l1 >= 0:
                s = np.vdot(top[:, : w - l1], bottom[:, l1:])
            else:
                s = np.vdot(top[:, -l1:], bottom[:, : w + l1])
            table[l1 + m1, l2] = s
    return Acov2D(table / x.size, x.size, m1, m2)


def _as_acov(data, m1, m2) -> Acov2D:
    if isinstance(data, Acov2D):
        if data.m1 < m1 or data.m2 < m2:
            raise ValueError("autocovariance table too small for the requested orders")
        return data
    return acov2d(data, m1, m2)


def _solve(matrix, rhs):
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            f"2-D normal equations of size {len(rhs)} are singular"
        ) from None


def fit_support_2d(acov: Acov2D, support: Support2D | Iterable) -> tuple[np.ndarray, float]:
    """Coefficients in the support's canonical order and the residual variance."""
    idx = support.indices if isinstance(support, Support2D) else tuple(support)
    r00 = float(acov.table[acov.m1, 0])
    if not idx:
        return np.zeros(0), r00
    p = np.array(idx, dtype=int)
    d = p[:, None, :] - p[None, :, :]
    matrix = acov.lookup(d[..., 0], d[..., 1])
    r = acov.lookup(p[:, 0], p[:, 1])
    a = _solve(matrix, -r)
    return a, float(r00 + a @ r)


def ic_2d(acov: Acov2D, support, c: Criterion, n: int | None = None) -> float:
    """``N log sigma2_hat + |S| alpha(N)``; rectangles count ``(k1+1)(k2+1) - 1``."""
    n = acov.n if n is None else n
    _, s2 = fit_support_2d(acov, support)
    if not s2 > 0:
        raise DegenerateFitError(f"residual variance {s2!r} is not positive")
    return n * np.log(s2) + len(tuple(support)) * penalty(c, n)


def select_classical_2d(
    img, m1: int, m2: int, c: Criterion, orientation: Orientation = "QP1"
) -> tuple[int, int]:
    """Best rectangular order over ``[0, m1] x [0, m2]``.

    Ties go to the smaller rectangle, then to the lexicographically first order.
    """
    acov = _as_acov(img, m1, m2)
    best, best_key = None, None
    for k1 in range(m1 + 1):
        for k2 in range(m2 + 1):
            ic = ic_2d(acov, qp_support(orientation, k1, k2), c)
            key = (ic, (k1 + 1) * (k2 + 1), (k1, k2))
            if best_key is None or key < best_key:
                best, best_key = (k1, k2), key
    return best


def nishii_evaluator_2d(acov: Acov2D, m1, m2, c: Criterion, orientation) -> IcEvaluator:
    alpha = penalty(c, acov.n)

    def evaluate(indices):
        _, s2 = fit_support_2d(acov, indices)
        if not s2 > 0:
            raise DegenerateFitError(f"residual variance {s2!r} is not positive")
        return acov.n * np.log(s2) + len(indices) * alpha

    return IcEvaluator(qp_support(orientation, m1, m2).indices, evaluate)


def select_nishii_2d(
    img, m1: int, m2: int, c: Criterion, orientation: Orientation = "QP1"
) -> Support2D:
    acov = _as_acov(img, m1, m2)
    result = select_nishii(nishii_evaluator_2d(acov, m1, m2, c, orientation))
    return Support2D(orientation, result.chosen)


def simulate_2d(model: ArModel2D, height: int, width: int, seed: int, margin: int = 50):
    """Raster-scan causal recursion with zero boundary, first ``margin`` rows
    and columns cropped. Stability is not checked."""
    if model.support.orientation == "QP2":
        mirror = ArModel2D(
            model.support.mirrored(),
            {(-a, b): v for (a, b), v in model.coeffs.items()},
            model.sigma2,
        )
        return simulate_2d(mirror, height, width, seed, margin)[:, ::-1]
    rng = np.random.default_rng(seed)
    h, w = height + margin, width + margin
    x = rng.standard_normal((h, w)) * np.sqrt(model.sigma2)
    k1 = max((a for a, b in model.coeffs if b == 0), default=0)
    row_poly = np.zeros(k1 + 1)
    row_poly[0] = 1.0
    above = []
    for (a, b), v in model.coeffs.items():
        if b == 0:
            row_poly[a] = v
        else:
            above.append((a, b, v))
    for t2 in range(h):
        u = x[t2]
        for a, b, v in above:
            if t2 >= b:
                u[a:] -= v * x[t2 - b, : w - a]
        x[t2] = lfilter([1.0], row_poly, u)
    return x[margin:, margin:]


def _pgm_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset just past the last one."""
    tokens, pos, n = [], 0, len(data)
    while len(tokens) < count:
        while pos < n and (data[pos : pos + 1].isspace() or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise PgmHeaderError("PGM header ended early")
        tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path) -> np.ndarray:
    """Raw integer samples of a P2 or P5 file as an ``(height, width)`` array."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmMagicError(f"unsupported magic {magic!r}; only P2 and P5 are read")
    tokens, pos = _pgm_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PgmHeaderError(f"non-integer header field in {tokens[1:]!r}") from None
    if width < 1 or height < 1:
        raise PgmHeaderError(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise PgmHeaderError(f"maxval {maxval} outside [1, 65535]")
    count = width * height
    if magic == b"P5":
        # a single whitespace byte separates maxval from the raster
        body = data[pos + 1 :]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        if len(body) < count * dtype.itemsize:
            raise PgmTruncatedError(
                f"expected {count * dtype.itemsize} bytes of raster, got {len(body)}"
            )
        values = np.frombuffer(body, dtype=dtype, count=count).astype(np.int64)
    else:
        parts = data[pos:].split()
        if len(parts) < count:
            raise PgmTruncatedError(f"expected {count} samples, got {len(parts)}")
        try:
            values = np.array([int(p) for p in parts[:count]], dtype=np.int64)
        except ValueError:
            raise PgmHeaderError("non-integer sample in P2 raster") from None
    if values.max(initial=0) > maxval:
        raise PgmHeaderError(f"sample exceeds maxval {maxval}")
    return values.reshape(height, width)


def load_pgm(path) -> np.ndarray:
    """Mean-removed float image from a P2/P5 file."""
    img = read_pgm(path).astype(float)
    return img - img.mean()


def write_pgm(path, img, maxval: int = 255, binary: bool = True) -> None:
    """Write integer samples in ``[0, maxval]`` as P5 (or P2 if not binary)."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.min() < 0 or arr.max() > maxval:
        raise ValueError("need a 2-D array with samples in [0, maxval]")
    h, w = arr.shape
    header = f"P{5 if binary else 2}\n{w} {h}\n{maxval}\n".encode()
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            dtype = ">u2" if maxval > 255 else "u1"
            fh.write(arr.astype(dtype).tobytes())
        else:
            for row in arr:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode())


def quantize(img, maxval: int = 255) -> np.ndarray:
    """Affine map of a real field onto integers ``0..maxval``."""
    x = np.asarray(img, dtype=float)
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros(x.shape, dtype=np.int64)
    return np.rint((x - lo) / (hi - lo) * maxval).astype(np.int64)
