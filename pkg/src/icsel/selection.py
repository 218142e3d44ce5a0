"""Support and order selection strategies over an abstract IC evaluator.

Every strategy reports ``weighted_ops``: each IC computation weighted by
the dimension it is evaluated in (the number of free indices). This gives
``m * 2**(m-1)`` for the exhaustive search, ``m(m+1)/2`` for the nested
scan and ``m**2`` for the leave-one-out (Nishii) rule.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass
from itertools import combinations

MAX_EXHAUSTIVE = 25


@dataclass(frozen=True)
class IcEvaluator:
    """IC over subsets of ``universe``.

    ``evaluate`` receives a tuple of universe elements in universe order.
    ``evaluate_order(k)`` is the IC of the nested model made of the first
    ``k`` elements; it is only needed by :func:`select_classical`.
    """

    universe: Sequence[Hashable]
    evaluate: Callable[[tuple], float]
    evaluate_order: Callable[[int], float] | None = None

    @property
    def m(self) -> int:
        return len(self.universe)


@dataclass(frozen=True)
class SelectionResult:
    chosen: tuple | int
    ic_value: float | None
    weighted_ops: int
    n_evaluations: int


def select_exhaustive(e: IcEvaluator) -> SelectionResult:
    """Minimise IC over all ``2**m`` subsets, the empty one included.

    Ties go to the smaller subset, then to the lexicographically first
    (in universe positions).
    """
    m = e.m
    if m > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive search capped at m={MAX_EXHAUSTIVE}, got {m}")
    best, best_ic = (), None
    ops = calls = 0
    for size in range(m + 1):
        for positions in combinations(range(m), size):
            subset = tuple(e.universe[p] for p in positions)
            ic = e.evaluate(subset)
            ops += size
            calls += 1
            # strict: earlier (smaller, then lexicographic) wins ties
            if best_ic is None or ic < best_ic:
                best, best_ic = subset, ic
    return SelectionResult(best, float(best_ic), ops, calls)


def select_classical(e: IcEvaluator) -> SelectionResult:
    """Minimise IC over nested orders ``0..m``; ties go to the smaller order."""
    if e.evaluate_order is None:
        raise ValueError("classical selection needs evaluate_order")
    best_k, best_ic = 0, None
    ops = 0
    for k in range(e.m + 1):
        ic = e.evaluate_order(k)
        ops += k
        if best_ic is None or ic < best_ic:
            best_k, best_ic = k, ic
    return SelectionResult(best_k, float(best_ic), ops, e.m + 1)


def nishii_support(ic_ref: float, ic_minus: Sequence[float], universe: Sequence) -> tuple:
    """Keep index ``j`` iff ``IC(-j) > IC_ref`` (ties drop the index)."""
    return tuple(j for j, ic in zip(universe, ic_minus) if ic > ic_ref)


def select_nishii(e: IcEvaluator) -> SelectionResult:
    """Leave-one-out rule against the full model, in exactly ``m + 1`` calls.

    ``ic_value`` is only filled in when the chosen support was one of the
    evaluated ones (full model or a single index dropped); otherwise it is
    None and callers score the support themselves.
    """
    m = e.m
    full = tuple(e.universe)
    ic_ref = e.evaluate(full)
    ic_minus = [e.evaluate(full[:j] + full[j + 1:]) for j in range(m)]
    chosen = nishii_support(ic_ref, ic_minus, full)
    if len(chosen) == m:
        ic_chosen = ic_ref
    elif len(chosen) == m - 1:
        ic_chosen = ic_minus[next(j for j in range(m) if full[j] not in chosen)]
    else:
        ic_chosen = None
    return SelectionResult(chosen, ic_chosen, m + m * (m - 1), m + 1)


def table1_ops(m: int) -> dict[str, int]:
    """Closed-form operation counts of the three strategies."""
    return {
        "exhaustive": m * 2 ** (m - 1) if m > 0 else 0,
        "classical": m * (m + 1) // 2,
        "nishii": m * m,
    }
