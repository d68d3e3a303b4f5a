"""Ordered Farey fractions of a given order.

The sequence of order Q is every reduced a/q with 0 < a <= q <= Q, ascending,
so it covers (0,1] — the count is sum_{k<=Q} phi(k). Generation walks the
standard next-term recurrence: from consecutive terms a/q, a'/q' the next is
(k*a' - a)/(k*q' - q) with k = floor((Q + q)/q'), which is O(1) integers per
term and needs no sorting.

Fractions are kept as integer pairs until a consumer asks for floats;
the correlation layer works on the circle, where 1/1 and 0 coincide.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd
from typing import Iterator

import numpy as np

from .errors import InputValidationError, SizingError

DEFAULT_MAX_POINTS = 50_000_000
MAX_POINTS_ENV = "FAREYCORR_MAX_POINTS"


def _max_points() -> int:
    raw = os.environ.get(MAX_POINTS_ENV)
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputValidationError(f"{MAX_POINTS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputValidationError(f"{MAX_POINTS_ENV} must be positive")
    return value


def _check_order(order: int) -> None:
    if not isinstance(order, (int, np.integer)):
        raise InputValidationError(f"order must be an integer, got {type(order).__name__}")
    if order < 1:
        raise InputValidationError(f"order must be >= 1, got {order}")
    # ~3Q^2/pi^2 items; refuse before allocating silly amounts of memory.
    estimated = 1 + (3 * order * order) // 9
    if estimated > _max_points():
        raise SizingError(
            f"order {order} implies ~{estimated} fractions, above the "
            f"configured budget of {_max_points()} (set {MAX_POINTS_ENV} to raise it)"
        )


@dataclass(frozen=True, slots=True)
class FareyFraction:
    """One reduced fraction a/q with 0 < a <= q."""

    a: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise InputValidationError(f"denominator must be positive, got {self.q}")
        if not 0 < self.a <= self.q:
            raise InputValidationError(f"need 0 < a <= q, got {self.a}/{self.q}")
        if gcd(self.a, self.q) != 1:
            raise InputValidationError(f"{self.a}/{self.q} is not reduced")

    @property
    def value(self) -> float:
        return self.a / self.q


def _pair_stream(order: int) -> Iterator[tuple[int, int]]:
    # Seed the recurrence with the virtual predecessor 0/1 and first term 1/Q.
    a0, q0 = 0, 1
    a1, q1 = 1, order
    yield a1, q1
    while (a1, q1) != (1, 1):
        k = (order + q0) // q1
        a0, q0, a1, q1 = a1, q1, k * a1 - a0, k * q1 - q0
        yield a1, q1


def iter_farey(order: int) -> Iterator[FareyFraction]:
    """Stream the sequence in ascending order without materializing it."""
    _check_order(order)
    for a, q in _pair_stream(order):
        # Construct directly: the recurrence only emits reduced in-range pairs.
        yield FareyFraction(a, q)


class _ItemsView:
    """Read-only ascending array view; builds FareyFraction objects on demand."""

    __slots__ = ("_seq",)

    def __init__(self, seq: "FareySequence"):
        self._seq = seq

    def __len__(self) -> int:
        return len(self._seq)

    def __getitem__(self, i: int) -> FareyFraction:
        return self._seq[i]

    def __iter__(self) -> Iterator[FareyFraction]:
        nums = self._seq.numerators
        dens = self._seq.denominators
        for a, q in zip(nums.tolist(), dens.tolist()):
            yield FareyFraction(a, q)


class FareySequence:
    """The full ordered sequence of one order, array-backed.

    Numerators and denominators live in int64 arrays (fractions stay exact);
    ``items`` is a lazy view of FareyFraction objects over them.
    """

    def __init__(self, order: int, numerators: np.ndarray, denominators: np.ndarray):
        if numerators.shape != denominators.shape or numerators.ndim != 1:
            raise InputValidationError("numerators/denominators must be equal-length 1-D arrays")
        self.order = int(order)
        self.numerators = numerators
        self.denominators = denominators

    def __len__(self) -> int:
        return len(self.numerators)

    def __getitem__(self, i: int) -> FareyFraction:
        return FareyFraction(int(self.numerators[i]), int(self.denominators[i]))

    def __iter__(self) -> Iterator[FareyFraction]:
        return iter(self.items)

    @property
    def items(self) -> _ItemsView:
        return _ItemsView(self)

    def values(self) -> np.ndarray:
        """Float values a/q in (0,1], ascending."""
        return self.numerators.astype(np.float64) / self.denominators.astype(np.float64)

    def unit_points(self) -> np.ndarray:
        """The sequence as sorted points of [0,1): the final 1/1 wraps to 0.

        This is the canonical correlation input; differences are taken mod 1,
        where the move is invisible.
        """
        vals = self.values()
        vals[-1] = 0.0  # 1/1 == 0 on the circle
        vals.sort()
        return vals


def farey_sequence(order: int) -> FareySequence:
    """Materialize the ordered sequence of the given order.

    O(N) time and memory, N = sum_{k<=order} phi(k). Orders whose N exceeds
    the configured budget are refused with a SizingError.
    """
    _check_order(order)
    nums: list[int] = []
    dens: list[int] = []
    for a, q in _pair_stream(order):
        nums.append(a)
        dens.append(q)
    return FareySequence(
        order,
        np.array(nums, dtype=np.int64),
        np.array(dens, dtype=np.int64),
    )
