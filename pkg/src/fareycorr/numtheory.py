"""Sieved arithmetic tables: totient, Moebius, Mertens, totient summatory.

Everything downstream leans on four exact integer tables indexed by n:

    phi[n]            Euler totient
    mu[n]             Moebius function, in {-1, 0, 1}
    mertens[n]        M(n) = sum_{k<=n} mu(k)
    phi_cumulative[n] N_n = sum_{k<=n} phi(k)  (= #{a/q reduced, 0 < a <= q <= n})

All four are built in one linear-sieve pass and stored as numpy integer
arrays (index 0 is present but unused). Values stay well inside int64 for
any permitted limit: N_n ~ 3n^2/pi^2 < 2^63 for n <= 1e9, and the default
ceiling is 1e8.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError, SizingError

DEFAULT_SIEVE_CEILING = 100_000_000
SIEVE_CEILING_ENV = "FAREYCORR_SIEVE_LIMIT"


def sieve_ceiling() -> int:
    """Largest permitted sieve limit (env FAREYCORR_SIEVE_LIMIT overrides)."""
    raw = os.environ.get(SIEVE_CEILING_ENV)
    if raw is None:
        return DEFAULT_SIEVE_CEILING
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputValidationError(
            f"{SIEVE_CEILING_ENV} must be an integer, got {raw!r}"
        ) from exc
    if value < 1:
        raise InputValidationError(f"{SIEVE_CEILING_ENV} must be positive")
    return value


@dataclass(frozen=True)
class SieveTables:
    """Immutable bundle of the four tables; safe to share across threads."""

    limit: int
    phi: np.ndarray
    mu: np.ndarray
    mertens: np.ndarray
    phi_cumulative: np.ndarray

    def __post_init__(self) -> None:
        for name in ("phi", "mu", "mertens", "phi_cumulative"):
            arr = getattr(self, name)
            if arr.shape != (self.limit + 1,):
                raise InputValidationError(
                    f"{name} must have length limit+1 = {self.limit + 1}"
                )


def build_sieves(limit: int, *, ceiling: int | None = None) -> SieveTables:
    """Build SieveTables for 1..limit with a linear (one-pass) sieve.

    Args:
        limit: inclusive upper index; must satisfy 1 <= limit <= ceiling.
        ceiling: overrides the configured sieve ceiling (tests mostly).

    Returns:
        SieveTables with exact integer entries.
    """
    if not isinstance(limit, (int, np.integer)):
        raise InputValidationError(f"limit must be an integer, got {type(limit).__name__}")
    if limit < 1:
        raise InputValidationError(f"limit must be >= 1, got {limit}")
    cap = sieve_ceiling() if ceiling is None else ceiling
    if limit > cap:
        raise SizingError(f"limit {limit} exceeds the configured ceiling {cap}")

    phi = np.zeros(limit + 1, dtype=np.int64)
    mu = np.zeros(limit + 1, dtype=np.int8)
    phi[1] = 1
    mu[1] = 1
    primes: list[int] = []
    # Linear sieve: each composite is crossed off exactly once, by its
    # smallest prime factor, which is what makes phi/mu updates O(1) each.
    is_comp = np.zeros(limit + 1, dtype=bool)
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            phi[i] = i - 1
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = True
            if i % p == 0:
                phi[ip] = phi[i] * p  # p already divides i: totient gains a full p
                mu[ip] = 0            # squared prime factor
                break
            phi[ip] = phi[i] * (p - 1)
            mu[ip] = -mu[i]

    mertens = np.cumsum(mu, dtype=np.int64)
    phi_cumulative = np.cumsum(phi, dtype=np.int64)
    return SieveTables(
        limit=limit, phi=phi, mu=mu, mertens=mertens, phi_cumulative=phi_cumulative
    )


def farey_cardinality(tables: SieveTables, order: int) -> int:
    """Number of reduced fractions a/q with 0 < a <= q <= order.

    Equals len(farey_sequence(order)) and grows like 3*order^2/pi^2.
    """
    if not isinstance(order, (int, np.integer)):
        raise InputValidationError(f"order must be an integer, got {type(order).__name__}")
    if order < 1:
        raise InputValidationError(f"order must be >= 1, got {order}")
    if order > tables.limit:
        raise InputValidationError(
            f"order {order} exceeds table limit {tables.limit}"
        )
    return int(tables.phi_cumulative[order])
