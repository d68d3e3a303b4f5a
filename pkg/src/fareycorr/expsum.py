"""Exponential sums over Farey fractions and their exact divisor-sum form.

The complex sum of e(r*gamma) over a whole Farey sequence collapses, for
r != 0, to an integer combination of Mertens values: sum over divisors
d of |r| with d <= Q of d*M(Q//d). Both routes are provided; the direct
route is a float computation good to roughly machine precision times the
term count, the identity route is exact integer arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputValidationError
from .farey import FareySequence
from .numtheory import SieveTables


def farey_exponential_sum_direct(seq: FareySequence, r: int) -> complex:
    """Sum of exp(2*pi*i*r*a/q) over the sequence, compensated.

    Phases are reduced with exact integer arithmetic ((r*a) mod q) before
    the trig calls, so accuracy does not degrade with |r|. The real and
    imaginary parts are each accumulated with exact (fsum) summation; the
    imaginary part vanishes up to rounding since the fractions are
    symmetric under reflection about 1/2.
    """
    r = int(r)
    if abs(r) * seq.order >= 1 << 62:
        raise InputValidationError("r too large: phase reduction would overflow int64")
    num = (r * seq.numerators) % seq.denominators  # exact: both fit in int64
    phases = (2.0 * math.pi) * (num / seq.denominators)
    return complex(math.fsum(np.cos(phases)), math.fsum(np.sin(phases)))


def farey_exponential_sum_identity(tables: SieveTables, order: int, r: int) -> int:
    """Exact value of the same sum via Mertens values: sum of d*M(order//d).

    The sum runs over positive divisors d of |r| with d <= order. Rejects
    r = 0, where every phase is trivially 1 and the answer is just the
    sequence length (see farey_cardinality).
    """
    order = int(order)
    r = int(r)
    if order < 1:
        raise InputValidationError(f"order must be >= 1, got {order}")
    if order > tables.limit:
        raise InputValidationError(
            f"sieve tables cover n <= {tables.limit}, got order {order}"
        )
    if r == 0:
        raise InputValidationError(
            "r = 0 has no finite divisor sum; its value is the sequence cardinality"
        )
    r = abs(r)
    divisors = set()
    for i in range(1, math.isqrt(r) + 1):
        if r % i == 0:
            divisors.add(i)
            divisors.add(r // i)
    total = 0
    for d in sorted(divisors):
        if d <= order:
            total += d * int(tables.mertens[order // d])
    return total
