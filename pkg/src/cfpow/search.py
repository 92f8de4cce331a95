"""Desk-scale exhaustive search for perfect powers among K-term sums of
convergent denominators, plus the empirical cross-check of bound reports.

The tuple space is every weakly decreasing K-tuple (N_1, ..., N_K) with
N_1 <= N_max, walked in ascending lexicographic order.  Each sum is tested
for every exponent split y^a with 2 <= a <= a_max, not just the maximal
exponent, so one tuple can yield several solutions (16 = 4^2 = 2^4).
Partitions by N_1 are independent, which is what the process pool exploits;
the merge concatenates partitions in N_1 order, so output order never
depends on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

from .bounds import BoundReport
from .cfrac import BinetData, ContinuedFraction, convergents
from .errors import BudgetExceededError, InputError
from .numeration import radix_encode, zeckendorf_encode
from .quadfield import DEFAULT_PRECISION, DyadicInterval

__all__ = [
    "Solution",
    "SearchRange",
    "is_perfect_power",
    "power_splits",
    "enumerate_solutions",
    "filter_by_weight",
    "verify_bounds",
]


@dataclass(frozen=True)
class Solution:
    """One representation y^a = q_{N_1} + ... + q_{N_K}."""

    y: int
    a: int
    N: tuple[int, ...]
    value: int

    def __post_init__(self):
        if self.y < 2 or self.a < 2:
            raise InputError("solutions need y >= 2 and a >= 2")
        if self.y**self.a != self.value:
            raise InputError("value disagrees with y^a")
        if not self.N or self.N[-1] < 0:
            raise InputError("indices must be non-negative and non-empty")
        if any(self.N[i] < self.N[i + 1] for i in range(len(self.N) - 1)):
            raise InputError("indices must be weakly decreasing")

    def to_json(self) -> dict:
        return {
            "y": str(self.y),
            "a": self.a,
            "N": list(self.N),
            "value": str(self.value),
        }


@dataclass(frozen=True)
class SearchRange:
    N_max: int
    a_max: int
    K: int

    def __post_init__(self):
        if self.N_max < 1 or self.a_max < 1 or self.K < 1:
            raise InputError("search range parameters must be positive")


def _int_nthroot(n: int, k: int) -> int:
    """floor(n^(1/k)) by integer Newton iteration from an upper seed."""
    if n < 0 or k < 1:
        raise InputError("nth root needs n >= 0 and k >= 1")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return isqrt(n)
    # 2^ceil(bitlen/k) >= n^(1/k), and the iteration decreases monotonically
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def is_perfect_power(n: int):
    """(y, a) with y^a = n and a maximal >= 2, or None.

    Values below 2 cannot be written with y >= 2, so they map to None.
    """
    if n < 4:
        return None
    for a in range(n.bit_length(), 1, -1):
        y = _int_nthroot(n, a)
        if y >= 2 and y**a == n:
            return (y, a)
    return None


def power_splits(n: int, a_max: int | None = None) -> tuple[tuple[int, int], ...]:
    """Every (y, a) with y^a = n and 2 <= a (<= a_max), ascending in a."""
    if n < 4:
        return ()
    top = n.bit_length()
    if a_max is not None:
        top = min(top, a_max)
    out = []
    for a in range(2, top + 1):
        y = _int_nthroot(n, a)
        if y >= 2 and y**a == n:
            out.append((y, a))
    return tuple(out)


def _tails(bound: int, k: int):
    """Weakly decreasing k-tuples over [0, bound], ascending lexicographic."""
    if k == 0:
        yield ()
        return
    for head in range(bound + 1):
        for rest in _tails(head, k - 1):
            yield (head, *rest)


def _search_partition(args) -> list[Solution]:
    qs, k, n1, a_max = args
    found = []
    base = qs[n1]
    for tail in _tails(n1, k - 1):
        total = base + sum(qs[i] for i in tail)
        for y, a in power_splits(total, a_max):
            found.append(Solution(y, a, (n1, *tail), total))
    return found


def enumerate_solutions(
    cf: ContinuedFraction,
    rng: SearchRange,
    threads: int = 1,
    budget: int | None = None,
) -> tuple[Solution, ...]:
    """All solutions in the range, ordered by N lexicographic then a.

    ``budget`` caps the number of K-tuples examined.  Accounting is at
    partition granularity and forces the serial path (cross-process
    counters would make the stopping point racy): a partition that does
    not fit raises ``BudgetExceededError`` carrying the solutions and N_1
    values of every partition already finished.
    """
    if threads < 1:
        raise InputError("thread count must be >= 1")
    qs = convergents(cf, rng.N_max).qs
    parts = [(qs, rng.K, n1, rng.a_max) for n1 in range(rng.N_max + 1)]
    if budget is not None:
        used = 0
        out: list[Solution] = []
        done: list[int] = []
        for part in parts:
            size = comb(part[2] + rng.K - 1, rng.K - 1)
            if used + size > budget:
                raise BudgetExceededError(
                    "tuple budget %d exhausted before N1 = %d" % (budget, part[2]),
                    partial=out,
                    completed=done,
                )
            out.extend(_search_partition(part))
            used += size
            done.append(part[2])
        return tuple(out)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_search_partition, parts, chunksize=8))
    else:
        chunks = [_search_partition(part) for part in parts]
    return tuple(sol for chunk in chunks for sol in chunk)


def filter_by_weight(
    solutions,
    variant: str,
    ell: int,
    b: int | None = None,
) -> tuple[Solution, ...]:
    """Keep solutions whose y uses at most ell nonzero digits.

    "zeckendorf" counts Fibonacci summands; "radix" counts nonzero base-b
    digits and needs ``b``.
    """
    if ell < 1:
        raise InputError("weight threshold must be >= 1")
    if variant == "zeckendorf":
        weight = lambda y: len(zeckendorf_encode(y).indices)
    elif variant == "radix":
        if b is None or b < 2:
            raise InputError("radix weight needs a base b >= 2")
        weight = lambda y: len(radix_encode(y, b).digits)
    else:
        raise InputError("variant must be zeckendorf or radix")
    return tuple(sol for sol in solutions if weight(sol.y) <= ell)


def verify_bounds(solutions, report: BoundReport, bd: BinetData) -> bool:
    """True iff every solution sits under the report's three bounds.

    The caller must pair solutions with a report for the same expansion
    and K.  Comparisons use the upper endpoints; log(y^a) is certified
    by enclosure, escalating precision when an enclosure straddles the
    bound, and counts as a failure if 4096 bits cannot separate them.
    """
    for sol in solutions:
        n1 = (sol.N[0] - bd.r) // bd.s if sol.N[0] >= bd.r else 0
        if Fraction(n1) > report.n1_bound.hi:
            return False
        if Fraction(sol.a) > report.a_bound.hi:
            return False
        bits = DEFAULT_PRECISION
        while True:
            log_ya = DyadicInterval.from_int(sol.y, bits).log() * DyadicInterval.from_int(sol.a, bits)
            if log_ya.hi <= report.log_ya_bound.hi:
                break
            if log_ya.lo > report.log_ya_bound.hi or bits >= 4096:
                return False
            bits *= 2
    return True
