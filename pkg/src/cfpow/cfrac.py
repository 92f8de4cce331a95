"""Periodic continued fractions of real quadratic irrationals.

Expansion works on exact (P, Q) complete-quotient states with a fixed
radicand, so period detection is a dictionary lookup and the returned
preperiod/period lengths are minimal.  The convention here: the integer part
a0 always belongs to the preperiodic block, so the preperiod length r
satisfies r >= 1 and the stored ``preperiod`` tuple holds a1 .. a_{r-1}.

``binet_data`` splits the convergent denominators into s arithmetic
subsequences q_{j+r+s*i} (one per residue class j of the period) and returns
the exact closed-form coefficients of each: growth root theta1, its
conjugate theta2, and per-class constants c1, c2 with

    q_{j+r+s*i} = c1[j] * theta1**i - c2[j] * theta2**i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm

from .errors import InputError, NonQuadraticError, PeriodCapError, PrecisionError
from .quadfield import DEFAULT_PRECISION, DyadicInterval, QuadNum, make_quadnum

__all__ = [
    "ContinuedFraction",
    "ConvergentTable",
    "BinetData",
    "expand",
    "convergents",
    "binet_data",
    "verify_shifted_recurrence",
]


@dataclass(frozen=True)
class ContinuedFraction:
    """Eventually periodic expansion [a0; a1, ..., a_{r-1}, overline(period)]."""

    alpha: QuadNum
    a0: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    @property
    def r(self) -> int:
        """Length of the preperiodic block, counting a0."""
        return len(self.preperiod) + 1

    @property
    def s(self) -> int:
        """Minimal period length."""
        return len(self.period)

    def quotient(self, i: int) -> int:
        """Partial quotient a_i for any i >= 0."""
        if i < 0:
            raise InputError("quotient index must be >= 0")
        if i == 0:
            return self.a0
        if i < self.r:
            return self.preperiod[i - 1]
        return self.period[(i - self.r) % self.s]

    def quotients(self, n: int) -> list[int]:
        """The list a_0 .. a_n."""
        return [self.quotient(i) for i in range(n + 1)]

    def to_json(self) -> dict:
        return {
            "a0": self.a0,
            "preperiod": list(self.preperiod),
            "period": list(self.period),
        }


def expand(alpha: QuadNum, period_cap: int = 10**6) -> ContinuedFraction:
    """Continued fraction of a quadratic irrational, minimal (r, s)."""
    if alpha.degenerate:
        raise NonQuadraticError("rational input has a finite expansion; need b != 0")
    den = lcm(alpha.a.denominator, alpha.b.denominator)
    p = alpha.a.numerator * (den // alpha.a.denominator)
    u = alpha.b.numerator * (den // alpha.b.denominator)
    radicand = u * u * alpha.d
    if u > 0:
        P, Q = p, den
    else:
        P, Q = -p, -den
    if (radicand - P * P) % Q:
        P *= abs(Q)
        radicand *= Q * Q
        Q *= abs(Q)
    root_floor = isqrt(radicand)

    def floor_state(P: int, Q: int) -> int:
        if Q > 0:
            return (P + root_floor) // Q
        return -((P + root_floor) // -Q) - 1

    states: dict[tuple[int, int], int] = {}
    quots: list[int] = []
    while True:
        key = (P, Q)
        if key in states:
            f = states[key]
            break
        if len(states) > period_cap:
            raise PeriodCapError(f"no period within {period_cap} states")
        states[key] = len(quots)
        a = floor_state(P, Q)
        quots.append(a)
        P = a * Q - P
        Q = (radicand - P * P) // Q
    s = len(quots) - f
    if f == 0:
        # purely periodic: rotate so a0 still heads the preperiodic block
        return ContinuedFraction(alpha, quots[0], (), tuple(quots[1:] + quots[:1]))
    return ContinuedFraction(alpha, quots[0], tuple(quots[1:f]), tuple(quots[f:]))


@dataclass(frozen=True)
class ConvergentTable:
    """Denominators q_0 .. q_n of the convergents of a continued fraction."""

    cf: ContinuedFraction
    qs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.qs)

    def __getitem__(self, i: int) -> int:
        return self.qs[i]

    def to_json(self) -> dict:
        return {"q": [str(q) for q in self.qs]}


def convergents(cf: ContinuedFraction, n: int) -> ConvergentTable:
    """Table of q_0 .. q_n via q_{i+1} = a_{i+1} q_i + q_{i-1}, q_0 = 1."""
    if n < 0:
        raise InputError("n must be >= 0")
    return ConvergentTable(cf, tuple(_q_list(cf, n)))


def _q_list(cf: ContinuedFraction, n: int) -> list[int]:
    qs = [1]
    prev = 0  # q_{-1}
    for i in range(1, n + 1):
        qs.append(cf.quotient(i) * qs[-1] + prev)
        prev = qs[-2]
    return qs


def period_matrix_trace(cf: ContinuedFraction) -> int:
    """Trace of the ordered product of the period's [[a,1],[1,0]] matrices."""
    m00, m01, m10, m11 = 1, 0, 0, 1
    for a in cf.period:
        m00, m01, m10, m11 = m00 * a + m01, m00, m10 * a + m11, m10
    return m00 + m11


@dataclass(frozen=True)
class BinetData:
    """Closed-form growth data of the convergent denominators.

    ``c3``/``c4`` are certified enclosures of the sandwich constants
    max_j(c1 + |c2|) and min_j(c1)/2; ``N0`` is the first index from which
    the lower half of the sandwich is guaranteed.
    """

    cf: ContinuedFraction
    t_alpha: int
    s: int
    r: int
    disc: int
    delta: int
    theta1: QuadNum
    theta2: QuadNum
    c1: tuple[QuadNum, ...]
    c2: tuple[QuadNum, ...]
    c3: DyadicInterval
    c4: DyadicInterval
    N0: int
    q_prefix: tuple[int, ...] = field(repr=False)
    precision_bits: int = DEFAULT_PRECISION

    def subseq_term(self, j: int, i: int) -> int:
        """q_{j+r+s*i} from the stored prefix (i <= 1)."""
        return self.q_prefix[j + self.r + self.s * i]

    def to_json(self) -> dict:
        return {
            "t_alpha": str(self.t_alpha),
            "s": self.s,
            "r": self.r,
            "disc": str(self.disc),
            "delta": str(self.delta),
            "theta1": self.theta1.to_json(),
            "theta2": self.theta2.to_json(),
            "c1": [c.to_json() for c in self.c1],
            "c2": [c.to_json() for c in self.c2],
            "c3": self.c3.to_json(),
            "c4": self.c4.to_json(),
            "N0": self.N0,
        }


def binet_data(
    cf: ContinuedFraction,
    precision_bits: int = DEFAULT_PRECISION,
    n0_cap: int = 10**6,
) -> BinetData:
    r, s = cf.r, cf.s
    qs = _q_list(cf, r + 2 * s)
    t = period_matrix_trace(cf)
    unit = -1 if s % 2 else 1
    disc = t * t - 4 * unit
    theta1 = make_quadnum(Fraction(t, 2), Fraction(1, 2), disc)
    if theta1.degenerate:
        raise InputError(f"degenerate growth root: t={t}, s={s}")
    theta2 = theta1.conjugate()
    dtheta = theta1 - theta2
    c1, c2 = [], []
    for j in range(s):
        q0, q1 = qs[j + r], qs[j + r + s]
        c1.append((q1 - theta2 * q0) / dtheta)
        c2.append((q1 - theta1 * q0) / dtheta)
    c3_val = None
    c4_val = None
    for u, v in zip(c1, c2):
        cand = u + abs(v)
        if c3_val is None or cand > c3_val:
            c3_val = cand
        if c4_val is None or u < c4_val:
            c4_val = u
    c3 = c3_val.enclose(precision_bits)
    c4 = (c4_val / 2).enclose(precision_bits)
    n0 = _least_sandwich_index(theta1, theta2, c1, c2, n0_cap)
    return BinetData(
        cf=cf,
        t_alpha=t,
        s=s,
        r=r,
        disc=disc,
        delta=theta1.d,
        theta1=theta1,
        theta2=theta2,
        c1=tuple(c1),
        c2=tuple(c2),
        c3=c3,
        c4=c4,
        N0=n0,
        q_prefix=tuple(qs),
        precision_bits=precision_bits,
    )


def _least_sandwich_index(theta1, theta2, c1, c2, cap: int) -> int:
    """Smallest i with 2|c2[j]| |theta2|**i < c1[j] theta1**i for every j."""
    abs_t2 = abs(theta2)
    pow1 = theta1**0
    pow2 = abs_t2**0
    targets = [(2 * abs(v), u) for u, v in zip(c1, c2)]
    i = 0
    while True:
        if all((u * pow1 - w * pow2).sign() > 0 for w, u in targets):
            return i
        i += 1
        if i > cap:
            raise PrecisionError(f"sandwich index not found within {cap} steps")
        pow1 = pow1 * theta1
        pow2 = pow2 * abs_t2


def verify_shifted_recurrence(cf: ContinuedFraction, i_max: int, i_min: int | None = None) -> bool:
    """Check q_{i+2s} == t q_{i+s} - (-1)^s q_i exactly for r <= i <= i_max."""
    r, s = cf.r, cf.s
    lo = r if i_min is None else max(i_min, r)
    if i_max < lo:
        return True
    t = period_matrix_trace(cf)
    unit = -1 if s % 2 else 1
    qs = _q_list(cf, i_max + 2 * s)
    return all(qs[i + 2 * s] == t * qs[i + s] - unit * qs[i] for i in range(lo, i_max + 1))
