"""Absolute logarithmic heights of rationals and quadratic numbers.

Heights come back as ``HeightBound`` values: a certified interval plus a
`kind` flag saying whether the interval encloses the height itself
("exact") or only an upper bound for it ("bound").  Downstream assembly
must consume ``.value.hi``; the lower endpoint is diagnostic only.

The degree-2 height runs off the primitive integer minimal polynomial:
h(x) = (1/2)(log d0 + sum of log|root| over roots outside the unit circle),
with the outside-the-circle test done exactly in the quadratic field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import InputError
from .quadfield import DEFAULT_PRECISION, DyadicInterval, QuadNum

__all__ = [
    "HeightBound",
    "Delta3Height",
    "Delta5Height",
    "log_plus",
    "height_rational",
    "height_quadratic",
    "height_combine",
    "height_power",
    "height_poly_bound",
    "delta3_height_bound",
    "delta5_height_bound",
]


@dataclass(frozen=True)
class HeightBound:
    value: DyadicInterval
    kind: str  # "exact" or "bound"

    def __post_init__(self):
        if self.kind not in ("exact", "bound"):
            raise InputError(f"bad kind {self.kind!r}")
        if self.value.lo < 0:
            object.__setattr__(
                self,
                "value",
                DyadicInterval(Fraction(0), max(self.value.hi, Fraction(0)), self.value.precision_bits),
            )

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "kind": self.kind}


def _zero(bits: int) -> DyadicInterval:
    return DyadicInterval.from_int(0, bits)


def _log_int(n: int, bits: int) -> DyadicInterval:
    if n < 1:
        raise InputError("log of a non-positive integer")
    if n == 1:
        return _zero(bits)
    return DyadicInterval.from_int(n, bits).log()


def log_plus(x, precision_bits: int = DEFAULT_PRECISION) -> DyadicInterval:
    """log max{x, 3} as a certified interval; x an int, Fraction, or interval."""
    if isinstance(x, DyadicInterval):
        return x.max(3).log()
    return DyadicInterval.from_fraction(max(Fraction(x), 3), precision_bits).log()


def height_rational(x, precision_bits: int = DEFAULT_PRECISION) -> HeightBound:
    """h(p/q) = log max(|p|, q), exact."""
    x = Fraction(x)
    m = max(abs(x.numerator), x.denominator)
    return HeightBound(_log_int(m, precision_bits), "exact")


def _minimal_poly(x: QuadNum) -> tuple[int, int, int]:
    """Primitive (d0, d1, d2) with d0 > 0 and d0 x^2 + d1 x + d2 = 0."""
    trace = 2 * x.a
    norm = x.a * x.a - x.b * x.b * x.d
    den = lcm(trace.denominator, norm.denominator)
    d0, d1, d2 = den, -(trace * den).numerator, (norm * den).numerator
    g = gcd(d0, gcd(d1, d2))
    return d0 // g, d1 // g, d2 // g


def height_quadratic(x: QuadNum, precision_bits: int = DEFAULT_PRECISION) -> HeightBound:
    if x.degenerate:
        raise InputError("degenerate input: use height_rational")
    d0, _, _ = _minimal_poly(x)
    outside = QuadNum(Fraction(1), Fraction(0), x.d)
    for root in (x, x.conjugate()):
        mag = abs(root)
        # |root| = 1 would force a rational root, so the sign test is safe
        if (mag - 1).sign() > 0:
            outside = outside * mag
    total = _log_int(d0, precision_bits)
    if not (outside.degenerate and outside.a == 1):
        total = total + outside.enclose(precision_bits).log()
    return HeightBound(total * Fraction(1, 2), "exact")


def height_combine(h1: HeightBound, h2: HeightBound, op: str) -> HeightBound:
    """h(x*y) and h(x/y) share the same upper bound h(x) + h(y)."""
    if op not in ("product", "quotient"):
        raise InputError(f"bad op {op!r}")
    return HeightBound(h1.value + h2.value, "bound")


def height_power(h: HeightBound, k: int) -> HeightBound:
    """h(x**k) = |k| h(x), an equality."""
    return HeightBound(h.value * abs(k), h.kind)


def height_poly_bound(degrees, L: int, h_list, precision_bits: int = DEFAULT_PRECISION) -> HeightBound:
    """Evaluation bound sum(deg_i * h_i) + log L for an integer polynomial."""
    if len(degrees) != len(h_list):
        raise InputError("degrees and heights must align")
    if L < 1:
        raise InputError("coefficient sum L must be >= 1")
    total = _log_int(L, precision_bits)
    for deg, h in zip(degrees, h_list):
        if deg < 0:
            raise InputError("negative degree")
        if deg:
            total = total + h.value * deg
    return HeightBound(total, "bound")


@dataclass(frozen=True)
class Delta3Height:
    """Height bound for a combination sum(d_i c1 theta1**(n_i - n_1)).

    ``tight`` is the per-instance bound; ``uniform`` is the linear envelope
    unit_coefficient * w * max{n_1 - n_w, 1} that dominates it.
    """

    tight: HeightBound
    uniform: HeightBound
    unit_coefficient: DyadicInterval


def delta3_height_bound(w: int, d, gaps, bd, precision_bits: int = DEFAULT_PRECISION) -> Delta3Height:
    """d and gaps list the multiplicities d_i and differences n_1 - n_i, i = 1..w."""
    if w < 1:
        raise InputError("w must be >= 1")
    if len(d) < w or len(gaps) < w:
        raise InputError("need w multiplicities and w gaps")
    if gaps[0] != 0:
        raise InputError("gaps[0] is n_1 - n_1 = 0")
    if any(g < 0 for g in gaps[:w]) or any(x < 1 for x in d[:w]):
        raise InputError("gaps must be >= 0 and multiplicities >= 1")
    h_c1_max = None
    for c in bd.c1:
        h = height_quadratic(c, precision_bits).value
        h_c1_max = h if h_c1_max is None else h_c1_max.max(h)
    h_theta = height_quadratic(bd.theta1, precision_bits).value
    gap_w = gaps[w - 1]
    d_sum = sum(d[:w])
    tight = h_c1_max * w + h_theta * gap_w + _log_int(d_sum, precision_bits)
    unit = h_c1_max + h_theta + _log_int(d_sum, precision_bits)
    uniform = unit * (w * max(gap_w, 1))
    return Delta3Height(HeightBound(tight, "bound"), HeightBound(uniform, "bound"), unit)


@dataclass(frozen=True)
class Delta5Height:
    """Height bound for the small-index tail sum of a numeration expansion."""

    final: HeightBound
    intermediate: HeightBound


def delta5_height_bound(
    v: int,
    gaps,
    variant: str = "zeckendorf",
    b: int | None = None,
    digits=None,
    precision_bits: int = DEFAULT_PRECISION,
) -> Delta5Height:
    """gaps lists m_1 - m_i for i = 1..v; the tail is exactly 1 when v = 1."""
    if v < 1:
        raise InputError("v must be >= 1")
    if len(gaps) < v or gaps[0] != 0 or any(g < 0 for g in gaps[:v]):
        raise InputError("need v gaps starting at 0")
    bits = precision_bits
    if v == 1:
        zero = HeightBound(_zero(bits), "exact")
        return Delta5Height(zero, zero)
    gap_v = gaps[v - 1]
    if gap_v < 1:
        raise InputError("positions must be strictly decreasing for v >= 2")
    if variant == "zeckendorf":
        phi = QuadNum(Fraction(1, 2), Fraction(1, 2), 5)
        inter = height_quadratic(phi, bits).value * gap_v + _log_int(v, bits)
        final = DyadicInterval.from_int(2 * v * gap_v, bits)
    elif variant == "radix":
        if b is None or b < 2:
            raise InputError("radix variant needs a base b >= 2")
        if digits is None:
            digit_sum = v * (b - 1)
        else:
            if len(digits) < v or any(not 0 < dd < b for dd in digits[:v]):
                raise InputError("digits must satisfy 0 < D_i < b")
            digit_sum = sum(digits[:v])
        inter = _log_int(b, bits) * gap_v + _log_int(digit_sum, bits) * 2
        final = log_plus(b, bits) * (5 * gap_v)
    else:
        raise InputError(f"bad variant {variant!r}")
    assert inter.lo <= final.hi, "intermediate must be dominated by the final bound"
    return Delta5Height(HeightBound(final, "bound"), HeightBound(inter, "bound"))
