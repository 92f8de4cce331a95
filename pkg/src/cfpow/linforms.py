"""Lower bounds for linear forms in logarithms and the log-to-linear bridges.

``matveev_gamma_bound`` and ``matveev_lambda_bound`` evaluate the two
classical lower-bound formulas as certified intervals; the hypotheses
(non-vanishing, height floors) are the caller's responsibility.

``pw_transfer`` turns an inequality x <= a + g (log x)^c into an explicit
bound on x, valid when g > (e^2/c)^c; ``pw_largest_root`` encloses the
actual largest fixed point so the transfer bound can be tested against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import G2LDomainError, InputError, PrecisionError, PWPreconditionError
from .quadfield import DEFAULT_PRECISION, DyadicInterval, _round_up

__all__ = [
    "LinFormInstance",
    "matveev_gamma_bound",
    "matveev_lambda_bound",
    "pw_transfer",
    "pw_largest_root",
    "log_from_gamma",
    "escalate",
    "a_majorant",
    "clamp_a",
]

_A_FLOOR = Fraction(4, 25)  # 0.16


def a_majorant(x, precision_bits: int = DEFAULT_PRECISION) -> DyadicInterval:
    """Point interval at the dyadic round-up of max(x, 0.16).

    0.16 itself is not dyadic, so majorants touching the floor must round
    up; overshooting a majorant is sound, undershooting is not.
    """
    v = _round_up(max(Fraction(x), _A_FLOOR), precision_bits)
    return DyadicInterval(v, v, precision_bits)


def clamp_a(x: DyadicInterval) -> DyadicInterval:
    """Raise an interval majorant onto the 0.16 floor (endpoints only go up)."""
    floor = _round_up(_A_FLOOR, x.precision_bits)
    if x.lo >= floor:
        return x
    return DyadicInterval(max(x.lo, floor), max(x.hi, floor), x.precision_bits)


def escalate(builder, precision_bits: int = DEFAULT_PRECISION, rounds: int = 4, what: str = "comparison"):
    """Run builder(bits) until it returns a non-None result, doubling bits.

    builder returns None to request more precision.  Exhausting the rounds
    raises "precision-exhausted".
    """
    bits = precision_bits
    for _ in range(rounds + 1):
        result = builder(bits)
        if result is not None:
            return result
        bits *= 2
    raise PrecisionError(f"{what} still indeterminate at {bits // 2} bits")


def _lift(x, bits: int) -> DyadicInterval:
    if isinstance(x, DyadicInterval):
        return DyadicInterval(x.lo, x.hi, bits)
    return DyadicInterval.from_fraction(Fraction(x), bits)


@dataclass(frozen=True)
class LinFormInstance:
    """Shape of one linear form in T logarithms over a degree-D field.

    A holds per-term height/log majorants, each at least 0.16; B dominates
    the absolute values of the integer coefficients, so B >= 1.
    """

    T: int
    D: int
    A: tuple[DyadicInterval, ...]
    B: DyadicInterval

    def __post_init__(self):
        if self.T < 1 or self.D < 1:
            raise InputError("T and D must be >= 1")
        if len(self.A) != self.T:
            raise InputError(f"need exactly T={self.T} majorants, got {len(self.A)}")
        for j, aj in enumerate(self.A):
            if aj.lo < _A_FLOOR:
                raise InputError(f"A[{j}] must be >= 0.16, got lower endpoint {float(aj.lo)}")
        if self.B.lo < 1:
            raise InputError("B must be >= 1")


def _matveev_product(inst: LinFormInstance, scale: Fraction, power30: int, t1_exponent_doubled: int) -> DyadicInterval:
    """scale * 30**power30 * (T+1)**(t1_exponent_doubled/2) * D^2 log(eD) * prod(A) * log(eB)."""
    T, D = inst.T, inst.D
    bits = min([inst.B.precision_bits] + [a.precision_bits for a in inst.A])
    acc = DyadicInterval.from_int(30**power30 * D * D, bits) * scale
    acc = acc * DyadicInterval.from_int((T + 1) ** t1_exponent_doubled, bits).sqrt()
    if D > 1:
        acc = acc * (DyadicInterval.from_int(D, bits).log() + 1)
    for aj in inst.A:
        acc = acc * aj
    acc = acc * (inst.B.log() + 1)
    return acc


def matveev_gamma_bound(inst: LinFormInstance) -> DyadicInterval:
    """Certified lower bound for log|Gamma - 1|, Gamma the monomial form."""
    return -_matveev_product(inst, Fraction(7, 5), inst.T + 3, 9)


def matveev_lambda_bound(inst: LinFormInstance) -> DyadicInterval:
    """Certified lower bound for log|Lambda|, Lambda the logarithmic form."""
    return -_matveev_product(inst, Fraction(2), inst.T + 4, 12)


def _check_pw_args(a, c, g):
    if isinstance(a, DyadicInterval):
        if a.lo < 0:
            raise InputError("a must be >= 0")
    elif Fraction(a) < 0:
        raise InputError("a must be >= 0")
    c_frac = None
    if not isinstance(c, DyadicInterval):
        c_frac = Fraction(c)
        if c_frac < 1:
            raise InputError("c must be >= 1")
    elif c.lo < 1:
        raise InputError("c must be >= 1")
    return c_frac


def _pw_precondition_status(c, g, bits: int):
    """1 if g > (e^2/c)^c holds, -1 if it fails, None if undecided."""
    g_i = _lift(g, bits)
    if g_i.lo <= 0:
        return -1
    c_frac = None if isinstance(c, DyadicInterval) else Fraction(c)
    if c_frac is not None and c_frac.denominator == 1:
        n = c_frac.numerator
        lhs = g_i * n**n
        rhs = DyadicInterval.from_int(2 * n, bits).exp()
    else:
        c_i = _lift(c, bits)
        lhs = g_i.log()
        rhs = c_i * (2 - c_i.log())
    cmp = lhs.compare(rhs)
    if cmp == 1:
        return 1
    if cmp == -1 or cmp == 0:
        return -1
    return None


def _require_pw_precondition(c, g, precision_bits: int):
    bits = precision_bits
    for _ in range(5):
        status = _pw_precondition_status(c, g, bits)
        if status == 1:
            return
        if status == -1:
            raise PWPreconditionError("need g > (e^2/c)^c")
        bits *= 2
    raise PWPreconditionError(f"g > (e^2/c)^c undecided at {bits // 2} bits")


def _root_nonneg(x: DyadicInterval, n: int) -> DyadicInterval:
    if n == 1:
        return x
    return x.root(n)


def _pow_pos(x: DyadicInterval, e: DyadicInterval) -> DyadicInterval:
    """x**e for x with x.lo >= 0 and e.lo > 0, via exp(e log x)."""
    if x.hi == 0:
        return DyadicInterval.from_int(0, x.precision_bits)
    if x.lo == 0:
        top = (DyadicInterval(x.hi, x.hi, x.precision_bits).log() * e).exp()
        return DyadicInterval(Fraction(0), top.hi, x.precision_bits)
    return (x.log() * e).exp()


def pw_transfer(a, c, g, precision_bits: int = DEFAULT_PRECISION) -> DyadicInterval:
    """Bound 2^c (a^{1/c} + g^{1/c} log(c^c g))^c on solutions of x = a + g(log x)^c."""
    c_frac = _check_pw_args(a, c, g)
    _require_pw_precondition(c, g, precision_bits)
    bits = precision_bits
    a_i, g_i = _lift(a, bits), _lift(g, bits)
    if c_frac is not None and c_frac.denominator == 1:
        n = c_frac.numerator
        if a_i.hi == 0:
            term_a = DyadicInterval.from_int(0, bits)
        elif a_i.lo == 0:
            up = _root_nonneg(DyadicInterval(a_i.hi, a_i.hi, bits), n)
            term_a = DyadicInterval(Fraction(0), up.hi, bits)
        else:
            term_a = _root_nonneg(a_i, n)
        inner = term_a + _root_nonneg(g_i, n) * (g_i * n**n).log()
        return inner.powi(n) * 2**n
    c_i = _lift(c, bits)
    inv_c = 1 / c_i
    log_g = g_i.log()
    inner = _pow_pos(a_i, inv_c) + _pow_pos(g_i, inv_c) * (c_i * c_i.log() + log_g)
    two_log = DyadicInterval.from_int(2, bits).log()
    return (c_i * (two_log + inner.log())).exp()


def _pw_f_sign(x: Fraction, a, c_int: int, g, bits: int):
    """Certified sign of f(x) = x - a - g (log x)^c at a dyadic point, or None."""
    xi = DyadicInterval(x, x, bits)
    val = xi - _lift(a, bits) - _lift(g, bits) * xi.log().powi(c_int)
    if val.lo > 0:
        return 1
    if val.hi < 0:
        return -1
    return None


def pw_largest_root(a, c, g, precision_bits: int = DEFAULT_PRECISION, max_iter: int = 500) -> DyadicInterval:
    """Enclose the largest solution of x = a + g (log x)^c by bisection.

    The bracket starts at the transfer bound and walks down by halving until
    the sign certifies negative; past the largest root the defect is
    positive, so the first negative window hit from above brackets it.
    """
    c_frac = _check_pw_args(a, c, g)
    if c_frac is None or c_frac.denominator != 1:
        raise InputError("root enclosure expects an integer exponent c")
    n = c_frac.numerator
    bound = pw_transfer(a, c, g, precision_bits)
    bits = precision_bits

    def certified_sign(x: Fraction):
        b = bits
        for _ in range(5):
            s = _pw_f_sign(x, a, n, g, b)
            if s is not None:
                return s
            b *= 2
        return None

    hi_pt = bound.hi
    if certified_sign(hi_pt) != 1:
        raise PrecisionError("transfer bound not certified above the root")
    lo_pt = hi_pt / 2
    steps = 0
    while certified_sign(lo_pt) != -1:
        lo_pt /= 2
        steps += 1
        if lo_pt <= 1 or steps > 200:
            raise PrecisionError("no negative window found below the bound")
    tol = Fraction(1, 2 ** min(48, precision_bits // 2))
    for _ in range(max_iter):
        if hi_pt - lo_pt <= tol * max(Fraction(1), lo_pt):
            return DyadicInterval(lo_pt, hi_pt, precision_bits)
        mid = (lo_pt + hi_pt) / 2
        s = certified_sign(mid)
        if s is None:
            # f vanishes at mid within evaluation width; the bracket is sound
            return DyadicInterval(lo_pt, hi_pt, precision_bits)
        if s == 1:
            hi_pt = mid
        else:
            lo_pt = mid
    raise PrecisionError(f"bisection did not converge within {max_iter} iterations")


def log_from_gamma(gamma_minus_1_abs: DyadicInterval) -> DyadicInterval:
    """Upper bound 2|x - 1| for |log x|, valid while |x - 1| <= 1/2."""
    if gamma_minus_1_abs.lo < 0:
        raise InputError("expected an absolute value, lower endpoint is negative")
    if gamma_minus_1_abs.hi > Fraction(1, 2):
        raise G2LDomainError("|x - 1| exceeds 1/2; use the large-deviation branch")
    return gamma_minus_1_abs * 2
