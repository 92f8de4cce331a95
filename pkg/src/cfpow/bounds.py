"""Explicit constants and the three effective bound pipelines.

The pipelines share one skeleton: certify a lower bound for a linear form
in logarithms, play it against the geometric decay of the conjugate terms
of the denominator subsequence, and transfer the resulting "x is below a
power of log x" inequality into a closed bound.  The first pipeline
treats a known power base.  The other two eliminate an unknown base
through its digit expansion (a sum of Fibonacci numbers, or a sum of
base-b digit terms) and walk a double-indexed grid of linear forms to
decouple the base-side subscript from the denominator-side subscript.

Every constant is a certified interval enclosure assembled from the
Matveev evaluators and the exact height machinery; reported bounds are
upper endpoints.  Degenerate situations (a vanishing linear form, a
subscript below the sandwich threshold, a single repeated denominator)
contribute separate branches, and each report records which branch won.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cfrac import BinetData
from .errors import InapplicableError, InputError, PrecisionError, WalkPathError
from .heights import height_quadratic, log_plus
from .linforms import LinFormInstance, clamp_a, matveev_gamma_bound, matveev_lambda_bound, pw_transfer
from .numeration import fibonacci
from .quadfield import DyadicInterval, QuadNum, dyadic_decimal_str, make_quadnum

_CASES = ("main", "gamma_equals_one", "k_equals_one", "below_N0")


def _pos(x: DyadicInterval, what: str) -> DyadicInterval:
    if x.lo <= 0:
        raise PrecisionError(f"enclosure of {what} touches zero; raise the precision")
    return x


def _exp2(bits: int) -> DyadicInterval:
    return DyadicInterval.from_int(2, max(bits, 64)).exp()


@dataclass(frozen=True)
class ConstantLedger:
    """Named interval constants shared by the bound pipelines.

    ``c5``/``c6`` convert the leading subscript into bounds on log(y^a)
    and on the exponent a; ``c7``/``c8`` (Fibonacci) and ``c7p``/``c8p``
    (base-b) tie the digit-side subscript to the denominator-side one;
    ``c9``/``c10`` drive the known-base pipeline, ``c11``/``C12`` the two
    walk pipelines.  ``tail_coeff`` bounds |Gamma - 1| by a multiple of
    theta1^-(gap) and feeds the small-gap absorbers.
    """

    c5: DyadicInterval
    c6: DyadicInterval
    c9: DyadicInterval
    c10: DyadicInterval
    c11: DyadicInterval
    C12: DyadicInterval
    tail_coeff: DyadicInterval
    c7: DyadicInterval | None = None
    c8: DyadicInterval | None = None
    c7p: DyadicInterval | None = None
    c8p: DyadicInterval | None = None
    b: DyadicInterval | None = None

    def __post_init__(self):
        # both floors are what lets the transfer lemma and the walk run at all
        bits = max(self.c10.precision_bits, 64)
        floor = _exp2(bits) / DyadicInterval.from_int(2, bits).log()
        if not self.c10.lo > floor.hi:
            raise InputError("c10 must exceed e^2/log 2")
        log3 = DyadicInterval.from_int(3, bits).log()
        if not (self.C12 * log3).lo >= 1:
            raise InputError("C12 too small: the walk seed u(1) would drop below u(0)")

    def to_json(self) -> dict:
        names = ("c5", "c6", "c7", "c8", "c7p", "c8p", "c9", "c10", "c11", "C12",
                 "tail_coeff", "b")
        out = {}
        for name in names:
            value = getattr(self, name)
            if value is not None:
                out[name] = value.to_json()
        return out


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one pipeline run: certified bounds plus provenance.

    ``case`` names the branch that achieved the maximum.  The two
    applicability flags are properties of the input field checked up
    front; a false ``field_not_Q_sqrt5`` makes the Fibonacci pipeline
    refuse to run, and ``petho_preconditions_ok`` is asserted for the
    single-denominator routing.
    """

    ledger: ConstantLedger
    n1_bound: DyadicInterval
    a_bound: DyadicInterval
    log_ya_bound: DyadicInterval
    case: str
    field_not_Q_sqrt5: bool
    petho_preconditions_ok: bool
    per_k: tuple[tuple[int, DyadicInterval], ...] = ()

    def __post_init__(self):
        if self.case not in _CASES:
            raise InputError(f"unknown report case {self.case!r}")
        if self.case == "main":
            for value in (self.n1_bound, self.a_bound, self.log_ya_bound):
                if not value.lo > 0:
                    raise InputError("main-case bounds must be positive")

    def to_json(self) -> dict:
        return {
            "ledger": self.ledger.to_json(),
            "n1_bound": dyadic_decimal_str(self.n1_bound.hi),
            "a_bound": dyadic_decimal_str(self.a_bound.hi),
            "log_ya_bound": dyadic_decimal_str(self.log_ya_bound.hi),
            "case": self.case,
            "applicability": {
                "field_not_Q_sqrt5": self.field_not_Q_sqrt5,
                "petho_preconditions_ok": self.petho_preconditions_ok,
            },
            "per_k": {str(k): dyadic_decimal_str(v.hi) for k, v in self.per_k},
        }


@dataclass(frozen=True)
class WalkState:
    """Grid-walk snapshot: step index, double counter, bound sequence."""

    j: int
    v: int
    w: int
    u: tuple

    def __post_init__(self):
        if self.v + self.w != self.j + 3:
            raise InputError("walk counter out of sync: v + w must equal j + 3")
        if len(self.u) != self.j + 1:
            raise InputError("walk bound sequence must carry one entry per step")
        if not _walk_value_is_one(self.u[0]):
            raise InputError("walk bound sequence must start at 1")
        for prev, cur in zip(self.u, self.u[1:]):
            if not _walk_value_ge(cur, prev):
                raise InputError("walk bound sequence must be non-decreasing")


def _walk_value_is_one(x) -> bool:
    if isinstance(x, DyadicInterval):
        return x.lo == 1 and x.hi == 1
    return x == 1


def _walk_value_ge(x, y) -> bool:
    if isinstance(x, DyadicInterval):
        return x.lo >= y.lo and x.hi >= y.hi
    return x >= y


def petho_preconditions(bd: BinetData) -> bool:
    """Exact-integer check of the single-denominator routing hypotheses.

    The trace discriminant must not be a perfect square and the squared
    trace must avoid the four smallest signed values; both always hold
    for non-degenerate data, so this is an executable assertion.
    """
    unit = -1 if bd.s % 2 else 1
    disc = bd.t_alpha * bd.t_alpha - 4 * unit
    if disc >= 0 and isqrt(disc) ** 2 == disc:
        return False
    return all(bd.t_alpha * bd.t_alpha != j * unit for j in (1, 2, 3, 4))


def nonvanishing_check(bd: BinetData, variant: str) -> bool:
    """Whether the walk pipeline's linear forms are certified nonzero.

    The Fibonacci variant needs the growth field to differ from the
    golden one; the base-b variant settles vanishing by rationality and
    needs no condition at all.
    """
    if variant == "zeckendorf":
        return bd.delta != 5
    if variant == "radix":
        return True
    raise InputError(f"unknown variant {variant!r}")


def _abs_log(x: DyadicInterval) -> DyadicInterval:
    return abs(x.log())


def _c2_abs_max(bd: BinetData) -> QuadNum:
    return max(abs(c) for c in bd.c2)


def elementary_constants(
    bd: BinetData,
    K: int,
    variant: str = "zeckendorf",
    b: int | None = None,
    ell: int | None = None,
) -> ConstantLedger:
    """Assemble every interval constant one pipeline run needs.

    ``K`` caps the number of denominator summands.  The variant selects
    which digit expansion ties the base to the leading subscript; only
    the base-b variant needs ``b``.  ``ell`` (the digit count cap) never
    enters a constant and is accepted only for uniformity.
    """
    if K < 1:
        raise InputError(f"summand cap must be >= 1, got {K}")
    if variant not in ("zeckendorf", "radix"):
        raise InputError(f"unknown variant {variant!r}")
    if variant == "radix" and (b is None or b < 2):
        raise InputError("the base-b variant needs b >= 2")
    bits = bd.precision_bits
    one = DyadicInterval.from_int(1, bits)
    log2 = DyadicInterval.from_int(2, bits).log()
    log3 = DyadicInterval.from_int(3, bits).log()
    theta1 = _pos(bd.theta1.enclose(bits), "theta1")
    log_t1 = theta1.log()
    c1min = _pos(bd.c4 * 2, "min_j c1")
    c1max = _pos(max(bd.c1).enclose(bits), "max_j c1")
    c2max = _pos(_c2_abs_max(bd).enclose(bits), "max_j |c2|")
    c3 = bd.c3

    c5 = log_plus(c3 * K, bits) + log_t1
    c6 = c5 / log2
    inv_c4 = log_plus(one / _pos(bd.c4, "c4"), bits)

    phi = make_quadnum(Fraction(1, 2), Fraction(1, 2), 5)
    phi_enc = phi.enclose(bits)
    log_phi = phi_enc.log()
    c7 = c8 = c7p = c8p = b_enc = None
    if variant == "zeckendorf":
        phi2 = (phi * phi).enclose(bits)
        c7 = (log_plus(c3 * K * phi2, bits) + log_t1) / log_phi
        c8 = ((log_phi + inv_c4) / log_t1).max(1)
    else:
        b_enc = DyadicInterval.from_int(b, bits)
        log_b = b_enc.log()
        c7p = (log_plus(c3 * K, bits) + log_t1) / log_b
        c8p = ((log_b + inv_c4) / log_t1).max(1)

    # coefficient of theta1^-(gap) in the tail of the subsequence sum; the
    # q_r term absorbs summands that sit below the preperiod
    q_r = bd.q_prefix[bd.r]
    tail_coeff = (c2max + c3 + DyadicInterval.from_int(q_r, bits)) * K / c1min

    # per-gap height envelope of the truncated subsequence sum, and the
    # two-sided log envelope of its value
    h_c1_max = height_quadratic(bd.c1[0], bits).value
    for c in bd.c1[1:]:
        h_c1_max = h_c1_max.max(height_quadratic(c, bits).value)
    h_t1 = height_quadratic(bd.theta1, bits).value
    log_K = DyadicInterval.from_int(K, bits).log()
    hd3unit = h_c1_max + h_t1 + log_K
    l_delta3 = _abs_log(c1min).max(_abs_log(c1max * K))

    # known-base pipeline: degree-2 form in three logarithms; the digit
    # count w <= K folds into the third height slot
    a3_coef = clamp_a((hd3unit * 2).max(l_delta3))
    inst_y = LinFormInstance(
        T=3,
        D=2,
        A=(DyadicInterval.from_int(2, bits), clamp_a(log_t1), a3_coef * K),
        B=one,
    )
    c9 = -matveev_gamma_bound(inst_y)
    eb_y = one + (one + c6.max(1).log()) / log3
    floor = _exp2(bits) / DyadicInterval.from_int(2, max(bits, 64)).log() + Fraction(1, 1024)
    c10 = ((c9 * eb_y + log_plus(tail_coeff * 2, bits) / (log2 * log3)) / log_t1).max(floor)

    # walk pipeline: degree-5 form; per-node factors v, w and the two gap
    # terms stay symbolic, only the uniform coefficient enters c11
    if variant == "zeckendorf":
        h_sqrt5 = height_quadratic(make_quadnum(0, 1, 5), bits).value
        h_phi = height_quadratic(phi, bits).value
        a_slots = (
            clamp_a(h_sqrt5 * 4),
            clamp_a(h_phi * 4),
            clamp_a((hd3unit * 4).max(l_delta3)),
            clamp_a(h_t1 * 4),
            DyadicInterval.from_int(8, bits),
        )
        degree = 4
        eb_walk = (one + log_plus(c8, bits) + log_plus(c6, bits) + log_plus(c7, bits)) / log3 + 2
        kappa_star = tail_coeff * 2 + 12
        mu = theta1.min(phi_enc)
        gap_absorber = DyadicInterval.from_int(6, bits) / log3
    else:
        log_b = b_enc.log()
        a_slots = (
            clamp_a(log_b * 2),
            clamp_a(log_b * 2),
            clamp_a((hd3unit * 2).max(l_delta3)),
            clamp_a(h_t1 * 2),
            clamp_a(log_plus(b_enc, bits) * 10),
        )
        degree = 2
        eb_walk = (one + log_plus(c8p, bits) + log_plus(c6, bits) + log_plus(c7p + 1, bits)) / log3 + 2
        kappa_star = tail_coeff * 2 + 2 * b
        mu = theta1.min(b_enc)
        gap_absorber = DyadicInterval.from_int(2, bits) / log3
    inst_walk = LinFormInstance(T=5, D=degree, A=a_slots, B=one)
    c11 = -matveev_lambda_bound(inst_walk) * eb_walk
    log_mu = _pos(mu, "min growth base").log()
    c12 = ((c11 + (log_plus(c6, bits) + log_plus(kappa_star, bits)) / log3 + 1) / log_mu)
    c12 = c12.max(gap_absorber)
    c12 = c12.max(log_plus(tail_coeff * 2, bits) / (log_t1 * log3))
    c12 = c12.max(_exp2(bits))

    return ConstantLedger(
        c5=c5, c6=c6, c9=c9, c10=c10, c11=c11, C12=c12, tail_coeff=tail_coeff,
        c7=c7, c8=c8, c7p=c7p, c8p=c8p, b=b_enc,
    )


def _degenerate_branch(bd: BinetData, K: int) -> DyadicInterval:
    """Subscript bound when a truncated linear form vanishes exactly.

    Vanishing forces the power to equal a conjugate-side sum, which is
    bounded, so the subscript is capped by an elementary logarithm ratio
    (possibly negative; callers fold it through a max).
    """
    bits = bd.precision_bits
    c2max = _pos(_c2_abs_max(bd).enclose(bits), "max_j |c2|")
    c1min = _pos(bd.c4 * 2, "min_j c1")
    theta1 = _pos(bd.theta1.enclose(bits), "theta1")
    return (c2max * K / c1min).log() / theta1.log()


def _resolve(candidates) -> tuple[DyadicInterval, str]:
    envelope = candidates[0][0]
    for value, _ in candidates[1:]:
        envelope = envelope.max(value)
    for value, label in candidates:
        if value.hi == envelope.hi:
            return envelope, label
    raise AssertionError("max candidate vanished")


def _finish_report(bd, led, candidates, per_k) -> BoundReport:
    n1_bound, case = _resolve(candidates)
    return BoundReport(
        ledger=led,
        n1_bound=n1_bound,
        a_bound=led.c6 * n1_bound,
        log_ya_bound=led.c5 * n1_bound,
        case=case,
        field_not_Q_sqrt5=bd.delta != 5,
        petho_preconditions_ok=petho_preconditions(bd),
        per_k=tuple(per_k),
    )


def theorem_y_bound(bd: BinetData, K: int, y: int) -> BoundReport:
    """Effective subscript bound for a known power base y.

    For each admissible summand count k the linear-form chain yields
    n1 <= (c10 log y)^k (log n1)^k, which the transfer lemma resolves;
    the report takes the maximum over k and over the degenerate
    branches (vanishing form, subscript below the sandwich threshold).
    """
    if y < 2:
        raise InputError(f"power base must be >= 2, got {y}")
    led = elementary_constants(bd, K, "zeckendorf")
    bits = bd.precision_bits
    log_y = DyadicInterval.from_int(y, bits).log()
    candidates = []
    per_k = []
    for k in range(1, K + 1):
        g = (led.c10 * log_y).powi(k)
        bound_k = pw_transfer(0, k, g, bits)
        candidates.append((bound_k, "main"))
        per_k.append((k, bound_k))
    candidates.append((_degenerate_branch(bd, K), "gamma_equals_one"))
    candidates.append((DyadicInterval.from_int(bd.N0, bits), "below_N0"))
    candidates.append((DyadicInterval.from_int(3, bits), "below_N0"))
    return _finish_report(bd, led, candidates, per_k)


def walk_simulate(k: int, ell: int, C12, log_n1, path="worst") -> WalkState:
    """Run the double-indexed grid walk and return its bound sequence.

    The counter starts at (2, 2); each move increments one coordinate,
    capped one past its grid size, and u(j) multiplies the two previous
    bounds by C12 (v_j - 1)(w_j - 1) log n1.  ``path`` is a sequence of
    "down"/"right" moves, or "worst" to maximize the final bound over
    every saturating path.  Exact rational inputs are propagated
    exactly; interval inputs propagate as intervals.
    """
    if k < 2 or ell < 2:
        raise InputError(f"walk needs k >= 2 and ell >= 2, got k={k}, ell={ell}")
    interval_mode = isinstance(C12, DyadicInterval) or isinstance(log_n1, DyadicInterval)
    if interval_mode:
        bits = min(x.precision_bits for x in (C12, log_n1) if isinstance(x, DyadicInterval))
        c = C12 if isinstance(C12, DyadicInterval) else DyadicInterval.from_fraction(C12, bits)
        g = log_n1 if isinstance(log_n1, DyadicInterval) else DyadicInterval.from_fraction(log_n1, bits)
        seed_ok = (c * g).lo >= 1
        u0 = DyadicInterval.from_int(1, bits)
    else:
        c, g = Fraction(C12), Fraction(log_n1)
        seed_ok = c * g >= 1
        u0 = Fraction(1)
    if not seed_ok:
        raise InputError("walk needs C12 * log_n1 >= 1 so the bound sequence is monotone")

    def run(moves):
        v, w, j = 2, 2, 1
        u = [u0, c * g]
        for move in moves:
            if move == "down":
                v += 1
            elif move == "right":
                w += 1
            else:
                raise WalkPathError(f"unknown move {move!r}")
            if v > ell + 1 or w > k + 1:
                raise WalkPathError("move past the grid boundary")
            j += 1
            u.append(c * (v - 1) * (w - 1) * u[-1] * u[-2] * g)
        return WalkState(j=j, v=v, w=w, u=tuple(u))

    if isinstance(path, str):
        if path != "worst":
            raise WalkPathError(f"path must be a move sequence or 'worst', got {path!r}")
        best = None
        # saturating paths interleave ell-1 downs with k-1 rights; ties keep
        # the first (down-first) candidate
        def explore(moves, downs, rights):
            nonlocal best
            if downs == ell - 1 and rights == k - 1:
                state = run(moves)
                if best is None or _walk_value_gt(state.u[-1], best.u[-1]):
                    best = state
                return
            if downs < ell - 1:
                explore(moves + ["down"], downs + 1, rights)
            if rights < k - 1:
                explore(moves + ["right"], downs, rights + 1)

        explore([], 0, 0)
        return best

    moves = list(path)
    if len(moves) > k + ell - 1:
        raise WalkPathError(f"path longer than {k + ell - 1} moves cannot stay on the grid")
    return run(moves)


def _walk_value_gt(x, y) -> bool:
    if isinstance(x, DyadicInterval):
        return (x.hi, x.lo) > (y.hi, y.lo)
    return x > y


def walk_closed_form(k: int, ell: int, C12, log_n1, j: int):
    """Closed-form dominator of u(j): Fibonacci-exponent product.

    Matches the walk recursion's worst case; the two outer factors carry
    exponent F(j+2) - 1 and the grid-size factor carries F(j+1) - 1.
    """
    if j < 0:
        raise InputError(f"step index must be >= 0, got {j}")
    e_outer = fibonacci(j + 2) - 1
    e_grid = fibonacci(j + 1) - 1
    if isinstance(C12, DyadicInterval) or isinstance(log_n1, DyadicInterval):
        bits = min(x.precision_bits for x in (C12, log_n1) if isinstance(x, DyadicInterval))
        c = C12 if isinstance(C12, DyadicInterval) else DyadicInterval.from_fraction(C12, bits)
        g = log_n1 if isinstance(log_n1, DyadicInterval) else DyadicInterval.from_fraction(log_n1, bits)
        grid = DyadicInterval.from_int((ell * k) ** e_grid, bits)
        return c.powi(e_outer) * grid * g.powi(e_outer)
    return Fraction(C12) ** e_outer * (ell * k) ** e_grid * Fraction(log_n1) ** e_outer


def _surplus_coefficient(led: ConstantLedger, k: int, trivial_floor: DyadicInterval,
                         bits: int, log_b: DyadicInterval | None) -> DyadicInterval:
    """Coefficient turning digit-side bounds back into subscript bounds.

    Re-runs the known-base pipeline with log y eliminated against the
    digit-side subscript; the second term absorbs the degenerate
    branches so one inequality covers every case.
    """
    one = DyadicInterval.from_int(1, bits)
    log3 = DyadicInterval.from_int(3, bits).log()
    log_k = DyadicInterval.from_int(k, bits).log()
    if log_b is None:
        body = led.c10 * (2 * k) * (log_k + led.c10.log() + one)
    else:
        body = led.c10 * (2 * k) * log_b * (log_k + led.c10.log() + log_plus(log_b, bits) + one)
    return body.powi(k) + trivial_floor / log3.powi(k)


def _walk_pipeline(bd: BinetData, K: int, ell: int, variant: str, b: int | None) -> BoundReport:
    if ell < 2:
        raise InputError(f"digit count cap must be >= 2, got {ell}")
    led = elementary_constants(bd, K, variant, b=b)
    bits = bd.precision_bits
    log3 = DyadicInterval.from_int(3, bits).log()
    degenerate = _degenerate_branch(bd, K)
    n0_branch = DyadicInterval.from_int(bd.N0, bits)
    floor3 = DyadicInterval.from_int(3, bits)

    if K == 1:
        # a single repeated denominator couples both subscripts circularly;
        # only the degenerate branches are certified here and the case label
        # marks the report as conditional on the single-denominator routing
        candidates = [
            (degenerate, "k_equals_one"),
            (n0_branch, "k_equals_one"),
            (floor3, "k_equals_one"),
        ]
        return _finish_report(bd, led, candidates, [])

    trivial_floor = degenerate.max(n0_branch).max(floor3)
    log_b = None if variant == "zeckendorf" else led.b.log()
    candidates = []
    per_k = []
    for k in range(2, K + 1):
        cstar = fibonacci(k + ell + 1) - 1
        e_grid = fibonacci(k + ell) - 1
        cf_coef = led.C12.powi(cstar) * DyadicInterval.from_int((ell * k) ** e_grid, bits)
        # exit with the denominator-side subscript as the minimum: resolve
        # n1 <= cf_coef (log n1)^cstar directly
        right = pw_transfer(0, cstar, cf_coef, bits)
        # exit with the digit-side subscript as the minimum: substitute it
        # into the surplus inequality, inflating the log exponent
        surplus = _surplus_coefficient(led, k, trivial_floor, bits, log_b)
        if variant == "zeckendorf":
            digit_cap = cf_coef
        else:
            digit_cap = cf_coef * 2  # digit subscript + 1 fits below twice the cap
        g_bottom = surplus * digit_cap.powi(k) * (log_plus(digit_cap, bits) / log3 + cstar).powi(k)
        bottom = pw_transfer(0, k * (cstar + 1), g_bottom, bits)
        candidates.append((right, "main"))
        candidates.append((bottom, "main"))
        per_k.append((k, right.max(bottom)))
    candidates.append((degenerate, "gamma_equals_one"))
    candidates.append((n0_branch, "below_N0"))
    candidates.append((floor3, "below_N0"))
    return _finish_report(bd, led, candidates, per_k)


def theorem_ham_bound(bd: BinetData, K: int, ell: int) -> BoundReport:
    """Effective bound when the base is a sum of at most ell Fibonacci numbers.

    Refuses to run over the golden field, where the linear forms cannot
    be certified nonzero.
    """
    if not nonvanishing_check(bd, "zeckendorf"):
        raise InapplicableError(
            "Fibonacci-expansion pipeline needs the growth field to differ from Q(sqrt(5))"
        )
    return _walk_pipeline(bd, K, ell, "zeckendorf", None)


def theorem_ham2_bound(bd: BinetData, K: int, ell: int, b: int) -> BoundReport:
    """Effective bound when the base has at most ell nonzero base-b digits."""
    return _walk_pipeline(bd, K, ell, "radix", b)
