"""Uniform-convergence bound formulas and a finite shattering checker.

Evaluators for the loss-class envelope, the VC-based covering-number
bound, the uniform-deviation bound it plugs into, and the exponential
series term used by consistency arguments. Every product of large powers
and exponentials is computed in natural-log space first; plain values come
from a final exponentiation that returns +inf only when even the log-space
value overflows.

All functions are deterministic and pure: identical inputs produce
bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BoundInputError
from .losses import LossKind, loss

MAX_MODELS = 4096
MAX_PROBES = 8

_LOG_2E = math.log(2.0) + 1.0
_LOG_3E = math.log(3.0) + 1.0
_LOG_16E = math.log(16.0) + 1.0
_LOG_24E = math.log(24.0) + 1.0


def _exp_or_inf(log_value: float) -> float:
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class BoundInputs:
    """Parameters of the bound formulas.

    b_y bounds |y| from above (absolute/squared side); lam bounds it from
    below (percentage side); each may be omitted when the loss at hand
    does not use it. The covering bound additionally requires
    epsilon < envelope/4, which is checked at evaluation time because the
    envelope depends on the loss.
    """

    n: int = 1
    epsilon: float = 0.1
    b_g: float = 1.0
    b_y: float | None = None
    lam: float | None = None
    vc: int = 2
    p: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise BoundInputError(f"sample size must be >= 1, got {self.n}")
        if not self.epsilon > 0.0:
            raise BoundInputError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.b_g > 0.0:
            raise BoundInputError(f"model bound b_g must be > 0, got {self.b_g}")
        if self.b_y is not None and not self.b_y > 0.0:
            raise BoundInputError(f"target upper bound b_y must be > 0, got {self.b_y}")
        if self.lam is not None and not self.lam > 0.0:
            raise BoundInputError(f"target lower bound lam must be > 0, got {self.lam}")
        if self.vc < 2:
            raise BoundInputError(f"vc must be >= 2, got {self.vc}")
        if self.p < 1:
            raise BoundInputError(f"norm order p must be >= 1, got {self.p}")


def envelope_bound(
    kind: LossKind, b_g: float, b_y: float | None = None, lam: float | None = None
) -> float:
    """Uniform upper bound on the loss class.

    MAE: b_g + b_y. MAPE: 1 + b_g/lam. MSE: (b_g + b_y)**2, the squared
    range consistent with the absolute case.
    """
    if not b_g > 0.0:
        raise BoundInputError(f"model bound b_g must be > 0, got {b_g}")
    if kind is LossKind.MAPE:
        if lam is None or not lam > 0.0:
            raise BoundInputError("MAPE envelope needs a target lower bound lam > 0")
        return 1.0 + b_g / lam
    if b_y is None or not b_y > 0.0:
        raise BoundInputError(f"{kind.value.upper()} envelope needs a target upper bound b_y > 0")
    if kind is LossKind.MAE:
        return b_g + b_y
    return (b_g + b_y) ** 2


def _envelope(inputs: BoundInputs, kind: LossKind) -> float:
    return envelope_bound(kind, inputs.b_g, inputs.b_y, inputs.lam)


def log_vc_covering_bound(inputs: BoundInputs, kind: LossKind) -> float:
    """Natural log of 3 * ((2e B^p / eps^p) * ln(3e B^p / eps^p))^vc.

    Requires 0 < eps < B/4, with B the loss-class envelope.
    """
    b = _envelope(inputs, kind)
    eps = inputs.epsilon
    if not eps < b / 4.0:
        raise BoundInputError(
            f"covering bound requires epsilon < envelope/4 = {b / 4.0:.6g}, got {eps:.6g}"
        )
    t = inputs.p * math.log(b / eps)  # p * ln(B/eps) > p ln 4 > 0
    log_inner = (_LOG_2E + t) + math.log(_LOG_3E + t)
    return math.log(3.0) + inputs.vc * log_inner


def vc_covering_bound(inputs: BoundInputs, kind: LossKind) -> float:
    """Covering-number bound as a plain value; +inf on overflow."""
    return _exp_or_inf(log_vc_covering_bound(inputs, kind))


def log_ulln_bound(inputs: BoundInputs, kind: LossKind) -> float:
    """Natural log of 8 * covering(eps/8) * exp(-n eps^2 / (128 B^2)).

    The covering expectation is replaced by its uniform VC bound, the only
    data-free computable form.
    """
    b = _envelope(inputs, kind)
    eighth = BoundInputs(
        n=inputs.n,
        epsilon=inputs.epsilon / 8.0,
        b_g=inputs.b_g,
        b_y=inputs.b_y,
        lam=inputs.lam,
        vc=inputs.vc,
        p=inputs.p,
    )
    log_cov = log_vc_covering_bound(eighth, kind)
    return math.log(8.0) + log_cov - inputs.n * inputs.epsilon**2 / (128.0 * b * b)


def ulln_bound(inputs: BoundInputs, kind: LossKind) -> float:
    """Uniform-deviation probability bound as a plain value; +inf on overflow."""
    return _exp_or_inf(log_ulln_bound(inputs, kind))


def log_k_term(n: float, epsilon: float, v_n: float, b_gn: float, lam: float) -> float:
    """Natural log of the exponential-bounding series term

        24 * ((16e B/eps) * ln(24e B/eps))^v * exp(-n eps^2 / (128 B^2))

    with B = 1 + b_gn/lam. Accepts real n >= 1 so rate functions can be
    analyzed on log-spaced grids.
    """
    if not (n >= 1 and epsilon > 0.0 and v_n > 0.0 and b_gn > 0.0 and lam > 0.0):
        raise BoundInputError("k-term inputs must be positive (and n >= 1)")
    b = 1.0 + b_gn / lam
    log_ratio = math.log(b / epsilon)
    inner = _LOG_24E + log_ratio
    if inner <= 0.0:
        raise BoundInputError(
            f"k-term log factor undefined: 24e*B/epsilon = {math.exp(inner):.6g} <= 1"
        )
    poly = v_n * ((_LOG_16E + log_ratio) + math.log(inner))
    return math.log(24.0) + poly - n * epsilon**2 / (128.0 * b * b)


def k_term(n: float, epsilon: float, v_n: float, b_gn: float, lam: float) -> float:
    """Series term as a plain value; +inf when the log-space value overflows."""
    return _exp_or_inf(log_k_term(n, epsilon, v_n, b_gn, lam))


@dataclass(frozen=True)
class SeriesTailReport:
    """Log-space summability certificate for the k-term series.

    log_terms holds ln k(n) on the grid. When summable is True, the tail
    sum over every integer n > stabilization_n is provably at most
    tail_tol (log_tail_at_stabilization is a bound on its log), so the
    series' partial sums move by less than tail_tol beyond that index.
    The certificate assumes per-decade decay does not slow past the grid
    end, which holds for exponential-minus-polynomial tails like this one.
    """

    ns: tuple
    log_terms: tuple
    peak_n: float
    decreasing_after_peak: bool
    stabilization_n: float | None
    log_tail_at_stabilization: float | None
    tail_tol: float
    summable: bool


def k_series_tail_report(
    v_fn,
    bg_fn,
    lam: float,
    epsilon: float,
    n_max: float = 1e30,
    points_per_decade: int = 16,
    tail_tol: float = 1e-12,
) -> SeriesTailReport:
    """Certify numerical summability of n -> k_term(n, eps, v_fn(n), bg_fn(n), lam).

    Evaluates ln k on a log-spaced grid from 1 to n_max, locates the peak,
    checks monotone decay beyond it, and accumulates rigorous block bounds
    (block width times the block's leading term) from the right, closing
    the tail past n_max with a geometric bound driven by the last observed
    per-decade decrement. The terms themselves can overflow any float long
    before the series misbehaves, so no plain-value summation is attempted.
    """
    if n_max < 100.0:
        raise BoundInputError(f"series grid needs n_max >= 100, got {n_max}")
    decades = math.log10(n_max)
    count = max(int(round(points_per_decade * decades)) + 1, 8)
    ns = np.logspace(0.0, decades, num=count)
    logk = np.array([log_k_term(n, epsilon, v_fn(n), bg_fn(n), lam) for n in ns])

    ipeak = int(np.argmax(logk))
    after = logk[ipeak:]
    decreasing = bool(np.all(np.diff(after) <= 1e-9))

    # per-decade decrement at the grid end, for the beyond-grid geometric bound
    target = ns[-1] / 10.0
    iprev = int(np.searchsorted(ns, target))
    iprev = min(max(iprev, 0), len(ns) - 2)
    decrement = float(logk[-1] - logk[iprev])
    geometric_ok = decrement <= -math.log(100.0)

    if geometric_ok:
        # ratio of consecutive decade blocks is 10 * exp(decrement) <= 0.1
        log_beyond = (
            math.log(9.0)
            + math.log(ns[-1])
            + float(logk[-1])
            - math.log1p(-10.0 * math.exp(decrement))
        )
    else:
        log_beyond = math.inf

    stabilization_n = None
    log_tail_at_stabilization = None
    if decreasing and geometric_ok:
        log_tail = log_beyond
        tails = np.empty(len(ns))
        tails[-1] = log_tail
        for j in range(len(ns) - 2, -1, -1):
            width = math.log(ns[j + 1] - ns[j] + 1.0)
            log_tail = np.logaddexp(log_tail, width + logk[j])
            tails[j] = log_tail
        threshold = math.log(tail_tol)
        for j in range(ipeak, len(ns)):
            if tails[j] <= threshold:
                stabilization_n = float(ns[j])
                log_tail_at_stabilization = float(tails[j])
                break

    return SeriesTailReport(
        ns=tuple(float(v) for v in ns),
        log_terms=tuple(float(v) for v in logk),
        peak_n=float(ns[ipeak]),
        decreasing_after_peak=decreasing,
        stabilization_n=stabilization_n,
        log_tail_at_stabilization=log_tail_at_stabilization,
        tail_tol=tail_tol,
        summable=bool(decreasing and geometric_ok and stabilization_n is not None),
    )


@dataclass(frozen=True)
class ConsistencyReport:
    """Grid evaluation of v(n) * B(n)^2 * ln B(n) / n with a heuristic verdict.

    The verdict flags "plausibly -> 0" when the last decade of the grid is
    nonincreasing and the final ratio is at most 1% of the first; it is a
    heuristic label, so the raw sequence is reported for the caller to
    judge.
    """

    ns: tuple
    ratios: tuple
    verdict: bool


def consistency_condition(v_fn, b_fn, n_max: float, points_per_decade: int = 8) -> ConsistencyReport:
    """Evaluate the consistency-rate ratio on a log-spaced grid up to n_max."""
    if n_max < 10:
        raise BoundInputError(f"n_max must be >= 10, got {n_max}")
    decades = math.log10(n_max) - 1.0
    count = max(int(round(points_per_decade * decades)) + 1, 2)
    ns = np.logspace(1.0, math.log10(n_max), num=count)
    ratios = []
    for n in ns:
        v = float(v_fn(n))
        b = float(b_fn(n))
        if not (v > 0.0 and b > 0.0):
            raise BoundInputError(f"sequence values must be positive at n={n:.6g}")
        ratios.append(v * b * b * math.log(b) / n)
    ratios = np.array(ratios)

    last_decade = ratios[ns >= n_max / 10.0]
    monotone = bool(np.all(np.diff(last_decade) <= 0.0))
    small_enough = bool(ratios[-1] <= 0.01 * ratios[0])
    return ConsistencyReport(
        ns=tuple(float(v) for v in ns),
        ratios=tuple(float(v) for v in ratios),
        verdict=monotone and small_enough,
    )


@dataclass(frozen=True)
class ProbePoint:
    """One evaluation point: target value y and indicator threshold t."""

    y: float
    t: float = 1.0


@dataclass(frozen=True)
class FiniteModelClass:
    """A finite model class as lookup tables over shared probe points.

    models[i][j] is the i-th model's predicted value at probe j. Sizes are
    guarded so exhaustive shattering search stays cheap.
    """

    models: tuple
    probes: tuple

    def __post_init__(self):
        models = tuple(tuple(float(v) for v in row) for row in self.models)
        probes = tuple(self.probes)
        if not models or not probes:
            raise BoundInputError("model class needs at least one model and one probe")
        if len(models) > MAX_MODELS:
            raise BoundInputError(f"{len(models)} models exceeds guard {MAX_MODELS}")
        if len(probes) > MAX_PROBES:
            raise BoundInputError(f"{len(probes)} probes exceeds guard {MAX_PROBES}")
        for i, row in enumerate(models):
            if len(row) != len(probes):
                raise BoundInputError(
                    f"model {i} defines {len(row)} values for {len(probes)} probes"
                )
            if not all(math.isfinite(v) for v in row):
                raise BoundInputError(f"model {i} has non-finite values")
        for probe in probes:
            if not (math.isfinite(probe.y) and math.isfinite(probe.t)):
                raise BoundInputError("probe points must be finite")
        object.__setattr__(self, "models", models)
        object.__setattr__(self, "probes", probes)


def scale_thresholds_by_abs_y(cls: FiniteModelClass) -> FiniteModelClass:
    """Replace each probe threshold t with |y| * t, models unchanged.

    Maps percentage-loss indicator questions onto absolute-loss ones.
    """
    return FiniteModelClass(
        models=cls.models,
        probes=tuple(ProbePoint(p.y, abs(p.y) * p.t) for p in cls.probes),
    )


def shattering_vc(cls: FiniteModelClass, kind: LossKind) -> int:
    """Largest probe-subset size shattered by the loss-indicator class.

    A subset S is shattered when the indicators
    j -> 1[t_j <= loss(kind, g(x_j), y_j)], restricted to S, realize all
    2^|S| dichotomies as g ranges over the models. All subset sizes up to
    the guard are searched exhaustively; the maximum shattered size is
    returned (0 when not even one point sees both dichotomies).
    """
    if kind is LossKind.MAPE and any(p.y == 0.0 for p in cls.probes):
        raise BoundInputError("percentage-loss shattering needs all probe targets nonzero")
    n_probes = len(cls.probes)
    patterns = set()
    for row in cls.models:
        mask = 0
        for j, probe in enumerate(cls.probes):
            if probe.t <= loss(kind, row[j], probe.y):
                mask |= 1 << j
        patterns.add(mask)

    best = 0
    for size in range(1, n_probes + 1):
        need = 1 << size
        if len(patterns) < need:
            break  # fewer distinct patterns than dichotomies: impossible
        for subset in combinations(range(n_probes), size):
            seen = set()
            for mask in patterns:
                key = 0
                for pos, j in enumerate(subset):
                    if (mask >> j) & 1:
                        key |= 1 << pos
                seen.add(key)
                if len(seen) == need:
                    break
            if len(seen) == need:
                best = size
                break
    return best
