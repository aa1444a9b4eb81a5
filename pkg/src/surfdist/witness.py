"""Witness sequences for the double exponential lower bound, and the
crossing-bound recurrences of the upper bound, both in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .spirality import DirectedCycle, xi
from .model import SurfaceGraph

__all__ = [
    "XiPeriod",
    "WitnessSequence",
    "WitnessReport",
    "Crossing",
    "TraceConfig",
    "TraceReport",
    "InconsistentConfig",
    "period_from_cycle",
    "build_witness",
    "verify_witness",
    "trace_bounds",
    "logsumexp",
]


class InconsistentConfig(ValueError):
    pass


@dataclass(frozen=True)
class XiPeriod:
    ratios: tuple[Fraction, ...]

    def __post_init__(self):
        rs = tuple(Fraction(r) for r in self.ratios)
        if not rs:
            raise ValueError("period must be nonempty")
        if any(r <= 0 for r in rs):
            raise ValueError("ratios must be positive")
        object.__setattr__(self, "ratios", rs)

    def __len__(self) -> int:
        return len(self.ratios)

    def at(self, j: int) -> Fraction:
        """``xi_j`` for ``j >= 1``, extended periodically."""
        return self.ratios[(j - 1) % len(self.ratios)]

    @property
    def weight(self) -> Fraction:
        return math.prod(self.ratios, start=Fraction(1))


def period_from_cycle(s: SurfaceGraph, gamma: DirectedCycle) -> XiPeriod:
    gamma.check(s)
    return XiPeriod(tuple(xi(s, e) for e in gamma.edges))


@dataclass(frozen=True)
class WitnessSequence:
    period: XiPeriod
    mu: Fraction
    t: tuple[int, ...]
    A: int
    D: float
    w: Fraction


def _growth_constant(t0: int, A: int, eps: Fraction) -> float:
    if eps > 1:
        e = float(eps)
        return max(math.log(e), math.log(t0 + A * e / (e - 1)), 1.0)
    return math.log(t0 + A) + 1.0


def build_witness(period: XiPeriod, mu, steps: int) -> WitnessSequence:
    """Smallest integer sequence with ``t_j / xi_j`` integral and ``>= t_{j-1}``.

    ``t_0 = ceil(mu)`` and, writing ``xi_j = p/q`` in lowest terms,
    ``t_j = p * ceil(t_{j-1} / q)``, so ``0 <= t_j/xi_j - t_{j-1} <= q - 1``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    t = [math.ceil(mu)]
    for j in range(1, steps + 1):
        r = period.at(j)
        p, q = r.numerator, r.denominator
        t.append(p * -(-t[-1] // q))
    A = max(r.denominator for r in period.ratios)
    D = _growth_constant(t[0], A, max(period.ratios))
    return WitnessSequence(period, mu, tuple(t), A, D, period.weight)


@dataclass
class WitnessReport:
    integral: bool = True
    quotient_integral: bool = True
    increments_bounded: bool = True
    lower_growth: bool = True
    upper_growth: bool = True
    failures: list[tuple[str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def _fail(self, name: str, index: int) -> None:
        setattr(self, name, False)
        self.failures.append((name, index))

    def as_dict(self) -> dict:
        return {
            "integral": self.integral,
            "quotient_integral": self.quotient_integral,
            "increments_bounded": self.increments_bounded,
            "lower_growth": self.lower_growth,
            "upper_growth": self.upper_growth,
            "failures": [list(f) for f in self.failures],
        }


def verify_witness(ws: WitnessSequence) -> WitnessReport:
    rep = WitnessReport()
    t = ws.t
    m = len(ws.period)
    for j, tj in enumerate(t):
        if not isinstance(tj, int) or isinstance(tj, bool):
            rep._fail("integral", j)
    if not rep.integral:
        return rep
    if t[0] < ws.mu:
        rep._fail("lower_growth", 0)
    for j in range(1, len(t)):
        quot = Fraction(t[j]) / ws.period.at(j)
        if quot.denominator != 1:
            rep._fail("quotient_integral", j)
        if not 0 <= quot - t[j - 1] <= ws.A:
            rep._fail("increments_bounded", j)
    for k in range(1, (len(t) - 1) // m + 1):
        if t[k * m] < t[0] * ws.w**k:
            rep._fail("lower_growth", k * m)
    for n in range(1, len(t)):
        if t[n] <= 0 or math.log(t[n]) > ws.D * n + ws.D:
            rep._fail("upper_growth", n)
    return rep


@dataclass(frozen=True)
class Crossing:
    xi: Fraction
    lambda_in: Fraction = Fraction(1)
    lambda_out: Fraction = Fraction(1)
    step: Fraction = Fraction(1)


@dataclass(frozen=True)
class TraceConfig:
    """Inputs of the crossing recurrences.

    ``epsilon`` defaults to the largest crossing ratio (at least 1);
    ``Lambda`` is only needed for the trivial-spirality bound.
    """

    crossings: tuple[Crossing, ...] = ()
    L_prime: Fraction = Fraction(1)
    rho: Fraction = Fraction(1)
    Lambda: Fraction | None = None
    epsilon: Fraction | None = None


@dataclass(frozen=True)
class TraceReport:
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    claim2: tuple[Fraction, ...]
    claim3: Fraction | None
    log_sum: float
    n: Fraction
    epsilon: Fraction

    @property
    def claim2_holds(self) -> bool:
        return all(b <= c for b, c in zip(self.b, self.claim2))

    @property
    def claim3_holds(self) -> bool | None:
        if self.claim3 is None:
            return None
        return all(b <= self.claim3 for b in self.b)


def logsumexp(xs: Sequence[Fraction]) -> float:
    """``log(sum(exp(x)))`` for exact inputs; ``-inf`` for an empty sequence."""
    if not xs:
        return -math.inf
    top = max(xs)
    # terms more than 800 below the top vanish in double precision
    tail = math.fsum(math.exp(float(x - top)) for x in xs if x - top > -800)
    try:
        return float(top) + math.log(tail)
    except OverflowError:
        return math.inf


def trace_bounds(cfg: TraceConfig) -> TraceReport:
    """Run the block/plane crossing recurrences at equality.

    ``a_j = (lambda_in_j / lambda_out_{j-1}) b_{j-1} + L' step_j`` (first
    term absent for ``j = 1``) and ``b_j = xi_j (lambda_out_j / lambda_in_j) a_j``.
    """
    cs = cfg.crossings
    for name in ("L_prime", "rho"):
        if getattr(cfg, name) <= 0:
            raise InconsistentConfig(f"{name} must be positive")
    for c in cs:
        if min(c.xi, c.lambda_in, c.lambda_out, c.step) <= 0:
            raise InconsistentConfig("crossing quantities must be positive")
    top = max((c.xi for c in cs), default=Fraction(1))
    eps = cfg.epsilon if cfg.epsilon is not None else max(top, Fraction(1))
    if eps < top:
        raise InconsistentConfig(f"governor {eps} is below crossing ratio {top}")
    n = sum((c.step for c in cs), Fraction(0))
    if len(cs) > n / cfg.rho:
        raise InconsistentConfig(f"{len(cs)} crossings exceed n/rho = {n / cfg.rho}")

    a: list[Fraction] = []
    b: list[Fraction] = []
    claim2: list[Fraction] = []
    power_sum = Fraction(0)
    power = Fraction(1)
    for j, c in enumerate(cs):
        carried = cs[j].lambda_in / cs[j - 1].lambda_out * b[-1] if j else Fraction(0)
        a.append(carried + cfg.L_prime * c.step)
        b.append(c.xi * c.lambda_out / c.lambda_in * a[-1])
        power *= eps
        power_sum += power
        claim2.append(cfg.L_prime * n * power_sum)
    claim3 = cfg.Lambda * cfg.L_prime * n if cfg.Lambda is not None else None
    return TraceReport(
        a=tuple(a),
        b=tuple(b),
        claim2=tuple(claim2),
        claim3=claim3,
        log_sum=logsumexp([x + y for x, y in zip(a, b)]),
        n=n,
        epsilon=eps,
    )
