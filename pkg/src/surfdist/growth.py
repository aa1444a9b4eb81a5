"""Growth classes of distortion functions.

Only four classes occur for surface subgroups of non-geometric 3-manifold
groups, so they are modelled as a totally ordered enum rather than as
general asymptotic functions.  The zero function is identified with
``LINEAR``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

__all__ = [
    "GrowthClass",
    "Tower",
    "dominates",
    "equivalent",
    "join",
    "join_all",
    "superadditive_closure",
    "superadditive_closure_values",
    "representative",
    "value_le",
    "DOMINATION_CONSTANTS",
    "check_domination",
]


class GrowthClass(enum.IntEnum):
    LINEAR = 1
    QUADRATIC = 2
    EXPONENTIAL = 3
    DOUBLE_EXPONENTIAL = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "GrowthClass":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown growth class {label!r}") from None

    def __str__(self) -> str:
        return self.label


def dominates(f: GrowthClass, g: GrowthClass) -> bool:
    """True iff ``f`` is dominated by ``g`` (f ⪯ g)."""
    return f <= g


def equivalent(f: GrowthClass, g: GrowthClass) -> bool:
    return dominates(f, g) and dominates(g, f)


def join(f: GrowthClass, g: GrowthClass) -> GrowthClass:
    return f if f >= g else g


def join_all(classes) -> GrowthClass:
    """Join of an iterable of classes; an empty join is ``LINEAR``."""
    out = GrowthClass.LINEAR
    for c in classes:
        out = join(out, c)
    return out


def superadditive_closure(f: GrowthClass) -> GrowthClass:
    # Every class has a superadditive representative, so the closure is a fixpoint.
    return f


def superadditive_closure_values(f: Callable[[int], int], n_max: int) -> list[int]:
    """Exact superadditive closure of ``f`` on ``0..n_max`` by dynamic programming.

    ``out[n] = max(f(n), max_{0<a<n} out[a] + out[n-a])``, which equals the
    maximum of ``f(n_1) + ... + f(n_l)`` over all compositions of ``n``.
    Index 0 is set to 0.
    """
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        best = f(n)
        for a in range(1, n // 2 + 1):
            s = out[a] + out[n - a]
            if s > best:
                best = s
        out[n] = best
    return out


@dataclass(frozen=True, order=False)
class Tower:
    """The number ``exp`` applied ``height`` times to ``x``."""

    height: int
    x: float

    def log(self) -> Union["Tower", float]:
        if self.height == 1:
            return self.x
        return Tower(self.height - 1, self.x)

    def __float__(self) -> float:
        v = self.x
        for _ in range(self.height):
            v = math.exp(v)
        return v


Value = Union[int, float, Tower]


def representative(f: GrowthClass, n: int) -> Value:
    """Canonical representative of ``f`` evaluated at ``n`` (base e).

    Double exponentials are always returned as ``Tower(2, n)``; exponentials
    fall back to ``Tower(1, n)`` once ``e**n`` overflows a float.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if f is GrowthClass.LINEAR:
        return n
    if f is GrowthClass.QUADRATIC:
        return n * n
    if f is GrowthClass.EXPONENTIAL:
        try:
            return math.exp(n)
        except OverflowError:
            return Tower(1, float(n))
    return Tower(2, float(n))


def _log(v: Value) -> Value:
    if isinstance(v, Tower):
        return v.log()
    return math.log(v)


def value_le(a: Value, b: Value) -> bool:
    """Compare two positive values, possibly in tower form, without overflow."""
    while isinstance(a, Tower) or isinstance(b, Tower):
        if not isinstance(a, Tower) and a <= 0:
            return True
        if not isinstance(b, Tower) and b <= 0:
            return False
        a, b = _log(a), _log(b)
    return a <= b


def _affine(v: Value, scale: float, shift: float) -> Value:
    """``scale * v + shift`` with ``scale >= 1``, ``shift >= 0``; towers stay towers."""
    if not isinstance(v, Tower):
        return scale * v + shift
    if v.height == 1:
        # log(scale e^x + shift) = x + log(scale + shift e^-x)
        return Tower(1, v.x + math.log(scale + shift * math.exp(-v.x)))
    inner = float(Tower(1, v.x)) if v.x < 700 else math.inf
    if math.isinf(inner):
        return v
    outer = _affine(Tower(1, inner), scale, shift)
    return Tower(2, math.log(outer.x))


# (A, B, C, D, E) with rep(f, n) <= A rep(g, B n + C) + D n + E for n >= 1,
# for every pair f ⪯ g.
DOMINATION_CONSTANTS: dict[tuple[GrowthClass, GrowthClass], tuple[int, int, int, int, int]] = {
    (f, g): (1, 1, 0, 0, 0) for f in GrowthClass for g in GrowthClass if f <= g
}


def check_domination(f: GrowthClass, g: GrowthClass, n_max: int = 1000) -> bool:
    """Check the stored constants for ``f ⪯ g`` on ``1..n_max``."""
    A, B, C, D, E = DOMINATION_CONSTANTS[(f, g)]
    for n in range(1, n_max + 1):
        rhs = _affine(representative(g, B * n + C), A, D * n + E)
        if not value_le(representative(f, n), rhs):
            return False
    return True
