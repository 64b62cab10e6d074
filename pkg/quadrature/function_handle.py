"""Evaluable functions on (-1, 1) with the metadata the engines route on."""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from quadrature.coordinates import AnchoredPoints, DualPoint
from utils.errors import DomainError


class Regularity(str, Enum):
    SMOOTH = "smooth"
    JUMP = "jump"
    ENDPOINT = "endpoint"


_SEVERITY = {Regularity.SMOOTH: 0, Regularity.JUMP: 1, Regularity.ENDPOINT: 2}


def weight_of(d):
    """w(x) = sqrt(1 - x^2) computed from d = 1 - |x|."""
    d = np.asarray(d, dtype=float)
    return np.sqrt(np.maximum(d * (2.0 - d), 0.0))


def _as_dual(x, d=None):
    x = np.asarray(x, dtype=float)
    if d is None:
        d = 1.0 - np.abs(x)
    return x, np.asarray(d, dtype=float)


@dataclass(frozen=True)
class StepPiece:
    """The term ``value * chi_[left, right)``."""

    left: DualPoint
    right: DualPoint
    value: float

    @property
    def measure(self):
        return self.right.minus(self.left)


def _step_values(pieces, points):
    out = np.zeros(len(points))
    for piece in pieces:
        inside = (points.minus(piece.left) >= 0.0) & (points.minus(piece.right) < 0.0)
        out = out + np.where(inside, piece.value, 0.0)
    return out


@dataclass(frozen=True)
class FunctionHandle:
    """f = w^weight_power * u, where ``base`` evaluates u at (x, d = 1 - |x|).

    ``regularity`` describes u: smooth (spectral fits converge), jump (finite
    jumps at ``breakpoints``) or endpoint (logarithmic or algebraic behaviour
    at ±1 or at the breakpoints, quadrature only).
    """

    base: Callable
    regularity: Regularity = Regularity.SMOOTH
    weight_power: int = 0
    breakpoints: Tuple[float, ...] = ()
    name: str = "f"
    steps: Optional[Tuple[StepPiece, ...]] = None
    closed_form: Optional[Callable] = field(default=None, compare=False)
    singular: Optional[Tuple[DualPoint, ...]] = None

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        if any(not (-1.0 < b < 1.0) for b in bps):
            raise DomainError(f"breakpoints of {self.name} must lie strictly inside (-1, 1)")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError(f"breakpoints of {self.name} must be sorted and distinct")
        object.__setattr__(self, "breakpoints", bps)

    # --- factories ---

    @classmethod
    def from_callable(cls, fn, name="f", regularity=Regularity.SMOOTH, breakpoints=(), weight_power=0):
        """Wrap a vectorized fn(x) (the weight factor is not included in fn)."""
        return cls(base=lambda x, d: np.asarray(fn(x), dtype=float) * np.ones_like(x),
                   regularity=Regularity(regularity), weight_power=weight_power,
                   breakpoints=tuple(breakpoints), name=name)

    @classmethod
    def constant(cls, c=1.0, name=None):
        return cls(base=lambda x, d: np.full_like(np.asarray(x, dtype=float), float(c)),
                   name=name or f"{c:g}")

    @classmethod
    def weight(cls):
        return cls.constant(1.0, name="w").with_weight(1)

    @classmethod
    def inverse_weight(cls):
        return cls.constant(1.0, name="1/w").with_weight(-1)

    @classmethod
    def step(cls, pieces, name=None):
        """Piecewise constant function from (left, right, value) triples."""
        normalized = []
        for left, right, value in pieces:
            left = left if isinstance(left, DualPoint) else DualPoint.from_x(left)
            right = right if isinstance(right, DualPoint) else DualPoint.from_x(right)
            if not right.minus(left) > 0.0:
                raise DomainError("step pieces need left < right")
            if left.x < -1.0 or right.x > 1.0:
                raise DomainError("step pieces must lie in [-1, 1]")
            normalized.append(StepPiece(left, right, float(value)))
        normalized = tuple(normalized)
        interior = sorted({p.x for piece in normalized for p in (piece.left, piece.right)
                           if p.d > 0.0 and -1.0 < p.x < 1.0})
        return cls(base=lambda x, d: _step_values(normalized, AnchoredPoints(x, d, 0.0)),
                   regularity=Regularity.JUMP, breakpoints=tuple(interior),
                   name=name or "step", steps=normalized,
                   closed_form=lambda points: _step_values(normalized, points))

    @classmethod
    def indicator(cls, left=-1.0, right=1.0, name=None):
        return cls.step([(left, right, 1.0)], name=name or f"chi({left:g},{right:g})")

    # --- evaluation ---

    def __call__(self, x, d=None):
        x, d = _as_dual(x, d)
        values = self.base(x, d)
        if self.weight_power:
            values = values * weight_of(d) ** self.weight_power
        return values

    def weighted(self, x, d, w):
        """f(x) * w(x) with w supplied by the caller (u * w^(p+1))."""
        values = self.base(np.asarray(x, dtype=float), np.asarray(d, dtype=float))
        power = self.weight_power + 1
        if power < 0:
            raise DomainError(f"{self.name} is not integrable: weight power {self.weight_power}")
        return values * w ** power if power else values

    def at_points(self, points):
        if self.closed_form is not None:
            return self.closed_form(points)
        return self(points.x, points.d)

    def value_at(self, t):
        return float(self(np.array([float(t)]))[0])

    # --- metadata ---

    @property
    def singularity_tag(self):
        if self.weight_power < 0:
            return "inverse_weight"
        if self.breakpoints:
            return "jump"
        return "smooth" if self.regularity is Regularity.SMOOTH else "endpoint"

    @property
    def is_step(self):
        return self.steps is not None and self.weight_power == 0

    def singular_points(self):
        """Interior jumps or singularities as precise points, sorted."""
        if self.singular is not None:
            return sorted(self.singular, key=lambda p: (p.x, -p.d if p.x >= 0 else p.d))
        if self.steps is not None:
            points = {}
            for piece in self.steps:
                for p in (piece.left, piece.right):
                    if p.d > 0.0:
                        points[(p.x, p.d)] = p
            return sorted(points.values(), key=lambda p: (p.x, -p.d if p.x >= 0 else p.d))
        return [DualPoint.from_x(b) for b in self.breakpoints]

    # --- combinators ---

    def with_weight(self, power):
        return replace(self, weight_power=int(power), closed_form=None)

    def divide_by_weight(self):
        return replace(self, weight_power=self.weight_power - 1, name=f"({self.name})/w",
                       steps=self.steps, closed_form=None)

    def multiply_by_weight(self):
        return replace(self, weight_power=self.weight_power + 1, name=f"w*({self.name})",
                       steps=self.steps, closed_form=None)

    def scaled(self, c):
        c = float(c)
        steps = None
        if self.steps is not None:
            steps = tuple(StepPiece(p.left, p.right, c * p.value) for p in self.steps)
        closed = self.closed_form
        return replace(self, base=lambda x, d: c * self.base(x, d), name=f"{c:g}*({self.name})",
                       steps=steps,
                       closed_form=(lambda points: c * closed(points)) if closed else None)

    def product(self, other):
        return FunctionHandle(
            base=lambda x, d: self.base(x, d) * other.base(x, d),
            regularity=_worst(self.regularity, other.regularity),
            weight_power=self.weight_power + other.weight_power,
            breakpoints=_merge(self.breakpoints, other.breakpoints),
            name=f"({self.name})*({other.name})",
        )

    def plus(self, other, scale=1.0):
        """self + scale * other."""
        low = min(self.weight_power, other.weight_power)
        ps, po = self.weight_power - low, other.weight_power - low

        def base(x, d):
            w = weight_of(d)
            return self.base(x, d) * w ** ps + scale * other.base(x, d) * w ** po

        return FunctionHandle(
            base=base,
            regularity=_worst(self.regularity, other.regularity),
            weight_power=low,
            breakpoints=_merge(self.breakpoints, other.breakpoints),
            name=f"({self.name})+{scale:g}*({other.name})",
        )


def _worst(a, b):
    return a if _SEVERITY[a] >= _SEVERITY[b] else b


def _merge(a, b):
    return tuple(sorted(set(a) | set(b)))
