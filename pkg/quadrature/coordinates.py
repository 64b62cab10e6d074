"""Cancellation-free coordinates on (-1, 1).

A point is carried as its abscissa ``x`` together with ``d = 1 - |x|``, the
distance to the nearest endpoint. Sample sets are stored as an anchor point
plus a signed offset, so that positions a few ulps away from an anchor (an
endpoint, a jump, the end of a tiny level set) keep their full relative
precision.
"""
from dataclasses import dataclass

import numpy as np

_TINY = np.finfo(float).tiny
_NEAR = 0.5


def dual_difference(ax, ad, bx, bd):
    """a - b for points given as (x, d) pairs, exact to rounding near ±1."""
    ax, ad, bx, bd = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (ax, ad, bx, bd)))
    upper = (ax >= _NEAR) & (bx >= _NEAR)
    lower = (ax <= -_NEAR) & (bx <= -_NEAR)
    return np.where(upper, bd - ad, np.where(lower, ad - bd, ax - bx))


@dataclass(frozen=True)
class DualPoint:
    x: float
    d: float

    @classmethod
    def from_x(cls, x):
        x = float(x)
        return cls(x, 1.0 - abs(x))

    @classmethod
    def near_upper(cls, d):
        """The point 1 - d."""
        return cls(1.0 - float(d), float(d))

    @classmethod
    def near_lower(cls, d):
        """The point -1 + d."""
        return cls(-1.0 + float(d), float(d))

    @classmethod
    def upper(cls):
        return cls(1.0, 0.0)

    @classmethod
    def lower(cls):
        return cls(-1.0, 0.0)

    def minus(self, other):
        return float(dual_difference(self.x, self.d, other.x, other.d))

    def shifted(self, offset):
        """The point self + offset, keeping d exact on the anchor's side."""
        x = self.x + offset
        if self.x >= 0.0 and x >= 0.0:
            d = self.d - offset
        elif self.x < 0.0 and x < 0.0:
            d = self.d + offset
        else:
            d = 1.0 - abs(x)
        return DualPoint(x, d)

    def __lt__(self, other):
        return self.minus(other) < 0.0


class AnchoredPoints:
    """Sample positions ``anchor + offset`` with exact offsets."""

    def __init__(self, anchor_x, anchor_d, offset):
        self.anchor_x, self.anchor_d, self.offset = np.broadcast_arrays(
            np.asarray(anchor_x, dtype=float),
            np.asarray(anchor_d, dtype=float),
            np.asarray(offset, dtype=float),
        )

    @classmethod
    def from_x(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x, 1.0 - np.abs(x), np.zeros_like(x))

    @classmethod
    def around(cls, anchor, offsets):
        offsets = np.asarray(offsets, dtype=float)
        return cls(np.full_like(offsets, anchor.x), np.full_like(offsets, anchor.d), offsets)

    @classmethod
    def concatenate(cls, parts):
        parts = [p for p in parts if len(p)]
        if not parts:
            return cls(np.empty(0), np.empty(0), np.empty(0))
        return cls(
            np.concatenate([p.anchor_x for p in parts]),
            np.concatenate([p.anchor_d for p in parts]),
            np.concatenate([p.offset for p in parts]),
        )

    def __len__(self):
        return self.offset.size

    def take(self, index):
        return AnchoredPoints(self.anchor_x[index], self.anchor_d[index], self.offset[index])

    @property
    def x(self):
        edge = np.nextafter(1.0, 0.0)
        return np.clip(self.anchor_x + self.offset, -edge, edge)

    @property
    def d(self):
        x = self.anchor_x + self.offset
        same_side = np.sign(x) == np.sign(self.anchor_x)
        d = np.where(self.anchor_x >= 0.0, self.anchor_d - self.offset, self.anchor_d + self.offset)
        d = np.where(same_side, d, 1.0 - np.abs(x))
        return np.maximum(d, _TINY)

    def minus(self, point):
        """Signed differences (self - point), exact near the anchors."""
        return dual_difference(self.anchor_x, self.anchor_d, point.x, point.d) + self.offset
