"""Exact transforms of step functions sum v_k chi_[a_k, b_k).

All differences t - a are formed in anchored coordinates, so jumps and
evaluation points a few ulps from ±1 keep their relative precision.
"""
import numpy as np

from quadrature.coordinates import AnchoredPoints


def theta_of(x, d):
    """arccos(x) from (x, d = 1 - |x|) without cancellation at ±1."""
    x = np.asarray(x, dtype=float)
    half = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * np.asarray(d, dtype=float), 0.0, 1.0)))
    return np.where(x >= 0.0, half, np.pi - half)


def chi_transform(t):
    """T(chi_(-1,1))(t) = (1/pi) log((1 - t)/(1 + t))."""
    t = np.asarray(t, dtype=float)
    return np.log((1.0 - t) / (1.0 + t)) / np.pi


def step_transform(pieces, points):
    """T(step)(t) = (1/pi) sum_k v_k log|(b_k - t)/(a_k - t)| on AnchoredPoints."""
    out = np.zeros(len(points))
    for piece in pieces:
        to_right = np.abs(points.minus(piece.right))
        to_left = np.abs(points.minus(piece.left))
        out += piece.value * (np.log(to_right) - np.log(to_left))
    return out / np.pi


def _h(theta, phi):
    return np.log(np.abs(np.sin(0.5 * (theta + phi)))) - np.log(np.abs(np.sin(0.5 * (theta - phi))))


def step_check_transform(pieces, x, d=None):
    """Check-transform -w T(step/w) at x = cos(phi).

    For one piece: -(1/pi) [H(theta_a) - H(theta_b)] with theta_c = arccos c and
    H(theta) = log|sin((theta + phi)/2) / sin((theta - phi)/2)|; H vanishes at
    theta = 0 and theta = pi, so chi_(-1,1) maps to 0.
    """
    x = np.asarray(x, dtype=float)
    d = 1.0 - np.abs(x) if d is None else np.asarray(d, dtype=float)
    phi = theta_of(x, d)
    out = np.zeros_like(phi)
    for piece in pieces:
        theta_a = float(theta_of(piece.left.x, piece.left.d))
        theta_b = float(theta_of(piece.right.x, piece.right.d))
        out -= piece.value * (_h(theta_a, phi) - _h(theta_b, phi))
    return out / np.pi


def step_weighted_integral(pieces):
    """int step / w = sum_k v_k (arcsin b_k - arcsin a_k)."""
    total = 0.0
    for piece in pieces:
        total += piece.value * float(theta_of(piece.left.x, piece.left.d) - theta_of(piece.right.x, piece.right.d))
    return total


def step_points(x, d=None):
    x = np.asarray(x, dtype=float)
    return AnchoredPoints(x, 1.0 - np.abs(x) if d is None else d, 0.0)
