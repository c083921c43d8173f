"""Intermittent interval maps with a neutral fixed point at 0.

The workhorse is the two-branch map T(x) = x(1 + 2^a x^a) on [0, 1/2] and
2x - 1 on (1/2, 1].  Orbits linger near 0 for long laminar stretches, and
the backward orbit of 1 along the left branch (the "ladder") encodes how
long: a point between ladder rungs x_{k+1} and x_k needs exactly k steps
to reach (1/2, 1].
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels as _k


class Variant(Enum):
    LSV = "lsv"
    NEUTRAL_LOG = "neutral_log"
    PIECEWISE_LINEAR_TOY = "piecewise_linear_toy"


_VARIANT_CODE = {
    Variant.LSV: _k.V_LSV,
    Variant.NEUTRAL_LOG: _k.V_NEUTRAL_LOG,
    Variant.PIECEWISE_LINEAR_TOY: _k.V_TOY,
}

DEFAULT_LEFT_INVERSE_TOL = 1e-13


@dataclass(frozen=True)
class MapSpec:
    """An interval map instance: variant plus the neutral-point exponent."""

    variant: Variant = Variant.LSV
    alpha: float = 0.75
    description: str = ""

    def __post_init__(self):
        if self.variant is not Variant.PIECEWISE_LINEAR_TOY:
            if not (0.0 < self.alpha < 1.0):
                raise ValueError(f"alpha must lie strictly in (0,1), got {self.alpha}")

    @property
    def code(self) -> int:
        return _VARIANT_CODE[self.variant]

    def apply(self, x: float) -> float:
        if not (0.0 <= x <= 1.0):
            raise ValueError(f"x={x} outside [0,1]")
        return _k.map_apply(x, self.code, self.alpha)

    def apply_arr(self, x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x)
        for i, xi in enumerate(x.ravel()):
            out.ravel()[i] = _k.map_apply(xi, self.code, self.alpha)
        return out


def lsv_apply(x: float, alpha: float) -> float:
    """One step of the map: x(1 + 2^a x^a) on the left branch, 2x-1 on the right.

    The result is clamped to [0,1]; rounding can overshoot 1 at the branch top.
    """
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x={x} outside [0,1]")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha={alpha} outside (0,1)")
    return _k.map_apply(x, _k.V_LSV, alpha)


def left_inverse(y: float, alpha: float, tol: float = DEFAULT_LEFT_INVERSE_TOL,
                 variant: Variant = Variant.LSV) -> float:
    """The unique x in [0, 1/2] with T(x) = y, by 60-step bisection.

    Monotonicity of the left branch makes this unconditionally convergent;
    tol only controls the post-hoc residual check.
    """
    if not (0.0 <= y <= 1.0):
        raise ValueError(f"y={y} outside [0,1]")
    code = _VARIANT_CODE[variant]
    if variant is not Variant.PIECEWISE_LINEAR_TOY and not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha={alpha} outside (0,1)")
    x = _k.left_inverse_scalar(y, code, alpha)
    if abs(_k.map_apply(x, code, alpha) - y) > tol:
        raise ArithmeticError(f"left_inverse residual exceeds tol={tol} at y={y}")
    return x


@dataclass
class MarkovLadder:
    """Backward orbit of 1 through the left branch, x_0=1 > x_1=1/2 > ...

    gaps[k] = x_k - x_{k+1} is the length of the interval of points that
    take exactly k+1 steps to escape the laminar region.
    """

    alpha: float
    points: np.ndarray
    variant: Variant = Variant.LSV
    gaps: np.ndarray = field(init=False)

    def __post_init__(self):
        self.gaps = self.points[:-1] - self.points[1:]

    @property
    def depth(self) -> int:
        return len(self.points) - 1

    def interval(self, k: int) -> tuple:
        """The half-open laminar interval [x_{k+1}, x_k)."""
        return (self.points[k + 1], self.points[k])

    def scaled(self) -> np.ndarray:
        """x_k * k^{1/alpha} for k >= 1; converges to alpha^{-1/alpha}/2."""
        k = np.arange(1, self.depth + 1, dtype=float)
        return self.points[1:] * k ** (1.0 / self.alpha)

    def limit_constant(self) -> float:
        return 0.5 * self.alpha ** (-1.0 / self.alpha)

    def extended_point(self, k: int) -> float:
        """x_k, continuing past the stored depth with the power-law model."""
        if k <= self.depth:
            return float(self.points[k])
        K = self.depth
        return float(self.points[K]) * (k / K) ** (-1.0 / self.alpha)


def markov_ladder(alpha: float, K: int, variant: Variant = Variant.LSV,
                  tol: float = DEFAULT_LEFT_INVERSE_TOL) -> MarkovLadder:
    """Build the ladder down to x_K and verify T(x_{k+1}) = x_k throughout."""
    if K < 2:
        raise ValueError("ladder depth K must be >= 2")
    code = _VARIANT_CODE[variant]
    pts = _k.ladder_points(code, alpha, K)
    back = np.array([_k.map_apply(p, code, alpha) for p in pts[1:]])
    bad = np.nonzero(np.abs(back - pts[:-1]) > 10 * tol)[0]
    if bad.size:
        k = int(bad[0])
        raise ArithmeticError(
            f"ladder inversion residual {abs(back[k] - pts[k]):.3e} at index {k + 1}")
    return MarkovLadder(alpha=alpha, points=pts, variant=variant)


def orbit(spec: MapSpec, x0: float, n: int) -> np.ndarray:
    """(x0, T x0, ..., T^{n-1} x0) in 64-bit floats.

    Orbits hugging the neutral point lose shadowing accuracy; only
    distributional statistics should be read off them.
    """
    if not (0.0 <= x0 <= 1.0):
        raise ValueError(f"x0={x0} outside [0,1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _k.orbit_fill(x0, n, spec.code, spec.alpha)
