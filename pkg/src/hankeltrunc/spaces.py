"""Grid norms on the torus: L^p, Hardy H^p, Lipschitz and the Riesz potential.

All averages use the normalized measure ``dx / 2pi``.  A function is passed
either as a :class:`~hankeltrunc.trigpoly.TrigPoly` (sampled on the grid) or
as an array of samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trigpoly import TrigPoly, eval_grid, eval_half_grid

__all__ = [
    "NormSpec",
    "lp_norm",
    "hardy_norm",
    "lipschitz_norm",
    "lipschitz_seminorm",
    "holder_quotient",
    "fractional_integral",
    "torus_distance",
]


@dataclass(frozen=True)
class NormSpec:
    """Exponents of a bilinear estimate.

    ``alpha`` defaults to ``1/q - 1/p``; ``r`` is given by ``1/r = 1/p + 1/q``.
    """

    p: float
    q: float
    alpha: float | None = None

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise ValueError("exponents must be positive")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 1.0 / self.q - 1.0 / self.p)
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")

    @property
    def r(self) -> float:
        return 1.0 / (1.0 / self.p + 1.0 / self.q)

    @property
    def diff_order(self) -> int:
        return int(math.floor(self.alpha)) + 1

    def matches_bilinear_exponents(self, tol: float = 1e-12) -> bool:
        """True when ``1 < p < inf``, ``0 < q < p`` and ``alpha = 1/q - 1/p``."""
        return (
            1 < self.p < math.inf
            and 0 < self.q < self.p
            and abs(self.alpha - (1 / self.q - 1 / self.p)) <= tol
        )


def _samples(f, M: int | None) -> np.ndarray:
    if isinstance(f, TrigPoly):
        if M is None:
            M = max(64, 4 * f.degree + 2)
        return eval_grid(f, M)
    return np.asarray(f)


def torus_distance(x, y=0.0):
    """Distance on R/2piZ, in ``[0, pi]``."""
    d = np.mod(np.asarray(x, dtype=float) - y, 2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


def lp_norm(f, p: float, M: int | None = None) -> float:
    """``((1/2pi) int |f|^p)^{1/p}`` by the uniform-grid average.

    For ``p < 1`` this is the quasi-norm; ``p = inf`` gives the max modulus.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    a = np.abs(_samples(f, M))
    if a.size == 0:
        return 0.0
    if math.isinf(p):
        return float(a.max())
    if p == 2:
        return float(np.sqrt(np.mean(a * a)))
    return float(np.mean(a**p) ** (1.0 / p))


def hardy_norm(f: TrigPoly, p: float, M: int | None = None) -> float:
    """H^p quasi-norm of an analytic polynomial (its boundary L^p norm)."""
    if not f.is_analytic:
        raise ValueError("hardy_norm expects an analytic polynomial")
    return lp_norm(f, p, M)


def _forward_difference(v: np.ndarray, k: int, order: int) -> np.ndarray:
    out = np.zeros_like(v)
    for i in range(order + 1):
        out = out + (-1) ** (order - i) * math.comb(order, i) * np.roll(v, -i * k)
    return out


def lipschitz_seminorm(b, alpha: float, M: int | None = None) -> float:
    """``sup |Delta_h^m b(x)| / h^alpha`` over grid points and steps ``h <= pi/2``.

    ``m = floor(alpha) + 1``; at integer ``alpha`` this is the Zygmund-type
    quotient.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    v = _samples(b, M)
    M = v.size
    order = int(math.floor(alpha)) + 1
    h = 2 * np.pi / M
    best = 0.0
    for k in range(1, M // 4 + 1):
        d = np.abs(_forward_difference(v, k, order)).max()
        best = max(best, d / (k * h) ** alpha)
    return float(best)


def lipschitz_norm(b, alpha: float, M: int | None = None) -> float:
    """Computational Lambda_alpha norm: sup-norm plus :func:`lipschitz_seminorm`."""
    v = _samples(b, M)
    return float(np.abs(v).max()) + lipschitz_seminorm(v, alpha)


def holder_quotient(b, alpha: float, M: int | None = None) -> float:
    """``sup_{x != y} |b(x) - b(y)| / d(x, y)^alpha`` over all grid pairs."""
    v = _samples(b, M)
    M = v.size
    h = 2 * np.pi / M
    best = 0.0
    for k in range(1, M // 2 + 1):
        d = np.abs(np.roll(v, -k) - v).max()
        best = max(best, d / (k * h) ** alpha)
    return float(best)


def fractional_integral(f, alpha: float, M: int | None = None) -> np.ndarray:
    """Riesz potential ``(1/2pi) int d(x, t)^{alpha - 1} f(t) dt`` on the grid.

    The sum runs over the cell centres ``t_k = x_j + (k + 1/2) 2pi/M``, which
    never hit the singularity.  An array ``f`` must therefore hold samples at
    the cell centres ``(i + 1/2) 2pi/M``; a ``TrigPoly`` is sampled there.
    Returns values at the grid points ``x_j = 2 pi j / M``.
    """
    if not 0 < alpha < 1:
        raise ValueError("fractional_integral needs 0 < alpha < 1")
    real_input = False
    if isinstance(f, TrigPoly):
        if M is None:
            M = max(64, 4 * f.degree + 2)
        vals = eval_half_grid(f, M)
    else:
        real_input = np.isrealobj(f)
        vals = np.asarray(f, dtype=complex)
        M = vals.size
    h = 2 * np.pi / M
    w = torus_distance((np.arange(M) + 0.5) * h) ** (alpha - 1)
    # out_j = (1/M) sum_k w_k f_{j+k}: circular cross-correlation
    out = np.fft.ifft(np.fft.fft(vals) * np.conj(np.fft.fft(w))) / M
    return out.real if real_input else out
