"""Seeded symbol and argument corpora for the experiments."""

from __future__ import annotations

import numpy as np

from .trigpoly import TrigPoly

__all__ = [
    "lacunary",
    "geometric",
    "rough_control",
    "random_analytic",
    "random_trigpoly",
    "random_lipschitz",
    "symbol_from_name",
]


def lacunary(alpha: float, J: int) -> TrigPoly:
    """``sum_{j=0}^{J} 2^{-j alpha} zeta^{2^j}``."""
    return TrigPoly({2**j: 2.0 ** (-j * alpha) for j in range(J + 1)})


def geometric(rho: float, degree: int) -> TrigPoly:
    """Smooth symbol ``sum_{k <= degree} rho^k zeta^k``."""
    return TrigPoly({k: rho**k for k in range(degree + 1)})


def rough_control(degree: int, alpha: float = 0.0) -> TrigPoly:
    """``sum_{k=1}^{degree} zeta^k / k^{1/2 + alpha}``; ratios grow on this one."""
    return TrigPoly({k: k ** -(0.5 + alpha) for k in range(1, degree + 1)})


def random_analytic(rng: np.random.Generator, degree: int, real: bool = False) -> TrigPoly:
    """Gaussian coefficients on ``0..degree``."""
    c = rng.standard_normal(degree + 1)
    if not real:
        c = (c + 1j * rng.standard_normal(degree + 1)) / np.sqrt(2)
    return TrigPoly.from_dense(c)


def random_trigpoly(rng: np.random.Generator, degree: int) -> TrigPoly:
    """Complex Gaussian coefficients on ``-degree..degree``."""
    n = 2 * degree + 1
    c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return TrigPoly.from_dense(c, start=-degree)


def random_lipschitz(rng: np.random.Generator, degree: int, alpha: float) -> TrigPoly:
    """Random polynomial with coefficients decaying like ``|k|^{-1-alpha}``."""
    k = np.arange(-degree, degree + 1)
    n = k.size
    c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    c = c / np.maximum(np.abs(k), 1) ** (1 + alpha)
    return TrigPoly.from_dense(c, start=-degree)


def symbol_from_name(name: str, alpha: float, J: int = 8, degree: int = 64) -> TrigPoly:
    if name == "lacunary":
        return lacunary(alpha, J)
    if name == "geometric":
        return geometric(0.5, degree)
    if name == "rough":
        return rough_control(degree)
    if name == "delta":
        return TrigPoly.constant(1.0)
    if name == "zero":
        return TrigPoly()
    raise ValueError(f"unknown symbol family {name!r}")
