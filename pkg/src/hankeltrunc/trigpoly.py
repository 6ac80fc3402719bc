"""Trigonometric polynomials on the torus R/2piZ.

A :class:`TrigPoly` is a finitely supported map ``n -> c_n`` standing for the
function ``x -> sum_n c_n exp(i n x)``.  Values are immutable; every operation
returns a new polynomial.  Coefficients live in a dict and are converted to
dense numpy arrays only when a grid or a convolution needs them.

Torus integrals are normalized by ``1/2pi`` throughout, so that
``c_n = (1/2pi) int f(x) exp(-i n x) dx``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "TrigPoly",
    "Grid",
    "eval_grid",
    "eval_half_grid",
    "evaluate",
    "from_grid",
    "multiply",
    "flip",
    "cauchy_projection",
    "hilbert",
    "dilate2",
    "to_conjugate_variable",
    "max_coeff_diff",
]


class TrigPoly:
    """Finite Fourier series ``sum_n c_n e^{inx}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        c = {}
        if coeffs:
            for n, v in coeffs.items():
                v = complex(v)
                if v != 0:
                    c[int(n)] = v
        self._c = c

    @classmethod
    def from_dense(cls, values: Iterable[complex], start: int = 0) -> "TrigPoly":
        """Build from a dense coefficient vector whose first entry sits at ``start``."""
        return cls({start + k: v for k, v in enumerate(values)})

    @classmethod
    def monomial(cls, n: int, amplitude: complex = 1.0) -> "TrigPoly":
        return cls({n: amplitude})

    @classmethod
    def constant(cls, value: complex) -> "TrigPoly":
        return cls({0: value})

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._c)

    def __getitem__(self, n: int) -> complex:
        return self._c.get(n, 0j)

    def support(self) -> list[int]:
        return sorted(self._c)

    @property
    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_freq(self) -> int:
        return min(self._c) if self._c else 0

    @property
    def max_freq(self) -> int:
        return max(self._c) if self._c else 0

    @property
    def degree(self) -> int:
        """Largest ``|n|`` in the support (0 for the zero polynomial)."""
        return max((abs(n) for n in self._c), default=0)

    @property
    def is_analytic(self) -> bool:
        return all(n >= 0 for n in self._c)

    def to_dense(self, lo: int | None = None, hi: int | None = None) -> np.ndarray:
        """Coefficients for frequencies ``lo..hi`` inclusive as a complex array."""
        lo = self.min_freq if lo is None else lo
        hi = self.max_freq if hi is None else hi
        out = np.zeros(max(hi - lo + 1, 0), dtype=complex)
        for n, v in self._c.items():
            if lo <= n <= hi:
                out[n - lo] = v
        return out

    def analytic_coeffs(self, length: int | None = None) -> np.ndarray:
        """Dense ``(c_0, c_1, ...)``; requires an analytic polynomial."""
        if not self.is_analytic:
            raise ValueError("polynomial has negative frequencies")
        hi = self.max_freq if length is None else length - 1
        return self.to_dense(0, hi)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        c = dict(self._c)
        for n, v in other._c.items():
            c[n] = c.get(n, 0j) + v
        return TrigPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly({n: -v for n, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        other = complex(other)
        return TrigPoly({n: other * v for n, v in self._c.items()})

    __rmul__ = __mul__

    def __call__(self, x):
        return evaluate(self, x)

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def allclose(self, other: "TrigPoly", tol: float = 1e-12) -> bool:
        return max_coeff_diff(self, other) <= tol

    def __repr__(self):
        terms = ", ".join(f"{n}: {v:.6g}" for n, v in sorted(self._c.items()))
        return f"TrigPoly({{{terms}}})"

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict[str, list[float]]:
        return {str(n): [v.real, v.imag] for n, v in sorted(self._c.items())}

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Iterable[float]]) -> "TrigPoly":
        return cls({int(k): complex(*v) for k, v in obj.items()})

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)


def max_coeff_diff(f: TrigPoly, g: TrigPoly) -> float:
    keys = set(f.support()) | set(g.support())
    return max((abs(f[n] - g[n]) for n in keys), default=0.0)


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_j = 2 pi j / M`` on the torus."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("grid size must be positive")

    @property
    def step(self) -> float:
        return 2 * np.pi / self.M

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.M) * self.step

    @property
    def half_points(self) -> np.ndarray:
        """Cell centres ``(j + 1/2) 2 pi / M``."""
        return (np.arange(self.M) + 0.5) * self.step

    def resolves(self, f: TrigPoly) -> bool:
        return self.M >= 2 * f.degree + 1


def _alias(f: TrigPoly, M: int, shift: float = 0.0) -> np.ndarray:
    # DFT bins with aliasing folded in, so any M works for evaluation
    buf = np.zeros(M, dtype=complex)
    if f.is_zero:
        return buf
    freqs = np.fromiter(f.coeffs.keys(), dtype=np.int64)
    vals = np.fromiter(f.coeffs.values(), dtype=complex)
    if shift:
        vals = vals * np.exp(1j * freqs * shift)
    np.add.at(buf, freqs % M, vals)
    return buf


def eval_grid(f: TrigPoly, M: int) -> np.ndarray:
    """Samples ``f(2 pi j / M)`` for ``j = 0..M-1``."""
    if M < 1:
        raise ValueError("grid size must be positive")
    return np.fft.ifft(_alias(f, M)) * M


def eval_half_grid(f: TrigPoly, M: int) -> np.ndarray:
    """Samples at the cell centres ``(j + 1/2) 2 pi / M``."""
    if M < 1:
        raise ValueError("grid size must be positive")
    return np.fft.ifft(_alias(f, M, shift=np.pi / M)) * M


def evaluate(f: TrigPoly, x) -> np.ndarray:
    """Direct evaluation at arbitrary points (any shape)."""
    x = np.asarray(x, dtype=float)
    if f.is_zero:
        return np.zeros(x.shape, dtype=complex)
    freqs = np.fromiter(f.coeffs.keys(), dtype=float)
    vals = np.fromiter(f.coeffs.values(), dtype=complex)
    return np.exp(1j * np.multiply.outer(x, freqs)) @ vals


def from_grid(samples, band: int) -> TrigPoly:
    """Interpolating polynomial supported in ``[-band, band]``.

    Needs ``len(samples) >= 2*band + 1``; the result is then the unique such
    polynomial through the samples.
    """
    samples = np.asarray(samples, dtype=complex)
    M = samples.size
    if band < 0 or M < 2 * band + 1:
        raise ValueError(f"band {band} is not resolved by {M} samples")
    c = np.fft.fft(samples) / M
    return TrigPoly({n: c[n % M] for n in range(-band, band + 1)})


def multiply(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Pointwise product, i.e. convolution of coefficient sequences."""
    if f.is_zero or g.is_zero:
        return TrigPoly()
    prod = np.convolve(f.to_dense(), g.to_dense())
    return TrigPoly.from_dense(prod, start=f.min_freq + g.min_freq)


def flip(f: TrigPoly) -> TrigPoly:
    """``c_n -> c_{-n}``, i.e. ``f(zeta) -> f(conj zeta)`` for real coefficients."""
    return TrigPoly({-n: v for n, v in f.coeffs.items()})


def cauchy_projection(f: TrigPoly) -> TrigPoly:
    """Keep the frequencies ``n >= 0``."""
    return TrigPoly({n: v for n, v in f.coeffs.items() if n >= 0})


def hilbert(f: TrigPoly) -> TrigPoly:
    """Conjugate function: multiplier ``-i sign(n)`` with ``sign(0) = 0``.

    Equals ``p.v. (1/2pi) int f(t) cot((x - t)/2) dt``.
    """
    return TrigPoly({n: -1j * np.sign(n) * v for n, v in f.coeffs.items() if n != 0})


def dilate2(f: TrigPoly) -> TrigPoly:
    """``x -> f(2x)``."""
    return TrigPoly({2 * n: v for n, v in f.coeffs.items()})


def to_conjugate_variable(f: TrigPoly) -> TrigPoly:
    """``F(x) = f(e^{-ix})`` for an analytic ``f``."""
    if not f.is_analytic:
        raise ValueError("to_conjugate_variable expects an analytic polynomial")
    return TrigPoly({-n: v for n, v in f.coeffs.items()})
