"""Periodic bilinear Hilbert transforms.

Conventions (every torus integral carries ``1/2pi``)::

    H(b, g)(x)  = p.v. (1/2pi) int b(x+t) g(2t) cot((x-t)/2) dt
    Ht(b, g)(x) =      (1/2pi) int (b(x+t) - b(2x)) g(2t) cot((x-t)/2) dt

``H`` is computed exactly in coefficient space (:func:`bht_multiplier`) and
both transforms by quadrature on a uniform grid.  The two routes meet in the
splitting identity ``H - Ht = correction_term``.
"""

from __future__ import annotations

import numpy as np

from .atoms import Atom
from .hankel import hankel_apply
from .trigpoly import (
    TrigPoly,
    dilate2,
    eval_grid,
    eval_half_grid,
    hilbert,
    multiply,
    to_conjugate_variable,
)

__all__ = [
    "bht_multiplier",
    "pv_quadrature",
    "bht_tilde_quadrature",
    "correction_term",
    "reconstruct_truncation",
    "kernel_K",
    "kernel_K_convolve",
]

_ROW_CHUNK = 256


def bht_multiplier(b: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``H(b, g) = -i sum_{k,m} b_k g_m sign(k + 2m) e^{i(2k + 2m)x}``."""
    out: dict[int, complex] = {}
    for k, bk in b.coeffs.items():
        for m, gm in g.coeffs.items():
            s = np.sign(k + 2 * m)
            if s == 0:
                continue
            key = 2 * (k + m)
            out[key] = out.get(key, 0j) - 1j * s * bk * gm
    return TrigPoly(out)


def _cell_samples(g, M: int) -> np.ndarray:
    """``g`` at the cell centres ``(i + 1/2) 2pi/M``."""
    if isinstance(g, TrigPoly):
        return eval_half_grid(g, M)
    if isinstance(g, Atom):
        if g.grid_size == M:
            return g.samples.astype(complex)
        return g.evaluate((np.arange(M) + 0.5) * 2 * np.pi / M).astype(complex)
    raise TypeError(f"cannot sample {type(g).__name__}")


def _paired_sum(M: int, b: TrigPoly, g, subtract: bool, dilate: bool) -> np.ndarray:
    # Nodes t = x +- u_k with u_k = (k + 1/2) h pair up around the pole, so
    # each term carries (f(x - u) - f(x + u)) cot(u_k / 2).
    if M % 2:
        raise ValueError("grid size must be even")
    h = 2 * np.pi / M
    K = M // 2
    k = np.arange(K)
    cot = 1.0 / np.tan((k + 0.5) * h / 2)
    b_half = eval_half_grid(b, M)
    b_grid = eval_grid(b, M)

    if dilate:
        # integrand uses g(t) itself: rows depend on j
        gv = _cell_samples(g, M)
        rows = np.arange(M)
        gmod = M
    else:
        # g(2t) at t = x +- u lands on odd grid points = cell centres of M/2
        gv = _cell_samples(g, K)
        rows = np.arange(K)  # output depends on j only through 2j mod M
        gmod = K

    out = np.empty(rows.size, dtype=complex)
    for lo in range(0, rows.size, _ROW_CHUNK):
        j = rows[lo : lo + _ROW_CHUNK, None]
        bp = b_half[(2 * j + k) % M]
        bm = b_half[(2 * j - k - 1) % M]
        if subtract:
            c = b_grid[(2 * j) % M]
            bp = bp - c
            bm = bm - c
        gp = gv[(j + k) % gmod]
        gm = gv[(j - k - 1) % gmod]
        out[lo : lo + _ROW_CHUNK] = ((bm * gm - bp * gp) @ cot) / M
    if not dilate:
        out = np.concatenate([out, out])
    return out


def pv_quadrature(b: TrigPoly, g, M: int) -> np.ndarray:
    """``H(b, g)`` at ``x_j = 2 pi j / M`` by the symmetric midpoint rule."""
    return _paired_sum(M, b, g, subtract=False, dilate=False)


def bht_tilde_quadrature(b: TrigPoly, g, M: int, dilate: bool = False) -> np.ndarray:
    """``Ht(b, g)`` at ``x_j = 2 pi j / M``.

    ``g`` may be a ``TrigPoly`` or an :class:`Atom`.  An atom on a grid of
    size ``M/2`` is read exactly at its cell centres.  With ``dilate=True``
    the integrand uses ``g(t)`` in place of ``g(2t)`` (atom grid size ``M``).
    """
    return _paired_sum(M, b, g, subtract=True, dilate=dilate)


def correction_term(b: TrigPoly, g: TrigPoly) -> TrigPoly:
    """``x -> b(2x) (Hg)(2x)``, the exact difference ``H(b, g) - Ht(b, g)``."""
    return multiply(dilate2(b), dilate2(hilbert(g)))


def reconstruct_truncation(b: TrigPoly, f: TrigPoly) -> TrigPoly:
    """Truncated Hankel operator rebuilt from the bilinear Hilbert transform.

    With ``F(x) = f(e^{-ix})`` and ``S_m = i * [H(b, F)]_{2m}``, ``T = H_b f``
    and ``D_m = a_m b_{2m}``, the coefficient ``(S_m + T_m + D_m) / 2`` equals
    ``sum_{n <= m} a_n b_{m+n}``.
    """
    if not (b.is_analytic and f.is_analytic):
        raise ValueError("reconstruct_truncation expects analytic inputs")
    F = to_conjugate_variable(f)
    Hbf = bht_multiplier(b, F)
    T = hankel_apply(b, f)
    out = {}
    for m in range(b.max_freq + 1):
        s = 1j * Hbf[2 * m]
        d = f[m] * b[2 * m]
        out[m] = (s + T[m] + d) / 2
    return TrigPoly(out)


def kernel_K(x) -> np.ndarray:
    """``K(x) = x / tan(x/2)`` with ``x`` reduced to ``(-pi, pi]`` and ``K(0) = 2``."""
    x = np.asarray(x, dtype=float)
    y = np.pi - np.mod(np.pi - x, 2 * np.pi)  # (-pi, pi]
    out = np.full(y.shape, 2.0)
    nz = y != 0
    out[nz] = y[nz] / np.tan(y[nz] / 2)
    return out


def kernel_K_convolve(a, M: int) -> np.ndarray:
    """``(K * a)(x_j) = (1/2pi) int K(x_j - y) a(y) dy`` on the grid.

    A ``TrigPoly`` or plain array is taken at the grid points; an
    :class:`Atom` at its cell centres (resampled if its grid differs from
    ``M``).
    """
    if M < 8:
        raise ValueError("grid size must be at least 8")
    h = 2 * np.pi / M
    d = np.arange(M)
    if isinstance(a, Atom):
        vals = _cell_samples(a, M)
        ker = kernel_K((d - 0.5) * h)  # x_j - y_i = (j - i - 1/2) h
        real = True
    elif isinstance(a, TrigPoly):
        vals = eval_grid(a, M)
        ker = kernel_K(d * h)
        real = False
    else:
        vals = np.asarray(a)
        if vals.size != M:
            raise ValueError("sample count does not match grid size")
        real = np.isrealobj(vals)
        ker = kernel_K(d * h)
    out = np.fft.ifft(np.fft.fft(ker) * np.fft.fft(vals)) / M
    return out.real if real else out
