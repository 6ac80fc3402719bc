"""Linear and multilinear Hankel operators, truncations and norm probes.

A symbol ``b`` is an analytic :class:`TrigPoly`; its coefficient ``b_k`` is
zero beyond the stored degree, so finite sections are exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spaces import hardy_norm
from .trigpoly import TrigPoly, cauchy_projection, flip, multiply

__all__ = [
    "TruncationMask",
    "HankelSection",
    "MultilinearHankelSection",
    "hankel_apply",
    "hankel_integral",
    "multilinear_apply",
    "truncate_apply",
    "section",
    "msection",
    "spectral_norm_svd",
    "spectral_norm_power",
    "operator_norm_l2",
    "multilinear_norm_lower",
    "norm_ratio_qp",
]


def _analytic(f: TrigPoly, name: str) -> np.ndarray:
    if not f.is_analytic:
        raise ValueError(f"{name} must be analytic (nonnegative frequencies only)")
    return f.analytic_coeffs()


def _symbol_vector(b: TrigPoly, length: int) -> np.ndarray:
    """``(b_0, ..., b_{length-1})`` with zeros past the stored degree."""
    out = np.zeros(length, dtype=complex)
    for k, v in b.coeffs.items():
        if k < 0:
            raise ValueError("symbol must be analytic (nonnegative frequencies only)")
        if k < length:
            out[k] = v
    return out


def _maybe_real(a: np.ndarray) -> np.ndarray:
    return a.real.copy() if np.all(a.imag == 0) else a


@dataclass(frozen=True)
class TruncationMask:
    """Keep entry ``(i0, i1..in)`` iff ``beta . (i1..in) + gamma <= i0``."""

    beta: tuple[float, ...]
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(float(x) for x in self.beta))
        if not self.beta:
            raise ValueError("mask needs arity >= 1")

    @classmethod
    def standard(cls, n: int = 1) -> "TruncationMask":
        """The mask with ``beta = (1, ..., 1)`` and ``gamma = 0``."""
        return cls((1.0,) * n, 0.0)

    @classmethod
    def keep_all(cls, n: int = 1) -> "TruncationMask":
        return cls((1.0,) * n, -math.inf)

    @property
    def arity(self) -> int:
        return len(self.beta)

    def keeps(self, i0: int, idx: Sequence[int]) -> bool:
        return float(np.dot(self.beta, idx)) + self.gamma <= i0

    def array(self, N: int) -> np.ndarray:
        """Boolean keep-array of shape ``(N,) * (arity + 1)``."""
        grids = np.indices((N,) * (self.arity + 1))
        lin = sum(beta * grids[j + 1] for j, beta in enumerate(self.beta))
        return lin + self.gamma <= grids[0]


def hankel_apply(b: TrigPoly, f: TrigPoly) -> TrigPoly:
    """``(H_b f)_m = sum_n a_n b_{m+n}`` by the direct double sum."""
    bb = _analytic(b, "symbol")
    a = _analytic(f, "argument")
    if bb.size == 0 or a.size == 0 or b.is_zero or f.is_zero:
        return TrigPoly()
    out = np.zeros(bb.size, dtype=complex)
    for n, an in enumerate(a):
        if n >= bb.size:
            break
        out[: bb.size - n] += an * bb[n:]
    return TrigPoly.from_dense(out)


def hankel_integral(b: TrigPoly, f: TrigPoly) -> TrigPoly:
    """``H_b f`` as the Cauchy projection of ``b`` times the flipped ``f``."""
    _analytic(b, "symbol")
    _analytic(f, "argument")
    return cauchy_projection(multiply(b, flip(f)))


def multilinear_apply(b: TrigPoly, fs: Sequence[TrigPoly]) -> TrigPoly:
    if len(fs) == 0:
        raise ValueError("multilinear_apply needs at least one argument")
    prod = fs[0]
    for g in fs[1:]:
        prod = multiply(prod, g)
    return hankel_apply(b, prod)


def truncate_apply(mask: TruncationMask, b: TrigPoly, fs: Sequence[TrigPoly]) -> TrigPoly:
    """Apply the masked (n+1)-dimensional Hankel matrix to ``fs``.

    Coefficient ``i0`` is the sum over ``(i1..in)`` with
    ``beta . i + gamma <= i0`` of ``b_{i0 + i1 + .. + in} * prod a^j_{ij}``.
    """
    if len(fs) != mask.arity:
        raise ValueError(f"mask arity {mask.arity} does not match {len(fs)} arguments")
    bb = _analytic(b, "symbol")
    args = [_analytic(f, "argument") for f in fs]
    if b.is_zero or any(f.is_zero for f in fs):
        return TrigPoly()

    # weights and index sums over the product of supports
    weight = np.ones((), dtype=complex)
    total = np.zeros((), dtype=np.int64)
    lin = np.zeros((), dtype=float)
    for beta, a in zip(mask.beta, args):
        idx = np.arange(a.size)
        weight = np.multiply.outer(weight, a)
        total = np.add.outer(total, idx)
        lin = np.add.outer(lin, beta * idx)
    weight, total, lin = weight.ravel(), total.ravel(), lin.ravel()
    thresh = lin + mask.gamma

    out = np.zeros(bb.size, dtype=complex)
    for i0 in range(bb.size):
        pos = i0 + total
        sel = (thresh <= i0) & (pos < bb.size)
        if sel.any():
            out[i0] = np.dot(weight[sel], bb[pos[sel]])
    return TrigPoly.from_dense(out)


@dataclass(frozen=True)
class HankelSection:
    """``N x N`` leading block of the Hankel matrix ``(b_{m+n})``."""

    N: int
    symbol: np.ndarray = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        m = np.add.outer(np.arange(self.N), np.arange(self.N))
        return _maybe_real(self.symbol[m])

    def masked(self, mask: TruncationMask | None = None) -> np.ndarray:
        mask = mask or TruncationMask.standard(1)
        return np.where(mask.array(self.N), self.matrix, 0)

    def to_csv(self, path, mask: TruncationMask | None = None) -> None:
        A = self.matrix if mask is None else self.masked(mask)
        _write_matrix_csv(path, A)


@dataclass(frozen=True)
class MultilinearHankelSection:
    """``N^(n+1)`` leading block of the (n+1)-dimensional Hankel matrix."""

    n: int
    N: int
    symbol: np.ndarray = field(repr=False)

    @property
    def tensor(self) -> np.ndarray:
        s = np.indices((self.N,) * (self.n + 1)).sum(axis=0)
        return _maybe_real(self.symbol[s])

    def masked(self, mask: TruncationMask | None = None) -> np.ndarray:
        mask = mask or TruncationMask.standard(self.n)
        if mask.arity != self.n:
            raise ValueError("mask arity does not match section arity")
        return np.where(mask.array(self.N), self.tensor, 0)

    def to_csv(self, path, mask: TruncationMask | None = None) -> None:
        T = self.tensor if mask is None else self.masked(mask)
        _write_matrix_csv(path, T.reshape(self.N, -1))


def _write_matrix_csv(path, A: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in A:
            w.writerow([_fmt_entry(v) for v in row])


def _fmt_entry(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return format(v.real, ".17g")
    return f"{v.real:.17g}{v.imag:+.17g}j"


def section(b: TrigPoly, N: int) -> HankelSection:
    if N < 1:
        raise ValueError("section size must be positive")
    return HankelSection(N, _symbol_vector(b, 2 * N - 1))


def msection(b: TrigPoly, n: int, N: int) -> MultilinearHankelSection:
    if n < 1 or N < 1:
        raise ValueError("arity and section size must be positive")
    return MultilinearHankelSection(n, N, _symbol_vector(b, (n + 1) * (N - 1) + 1))


# -- norm estimation -----------------------------------------------------------


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, HankelSection):
        return A.matrix
    return np.asarray(A)


def spectral_norm_svd(A) -> float:
    A = _as_matrix(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def spectral_norm_power(
    A,
    seed: int = 0,
    block: int = 10,
    tol: float = 1e-15,
    max_iter: int = 50_000,
) -> float:
    """Largest singular value by block power iteration on ``A^H A``.

    ``block`` seeded random start vectors are iterated together and
    re-orthonormalized each sweep; the estimate is the top Ritz value of
    ``A^H A`` on the block.  Convergence then goes like
    ``(sigma_{block+1} / sigma_1)^2`` per sweep instead of
    ``(sigma_2 / sigma_1)^2``, which matters for Hankel sections whose two
    leading singular values nearly coincide.  Stops once the estimate
    changes by less than ``tol`` (relative) between sweeps.
    """
    A = _as_matrix(A)
    if A.size == 0 or not np.any(A):
        return 0.0
    rng = np.random.default_rng(seed)
    n = A.shape[1]
    k = min(block, n)
    V = rng.standard_normal((n, k))
    if np.iscomplexobj(A):
        V = V + 1j * rng.standard_normal((n, k))
    AhA = A.conj().T @ A
    V, _ = np.linalg.qr(V)
    prev = -1.0
    for _ in range(max_iter):
        W = AhA @ V
        top = float(np.linalg.eigvalsh(V.conj().T @ W).max())
        if abs(top - prev) <= tol * top:
            break
        prev = top
        V, _ = np.linalg.qr(W)
    return float(np.sqrt(max(top, 0.0)))


def operator_norm_l2(A, method: str = "svd", **kw) -> float:
    """Largest singular value of a (possibly masked) section."""
    if method == "svd":
        return spectral_norm_svd(A)
    if method == "power":
        return spectral_norm_power(A, **kw)
    raise ValueError(f"unknown method {method!r}")


def _contract_except(T: np.ndarray, vecs: list[np.ndarray], free: int) -> np.ndarray:
    """Contract input axes ``1..n`` of ``T`` with ``vecs``, leaving axis ``free``."""
    M = T
    # contract from the last axis backwards so axis numbers stay valid
    for j in range(len(vecs) - 1, -1, -1):
        if j == free:
            continue
        M = np.tensordot(M, vecs[j], axes=([j + 1], [0]))
    return M  # shape (N, N): output axis, free input axis


def multilinear_norm_lower(
    b: TrigPoly,
    n: int,
    N: int,
    rounds: int = 10,
    seed: int = 0,
    mask: TruncationMask | None = None,
    tol: float = 1e-9,
    max_sweeps: int = 500,
) -> float:
    """Lower bound on ``sup ||T(f_1..f_n)||_2`` over unit inputs of length ``N``.

    Alternating maximization: with all arguments but one frozen the map is
    linear, and the free argument is replaced by its top right-singular
    vector.  Each sweep cycles through all arguments.  The returned value is
    attained by explicit unit vectors, hence a certified lower bound.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    sec = msection(b, n, N)
    T = sec.tensor if mask is None else sec.masked(mask)
    if not np.any(T):
        return 0.0
    if n == 1:
        return spectral_norm_svd(T)

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(rounds):
        vecs = []
        for _ in range(n):
            v = rng.standard_normal(N)
            if np.iscomplexobj(T):
                v = v + 1j * rng.standard_normal(N)
            vecs.append(v / np.linalg.norm(v))
        val = 0.0
        for _ in range(max_sweeps):
            old = val
            for j in range(n):
                L = _contract_except(T, vecs, j)
                _, s, vh = np.linalg.svd(L)
                vecs[j] = vh[0].conj()
                val = float(s[0])
            if val - old <= tol * val:
                break
        best = max(best, val)
    return best


def norm_ratio_qp(
    b: TrigPoly,
    corpus: Sequence[TrigPoly],
    q: float,
    p: float,
    M: int | None = None,
) -> float:
    """``max_f ||H_b f||_{H^p} / ||f||_{H^q}`` over a corpus of polynomials."""
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if not (0 < q < p and p > 1):
        raise ValueError("need 0 < q < p and p > 1")
    best = 0.0
    for f in corpus:
        grid = M or max(64, 4 * max(f.degree, b.degree) + 2)
        den = hardy_norm(f, q, grid)
        if den < 1e-14:
            continue
        best = max(best, hardy_norm(hankel_apply(b, f), p, grid) / den)
    return best
