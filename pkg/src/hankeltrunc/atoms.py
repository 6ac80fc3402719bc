"""H^q(T) atoms backed by cell-centred grid samples.

An atom on a grid of size ``M`` stores one value per cell
``[i, i+1) * 2pi/M``; the value is attached to the cell centre
``(i + 1/2) * 2pi/M`` and the function is constant on the cell.  Moments are
computed with the same midpoint rule, which is exact for step functions up to
first-order moments.

Moments use the plain measure ``dt`` (not ``dt / 2pi``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Atom",
    "AtomCheck",
    "moment_order",
    "make_atom",
    "constant_atom",
    "check_atom",
    "dyadic_atom_family",
]

MOMENT_TOL = 1e-10
SUPPORT_TOL = 1e-10
MAX_RETRIES = 16


def moment_order(q: float) -> int:
    """Number of vanishing moments minus one: ``floor(1/q) - 1``."""
    if not 0 < q <= 1:
        raise ValueError("atoms need 0 < q <= 1")
    # guard against 1/q landing a hair below an integer
    return int(math.floor(1.0 / q + 1e-12)) - 1


def _signed_offset(x, center):
    return np.mod(np.asarray(x) - center + np.pi, 2 * np.pi) - np.pi


@dataclass(frozen=True)
class Atom:
    q: float
    center: float
    radius: float
    samples: np.ndarray = field(repr=False)
    kind: str = "interval"

    @property
    def grid_size(self) -> int:
        return self.samples.size

    @property
    def cell(self) -> float:
        return 2 * np.pi / self.grid_size

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.grid_size) + 0.5) * self.cell

    @property
    def length(self) -> float:
        """``|I|``: the full torus for the constant atom."""
        return 2 * np.pi if self.kind == "constant" else 2 * self.radius

    @property
    def m(self) -> int:
        return moment_order(self.q)

    @property
    def size_bound(self) -> float:
        if self.kind == "constant":
            return 1.0
        return self.length ** (-1.0 / self.q)

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.samples).max())

    def inside(self) -> np.ndarray:
        """Cells lying entirely inside ``I``."""
        if self.kind == "constant":
            return np.ones(self.grid_size, dtype=bool)
        off = np.abs(_signed_offset(self.nodes, self.center))
        return off + self.cell / 2 <= self.radius * (1 + 1e-12)

    def moments(self, order: int | None = None) -> np.ndarray:
        """``int a(t) (t - x_I)^j dt`` for ``j = 0..order``."""
        order = self.m if order is None else order
        off = _signed_offset(self.nodes, self.center)
        return np.array([np.sum(self.samples * off**j) * self.cell for j in range(order + 1)])

    def l1(self) -> float:
        return float(np.sum(np.abs(self.samples)) * self.cell)

    def evaluate(self, x) -> np.ndarray:
        """Step-function value at arbitrary points."""
        idx = np.floor(np.mod(np.asarray(x, dtype=float), 2 * np.pi) / self.cell).astype(int)
        return self.samples[np.mod(idx, self.grid_size)]

    def with_samples(self, samples: np.ndarray) -> "Atom":
        return Atom(self.q, self.center, self.radius, np.asarray(samples), self.kind)

    def to_json_obj(self) -> dict:
        return {
            "q": self.q,
            "center": self.center,
            "radius": self.radius,
            "kind": self.kind,
            "samples": [float(v) for v in self.samples],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Atom":
        return cls(obj["q"], obj["center"], obj["radius"], np.array(obj["samples"], dtype=float), obj.get("kind", "interval"))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


@dataclass(frozen=True)
class AtomCheck:
    support_leakage: float
    sup_excess: float
    moment_residual: float

    @property
    def passed(self) -> bool:
        return (
            self.support_leakage <= SUPPORT_TOL
            and self.sup_excess <= 0
            and self.moment_residual <= MOMENT_TOL
        )


def check_atom(a: Atom) -> AtomCheck:
    inside = a.inside()
    leak = float(np.abs(a.samples[~inside]).max()) if (~inside).any() else 0.0
    bound = a.size_bound
    # relative slack for the rescaling round-off
    excess = max(a.sup_norm - bound * (1 + 1e-12), 0.0)
    if a.kind == "constant":
        resid = 0.0
    else:
        resid = float(np.abs(a.moments()).max())
    return AtomCheck(leak, excess, resid)


def _project_moments(vals: np.ndarray, off: np.ndarray, m: int) -> np.ndarray:
    # Gram-Schmidt against the monomials off^j under the discrete inner product
    basis = []
    for j in range(m + 1):
        e = off**j
        for u in basis:
            e = e - np.dot(u, e) * u
        e = e / np.linalg.norm(e)
        basis.append(e)
    for _ in range(2):  # second pass mops up cancellation error
        for u in basis:
            vals = vals - np.dot(u, vals) * u
    return vals


def make_atom(
    q: float,
    center: float,
    radius: float,
    seed: int,
    grid_size: int = 2048,
    steps: int = 8,
) -> Atom:
    """Random step-profile atom on ``I = (center - radius, center + radius)``.

    ``steps`` random levels are spread over ``I`` and sampled on the cells
    inside ``I``; moments up to ``floor(1/q) - 1`` are projected out and the
    result is scaled to sup-norm ``|I|^{-1/q}``.  A profile that vanishes after
    projection is redrawn with the next seed.
    """
    if not 0 < q <= 1:
        raise ValueError("atoms need 0 < q <= 1")
    if not 0 < radius < np.pi / 4:
        raise ValueError("atom radius must lie in (0, pi/4)")
    m = moment_order(q)
    proto = Atom(q, float(center) % (2 * np.pi), float(radius), np.zeros(grid_size))
    inside = proto.inside()
    if inside.sum() < m + 2:
        raise ValueError("grid too coarse for this atom radius")
    off = _signed_offset(proto.nodes[inside], proto.center)
    slot = np.minimum(((off + radius) / (2 * radius) * steps).astype(int), steps - 1)

    for attempt in range(MAX_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        levels = rng.standard_normal(steps)
        vals = _project_moments(levels[slot], off, m)
        peak = np.abs(vals).max()
        if peak > 1e-8 * np.abs(levels).max():
            samples = np.zeros(grid_size)
            samples[inside] = vals * (proto.size_bound / peak)
            return proto.with_samples(samples)
    raise RuntimeError(f"degenerate atom profile after {MAX_RETRIES} retries")


def constant_atom(q: float = 1.0, grid_size: int = 2048) -> Atom:
    return Atom(q, 0.0, np.pi, np.ones(grid_size), kind="constant")


def dyadic_atom_family(
    q: float,
    scales: Sequence[float],
    seeds: Iterable[int],
    grid_size: int = 2048,
    steps: int = 8,
) -> list[Atom]:
    """One atom per ``(scale, seed)``; the centre is drawn from the seed."""
    seeds = list(seeds)
    out = []
    for r in scales:
        for s in seeds:
            center = np.random.default_rng([s, 7919]).uniform(0, 2 * np.pi)
            out.append(make_atom(q, center, r, s, grid_size=grid_size, steps=steps))
    return out
