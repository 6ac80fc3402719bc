"""Seeded experiment runner: configs, reports and the four studies.

Every report is a pure function of its :class:`ExperimentConfig`.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .atoms import dyadic_atom_family
from .bht import (
    bht_multiplier,
    bht_tilde_quadrature,
    correction_term,
    pv_quadrature,
    reconstruct_truncation,
)
from .corpus import lacunary, random_analytic, random_trigpoly, symbol_from_name
from .hankel import (
    TruncationMask,
    hankel_apply,
    hankel_integral,
    multilinear_norm_lower,
    truncate_apply,
)
from .spaces import lipschitz_norm, lp_norm
from .trigpoly import (
    TrigPoly,
    cauchy_projection,
    dilate2,
    eval_grid,
    max_coeff_diff,
    multiply,
    to_conjugate_variable,
)

__all__ = [
    "ExperimentConfig",
    "Report",
    "Row",
    "load_config",
    "parse_config",
    "run_identity_suite",
    "run_truncation_norm_study",
    "run_atom_study",
    "run_bht_convergence",
    "run_scenario",
    "emit",
    "load_report",
    "roundoff_floor",
]

EXACT_TOL = 1e-12
SPLIT_TOL = 1e-5
NOISE_FACTOR = 2.0
SCENARIOS = ("identity", "truncnorm", "atoms", "bhtconv")


@dataclass
class ExperimentConfig:
    scenario: str = "identity"
    seed: int = 0
    # identity suite corpus sizes
    cases: int = 200
    correspondence_cases: int = 100
    splitting_cases: int = 50
    degree: int = 64
    split_degree: int = 16
    grid_sizes: tuple[int, ...] = (256, 512, 1024, 2048, 4096)
    # exponents; alpha defaults to 1/q - 1/p
    p: float = 2.0
    q: float = 1.0
    alpha: float | None = None
    arity: int = 2
    beta: tuple[float, ...] | None = None
    gamma: float = 0.0
    sections: tuple[int, ...] = (16, 32, 64, 128)
    rounds: int = 10
    symbol: str = "lacunary"
    lacunary_J: int = 8
    scale_exponents: tuple[int, ...] = (3, 4, 5, 6)
    atom_seeds: int = 5
    dilate: bool = False
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if any(M % 2 for M in self.grid_sizes):
            raise ValueError("grid sizes must be even")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.beta is not None and len(self.beta) != self.arity:
            raise ValueError("beta length must equal arity")
        if self.scenario == "atoms":
            if not (self.q <= 1 < self.p):
                raise ValueError("atom study needs q <= 1 < p")
            want = 1 / self.q - 1 / self.p
            if self.alpha is not None and abs(self.alpha - want) > 1e-12:
                raise ValueError("atom study needs alpha = 1/q - 1/p")

    @property
    def alpha_value(self) -> float:
        return self.alpha if self.alpha is not None else 1 / self.q - 1 / self.p

    @property
    def mask(self) -> TruncationMask:
        beta = self.beta if self.beta is not None else (1.0,) * self.arity
        return TruncationMask(beta, self.gamma)

    @property
    def scales(self) -> list[float]:
        return [math.pi / 2**k for k in self.scale_exponents]

    def as_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
            elif isinstance(v, float) and math.isinf(v):
                d[k] = repr(v)
        return d


_TUPLE_FIELDS = {
    "grid_sizes": int,
    "sections": int,
    "scale_exponents": int,
    "beta": float,
}
_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Parse a flat ``key = value`` document; ``#`` starts a comment."""
    types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, val, types[key])
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _coerce(key: str, val: str, typ: str):
    if key in _TUPLE_FIELDS:
        conv = _TUPLE_FIELDS[key]
        return tuple(conv(x) for x in val.replace(" ", "").split(",") if x)
    if val.lower() in ("none", ""):
        return None
    if "bool" in typ:
        return _BOOL[val.lower()]
    if typ.startswith("int"):
        return int(val)
    if "float" in typ:
        return float(val)
    return val


def load_config(path, **overrides) -> ExperimentConfig:
    return parse_config(Path(path).read_text(), **overrides)


# -- reports ---------------------------------------------------------------------


@dataclass
class Row:
    scenario: str
    params: dict[str, Any]
    metric: str
    value: Any

    def params_str(self) -> str:
        return ";".join(f"{k}={_fmt(v)}" for k, v in self.params.items())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


@dataclass
class Report:
    rows: list[Row] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add(self, scenario: str, metric: str, value, **params) -> None:
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        self.rows.append(Row(scenario, params, metric, value))

    def extend(self, other: "Report") -> None:
        self.rows.extend(other.rows)
        for k, v in other.metadata.items():
            self.metadata.setdefault(k, v)

    def values(self, metric: str, scenario: str | None = None, **params) -> list:
        out = []
        for r in self.rows:
            if r.metric != metric or (scenario and r.scenario != scenario):
                continue
            if all(r.params.get(k) == v for k, v in params.items()):
                out.append(r.value)
        return out

    @property
    def checks(self) -> dict[str, bool]:
        return {r.scenario: bool(r.value) for r in self.rows if r.metric == "pass"}

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "params", "metric", "value"])
        for r in self.rows:
            w.writerow([r.scenario, r.params_str(), r.metric, _fmt(r.value)])
        return buf.getvalue()

    def to_json(self) -> str:
        obj = {
            "metadata": self.metadata,
            "rows": [
                {"scenario": r.scenario, "params": r.params, "metric": r.metric, "value": r.value}
                for r in self.rows
            ],
        }
        return json.dumps(obj, indent=1, default=_json_default) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        obj = json.loads(text)
        rows = [Row(r["scenario"], r["params"], r["metric"], r["value"]) for r in obj["rows"]]
        return cls(rows, obj.get("metadata", {}))


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def emit(report: Report, fmt: str, path, plots: bool = False) -> list[Path]:
    """Write ``report`` as csv or json; with ``plots`` also SVG series plots."""
    path = Path(path)
    text = {"csv": report.to_csv, "json": report.to_json}
    if fmt not in text:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text[fmt]())
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    written = [path]
    if plots:
        from .plots import plot_report

        written += plot_report(report, path.with_suffix(""))
    return written


def load_report(path) -> Report:
    return Report.from_json(Path(path).read_text())


def _metadata(cfg: ExperimentConfig, **tolerances) -> dict[str, Any]:
    return {
        "artifact_version": __version__,
        "seed": cfg.seed,
        "config": cfg.as_dict(),
        "tolerances": tolerances,
    }


# -- identity suite ----------------------------------------------------------------


def _random_degree(rng, hi):
    return int(rng.integers(0, hi + 1))


def _symbol(rng, cfg, degree):
    if cfg.symbol == "zero":
        return TrigPoly()
    return random_analytic(rng, degree)


def _record_check(rep, name, residual, tol, failing=None, **params):
    ok = residual <= tol
    rep.add(name, "max_residual", float(residual), **params)
    rep.add(name, "tolerance", float(tol), **params)
    rep.add(name, "pass", int(ok), **params)
    if not ok and failing is not None:
        rep.add(name, "failing_input", json.dumps(failing, sort_keys=True), **params)


def _worst(cur, residual, inputs):
    if cur is None or residual > cur[0]:
        return (residual, inputs)
    return cur


def check_hankel_definitions(cfg, rng, n_cases) -> tuple[float, dict | None]:
    worst = None
    for _ in range(n_cases):
        b = _symbol(rng, cfg, _random_degree(rng, cfg.degree))
        f = random_analytic(rng, _random_degree(rng, cfg.degree))
        res = max_coeff_diff(hankel_apply(b, f), hankel_integral(b, f))
        worst = _worst(worst, res, {"b": b.to_json_obj(), "f": f.to_json_obj()})
    return worst if worst else (0.0, None)


def check_multilinear_correspondence(cfg, rng, n_cases, arity) -> tuple[float, dict | None]:
    mask = TruncationMask.standard(arity)
    lin = TruncationMask.standard(1)
    hand_b = TrigPoly.from_dense(np.arange(1, 6))
    hand_f = TrigPoly.from_dense([1, 1])
    cases = [(hand_b, [hand_f] * arity)]
    for _ in range(n_cases):
        b = _symbol(rng, cfg, _random_degree(rng, cfg.degree))
        fs = [random_analytic(rng, _random_degree(rng, max(cfg.degree // (2 * arity), 1))) for _ in range(arity)]
        cases.append((b, fs))
    worst = None
    for b, fs in cases:
        prod = fs[0]
        for g in fs[1:]:
            prod = multiply(prod, g)
        res = max_coeff_diff(truncate_apply(mask, b, fs), truncate_apply(lin, b, [prod]))
        worst = _worst(worst, res, {"b": b.to_json_obj(), "fs": [f.to_json_obj() for f in fs]})
    return worst


def check_reconstruction(cfg, rng, n_cases) -> tuple[float, dict | None]:
    mask = TruncationMask.standard(1)
    cases = [(TrigPoly.from_dense([1, 2, 3]), TrigPoly.from_dense([1, 1]))]
    for _ in range(n_cases):
        cases.append((_symbol(rng, cfg, _random_degree(rng, cfg.degree)), random_analytic(rng, _random_degree(rng, cfg.degree))))
    worst = None
    for b, f in cases:
        res = max_coeff_diff(reconstruct_truncation(b, f), truncate_apply(mask, b, [f]))
        worst = _worst(worst, res, {"b": b.to_json_obj(), "f": f.to_json_obj()})
    return worst


def check_doubled_frequencies(cfg, rng, n_cases) -> tuple[float, dict | None]:
    """Cauchy projection of ``b(2x) F(2x)`` against ``H_b f`` at ``z^2``."""
    worst = None
    for _ in range(n_cases):
        b = _symbol(rng, cfg, _random_degree(rng, cfg.degree))
        f = random_analytic(rng, _random_degree(rng, cfg.degree))
        lhs = cauchy_projection(multiply(dilate2(b), dilate2(to_conjugate_variable(f))))
        rhs = dilate2(hankel_apply(b, f))
        res = max_coeff_diff(lhs, rhs)
        worst = _worst(worst, res, {"b": b.to_json_obj(), "f": f.to_json_obj()})
    return worst if worst else (0.0, None)


def roundoff_floor(b: TrigPoly, g: TrigPoly) -> float:
    """``64 eps ||b||_A ||g||_A``, a bound on the sup-norm roundoff scale."""
    wa = sum(abs(v) for v in b.coeffs.values()) * sum(abs(v) for v in g.coeffs.values())
    return 64 * np.finfo(float).eps * wa


def splitting_errors(b: TrigPoly, g: TrigPoly, grid_sizes) -> tuple[list[float], list[float]]:
    """Sup-norm errors of ``Ht`` against ``H - correction`` and of ``H`` itself."""
    H = bht_multiplier(b, g)
    C = correction_term(b, g)
    split, pv = [], []
    for M in grid_sizes:
        ref = eval_grid(H, M)
        split.append(float(np.abs(ref - eval_grid(C, M) - bht_tilde_quadrature(b, g, M)).max()))
        pv.append(float(np.abs(pv_quadrature(b, g, M) - ref).max()))
    return split, pv


def decreasing_within_noise(errs, floor: float = 0.0, factor: float = NOISE_FACTOR) -> bool:
    return all(errs[i + 1] <= factor * errs[i] + floor for i in range(len(errs) - 1))


def check_splitting(cfg, rng, n_cases):
    worst = None
    mono_ok = True
    mono_literal = True
    for _ in range(n_cases):
        b = random_trigpoly(rng, _random_degree(rng, cfg.split_degree))
        g = random_trigpoly(rng, _random_degree(rng, cfg.split_degree))
        if cfg.symbol == "zero":
            b = TrigPoly()
        split, _ = splitting_errors(b, g, cfg.grid_sizes)
        floor = roundoff_floor(b, g)
        mono_ok &= decreasing_within_noise(split, floor)
        mono_literal &= decreasing_within_noise(split)
        worst = _worst(worst, split[-1], {"b": b.to_json_obj(), "g": g.to_json_obj()})
    return worst or (0.0, None), mono_ok, mono_literal


def run_identity_suite(cfg: ExperimentConfig) -> Report:
    rng = np.random.default_rng(cfg.seed)
    rep = Report(metadata=_metadata(cfg, exact=EXACT_TOL, splitting=SPLIT_TOL, noise_factor=NOISE_FACTOR))

    res, bad = check_hankel_definitions(cfg, rng, cfg.cases)
    _record_check(rep, "hankel_definitions", res, EXACT_TOL, bad, cases=cfg.cases, degree=cfg.degree)

    for n in sorted({2, 3, cfg.arity} - {1}):
        res, bad = check_multilinear_correspondence(cfg, rng, cfg.correspondence_cases, n)
        _record_check(rep, f"multilinear_correspondence_n{n}", res, EXACT_TOL, bad, cases=cfg.correspondence_cases, n=n)

    res, bad = check_reconstruction(cfg, rng, cfg.cases)
    _record_check(rep, "truncation_reconstruction", res, EXACT_TOL, bad, cases=cfg.cases, degree=cfg.degree)

    res, bad = check_doubled_frequencies(cfg, rng, cfg.cases)
    _record_check(rep, "doubled_frequency_identity", res, EXACT_TOL, bad, cases=cfg.cases, degree=cfg.degree)

    (res, bad), mono, literal = check_splitting(cfg, rng, cfg.splitting_cases)
    M = max(cfg.grid_sizes)
    _record_check(rep, "splitting_identity", res, SPLIT_TOL, bad, cases=cfg.splitting_cases, M=M, degree=cfg.split_degree)
    rep.add("splitting_convergence", "decreasing_literal", int(literal), cases=cfg.splitting_cases)
    rep.add("splitting_convergence", "pass", int(mono), cases=cfg.splitting_cases)
    return rep


# -- truncation norm study -----------------------------------------------------------


def _norm_study_symbol(cfg: ExperimentConfig) -> TrigPoly:
    if cfg.symbol == "lacunary":
        return lacunary((cfg.arity - 1) / 2, cfg.lacunary_J)
    return symbol_from_name(cfg.symbol, (cfg.arity - 1) / 2, cfg.lacunary_J, cfg.degree)


def run_truncation_norm_study(cfg: ExperimentConfig) -> Report:
    b = _norm_study_symbol(cfg)
    mask = cfg.mask
    rep = Report(metadata=_metadata(cfg))
    rep.metadata["plot"] = {"truncnorm": "N"}
    for N in cfg.sections:
        kw = dict(rounds=cfg.rounds, seed=cfg.seed)
        full = multilinear_norm_lower(b, cfg.arity, N, **kw)
        masked = multilinear_norm_lower(b, cfg.arity, N, mask=mask, **kw)
        ratio = masked / full if full > 0 else 0.0
        params = dict(n=cfg.arity, N=N, symbol=cfg.symbol, gamma=cfg.gamma)
        rep.add("truncnorm", "full_norm", full, **params)
        rep.add("truncnorm", "masked_norm", masked, **params)
        rep.add("truncnorm", "ratio", ratio, **params)
    return rep


# -- atom study ------------------------------------------------------------------------


def run_atom_study(cfg: ExperimentConfig) -> Report:
    q, p = cfg.q, cfg.p
    alpha = cfg.alpha_value
    M = max(cfg.grid_sizes)
    if cfg.symbol == "lacunary":
        b = lacunary(alpha, cfg.lacunary_J)
    else:
        b = symbol_from_name(cfg.symbol, alpha, cfg.lacunary_J, cfg.degree)
    lip = lipschitz_norm(b, alpha, M)
    atom_grid = M if cfg.dilate else M // 2
    fam = dyadic_atom_family(q, cfg.scales, range(cfg.seed, cfg.seed + cfg.atom_seeds), grid_size=atom_grid)

    rep = Report(metadata=_metadata(cfg))
    rep.metadata["plot"] = {"atoms": "scale"}
    common = dict(q=q, p=p, alpha=alpha)
    rep.add("atoms", "lipschitz_norm", lip, **common)
    per_scale: dict[float, float] = {}
    seeds = list(range(cfg.seed, cfg.seed + cfg.atom_seeds))
    for i, a in enumerate(fam):
        seed = seeds[i % len(seeds)]
        val = bht_tilde_quadrature(b, a, M, dilate=cfg.dilate)
        num = lp_norm(val, p)
        ratio = num / lip if lip > 0 else 0.0
        rep.add("atoms", "ratio", ratio, **common, scale=a.radius, seed=seed)
        per_scale[a.radius] = max(per_scale.get(a.radius, 0.0), ratio)
    for r, v in per_scale.items():
        rep.add("atoms", "sup_ratio_at_scale", v, **common, scale=r)
    rep.add("atoms", "sup_ratio", max(per_scale.values(), default=0.0), **common)
    return rep


# -- quadrature convergence ------------------------------------------------------------


def _bhtconv_corpus(cfg, rng):
    cases = [
        ("mode_b1_g1", TrigPoly.monomial(1), TrigPoly.monomial(1)),
        ("mode_b0_g1", TrigPoly.constant(1.0), TrigPoly.monomial(1)),
        ("mode_b3_gm2", TrigPoly.monomial(3), TrigPoly.monomial(-2)),
        ("const_b", TrigPoly.constant(2.0), random_trigpoly(rng, cfg.split_degree)),
    ]
    for i in range(cfg.splitting_cases):
        cases.append(
            (
                f"random_{i}",
                random_trigpoly(rng, _random_degree(rng, cfg.split_degree)),
                random_trigpoly(rng, _random_degree(rng, cfg.split_degree)),
            )
        )
    return cases


def run_bht_convergence(cfg: ExperimentConfig) -> Report:
    rng = np.random.default_rng(cfg.seed)
    rep = Report(metadata=_metadata(cfg, noise_factor=NOISE_FACTOR))
    rep.metadata["plot"] = {"bhtconv": "M"}
    for name, b, g in _bhtconv_corpus(cfg, rng):
        split, pv = splitting_errors(b, g, cfg.grid_sizes)
        for M, es, ep in zip(cfg.grid_sizes, split, pv):
            rep.add("bhtconv", "pv_error", ep, case=name, M=M)
            rep.add("bhtconv", "tilde_error", es, case=name, M=M)
        floor = roundoff_floor(b, g)
        rep.add("bhtconv", "roundoff_floor", floor, case=name)
        rep.add("bhtconv", "end_below_start_literal", int(split[-1] <= split[0] and pv[-1] <= pv[0]), case=name)
        rep.add(
            "bhtconv",
            "end_below_start",
            int(split[-1] <= split[0] + floor and pv[-1] <= pv[0] + floor),
            case=name,
        )
        rep.add(
            "bhtconv",
            "decreasing_within_noise",
            int(decreasing_within_noise(split, floor) and decreasing_within_noise(pv, floor)),
            case=name,
        )
    return rep


_RUNNERS = {
    "identity": run_identity_suite,
    "truncnorm": run_truncation_norm_study,
    "atoms": run_atom_study,
    "bhtconv": run_bht_convergence,
}


def run_scenario(cfg: ExperimentConfig) -> Report:
    return _RUNNERS[cfg.scenario](cfg)
