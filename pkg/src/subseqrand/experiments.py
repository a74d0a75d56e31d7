"""Config-driven scenarios: selection, coding and estimators assembled into
desk-scale checks of the subsequence-randomness statements.

Every scenario returns an :class:`ExperimentResult` holding the raw
measurements and one :class:`Verdict` per criterion.  Verdicts store the
value and threshold they were decided on, so ``Verdict.recheck`` can
recompute them from the record alone.

Default thresholds are finite stand-ins for asymptotic statements.  They are
listed in ``DEFAULT_THRESHOLDS`` and can be overridden per config.
"""

from __future__ import annotations

import hashlib
import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .bitseq import BitString, complement, ones_density, select
from .coder import arith_encode, pad_or_truncate, reconstruct_selected
from .errors import ConfigError, RejectedInputError
from .estimators import (
    analyze,
    conditional_test_level,
    distinct_blocks,
    estimate_bernoulli_q,
    lz78_rate,
    normality_deviation,
    plugin_entropy_rate,
)
from .generators import FIBONACCI_CF, GeneratorSpec, parse_fraction, slope_cf_above
from .measures import bernoulli_measure, measure_from_descriptor

__all__ = [
    "SCENARIOS",
    "DEFAULT_THRESHOLDS",
    "ExperimentConfig",
    "ExperimentResult",
    "Verdict",
    "default_config",
    "run_experiment",
    "run_many",
    "matches_selected",
    "run_kw_forward",
    "run_kw_converse",
    "run_steinhaus",
    "run_density_sweep",
    "run_entropy_gap",
]

SCENARIOS = ("kw_forward", "kw_converse", "steinhaus", "density_sweep", "entropy_gap")

DEFAULT_THRESHOLDS: dict[str, dict[str, float]] = {
    "kw_forward": {"rate_gap": 0.05, "deviation_slack": 0.01, "density_floor": 0.05},
    "kw_converse": {"z_entropy_min": 0.99, "z_lz78_min": 0.8, "increment_slack": 2},
    "steinhaus": {"sigmas": 3.0, "min_selected": 1000},
    "density_sweep": {"mask_entropy_max": 0.05, "rate_drop": 0.05},
    "entropy_gap": {
        "deviation_max": 0.02,
        "entropy_min": 0.95,
        "lz78_min": 0.7,
        "zeros_lz78_max": 0.05,
        "sturmian_entropy_max": 0.05,
    },
}

CLAIMS = {
    "kw_forward": (
        "Kamae-Weiss analogue, forward direction: a computable selector of positive density "
        "keeps a random sequence random (ML-randomness and complexity-rate versions alike)"
    ),
    "kw_converse": (
        "Kamae-Weiss analogue, converse direction: arithmetic coding of a non-computable "
        "selector y yields a random z whose selection z/y is computable from y"
    ),
    "steinhaus": (
        "Steinhaus analogue: the Bernoulli parameter is recovered from subsequences chosen "
        "by computable selectors"
    ),
    "density_sweep": (
        "Steinhaus analogue with low-complexity selectors of density above 1 - eps"
    ),
    "entropy_gap": (
        "Champernowne example: computable (complexity rate 0) yet its empirical block "
        "entropy is full"
    ),
}

ENTROPY_GAP_NOTE = (
    "The estimators measure finite-state compressibility, not Kolmogorov complexity. "
    "Champernowne's sequence is computable, so its true complexity rate is 0, yet block "
    "statistics and LZ78 read it as incompressible. The gap is the expected outcome."
)

DEFAULT_EPSILONS = ("1/2", "1/5", "1/10", "1/20")
ENTROPY_K = 10
K_MAX = 3
FACTOR_K_MAX = 20


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    name: str
    value: float
    comparator: str
    threshold: float
    passed: bool

    _OPS = {"<=": operator.le, ">=": operator.ge, "==": operator.eq}

    @classmethod
    def check(cls, name: str, value, comparator: str, threshold) -> "Verdict":
        value = float(value) if not isinstance(value, bool) else value
        passed = bool(cls._OPS[comparator](value, threshold))
        return cls(name, value, comparator, threshold, passed)

    def recheck(self) -> bool:
        return bool(self._OPS[self.comparator](self.value, self.threshold))


@dataclass
class ExperimentConfig:
    scenario: str
    n: int
    source: GeneratorSpec | None = None
    masks: list[GeneratorSpec] = field(default_factory=list)
    measure: dict | None = None
    thresholds: dict[str, float] = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)
    workers: int = 1

    def threshold(self, name: str) -> float:
        return self.thresholds.get(name, DEFAULT_THRESHOLDS[self.scenario][name])

    @classmethod
    def from_dict(cls, data: Any) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("experiment config must be a JSON object")
        scenario = data.get("scenario")
        if scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
        allowed = {"scenario", "n", "source", "masks", "mask", "measure", "thresholds", "rows", "workers"}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        n = data.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigError(f"'n' must be a positive integer, got {n!r}")
        thresholds = data.get("thresholds", {})
        if not isinstance(thresholds, dict):
            raise ConfigError("'thresholds' must be an object")
        known = DEFAULT_THRESHOLDS[scenario]
        for key, value in thresholds.items():
            if key not in known:
                raise ConfigError(f"unknown threshold {key!r} for {scenario}; known: {sorted(known)}")
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"threshold {key!r} must be a finite number, got {value!r}")
        try:
            source = GeneratorSpec.from_dict(data["source"]) if data.get("source") else None
            mask_data = data.get("masks", [data["mask"]] if "mask" in data else [])
            if not isinstance(mask_data, list):
                raise ConfigError("'masks' must be a list of generator specs")
            masks = [GeneratorSpec.from_dict(m) for m in mask_data]
            measure = data.get("measure")
            if measure is not None:
                measure_from_descriptor(measure)
        except RejectedInputError as exc:
            raise ConfigError(str(exc)) from exc
        rows = data.get("rows", [])
        if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
            raise ConfigError("'rows' must be a list of objects")
        workers = data.get("workers", 1)
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise ConfigError("'workers' must be a positive integer")
        return cls(scenario, n, source, masks, measure, dict(thresholds), rows, workers)

    def to_dict(self) -> dict:
        out: dict = {"scenario": self.scenario, "n": self.n}
        if self.source is not None:
            out["source"] = self.source.to_dict()
        if self.masks:
            out["masks"] = [m.to_dict() for m in self.masks]
        if self.measure is not None:
            out["measure"] = self.measure
        if self.thresholds:
            out["thresholds"] = dict(self.thresholds)
        if self.rows:
            out["rows"] = [dict(r) for r in self.rows]
        return out


@dataclass
class ExperimentResult:
    scenario: str
    claim: str
    config: dict
    measurements: dict[str, dict[str, Any]]
    verdicts: list[Verdict]
    notes: list[str] = field(default_factory=list)
    skipped: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "claim": self.claim,
            "config": self.config,
            "measurements": self.measurements,
            "verdicts": [asdict(v) for v in self.verdicts],
            "passed": self.passed,
            "skipped": self.skipped,
            "notes": list(self.notes),
            "provenance": self.provenance,
        }

    def csv_rows(self) -> list[tuple[str, str, str, Any]]:
        """(scenario, subject, quantity, value), in a stable order."""
        return [
            (self.scenario, subject, quantity, value)
            for subject, quantities in self.measurements.items()
            for quantity, value in quantities.items()
        ]

    def summary(self) -> str:
        lines = [f"scenario: {self.scenario}", f"claim: {self.claim}"]
        if self.skipped:
            lines.append("SKIPPED")
        for v in self.verdicts:
            mark = "PASS" if v.passed else "FAIL"
            lines.append(f"  [{mark}] {v.name}: {v.value:.6g} {v.comparator} {v.threshold:g}")
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# --------------------------------------------------------------------------

def _sha(bits: BitString) -> str:
    return hashlib.sha256(bits.packed).hexdigest()


def _flat_report(x: BitString, entropy_k=(ENTROPY_K,)) -> dict[str, Any]:
    ks = [k for k in entropy_k if k <= len(x)]
    rep = analyze(x, k_max=min(K_MAX, len(x)), entropy_k=ks)
    out: dict[str, Any] = {"n": rep.n}
    out.update({f"normality_dev.{k}": v for k, v in rep.normality_dev.items()})
    out["normality_dev.max"] = max(rep.normality_dev.values())
    out.update({f"plugin_entropy.{k}": v for k, v in rep.plugin_entropy.items()})
    out["lz78.rate"] = rep.lz78_rate
    out["lz78.phrases"] = rep.lz78_phrases
    return out


def _label(spec: GeneratorSpec) -> str:
    p = spec.params
    if spec.kind == "periodic":
        return f"periodic:{p['pattern']}"
    if spec.kind == "sturmian":
        return "sturmian:" + ",".join(str(a) for a in p["cf"])
    if spec.kind == "bernoulli":
        return f"bernoulli:{p['q']}@{p['seed']}"
    return spec.kind


def _map(cfg: ExperimentConfig, fn: Callable, items: Sequence):
    if cfg.workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _provenance(cfg: ExperimentConfig) -> dict:
    seeds = []
    for spec in ([cfg.source] if cfg.source else []) + list(cfg.masks):
        if spec.kind == "bernoulli":
            seeds.append(spec.params["seed"])
    return {"tool_version": __version__, "numpy": np.__version__, "seeds": seeds}


def _require_source(cfg: ExperimentConfig, q: Fraction | None = None) -> GeneratorSpec:
    src = cfg.source
    if src is None or src.kind != "bernoulli":
        raise ConfigError(f"{cfg.scenario} needs a seeded bernoulli source")
    if q is not None and parse_fraction(src.params["q"]) != q:
        raise ConfigError(f"{cfg.scenario} needs a bernoulli({q}) source")
    return src


def _result(cfg, measurements, verdicts, notes=(), skipped=False) -> ExperimentResult:
    return ExperimentResult(
        scenario=cfg.scenario,
        claim=CLAIMS[cfg.scenario],
        config=cfg.to_dict(),
        measurements=measurements,
        verdicts=list(verdicts),
        notes=list(notes),
        skipped=skipped,
        provenance=_provenance(cfg),
    )


# --------------------------------------------------------------------------

def run_kw_forward(cfg: ExperimentConfig) -> ExperimentResult:
    src = _require_source(cfg, Fraction(1, 2))
    if not cfg.masks:
        raise ConfigError("kw_forward needs at least one mask")
    floor = cfg.threshold("density_floor")
    n = cfg.n
    masks = []
    for spec in cfg.masks:
        if not spec.computable_selector:
            raise ConfigError(f"kw_forward masks must be computable, got {spec.kind}")
        y = spec.generate(n)
        density = ones_density(y, n)
        if density < floor:
            raise ConfigError(
                f"mask {_label(spec)} has prefix density {float(density):.4g} below {floor}; "
                "the selector must have positive density (lim (1/n) sum y_i > 0)"
            )
        masks.append((spec, y, density))

    x = src.generate(n)
    x_stats = _flat_report(x)
    measurements = {"x": x_stats}

    def one(item):
        spec, y, density = item
        stats = _flat_report(select(x, y))
        stats["mask_density"] = float(density)
        rest = select(x, complement(y))
        return _label(spec), stats, (_flat_report(rest) if len(rest) else {"n": 0})

    verdicts = []
    for label, stats, rest in _map(cfg, one, masks):
        measurements[f"x/y[{label}]"] = stats
        measurements[f"x/~y[{label}]"] = rest
        verdicts.append(Verdict.check(
            f"rate_gap[{label}]", abs(stats["lz78.rate"] - x_stats["lz78.rate"]),
            "<=", cfg.threshold("rate_gap")))
        verdicts.append(Verdict.check(
            f"deviation[{label}]", stats["normality_dev.max"],
            "<=", x_stats["normality_dev.max"] + cfg.threshold("deviation_slack")))
    return _result(cfg, measurements, verdicts)


def run_kw_converse(cfg: ExperimentConfig) -> ExperimentResult:
    src = _require_source(cfg)
    q = parse_fraction(src.params["q"])
    M = measure_from_descriptor(cfg.measure) if cfg.measure else bernoulli_measure(q)
    if M.is_uniform() or q in (0, 1):
        return _result(
            cfg, {}, [],
            notes=["degenerate: the coding measure is uniform or the source is constant, "
                   "so coding is (near) identity and the check carries no information"],
            skipped=True,
        )
    n = cfg.n
    y = src.generate(n)
    stream = arith_encode(M, y)
    z = stream.code
    z_pad, padding = pad_or_truncate(z, n)
    z_over_y = select(z_pad, y)
    rederived = reconstruct_selected(M, y, n)
    min_cond, level = conditional_test_level(M, y)
    bound = math.ceil(-math.log2(min_cond)) + cfg.threshold("increment_slack")

    z_stats = _flat_report(z)
    summary = stream.summary()
    measurements = {
        "y": _flat_report(y),
        "z": z_stats,
        "z/y": {
            "n": len(z_over_y),
            "sha256": _sha(z_over_y),
            "rederived_sha256": _sha(rederived),
            "padding": padding,
        },
        "code": {
            "code_length": summary["code_length"],
            "l_n": summary["l_n"],
            "max_increment": summary["max_increment"],
            "max_decode_lag": summary["max_decode_lag"],
            "quantization_penalty_bits": summary["quantization_penalty_bits"],
            "min_cond": str(min_cond),
            "test_level": level,
        },
    }
    verdicts = [
        Verdict.check("z_plugin_entropy", z_stats[f"plugin_entropy.{ENTROPY_K}"],
                      ">=", cfg.threshold("z_entropy_min")),
        Verdict.check("z_lz78_rate", z_stats["lz78.rate"], ">=", cfg.threshold("z_lz78_min")),
        Verdict.check("z_over_y_rederivable", float(rederived == z_over_y), "==", 1.0),
        Verdict.check("max_increment", summary["max_increment"], "<=", bound),
    ]
    notes = [
        "z/y is a deterministic function of (M, y); bit-exact re-derivation is the finite "
        "witness that it carries no randomness relative to y",
    ]
    return _result(cfg, measurements, verdicts, notes)


def run_steinhaus(cfg: ExperimentConfig) -> ExperimentResult:
    src = _require_source(cfg)
    q = parse_fraction(src.params["q"])
    masks = cfg.masks or default_masks("steinhaus")
    n = cfg.n
    sigmas = cfg.threshold("sigmas")
    minimum = cfg.threshold("min_selected")
    ys = []
    for spec in masks:
        if not spec.computable_selector:
            raise ConfigError(f"steinhaus masks must be computable, got {spec.kind}")
        y = spec.generate(n)
        if y.popcount < minimum:
            raise ConfigError(
                f"mask {_label(spec)} selects {y.popcount} bits, fewer than {minimum:g}; "
                "the confidence interval would be meaningless"
            )
        ys.append((spec, y))
    x = src.generate(n)

    def one(item):
        spec, y = item
        sub = select(x, y)
        q_hat, _ = estimate_bernoulli_q(sub)
        radius = sigmas * math.sqrt(float(q_hat * (1 - q_hat)) / len(sub))
        return _label(spec), {
            "selected": len(sub),
            "q_hat": float(q_hat),
            "q_hat_exact": str(q_hat),
            "radius": radius,
        }

    rows = _map(cfg, one, ys)
    measurements = {"x": {"n": n, "q": str(q), "popcount": x.popcount}}
    verdicts = []
    for label, stats in rows:
        measurements[f"x/y[{label}]"] = stats
        verdicts.append(Verdict.check(
            f"contains_q[{label}]", abs(stats["q_hat"] - float(q)), "<=", stats["radius"]))
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            (la, a), (lb, b) = rows[i], rows[j]
            verdicts.append(Verdict.check(
                f"consistent[{la}|{lb}]", abs(a["q_hat"] - b["q_hat"]),
                "<=", a["radius"] + b["radius"]))
    return _result(cfg, measurements, verdicts)


def _factor_violations(y: BitString, k_max: int = FACTOR_K_MAX) -> int:
    return sum(distinct_blocks(y, k) != k + 1 for k in range(1, min(k_max, len(y)) + 1))


def run_density_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    src = _require_source(cfg, Fraction(1, 2))
    rows = cfg.rows or default_rows()
    for row in rows:
        if "epsilon" not in row:
            raise ConfigError("each density_sweep row needs an 'epsilon'")
        if not row.get("cf"):
            raise ConfigError(f"density_sweep row eps={row['epsilon']} lacks the slope continued fraction 'cf'")
    n = cfg.n
    x = src.generate(n)
    x_stats = _flat_report(x)
    measurements = {"x": x_stats}

    def one(row):
        eps = parse_fraction(row["epsilon"])
        spec = GeneratorSpec("sturmian", {"cf": list(row["cf"])})
        y = spec.generate(n)
        stats = _flat_report(select(x, y))
        stats["mask_density"] = float(ones_density(y, n))
        # prefix densities along the way; no limit is asserted
        m = 1000
        while m < n:
            stats[f"mask_density_at.{m}"] = float(ones_density(y, m))
            m *= 10
        stats["mask_plugin_entropy"] = plugin_entropy_rate(y, ENTROPY_K)
        stats["mask_factor_violations"] = _factor_violations(y)
        return eps, stats

    verdicts = []
    for eps, stats in _map(cfg, one, rows):
        tag = f"eps={eps}"
        measurements[f"x/y[{tag}]"] = stats
        verdicts.append(Verdict.check(
            f"mask_entropy[{tag}]", stats["mask_plugin_entropy"], "<=",
            cfg.threshold("mask_entropy_max")))
        verdicts.append(Verdict.check(
            f"rate_floor[{tag}]", stats["lz78.rate"], ">=",
            x_stats["lz78.rate"] - cfg.threshold("rate_drop")))
        verdicts.append(Verdict.check(
            f"mask_density[{tag}]", stats["mask_density"], ">=", float(1 - eps)))
        verdicts.append(Verdict.check(
            f"mask_sturmian[{tag}]", stats["mask_factor_violations"], "==", 0))

    identity = _flat_report(select(x, BitString.ones(n)))
    measurements["x/y[identity]"] = identity
    verdicts.append(Verdict.check(
        "identity_row", float(identity == x_stats), "==", 1.0))
    return _result(cfg, measurements, verdicts)


def run_entropy_gap(cfg: ExperimentConfig) -> ExperimentResult:
    n = cfg.n
    subjects = {
        "champernowne": GeneratorSpec("champernowne"),
        "zeros": GeneratorSpec("periodic", {"pattern": "0"}),
        "sturmian_fib": GeneratorSpec("sturmian", {"cf": list(FIBONACCI_CF)}),
    }

    def one(item):
        name, spec = item
        return name, _flat_report(spec.generate(n))

    measurements = dict(_map(cfg, one, list(subjects.items())))
    ch, zs, st = measurements["champernowne"], measurements["zeros"], measurements["sturmian_fib"]
    h = f"plugin_entropy.{ENTROPY_K}"
    verdicts = [
        Verdict.check("champernowne_deviation", ch["normality_dev.max"], "<=", cfg.threshold("deviation_max")),
        Verdict.check("champernowne_entropy", ch[h], ">=", cfg.threshold("entropy_min")),
        Verdict.check("champernowne_lz78", ch["lz78.rate"], ">=", cfg.threshold("lz78_min")),
        Verdict.check("zeros_entropy", zs[h], "<=", 0.0),
        Verdict.check("zeros_lz78", zs["lz78.rate"], "<=", cfg.threshold("zeros_lz78_max")),
        Verdict.check("sturmian_entropy", st[h], "<=", cfg.threshold("sturmian_entropy_max")),
    ]
    return _result(cfg, measurements, verdicts, [ENTROPY_GAP_NOTE])


def matches_selected(result: ExperimentResult, candidate: BitString) -> bool:
    """Whether ``candidate`` is bit-for-bit the z/y recorded in a kw_converse result."""
    record = result.measurements["z/y"]
    return len(candidate) == record["n"] and _sha(candidate) == record["sha256"]


RUNNERS: dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    "kw_forward": run_kw_forward,
    "kw_converse": run_kw_converse,
    "steinhaus": run_steinhaus,
    "density_sweep": run_density_sweep,
    "entropy_gap": run_entropy_gap,
}


def run_experiment(cfg: ExperimentConfig | dict) -> ExperimentResult:
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_dict(cfg)
    try:
        return RUNNERS[cfg.scenario](cfg)
    except RejectedInputError as exc:
        raise ConfigError(str(exc)) from exc


def run_many(configs: Sequence[ExperimentConfig | dict], workers: int = 1) -> list[ExperimentResult]:
    """Run independent scenarios, serially or on a thread pool; order is preserved."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_experiment, configs))
    return [run_experiment(c) for c in configs]


# --------------------------------------------------------------------------

def default_masks(scenario: str) -> list[GeneratorSpec]:
    if scenario == "kw_forward":
        return [
            GeneratorSpec("periodic", {"pattern": "01"}),
            GeneratorSpec("sturmian", {"cf": list(FIBONACCI_CF)}),
        ]
    return [
        GeneratorSpec("periodic", {"pattern": "01"}),
        GeneratorSpec("periodic", {"pattern": "001"}),
        GeneratorSpec("periodic", {"pattern": "0001"}),
        GeneratorSpec("sturmian", {"cf": list(FIBONACCI_CF)}),
    ]


def default_rows(epsilons: Sequence[str] = DEFAULT_EPSILONS) -> list[dict]:
    return [
        {"epsilon": e, "cf": slope_cf_above(1 - parse_fraction(e))} for e in epsilons
    ]


def default_config(scenario: str, n: int = 10**6) -> ExperimentConfig:
    """The reference configuration of each scenario."""
    if scenario == "kw_forward":
        return ExperimentConfig(scenario, n, GeneratorSpec("bernoulli", {"q": "1/2", "seed": 42}),
                                default_masks(scenario))
    if scenario == "kw_converse":
        return ExperimentConfig(scenario, n, GeneratorSpec("bernoulli", {"q": "1/3", "seed": 9}),
                                measure={"bernoulli": {"q": "1/3"}})
    if scenario == "steinhaus":
        return ExperimentConfig(scenario, n, GeneratorSpec("bernoulli", {"q": "3/10", "seed": 7}),
                                default_masks(scenario))
    if scenario == "density_sweep":
        return ExperimentConfig(scenario, n, GeneratorSpec("bernoulli", {"q": "1/2", "seed": 42}),
                                rows=default_rows())
    if scenario == "entropy_gap":
        return ExperimentConfig(scenario, n)
    raise ConfigError(f"unknown scenario {scenario!r}")
