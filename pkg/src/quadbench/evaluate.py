"""Trial-matrix orchestration, success aggregation and bootstrap CIs.

Each (algorithm, scenario family, platform) cell runs ten trials, one
per published scene instance (trial i uses scene index i+1).  Per-cell
seeds are derived by hashing so adding algorithms or platforms never
perturbs existing cells.
"""

import csv
import hashlib
import io
import json
from dataclasses import dataclass

import numpy as np

from .geometry import FAMILIES, family_class
from .kinodyn import PlatformRecord
from .scenegen import generate
from .sim import TaskSpec, run_trial

SCENE_INDICES = tuple(range(1, 11))


def stable_seed(*parts) -> int:
    """Deterministic 63-bit seed from string-able parts (order matters)."""
    digest = hashlib.blake2b("|".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "little") >> 1


@dataclass(frozen=True)
class ConfidenceInterval:
    mean: float
    lower: float
    upper: float
    level: float = 0.95
    resamples: int = 1000

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must be in (0, 1)")
        if not self.lower - 1e-12 <= self.mean <= self.upper + 1e-12:
            raise ValueError("interval must contain the mean")


def bootstrap_ci(samples, resamples: int = 1000, level: float = 0.95,
                 seed: int = 0) -> ConfidenceInterval:
    """Percentile bootstrap of the mean; deterministic for a fixed seed."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("samples must be non-empty")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, samples.size, size=(resamples, samples.size))
    means = samples[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lower, upper = np.quantile(means, [alpha, 1.0 - alpha])
    return ConfidenceInterval(mean=float(samples.mean()), lower=float(lower),
                              upper=float(upper), level=level, resamples=resamples)


@dataclass(frozen=True)
class Algorithm:
    """A planner under test: factory plus optional family restriction."""

    name: str
    make: object  # zero-argument callable returning a fresh planner
    families: frozenset | None = None  # None = all families supported

    def supports(self, family: str) -> bool:
        return self.families is None or family in self.families


@dataclass(frozen=True)
class CellResult:
    rate: float
    trials: int
    outcomes: tuple
    ci: ConfidenceInterval


@dataclass
class SuccessMatrix:
    """Success rates indexed by algorithm x scenario family x platform.

    ``cells`` maps every (algorithm, family, platform name) key either
    to a CellResult or to None: missing cells are explicit, never
    silently zero.
    """

    algorithms: tuple
    scenarios: tuple  # (family, class)
    platforms: tuple  # (name, category)
    cells: dict

    def cell(self, algorithm, family, platform):
        return self.cells[(algorithm, family, platform)]

    def rate(self, algorithm, family, platform):
        c = self.cell(algorithm, family, platform)
        return None if c is None else c.rate

    def missing_keys(self):
        return [k for k, v in self.cells.items() if v is None]

    def to_dict(self):
        cells = []
        for (a, f, p), c in self.cells.items():
            entry = {"algorithm": a, "family": f, "platform": p}
            if c is None:
                entry["missing"] = True
            else:
                entry.update(
                    rate=c.rate, trials=c.trials, outcomes=list(c.outcomes),
                    ci={"mean": c.ci.mean, "lower": c.ci.lower, "upper": c.ci.upper,
                        "level": c.ci.level, "resamples": c.ci.resamples},
                )
            cells.append(entry)
        return {
            "algorithms": list(self.algorithms),
            "scenarios": [list(s) for s in self.scenarios],
            "platforms": [list(p) for p in self.platforms],
            "cells": cells,
        }

    @classmethod
    def from_dict(cls, d):
        cells = {}
        for e in d["cells"]:
            key = (e["algorithm"], e["family"], e["platform"])
            if e.get("missing"):
                cells[key] = None
            else:
                ci = e["ci"]
                cells[key] = CellResult(
                    rate=e["rate"], trials=e["trials"], outcomes=tuple(e["outcomes"]),
                    ci=ConfidenceInterval(ci["mean"], ci["lower"], ci["upper"],
                                          ci["level"], ci["resamples"]),
                )
        return cls(
            algorithms=tuple(d["algorithms"]),
            scenarios=tuple(tuple(s) for s in d["scenarios"]),
            platforms=tuple(tuple(p) for p in d["platforms"]),
            cells=cells,
        )


def benchmark_scenes(master_seed: int, families=FAMILIES):
    """The fixed scene set shared by every algorithm and platform."""
    scenes = {}
    for family in families:
        fam_seed = stable_seed(master_seed, "scene", family)
        scenes[family] = tuple(generate(family, fam_seed, i) for i in SCENE_INDICES)
    return scenes


def run_matrix(algorithms, platforms, families=FAMILIES, trials_per_cell: int = 10,
               master_seed: int = 0, task: TaskSpec | None = None,
               scenes=None, collect_logs: bool = False, progress=None) -> SuccessMatrix:
    """Run the full trial matrix; deterministic for a fixed master seed.

    ``platforms`` is a list of PlatformRecord.  Per-trial failures are
    recorded in the cell outcome list and never abort the run.  Returns
    the matrix; trial logs are attached per cell when requested.
    """
    if trials_per_cell < 1:
        raise ValueError("trials_per_cell must be >= 1")
    task = task or TaskSpec()
    if scenes is None:
        scenes = benchmark_scenes(master_seed, families)
    cells = {}
    logs = {}
    for alg in algorithms:
        for family in families:
            fam_scenes = scenes[family]
            for platform in platforms:
                key = (alg.name, family, platform.name)
                if not alg.supports(family):
                    cells[key] = None
                    continue
                outcomes = []
                for t in range(trials_per_cell):
                    scene = fam_scenes[t % len(fam_scenes)]
                    trial_seed = stable_seed(master_seed, alg.name, family,
                                             platform.name, t)
                    planner = alg.make()
                    result = run_trial(planner, scene, platform.profile, task,
                                       trial_seed, collect_log=collect_logs)
                    outcomes.append(result.outcome)
                    if collect_logs:
                        logs[key + (t,)] = result
                    if progress:
                        progress(alg.name, family, platform.name, t, result)
                successes = sum(1 for o in outcomes if o == "success")
                samples = [1.0 if o == "success" else 0.0 for o in outcomes]
                ci = bootstrap_ci(samples, seed=stable_seed(master_seed, "ci", alg.name,
                                                            family, platform.name))
                cells[key] = CellResult(rate=successes / trials_per_cell,
                                        trials=trials_per_cell,
                                        outcomes=tuple(outcomes), ci=ci)
    matrix = SuccessMatrix(
        algorithms=tuple(a.name for a in algorithms),
        scenarios=tuple((f, family_class(f)) for f in families),
        platforms=tuple((p.name, p.category) for p in platforms),
        cells=cells,
    )
    if collect_logs:
        matrix.trial_results = logs
    return matrix


def results_csv(matrix: SuccessMatrix) -> str:
    """Per-cell results table; missing cells have blank rate/CI fields."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "scenario_family", "scenario_class", "platform",
                "category", "success_rate", "trials", "ci_lower", "ci_upper"])
    categories = dict(matrix.platforms)
    classes = dict(matrix.scenarios)
    for a in matrix.algorithms:
        for family, _ in matrix.scenarios:
            for pname, _ in matrix.platforms:
                c = matrix.cells[(a, family, pname)]
                if c is None:
                    w.writerow([a, family, classes[family], pname,
                                categories[pname], "", 0, "", ""])
                else:
                    w.writerow([a, family, classes[family], pname, categories[pname],
                                repr(c.rate), c.trials, repr(c.ci.lower), repr(c.ci.upper)])
    return buf.getvalue()


def summarize(matrix: SuccessMatrix, seed: int = 0):
    """Marginal views: per-scenario and per-platform means plus heatmaps.

    Means skip missing cells and report how many were skipped; nothing
    is imputed.  Scenario CIs bootstrap over the per-platform rates.
    """
    scenario_rows = []
    for a in matrix.algorithms:
        for family, klass in matrix.scenarios:
            rates = [matrix.cells[(a, family, p)].rate
                     for p, _ in matrix.platforms
                     if matrix.cells[(a, family, p)] is not None]
            missing = len(matrix.platforms) - len(rates)
            if rates:
                ci = bootstrap_ci(rates, seed=stable_seed(seed, "summary", a, family))
                scenario_rows.append({"algorithm": a, "family": family, "class": klass,
                                      "mean": sum(rates) / len(rates),
                                      "ci_lower": ci.lower, "ci_upper": ci.upper,
                                      "platforms": len(rates), "missing": missing})
            else:
                scenario_rows.append({"algorithm": a, "family": family, "class": klass,
                                      "mean": None, "ci_lower": None, "ci_upper": None,
                                      "platforms": 0, "missing": missing})
    platform_rows = []
    for a in matrix.algorithms:
        for pname, category in matrix.platforms:
            rates = [matrix.cells[(a, f, pname)].rate
                     for f, _ in matrix.scenarios
                     if matrix.cells[(a, f, pname)] is not None]
            missing = len(matrix.scenarios) - len(rates)
            platform_rows.append({"algorithm": a, "platform": pname, "category": category,
                                  "mean": sum(rates) / len(rates) if rates else None,
                                  "scenarios": len(rates), "missing": missing})
    heatmaps = {}
    for a in matrix.algorithms:
        rows = []
        for pname, _ in matrix.platforms:
            row = []
            for family, _ in matrix.scenarios:
                c = matrix.cells[(a, family, pname)]
                row.append(None if c is None else c.rate)
            rows.append(row)
        heatmaps[a] = rows
    return {"scenario_means": scenario_rows, "platform_means": platform_rows,
            "heatmaps": heatmaps}


def _fmt(v):
    return "" if v is None else repr(v)


def summary_csvs(matrix: SuccessMatrix, seed: int = 0) -> dict:
    """Render the summarize() tables as CSV texts keyed by file stem."""
    s = summarize(matrix, seed)
    out = {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "scenario_family", "scenario_class", "mean_success",
                "ci_lower", "ci_upper", "platforms", "missing_platforms"])
    for r in s["scenario_means"]:
        w.writerow([r["algorithm"], r["family"], r["class"], _fmt(r["mean"]),
                    _fmt(r["ci_lower"]), _fmt(r["ci_upper"]), r["platforms"], r["missing"]])
    out["scenario_summary"] = buf.getvalue()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "platform", "category", "mean_success",
                "scenarios", "missing_scenarios"])
    for r in s["platform_means"]:
        w.writerow([r["algorithm"], r["platform"], r["category"], _fmt(r["mean"]),
                    r["scenarios"], r["missing"]])
    out["platform_summary"] = buf.getvalue()
    for a, rows in s["heatmaps"].items():
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["platform"] + [f for f, _ in matrix.scenarios])
        for (pname, _), row in zip(matrix.platforms, rows):
            w.writerow([pname] + [_fmt(v) for v in row])
        out[f"heatmap_{a}"] = buf.getvalue()
    return out


def matrix_json(matrix: SuccessMatrix) -> str:
    return json.dumps(matrix.to_dict(), indent=2) + "\n"
