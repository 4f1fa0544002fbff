"""Composite scoring: weighted mean success, stability penalty, ranking.

Success rates are aggregated with normalized scenario and platform
weights; a variance-based penalty (normalized against the evaluated
cohort's maximum) discounts algorithms whose performance fluctuates
across conditions.  Algorithms missing an entire scenario are scored
over the remaining scenarios with renormalized weights and flagged as
reference-only, since their effective evaluation set differs.
"""

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .geometry import family_class

DEFAULT_SCENARIO_CLASS_WEIGHTS = {"classic": 1.2, "theoretical": 1.0}
DEFAULT_PLATFORM_CLASS_WEIGHTS = {"real": 1.5, "virtual": 1.0}
DEFAULT_BETA = 0.3


@dataclass(frozen=True)
class WeightConfig:
    scenario_class_weights: tuple = tuple(sorted(DEFAULT_SCENARIO_CLASS_WEIGHTS.items()))
    platform_class_weights: tuple = tuple(sorted(DEFAULT_PLATFORM_CLASS_WEIGHTS.items()))
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "scenario_class_weights",
                           tuple(sorted(dict(self.scenario_class_weights).items())))
        object.__setattr__(self, "platform_class_weights",
                           tuple(sorted(dict(self.platform_class_weights).items())))
        if any(w <= 0 for _, w in self.scenario_class_weights):
            raise ValueError("scenario class weights must be positive")
        if any(w <= 0 for _, w in self.platform_class_weights):
            raise ValueError("platform class weights must be positive")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")

    @property
    def scenario_weights(self):
        return dict(self.scenario_class_weights)

    @property
    def platform_weights(self):
        return dict(self.platform_class_weights)

    def to_json(self) -> str:
        return json.dumps({
            "scenario_class_weights": self.scenario_weights,
            "platform_class_weights": self.platform_weights,
            "beta": self.beta,
        }, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str):
        d = json.loads(text)
        return cls(
            scenario_class_weights=tuple(sorted(d["scenario_class_weights"].items())),
            platform_class_weights=tuple(sorted(d["platform_class_weights"].items())),
            beta=d.get("beta", DEFAULT_BETA),
        )

    @classmethod
    def load(cls, path):
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def save(self, path):
        Path(path).write_text(self.to_json(), encoding="utf-8")


def normalize_weights(raw: dict) -> dict:
    """Divide each weight by the sum over the entities present."""
    if not raw:
        raise ValueError("cannot normalize an empty weight map")
    if any(w <= 0 for w in raw.values()):
        raise ValueError("weights must be positive")
    total = sum(raw.values())
    return {k: w / total for k, w in raw.items()}


def renormalize_missing(weights: dict, excluded) -> dict:
    """Drop excluded entities and rescale the rest to sum to one."""
    excluded = set(excluded)
    retained = {k: w for k, w in weights.items() if k not in excluded}
    if not retained:
        raise ValueError("cannot exclude every entity")
    total = sum(retained.values())
    return {k: w / total for k, w in retained.items()}


@dataclass(frozen=True)
class ScoreEntry:
    algorithm: str
    score_no_penalty: float  # percent
    weighted_variance: float  # on fractional success rates
    normalized_variance: float
    final_score: float  # percent
    excluded_scenarios: tuple = ()

    @property
    def reference_only(self):
        return bool(self.excluded_scenarios)


def algorithm_score(matrix, algorithm: str, config: WeightConfig):
    """Weighted mean success (percent) and weighted variance for one algorithm.

    Scenario/platform weights are class weights normalized over the
    full matrix; scenarios (or platforms) entirely missing for this
    algorithm are excluded and the remaining weights renormalized.
    Isolated missing cells are dropped from numerator and denominator
    alike.  Returns (score_percent, variance, excluded_scenarios).
    """
    if algorithm not in matrix.algorithms:
        raise ValueError(f"algorithm {algorithm!r} not in matrix")
    families = [f for f, _ in matrix.scenarios]
    platforms = [p for p, _ in matrix.platforms]
    categories = dict(matrix.platforms)

    w_s = normalize_weights({f: config.scenario_weights[family_class(f)] for f in families})
    w_m = normalize_weights({p: config.platform_weights[categories[p]] for p in platforms})

    excluded_s = [f for f in families
                  if all(matrix.cells[(algorithm, f, p)] is None for p in platforms)]
    excluded_m = [p for p in platforms
                  if all(matrix.cells[(algorithm, f, p)] is None for f in families)]
    if len(excluded_s) == len(families) or len(excluded_m) == len(platforms):
        raise ValueError(f"algorithm {algorithm!r} has no evaluated cells")
    if excluded_s:
        w_s = renormalize_missing(w_s, excluded_s)
    if excluded_m:
        w_m = renormalize_missing(w_m, excluded_m)

    num = den = 0.0
    for f, wf in w_s.items():
        for p, wp in w_m.items():
            cell = matrix.cells[(algorithm, f, p)]
            if cell is None:
                continue
            num += wf * wp * cell.rate
            den += wf * wp
    mean = num / den
    var = 0.0
    for f, wf in w_s.items():
        for p, wp in w_m.items():
            cell = matrix.cells[(algorithm, f, p)]
            if cell is None:
                continue
            var += wf * wp * (cell.rate - mean) ** 2
    var /= den
    return 100.0 * mean, var, tuple(excluded_s)


def composite_scores(matrix, config: WeightConfig | None = None) -> list[ScoreEntry]:
    """Score every algorithm in the matrix and apply the cohort penalty.

    The variance is normalized by the cohort maximum, so final scores
    depend on which algorithms are evaluated together; an all-zero
    variance cohort takes normalized variance 0.
    """
    config = config or WeightConfig()
    raw = [(a, *algorithm_score(matrix, a, config)) for a in matrix.algorithms]
    var_max = max(v for _, _, v, _ in raw)
    entries = []
    for a, score, var, excluded in raw:
        norm = var / var_max if var_max > 0 else 0.0
        entries.append(ScoreEntry(
            algorithm=a, score_no_penalty=score, weighted_variance=var,
            normalized_variance=norm, final_score=score * (1.0 - config.beta * norm),
            excluded_scenarios=excluded,
        ))
    return entries


def composite_score(matrix, algorithm: str, config: WeightConfig | None = None) -> ScoreEntry:
    """Score one algorithm; the variance penalty still uses the full cohort."""
    for entry in composite_scores(matrix, config):
        if entry.algorithm == algorithm:
            return entry
    raise ValueError(f"algorithm {algorithm!r} not in matrix")


def summary_final_scores(rows, beta: float = DEFAULT_BETA,
                         var_max: float | None = None) -> list[ScoreEntry]:
    """Penalty path on published (algorithm, score, variance) summaries.

    ``rows`` are (name, score_percent, variance[, excluded_scenarios])
    tuples; ``var_max`` defaults to the cohort maximum.
    """
    if not rows:
        raise ValueError("no score rows")
    if var_max is None:
        var_max = max(r[2] for r in rows)
    entries = []
    for row in rows:
        name, score, var = row[0], row[1], row[2]
        excluded = tuple(row[3]) if len(row) > 3 else ()
        norm = var / var_max if var_max > 0 else 0.0
        entries.append(ScoreEntry(
            algorithm=name, score_no_penalty=score, weighted_variance=var,
            normalized_variance=norm, final_score=score * (1.0 - beta * norm),
            excluded_scenarios=excluded,
        ))
    return entries


def rank(entries) -> list[ScoreEntry]:
    """Order by final score, highest first; ties break by name.

    Entries with excluded scenarios keep their position but are flagged
    reference-only (their evaluation set differs from the others).
    """
    return sorted(entries, key=lambda e: (-e.final_score, e.algorithm))


def report_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "score", "variance", "final_score", "missing_scenarios"])
    for e in entries:
        w.writerow([e.algorithm, repr(e.score_no_penalty), repr(e.weighted_variance),
                    repr(e.final_score), ";".join(e.excluded_scenarios)])
    return buf.getvalue()
