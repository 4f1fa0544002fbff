import numpy as np
import pytest

from quadbench.scoring import (
    ScoreEntry,
    WeightConfig,
    algorithm_score,
    composite_score,
    composite_scores,
    normalize_weights,
    rank,
    renormalize_missing,
    report_csv,
    summary_final_scores,
)
from tests.test_eval import synthetic_matrix


class TestNormalizeWeights:
    def test_two_entity_hand_case(self):
        w = normalize_weights({"classic": 1.2, "theoretical": 1.0})
        assert w["classic"] == pytest.approx(0.545455, abs=1e-6)
        assert w["theoretical"] == pytest.approx(0.454545, abs=1e-6)

    def test_uniform_symmetry(self):
        w = normalize_weights({k: 3.0 for k in "abcd"})
        assert all(v == pytest.approx(0.25) for v in w.values())

    def test_sums_to_one(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            raw = {i: float(r) for i, r in enumerate(rng.uniform(0.01, 10, size=6))}
            assert sum(normalize_weights(raw).values()) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_empty_and_nonpositive(self):
        with pytest.raises(ValueError):
            normalize_weights({})
        with pytest.raises(ValueError):
            normalize_weights({"a": -1.0})


class TestRenormalizeMissing:
    def test_hand_case(self):
        w = renormalize_missing({"a": 0.4, "b": 0.35, "c": 0.25}, {"c"})
        assert w["a"] == pytest.approx(0.533333, abs=1e-6)
        assert w["b"] == pytest.approx(0.466667, abs=1e-6)

    def test_empty_exclusion_identity(self):
        w = {"a": 0.6, "b": 0.4}
        assert renormalize_missing(w, set()) == pytest.approx(w)

    def test_retained_sum_is_one(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            raw = normalize_weights({i: float(r) for i, r in
                                     enumerate(rng.uniform(0.01, 5, size=5))})
            out = renormalize_missing(raw, {0, 3})
            assert sum(out.values()) == pytest.approx(1.0, abs=1e-12)

    def test_cannot_exclude_everything(self):
        with pytest.raises(ValueError):
            renormalize_missing({"a": 1.0}, {"a"})


class TestCompositeScore:
    def test_perfect_algorithm(self):
        rates = {"a1": {"forest": {"p1": 1.0, "p2": 1.0}, "maze": {"p1": 1.0, "p2": 1.0}}}
        entry = composite_scores(synthetic_matrix(rates))[0]
        assert entry.score_no_penalty == pytest.approx(100.0)
        assert entry.weighted_variance == pytest.approx(0.0)
        assert entry.final_score == pytest.approx(100.0)

    def test_two_by_two_hand_computation(self):
        # classic/theoretical scenarios x real/virtual platforms with default
        # weights: scenario 0.545455/0.454545, platform 0.6/0.4
        rates = {"a1": {"forest": {"p1": 1.0, "p2": 0.5}, "maze": {"p1": 0.0, "p2": 0.5}}}
        score, var, excluded = algorithm_score(synthetic_matrix(rates), "a1", WeightConfig())
        assert score == pytest.approx(52.73, abs=0.01)
        assert var == pytest.approx(0.1493, abs=0.0005)
        assert excluded == ()

    def test_published_summary_reproduction(self):
        rows = [
            ("EGO-Planner", 30.25, 0.120),
            ("Fast-Planner", 37.34, 0.106),
            ("Path-Guided PGO", 20.39, 0.054),
            ("NavRL", 37.78, 0.122, ("perlin_noise",)),
            ("Straight Baseline", 6.05, 0.005),
        ]
        entries = {e.algorithm: e for e in
                   summary_final_scores(rows, beta=0.3, var_max=0.122)}
        expected = {"EGO-Planner": 21.32, "Fast-Planner": 27.58,
                    "Path-Guided PGO": 17.70, "NavRL": 26.41,
                    "Straight Baseline": 5.97}
        for name, final in expected.items():
            assert entries[name].final_score == pytest.approx(final, abs=0.05)

    def test_rank_order_and_reference_flag(self):
        rows = [
            ("EGO-Planner", 30.25, 0.120),
            ("Fast-Planner", 37.34, 0.106),
            ("Path-Guided PGO", 20.39, 0.054),
            ("NavRL", 37.78, 0.122, ("perlin_noise",)),
            ("Straight Baseline", 6.05, 0.005),
        ]
        ranked = rank(summary_final_scores(rows, beta=0.3, var_max=0.122))
        comparable = [e.algorithm for e in ranked if not e.reference_only]
        assert comparable == ["Fast-Planner", "EGO-Planner", "Path-Guided PGO",
                              "Straight Baseline"]
        assert next(e for e in ranked if e.algorithm == "NavRL").reference_only

    def test_beta_zero_recovers_weighted_average(self):
        rates = {"a1": {"forest": {"p1": 0.9, "p2": 0.4}, "maze": {"p1": 0.2, "p2": 0.7}},
                 "a2": {"forest": {"p1": 0.5, "p2": 0.5}, "maze": {"p1": 0.5, "p2": 0.5}}}
        m = synthetic_matrix(rates, algorithms=("a1", "a2"))
        cfg = WeightConfig(beta=0.0)
        for e in composite_scores(m, cfg):
            assert e.final_score == e.score_no_penalty

    def test_penalty_bounds(self):
        rng = np.random.default_rng(2)
        rates = {a: {f: {p: round(float(r), 1) for p, r in
                         zip(("p1", "p2"), rng.integers(0, 11, size=2) / 10)}
                     for f in ("forest", "maze")}
                 for a in ("a1", "a2", "a3")}
        m = synthetic_matrix(rates, algorithms=("a1", "a2", "a3"))
        beta = 0.3
        for e in composite_scores(m, WeightConfig(beta=beta)):
            assert e.score_no_penalty * (1 - beta) - 1e-9 <= e.final_score
            assert e.final_score <= e.score_no_penalty + 1e-9

    def test_cohort_max_variance_normalizes_to_one(self):
        rates = {"a1": {"forest": {"p1": 1.0, "p2": 0.0}, "maze": {"p1": 0.0, "p2": 1.0}},
                 "a2": {"forest": {"p1": 0.5, "p2": 0.5}, "maze": {"p1": 0.5, "p2": 0.5}}}
        entries = composite_scores(synthetic_matrix(rates, algorithms=("a1", "a2")))
        norms = {e.algorithm: e.normalized_variance for e in entries}
        assert norms["a1"] == 1.0
        assert norms["a2"] == 0.0

    def test_single_algorithm_entry_uses_cohort(self):
        rates = {"a1": {"forest": {"p1": 1.0, "p2": 0.0}, "maze": {"p1": 0.0, "p2": 1.0}},
                 "a2": {"forest": {"p1": 0.5, "p2": 0.5}, "maze": {"p1": 0.5, "p2": 0.5}}}
        m = synthetic_matrix(rates, algorithms=("a1", "a2"))
        entry = composite_score(m, "a1")
        assert entry == composite_scores(m)[0]
        with pytest.raises(ValueError):
            composite_score(m, "missing")

    def test_weight_scale_invariance(self):
        rates = {"a1": {"forest": {"p1": 0.9, "p2": 0.4}, "maze": {"p1": 0.2, "p2": 0.7}}}
        m = synthetic_matrix(rates)
        base = composite_scores(m, WeightConfig())
        scaled = composite_scores(m, WeightConfig(
            scenario_class_weights=(("classic", 1.2 * 7.0), ("theoretical", 7.0)),
            platform_class_weights=(("real", 1.5 * 0.3), ("virtual", 0.3)),
        ))
        for a, b in zip(base, scaled):
            assert b.score_no_penalty == pytest.approx(a.score_no_penalty, abs=1e-12)
            assert b.weighted_variance == pytest.approx(a.weighted_variance, abs=1e-12)
            assert b.final_score == pytest.approx(a.final_score, abs=1e-12)

    def test_missing_scenario_renormalizes_and_flags(self):
        rates = {"a1": {"forest": {"p1": 0.8, "p2": 0.6}, "maze": {"p1": None, "p2": None}}}
        m = synthetic_matrix(rates)
        score, var, excluded = algorithm_score(m, "a1", WeightConfig())
        assert excluded == ("maze",)
        # only the forest scenario remains: score is the platform-weighted mean
        assert score == pytest.approx(100 * (0.6 * 0.8 + 0.4 * 0.6), abs=1e-9)
        entry = composite_scores(m)[0]
        assert entry.reference_only

    def test_all_missing_rejected(self):
        rates = {"a1": {"forest": {"p1": None, "p2": None},
                        "maze": {"p1": None, "p2": None}}}
        with pytest.raises(ValueError):
            algorithm_score(synthetic_matrix(rates), "a1", WeightConfig())


def scoring_oracle(matrix, config):
    """Literal triple-loop evaluation of the scoring pipeline."""
    families = [f for f, _ in matrix.scenarios]
    platforms = [p for p, _ in matrix.platforms]
    classes = dict(matrix.scenarios)
    categories = dict(matrix.platforms)
    sw = {f: config.scenario_weights[classes[f]] for f in families}
    pw = {p: config.platform_weights[categories[p]] for p in platforms}
    sw = {f: w / sum(sw.values()) for f, w in sw.items()}
    pw = {p: w / sum(pw.values()) for p, w in pw.items()}
    results = {}
    for a in matrix.algorithms:
        num = den = 0.0
        for f in families:
            for p in platforms:
                w = sw[f] * pw[p]
                num += w * matrix.cells[(a, f, p)].rate
                den += w
        mean = num / den
        var = 0.0
        for f in families:
            for p in platforms:
                var += sw[f] * pw[p] * (matrix.cells[(a, f, p)].rate - mean) ** 2
        results[a] = (100.0 * mean, var)
    var_max = max(v for _, v in results.values())
    out = {}
    for a, (score, var) in results.items():
        norm = var / var_max if var_max > 0 else 0.0
        out[a] = (score, var, score * (1.0 - config.beta * norm))
    return out


class TestBruteForceEquivalence:
    oracle = staticmethod(scoring_oracle)

    def test_random_matrices_match_oracle(self):
        rng = np.random.default_rng(9)
        families = ("forest", "urban", "maze")  # 2 classic + 1 theoretical
        platforms = (("p1", "real"), ("p2", "real"), ("p3", "virtual"), ("p4", "virtual"))
        for _ in range(25):
            rates = {a: {f: {p: float(rng.integers(0, 11)) / 10 for p, _ in platforms}
                         for f in families} for a in ("a1", "a2", "a3")}
            m = synthetic_matrix(rates, algorithms=("a1", "a2", "a3"),
                                 families=families, platforms=platforms)
            cfg = WeightConfig(
                scenario_class_weights=(("classic", float(rng.uniform(0.1, 3))),
                                        ("theoretical", float(rng.uniform(0.1, 3)))),
                platform_class_weights=(("real", float(rng.uniform(0.1, 3))),
                                        ("virtual", float(rng.uniform(0.1, 3)))),
                beta=float(rng.uniform(0, 1)),
            )
            expected = self.oracle(m, cfg)
            for e in composite_scores(m, cfg):
                score, var, final = expected[e.algorithm]
                assert e.score_no_penalty == pytest.approx(score, abs=1e-12)
                assert e.weighted_variance == pytest.approx(var, abs=1e-12)
                assert e.final_score == pytest.approx(final, abs=1e-12)


class TestWeightConfig:
    def test_json_roundtrip(self, tmp_path):
        cfg = WeightConfig(beta=0.5)
        path = tmp_path / "weights.json"
        cfg.save(path)
        assert WeightConfig.load(path) == cfg

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightConfig(beta=1.5)
        with pytest.raises(ValueError):
            WeightConfig(scenario_class_weights=(("classic", -1.0), ("theoretical", 1.0)))

    def test_defaults_match_protocol(self):
        cfg = WeightConfig()
        assert cfg.scenario_weights == {"classic": 1.2, "theoretical": 1.0}
        assert cfg.platform_weights == {"real": 1.5, "virtual": 1.0}
        assert cfg.beta == 0.3


def test_report_csv_columns():
    entries = [ScoreEntry("a", 50.0, 0.1, 1.0, 35.0, ("maze",))]
    lines = report_csv(entries).splitlines()
    assert lines[0] == "algorithm,score,variance,final_score,missing_scenarios"
    assert lines[1].endswith("maze")


def test_rank_ties_break_lexicographically():
    entries = [ScoreEntry("bravo", 50.0, 0.0, 0.0, 50.0),
               ScoreEntry("alpha", 50.0, 0.0, 0.0, 50.0)]
    assert [e.algorithm for e in rank(entries)] == ["alpha", "bravo"]
