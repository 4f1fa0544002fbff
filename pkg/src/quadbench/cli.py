"""Command-line entry point.

Subcommands: gen (scenario files), platforms (dataset table), run
(trial matrix), score (composite scores), report (summary tables).
Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from . import evaluate, scoring
from .geometry import FAMILIES, validate_scene
from .kinodyn import dataset_means, find_platform, load_platform_dataset
from .planners import greedy_reference_planner, straight_flight_planner
from .scenegen import SceneGenerationError, generate
from .sceneio import export_scene, save_manifest
from .sim import TaskSpec

DEFAULT_PLATFORMS = ("1.00kg-SunnySky", "2.00kg-T-MOTOR",
                     "0.98kg-EGO Planner DIY", "3.50kg-UAV 12")
DEFAULT_SEED = 42

ALGORITHMS = {
    "straight": lambda: evaluate.Algorithm("straight", straight_flight_planner),
    "greedy": lambda: evaluate.Algorithm("greedy", greedy_reference_planner),
}


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for index in args.index:
        scene = generate(args.family, args.seed, index)
        stem = f"{args.family}_s{args.seed}_i{index}"
        if args.format == "json":
            path = save_manifest(scene, out / f"{stem}.json")
            written = [path]
        else:
            cloud = export_scene(scene, args.format, out / f"{stem}.{args.format}",
                                 surface_sample_density=args.density)
            manifest = save_manifest(scene, out / f"{stem}.json")
            written = [cloud, manifest]
        verdict = validate_scene(scene)
        status = (f"solvable, grid path {verdict.path_length:.1f} m"
                  if verdict.solvable else "UNSOLVABLE")
        print(f"{stem}: {len(scene.obstacles)} obstacles, {status}")
        for p in written:
            print(f"  wrote {p}")
    return 0


def cmd_platforms(args) -> int:
    if args.name:
        records = [find_platform(args.name)]
    else:
        records = load_platform_dataset()
        if args.category:
            records = [r for r in records if r.category == args.category]
    rows = [(r.name, r.category, r.mass, r.profile.twr_max,
             r.profile.alpha_xy_max, r.profile.alpha_z_max) for r in records]
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["name", "category", "mass_kg", "twr_max", "alpha_xy_max", "alpha_z_max"])
            w.writerows(rows)
        print(f"wrote {args.csv} ({len(rows)} rows)")
    else:
        print(f"{'name':28s} {'category':8s} {'mass':>6s} {'TWR':>5s} {'a_xy':>8s} {'a_z':>6s}")
        for name, cat, mass, twr, axy, az in rows:
            print(f"{name:28s} {cat:8s} {mass:6.2f} {twr:5.1f} {axy:8.1f} {az:6.1f}")
    if args.stats:
        from .kinodyn import REFERENCE_MEANS
        for cat in ("real", "virtual"):
            twr, axy, az = dataset_means(cat)
            ref = REFERENCE_MEANS[cat]
            print(f"{cat} means: TWR {twr:.2f} (reference {ref[0]}), "
                  f"alpha_xy {axy:.2f} (reference {ref[1]}) rad/s^2, "
                  f"alpha_z {az:.2f} (reference {ref[2]}) rad/s^2")
    return 0


def _load_weights(path: Path) -> scoring.WeightConfig:
    if path.exists():
        return scoring.WeightConfig.load(path)
    config = scoring.WeightConfig()
    path.parent.mkdir(parents=True, exist_ok=True)
    config.save(path)
    print(f"wrote default weight config {path}")
    return config


def cmd_run(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = [n.strip() for n in args.algorithms.split(",") if n.strip()]
    algorithms = []
    for n in names:
        if n not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {n!r}; choices: {sorted(ALGORITHMS)}")
        algorithms.append(ALGORITHMS[n]())
    platform_names = ([p.strip() for p in args.platforms.split(",") if p.strip()]
                      if args.platforms else list(DEFAULT_PLATFORMS))
    platforms = [find_platform(p) for p in platform_names]
    families = ([f.strip() for f in args.families.split(",") if f.strip()]
                if args.families else list(FAMILIES))
    for f in families:
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
    _load_weights(Path(args.config) if args.config else out / "weights.json")

    scenes = evaluate.benchmark_scenes(args.seed, families)
    unsolvable = []
    for family in families:
        for scene in scenes[family]:
            if not validate_scene(scene).solvable:
                unsolvable.append([family, scene.index])
                print(f"warning: {family} index {scene.index} fails the conservative "
                      "solvability check; trials run anyway")
    task = TaskSpec()
    total = len(algorithms) * len(families) * len(platforms) * args.trials
    done = [0]

    def progress(alg, family, platform, t, result):
        done[0] += 1
        if done[0] % 50 == 0 or done[0] == total:
            print(f"  [{done[0]}/{total}] {alg} {family} {platform} "
                  f"trial {t + 1}: {result.outcome}")

    matrix = evaluate.run_matrix(algorithms, platforms, families,
                                 trials_per_cell=args.trials, master_seed=args.seed,
                                 task=task, scenes=scenes,
                                 collect_logs=args.log, progress=progress)
    (out / "results.csv").write_text(evaluate.results_csv(matrix), encoding="utf-8")
    payload = matrix.to_dict()
    payload["master_seed"] = args.seed
    payload["unsolvable_scenes"] = unsolvable
    (out / "results.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.log:
        log_dir = out / "logs"
        log_dir.mkdir(exist_ok=True)
        for (alg, family, platform, t), result in matrix.trial_results.items():
            if result.log is None:
                continue
            name = f"{alg}_{family}_{platform.replace(' ', '_')}_{t}.csv"
            with open(log_dir / name, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["t", "x", "y", "z", "vx", "vy", "vz", "yaw", "min_clearance"])
                w.writerows(result.log.tolist())
    print(f"wrote {out / 'results.csv'} and {out / 'results.json'}")
    return 0


def _matrix_from_results(path: Path) -> evaluate.SuccessMatrix:
    data = json.loads(path.read_text(encoding="utf-8"))
    if not data.get("cells"):
        raise ValueError(f"results file {path} contains no cells")
    return evaluate.SuccessMatrix.from_dict(data)


def cmd_score(args) -> int:
    beta = args.beta
    if args.from_summary:
        rows = []
        with open(args.from_summary, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                missing = tuple(m for m in row.get("missing_scenarios", "").split(";") if m)
                rows.append((row["algorithm"], float(row["score"]),
                             float(row["variance"]), missing))
        if not rows:
            raise ValueError(f"no rows in {args.from_summary}")
        if beta is None:
            beta = scoring.DEFAULT_BETA
        entries = scoring.summary_final_scores(rows, beta=beta)
    else:
        if not args.results:
            raise ValueError("provide --results or --from-summary")
        matrix = _matrix_from_results(Path(args.results))
        config = scoring.WeightConfig.load(args.config) if args.config else scoring.WeightConfig()
        if beta is not None:
            config = scoring.WeightConfig(config.scenario_class_weights,
                                          config.platform_class_weights, beta)
        entries = scoring.composite_scores(matrix, config)
    ranked = scoring.rank(entries)
    text = scoring.report_csv(ranked)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "scores.csv").write_text(text, encoding="utf-8")
        print(f"wrote {out / 'scores.csv'}")
    print(f"{'algorithm':24s} {'score':>8s} {'variance':>9s} {'final':>8s}")
    for e in ranked:
        flag = "  (reference only: missing " + ",".join(e.excluded_scenarios) + ")" \
            if e.reference_only else ""
        print(f"{e.algorithm:24s} {e.score_no_penalty:8.2f} {e.weighted_variance:9.4f} "
              f"{e.final_score:8.2f}{flag}")
    return 0


def cmd_report(args) -> int:
    matrix = _matrix_from_results(Path(args.results))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for stem, text in evaluate.summary_csvs(matrix).items():
        (out / f"{stem}.csv").write_text(text, encoding="utf-8")
        print(f"wrote {out / (stem + '.csv')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadbench",
                                description="Quadrotor navigation benchmark harness")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate scenario files")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--index", type=int, nargs="+", default=[1], choices=range(1, 11),
                   metavar="1..10")
    g.add_argument("--out", default=".")
    g.add_argument("--format", default="pcd", choices=("pcd", "ply", "json"))
    g.add_argument("--density", type=float, default=100.0,
                   help="surface sample density, points/m^2")
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("platforms", help="list the platform dataset")
    pl.add_argument("--category", choices=("real", "virtual"))
    pl.add_argument("--name")
    pl.add_argument("--stats", action="store_true", help="print per-category means")
    pl.add_argument("--csv", help="write the table to this CSV file")
    pl.set_defaults(func=cmd_platforms)

    r = sub.add_parser("run", help="run the benchmark trial matrix")
    r.add_argument("--out", default="quadbench_out")
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--algorithms", default="straight,greedy")
    r.add_argument("--platforms", help="comma-separated platform names "
                                       f"(default: {', '.join(DEFAULT_PLATFORMS)})")
    r.add_argument("--families", help="comma-separated scenario families (default: all)")
    r.add_argument("--trials", type=int, default=10)
    r.add_argument("--config", help="weight config JSON (default: <out>/weights.json)")
    r.add_argument("--log", action="store_true", help="write per-trial state logs")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("score", help="compute composite scores")
    s.add_argument("--results", help="results.json from a run")
    s.add_argument("--from-summary", help="CSV with algorithm,score,variance columns")
    s.add_argument("--config", help="weight config JSON")
    s.add_argument("--beta", type=float, help="override the penalty strength")
    s.add_argument("--out", help="directory for scores.csv")
    s.set_defaults(func=cmd_score)

    rep = sub.add_parser("report", help="write summary tables from results")
    rep.add_argument("--results", required=True)
    rep.add_argument("--out", default="quadbench_out")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, SceneGenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
