"""Batch command-line interface.

Subcommands:
  run      seeded episodes of one policy, writing traces and a summary CSV
  dataset  record an observation/action dataset from a teacher policy
  gospa    recompute GOSPA components offline from stored traces
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bc_dataset import export_dataset
from .config import ConfigError, EpisodeConfig
from .engine import read_trace, run_batch, write_summary_csv
from .metrics import GospaConfig, gospa, gospa_switching
from .policies import make_policy


def _load_config(path: str | None) -> EpisodeConfig:
    return EpisodeConfig.from_json(path) if path else EpisodeConfig()


def _load_actions(path: str | None):
    if path is None:
        return None
    with open(path) as f:
        return [tuple(pair) for pair in json.load(f)]


def _cmd_run(args) -> int:
    config = _load_config(args.config)
    actions = _load_actions(args.actions)
    summaries = run_batch(
        config,
        args.policy,
        episodes=args.episodes,
        base_seed=args.seed,
        out_dir=args.out,
        workers=args.workers,
        actions=actions,
    )
    search = np.mean([s["search_reward_mean"] for s in summaries])
    cov = np.mean([s["cov_norm_mean"] for s in summaries])
    print(
        f"{args.policy}: {len(summaries)} episodes, "
        f"mean search reward {search:.4g}, mean covariance norm {cov:.4g}"
    )
    print(f"wrote traces and summary to {args.out}")
    return 0


def _cmd_dataset(args) -> int:
    config = _load_config(args.config)
    policy = make_policy(args.policy, _load_actions(args.actions))
    header = export_dataset(config, policy, args.samples, args.out, base_seed=args.seed)
    print(f"wrote {header['count']} samples to {args.out}")
    return 0


def _cmd_gospa(args) -> int:
    trace_paths = sorted(Path(args.traces).glob("*.jsonl"))
    if not trace_paths:
        print(f"no trace files in {args.traces}", file=sys.stderr)
        return 1
    rows = []
    for path in trace_paths:
        trace = read_trace(path)
        gcfg = GospaConfig(
            cutoff=args.cutoff or trace.header["config"]["gospa"]["cutoff"],
            order=args.order or trace.header["config"]["gospa"]["order"],
        )
        sums = {"distance": 0.0, "localisation": 0.0, "missed": 0.0, "false": 0.0}
        assignments = []
        for record in trace.steps:
            truths = np.array([t[1:4] for t in record["truths"]]).reshape(-1, 3)
            tracks = np.array([[t[1], t[3], t[5]] for t in record["tracks"]]).reshape(-1, 3)
            result = gospa(truths, tracks, gcfg)
            sums["distance"] += result.distance
            sums["localisation"] += result.localisation
            sums["missed"] += result.missed_cost
            sums["false"] += result.false_cost
            assignments.append(
                [
                    (record["truths"][i][0], record["tracks"][j][0])
                    for i, j in result.assignment
                ]
            )
        rows.append(
            {
                "trace": path.name,
                "policy": trace.header["policy"],
                "seed": trace.header["seed"],
                **{f"gospa_{k}_sum": v for k, v in sums.items()},
                "gospa_switching": gospa_switching(assignments),
            }
        )
    out = Path(args.out) if args.out else Path(args.traces) / "gospa.csv"
    write_summary_csv(rows, out)
    for row in rows:
        print(
            f"{row['trace']}: distance {row['gospa_distance_sum']:.4g}, "
            f"switching {row['gospa_switching']:.0f}"
        )
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="searchtrack", description="Radar search-and-track simulation batch runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run seeded episodes of one policy")
    run_p.add_argument("--config", help="episode config JSON (defaults built in)")
    run_p.add_argument(
        "--policy",
        required=True,
        choices=["static", "random", "coverage", "external"],
    )
    run_p.add_argument("--episodes", type=int, default=1)
    run_p.add_argument("--seed", type=int, default=None, help="base seed (episode i adds i)")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--actions", help="JSON action list for --policy external")
    run_p.set_defaults(func=_cmd_run)

    data_p = sub.add_parser("dataset", help="record an observation/action dataset")
    data_p.add_argument("--samples", type=int, required=True)
    data_p.add_argument("--out", required=True)
    data_p.add_argument("--config")
    data_p.add_argument("--policy", default="random", choices=["static", "random", "coverage", "external"])
    data_p.add_argument("--seed", type=int, default=None)
    data_p.add_argument("--actions")
    data_p.set_defaults(func=_cmd_dataset)

    gospa_p = sub.add_parser("gospa", help="recompute GOSPA from stored traces")
    gospa_p.add_argument("--traces", required=True, help="directory of trace .jsonl files")
    gospa_p.add_argument("--cutoff", type=float, default=None)
    gospa_p.add_argument("--order", type=float, default=None)
    gospa_p.add_argument("--out", default=None)
    gospa_p.set_defaults(func=_cmd_gospa)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
