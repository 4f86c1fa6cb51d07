"""Command line: experiment sweeps, dataset generation, potential dumps, model eval."""

from __future__ import annotations

import argparse
import sys

from . import data, harness, metrics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boost",
        description="Noise-robust boosting benchmark toolkit",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes for experiment sweeps (default 1)")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed override (also the gen-ls default seed)")
    sub = parser.add_subparsers(dest="command", required=True)

    # global flags are repeated on subcommands (SUPPRESS keeps the root value
    # when the flag is given before the subcommand)
    p_run = sub.add_parser("run", help="execute an experiment config (TOML)")
    p_run.add_argument("config", help="path to the experiment config")
    p_run.add_argument("--out", default=None, help="output directory (default runs/<name>)")
    p_run.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    p_run.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p_gen = sub.add_parser("gen-ls", help="generate a synthetic dataset CSV")
    p_gen.add_argument("--n", type=int, required=True, help="number of examples")
    p_gen.add_argument("--delta", type=int, default=1, help="margin width (default 1)")
    p_gen.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p_gen.add_argument("--out", required=True, help="output CSV path")

    p_pot = sub.add_parser("potentials", help="dump potential/weight curves as CSV")
    p_pot.add_argument("--kind", required=True, choices=["exp", "logit", "brown", "robust"])
    p_pot.add_argument("--epsilon", type=float, default=0.1, help="error goal (brown/robust)")
    p_pot.add_argument("--theta", type=float, default=0.0, help="margin goal (robust)")
    p_pot.add_argument("--sigma-f", type=float, default=0.001, help="final width (robust)")
    p_pot.add_argument("--c", type=float, default=None, help="set brown c directly")
    p_pot.add_argument("--times", default="0,0.25,0.5,0.75,0.9,0.99",
                       help="comma-separated t values (brown/robust)")
    p_pot.add_argument("--s-lo", type=float, default=-3.0)
    p_pot.add_argument("--s-hi", type=float, default=3.0)
    p_pot.add_argument("--s-points", type=int, default=121)
    p_pot.add_argument("--out", required=True, help="output CSV path")

    p_eval = sub.add_parser("eval", help="score a saved model on a canonical dataset CSV")
    p_eval.add_argument("--model", required=True, help="model CSV (alpha,feature,threshold,polarity)")
    p_eval.add_argument("--data", required=True, help="dataset CSV (f0..fd,label,true_label)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            out = harness.run_experiment(
                args.config, out_dir=args.out, threads=max(1, args.threads),
                seed_override=args.seed,
            )
            print(f"wrote results to {out}")
        elif args.command == "gen-ls":
            seed = args.seed if args.seed is not None else 0
            dataset = data.generate_ls(data.LSParams(n=args.n, delta=args.delta, seed=seed))
            data.save_csv(dataset, args.out)
            print(f"wrote {dataset.n} examples ({dataset.d} features) to {args.out}")
        elif args.command == "potentials":
            times = tuple(float(v) for v in args.times.split(",") if v.strip())
            out = harness.dump_potentials(
                args.kind, args.out, epsilon=args.epsilon, theta=args.theta,
                sigma_f=args.sigma_f, c=args.c, times=times,
                s_lo=args.s_lo, s_hi=args.s_hi, s_points=args.s_points,
            )
            print(f"wrote potential grid to {out}")
        elif args.command == "eval":
            ensemble = harness.load_model(args.model)
            dataset = data.load_csv(args.data)
            print(f"examples: {dataset.n}")
            print(f"stumps: {len(ensemble)}")
            err = metrics.error_rate(ensemble, dataset, against="labels")
            print(f"error_rate_labels: {err:.4f}")
            if dataset.true_labels is not None and (dataset.true_labels != dataset.labels).any():
                err_true = metrics.error_rate(ensemble, dataset, against="true_labels")
                print(f"error_rate_true_labels: {err_true:.4f}")
            try:
                print(f"auc: {metrics.auc(ensemble, dataset):.4f}")
            except ValueError:
                print("auc: undefined (single-class dataset)")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
