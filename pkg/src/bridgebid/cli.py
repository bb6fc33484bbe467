"""Command-line entry points.

Subcommands: gen, train, eval, open-table, dds, bid.  Every run is
reproducible from its flags plus seeds.  Exit codes: 0 success, 1 usage
error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dataset as ds
from . import dds as dds_mod
from .auction import Auction
from .cards import (SEAT_NAMES, deal_from_pbn, deal_random, deal_to_pbn,
                    hand_to_pbn)
from .contracts import NUM_ACTIONS, Strain, contract_name, parse_contract
from .evaluate import (baseline_policy, evaluate, opening_table,
                       partner_estimation_report, write_report)
from .qlearn import QStack, TrainConfig, train

USAGE_ERROR, DATA_ERROR, INTERNAL_ERROR = 1, 2, 3

PAPER_N = 140_000
PAPER_SPLIT = (100 / 140, 20 / 140, 20 / 140)
DESK_SPLIT = (4 / 6, 1 / 6, 1 / 6)


class CliError(Exception):
    def __init__(self, message: str, code: int = DATA_ERROR):
        super().__init__(message)
        self.code = code


def _parse_split(text: str) -> tuple[float, ...]:
    try:
        parts = [float(p) for p in text.split("/")]
    except ValueError:
        raise CliError(f"bad split {text!r}", USAGE_ERROR)
    total = sum(parts)
    if total <= 0 or len(parts) != 3:
        raise CliError("split must be three positive numbers", USAGE_ERROR)
    return tuple(p / total for p in parts)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.n is not None:
        n = args.n
    else:
        n = PAPER_N if args.paper_scale else 6000
    fractions = (PAPER_SPLIT if args.paper_scale and args.split is None
                 else _parse_split(args.split or "4/1/1"))
    out = args.out
    ds.generate_to_file(out, n, args.seed, n_samples=args.n_samples,
                        workers=args.workers, resume=not args.no_resume,
                        progress=args.verbose)
    records, meta = ds.read_dataset(out)
    parts = ds.split(records, fractions)
    names = ("train", "valid", "test")
    manifest = {"dataset": str(out), "n": n, "master_seed": args.seed,
                "n_samples": args.n_samples, "splits": {}}
    for name, chunk in zip(names, parts):
        path = f"{out}.{name}"
        ds.write_dataset(chunk, path, args.n_samples, args.seed)
        manifest["splits"][name] = {"path": path, "size": len(chunk)}
    with open(f"{out}.manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {n} records to {out}; splits "
          + "/".join(str(len(c)) for c in parts))
    return 0


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "l": int, "algo_p": str, "algo_e": str, "explore": float,
    "epochs": int, "patience": int, "batch_size": int, "seed": int,
    "aux_head": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "sayc": str, "replay_capacity": int, "ucb_scope": str,
    "eta": float, "step_rate": float, "decay": float, "momentum": float,
}


def load_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                if key not in _CONFIG_KEYS:
                    raise CliError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = _CONFIG_KEYS[key](value.strip())
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}")
    return out


def cmd_train(args) -> int:
    settings = {}
    if args.config:
        settings.update(load_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag  # flags win over the config file
    config = TrainConfig(**settings)
    try:
        train_recs, _ = ds.read_dataset(args.data + ".train")
        valid_recs, _ = ds.read_dataset(args.data + ".valid")
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load dataset splits: {exc}")
    result = train(train_recs, valid_recs, config)
    result.stack.save(args.out)
    log_path = args.out + ".log"
    with open(log_path, "w") as fh:
        fh.write("\n".join(result.log) + "\n")
    print(f"saved checkpoint to {args.out}; training log in {log_path}")
    print(result.log[-1])
    return 0


# ---------------------------------------------------------------------------
# eval / open-table
# ---------------------------------------------------------------------------


def _load_stack(path: str) -> QStack:
    try:
        return QStack.load(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load checkpoint {path}: {exc}")


def _load_records(path: str):
    try:
        records, _ = ds.read_dataset(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load dataset {path}: {exc}")
    if not records:
        raise CliError(f"dataset {path} is empty")
    return records


def cmd_eval(args) -> int:
    records = _load_records(args.data)
    if args.baseline:
        policy = baseline_policy(args.baseline, seed=args.seed,
                                 horizon=args.horizon)
        model_id = args.baseline
    else:
        if not args.model:
            raise CliError("need --model or --baseline", USAGE_ERROR)
        policy = _load_stack(args.model)
        model_id = os.path.basename(args.model)
    report = evaluate(policy, records, model_id=model_id,
                      dataset_id=os.path.basename(args.data))
    print(report.summary())
    print(f"mean_cost {report.mean_cost!r}")
    if args.report:
        write_report(report, args.report)
        print(f"wrote {args.report}.metrics.tsv and {args.report}.transcripts.tsv")
    return 0


def cmd_open_table(args) -> int:
    stack = _load_stack(args.model)
    rows = opening_table(stack, args.n_hands, args.seed)
    for row in rows[:args.max_bid + 1]:
        print(row.format())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("bid\tcount\tfrequency\thcp_p5\thcp_p95\tmodal_shape\n")
            for row in rows:
                pat = "-".join(str(x) for x in row.modal_pattern)
                fh.write(f"{contract_name(row.action)}\t{row.count}\t"
                         f"{row.frequency:.6f}\t{row.hcp_low:g}\t"
                         f"{row.hcp_high:g}\t{pat}\n")
        print(f"wrote {args.out}")
    return 0


def cmd_partner_report(args) -> int:
    stack = _load_stack(args.model)
    records = _load_records(args.data)
    rep = partner_estimation_report(stack, records, args.at_round)
    print(rep.format())
    for rid, actual, est in rep.examples:
        a = " ".join(f"{v:g}" for v in actual)
        e = " ".join(f"{v:.2f}" for v in est)
        print(f"  deal {rid}: actual [{a}] estimate [{e}]")
    return 0


# ---------------------------------------------------------------------------
# dds
# ---------------------------------------------------------------------------


def cmd_dds(args) -> int:
    try:
        deal = deal_from_pbn(args.deal)
    except ValueError as exc:
        raise CliError(f"bad deal: {exc}")
    tricks = dds_mod.solve_all(deal)
    names = ("C", "D", "H", "S", "NT")
    print("strain\t" + "\t".join(names))
    print("tricks\t" + "\t".join(str(t) for t in tricks))
    if args.json:
        record = {"deal": deal_to_pbn(deal),
                  "best_declarer_tricks": dict(zip(names, tricks))}
        print(json.dumps(record, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# bid (interactive)
# ---------------------------------------------------------------------------


def cmd_bid(args) -> int:
    stack = _load_stack(args.model)
    deal = deal_random(args.seed)
    human_player = args.human
    x1, x2 = deal.north, deal.south
    own = x1 if human_player == 1 else x2
    print(f"You are Player {human_player} "
          f"({'North' if human_player == 1 else 'South'}).")
    print(f"Your hand: {hand_to_pbn(own)}")
    auction = Auction(x1, x2, stack.l)
    from .auction import encode_state
    from .qlearn import greedy_select

    while not auction.done:
        t = auction.round
        to_act = 1 if t % 2 == 1 else 2
        if to_act == human_player:
            legal = auction.legal_actions()
            legal_names = " ".join(contract_name(a) for a in legal)
            while True:
                try:
                    raw = input(f"round {t}, your call> ").strip()
                except EOFError:
                    print("\n(no input; passing)")
                    raw = "PASS"
                try:
                    action = parse_contract(raw)
                except ValueError:
                    print(f"could not parse {raw!r}; legal: {legal_names}")
                    continue
                if action not in legal:
                    print(f"illegal bid; legal: {legal_names}")
                    continue
                break
        else:
            if t == 1 and stack.sayc != "off":
                action = stack.opening_action(x1)
            else:
                qv = stack.q_values(t, encode_state(auction.state))
                action = greedy_select(qv, auction.legal_actions())
            print(f"round {t}, partner bids {contract_name(action)}")
        auction.step(action)
    final = auction.final_contract
    print(f"auction over: {'-'.join(contract_name(a) for a in auction.actions_taken)}")
    print(f"final contract: {contract_name(final)}")
    if args.score:
        from .scoring import cost_vector
        costs = cost_vector(x1, x2, seed=args.seed)
        print(f"double-dummy cost of this contract: {costs[final]} IMPs "
              f"(best contract: {contract_name(int(np.argmin(costs)))})")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, USAGE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bridgebid",
                description="Bridge bidding from raw deals: data generation, "
                            "Q-learning, evaluation.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a dataset with splits")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--n-samples", type=int, default=5)
    g.add_argument("--out", default="dataset.tsv")
    g.add_argument("--split", default=None,
                   help="three weights like 4/1/1 (default) for train/valid/test")
    g.add_argument("--paper-scale", action="store_true",
                   help="preset: n=140000 with a 100k/20k/20k split")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--no-resume", action="store_true")
    g.add_argument("--verbose", action="store_true")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("train", help="train a Q-stack on a generated dataset")
    t.add_argument("--config", help="key=value config file; flags override")
    t.add_argument("--data", required=True,
                   help="dataset path prefix (expects .train/.valid splits)")
    t.add_argument("--out", default="model.ckpt")
    t.add_argument("--l", type=int)
    t.add_argument("--algo-p", dest="algo_p", choices=("bellman", "penetrative"))
    t.add_argument("--algo-e", dest="algo_e", choices=("none", "eps", "ucb1"))
    t.add_argument("--explore", type=float,
                   help="epsilon for eps, alpha for ucb1")
    t.add_argument("--epochs", type=int)
    t.add_argument("--patience", type=int)
    t.add_argument("--batch-size", dest="batch_size", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--aux-head", dest="aux_head", action="store_const", const=True)
    t.add_argument("--sayc", choices=("off", "full", "no-weak"))
    t.add_argument("--ucb-scope", dest="ucb_scope",
                   choices=("per-round", "global"))
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="score a checkpoint or baseline on a dataset")
    e.add_argument("--model")
    e.add_argument("--baseline", choices=("always-pass", "random-legal"))
    e.add_argument("--data", required=True)
    e.add_argument("--report", help="path prefix for report files")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--horizon", type=int, default=4,
                   help="rounds for the random-legal baseline")
    e.set_defaults(func=cmd_eval)

    o = sub.add_parser("open-table", help="profile a model's opening bids")
    o.add_argument("--model", required=True)
    o.add_argument("--n-hands", type=int, default=10000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--max-bid", type=int, default=10,
                   help="print rows up to this action index (default 2NT)")
    o.add_argument("--out")
    o.set_defaults(func=cmd_open_table)

    pr = sub.add_parser("partner-report",
                        help="auxiliary-head partner estimation accuracy")
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--at-round", dest="at_round", type=int, default=3)
    pr.set_defaults(func=cmd_partner_report)

    d = sub.add_parser("dds", help="double-dummy trick table for a deal")
    d.add_argument("--deal", required=True,
                   help='PBN-style, e.g. "N:AKQJT98765432... E:... S:... W:..."')
    d.add_argument("--json", action="store_true",
                   help="also print a machine-readable record")
    d.set_defaults(func=cmd_dds)

    b = sub.add_parser("bid", help="bid one deal against the trained partner")
    b.add_argument("--model", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--human", type=int, choices=(1, 2), default=1)
    b.add_argument("--score", action="store_true",
                   help="compute the double-dummy cost afterwards (slow)")
    b.set_defaults(func=cmd_bid)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except KeyboardInterrupt:
        return INTERNAL_ERROR
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
