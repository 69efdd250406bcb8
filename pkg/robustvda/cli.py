"""
Cli - Command-line entry point: global config options plus one subcommand per pipeline stage
"""

import argparse
import logging
import sys
from typing import List, Optional

from numerics.errors import VDAError
from .config import RunConfig
from .pipeline import (
    ABLATIONS,
    cmd_ablate,
    cmd_attack,
    cmd_eval,
    cmd_pretrain,
    cmd_synth,
    cmd_train,
)
from .sweep import SWEEP_PARAMS, cmd_sweep

logger = logging.getLogger("robustvda")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustvda",
        description="Virtual data augmentation for robust fine-tuning of a toy text classifier",
        epilog="config keys and defaults:\n" + RunConfig.describe(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", help="key = value run configuration file")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--progress", action="store_true", help="show progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate the synthetic corpus into data_dir")
    synth.add_argument("--force", action="store_true", help="overwrite an existing corpus")

    sub.add_parser("pretrain", help="build the vocabulary and pretrain the MLM")

    train = sub.add_parser("train", help="fine-tune a classifier (baseline or VDA)")
    train.add_argument("--vda", choices=["on", "off"], default="on")
    train.add_argument("--ablation", choices=sorted(ABLATIONS))
    train.add_argument("--extra-data", action="append", default=[], metavar="JSONL",
                       help="additional training examples, e.g. exported adversarial texts")
    train.add_argument("--name", help="run name (default: baseline, vda or the ablation)")

    evaluate = sub.add_parser("eval", help="accuracy of a trained classifier")
    evaluate.add_argument("--name", default="vda")
    evaluate.add_argument("--split", choices=["train", "dev", "test"], default="test")

    attack = sub.add_parser("attack", help="greedy substitution attack and robustness report")
    attack.add_argument("--name", default="vda")
    attack.add_argument("--split", choices=["train", "dev", "test"], default="test")
    attack.add_argument("--export", metavar="JSONL", help="write successful adversarial texts")

    sub.add_parser("ablate", help="train and attack full VDA and every ablation")

    sweep = sub.add_parser("sweep", help="train and attack once per value, write a CSV")
    sweep.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    sweep.add_argument("--values", required=True, help="comma-separated values")
    sweep.add_argument("--output", help="CSV path (default: <out_dir>/sweep-<param>.csv)")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.load(args.config)
    cfg.update(RunConfig.parse_override(item) for item in args.overrides)
    if args.progress:
        cfg.show_progress = True
    return cfg


def run(args: argparse.Namespace) -> None:
    cfg = load_config(args)
    if args.command == "synth":
        cmd_synth(cfg, force=args.force)
    elif args.command == "pretrain":
        cmd_pretrain(cfg)
    elif args.command == "train":
        cmd_train(cfg, args.vda, args.ablation, args.extra_data, args.name)
    elif args.command == "eval":
        cmd_eval(cfg, args.name, args.split)
    elif args.command == "attack":
        cmd_attack(cfg, args.name, args.split, args.export)
    elif args.command == "ablate":
        cmd_ablate(cfg)
    elif args.command == "sweep":
        cmd_sweep(cfg, args.param, args.values, args.output)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        run(args)
    except (VDAError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
