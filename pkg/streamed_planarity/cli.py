"""Command-line front end.

Exit codes: 0 = YES / accept / success, 1 = NO / reject, 2 = error.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
import sys

from .api_mapper import describe_instance, export_dot, map_check_report_to_lines, map_decision_to_lines
from .certify import check_certificate
from .config import DECIDE_MODES, DEFAULT_BUDGET, DEFAULT_SEED, EXIT_ERROR, EXIT_NO, EXIT_YES, RunConfig
from .errors import StreamedPlanarityError
from .generators import random_instance, random_star_instance, random_tree_instance
from .instance_loader import (
    load_instance,
    load_sefe,
    load_witness,
    save_certificate,
    save_composite,
    save_instance,
    save_sefe,
    write_text,
)
from .instances import validate
from .models import StreamedInstance
from .oracle import brute_oracle
from .reduce import star_to_sefe, theorem1_generate
from .solve import decide, verify_pieces

logger = logging.getLogger(__name__)


def _emit(lines: list[str]) -> None:
    for line in lines:
        print(line)


def _load_valid_instance(path: Path) -> StreamedInstance:
    instance = load_instance(path)
    report = validate(instance)
    if not report.ok:
        raise StreamedPlanarityError("Invalid instance: " + "; ".join(report.violations))
    return instance


def cmd_decide(config: RunConfig) -> int:
    instance = _load_valid_instance(config.input_path)
    decision = decide(instance, config.mode, config.budget)
    _emit(map_decision_to_lines(decision))
    if decision.answer and config.certificate_path is not None:
        if decision.witness is not None:
            save_certificate(decision.witness, config.certificate_path)
        elif decision.composite:
            save_composite(decision.pieces, config.certificate_path)
        else:
            logger.warning("Decision by rule %s has no witness; nothing written", decision.trace[0].rule)
            return EXIT_YES
        logger.info("Wrote witness to %s", config.certificate_path)
    return EXIT_YES if decision.answer else EXIT_NO


def cmd_verify(config: RunConfig) -> int:
    instance = _load_valid_instance(config.input_path)
    witness = load_witness(config.certificate_path)
    if isinstance(witness, list):
        report = verify_pieces(instance, witness)
        if not report.accepted:
            _emit(map_check_report_to_lines(report))
            return EXIT_NO
        _emit(["ACCEPT", f"pieces={len(witness)}"])
        return EXIT_YES
    report = check_certificate(instance, witness)
    _emit(map_check_report_to_lines(report))
    return EXIT_YES if report.accepted else EXIT_NO


def cmd_reduce(config: RunConfig) -> int:
    instance = _load_valid_instance(config.input_path)
    sefe = star_to_sefe(instance)
    save_sefe(sefe, config.output_path)
    print(f"graphs={sefe.k} vertices={len(sefe.vertices)}")
    return EXIT_YES


def cmd_gen_theorem1(config: RunConfig, omega: int) -> int:
    gadget = theorem1_generate(load_sefe(config.input_path), omega)
    save_instance(gadget.instance, config.output_path)
    print(f"rho={gadget.rho} vertices={gadget.instance.n} stream={gadget.instance.m}")
    return EXIT_YES


def cmd_gen_random(config: RunConfig, n: int, m: int, omega: int, shape: str) -> int:
    if shape == "star":
        instance = random_star_instance(n, m, omega, config.seed)
    elif shape == "tree":
        instance = random_tree_instance(n, m, omega, config.seed)
    else:
        instance = random_instance(n, m, omega, config.seed)
    save_instance(instance, config.output_path)
    return EXIT_YES


def cmd_export_dot(config: RunConfig) -> int:
    instance = load_instance(config.input_path)
    write_text(export_dot(instance), config.output_path)
    return EXIT_YES


def cmd_oracle(config: RunConfig) -> int:
    instance = _load_valid_instance(config.input_path)
    answer = brute_oracle(instance, config.budget)
    print("YES" if answer else "NO")
    return EXIT_YES if answer else EXIT_NO


def cmd_describe(config: RunConfig) -> int:
    instance = load_instance(config.input_path)
    report = validate(instance)
    for key, value in describe_instance(instance).items():
        print(f"{key}={value}")
    for violation in report.violations:
        print(f"violation={violation}")
    return EXIT_YES if report.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamed-planarity",
        description="Decide, verify and transform streamed planarity instances with a backbone.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("decide", help="decide an instance")
    p.add_argument("instance", type=Path)
    p.add_argument("--mode", choices=DECIDE_MODES, default="auto")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--certificate", type=Path, help="write the witness here when the answer is YES")

    p = commands.add_parser("verify", help="check a certificate or composite witness")
    p.add_argument("instance", type=Path)
    p.add_argument("certificate", type=Path)

    p = commands.add_parser("reduce-to-sefe", help="reduce a star instance to sunflower SEFE")
    p.add_argument("instance", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = commands.add_parser("gen", help="generate instances")
    generators = p.add_subparsers(dest="generator", required=True)
    g = generators.add_parser("theorem1", help="tree-backbone gadget from a 3-graph SEFE instance")
    g.add_argument("sefe", type=Path)
    g.add_argument("--omega", type=int, default=2)
    g.add_argument("-o", "--output", type=Path, required=True)
    g = generators.add_parser("random", help="seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--omega", type=int, default=1)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    shape = g.add_mutually_exclusive_group()
    shape.add_argument("--star", action="store_true", help="2-connected block plus isolated vertices")
    shape.add_argument("--tree", action="store_true", help="random recursive tree backbone")
    g.add_argument("-o", "--output", type=Path, required=True)

    p = commands.add_parser("export-dot", help="write a schematic DOT rendering")
    p.add_argument("instance", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)

    p = commands.add_parser("oracle", help="exhaustive ground-truth decision")
    p.add_argument("instance", type=Path)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = commands.add_parser("describe", help="print category, counts and validation problems")
    p.add_argument("instance", type=Path)
    return parser


def _run(args: argparse.Namespace) -> int:
    command = args.command if args.command != "gen" else f"gen-{args.generator}"
    config = RunConfig(
        command=command,
        input_path=getattr(args, "instance", None) or getattr(args, "sefe", None),
        output_path=getattr(args, "output", None),
        certificate_path=getattr(args, "certificate", None),
        mode=getattr(args, "mode", "auto"),
        budget=getattr(args, "budget", DEFAULT_BUDGET),
        seed=getattr(args, "seed", DEFAULT_SEED),
    )
    logger.debug("Running %s", config)
    if command == "decide":
        return cmd_decide(config)
    if command == "verify":
        return cmd_verify(config)
    if command == "reduce-to-sefe":
        return cmd_reduce(config)
    if command == "gen-theorem1":
        return cmd_gen_theorem1(config, args.omega)
    if command == "gen-random":
        shape = "star" if args.star else "tree" if args.tree else "plain"
        return cmd_gen_random(config, args.n, args.m, args.omega, shape)
    if command == "export-dot":
        return cmd_export_dot(config)
    if command == "oracle":
        return cmd_oracle(config)
    return cmd_describe(config)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return _run(args)
    except (ValueError, OSError) as exc:
        # StreamedPlanarityError and json.JSONDecodeError are both ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
