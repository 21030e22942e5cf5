"""Command line interface: analyze, demo and cover."""
import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from app.config import settings
from app.exceptions import ComponentError, ContractViolation
from app.models.report import AnalysisOptions, CertifyRequest, CoverRequest
from app.services.report_writer import ReportWriter
from app.workflows.analysis_workflow import DEMO_ALIASES, DEMOS, AnalysisWorkflow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONTRACT = 2
EXIT_COMPONENT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shift-compactness",
        description="Decide, certify and probe strong compactness of bilateral weighted shifts",
    )
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level (default: settings)")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Profile a weight rule and decide its verdicts")
    analyze.add_argument("config", type=Path, help="JSON weight rule, e.g. {\"kind\": \"constant\", \"value\": 1}")
    analyze.add_argument("--horizon-n", type=int, default=settings.horizon_n)
    analyze.add_argument("--horizon-k", type=int, default=settings.horizon_k)
    analyze.add_argument("--sliding-horizon-n", type=int, default=settings.sliding_horizon_n)
    analyze.add_argument(
        "--certify",
        action="append",
        default=[],
        metavar="k=..,eps=..,c=..",
        help="Request a certificate (repeatable); c defaults to the suggested midpoint",
    )
    analyze.add_argument("--witness", action="store_true", help="Scan orbit witnesses for W and W^-1")
    analyze.add_argument(
        "--forward-witness", action="store_true", help="Let a forward orbit witness decide the verdict for W"
    )
    analyze.add_argument("--inverse-relations", action="store_true", help="Profile the inverse conjugate as well")
    analyze.add_argument("--seed", type=int, default=settings.default_seed)
    analyze.add_argument("--out", type=Path, help="Report path (stdout when omitted)")
    analyze.add_argument("--csv", type=Path, metavar="DIR", help="Export per-n sequences as CSV files")

    demo = commands.add_parser("demo", help="Run a bundled example")
    demo.add_argument("name", choices=sorted([*DEMOS, *DEMO_ALIASES]))
    demo.add_argument("--out", type=Path)

    cover = commands.add_parser("cover", help="Greedy eps-net of sampled orbit points p(W)e_k")
    cover.add_argument("config", type=Path)
    cover.add_argument("--k", type=int, default=0)
    cover.add_argument("--eps", type=float, required=True)
    cover.add_argument("--samples", type=int, default=200)
    cover.add_argument("--max-degree", type=int, default=60)
    cover.add_argument("--full-degree", action="store_true", help="Draw all max-degree + 1 coefficients per sample")
    cover.add_argument("--seed", type=int, default=settings.default_seed)
    cover.add_argument("--sum-set", action="store_true", help="Also compare against the orthogonal-part nets")
    cover.add_argument("--out", type=Path)
    return parser


def _emit(payload: bytes, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(payload.decode() + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(payload)
    logger.info(f"Wrote {out}")


def _load_config(path: Path) -> dict:
    return json.loads(path.read_text())


def run_analyze(args: argparse.Namespace, writer: ReportWriter) -> None:
    options = AnalysisOptions(
        horizon_n=args.horizon_n,
        horizon_k=args.horizon_k,
        sliding_horizon_n=args.sliding_horizon_n,
        certify=[CertifyRequest.parse(text) for text in args.certify],
        witness=args.witness,
        forward_witness=args.forward_witness,
        inverse_relations=args.inverse_relations,
        seed=args.seed,
    )
    report = AnalysisWorkflow().run(_load_config(args.config), options)
    _emit(writer.to_json_bytes(report), args.out)
    if args.csv:
        writer.write_sequences(report.profile, args.csv, "csv")


def run_demo(args: argparse.Namespace, writer: ReportWriter) -> None:
    _emit(writer.to_json_bytes(AnalysisWorkflow().demo(args.name)), args.out)


def run_cover(args: argparse.Namespace, writer: ReportWriter) -> None:
    request = CoverRequest(
        rule=_load_config(args.config),
        k=args.k,
        eps=args.eps,
        samples=args.samples,
        max_degree=args.max_degree,
        full_degree=args.full_degree,
        seed=args.seed,
        sum_set=args.sum_set,
    )
    _emit(writer.to_json_bytes(AnalysisWorkflow().cover(request)), args.out)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    writer = ReportWriter()
    try:
        if args.command == "analyze":
            run_analyze(args, writer)
        elif args.command == "demo":
            run_demo(args, writer)
        else:
            run_cover(args, writer)
    except (ContractViolation, ValidationError, json.JSONDecodeError, OSError) as exc:
        logger.error(f"Invalid input: {exc}")
        return EXIT_CONTRACT
    except ComponentError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_COMPONENT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
