"""
antirb - exact verification of anti-Rota-Baxter operators.
Command-line entry point.

Exit codes: 0 pass or completed run, 1 verification failure, 2 usage or input error.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from models.algebra import AlgebraKind
from models.errors import AntiRBError
from models.families import SolverBranch, Sl2Tag
from models.operator import IdentityKind
from models.scalar import parse_scalar
from models.settings import DEFAULT_SETTINGS, RunSettings
from services import (
    DocumentService,
    ReportService,
    Sl2Service,
    VerificationService,
    WittSolver,
    WittVirasoroService,
)
from services.reports import WINDOW_NOTICE

logger = logging.getLogger("antirb")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

# Argument keys left out of the echoed command: presentation and execution knobs.
NOT_ECHOED = ("handler", "verbose", "format", "started", "threads")


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _command_echo(args: argparse.Namespace) -> dict:
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in NOT_ECHOED:
            continue
        if key == "input":
            value = Path(value).name
        echo[key] = value
    return echo


class AntiRBApp:
    """Command-line application: owns the services and one handler per command."""

    def __init__(self, settings: RunSettings = DEFAULT_SETTINGS):
        self.settings = settings
        self.verifier = VerificationService()
        self.families = WittVirasoroService(self.verifier)
        self.solver = WittSolver(self.families)
        self.sl2 = Sl2Service(self.verifier, settings)
        self.documents = DocumentService(self.families)
        self.reports = ReportService()

    def _emit(self, body: dict, fmt: str, started: float):
        if fmt == "text":
            sys.stdout.write(self.reports.render_text(body))
        else:
            sys.stdout.write(self.reports.dump_json(self.reports.envelope(body, time.monotonic() - started)))

    def cmd_verify(self, args: argparse.Namespace) -> int:
        document = self.documents.load_document(args.input)
        delta = parse_scalar(args.delta)
        kind = IdentityKind.ANTI_RB if delta == -1 else IdentityKind.DELTA_RB
        checks = [self.verifier.verify_identity(document.operator, args.window, kind, delta)]
        if args.strong:
            checks.append(self.verifier.verify_identity(document.operator, args.window, IdentityKind.STRONG))
        body = self.reports.verification_body(_command_echo(args), document.operator.describe(), checks,
                                              graded=document.algebra.graded)
        self._emit(body, args.format, args.started)
        return EXIT_OK if body["status"] == "pass" else EXIT_FAIL

    def cmd_search(self, args: argparse.Namespace) -> int:
        branch = SolverBranch(args.branch)
        candidates = self.solver.enumerate_witt_solutions(args.degree, args.window, branch)
        payload = {
            "degree": args.degree,
            "window": args.window,
            "branch": branch.value,
            "candidates": [{**c.to_dict(), **self.solver.classify_solution(c).to_dict()} for c in candidates],
            "stable_count": sum(c.stable for c in candidates),
        }
        body = self.reports.adjudication_body(_command_echo(args), payload, [WINDOW_NOTICE])
        body["status"] = "complete"
        self._emit(body, args.format, args.started)
        return EXIT_OK

    def cmd_adjudicate(self, args: argparse.Namespace) -> int:
        window = args.window if args.window is not None else max(self.settings.window, 2 * abs(args.degree) + 4)
        result = self.families.adjudicate(args.degree, window, AlgebraKind(args.algebra))
        body = self.reports.adjudication_body(_command_echo(args), result.to_dict(), [WINDOW_NOTICE])
        self._emit(body, args.format, args.started)
        return EXIT_OK

    def cmd_sl2_families(self, args: argparse.Namespace) -> int:
        results = self.sl2.verify_all_families(args.samples, args.seed)
        payload = {
            "families": [r.to_dict() for r in results],
            "strong_unlisted": [r.tag.value for r in results if not r.strong_listed and r.strong_falsified == 0],
            "strong_listed_falsified": [r.tag.value for r in results if r.strong_listed and r.strong_falsified],
        }
        self._emit(self.reports.adjudication_body(_command_echo(args), payload), args.format, args.started)
        return EXIT_OK

    def cmd_sl2_grid(self, args: argparse.Namespace) -> int:
        result = self.sl2.grid_search(args.range, args.threads)
        self._emit(self.reports.adjudication_body(_command_echo(args), result.to_dict()), args.format, args.started)
        return EXIT_OK

    def cmd_sl2_bridge(self, args: argparse.Namespace) -> int:
        results = self.sl2.bridge_samples(args.samples, args.seed)
        payload = {
            "samples": len(results),
            "passed": sum(r.passed for r in results),
            "closed_form_skipped": sum(r.closed_form_agrees is None for r in results),
            "failures": [r.to_dict() for r in results if not r.passed],
        }
        self._emit(self.reports.adjudication_body(_command_echo(args), payload), args.format, args.started)
        return EXIT_OK

    def cmd_sl2_invertibility(self, args: argparse.Namespace) -> int:
        verdicts = self.sl2.check_invertibility_remark(args.samples, seed=args.seed)
        payload = {"conditions": [v.to_dict() for v in verdicts]}
        self._emit(self.reports.adjudication_body(_command_echo(args), payload), args.format, args.started)
        return EXIT_OK

    def cmd_sl2_symbolic(self, args: argparse.Namespace) -> int:
        payload = {"patterns": [self.sl2.symbolic_family_check(tag).to_dict() for tag in Sl2Tag]}
        self._emit(self.reports.adjudication_body(_command_echo(args), payload), args.format, args.started)
        return EXIT_OK

    def cmd_jacobi(self, args: argparse.Namespace) -> int:
        result = self.verifier.check_jacobi(AlgebraKind(args.algebra), args.window)
        body = self.reports.base_body(_command_echo(args), result.status)
        body.update(result.to_dict())
        self._emit(body, args.format, args.started)
        return EXIT_OK

    def build_parser(self) -> argparse.ArgumentParser:
        settings = self.settings
        parser = _Parser(prog="antirb", description="Exact anti-Rota-Baxter verification toolkit.")
        parser.add_argument("-v", "--verbose", action="count", default=0,
                            help="log progress to stderr (-vv for debug)")
        sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

        def with_format(p):
            p.add_argument("--format", choices=("json", "text"), default="json")
            return p

        verify = with_format(sub.add_parser("verify", help="check an operator document"))
        verify.add_argument("--input", required=True)
        verify.add_argument("--window", type=int, default=settings.window)
        verify.add_argument("--delta", default=settings.delta)
        verify.add_argument("--strong", action="store_true")
        verify.set_defaults(handler=self.cmd_verify)

        search = with_format(sub.add_parser("search", help="enumerate windowed Witt solutions"))
        search.add_argument("--algebra", choices=("witt",), default="witt")
        search.add_argument("--degree", type=int, required=True)
        search.add_argument("--window", type=int, default=settings.window)
        search.add_argument("--branch", choices=("f0", "f0zero"), default="f0")
        search.set_defaults(handler=self.cmd_search)

        adj = with_format(sub.add_parser("adjudicate", help="verify a degree's family catalog"))
        adj.add_argument("--algebra", choices=("witt", "virasoro"), default="witt")
        adj.add_argument("--degree", type=int, required=True)
        adj.add_argument("--window", type=int, default=None)
        adj.set_defaults(handler=self.cmd_adjudicate)

        jac = with_format(sub.add_parser("jacobi", help="check the structure constants"))
        jac.add_argument("--algebra", choices=[k.value for k in AlgebraKind], default="witt")
        jac.add_argument("--window", type=int, default=settings.window)
        jac.set_defaults(handler=self.cmd_jacobi)

        sl2_parser = sub.add_parser("sl2", help="sl2 pattern suite")
        sl2_sub = sl2_parser.add_subparsers(dest="action", required=True, parser_class=_Parser)

        fam = with_format(sl2_sub.add_parser("verify-families"))
        fam.add_argument("--samples", type=int, default=settings.samples)
        fam.add_argument("--seed", type=int, default=settings.seed)
        fam.set_defaults(handler=self.cmd_sl2_families)

        grid = with_format(sl2_sub.add_parser("grid"))
        grid.add_argument("--range", type=int, default=settings.grid_range)
        grid.add_argument("--threads", type=int, default=settings.workers)
        grid.set_defaults(handler=self.cmd_sl2_grid)

        bridge = with_format(sl2_sub.add_parser("bridge"))
        bridge.add_argument("--samples", type=int, default=settings.samples)
        bridge.add_argument("--seed", type=int, default=settings.seed)
        bridge.set_defaults(handler=self.cmd_sl2_bridge)

        inv = with_format(sl2_sub.add_parser("invertibility"))
        inv.add_argument("--samples", type=int, default=50)
        inv.add_argument("--seed", type=int, default=settings.seed)
        inv.set_defaults(handler=self.cmd_sl2_invertibility)

        sym = with_format(sl2_sub.add_parser("symbolic"))
        sym.set_defaults(handler=self.cmd_sl2_symbolic)
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        started = time.monotonic()
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except UsageError as error:
            print(f"error: {error}", file=sys.stderr)
            return EXIT_ERROR
        except SystemExit as exit_:
            # --help
            return EXIT_OK if exit_.code in (0, None) else EXIT_ERROR

        _configure_logging(args.verbose)
        args.started = started
        logger.debug("running %s", args.command)
        try:
            return args.handler(args)
        except (AntiRBError, json.JSONDecodeError, ValueError) as error:
            print(f"error: {error}", file=sys.stderr)
            return EXIT_ERROR


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return AntiRBApp().run(argv)


if __name__ == "__main__":
    sys.exit(main())
