"""
Pytest configuration for the antirb test suite.

Provides shared service instances, fixtures for running the CLI
in-process and for writing operator documents to a temporary directory,
and the location of the checked-in golden files.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import pytest

from main import main
from services import (
    DocumentService,
    ReportService,
    Sl2Service,
    VerificationService,
    WittSolver,
    WittVirasoroService,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


@dataclass
class CliRun:
    """Exit code and captured streams of one in-process CLI run."""
    code: int
    stdout: str
    stderr: str

    @property
    def report(self) -> dict:
        return json.loads(self.stdout)["report"]


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    """Directory holding golden operator documents and report bodies."""
    return GOLDEN_DIR


@pytest.fixture
def run_cli(capsys) -> Callable[..., CliRun]:
    """
    Run ``main`` with the given arguments and capture its output.

    Usage:
        def test_something(run_cli):
            result = run_cli("verify", "--input", path)
            assert result.code == 0
    """
    def _run(*argv) -> CliRun:
        code = main([str(arg) for arg in argv])
        out, err = capsys.readouterr()
        return CliRun(code, out, err)

    return _run


@pytest.fixture
def write_document(tmp_path: Path) -> Callable[[object, str], Path]:
    """Write a decoded document (or raw text) to a JSON file under tmp_path."""
    def _write(document, name: str = "operator.json") -> Path:
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document)
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture(scope="session")
def verifier() -> VerificationService:
    return VerificationService()


@pytest.fixture(scope="session")
def families(verifier) -> WittVirasoroService:
    return WittVirasoroService(verifier)


@pytest.fixture(scope="session")
def solver(families) -> WittSolver:
    return WittSolver(families)


@pytest.fixture(scope="session")
def sl2(verifier) -> Sl2Service:
    return Sl2Service(verifier)


@pytest.fixture(scope="session")
def documents(families) -> DocumentService:
    return DocumentService(families)


@pytest.fixture(scope="session")
def reports() -> ReportService:
    return ReportService()
