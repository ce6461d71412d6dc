"""Services for the anti-Rota-Baxter toolkit."""

from .verification import VerificationService
from .witt_virasoro import WittVirasoroService
from .solver import WittSolver
from .sl2 import Sl2Service
from .documents import DocumentService
from .reports import ReportService

__all__ = [
    "VerificationService",
    "WittVirasoroService",
    "WittSolver",
    "Sl2Service",
    "DocumentService",
    "ReportService",
]
