"""Value types for the anti-Rota-Baxter toolkit."""

from .errors import (
    AntiRBError,
    DivisionByZero,
    ParseError,
    AlgebraMismatch,
    InvalidFamilyParams,
    WindowTooSmall,
    ExcludedLocus,
    SingularMatrix,
    DocumentError,
)
from .scalar import Scalar, ZERO, ONE, I, parse_scalar, format_scalar
from .algebra import AlgebraKind, BasisIndex, Element, L, e, central_index, bracket, bracket_basis
from .operator import (
    TableSource,
    FamilySource,
    HomogeneousOperator,
    IdentityKind,
    Violation,
    VerificationReport,
)
from .matrix import Matrix3
from .families import (
    WittFamilyTag,
    VirFamilyTag,
    Sl2Tag,
    STRONG_LISTED,
    WittFamily,
    VirFamily,
    Normalization,
    SolverBranch,
    SolutionCandidate,
    Classification,
)
from .settings import RunSettings, DEFAULT_SETTINGS, TOOL_VERSION

__all__ = [
    # Errors
    "AntiRBError",
    "DivisionByZero",
    "ParseError",
    "AlgebraMismatch",
    "InvalidFamilyParams",
    "WindowTooSmall",
    "ExcludedLocus",
    "SingularMatrix",
    "DocumentError",
    # Scalars
    "Scalar",
    "ZERO",
    "ONE",
    "I",
    "parse_scalar",
    "format_scalar",
    # Algebra
    "AlgebraKind",
    "BasisIndex",
    "Element",
    "L",
    "e",
    "central_index",
    "bracket",
    "bracket_basis",
    # Operators
    "TableSource",
    "FamilySource",
    "HomogeneousOperator",
    "IdentityKind",
    "Violation",
    "VerificationReport",
    "Matrix3",
    # Families
    "WittFamilyTag",
    "VirFamilyTag",
    "Sl2Tag",
    "STRONG_LISTED",
    "WittFamily",
    "VirFamily",
    "Normalization",
    "SolverBranch",
    "SolutionCandidate",
    "Classification",
    # Settings
    "RunSettings",
    "DEFAULT_SETTINGS",
    "TOOL_VERSION",
]
