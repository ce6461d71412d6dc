"""Reading operator documents (JSON) into operators."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from models.algebra import AlgebraKind
from models.errors import AntiRBError, DocumentError
from models.families import VirFamily, VirFamilyTag, WittFamily, WittFamilyTag
from models.matrix import Matrix3
from models.operator import HomogeneousOperator, TableSource
from models.scalar import Scalar, ONE, ZERO, parse_scalar
from services.witt_virasoro import WittVirasoroService

Operator = Union[HomogeneousOperator, Matrix3]

TOP_LEVEL_FIELDS = {"algebra", "operator"}
HOMOGENEOUS_FIELDS = {"kind", "degree", "f", "family", "theta", "mu", "nu"}
MATRIX_FIELDS = {"kind", "rows"}
TABLE_FIELDS = {"domain", "values"}
FAMILY_FIELDS = {"name", "params"}
WITT_PARAMS = {"alpha", "beta", "gamma", "l"}
VIR_PARAMS = {"alpha", "beta", "theta", "mu", "nu"}


@dataclass
class OperatorDocument:
    """A parsed document: the algebra and the operator it describes."""
    algebra: AlgebraKind
    operator: Operator
    source: dict


def _reject_unknown(data: dict, allowed: set, where: str):
    if not isinstance(data, dict):
        raise DocumentError(f"{where} must be an object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise DocumentError(f"unknown field(s) in {where}: {', '.join(unknown)}")


def _scalar(value: Any, where: str) -> Scalar:
    if not isinstance(value, str):
        raise DocumentError(f"{where} must be a scalar string, got {json.dumps(value)}")
    return parse_scalar(value)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where} must be an integer")
    return value


def _parse_table(data: dict) -> TableSource:
    _reject_unknown(data, TABLE_FIELDS, "f")
    domain = data.get("domain")
    if not isinstance(domain, list) or len(domain) != 2:
        raise DocumentError("f.domain must be [lo, hi]")
    lo, hi = (_int(x, "f.domain") for x in domain)
    if lo > hi:
        raise DocumentError("f.domain must satisfy lo <= hi")
    raw = data.get("values", {})
    if not isinstance(raw, dict):
        raise DocumentError("f.values must be an object")
    values: dict[int, Scalar] = {}
    for key, value in raw.items():
        try:
            m = int(key)
        except ValueError:
            raise DocumentError(f"f.values key {key!r} is not an integer") from None
        if m < lo or m > hi:
            raise DocumentError(f"f.values key {m} lies outside the domain [{lo}, {hi}]")
        values[m] = _scalar(value, f"f.values[{key}]")
    return TableSource(lo, hi, values)


def _parse_matrix(data: dict) -> Matrix3:
    _reject_unknown(data, MATRIX_FIELDS, "operator")
    rows = data.get("rows")
    if not isinstance(rows, list) or len(rows) != 3 or any(
        not isinstance(row, list) or len(row) != 3 for row in rows
    ):
        raise DocumentError("operator.rows must be a 3x3 array")
    return Matrix3.of([[_scalar(x, f"rows[{i}][{j}]") for j, x in enumerate(row)]
                       for i, row in enumerate(rows)])


class DocumentService:
    """Loads operator documents and builds the operators they describe."""

    def __init__(self, families: Optional[WittVirasoroService] = None):
        self.families = families or WittVirasoroService()

    def load_document(self, path: Union[str, Path]) -> OperatorDocument:
        """Read and parse a UTF-8 JSON operator document."""
        try:
            with open(Path(path), "r", encoding="utf-8") as f:
                data = json.load(f)
        except OSError as error:
            raise DocumentError(f"cannot read {path}: {error.strerror}") from None
        except json.JSONDecodeError as error:
            raise DocumentError(f"invalid JSON at line {error.lineno} column {error.colno}: {error.msg}") from None
        try:
            return self.parse_document(data)
        except DocumentError:
            raise
        except AntiRBError as error:
            raise DocumentError(str(error)) from error

    def parse_document(self, data: Any) -> OperatorDocument:
        """Validate a decoded JSON document and build its operator."""
        _reject_unknown(data, TOP_LEVEL_FIELDS, "document")
        try:
            algebra = AlgebraKind(data.get("algebra"))
        except ValueError:
            raise DocumentError(f"unknown algebra {data.get('algebra')!r}") from None
        operator = data.get("operator")
        if not isinstance(operator, dict):
            raise DocumentError("operator must be an object")
        kind = operator.get("kind")
        if algebra is AlgebraKind.SL2:
            if kind != "matrix":
                raise DocumentError("sl2 operators have kind 'matrix'")
            return OperatorDocument(algebra, _parse_matrix(operator), data)
        if kind != "homogeneous":
            raise DocumentError(f"{algebra.value} operators have kind 'homogeneous'")
        return OperatorDocument(algebra, self._parse_homogeneous(algebra, operator), data)

    def _parse_homogeneous(self, algebra: AlgebraKind, data: dict) -> HomogeneousOperator:
        _reject_unknown(data, HOMOGENEOUS_FIELDS, "operator")
        if "degree" not in data:
            raise DocumentError("operator.degree is required")
        degree = _int(data["degree"], "operator.degree")
        if ("f" in data) == ("family" in data):
            raise DocumentError("operator needs exactly one of f, family")
        central = {key: _scalar(data[key], key) for key in ("theta", "mu", "nu") if key in data}
        if central and algebra is not AlgebraKind.VIRASORO:
            raise DocumentError("theta, mu, nu are Virasoro-only fields")

        if "f" in data:
            return HomogeneousOperator(
                algebra, degree, _parse_table(data["f"]),
                theta=central.get("theta", ZERO), mu=central.get("mu", ZERO), nu=central.get("nu", ZERO),
            )
        family = data["family"]
        _reject_unknown(family, FAMILY_FIELDS, "family")
        if "name" not in family:
            raise DocumentError("family.name is required")
        if central:
            raise DocumentError("central parameters of a family go in family.params")
        params = family.get("params", {})
        if algebra is AlgebraKind.WITT:
            return self._witt_family(family["name"], degree, params)
        return self._vir_family(family["name"], degree, params)

    def _witt_family(self, name: str, degree: int, params: dict) -> HomogeneousOperator:
        _reject_unknown(params, WITT_PARAMS, "family.params")
        try:
            tag = WittFamilyTag(name)
        except ValueError:
            raise DocumentError(f"unknown Witt family {name!r}") from None
        scalars = [params[key] for key in ("alpha", "beta", "gamma") if key in params]
        if len(scalars) > 1:
            raise DocumentError("give one of alpha, beta, gamma")
        param = _scalar(scalars[0], "family.params") if scalars else ONE
        l = _int(params["l"], "family.params.l") if "l" in params else None
        k = degree
        if tag is WittFamilyTag.II:
            if degree % 2:
                raise DocumentError("family II has even degree")
            k = degree // 2
        return self.families.build_witt_family(WittFamily(tag, k, param, l))

    def _vir_family(self, name: str, degree: int, params: dict) -> HomogeneousOperator:
        _reject_unknown(params, VIR_PARAMS, "family.params")
        try:
            tag = VirFamilyTag(name)
        except ValueError:
            raise DocumentError(f"unknown Virasoro family {name!r}") from None
        scalars = {key: _scalar(value, f"family.params.{key}") for key, value in params.items()}
        k = degree
        if tag is VirFamilyTag.III:
            if degree % 2:
                raise DocumentError("family III has even degree")
            k = degree // 2
        return self.families.build_vir_family(VirFamily(tag, k, **scalars))
