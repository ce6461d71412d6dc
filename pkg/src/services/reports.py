"""Report documents: deterministic JSON bodies plus a text renderer."""

import json
from typing import Any, Iterable, Optional

from models.operator import VerificationReport
from models.settings import TOOL_VERSION

WINDOW_NOTICE = "window-consistent: identities checked on the stated window only, not over all of Z"


class ReportService:
    """Builds report bodies and serializes them as JSON or text."""

    def __init__(self, tool_version: str = TOOL_VERSION):
        self.tool_version = tool_version

    def base_body(self, command: dict, status: str) -> dict:
        return {"tool_version": self.tool_version, "command": command, "status": status}

    def verification_body(self, command: dict, operator: dict, reports: Iterable[VerificationReport],
                          graded: bool) -> dict:
        """Merge one or more identity checks into a single report body."""
        reports = list(reports)
        failed = any(not r.passed for r in reports)
        body = self.base_body(command, "fail" if failed else "pass")
        body["operator"] = operator
        body["checked"] = sum(r.checked for r in reports)
        body["skipped"] = sum(r.skipped for r in reports)
        body["violations"] = [
            {"identity": r.kind.value, **v.to_dict()} for r in reports for v in r.violations
        ]
        body["checks"] = [r.to_dict() for r in reports]
        notices = []
        if graded:
            notices.append(WINDOW_NOTICE)
        if body["skipped"]:
            notices.append(f"{body['skipped']} evaluation(s) skipped: coefficients outside the table domain")
        if notices:
            body["notices"] = notices
        return body

    def adjudication_body(self, command: dict, payload: dict, notices: Optional[list[str]] = None) -> dict:
        body = self.base_body(command, "adjudicated")
        body.update(payload)
        if notices:
            body["notices"] = notices
        return body

    @staticmethod
    def envelope(body: dict, elapsed: float) -> dict:
        """Wall-clock data lives outside the body so the body stays byte-stable."""
        return {"report": body, "envelope": {"elapsed_seconds": round(elapsed, 3)}}

    @staticmethod
    def dump_json(document: dict) -> str:
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def render_text(self, body: dict) -> str:
        """Indented key/value rendering of a report body for terminals."""
        lines: list[str] = []
        for key in ("status", "tool_version"):
            if key in body:
                lines.append(f"{key}: {body[key]}")
        for key in sorted(k for k in body if k not in ("status", "tool_version")):
            self._render(body[key], 0, lines, key)
        return "\n".join(lines) + "\n"

    @staticmethod
    def _leaf(value: Any) -> str:
        if value is None:
            return "null"
        if isinstance(value, bool):
            return "true" if value else "false"
        return str(value)

    def _render(self, value: Any, indent: int, lines: list[str], key: Optional[str] = None):
        pad = "  " * indent
        prefix = f"{pad}{key}: " if key is not None else f"{pad}- "
        if isinstance(value, dict):
            if not value:
                lines.append(prefix + "{}")
                return
            lines.append(prefix.rstrip())
            for k in sorted(value):
                self._render(value[k], indent + 1, lines, str(k))
        elif isinstance(value, list):
            if not value:
                lines.append(prefix + "[]")
                return
            if all(not isinstance(x, (dict, list)) for x in value):
                lines.append(prefix + ", ".join(str(x) for x in value))
                return
            lines.append(prefix.rstrip())
            for item in value:
                self._render(item, indent + 1, lines)
        else:
            lines.append(prefix + self._leaf(value))
