"""Machine-readable reports: one JSON document or one CSV row per point."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__
from .verify import VerificationReport

CSV_COLUMNS = (
    "case_id", "kind", "p", "N", "r", "d", "f", "n",
    "point", "lhs", "rhs", "match", "skipped_reason",
)


@dataclass
class ReportDocument:
    version: str = __version__
    config: dict = field(default_factory=dict)
    cases: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        return {"pass": all(c["pass"] for c in self.cases), "cases": len(self.cases)}

    @property
    def passed(self) -> bool:
        return self.summary["pass"]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "cases": self.cases,
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ReportDocument:
        missing = {"version", "config", "cases", "summary"} - set(data)
        if missing:
            raise ValueError(f"report is missing keys: {', '.join(sorted(missing))}")
        return cls(data["version"], data["config"], list(data["cases"]))

    @classmethod
    def from_verification(cls, report: VerificationReport, config: dict) -> ReportDocument:
        return cls(__version__, config, [c.to_dict() for c in report.cases])


def emit_report(doc: ReportDocument, fmt: str = "json") -> bytes:
    if fmt == "json":
        text = json.dumps(doc.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
        return text.encode("utf-8")
    if fmt == "csv":
        return _emit_csv(doc).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _emit_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for case in doc.cases:
        params = case.get("params", {})
        head = [
            case["case_id"],
            case["kind"],
            params.get("p"),
            params.get("N"),
            params.get("r"),
            params.get("d"),
            params.get("f"),
            params.get("n"),
        ]
        for pt in case.get("points", []):
            row = head + [
                pt.get("point"),
                pt.get("lhs"),
                pt.get("rhs"),
                pt.get("match"),
                pt.get("skipped_reason"),
            ]
            writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def parse_report(data: bytes | str) -> ReportDocument:
    """Inverse of ``emit_report(doc, "json")``."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return ReportDocument.from_dict(json.loads(data))
