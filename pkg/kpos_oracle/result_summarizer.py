"""
Report output: JSON-lines streams, pandas summaries and tabulate tables
"""
import json
import logging
from typing import IO, Any, Dict, Iterable, Sequence

import pandas as pd
from tabulate import tabulate

from .config import Status
from .reports import FORMAT_VERSION, InequalityReport

logger = logging.getLogger(__name__)

STATUS_COLUMNS = [status.value for status in Status]
CHECK_COLUMNS = ["statement", "n", "k", "p", "lhs", "rhs", "margin", "status", "tolerance_level", "seed", "trial_index"]


class ResultSummarizer:
    """Turns verifier reports into the three output formats"""

    def __init__(self, float_format: str = ".6g"):
        self.float_format = float_format

    def write_stream(self, reports: Iterable[InequalityReport], handle: IO[str]) -> int:
        """One JSON object per line, flushed per report"""
        written = 0
        for report in reports:
            handle.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")
            handle.flush()
            written += 1
        return written

    def check_frame(self, reports: Sequence[InequalityReport]) -> pd.DataFrame:
        rows = []
        for report in reports:
            rows.append({
                "statement": report.statement,
                "n": report.n,
                "k": report.k,
                "p": report.p,
                "lhs": report.lhs,
                "rhs": report.rhs,
                "margin": report.margin,
                "status": report.status.value,
                "tolerance_level": report.tolerance_level,
                "seed": report.provenance.get("seed"),
                "trial_index": report.provenance.get("trial_index"),
            })
        return pd.DataFrame(rows, columns=CHECK_COLUMNS)

    def summary_frame(self, reports: Sequence[InequalityReport]) -> pd.DataFrame:
        """Counts per statement per status, statements sorted, every status a column"""
        frame = pd.DataFrame(
            [(r.statement, r.status.value) for r in reports],
            columns=["statement", "status"],
        )
        if frame.empty:
            return pd.DataFrame(columns=["statement", *STATUS_COLUMNS])
        counts = (
            frame.groupby(["statement", "status"]).size()
            .unstack(fill_value=0)
            .reindex(columns=STATUS_COLUMNS, fill_value=0)
            .sort_index()
            .reset_index()
        )
        counts.columns.name = None
        return counts

    def summary_document(self, reports: Sequence[InequalityReport], **extra: Any) -> Dict[str, Any]:
        counts = self.summary_frame(reports)
        return {
            "format_version": FORMAT_VERSION,
            **extra,
            "total_checks": len(reports),
            "summary": json.loads(counts.to_json(orient="records")),
            "candidates": [r.to_dict() for r in reports if r.is_candidate],
        }

    def candidates_document(self, reports: Sequence[InequalityReport], **extra: Any) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            **extra,
            "candidates": [r.to_dict() for r in reports if r.is_candidate],
        }

    def render_checks(self, reports: Sequence[InequalityReport], heading: str = "") -> str:
        lines = []
        if heading:
            lines.append(heading)
            lines.append("=" * 60)
        table = []
        for r in reports:
            if r.status is Status.INAPPLICABLE:
                detail = r.witness.get("reason", "")
            else:
                detail = format(r.margin, self.float_format)
            table.append([r.title, r.n, _dash(r.k), _dash(r.p), r.status.value, detail])
        lines.append(tabulate(table, headers=["Statement", "n", "k", "p", "Status", "Margin / reason"], tablefmt="simple"))
        return "\n".join(lines)

    def render_summary(self, reports: Sequence[InequalityReport], heading: str = "", failures: int = 0) -> str:
        counts = self.summary_frame(reports)
        lines = []
        if heading:
            lines.append(heading)
            lines.append("=" * 60)
        if counts.empty:
            lines.append("No checks were run.")
        else:
            lines.append(tabulate(counts.values.tolist(), headers=["Statement", *STATUS_COLUMNS], tablefmt="simple"))
        lines.append("")
        lines.append(f"Checks: {len(reports)}   Sampling failures: {failures}")
        candidates = [r for r in reports if r.is_candidate]
        if candidates:
            lines.append(f"Violated candidates: {len(candidates)}")
            for r in candidates[:10]:
                lines.append(f"  - {r.title} (n={r.n}, k={_dash(r.k)}, margin={r.margin:{self.float_format}}, trial={r.provenance.get('trial_index', '-')})")
        else:
            lines.append("No violated candidates.")
        return "\n".join(lines)


def _dash(value: Any) -> Any:
    return "-" if value is None else value


def has_candidates(reports: Iterable[InequalityReport]) -> bool:
    return any(r.is_candidate for r in reports)


def dump_json(document: Dict[str, Any], handle: IO[str]) -> None:
    json.dump(document, handle, indent=2, sort_keys=True)
    handle.write("\n")
    handle.flush()


def write_csv(frame: pd.DataFrame, handle: IO[str]) -> None:
    frame.to_csv(handle, index=False, lineterminator="\n")
    handle.flush()

