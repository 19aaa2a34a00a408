"""
Matrix input reader.

Text: a line holding n followed by n lines of n whitespace-separated
decimals; several such blocks may follow each other. JSON: an object
{"n": int, "rows": [[...], ...]}, a list of them, or JSON lines such as the
sample dump (which uses "matrix" for the rows). The first non-blank byte
decides: '{' or '[' means JSON.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .config import MAX_N
from .errors import MatrixFormatError
from .linalg.matrix import SymMatrix

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass
class ParsedMatrix:
    """A matrix plus where it came from"""

    matrix: SymMatrix
    source: str
    index: int = 0
    line: Optional[int] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{self.source}#{self.index}"


def _build(rows: Any, source: str, line: Optional[int], n: Optional[int] = None) -> SymMatrix:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"matrix entries are not numbers ({exc})", source, line) from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MatrixFormatError(f"expected a square matrix, got shape {arr.shape}", source, line)
    if n is not None and arr.shape[0] != n:
        raise MatrixFormatError(f"declared n={n} but found {arr.shape[0]} rows", source, line)
    if not 1 <= arr.shape[0] <= MAX_N:
        raise MatrixFormatError(f"n={arr.shape[0]} outside 1..{MAX_N}", source, line)
    if not np.all(np.isfinite(arr)):
        raise MatrixFormatError("matrix entries must be finite", source, line)
    gap = float(np.max(np.abs(arr - arr.T)))
    if gap > SYMMETRY_TOL:
        raise MatrixFormatError(f"matrix is not symmetric (max |a_ij - a_ji| = {gap:.3e})", source, line)
    return SymMatrix.from_dense(arr)


def parse_text(text: str, source: str = "<input>") -> List[ParsedMatrix]:
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, body) for no, body in lines if body]
    out: List[ParsedMatrix] = []
    pos = 0
    while pos < len(lines):
        header_line, header = lines[pos]
        try:
            n = int(header)
        except ValueError:
            raise MatrixFormatError(f"expected the dimension n, got {header!r}", source, header_line)
        if not 1 <= n <= MAX_N:
            raise MatrixFormatError(f"n={n} outside 1..{MAX_N}", source, header_line)
        body = lines[pos + 1: pos + 1 + n]
        if len(body) < n:
            raise MatrixFormatError(f"expected {n} rows, file ends after {len(body)}", source, header_line)
        rows = []
        for line_no, row_text in body:
            parts = row_text.split()
            if len(parts) != n:
                raise MatrixFormatError(f"expected {n} entries, got {len(parts)}", source, line_no)
            try:
                rows.append([float(part) for part in parts])
            except ValueError:
                raise MatrixFormatError(f"non-numeric entry in {row_text!r}", source, line_no)
        out.append(ParsedMatrix(_build(rows, source, header_line, n), source, len(out), header_line))
        pos += n + 1
    return out


def _from_record(record: Any, source: str, index: int, line: Optional[int]) -> ParsedMatrix:
    if not isinstance(record, dict):
        raise MatrixFormatError("JSON matrix must be an object with 'rows'", source, line)
    rows = record.get("rows", record.get("matrix"))
    if rows is None:
        raise MatrixFormatError("JSON matrix object has no 'rows'", source, line)
    provenance = {key: record[key] for key in ("master_seed", "trial_index", "profile") if key in record}
    return ParsedMatrix(_build(rows, source, line, record.get("n")), source, index, line, provenance)


def parse_json(text: str, source: str = "<input>") -> List[ParsedMatrix]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        # JSON lines
        out = []
        for line_no, raw in enumerate(text.splitlines(), start=1):
            if not raw.strip():
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise MatrixFormatError(f"invalid JSON ({exc.msg})", source, line_no) from exc
            out.append(_from_record(record, source, len(out), line_no))
        return out
    records = payload if isinstance(payload, list) else [payload]
    return [_from_record(record, source, i, None) for i, record in enumerate(records)]


def parse_matrices(text: str, source: str = "<input>") -> List[ParsedMatrix]:
    """Auto-detect the format from the first non-blank byte"""
    stripped = text.lstrip()
    if not stripped:
        raise MatrixFormatError("no matrix found", source)
    if stripped[0] in "{[":
        return parse_json(text, source)
    return parse_text(text, source)


def load_matrices(path: Union[str, Path]) -> List[ParsedMatrix]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read file ({exc.strerror})", str(path)) from exc
    matrices = parse_matrices(text, str(path))
    logger.info("loaded %d matrices from %s", len(matrices), path)
    return matrices
