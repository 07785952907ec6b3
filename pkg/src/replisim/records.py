"""Run records, the rate-sample CSV schema and bit-stable serialisation.

Floats go to CSV with 17 significant digits. JSON uses Python's shortest
round-trip float repr, which also restores the exact double on reading.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .core import ValidationError
from .discrimination import RateSample

RATE_SAMPLE_COLUMNS = ("a", "observed_rate", "sigma_rel")


class InputParseError(ValueError):
    """Raised for malformed input files; the message names the offending line."""


@dataclass(frozen=True)
class RunRecord:
    tool_version: str
    command: str
    config_echo: dict
    rng_algorithm: str
    master_seed: int | None
    started: str
    finished: str
    results: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))

    def results_bytes(self) -> bytes:
        return canonical_bytes(self.results)


def canonical_bytes(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode("utf-8")


def format_value(value) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    columns = list(columns or (rows[0].keys() if rows else []))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def write_rate_samples(samples: Iterable[RateSample]) -> str:
    return rows_to_csv(
        [{"a": s.a, "observed_rate": float(s.observed_rate), "sigma_rel": float(s.sigma_rel)} for s in samples],
        RATE_SAMPLE_COLUMNS,
    )


def parse_rate_samples(text: str) -> list[RateSample]:
    """Parse the ``a,observed_rate,sigma_rel`` CSV schema; line numbers are 1-based and include the header."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputParseError("line 1: empty input, expected header a,observed_rate,sigma_rel") from None
    if tuple(h.strip() for h in header) != RATE_SAMPLE_COLUMNS:
        raise InputParseError(f"line 1: bad header {','.join(header)!r}, expected a,observed_rate,sigma_rel")
    samples = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise InputParseError(f"line {line}: expected 3 fields, got {len(row)}: {','.join(row)!r}")
        try:
            a = int(row[0])
            rate = float(row[1])
            sigma = float(row[2])
        except ValueError:
            raise InputParseError(f"line {line}: non-numeric field in {','.join(row)!r}") from None
        try:
            samples.append(RateSample(a, rate, sigma))
        except ValidationError as exc:
            raise InputParseError(f"line {line}: {exc}") from None
    if not samples:
        raise InputParseError("no data rows after header")
    return samples


def read_rate_samples(path: str | Path) -> list[RateSample]:
    return parse_rate_samples(Path(path).read_text(encoding="utf-8"))
