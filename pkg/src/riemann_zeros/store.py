"""Persistent cache of solved zeros as versioned, line-oriented text files.

Layout of one cache file::

    # riemann-zeros zero cache
    # format_version=2
    # digits=30
    # method=asymptotic_eq
    1 14.1347251417346937904572519836 12 0.000489759715128
    2 21.0220396387715549926284795939 12 0.00031524863157

Each row is n, the ordinate, the digits the solver certified and the
residual ('-' when unknown). Ordinates are decimal strings, never binary
floats. One file exists per (method, digits) pair so a run never mixes
precisions.
"""

import logging
import os
import tempfile
from decimal import Context, Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from pydantic import ValidationError

from .errors import CacheIntegrityError
from .models import CacheHeader, ZeroMethod, ZeroRecord
from .utils import significant_digits


logger = logging.getLogger(__name__)

MAGIC = "# riemann-zeros zero cache"
FORMAT_VERSION = 2
NO_RESIDUAL = "-"


class ZeroCacheFile:
    """One cache file of zeros for a solving method at a fixed precision.

    Attributes:
        header: Format version, digits and method
        path: Location of the file
    """

    def __init__(self, cache_dir: Path, method: ZeroMethod, digits: int):
        """Initialize the cache handle (nothing is read until load()).

        Args:
            cache_dir: Directory holding the cache files
            method: Method whose zeros the file stores
            digits: Significant digits of the stored ordinates
        """
        self.header = CacheHeader(format_version=FORMAT_VERSION, digits=digits, method=method)
        self.path = Path(cache_dir) / f"zeros-{self.header.method.value}-d{digits}.dat"
        self._rows: Dict[int, ZeroRecord] = {}
        self._loaded = False

    @property
    def digits(self) -> int:
        return self.header.digits

    @property
    def method(self) -> ZeroMethod:
        return self.header.method

    def load(self) -> Dict[int, str]:
        """Read and validate the file; a missing file is an empty cache.

        Returns:
            Mapping n -> ordinate string

        Raises:
            CacheIntegrityError: If the header or any row is invalid, naming the line
        """
        self._rows = {}
        self._loaded = True
        if not self.path.exists():
            logger.info(f"No cache at {self.path}; starting empty")
            return {}

        with open(self.path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()

        fields = {}
        previous: Optional[ZeroRecord] = None
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line == MAGIC:
                    continue
                key, sep, value = line[1:].strip().partition("=")
                if not sep:
                    raise self._error(lineno, f"malformed header line {raw!r}")
                fields[key.strip()] = value.strip()
                continue

            if not fields:
                raise self._error(lineno, "data row before the header")
            record = self._parse_row(lineno, line)
            if previous is not None and record.n <= previous.n:
                raise self._error(lineno, f"index {record.n} does not increase past {previous.n}")
            if previous is not None and Decimal(record.y) <= Decimal(previous.y):
                raise self._error(lineno, f"ordinate of zero {record.n} does not increase")
            self._rows[record.n] = record
            previous = record

        self._check_header(fields)
        logger.info(f"Loaded {len(self._rows)} zeros from {self.path}")
        return {n: record.y for n, record in self._rows.items()}

    def _error(self, lineno: int, message: str) -> CacheIntegrityError:
        return CacheIntegrityError(f"{self.path}:{lineno}: {message}")

    def _parse_row(self, lineno: int, line: str) -> ZeroRecord:
        parts = line.split()
        if len(parts) != 4:
            raise self._error(lineno, f"expected 'n y digits residual', got {line!r}")
        n_text, y_text, digits_text, residual_text = parts
        try:
            n = int(n_text)
            y = Decimal(y_text)
            certified = int(digits_text)
            residual = None if residual_text == NO_RESIDUAL else float(residual_text)
        except (ValueError, InvalidOperation):
            raise self._error(lineno, f"unparseable row {line!r}")
        if n < 1 or not y.is_finite() or y <= 0:
            raise self._error(lineno, f"invalid zero {line!r}")
        if significant_digits(y_text) > self.digits:
            raise self._error(lineno, f"ordinate carries more than {self.digits} digits")
        if not 0 <= certified <= self.digits:
            raise self._error(lineno, f"certified digits {certified} outside [0, {self.digits}]")
        if residual is not None and not 0 <= residual < float("inf"):
            raise self._error(lineno, f"invalid residual {residual_text!r}")
        return ZeroRecord(
            n=n, y=y_text, digits_certified=certified, method=self.method, residual=residual
        )

    def _format_row(self, record: ZeroRecord) -> str:
        residual = NO_RESIDUAL if record.residual is None else repr(float(record.residual))
        return f"{record.n} {record.y} {record.digits_certified} {residual}"

    def _check_header(self, fields: Dict[str, str]) -> None:
        try:
            found = CacheHeader(
                format_version=int(fields.get("format_version", 0)),
                digits=int(fields.get("digits", 0)),
                method=fields.get("method", ""),
            )
        except (ValueError, ValidationError) as exc:
            raise CacheIntegrityError(f"{self.path}: invalid header: {exc}")
        if found != self.header:
            raise CacheIntegrityError(
                f"{self.path}: header {found.model_dump(mode='json')} does not match "
                f"{self.header.model_dump(mode='json')}"
            )

    def _ensure_loaded(self) -> None:
        if not self._loaded:
            self.load()

    def rounded(self, y: str) -> str:
        """Round a decimal string to the file's significant digits."""
        value = Context(prec=self.digits).plus(Decimal(y))
        return str(value) if "E" not in str(value) else format(value, "f")

    def stored(self, record: ZeroRecord) -> ZeroRecord:
        """The record as a row of this file holds it.

        The ordinate is rounded to the file's digits and digits_certified
        is capped there; the residual keeps its double value.
        """
        return ZeroRecord(
            n=record.n,
            y=self.rounded(record.y),
            digits_certified=min(record.digits_certified, self.digits),
            method=self.method,
            residual=record.residual,
        )

    def get(self, n: int) -> Optional[ZeroRecord]:
        self._ensure_loaded()
        return self._rows.get(n)

    def records(self, n_lo: int = 1, n_hi: Optional[int] = None) -> List[ZeroRecord]:
        """Cached zeros with n_lo <= n <= n_hi, ordered by n."""
        self._ensure_loaded()
        return [
            record for n, record in sorted(self._rows.items())
            if n >= n_lo and (n_hi is None or n <= n_hi)
        ]

    def missing(self, n_lo: int, n_hi: int) -> List[int]:
        """Indices in [n_lo, n_hi] not yet cached."""
        self._ensure_loaded()
        return [n for n in range(n_lo, n_hi + 1) if n not in self._rows]

    def merge(self, records: Iterable[ZeroRecord]) -> int:
        """Add new zeros and rewrite the file atomically.

        Existing rows are kept; a record for an already cached n is ignored.

        Returns:
            Number of rows added

        Raises:
            CacheIntegrityError: If the merged rows would not increase strictly in y
        """
        self._ensure_loaded()
        rows = dict(self._rows)
        added = 0
        for record in records:
            if record.n not in rows:
                rows[record.n] = self.stored(record)
                added += 1
        if not added:
            return 0

        ordered = [record for _, record in sorted(rows.items())]
        for a, b in zip(ordered, ordered[1:]):
            if Decimal(b.y) <= Decimal(a.y):
                raise CacheIntegrityError(
                    f"{self.path}: zero {b.n} ({b.y}) does not exceed zero {a.n} ({a.y})"
                )
        self._write(ordered)
        self._rows = rows
        logger.info(f"Cached {added} new zeros in {self.path} ({len(rows)} total)")
        return added

    def _write(self, ordered: List[ZeroRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        lines = [
            MAGIC,
            f"# format_version={self.header.format_version}",
            f"# digits={self.digits}",
            f"# method={self.method.value}",
        ]
        lines.extend(self._format_row(record) for record in ordered)
        fd, tmp_name = tempfile.mkstemp(prefix=".zeros-", suffix=".tmp", dir=self.path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write("\n".join(lines) + "\n")
            os.replace(tmp_name, self.path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
