"""Tabular output for the command line: CSV, JSON or plain text via pandas."""

import logging
import sys
from typing import IO, Iterable, List, Optional, Sequence

import pandas as pd

from .models import CorrelationBin, OutputFormat, ZeroRecord


logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"

ZERO_COLUMNS = ["n", "y", "digits_certified", "method", "residual"]
CORRELATION_COLUMNS = ["x_mid", "alpha", "beta", "empirical", "gue"]


class ReportWriter:
    """Writes result tables to a stream in one fixed format.

    Column order is fixed per table and no timestamps are written, so the
    same inputs always produce the same bytes.
    """

    def __init__(self, output_format: OutputFormat = OutputFormat.CSV, stream: Optional[IO] = None):
        self.output_format = OutputFormat(output_format)
        self.stream = stream if stream is not None else sys.stdout

    def write_frame(self, frame: pd.DataFrame) -> None:
        """Write a DataFrame in the configured format."""
        if self.output_format == OutputFormat.CSV:
            text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        elif self.output_format == OutputFormat.JSON:
            text = frame.to_json(orient="records", double_precision=12) + "\n"
        else:
            text = frame.to_string(index=False, float_format=lambda v: FLOAT_FORMAT % v) + "\n"
        self.stream.write(text)

    def write_rows(self, rows: Iterable[Sequence], columns: List[str]) -> None:
        self.write_frame(pd.DataFrame(list(rows), columns=columns))

    def write_zeros(self, records: Iterable[ZeroRecord]) -> None:
        """One row per zero; y stays a string at full precision."""
        frame = pd.DataFrame(
            [
                {
                    "n": r.n,
                    "y": r.y,
                    "digits_certified": r.digits_certified,
                    "method": r.method.value,
                    "residual": r.residual,
                }
                for r in records
            ],
            columns=ZERO_COLUMNS,
        )
        self.write_frame(frame)

    def write_bins(self, bins: Iterable[CorrelationBin]) -> None:
        self.write_rows(
            ((b.x_mid, b.alpha, b.beta, b.empirical, b.gue) for b in bins),
            CORRELATION_COLUMNS,
        )
