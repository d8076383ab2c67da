"""Loading of external zero tables (one decimal ordinate per line)."""

import logging
from pathlib import Path
from typing import List

import pandas as pd
from pydantic import ValidationError

from .errors import CacheIntegrityError, DomainError
from .models import ZeroMethod, ZeroRecord
from .utils import significant_digits


logger = logging.getLogger(__name__)


class OrdinateLoader:
    """Reads third-party ordinate tables such as published high-window zeros."""

    def load(self, path: Path, offset: int = 0) -> List[ZeroRecord]:
        """Load ordinates, numbering them offset + 1, offset + 2, ...

        Ordinates are read as strings so no digit is lost to a float
        round-trip. Blank lines and lines starting with '#' are skipped.

        Args:
            path: File with one decimal ordinate per line (extra columns ignored)
            offset: Number of zeros below the first line

        Returns:
            ZeroRecords with method 'imported'

        Raises:
            FileNotFoundError: If the file does not exist
            DomainError: If offset is negative
            CacheIntegrityError: If a line is not a positive decimal or the
                ordinates do not increase
        """
        path = Path(path)
        if offset < 0:
            raise DomainError(f"offset must be >= 0, got {offset}")
        if not path.exists():
            raise FileNotFoundError(f"Ordinate file not found: {path}")

        logger.info(f"Loading ordinates from {path}")
        try:
            frame = pd.read_csv(
                path,
                header=None,
                sep=r"\s+",
                comment="#",
                dtype=str,
                usecols=[0],
                names=["y"],
                skip_blank_lines=True,
                engine="python",
            )
        except pd.errors.EmptyDataError:
            raise CacheIntegrityError(f"{path}: no ordinates found")

        records = []
        previous = None
        for position, text in enumerate(frame["y"].tolist(), start=1):
            try:
                record = ZeroRecord(
                    n=offset + position,
                    y=text,
                    digits_certified=significant_digits(text),
                    method=ZeroMethod.IMPORTED,
                )
            except (ValidationError, ArithmeticError) as exc:
                raise CacheIntegrityError(f"{path}: ordinate #{position} ({text!r}) is invalid: {exc}")
            if previous is not None and record.value <= previous.value:
                raise CacheIntegrityError(
                    f"{path}: ordinate #{position} does not exceed the one before it"
                )
            records.append(record)
            previous = record

        logger.info(f"Loaded {len(records)} ordinates (n = {offset + 1}..{offset + len(records)})")
        return records
