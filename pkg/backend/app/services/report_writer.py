"""Deterministic JSON reports and tabular sequence exports."""
import io
import logging
from pathlib import Path

import orjson
import pandas as pd
from pydantic import BaseModel

from app.exceptions import PreconditionViolated
from app.models.report import AnalysisReport
from app.models.spectral import QuantityName, SpectralProfile

logger = logging.getLogger(__name__)

EXPORT_FORMATS = ("csv", "parquet")


class ReportWriter:
    """Serializes analysis reports and the per-n sequences behind each estimate."""

    @staticmethod
    def to_json_bytes(report: BaseModel) -> bytes:
        """Sorted-key, 2-space indented JSON; identical reports give identical bytes."""
        payload = report.model_dump(mode="json", by_alias=True)
        return orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)

    def write_json(self, report: AnalysisReport, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_json_bytes(report))
        logger.info(f"Report written to {path}")
        return path

    @staticmethod
    def sequence_frame(profile: SpectralProfile, name: QuantityName) -> pd.DataFrame:
        """Columns n, value for one quantity."""
        sequence = profile.quantity(name).sequence
        return pd.DataFrame({"n": range(1, len(sequence) + 1), "value": sequence})

    def sequences_frame(self, profile: SpectralProfile) -> pd.DataFrame:
        """Long format (quantity, n, value) over all eight quantities."""
        frames = [self.sequence_frame(profile, name).assign(quantity=name.value) for name in QuantityName]
        return pd.concat(frames, ignore_index=True)[["quantity", "n", "value"]]

    def write_sequences(self, profile: SpectralProfile, directory: str | Path, fmt: str = "csv") -> list[Path]:
        """
        Write one file per quantity into directory.

        Args:
            profile: Spectral profile whose sequences are exported
            directory: Output directory (created if missing)
            fmt: "csv" or "parquet"

        Returns:
            Written paths
        """
        if fmt not in EXPORT_FORMATS:
            raise PreconditionViolated(f"Unsupported export format: {fmt}")
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for name in QuantityName:
            frame = self.sequence_frame(profile, name)
            path = directory / f"{name.value}.{fmt}"
            if fmt == "csv":
                frame.to_csv(path, index=False)
            else:
                frame.to_parquet(path, index=False)
            paths.append(path)
        logger.info(f"Exported {len(paths)} sequences to {directory}")
        return paths

    def sequences_bytes(self, profile: SpectralProfile, fmt: str) -> bytes:
        """All sequences in long format as CSV text or a Parquet file."""
        frame = self.sequences_frame(profile)
        if fmt == "csv":
            stream = io.StringIO()
            frame.to_csv(stream, index=False)
            return stream.getvalue().encode()
        if fmt == "parquet":
            buffer = io.BytesIO()
            frame.to_parquet(buffer, index=False)
            return buffer.getvalue()
        raise PreconditionViolated(f"Unsupported export format: {fmt}")
