import hashlib
import io
import json
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Dict, Union

import matplotlib
import numpy as np
import pandas as pd

from ..config import ALLOWED_EXTENSIONS, CSV_FLOAT_FORMAT, MAX_FILE_SIZE, SVG_HASH_SALT
from ..exceptions import ConfigError
from ..models.estimate import TrajectoryDataset
from ..models.robot import RobotSpec
from .morphology import REFERENCE_ROBOTS, make_reference_robot

logger = logging.getLogger(__name__)

LEG_COLUMN = re.compile(r"^theta_([LR])(\d+)_deg$")
BODY_COLUMN = re.compile(r"^alpha_(\d+)_deg$")


class FileService:
    @staticmethod
    def validate_file(path: Union[str, Path]) -> bool:
        """Validate file existence, type and size."""
        path = Path(path)
        return (
            path.is_file() and
            path.suffix.lower() in ALLOWED_EXTENSIONS and
            path.stat().st_size <= MAX_FILE_SIZE
        )

    @staticmethod
    def load_json(path: Union[str, Path], where: str = "$") -> Dict[str, Any]:
        if not FileService.validate_file(path):
            raise ConfigError(where, f"cannot read {path} (missing, wrong type or too large)")
        try:
            with open(path, encoding="utf-8") as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(where, f"invalid JSON in {path}: line {e.lineno}: {e.msg}")

    @staticmethod
    def load_robot(ref: Union[str, Dict[str, Any]]) -> RobotSpec:
        """Robot from a reference name, a JSON file path or an inline object."""
        if isinstance(ref, dict):
            return RobotSpec.from_dict(ref)
        if ref in REFERENCE_ROBOTS:
            return make_reference_robot(ref)
        return RobotSpec.from_dict(FileService.load_json(ref, "$.robot"))

    @staticmethod
    def read_dataset(path: Union[str, Path]) -> TrajectoryDataset:
        """Joint-angle CSV: `time_s`, `theta_<L|R><pair>_deg`, `alpha_<joint>_deg`."""
        if not FileService.validate_file(path):
            raise ConfigError("$.data", f"cannot read {path} (missing, wrong type or too large)")
        frame = pd.read_csv(path)
        if "time_s" not in frame.columns:
            raise ConfigError("$.data.time_s", "missing time column")
        if frame.isna().any().any():
            raise ConfigError("$.data", "dataset contains empty cells")
        legs, body = {}, {}
        for column in frame.columns:
            leg = LEG_COLUMN.match(column)
            joint = BODY_COLUMN.match(column)
            if leg:
                side = "left" if leg.group(1) == "L" else "right"
                legs[(side, int(leg.group(2)))] = np.radians(frame[column].to_numpy(dtype=float))
            elif joint:
                body[int(joint.group(1))] = np.radians(frame[column].to_numpy(dtype=float))
            elif column != "time_s":
                logger.warning(f"ignoring unrecognized dataset column {column!r}")
        if not legs:
            raise ConfigError("$.data", "no theta_<side><pair>_deg columns found")
        return TrajectoryDataset(time=frame["time_s"].to_numpy(dtype=float), legs=legs, body=body)

    @staticmethod
    def write_bytes(payload: bytes, path: Union[str, Path]) -> str:
        """Write atomically (temp file + rename); returns the sha256."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(payload)
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.debug(f"wrote {path}")
        return hashlib.sha256(payload).hexdigest()

    @staticmethod
    def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> str:
        """RFC-4180 CSV with a header row and CRLF line endings."""
        text = frame.to_csv(index=False, lineterminator="\r\n", float_format=CSV_FLOAT_FORMAT)
        return FileService.write_bytes(text.encode("utf-8"), path)

    @staticmethod
    def write_json(data: Any, path: Union[str, Path]) -> str:
        text = json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"
        return FileService.write_bytes(text.encode("utf-8"), path)

    @staticmethod
    def write_svg(figure, path: Union[str, Path]) -> str:
        """Render a figure to SVG without timestamps or random ids."""
        buffer = io.BytesIO()
        with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
            figure.savefig(buffer, format="svg", metadata={"Date": None})
        return FileService.write_bytes(buffer.getvalue(), path)
