"""Result tables and their CSV layout.

Every file starts with ``#``-prefixed ``key: value`` metadata lines, followed
by one header row and the data rows. Floats use the shortest decimal that
round-trips; lines end with ``\\n``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

ARTIFACT = f"phased-mimo {__version__}"


@dataclass
class ResultTable:
    name: str
    columns: list[str]
    rows: list[list]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} of table {self.name!r} has {len(row)} cells, expected {width}")

    @classmethod
    def from_columns(cls, name: str, data: dict, metadata=None) -> "ResultTable":
        cols = list(data)
        arrays = [np.asarray(v) for v in data.values()]
        rows = [list(r) for r in zip(*arrays)]
        return cls(name, cols, rows, dict(metadata or {}))

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows], dtype=float)


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    x = float(v)
    if x == 0.0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def emit_csv(table: ResultTable, path) -> Path:
    """Write ``table`` to ``path`` in the documented layout."""
    path = Path(path)
    lines = [f"# {k}: {v}" for k, v in table.metadata.items()]
    lines.append(",".join(table.columns))
    lines.extend(",".join(format_value(v) for v in row) for row in table.rows)
    try:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as err:
        raise OSError(err.errno, f"cannot write {path}: {err.strerror}") from None
    return path


def read_csv(path) -> ResultTable:
    """Parse a file written by :func:`emit_csv`; cells come back as floats."""
    path = Path(path)
    metadata, rows, columns = {}, [], None
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            metadata[key] = value
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(c) for c in line.split(",")])
    if columns is None:
        raise ValueError(f"{path}: no header row")
    return ResultTable(path.stem, columns, rows, metadata)


def metadata_block(experiment: str, seed: int, config_json: str) -> dict[str, str]:
    return {
        "artifact": ARTIFACT,
        "experiment": experiment,
        "seed": str(seed),
        "scenario_hash": hashlib.sha256(config_json.encode()).hexdigest(),
        "config": config_json,
    }


def verify_file(path) -> tuple[bool, str]:
    """Recompute the scenario hash from a file's embedded config.

    Returns:
        ``(ok, message)``.
    """
    meta = read_csv(path).metadata
    missing = [k for k in ("scenario_hash", "config", "seed") if k not in meta]
    if missing:
        return False, f"{path}: missing metadata {', '.join(missing)}"
    digest = hashlib.sha256(meta["config"].encode()).hexdigest()
    if digest != meta["scenario_hash"]:
        return False, f"{path}: hash mismatch (recorded {meta['scenario_hash']}, computed {digest})"
    try:
        seed = json.loads(meta["config"]).get("seed")
    except json.JSONDecodeError:
        return False, f"{path}: embedded config is not valid JSON"
    if str(seed) != meta["seed"]:
        return False, f"{path}: seed {meta['seed']} disagrees with config seed {seed}"
    return True, f"{path}: ok ({digest[:12]})"


def to_db(x) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(x, dtype=float))
