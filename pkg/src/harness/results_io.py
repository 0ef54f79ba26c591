"""Writers and readers for every file the harness produces.

Traces and timings are JSON lines whose first line is a schema header.
Aggregates and runtime reports are CSV files written by pandas after a
`# schema_version=N` comment line. Every writer replaces its file whole.
"""
import json
import logging
import os
from pathlib import Path
from typing import Dict, List

import pandas as pd

from src.bo_loop import BOTrace, IterationRecord
from src.common.errors import ConfigError
from src.harness.config import SCHEMA_VERSION

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'
AGGREGATE_COLUMNS = ['iteration', 'median_IR', 'iqr_IR', 'median_L2', 'iqr_L2']
RUNTIME_COLUMNS = ['kind', 'M', 'd', 'mean_seconds', 'std_seconds', 'reps']


def trace_path(out_dir: str, trace: BOTrace, rep: int) -> Path:
    return Path(out_dir) / f"trace_{trace.problem}_{trace.strategy}_rep{rep:03d}.jsonl"


def timings_path(out_dir: str, trace: BOTrace, rep: int) -> Path:
    return Path(out_dir) / f"timings_{trace.problem}_{trace.strategy}_rep{rep:03d}.jsonl"


def aggregate_path(out_dir: str, problem: str, strategy: str) -> Path:
    return Path(out_dir) / f"aggregate_{problem}_{strategy}.csv"


def _write_jsonl(path: Path, rows: List[Dict]) -> None:
    os.makedirs(path.parent, exist_ok=True)
    lines = [json.dumps(row, sort_keys=True) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_jsonl(path: Path, kind: str) -> List[Dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ConfigError(f"{path} is empty")
    header = json.loads(lines[0])
    if header.get('schema_version') != SCHEMA_VERSION or header.get('kind') != kind:
        raise ConfigError(f"{path} is not a version {SCHEMA_VERSION} {kind} file")
    return [header] + [json.loads(line) for line in lines[1:] if line]


def write_trace(path: Path, trace: BOTrace) -> Path:
    """Deterministic fields only, so equal seeds give byte-identical files."""
    header = {'schema_version': SCHEMA_VERSION, 'kind': 'bo_trace', **trace.header()}
    _write_jsonl(Path(path), [header] + [r.deterministic() for r in trace.records])
    return Path(path)


def write_timings(path: Path, trace: BOTrace) -> Path:
    header = {'schema_version': SCHEMA_VERSION, 'kind': 'timings', 'problem': trace.problem,
              'strategy': trace.strategy, 'seed': trace.seed}
    _write_jsonl(Path(path), [header] + [r.timings() for r in trace.records])
    return Path(path)


def read_trace(path: Path) -> BOTrace:
    header, *rows = _read_jsonl(path, 'bo_trace')
    trace = BOTrace(header['problem'], header['strategy'], header['seed'],
                    header['initial_X'], header['initial_y'])
    trace.records = [IterationRecord(**row) for row in rows]
    return trace


def read_timings(path: Path) -> pd.DataFrame:
    _, *rows = _read_jsonl(path, 'timings')
    return pd.DataFrame(rows)


def _write_csv(path: Path, df: pd.DataFrame) -> Path:
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        df.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def _read_csv(path: Path, columns: List[str]) -> pd.DataFrame:
    with open(path, encoding='utf-8') as fh:
        first = fh.readline().strip()
    if first != f"# schema_version={SCHEMA_VERSION}":
        raise ConfigError(f"{path} has no version {SCHEMA_VERSION} schema line")
    df = pd.read_csv(path, skiprows=1)
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ConfigError(f"{path} is missing columns {missing}")
    return df


def write_aggregate(path: Path, df: pd.DataFrame) -> Path:
    return _write_csv(path, df[AGGREGATE_COLUMNS])


def read_aggregate(path: Path) -> pd.DataFrame:
    return _read_csv(path, AGGREGATE_COLUMNS)


def write_runtime_report(path: Path, df: pd.DataFrame) -> Path:
    return _write_csv(path, df[RUNTIME_COLUMNS])


def read_runtime_report(path: Path) -> pd.DataFrame:
    return _read_csv(path, RUNTIME_COLUMNS)


def write_failures(path: Path, failures: List[Dict]) -> Path:
    rows = [{'schema_version': SCHEMA_VERSION, 'kind': 'failures'}] + failures
    _write_jsonl(Path(path), rows)
    logger.warning(f"Recorded {len(failures)} failed repetitions in {path}")
    return Path(path)
