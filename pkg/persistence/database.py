"""SQLite store for analyze runs, sampler runs, the structured log and profiles."""

from __future__ import annotations

import csv
import json
import sqlite3
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Iterator, List, Optional, Sequence

if TYPE_CHECKING:
    from controller.sampler import SampleReport


SCHEMA = """
CREATE TABLE IF NOT EXISTS runs (
    run_id INTEGER PRIMARY KEY AUTOINCREMENT,
    recorded_at TEXT NOT NULL,
    graph_digest TEXT NOT NULL,
    graph_source TEXT,
    seed INTEGER NOT NULL,
    group_order INTEGER NOT NULL,
    k_sequence TEXT NOT NULL,
    report_json TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS samples (
    sample_id INTEGER PRIMARY KEY AUTOINCREMENT,
    recorded_at TEXT NOT NULL,
    graph_digest TEXT NOT NULL,
    trials INTEGER NOT NULL,
    histogram_json TEXT NOT NULL,
    violations_json TEXT NOT NULL,
    skipped INTEGER NOT NULL DEFAULT 0
);

CREATE TABLE IF NOT EXISTS logs (
    log_id INTEGER PRIMARY KEY AUTOINCREMENT,
    logged_at TEXT NOT NULL,
    level TEXT NOT NULL CHECK (level IN ('info', 'warning', 'error')),
    message TEXT NOT NULL,
    context_json TEXT
);

CREATE TABLE IF NOT EXISTS settings_profiles (
    name TEXT PRIMARY KEY,
    payload TEXT NOT NULL,
    first_saved TEXT NOT NULL,
    last_saved TEXT NOT NULL
);
"""

HISTORY_CSV_FIELDS = ("timestamp", "graph_digest", "graph_source", "seed", "order", "k_sequence")


@dataclass
class RunRecord:
    id: int
    created_at: datetime
    graph_digest: str
    graph_source: str
    seed: int
    order: int
    k_sequence: List[int]
    report: dict


@dataclass
class LogRecord:
    id: int
    created_at: datetime
    level: str
    message: str
    context: Optional[dict]


@dataclass
class RunSummary:
    run_count: int
    last_run_time: Optional[datetime]
    sample_count: int
    total_trials: int
    total_violations: int


class Database:
    def __init__(self, path: str | Path = "rigid_galois.db") -> None:
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with self._connect() as conn:
            conn.executescript(SCHEMA)
            self._ensure_sample_columns(conn)

    @contextmanager
    def _connect(self) -> Iterator[sqlite3.Connection]:
        conn = sqlite3.connect(self._path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
            conn.commit()
        finally:
            conn.close()

    def _insert(self, sql: str, values: Sequence[Any]) -> int:
        with self._connect() as conn:
            return int(conn.execute(sql, tuple(values)).lastrowid)

    def _ensure_sample_columns(self, conn: sqlite3.Connection) -> None:
        """Add columns introduced after the first schema to older databases."""

        existing = {row["name"] for row in conn.execute("PRAGMA table_info(samples)")}
        if "skipped" not in existing:
            conn.execute("ALTER TABLE samples ADD COLUMN skipped INTEGER NOT NULL DEFAULT 0")

    # -- runs and samples -------------------------------------------------

    def record_run(
        self,
        graph_digest: str,
        graph_source: str,
        seed: int,
        order: int,
        k_sequence: Sequence[int],
        report: dict,
    ) -> int:
        return self._insert(
            "INSERT INTO runs (recorded_at, graph_digest, graph_source, seed, group_order, k_sequence, report_json)"
            " VALUES (?, ?, ?, ?, ?, ?, ?)",
            (_now(), graph_digest, graph_source, seed, order, json.dumps(list(k_sequence)), _to_json(report)),
        )

    def record_sample(self, graph_digest: str, report: "SampleReport") -> int:
        return self._insert(
            "INSERT INTO samples (recorded_at, graph_digest, trials, histogram_json, violations_json, skipped)"
            " VALUES (?, ?, ?, ?, ?, ?)",
            (
                _now(),
                graph_digest,
                report.trials,
                _to_json(report.histogram),
                _to_json(report.violations),
                len(report.skipped),
            ),
        )

    def history(self, limit: int = 100) -> Iterable[RunRecord]:
        """Most recent analyze runs first."""

        with self._connect() as conn:
            rows = conn.execute("SELECT * FROM runs ORDER BY run_id DESC LIMIT ?", (limit,)).fetchall()
        for row in rows:
            yield RunRecord(
                id=row["run_id"],
                created_at=datetime.fromisoformat(row["recorded_at"]),
                graph_digest=row["graph_digest"],
                graph_source=row["graph_source"] or "",
                seed=row["seed"],
                order=row["group_order"],
                k_sequence=json.loads(row["k_sequence"]),
                report=_from_json(row["report_json"]) or {},
            )

    def run_summary(self) -> RunSummary:
        with self._connect() as conn:
            runs = conn.execute("SELECT COUNT(*) AS n, MAX(recorded_at) AS last FROM runs").fetchone()
            samples = conn.execute("SELECT COUNT(*) AS n, TOTAL(trials) AS trials FROM samples").fetchone()
            violation_lists = [row["violations_json"] for row in conn.execute("SELECT violations_json FROM samples")]

        violations = sum(len(_from_json(text) or []) for text in violation_lists)
        return RunSummary(
            run_count=runs["n"],
            last_run_time=datetime.fromisoformat(runs["last"]) if runs["last"] else None,
            sample_count=samples["n"],
            total_trials=int(samples["trials"]),
            total_violations=violations,
        )

    def export_history_csv(self, output_path: str | Path) -> Path:
        output = Path(output_path)
        with output.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=HISTORY_CSV_FIELDS)
            writer.writeheader()
            for record in self.history(limit=1000):
                writer.writerow(
                    {
                        "timestamp": record.created_at.isoformat(),
                        "graph_digest": record.graph_digest,
                        "graph_source": record.graph_source,
                        "seed": record.seed,
                        "order": record.order,
                        "k_sequence": " ".join(map(str, record.k_sequence)),
                    }
                )
        return output

    # -- structured log ---------------------------------------------------

    def log(self, level: str, message: str, context: Optional[dict] = None) -> int:
        return self._insert(
            "INSERT INTO logs (logged_at, level, message, context_json) VALUES (?, ?, ?, ?)",
            (_now(), level, message, _to_json(context) if context else None),
        )

    def fetch_logs(self, since_id: Optional[int] = None, limit: int = 200) -> List[LogRecord]:
        """Log entries in insertion order, optionally only those after ``since_id``."""

        with self._connect() as conn:
            rows = conn.execute(
                "SELECT * FROM logs WHERE log_id > ? ORDER BY log_id LIMIT ?",
                (since_id if since_id is not None else 0, limit),
            ).fetchall()
        return [
            LogRecord(
                id=row["log_id"],
                created_at=datetime.fromisoformat(row["logged_at"]),
                level=row["level"],
                message=row["message"],
                context=_from_json(row["context_json"]),
            )
            for row in rows
        ]

    def recent_logs(self, limit: int = 20) -> List[LogRecord]:
        with self._connect() as conn:
            last = conn.execute("SELECT COALESCE(MAX(log_id), 0) AS last FROM logs").fetchone()["last"]
        return self.fetch_logs(since_id=max(last - limit, 0), limit=limit)

    # -- settings profiles ------------------------------------------------

    def list_profiles(self) -> List[str]:
        with self._connect() as conn:
            rows = conn.execute("SELECT name FROM settings_profiles ORDER BY name COLLATE NOCASE").fetchall()
        return [row["name"] for row in rows]

    def get_profile(self, name: str) -> Optional[dict]:
        with self._connect() as conn:
            row = conn.execute("SELECT payload FROM settings_profiles WHERE name = ?", (name,)).fetchone()
        return None if row is None else _from_json(row["payload"])

    def save_profile(self, name: str, data: dict) -> None:
        stamp = _now()
        with self._connect() as conn:
            conn.execute(
                "INSERT INTO settings_profiles (name, payload, first_saved, last_saved) VALUES (?, ?, ?, ?)"
                " ON CONFLICT(name) DO UPDATE SET payload = excluded.payload, last_saved = excluded.last_saved",
                (name, _to_json(data), stamp, stamp),
            )
        self.log("info", "Profile saved", {"name": name})

    def delete_profile(self, name: str) -> None:
        with self._connect() as conn:
            conn.execute("DELETE FROM settings_profiles WHERE name = ?", (name,))
        self.log("info", "Profile deleted", {"name": name})


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _jsonable(value: object) -> object:
    if isinstance(value, datetime):
        return value.isoformat()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(item) for item in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def _to_json(value: object) -> str:
    try:
        return json.dumps(_jsonable(value))
    except TypeError:
        return json.dumps({"raw": str(value)})


def _from_json(text: Optional[str]) -> Any:
    if not text:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return {"raw": text}
