"""DuckDB store for computed reports, verification checks and cached wsat values."""

import json
from collections.abc import Generator, Iterable
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import duckdb

from .config import default_db_path
from .errors import PreconditionError
from .logger import get_logger
from .reports import BoundReport, format_rational

logger = get_logger(__name__)

SCHEMA = (
    """
    CREATE TABLE IF NOT EXISTS reports (
        run_id VARCHAR,
        name VARCHAR,
        value VARCHAR,
        n INTEGER,
        formula VARCHAR,
        witness VARCHAR,
        status VARCHAR
    )
    """,
    """
    CREATE TABLE IF NOT EXISTS wsat_values (
        pattern_key VARCHAR,
        n INTEGER,
        wsat INTEGER,
        witness VARCHAR,
        PRIMARY KEY (pattern_key, n)
    )
    """,
    """
    CREATE TABLE IF NOT EXISTS checks (
        run_id VARCHAR,
        item VARCHAR,
        passed BOOLEAN,
        detail VARCHAR
    )
    """,
)

EXPORT_FORMATS = {"CSV": "(FORMAT CSV, HEADER)", "PARQUET": "(FORMAT PARQUET)"}


class ResultsStore:
    """Persists experiment output in DuckDB tables."""

    def __init__(self, db_path: str | None = None):
        """Open (lazily) the store.

        Args:
            db_path: Database file, ":memory:" for a throwaway store; defaults
                to WSAT_DB_PATH
        """
        self.db_path = db_path or default_db_path()
        self._connection: duckdb.DuckDBPyConnection | None = None
        if self.db_path != ":memory:":
            Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)

    @property
    def connection(self) -> duckdb.DuckDBPyConnection:
        if self._connection is None:
            self._connection = duckdb.connect(self.db_path)
            for statement in SCHEMA:
                self._connection.execute(statement)
            logger.info(f"Connected to results store at: {self.db_path}")
        return self._connection

    @contextmanager
    def get_connection(self) -> Generator[duckdb.DuckDBPyConnection, None, None]:
        try:
            yield self.connection
        except Exception as e:
            logger.error(f"Results store operation failed: {e}")
            raise

    def record_report(self, run_id: str, report: BoundReport) -> None:
        with self.get_connection() as conn:
            conn.execute(
                "INSERT INTO reports VALUES (?, ?, ?, ?, ?, ?, ?)",
                [
                    run_id,
                    report.name,
                    format_rational(report.value),
                    report.n,
                    report.formula,
                    json.dumps(report.witness) if report.witness is not None else None,
                    report.status,
                ],
            )

    def record_reports(self, run_id: str, reports: Iterable[BoundReport]) -> int:
        count = 0
        for report in reports:
            self.record_report(run_id, report)
            count += 1
        logger.debug(f"Recorded {count} reports for run {run_id}")
        return count

    def record_check(self, run_id: str, item: str, passed: bool, detail: Any) -> None:
        with self.get_connection() as conn:
            conn.execute(
                "INSERT INTO checks VALUES (?, ?, ?, ?)",
                [run_id, item, passed, json.dumps(detail, default=str)],
            )

    def cached_wsat(
        self, pattern_key: str, n: int
    ) -> tuple[int, dict[str, Any]] | None:
        """Stored (wsat, witness JSON) for a canonical pattern key, if any."""
        rows, _ = self.execute_query(
            "SELECT wsat, witness FROM wsat_values WHERE pattern_key = ? AND n = ?",
            [pattern_key, n],
        )
        if not rows:
            return None
        return rows[0]["wsat"], json.loads(rows[0]["witness"])

    def store_wsat(
        self, pattern_key: str, n: int, value: int, witness: dict[str, Any]
    ) -> None:
        with self.get_connection() as conn:
            conn.execute(
                "INSERT OR REPLACE INTO wsat_values VALUES (?, ?, ?, ?)",
                [pattern_key, n, value, json.dumps(witness)],
            )
        logger.info(f"Cached wsat={value} for {pattern_key} at n={n}")

    def write_rows(self, table: str, rows: list[dict[str, Any]]) -> int:
        """Replace ``table`` with rows whose values are stored as text."""
        if not table.isidentifier():
            raise PreconditionError(f"invalid table name: {table!r}")
        if not rows:
            return 0
        columns = list(rows[0])
        with self.get_connection() as conn:
            conn.execute(f"DROP TABLE IF EXISTS {table}")
            conn.execute(
                f"CREATE TABLE {table} ({', '.join(f'{c} VARCHAR' for c in columns)})"
            )
            placeholders = ", ".join("?" for _ in columns)
            conn.executemany(
                f"INSERT INTO {table} VALUES ({placeholders})",  # nosec B608
                [[_text(row.get(c)) for c in columns] for row in rows],
            )
        return len(rows)

    def execute_query(
        self, query: str, parameters: list[Any] | None = None
    ) -> tuple[list[dict[str, Any]], list[str]]:
        """Run a read-only SELECT; returns (rows as dicts, column names)."""
        if not query.lstrip().upper().startswith(("SELECT", "WITH")):
            raise PreconditionError("only SELECT queries are allowed")
        with self.get_connection() as conn:
            if parameters:
                result = conn.execute(query, parameters)
            else:
                result = conn.execute(query)
            columns = [desc[0] for desc in result.description or []]
            rows = [dict(zip(columns, row, strict=False)) for row in result.fetchall()]
            logger.debug(f"Query returned {len(rows)} rows")
            return rows, columns

    def list_tables(self) -> list[str]:
        rows, _ = self.execute_query(
            """
            SELECT table_name
            FROM information_schema.tables
            WHERE table_schema = 'main'
            AND table_type = 'BASE TABLE'
            ORDER BY table_name
            """
        )
        return [row["table_name"] for row in rows]

    def export_table(self, table: str, file_path: str, format: str = "CSV") -> None:
        """Export a table with DuckDB COPY (CSV or PARQUET)."""
        options = EXPORT_FORMATS.get(format.upper())
        if options is None:
            raise PreconditionError(f"Unsupported format: {format}")
        if table not in self.list_tables():
            raise PreconditionError(f"unknown table: {table}")
        with self.get_connection() as conn:
            conn.execute(f"COPY {table} TO '{file_path}' {options}")
        logger.info(f"Exported {table} to {file_path} as {format.upper()}")

    def close(self) -> None:
        if self._connection:
            self._connection.close()
            self._connection = None
            logger.info("Results store closed")


def _text(value: Any) -> str | None:
    if value is None:
        return None
    if isinstance(value, bool | int | str):
        return str(value)
    try:
        return format_rational(value)
    except (TypeError, ValueError):
        return json.dumps(value, default=str)
