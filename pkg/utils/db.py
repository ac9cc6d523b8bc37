"""SQLite job store for queued pipeline runs."""
import json
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiosqlite

DB_PATH = os.getenv("DATABASE_PATH", "jobs.db")

JSON_FIELDS = ("config", "summary", "artifacts")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _decode(row: aiosqlite.Row) -> Dict[str, Any]:
    job = dict(row)
    for name in JSON_FIELDS:
        if job.get(name) is not None:
            job[name] = json.loads(job[name])
    return job


async def init_db() -> int:
    """
    Create the schema and fail jobs left running by a previous process.
    Returns the number of jobs marked failed.
    """
    db_path = Path(DB_PATH)
    db_path.parent.mkdir(parents=True, exist_ok=True)

    async with aiosqlite.connect(DB_PATH) as db:
        migration_file = Path(__file__).parent.parent / "migrations" / "001_initial_schema.sql"
        await db.executescript(migration_file.read_text())
        cursor = await db.execute(
            "UPDATE jobs SET status = 'failed', updated_at = ?, error_message = ? WHERE status = 'processing'",
            (_now(), "interrupted by a server restart"),
        )
        await db.commit()
        return cursor.rowcount


async def create_job(job_id: str, command: str, config: Dict[str, Any]) -> None:
    """Create a new job with pending status."""
    async with aiosqlite.connect(DB_PATH) as db:
        now = _now()
        await db.execute(
            "INSERT INTO jobs (id, status, created_at, updated_at, command, config) VALUES (?, ?, ?, ?, ?, ?)",
            (job_id, "pending", now, now, command, json.dumps(config)),
        )
        await db.commit()


async def get_job(job_id: str) -> Optional[Dict[str, Any]]:
    """Retrieve a job by ID. Returns None if not found."""
    async with aiosqlite.connect(DB_PATH) as db:
        db.row_factory = aiosqlite.Row
        async with db.execute("SELECT * FROM jobs WHERE id = ?", (job_id,)) as cursor:
            row = await cursor.fetchone()
            return None if row is None else _decode(row)


async def update_job_status(job_id: str, status: str, error_message: Optional[str] = None) -> None:
    async with aiosqlite.connect(DB_PATH) as db:
        await db.execute(
            "UPDATE jobs SET status = ?, updated_at = ?, error_message = ? WHERE id = ?",
            (status, _now(), error_message, job_id),
        )
        await db.commit()


async def update_job_result(
    job_id: str,
    report: str,
    summary: Dict[str, Any],
    artifacts: Dict[str, Any],
    graph_count: int,
    exit_code: int,
    processing_time: float,
) -> None:
    """Mark job as completed and store its report and artifact locations."""
    async with aiosqlite.connect(DB_PATH) as db:
        await db.execute(
            """
            UPDATE jobs
            SET status = ?, updated_at = ?, report = ?, summary = ?, artifacts = ?,
                graph_count = ?, exit_code = ?, processing_time = ?
            WHERE id = ?
            """,
            ("completed", _now(), report, json.dumps(summary), json.dumps(artifacts),
             graph_count, exit_code, processing_time, job_id),
        )
        await db.commit()


async def get_pending_jobs(limit: int = 10) -> List[Dict[str, Any]]:
    """Oldest pending jobs first."""
    async with aiosqlite.connect(DB_PATH) as db:
        db.row_factory = aiosqlite.Row
        async with db.execute(
            "SELECT * FROM jobs WHERE status = 'pending' ORDER BY created_at ASC LIMIT ?",
            (limit,),
        ) as cursor:
            return [_decode(row) for row in await cursor.fetchall()]
