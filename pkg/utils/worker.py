"""Background worker running queued pipeline jobs one at a time."""
import asyncio
import logging
import os
import time

from utils.db import get_pending_jobs, update_job_result, update_job_status
from utils.pipeline import PipelineConfig, RunResult, run
from utils.storage import collect_artifacts, job_dir

logger = logging.getLogger(__name__)

WORKER_POLL_INTERVAL = float(os.getenv("WORKER_POLL_INTERVAL", "5"))  # seconds
WORKER_ENABLED = True


def execute_job(job_id: str, config_data: dict) -> RunResult:
    """Blocking part of a job: run the pipeline with outputs under the job's artifact directory."""
    out_dir = job_dir(job_id)
    config = PipelineConfig(**config_data).model_copy(update={
        "output_path": str(out_dir / "graphs.g6"),
        "report_path": str(out_dir / "report.txt"),
    })
    return run(config)


async def process_job(job: dict) -> None:
    job_id = job["id"]
    logger.info(f"Processing job {job_id} ({job['command']})")
    await update_job_status(job_id, "processing")
    start_time = time.perf_counter()

    try:
        loop = asyncio.get_running_loop()
        result = await loop.run_in_executor(None, execute_job, job_id, job["config"])
        artifacts = await loop.run_in_executor(
            None,
            collect_artifacts,
            job_id,
            {"graphs": result.output_path, "report": result.report_path},
        )
        processing_time = time.perf_counter() - start_time
        await update_job_result(
            job_id=job_id,
            report=result.report,
            summary=result.summary,
            artifacts=artifacts,
            graph_count=result.graph_count,
            exit_code=result.exit_code,
            processing_time=processing_time,
        )
        logger.info(f"Job {job_id} completed in {processing_time:.2f}s ({result.graph_count} graphs)")
    except Exception as e:
        logger.exception(f"Job {job_id} failed: {e}")
        await update_job_status(job_id=job_id, status="failed", error_message=str(e)[:500])


async def worker_loop():
    """Poll for pending jobs and process them in creation order."""
    logger.info("Background worker started")
    while WORKER_ENABLED:
        try:
            jobs = await get_pending_jobs(limit=1)
            if jobs:
                for job in jobs:
                    await process_job(job)
            else:
                await asyncio.sleep(WORKER_POLL_INTERVAL)
        except Exception as e:
            logger.exception(f"Worker loop error: {e}")
            await asyncio.sleep(WORKER_POLL_INTERVAL)


def start_worker_background():
    asyncio.create_task(worker_loop())
    logger.info("Worker task created")
