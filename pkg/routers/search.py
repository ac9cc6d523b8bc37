"""Search job endpoints - queue a pipeline run, poll its status, fetch the result."""
import logging
import os
import uuid
from typing import Any, Dict, Optional

from fastapi import APIRouter, Depends, HTTPException, Security
from fastapi.security import APIKeyHeader
from pydantic import BaseModel

from utils.db import create_job, get_job
from utils.pipeline import PipelineConfig

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/search", tags=["search"])

api_key_header = APIKeyHeader(name="X-API-Key", auto_error=False)


def require_search_key(api_key: Optional[str] = Security(api_key_header)) -> str:
    # API_KEY is read at request time
    expected = os.getenv("API_KEY")
    if not expected:
        raise HTTPException(status_code=500, detail="Search API is not configured: API_KEY is unset")
    if api_key != expected:
        raise HTTPException(status_code=401, detail="Invalid or missing API key")
    return api_key


# --- Response models ---


class SearchJobResponse(BaseModel):
    success: bool = True
    request_id: str
    message: str = "Search job queued. Use the request_id to check status."


class JobStatusResponse(BaseModel):
    request_id: str
    status: str
    command: str
    created_at: str
    updated_at: str
    error_message: Optional[str] = None


class JobResultResponse(BaseModel):
    request_id: str
    status: str
    command: str
    exit_code: int
    graph_count: int
    processing_time: float
    report: str
    summary: Dict[str, Any]
    artifacts: Dict[str, Any]
    config: Dict[str, Any]


# --- Endpoints ---


@router.post("/jobs", response_model=SearchJobResponse)
async def queue_search_job(
    body: PipelineConfig,
    _api_key: str = Depends(require_search_key),
) -> SearchJobResponse:
    """
    Queue a pipeline run. The body is the same configuration the command line
    builds from its flags; output and report paths are assigned by the server.

    Returns a request_id to poll for status and retrieve the result.
    """
    if body.input_path:
        raise HTTPException(status_code=400, detail=f"{body.command} reads an input file, which the API does not accept")
    request_id = f"req_{uuid.uuid4().hex}"
    config = body.model_dump(mode="json", exclude={"input_path", "output_path", "report_path"})
    try:
        await create_job(job_id=request_id, command=body.command, config=config)
    except Exception as e:
        logger.exception(f"Failed to create job: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to queue search job: {str(e)}")
    return SearchJobResponse(request_id=request_id)


@router.get("/status/{request_id}", response_model=JobStatusResponse)
async def get_search_status(
    request_id: str,
    _api_key: str = Depends(require_search_key),
) -> JobStatusResponse:
    """
    Status values:
    - **pending**: queued, not started
    - **processing**: running
    - **completed**: finished (use /result)
    - **failed**: see error_message
    """
    job = await get_job(request_id)
    if job is None:
        raise HTTPException(status_code=404, detail="Job not found")
    return JobStatusResponse(
        request_id=job["id"],
        status=job["status"],
        command=job["command"],
        created_at=job["created_at"],
        updated_at=job["updated_at"],
        error_message=job.get("error_message"),
    )


@router.get("/result/{request_id}", response_model=JobResultResponse)
async def get_search_result(
    request_id: str,
    _api_key: str = Depends(require_search_key),
) -> JobResultResponse:
    job = await get_job(request_id)
    if job is None:
        raise HTTPException(status_code=404, detail="Job not found")
    if job["status"] != "completed":
        raise HTTPException(
            status_code=409,
            detail=f"Job is not completed. Current status: {job['status']}",
        )
    return JobResultResponse(
        request_id=job["id"],
        status=job["status"],
        command=job["command"],
        exit_code=job["exit_code"],
        graph_count=job["graph_count"],
        processing_time=job["processing_time"],
        report=job["report"] or "",
        summary=job["summary"] or {},
        artifacts=job["artifacts"] or {},
        config=job["config"],
    )
