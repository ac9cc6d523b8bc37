"""Artifact files for pipeline runs, optionally mirrored to an S3-compatible bucket."""
import logging
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Optional

import boto3
from botocore.config import Config

logger = logging.getLogger(__name__)

ARTIFACTS_DIR = os.getenv("ARTIFACTS_DIR", "artifacts")
BUCKET = os.getenv("BUCKET")
ENDPOINT = os.getenv("ENDPOINT")
ACCESS_KEY = os.getenv("ACCESS_KEY_ID")
SECRET_KEY = os.getenv("SECRET_ACCESS_KEY")
REGION = os.getenv("REGION", "auto")


def job_dir(job_id: str) -> Path:
    """Directory holding one run's graph6 output and report."""
    path = Path(ARTIFACTS_DIR) / job_id
    path.mkdir(parents=True, exist_ok=True)
    return path


def bucket_configured() -> bool:
    return all([BUCKET, ENDPOINT, ACCESS_KEY, SECRET_KEY])


def get_client():
    return boto3.client(
        "s3",
        endpoint_url=ENDPOINT,
        aws_access_key_id=ACCESS_KEY,
        aws_secret_access_key=SECRET_KEY,
        region_name=REGION,
        config=Config(signature_version="s3v4"),
    )


def upload_artifact(local_path: Path, key_prefix: str) -> str:
    """Upload one artifact file and return a presigned URL (public URL as fallback)."""
    if not bucket_configured():
        raise ValueError("Storage env vars (BUCKET, ENDPOINT, ACCESS_KEY_ID, SECRET_ACCESS_KEY) must be set")
    client = get_client()
    timestamp = datetime.now(timezone.utc).strftime("%Y%m%d%H%M%S")
    key = f"{key_prefix}-{timestamp}-{local_path.name}"
    with open(local_path, "rb") as f:
        client.upload_fileobj(f, BUCKET, key, ExtraArgs={"ContentType": "text/plain"})
    try:
        return client.generate_presigned_url(
            "get_object",
            Params={"Bucket": BUCKET, "Key": key},
            ExpiresIn=86400 * 7,
        )
    except Exception:
        return f"{ENDPOINT.rstrip('/')}/{BUCKET}/{key}"


def collect_artifacts(job_id: str, paths: Dict[str, Optional[str]]) -> Dict[str, Dict[str, Optional[str]]]:
    """
    Local path of every artifact that was written, plus a bucket URL when a
    bucket is configured. Upload failures are logged and leave url empty.
    """
    out: Dict[str, Dict[str, Optional[str]]] = {}
    for name, path in paths.items():
        if not path or not Path(path).exists():
            continue
        entry: Dict[str, Optional[str]] = {"path": str(path), "url": None}
        if bucket_configured():
            try:
                entry["url"] = upload_artifact(Path(path), key_prefix=f"search-{job_id[:12]}")
            except Exception as e:
                logger.exception(f"Upload of {path} failed: {e}")
        out[name] = entry
    return out
