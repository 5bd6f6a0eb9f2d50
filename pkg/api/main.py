"""
FastAPI Server for gabortorus

Exposes the frame, theta and verification reports of the command-line
front end over HTTP. Request bodies are run configurations; responses are
the same JSON reports the CLI writes to disk.
"""

import sys
import os
import logging
import math
from datetime import datetime
from typing import Any, List, Optional

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from config.settings import get_execution_config, get_tolerances
from gabortorus import __version__
from gabortorus.cli import framecheck_report, theta_command_report
from gabortorus.errors import ConfigError, GaborTorusError
from gabortorus.export import to_builtin
from gabortorus.run_config import RunConfig
from gabortorus.verification import get_default_runner, summarize

# Configure logging
logging.basicConfig(level=getattr(logging, get_execution_config().log_level, logging.INFO))
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="gabortorus API",
    description="Gabor frame, quantum theta and identity-verification reports",
    version=__version__,
)

# Configure CORS for browser clients
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# ========================================
# Request/Response Models
# ========================================

class VerifyRequest(BaseModel):
    """Request to run (part of) the identity catalogue."""
    seed: int = Field(0, ge=0)
    identities: Optional[List[str]] = None


def _json_ready(data: Any) -> Any:
    """Builtin types only; non-finite floats become null."""
    data = to_builtin(data)
    if isinstance(data, dict):
        return {k: _json_ready(v) for k, v in data.items()}
    if isinstance(data, list):
        return [_json_ready(v) for v in data]
    if isinstance(data, float) and not math.isfinite(data):
        return None
    return data


def _http_error(e: GaborTorusError) -> HTTPException:
    status = 400 if isinstance(e, ConfigError) else 422
    logger.error(f"{type(e).__name__}: {e}")
    return HTTPException(status_code=status, detail={"error": type(e).__name__, "message": str(e), "exit_code": e.exit_code})


# ========================================
# Health Check
# ========================================

@app.get("/health")
async def health_check():
    """Check if API is healthy and report the effective tolerances."""
    return {
        "status": "healthy",
        "timestamp": datetime.utcnow().isoformat(),
        "version": __version__,
        "tolerances": get_tolerances().model_dump(),
    }


# ========================================
# Reports
# ========================================

@app.post("/framecheck")
def framecheck(config: RunConfig):
    """
    Frame report of a finite Gabor system.

    Returns the frame bounds, redundancy, frame verdict and the Janssen,
    FIGA and (for frames) Wexler-Raz residuals. A system that is not a frame
    is a verdict, not an error.
    """
    try:
        return _json_ready(framecheck_report(config))
    except GaborTorusError as e:
        raise _http_error(e)


@app.post("/theta")
def theta(config: RunConfig):
    """Quantum theta report plus the invertibility sweep table."""
    try:
        report, _ = theta_command_report(config)
        return _json_ready(report)
    except GaborTorusError as e:
        raise _http_error(e)


@app.post("/verify")
def verify(request: VerifyRequest):
    """Run the identity catalogue and return per-identity verdicts."""
    try:
        results = get_default_runner().run_all(seed=request.seed, identities=request.identities)
    except GaborTorusError as e:
        raise _http_error(e)
    logger.info(f"Verification: {sum(r.passed for r in results)}/{len(results)} checks passed")
    return _json_ready(summarize(results))


# ========================================
# Main Entry Point
# ========================================

if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "api.main:app",
        host="0.0.0.0",
        port=int(os.getenv("GABORTORUS_PORT", "8000")),
        reload=True,
        log_level="info"
    )
