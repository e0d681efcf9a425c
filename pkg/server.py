"""FastAPI server exposing the streamed planarity engine over HTTP."""

from __future__ import annotations

import asyncio
from contextlib import asynccontextmanager
import logging
from typing import Any, Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from streamed_planarity.api_mapper import describe_instance, map_decision_to_dict
from streamed_planarity.certify import check_certificate
from streamed_planarity.config import DEFAULT_BUDGET
from streamed_planarity.errors import StreamedPlanarityError
from streamed_planarity.instance_loader import composite_from_dict, get_instance_path, list_instances, load_instance
from streamed_planarity.instances import classify, validate
from streamed_planarity.models import DrawingCertificate, StreamedInstance
from streamed_planarity.reduce import star_to_sefe
from streamed_planarity.solve import decide, verify_pieces

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Lifespan context manager for startup and shutdown."""
    logger.info("Corpus has %d instances", len(list_instances()))
    yield
    logger.info("Shutting down...")


app = FastAPI(
    title="Streamed Planarity API",
    version="1.0.0",
    lifespan=lifespan,
)

# Exhaustive searches are CPU-bound; run one at a time off the event loop.
solver_lock = asyncio.Lock()


class InstanceRequest(BaseModel):
    """Request body carrying one instance document."""
    instance: dict[str, Any]


class DecideRequest(InstanceRequest):
    """Request body for the decide endpoint."""
    mode: Literal["auto", "algocon", "star", "exhaustive"] = "auto"
    budget: int = Field(default=DEFAULT_BUDGET, ge=1, le=10**9)


class VerifyRequest(InstanceRequest):
    """Request body for the verify endpoint."""
    certificate: dict[str, Any]


def _parse_valid(data: dict[str, Any]) -> StreamedInstance:
    instance = StreamedInstance.from_dict(data)
    report = validate(instance)
    if not report.ok:
        raise StreamedPlanarityError("Invalid instance: " + "; ".join(report.violations))
    return instance


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "Streamed Planarity API",
        "version": "1.0.0",
        "endpoints": {
            "POST /api/decide": "Decide an instance",
            "POST /api/verify": "Check a drawing certificate or composite witness",
            "POST /api/classify": "Classify an instance",
            "POST /api/reduce": "Reduce a star instance to sunflower SEFE",
            "GET /api/corpus": "List corpus instances",
            "GET /api/corpus/{id}": "Get a corpus instance",
        },
    }


@app.post("/api/decide")
async def decide_endpoint(request: DecideRequest) -> dict[str, Any]:
    """Decide an instance and return the answer, trace and witness."""
    try:
        instance = _parse_valid(request.instance)
        async with solver_lock:
            decision = await asyncio.to_thread(decide, instance, request.mode, request.budget)
        logger.info(f"Decided instance with n={instance.n}, m={instance.m}: {decision.answer}")
        return map_decision_to_dict(decision)
    except StreamedPlanarityError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error deciding instance: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error deciding instance")


@app.post("/api/verify")
async def verify_endpoint(request: VerifyRequest) -> dict[str, Any]:
    """Check a certificate against an instance."""
    try:
        instance = _parse_valid(request.instance)
        if "pieces" in request.certificate:
            report = verify_pieces(instance, composite_from_dict(request.certificate))
        else:
            report = check_certificate(instance, DrawingCertificate.from_dict(request.certificate))
        logger.info(f"Certificate verdict: {report.verdict}")
        return report.to_dict()
    except StreamedPlanarityError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error verifying certificate: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error verifying certificate")


@app.post("/api/classify")
async def classify_endpoint(request: InstanceRequest) -> dict[str, Any]:
    """Classify an instance with a connected union graph."""
    try:
        instance = _parse_valid(request.instance)
        return {**classify(instance).to_dict(), "summary": describe_instance(instance)}
    except StreamedPlanarityError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error classifying instance: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error classifying instance")


@app.post("/api/reduce")
async def reduce_endpoint(request: InstanceRequest) -> dict[str, Any]:
    """Reduce a star instance to a sunflower SEFE instance."""
    try:
        return star_to_sefe(_parse_valid(request.instance)).to_dict()
    except StreamedPlanarityError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error reducing instance: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error reducing instance")


@app.get("/api/corpus")
async def get_corpus() -> dict[str, Any]:
    """List all instance files in the corpus."""
    try:
        instances = list_instances()
        logger.info(f"Returning {len(instances)} corpus instances")
        return {"instances": instances}
    except Exception as e:
        logger.error(f"Error listing corpus: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error listing corpus")


@app.get("/api/corpus/{instance_id}")
async def get_corpus_instance(instance_id: str) -> dict[str, Any]:
    """Get the content of a specific corpus instance."""
    try:
        path = get_instance_path(instance_id)
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"Instance '{instance_id}' not found")
        instance = load_instance(path)
        logger.info(f"Loaded corpus instance: {instance_id}")
        return instance.to_dict()
    except HTTPException:
        raise
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error loading instance {instance_id}: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Error loading instance")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000, log_level="info")
