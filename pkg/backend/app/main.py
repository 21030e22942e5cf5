"""FastAPI application entry point."""
import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app import __version__
from app.api.v1.router import api_router
from app.config import settings
from app.exceptions import ComponentError, ContractViolation

logging.basicConfig(level=settings.log_level.upper())
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Shift Compactness API",
    description="API for deciding, certifying and probing strong compactness of bilateral weighted shifts",
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
)

# Include API routers
app.include_router(api_router, prefix=settings.api_prefix)


@app.exception_handler(ContractViolation)
async def contract_violation_handler(request: Request, exc: ContractViolation) -> JSONResponse:
    """Broken preconditions are the caller's fault."""
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": type(exc).__name__})


@app.exception_handler(ComponentError)
async def component_error_handler(request: Request, exc: ComponentError) -> JSONResponse:
    logger.error(f"{type(exc).__name__} on {request.url.path}: {exc}")
    return JSONResponse(status_code=500, content={"detail": str(exc), "error": type(exc).__name__})


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "version": __version__}
