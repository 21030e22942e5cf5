"""API v1 router aggregation."""
from fastapi import APIRouter

from app.api.v1 import analysis, export

api_router = APIRouter()

# Include all routers
api_router.include_router(analysis.router)
api_router.include_router(export.router)
