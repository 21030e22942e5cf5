"""Analysis API endpoints."""
import logging

from fastapi import APIRouter, Depends, HTTPException

from app.dependencies import get_workflow
from app.models.report import AnalysisReport, AnalysisRequest, CoverRequest, CoverResult
from app.workflows.analysis_workflow import DEMO_ALIASES, DEMOS, AnalysisWorkflow

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/analysis", tags=["analysis"])


@router.post("", response_model=AnalysisReport)
def run_analysis(
    request: AnalysisRequest,
    workflow: AnalysisWorkflow = Depends(get_workflow),
) -> AnalysisReport:
    """
    Profile a weight rule and decide its verdicts.

    Args:
        request: Weight rule and analysis options
        workflow: Analysis workflow

    Returns:
        AnalysisReport
    """
    return workflow.run(request.rule, request.options)


@router.get("/demo/{name}", response_model=AnalysisReport)
def run_demo(name: str, workflow: AnalysisWorkflow = Depends(get_workflow)) -> AnalysisReport:
    """Run one of the bundled demos."""
    if name not in DEMOS and name not in DEMO_ALIASES:
        raise HTTPException(status_code=404, detail=f"Unknown demo: {name}")
    return workflow.demo(name)


@router.post("/cover", response_model=CoverResult)
def run_cover(request: CoverRequest, workflow: AnalysisWorkflow = Depends(get_workflow)) -> CoverResult:
    """Greedy eps-net of sampled orbit points p(W)e_k."""
    return workflow.cover(request)
