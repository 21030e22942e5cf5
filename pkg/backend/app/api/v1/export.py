"""Export API endpoints."""
from fastapi import APIRouter, Depends, Query, Response

from app.dependencies import get_workflow, get_writer
from app.models.report import AnalysisRequest
from app.services.report_writer import ReportWriter
from app.workflows.analysis_workflow import AnalysisWorkflow

router = APIRouter(prefix="/export", tags=["export"])

_MEDIA_TYPES = {"csv": "text/csv", "parquet": "application/octet-stream"}


@router.post("/sequences")
def export_sequences(
    request: AnalysisRequest,
    format: str = Query("csv", pattern="^(csv|parquet)$"),
    workflow: AnalysisWorkflow = Depends(get_workflow),
    writer: ReportWriter = Depends(get_writer),
) -> Response:
    """Export the per-n sequences of all eight quantities (columns quantity, n, value)."""
    report = workflow.run(request.rule, request.options)
    return Response(
        content=writer.sequences_bytes(report.profile, format),
        media_type=_MEDIA_TYPES[format],
        headers={"Content-Disposition": f"attachment; filename=sequences.{format}"},
    )
