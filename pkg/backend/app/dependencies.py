"""Dependency injection for FastAPI."""
from app.services.report_writer import ReportWriter
from app.workflows.analysis_workflow import AnalysisWorkflow

# Workflow singleton (services are stateless apart from prefix-sum caches)
_workflow: AnalysisWorkflow | None = None


def get_workflow() -> AnalysisWorkflow:
    """Dependency for the analysis workflow."""
    global _workflow
    if _workflow is None:
        _workflow = AnalysisWorkflow()
    return _workflow


def get_writer() -> ReportWriter:
    """Dependency for the report writer."""
    return ReportWriter()
