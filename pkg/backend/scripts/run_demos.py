#!/usr/bin/env python3
"""Run the bundled demos and summarize their verdicts in a markdown report."""
import sys
from datetime import datetime
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.models.report import AnalysisReport
from app.services.report_writer import ReportWriter
from app.workflows.analysis_workflow import DEMOS, AnalysisWorkflow


def run_all(workflow: AnalysisWorkflow, writer: ReportWriter, out_dir: Path) -> dict[str, AnalysisReport]:
    """Run every demo and write its JSON report."""
    reports = {}
    for name in DEMOS:
        print(f"  Running {name}...")
        report = workflow.demo(name)
        writer.write_json(report, out_dir / f"{name}.json")
        reports[name] = report
        print(f"    r(W) = {report.profile.r:.6g}, r3+ = {report.profile.r3_plus.estimate:.6g}")
    return reports


def generate_report(reports: dict[str, AnalysisReport]) -> str:
    """Generate markdown report."""
    lines = [
        "# Strong Compactness Demo Report",
        "",
        f"**Demos run**: {len(reports)}",
        "",
        "---",
        "",
        "## Verdicts",
        "",
        "| Demo | Subject | Conclusion | Rule | Margin |",
        "|------|---------|------------|------|--------|",
    ]
    for name, report in reports.items():
        for verdict in report.verdicts:
            margin = "n/a" if verdict.margin is None else f"{verdict.margin:.6g}"
            lines.append(
                f"| {name} | {verdict.subject.value} | {verdict.conclusion.value} | {verdict.rule.value} | {margin} |"
            )

    lines.extend(["", "## Certificates", "", "| Demo | k | c | d | n0 | n1 | eps |", "|---|---|---|---|---|---|---|"])
    for name, report in reports.items():
        for cert in report.certificates:
            lines.append(
                f"| {name} | {cert.basis_index} | {cert.c:.4g} | {cert.d:.4g} | {cert.n0} | {cert.n1} | {cert.epsilon:g} |"
            )
        for note in report.notes:
            lines.append(f"| {name} | - | - | - | - | - | {note} |")

    lines.extend(["", "---", "", f"*Report generated on {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}*"])
    return "\n".join(lines)


def main():
    """Main execution function."""
    print("=" * 60)
    print("Strong Compactness Demos")
    print("=" * 60)

    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo-reports")
    reports = run_all(AnalysisWorkflow(), ReportWriter(), out_dir)

    report_path = out_dir / "REPORT.md"
    report_path.write_text(generate_report(reports))

    print(f"\nReport saved to {report_path}")
    print("=" * 60)


if __name__ == "__main__":
    main()
