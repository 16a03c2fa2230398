"""
Verification Agents
LangGraph nodes that run experiment replicates, aggregate them and write reports
"""

import sys

from experiments.report import DEFAULT_REQUIRED, DEFAULT_SEEDS, DEFAULT_THRESHOLD, aggregate, write_json, write_samples_csv
from experiments.verify import run_replicates
from tools.pdf_generator import generate_pdf_report


def replicate_runner_node(state: dict) -> dict:
    """One replicate per derived seed; 'jobs' > 1 runs them in worker processes"""
    name = state["experiment"]
    seeds = state.get("seeds") or DEFAULT_SEEDS
    print(f"📍 running {seeds} replicates of '{name}'", file=sys.stderr)
    try:
        replicates = run_replicates(
            name,
            seed=state.get("seed"),
            seeds=seeds,
            jobs=state.get("jobs") or 1,
            threshold=state.get("threshold") or DEFAULT_THRESHOLD,
            **(state.get("overrides") or {}),
        )
    except ValueError as e:
        print(f"⚠️ replicate_runner failed: {e}", file=sys.stderr)
        return {**state, "error": f"replicate_runner: {e}"}
    for rep in replicates:
        print(f"   {rep.summary()}", file=sys.stderr)
    return {**state, "replicates": replicates}


def aggregator_node(state: dict) -> dict:
    """Pass when at least 'required' replicates pass"""
    report = aggregate(state["replicates"], state.get("required") or DEFAULT_REQUIRED, state.get("seed"))
    status = "✅" if report.passed else "⚠️"
    print(f"{status} {report.name}: {report.passes}/{len(report.replicates)} replicates passed", file=sys.stderr)
    return {**state, "report": report, "passed": report.passed}


def reporter_node(state: dict) -> dict:
    """Write the JSON report, the raw samples and the PDF when their paths are set"""
    report = state["report"]
    written = {}
    if state.get("json_path"):
        written["json"] = write_json(report, state["json_path"])
    if state.get("csv_path"):
        written["csv"] = write_samples_csv(report.replicates, state["csv_path"])
    if state.get("pdf_path"):
        written["pdf"] = generate_pdf_report(report, state["pdf_path"])
    for kind, path in written.items():
        if path:
            print(f"✅ {kind} report written to {path}", file=sys.stderr)
    return {**state, "written": written}
