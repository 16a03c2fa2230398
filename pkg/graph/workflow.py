"""
hypermap Workflows
LangGraph pipelines for hull sampling and for seeded verification runs
"""

from typing import Any, Optional, TypedDict

from langgraph.graph import END, StateGraph

from agents.hull_sampler import (
    decoder_node,
    fillings_sampler_node,
    root_transformer_node,
    skeleton_sampler_node,
    validator_node,
)
from agents.verifier import aggregator_node, replicate_runner_node, reporter_node
from model.params import ModelParams


class HullState(TypedDict, total=False):
    """State shared across the hull pipeline"""
    # Input
    params: ModelParams
    r: int
    seed: Optional[int]
    rng: Any
    validate: bool
    size_cap: int
    rejection_budget: int
    trees: Any
    disks: Any

    # Skeleton
    forest: Any
    sizes: list
    u: Any
    offset: int
    sample: Any

    # Maps
    cylinder: Any
    hull: Any
    validation: Any

    # Errors
    error: str


class VerificationState(TypedDict, total=False):
    """State shared across the verification pipeline"""
    experiment: str
    overrides: dict
    seed: Optional[int]
    seeds: int
    required: int
    jobs: int
    threshold: float
    json_path: str
    csv_path: str
    pdf_path: str

    replicates: list
    report: Any
    passed: bool
    written: dict

    error: str


def _continue_or_end(next_node: str):
    def route(state: dict) -> str:
        return END if state.get("error") else next_node
    return route


def should_validate(state: HullState) -> str:
    """
    Conditional edge after the root transformation

    Returns:
        "validator" when validation was requested and nothing failed, else END
    """
    if state.get("error") or not state.get("validate"):
        return END
    return "validator"


def create_hull_workflow() -> StateGraph:
    """
    skeleton_sampler -> fillings_sampler -> decoder -> root_transformer -> (validator) -> END

    Any stage that sets 'error' routes straight to END.
    """
    workflow = StateGraph(HullState)
    workflow.add_node("skeleton_sampler", skeleton_sampler_node)
    workflow.add_node("fillings_sampler", fillings_sampler_node)
    workflow.add_node("decoder", decoder_node)
    workflow.add_node("root_transformer", root_transformer_node)
    workflow.add_node("validator", validator_node)

    workflow.set_entry_point("skeleton_sampler")
    chain = ["skeleton_sampler", "fillings_sampler", "decoder", "root_transformer"]
    for here, there in zip(chain, chain[1:]):
        workflow.add_conditional_edges(here, _continue_or_end(there), {there: there, END: END})
    workflow.add_conditional_edges("root_transformer", should_validate, {"validator": "validator", END: END})
    workflow.add_edge("validator", END)
    return workflow


def create_verification_workflow() -> StateGraph:
    """replicate_runner -> aggregator -> reporter -> END"""
    workflow = StateGraph(VerificationState)
    workflow.add_node("replicate_runner", replicate_runner_node)
    workflow.add_node("aggregator", aggregator_node)
    workflow.add_node("reporter", reporter_node)

    workflow.set_entry_point("replicate_runner")
    workflow.add_conditional_edges("replicate_runner", _continue_or_end("aggregator"),
                                   {"aggregator": "aggregator", END: END})
    workflow.add_edge("aggregator", "reporter")
    workflow.add_edge("reporter", END)
    return workflow


_apps: dict[str, Any] = {}


def get_app(kind: str = "hull"):
    """Get or create a compiled workflow ('hull' or 'verification')"""
    if kind not in _apps:
        workflow = create_hull_workflow() if kind == "hull" else create_verification_workflow()
        _apps[kind] = workflow.compile()
    return _apps[kind]


def run_hull_pipeline(params: ModelParams, r: int, seed: Optional[int] = None, rng: Any = None,
                      validate: bool = False, **limits: Any) -> dict:
    """
    Sample one hull through the compiled pipeline

    Returns:
        Final state; 'hull' holds the map, 'error' is set if a stage failed
    """
    state: dict = {"params": params, "r": r, "seed": seed, "validate": validate, "error": ""}
    if rng is not None:
        state["rng"] = rng
    state.update({k: v for k, v in limits.items() if v is not None})
    return get_app("hull").invoke(state)


def run_verification(experiment: str, seed: Optional[int] = None, seeds: int = 3, required: int = 2,
                     jobs: int = 1, threshold: float = 0.01, overrides: Optional[dict] = None,
                     json_path: Optional[str] = None, csv_path: Optional[str] = None,
                     pdf_path: Optional[str] = None) -> dict:
    """
    Run replicates of a registered experiment and aggregate them

    Returns:
        Final state; 'report' holds the AggregateReport and 'passed' the verdict
    """
    state = {
        "experiment": experiment,
        "overrides": overrides or {},
        "seed": seed,
        "seeds": seeds,
        "required": required,
        "jobs": jobs,
        "threshold": threshold,
        "json_path": json_path or "",
        "csv_path": csv_path or "",
        "pdf_path": pdf_path or "",
        "error": "",
    }
    return get_app("verification").invoke(state)
