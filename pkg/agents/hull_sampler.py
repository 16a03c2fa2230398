"""
Hull Sampler Agents
LangGraph nodes that sample, decode and root a hull of radius r
"""

import sys

from model.params import ModelParams
from planarmap.root_transform import root_transform
from planarmap.validate import validate
from samplers.disk import DiskSampler
from samplers.hull import HullSkeleton, sample_fillings
from samplers.reverse_tree import ReverseTreeSampler
from samplers.rng import DEFAULT_REJECTION_BUDGET, DEFAULT_SIZE_CAP, make_rng
from samplers.skeleton_f import sample_skeleton_F
from skeleton.codec import CYLINDER, decode


def _failed(state: dict, stage: str, error: Exception) -> dict:
    print(f"⚠️ {stage} failed: {error}", file=sys.stderr)
    return {**state, "error": f"{stage}: {error}"}


def skeleton_sampler_node(state: dict) -> dict:
    """
    Sample B_r(F) with its block structure and the genealogy U

    Expects 'params' and 'r'; creates 'rng' from 'seed' when absent.
    """
    params: ModelParams = state["params"]
    r = state["r"]
    rng = state.get("rng") or make_rng(state.get("seed"))
    print(f"📍 sampling the skeleton of a hull of radius {r} ({params.describe()})", file=sys.stderr)
    try:
        trees = state.get("trees") or ReverseTreeSampler(params, state.get("rejection_budget") or DEFAULT_REJECTION_BUDGET)
        forest, sizes, u = sample_skeleton_F(params, r, rng, trees)
    except ValueError as e:
        return _failed(state, "skeleton_sampler", e)
    return {
        **state,
        "rng": rng,
        "forest": forest,
        "sizes": sizes,
        "u": u,
        "offset": forest.tree_of[forest.distinguished],
    }


def fillings_sampler_node(state: dict) -> dict:
    """Boltzmann fillings for every inner vertex of the reordered ball"""
    params: ModelParams = state["params"]
    forest = state["forest"].reordered_ball(state["r"])
    try:
        disks = state.get("disks") or DiskSampler(params, state.get("size_cap") or DEFAULT_SIZE_CAP)
        skeleton = sample_fillings(params, forest, state["rng"], CYLINDER, disks)
    except ValueError as e:
        return _failed(state, "fillings_sampler", e)
    sample = HullSkeleton(skeleton, state["sizes"], state["u"], state["offset"])
    print(f"📍 {len(skeleton.fillings)} fillings sampled", file=sys.stderr)
    return {**state, "sample": sample}


def decoder_node(state: dict) -> dict:
    """Glue the skeleton into a cylinder over the root loop"""
    try:
        cylinder = decode(state["sample"].skeleton)
    except ValueError as e:
        return _failed(state, "decoder", e)
    print(f"📍 decoded {cylinder}", file=sys.stderr)
    return {**state, "cylinder": cylinder}


def root_transformer_node(state: dict) -> dict:
    """Remove the root loop: the hull in plane form"""
    try:
        hull = root_transform(state["cylinder"])
    except ValueError as e:
        return _failed(state, "root_transformer", e)
    print(f"✅ hull of radius {state['r']}: {hull}", file=sys.stderr)
    return {**state, "hull": hull}


def validator_node(state: dict) -> dict:
    """Structural checks on the hull; failures become the state's error"""
    report = validate(state["hull"])
    print(report.summary(), file=sys.stderr)
    if not report.passed:
        return {**state, "validation": report, "error": f"validator: {report.summary()}"}
    return {**state, "validation": report}
