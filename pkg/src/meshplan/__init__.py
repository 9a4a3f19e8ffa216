"""Balanced spectral clustering and gateway selection for static radio meshes."""
from .clustering import ClusterAssignment, ClusterConfig, balanced_assign, cluster, kmeans_init
from .errors import ConfigError, InfeasibleError, IngestError, NumericalError, PlanError
from .gateway import GatewayPlan, build_gateway_plan, gateway_scores, inter_cluster_filter, restrict_to_gateways, select_gateways
from .ingest import NO_PATH, NodeRecord, NodeRoster, PathLossMatrix, RawPathLoss, load_raw_pathloss, load_roster, symmetrize
from .link_budget import LinkBudgetParams, LinkBudgetResult, compute_pl_max, is_usable
from .report import PlanConfig, PlanReport, render_heatmap, run_plan
from .similarity import KernelParams, SimilarityMatrix, build_similarity, compute_alpha
from .spectral import Embedding, degree_vector, embed, normalized_laplacian
from .synth import SynthConfig, synth_scenario

__version__ = "0.1.0"

__all__ = [
    "ClusterAssignment", "ClusterConfig", "ConfigError", "Embedding", "GatewayPlan", "InfeasibleError",
    "IngestError", "KernelParams", "LinkBudgetParams", "LinkBudgetResult", "NO_PATH", "NodeRecord", "NodeRoster",
    "NumericalError", "PathLossMatrix", "PlanConfig", "PlanError", "PlanReport", "RawPathLoss", "SimilarityMatrix",
    "SynthConfig", "balanced_assign", "build_gateway_plan", "build_similarity", "cluster", "compute_alpha",
    "compute_pl_max", "degree_vector", "embed", "gateway_scores", "inter_cluster_filter", "is_usable",
    "kmeans_init", "load_raw_pathloss", "load_roster", "normalized_laplacian", "render_heatmap",
    "restrict_to_gateways", "run_plan", "select_gateways", "symmetrize", "synth_scenario",
]
