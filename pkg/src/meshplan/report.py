"""End-to-end planning run, plan configuration, and report/heatmap output."""
from __future__ import annotations

import configparser
import csv
import logging
import os
import shutil
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .clustering import EXACT, ClusterAssignment, ClusterConfig, cluster
from .errors import ConfigError, NumericalError, PlanError
from .gateway import GatewayPlan, build_gateway_plan
from .ingest import NodeRoster, load_raw_pathloss, load_roster, read_matrix_csv, symmetrize, write_matrix_csv
from .link_budget import LinkBudgetParams, compute_pl_max
from .similarity import build_similarity, kernel_params_for
from .spectral import Embedding, embed, laplacian_spectrum, zero_eigenvalue_count

logger = logging.getLogger(__name__)

OUTPUT_FILES = (
    "clusters.csv",
    "summary.txt",
    "similarity.csv",
    "gateway_similarity.csv",
    "gateway_inter.csv",
    "similarity.pgm",
    "gateway_similarity.pgm",
    "nodes_clusters.csv",
)
EIGENVALUES_FILE = "eigenvalues.csv"


@dataclass
class PlanConfig:
    roster: Optional[Path] = None
    pathloss: Optional[Path] = None
    output: Optional[Path] = None
    budget: LinkBudgetParams = field(default_factory=LinkBudgetParams)
    sim_lo: float = 0.9
    sim_hi: float = 0.01
    pl_min_db: Optional[float] = None
    k: int = 10
    capacity: Optional[int] = None
    dim: Optional[int] = None  # None: same as k
    seed: int = 0
    restarts: int = 10
    max_iters: int = 100
    assignment: str = EXACT
    lower_bound: bool = True
    dump_eigenvalues: bool = False

    def validate(self) -> None:
        for name in ("roster", "pathloss", "output"):
            if getattr(self, name) is None:
                raise ConfigError(f"missing required setting: {name}")
        for name in ("roster", "pathloss"):
            if not Path(getattr(self, name)).is_file():
                raise ConfigError(f"{name} file not found: {getattr(self, name)}")

    def cluster_config(self) -> ClusterConfig:
        return ClusterConfig(k=self.k, capacity=self.capacity, max_iters=self.max_iters,
                             seed=self.seed, restarts=self.restarts, assignment=self.assignment,
                             enforce_lower_bound=self.lower_bound)


# Config file sections -> PlanConfig / LinkBudgetParams field names.
_SECTIONS = {
    "paths": ("roster", "pathloss", "output"),
    "kernel": ("sim_lo", "sim_hi", "pl_min_db"),
    "clustering": ("k", "capacity", "dim", "seed", "restarts", "max_iters", "assignment", "lower_bound"),
    "link_budget": tuple(f.name for f in fields(LinkBudgetParams)),
}


def _coerce(name: str, text: str, base: Path):
    try:
        if name in ("roster", "pathloss", "output"):
            p = Path(text)
            return p if p.is_absolute() else base / p
        if name in ("k", "capacity", "dim", "seed", "restarts", "max_iters"):
            return int(text)
        if name == "lower_bound":
            return configparser.ConfigParser.BOOLEAN_STATES[text.lower()]
        if name == "assignment":
            return text
        return float(text)
    except (ValueError, KeyError):
        raise ConfigError(f"invalid value for {name}: {text!r}") from None


def load_config(path) -> PlanConfig:
    """Read an INI-style plan file; relative paths resolve against its directory."""
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    plan, budget = {}, {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key, text in parser.items(section):
            if key not in _SECTIONS[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            value = _coerce(key, text.strip(), path.parent)
            (budget if section == "link_budget" else plan)[key] = value
    return PlanConfig(budget=LinkBudgetParams(**budget), **plan)


@dataclass
class PlanReport:
    ids: list[str]
    rows: list[dict]
    summary: dict
    similarity: np.ndarray
    gateway_plan: GatewayPlan
    assignment: ClusterAssignment
    embedding: Embedding
    eigenvalues: np.ndarray
    files: list[str] = field(default_factory=list)


def heatmap_pixels(matrix) -> np.ndarray:
    """Gray levels round(255 * (1 - v)), halves rounded up; 0 is black (strong link)."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValueError("heatmap needs a 2-D matrix")
    if m.size and (np.isnan(m).any() or m.min() < 0 or m.max() > 1):
        raise ValueError("heatmap values must lie in [0, 1]")
    return np.floor(255.0 * (1.0 - m) + 0.5).astype(np.uint8)


def render_heatmap(matrix, path) -> None:
    """Write a binary PGM (P5), one pixel per cell, row 0 at the top."""
    pixels = heatmap_pixels(matrix)
    rows, cols = pixels.shape
    with Path(path).open("wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5" or int(parts[3]) != 255:
        raise ValueError(f"{path}: not an 8-bit binary PGM")
    cols, rows = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4], dtype=np.uint8, count=rows * cols).reshape(rows, cols)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) for v in value)
    return str(value)


def _plan(cfg: PlanConfig):
    roster = load_roster(cfg.roster)
    raw = load_raw_pathloss(cfg.pathloss, roster)
    pl = symmetrize(raw)

    pl_max = compute_pl_max(cfg.budget).pl_max_db
    kernel = kernel_params_for(pl, pl_max, sim_lo=cfg.sim_lo, sim_hi=cfg.sim_hi, pl_min_db=cfg.pl_min_db)
    sim = build_similarity(pl, kernel)

    n = len(roster)
    ccfg = cfg.cluster_config()
    if ccfg.k > n:
        raise ConfigError(f"k={ccfg.k} exceeds node count {n}")
    dim = cfg.dim if cfg.dim is not None else min(ccfg.k, n - 1)
    embedding = embed(sim, dim)
    eigenvalues, _ = laplacian_spectrum(sim)
    if not np.all(np.isfinite(embedding.coords)):
        raise NumericalError("embedding contains non-finite coordinates")
    assignment = cluster(embedding, ccfg)
    gw = build_gateway_plan(sim, assignment)
    return roster, pl, kernel, sim, embedding, eigenvalues, assignment, gw


def run_plan(cfg: PlanConfig) -> PlanReport:
    """Run ingest through gateway selection, then write every output file in one move.

    Nothing is written unless all stages succeed.
    """
    cfg.validate()
    roster, pl, kernel, sim, embedding, eigenvalues, assignment, gw = _plan(cfg)

    n = len(roster)
    ids = roster.ids
    labels = assignment.labels
    off = ~np.eye(n, dtype=bool)
    unusable = int(np.count_nonzero((sim.values == 0) & off) // 2)
    adjacency = sim.values > 0
    n_components, _ = connected_components(adjacency, directed=False)
    isolated = [ids[i] for i in np.flatnonzero(~adjacency.any(axis=1))]
    sizes = assignment.sizes().tolist()

    rows = []
    for i, node_id in enumerate(ids):
        rows.append({"id": node_id, "cluster": int(labels[i]), "role": gw.role(i),
                     "gateway_score": float(gw.scores[i])})

    summary = {
        "n": n,
        "k": len(sizes),
        "cluster_sizes": sizes,
        "pl_max_db": float(kernel.pl_max_db),
        "alpha_per_db": float(sim.alpha),
        "pl_min_db": float(kernel.pl_min_db),
        "sim_lo": float(kernel.sim_lo),
        "sim_hi": float(kernel.sim_hi),
        "unusable_links": unusable,
        "connected_components": int(n_components),
        "zero_eigenvalues": zero_eigenvalue_count(eigenvalues),
        "isolated_nodes": isolated or "none",
        "embedding_dim": embedding.d,
        "retained_eigenvalues": [float(v) for v in embedding.eigenvalues],
        "assignment": cfg.assignment,
        "iterations": assignment.n_iter,
        "inertia": float(assignment.inertia),
        "seed": cfg.seed,
        "gateways": len(gw.gateway_set),
        "primary_gateways": [ids[c.primary] for c in gw.clusters],
        "secondary_gateways": [ids[c.secondary] if c.secondary is not None else "none" for c in gw.clusters],
    }
    if n_components > 1:
        logger.warning("usable-link graph has %d connected components", n_components)

    report = PlanReport(ids=ids, rows=rows, summary=summary, similarity=sim.values, gateway_plan=gw,
                        assignment=assignment, embedding=embedding, eigenvalues=eigenvalues)
    _write_outputs(Path(cfg.output), report, roster, cfg.dump_eigenvalues)
    return report


def _write_outputs(out: Path, report: PlanReport, roster: NodeRoster, dump_eigenvalues: bool) -> None:
    out.mkdir(parents=True, exist_ok=True)
    gw = report.gateway_plan
    gw_ids = [report.ids[i] for i in gw.gateway_set]
    tmp = Path(tempfile.mkdtemp(prefix=".meshplan-", dir=out))
    try:
        with (tmp / "clusters.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "cluster", "role", "gateway_score"])
            for r in report.rows:
                w.writerow([r["id"], r["cluster"], r["role"], repr(r["gateway_score"])])
        with (tmp / "nodes_clusters.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "lat", "lon", "cluster", "role"])
            for node, r in zip(roster.nodes, report.rows):
                w.writerow([node.id,
                            "" if node.latitude is None else repr(node.latitude),
                            "" if node.longitude is None else repr(node.longitude),
                            r["cluster"], r["role"]])
        with (tmp / "summary.txt").open("w", encoding="utf-8") as fh:
            for key, value in report.summary.items():
                fh.write(f"{key} = {_fmt(value)}\n")
        write_matrix_csv(tmp / "similarity.csv", report.ids, report.similarity)
        write_matrix_csv(tmp / "gateway_similarity.csv", gw_ids, gw.S_G)
        write_matrix_csv(tmp / "gateway_inter.csv", gw_ids, gw.S_inter_G)
        render_heatmap(report.similarity, tmp / "similarity.pgm")
        render_heatmap(gw.S_G, tmp / "gateway_similarity.pgm")
        names = list(OUTPUT_FILES)
        if dump_eigenvalues:
            (tmp / EIGENVALUES_FILE).write_text("".join(f"{v!r}\n" for v in map(float, report.eigenvalues)))
            names.append(EIGENVALUES_FILE)
        for name in names:
            os.replace(tmp / name, out / name)
        report.files = names
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def rerender(directory) -> list[str]:
    """Regenerate the heatmaps in a plan output directory from its saved matrices."""
    directory = Path(directory)
    written = []
    for csv_name, pgm_name in (("similarity.csv", "similarity.pgm"),
                               ("gateway_similarity.csv", "gateway_similarity.pgm")):
        src = directory / csv_name
        if not src.is_file():
            raise ConfigError(f"missing {src}")
        _, values = read_matrix_csv(src)
        render_heatmap(values, directory / pgm_name)
        written.append(pgm_name)
    return written


def merge(cfg: PlanConfig, overrides: dict) -> PlanConfig:
    """Apply non-None overrides; keys naming link-budget fields go to ``cfg.budget``."""
    budget_keys = {f.name for f in fields(LinkBudgetParams)}
    plan = {k: v for k, v in overrides.items() if v is not None and k not in budget_keys}
    budget = {k: v for k, v in overrides.items() if v is not None and k in budget_keys}
    if budget:
        plan["budget"] = replace(cfg.budget, **budget)
    return replace(cfg, **plan)


__all__ = [
    "OUTPUT_FILES", "PlanConfig", "PlanError", "PlanReport", "heatmap_pixels", "load_config", "merge",
    "read_pgm", "render_heatmap", "rerender", "run_plan",
]
