"""Gateway scoring and selection, and the gateway-level similarity matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class ClusterGateways:
    cluster_id: int
    primary: int
    secondary: Optional[int]
    members: tuple[int, ...]
    scores: tuple[float, ...]  # aligned with members


@dataclass(frozen=True)
class GatewayPlan:
    clusters: tuple[ClusterGateways, ...]
    gateway_set: tuple[int, ...]
    scores: np.ndarray
    S_G: Optional[np.ndarray] = None
    S_inter_G: Optional[np.ndarray] = None

    def role(self, node: int) -> str:
        for c in self.clusters:
            if node == c.primary:
                return "primary_gw"
            if node == c.secondary:
                return "secondary_gw"
        return "member"


def _values(S) -> np.ndarray:
    return np.asarray(getattr(S, "values", S), dtype=float)


def _labels(labels) -> np.ndarray:
    return np.asarray(getattr(labels, "labels", labels))


def gateway_scores(S, labels) -> np.ndarray:
    """Per-node similarity mass toward nodes in other clusters.

    Rows are summed with ``math.fsum`` so the result is the correctly rounded
    sum, independent of summation order.
    """
    s = _values(S)
    lab = _labels(labels)
    if lab.shape != (s.shape[0],):
        raise ValueError(f"labels length {lab.shape} does not match n={s.shape[0]}")
    external = lab[:, None] != lab[None, :]
    return np.array([math.fsum(row[mask]) for row, mask in zip(s, external)])


def select_gateways(scores, labels) -> GatewayPlan:
    """Highest score is primary, second highest secondary; lower node index wins ties."""
    scores = np.asarray(scores, dtype=float)
    lab = _labels(labels)
    records = []
    gateways = []
    for cid in np.unique(lab):
        members = np.flatnonzero(lab == cid)
        # lexsort: last key is primary; descending score, then ascending index
        ranked = members[np.lexsort((members, -scores[members]))]
        primary = int(ranked[0])
        secondary = int(ranked[1]) if len(ranked) > 1 else None
        records.append(ClusterGateways(
            cluster_id=int(cid), primary=primary, secondary=secondary,
            members=tuple(int(m) for m in members),
            scores=tuple(float(scores[m]) for m in members),
        ))
        gateways.append(primary)
        if secondary is not None:
            gateways.append(secondary)
    return GatewayPlan(clusters=tuple(records), gateway_set=tuple(gateways), scores=scores)


def restrict_to_gateways(S, gateway_set: Sequence[int]) -> np.ndarray:
    s = _values(S)
    idx = np.asarray(gateway_set, dtype=int)
    if len(set(idx.tolist())) != len(idx):
        raise ValueError("gateway set contains duplicate indices")
    if idx.size and (idx.min() < 0 or idx.max() >= s.shape[0]):
        raise ValueError(f"gateway index out of range for n={s.shape[0]}")
    return s[np.ix_(idx, idx)]


def inter_cluster_filter(S, labels) -> np.ndarray:
    s = _values(S)
    lab = _labels(labels)
    return np.where(lab[:, None] != lab[None, :], s, 0.0)


def build_gateway_plan(S, labels) -> GatewayPlan:
    scores = gateway_scores(S, labels)
    plan = select_gateways(scores, labels)
    return GatewayPlan(
        clusters=plan.clusters,
        gateway_set=plan.gateway_set,
        scores=scores,
        S_G=restrict_to_gateways(S, plan.gateway_set),
        S_inter_G=restrict_to_gateways(inter_cluster_filter(S, labels), plan.gateway_set),
    )
