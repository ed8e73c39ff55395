"""Deterministic seeded force-directed layout.

The simulation is a velocity-less iterative displacement scheme with
many-body repulsion, spring forces along links, and a weak centering
force. The layout is a pure function of (graph topology, params): the
same seed always yields bit-identical positions. Once computed, positions
are frozen; only an explicit move or relayout changes them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import AlreadyPlaced, EmptyGraph

# Above this node count the all-pairs repulsion switches to a KD-tree
# cutoff; both paths are deterministic for a fixed input.
_DENSE_LIMIT = 800


@dataclass(frozen=True)
class LayoutParams:
    seed: int = 0
    iterations: int = 300
    repulsion_strength: float = 100.0
    link_distance: float = 30.0
    centering_strength: float = 0.002
    timestep_decay: float = 0.99
    min_separation: float = 1.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.link_distance <= 0:
            raise ValueError("link_distance must be positive")
        if not 0 < self.timestep_decay < 1:
            raise ValueError("timestep_decay must be in (0,1)")


def _node_order(node_ids) -> list[str]:
    return sorted(node_ids)


def _edge_index(order: list[str], edges) -> np.ndarray:
    index = {nid: i for i, nid in enumerate(order)}
    pairs = sorted({(index[a], index[b]) for a, b in edges
                    if a in index and b in index and a != b})
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


def _initial_positions(n: int, params: LayoutParams) -> np.ndarray:
    # seeded placement on a disc whose radius scales with the graph size
    rng = np.random.default_rng(params.seed)
    radius = params.link_distance * max(1.0, np.sqrt(n))
    r = radius * np.sqrt(rng.random(n))
    theta = 2 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def _repulsion_dense(pos: np.ndarray, strength: float) -> np.ndarray:
    delta = pos[:, None, :] - pos[None, :, :]
    dist2 = np.sum(delta * delta, axis=-1)
    np.fill_diagonal(dist2, np.inf)
    dist2 = np.maximum(dist2, 1e-6)
    force = strength / dist2
    return np.sum(force[:, :, None] * delta / np.sqrt(dist2)[:, :, None], axis=1)

def _repulsion_sparse(pos: np.ndarray, strength: float, cutoff: float) -> np.ndarray:
    tree = cKDTree(pos)
    pairs = tree.query_pairs(r=cutoff, output_type="ndarray")
    disp = np.zeros_like(pos)
    if len(pairs) == 0:
        return disp
    delta = pos[pairs[:, 0]] - pos[pairs[:, 1]]
    dist2 = np.maximum(np.sum(delta * delta, axis=1), 1e-6)
    f = (strength / dist2 / np.sqrt(dist2))[:, None] * delta
    np.add.at(disp, pairs[:, 0], f)
    np.add.at(disp, pairs[:, 1], -f)
    return disp


def _simulate(pos: np.ndarray, edges: np.ndarray, params: LayoutParams) -> np.ndarray:
    n = len(pos)
    step = 1.0
    for _ in range(params.iterations):
        if n <= _DENSE_LIMIT:
            force = _repulsion_dense(pos, params.repulsion_strength)
        else:
            force = _repulsion_sparse(pos, params.repulsion_strength, 3 * params.link_distance)
        if len(edges):
            delta = pos[edges[:, 0]] - pos[edges[:, 1]]
            dist = np.maximum(np.sqrt(np.sum(delta * delta, axis=1)), 1e-6)
            # linear spring toward the rest length
            f = (0.1 * (dist - params.link_distance) / dist)[:, None] * delta
            np.add.at(force, edges[:, 0], -f)
            np.add.at(force, edges[:, 1], f)
        force -= params.centering_strength * pos
        # clamp displacement so a bad iteration cannot explode
        norms = np.maximum(np.sqrt(np.sum(force * force, axis=1)), 1e-12)
        limit = params.link_distance
        scale = np.minimum(1.0, limit / norms)
        pos = pos + step * force * scale[:, None]
        step *= params.timestep_decay
    return pos


def _spread_overlaps(pos: np.ndarray, params: LayoutParams) -> np.ndarray:
    """Push apart any pair closer than min_separation; deterministic sweep."""
    if len(pos) < 2:
        return pos
    for _ in range(50):
        tree = cKDTree(pos)
        pairs = tree.query_pairs(r=params.min_separation, output_type="ndarray")
        if len(pairs) == 0:
            break
        for i, j in pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]:
            delta = pos[i] - pos[j]
            dist = float(np.sqrt(np.sum(delta * delta)))
            if dist < 1e-9:
                # coincident points: separate along a direction derived from indices
                angle = 2 * np.pi * ((i * 2654435761 + j) % 360) / 360.0
                delta = np.array([np.cos(angle), np.sin(angle)])
                dist = 1.0
            push = (params.min_separation - dist) / 2 + 1e-6
            pos[i] += delta / dist * push
            pos[j] -= delta / dist * push
    return pos


def initial_layout(
    node_ids,
    edges,
    params: LayoutParams = LayoutParams(),
) -> dict[str, tuple[float, float]]:
    """Compute the seeded force-based layout for a whole graph.

    ``edges`` is an iterable of (source_id, target_id). The final layout is
    translated so its centroid sits at the origin, which also pins a single
    isolated node exactly to (0, 0).
    """
    order = _node_order(node_ids)
    if not order:
        raise EmptyGraph("cannot lay out an empty graph")
    pos = _initial_positions(len(order), params)
    pos = _simulate(pos, _edge_index(order, edges), params)
    pos = _spread_overlaps(pos, params)
    pos -= pos.mean(axis=0)
    if not np.all(np.isfinite(pos)):
        raise AssertionError("layout produced non-finite coordinates")
    return {nid: (float(x), float(y)) for nid, (x, y) in zip(order, pos)}


def _jitter(node_id: str, seed: int, radius: float) -> tuple[float, float]:
    digest = hashlib.sha256(f"{seed}:{node_id}".encode()).digest()
    a = int.from_bytes(digest[:8], "big") / 2**64
    b = int.from_bytes(digest[8:16], "big") / 2**64
    r = radius * np.sqrt(a)
    theta = 2 * np.pi * b
    return (float(r * np.cos(theta)), float(r * np.sin(theta)))


def incremental_place(
    positions: dict[str, tuple[float, float]],
    new_node_ids,
    edges,
    params: LayoutParams = LayoutParams(),
) -> dict[str, tuple[float, float]]:
    """Place new nodes without touching any existing position.

    Each new node lands at the centroid of its already-positioned
    neighbors plus a seeded jitter (radius link_distance/4), or at the view
    center if it has none. Returns positions for the new nodes only.
    """
    new_ids = _node_order(new_node_ids)
    for nid in new_ids:
        if nid in positions:
            raise AlreadyPlaced(f"node {nid} already has a position")
    neighbors: dict[str, list[str]] = {nid: [] for nid in new_ids}
    for a, b in edges:
        if a in neighbors and b in positions:
            neighbors[a].append(b)
        if b in neighbors and a in positions:
            neighbors[b].append(a)
    placed = {}
    jitter_radius = params.link_distance / 4
    for nid in new_ids:
        anchor_ids = neighbors[nid]
        if anchor_ids:
            pts = np.array([positions[a] for a in anchor_ids])
            cx, cy = pts.mean(axis=0)
        else:
            cx, cy = 0.0, 0.0
        jx, jy = _jitter(nid, params.seed, jitter_radius)
        placed[nid] = (float(cx + jx), float(cy + jy))
    return placed


def relayout(
    node_ids,
    edges,
    params: LayoutParams = LayoutParams(),
    user_requested: bool = True,
) -> dict[str, tuple[float, float]]:
    """Full recomputation, allowed only on explicit user demand."""
    if not user_requested:
        raise ValueError("relayout requires an explicit user request")
    return initial_layout(node_ids, edges, params)
