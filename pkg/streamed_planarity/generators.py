"""Seed-deterministic random instance generators."""

from __future__ import annotations

import random

import networkx as nx

from .config import DEFAULT_SEED, EDGE_DELETION_PROBABILITY
from .graph import Edge, edge_key
from .models import StreamedInstance


def _labels(n: int) -> tuple[str, ...]:
    return tuple(str(k) for k in range(1, n + 1))


def stacked_triangulation(n: int, rng: random.Random) -> set[Edge]:
    """Random maximal planar graph on labels 1..n, grown by stacking into faces."""

    labels = _labels(n)
    if n < 3:
        return {edge_key(labels[0], labels[1])} if n == 2 else set()
    a, b, c = labels[:3]
    edges = {edge_key(a, b), edge_key(b, c), edge_key(a, c)}
    faces = [(a, b, c), (a, b, c)]
    for label in labels[3:]:
        x, y, z = faces.pop(rng.randrange(len(faces)))
        edges.update(edge_key(label, w) for w in (x, y, z))
        faces.extend([(x, y, label), (y, z, label), (x, z, label)])
    return edges


def _sample_stream(
    vertices: tuple[str, ...],
    forbidden: set[Edge],
    m: int,
    rng: random.Random,
    allowed=lambda u, v: True,
) -> tuple[Edge, ...]:
    candidates = [
        (u, v)
        for index, u in enumerate(vertices)
        for v in vertices[index + 1:]
        if edge_key(u, v) not in forbidden and allowed(u, v)
    ]
    if m > len(candidates):
        raise ValueError(f"Cannot sample {m} stream edges, only {len(candidates)} pairs are free.")
    return tuple(edge_key(u, v) for u, v in rng.sample(candidates, m))


def random_instance(n: int, m: int, omega: int, seed: int = DEFAULT_SEED) -> StreamedInstance:
    """Random maximal planar backbone thinned by independent edge deletion."""

    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = random.Random(seed)
    backbone = {
        edge for edge in sorted(stacked_triangulation(n, rng))
        if rng.random() >= EDGE_DELETION_PROBABILITY
    }
    vertices = _labels(n)
    stream = _sample_stream(vertices, backbone, m, rng)
    return StreamedInstance(vertices, frozenset(backbone), stream, omega)


def random_star_instance(
    n: int,
    m: int,
    omega: int,
    seed: int = DEFAULT_SEED,
    isolated: int | None = None,
) -> StreamedInstance:
    """Random star instance: a 2-connected planar block plus isolated vertices.

    Edges of a stacked triangulation are deleted while the block stays
    2-connected; stream edges never join two isolated vertices.
    """

    rng = random.Random(seed)
    if isolated is None:
        isolated = rng.randint(0, max(0, min(2, n - 3)))
    core = n - isolated
    if core < 3:
        raise ValueError(f"A star instance needs a block of at least 3 vertices, got {core}")

    labels = _labels(n)
    block = nx.Graph()
    block.add_edges_from(sorted(stacked_triangulation(core, rng)))
    for u, v in sorted(block.edges()):
        if rng.random() < EDGE_DELETION_PROBABILITY:
            block.remove_edge(u, v)
            if not nx.is_biconnected(block):
                block.add_edge(u, v)

    backbone = {edge_key(u, v) for u, v in block.edges()}
    outside = set(labels[core:])
    stream = _sample_stream(
        labels, backbone, m, rng, allowed=lambda u, v: not (u in outside and v in outside)
    )
    return StreamedInstance(labels, frozenset(backbone), stream, omega)


def random_tree_instance(n: int, m: int, omega: int = 1, seed: int = DEFAULT_SEED) -> StreamedInstance:
    """Random recursive tree backbone with ``m`` stream edges sampled by rejection."""

    if n < 2:
        raise ValueError(f"A tree instance needs at least 2 vertices, got {n}")
    rng = random.Random(seed)
    labels = _labels(n)
    backbone = {edge_key(labels[k], labels[rng.randrange(k)]) for k in range(1, n)}
    free = n * (n - 1) // 2 - len(backbone)
    if m > free:
        raise ValueError(f"Cannot sample {m} stream edges, only {free} pairs are free.")

    chosen: dict[Edge, None] = {}
    while len(chosen) < m:
        u, v = rng.sample(labels, 2)
        edge = edge_key(u, v)
        if edge not in backbone and edge not in chosen:
            chosen[edge] = None
    return StreamedInstance(labels, frozenset(backbone), tuple(chosen), omega)
