"""Reductions between streamed instances and sunflower SEFE."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import itertools
import logging

from .certify import disk_is_planar
from .config import DEFAULT_BUDGET, STAR
from .errors import ShapeViolation, UnsupportedInstance, WrongCategory
from .graph import Edge, FaceSet, Graph, canonical_faces, edge_key, enumerate_planar_rotations
from .instances import shape_of
from .models import SefeInstance, StreamedInstance

logger = logging.getLogger(__name__)


def subdivision_label(position: int, step: int) -> str:
    return f"d:{position}:{step}"


def star_to_sefe(i: StreamedInstance) -> SefeInstance:
    """Build the sunflower SEFE instance equivalent to a star instance.

    Every stream edge e at position p gets one isolated common vertex per
    time step it is alive. Graph k subdivides each edge alive at k through
    its vertex for k; the last graph ties each edge's vertices into a star.
    """

    shape = shape_of(i)
    if shape.category != STAR:
        raise WrongCategory(f"star_to_sefe needs a Star instance, got {shape.category}.")

    last = i.max_position
    vertices = list(i.vertices)
    graphs: list[set[Edge]] = [set() for _ in range(last + 1)]
    for position, (u, v) in i.entries():
        steps = range(position, min(position + i.omega, last + 1))
        for step in steps:
            d = subdivision_label(position, step)
            vertices.append(d)
            graphs[step - 1].add(edge_key(u, d))
            graphs[step - 1].add(edge_key(d, v))
            if step != position:
                graphs[last].add(edge_key(subdivision_label(position, position), d))

    logger.debug("Reduced %d stream edges to a SEFE instance with %d graphs", i.m, len(graphs))
    return SefeInstance(
        vertices=tuple(vertices),
        common_edges=i.backbone,
        graphs=tuple(frozenset(edges) for edges in graphs),
    )


def _sefe_clusters(s: SefeInstance, core: set[str]) -> dict[str, int]:
    """Map every vertex outside ``core`` to the id of its exclusive-edge cluster.

    Vertices without exclusive edges can sit in any face and get no cluster.
    """

    touched = {x for exclusive in s.graphs for edge in exclusive for x in edge}
    linked = Graph(
        tuple(v for v in s.vertices if v not in core and v in touched),
        frozenset(
            edge for exclusive in s.graphs for edge in exclusive
            if edge[0] not in core and edge[1] not in core
        ),
    )
    return {v: index for index, component in enumerate(linked.connected_components()) for v in component}


def _graph_fits(options: list[list[tuple[int, tuple]]], faces: FaceSet | None) -> bool:
    """Backtrack over per-edge (face, disk ends) options of one graph."""

    groups: dict[int, list[tuple]] = {}
    iterators: list[Iterator | None] = [None] * len(options)
    chosen: list[int | None] = [None] * len(options)
    if not options:
        return True
    iterators[0] = iter(options[0])
    depth = 0
    while depth >= 0:
        if depth == len(options):
            return True
        if chosen[depth] is not None:
            groups[chosen[depth]].pop()
            chosen[depth] = None
        advanced = False
        for face, ends in iterators[depth]:
            group = groups.setdefault(face, [])
            group.append(ends)
            boundary = len(faces[face]) if faces is not None else 0
            if disk_is_planar(boundary, group):
                chosen[depth] = face
                depth += 1
                if depth < len(options):
                    iterators[depth] = iter(options[depth])
                advanced = True
                break
            group.pop()
        if not advanced:
            iterators[depth] = None
            depth -= 1
    return False


def sefe_brute_check(s: SefeInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the sunflower SEFE instance has a solution.

    Tries every planar rotation of the non-trivial common component and every
    face for each cluster of other vertices, then checks each graph's
    exclusive edges face by face with disk graphs.
    """

    components = s.common_graph.nontrivial_components()
    if len(components) > 1:
        raise UnsupportedInstance("sefe_brute_check needs at most one non-trivial common component.")
    core = set(components[0]) if components else set()
    cluster_of = _sefe_clusters(s, core)
    cluster_count = len(set(cluster_of.values()))

    if core:
        beta = s.common_graph.subgraph(core)
        rotations: Iterator = enumerate_planar_rotations(beta, budget)
    else:
        rotations = iter([None])

    for rotation in rotations:
        faces = canonical_faces(rotation) if rotation is not None else None
        face_count = len(faces) if faces is not None else 1

        candidates: list[set[int]] = [set(range(face_count)) for _ in range(cluster_count)]
        if faces is not None:
            for exclusive in s.graphs:
                for u, v in exclusive:
                    for inside, outside in ((u, v), (v, u)):
                        if inside in core and outside in cluster_of:
                            candidates[cluster_of[outside]] &= set(faces.faces_containing(inside))
        if any(not options for options in candidates):
            continue

        for placement in itertools.product(*(sorted(c) for c in candidates)):
            if all(_graph_fits(_edge_options(exclusive, faces, core, cluster_of, placement), faces)
                   for exclusive in s.graphs):
                return True
    return False


def _edge_options(
    exclusive: frozenset[Edge],
    faces: FaceSet | None,
    core: set[str],
    cluster_of: dict[str, int],
    placement: tuple[int, ...],
) -> list[list[tuple[int, tuple]]]:
    options: list[list[tuple[int, tuple]]] = []
    for edge in sorted(exclusive):
        fixed = {placement[cluster_of[x]] for x in edge if x not in core}
        if faces is None:
            options.append([(0, edge)])
            continue
        if fixed:
            candidate_faces = sorted(fixed) if len(fixed) == 1 else []
        else:
            shared = set(faces.faces_containing(edge[0])) & set(faces.faces_containing(edge[1]))
            candidate_faces = sorted(shared)
        edge_options = []
        for face in candidate_faces:
            ends = [faces.occurrences(face, x) if x in core else (x,) for x in edge]
            edge_options.extend((face, pair) for pair in itertools.product(*ends))
        options.append(edge_options)
    return options


@dataclass(frozen=True)
class Theorem1Gadget:
    """A generated hard instance plus the facts the construction promises."""

    instance: StreamedInstance
    rho: str
    pair_edges: tuple[Edge, ...]
    sentinel_edges: tuple[Edge, ...]
    expected_vertex_count: int

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "pair_edges": [list(edge) for edge in self.pair_edges],
            "sentinel_edges": [list(edge) for edge in self.sentinel_edges],
            "expected_vertex_count": self.expected_vertex_count,
        }


def _check_gadget_shape(s: SefeInstance, omega: int) -> Graph:
    if omega < 2:
        raise ShapeViolation(f"The gadget needs omega >= 2, got {omega}.")
    if s.k != 3:
        raise ShapeViolation(f"The gadget needs exactly 3 graphs, got {s.k}.")
    tree = s.common_graph
    if not tree.is_connected() or tree.m != tree.n - 1:
        raise ShapeViolation("The common graph must be a tree.")
    if not any(tree.degree(v) >= 2 for v in tree.vertices):
        raise ShapeViolation("The common tree needs an internal vertex.")
    reserved = sorted(v for v in tree.vertices if v.startswith("s:") or "^" in v)
    if reserved:
        raise ShapeViolation(f"Vertex label '{reserved[0]}' collides with generated gadget labels.")

    seen: set[Edge] = set()
    for index, exclusive in enumerate(s.graphs, start=1):
        if exclusive & seen:
            raise ShapeViolation(f"Graph {index} shares an exclusive edge with an earlier graph.")
        seen |= exclusive
        endpoints = [x for edge in exclusive for x in edge]
        if len(endpoints) != len(set(endpoints)):
            raise ShapeViolation(f"Exclusive edges of graph {index} are not a matching.")
        for x in endpoints:
            if tree.degree(x) != 1:
                raise ShapeViolation(f"Exclusive edge endpoint '{x}' of graph {index} is not a leaf.")
    return tree


def theorem1_generate(s: SefeInstance, omega: int = 2) -> Theorem1Gadget:
    """Build a tree-backbone streamed instance that is positive iff ``s`` has a SEFE."""

    tree = _check_gadget_shape(s, omega)
    rho = min(v for v in tree.vertices if tree.degree(v) >= 2)

    vertices = list(tree.vertices)
    backbone = set(tree.edges)
    stream: list[Edge] = []
    pair_edges: list[Edge] = []
    sentinel_edges: list[Edge] = []
    sentinel_count = 0

    def leaf(center: str, slot: int, edge: Edge) -> str:
        return f"{center}^{slot}:{edge[0]}-{edge[1]}"

    def sentinel_edge() -> Edge:
        nonlocal sentinel_count
        pair = []
        for _ in range(2):
            sentinel_count += 1
            label = f"s:{sentinel_count}"
            vertices.append(label)
            backbone.add(edge_key(rho, label))
            pair.append(label)
        edge = edge_key(pair[0], pair[1])
        sentinel_edges.append(edge)
        return edge

    # sentinel leaves s:1..s:6 first so the padding numbers follow them
    main_sentinels = [sentinel_edge() for _ in range(3)]
    for index, exclusive in enumerate(s.graphs):
        edges = sorted(exclusive)
        q = len(edges) - 1
        for edge in edges:
            for center in edge:
                for slot in range(1, q + 1):
                    label = leaf(center, slot, edge)
                    vertices.append(label)
                    backbone.add(edge_key(center, label))

        slots = {edge: 0 for edge in edges}
        for l, m in itertools.combinations(edges, 2):
            for edge in (l, m):
                slots[edge] += 1
                pair = edge_key(leaf(edge[0], slots[edge], edge), leaf(edge[1], slots[edge], edge))
                pair_edges.append(pair)
                stream.append(pair)
        stream.append(main_sentinels[index])
        if index < 2:
            stream.extend(sentinel_edge() for _ in range(omega - 2))

    expected = tree.n + sum(2 * len(g) * (len(g) - 1) for g in s.graphs) + sentinel_count
    instance = StreamedInstance(
        vertices=tuple(vertices),
        backbone=frozenset(backbone),
        stream=tuple(stream),
        omega=omega,
    )
    logger.debug("Generated gadget with %d vertices and %d stream edges", instance.n, instance.m)
    return Theorem1Gadget(
        instance=instance,
        rho=rho,
        pair_edges=tuple(pair_edges),
        sentinel_edges=tuple(sentinel_edges),
        expected_vertex_count=expected,
    )
