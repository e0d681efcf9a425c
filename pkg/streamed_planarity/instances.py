"""Operations on streamed instances: validation, classification and splitting."""

from __future__ import annotations

from collections.abc import Callable, Iterable
import logging

from .config import ALL_ISOLATED, MULTI, SINGLE_NONTRIVIAL, STAR
from .errors import DisconnectedUnion, UnsupportedOmega
from .graph import Edge, Graph, blocks, contraction_label, edge_key, fresh_label, planarity_check
from .models import Classification, StreamedInstance, ValidationReport

logger = logging.getLogger(__name__)


def validate(i: StreamedInstance) -> ValidationReport:
    """Report every violated instance invariant."""

    violations: list[str] = []
    if i.omega < 1:
        violations.append(f"omega must be at least 1, got {i.omega}")

    declared = set(i.vertices)
    if len(declared) != len(i.vertices):
        violations.append("duplicate vertex labels")

    backbone_ok = True
    for u, v in sorted(i.backbone):
        if u == v:
            violations.append(f"backbone self-loop: ({u}, {v})")
            backbone_ok = False
        elif u not in declared or v not in declared:
            violations.append(f"backbone edge with undeclared endpoint: ({u}, {v})")
            backbone_ok = False

    seen: set[Edge] = set()
    for position, (u, v) in i.entries():
        if u == v:
            violations.append(f"stream self-loop at position {position}: ({u}, {v})")
        elif u not in declared or v not in declared:
            violations.append(f"stream edge with undeclared endpoint at position {position}: ({u}, {v})")
        if (u, v) in i.backbone:
            violations.append(f"stream edge in backbone at position {position}: ({u}, {v})")
        if (u, v) in seen:
            violations.append(f"duplicate stream edge at position {position}: ({u}, {v})")
        seen.add((u, v))

    if backbone_ok and len(declared) == len(i.vertices) and not planarity_check(i.backbone_graph):
        violations.append("backbone not planar")
    return ValidationReport(tuple(violations))


def union_graph(i: StreamedInstance) -> Graph:
    """Graph (V, S ∪ E)."""

    return Graph(i.vertices, i.backbone | frozenset(i.stream))


def conflict_pairs(i: StreamedInstance) -> frozenset[tuple[int, int]]:
    """Pairs of stream positions (p, q), p < q, that are alive together."""

    pairs: set[tuple[int, int]] = set()
    positions = i.positions
    for index, p in enumerate(positions):
        for q in positions[index + 1:]:
            if q - p >= i.omega:
                break
            pairs.add((p, q))
    return frozenset(pairs)


def isolated_isolated_edges(i: StreamedInstance) -> int:
    return sum(1 for u, v in i.stream if i.is_isolated(u) and i.is_isolated(v))


def shape_of(i: StreamedInstance) -> Classification:
    """Classification without the connected-union precondition."""

    graph = i.backbone_graph
    components = graph.nontrivial_components()
    block_count = blocks(graph).block_count
    iso_edges = isolated_isolated_edges(i)
    if not components:
        category = ALL_ISOLATED
    elif len(components) == 1 and block_count == 1:
        category = STAR if iso_edges == 0 else SINGLE_NONTRIVIAL
    else:
        category = MULTI
    return Classification(
        category=category,
        nontrivial_components=len(components),
        block_count=block_count,
        isolated_isolated_edges=iso_edges,
        isolated_count=len(i.isolated_vertices),
    )


def classify(i: StreamedInstance) -> Classification:
    """Place an instance with connected union graph into its algorithmic case."""

    if not union_graph(i).is_connected():
        raise DisconnectedUnion("classify requires a connected union graph.")
    return shape_of(i)


def remap_stream(
    entries: Iterable[tuple[int, Edge]],
    image: Callable[[str], str],
) -> tuple[tuple[Edge, ...], tuple[int, ...]]:
    """Relabel stream endpoints, dropping loops and keeping the earliest parallel edge."""

    kept: dict[Edge, int] = {}
    for position, (u, v) in entries:
        a, b = image(u), image(v)
        if a == b:
            continue
        key = edge_key(a, b)
        if key not in kept:
            kept[key] = position
    ordered = sorted(kept.items(), key=lambda item: item[1])
    return tuple(edge for edge, _ in ordered), tuple(position for _, position in ordered)


def restrict(i: StreamedInstance, vertices: Iterable[str]) -> StreamedInstance:
    """Sub-instance induced by ``vertices`` with original positions."""

    keep = set(vertices)
    entries = [(p, e) for p, e in i.entries() if e[0] in keep and e[1] in keep]
    return StreamedInstance(
        vertices=tuple(v for v in i.vertices if v in keep),
        backbone=frozenset(e for e in i.backbone if e[0] in keep and e[1] in keep),
        stream=tuple(e for _, e in entries),
        omega=i.omega,
        positions=tuple(p for p, _ in entries),
    )


def union_components(i: StreamedInstance) -> list[StreamedInstance]:
    """One sub-instance per connected component of the union graph."""

    components = union_graph(i).connected_components()
    if len(components) <= 1:
        return [i]
    return [restrict(i, component) for component in components]


def split_connected(i: StreamedInstance) -> list[StreamedInstance]:
    """Split an ω=1 instance into one piece per non-trivial backbone component.

    In piece j every other non-trivial component is contracted to one vertex;
    isolated backbone vertices are kept everywhere.
    """

    if i.omega != 1:
        raise UnsupportedOmega(f"split_connected requires omega=1, got {i.omega}")
    if not union_graph(i).is_connected():
        raise DisconnectedUnion("split_connected requires a connected union graph.")

    components = i.backbone_graph.nontrivial_components()
    if len(components) <= 1:
        return [i]

    taken = set(i.vertices)
    labels: list[str] = []
    for component in components:
        label = fresh_label(contraction_label(component), taken)
        taken.add(label)
        labels.append(label)
    owner = {v: index for index, component in enumerate(components) for v in component}

    pieces: list[StreamedInstance] = []
    for index, component in enumerate(components):
        members = set(component)

        def image(v: str, index: int = index) -> str:
            j = owner.get(v)
            return v if j is None or j == index else labels[j]

        stream, positions = remap_stream(i.entries(), image)
        vertices = [v for v in i.vertices if v in members or v not in owner]
        vertices.extend(label for j, label in enumerate(labels) if j != index)
        pieces.append(
            StreamedInstance(
                vertices=tuple(vertices),
                backbone=frozenset(e for e in i.backbone if e[0] in members),
                stream=stream,
                omega=1,
                positions=positions,
            )
        )
    logger.debug("Split instance into %d single-component pieces", len(pieces))
    return pieces
