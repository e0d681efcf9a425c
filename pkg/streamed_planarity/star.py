"""Certificate search and the star-instance solver.

The search works on any instance. When the backbone has a single non-trivial
component the instance is simplified before rotations are enumerated:
isolated vertices without stream edges are dropped, backbone leaves without
stream edges are pruned, and "ears" (a stream edge between two backbone leaves
hanging from the same vertex, neither of which has another stream edge) are
cut off. A certificate found for the simplified instance is lifted back.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import heapq
import itertools
import logging

from .certify import Regions, backbone_part, certificate_of_trivial, check_certificate, disk_is_planar
from .config import ALL_ISOLATED, DEFAULT_BUDGET, STAR
from .errors import WrongCategory
from .graph import (
    Dart,
    Edge,
    FaceSet,
    Nesting,
    RotationSystem,
    canonical_faces,
    planar_arrangements,
    planar_rotations_with_faces,
)
from .instances import shape_of
from .models import Decision, DrawingCertificate, Piece, StreamedInstance, TraceEntry

logger = logging.getLogger(__name__)

DiskEnd = tuple[int, int] | str


@dataclass(frozen=True)
class Reduction:
    """One simplification step, undone in reverse order when lifting."""

    kind: str
    removed: tuple[str, ...]
    hub: str
    position: int | None = None


def simplify(i: StreamedInstance) -> tuple[StreamedInstance, tuple[Reduction, ...]]:
    """Shrink ``i`` without changing its answer; the non-trivial part keeps an edge."""

    if not i.backbone:
        return i, ()

    adjacency: dict[str, set[str]] = {v: set() for v in i.vertices}
    for u, v in i.backbone:
        adjacency[u].add(v)
        adjacency[v].add(u)
    stream_degree: dict[str, int] = {v: 0 for v in i.vertices}
    for u, v in i.stream:
        stream_degree[u] += 1
        stream_degree[v] += 1
    live_stream: dict[int, Edge] = dict(i.entries())
    edge_count = len(i.backbone)
    reductions: list[Reduction] = []

    def is_free_leaf(v: str) -> bool:
        return len(adjacency[v]) == 1 and stream_degree[v] == 0

    candidates = [v for v in sorted(adjacency) if is_free_leaf(v)]
    heapq.heapify(candidates)
    changed = True
    while changed:
        changed = False
        while candidates and edge_count >= 2:
            leaf = heapq.heappop(candidates)
            if leaf not in adjacency or not is_free_leaf(leaf):
                continue
            (hub,) = adjacency[leaf]
            adjacency[hub].discard(leaf)
            del adjacency[leaf]
            edge_count -= 1
            reductions.append(Reduction("leaf", (leaf,), hub))
            changed = True
            if is_free_leaf(hub):
                heapq.heappush(candidates, hub)

        for position in sorted(live_stream):
            if edge_count < 3:
                break
            a, b = live_stream[position]
            if a not in adjacency or b not in adjacency:
                continue
            if len(adjacency[a]) != 1 or len(adjacency[b]) != 1 or adjacency[a] != adjacency[b]:
                continue
            if stream_degree[a] != 1 or stream_degree[b] != 1:
                continue
            (hub,) = adjacency[a]
            for leaf in (a, b):
                adjacency[hub].discard(leaf)
                del adjacency[leaf]
            del live_stream[position]
            edge_count -= 2
            reductions.append(Reduction("ear", (a, b), hub, position))
            changed = True
            if is_free_leaf(hub):
                heapq.heappush(candidates, hub)

    if not reductions and all(stream_degree[v] for v in i.isolated_vertices):
        return i, ()

    keep = {
        v for v in i.vertices
        if (v in adjacency and adjacency[v]) or (i.is_isolated(v) and stream_degree[v] > 0)
    }
    entries = sorted(live_stream.items())
    reduced = StreamedInstance(
        vertices=tuple(v for v in i.vertices if v in keep),
        backbone=frozenset(e for e in i.backbone if e[0] in keep and e[1] in keep),
        stream=tuple(e for _, e in entries),
        omega=i.omega,
        positions=tuple(p for p, _ in entries),
    )
    logger.debug(
        "Simplified instance from %d to %d vertices with %d reductions",
        i.n, reduced.n, len(reductions),
    )
    return reduced, tuple(reductions)


@dataclass
class _Assignment:
    stream_faces: dict[int, int]
    ends: dict[int, tuple[DiskEnd, DiskEnd]]
    vertex_faces: dict[str, int]


def _edge_options(
    i: StreamedInstance,
    regions: Regions | None,
    edge: Edge,
    vertex_faces: dict[str, int],
) -> Iterator[tuple[int, tuple[DiskEnd, DiskEnd]]]:
    fixed: int | None = None
    for x in edge:
        if i.is_isolated(x) and x in vertex_faces:
            if fixed is not None and fixed != vertex_faces[x]:
                return
            fixed = vertex_faces[x]

    if regions is None:
        yield 0, edge
        return

    beta_ends = [x for x in edge if not i.is_isolated(x)]
    if fixed is not None:
        candidates: list[int] = [fixed]
    elif beta_ends:
        shared = set(regions.regions_containing(beta_ends[0]))
        for x in beta_ends[1:]:
            shared &= set(regions.regions_containing(x))
        candidates = sorted(shared)
    else:
        candidates = list(regions.primaries)

    for region in candidates:
        choices = [
            regions.occurrences(region, x) if not i.is_isolated(x) else (x,)
            for x in edge
        ]
        if not all(choices):
            continue
        for first, second in itertools.product(*choices):
            yield region, (first, second)


def _assign_faces(i: StreamedInstance, regions: Regions | None) -> _Assignment | None:
    """Backtrack over stream edges in position order; None if nothing fits."""

    entries = i.entries()
    state = _Assignment({}, {}, {})
    if not entries:
        return state

    def fits(position: int) -> bool:
        region = state.stream_faces[position]
        group = [p for p in i.alive_positions(position) if state.stream_faces.get(p) == region]
        if len(group) < 2:
            return True
        ends = (state.ends[p] for p in group)
        return regions.is_planar(region, ends) if regions is not None else disk_is_planar(0, ends)

    options: list[Iterator | None] = [None] * len(entries)
    undo: list[list[str] | None] = [None] * len(entries)
    options[0] = _edge_options(i, regions, entries[0][1], state.vertex_faces)
    depth = 0
    while depth >= 0:
        if depth == len(entries):
            return state
        position, edge = entries[depth]
        if undo[depth] is not None:
            for q in undo[depth]:
                del state.vertex_faces[q]
            del state.stream_faces[position]
            del state.ends[position]
            undo[depth] = None

        advanced = False
        for face, ends in options[depth]:
            newly = [x for x in edge if i.is_isolated(x) and x not in state.vertex_faces]
            for q in newly:
                state.vertex_faces[q] = face
            state.stream_faces[position] = face
            state.ends[position] = ends
            undo[depth] = newly
            if fits(position):
                depth += 1
                if depth < len(entries):
                    options[depth] = _edge_options(i, regions, entries[depth][1], state.vertex_faces)
                advanced = True
                break
            for q in newly:
                del state.vertex_faces[q]
            del state.stream_faces[position]
            del state.ends[position]
            undo[depth] = None
        if not advanced:
            options[depth] = None
            depth -= 1
    return None


def _lift(
    original: StreamedInstance,
    reductions: tuple[Reduction, ...],
    rotation: RotationSystem,
    faces: FaceSet,
    found: _Assignment,
    nesting: Nesting,
) -> DrawingCertificate:
    stream_darts: dict[int, tuple[Dart, tuple[Dart | None, Dart | None]]] = {}
    for position, region in found.stream_faces.items():
        corner_darts = tuple(
            faces[end[0]][end[1]] if isinstance(end, tuple) else None for end in found.ends[position]
        )
        stream_darts[position] = (faces[region][0], corner_darts)
    vertex_darts = {q: faces[face][0] for q, face in found.vertex_faces.items()}
    nesting_darts = {label: (faces[host][0], faces[outer][0]) for label, (host, outer) in nesting.items()}

    for step in reversed(reductions):
        first = rotation.rotation[step.hub][0]
        if step.kind == "leaf":
            rotation = rotation.insert_after(step.hub, first, step.removed[0])
        else:
            a, b = step.removed
            rotation = rotation.insert_after(step.hub, first, a)
            rotation = rotation.insert_after(step.hub, a, b)
            stream_darts[step.position] = ((a, step.hub), ((a, step.hub), (b, step.hub)))

    lifted = canonical_faces(rotation)
    stream_faces: dict[int, int] = {}
    corners: dict[int, tuple[str | None, str | None]] = {}
    for position, (anchor, corner_darts) in stream_darts.items():
        stream_faces[position] = lifted.face_of[anchor]
        if any(
            dart is not None and len(lifted.occurrences(lifted.face_of[dart], dart[0])) > 1
            for dart in corner_darts
        ):
            corners[position] = tuple(dart[1] if dart is not None else None for dart in corner_darts)
    vertex_faces = {
        q: lifted.face_of[vertex_darts[q]] if q in vertex_darts else 0 for q in original.isolated_vertices
    }
    lifted_nesting = {
        label: (lifted.face_of[host], lifted.face_of[outer]) for label, (host, outer) in nesting_darts.items()
    }
    return DrawingCertificate(rotation, stream_faces, vertex_faces, corners, lifted_nesting)


def search_certificate(
    i: StreamedInstance,
    budget: int = DEFAULT_BUDGET,
    reduce_first: bool = True,
) -> DrawingCertificate | None:
    """First accepted certificate in enumeration order, or None.

    A backbone with one non-trivial component is simplified first and its
    planar rotations are tried in order. With several components every
    rotation of each is combined with every way of nesting them inside each
    other's faces; no simplification is applied.
    """

    beta = backbone_part(i)
    if beta is None:
        certificate = certificate_of_trivial(i)
        return certificate if check_certificate(i, certificate).accepted else None

    if len(beta.nontrivial_components()) > 1:
        logger.debug("Searching arrangements of %d components", len(beta.nontrivial_components()))
        for rotation, faces, nesting in planar_arrangements(beta, budget):
            found = _assign_faces(i, Regions.from_nesting(faces, nesting))
            if found is not None:
                return _lift(i, (), rotation, faces, found, nesting)
        return None

    reduced, reductions = simplify(i) if reduce_first else (i, ())
    for rotation, faces in planar_rotations_with_faces(backbone_part(reduced), budget):
        found = _assign_faces(reduced, Regions(faces))
        if found is not None:
            return _lift(i, reductions, rotation, faces, found, {})
    return None


def solve_star(i: StreamedInstance, budget: int = DEFAULT_BUDGET) -> Decision:
    """Decide a star instance (or an all-isolated one) by embedding enumeration."""

    shape = shape_of(i)
    if shape.category not in (STAR, ALL_ISOLATED):
        raise WrongCategory(f"solve_star needs a Star instance, got {shape.category}.")

    if shape.category == ALL_ISOLATED:
        certificate: DrawingCertificate | None = certificate_of_trivial(i)
        if not check_certificate(i, certificate).accepted:
            certificate = None
        rule = "Base1"
    else:
        certificate = search_certificate(i, budget)
        rule = "Star"

    answer = certificate is not None
    logger.debug("%s decided %s on %d vertices, %d stream edges", rule, answer, i.n, i.m)
    return Decision(
        answer=answer,
        witness=certificate,
        pieces=(Piece(i, certificate),) if answer else (),
        trace=(TraceEntry(rule, 0, shape.measure, "yes" if answer else "no"),),
    )
