"""Certificate checking by per-time-step disk-graph planarity.

For every time step t and face f the checker builds the disk graph: the
facial walk of f as a cycle (one node per walk occurrence), an apex joined
to every occurrence so the boundary order is pinned, and the stream edges
alive at t that are assigned to f. Isolated vertices are interior nodes.
The drawing exists iff every disk graph is planar.

With several non-trivial components a face may host other components, and
its region is bounded by several walks. Parts of the alive graph that join
two of those walks are tested on explicit rotation systems instead.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
import itertools
import logging

import networkx as nx

from .errors import FaceIdOutOfRange, MalformedCertificate, WrongCategory
from .graph import FaceSet, Graph, RotationSystem, canonical_faces, is_planar_rotation
from .models import CheckReport, DrawingCertificate, Piece, StreamedInstance

logger = logging.getLogger(__name__)

DiskNode = Hashable
_APEX = ("apex",)


def _chords_cross(chords: list[tuple[int, int]]) -> bool:
    spans = sorted({(min(a, b), max(a, b)) for a, b in chords if a != b})
    for index, (a, b) in enumerate(spans):
        for c, d in spans[index + 1:]:
            if c >= b:
                break
            if a < c < b < d:
                return True
    return False


def _reduce_interior(edges: list[tuple[DiskNode, DiskNode]]) -> list[tuple[DiskNode, DiskNode]]:
    """Drop interior vertices of degree <= 1 and suppress those of degree 2."""

    live: dict[int, tuple[DiskNode, DiskNode]] = {}
    incident: dict[DiskNode, set[int]] = defaultdict(set)
    for a, b in edges:
        if a == b:
            continue
        edge_id = len(live)
        live[edge_id] = (a, b)
        for x in (a, b):
            if not isinstance(x, int):
                incident[x].add(edge_id)
    next_id = len(live)

    stack = [x for x, ids in incident.items() if len(ids) <= 2]
    while stack:
        x = stack.pop()
        ids = incident.get(x)
        if ids is None or len(ids) > 2:
            continue
        if len(ids) == 2:
            first, second = sorted(ids)
            y1 = _other_end(live[first], x)
            y2 = _other_end(live[second], x)
            for edge_id in (first, second):
                _drop_edge(edge_id, live, incident)
            if y1 != y2:
                live[next_id] = (y1, y2)
                for y in (y1, y2):
                    if not isinstance(y, int):
                        incident[y].add(next_id)
                next_id += 1
            elif not isinstance(y1, int):
                stack.append(y1)
        elif len(ids) == 1:
            (edge_id,) = ids
            y = _other_end(live[edge_id], x)
            _drop_edge(edge_id, live, incident)
            if not isinstance(y, int):
                stack.append(y)
        del incident[x]
    return list(live.values())


def _other_end(edge: tuple[DiskNode, DiskNode], x: DiskNode) -> DiskNode:
    return edge[1] if edge[0] == x else edge[0]


def _drop_edge(edge_id: int, live: dict, incident: dict) -> None:
    a, b = live.pop(edge_id)
    for x in (a, b):
        if not isinstance(x, int) and x in incident:
            incident[x].discard(edge_id)


def disk_is_planar(boundary_size: int, edges: Iterable[tuple[DiskNode, DiskNode]]) -> bool:
    """Planarity of a disk graph.

    Integer nodes 0..boundary_size-1 are walk occurrences in walk order; any
    other hashable node is an interior vertex.
    """

    reduced = _reduce_interior(list(edges))
    if not reduced:
        return True
    if all(isinstance(a, int) and isinstance(b, int) for a, b in reduced):
        return not _chords_cross(reduced)

    disk = nx.Graph()
    if boundary_size >= 2:
        disk.add_edges_from((k, (k + 1) % boundary_size) for k in range(boundary_size))
    if boundary_size >= 1:
        disk.add_edges_from((_APEX, k) for k in range(boundary_size))
    disk.add_edges_from((a, b) for a, b in reduced)
    is_planar, _ = nx.check_planarity(disk)
    return bool(is_planar)


def _attachment_name(x: DiskNode) -> str:
    return f"w{x[0]}.{x[1]}" if isinstance(x, tuple) else f"i.{x}"


def _joined_walks_are_planar(walk_lengths: Mapping[int, int], edges: list[tuple[DiskNode, DiskNode]]) -> bool:
    """Try every edge order at attachments and interior vertices; the region lies after ``prev``."""

    edges = [tuple(pair) for pair in {frozenset((a, b)) for a, b in edges if a != b}]
    fixed: dict[str, tuple[str, ...]] = {}
    edge_count = len(edges)
    for face, size in walk_lengths.items():
        for k in range(size):
            fixed[f"m{face}.{k}"] = (f"w{face}.{k}", f"w{face}.{(k + 1) % size}")
        edge_count += 2 * size

    attached: dict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        attached[_attachment_name(a)].append(_attachment_name(b))
        attached[_attachment_name(b)].append(_attachment_name(a))

    choices: list[tuple[str, list[tuple[str, ...]]]] = []
    for face, size in walk_lengths.items():
        for k in range(size):
            node = f"w{face}.{k}"
            prev, nxt = f"m{face}.{(k - 1) % size}", f"m{face}.{k}"
            inserted = sorted(attached.get(node, ()))
            choices.append((node, [(prev, *order, nxt) for order in itertools.permutations(inserted)]))
    for node, nbrs in attached.items():
        if node.startswith("i."):
            first, *rest = sorted(nbrs)
            choices.append((node, [(first, *order) for order in itertools.permutations(rest)]))

    target = 2 - (len(fixed) + len(choices)) + edge_count
    names = [node for node, _ in choices]
    for combo in itertools.product(*(options for _, options in choices)):
        rotation = RotationSystem({**fixed, **dict(zip(names, combo))})
        if len(canonical_faces(rotation)) == target:
            return True
    return False


def holed_region_is_planar(walk_lengths: Mapping[int, int], edges: Iterable[tuple[DiskNode, DiskNode]]) -> bool:
    """Planarity of a region bounded by several facial walks.

    Attachment nodes are (face, position) pairs on the walks of
    ``walk_lengths``; any other hashable node is an interior vertex. A part
    of the alive graph touching at most one walk gets the disk test. A part
    joining several walks is decided on rotation systems with every walk
    traversed with the region on the same side.
    """

    edges = list(edges)

    def part_of(x: DiskNode) -> tuple[str, DiskNode]:
        return ("walk", x[0]) if isinstance(x, tuple) else ("inner", x)

    parts = nx.Graph()
    parts.add_nodes_from(("walk", face) for face in walk_lengths)
    parts.add_edges_from((part_of(a), part_of(b)) for a, b in edges)
    for part in nx.connected_components(parts):
        local = [(a, b) for a, b in edges if part_of(a) in part]
        if not local:
            continue
        walls = sorted(face for kind, face in part if kind == "walk")
        if len(walls) <= 1:
            size = walk_lengths[walls[0]] if walls else 0
            flat = [tuple(x[1] if isinstance(x, tuple) else x for x in edge) for edge in local]
            if not disk_is_planar(size, flat):
                return False
        elif not _joined_walks_are_planar({face: walk_lengths[face] for face in walls}, local):
            return False
    return True


def backbone_part(i: StreamedInstance) -> Graph | None:
    """The backbone without its isolated vertices, or None when it has no edges."""

    components = i.backbone_graph.nontrivial_components()
    if not components:
        return None
    return i.backbone_graph.subgraph(v for component in components for v in component)


def attach_point(faces: FaceSet, face_id: int, v: str, successor: str | None) -> int | None:
    """Walk position where ``v`` meets the face, or None if it is not on it."""

    occurrences = faces.occurrences(face_id, v)
    if not occurrences:
        return None
    if successor is not None:
        return faces.position_of(face_id, (v, successor))
    if len(occurrences) == 1:
        return occurrences[0]
    raise MalformedCertificate(
        f"Vertex '{v}' occurs {len(occurrences)} times on face {face_id}; a corner is required."
    )


@dataclass(frozen=True)
class Regions:
    """Faces of a backbone drawing grouped into the regions stream edges live in.

    A region is named by a face that is not the outer face of a nested
    component. Its boundary is that face's walk followed by the outer walks
    of the components it hosts.
    """

    faces: FaceSet
    holes: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    @classmethod
    def from_nesting(cls, faces: FaceSet, nesting: Mapping[str, tuple[int, int]]) -> "Regions":
        holes: dict[int, list[int]] = defaultdict(list)
        for host, outer in nesting.values():
            holes[host].append(outer)
        return cls(faces, {host: tuple(sorted(outers)) for host, outers in holes.items()})

    @cached_property
    def _region_of(self) -> dict[int, int]:
        region_of = {face: face for face in range(len(self.faces))}
        for host, outers in self.holes.items():
            for outer in outers:
                region_of[outer] = host
        return region_of

    @cached_property
    def primaries(self) -> tuple[int, ...]:
        return tuple(face for face, region in self._region_of.items() if face == region)

    def is_outer(self, face: int) -> bool:
        return self._region_of[face] != face

    def walks(self, region: int) -> tuple[int, ...]:
        return (region, *self.holes.get(region, ()))

    def regions_containing(self, v: str) -> tuple[int, ...]:
        return tuple(sorted({self._region_of[face] for face in self.faces.faces_containing(v)}))

    def occurrences(self, region: int, v: str) -> tuple[tuple[int, int], ...]:
        return tuple((face, k) for face in self.walks(region) for k in self.faces.occurrences(face, v))

    def attach(self, region: int, v: str, successor: str | None) -> tuple[int, int] | None:
        """Walk and position where ``v`` meets the region's boundary, or None."""

        for face in self.walks(region):
            point = attach_point(self.faces, face, v, successor)
            if point is not None:
                return face, point
        return None

    def is_planar(self, region: int, edges: Iterable[tuple[DiskNode, DiskNode]]) -> bool:
        walks = self.walks(region)
        if len(walks) == 1:
            flat = (tuple(x[1] if isinstance(x, tuple) else x for x in edge) for edge in edges)
            return disk_is_planar(len(self.faces[region]), flat)
        return holed_region_is_planar({face: len(self.faces[face]) for face in walks}, edges)


def _check_nesting(beta: Graph, faces: FaceSet, nesting: Mapping[str, tuple[int, int]]) -> None:
    components = beta.nontrivial_components()
    expected = {component[0] for component in components[1:]}
    if set(nesting) != expected:
        raise MalformedCertificate(
            f"Nesting must name components {sorted(expected)}, got {sorted(nesting)}."
        )
    owner_of = {v: index for index, component in enumerate(components) for v in component}
    owners = [owner_of[walk[0][0]] for walk in faces]
    parent: dict[int, int] = {}
    for label, (host, outer) in nesting.items():
        for face in (host, outer):
            if not 0 <= face < len(faces):
                raise FaceIdOutOfRange(f"Face id {face} in nesting of '{label}' is outside 0..{len(faces) - 1}.")
        index = owner_of[label]
        if owners[outer] != index:
            raise MalformedCertificate(f"Outer face {outer} of '{label}' belongs to another component.")
        if owners[host] == index:
            raise MalformedCertificate(f"Component '{label}' cannot be hosted by its own face {host}.")
        parent[index] = owners[host]
    outer_faces = {outer for _, outer in nesting.values()}
    for label, (host, _) in nesting.items():
        if host in outer_faces:
            raise MalformedCertificate(f"Host face {host} of '{label}' is the outer face of another component.")
    for start in parent:
        index = start
        for _ in range(len(parent) + 1):
            if index == 0:
                break
            index = parent[index]
        if index != 0:
            raise MalformedCertificate("Nesting contains a cycle of components hosting each other.")


def _check_structure(
    i: StreamedInstance,
    c: DrawingCertificate,
    beta: Graph | None,
    faces: FaceSet | None,
) -> None:
    if beta is None:
        if c.rotation.rotation:
            raise MalformedCertificate("Rotation must be empty when the backbone has no edges.")
        if c.nesting:
            raise MalformedCertificate("Nesting must be empty when the backbone has no edges.")
    else:
        rotation_graph = c.rotation.graph()
        if set(rotation_graph.vertices) != set(beta.vertices) or rotation_graph.edges != beta.edges:
            raise MalformedCertificate("Rotation does not match the backbone's non-trivial components.")

    expected_stream = set(i.positions)
    missing = sorted(expected_stream - set(c.stream_faces))
    extra = sorted(set(c.stream_faces) - expected_stream)
    if missing or extra:
        raise MalformedCertificate(f"Stream assignment mismatch: missing {missing}, unexpected {extra}.")
    expected_vertices = set(i.isolated_vertices)
    missing_v = sorted(expected_vertices - set(c.vertex_faces))
    extra_v = sorted(set(c.vertex_faces) - expected_vertices)
    if missing_v or extra_v:
        raise MalformedCertificate(f"Vertex assignment mismatch: missing {missing_v}, unexpected {extra_v}.")
    unknown_corners = sorted(set(c.corners) - expected_stream)
    if unknown_corners:
        raise MalformedCertificate(f"Corners given for unknown stream positions {unknown_corners}.")

    face_count = len(faces) if faces is not None else 1
    for key, face in [*c.stream_faces.items(), *c.vertex_faces.items()]:
        if not 0 <= face < face_count:
            raise FaceIdOutOfRange(f"Face id {face} for '{key}' is outside 0..{face_count - 1}.")
    if beta is not None:
        _check_nesting(beta, faces, c.nesting)


def check_certificate(i: StreamedInstance, c: DrawingCertificate) -> CheckReport:
    """Check a drawing certificate against an instance, one time step at a time."""

    beta = backbone_part(i)
    faces = canonical_faces(c.rotation) if beta is not None else None
    _check_structure(i, c, beta, faces)

    if beta is not None and not is_planar_rotation(c.rotation):
        return CheckReport.reject("rotation", "The rotation system is not planar.")
    regions = Regions.from_nesting(faces, c.nesting) if faces is not None else None
    if regions is not None:
        for key, face in [*c.stream_faces.items(), *c.vertex_faces.items()]:
            if regions.is_outer(face):
                raise MalformedCertificate(
                    f"Face {face} for '{key}' is the outer face of a nested component; "
                    "assign the face hosting it instead."
                )

    nodes: dict[int, tuple[DiskNode, DiskNode]] = {}
    for position, (u, v) in i.entries():
        face = c.stream_faces[position]
        corner = c.corners.get(position, (None, None))
        pair: list[DiskNode] = []
        for endpoint, successor in zip((u, v), corner):
            if i.is_isolated(endpoint):
                if c.vertex_faces[endpoint] != face:
                    return CheckReport.reject(
                        "incidence",
                        f"Stream edge {position} lies in face {face} but '{endpoint}' is in face "
                        f"{c.vertex_faces[endpoint]}.",
                        face=face,
                        edges=(position,),
                    )
                pair.append(endpoint)
                continue
            point = regions.attach(face, endpoint, successor) if regions is not None else None
            if point is None:
                return CheckReport.reject(
                    "incidence",
                    f"Endpoint '{endpoint}' of stream edge {position} is not on face {face}.",
                    face=face,
                    edges=(position,),
                )
            pair.append(point)
        nodes[position] = (pair[0], pair[1])

    for t in i.positions:
        by_face: dict[int, list[int]] = defaultdict(list)
        for position in i.alive_positions(t):
            by_face[c.stream_faces[position]].append(position)
        for face in sorted(by_face):
            group = by_face[face]
            if len(group) < 2:
                continue
            alive = [nodes[p] for p in group]
            drawable = regions.is_planar(face, alive) if regions is not None else disk_is_planar(0, alive)
            if not drawable:
                logger.debug("Region of face %d fails at time %d", face, t)
                return CheckReport.reject(
                    "planarity",
                    f"Alive edges {group} cannot be drawn inside face {face} at time step {t}.",
                    time_step=t,
                    face=face,
                    edges=tuple(group),
                )
    return CheckReport.accept()


def certificate_of_trivial(i: StreamedInstance) -> DrawingCertificate:
    """Certificate for an instance whose backbone has no edges: everything in the sole face."""

    if i.backbone:
        raise WrongCategory("certificate_of_trivial requires an all-isolated backbone.")
    return DrawingCertificate(
        rotation=RotationSystem.empty(),
        stream_faces={position: 0 for position in i.positions},
        vertex_faces={v: 0 for v in i.isolated_vertices},
    )


def check_pieces(pieces: Iterable[Piece]) -> list[CheckReport]:
    """Check every piece of a composite witness against its own instance."""

    reports = []
    for piece in pieces:
        if piece.certificate is None:
            reports.append(CheckReport.reject("missing", "Piece carries no certificate."))
        else:
            reports.append(check_certificate(piece.instance, piece.certificate))
    return reports
