"""Core data models: streamed instances, certificates, decisions and SEFE instances."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
import logging
from typing import Any

from .errors import InstanceFormatError, MalformedCertificate
from .graph import Edge, Graph, RotationSystem, edge_key

logger = logging.getLogger(__name__)


def _edge_pair(item: Any, where: str) -> Edge:
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise InstanceFormatError(f"{where}: expected a pair of vertex labels, got {item!r}")
    u, v = item
    if not isinstance(u, str) or not isinstance(v, str):
        raise InstanceFormatError(f"{where}: vertex labels must be strings, got {item!r}")
    return edge_key(u, v)


def _require_keys(data: Any, keys: Iterable[str], what: str) -> None:
    if not isinstance(data, dict):
        raise InstanceFormatError(f"Invalid {what}: expected a JSON object.")
    missing = [key for key in keys if key not in data]
    if missing:
        raise InstanceFormatError(f"Invalid {what}: missing {', '.join(missing)}.")


@dataclass(frozen=True)
class StreamedInstance:
    """Backbone graph, ordered stream of edges and window size.

    ``positions`` holds Ψ for each stream edge. It defaults to 1..m; pieces
    cut out of a larger instance keep their original positions.
    """

    vertices: tuple[str, ...]
    backbone: frozenset[Edge]
    stream: tuple[Edge, ...]
    omega: int
    positions: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "backbone", frozenset(edge_key(u, v) for u, v in self.backbone))
        object.__setattr__(self, "stream", tuple(edge_key(u, v) for u, v in self.stream))
        positions = tuple(self.positions) or tuple(range(1, len(self.stream) + 1))
        if len(positions) != len(self.stream):
            raise ValueError("positions must have one entry per stream edge.")
        if any(p < 1 for p in positions) or any(a >= b for a, b in zip(positions, positions[1:])):
            raise ValueError("positions must be strictly increasing positive integers.")
        object.__setattr__(self, "positions", positions)

    @property
    def m(self) -> int:
        return len(self.stream)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def has_default_positions(self) -> bool:
        return self.positions == tuple(range(1, self.m + 1))

    @property
    def max_position(self) -> int:
        return self.positions[-1] if self.positions else 0

    @cached_property
    def backbone_graph(self) -> Graph:
        return Graph(self.vertices, self.backbone)

    @cached_property
    def isolated_vertices(self) -> tuple[str, ...]:
        """𝒬: backbone vertices without backbone edges."""

        return self.backbone_graph.isolated_vertices

    @cached_property
    def _isolated_set(self) -> frozenset[str]:
        return frozenset(self.isolated_vertices)

    def is_isolated(self, v: str) -> bool:
        return v in self._isolated_set

    def entries(self) -> tuple[tuple[int, Edge], ...]:
        return tuple(zip(self.positions, self.stream))

    @cached_property
    def _position_index(self) -> dict[Edge, int]:
        return {edge: position for position, edge in zip(self.positions, self.stream)}

    def position_of(self, u: str, v: str) -> int:
        return self._position_index[edge_key(u, v)]

    @cached_property
    def _edge_by_position(self) -> dict[int, Edge]:
        return dict(zip(self.positions, self.stream))

    def edge_at(self, position: int) -> Edge:
        return self._edge_by_position[position]

    def alive_positions(self, t: int) -> tuple[int, ...]:
        """Positions p with 0 <= t - p < omega."""

        lo = bisect_left(self.positions, t - self.omega + 1)
        hi = bisect_right(self.positions, t)
        return self.positions[lo:hi]

    def alive_edges(self, t: int) -> tuple[Edge, ...]:
        """Stream edges of the alive graph at time ``t``."""

        return tuple(self._edge_by_position[p] for p in self.alive_positions(t))

    def with_omega(self, omega: int) -> "StreamedInstance":
        return StreamedInstance(self.vertices, self.backbone, self.stream, omega, self.positions)

    def to_dict(self) -> dict[str, Any]:
        """Return JSON-safe dictionary representation."""

        data: dict[str, Any] = {
            "omega": self.omega,
            "vertices": list(self.vertices),
            "backbone_edges": [list(edge) for edge in sorted(self.backbone)],
            "stream": [list(edge) for edge in self.stream],
        }
        if not self.has_default_positions:
            data["positions"] = list(self.positions)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StreamedInstance":
        """Build an instance from serialized data, checking the schema only."""

        _require_keys(data, ("omega", "vertices", "backbone_edges", "stream"), "instance")
        omega = data["omega"]
        if not isinstance(omega, int) or isinstance(omega, bool):
            raise InstanceFormatError("Invalid instance: omega must be an integer.")
        vertices = data["vertices"]
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise InstanceFormatError("Invalid instance: vertices must be a list of strings.")
        if not isinstance(data["backbone_edges"], list) or not isinstance(data["stream"], list):
            raise InstanceFormatError("Invalid instance: backbone_edges and stream must be lists.")
        backbone = [_edge_pair(item, "backbone_edges") for item in data["backbone_edges"]]
        stream = [_edge_pair(item, "stream") for item in data["stream"]]
        positions = data.get("positions", [])
        if not isinstance(positions, list) or not all(isinstance(p, int) for p in positions):
            raise InstanceFormatError("Invalid instance: positions must be a list of integers.")
        try:
            return cls(tuple(vertices), frozenset(backbone), tuple(stream), omega, tuple(positions))
        except ValueError as exc:
            raise InstanceFormatError(f"Invalid instance: {exc}") from exc


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of instance validation; violations are plain messages."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Classification:
    """Algorithmic category of an instance plus the counts that decide it."""

    category: str
    nontrivial_components: int
    block_count: int
    isolated_isolated_edges: int
    isolated_count: int

    @property
    def measure(self) -> tuple[int, int]:
        return (self.block_count, self.isolated_isolated_edges)

    def to_dict(self) -> dict[str, Any]:
        return {
            "category": self.category,
            "nontrivial_components": self.nontrivial_components,
            "block_count": self.block_count,
            "isolated_isolated_edges": self.isolated_isolated_edges,
            "isolated_count": self.isolated_count,
        }


Corner = tuple[str | None, str | None]


def _assignment_key(raw: str) -> tuple[str, str]:
    kind, sep, value = raw.partition(":")
    if not sep or kind not in ("stream", "vertex") or not value:
        raise MalformedCertificate(f"Unknown assignment key '{raw}'.")
    return kind, value


def _stream_index(value: str, raw: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise MalformedCertificate(f"Bad stream index in key '{raw}'.") from exc


@dataclass(frozen=True)
class DrawingCertificate:
    """Planar rotation of the backbone's non-trivial components plus a face assignment.

    ``corners`` maps a stream position to the walk successor of each endpoint
    (None for isolated endpoints) and is only needed when an endpoint occurs
    several times on its face.

    With several non-trivial components, ``nesting`` keys every component but
    the one holding the smallest label by its smallest label and gives the
    face it is drawn in (host) and its own face turned towards the rest of
    the drawing (outer). Stream edges and isolated vertices are assigned to
    the other faces; the region of a face also reaches the outer faces of
    the components it hosts.
    """

    rotation: RotationSystem
    stream_faces: Mapping[int, int]
    vertex_faces: Mapping[str, int]
    corners: Mapping[int, Corner] = field(default_factory=dict)
    nesting: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        assignment: dict[str, int] = {}
        for position in sorted(self.stream_faces):
            assignment[f"stream:{position}"] = self.stream_faces[position]
        for label in sorted(self.vertex_faces):
            assignment[f"vertex:{label}"] = self.vertex_faces[label]
        data: dict[str, Any] = {"rotation": self.rotation.to_dict(), "assignment": assignment}
        if self.corners:
            data["corners"] = {
                f"stream:{position}": list(self.corners[position]) for position in sorted(self.corners)
            }
        if self.nesting:
            data["nesting"] = {label: list(self.nesting[label]) for label in sorted(self.nesting)}
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DrawingCertificate":
        if not isinstance(data, dict) or "rotation" not in data or "assignment" not in data:
            raise MalformedCertificate("Certificate needs 'rotation' and 'assignment' objects.")
        rotation_data = data["rotation"]
        if not isinstance(rotation_data, dict) or not all(
            isinstance(nbrs, list) and all(isinstance(u, str) for u in nbrs)
            for nbrs in rotation_data.values()
        ):
            raise MalformedCertificate("Rotation must map vertices to lists of labels.")
        try:
            rotation = RotationSystem.from_dict(rotation_data)
        except ValueError as exc:
            raise MalformedCertificate(f"Invalid rotation: {exc}") from exc

        stream_faces: dict[int, int] = {}
        vertex_faces: dict[str, int] = {}
        assignment = data["assignment"]
        if not isinstance(assignment, dict):
            raise MalformedCertificate("Assignment must be a JSON object.")
        for raw, face in assignment.items():
            if not isinstance(face, int) or isinstance(face, bool):
                raise MalformedCertificate(f"Face id for '{raw}' must be an integer.")
            kind, value = _assignment_key(raw)
            if kind == "stream":
                stream_faces[_stream_index(value, raw)] = face
            else:
                vertex_faces[value] = face

        corners_data = data.get("corners", {})
        if not isinstance(corners_data, dict):
            raise MalformedCertificate("Corners must be a JSON object.")
        corners: dict[int, Corner] = {}
        for raw, pair in corners_data.items():
            kind, value = _assignment_key(raw)
            if kind != "stream" or not isinstance(pair, list) or len(pair) != 2:
                raise MalformedCertificate(f"Bad corner entry '{raw}'.")
            if not all(item is None or isinstance(item, str) for item in pair):
                raise MalformedCertificate(f"Bad corner entry '{raw}'.")
            corners[_stream_index(value, raw)] = (pair[0], pair[1])

        nesting_data = data.get("nesting", {})
        if not isinstance(nesting_data, dict):
            raise MalformedCertificate("Nesting must be a JSON object.")
        nesting: dict[str, tuple[int, int]] = {}
        for label, pair in nesting_data.items():
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(face, int) and not isinstance(face, bool) for face in pair)
            ):
                raise MalformedCertificate(f"Nesting entry '{label}' must be a [host, outer] pair of face ids.")
            nesting[label] = (pair[0], pair[1])
        return cls(rotation, stream_faces, vertex_faces, corners, nesting)


@dataclass(frozen=True)
class RejectReason:
    """Why a certificate was rejected."""

    kind: str
    message: str
    time_step: int | None = None
    face: int | None = None
    edges: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "message": self.message,
            "time_step": self.time_step,
            "face": self.face,
            "edges": list(self.edges),
        }


@dataclass(frozen=True)
class CheckReport:
    """Verdict of the certificate checker."""

    verdict: str
    reason: RejectReason | None = None

    def __post_init__(self) -> None:
        if self.verdict not in ("accept", "reject"):
            raise ValueError(f"Unknown verdict '{self.verdict}'.")
        if self.verdict == "reject" and self.reason is None:
            raise ValueError("A rejection must carry a reason.")

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    @classmethod
    def accept(cls) -> "CheckReport":
        return cls("accept")

    @classmethod
    def reject(cls, kind: str, message: str, **details: Any) -> "CheckReport":
        return cls("reject", RejectReason(kind, message, **details))

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "reason": self.reason.to_dict() if self.reason else None,
        }


@dataclass(frozen=True)
class TraceEntry:
    """One rule application recorded by the decision procedures."""

    rule: str
    depth: int
    measure: tuple[int, int]
    note: str = ""
    children: tuple[tuple[int, int], ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "depth": self.depth,
            "measure": list(self.measure),
            "note": self.note,
            "children": [list(child) for child in self.children],
        }


@dataclass(frozen=True)
class Piece:
    """A sub-instance decided on its own, with its witness when positive."""

    instance: StreamedInstance
    certificate: DrawingCertificate | None


@dataclass(frozen=True)
class Decision:
    """Answer of a decision procedure with witness and rule trace."""

    answer: bool
    witness: DrawingCertificate | None = None
    pieces: tuple[Piece, ...] = ()
    trace: tuple[TraceEntry, ...] = ()

    @property
    def composite(self) -> bool:
        return self.witness is None and bool(self.pieces)


@dataclass(frozen=True)
class SefeInstance:
    """Sunflower SEFE instance: common graph plus exclusive edges per graph."""

    vertices: tuple[str, ...]
    common_edges: frozenset[Edge]
    graphs: tuple[frozenset[Edge], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        common = frozenset(edge_key(u, v) for u, v in self.common_edges)
        graphs = tuple(frozenset(edge_key(u, v) for u, v in exclusive) for exclusive in self.graphs)
        object.__setattr__(self, "common_edges", common)
        object.__setattr__(self, "graphs", graphs)
        declared = set(self.vertices)
        for index, exclusive in enumerate(graphs, start=1):
            if exclusive & common:
                raise InstanceFormatError(f"Graph {index} repeats a common edge.")
            for u, v in exclusive:
                if u == v or u not in declared or v not in declared:
                    raise InstanceFormatError(f"Graph {index} has an invalid edge ({u}, {v}).")

    @property
    def k(self) -> int:
        return len(self.graphs)

    @cached_property
    def common_graph(self) -> Graph:
        return Graph(self.vertices, self.common_edges)

    def graph(self, index: int) -> Graph:
        """The full graph G_index (1-based): common edges plus its exclusive edges."""

        return Graph(self.vertices, self.common_edges | self.graphs[index - 1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "common_edges": [list(edge) for edge in sorted(self.common_edges)],
            "graphs": [
                {"exclusive_edges": [list(edge) for edge in sorted(exclusive)]} for exclusive in self.graphs
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SefeInstance":
        _require_keys(data, ("vertices", "common_edges", "graphs"), "SEFE instance")
        vertices = data["vertices"]
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise InstanceFormatError("Invalid SEFE instance: vertices must be a list of strings.")
        if not isinstance(data["common_edges"], list) or not isinstance(data["graphs"], list):
            raise InstanceFormatError("Invalid SEFE instance: common_edges and graphs must be lists.")
        common = [_edge_pair(item, "common_edges") for item in data["common_edges"]]
        graphs = []
        for item in data["graphs"]:
            _require_keys(item, ("exclusive_edges",), "SEFE graph")
            if not isinstance(item["exclusive_edges"], list):
                raise InstanceFormatError("Invalid SEFE graph: exclusive_edges must be a list.")
            graphs.append(frozenset(_edge_pair(edge, "exclusive_edges") for edge in item["exclusive_edges"]))
        return cls(tuple(vertices), frozenset(common), tuple(graphs))
