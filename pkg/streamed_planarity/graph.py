"""Simple labeled graphs, rotation systems, facial walks and biconnectivity."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
import itertools
import logging
import math

import networkx as nx

from .config import DEFAULT_BUDGET
from .errors import BudgetExceeded, EdgeNotFound, UnsupportedInstance

logger = logging.getLogger(__name__)

Edge = tuple[str, str]
Dart = tuple[str, str]
Nesting = dict[str, tuple[int, int]]


def edge_key(u: str, v: str) -> Edge:
    """Return the canonical (smaller, larger) form of an undirected edge."""

    return (u, v) if u <= v else (v, u)


def contraction_label(members: Iterable[str]) -> str:
    """Label for a vertex obtained by merging ``members``."""

    ordered = sorted(members)
    if len(ordered) == 1:
        return ordered[0]
    return f"{ordered[0]}+{ordered[-1]}"


def fresh_label(label: str, taken: Iterable[str] | set[str]) -> str:
    """Append primes to ``label`` until it no longer collides with ``taken``."""

    taken_set = taken if isinstance(taken, (set, frozenset)) else set(taken)
    while label in taken_set:
        label += "'"
    return label


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph over string labels."""

    vertices: tuple[str, ...]
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        edges = frozenset(edge_key(u, v) for u, v in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        declared = set(vertices)
        if len(declared) != len(vertices):
            raise ValueError("Graph vertices must be distinct.")
        for u, v in edges:
            if u == v:
                raise ValueError(f"Self-loop on '{u}' is not allowed.")
            if u not in declared or v not in declared:
                raise ValueError(f"Edge ({u}, {v}) uses an undeclared vertex.")

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Edge]) -> "Graph":
        return cls(tuple(vertices), frozenset(edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        neighbours: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        return {v: frozenset(nbrs) for v, nbrs in neighbours.items()}

    def neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(self.adjacency[v]))

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    @property
    def isolated_vertices(self) -> tuple[str, ...]:
        """The vertices without incident edges, in declaration order."""

        return tuple(v for v in self.vertices if not self.adjacency[v])

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(sorted(self.edges))
        return graph

    def connected_components(self) -> list[tuple[str, ...]]:
        """Components as sorted label tuples, ordered by their smallest label."""

        components = [tuple(sorted(c)) for c in nx.connected_components(self.to_networkx())]
        return sorted(components)

    def nontrivial_components(self) -> list[tuple[str, ...]]:
        return [c for c in self.connected_components() if len(c) > 1]

    @property
    def component_count(self) -> int:
        return len(self.connected_components())

    def is_connected(self) -> bool:
        return self.n > 0 and self.component_count == 1

    def subgraph(self, vertices: Iterable[str]) -> "Graph":
        keep = set(vertices)
        return Graph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
        )


@dataclass(frozen=True, eq=True)
class RotationSystem:
    """Clockwise cyclic order of neighbours around every vertex."""

    rotation: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        rotation = {str(v): tuple(nbrs) for v, nbrs in self.rotation.items()}
        object.__setattr__(self, "rotation", rotation)
        for v, nbrs in rotation.items():
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"Rotation at '{v}' repeats a neighbour.")
            for u in nbrs:
                if u == v:
                    raise ValueError(f"Rotation at '{v}' contains a self-loop.")
                if v not in rotation.get(u, ()):
                    raise ValueError(f"Rotation is not symmetric on edge ({v}, {u}).")

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.rotation.items())))

    @classmethod
    def empty(cls) -> "RotationSystem":
        return cls({})

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.rotation))

    @cached_property
    def _positions(self) -> dict[str, dict[str, int]]:
        return {v: {u: index for index, u in enumerate(nbrs)} for v, nbrs in self.rotation.items()}

    def successor(self, v: str, u: str) -> str:
        """Neighbour following ``u`` in the rotation at ``v``."""

        nbrs = self.rotation[v]
        return nbrs[(self._positions[v][u] + 1) % len(nbrs)]

    def graph(self) -> Graph:
        edges = frozenset(edge_key(v, u) for v, nbrs in self.rotation.items() for u in nbrs)
        return Graph(self.vertices, edges)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.rotation.values()) // 2

    def darts(self) -> list[Dart]:
        return sorted((v, u) for v, nbrs in self.rotation.items() for u in nbrs)

    def insert_after(self, v: str, anchor: str, u: str) -> "RotationSystem":
        """Return a copy with ``u`` placed right after ``anchor`` around ``v``."""

        rotation = dict(self.rotation)
        nbrs = list(rotation[v])
        nbrs.insert(nbrs.index(anchor) + 1, u)
        rotation[v] = tuple(nbrs)
        rotation[u] = rotation.get(u, ()) + (v,)
        return RotationSystem(rotation)

    def to_dict(self) -> dict[str, list[str]]:
        return {v: list(self.rotation[v]) for v in sorted(self.rotation)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Iterable[str]]) -> "RotationSystem":
        return cls({str(v): tuple(str(u) for u in nbrs) for v, nbrs in data.items()})


@dataclass(frozen=True)
class FaceSet:
    """Facial walks in canonical discovery order; face id = index."""

    faces: tuple[tuple[Dart, ...], ...]

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self) -> Iterator[tuple[Dart, ...]]:
        return iter(self.faces)

    def __getitem__(self, face_id: int) -> tuple[Dart, ...]:
        return self.faces[face_id]

    @cached_property
    def face_of(self) -> dict[Dart, int]:
        return {dart: face_id for face_id, walk in enumerate(self.faces) for dart in walk}

    @cached_property
    def _occurrences(self) -> tuple[dict[str, tuple[int, ...]], ...]:
        result = []
        for walk in self.faces:
            occ: dict[str, list[int]] = {}
            for index, (tail, _) in enumerate(walk):
                occ.setdefault(tail, []).append(index)
            result.append({v: tuple(positions) for v, positions in occ.items()})
        return tuple(result)

    @cached_property
    def _faces_by_vertex(self) -> dict[str, tuple[int, ...]]:
        index: dict[str, list[int]] = {}
        for face_id, occ in enumerate(self._occurrences):
            for v in occ:
                index.setdefault(v, []).append(face_id)
        return {v: tuple(ids) for v, ids in index.items()}

    def walk(self, face_id: int) -> tuple[str, ...]:
        """Vertices of the facial walk, one entry per occurrence."""

        return tuple(tail for tail, _ in self.faces[face_id])

    def occurrences(self, face_id: int, v: str) -> tuple[int, ...]:
        """Walk positions at which ``v`` occurs on the face."""

        return self._occurrences[face_id].get(v, ())

    def faces_containing(self, v: str) -> tuple[int, ...]:
        return self._faces_by_vertex.get(v, ())

    def position_of(self, face_id: int, dart: Dart) -> int | None:
        """Walk position of ``dart`` on the face, or None if it lies elsewhere."""

        if self.face_of.get(dart) != face_id:
            return None
        return self.faces[face_id].index(dart)


def planarity_check(g: Graph) -> bool:
    """Return True when ``g`` is planar."""

    is_planar, _ = nx.check_planarity(g.to_networkx())
    return bool(is_planar)


def canonical_faces(r: RotationSystem) -> FaceSet:
    """Trace every facial walk of ``r``.

    From dart (u, v) the walk continues with (v, w), w being the successor of
    u around v. Faces are numbered in lexicographic order of their smallest
    dart.
    """

    seen: set[Dart] = set()
    faces: list[tuple[Dart, ...]] = []
    for start in r.darts():
        if start in seen:
            continue
        walk: list[Dart] = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            walk.append(dart)
            u, v = dart
            dart = (v, r.successor(v, u))
        faces.append(tuple(walk))
    return FaceSet(tuple(faces))


def is_planar_rotation(r: RotationSystem) -> bool:
    """Euler check, component by component: F = 2c - n + m for c components."""

    m = r.edge_count()
    if m == 0:
        return True
    components = len(r.graph().nontrivial_components())
    n = sum(1 for nbrs in r.rotation.values() if nbrs)
    return len(canonical_faces(r)) == 2 * components - n + m


def rotation_count(g: Graph) -> int:
    """Number of rotation systems of ``g``: the product of (deg(v) - 1)!."""

    total = 1
    for v in g.vertices:
        total *= math.factorial(max(g.degree(v) - 1, 0))
    return total


def _cyclic_orders(anchor_sorted: tuple[str, ...]) -> list[tuple[str, ...]]:
    if not anchor_sorted:
        return [()]
    first, rest = anchor_sorted[0], anchor_sorted[1:]
    return [(first,) + perm for perm in itertools.permutations(rest)]


def _face_upper_bound(
    rotation: dict[str, tuple[str, ...]],
    darts: list[Dart],
    positions: dict[str, dict[str, int]],
    min_face_length: int,
) -> int:
    """Upper bound on the faces any completion of a partial rotation can have."""

    visited: set[Dart] = set()
    closed = 0
    closed_darts = 0
    for start in darts:
        if start in visited:
            continue
        path: list[Dart] = []
        dart = start
        while True:
            path.append(dart)
            visited.add(dart)
            u, v = dart
            nbrs = rotation.get(v)
            if nbrs is None:
                break
            nxt = (v, nbrs[(positions[v][u] + 1) % len(nbrs)])
            if nxt == start:
                closed += 1
                closed_darts += len(path)
                break
            if nxt in visited:
                break
            dart = nxt
    return closed + (len(darts) - closed_darts) // min_face_length


def planar_rotations_with_faces(
    g: Graph, budget: int = DEFAULT_BUDGET
) -> Iterator[tuple[RotationSystem, FaceSet]]:
    """Like ``enumerate_planar_rotations`` but also yields each face set."""

    if not g.is_connected():
        raise UnsupportedInstance("Rotation enumeration requires a connected graph.")
    required = rotation_count(g)
    if required > budget:
        raise BudgetExceeded(required, budget)
    logger.debug("Enumerating %d rotation systems over %d vertices", required, g.n)
    return _iter_planar_rotations(g)


def _iter_planar_rotations(g: Graph) -> Iterator[tuple[RotationSystem, FaceSet]]:
    order = sorted(g.vertices)
    choices = {v: _cyclic_orders(g.neighbors(v)) for v in order}
    target = 2 - g.n + g.m
    is_tree = g.m == g.n - 1
    darts = sorted((v, u) for v in order for u in g.adjacency[v])
    min_face_length = 3 if g.m >= 2 else 2

    rotation: dict[str, tuple[str, ...]] = {}
    positions: dict[str, dict[str, int]] = {}
    picks = [-1] * len(order)
    depth = 0
    while depth >= 0:
        if depth == len(order):
            candidate = RotationSystem(dict(rotation))
            faces = canonical_faces(candidate)
            if len(faces) == target:
                yield candidate, faces
            depth -= 1
            continue
        v = order[depth]
        picks[depth] += 1
        if picks[depth] >= len(choices[v]):
            picks[depth] = -1
            rotation.pop(v, None)
            positions.pop(v, None)
            depth -= 1
            continue
        cyclic = choices[v][picks[depth]]
        rotation[v] = cyclic
        positions[v] = {u: index for index, u in enumerate(cyclic)}
        if is_tree or len(choices[v]) == 1:
            depth += 1
        elif _face_upper_bound(rotation, darts, positions, min_face_length) >= target:
            depth += 1


def enumerate_planar_rotations(g: Graph, budget: int = DEFAULT_BUDGET) -> Iterator[RotationSystem]:
    """Yield every planar rotation system of the connected graph ``g``.

    The order is lexicographic over the per-vertex cyclic orders, each anchored
    at the smallest neighbour. The budget is checked eagerly.
    """

    pairs = planar_rotations_with_faces(g, budget)
    return (rotation for rotation, _ in pairs)


def _face_owners(faces: FaceSet, components: list[tuple[str, ...]]) -> list[int]:
    owner_of = {v: index for index, component in enumerate(components) for v in component}
    return [owner_of[walk[0][0]] for walk in faces]


def _reaches_root(parent: dict[int, int]) -> bool:
    for start in parent:
        index = start
        for _ in range(len(parent) + 1):
            if index == 0:
                break
            index = parent[index]
        if index != 0:
            return False
    return True


def nestings(faces: FaceSet, components: list[tuple[str, ...]]) -> Iterator[Nesting]:
    """Every way to place the components of a drawing inside each other's faces.

    ``components`` are sorted label tuples in the order of their smallest
    label; the first is the root. Every other component is keyed by its
    smallest label and names a (host, outer) pair: the face of another
    component it sits in, and its own face that looks back at the rest of
    the drawing. A host is never the outer face of its own component, and
    following hosts always ends at the root.
    """

    owners = _face_owners(faces, components)
    options = []
    for index in range(1, len(components)):
        own = [face for face, owner in enumerate(owners) if owner == index]
        other = [face for face, owner in enumerate(owners) if owner != index]
        options.append([(host, outer) for outer in own for host in other])

    for combo in itertools.product(*options):
        outer_of = {index: outer for index, (_, outer) in enumerate(combo, start=1)}
        if any(outer_of.get(owners[host]) == host for host, _ in combo):
            continue
        if not _reaches_root({index: owners[host] for index, (host, _) in enumerate(combo, start=1)}):
            continue
        yield {components[index][0]: pair for index, pair in enumerate(combo, start=1)}


def planar_arrangements(
    g: Graph, budget: int = DEFAULT_BUDGET
) -> Iterator[tuple[RotationSystem, FaceSet, Nesting]]:
    """Planar drawings of a backbone with several non-trivial components.

    Yields one planar rotation per component, merged, with the face set and
    every nesting of the components. Vertices of ``g`` without edges are
    ignored. The budget covers rotations times nesting choices and is
    checked eagerly.
    """

    components = g.nontrivial_components()
    parts = [g.subgraph(component) for component in components]
    face_counts = [2 - part.n + part.m for part in parts]
    required = math.prod(rotation_count(part) for part in parts)
    for count in face_counts[1:]:
        required *= count * (sum(face_counts) - count)
    if required > budget:
        raise BudgetExceeded(required, budget)
    logger.debug("Enumerating %d arrangements of %d components", required, len(parts))
    return _iter_arrangements(parts, components)


def _iter_arrangements(
    parts: list[Graph], components: list[tuple[str, ...]]
) -> Iterator[tuple[RotationSystem, FaceSet, Nesting]]:
    per_part = [[rotation for rotation, _ in _iter_planar_rotations(part)] for part in parts]
    for combo in itertools.product(*per_part):
        merged: dict[str, tuple[str, ...]] = {}
        for part_rotation in combo:
            merged.update(part_rotation.rotation)
        rotation = RotationSystem(merged)
        faces = canonical_faces(rotation)
        for nesting in nestings(faces, components):
            yield rotation, faces, nesting


@dataclass(frozen=True)
class BlockCutTree:
    """Blocks, cutvertices and their incidence tree."""

    blocks: tuple[frozenset[str], ...]
    block_edges: tuple[frozenset[Edge], ...]
    cutvertices: frozenset[str]
    tree_edges: frozenset[tuple[int, str]]
    component_count: int

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def blocks_containing(self, v: str) -> tuple[int, ...]:
        return tuple(index for index, block in enumerate(self.blocks) if v in block)

    def to_networkx(self) -> nx.Graph:
        tree = nx.Graph()
        tree.add_nodes_from(("block", index) for index in range(len(self.blocks)))
        tree.add_nodes_from(("cut", v) for v in sorted(self.cutvertices))
        tree.add_edges_from((("block", index), ("cut", v)) for index, v in sorted(self.tree_edges))
        return tree


def blocks(g: Graph) -> BlockCutTree:
    """Biconnected-component decomposition; isolated vertices form no block."""

    nx_graph = g.to_networkx()
    edge_sets = [
        frozenset(edge_key(u, v) for u, v in component)
        for component in nx.biconnected_component_edges(nx_graph)
    ]
    edge_sets.sort(key=min)
    vertex_sets = tuple(frozenset(v for edge in edges for v in edge) for edges in edge_sets)
    cutvertices = frozenset(nx.articulation_points(nx_graph))
    tree_edges = frozenset(
        (index, v) for index, block in enumerate(vertex_sets) for v in block if v in cutvertices
    )
    return BlockCutTree(
        blocks=vertex_sets,
        block_edges=tuple(edge_sets),
        cutvertices=cutvertices,
        tree_edges=tree_edges,
        component_count=nx.number_connected_components(nx_graph),
    )


def contract_edge(g: Graph, e: Edge) -> Graph:
    """Merge the endpoints of ``e`` into one vertex, dropping loops and parallels."""

    u, v = edge_key(*e)
    if (u, v) not in g.edges:
        raise EdgeNotFound(f"Edge ({u}, {v}) is not in the graph.")
    merged = fresh_label(contraction_label((u, v)), set(g.vertices) - {u, v})

    vertices: list[str] = []
    for x in g.vertices:
        if x in (u, v):
            if merged not in vertices:
                vertices.append(merged)
        else:
            vertices.append(x)

    def image(x: str) -> str:
        return merged if x in (u, v) else x

    edges = {edge_key(image(a), image(b)) for a, b in g.edges if image(a) != image(b)}
    return Graph(tuple(vertices), frozenset(edges))
