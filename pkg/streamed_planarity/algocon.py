"""ALGOCON: the recursive decision procedure for ω = 1.

An instance whose backbone has one non-trivial component is cut into star
instances. While the component has more than one block, the parent
cutvertex v of a leaf block β is split in two (v′ on β's side, v″ on the
rest) joined by a new stream edge, and the instance falls apart into I◇
(everything outside β contracted) and I∘ (β contracted). With one block
left, clusters of isolated vertices joined by stream edges are contracted
away (R1). Star instances are handed to ``solve_star``.

The R2 chain runs on a mutable workspace so that each step touches only
the block it cuts off and the stream edges at its cutvertex.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import replace
import heapq
import logging

from .certify import certificate_of_trivial, check_certificate
from .config import ALL_ISOLATED, DEFAULT_BUDGET
from .errors import UnsupportedOmega, WrongShape
from .graph import Edge, blocks, contraction_label, edge_key, fresh_label
from .instances import remap_stream, shape_of, union_graph
from .models import Decision, Piece, StreamedInstance, TraceEntry
from .star import solve_star

logger = logging.getLogger(__name__)

Measure = tuple[int, int]


class _Clusters:
    """Union-find over isolated vertices linked by stream edges.

    Each root keeps the smallest and largest member label and a counter of
    stream edges from the cluster to every backbone vertex.
    """

    def __init__(self) -> None:
        self.parent: dict[str, str] = {}
        self.size: dict[str, int] = {}
        self.low: dict[str, str] = {}
        self.high: dict[str, str] = {}
        self.attach: dict[str, Counter[str]] = {}
        self.attach_total: dict[str, int] = {}

    def add(self, q: str) -> None:
        self.parent[q] = q
        self.size[q] = 1
        self.low[q] = q
        self.high[q] = q
        self.attach[q] = Counter()
        self.attach_total[q] = 0

    def find(self, q: str) -> str:
        root = q
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[q] != root:
            self.parent[q], q = root, self.parent[q]
        return root

    def union(self, a: str, b: str) -> str:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.low[ra] = min(self.low[ra], self.low[rb])
        self.high[ra] = max(self.high[ra], self.high[rb])
        big, small = self.attach[ra], self.attach.pop(rb)
        if len(big) < len(small):
            big, small = small, big
        big.update(small)
        self.attach[ra] = big
        self.attach_total[ra] += self.attach_total.pop(rb)
        return ra

    def touch(self, q: str, v: str, delta: int) -> None:
        root = self.find(q)
        counter = self.attach[root]
        counter[v] += delta
        if counter[v] <= 0:
            del counter[v]
        self.attach_total[root] += delta

    def label(self, root: str) -> str:
        if self.size[root] == 1:
            return self.low[root]
        return f"{self.low[root]}+{self.high[root]}"


class _Workspace:
    """Mutable copy of an instance with one non-trivial backbone component."""

    def __init__(self, i: StreamedInstance) -> None:
        self.omega = i.omega
        self.order: dict[str, None] = dict.fromkeys(i.vertices)
        self.labels: set[str] = set(i.vertices)
        self.adjacency: dict[str, set[str]] = {}
        for u, v in i.backbone:
            self.adjacency.setdefault(u, set()).add(v)
            self.adjacency.setdefault(v, set()).add(u)
        self.isolated: set[str] = set(i.isolated_vertices)
        self.stream: dict[str, dict[str, int]] = {v: {} for v in i.vertices}
        self.next_position = i.max_position + 1
        self.iso_edges = 0
        self.clusters = _Clusters()
        for q in sorted(self.isolated):
            self.clusters.add(q)
        for position, (u, v) in i.entries():
            self._link(u, v, position)

        tree = blocks(i.backbone_graph)
        self.block_vertices = list(tree.blocks)
        self.block_key: list[Edge] = [min(edges) for edges in tree.block_edges]
        self.block_count = tree.block_count
        self.parent_cut: dict[int, str | None] = {0: None}
        self.cut_block: dict[str, int] = {}
        self.cut_children: dict[str, int] = {}
        self.pending: list[int] = [0] * tree.block_count

        containing: dict[str, list[int]] = {}
        for index, v in sorted(tree.tree_edges):
            containing.setdefault(v, []).append(index)
        queue = [0]
        while queue:
            b = queue.pop()
            for c in sorted(self.block_vertices[b] & tree.cutvertices):
                if c == self.parent_cut[b]:
                    continue
                kids = [x for x in containing[c] if x != b]
                self.cut_block[c] = b
                self.cut_children[c] = len(kids)
                self.pending[b] += 1
                for x in kids:
                    self.parent_cut[x] = c
                    queue.append(x)
        self.leaves: list[tuple[Edge, int]] = [
            (self.block_key[b], b) for b in range(1, tree.block_count) if self.pending[b] == 0
        ]
        heapq.heapify(self.leaves)

    @property
    def measure(self) -> Measure:
        return (self.block_count, self.iso_edges)

    def _link(self, u: str, v: str, position: int) -> None:
        self.stream[u][v] = position
        self.stream[v][u] = position
        u_iso, v_iso = u in self.isolated, v in self.isolated
        if u_iso and v_iso:
            self.iso_edges += 1
            self.clusters.union(u, v)
        elif u_iso:
            self.clusters.touch(u, v, 1)
        elif v_iso:
            self.clusters.touch(v, u, 1)

    def _unlink(self, u: str, v: str) -> None:
        del self.stream[u][v]
        del self.stream[v][u]
        u_iso, v_iso = u in self.isolated, v in self.isolated
        if u_iso and v_iso:
            self.iso_edges -= 1
        elif u_iso:
            self.clusters.touch(u, v, -1)
        elif v_iso:
            self.clusters.touch(v, u, -1)

    def _attached_to_any(self, root: str, members: set[str]) -> int:
        counter = self.clusters.attach[root]
        if len(counter) < len(members):
            return sum(count for x, count in counter.items() if x in members)
        return sum(counter.get(x, 0) for x in members)

    def pop_leaf(self) -> int:
        _, b = heapq.heappop(self.leaves)
        return b

    def split_leaf(self, b: int) -> StreamedInstance:
        """Cut leaf block ``b`` off: return I◇ and turn the workspace into I∘."""

        members = set(self.block_vertices[b])
        v = self.parent_cut[b]
        inner = members - {v}

        beta_side: dict[str, bool] = {}
        outside: dict[str, bool] = {}
        for y in self.stream[v]:
            if y in self.isolated:
                root = self.clusters.find(y)
                if root not in beta_side:
                    beta_side[root] = self._attached_to_any(root, inner) > 0
        for x in members:
            for y in self.stream[x]:
                if y in self.isolated:
                    root = self.clusters.find(y)
                    if root not in outside:
                        inside = self._attached_to_any(root, members)
                        outside[root] = self.clusters.attach_total[root] > inside

        # I◇: β with v′ = v, everything else contracted
        taken = set(members)
        remainder = fresh_label(f"{v}''", taken)
        taken.add(remainder)
        cluster_labels: dict[str, str] = {}
        diamond_edges: dict[Edge, int] = {}

        def put(a: str, c: str, position: int) -> None:
            key = edge_key(a, c)
            if key not in diamond_edges or position < diamond_edges[key]:
                diamond_edges[key] = position

        for x in sorted(members):
            for y, position in self.stream[x].items():
                if y in members:
                    if x < y:
                        put(x, y, position)
                elif y in self.isolated:
                    root = self.clusters.find(y)
                    if x == v and not beta_side[root]:
                        continue
                    if outside[root]:
                        put(x, remainder, position)
                    else:
                        if root not in cluster_labels:
                            label = fresh_label(self.clusters.label(root), taken)
                            taken.add(label)
                            cluster_labels[root] = label
                        put(x, cluster_labels[root], position)
                elif x != v:
                    put(x, remainder, position)
        put(v, remainder, self.next_position)

        ordered = sorted(diamond_edges.items(), key=lambda item: item[1])
        diamond = StreamedInstance(
            vertices=(*sorted(members), remainder, *sorted(cluster_labels.values())),
            backbone=frozenset(
                edge_key(x, y) for x in members for y in self.adjacency[x] if y in members
            ),
            stream=tuple(edge for edge, _ in ordered),
            omega=self.omega,
            positions=tuple(position for _, position in ordered),
        )

        # I∘: β contracted to g, v″ = v
        g = fresh_label(contraction_label(members), self.labels)
        moved: dict[str, int] = {}

        def move(y: str, position: int) -> None:
            if y not in moved or position < moved[y]:
                moved[y] = position

        for x in sorted(inner):
            for y, position in list(self.stream[x].items()):
                self._unlink(x, y)
                if y not in members:
                    move(y, position)
        for y, position in list(self.stream[v].items()):
            if y in self.isolated and beta_side.get(self.clusters.find(y), False):
                self._unlink(v, y)
                move(y, position)
        move(v, self.next_position)
        self.next_position += 1

        for x in inner:
            for y in self.adjacency.pop(x):
                if y == v:
                    self.adjacency[v].discard(x)
            del self.stream[x]
            del self.order[x]
            self.labels.discard(x)
        self.isolated.add(g)
        self.labels.add(g)
        self.order[g] = None
        self.stream[g] = {}
        self.clusters.add(g)
        for y in sorted(moved):
            self._link(g, y, moved[y])

        self.block_count -= 1
        self.cut_children[v] -= 1
        if self.cut_children[v] == 0:
            parent = self.cut_block[v]
            self.pending[parent] -= 1
            if self.pending[parent] == 0 and parent != 0:
                heapq.heappush(self.leaves, (self.block_key[parent], parent))
        return diamond

    def materialize(self) -> StreamedInstance:
        entries = sorted(
            (position, edge_key(x, y))
            for x, row in self.stream.items()
            for y, position in row.items()
            if x < y
        )
        return StreamedInstance(
            vertices=tuple(self.order),
            backbone=frozenset(
                edge_key(x, y) for x, row in self.adjacency.items() for y in row if x < y
            ),
            stream=tuple(edge for _, edge in entries),
            omega=self.omega,
            positions=tuple(position for position, _ in entries),
        )


def _require_omega_one(i: StreamedInstance, what: str) -> None:
    if i.omega != 1:
        raise UnsupportedOmega(f"{what} requires omega=1, got {i.omega}")


def split_case_r1(i: StreamedInstance) -> tuple[StreamedInstance, StreamedInstance]:
    """Split a one-block instance with isolated-isolated stream edges.

    I◇ contracts every cluster of isolated vertices; I∘ contracts the block.
    """

    _require_omega_one(i, "split_case_r1")
    shape = shape_of(i)
    if shape.nontrivial_components != 1 or shape.block_count != 1 or shape.isolated_isolated_edges == 0:
        raise WrongShape("split_case_r1 needs one block and a stream edge between isolated vertices.")

    core = set(v for v in i.vertices if not i.is_isolated(v))
    clusters = _Clusters()
    for q in i.isolated_vertices:
        clusters.add(q)
    for u, v in i.stream:
        if i.is_isolated(u) and i.is_isolated(v):
            clusters.union(u, v)

    taken = set(core)
    labels: dict[str, str] = {}
    for q in i.isolated_vertices:
        root = clusters.find(q)
        if root not in labels:
            labels[root] = fresh_label(clusters.label(root), taken)
            taken.add(labels[root])

    def diamond_image(x: str) -> str:
        return x if x in core else labels[clusters.find(x)]

    stream, positions = remap_stream(i.entries(), diamond_image)
    diamond = StreamedInstance(
        vertices=(*(v for v in i.vertices if v in core), *sorted(set(labels.values()))),
        backbone=i.backbone,
        stream=stream,
        omega=1,
        positions=positions,
    )

    g = fresh_label(contraction_label(core), set(i.isolated_vertices))

    def circle_image(x: str) -> str:
        return g if x in core else x

    stream, positions = remap_stream(i.entries(), circle_image)
    circle = StreamedInstance(
        vertices=(g, *i.isolated_vertices),
        backbone=frozenset(),
        stream=stream,
        omega=1,
        positions=positions,
    )
    return diamond, circle


def split_case_r2(i: StreamedInstance) -> tuple[StreamedInstance, StreamedInstance]:
    """Split at the parent cutvertex of the smallest leaf block."""

    _require_omega_one(i, "split_case_r2")
    shape = shape_of(i)
    if shape.nontrivial_components != 1 or shape.block_count <= 1:
        raise WrongShape("split_case_r2 needs one non-trivial component with several blocks.")
    workspace = _Workspace(i)
    diamond = workspace.split_leaf(workspace.pop_leaf())
    return diamond, workspace.materialize()


def split_children(i: StreamedInstance) -> tuple[StreamedInstance, ...]:
    """Instances the R1/R2 rules cut ``i`` into, in solving order; empty for base cases."""

    _require_omega_one(i, "split_children")
    shape = shape_of(i)
    if shape.category == ALL_ISOLATED or (shape.block_count == 1 and shape.isolated_isolated_edges == 0):
        return ()
    if shape.block_count == 1:
        return split_case_r1(i)
    workspace = _Workspace(i)
    children = []
    while workspace.block_count > 1:
        children.append(workspace.split_leaf(workspace.pop_leaf()))
    children.append(workspace.materialize())
    return tuple(children)


class _Run:
    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.pieces: list[Piece] = []
        self.trace: list[TraceEntry] = []

    def solve(self, i: StreamedInstance, depth: int) -> bool:
        shape = shape_of(i)
        if shape.category == ALL_ISOLATED:
            certificate = certificate_of_trivial(i)
            answer = check_certificate(i, certificate).accepted
            self.trace.append(TraceEntry("Base1", depth, shape.measure, "yes" if answer else "no"))
            if answer:
                self.pieces.append(Piece(i, certificate))
            return answer

        if shape.block_count == 1 and shape.isolated_isolated_edges == 0:
            decision = solve_star(i, self.budget)
            for entry in decision.trace:
                self.trace.append(replace(entry, rule="Base2", depth=depth))
            self.pieces.extend(decision.pieces)
            return decision.answer

        if shape.block_count == 1:
            diamond, circle = split_case_r1(i)
            children = (shape_of(diamond).measure, shape_of(circle).measure)
            self.trace.append(TraceEntry("R1", depth, shape.measure, children=children))
            logger.debug("R1 at depth %d: measure %s -> %s", depth, shape.measure, children)
            return self.solve(diamond, depth + 1) and self.solve(circle, depth + 1)

        workspace = _Workspace(i)
        while workspace.block_count > 1:
            before = workspace.measure
            diamond = workspace.split_leaf(workspace.pop_leaf())
            children = ((1, 0), workspace.measure)
            self.trace.append(TraceEntry("R2", depth, before, children=children))
            if not self.solve(diamond, depth + 1):
                return False
            depth += 1
        return self.solve(workspace.materialize(), depth)


def algocon(i: StreamedInstance, budget: int = DEFAULT_BUDGET) -> Decision:
    """Decide an ω=1 instance with a connected union graph and one non-trivial component."""

    _require_omega_one(i, "algocon")
    if not union_graph(i).is_connected():
        raise WrongShape("algocon requires a connected union graph.")
    if len(i.backbone_graph.nontrivial_components()) > 1:
        raise WrongShape("algocon requires at most one non-trivial backbone component.")

    run = _Run(budget)
    answer = run.solve(i, 0)
    witness = None
    if answer and len(run.pieces) == 1 and run.pieces[0].instance == i:
        witness = run.pieces[0].certificate
    logger.info("ALGOCON decided %s with %d trace entries", "YES" if answer else "NO", len(run.trace))
    return Decision(
        answer=answer,
        witness=witness,
        pieces=tuple(run.pieces) if answer else (),
        trace=tuple(run.trace),
    )
