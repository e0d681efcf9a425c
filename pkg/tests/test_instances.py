"""Tests for instance validation, classification and splitting."""

from __future__ import annotations

import pytest

from streamed_planarity.config import ALL_ISOLATED, MULTI, SINGLE_NONTRIVIAL, STAR
from streamed_planarity.errors import DisconnectedUnion, InstanceFormatError, UnsupportedOmega
from streamed_planarity.instances import (
    classify,
    conflict_pairs,
    remap_stream,
    restrict,
    split_connected,
    union_components,
    union_graph,
    validate,
)
from streamed_planarity.models import StreamedInstance

from builders import bowtie, c6_chords, cycle_instance, make


TRIANGLES = [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")]


def test_valid_instance_has_no_violations() -> None:
    """A cycle with chords is valid and its union graph has |S| + m edges."""
    instance = c6_chords(3)
    report = validate(instance)
    assert report.ok
    assert union_graph(instance).m == len(instance.backbone) + instance.m


def test_validate_reports_every_violation() -> None:
    """Each broken invariant gets its own message."""
    instance = make(
        ["a", "b", "c"],
        [("a", "b")],
        [("a", "b"), ("a", "c"), ("c", "a"), ("a", "z")],
        0,
    )
    violations = validate(instance).violations
    assert any("omega must be at least 1" in v for v in violations)
    assert any("stream edge in backbone at position 1" in v for v in violations)
    assert any("duplicate stream edge at position 3" in v for v in violations)
    assert any("undeclared endpoint at position 4" in v for v in violations)


def test_validate_rejects_nonplanar_backbone() -> None:
    """A K5 backbone is reported as not planar."""
    labels = ["1", "2", "3", "4", "5"]
    k5 = [(u, v) for index, u in enumerate(labels) for v in labels[index + 1:]]
    report = validate(make(labels, k5, [], 1))
    assert report.violations == ("backbone not planar",)


def test_validate_rejects_self_loops() -> None:
    """Loops in the stream are violations."""
    report = validate(make(["a", "b"], [], [("a", "a")], 1))
    assert any("stream self-loop" in v for v in report.violations)


def test_alive_edges_follow_the_window() -> None:
    """Edge at position p is alive for t in p..p+ω-1."""
    instance = c6_chords(2)
    assert instance.alive_positions(1) == (1,)
    assert instance.alive_positions(2) == (1, 2)
    assert instance.alive_positions(3) == (2, 3)
    assert instance.alive_edges(3) == (("2", "5"), ("3", "6"))


def test_conflict_pairs_grow_with_omega() -> None:
    """Pairs alive together at ω=2 are the consecutive ones; ω=3 adds the rest."""
    assert conflict_pairs(c6_chords(1)) == frozenset()
    assert conflict_pairs(c6_chords(2)) == frozenset({(1, 2), (2, 3)})
    assert conflict_pairs(c6_chords(3)) == frozenset({(1, 2), (2, 3), (1, 3)})


def test_classify_examples() -> None:
    """Isolated-only, one-block-plus-isolated and two-block backbones."""
    path = make(["a", "b", "c"], [], [("a", "b"), ("b", "c")], 3)
    assert classify(path).category == ALL_ISOLATED

    star = cycle_instance(4, [("1", "q")], 1, extra=["q"])
    shape = classify(star)
    assert shape.category == STAR
    assert shape.isolated_count == 1
    assert shape.measure == (1, 0)

    assert classify(bowtie()).category == MULTI
    assert classify(bowtie()).block_count == 2


def test_classify_counts_isolated_isolated_edges() -> None:
    """A stream edge between two isolated vertices leaves the Star category."""
    instance = cycle_instance(3, [("1", "p"), ("p", "q")], 1, extra=["p", "q"])
    shape = classify(instance)
    assert shape.category == SINGLE_NONTRIVIAL
    assert shape.measure == (1, 1)


def test_classify_requires_connected_union() -> None:
    """A stray isolated vertex disconnects the union graph."""
    instance = cycle_instance(3, [], 1, extra=["q"])
    with pytest.raises(DisconnectedUnion):
        classify(instance)


def test_remap_stream_keeps_earliest_parallel_edge() -> None:
    """Loops vanish and parallel edges keep the smaller position."""
    entries = [(1, ("a", "b")), (2, ("b", "c")), (4, ("a", "c"))]
    stream, positions = remap_stream(entries, lambda v: "bc" if v in ("b", "c") else v)
    assert stream == (("a", "bc"),)
    assert positions == (1,)


def test_restrict_keeps_original_positions() -> None:
    """Sub-instances keep the Ψ values of the edges they inherit."""
    backbone = [edge for edge in TRIANGLES if edge != ("b", "c")]
    instance = make(["a", "b", "c", "x", "y", "z"], backbone, [("a", "x"), ("b", "c")], 2)
    part = restrict(instance, ["a", "b", "c"])
    assert part.stream == (("b", "c"),)
    assert part.positions == (2,)
    assert not part.has_default_positions


def test_union_components_split_disconnected_instances() -> None:
    """Two triangles without stream edges form two parts."""
    instance = make(["a", "b", "c", "x", "y", "z"], TRIANGLES, [], 1)
    parts = union_components(instance)
    assert [part.vertices for part in parts] == [("a", "b", "c"), ("x", "y", "z")]
    joined = make(["a", "b", "c", "x", "y", "z"], TRIANGLES, [("a", "x")], 1)
    assert union_components(joined) == [joined]


def test_split_connected_two_triangles() -> None:
    """Each piece keeps one triangle and sees the other as one isolated vertex."""
    instance = make(["a", "b", "c", "x", "y", "z"], TRIANGLES, [("a", "x")], 1)
    pieces = split_connected(instance)
    assert len(pieces) == 2
    first, second = pieces
    assert first.vertices == ("a", "b", "c", "x+z")
    assert first.stream == (("a", "x+z"),)
    assert second.vertices == ("x", "y", "z", "a+c")
    assert second.stream == (("a+c", "x"),)
    for piece in pieces:
        assert len(piece.backbone) == 3
        assert len(piece.isolated_vertices) == 1
        assert len(piece.backbone_graph.nontrivial_components()) == 1


def test_split_connected_identity_and_errors() -> None:
    """One component is returned unchanged; ω must be 1."""
    triangle = cycle_instance(3, [("1", "q")], 1, extra=["q"])
    assert split_connected(triangle) == [triangle]
    with pytest.raises(UnsupportedOmega):
        split_connected(triangle.with_omega(2))


def test_from_dict_reports_schema_problems() -> None:
    """Missing keys and wrong types raise InstanceFormatError."""
    with pytest.raises(InstanceFormatError, match="missing"):
        StreamedInstance.from_dict({"omega": 1})
    with pytest.raises(InstanceFormatError, match="omega"):
        StreamedInstance.from_dict({"omega": "1", "vertices": [], "backbone_edges": [], "stream": []})
    with pytest.raises(InstanceFormatError, match="pair"):
        StreamedInstance.from_dict({"omega": 1, "vertices": ["a"], "backbone_edges": [["a"]], "stream": []})
    with pytest.raises(InstanceFormatError, match="increasing"):
        StreamedInstance.from_dict(
            {"omega": 1, "vertices": ["a", "b", "c"], "backbone_edges": [],
             "stream": [["a", "b"], ["b", "c"]], "positions": [2, 1]}
        )


def test_to_dict_omits_default_positions() -> None:
    """Positions are only serialized when they differ from 1..m."""
    instance = c6_chords(2)
    assert "positions" not in instance.to_dict()
    assert StreamedInstance.from_dict(instance.to_dict()) == instance
    part = restrict(instance, ["2", "5", "3", "6"])
    assert part.to_dict()["positions"] == [2, 3]
