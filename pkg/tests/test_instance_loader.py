"""Tests for instance loader functionality."""

from __future__ import annotations

import json
from pathlib import Path
import pytest

from streamed_planarity.errors import InstanceFormatError
from streamed_planarity.instance_loader import (
    get_instance_path,
    list_instances,
    load_certificate,
    load_instance,
    load_sefe,
    load_witness,
    save_certificate,
    save_composite,
    save_instance,
    save_sefe,
)
from streamed_planarity.instances import restrict
from streamed_planarity.models import DrawingCertificate, Piece, SefeInstance
from streamed_planarity.solve import decide

from builders import CORPUS, c6_chords, make


def test_save_and_load_instance(tmp_path: Path) -> None:
    """Test saving and loading an instance."""
    instance = c6_chords(2)
    instance_path = tmp_path / "c6.json"
    save_instance(instance, instance_path)

    loaded = load_instance(instance_path)

    assert loaded == instance
    assert loaded.stream == (("1", "4"), ("2", "5"), ("3", "6"))
    assert loaded.omega == 2


def test_saved_instance_layout(tmp_path: Path) -> None:
    """Test the on-disk schema: sorted backbone, stream in Ψ order, trailing newline."""
    instance = make(["b", "a", "c"], [("b", "a")], [("c", "b"), ("a", "c")], 1)
    path = tmp_path / "small.json"
    save_instance(instance, path)

    text = path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    data = json.loads(text)
    assert data == {
        "omega": 1,
        "vertices": ["b", "a", "c"],
        "backbone_edges": [["a", "b"]],
        "stream": [["b", "c"], ["a", "c"]],
    }


def test_positions_survive_round_trip(tmp_path: Path) -> None:
    """Test that pieces with non-default positions keep them."""
    piece = restrict(c6_chords(2), ["2", "3", "5", "6"])
    path = tmp_path / "piece.json"
    save_instance(piece, path)
    assert load_instance(path).positions == (2, 3)


def test_save_and_load_certificate(tmp_path: Path) -> None:
    """Test saving and loading the witness of a decision."""
    decision = decide(c6_chords(2))
    path = tmp_path / "c6.cert.json"
    save_certificate(decision.witness, path)

    loaded = load_certificate(path)
    assert loaded == decision.witness
    assert isinstance(load_witness(path), DrawingCertificate)


def test_composite_witness_round_trip(tmp_path: Path) -> None:
    """Test that composite witnesses load back as a list of pieces."""
    decision = decide(load_instance(CORPUS / "bowtie_w1.json"))
    assert decision.composite
    path = tmp_path / "bowtie.cert.json"
    save_composite(decision.pieces, path)

    loaded = load_witness(path)
    assert isinstance(loaded, list)
    assert all(isinstance(piece, Piece) for piece in loaded)
    assert [piece.instance for piece in loaded] == [piece.instance for piece in decision.pieces]


def test_save_and_load_sefe(tmp_path: Path) -> None:
    """Test saving and loading a SEFE instance."""
    sefe = SefeInstance(
        ("h", "a", "b"),
        frozenset({("a", "h"), ("b", "h")}),
        (frozenset({("a", "b")}), frozenset()),
    )
    path = tmp_path / "sefe.json"
    save_sefe(sefe, path)
    assert load_sefe(path) == sefe


def test_load_rejects_bad_documents(tmp_path: Path) -> None:
    """Test that schema problems and invalid JSON are reported."""
    path = tmp_path / "bad.json"
    path.write_text('{"omega": 1, "vertices": ["a"]}', encoding="utf-8")
    with pytest.raises(InstanceFormatError, match="missing backbone_edges, stream"):
        load_instance(path)

    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        load_instance(path)

    with pytest.raises(FileNotFoundError):
        load_instance(tmp_path / "missing.json")


@pytest.mark.parametrize(
    ("document", "message"),
    [
        ({"vertices": ["a"], "common_edges": 5, "graphs": []}, "must be lists"),
        ({"vertices": ["a"], "common_edges": [], "graphs": 3}, "must be lists"),
        ({"vertices": ["a"], "common_edges": [], "graphs": [{"exclusive_edges": 7}]}, "must be a list"),
    ],
)
def test_load_sefe_rejects_wrong_shapes(tmp_path: Path, document: dict, message: str) -> None:
    """Test that SEFE documents with non-list fields raise a format error."""
    path = tmp_path / "sefe.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(InstanceFormatError, match=message):
        load_sefe(path)


def test_save_instance_creates_directory(tmp_path: Path) -> None:
    """Test that save_instance creates parent directories and leaves no temp files."""
    nested_path = tmp_path / "new_dir" / "corpus" / "c6.json"
    save_instance(c6_chords(3), nested_path)

    assert nested_path.exists()
    assert load_instance(nested_path).omega == 3
    assert [p.name for p in nested_path.parent.iterdir()] == ["c6.json"]


def test_list_instances(tmp_path: Path) -> None:
    """Test that list_instances returns sorted ids."""
    corpus_dir = tmp_path / "corpus"
    corpus_dir.mkdir()
    for name in ["zebra", "alpha", "charlie", "bravo"]:
        save_instance(c6_chords(1), corpus_dir / f"{name}.json")

    assert list_instances(corpus_dir) == ["alpha", "bravo", "charlie", "zebra"]


def test_list_instances_empty_directory(tmp_path: Path) -> None:
    """Test listing instances when directory doesn't exist."""
    assert list_instances(tmp_path / "nonexistent") == []


def test_shipped_corpus_is_listed() -> None:
    """Test that the shipped corpus loads cleanly."""
    ids = list_instances(CORPUS)
    assert "c6_chords_w3" in ids
    for instance_id in ids:
        load_instance(get_instance_path(instance_id, CORPUS))


def test_get_instance_path_path_traversal_prevention() -> None:
    """Test that get_instance_path prevents path traversal attacks."""
    for instance_id in ["../secrets", "../../etc/passwd", "test/../../../secrets"]:
        with pytest.raises(ValueError, match="Invalid instance_id"):
            get_instance_path(instance_id)


def test_get_instance_path_invalid_characters() -> None:
    """Test that get_instance_path rejects invalid characters."""
    for instance_id in ["test instance", "test;instance", "test/instance", "test\\instance", ""]:
        with pytest.raises(ValueError, match="Invalid instance_id"):
            get_instance_path(instance_id)


def test_get_instance_path_valid_characters() -> None:
    """Test that get_instance_path accepts valid instance IDs."""
    valid_ids = ["test", "test_instance", "test-instance", "Test123", "c6_chords_w3"]

    for instance_id in valid_ids:
        path = get_instance_path(instance_id, "corpus")
        assert path.name == f"{instance_id}.json"
        assert "corpus" in str(path)
