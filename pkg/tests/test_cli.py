"""Tests for the command-line front end."""

from __future__ import annotations

import json
from pathlib import Path

import networkx as nx
import pydot
import pytest

from streamed_planarity.cli import main
from streamed_planarity.instance_loader import load_certificate, load_instance, load_sefe, save_certificate, save_instance
from streamed_planarity.models import DrawingCertificate

from builders import CORPUS, cycle_instance


def _corpus(name: str) -> str:
    return str(CORPUS / f"{name}.json")


def test_decide_prints_answer_and_trace(capsys: pytest.CaptureFixture[str]) -> None:
    """YES/NO first, then one key=value line per rule."""
    assert main(["decide", _corpus("c6_chords_w2")]) == 0
    assert capsys.readouterr().out == "YES\nrule=Star depth=0 measure=1,0 note=yes\n"

    assert main(["decide", _corpus("c6_chords_w3")]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "NO"


def test_decide_then_verify(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """A written witness is accepted by verify."""
    certificate = tmp_path / "c6.cert.json"
    assert main(["decide", _corpus("c6_chords_w2"), "--certificate", str(certificate)]) == 0
    assert certificate.exists()
    capsys.readouterr()

    assert main(["verify", _corpus("c6_chords_w2"), str(certificate)]) == 0
    assert capsys.readouterr().out == "ACCEPT\n"


def test_verify_reports_first_failing_step(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Putting all three chords in face 0 fails as soon as two are alive."""
    good = tmp_path / "good.json"
    main(["decide", _corpus("c6_chords_w2"), "--certificate", str(good)])
    rotation = load_certificate(good).rotation
    bad = tmp_path / "bad.json"
    save_certificate(DrawingCertificate(rotation, {1: 0, 2: 0, 3: 0}, {}), bad)
    capsys.readouterr()

    assert main(["verify", _corpus("c6_chords_w2"), str(bad)]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert lines[:5] == ["REJECT", "kind=planarity", "time_step=2", "face=0", "edges=1,2"]
    assert lines[5].startswith("message=")


def test_composite_witness_round_trip(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Multi-piece decisions write a composite witness that verify checks piece by piece."""
    certificate = tmp_path / "bowtie.cert.json"
    assert main(["decide", _corpus("bowtie_w1"), "--certificate", str(certificate)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["YES", "pieces=2"]
    assert "pieces" in json.loads(certificate.read_text(encoding="utf-8"))

    assert main(["verify", _corpus("bowtie_w1"), str(certificate)]) == 0
    assert capsys.readouterr().out == "ACCEPT\npieces=2\n"


def test_composite_witness_must_match_the_instance(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """A composite witness is checked against the decomposition of the instance it is verified for."""
    certificate = tmp_path / "triangles.cert.json"
    assert main(["decide", _corpus("two_triangles_w1"), "--certificate", str(certificate)]) == 0
    capsys.readouterr()

    assert main(["verify", _corpus("octahedron_antipodal_w1"), str(certificate)]) == 1
    assert capsys.readouterr().out.splitlines()[:2] == ["REJECT", "kind=decomposition"]

    document = json.loads(certificate.read_text(encoding="utf-8"))
    document["pieces"] = document["pieces"][:1]
    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps(document), encoding="utf-8")
    assert main(["verify", _corpus("two_triangles_w1"), str(partial)]) == 1
    assert capsys.readouterr().out.splitlines()[:2] == ["REJECT", "kind=decomposition"]


def test_verify_malformed_corners_is_an_error(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """A certificate whose corners are not an object exits with 2 instead of crashing."""
    good = tmp_path / "good.json"
    main(["decide", _corpus("c6_chords_w2"), "--certificate", str(good)])
    document = json.loads(good.read_text(encoding="utf-8"))
    document["corners"] = 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(document), encoding="utf-8")
    capsys.readouterr()

    assert main(["verify", _corpus("c6_chords_w2"), str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error: Corners must be a JSON object")


def test_no_certificate_written_for_no(tmp_path: Path) -> None:
    """NO answers leave the certificate path untouched."""
    certificate = tmp_path / "never.json"
    assert main(["decide", _corpus("k4_hub_w1"), "--certificate", str(certificate)]) == 1
    assert not certificate.exists()


def test_gen_random_is_byte_identical(tmp_path: Path) -> None:
    """The same seed writes the same bytes."""
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "random", "--n", "8", "--m", "5", "--omega", "2", "--seed", "7"]
    assert main([*args, "-o", str(first)]) == 0
    assert main([*args, "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert load_instance(first).m == 5


@pytest.mark.parametrize("shape", ["--star", "--tree"])
def test_gen_random_shapes(tmp_path: Path, shape: str) -> None:
    """Star and tree generators are reachable from the command line."""
    path = tmp_path / "shape.json"
    assert main(["gen", "random", shape, "--n", "7", "--m", "3", "-o", str(path)]) == 0
    instance = load_instance(path)
    assert instance.n == 7
    assert instance.m == 3


def test_gen_random_impossible_request(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Asking for more stream edges than free pairs is an error."""
    path = tmp_path / "x.json"
    assert main(["gen", "random", "--tree", "--n", "4", "--m", "10", "-o", str(path)]) == 2
    assert capsys.readouterr().err.startswith("error: Cannot sample")
    assert not path.exists()


def test_reduce_to_sefe(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Three chords at ω=2 need four graphs and five subdivision vertices."""
    output = tmp_path / "sefe.json"
    assert main(["reduce-to-sefe", _corpus("c6_chords_w2"), "-o", str(output)]) == 0
    assert capsys.readouterr().out == "graphs=4 vertices=11\n"
    assert load_sefe(output).k == 4

    assert main(["reduce-to-sefe", _corpus("bowtie_w1"), "-o", str(output)]) == 2
    assert "Star" in capsys.readouterr().err


def test_gen_theorem1(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """The gadget command reports ρ and sizes and writes a decidable instance."""
    output = tmp_path / "gadget.json"
    sefe = str(CORPUS / "sefe" / "star4_single_edges.json")
    assert main(["gen", "theorem1", sefe, "-o", str(output)]) == 0
    assert capsys.readouterr().out == "rho=h vertices=11 stream=3\n"
    assert main(["decide", str(output)]) == 0

    assert main(["gen", "theorem1", sefe, "--omega", "1", "-o", str(output)]) == 2


def test_export_dot(tmp_path: Path) -> None:
    """Backbone edges are solid, stream edges dashed and labeled with Ψ."""
    output = tmp_path / "c6.dot"
    assert main(["export-dot", _corpus("c6_chords_w3"), "-o", str(output)]) == 0
    text = output.read_text(encoding="utf-8")
    assert text.startswith("graph streamed {")

    drawing = nx.nx_pydot.from_pydot(pydot.graph_from_dot_data(text)[0])
    styles = {
        (u, v, data["style"].strip('"'), data.get("label", "").strip('"'))
        for u, v, data in drawing.edges(data=True)
    }
    assert {"1", "2", "3", "4", "5", "6"} <= set(drawing.nodes)
    assert drawing.number_of_edges() == 9
    assert any(style == "solid" and {u, v} == {"1", "2"} for u, v, style, _ in styles)
    assert any(style == "dashed" and {u, v} == {"2", "5"} and label == "Ψ=2" for u, v, style, label in styles)


def test_oracle_command(capsys: pytest.CaptureFixture[str]) -> None:
    """The oracle prints YES or NO with the matching exit code."""
    assert main(["oracle", _corpus("c6_chords_w3")]) == 1
    assert capsys.readouterr().out == "NO\n"
    assert main(["oracle", _corpus("path_chord_w1")]) == 0


def test_describe(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Describe prints counts and lists violations."""
    assert main(["-v", "describe", _corpus("c6_chords_w3")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "category=Star" in out
    assert "conflict_pairs=3" in out
    assert "union_components=1" in out

    broken = tmp_path / "broken.json"
    save_instance(cycle_instance(4, [("1", "2")], 1), broken)
    assert main(["describe", str(broken)]) == 1
    assert "violation=stream edge in backbone at position 1: (1, 2)" in capsys.readouterr().out


def test_errors_exit_with_two(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Invalid instances, missing files and unsupported modes are errors."""
    broken = tmp_path / "broken.json"
    save_instance(cycle_instance(4, [("1", "2")], 1), broken)
    assert main(["decide", str(broken)]) == 2
    assert "Invalid instance" in capsys.readouterr().err

    assert main(["decide", str(tmp_path / "missing.json")]) == 2
    assert main(["decide", _corpus("c6_chords_w2"), "--mode", "algocon"]) == 2
    assert "omega=1" in capsys.readouterr().err
