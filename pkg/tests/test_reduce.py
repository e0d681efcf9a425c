"""Tests for the star-to-SEFE reduction, the SEFE checker and the tree gadget."""

from __future__ import annotations

import itertools
import random

import pytest

from streamed_planarity.errors import ShapeViolation, UnsupportedInstance, WrongCategory
from streamed_planarity.generators import random_star_instance
from streamed_planarity.graph import Graph, edge_key
from streamed_planarity.instance_loader import load_sefe
from streamed_planarity.models import SefeInstance
from streamed_planarity.oracle import brute_oracle
from streamed_planarity.reduce import sefe_brute_check, star_to_sefe, subdivision_label, theorem1_generate
from streamed_planarity.solve import decide

from builders import CORPUS, bowtie, c6_chords, cycle_instance


def _sefe(graphs: list[list[tuple[str, str]]], leaves: str = "abcd") -> SefeInstance:
    return SefeInstance(
        vertices=("h", *leaves),
        common_edges=frozenset((x, "h") for x in leaves),
        graphs=tuple(frozenset(graph) for graph in graphs),
    )


def test_star_to_sefe_window_sets() -> None:
    """Four stream edges at ω=3 give five graphs; edge 2 lives at steps 2..4."""
    instance = cycle_instance(6, [("1", "3"), ("1", "4"), ("2", "5"), ("4", "6")], 3)
    sefe = star_to_sefe(instance)
    assert sefe.k == 5
    assert sefe.common_edges == instance.backbone
    window = {v for v in sefe.vertices if v.startswith("d:2:")}
    assert window == {"d:2:2", "d:2:3", "d:2:4"}
    assert ("1", "d:2:3") in sefe.graphs[2]
    assert ("4", "d:2:3") in sefe.graphs[2]
    assert ("d:2:2", "d:2:4") in sefe.graphs[4]


def test_star_to_sefe_sizes() -> None:
    """Each edge gets min(ω, m+1-Ψ) subdivision vertices."""
    for omega in (1, 2, 3, 5):
        instance = c6_chords(omega)
        sefe = star_to_sefe(instance)
        added = len(sefe.vertices) - instance.n
        assert added == sum(min(omega, instance.m + 1 - p) for p in instance.positions)
        assert added <= omega * instance.m
        for index in range(1, sefe.k + 1):
            assert sefe.graph(index).edges >= sefe.common_edges


def test_star_to_sefe_edge_cases() -> None:
    """ω=1 leaves the last graph empty; an empty stream gives one graph."""
    sefe = star_to_sefe(c6_chords(1))
    assert sefe.graphs[-1] == frozenset()
    assert all(len(graph) == 2 for graph in sefe.graphs[:-1])

    empty = star_to_sefe(cycle_instance(5, [], 2))
    assert empty.k == 1
    assert empty.graphs == (frozenset(),)
    assert sefe_brute_check(empty)


def test_star_to_sefe_requires_star() -> None:
    """Two blocks are not a star instance."""
    with pytest.raises(WrongCategory):
        star_to_sefe(bowtie())


def test_subdivision_label() -> None:
    assert subdivision_label(3, 4) == "d:3:4"


def test_sefe_check_matches_c6_examples() -> None:
    """The reduction preserves the answers for the long chords of C6."""
    assert not sefe_brute_check(star_to_sefe(c6_chords(3)))
    assert sefe_brute_check(star_to_sefe(c6_chords(2)))


def test_sefe_check_trivial_and_unsupported() -> None:
    """One graph without exclusive edges is solvable; two common components are not supported."""
    assert sefe_brute_check(_sefe([[]]))
    split = SefeInstance(("a", "b", "c", "d"), frozenset({("a", "b"), ("c", "d")}), (frozenset(),))
    with pytest.raises(UnsupportedInstance):
        sefe_brute_check(split)


def test_sefe_corpus() -> None:
    """Pairwise alternating matchings on a star have no SEFE; single edges do."""
    assert not sefe_brute_check(load_sefe(CORPUS / "sefe" / "star4_alternating.json"))
    assert sefe_brute_check(load_sefe(CORPUS / "sefe" / "star4_single_edges.json"))


def _star_family(count: int, max_n: int, max_m: int, seed: int):
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        n = rng.randint(3, max_n)
        m = rng.randint(0, max_m)
        omega = rng.randint(1, 3)
        try:
            instance = random_star_instance(n, m, omega, seed=rng.randrange(10**6))
        except ValueError:
            continue
        produced += 1
        yield instance


def test_reduction_preserves_answers_on_random_stars() -> None:
    """SEFE solvability of the reduced instance equals drawability of the star."""
    for instance in _star_family(60, max_n=7, max_m=5, seed=11):
        expected = decide(instance, mode="star").answer
        assert sefe_brute_check(star_to_sefe(instance)) == expected, instance.to_dict()


def test_reduction_matches_oracle_on_small_stars() -> None:
    """On small stars the exhaustive oracle agrees as well."""
    for instance in _star_family(40, max_n=5, max_m=3, seed=12):
        assert sefe_brute_check(star_to_sefe(instance)) == brute_oracle(instance), instance.to_dict()


@pytest.mark.slow
def test_reduction_matches_oracle_on_500_stars() -> None:
    """Five hundred seeded stars with n <= 7, m <= 5 and ω <= 3."""
    disagreements = [
        instance.to_dict()
        for instance in _star_family(500, max_n=7, max_m=5, seed=13)
        if sefe_brute_check(star_to_sefe(instance)) != brute_oracle(instance)
    ]
    assert not disagreements, disagreements[:3]


def test_gadget_for_single_edges() -> None:
    """With one exclusive edge per graph only sentinel edges are streamed."""
    s = load_sefe(CORPUS / "sefe" / "star4_single_edges.json")
    gadget = theorem1_generate(s)
    assert gadget.rho == "h"
    assert gadget.pair_edges == ()
    assert gadget.instance.stream == (("s:1", "s:2"), ("s:3", "s:4"), ("s:5", "s:6"))
    assert gadget.instance.n == gadget.expected_vertex_count == 5 + 6
    assert decide(gadget.instance).answer


def test_gadget_padding_for_larger_omega() -> None:
    """At ω=3 one extra sentinel edge follows the first and the second group."""
    s = load_sefe(CORPUS / "sefe" / "star4_single_edges.json")
    gadget = theorem1_generate(s, omega=3)
    assert gadget.instance.stream == (
        ("s:1", "s:2"), ("s:7", "s:8"), ("s:3", "s:4"), ("s:10", "s:9"), ("s:5", "s:6"),
    )
    assert gadget.instance.n == gadget.expected_vertex_count == 5 + 10
    assert gadget.instance.omega == 3


def test_gadget_structure() -> None:
    """The backbone is a tree and the stream is a matching."""
    s = _sefe([[("a", "b"), ("c", "d")], [("a", "c")], [("b", "d")]])
    gadget = theorem1_generate(s)
    instance = gadget.instance
    backbone = Graph(instance.vertices, instance.backbone)
    assert backbone.is_connected()
    assert backbone.m == backbone.n - 1
    endpoints = [x for edge in instance.stream for x in edge]
    assert len(endpoints) == len(set(endpoints))
    assert not any(instance.is_isolated(x) for x in endpoints)
    assert len(gadget.pair_edges) == 2
    assert instance.n == gadget.expected_vertex_count == 5 + 2 * 2 * 1 + 6
    assert "a^1:a-b" in instance.vertices
    assert ("a^1:a-b", "b^1:a-b") in gadget.pair_edges


@pytest.mark.parametrize(
    ("graphs", "omega", "message"),
    [
        ([[("a", "b")], [("c", "d")], [("a", "c")]], 1, "omega"),
        ([[("a", "b")], [("c", "d")]], 2, "exactly 3"),
        ([[("a", "b")], [("a", "b")], [("c", "d")]], 2, "shares"),
        ([[("a", "b"), ("a", "c")], [], []], 2, "matching"),
    ],
)
def test_gadget_shape_violations(graphs, omega, message) -> None:
    """Inputs outside the construction's shape are refused."""
    with pytest.raises(ShapeViolation, match=message):
        theorem1_generate(_sefe(graphs), omega)


def test_gadget_needs_leaf_endpoints() -> None:
    """Exclusive edges may only join leaves of the common tree."""
    s = SefeInstance(
        ("h", "a", "b", "c", "d", "e"),
        frozenset({("a", "h"), ("b", "h"), ("c", "h"), ("d", "h"), ("d", "e")}),
        (frozenset({("a", "d")}), frozenset(), frozenset()),
    )
    with pytest.raises(ShapeViolation, match="not a leaf"):
        theorem1_generate(s)


def test_gadget_needs_a_tree() -> None:
    """A cycle as common graph is refused."""
    s = SefeInstance(("a", "b", "c"), frozenset({("a", "b"), ("b", "c"), ("a", "c")}), (frozenset(),) * 3)
    with pytest.raises(ShapeViolation, match="tree"):
        theorem1_generate(s)


@pytest.mark.parametrize("label", ["s:1", "a^1:a-b"])
def test_gadget_refuses_generated_label_space(label: str) -> None:
    """Tree vertices may not reuse the labels the gadget invents for sentinels and pair leaves."""
    s = SefeInstance(
        ("h", "a", "b", label),
        frozenset({edge_key("a", "h"), edge_key("b", "h"), edge_key("h", label)}),
        (frozenset({("a", "b")}), frozenset(), frozenset()),
    )
    with pytest.raises(ShapeViolation, match="collides"):
        theorem1_generate(s)


def test_gadget_negative_case() -> None:
    """Alternating matchings on a four-leaf star give a negative gadget."""
    s = load_sefe(CORPUS / "sefe" / "star4_alternating.json")
    gadget = theorem1_generate(s)
    assert len(gadget.pair_edges) == 6
    assert not decide(gadget.instance).answer


def _gadget_family() -> list[SefeInstance]:
    leaves = "abcde"
    pairs = list(itertools.combinations(leaves, 2))
    rng = random.Random(5)
    family = []
    while len(family) < 20:
        unused = list(pairs)
        rng.shuffle(unused)
        graphs = []
        for _ in range(3):
            size = rng.randint(0, 2)
            chosen: list[tuple[str, str]] = []
            for edge in list(unused):
                if len(chosen) == size:
                    break
                if not set(edge) & {x for e in chosen for x in e}:
                    chosen.append(edge)
                    unused.remove(edge)
            graphs.append(chosen)
        family.append(_sefe(graphs, leaves))
    return family


def test_gadget_equivalence_family() -> None:
    """The gadget is drawable exactly when the SEFE instance is solvable."""
    for s in _gadget_family():
        gadget = theorem1_generate(s)
        assert gadget.instance.n == gadget.expected_vertex_count
        assert decide(gadget.instance).answer == sefe_brute_check(s), s.to_dict()
