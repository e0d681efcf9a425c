"""Top-level decision dispatch."""

from __future__ import annotations

from dataclasses import replace
import logging

from .algocon import algocon, split_children
from .certify import check_pieces
from .config import ALL_ISOLATED, DEFAULT_BUDGET, STAR, get_decide_mode
from .errors import UnsupportedOmega
from .graph import planarity_check
from .instances import shape_of, split_connected, union_components, union_graph
from .models import CheckReport, Decision, Piece, StreamedInstance, TraceEntry
from .star import search_certificate, solve_star

logger = logging.getLogger(__name__)


def _combine(rule: str, i: StreamedInstance, parts: list[StreamedInstance], solve) -> Decision:
    """AND the decisions of independent parts, stopping at the first NO."""

    trace = [TraceEntry(rule, 0, shape_of(i).measure, f"{len(parts)} pieces")]
    pieces = []
    answer = True
    witnessed = True
    for part in parts:
        decision = solve(part)
        trace.extend(replace(entry, depth=entry.depth + 1) for entry in decision.trace)
        if not decision.answer:
            answer = False
            break
        witnessed = witnessed and bool(decision.pieces)
        pieces.extend(decision.pieces)
    # a part decided without a witness (Saturated) leaves the whole undrawn
    keep = answer and witnessed
    return Decision(answer=answer, pieces=tuple(pieces) if keep else (), trace=tuple(trace))


def exhaustive(i: StreamedInstance, budget: int = DEFAULT_BUDGET) -> Decision:
    """Certificate search over every planar arrangement; the ω ≥ 2 fallback is NP-hard."""

    certificate = search_certificate(i, budget)
    answer = certificate is not None
    return Decision(
        answer=answer,
        witness=certificate,
        pieces=((Piece(i, certificate),) if answer else ()),
        trace=(TraceEntry("Exhaustive", 0, shape_of(i).measure, "np-hard"),),
    )


def _decide_omega_one(i: StreamedInstance, budget: int) -> Decision:
    pieces = split_connected(i)
    if len(pieces) == 1:
        return algocon(i, budget)
    logger.debug("Component split produced %d pieces", len(pieces))
    return _combine("Split", i, pieces, lambda piece: algocon(piece, budget))


def _is_saturated(i: StreamedInstance) -> bool:
    return not i.positions or i.positions[-1] - i.positions[0] < i.omega


def _decide_component(i: StreamedInstance, mode: str, budget: int) -> Decision:
    if mode == "algocon" or (mode == "auto" and i.omega == 1):
        if i.omega != 1:
            raise UnsupportedOmega(f"algocon mode requires omega=1, got {i.omega}")
        return _decide_omega_one(i, budget)
    if mode == "star":
        return solve_star(i, budget)
    if mode == "exhaustive":
        return exhaustive(i, budget)

    shape = shape_of(i)
    if shape.category in (ALL_ISOLATED, STAR):
        return solve_star(i, budget)
    if shape.nontrivial_components > 1 and _is_saturated(i):
        answer = planarity_check(union_graph(i))
        return Decision(
            answer=answer,
            trace=(TraceEntry("Saturated", 0, shape.measure, "yes" if answer else "no"),),
        )
    logger.info(
        "Falling back to exhaustive search (omega=%d, category=%s, %d components)",
        i.omega, shape.category, shape.nontrivial_components,
    )
    return exhaustive(i, budget)


def decide(i: StreamedInstance, mode: str = "auto", budget: int = DEFAULT_BUDGET) -> Decision:
    """Decide whether ``i`` admits a streamed drawing with backbone.

    ``auto`` splits by union-graph component and picks per component: ALGOCON
    at ω=1 and the star solver for star instances. Several non-trivial backbone
    components whose stream edges are all alive at the last time step are
    decided by planarity of the union graph, without a witness. Everything
    else goes to exhaustive search, which also tries every nesting of the
    components inside each other's faces.
    """

    mode = get_decide_mode(mode)
    parts = union_components(i)
    if len(parts) == 1:
        decision = _decide_component(i, mode, budget)
    else:
        decision = _combine("Components", i, parts, lambda part: _decide_component(part, mode, budget))
    logger.info("Decided %s (mode=%s, %d trace entries)", "YES" if decision.answer else "NO", mode, len(decision.trace))
    return decision


def decomposition_children(i: StreamedInstance) -> tuple[StreamedInstance, ...]:
    """The parts ``decide`` may hand out witnesses for instead of ``i`` itself."""

    parts = union_components(i)
    if len(parts) > 1:
        return tuple(parts)
    if i.omega != 1:
        return ()
    pieces = split_connected(i)
    if len(pieces) > 1:
        return tuple(pieces)
    return split_children(i)


def _cover(node: StreamedInstance, pieces: list[Piece], start: int) -> int | None:
    if start < len(pieces) and pieces[start].instance == node:
        return start + 1
    children = decomposition_children(node)
    if not children:
        return None
    index: int | None = start
    for child in children:
        index = _cover(child, pieces, index)
        if index is None:
            return None
    return index


def verify_pieces(i: StreamedInstance, pieces: list[Piece] | tuple[Piece, ...]) -> CheckReport:
    """Check a composite witness: its pieces must tile the decomposition of ``i`` and each must verify."""

    pieces = list(pieces)
    if _cover(i, pieces, 0) != len(pieces):
        return CheckReport.reject(
            "decomposition",
            f"The {len(pieces)} witness pieces do not match the decomposition of the instance.",
        )
    for report in check_pieces(pieces):
        if not report.accepted:
            return report
    return CheckReport.accept()
