"""Mapper from decision results to line-oriented reports, JSON payloads and DOT."""

from __future__ import annotations

from typing import Any

import networkx as nx

from .instances import conflict_pairs, shape_of, union_graph
from .models import CheckReport, Decision, StreamedInstance, TraceEntry
from .instance_loader import composite_to_dict


def _format_measure(measure: tuple[int, ...]) -> str:
    return ",".join(str(x) for x in measure)


def _map_trace_entry(entry: TraceEntry) -> str:
    """One ``key=value`` line per applied rule."""
    parts = [
        f"rule={entry.rule}",
        f"depth={entry.depth}",
        f"measure={_format_measure(entry.measure)}",
    ]
    if entry.children:
        parts.append("children=" + ";".join(_format_measure(child) for child in entry.children))
    if entry.note:
        parts.append(f"note={entry.note}")
    return " ".join(parts)


def map_decision_to_lines(decision: Decision) -> list[str]:
    """First line YES/NO, then the rule trace."""
    lines = ["YES" if decision.answer else "NO"]
    if decision.composite:
        lines.append(f"pieces={len(decision.pieces)}")
    lines.extend(_map_trace_entry(entry) for entry in decision.trace)
    return lines


def map_check_report_to_lines(report: CheckReport) -> list[str]:
    """First line ACCEPT/REJECT, then the reason fields if any."""
    if report.accepted:
        return ["ACCEPT"]
    reason = report.reason
    lines = ["REJECT", f"kind={reason.kind}"]
    if reason.time_step is not None:
        lines.append(f"time_step={reason.time_step}")
    if reason.face is not None:
        lines.append(f"face={reason.face}")
    if reason.edges:
        lines.append("edges=" + ",".join(str(p) for p in reason.edges))
    lines.append(f"message={reason.message}")
    return lines


def map_decision_to_dict(decision: Decision) -> dict[str, Any]:
    """JSON payload for the HTTP surface."""
    payload: dict[str, Any] = {
        "answer": "yes" if decision.answer else "no",
        "trace": [entry.to_dict() for entry in decision.trace],
        "witness": decision.witness.to_dict() if decision.witness is not None else None,
    }
    if decision.composite:
        payload["composite"] = composite_to_dict(decision.pieces)
    return payload


def describe_instance(i: StreamedInstance) -> dict[str, Any]:
    """Summary counts used by the ``describe`` command."""
    shape = shape_of(i)
    return {
        "n": i.n,
        "m": i.m,
        "omega": i.omega,
        **shape.to_dict(),
        "union_components": union_graph(i).component_count,
        "conflict_pairs": len(conflict_pairs(i)),
    }


def _dot_id(label: str) -> str:
    # to_pydot refuses unquoted names containing ':'
    return '"' + label.replace('"', '\\"') + '"'


def export_dot(i: StreamedInstance) -> str:
    """Schematic DOT: backbone edges solid, stream edges dashed and labeled with their position."""
    drawing = nx.MultiGraph(name="streamed")
    drawing.add_nodes_from(_dot_id(v) for v in i.vertices)
    for u, v in sorted(i.backbone):
        drawing.add_edge(_dot_id(u), _dot_id(v), style="solid")
    for position, (u, v) in i.entries():
        drawing.add_edge(_dot_id(u), _dot_id(v), style="dashed", label=_dot_id(f"Ψ={position}"))
    return nx.nx_pydot.to_pydot(drawing).to_string()
