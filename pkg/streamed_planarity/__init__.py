"""Streamed planarity with a backbone: decide, verify, reduce and generate."""

from .algocon import algocon, split_case_r1, split_case_r2
from .certify import check_certificate, check_pieces
from .graph import Graph, RotationSystem, blocks, canonical_faces, enumerate_planar_rotations, planarity_check
from .instances import classify, split_connected, validate
from .models import Decision, DrawingCertificate, SefeInstance, StreamedInstance
from .oracle import brute_oracle
from .reduce import sefe_brute_check, star_to_sefe, theorem1_generate
from .solve import decide
from .star import solve_star

__all__ = [
    "Decision",
    "DrawingCertificate",
    "Graph",
    "RotationSystem",
    "SefeInstance",
    "StreamedInstance",
    "algocon",
    "blocks",
    "brute_oracle",
    "canonical_faces",
    "check_certificate",
    "check_pieces",
    "classify",
    "decide",
    "enumerate_planar_rotations",
    "planarity_check",
    "sefe_brute_check",
    "solve_star",
    "split_case_r1",
    "split_case_r2",
    "split_connected",
    "star_to_sefe",
    "theorem1_generate",
    "validate",
]
