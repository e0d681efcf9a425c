"""Exhaustive ground-truth oracle over rotations, nestings and face assignments."""

from __future__ import annotations

import itertools
import logging

from .certify import Regions, backbone_part, certificate_of_trivial, check_certificate
from .config import DEFAULT_BUDGET
from .graph import planar_arrangements
from .models import DrawingCertificate, StreamedInstance

logger = logging.getLogger(__name__)


def brute_oracle(i: StreamedInstance, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff some (rotation, nesting, assignment) triple is accepted by ``check_certificate``.

    Isolated vertices without stream edges are pinned to face 0; every other
    legal region and corner choice is tried.
    """

    beta = backbone_part(i)
    if beta is None:
        return check_certificate(i, certificate_of_trivial(i)).accepted

    used = {x for edge in i.stream for x in edge}
    isolated = [q for q in i.isolated_vertices if q in used]
    idle = {q: 0 for q in i.isolated_vertices if q not in used}
    checked = 0

    for rotation, faces, nesting in planar_arrangements(beta, budget):
        regions = Regions.from_nesting(faces, nesting)
        for placement in itertools.product(regions.primaries, repeat=len(isolated)):
            vertex_faces = dict(zip(isolated, placement))
            vertex_faces.update(idle)

            per_edge = []
            for _, edge in i.entries():
                forced = {vertex_faces[x] for x in edge if i.is_isolated(x)}
                candidates = sorted(forced) if len(forced) == 1 else [] if forced else regions.primaries
                options = []
                for region in candidates:
                    ends = []
                    for x in edge:
                        if i.is_isolated(x):
                            ends.append((None,))
                        else:
                            ends.append(tuple(faces[f][k][1] for f, k in regions.occurrences(region, x)))
                    for corner in itertools.product(*ends):
                        options.append((region, corner))
                per_edge.append(options)

            for combo in itertools.product(*per_edge):
                certificate = DrawingCertificate(
                    rotation=rotation,
                    stream_faces={p: region for p, (region, _) in zip(i.positions, combo)},
                    vertex_faces=vertex_faces,
                    corners={p: corner for p, (_, corner) in zip(i.positions, combo)},
                    nesting=nesting,
                )
                checked += 1
                if check_certificate(i, certificate).accepted:
                    logger.debug("Oracle accepted after %d certificates", checked)
                    return True
    logger.debug("Oracle rejected all %d certificates", checked)
    return False
