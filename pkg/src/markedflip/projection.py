"""Oriented projection of a triangulation onto the face of an arc."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .curves import (Coincident, CurveError, CurveTrace, first_crossed_arc,
                     intersection_numbers, is_reduced, transport)
from .surface import FlipRecord, Triangulation, flip


class ProjectionError(RuntimeError):
    """The flip loop failed to terminate within its watchdog bound."""


class IncompatibleArcs(ValueError):
    pass


@dataclass
class ProjectionResult:
    final_triangulation: Triangulation
    flip_sequence: list[FlipRecord]
    measure_trace: list[int]
    final_curve: Coincident
    watchdog: int
    anomalies: list[str] = field(default_factory=list)

    @property
    def flips(self) -> int:
        return len(self.flip_sequence)


def weight(t: Triangulation, gamma: CurveTrace) -> int:
    """Crossings of ``gamma`` with ``t`` minus those with its first crossed arc; 0 if ``gamma`` is in ``t``."""
    if isinstance(gamma, Coincident):
        return 0
    counts, total = intersection_numbers(gamma, t)
    return total - counts[first_crossed_arc(gamma)]


def watchdog_bound(t: Triangulation, gamma: CurveTrace) -> int:
    _, total = intersection_numbers(gamma, t)
    return (total + 1) * (t.n + 1)


def project(t: Triangulation, gamma: CurveTrace) -> ProjectionResult:
    """Flip the first arc crossed by ``gamma`` until ``gamma`` belongs to the triangulation.

    The measure trace lists the weight before every flip and after the
    last one.  A weight that fails to drop while positive, or a run that
    does not end with exactly one flip at weight 0, is recorded in
    ``anomalies`` rather than raised.
    """
    if not is_reduced(gamma, t):
        raise CurveError("gamma must be a reduced trace")
    limit = watchdog_bound(t, gamma)
    flips: list[FlipRecord] = []
    measures = [weight(t, gamma)]
    anomalies = []
    while not isinstance(gamma, Coincident):
        if len(flips) >= limit:
            raise ProjectionError(f"watchdog tripped after {limit} flips")
        t, rec = flip(t, first_crossed_arc(gamma))
        gamma = transport(gamma, rec)
        flips.append(rec)
        w = weight(t, gamma)
        prev = measures[-1]
        if prev > 0 and w >= prev:
            anomalies.append(f"weight did not decrease at flip {len(flips)}: {prev} -> {w}")
        if prev == 0 and not isinstance(gamma, Coincident):
            anomalies.append(f"flip {len(flips)} at weight 0 did not produce gamma")
        measures.append(w)
    return ProjectionResult(t, flips, measures, gamma, limit, anomalies)


def project_multi(t: Triangulation, gammas: Sequence[CurveTrace]) -> ProjectionResult:
    """Compose projections right to left: the last curve is projected first.

    All remaining curves are carried along every flip.  Once a curve is an
    arc of the triangulation, any later curve crossing it means the arcs
    are incompatible.
    """
    pending = list(gammas)
    flips: list[FlipRecord] = []
    measures: list[int] = []
    anomalies: list[str] = []
    placed: list[Coincident] = []
    watchdog = 0
    while pending:
        gamma = pending.pop()
        res = project(t, gamma)
        watchdog += res.watchdog
        anomalies += res.anomalies
        measures += res.measure_trace
        for rec in res.flip_sequence:
            pending = [transport(g, rec) for g in pending]
            placed = [transport(g, rec) for g in placed]
            for g in placed:
                if not isinstance(g, Coincident):
                    raise IncompatibleArcs("a previously placed arc was flipped away")
        flips += res.flip_sequence
        t = res.final_triangulation
        arc = res.final_curve.arc
        placed.append(res.final_curve)
        for g in pending:
            if any(h >> 1 == arc for h in g.crossings):
                raise IncompatibleArcs("the arcs cross; no triangulation contains them all")
    final = placed[-1] if placed else None
    return ProjectionResult(t, flips, measures, final, watchdog, anomalies)
