"""Deciding whether an arc's monodromy image can be pushed off it.

An arc preserves fibredness exactly when it meets its monodromy image only
at its endpoints after minimising isotopies.  All modeled monodromies are
products of positive twists, so the right-veering hypothesis behind that
criterion holds by construction; the verdicts record this assumption.

Three fast one-directional filters come first (a too-long consecutive band
run, a disk crossing with four separated ends, and a once-crossing parallel
run), then the exact decision via the reduced crossing diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arcs import (
    CrossingDiagram,
    NormalArc,
    image_with_wraps,
    monodromy_pair_diagram,
    pair_crossings,
    place_arc,
    reduce_bigons,
    self_crossings,
)
from .monodromy import MonodromyAction, RunTracker
from .surfaces import PolygonalSurface

RIGHT_VEERING_NOTE = "monodromy is a product of positive twists (right-veering assumed)"


@dataclass(frozen=True)
class CleanlinessVerdict:
    verdict: str                      # "clean" | "unclean"
    witness: dict
    inessential: bool = False
    diagram: Optional[CrossingDiagram] = None

    @property
    def is_clean(self) -> bool:
        return self.verdict == "clean"

    def to_json_dict(self) -> dict:
        out = {"verdict": self.verdict, "witness": self.witness,
               "assumption": RIGHT_VEERING_NOTE}
        if self.inessential:
            out["inessential"] = True
        if self.diagram is not None:
            out["diagram"] = self.diagram.to_json_dict()
        return out


def _run_violation(surface: PolygonalSurface, action: MonodromyAction,
                   arc_bands, arc_disks) -> Optional[dict]:
    tracker = RunTracker(surface)
    for t, b in enumerate(arc_bands):
        tracker.step(b, arc_disks[t], arc_disks[t + 1])
        for (c, _, _), length in tracker.states.items():
            ell = action.twist_lengths[c]
            if length > ell:
                return {"kind": "consecutive-run", "annulus": c,
                        "twist_length": ell, "run_length": length,
                        "bands": list(arc_bands[t - length + 1:t + 1])}
    return None


def prune_consecutive(surface: PolygonalSurface, action: MonodromyAction,
                      arc: NormalArc) -> Optional[dict]:
    """Witness that some consecutive band run exceeds its annulus twist."""
    return _run_violation(surface, action, arc.bands, arc.disks(surface))


def _separated(places) -> bool:
    named = [p for p in places if p is not None]
    return len(named) == len(set(named))


def prune_conflict(surface: PolygonalSurface, action: MonodromyAction,
                   arc: NormalArc) -> Optional[dict]:
    """Witness: a disk crossing with the image whose four chord ends lie in
    four distinct bands, hence removable by no isotopy."""
    A = place_arc(surface, arc, "a")
    B = image_with_wraps(surface, action, arc)
    for c in pair_crossings(surface, A, B):
        if c.kind == "chord" and _separated(c.places):
            return {"kind": "disk-conflict", "disk": c.disk,
                    "places": list(c.places), "chords": [c.a_chord, c.b_chord]}
    return None


def prune_generalised_conflict(surface: PolygonalSurface, action: MonodromyAction,
                               arc: NormalArc) -> Optional[dict]:
    """Witness: subarcs of the arc and its image running through the same
    bands, separated ends, crossing exactly once."""
    A = place_arc(surface, arc, "a")
    B = image_with_wraps(surface, action, arc)
    for c in pair_crossings(surface, A, B):
        if c.kind == "run" and _separated(c.places):
            return {"kind": "parallel-run-conflict", "disk": c.disk,
                    "run_bands": list(c.run_bands), "places": list(c.places)}
    return None


def is_clean(surface: PolygonalSurface, action: MonodromyAction,
             arc: NormalArc) -> CleanlinessVerdict:
    """Decide whether the arc meets its image only at its endpoints.

    A clean verdict always carries the reduced zero-crossing diagram; the
    filters are one-directional and never trusted for "clean".
    """
    if arc.is_degenerate:
        return CleanlinessVerdict("clean", {"kind": "degenerate-boundary-parallel"},
                                  inessential=True)
    w = prune_consecutive(surface, action, arc)
    if w is None:
        w = prune_conflict(surface, action, arc)
    if w is None:
        w = prune_generalised_conflict(surface, action, arc)
    diagram = reduce_bigons(monodromy_pair_diagram(surface, action, arc))
    if diagram.count == 0:
        if w is not None:
            raise AssertionError(f"filter fired on a clean arc: {w}")
        return CleanlinessVerdict("clean", {"kind": "zero-crossing-diagram"},
                                  diagram=diagram)
    if w is None:
        c = diagram.crossings[0]
        w = {"kind": "irreducible-crossing", "disk": c.disk,
             "count": diagram.count}
    return CleanlinessVerdict("unclean", w, diagram=diagram)


def verify_witness(surface: PolygonalSurface, action: MonodromyAction,
                   arc: NormalArc, verdict: CleanlinessVerdict) -> bool:
    """Re-check a verdict's witness from scratch."""
    w = verdict.witness
    kind = w.get("kind")
    if verdict.is_clean:
        if kind == "degenerate-boundary-parallel":
            return arc.is_degenerate
        return (verdict.diagram is not None and verdict.diagram.count == 0
                and monodromy_pair_diagram(surface, action, arc).count == 0)
    if kind == "consecutive-run":
        ell = action.twist_lengths[w["annulus"]]
        return w["run_length"] > ell and prune_consecutive(surface, action, arc) is not None
    if kind == "disk-conflict":
        return prune_conflict(surface, action, arc) is not None
    if kind == "parallel-run-conflict":
        return prune_generalised_conflict(surface, action, arc) is not None
    if kind == "irreducible-crossing":
        return monodromy_pair_diagram(surface, action, arc).count > 0
    return False
