"""Exhaustive enumeration of clean arcs up to symmetry.

Breadth-first search over arc codes: prefixes grow one band at a time,
children are pruned by the endpoint rule of normal position, by
consecutive-run violations, by forced crossings with the monodromy image
(all of which persist under extension), and by embeddedness.  Completions
are accepted exactly when the full cleanness decision says so.  Prefixes
and accepted arcs are reduced modulo the symmetry group generated by the
monodromy and its stored twist-compatible involutions.

When the search tree closes before the depth bound the run certifies
finiteness; otherwise the result records a depth-bound hit and never
pretends to be complete.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .arcs import (
    NormalArc,
    Placed,
    image_with_wraps,
    pair_crossings,
    place_arc,
    self_crossings,
    transform,
)
from .cleanness import CleanlinessVerdict, is_clean
from .errors import SurfaceParameterError
from .monodromy import MonodromyAction, RunTracker, SurfaceMap
from .surfaces import PolygonalSurface, band_name_torus, torus


# ---------------------------------------------------------------------------
# symmetry group on arc codes


def code_symmetry_group(action: MonodromyAction, bound: int = 4096) -> list[SurfaceMap]:
    """The finite group of code transformations generated by the monodromy
    and, for each stored involution g, the composite g . monodromy."""
    gens = [action.phi]
    for g in action.symmetries:
        gens.append(g.compose(action.phi, name=f"{g.name}.phi"))
    elems: list[SurfaceMap] = []

    def add(m: SurfaceMap) -> bool:
        for e in elems:
            if e.same_action(m):
                return False
        elems.append(m)
        return True

    identity = action.phi.compose(action.phi.inverse())
    add(identity)
    frontier = [identity]
    while frontier:
        m = frontier.pop()
        for g in gens:
            nm = g.compose(m)
            if add(nm):
                frontier.append(nm)
            if len(elems) > bound:
                raise SurfaceParameterError("code symmetry group unexpectedly large")
    return elems


def _slide_equivalents(surface: PolygonalSurface, arc: NormalArc) -> list[NormalArc]:
    """Empty-band arcs cutting off a single slot are re-coded across that band."""
    if arc.bands or arc.start[0] != arc.end[0]:
        return []
    d = surface.disk[arc.start[0]]
    s1, s2 = arc.start[1], arc.end[1]
    if s1 == s2:
        return []
    out = []
    for lo, hi in ((s1, s2), (s2, s1)):
        cut = [(lo + k) % d.n_slots for k in range(1, (hi - lo) % d.n_slots + 1)]
        if len(cut) != 1:
            continue
        band = surface.band[d.slots[cut[0]]]
        d2, t2 = band.other_end(d.name, cut[0])
        n2 = surface.disk[d2].n_slots
        out.append(NormalArc(arc.surface_id, (d2, (t2 - 1) % n2), (), (d2, t2 % n2)))
    return out


def canonicalize(surface: PolygonalSurface, group: Sequence[SurfaceMap],
                 arc: NormalArc) -> NormalArc:
    """Least code in the orbit under the symmetry group, arc reversal and
    single-slot boundary slides."""
    seen: set[NormalArc] = set()
    frontier = [arc]
    while frontier:
        a = frontier.pop()
        if a in seen:
            continue
        seen.add(a)
        frontier.append(a.reversed())
        for g in group:
            frontier.append(transform(a, g))
        frontier.extend(_slide_equivalents(surface, a))
    return min(seen)


# ---------------------------------------------------------------------------
# prefixes


@dataclass
class _Prefix:
    start: tuple[str, int]
    bands: tuple[str, ...]
    disks: tuple[str, ...]          # visited disks, len(bands)+1
    tracker_states: dict            # RunTracker states after the last band

    @property
    def depth(self) -> int:
        return len(self.bands)


def _prefix_key(group: Sequence[SurfaceMap], p_start, p_bands) -> tuple:
    best = None
    for g in group:
        cand = (g.map_segment(*p_start), tuple(g.band_map[b] for b in p_bands))
        if best is None or cand < best:
            best = cand
    return best


@dataclass
class EnumerationResult:
    surface_id: str
    max_depth: int
    certificate: str                          # "closed" | "depth-bound-hit"
    representatives: list                     # [(NormalArc, CleanlinessVerdict)]
    group_size: int
    stats: dict
    elapsed: float

    @property
    def clean_arcs(self) -> list[NormalArc]:
        return [a for (a, _) in self.representatives]

    def to_json_dict(self) -> dict:
        return {
            "surface": self.surface_id,
            "max_depth": self.max_depth,
            "certificate": self.certificate,
            "group_size": self.group_size,
            "stats": dict(self.stats),
            "clean_arcs": [
                {"arc": a.to_json_dict(), "verdict": v.to_json_dict()["verdict"],
                 "witness": v.witness}
                for (a, v) in self.representatives],
        }


def _viable(surface: PolygonalSurface, action: MonodromyAction,
            prefix: _Prefix, stats: dict, explain) -> bool:
    """Persistence filters on a partial arc; False prunes the subtree."""
    for (c, _, _), length in prefix.tracker_states.items():
        if length > action.twist_lengths[c]:
            stats["pruned_consecutive"] += 1
            if explain:
                explain(f"trapped: {','.join(prefix.bands[-length:])} consecutive, "
                        f"twist length {action.twist_lengths[c]}")
            return False
    arc = NormalArc(surface.surface_id, prefix.start, prefix.bands, prefix.start)
    A = place_arc(surface, arc, "a", partial=True)
    if self_crossings(surface, A):
        stats["pruned_selfcrossing"] += 1
        if explain:
            explain(f"self-crossing: {','.join(prefix.bands)}")
        return False
    B = image_with_wraps(surface, action, arc, partial=True)
    forced = pair_crossings(surface, A, B)
    if forced:
        c = forced[0]
        kind = "disk-conflict" if c.kind == "chord" else "parallel-run-conflict"
        stats[f"pruned_{c.kind}"] += 1
        if explain:
            explain(f"{kind}: crossing in {c.disk} after {','.join(prefix.bands)}")
        return False
    return True


def enumerate_clean_arcs(surface: PolygonalSurface, action: MonodromyAction,
                         max_depth: Optional[int] = None, prune: bool = True,
                         explain=None) -> EnumerationResult:
    """Breadth-first enumeration of clean arcs up to symmetry.

    ``prune=False`` disables the persistence filters (keeping only the
    normal-position and embeddedness constraints); used to check that
    pruning removes no clean arc.
    """
    t0 = time.monotonic()
    if max_depth is None:
        max_depth = 4 * len(surface.bands)
    group = code_symmetry_group(action)
    stats = {"nodes": 0, "completions_tested": 0, "pruned_consecutive": 0,
             "pruned_selfcrossing": 0, "pruned_chord": 0, "pruned_run": 0,
             "pruned_symmetry": 0}

    seg_orbits: dict[tuple[str, int], tuple[str, int]] = {}
    for d in surface.disks:
        for s in range(d.n_slots):
            pos = (d.name, s)
            orbit = {g.map_segment(*pos) for g in group}
            seg_orbits[pos] = min(orbit)
    start_reps = sorted(set(seg_orbits.values()))

    results: dict[NormalArc, CleanlinessVerdict] = {}
    seen_prefixes: set[tuple] = set()
    frontier: list[_Prefix] = []
    for rep in start_reps:
        p = _Prefix(rep, (), (rep[0],), {})
        key = _prefix_key(group, rep, ())
        if key not in seen_prefixes:
            seen_prefixes.add(key)
            frontier.append(p)

    def complete(prefix: _Prefix) -> None:
        d = surface.disk[prefix.disks[-1]]
        if prefix.bands:
            last_band, cur = prefix.bands[-1], prefix.disks[-1]
            exit_slot = None
            for t, b in enumerate(d.slots):
                if b == last_band:
                    exit_slot = t
            assert exit_slot is not None
            segs = [s for s in range(d.n_slots)
                    if exit_slot not in (s, (s + 1) % d.n_slots)]
        else:
            segs = [s for s in range(d.n_slots) if (d.name, s) != prefix.start]
        for s in segs:
            arc = NormalArc(surface.surface_id, prefix.start, prefix.bands, (d.name, s))
            if not _is_normal_quick(surface, arc):
                continue
            stats["completions_tested"] += 1
            if self_crossings(surface, place_arc(surface, arc, "a")):
                continue
            v = is_clean(surface, action, arc)
            if v.is_clean and not v.inessential:
                rep = canonicalize(surface, group, arc)
                if rep not in results:
                    results[rep] = is_clean(surface, action, rep)

    depth = 0
    certificate = "closed"
    while frontier:
        if depth > max_depth:
            certificate = "depth-bound-hit"
            break
        nxt: list[_Prefix] = []
        for prefix in frontier:
            stats["nodes"] += 1
            complete(prefix)
            cur = prefix.disks[-1]
            d = surface.disk[cur]
            for t, bname in enumerate(d.slots):
                band = surface.band[bname]
                if prefix.bands and bname == prefix.bands[-1]:
                    # re-entering the band just exited is an immediate backtrack
                    d_prev = prefix.disks[-2]
                    if band.other_end(cur, t)[0] == d_prev:
                        continue
                if not prefix.bands:
                    # the first band may not be adjacent to the start segment
                    s = prefix.start[1]
                    if t in (s, (s + 1) % d.n_slots):
                        continue
                child_bands = prefix.bands + (bname,)
                child_disks = prefix.disks + (band.other_end(cur, t)[0],)
                tracker = RunTracker(surface)
                tracker.states = dict(prefix.tracker_states)
                tracker.step(bname, cur, child_disks[-1])
                child = _Prefix(prefix.start, child_bands, child_disks, tracker.states)
                if prune and not _viable(surface, action, child, stats, explain):
                    continue
                if not prune:
                    arc = NormalArc(surface.surface_id, child.start, child.bands, child.start)
                    if self_crossings(surface, place_arc(surface, arc, "a", partial=True)):
                        continue
                key = _prefix_key(group, child.start, child.bands)
                if key in seen_prefixes:
                    stats["pruned_symmetry"] += 1
                    continue
                seen_prefixes.add(key)
                nxt.append(child)
        frontier = nxt
        depth += 1
    reps = sorted(results.items(), key=lambda kv: kv[0])
    return EnumerationResult(surface.surface_id, max_depth, certificate,
                             [(a, v) for a, v in reps], len(group), stats,
                             time.monotonic() - t0)


def _is_normal_quick(surface: PolygonalSurface, arc: NormalArc) -> bool:
    from .arcs import normalize

    try:
        return normalize(surface, arc.start, list(arc.bands), arc.end) == arc
    except Exception:
        return False


# ---------------------------------------------------------------------------
# the explicit infinite families


def infinite_family(n: int, m: int, r: int) -> NormalArc:
    """The r-th member of the explicit family of clean arcs on t(n,m).

    Defined for n, m >= 4 and for n = 3, m >= 6; the r middle loops run as
    parallel strands.  Consecutive members are told apart by their pairing
    with a fixed square cycle (see the homology layer).
    """
    if r < 0:
        raise SurfaceParameterError("family index r must be >= 0")
    if n >= 4 and m >= 4:
        start = (f"A{n}", m - 1)
        seg = [band_name_torus(n, m - 1), band_name_torus(n - 2, m - 1)]
        loop = [band_name_torus(n - 2, 1), band_name_torus(n, 1),
                band_name_torus(n, m - 1), band_name_torus(n - 2, m - 1)]
        end = (f"A{n - 2}", m - 1)
    elif n == 3 and m >= 6:
        start = ("A3", m - 1)
        seg = [band_name_torus(3, m - 1), band_name_torus(2, m - 1)]
        loop = [band_name_torus(2, 3), band_name_torus(1, 3),
                band_name_torus(1, 1), band_name_torus(3, 1),
                band_name_torus(3, m - 1), band_name_torus(2, m - 1)]
        end = ("A2", 1)
    else:
        raise SurfaceParameterError(
            f"family defined for n,m >= 4 or n = 3, m >= 6; got ({n}, {m})")
    return NormalArc(f"t({n},{m})", start, tuple(seg + loop * r), end)


def family_cycle(n: int, m: int) -> list[tuple[str, int]]:
    """The distinguishing cycle as a directed band walk (band, direction)."""
    if n >= 4 and m >= 4:
        return [(band_name_torus(n, m), +1), (band_name_torus(n - 1, m), -1),
                (band_name_torus(n - 1, m - 1), +1), (band_name_torus(n, m - 1), -1)]
    if n == 3 and m >= 6:
        return [(band_name_torus(1, m - 2), +1), (band_name_torus(3, m - 2), -1),
                (band_name_torus(3, m), +1), (band_name_torus(1, m), -1)]
    raise SurfaceParameterError(f"no distinguishing cycle for ({n}, {m})")
