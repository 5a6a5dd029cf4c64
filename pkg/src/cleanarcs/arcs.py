"""Arcs in normal position and their exact crossing calculus.

An arc is coded by its start segment, the sequence of bands it traverses,
and its end segment; this determines it up to isotopy with endpoints free
on the boundary.  Crossing counts between two arcs are computed exactly:
chords of the two arcs inside a disk cross when their attachment points
interleave, and parallel strand pairs running through a common band
sequence contribute one crossing exactly when the cyclic positions at
their two divergence ends force a swap.  The resulting diagram carries no
removable crossing pair, so its count is the geometric intersection number
under the stated endpoint conventions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import MalformedArcError, UnsupportedSurfaceError
from .monodromy import MonodromyAction, SurfaceMap, band_itinerary_disks
from .surfaces import PolygonalSurface

TIP = ("tip",)


@dataclass(frozen=True, order=True)
class NormalArc:
    """Arc code: endpoints by (disk, segment), bands in traversal order."""

    surface_id: str
    start: tuple[str, int]
    bands: tuple[str, ...]
    end: tuple[str, int]

    @property
    def is_degenerate(self) -> bool:
        return not self.bands and self.start == self.end

    def reversed(self) -> "NormalArc":
        return NormalArc(self.surface_id, self.end, tuple(reversed(self.bands)), self.start)

    def disks(self, surface: PolygonalSurface) -> list[str]:
        return band_itinerary_disks(surface, self.start[0], self.bands)

    def to_json_dict(self) -> dict:
        return {"surface": self.surface_id,
                "start": [self.start[0], self.start[1]],
                "bands": list(self.bands),
                "end": [self.end[0], self.end[1]]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "NormalArc":
        return cls(d["surface"], (d["start"][0], d["start"][1]),
                   tuple(d["bands"]), (d["end"][0], d["end"][1]))


# ---------------------------------------------------------------------------
# normalization


def _entries(surface: PolygonalSurface, start_disk: str,
             bands: Sequence[str]) -> list[tuple[str, int]]:
    """Band crossings as (band, entry end index), validating adjacency."""
    out = []
    cur = start_disk
    for b in bands:
        band = surface.band.get(b)
        if band is None:
            raise MalformedArcError(f"unknown band {b}")
        if band.ends[0][0] == cur:
            out.append((b, 0))
            cur = band.ends[1][0]
        elif band.ends[1][0] == cur:
            out.append((b, 1))
            cur = band.ends[0][0]
        else:
            raise MalformedArcError(f"band {b} is not attached to disk {cur}")
    return out


def _segment_adjacent_to_slot(seg: int, slot: int, n_slots: int) -> bool:
    # segment t lies between slots t and t+1
    return slot % n_slots in (seg % n_slots, (seg + 1) % n_slots)


def normalize(surface: PolygonalSurface, start: tuple[str, int],
              bands: Sequence[str], end: tuple[str, int]) -> NormalArc:
    """Bring a raw itinerary into normal position.

    Cancels immediate backtracks (a band entered and immediately re-entered
    through the same end) and slides endpoints off positions adjacent to
    the first or last band, both of which strictly reduce the number of
    band segments.  Raises :class:`MalformedArcError` for disconnected
    itineraries.
    """
    if start[0] not in surface.disk or end[0] not in surface.disk:
        raise MalformedArcError("endpoint on unknown disk")
    for (d, s) in (start, end):
        if not (0 <= s < surface.disk[d].n_slots):
            raise MalformedArcError(f"no segment {s} on disk {d}")
    bands = list(bands)
    entries = _entries(surface, start[0], bands)
    if bands and band_itinerary_disks(surface, start[0], bands)[-1] != end[0]:
        raise MalformedArcError("itinerary does not reach the end disk")
    if not bands and start[0] != end[0]:
        raise MalformedArcError("empty itinerary with endpoints on different disks")

    changed = True
    while changed:
        changed = False
        # immediate backtracks
        i = 0
        while i + 1 < len(entries):
            (b1, e1), (b2, e2) = entries[i], entries[i + 1]
            if b1 == b2 and e2 == 1 - e1:
                del entries[i:i + 2]
                changed = True
                i = max(i - 1, 0)
            else:
                i += 1
        # start slide
        if entries:
            b, e = entries[0]
            d, t = surface.band[b].ends[e]
            if d != start[0]:
                raise MalformedArcError("internal itinerary inconsistency")
            if _segment_adjacent_to_slot(start[1], t, surface.disk[d].n_slots):
                start = _slide_across(surface, start, t)
                del entries[0]
                changed = True
        # end slide
        if entries:
            b, e = entries[-1]
            d, t = surface.band[b].ends[1 - e]
            if _segment_adjacent_to_slot(end[1], t, surface.disk[d].n_slots):
                end = _slide_across(surface, end, t)
                del entries[-1]
                changed = True
    return NormalArc(surface.surface_id, start, tuple(b for b, _ in entries), end)


def _slide_across(surface: PolygonalSurface, pos: tuple[str, int], slot: int) -> tuple[str, int]:
    """Slide a boundary point across the free side of the band at ``slot``."""
    d, seg = pos
    c, i = surface.station(d, seg)
    circle = surface.circles[c]
    k = len(circle)
    if slot % surface.disk[d].n_slots == (seg + 1) % surface.disk[d].n_slots:
        return circle.stations[(i + 1) % k]
    return circle.stations[(i - 1) % k]


def apply_monodromy(arc: NormalArc, action: MonodromyAction) -> NormalArc:
    """Image of an arc under the monodromy, renormalized up to free isotopy."""
    return transform(arc, action.phi)


def transform(arc: NormalArc, g: SurfaceMap) -> NormalArc:
    surf = g.surface
    img = NormalArc(arc.surface_id, g.map_segment(*arc.start),
                    tuple(g.band_map[b] for b in arc.bands), g.map_segment(*arc.end))
    # an automorphism image of a normal code is normal
    return img


# ---------------------------------------------------------------------------
# placed arcs: codes with exact boundary coordinates


@dataclass(frozen=True)
class BoundaryPoint:
    disk: str
    segment: int
    frac: Fraction
    eps: int


@dataclass
class Placed:
    """An arc (or arc image) ready for the crossing engine."""

    surface: PolygonalSurface
    crossings: list  # [(band, entry_end_index)]
    start: BoundaryPoint
    end: object      # BoundaryPoint or TIP
    tag: str
    chords: list = field(default_factory=list)   # (disk, att_in, att_out)
    n_strands: int = 0

    def __post_init__(self):
        surf = self.surface
        atts_in, atts_out, disks = [], [], []
        cur = self.start.disk
        disks.append(cur)
        for idx, (b, e) in enumerate(self.crossings):
            band = surf.band[b]
            if band.ends[e][0] != cur:
                raise MalformedArcError(f"crossing {b} not adjacent to {cur}")
            atts_out.append(("slot", band.ends[e][1], idx))
            cur = band.ends[1 - e][0]
            disks.append(cur)
            atts_in.append(("slot", band.ends[1 - e][1], idx))
        first_in = ("end", self.start.segment, self.start.frac, self.start.eps)
        if self.end is TIP:
            last_out = TIP
        else:
            if cur != self.end.disk:
                raise MalformedArcError("itinerary does not reach the end disk")
            last_out = ("end", self.end.segment, self.end.frac, self.end.eps)
        ins = [first_in] + atts_in
        outs = atts_out + [last_out]
        self.chords = [(disks[i], ins[i], outs[i]) for i in range(len(disks))]
        self.n_strands = len(self.crossings)

    def band_of_strand(self, i: int) -> str:
        return self.crossings[i][0]

    def entry_end(self, i: int) -> int:
        return self.crossings[i][1]


def place_arc(surface: PolygonalSurface, arc: NormalArc, tag: str,
              fracs=(Fraction(1, 3), Fraction(2, 3)), eps=(0, 0),
              partial: bool = False) -> Placed:
    entries = _entries(surface, arc.start[0], arc.bands)
    start = BoundaryPoint(arc.start[0], arc.start[1], fracs[0], eps[0])
    end = TIP if partial else BoundaryPoint(arc.end[0], arc.end[1], fracs[1], eps[1])
    return Placed(surface, entries, start, end, tag)


# ---------------------------------------------------------------------------
# monodromy image with boundary wraps (endpoints held fixed)


def _wrap_crossings(surface: PolygonalSurface, point: tuple[str, int],
                    amount: int, forward: bool) -> list[tuple[str, int]]:
    """Band crossings of a boundary tail wrapped ``amount`` corners.

    ``forward=True``: from the point onward (start tail); ``False``: the
    crossings arriving back at the point (end tail).
    """
    c, i = surface.station(*point)
    circle = surface.circles[c]
    k = len(circle)
    out = []
    if forward:
        rng = [(i + t) % k for t in range(amount)]
    else:
        rng = [(i + t) % k for t in range(amount - 1, -1, -1)]
    for j in rng:
        b = circle.jumps[j]
        d_from = circle.stations[j][0] if forward else circle.stations[(j + 1) % k][0]
        band = surface.band[b]
        e = 0 if band.ends[0][0] == d_from else 1
        # bands in these models join distinct disks, so the end is unambiguous
        out.append((b, e))
    return out


def _cancel_backtracks(crossings: list[tuple[str, int]]) -> list[tuple[str, int]]:
    out = list(crossings)
    i = 0
    while i + 1 < len(out):
        (b1, e1), (b2, e2) = out[i], out[i + 1]
        if b1 == b2 and e2 == 1 - e1:
            del out[i:i + 2]
            i = max(i - 1, 0)
        else:
            i += 1
    return out


def image_with_wraps(surface: PolygonalSurface, action: MonodromyAction,
                     arc: NormalArc, partial: bool = False,
                     fracs=(Fraction(1, 3), Fraction(2, 3))) -> Placed:
    """The monodromy image of an arc, rel endpoints.

    The image keeps the arc's endpoints (displaced an infinitesimal step in
    the twist direction) and wraps around each boundary annulus by its
    twist length before continuing with the permuted band sequence.
    """
    phi = action.phi
    c0, _ = surface.station(*arc.start)
    head = _wrap_crossings(surface, arc.start, action.twist_lengths[c0], forward=True)
    body = _entries(surface, phi.map_segment(*arc.start)[0] if False else _image_start_disk(surface, arc, head),
                    [phi.band_map[b] for b in arc.bands])
    crossings = head + body
    start = BoundaryPoint(arc.start[0], arc.start[1], fracs[0], 1)
    if partial:
        return Placed(surface, _cancel_backtracks(crossings), start, TIP, tag="phi")
    c1, _ = surface.station(*arc.end)
    tail = _wrap_crossings(surface, arc.end, action.twist_lengths[c1], forward=False)
    crossings = _cancel_backtracks(crossings + tail)
    end = BoundaryPoint(arc.end[0], arc.end[1], fracs[1], 1)
    return Placed(surface, crossings, start, end, tag="phi")


def _image_start_disk(surface: PolygonalSurface, arc: NormalArc,
                      head: list[tuple[str, int]]) -> str:
    if not head:
        return arc.start[0]
    b, e = head[-1]
    return surface.band[b].ends[1 - e][0]


# ---------------------------------------------------------------------------
# the crossing engine


@dataclass(frozen=True)
class Crossing:
    disk: str
    kind: str                     # "chord" or "run"
    a_chord: int
    b_chord: int
    places: tuple                 # four attachment places: band name or None
    sign: int
    run_bands: tuple = ()

    def to_json_dict(self) -> dict:
        return {"disk": self.disk, "kind": self.kind,
                "chords": [self.a_chord, self.b_chord],
                "places": [p for p in self.places], "sign": self.sign,
                "run_bands": list(self.run_bands)}


def _att_key(surface: PolygonalSurface, disk: str, att) -> tuple:
    if att[0] == "slot":
        return (2 * att[1], Fraction(0), 0)
    if att[0] == "end":
        return (2 * att[1] + 1, att[2], att[3])
    raise ValueError("tip attachment has no position")


def _delta(surface: PolygonalSurface, disk: str, ref_key, key) -> tuple:
    """Cyclic position of ``key`` walking positively from ``ref_key``.

    A point at the reference station strictly behind the reference's
    sub-position lies almost a full turn away.
    """
    span = 2 * surface.disk[disk].n_slots
    ds = (key[0] - ref_key[0]) % span
    if ds == 0 and (key[1], key[2]) < (ref_key[1], ref_key[2]):
        ds = span
    return (ds, key[1], key[2])


def _interleave_sign(surface: PolygonalSurface, disk: str,
                     a_from, a_to, b_from, b_to) -> int:
    """0 if the directed chords do not cross, else +-1 by cyclic orientation."""
    ka, kb = _att_key(surface, disk, a_from), _att_key(surface, disk, a_to)
    kc, kd = _att_key(surface, disk, b_from), _att_key(surface, disk, b_to)
    da = _delta(surface, disk, ka, kb)
    dc = _delta(surface, disk, ka, kc)
    dd = _delta(surface, disk, ka, kd)
    c_in = dc < da  # b_from strictly inside (a_from, a_to)
    d_in = dd < da
    if c_in == d_in:
        return 0
    return 1 if c_in else -1


def _place(att) -> Optional[str]:
    return None if att[0] != "slot" else att[2]


class _Walker:
    """Pairwise outward walk from a shared band, for run analysis."""

    def __init__(self, surface: PolygonalSurface, A: Placed, B: Placed):
        self.surface = surface
        self.A, self.B = A, B

    def _att(self, placed: Placed, state):
        idx, d = state
        chord = placed.chords[idx]
        return chord[2] if d == 1 else chord[1]

    def _ref(self, placed: Placed, state):
        idx, d = state
        chord = placed.chords[idx]
        return chord[1] if d == 1 else chord[2]

    def _disk(self, placed: Placed, state):
        return placed.chords[state[0]][0]

    def walk(self, sA, sB):
        """Walk outward until divergence.

        Returns ``None`` for an unresolved walk (dangling tip), else
        ``(a_first, disk, attA, attB, refslot, n_ext, bands)``.
        """
        n_ext = 0
        bands: list[str] = []
        while True:
            attA = self._att(self.A, sA)
            attB = self._att(self.B, sB)
            if attA is TIP or attB is TIP:
                return None
            dA, dB = self._disk(self.A, sA), self._disk(self.B, sB)
            assert dA == dB, "paired strands must sit in one disk"
            if attA[0] == "slot" and attB[0] == "slot" and attA[1] == attB[1]:
                # same slot: the run extends through one more band
                strandA = sA[0] if sA[1] == 1 else sA[0] - 1
                bands.append(self.A.band_of_strand(strandA))
                sA = (sA[0] + sA[1], sA[1])
                sB = (sB[0] + sB[1], sB[1])
                n_ext += 1
                continue
            refA = self._ref(self.A, sA)
            ref_key = _att_key(self.surface, dA, refA)
            da = _delta(self.surface, dA, ref_key, _att_key(self.surface, dA, attA))
            db = _delta(self.surface, dA, ref_key, _att_key(self.surface, dA, attB))
            assert da != db, "divergent attachments must be distinct"
            return (da < db, dA, attA, attB, refA, n_ext, bands)


def _strand_dir_at(placed: Placed, chord_idx: int, walk_dir: int):
    """Directed chord endpoints (from, to) given the walk direction."""
    chord = placed.chords[chord_idx]
    if walk_dir == 1:
        return chord[1], chord[2]
    return chord[2], chord[1]


def pair_crossings(surface: PolygonalSurface, A: Placed, B: Placed,
                   same_arc: bool = False) -> list[Crossing]:
    """All crossings between two placed arcs, in taut position."""
    out: list[Crossing] = []
    # --- chord pairs with no shared band slot
    by_disk: dict[str, list[int]] = {}
    for i, ch in enumerate(B.chords):
        by_disk.setdefault(ch[0], []).append(i)
    for i, (disk, a_in, a_out) in enumerate(A.chords):
        if a_out is TIP or a_in is TIP:
            continue
        for j in by_disk.get(disk, ()):
            if same_arc and j <= i:
                continue
            _, b_in, b_out = B.chords[j]
            if b_out is TIP or b_in is TIP:
                continue
            slots_a = {att[1] for att in (a_in, a_out) if att[0] == "slot"}
            slots_b = {att[1] for att in (b_in, b_out) if att[0] == "slot"}
            if slots_a & slots_b:
                continue  # resolved by the run analysis
            s = _interleave_sign(surface, disk, a_in, a_out, b_in, b_out)
            if s:
                out.append(Crossing(disk, "chord", i, j,
                                    (_place_band(surface, disk, a_in),
                                     _place_band(surface, disk, a_out),
                                     _place_band(surface, disk, b_in),
                                     _place_band(surface, disk, b_out)), s))
    # --- parallel-run pairs
    walker = _Walker(surface, A, B)
    strands_b: dict[str, list[int]] = {}
    for j in range(B.n_strands):
        strands_b.setdefault(B.band_of_strand(j), []).append(j)
    for i in range(A.n_strands):
        b = A.band_of_strand(i)
        for j in strands_b.get(b, ()):
            if same_arc and j <= i:
                continue
            aligned = A.entry_end(i) == B.entry_end(j)
            # walking right: A through chord i+1 forward
            sA_r, sA_l = (i + 1, 1), (i, -1)
            if aligned:
                sB_r, sB_l = (j + 1, 1), (j, -1)
            else:
                sB_r, sB_l = (j, -1), (j + 1, 1)
            left = walker.walk(sA_l, sB_l)
            if left is not None and left[5] > 0:
                continue  # not the leftmost pair of its run: counted there
            right = walker.walk(sA_r, sB_r)
            if left is None or right is None:
                continue  # dangling tip: undecided
            a_first_l, disk_l, attA_l, attB_l = left[0], left[1], left[2], left[3]
            a_first_r, disk_r, attA, attB, ref, _, run_bands = right
            if a_first_l != a_first_r:
                continue  # orders agree: no forced crossing
            sub_a = Fraction(0) if a_first_l else Fraction(1, 2)
            sub_b = Fraction(1, 2) if a_first_l else Fraction(0)
            # directed chords at the right divergence disk
            a_from, a_to = _run_chord_dir(A, sA_r, right[5], attA, ref, sub_a)
            b_from, b_to = _run_chord_dir(B, sB_r, right[5], attB, ref, sub_b)
            s = _interleave_sign_refined(surface, disk_r, a_from, a_to, b_from, b_to)
            out.append(Crossing(disk_r, "run",
                                sA_r[0] + right[5] * sA_r[1],
                                sB_r[0] + right[5] * sB_r[1],
                                (_place_band(surface, disk_l, attA_l),
                                 _place_band(surface, disk_r, attA),
                                 _place_band(surface, disk_l, attB_l),
                                 _place_band(surface, disk_r, attB)),
                                s if s else 1,
                                run_bands=(b, *run_bands)))
    return out


def _place_band(surface: PolygonalSurface, disk: str, att) -> Optional[str]:
    if att[0] != "slot":
        return None
    return surface.disk[disk].slots[att[1]]


def _run_chord_dir(placed: Placed, start_state, n_ext: int, att, ref, sub):
    idx = start_state[0] + n_ext * start_state[1]
    d = start_state[1]
    ref_ref = ("slotsub", ref[1], sub)
    if d == 1:
        return ref_ref, att
    return att, ref_ref


def _att_key_refined(surface: PolygonalSurface, disk: str, att) -> tuple:
    if att[0] == "slotsub":
        return (2 * att[1], att[2], 0)
    return _att_key(surface, disk, att)


def _interleave_sign_refined(surface, disk, a_from, a_to, b_from, b_to) -> int:
    ka = _att_key_refined(surface, disk, a_from)
    kb = _att_key_refined(surface, disk, a_to)
    kc = _att_key_refined(surface, disk, b_from)
    kd = _att_key_refined(surface, disk, b_to)
    da = _delta(surface, disk, ka, kb)
    dc = _delta(surface, disk, ka, kc)
    dd = _delta(surface, disk, ka, kd)
    c_in = dc < da
    d_in = dd < da
    if c_in == d_in:
        return 0
    return 1 if c_in else -1


def self_crossings(surface: PolygonalSurface, placed: Placed) -> list[Crossing]:
    return pair_crossings(surface, placed, placed, same_arc=True)


def is_embedded(surface: PolygonalSurface, arc: NormalArc) -> bool:
    return not self_crossings(surface, place_arc(surface, arc, "a"))


# ---------------------------------------------------------------------------
# crossing diagrams


@dataclass
class CrossingDiagram:
    """Per-disk chords of two arcs with their crossing set."""

    surface_id: str
    convention: str
    arc1_bands: tuple
    arc2_bands: tuple
    chords: dict
    crossings: tuple

    @property
    def count(self) -> int:
        return len(self.crossings)

    @property
    def signed_sum(self) -> int:
        return sum(c.sign for c in self.crossings)

    def to_json_dict(self) -> dict:
        return {"surface": self.surface_id, "convention": self.convention,
                "count": self.count, "signed_sum": self.signed_sum,
                "crossings": [c.to_json_dict() for c in self.crossings]}

    def to_dot(self) -> str:
        lines = ["graph crossings {"]
        for c in self.crossings:
            lines.append(f'  "{c.disk}" -- "{c.kind}_{c.a_chord}_{c.b_chord}" '
                         f'[label="{c.sign:+d}"];')
        lines.append("}")
        return "\n".join(lines)


def build_crossing_diagram(surface: PolygonalSurface, arc1: NormalArc, arc2: NormalArc,
                           endpoint_convention: str = "offset") -> CrossingDiagram:
    """Crossing diagram of two normal arcs.

    ``offset``: arc2's endpoints are displaced off arc1's by an
    infinitesimal parallel push (opposite boundary directions at the two
    ends), so equal arcs yield parallel copies.
    """
    if endpoint_convention != "offset":
        raise ValueError(f"unknown endpoint convention {endpoint_convention!r}")
    A = place_arc(surface, arc1, "a", eps=(0, 0))
    B = place_arc(surface, arc2, "b", eps=(1, -1))
    crossings = pair_crossings(surface, A, B)
    return _diagram(surface, endpoint_convention, A, B, crossings)


def _diagram(surface, convention, A: Placed, B: Placed, crossings) -> CrossingDiagram:
    chords: dict[str, list] = {}
    for tag, placed in (("a", A), ("b", B)):
        for i, (disk, a_in, a_out) in enumerate(placed.chords):
            chords.setdefault(disk, []).append(
                {"arc": tag, "index": i,
                 "in": list(a_in), "out": (list(a_out) if a_out is not TIP else ["tip"])})
    return CrossingDiagram(surface.surface_id, convention,
                           tuple(A.crossings), tuple(B.crossings),
                           chords, tuple(crossings))


def monodromy_pair_diagram(surface: PolygonalSurface, action: MonodromyAction,
                           arc: NormalArc) -> CrossingDiagram:
    """Diagram of an arc against its monodromy image, rel shared endpoints."""
    A = place_arc(surface, arc, "a", eps=(0, 0))
    B = image_with_wraps(surface, action, arc)
    crossings = pair_crossings(surface, A, B)
    return _diagram(surface, "monodromy", A, B, crossings)


def reduce_bigons(diagram: CrossingDiagram) -> CrossingDiagram:
    """Remove crossing pairs bounding a bigon, innermost first, to a fixpoint.

    Two crossings bound a bigon when the subpaths joining them on the two
    arcs run through identical band sequences and no other crossing lies
    between them.  Engine-built diagrams are already reduced; this is the
    generic fixpoint pass used to certify that and to clean up diagrams
    assembled from raw data.
    """
    crossings = list(diagram.crossings)
    bands1 = [b for (b, _) in diagram.arc1_bands]
    bands2 = [b for (b, _) in diagram.arc2_bands]
    changed = True
    while changed:
        changed = False
        n = len(crossings)
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                c1, c2 = crossings[i], crossings[j]
                a_lo, a_hi = sorted((c1.a_chord, c2.a_chord))
                b_lo, b_hi = sorted((c1.b_chord, c2.b_chord))
                seq_a = bands1[a_lo:a_hi]
                seq_b = bands2[b_lo:b_hi]
                if (c1.a_chord <= c2.a_chord) != (c1.b_chord <= c2.b_chord):
                    seq_b = list(reversed(seq_b))
                if seq_a != seq_b:
                    continue
                inside = [c for k, c in enumerate(crossings) if k not in (i, j)
                          and a_lo <= c.a_chord <= a_hi and b_lo <= c.b_chord <= b_hi]
                if inside:
                    continue
                width = (a_hi - a_lo) + (b_hi - b_lo)
                if best is None or width < best[0]:
                    best = (width, i, j)
        if best is not None:
            _, i, j = best
            for k in sorted((i, j), reverse=True):
                del crossings[k]
            changed = True
    return CrossingDiagram(diagram.surface_id, diagram.convention,
                           diagram.arc1_bands, diagram.arc2_bands,
                           diagram.chords, tuple(crossings))
