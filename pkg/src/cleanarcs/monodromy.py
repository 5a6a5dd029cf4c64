"""Combinatorial monodromy actions on polygonal surfaces.

The monodromy of each modeled surface preserves the spine: it permutes
disks and bands, rotating every disk's slot word, and near each boundary
circle it twists by a fixed number of spine edges (the twist length of the
complementary annulus).  Reflection symmetries are stored the same way,
with per-disk orientation-reversing slot maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import SurfaceParameterError, UnsupportedSurfaceError
from .surfaces import PolygonalSurface, band_name_torus


class SurfaceMap:
    """A combinatorial automorphism of a polygonal surface.

    ``slot_maps[d] = (a, c)`` sends slot ``t`` of disk ``d`` to slot
    ``a*t + c (mod s)`` of ``disk_map[d]``; ``a = -1`` marks a per-disk
    reflection.
    """

    def __init__(self, surface: PolygonalSurface, disk_map: dict[str, str],
                 slot_maps: dict[str, tuple[int, int]], name: str = ""):
        self.surface = surface
        self.disk_map = dict(disk_map)
        for d, (a, _) in slot_maps.items():
            if a not in (1, -1):
                raise SurfaceParameterError(f"slot map on {d} must have a = +-1")
        self.slot_maps = dict(slot_maps)
        self.name = name
        self.band_map = self._derive_band_map()

    # -- construction helpers ----------------------------------------------

    def _derive_band_map(self) -> dict[str, str]:
        surf = self.surface
        out: dict[str, str] = {}
        for b in surf.bands:
            images = set()
            for (d, t) in b.ends:
                d2, t2 = self.map_slot(d, t)
                images.add(surf.disk[d2].slots[t2])
            if len(images) != 1:
                raise SurfaceParameterError(
                    f"map {self.name or '?'} tears band {b.name}: ends go to {sorted(images)}")
            out[b.name] = images.pop()
        if len(set(out.values())) != len(out):
            raise SurfaceParameterError(f"map {self.name or '?'} is not a band bijection")
        return out

    @classmethod
    def from_band_map(cls, surface: PolygonalSurface, disk_map: dict[str, str],
                      band_map: dict[str, str], name: str = "") -> "SurfaceMap":
        """Solve the per-disk slot maps forced by a disk and band bijection."""
        slot_maps: dict[str, tuple[int, int]] = {}
        for d in surface.disks:
            target = surface.disk[disk_map[d.name]]
            s = d.n_slots
            if target.n_slots != s:
                raise SurfaceParameterError(f"{d.name} and {target.name} have different valence")
            positions = []
            for t, b in enumerate(d.slots):
                b2 = band_map[b]
                cand = [u for u, name2 in enumerate(target.slots) if name2 == b2]
                positions.append(cand)
            solved = None
            for a in (1, -1):
                for p0 in positions[0]:
                    c = (p0 - a * 0) % s
                    if all(((a * t + c) % s) in positions[t] for t in range(s)):
                        solved = (a, c)
                        break
                if solved:
                    break
            if solved is None:
                raise SurfaceParameterError(
                    f"band map does not induce a slot map on disk {d.name}")
            slot_maps[d.name] = solved
        return cls(surface, disk_map, slot_maps, name=name)

    # -- action -------------------------------------------------------------

    def map_slot(self, disk: str, t: int) -> tuple[str, int]:
        a, c = self.slot_maps[disk]
        s = self.surface.disk[disk].n_slots
        return self.disk_map[disk], (a * t + c) % s

    def map_segment(self, disk: str, t: int) -> tuple[str, int]:
        a, c = self.slot_maps[disk]
        s = self.surface.disk[disk].n_slots
        if a == 1:
            return self.disk_map[disk], (t + c) % s
        return self.disk_map[disk], (c - t - 1) % s

    @property
    def orientation_preserving(self) -> bool:
        return all(a == 1 for (a, _) in self.slot_maps.values())

    # -- algebra -------------------------------------------------------------

    def compose(self, other: "SurfaceMap", name: str = "") -> "SurfaceMap":
        """self after other."""
        disk_map = {d: self.disk_map[other.disk_map[d]] for d in other.disk_map}
        slot_maps = {}
        for d in self.surface.disk:
            a1, c1 = other.slot_maps[d]
            a2, c2 = self.slot_maps[other.disk_map[d]]
            slot_maps[d] = (a1 * a2, (a2 * c1 + c2) % self.surface.disk[d].n_slots)
        return SurfaceMap(self.surface, disk_map, slot_maps, name=name)

    def inverse(self, name: str = "") -> "SurfaceMap":
        disk_map = {v: k for k, v in self.disk_map.items()}
        slot_maps = {}
        for d, (a, c) in self.slot_maps.items():
            d2 = self.disk_map[d]
            s = self.surface.disk[d].n_slots
            # invert t -> a t + c
            slot_maps[d2] = (a, (-a * c) % s)
        return SurfaceMap(self.surface, disk_map, slot_maps, name=name)

    def is_identity(self) -> bool:
        return (all(k == v for k, v in self.disk_map.items())
                and all(a == 1 and c == 0 for (a, c) in self.slot_maps.values()))

    def same_action(self, other: "SurfaceMap") -> bool:
        return self.disk_map == other.disk_map and self.slot_maps == other.slot_maps

    def order(self, bound: int = 10_000) -> int:
        g = self
        for k in range(1, bound + 1):
            if g.is_identity():
                return k - 1 if k > 1 else 0
            if k == bound:
                break
            g = self.compose(g)
        raise SurfaceParameterError("order exceeds bound")

    def __repr__(self) -> str:  # pragma: no cover
        return f"SurfaceMap({self.name or 'unnamed'})"


def map_order(g: SurfaceMap, bound: int = 100_000) -> int:
    h = g
    for k in range(1, bound + 1):
        if h.is_identity():
            return k
        h = g.compose(h)
    raise SurfaceParameterError("order exceeds bound")


@dataclass
class MonodromyAction:
    """Monodromy combinatorics: spine action, twists and stored symmetries."""

    surface: PolygonalSurface
    phi: SurfaceMap
    twist_lengths: dict[int, int]       # circle index -> twist length
    twist_sign: int                     # walk direction of the twist: +1/-1
    symmetries: tuple[SurfaceMap, ...]  # involutions g with phi.g.phi == g

    @property
    def disk_perm(self) -> dict[str, str]:
        return self.phi.disk_map

    @property
    def band_perm(self) -> dict[str, str]:
        return self.phi.band_map

    def band_perm_order(self) -> int:
        perm = self.phi.band_map
        seen = set()
        orders = [1]
        for b in perm:
            if b in seen:
                continue
            n, x = 0, b
            while True:
                x = perm[x]
                n += 1
                seen.add(x)
                if x == b:
                    break
            orders.append(n)
        return lcm(*orders)

    def position_map(self, disk: str, segment: int) -> tuple[str, int]:
        return self.phi.map_segment(disk, segment)

    def twist_of_band_sequence_annulus(self, circle_index: int) -> int:
        return self.twist_lengths[circle_index]

    def to_json_dict(self) -> dict:
        surf = self.surface
        return {
            "surface": surf.surface_id,
            "disk_perm": dict(sorted(self.phi.disk_map.items())),
            "band_perm": dict(sorted(self.phi.band_map.items())),
            "twist_lengths": {str(c): l for c, l in sorted(self.twist_lengths.items())},
            "twist_sign": self.twist_sign,
            "symmetries": [
                {"name": g.name,
                 "disk_map": dict(sorted(g.disk_map.items())),
                 "band_map": dict(sorted(g.band_map.items())),
                 "orientation_preserving": g.orientation_preserving}
                for g in self.symmetries],
        }


# ---------------------------------------------------------------------------
# twist-length derivation and validation


def _derive_twists(surface: PolygonalSurface, phi: SurfaceMap,
                   expected: list[int]) -> tuple[dict[int, int], int]:
    """Rotation offset of every boundary circle under the periodic action.

    Checks that each circle is rotated rigidly, that one global sign makes
    the offsets equal to the expected twist multiset, and that the edge
    cycle is shifted compatibly.
    """
    offsets: dict[int, int] = {}
    for c in surface.circles:
        pos = {st: i for i, st in enumerate(c.stations)}
        rho = None
        for i, st in enumerate(c.stations):
            img = phi.map_segment(*st)
            if img not in pos:
                raise SurfaceParameterError(
                    f"monodromy does not preserve boundary circle {c.index}")
            r = (pos[img] - i) % len(c)
            if rho is None:
                rho = r
            elif r != rho:
                raise SurfaceParameterError(
                    f"monodromy is not a rigid rotation on circle {c.index}")
        offsets[c.index] = rho or 0
        for i in range(len(c)):
            if phi.band_map[c.jumps[i]] != c.jumps[(i + (rho or 0)) % len(c)]:
                raise SurfaceParameterError(
                    f"edge cycle of circle {c.index} not shifted by the rotation")
    for sign in (1, -1):
        twists = {i: (sign * r) % len(surface.circles[i].stations)
                  for i, r in offsets.items()}
        if sorted(twists.values()) == sorted(expected):
            return twists, sign
    raise SurfaceParameterError(
        f"twist offsets {offsets} do not match expected lengths {expected} for any sign")


# ---------------------------------------------------------------------------
# involutions


def _involutions_from_disk_map(surface: PolygonalSurface, phi: SurfaceMap,
                               disk_map: dict[str, str], name: str) -> list[SurfaceMap]:
    """All orientation-reversing involutions with the given disk map that
    satisfy phi . g . phi == g, found by propagating one seed slot map."""
    found = []
    d0 = surface.disks[0].name
    s0 = surface.disk[d0].n_slots
    for c0 in range(s0):
        slot_maps = {d0: (-1, c0)}
        frontier = [d0]
        ok = True
        while frontier and ok:
            d = frontier.pop()
            a, c = slot_maps[d]
            for t, bname in enumerate(surface.disk[d].slots):
                d2, t2 = disk_map[d], (a * t + c) % surface.disk[d].n_slots
                b2 = surface.disk[d2].slots[t2]
                # the other end of b must map to the other end of b2
                (e_d, e_t) = surface.band[bname].other_end(d, t)
                (f_d, f_t) = surface.band[b2].other_end(d2, t2)
                if disk_map.get(e_d) != f_d:
                    ok = False
                    break
                se = surface.disk[e_d].n_slots
                ce = (f_t + e_t) % se  # a = -1 forced: f_t = -e_t + c
                if e_d in slot_maps:
                    if slot_maps[e_d] != (-1, ce):
                        ok = False
                        break
                else:
                    slot_maps[e_d] = (-1, ce)
                    frontier.append(e_d)
        if not ok or len(slot_maps) != len(surface.disks):
            continue
        try:
            g = SurfaceMap(surface, disk_map, slot_maps, name=name)
        except SurfaceParameterError:
            continue
        if not g.compose(g).is_identity():
            continue
        if not phi.compose(g).compose(phi).same_action(g):
            continue
        found.append(g)
    return found


# ---------------------------------------------------------------------------
# family builders


def build_monodromy(surface: PolygonalSurface) -> MonodromyAction:
    """Monodromy action for the torus, hexagon and square families."""
    sid = surface.surface_id
    if sid.startswith("t("):
        return _monodromy_torus(surface)
    if sid == "e7":
        return _monodromy_e7(surface)
    if sid.startswith("d("):
        return _monodromy_dn(surface)
    raise UnsupportedSurfaceError(
        f"surface {sid} carries no periodic spine action in this model")


def _torus_params(surface: PolygonalSurface) -> tuple[int, int]:
    body = surface.surface_id[2:-1]
    n, m = body.split(",")
    return int(n), int(m)


def _monodromy_torus(surface: PolygonalSurface) -> MonodromyAction:
    n, m = _torus_params(surface)
    disk_map = {f"A{i}": f"A{(i - 2) % n + 1}" for i in range(1, n + 1)}
    disk_map.update({f"B{j}": f"B{j % m + 1}" for j in range(1, m + 1)})
    band_map = {band_name_torus(i, j): band_name_torus((i - 2) % n + 1, j % m + 1)
                for i in range(1, n + 1) for j in range(1, m + 1)}
    phi = SurfaceMap.from_band_map(surface, disk_map, band_map, name="phi")
    twists, sign = _derive_twists(surface, phi, [2] * surface.n_boundary)
    return MonodromyAction(surface, phi, twists, sign, symmetries=())


def _monodromy_e7(surface: PolygonalSurface) -> MonodromyAction:
    disk_map = {"A1": "A2", "A2": "A3", "A3": "A1"}
    band_map = {f"k{i}": f"k{i % 9 + 1}" for i in range(1, 10)}
    phi = SurfaceMap.from_band_map(surface, disk_map, band_map, name="phi")
    twists, sign = _derive_twists(surface, phi, [1, 2])

    swap = {"A1": "A2", "A2": "A1", "A3": "A3"}
    tau_perm = {"k1": "k3", "k3": "k1", "k4": "k9", "k9": "k4",
                "k5": "k8", "k8": "k5", "k6": "k7", "k7": "k6", "k2": "k2"}
    sigma_perm = {"k1": "k9", "k9": "k1", "k2": "k8", "k8": "k2",
                  "k3": "k7", "k7": "k3", "k4": "k6", "k6": "k4", "k5": "k5"}
    tau = SurfaceMap.from_band_map(surface, swap, tau_perm, name="tau")
    sigma = SurfaceMap.from_band_map(surface, swap, sigma_perm, name="sigma")
    for g in (tau, sigma):
        if not g.compose(g).is_identity():
            raise SurfaceParameterError(f"{g.name} is not an involution")
        if not phi.compose(g).compose(phi).same_action(g):
            raise SurfaceParameterError(f"{g.name} does not satisfy the twist relation")
    return MonodromyAction(surface, phi, twists, sign, symmetries=(tau, sigma))


def _monodromy_dn(surface: PolygonalSurface) -> MonodromyAction:
    n = int(surface.surface_id[2:-1])
    nd = n - 1

    def disk(i: int) -> str:
        return f"A{(i - 1) % nd + 1}"

    disk_map = {disk(i): disk(i + 1) for i in range(1, nd + 1)}
    if n % 2 == 1:
        ne = 2 * n - 2
        band_map = {f"k{t}": f"k{t % ne + 1}" for t in range(1, ne + 1)}
        expected = [1, n - 2]
    else:
        band_map = {}
        for t in range(1, nd + 1):
            band_map[f"k{t}"] = f"k{t % nd + 1}"
            band_map[f"k{t}p"] = f"k{t % nd + 1}p"
        expected = [1, 2, n // 2 - 1]
    phi = SurfaceMap.from_band_map(surface, disk_map, band_map, name="phi")
    twists, sign = _derive_twists(surface, phi, expected)

    tau_disks = {disk(i): disk(n - i + 2) for i in range(1, nd + 1)}
    taus = _involutions_from_disk_map(surface, phi, tau_disks, name="tau")
    if not taus:
        raise SurfaceParameterError(f"no reflection involution found for d({n})")
    return MonodromyAction(surface, phi, twists, sign, symmetries=tuple(taus))


# ---------------------------------------------------------------------------
# consecutive-band runs along annuli


class RunTracker:
    """Incremental tracker of maximal consecutive-band runs along annuli.

    Feed one band crossing at a time via :meth:`step`; after each step,
    :attr:`best` holds ``(length, circle)`` of the longest run ending there.
    A crossing is given as ``(band, disk_before, disk_after)``.
    """

    def __init__(self, surface: PolygonalSurface):
        self.surface = surface
        self._sides: dict[tuple[str, str, str], list[tuple[int, int, int]]] = {}
        for c in surface.circles:
            k = len(c.stations)
            for i in range(k):
                b = c.jumps[i]
                d_from, d_to = c.stations[i][0], c.stations[(i + 1) % k][0]
                self._sides.setdefault((b, d_from, d_to), []).append((c.index, i, +1))
                self._sides.setdefault((b, d_to, d_from), []).append((c.index, i, -1))
        self.reset()

    def reset(self) -> None:
        self.states: dict[tuple[int, int, int], int] = {}
        self.best: tuple[int, Optional[int]] = (0, None)

    def step(self, band: str, disk_before: str, disk_after: str) -> tuple[int, Optional[int]]:
        fresh = self._sides.get((band, disk_before, disk_after), [])
        new: dict[tuple[int, int, int], int] = {}
        for (c, i, d), length in self.states.items():
            k = len(self.surface.circles[c].stations)
            j = (i + d) % k
            st = (c, j, d)
            if self.surface.circles[c].jumps[j] == band:
                # direction of the crossing along this side must match
                a = self.surface.circles[c].stations[j][0]
                b2 = self.surface.circles[c].stations[(j + 1) % k][0]
                if (d == 1 and (a, b2) == (disk_before, disk_after)) or \
                   (d == -1 and (b2, a) == (disk_before, disk_after)):
                    new[st] = max(new.get(st, 0), length + 1)
        for st in fresh:
            new.setdefault(st, 1)
        self.states = new
        best_len, best_c = 0, None
        for (c, _, _), length in new.items():
            if length > best_len:
                best_len, best_c = length, c
        self.best = (best_len, best_c)
        return self.best


def band_itinerary_disks(surface: PolygonalSurface, start_disk: str,
                         bands: Sequence[str]) -> list[str]:
    """Disk sequence visited by a band itinerary starting on ``start_disk``."""
    disks = [start_disk]
    cur = start_disk
    for b in bands:
        band = surface.band[b]
        endings = [d for (d, _) in band.ends]
        if cur not in endings:
            from .errors import MalformedArcError

            raise MalformedArcError(f"band {b} is not attached to disk {cur}")
        cur = endings[1] if endings[0] == cur else endings[0]
        disks.append(cur)
    return disks


def consecutive_runs(surface: PolygonalSurface):
    """Cyclic band order of every annulus, plus a consecutiveness query.

    Returns ``(cycles, query)`` where ``cycles[c]`` is the cyclic band list of
    circle ``c`` and ``query(bands, start_disk=None)`` gives
    ``(is_consecutive, length, circle)`` for a band sequence.
    """
    cycles = {c.index: list(c.jumps) for c in surface.circles}

    def query(bands: Sequence[str], start_disk: Optional[str] = None):
        if not bands:
            return True, 0, None
        starts = []
        if start_disk is not None:
            starts = [start_disk]
        else:
            starts = [d for (d, _) in surface.band[bands[0]].ends]
        tracker = RunTracker(surface)
        for s in starts:
            try:
                disks = band_itinerary_disks(surface, s, bands)
            except Exception:
                continue
            tracker.reset()
            length = None
            for t, b in enumerate(bands):
                length, circle = tracker.step(b, disks[t], disks[t + 1])
            if length == len(bands):
                return True, len(bands), circle
        return False, 0, None

    return cycles, query
