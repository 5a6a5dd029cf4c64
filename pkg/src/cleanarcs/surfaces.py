"""Polygonal models of fibre surfaces.

A surface here is a collection of oriented polygonal disks glued along bands.
Each disk carries a cyclic word of band-attachment slots, listed
counterclockwise; between consecutive slots lies one free boundary segment.
Every band joins exactly two slots (on two distinct disks for the torus,
hexagon and square families).  The dual graph -- one vertex per disk, one
edge per band -- is the invariant spine along which the monodromy acts.

Three concrete families are built here:

* ``torus(n, m)``: the thickened complete bipartite graph on disks
  ``A1..An`` / ``B1..Bm`` with bands ``Ki_j``,
* ``e7()``: three hexagons glued along nine edges ``k1..k9``,
* ``dn(n)``: squares glued along one (n odd) or two (n even) edge orbits,
* ``tree(edges)``: a one-disk clasp model of an arbitrary plumbing tree,
  used by the homology layer only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import (
    SurfaceParameterError,
    SurfaceSpecError,
    UnsupportedSurfaceError,
)

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Band:
    """A band joining two slots; ``ends[k] = (disk_name, slot_index)``."""

    name: str
    ends: tuple[tuple[str, int], tuple[str, int]]

    def other_end(self, disk: str, slot: int) -> tuple[str, int]:
        if self.ends[0] == (disk, slot):
            return self.ends[1]
        if self.ends[1] == (disk, slot):
            return self.ends[0]
        raise KeyError(f"({disk}, {slot}) is not an end of band {self.name}")

    def end_index(self, disk: str, slot: int) -> int:
        if self.ends[0] == (disk, slot):
            return 0
        if self.ends[1] == (disk, slot):
            return 1
        raise KeyError(f"({disk}, {slot}) is not an end of band {self.name}")


@dataclass(frozen=True)
class Disk:
    """A polygonal disk with its counterclockwise cyclic slot word.

    Segment ``t`` is the free boundary arc between slot ``t`` and slot
    ``t + 1 (mod len(slots))``.
    """

    name: str
    slots: tuple[str, ...]

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    def segment_between(self, t: int) -> tuple[str, str]:
        """Names of the two bands flanking segment ``t``."""
        return self.slots[t], self.slots[(t + 1) % len(self.slots)]


@dataclass(frozen=True)
class BoundaryCircle:
    """One boundary component of the surface.

    ``stations[i]`` is the ``(disk, segment)`` pair traversed i-th along the
    circle; between ``stations[i]`` and ``stations[i+1]`` the circle runs along
    a free side of band ``jumps[i]``.  The cyclic sequence ``jumps`` is the
    edge cycle of the complementary annulus on the spine side.
    """

    index: int
    stations: tuple[tuple[str, int], ...]
    jumps: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.stations)


class PolygonalSurface:
    """Immutable disk-and-band surface with its boundary circle decomposition."""

    def __init__(self, surface_id: str, disks: Sequence[Disk], bands: Sequence[Band],
                 crossing_table: Optional[dict] = None):
        self.surface_id = surface_id
        self.disks = tuple(disks)
        self.bands = tuple(bands)
        self.disk = {d.name: d for d in self.disks}
        self.band = {b.name: b for b in self.bands}
        if len(self.disk) != len(self.disks) or len(self.band) != len(self.bands):
            raise SurfaceParameterError("duplicate disk or band names")
        self._check_slots()
        self.circles = self._walk_boundary()
        self._station_index = {}
        for c in self.circles:
            for i, st in enumerate(c.stations):
                self._station_index[st] = (c.index, i)
        # Static under/over table for torus embeddings; never consulted by
        # the arc calculus.
        self.crossing_table = crossing_table or {}

    # -- structure ---------------------------------------------------------

    def _check_slots(self) -> None:
        seen: dict[tuple[str, int], str] = {}
        for b in self.bands:
            for (d, t) in b.ends:
                if d not in self.disk:
                    raise SurfaceParameterError(f"band {b.name} attached to unknown disk {d}")
                if not (0 <= t < self.disk[d].n_slots):
                    raise SurfaceParameterError(f"band {b.name} attached to bad slot ({d}, {t})")
                if (d, t) in seen:
                    raise SurfaceParameterError(f"slot ({d}, {t}) used twice")
                seen[(d, t)] = b.name
                if self.disk[d].slots[t] != b.name:
                    raise SurfaceParameterError(
                        f"slot ({d}, {t}) holds {self.disk[d].slots[t]}, not {b.name}")
        for d in self.disks:
            for t in range(d.n_slots):
                if (d.name, t) not in seen:
                    raise SurfaceParameterError(f"slot ({d.name}, {t}) is unused")

    def _walk_boundary(self) -> tuple[BoundaryCircle, ...]:
        # Boundary walk: after segment t of disk P comes slot t+1; its band's
        # free side leads to the partner slot u on disk Q, and the walk
        # continues along segment u of Q.
        todo = {(d.name, t) for d in self.disks for t in range(d.n_slots)}
        circles = []
        while todo:
            start = min(todo)
            stations, jumps = [], []
            cur = start
            while True:
                stations.append(cur)
                todo.discard(cur)
                dname, seg = cur
                disk = self.disk[dname]
                slot = (seg + 1) % disk.n_slots
                band = self.band[disk.slots[slot]]
                q, u = band.other_end(dname, slot)
                jumps.append(band.name)
                cur = (q, u)
                if cur == start:
                    break
            circles.append(BoundaryCircle(len(circles), tuple(stations), tuple(jumps)))
        return tuple(circles)

    # -- queries -----------------------------------------------------------

    @property
    def euler_characteristic(self) -> int:
        return len(self.disks) - len(self.bands)

    @property
    def n_boundary(self) -> int:
        return len(self.circles)

    @property
    def first_betti(self) -> int:
        # connected surface with boundary
        return 1 - self.euler_characteristic

    def station(self, disk: str, segment: int) -> tuple[int, int]:
        """(circle index, position along the circle) of a boundary segment."""
        return self._station_index[(disk, segment)]

    def band_ends_on(self, disk: str) -> list[tuple[int, str]]:
        """Slots of a disk as (slot index, band name)."""
        d = self.disk[disk]
        return list(enumerate(d.slots))

    def is_connected(self) -> bool:
        if not self.disks:
            return False
        seen = {self.disks[0].name}
        frontier = [self.disks[0].name]
        while frontier:
            d = frontier.pop()
            for b in self.disk[d].slots:
                for (q, _) in self.band[b].ends:
                    if q not in seen:
                        seen.add(q)
                        frontier.append(q)
        return len(seen) == len(self.disks)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "surface": self.surface_id,
            "disks": [{"name": d.name, "slots": list(d.slots)} for d in self.disks],
            "bands": [{"name": b.name,
                       "ends": [[b.ends[0][0], b.ends[0][1]], [b.ends[1][0], b.ends[1][1]]]}
                      for b in self.bands],
            "boundary": [{"index": c.index,
                          "stations": [[d, s] for (d, s) in c.stations],
                          "edge_cycle": list(c.jumps)}
                         for c in self.circles],
            "euler_characteristic": self.euler_characteristic,
            "crossing_table": sorted(self.crossing_table) if self.crossing_table else [],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def graph_dot(self) -> str:
        """DOT export of the spine (one vertex per disk, one edge per band)."""
        lines = ["graph spine {"]
        for d in self.disks:
            lines.append(f'  "{d.name}";')
        for b in self.bands:
            (d0, _), (d1, _) = b.ends
            lines.append(f'  "{d0}" -- "{d1}" [label="{b.name}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self) -> str:  # pragma: no cover
        return (f"PolygonalSurface({self.surface_id!r}, disks={len(self.disks)}, "
                f"bands={len(self.bands)}, boundary={self.n_boundary})")


# ---------------------------------------------------------------------------
# builders


def torus(n: int, m: int) -> PolygonalSurface:
    """Fibre surface model of the (n, m) torus link.

    Disks ``Ai`` (i = 1..n) carry slots ``Ki_1 .. Ki_m`` counterclockwise;
    disks ``Bj`` carry ``Kn_j .. K1_j``.  There are gcd(n, m) boundary
    circles and every complementary annulus twists by two edges.
    """
    if n < 2 or m < 2:
        raise SurfaceParameterError(f"torus model needs n, m >= 2, got ({n}, {m})")
    disks = []
    for i in range(1, n + 1):
        disks.append(Disk(f"A{i}", tuple(band_name_torus(i, j) for j in range(1, m + 1))))
    for j in range(1, m + 1):
        disks.append(Disk(f"B{j}", tuple(band_name_torus(i, j) for i in range(n, 0, -1))))
    bands = []
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            bands.append(Band(band_name_torus(i, j),
                              ((f"A{i}", j - 1), (f"B{j}", n - i))))
    table = {(band_name_torus(i, j), band_name_torus(p, q))
             for i in range(1, n + 1) for j in range(1, m + 1)
             for p in range(1, n + 1) for q in range(1, m + 1)
             if i > p and j < q}
    surf = PolygonalSurface(f"t({n},{m})", disks, bands,
                            crossing_table={pair: "under" for pair in table})
    assert surf.n_boundary == gcd(n, m)
    assert surf.euler_characteristic == n + m - n * m
    return surf


def band_name_torus(i: int, j: int) -> str:
    return f"K{i}_{j}"


def e7() -> PolygonalSurface:
    """Fibre surface of the seven-vertex fork plumbing: three hexagons.

    The cyclic hexagon words are pinned by the requirement that the edge
    rotation ``k_i -> k_{i+1}`` together with the two reflection symmetries
    is an automorphism; they reproduce boundary twist lengths {1, 2}.
    """
    words = {
        "A1": ("k1", "k2", "k7", "k8", "k4", "k5"),
        "A2": ("k2", "k3", "k8", "k9", "k5", "k6"),
        "A3": ("k3", "k4", "k9", "k1", "k6", "k7"),
    }
    return _surface_from_words("e7", words)


def dn(n: int) -> PolygonalSurface:
    """Fibre surface of the n-vertex fork plumbing: n-1 squares.

    For odd n the squares are ``Ai = [k_i, k_{i+1}, k_{n+i-1}, k_{n+i}]``
    over one orbit of 2n-2 edges; for even n they are
    ``Ai = [k_i, k'_i, k'_{i+1}, k_{i+2}]`` over two orbits of n-1 edges.
    """
    if n < 4:
        raise SurfaceParameterError(f"square model needs n >= 4, got {n}")
    words: dict[str, tuple[str, ...]] = {}
    if n % 2 == 1:
        def k(t: int) -> str:
            return f"k{(t - 1) % (2 * n - 2) + 1}"
        for i in range(1, n):
            words[f"A{i}"] = (k(i), k(i + 1), k(n + i - 1), k(n + i))
    else:
        def k(t: int) -> str:
            return f"k{(t - 1) % (n - 1) + 1}"

        def kp(t: int) -> str:
            return f"k{(t - 1) % (n - 1) + 1}p"
        for i in range(1, n):
            words[f"A{i}"] = (k(i), kp(i), kp(i + 1), k(i + 2))
    surf = _surface_from_words(f"d({n})", words)
    assert surf.euler_characteristic == -(n - 1)
    assert surf.n_boundary == (2 if n % 2 == 1 else 3)
    return surf


def _surface_from_words(surface_id: str, words: dict[str, tuple[str, ...]]) -> PolygonalSurface:
    disks = [Disk(name, tuple(w)) for name, w in words.items()]
    ends: dict[str, list[tuple[str, int]]] = {}
    for name, w in words.items():
        for t, b in enumerate(w):
            ends.setdefault(b, []).append((name, t))
    bands = []
    for b in sorted(ends, key=_band_sort_key):
        if len(ends[b]) != 2:
            raise SurfaceParameterError(f"band {b} appears {len(ends[b])} times, need 2")
        bands.append(Band(b, (ends[b][0], ends[b][1])))
    return PolygonalSurface(surface_id, disks, bands)


def _band_sort_key(name: str):
    digits = "".join(ch for ch in name if ch.isdigit())
    return (name.rstrip("0123456789p"), int(digits) if digits else 0, name)


def tree_surface(edges: Sequence[tuple[int, int]], n_vertices: int) -> PolygonalSurface:
    """One-disk clasp model of a plumbing tree.

    One self-glued band per vertex; the two slots of a child's band tightly
    clasp one slot of its parent's band, so core curves meet exactly along
    tree edges.  Used by the homology layer; it carries no periodic spine
    action.
    """
    from .homology import check_tree  # local import to avoid a cycle

    adj = check_tree(edges, n_vertices)
    # cyclic slot word on the single disk, grown by clasping
    word: list[int] = [0, 0]  # two slots of the root band, vertex 0
    placed = {0}
    order = [0]
    frontier = [0]
    while frontier:
        v = frontier.pop(0)
        for w in sorted(adj[v]):
            if w in placed:
                continue
            # clasp around the *second* occurrence of v's band
            pos = len(word) - 1 - word[::-1].index(v)
            word[pos + 1:pos + 1] = [w]
            word[pos:pos] = [w]
            placed.add(w)
            order.append(w)
            frontier.append(w)
    slot_names = tuple(f"h{v}" for v in word)
    disk = Disk("D", slot_names)
    occurrences: dict[int, list[int]] = {}
    for t, v in enumerate(word):
        occurrences.setdefault(v, []).append(t)
    bands = [Band(f"h{v}", (("D", occurrences[v][0]), ("D", occurrences[v][1])))
             for v in sorted(occurrences)]
    surf = PolygonalSurface(f"tree({n_vertices})", [disk], bands)
    assert surf.euler_characteristic == 1 - n_vertices
    return surf


# ---------------------------------------------------------------------------
# surface spec parsing


def parse_surface_spec(text: str):
    """Parse ``t(3,5)`` / ``e7`` / ``d(7)`` / ``tree:0-1,1-2`` specs.

    Returns ``("torus", n, m)`` / ``("e7",)`` / ``("dn", n)`` /
    ``("tree", edges, n_vertices)``.
    """
    s = text.strip().lower()
    if s == "e7":
        return ("e7",)
    if s.startswith("t(") and s.endswith(")"):
        body = s[2:-1]
        parts = body.split(",")
        if len(parts) != 2:
            raise SurfaceSpecError(text, 2, "expected t(n,m)")
        try:
            n, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise SurfaceSpecError(text, 2, "n and m must be integers") from None
        return ("torus", n, m)
    if s.startswith("d(") and s.endswith(")"):
        try:
            n = int(s[2:-1])
        except ValueError:
            raise SurfaceSpecError(text, 2, "n must be an integer") from None
        return ("dn", n)
    if s.startswith("tree:"):
        from .homology import parse_tree_spec

        edges, nv = parse_tree_spec(text[5:])
        return ("tree", edges, nv)
    raise SurfaceSpecError(text, 0, "unknown surface spec")


def build_surface(spec) -> PolygonalSurface:
    """Build a surface from a spec string or a parsed spec tuple."""
    if isinstance(spec, str):
        spec = parse_surface_spec(spec)
    kind = spec[0]
    if kind == "torus":
        return torus(spec[1], spec[2])
    if kind == "e7":
        return e7()
    if kind == "dn":
        return dn(spec[1])
    if kind == "tree":
        return tree_surface(spec[1], spec[2])
    raise UnsupportedSurfaceError(f"unknown surface kind {kind!r}")
