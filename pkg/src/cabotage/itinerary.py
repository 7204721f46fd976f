"""Voyage reconstruction rules: ordering, route marking, uncertainty.

A ship's stopover rows are grouped per source document, ordered by each
document's observation date, then deduplicated with A/Z route markers:

* an intention (status FC) immediately followed by an observed stop at the
  same place is a duplicate and gets Z (the precisely dated observation is
  kept);
* an intention superseded by observed stops that intervene before the ship
  is finally seen at the declared place also gets Z (the ship did not sail
  there directly);
* two observed stops at the same place from overlapping documents keep the
  one recorded at the observation point (function 'O');
* voyage-duration infeasibility is historian judgment, never evaluated
  here: such points keep A, and any disagreement with the historian's
  marker surfaces as a "controversial" qualification.

Each kept point then receives one of six uncertainty levels, and kept
consecutive points are joined into travel segments carrying a four-level
uncertainty derived from their endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .dates import UNKNOWN, FlexDate, sort_key

VALID_STATUS = ("PC", "FC", "PU")
VALID_FUNCTION = ("", "O", "T", "A")
VALID_MARKER = ("", "A", "Z")


class UncertaintyLevel(Enum):
    OBSERVED = "observed"
    CONFIRMED = "confirmed"
    DECLARED = "declared"
    CONTROVERSIAL = "controversial"
    UNVERIFIABLE = "unverifiable"
    INVALIDATED = "invalidated"


# severity drives segment qualification: the worse endpoint wins
SEVERITY = {
    UncertaintyLevel.OBSERVED: 0,
    UncertaintyLevel.CONFIRMED: 0,
    UncertaintyLevel.DECLARED: 1,
    UncertaintyLevel.UNVERIFIABLE: 1,
    UncertaintyLevel.INVALIDATED: 2,
    UncertaintyLevel.CONTROVERSIAL: 3,
}

TRAVEL_UNCERTAINTY_BY_SEVERITY = {0: 0, 1: -1, 2: -2, 3: -3}

COLOR_BY_TRAVEL_UNCERTAINTY = {0: "green", -1: "grey", -2: "red", -3: "orange"}


@dataclass
class Pointcall:
    """One stopover row of the source table."""

    data_block_local_id: str
    ship_id: str
    ship_name: str = ""
    captain_id: str = ""
    toponym: str = ""
    geo_id: str = ""
    out_date: FlexDate = UNKNOWN
    in_date: FlexDate = UNKNOWN
    rank: int = 1
    function: str = ""
    status: str = "PC"
    net_route_marker: str = ""
    historian_marker: str = ""
    uncertainty: UncertaintyLevel | None = None
    attributes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in VALID_STATUS:
            raise ValueError(f"invalid status {self.status!r}")
        if self.function not in VALID_FUNCTION:
            raise ValueError(f"invalid function {self.function!r}")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    def event_date(self) -> FlexDate:
        return self.out_date if self.out_date.known else self.in_date


@dataclass
class Stop:
    """A retained stop; duplicate pointcalls collapse into one."""

    pointcall: Pointcall
    in_date: FlexDate
    out_date: FlexDate
    uncertainty: UncertaintyLevel

    @property
    def geo_id(self) -> str:
        return self.pointcall.geo_id

    @property
    def toponym(self) -> str:
        return self.pointcall.toponym


@dataclass
class TravelSegment:
    """A qualified voyage leg between two retained stops."""

    ship_id: str
    from_stop: Stop
    to_stop: Stop
    departure: FlexDate
    arrival: FlexDate | None
    direct: bool
    travel_uncertainty: int
    color: str
    geometry: object | None = None


def derive_travel_uncertainty(from_level: UncertaintyLevel,
                              to_level: UncertaintyLevel) -> int:
    """Four-level segment uncertainty: the more severe endpoint decides."""
    return TRAVEL_UNCERTAINTY_BY_SEVERITY[max(SEVERITY[from_level], SEVERITY[to_level])]


# ---------------------------------------------------------------------------
# ordering
# ---------------------------------------------------------------------------

def order_pointcalls(records: list[Pointcall]) -> list[Pointcall]:
    """Chronological sequence for one ship: documents ordered by their
    observation date, rows ordered by rank within each document.

    A document without any datable anchor falls back to rank-only ordering
    after the dated ones; its rows are flagged with
    ``attributes["order_fallback"]``.
    """
    if not records:
        return []
    ship_ids = {r.ship_id for r in records}
    if len(ship_ids) != 1:
        raise ValueError(f"records span several ships: {sorted(ship_ids)}")

    docs: dict[str, list[Pointcall]] = {}
    for rec in records:
        docs.setdefault(rec.data_block_local_id, []).append(rec)
    for rows in docs.values():
        rows.sort(key=lambda r: r.rank)

    dated, undated = [], []
    for doc_id, rows in docs.items():
        anchor = _document_anchor(rows)
        if anchor is None:
            for row in rows:
                row.attributes["order_fallback"] = True
            undated.append((doc_id, rows))
        else:
            dated.append((sort_key(anchor), doc_id, rows))
    dated.sort(key=lambda item: (item[0], item[1]))
    undated.sort(key=lambda item: item[0])

    ordered: list[Pointcall] = []
    for _, _, rows in dated:
        ordered.extend(rows)
    for _, rows in undated:
        ordered.extend(rows)
    return ordered


def _document_anchor(rows: list[Pointcall]) -> FlexDate | None:
    for row in rows:
        if row.function == "O" and row.event_date().known:
            return row.event_date()
    for row in rows:
        if row.event_date().known:
            return row.event_date()
    return None


# ---------------------------------------------------------------------------
# route marking
# ---------------------------------------------------------------------------

def mark_route(sequence: list[Pointcall]) -> list[Pointcall]:
    """Assign net_route_marker A/Z over an ordered sequence.

    Time-infeasible legs are deliberately not detected (their points keep
    A); unrealised intentions (status PU) are always eliminated.
    """
    n = len(sequence)
    markers = ["A"] * n

    for i, pc in enumerate(sequence):
        if pc.status == "PU":
            markers[i] = "Z"

    # duplicate intention confirmed by the immediately following observation
    for i, pc in enumerate(sequence):
        if pc.status != "FC" or markers[i] == "Z":
            continue
        if i + 1 < n:
            nxt = sequence[i + 1]
            if nxt.status == "PC" and nxt.geo_id == pc.geo_id:
                markers[i] = "Z"

    # intention superseded by observed stops that intervene before the ship
    # finally shows up at the declared place
    for i, pc in enumerate(sequence):
        if pc.status != "FC" or markers[i] == "Z":
            continue
        arrival = None
        for j in range(i + 1, n):
            if sequence[j].status == "PC" and sequence[j].geo_id == pc.geo_id:
                arrival = j
                break
        if arrival is None:
            continue
        intervening = any(sequence[k].status == "PC" and sequence[k].geo_id != pc.geo_id
                          for k in range(i + 1, arrival))
        if intervening:
            markers[i] = "Z"

    # observed duplicates from overlapping documents: keep the point recorded
    # at the observation place (function 'O'), or the first one
    last_kept = -1
    for i, pc in enumerate(sequence):
        if markers[i] == "Z":
            continue
        if last_kept >= 0:
            prev = sequence[last_kept]
            if (pc.geo_id == prev.geo_id and pc.status == "PC"
                    and prev.status == "PC"):
                if pc.function == "O" and prev.function != "O":
                    markers[last_kept] = "Z"
                    last_kept = i
                else:
                    markers[i] = "Z"
                continue
        last_kept = i

    for pc, marker in zip(sequence, markers):
        pc.net_route_marker = marker
    return sequence


# ---------------------------------------------------------------------------
# uncertainty qualification
# ---------------------------------------------------------------------------

def _is_certified_observation(pc: Pointcall, o_rank: int | None) -> bool:
    """Past stops vouched for at the observation point with a precise date.

    The observation row itself always qualifies. Other PC rows qualify when
    the document's declaration was recorded after them (registry-style
    arrival documents); a captain's claim about an earlier stop made when
    clearing out carries no visa and stays a declaration.
    """
    if pc.function == "O":
        return True
    if pc.status != "PC" or o_rank is None or pc.rank >= o_rank:
        return False
    date = pc.event_date()
    return date.known and date.qualifier == "exact" and date.day is not None


def qualify_pointcalls(sequence: list[Pointcall], registry_ports: set[str],
                       historian_markers: dict[tuple[str, int], str] | None = None,
                       ) -> list[Pointcall]:
    """Assign the six-level uncertainty to a marked sequence.

    ``registry_ports`` holds the gazetteer ids whose exit registers are
    available: a declared destination there that the ship provably never
    left, while observed elsewhere later, is a false declaration. Whenever
    the historian's marker disagrees with the computed one the point
    becomes controversial, overriding everything else.
    """
    o_rank_by_doc: dict[str, int | None] = {}
    for pc in sequence:
        doc = pc.data_block_local_id
        if doc not in o_rank_by_doc:
            o_rank_by_doc[doc] = None
        if pc.function == "O":
            o_rank_by_doc[doc] = pc.rank

    certified = [_is_certified_observation(pc, o_rank_by_doc[pc.data_block_local_id])
                 for pc in sequence]
    last_observed = max((i for i, c in enumerate(certified) if c), default=None)

    doc_pos: dict[str, int] = {}
    for pc in sequence:
        if pc.data_block_local_id not in doc_pos:
            doc_pos[pc.data_block_local_id] = len(doc_pos)

    for i, pc in enumerate(sequence):
        if pc.status == "PU":
            level = UncertaintyLevel.INVALIDATED
        elif certified[i]:
            level = UncertaintyLevel.OBSERVED
        elif pc.status == "PC":
            level = UncertaintyLevel.DECLARED
        else:
            level = _qualify_intention(sequence, certified, doc_pos, i,
                                       last_observed, registry_ports)
        historian = pc.historian_marker
        if historian_markers is not None:
            historian = historian_markers.get(
                (pc.data_block_local_id, pc.rank), pc.historian_marker)
        if historian and historian != pc.net_route_marker:
            level = UncertaintyLevel.CONTROVERSIAL
        pc.uncertainty = level
    return sequence


def _qualify_intention(sequence, certified, doc_pos, i, last_observed,
                       registry_ports) -> UncertaintyLevel:
    pc = sequence[i]
    later_obs_pos = [doc_pos[sequence[j].data_block_local_id]
                     for j in range(i + 1, len(sequence))
                     if certified[j] and sequence[j].geo_id == pc.geo_id]
    if later_obs_pos:
        # confirmed only by the next document; farther matches stay declared
        if min(later_obs_pos) == doc_pos[pc.data_block_local_id] + 1:
            return UncertaintyLevel.CONFIRMED
        return UncertaintyLevel.DECLARED
    if last_observed is None or i > last_observed:
        return UncertaintyLevel.UNVERIFIABLE
    if pc.geo_id in registry_ports:
        # the destination keeps exit registers, none records this ship, and
        # the ship is observed elsewhere afterwards
        return UncertaintyLevel.INVALIDATED
    return UncertaintyLevel.UNVERIFIABLE


# ---------------------------------------------------------------------------
# segment construction
# ---------------------------------------------------------------------------

def collapse_retained_stops(sequence: list[Pointcall]) -> list[Stop]:
    """Stops that survive Z-elimination, duplicates collapsed.

    Z points drop out unless controversial; unrealised intentions (PU)
    always drop; consecutive same-place points merge into one stop that
    keeps the worse uncertainty of the pair.
    """
    retained = [pc for pc in sequence
                if pc.status != "PU"
                and (pc.net_route_marker != "Z"
                     or pc.uncertainty == UncertaintyLevel.CONTROVERSIAL)]
    stops: list[Stop] = []
    for pc in retained:
        if stops and stops[-1].geo_id == pc.geo_id:
            stops[-1] = _merge_stop(stops[-1], pc)
        else:
            stops.append(Stop(pointcall=pc, in_date=pc.in_date,
                              out_date=pc.out_date,
                              uncertainty=pc.uncertainty or UncertaintyLevel.DECLARED))
    return stops


def build_segments(sequence: list[Pointcall]) -> list[TravelSegment]:
    """Join retained stops into qualified segments.

    A leg between places never declared adjacent in any covering document
    is inferred (direct=false).
    """
    stops = collapse_retained_stops(sequence)
    if len(stops) < 2:
        return []

    doc_pos: dict[str, int] = {}
    for pc in sequence:
        if pc.data_block_local_id not in doc_pos:
            doc_pos[pc.data_block_local_id] = len(doc_pos)
    adjacency: set[tuple[str, str, int]] = set()
    for prev, cur in zip(sequence, sequence[1:]):
        if (cur.data_block_local_id == prev.data_block_local_id
                and cur.rank == prev.rank + 1):
            adjacency.add((prev.geo_id, cur.geo_id,
                           doc_pos[prev.data_block_local_id]))

    segments = []
    for a, b in zip(stops, stops[1:]):
        lo = doc_pos[a.pointcall.data_block_local_id]
        hi = doc_pos[b.pointcall.data_block_local_id]
        direct = any((a.geo_id, b.geo_id, dp) in adjacency
                     for dp in range(min(lo, hi), max(lo, hi) + 1))
        travel = derive_travel_uncertainty(a.uncertainty, b.uncertainty)
        departure = a.out_date if a.out_date.known else a.in_date
        arrival = b.in_date if b.in_date.known else None
        segments.append(TravelSegment(
            ship_id=a.pointcall.ship_id,
            from_stop=a,
            to_stop=b,
            departure=departure,
            arrival=arrival,
            direct=direct,
            travel_uncertainty=travel,
            color=COLOR_BY_TRAVEL_UNCERTAINTY[travel],
        ))
    return segments


def _merge_stop(stop: Stop, pc: Pointcall) -> Stop:
    primary = stop.pointcall
    if pc.function == "O" and primary.function != "O":
        primary = pc
    in_date = stop.in_date if stop.in_date.known else pc.in_date
    out_date = pc.out_date if pc.out_date.known else stop.out_date
    level = pc.uncertainty or UncertaintyLevel.DECLARED
    worst = level if SEVERITY[level] > SEVERITY[stop.uncertainty] else stop.uncertainty
    return Stop(pointcall=primary, in_date=in_date, out_date=out_date,
                uncertainty=worst)


def qualify_ship(records: list[Pointcall], registry_ports: set[str],
                 historian_markers: dict[tuple[str, int], str] | None = None):
    """Full pipeline for one ship: order, mark, qualify, build segments."""
    sequence = order_pointcalls(records)
    mark_route(sequence)
    qualify_pointcalls(sequence, registry_ports, historian_markers)
    return sequence, build_segments(sequence)


def _stop_record(stop: Stop) -> dict:
    pc = stop.pointcall
    return {
        "data_block_local_id": pc.data_block_local_id,
        "rank": pc.rank,
        "geo_id": pc.geo_id,
        "toponym": pc.toponym,
        "in_date": stop.in_date.serialize(),
        "out_date": stop.out_date.serialize(),
        "uncertainty": stop.uncertainty.value,
    }


def segment_record(segment: TravelSegment) -> dict:
    """One qualified segment as a flat JSON-serializable record (the shape
    of each line in the JSON-lines export)."""
    geometry = None
    if segment.geometry is not None:
        geometry = [[p.lon, p.lat] for p in segment.geometry.path]
    return {
        "ship_id": segment.ship_id,
        "from": _stop_record(segment.from_stop),
        "to": _stop_record(segment.to_stop),
        "departure": segment.departure.serialize(),
        "arrival": segment.arrival.serialize() if segment.arrival else None,
        "direct": segment.direct,
        "travel_uncertainty": segment.travel_uncertainty,
        "color": segment.color,
        "geometry": geometry,
    }
