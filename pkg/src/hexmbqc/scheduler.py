"""Constant-depth entangling schedule for 3D cluster preparation.

Every cluster edge is a CPHASE gate; gates sharing an ion cannot run in
the same round.  Six rounds always suffice, independent of array size:

    rounds 1-4:  in-layer edges, split by primitive direction (u or v)
                 and by the parity of the source coordinate along it;
    rounds 5-6:  interlayer edges, split by source-layer parity (round 6
                 carries the periodic wrap, whose source layer 2 n**2 is
                 even).

Each round is a matching by construction, so the schedule depth is a
constant 6 and preparation time is size-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import LayerAssignment, interlayer_edges, intra_layer_edges

__all__ = ["GateSchedule", "ScheduleInfeasibleError", "build_schedule", "prep_time",
           "schedule_report", "schedule_csv_rows"]

ROUND_NAMES = (
    "intra-u-even",
    "intra-u-odd",
    "intra-v-even",
    "intra-v-odd",
    "inter-odd-layer",
    "inter-even-layer",
)


class ScheduleInfeasibleError(ValueError):
    """No valid six-round schedule exists for the requested topology."""


@dataclass(frozen=True)
class GateSchedule:
    """Six rounds of disjoint CPHASE pairs plus per-round timing."""

    rounds: tuple[tuple[tuple[int, int], ...], ...]
    timing: tuple[tuple[float, float], ...]  # (shuttle_time, gate_time) per round
    periodic: bool
    layer_count: int

    def edge_union(self) -> set[tuple[int, int]]:
        return {e for rnd in self.rounds for e in rnd}

    def pair_counts(self) -> tuple[int, ...]:
        return tuple(len(rnd) for rnd in self.rounds)


def build_schedule(
    assign: LayerAssignment,
    periodic: bool = False,
    t_gate: float = 1e-5,
    t_shuttle: float = 1e-4,
) -> GateSchedule:
    """Partition the 3D cluster edge set into six parallel rounds."""
    if t_gate < 0 or t_shuttle < 0:
        raise ValueError("round times must be nonnegative")
    if periodic and assign.layer_count % 2 != 0:
        # 2 n**2 is always even; guarded in case of exotic assignments.
        raise ScheduleInfeasibleError(
            f"periodic closure with odd layer count {assign.layer_count} "
            "would force two rounds onto one layer"
        )

    rounds: list[set[tuple[int, int]]] = [set() for _ in range(6)]
    coord = assign.coord_of
    layer = assign.layer_of

    for a, b in intra_layer_edges(assign):
        (ax, ay), (bx, by) = coord[a], coord[b]
        if ay == by:  # u step
            src = min(ax, bx)
            rounds[0 if src % 2 == 0 else 1].add((a, b))
        else:  # v step
            src = min(ay, by)
            rounds[2 if src % 2 == 0 else 3].add((a, b))

    inter = interlayer_edges(assign, periodic)
    for a, b in sorted(inter):
        la, lb = layer[a], layer[b]
        # source = lower layer, except for the wrap edge (last -> first)
        if {la, lb} == {1, assign.layer_count} and assign.layer_count > 2:
            src = assign.layer_count
        else:
            src = min(la, lb)
        rounds[4 if src % 2 == 1 else 5].add((a, b))

    # n=1 periodic wrap duplicates round-5 edges; keep the first copy only
    rounds[5] -= rounds[4]

    timing = tuple((t_shuttle, t_gate) for _ in range(6))
    return GateSchedule(
        rounds=tuple(tuple(sorted(rnd)) for rnd in rounds),
        timing=timing,
        periodic=periodic,
        layer_count=assign.layer_count,
    )


def prep_time(schedule: GateSchedule, t_gate: float, t_shuttle: float) -> float:
    """Total preparation time: sum over rounds of shuttle plus gate time."""
    if t_gate < 0 or t_shuttle < 0:
        raise ValueError("round times must be nonnegative")
    return len(schedule.rounds) * (t_shuttle + t_gate)


def schedule_report(schedule: GateSchedule) -> dict:
    """JSON-compatible schedule document."""
    return {
        "schema_version": 1,
        "periodic": schedule.periodic,
        "layer_count": schedule.layer_count,
        "round_names": list(ROUND_NAMES),
        "rounds": [[list(e) for e in rnd] for rnd in schedule.rounds],
        "timing": [
            {"shuttle_time_s": sh, "gate_time_s": g} for sh, g in schedule.timing
        ],
    }


def schedule_csv_rows(schedule: GateSchedule) -> list[tuple[int, int, float]]:
    """(round, pair_count, duration_s) summary rows; round names live in the JSON report."""
    rows = []
    for k, rnd in enumerate(schedule.rounds):
        sh, g = schedule.timing[k]
        rows.append((k + 1, len(rnd), sh + g))
    return rows
