"""Steiner cycle decision and construction via the Q/R split of a Steiner path."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Instance, s_components
from .greedy import Path, cover_positions, steiner_path_cover

__all__ = [
    "DIRECT",
    "CycleWitness",
    "CycleOutcome",
    "split_qr",
    "find_connector",
    "steiner_cycle",
    "format_cycle",
]

DIRECT = "direct"


@dataclass(frozen=True)
class CycleWitness:
    cutset: frozenset[str]
    s_islands: tuple[frozenset[str], ...]


@dataclass(frozen=True)
class CycleOutcome:
    """Either ``cycle`` or ``witness`` is set.

    ``q``, ``r`` and ``connector`` record how the answer was reached; they are
    empty when the Steiner path cover already needs more than one path.
    """

    cycle: Path | None = None
    witness: CycleWitness | None = None
    q: Path = ()
    r: Path = ()
    connector: str | None = None

    @property
    def feasible(self) -> bool:
        return self.cycle is not None


def _split_positions(inst: Instance, pos: Sequence[int]) -> tuple[list[int], list[int]]:
    ls, rs = inst.ls, inst.rs
    r = [pos[0]]
    q = [pos[1]]
    last_in_q = True
    for k in pos[2:]:
        other = r[-1] if last_in_q else q[-1]
        if ls[k] <= rs[other] and ls[other] <= rs[k]:
            last_in_q = not last_in_q
        (q if last_in_q else r).append(k)
    return q, r


def split_qr(path: Sequence[str], inst: Instance) -> tuple[Path, Path]:
    """Split a Steiner path into ``(Q, R)``.

    ``R`` starts with the first entry and ``Q`` with the second.  Each later
    entry joins the path that did not receive the previous entry when it meets
    that path's end, and otherwise the path that did.
    """
    if len(path) < 2:
        raise ValueError("Q/R split needs a path with at least two intervals")
    ids = [iv.id for iv in inst.intervals]
    q, r = _split_positions(inst, [inst.index[i] for i in path])
    return tuple(ids[k] for k in q), tuple(ids[k] for k in r)


def _connector_position(inst: Instance, eq: int, er: int, after: int, consumed) -> int:
    """First position past ``after`` whose interval meets both path ends."""
    ls = inst.ls
    reach = min(inst.rs[eq], inst.rs[er])
    for k in range(after + 1, len(inst)):
        # r(k) is at least both ends' right endpoints, so meeting both is l(k) <= reach
        if ls[k] <= reach and k not in consumed:
            return k
    return -1


def find_connector(Q: Sequence[str], R: Sequence[str], inst: Instance, consumed: Iterable[str] = ()):
    """``DIRECT`` when the path ends meet, else the first connecting interval or ``None``.

    Candidates are unconsumed intervals that come after every interval of
    ``Q`` and ``R`` in the sorted order.
    """
    eq, er = inst.index[Q[-1]], inst.index[R[-1]]
    if inst.adjacent(eq, er):
        return DIRECT
    taken = {inst.index[i] for i in (*consumed, *Q, *R)}
    last = max(inst.index[i] for i in (*Q, *R))
    k = _connector_position(inst, eq, er, last, taken)
    return None if k < 0 else inst.intervals[k].id


def _witness(inst: Instance, cutset: Iterable[int]) -> CycleWitness:
    ids = inst.ids
    cut = frozenset(ids[k] for k in cutset)
    return CycleWitness(cut, tuple(s_components(inst, cut)))


def _neighbours(inst: Instance, group: Sequence[int]) -> list[int]:
    """Positions outside ``group`` adjacent to some member of it."""
    ls, rs = inst.ls, inst.rs
    lo = min(ls[k] for k in group)
    hi = max(rs[k] for k in group)
    inside = set(group)
    # anything meeting the group has r >= lo
    start = bisect.bisect_left(rs, lo)
    out = []
    for k in range(start, len(inst)):
        if ls[k] > hi or k in inside:
            continue
        if any(inst.adjacent(k, g) for g in group):
            out.append(k)
    return out


def _short_path_cycle(inst: Instance, path: list[int]) -> CycleOutcome:
    """Cycles through at most two terminals that a path of length <= 2 carries.

    The path itself cannot close into a cycle; a cycle exists exactly when the
    terminals lie in a common triangle (interval graphs are chordal).
    """
    ids = inst.ids
    nbrs = _neighbours(inst, path)
    if len(path) == 1:
        (t,) = path
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if inst.adjacent(a, b):
                    return CycleOutcome(cycle=(ids[t], ids[a], ids[b]), r=(ids[t],))
    else:
        u, v = path
        for w in nbrs:
            if inst.adjacent(u, w) and inst.adjacent(v, w):
                return CycleOutcome(
                    cycle=(ids[u], ids[w], ids[v]), q=(ids[v],), r=(ids[u],), connector=ids[w]
                )
    return CycleOutcome(witness=_witness(inst, nbrs), r=(ids[path[0]],), q=tuple(ids[k] for k in path[1:]))


def _names(inst: Instance, positions: Sequence[int]) -> Path:
    ivs = inst.intervals
    return tuple(ivs[k].id for k in positions)


def steiner_cycle(inst: Instance) -> CycleOutcome:
    """Decide whether a Steiner cycle exists; return it or a certificate."""
    cover = steiner_path_cover(inst)
    index = inst.index
    if len(cover.paths) > 1:
        return CycleOutcome(witness=_witness(inst, (index[i] for i in cover.witness.cutset)))
    pos = [index[i] for i in cover.paths[0]]
    if len(pos) <= 2:
        return _short_path_cycle(inst, pos)
    q, r = _split_positions(inst, pos)
    eq, er = q[-1], r[-1]
    qid = _names(inst, q)
    rid = _names(inst, r)
    if inst.adjacent(eq, er):
        return CycleOutcome(cycle=rid + qid[::-1], q=qid, r=rid, connector=DIRECT)
    k = _connector_position(inst, eq, er, max(pos), ())
    if k >= 0:
        conn = inst.intervals[k].id
        return CycleOutcome(cycle=rid + (conn,) + qid[::-1], q=qid, r=rid, connector=conn)
    # the path that stalled ends at position h < l-1; the covers of the prefix
    # ending there plus the entry after it separate the instance
    h = pos.index(eq if er == pos[-1] else er)
    prefix = pos[: h + 1]
    cutset = [prefix[j] for j in cover_positions(inst.rs, prefix)] + [pos[h + 1]]
    return CycleOutcome(witness=_witness(inst, cutset), q=qid, r=rid)


def format_cycle(outcome: CycleOutcome, inst: Instance) -> str:
    if outcome.cycle is not None:
        return "cycle " + " ".join(outcome.cycle) + "\n"
    return "no-cycle\n" + format_cycle_witness(outcome.witness, inst)


def format_cycle_witness(witness: CycleWitness, inst: Instance) -> str:
    order = inst.index.__getitem__
    lines = [" ".join(["witness", "cutset", *sorted(witness.cutset, key=order)])]
    for island in witness.s_islands:
        lines.append(" ".join(["island", *sorted(island, key=order)]))
    return "\n".join(lines) + "\n"
