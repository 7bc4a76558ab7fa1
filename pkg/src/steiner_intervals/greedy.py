"""Greedy path builders, cover/island decomposition and the Steiner path cover."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Instance, InstanceError

__all__ = [
    "Path",
    "GreedyTrace",
    "Decomposition",
    "CoverWitness",
    "SteinerCover",
    "gp",
    "gp_s",
    "decompose",
    "steiner_path_cover",
    "format_cover",
]

Path = tuple[str, ...]


@dataclass(frozen=True)
class GreedyTrace:
    """A GP_S run.

    ``tail`` holds the entries the run would append after the last terminal
    until it is stuck; only ``path + tail`` splits the instance into islands.
    """

    path: Path
    neglected: dict[str, frozenset[str]] = field(default_factory=dict)
    tail: Path = ()

    @property
    def full(self) -> Path:
        return self.path + self.tail

    @property
    def all_neglected(self) -> frozenset[str]:
        out: set[str] = set()
        for group in self.neglected.values():
            out |= group
        return frozenset(out)


@dataclass(frozen=True)
class Decomposition:
    """``path == islands[0] + (covers[0],) + islands[1] + ...``"""

    covers: Path
    islands: tuple[Path, ...]
    exceed_set: frozenset[str]

    def interleave(self) -> Path:
        out = list(self.islands[0])
        for cover, island in zip(self.covers, self.islands[1:]):
            out.append(cover)
            out.extend(island)
        return tuple(out)


@dataclass(frozen=True)
class CoverWitness:
    cutset: frozenset[str]
    s_island_count: int


@dataclass(frozen=True)
class SteinerCover:
    paths: tuple[Path, ...]
    witness: CoverWitness
    traces: tuple[GreedyTrace, ...] = ()

    def __len__(self) -> int:
        return len(self.paths)


def _greedy_run(inst: Instance, start: int, used, remaining: int, terminal=None, complete=False):
    """One GP_S run over positions ``>= start`` that are not ``used``.

    Candidates are produced in increasing position order (= increasing ``r``).
    Intervals read while the path cannot reach them wait in ``pending``; once a
    pending interval lies wholly left of the current end it is dropped, since a
    later end of the same run never meets it.  The run stops when it is stuck
    or, once ``remaining`` uncovered terminals have all been placed, at the
    first candidate that is not neglectable (neglectable ones are still
    recorded).

    With ``complete`` the run goes on appending past full coverage until it is
    stuck; the cover/island structure of a path only separates the instance
    for such finished runs.

    Returns ``(path, neglected, remaining, cut)`` with positions, where
    ``path[:cut]`` is the Steiner path proper and ``neglected`` maps the end
    position at neglect time to the neglected positions.
    """
    ls, rs = inst.ls, inst.rs
    term = inst.is_terminal if terminal is None else terminal
    sufmin = inst.suffix_min_l
    n = len(ls)
    path = [start]
    neglected: dict[int, list[int]] = {}
    if term[start]:
        remaining -= 1
    le = ls[start]
    re_ = rs[start]
    e = start
    pending: list[int] = []
    nxt = start + 1
    cut = 0
    while True:
        c = -1
        if pending:
            i = 0
            m = len(pending)
            while i < m and rs[pending[i]] < le:
                i += 1
            if i:
                del pending[:i]
            for j, k in enumerate(pending):
                if ls[k] <= re_:
                    c = k
                    del pending[j]
                    break
        if c < 0:
            while nxt < n:
                if sufmin[nxt] > re_:
                    break
                k = nxt
                nxt += 1
                if used[k]:
                    continue
                if ls[k] <= re_:
                    c = k
                    break
                pending.append(k)
            if c < 0:
                break
        if not term[c] and rs[c] < re_:
            neglected.setdefault(e, []).append(c)
            continue
        if remaining == 0:
            if not cut:
                cut = len(path)
            if not complete:
                break
        path.append(c)
        if term[c]:
            remaining -= 1
        e = c
        le = ls[c]
        re_ = rs[c]
    return path, neglected, remaining, cut or len(path)


def _trace(inst: Instance, path: list[int], neglected: dict[int, list[int]], tail=()) -> GreedyTrace:
    ids = inst.ids if len(path) * 8 > len(inst) else None
    name = ids.__getitem__ if ids is not None else (lambda k: inst.intervals[k].id)
    return GreedyTrace(
        tuple(name(k) for k in path),
        {name(e): frozenset(name(k) for k in group) for e, group in neglected.items()},
        tuple(name(k) for k in tail),
    )


def gp(inst: Instance) -> Path:
    """Plain greedy path from the interval with the smallest right endpoint."""
    n = len(inst)
    path = _greedy_run(inst, 0, bytes(n), n, terminal=[True] * n)[0]
    return _trace(inst, path, {}).path


def gp_s(inst: Instance, start: str) -> GreedyTrace:
    """Greedy Steiner path from ``start``, skipping neglectable intervals.

    Only positions at or after ``start`` are scanned.  Once every terminal of
    the instance lies on the path the run only records further neglectable
    candidates and stops at the first one it would have to append.
    """
    if start not in inst.index:
        raise InstanceError(f"unknown interval id {start}")
    pos = inst.index[start]
    path, neglected, _, _ = _greedy_run(inst, pos, bytes(len(inst)), len(inst.terminals))
    return _trace(inst, path, neglected)


def cover_positions(rs: Sequence, path: Sequence[int]) -> list[int]:
    """Indices into ``path`` of its covers, in path order.

    Walks back from the end: the last entry exceeding the current end's right
    endpoint is a cover, and the walk restarts on the prefix before it.
    """
    covers = []
    m = len(path) - 1
    while m > 0:
        bound = rs[path[m]]
        j = m - 1
        while j >= 0 and rs[path[j]] <= bound:
            j -= 1
        if j < 0:
            break
        covers.append(j)
        m = j - 1
    covers.reverse()
    return covers


def decompose(path: Sequence[str], inst: Instance, neglected: Iterable[str] = ()) -> Decomposition:
    """Decomposition of a greedy path into covers and islands."""
    if not path:
        raise ValueError("empty path")
    clash = set(neglected).intersection(path)
    if clash:
        raise ValueError(f"neglected interval {sorted(clash)[0]} lies on the path")
    rs = inst.rs
    pos = [inst.index[i] for i in path]
    end_r = rs[pos[-1]]
    exceed = frozenset(i for i, k in zip(path, pos) if rs[k] > end_r)
    cuts = cover_positions(rs, pos)
    islands = []
    prev = 0
    for j in cuts:
        islands.append(tuple(path[prev:j]))
        prev = j + 1
    islands.append(tuple(path[prev:]))
    return Decomposition(tuple(path[j] for j in cuts), tuple(islands), exceed)


def steiner_path_cover(inst: Instance) -> SteinerCover:
    """Minimum Steiner path cover by iterated greedy runs.

    Each run starts at the uncovered terminal with the smallest right endpoint.
    The witness cutset is the union of the covers of all paths; the paths plus
    the cutset account for ``len(paths) + len(cutset)`` S-islands.  The last
    path stops once every terminal is on it, so its covers are taken from the
    same run carried on until it is stuck.
    """
    n = len(inst)
    rs = inst.rs
    used = bytearray(n)
    starts = [k for k in range(n) if inst.is_terminal[k]]
    remaining = len(starts)
    paths: list[list[int]] = []
    traces = []
    cutset: list[int] = []
    s = 0
    while remaining > 0:
        while used[starts[s]]:
            s += 1
        full, neglected, remaining, cut = _greedy_run(inst, starts[s], used, remaining, complete=True)
        path = full[:cut]
        for k in path:
            used[k] = 1
        paths.append(path)
        neglected = {e: group for e, group in neglected.items() if used[e]}
        traces.append(_trace(inst, path, neglected, full[cut:]))
        cutset.extend(full[j] for j in cover_positions(rs, full))
    ids = inst.ids
    witness = CoverWitness(frozenset(ids[k] for k in cutset), len(paths) + len(cutset))
    return SteinerCover(tuple(t.path for t in traces), witness, tuple(traces))


def format_cover(cover: SteinerCover, inst: Instance | None = None) -> str:
    """Cover text format; cutset ids follow sorted order when ``inst`` is given."""
    key = inst.index.__getitem__ if inst is not None else _natural
    lines = [" ".join(p) for p in cover.paths]
    lines.append(" ".join(["witness", "cutset", *sorted(cover.witness.cutset, key=key)]))
    lines.append(f"witness s_islands {cover.witness.s_island_count}")
    return "\n".join(lines) + "\n"


def _natural(ident: str):
    # i2 < i10; plain string order otherwise
    head = ident.rstrip("0123456789")
    tail = ident[len(head):]
    return (head, int(tail) if tail else -1, ident)
