"""Exponential ground truth for small instances and witness verifiers.

Nothing here touches the greedy code: adjacency comes straight from
:func:`intersects` and all answers come from subset dynamic programming.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Instance, intersects, s_components

__all__ = [
    "OracleLimits",
    "OracleLimitError",
    "brute_pi_s",
    "brute_cycle_exists",
    "verify_cover_witness",
    "verify_cycle_witness",
    "verify_cover",
    "verify_cycle",
]


class OracleLimitError(RuntimeError):
    """The instance is larger than the oracle accepts or the budget ran out."""


@dataclass(frozen=True)
class OracleLimits:
    max_n: int = 15
    max_states: int = 50_000_000


DEFAULT_LIMITS = OracleLimits()


def _adjacency(inst: Instance) -> list[int]:
    ivs = inst.intervals
    n = len(ivs)
    adj = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if intersects(ivs[a], ivs[b]):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return adj


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _check_size(inst: Instance, limits: OracleLimits):
    if len(inst) > limits.max_n:
        raise OracleLimitError(f"instance has {len(inst)} intervals, oracle limit is {limits.max_n}")


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, amount: int = 1):
        self.left -= amount
        if self.left < 0:
            raise OracleLimitError("oracle state budget exhausted")


def _path_sets(adj: list[int], budget: _Budget) -> bytearray:
    """``ok[mask]`` is 1 when the vertices of ``mask`` can be ordered as a simple path."""
    n = len(adj)
    size = 1 << n
    ends = [0] * size
    ok = bytearray(size)
    for v in range(n):
        ends[1 << v] = 1 << v
    for mask in range(1, size):
        e = ends[mask]
        if not e:
            continue
        ok[mask] = 1
        for v in _bits(e):
            grow = adj[v] & ~mask
            budget.spend()
            for w in _bits(grow):
                ends[mask | (1 << w)] |= 1 << w
    return ok


def brute_pi_s(inst: Instance, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Exact Steiner path cover number by subset DP.

    ``best[U]`` is the fewest vertex-disjoint paths whose union is exactly
    ``U``; the path holding the lowest vertex of ``U`` is enumerated as a
    submask, so every partition is seen once.
    """
    _check_size(inst, limits)
    n = len(inst)
    budget = _Budget(limits.max_states)
    ok = _path_sets(_adjacency(inst), budget)
    smask = sum(1 << k for k in range(n) if inst.is_terminal[k])
    inf = n + 1
    size = 1 << n
    best = [inf] * size
    best[0] = 0
    answer = inf
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        value = inf
        while True:
            part = sub | low
            if ok[part]:
                cand = best[mask ^ part] + 1
                if cand < value:
                    value = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
        budget.spend()
        best[mask] = value
        if mask & smask == smask and value < answer:
            answer = value
    return answer


def brute_cycle_exists(inst: Instance, limits: OracleLimits = DEFAULT_LIMITS) -> bool:
    """Whether a simple cycle of length >= 3 contains every terminal.

    Paths are grown from a fixed anchor (the lowest-position terminal); a path
    closes into a cycle when its far end is adjacent to the anchor.
    """
    _check_size(inst, limits)
    n = len(inst)
    adj = _adjacency(inst)
    anchor = min(k for k in range(n) if inst.is_terminal[k])
    smask = sum(1 << k for k in range(n) if inst.is_terminal[k])
    budget = _Budget(limits.max_states)
    # masks only grow, so processing in increasing numeric order is safe
    size = 1 << n
    table = [0] * size
    table[1 << anchor] = 1 << anchor
    for mask in range(1 << anchor, size):
        e = table[mask]
        if not e:
            continue
        if mask & smask == smask and bin(mask).count("1") >= 3 and e & adj[anchor]:
            return True
        for v in _bits(e):
            budget.spend()
            for w in _bits(adj[v] & ~mask):
                table[mask | (1 << w)] |= 1 << w
    return False


# -- witness verification ---------------------------------------------------------


def verify_cover_witness(inst: Instance, claimed_k: int, witness) -> bool:
    """Recount S-components of ``G - cutset``; they bound the cover number from below."""
    cutset = set(witness.cutset)
    if not cutset <= inst.index.keys():
        return False
    g = len(s_components(inst, cutset))
    return g == witness.s_island_count and g - len(cutset) >= claimed_k


def _in_triangle(inst: Instance, group: Sequence[int]) -> bool:
    """Whether some triangle of the interval graph contains all of ``group``."""
    n = len(inst)
    if len(group) == 1:
        (t,) = group
        nbrs = [k for k in range(n) if k != t and inst.adjacent(t, k)]
        return any(inst.adjacent(a, b) for i, a in enumerate(nbrs) for b in nbrs[i + 1:])
    u, v = group
    if not inst.adjacent(u, v):
        return False
    return any(k != u and k != v and inst.adjacent(u, k) and inst.adjacent(v, k) for k in range(n))


def verify_cycle_witness(inst: Instance, witness) -> bool:
    """Independent check of a no-Steiner-cycle certificate.

    With two or more S-islands the islands must outnumber the cutset.  A single
    island is accepted only in the degenerate case where the at most two
    terminals lie in no common triangle; interval graphs are chordal, so such
    terminals lie on no common cycle.
    """
    cutset = set(witness.cutset)
    if not cutset <= inst.index.keys():
        return False
    islands = s_components(inst, cutset)
    if set(islands) != {frozenset(i) for i in witness.s_islands} or len(islands) != len(witness.s_islands):
        return False
    if len(islands) >= 2:
        return len(islands) > len(cutset)
    terms = inst.terminals
    if len(islands) != 1 or len(terms) > 2 or not terms <= islands[0]:
        return False
    return not _in_triangle(inst, sorted(inst.index[t] for t in terms))


def verify_cover(inst: Instance, paths: Iterable[Sequence[str]]) -> bool:
    """Paths are simple, vertex-disjoint, use real edges and cover every terminal."""
    seen: set[str] = set()
    for path in paths:
        if not path:
            return False
        for a, b in zip(path, path[1:]):
            if a not in inst.index or b not in inst.index or not intersects(inst[a], inst[b]):
                return False
        if path[0] not in inst.index or seen.intersection(path) or len(set(path)) != len(path):
            return False
        seen.update(path)
    return inst.terminals <= seen


def verify_cycle(inst: Instance, cycle: Sequence[str]) -> bool:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    if any(c not in inst.index for c in cycle):
        return False
    closed = list(cycle) + [cycle[0]]
    if not all(intersects(inst[a], inst[b]) for a, b in zip(closed, closed[1:])):
        return False
    return inst.terminals <= set(cycle)
