"""Shared fixtures, random corpora and independent reference implementations."""

from __future__ import annotations

import random
from pathlib import Path

from steiner_intervals.core import Instance, Interval, contains, intersects, read_instance
from steiner_intervals.greedy import SteinerCover, decompose

FIXTURES = Path(__file__).parent / "fixtures"


def load(name: str) -> Instance:
    return read_instance(FIXTURES / f"{name}.txt")


def random_instance(rng: random.Random, n_max: int = 12, n_min: int = 1) -> Instance:
    """Small integer instances with many ties, touching ends and point intervals."""
    n = rng.randint(n_min, n_max)
    span = rng.choice([10, 20, 40])
    reach = rng.choice([1, 3, 6, 12])
    intervals = []
    for k in range(n):
        l = rng.randrange(span)
        intervals.append(Interval(f"x{k}", l, l + rng.randint(0, reach)))
    frac = rng.choice([0.1, 0.25, 0.5, 0.75, 1.0])
    terms = [iv.id for iv in intervals if rng.random() < frac] or [rng.choice(intervals).id]
    return Instance.build(intervals, terms)


def corpus(seed: int, count: int, n_max: int = 12) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, n_max) for _ in range(count)]


# -- references -----------------------------------------------------------------


def naive_gp_s(inst: Instance, start: str, used=frozenset(), stop_when_covered=True):
    """Literal GP_S: rescan every unused later interval at each step."""
    ivs = inst.intervals
    pos = inst.index[start]
    path = [pos]
    left = set(inst.terminals) - set(used) - {start}
    neglected: set[int] = set()
    while True:
        end = ivs[path[-1]]
        cands = [
            k
            for k in range(pos, len(ivs))
            if k not in path and k not in neglected and ivs[k].id not in used and intersects(end, ivs[k])
        ]
        if not cands:
            break
        c = min(cands)
        if ivs[c].id not in inst.terminals and ivs[c].r < end.r:
            neglected.add(c)
            continue
        if stop_when_covered and not left:
            break
        path.append(c)
        left.discard(ivs[c].id)
    return tuple(ivs[k].id for k in path), frozenset(ivs[k].id for k in neglected)


def naive_cover(inst: Instance) -> list[tuple[str, ...]]:
    paths = []
    used: set[str] = set()
    while not inst.terminals <= used:
        start = next(iv.id for iv in inst if iv.id in inst.terminals and iv.id not in used)
        path, _ = naive_gp_s(inst, start, frozenset(used))
        paths.append(path)
        used.update(path)
    return paths


def brute_kappa(inst: Instance) -> int:
    ivs = inst.intervals
    return max((sum(contains(a, b) for b in ivs) for a in ivs), default=0)


def brute_components(inst: Instance, removed) -> list[set[str]]:
    alive = [iv for iv in inst if iv.id not in removed]
    parent = {iv.id: iv.id for iv in alive}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(alive):
        for b in alive[i + 1:]:
            if intersects(a, b):
                parent[find(a.id)] = find(b.id)
    groups: dict[str, set[str]] = {}
    for iv in alive:
        groups.setdefault(find(iv.id), set()).add(iv.id)
    return list(groups.values())


# -- structural checks ------------------------------------------------------------


def structure_violations(inst: Instance, cover: SteinerCover) -> list[str]:
    """Cover drop, empty island exceed-sets and the S-island property per run.

    Each run is checked on the intervals it could scan: positions from its
    start onwards minus those taken by earlier paths.
    """
    out = []
    taken: set[str] = set()
    rs = {iv.id: iv.r for iv in inst}
    for trace in cover.traces:
        full = trace.full
        dec = decompose(full, inst)
        if dec.interleave() != full:
            out.append(f"interleave {full}")
        where = {i: j for j, i in enumerate(full)}
        for c in dec.covers:
            j = where[c]
            if j + 1 >= len(full) or not rs[c] > rs[full[j + 1]]:
                out.append(f"cover drop {c} in {full}")
        for island in dec.islands:
            if any(rs[i] > rs[island[-1]] for i in island):
                out.append(f"island exceed {island}")
            if not inst.terminals & set(island):
                out.append(f"island without terminal {island}")
        start = inst.index[full[0]]
        scope = {iv.id for iv in inst.intervals[start:]} - taken
        residual = Instance.build([iv for iv in inst if iv.id in scope], [full[0]])
        comps = brute_components(residual, set(dec.covers))
        seen = set()
        for island in dec.islands:
            homes = {id(c) for c in comps if c & set(island)}
            if len(homes) != 1 or homes & seen:
                out.append(f"islands not separated {island} in {full}")
            home = next(c for c in comps if island[0] in c)
            if home & set(full) - set(island):
                out.append(f"island component meets other path entries {island}")
            seen |= homes
        taken.update(trace.path)
    return out
