"""Single-pass GP_S and Q/R cycle construction over a right-endpoint sorted stream.

The engine is push driven: feed intervals one at a time with
:meth:`StreamState.push` and collect the answer with :meth:`StreamState.finish`.
Only intervals that may still join a path are buffered.  While a run waits
for a bridge to its end, every waiting interval lies inside whatever interval
eventually bridges, so on connected inputs the buffer stays within κ(I).

With ``known_kappa`` the engine closes a run as soon as more than κ intervals
wait: no later interval can meet the run's end then.  The intervals the run
did not consume are replayed, in stream order, to the next run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .core import Instance, Interval, _fast, kappa
from .cycle import DIRECT, CycleOutcome, CycleWitness, _connector_position, _short_path_cycle, _split_positions
from .greedy import CoverWitness, Path, SteinerCover, cover_positions, steiner_path_cover

__all__ = [
    "StreamOrderError",
    "Event",
    "StreamState",
    "PlayTrace",
    "stream_push",
    "stream_finish",
    "run_stream",
    "measure_memory",
    "play_level",
]

COVER = "cover"
CYCLE = "cycle"


class StreamOrderError(ValueError):
    """An interval arrived with a smaller right endpoint than its predecessor."""


class Event(NamedTuple):
    """A placement decided by the engine.

    ``kind`` is ``path`` (cover mode, ``run`` is the 1-based path number),
    ``Q``, ``R`` or ``connector`` (cycle mode; ``id`` may be ``direct``).
    """

    kind: str
    id: str
    run: int = 0

    def __str__(self) -> str:
        if self.kind == "path":
            return f"path {self.run} {self.id}"
        return f"{self.kind} {self.id}"


class _Item(NamedTuple):
    pos: int
    l: object
    r: object
    id: str
    term: bool


class _TriangleProbe:
    """O(1) summary deciding whether the (at most two) terminals lie in a triangle.

    Three intervals pairwise meet iff they share a point, and a shared point
    can be taken at the right endpoint of the member that arrives first.  Before
    the first terminal it suffices to keep the latest interval and the best
    intersecting pair; after it, the first few intervals reaching back.
    """

    def __init__(self, terminals: frozenset[str]):
        self.terminals = terminals
        self.need = 3 - len(terminals)
        self.first: _Item | None = None
        self.terms: list[_Item] = []
        self.last: _Item | None = None
        self.pair: tuple[_Item, _Item] | None = None
        self.after: list[_Item] = []
        self.bridge: _Item | None = None

    def feed(self, x: _Item):
        if x.term:
            self.terms.append(x)
            if self.first is None:
                self.first = x
            return
        first = self.first
        if first is None:
            last = self.last
            if last is not None and x.l <= last.r and (self.pair is None or last.r > self.pair[0].r):
                self.pair = (last, x)
            self.last = x
            return
        if x.l <= first.r and len(self.after) < 2:
            self.after.append(x)
        if self.bridge is None and self.last is not None and x.l <= self.last.r:
            self.bridge = x

    def triangle(self) -> tuple[str, ...] | None:
        first, last = self.first, self.last
        if first is None or len(self.terms) != len(self.terminals):
            return None
        if self.need == 2:
            t = first
            if len(self.after) == 2:
                return (t.id, self.after[0].id, self.after[1].id)
            if self.pair is not None and t.l <= self.pair[0].r:
                return (t.id, self.pair[0].id, self.pair[1].id)
            if last is not None and self.bridge is not None and t.l <= last.r:
                return (t.id, last.id, self.bridge.id)
            return None
        u, v = self.terms
        if v.l <= u.r and self.after:
            return (u.id, self.after[0].id, v.id)
        if last is not None and max(u.l, v.l) <= last.r:
            return (u.id, last.id, v.id)
        return None


@dataclass
class StreamState:
    """Single-owner streaming engine; see the module docstring.

    ``events`` is the output log.  ``peak_buffer`` is the largest number of
    intervals held at once (waiting, kept for later runs or queued for
    replay), not counting the interval being processed.  ``finalized_at``
    records the read count at which each run closed.
    """

    terminals: frozenset[str]
    mode: str = COVER
    known_kappa: int | None = None
    events: list[Event] = field(default_factory=list)
    peak_buffer: int = 0
    reads: int = 0
    finalized_at: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in (COVER, CYCLE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.terminals:
            raise ValueError("terminal set is empty")
        self.terminals = frozenset(self.terminals)
        self._remaining = len(self.terminals)
        self._queue: deque[_Item] = deque()
        self._stored: list[_Item] = []
        self._anchor: int | None = None
        self._pending: list[_Item] = []
        self._last_r = None
        self._phase = "seek"
        self._runs: list[list[_Item]] = []
        self._cut: list[int] = []
        self._path: list[_Item] = []
        self._covered_at = 0
        self._run_mode = self.mode
        self._q: list[int] = []
        self._r: list[int] = []
        self._reach = None
        self._after = -1
        self._connector: str | None = None
        self._probe = _TriangleProbe(self.terminals) if self.mode == CYCLE and len(self.terminals) <= 2 else None
        self._result = None

    # -- buffer accounting -------------------------------------------------

    @property
    def buffer(self) -> list[Interval]:
        held = sorted((*self._pending, *self._stored, *self._queue), key=lambda x: x.pos)
        return [Interval(x.id, x.l, x.r) for x in held]

    def _touch(self):
        size = len(self._pending) + len(self._stored) + len(self._queue)
        if size > self.peak_buffer:
            self.peak_buffer = size

    def _keep(self, x: _Item):
        """Hold an unconsumed interval for later runs when one could still use it.

        Later runs scan forward from the first uncovered terminal, so nothing
        before the first stored terminal matters; terminals are always kept.
        """
        if x.term:
            if self._anchor is None or x.pos < self._anchor:
                self._anchor = x.pos
        elif self._anchor is None or x.pos < self._anchor:
            return
        self._stored.append(x)
        self._touch()

    # -- input ----------------------------------------------------------------

    def push(self, interval: Interval, known_kappa: int | None = None) -> list[Event]:
        if known_kappa is not None:
            self.known_kappa = known_kappa
        r = interval.r
        if self._last_r is not None and r < self._last_r:
            raise StreamOrderError(f"interval {interval.id} arrived out of right-endpoint order")
        self._last_r = r
        x = _Item(self.reads, _fast(interval.l), _fast(r), interval.id, interval.id in self.terminals)
        self.reads += 1
        if self._probe is not None:
            self._probe.feed(x)
        start = len(self.events)
        self._queue.append(x)
        self._drain()
        return self.events[start:]

    def _drain(self):
        queue = self._queue
        while queue and self._phase != "done":
            x = queue.popleft()
            phase = self._phase
            if phase == "run":
                self._offer(x)
            elif phase == "seek":
                if x.term:
                    self._start(x)
            elif phase == "connect":
                if x.pos > self._after and x.l <= self._reach:
                    self._connect(x.id)
        if self._phase == "done":
            queue.clear()

    # -- runs -----------------------------------------------------------------

    def _start(self, x: _Item):
        self._phase = "run"
        self._path = [x]
        self._pending = []
        self._covered_at = 0
        self._place(x)

    def _offer(self, x: _Item):
        end = self._path[-1]
        if x.l <= end.r:
            self._candidate(x)
            return
        waiting = self._pending
        if self.known_kappa is not None and len(waiting) + 1 > self.known_kappa:
            # more than κ intervals beyond the end: no later interval meets it
            self._queue.appendleft(x)
            self._close()
            return
        waiting.append(x)
        self._touch()

    def _candidate(self, c: _Item):
        while c is not None:
            end = self._path[-1]
            if not c.term and c.r < end.r:
                self._keep(c)
            else:
                self._path.append(c)
                self._place(c)
                if self._phase != "run":
                    return
            c = self._from_pending()

    def _from_pending(self) -> _Item | None:
        end = self._path[-1]
        pending = self._pending
        i = 0
        while i < len(pending) and pending[i].r < end.l:
            i += 1
        if i:
            dead = pending[:i]
            del pending[:i]
            for x in dead:
                self._keep(x)
        for j, x in enumerate(pending):
            if x.l <= end.r:
                del pending[j]
                return x
        return None

    def _place(self, x: _Item):
        """Record ``x`` as the newest path entry and emit its event."""
        path = self._path
        covering = self._remaining > 0
        if x.term:
            self._remaining -= 1
        if self._run_mode == COVER:
            if covering:
                self.events.append(Event("path", x.id, len(self._runs) + 1))
                if self._remaining == 0:
                    self._covered_at = len(path)
            return
        k = len(path) - 1
        if k == 0:
            self._r.append(k)
            self.events.append(Event("R", x.id))
        elif k == 1:
            self._q.append(k)
            self.events.append(Event("Q", x.id))
        else:
            last_in_q = self._q[-1] == k - 1
            other = self._r if last_in_q else self._q
            if self._meets(path[other[-1]], x):
                other.append(k)
                self.events.append(Event("R" if last_in_q else "Q", x.id))
            else:
                (self._q if last_in_q else self._r).append(k)
                self.events.append(Event("Q" if last_in_q else "R", x.id))
        if self._remaining == 0:
            self._covered_at = len(path)
            self._begin_connect()

    @staticmethod
    def _meets(a: _Item, b: _Item) -> bool:
        return max(a.l, b.l) <= min(a.r, b.r)

    def _close(self):
        """The current run is stuck: record it and start the next one if needed."""
        self.finalized_at.append(self.reads)
        path = self._path
        self._runs.append(path)
        self._cut.append(self._covered_at or len(path))
        if self._run_mode == CYCLE:
            # the first path misses a terminal: no cycle, finish as a cover
            self._run_mode = COVER
            self.events.extend(Event("path", x.id, 1) for x in path)
        held = sorted((*self._stored, *self._pending), key=lambda x: x.pos)
        self._pending = []
        self._stored = []
        self._anchor = None
        self._path = []
        if self._remaining == 0:
            self._phase = "done"
            self._result = self._cover_result()
            return
        self._phase = "seek"
        first = next((k for k, x in enumerate(held) if x.term), None)
        if first is None:
            return
        replay = held[first + 1:]
        self._queue.extendleft(reversed(replay))
        self._touch()
        self._start(held[first])

    # -- cycle mode -----------------------------------------------------------

    def _begin_connect(self):
        path = self._path
        self._runs.append(path)
        self._cut.append(len(path))
        self.finalized_at.append(self.reads)
        if len(path) <= 2:
            # a short path cannot close; the probe decides at the end
            self._phase = "probe"
            self._pending = []
            return
        eq, er = path[self._q[-1]], path[self._r[-1]]
        if self._meets(eq, er):
            self._connect(DIRECT)
            return
        self._reach = min(eq.r, er.r)
        self._after = max(x.pos for x in path)
        self._phase = "connect"
        waiting, self._pending = self._pending, []
        for x in waiting:
            if x.pos > self._after and x.l <= self._reach:
                self._connect(x.id)
                return

    def _connect(self, ident: str):
        self._connector = ident
        self.events.append(Event("connector", ident))
        self._phase = "done"

    # -- results --------------------------------------------------------------

    def finish(self):
        """Flush the stream and return a :class:`SteinerCover` or :class:`CycleOutcome`."""
        while self._phase == "run":
            self._close()
            self._drain()
        if self._phase == "seek" and self._remaining > 0:
            raise ValueError("stream ended before every terminal appeared")
        if self.mode == COVER or self._run_mode == COVER:
            if self._result is None:
                self._result = self._cover_result()
            if self.mode == CYCLE:
                cover = self._result
                return CycleOutcome(witness=CycleWitness(cover.witness.cutset, ()))
            return self._result
        return self._cycle_result()

    def _cover_result(self) -> SteinerCover:
        paths = []
        cutset: set[str] = set()
        for run, cut in zip(self._runs, self._cut):
            paths.append(tuple(x.id for x in run[:cut]))
            rs = [x.r for x in run]
            cutset.update(run[j].id for j in cover_positions(rs, range(len(run))))
        return SteinerCover(tuple(paths), CoverWitness(frozenset(cutset), len(paths) + len(cutset)))

    def _cycle_result(self) -> CycleOutcome:
        path = self._runs[0]
        ids = [x.id for x in path]
        q = tuple(ids[k] for k in self._q)
        r = tuple(ids[k] for k in self._r)
        if self._phase == "probe":
            tri = self._probe.triangle()
            if tri is None:
                return CycleOutcome(r=r, q=q)
            connector = tri[1] if len(path) == 2 else None
            return CycleOutcome(cycle=tri, q=q, r=r, connector=connector)
        if self._connector == DIRECT:
            return CycleOutcome(cycle=r + q[::-1], q=q, r=r, connector=DIRECT)
        if self._connector is not None:
            return CycleOutcome(cycle=r + (self._connector,) + q[::-1], q=q, r=r, connector=self._connector)
        # the stalled end is whichever of end(Q), end(R) is not the path's end
        last = len(path) - 1
        h = self._q[-1] if self._r[-1] == last else self._r[-1]
        prefix = path[: h + 1]
        covers = cover_positions([x.r for x in prefix], range(len(prefix)))
        cutset = frozenset([prefix[j].id for j in covers] + [path[h + 1].id])
        return CycleOutcome(witness=CycleWitness(cutset, ()), q=q, r=r)


def stream_push(state: StreamState, interval: Interval, known_kappa: int | None = None) -> list[Event]:
    return state.push(interval, known_kappa)


def stream_finish(state: StreamState):
    return state.finish()


def run_stream(
    intervals: Iterable[Interval], terminals: Iterable[str], mode: str = COVER, known_kappa: int | None = None
) -> tuple[StreamState, object]:
    state = StreamState(frozenset(terminals), mode, known_kappa)
    for iv in intervals:
        state.push(iv)
    return state, state.finish()


def measure_memory(inst: Instance, mode: str = COVER) -> int:
    """Peak buffer of a streaming run told the instance's κ up front."""
    state, _ = run_stream(inst.intervals, inst.terminals, mode, kappa(inst))
    return state.peak_buffer


# -- player ----------------------------------------------------------------------


@dataclass(frozen=True)
class PlayTrace:
    """A simulated run through a level.

    ``forward_moves`` are ``("jump", id)`` for platforms landed on and
    ``("remember", id)`` for platforms noted for the way back.  ``return_moves``
    lists the platforms of the way back, ending at the start platform.
    """

    forward_moves: tuple[tuple[str, str], ...]
    return_moves: Path
    solvable: bool

    @property
    def outcome(self) -> str:
        return "solvable" if self.solvable else "unsolvable"

    def walk(self) -> Path:
        """The closed walk as a cycle (start platform listed once)."""
        if not self.solvable:
            return ()
        start = self.return_moves[-1]
        jumps = tuple(i for kind, i in self.forward_moves if kind == "jump")
        return (start, *jumps, *self.return_moves[:-1])


def _return_pass(inst: Instance, begin: int, start: int, visited: set[int]) -> list[int] | None:
    """Greedy way back from ``begin`` to ``start`` collecting the remaining terminals.

    Mirror image of GP_S: jump to the reachable platform with the largest left
    endpoint, skipping non-terminals that start right of the current platform.
    """
    ls = inst.ls
    term = inst.is_terminal
    n = len(inst)
    seen = set(visited) | {begin}
    left = sum(1 for k in range(n) if term[k] and k not in seen)
    cur = begin
    moves = [begin]
    while True:
        if left == 0 and inst.adjacent(cur, start):
            moves.append(start)
            return moves
        best = -1
        for k in range(n):
            if k in seen or k == start or not inst.adjacent(cur, k):
                continue
            if best < 0 or ls[k] > ls[best] or (ls[k] == ls[best] and k > best):
                best = k
        if best < 0:
            return None
        seen.add(best)
        if not term[best] and ls[best] > ls[cur]:
            continue
        moves.append(best)
        cur = best
        if term[best]:
            left -= 1


def play_level(inst: Instance) -> PlayTrace:
    """Simulate the forward-and-back player strategy on a level.

    The first terminal in sorted order is the start and exit.  The forward pass
    is GP_S from it with the Q/R split: platforms of ``R`` are landed on, those
    of ``Q`` remembered.  After the connection the way back is a mirrored GP_S
    run.  A closed walk needs at least three platforms.
    """
    ids = inst.ids
    cover = steiner_path_cover(inst)
    if len(cover.paths) > 1:
        return PlayTrace((), (), False)
    path = [inst.index[i] for i in cover.paths[0]]
    if len(path) <= 2:
        # a short forward path: only a triangle through it closes the walk
        cyc = _short_path_cycle(inst, path).cycle
        if cyc is None:
            return PlayTrace(tuple(("jump", ids[k]) for k in path[1:]), (), False)
        return PlayTrace((("jump", cyc[1]),), (cyc[2], cyc[0]), True)
    q, r = _split_positions(inst, path)
    in_r = set(r)
    forward = tuple(("jump" if k in in_r else "remember", ids[k]) for k in path[1:])
    eq, er = q[-1], r[-1]
    if inst.adjacent(eq, er):
        begin = eq
    else:
        begin = _connector_position(inst, eq, er, max(path), ())
        if begin < 0:
            return PlayTrace(forward, (), False)
    back = _return_pass(inst, begin, path[0], in_r)
    if back is None:
        return PlayTrace(forward, (), False)
    return PlayTrace(forward, tuple(ids[k] for k in back), True)
