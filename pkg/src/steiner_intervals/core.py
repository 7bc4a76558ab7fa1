"""Exact interval geometry, instance representation and the text instance format."""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Interval",
    "Instance",
    "InstanceError",
    "parse_rational",
    "format_rational",
    "intersects",
    "contains",
    "kappa",
    "components_after_removal",
    "parse_instance",
    "read_instance",
    "format_instance",
]

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_FRACTION = re.compile(r"^[+-]?\d+/\d+$")


class InstanceError(ValueError):
    """Malformed or inconsistent instance data.

    ``line`` is the 1-based source line when the error comes from parsing.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def parse_rational(text: str) -> Fraction:
    """Parse a decimal literal (``20.5``, ``-3``, ``.25``) or ``p/q`` exactly."""
    text = text.strip()
    if _DECIMAL.match(text):
        return Fraction(text)
    if _FRACTION.match(text):
        return Fraction(text)
    raise ValueError(f"not a decimal literal: {text!r}")


def format_rational(value: Fraction | int) -> str:
    """Inverse of :func:`parse_rational`; terminating decimals print as decimals."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = abs(value.numerator) * 10**digits // value.denominator
    sign = "-" if value < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0")


def _fast(x: Fraction) -> int | Fraction:
    # ints compare much faster than Fractions and mix with them exactly
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class Interval:
    """A closed interval ``[l, r]`` with an identifier."""

    id: str
    l: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "l", Fraction(self.l))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.l > self.r:
            raise InstanceError(f"interval {self.id} has l > r")

    def __str__(self) -> str:
        return f"{self.id}=[{format_rational(self.l)},{format_rational(self.r)}]"


def intersects(a: Interval, b: Interval) -> bool:
    return max(a.l, b.l) <= min(a.r, b.r)


def contains(outer: Interval, inner: Interval) -> bool:
    """True when ``inner`` lies inside ``outer``; an interval never contains itself."""
    return outer.l <= inner.l and inner.r <= outer.r and inner.id != outer.id


@dataclass(frozen=True, eq=False)
class Instance:
    """Right-endpoint sorted intervals plus a terminal set.

    Algorithms work on positions ``0..n-1`` of the sorted list; ``ls``/``rs``
    hold the endpoints with integral values stored as ``int`` for speed.
    """

    intervals: tuple[Interval, ...]
    terminals: frozenset[str]
    ls: list = field(init=False, repr=False)
    rs: list = field(init=False, repr=False)
    index: dict = field(init=False, repr=False)
    is_terminal: list = field(init=False, repr=False)

    def __post_init__(self):
        intervals = tuple(self.intervals)
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        index: dict[str, int] = {}
        for pos, iv in enumerate(intervals):
            if iv.id in index:
                raise InstanceError(f"duplicate interval id {iv.id}")
            index[iv.id] = pos
            if pos and iv.r < intervals[pos - 1].r:
                raise InstanceError(f"intervals not sorted by right endpoint at {iv.id}")
        if not self.terminals:
            raise InstanceError("terminal set is empty")
        unknown = sorted(t for t in self.terminals if t not in index)
        if unknown:
            raise InstanceError(f"unknown terminal id {unknown[0]}")
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "ls", [_fast(iv.l) for iv in intervals])
        object.__setattr__(self, "rs", [_fast(iv.r) for iv in intervals])
        object.__setattr__(self, "is_terminal", [iv.id in self.terminals for iv in intervals])

    @classmethod
    def build(cls, intervals: Iterable[Interval | tuple], terminals: Iterable[str]) -> "Instance":
        """Construct from unsorted data; sorting by ``r`` is stable."""
        items = [iv if isinstance(iv, Interval) else Interval(*iv) for iv in intervals]
        items.sort(key=lambda iv: iv.r)
        return cls(tuple(items), frozenset(terminals))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.intervals == other.intervals and self.terminals == other.terminals

    def __hash__(self) -> int:
        return hash((self.intervals, self.terminals))

    def __getitem__(self, key: str) -> Interval:
        return self.intervals[self.index[key]]

    @property
    def ids(self) -> list[str]:
        return [iv.id for iv in self.intervals]

    def with_terminals(self, terminals: Iterable[str]) -> "Instance":
        return Instance(self.intervals, frozenset(terminals))

    @cached_property
    def suffix_min_l(self) -> list:
        """``suffix_min_l[k]`` is the smallest left endpoint at positions >= k."""
        out = list(self.ls)
        for k in range(len(out) - 2, -1, -1):
            if out[k + 1] < out[k]:
                out[k] = out[k + 1]
        return out

    def adjacent(self, a: int, b: int) -> bool:
        """Intersection test on sorted positions."""
        ls, rs = self.ls, self.rs
        return max(ls[a], ls[b]) <= min(rs[a], rs[b])


def kappa(inst: Instance) -> int:
    """Maximum number of intervals contained in a single interval.

    Dominance counting: intervals are inserted in groups of equal ``r`` into a
    Fenwick tree over left-endpoint ranks, then each member of the group counts
    the inserted intervals with ``l`` at least its own.
    """
    n = len(inst)
    if n < 2:
        return 0
    ls, rs = inst.ls, inst.rs
    keys = sorted(set(ls))
    rank = {v: i + 1 for i, v in enumerate(keys)}
    m = len(keys)
    tree = [0] * (m + 1)
    inserted = 0
    best = 0
    pos = 0
    while pos < n:
        end = pos
        while end < n and rs[end] == rs[pos]:
            end += 1
        for k in range(pos, end):
            i = rank[ls[k]]
            while i <= m:
                tree[i] += 1
                i += i & -i
        inserted += end - pos
        for k in range(pos, end):
            # inserted intervals with l < l(k) are not contained in k
            i = rank[ls[k]] - 1
            below = 0
            while i > 0:
                below += tree[i]
                i -= i & -i
            best = max(best, inserted - below - 1)
        pos = end
    return best


def _components(inst: Instance, alive: Sequence[int]) -> list[list[int]]:
    """Connected components of the interval graph on positions ``alive``."""
    ls, rs = inst.ls, inst.rs
    order = sorted(alive, key=ls.__getitem__)
    comps: list[list[int]] = []
    reach = None
    for k in order:
        if reach is None or ls[k] > reach:
            comps.append([k])
            reach = rs[k]
        else:
            comps[-1].append(k)
            if rs[k] > reach:
                reach = rs[k]
    for comp in comps:
        comp.sort()
    comps.sort(key=lambda c: c[0])
    return comps


def components_after_removal(inst: Instance, removed: Iterable[str]) -> list[frozenset[str]]:
    """Components of ``G(I) - removed``, ordered by their smallest sorted position."""
    gone = set(removed)
    unknown = gone.difference(inst.index)
    if unknown:
        raise InstanceError(f"unknown interval id {sorted(unknown)[0]}")
    alive = [k for k, iv in enumerate(inst.intervals) if iv.id not in gone]
    ids = inst.ids
    return [frozenset(ids[k] for k in comp) for comp in _components(inst, alive)]


def s_components(inst: Instance, removed: Iterable[str]) -> list[frozenset[str]]:
    """The components of ``G(I) - removed`` that contain a terminal."""
    return [c for c in components_after_removal(inst, removed) if c & inst.terminals]


def upper_position(inst: Instance, value) -> int:
    """First sorted position whose right endpoint exceeds ``value``."""
    return bisect.bisect_right(inst.rs, value)


# -- text format ---------------------------------------------------------------


def _records(lines: Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        yield lineno, text.split()


class InstanceReader:
    """Incremental parser: yields intervals as their lines arrive.

    The terminal line comes last in the file, so streaming consumers that need
    ``S`` up front read it with :func:`peek_terminals` first.
    """

    def __init__(self, lines: Iterable[str]):
        self._records = _records(lines)
        self.count: int | None = None
        self.terminals: frozenset[str] | None = None
        self.header_line = 0

    def header(self) -> int:
        try:
            lineno, rec = next(self._records)
        except StopIteration:
            raise InstanceError("empty input", 1) from None
        if rec[0] != "intervals" or len(rec) != 2 or not rec[1].isdigit():
            raise InstanceError("expected 'intervals <n>'", lineno)
        self.count = int(rec[1])
        self.header_line = lineno
        return self.count

    def intervals(self) -> Iterator[Interval]:
        if self.count is None:
            self.header()
        seen: set[str] = set()
        last_r = None
        lineno = self.header_line
        for _ in range(self.count):
            try:
                lineno, rec = next(self._records)
            except StopIteration:
                raise InstanceError(f"expected {self.count} intervals", lineno + 1) from None
            if len(rec) != 3:
                raise InstanceError("expected '<id> <l> <r>'", lineno)
            ident, ltxt, rtxt = rec
            if ident in seen:
                raise InstanceError(f"duplicate interval id {ident}", lineno)
            try:
                l, r = parse_rational(ltxt), parse_rational(rtxt)
            except ValueError as exc:
                raise InstanceError(str(exc), lineno) from None
            if l > r:
                raise InstanceError(f"interval {ident} has l > r", lineno)
            if last_r is not None and r < last_r:
                raise InstanceError(f"interval {ident} breaks right-endpoint order", lineno)
            seen.add(ident)
            last_r = r
            yield Interval(ident, l, r)
        self._seen = seen
        self._last_line = lineno

    def read_terminals(self, known: set[str] | None = None) -> frozenset[str]:
        lineno = getattr(self, "_last_line", self.header_line)
        try:
            lineno, rec = next(self._records)
        except StopIteration:
            raise InstanceError("missing 'terminals' line", lineno + 1) from None
        if rec[0] != "terminals":
            raise InstanceError("expected 'terminals <ids>'", lineno)
        terms = rec[1:]
        if not terms:
            raise InstanceError("terminal set is empty", lineno)
        known = getattr(self, "_seen", None) if known is None else known
        for t in terms:
            if known is not None and t not in known:
                raise InstanceError(f"unknown terminal id {t}", lineno)
        extra = next(self._records, None)
        if extra is not None:
            raise InstanceError("unexpected content after terminals", extra[0])
        self.terminals = frozenset(terms)
        return self.terminals


def parse_instance(text: str | Iterable[str]) -> Instance:
    lines = text.splitlines() if isinstance(text, str) else text
    reader = InstanceReader(lines)
    intervals = tuple(reader.intervals())
    terminals = reader.read_terminals()
    return Instance(intervals, terminals)


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh)


def peek_terminals(path) -> frozenset[str]:
    """Terminal ids of an instance file without keeping the intervals."""
    with open(path, encoding="utf-8") as fh:
        reader = InstanceReader(fh)
        seen = set()
        for iv in reader.intervals():
            seen.add(iv.id)
        return reader.read_terminals(seen)


def format_instance(inst: Instance) -> str:
    out = [f"intervals {len(inst)}"]
    out.extend(f"{iv.id} {format_rational(iv.l)} {format_rational(iv.r)}" for iv in inst)
    terms = [iv.id for iv in inst if iv.id in inst.terminals]
    out.append("terminals " + " ".join(terms))
    return "\n".join(out) + "\n"
