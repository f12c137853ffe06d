"""Bi-infinite pseudo-orbits with finitely many jumps.

A pseudo-orbit is stored as consecutive blocks (seed point, length)
anchored at a base index.  Within a block the entries are the true orbit
of the seed; entry n for n below the first block follows the backward
orbit of the first seed, and beyond the last block the forward orbit of
the last seed.  All defect ("jump") positions therefore lie at block
boundaries, and there are finitely many of them.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class Window:
    """An inclusive range of time indices."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    def indices(self):
        return range(self.lo, self.hi + 1)

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi


class PseudoOrbit:
    """A two-sided sequence of points with finitely many orbit defects."""

    def __init__(self, system, blocks, base_index: int = 0):
        blocks = tuple((p, int(length)) for p, length in blocks)
        if not blocks:
            raise ValueError("need at least one block")
        if any(length <= 0 for _, length in blocks):
            raise ValueError("block lengths must be positive")
        self.system = system
        self.blocks = blocks
        self.base_index = base_index

    @cached_property
    def _starts(self):
        starts = [self.base_index]
        for _, length in self.blocks[:-1]:
            starts.append(starts[-1] + length)
        return starts

    def entry(self, n: int):
        """The point at time n."""
        starts = self._starts
        if n < starts[0]:
            i = 0
        elif n >= starts[-1]:
            i = len(starts) - 1
        else:
            i = bisect_right(starts, n) - 1
        seed, _ = self.blocks[i]
        return self.system.iterate(seed, n - starts[i])

    @cached_property
    def jumps(self):
        """((position, size), ...) for each boundary that is a real defect.

        The jump at position p measures d(T(entry(p-1)), entry(p)).
        """
        sys_ = self.system
        out = []
        for i in range(1, len(self.blocks)):
            pos = self._starts[i]
            reached = sys_.iterate(self.blocks[i - 1][0], pos - self._starts[i - 1])
            size = sys_.dist(reached, self.blocks[i][0])
            if size != 0:
                out.append((pos, size))
        return tuple(out)

    def jump_positions(self):
        return [p for p, _ in self.jumps]

    @property
    def jump_count(self) -> int:
        return len(self.jumps)

    def max_jump(self):
        return max((s for _, s in self.jumps), default=self.system.zero_dist)

    def shift_index(self, s: int) -> "PseudoOrbit":
        """Time-reindexed pseudo-orbit whose entry n is entry(n + s)."""
        return PseudoOrbit(self.system, self.blocks, self.base_index - s)

    def canonical(self) -> "PseudoOrbit":
        """Equivalent pseudo-orbit in the canonical block form."""
        return from_boundaries(self.system, self.entry, self.jump_positions())

    def same_entries(self, other: "PseudoOrbit", lo: int, hi: int) -> bool:
        return all(self.entry(n) == other.entry(n) for n in range(lo, hi + 1))

    # -- serialization --------------------------------------------------

    def serialize(self) -> str:
        lines = [f"system {self.system.name}", f"base {self.base_index}"]
        for p, length in self.blocks:
            lines.append(f"{self.system.format_point(p)} {length}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, system=None) -> "PseudoOrbit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 3 or not lines[0].startswith("system ") or not lines[1].startswith("base "):
            raise ValueError("malformed pseudo-orbit text")
        if system is None:
            from .systems import get_system

            system = get_system(lines[0].split(None, 1)[1])
        base = int(lines[1].split(None, 1)[1])
        blocks = []
        for ln in lines[2:]:
            spec, _, length = ln.rpartition(" ")
            blocks.append((system.parse_point(spec), int(length)))
        return cls(system, blocks, base)

    def __repr__(self):
        return (
            f"PseudoOrbit({self.system.name}, {len(self.blocks)} blocks, "
            f"base={self.base_index}, jumps={self.jump_positions()})"
        )


def pure_orbit(system, point) -> PseudoOrbit:
    """The true orbit of a point, as a jump-free pseudo-orbit."""
    return PseudoOrbit(system, ((point, 1),), 0)


def from_boundaries(system, entry_at, boundaries) -> PseudoOrbit:
    """Canonical pseudo-orbit for an entry function and candidate defects.

    `boundaries` must contain every position where entry_at deviates from
    one-step orbit continuation; seamless candidates are dropped.
    """
    real = []
    for p in sorted(set(boundaries)):
        if system.dist(system.apply(entry_at(p - 1)), entry_at(p)) != 0:
            real.append(p)
    if not real:
        return pure_orbit(system, entry_at(0))
    blocks = [(entry_at(real[0] - 1), 1)]
    for i, p in enumerate(real):
        length = (real[i + 1] - p) if i + 1 < len(real) else 1
        blocks.append((entry_at(p), length))
    return PseudoOrbit(system, blocks, real[0] - 1)


def splice(xi: PseudoOrbit, eta: PseudoOrbit, cut: int) -> PseudoOrbit:
    """Entries of xi strictly before `cut`, entries of eta from `cut` on."""
    if xi.system is not eta.system:
        raise ValueError("cannot splice pseudo-orbits of different systems")

    def e(n):
        return xi.entry(n) if n < cut else eta.entry(n)

    bounds = [p for p in xi.jump_positions() if p < cut]
    bounds.append(cut)
    bounds.extend(p for p in eta.jump_positions() if p > cut)
    return from_boundaries(xi.system, e, bounds)


def replace_segment_with_orbit(xi: PseudoOrbit, start: int, length: int) -> PseudoOrbit:
    """Overwrite entries on [start, start+length) by the orbit of entry(start)."""
    if length <= 0:
        raise ValueError("segment length must be positive")
    seed = xi.entry(start)
    sys_ = xi.system

    def e(n):
        if start <= n < start + length:
            return sys_.iterate(seed, n - start)
        return xi.entry(n)

    bounds = [p for p in xi.jump_positions() if p <= start]
    bounds.append(start + length)
    bounds.extend(p for p in xi.jump_positions() if p > start + length)
    return from_boundaries(sys_, e, bounds)


def _pieces(xi: PseudoOrbit, eta: PseudoOrbit, window: Window):
    cuts = sorted(
        {p for p in xi.jump_positions() if window.lo < p <= window.hi}
        | {p for p in eta.jump_positions() if window.lo < p <= window.hi}
    )
    a = window.lo
    for c in cuts:
        yield a, c - 1
        a = c
    yield a, window.hi


def sup_distance(xi: PseudoOrbit, eta: PseudoOrbit, window: Window):
    """max over the window of d(entry_xi(n), entry_eta(n)), exactly.

    Works piecewise on the jump-free stretches, where both entry
    sequences are genuine orbit segments.
    """
    sys_ = xi.system
    best = sys_.zero_dist
    for a, b in _pieces(xi, eta, window):
        d = sys_.orbit_pair_sup(xi.entry(a), eta.entry(a), b - a)
        if d > best:
            best = d
    return best


def distance_profile(xi: PseudoOrbit, eta: PseudoOrbit, window: Window):
    """[(n, d(entry_xi(n), entry_eta(n)))] over the window, exactly."""
    sys_ = xi.system
    out = []
    for a, b in _pieces(xi, eta, window):
        errs = sys_.orbit_pair_errors(xi.entry(a), eta.entry(a), b - a)
        out.extend(zip(range(a, b + 1), errs))
    return out
