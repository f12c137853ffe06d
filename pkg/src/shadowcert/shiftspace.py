"""The full shift on m symbols, restricted to eventually periodic sequences.

Points are two-sided sequences, periodic far to the left and far to the
right, stored as (left word, core word, right word, offset).  Coordinate
k reads position p = k + offset: left[p % len(left)] for p < 0, core[p]
for 0 <= p < len(core), right[(p - len(core)) % len(right)] beyond.

The metric is d(x, y) = 2^-j with j = min{|k| : x_k != y_k}.  Distances,
equality and suprema over orbit segments are all decided exactly via the
periodicity horizons of the two points involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

ALPHABET = "0123456789abcdef"


def _rot(word: str, s: int) -> str:
    s %= len(word)
    return word[s:] + word[:s]


def _cyclic_slice(word: str, start: int, length: int) -> str:
    if length <= 0:
        return ""
    n = len(word)
    start %= n
    reps = (start + length + n - 1) // n
    return (word * reps)[start : start + length]


class ShiftPoint:
    """An eventually periodic two-sided sequence."""

    __slots__ = ("left", "core", "right", "offset")

    def __init__(self, left: str, core: str, right: str, offset: int = 0):
        if not left or not right:
            raise ValueError("periodic tails must be non-empty words")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "offset", offset)

    def __setattr__(self, name, value):
        raise AttributeError("ShiftPoint is immutable")

    # coordinates below left_start lie in the pure left-periodic region;
    # coordinates at or above right_start lie in the right-periodic one.
    @property
    def left_start(self) -> int:
        return -self.offset

    @property
    def right_start(self) -> int:
        return len(self.core) - self.offset

    def coord(self, k: int) -> str:
        p = k + self.offset
        if p < 0:
            return self.left[p % len(self.left)]
        if p < len(self.core):
            return self.core[p]
        return self.right[(p - len(self.core)) % len(self.right)]

    def window_str(self, lo: int, hi: int) -> str:
        """Coordinates lo..hi inclusive, as a string."""
        if hi < lo:
            return ""
        a, b = lo + self.offset, hi + self.offset
        lc = len(self.core)
        parts = []
        if a < 0:
            parts.append(_cyclic_slice(self.left, a % len(self.left), min(b, -1) - a + 1))
        if b >= 0 and a < lc:
            parts.append(self.core[max(a, 0) : min(b, lc - 1) + 1])
        if b >= lc:
            start = max(a, lc) - lc
            parts.append(_cyclic_slice(self.right, start % len(self.right), b - max(a, lc) + 1))
        return "".join(parts)

    def shift(self, n: int) -> "ShiftPoint":
        """The image under the n-th power of the shift map."""
        if n == 0:
            return self
        return ShiftPoint(self.left, self.core, self.right, self.offset + n)

    def rebase(self, lo: int, hi: int) -> "ShiftPoint":
        """Same sequence, with the core widened to cover [lo, hi)."""
        lo = min(lo, self.left_start)
        hi = max(hi, self.right_start)
        return ShiftPoint.from_coords(self.window_str(lo, hi - 1), lo, self, self)

    def with_coord(self, k: int, ch: str) -> "ShiftPoint":
        """A copy whose coordinate k is replaced by ch."""
        p = self.rebase(k, k + 1)
        i = k - p.left_start
        core = p.core[:i] + ch + p.core[i + 1 :]
        return ShiftPoint(p.left, core, p.right, p.offset)

    @classmethod
    def from_coords(
        cls,
        core: str,
        lo: int,
        left_template: "ShiftPoint",
        right_template: "ShiftPoint",
    ) -> "ShiftPoint":
        """Point reading `core` on [lo, lo+len), the left template's tail
        below lo and the right template's tail from lo+len on.

        Requires lo <= left_template.left_start and lo + len(core) >=
        right_template.right_start, so both tails are purely periodic.
        """
        hi = lo + len(core)
        if lo > left_template.left_start or hi < right_template.right_start:
            raise ValueError("core does not cover the aperiodic parts")
        lw = left_template.left
        left = _rot(lw, (lo + left_template.offset) % len(lw))
        rw = right_template.right
        rshift = hi + right_template.offset - len(right_template.core)
        right = _rot(rw, rshift % len(rw))
        return cls(left, core, right, -lo)

    @classmethod
    def glue(cls, past: "ShiftPoint", future: "ShiftPoint", cut: int) -> "ShiftPoint":
        """Point equal to `past` on coordinates < cut and `future` from cut on."""
        lo = min(past.left_start, cut)
        hi = max(future.right_start, cut)
        core = past.window_str(lo, cut - 1) + future.window_str(cut, hi - 1)
        return cls.from_coords(core, lo, past, future)

    def __eq__(self, other):
        if not isinstance(other, ShiftPoint):
            return NotImplemented
        lo = min(self.left_start, other.left_start)
        hi = max(self.right_start, other.right_start)
        pl = lcm(len(self.left), len(other.left))
        pr = lcm(len(self.right), len(other.right))
        return self.window_str(lo - pl, hi + pr - 1) == other.window_str(lo - pl, hi + pr - 1)

    __hash__ = None

    def __repr__(self):
        return f"ShiftPoint({self.left!r}, {self.core!r}, {self.right!r}, {self.offset})"


def first_diff_ge(p: ShiftPoint, q: ShiftPoint, k0: int):
    """Smallest coordinate k >= k0 where p and q differ, or None.

    Sound: beyond max(k0, both right_starts) the pair is jointly periodic,
    so one full common period with no mismatch settles the whole tail.
    """
    base = max(p.right_start, q.right_start, k0)
    hi = base + lcm(len(p.right), len(q.right)) - 1
    s1, s2 = p.window_str(k0, hi), q.window_str(k0, hi)
    if s1 == s2:
        return None
    return k0 + next(i for i, (a, b) in enumerate(zip(s1, s2)) if a != b)


def first_diff_le(p: ShiftPoint, q: ShiftPoint, k0: int):
    """Largest coordinate k <= k0 where p and q differ, or None."""
    base = min(p.left_start, q.left_start, k0 + 1)
    lo = base - lcm(len(p.left), len(q.left))
    s1, s2 = p.window_str(lo, k0), q.window_str(lo, k0)
    if s1 == s2:
        return None
    return k0 - next(i for i, (a, b) in enumerate(zip(reversed(s1), reversed(s2))) if a != b)


def shift_dist(p: ShiftPoint, q: ShiftPoint) -> Fraction:
    r = first_diff_ge(p, q, 0)
    l = first_diff_le(p, q, -1)
    if r is None and l is None:
        return Fraction(0)
    j = min([v for v in (r, None if l is None else -l) if v is not None])
    return Fraction(1, 2**j)


class ShiftSystem:
    """Full shift over an alphabet of `symbols` letters (2..16)."""

    def __init__(self, symbols: int = 2):
        if not 2 <= symbols <= 16:
            raise ValueError("alphabet size must be between 2 and 16")
        self.symbols = symbols
        self.alphabet = ALPHABET[:symbols]

    @property
    def name(self) -> str:
        return "shift" if self.symbols == 2 else f"shift:{self.symbols}"

    # expansivity constant: d(x,y) <= 1/2 for all n forces all
    # coordinates equal, since d(T^n x, T^n y) <= 1/2 iff x_n = y_n.
    alpha = Fraction(1, 2)

    # per-step distance growth: d(Tx, Ty) <= 2 d(x, y)
    lipschitz = 2

    # one-jump gluing needs coordinate-0 agreement of the two endpoints
    one_jump_threshold = Fraction(1, 2)

    zero_dist = Fraction(0)

    def apply(self, p: ShiftPoint) -> ShiftPoint:
        return p.shift(1)

    def apply_inv(self, p: ShiftPoint) -> ShiftPoint:
        return p.shift(-1)

    def iterate(self, p: ShiftPoint, n: int) -> ShiftPoint:
        return p.shift(n)

    def dist(self, p: ShiftPoint, q: ShiftPoint) -> Fraction:
        return shift_dist(p, q)

    def dist_float(self, d) -> float:
        return float(d)

    def format_dist(self, d: Fraction) -> str:
        return str(d)

    def orbit_pair_sup(self, p: ShiftPoint, q: ShiftPoint, steps: int) -> Fraction:
        """max over 0 <= m <= steps of d(T^m p, T^m q), exactly."""
        r = first_diff_ge(p, q, 0)
        if r is not None and r <= steps:
            return Fraction(1)
        l = first_diff_le(p, q, -1)
        candidates = []
        if r is not None:
            candidates.append(r - steps)
        if l is not None:
            candidates.append(-l)
        if not candidates:
            return Fraction(0)
        return Fraction(1, 2 ** min(candidates))

    def orbit_pair_errors(self, p, q, steps):
        return [shift_dist(p.shift(m), q.shift(m)) for m in range(steps + 1)]

    def one_jump_shadow(self, x: ShiftPoint, y: ShiftPoint) -> ShiftPoint:
        """The true orbit through (past of y) glued to (future of x).

        For the one-jump pseudo-orbit (..., T^-1 y, x, Tx, ...) the result
        z satisfies d(T^n z, nth entry) <= 2^-(|n|+1): z copies y on
        negative coordinates and x from coordinate 0 on, and the gluing
        is compatible because d(x, y) <= 1/2 forces x_0 = y_0.
        """
        if shift_dist(x, y) > self.one_jump_threshold:
            raise ValueError("one-jump gluing needs d(x, y) <= 1/2")
        return ShiftPoint.glue(y, x, 0)

    # -- generation ----------------------------------------------------

    def random_point(self, rng) -> ShiftPoint:
        def word(n):
            return "".join(rng.choice(self.alphabet) for _ in range(n))

        return ShiftPoint(
            word(rng.randint(1, 4)),
            word(rng.randint(0, 6)),
            word(rng.randint(1, 4)),
            rng.randint(-3, 3),
        )

    def random_jump_target(self, p: ShiftPoint, rng, scale) -> ShiftPoint:
        """A point q != p with 0 < d(p, q) < scale."""
        r = 0
        while Fraction(1, 2**r) >= scale:
            r += 1
        r += rng.randint(0, 2)
        k = r if rng.random() < 0.5 else -r
        old = p.coord(k)
        others = [c for c in self.alphabet if c != old]
        return p.with_coord(k, rng.choice(others))

    # -- serialization ---------------------------------------------------

    def format_point(self, p: ShiftPoint) -> str:
        return f"L:{p.left} C:{p.core} R:{p.right} O:{p.offset}"

    def parse_point(self, text: str) -> ShiftPoint:
        fields = {}
        for token in text.split():
            if len(token) < 2 or token[1] != ":":
                raise ValueError(f"bad shift point token: {token!r}")
            fields[token[0]] = token[2:]
        try:
            p = ShiftPoint(fields["L"], fields.get("C", ""), fields["R"], int(fields["O"]))
        except KeyError as exc:
            raise ValueError(f"missing field in shift point: {text!r}") from exc
        for w in (p.left, p.core, p.right):
            if any(c not in self.alphabet for c in w):
                raise ValueError(f"symbol outside alphabet in {text!r}")
        return p

    # -- tail evidence ----------------------------------------------------

    def tail_evidence(self, p: ShiftPoint, q: ShiftPoint, side: str):
        """Exact sup of d(T^m p, T^m q) over m <= 0 (side 'left') or
        m >= 0 (side 'right'), provided the near half-line is clean.

        Returns (ok, bound, method).  ok is False when differences exist
        on the wrong side of 0, in which case the sup would be 1.
        """
        if side == "left":
            if first_diff_le(p, q, 0) is not None:
                return False, Fraction(1), "difference-on-tail"
            r = first_diff_ge(p, q, 1)
            if r is None:
                return True, Fraction(0), "identical"
            return True, Fraction(1, 2**r), "period-alignment"
        if side == "right":
            if first_diff_ge(p, q, 0) is not None:
                return False, Fraction(1), "difference-on-tail"
            l = first_diff_le(p, q, -1)
            if l is None:
                return True, Fraction(0), "identical"
            return True, Fraction(1, 2 ** (-l)), "period-alignment"
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
