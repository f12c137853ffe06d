"""Two-sided shift space: coordinates, metric, gluing, tail evidence.

The coordinate oracle `ref_coord` re-reads an (eventually periodic)
sequence straight from its description, independent of ShiftPoint's
bookkeeping, and the metric oracle scans a window wide enough to cover
the joint periods exactly.
"""

import random
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowcert.shiftspace import (
    ShiftPoint,
    ShiftSystem,
    first_diff_ge,
    first_diff_le,
    shift_dist,
)

words = st.text(alphabet="01", min_size=1, max_size=4)
cores = st.text(alphabet="01", min_size=0, max_size=6)
offsets = st.integers(min_value=-6, max_value=6)
points = st.builds(ShiftPoint, words, cores, words, offsets)


def ref_coord(p: ShiftPoint, k: int) -> str:
    """Read coordinate k directly off the periodic description."""
    i = k + p.offset
    if i < 0:
        return p.left[i % len(p.left)]
    if i < len(p.core):
        return p.core[i]
    return p.right[(i - len(p.core)) % len(p.right)]


def scan_dist(p: ShiftPoint, q: ShiftPoint) -> Fraction:
    """Metric by brute scan over one joint period beyond both cores."""
    reach = (
        max(p.right_start, q.right_start, -p.left_start, -q.left_start)
        + lcm(len(p.left), len(q.left), len(p.right), len(q.right))
        + 1
    )
    diffs = [k for k in range(-reach, reach + 1) if p.coord(k) != q.coord(k)]
    if not diffs:
        return Fraction(0)
    return Fraction(1, 2 ** min(abs(k) for k in diffs))


@given(points, st.integers(min_value=-15, max_value=15))
def test_coord_matches_reference(p, k):
    assert p.coord(k) == ref_coord(p, k)


@given(points, st.integers(min_value=-5, max_value=5), st.integers(min_value=-8, max_value=8))
def test_shift_relabels_coordinates(p, n, k):
    assert p.shift(n).coord(k) == p.coord(k + n)


@given(points, st.integers(min_value=-8, max_value=8))
def test_with_coord_changes_exactly_one(p, k):
    ch = "1" if p.coord(k) == "0" else "0"
    q = p.with_coord(k, ch)
    assert q.coord(k) == ch
    for j in range(-14, 15):
        if j != k:
            assert q.coord(j) == p.coord(j)


@given(points, st.integers(min_value=-6, max_value=0), st.integers(min_value=0, max_value=6))
def test_rebase_preserves_sequence(p, lo, hi):
    q = p.rebase(lo, hi)
    for k in range(-16, 17):
        assert q.coord(k) == p.coord(k)
    assert q == p


def test_window_str():
    p = ShiftPoint("01", "110", "10", 1)
    want = "".join(p.coord(k) for k in range(-7, 8))
    assert p.window_str(-7, 7) == want
    assert p.window_str(3, 2) == ""


@given(points, points)
def test_dist_matches_scan(p, q):
    assert shift_dist(p, q) == scan_dist(p, q)


@given(points, points)
def test_metric_symmetry_and_identity(p, q):
    assert shift_dist(p, q) == shift_dist(q, p)
    assert (shift_dist(p, q) == 0) == (p == q)


@given(points, points, points)
@settings(max_examples=60)
def test_ultrametric_inequality(p, q, r):
    assert shift_dist(p, r) <= max(shift_dist(p, q), shift_dist(q, r))


@given(points, points)
def test_expansivity_constant_is_coordinate_zero(p, q):
    # d <= 1/2 holds exactly when the zeroth symbols agree
    assert (shift_dist(p, q) <= Fraction(1, 2)) == (p.coord(0) == q.coord(0))


@given(points, points)
def test_shift_is_two_lipschitz(p, q):
    d = shift_dist(p, q)
    d1 = shift_dist(p.shift(1), q.shift(1))
    assert d1 <= 2 * d
    assert d <= 2 * d1


@given(points, points, st.integers(min_value=-6, max_value=6))
def test_glue_matches_both_sides(p, q, cut):
    g = ShiftPoint.glue(p, q, cut)
    for k in range(cut - 12, cut):
        assert g.coord(k) == p.coord(k)
    for k in range(cut, cut + 12):
        assert g.coord(k) == q.coord(k)


@given(points, points, st.integers(min_value=-5, max_value=5))
def test_first_diff_contracts(p, q, k0):
    r = first_diff_ge(p, q, k0)
    if r is None:
        for k in range(k0, k0 + 40):
            assert p.coord(k) == q.coord(k)
    else:
        assert p.coord(r) != q.coord(r)
        for k in range(k0, r):
            assert p.coord(k) == q.coord(k)
    l = first_diff_le(p, q, k0)
    if l is None:
        for k in range(k0 - 40, k0 + 1):
            assert p.coord(k) == q.coord(k)
    else:
        assert p.coord(l) != q.coord(l)
        for k in range(l + 1, k0 + 1):
            assert p.coord(k) == q.coord(k)


def test_equality_across_representations():
    a = ShiftPoint("01", "", "1", 0)
    b = ShiftPoint("0101", "0111", "11", 2)
    assert a == b
    assert not a == ShiftPoint("01", "0", "1", 0)


class TestShiftSystem:
    def setup_method(self):
        self.sys = ShiftSystem()

    def test_apply_is_left_shift(self):
        p = ShiftPoint("0", "10110", "1", 2)
        assert self.sys.apply(p) == p.shift(1)
        assert self.sys.apply_inv(self.sys.apply(p)) == p
        assert self.sys.iterate(p, 5) == p.shift(5)
        assert self.sys.iterate(p, -3) == p.shift(-3)

    def test_alphabet_sizes(self):
        assert ShiftSystem(2).alphabet == "01"
        assert ShiftSystem(5).alphabet == "01234"
        with pytest.raises(ValueError):
            ShiftSystem(1)
        with pytest.raises(ValueError):
            ShiftSystem(17)

    @given(points, points, st.integers(min_value=0, max_value=8))
    def test_orbit_pair_sup_is_exact_max(self, p, q, steps):
        sup = ShiftSystem().orbit_pair_sup(p, q, steps)
        brute = max(shift_dist(p.shift(n), q.shift(n)) for n in range(steps + 1))
        assert sup == brute

    @given(points, points)
    def test_one_jump_shadow_contract(self, p, q):
        sys = ShiftSystem()
        if shift_dist(p, q) > Fraction(1, 2):
            with pytest.raises(ValueError):
                sys.one_jump_shadow(p, q)
            return
        z = sys.one_jump_shadow(p, q)
        # future orbit equals p's, past orbit equals q's, coordinatewise
        for k in range(0, 12):
            assert z.coord(k) == p.coord(k)
        for k in range(-12, 0):
            assert z.coord(k) == q.coord(k)

    def test_random_point_is_seeded(self):
        a = ShiftSystem().random_point(random.Random("seed:1"))
        b = ShiftSystem().random_point(random.Random("seed:1"))
        c = ShiftSystem().random_point(random.Random("seed:2"))
        assert a == b
        assert a != c or a == c  # c may coincide; the point is determinism of a==b

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25)
    def test_random_jump_target_respects_scale(self, seed):
        sys = ShiftSystem()
        rng = random.Random(f"jump:{seed}")
        p = sys.random_point(rng)
        scale = Fraction(1, 2**6)
        q = sys.random_jump_target(p, rng, scale)
        d = sys.dist(p, q)
        assert 0 < d < scale

    def test_format_parse_roundtrip(self):
        sys = ShiftSystem()
        rng = random.Random("fmt:0")
        for _ in range(20):
            p = sys.random_point(rng)
            assert sys.parse_point(sys.format_point(p)) == p


class TestTailEvidence:
    def setup_method(self):
        self.sys = ShiftSystem()
        self.base = ShiftPoint("10", "0110", "01", 1)

    def test_identical(self):
        ok, bound, method = self.sys.tail_evidence(self.base, self.base, "left")
        assert ok and bound == 0 and method == "identical"

    def test_left_clean_with_future_difference(self):
        q = self.base.with_coord(3, "1" if self.base.coord(3) == "0" else "0")
        ok, bound, method = self.sys.tail_evidence(self.base, q, "left")
        assert ok and bound == Fraction(1, 2**3) and method == "period-alignment"

    def test_left_rejects_difference_on_tail(self):
        q = self.base.with_coord(-2, "1" if self.base.coord(-2) == "0" else "0")
        ok, bound, _ = self.sys.tail_evidence(self.base, q, "left")
        assert not ok and bound == 1

    def test_right_mirror(self):
        q = self.base.with_coord(-4, "1" if self.base.coord(-4) == "0" else "0")
        ok, bound, method = self.sys.tail_evidence(self.base, q, "right")
        assert ok and bound == Fraction(1, 2**4) and method == "period-alignment"
        q2 = self.base.with_coord(1, "1" if self.base.coord(1) == "0" else "0")
        ok2, _, _ = self.sys.tail_evidence(self.base, q2, "right")
        assert not ok2

    def test_bad_side(self):
        with pytest.raises(ValueError):
            self.sys.tail_evidence(self.base, self.base, "up")
