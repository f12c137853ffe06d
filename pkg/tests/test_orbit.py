"""Pseudo-orbits: entries, defect measurement, splicing, serialization."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowcert.orbit import (
    PseudoOrbit,
    Window,
    distance_profile,
    from_boundaries,
    pure_orbit,
    replace_segment_with_orbit,
    splice,
    sup_distance,
)
from shadowcert.shiftspace import ShiftPoint, ShiftSystem
from shadowcert.torus import ToralPoint, ToralSystem

SHIFT = ShiftSystem()
TORAL = ToralSystem()


def flip(p: ShiftPoint, k: int) -> ShiftPoint:
    return p.with_coord(k, "1" if p.coord(k) == "0" else "0")


def random_shift_po(rng, k_jumps):
    blocks = [(SHIFT.random_point(rng), rng.randint(1, 5))]
    for _ in range(k_jumps):
        reached = SHIFT.iterate(blocks[-1][0], blocks[-1][1])
        blocks.append((flip(reached, -rng.randint(4, 9)), rng.randint(1, 5)))
    return PseudoOrbit(SHIFT, blocks, rng.randint(-6, 6))


class TestWindow:
    def test_basic(self):
        w = Window(-3, 4)
        assert list(w.indices()) == list(range(-3, 5))
        assert w.width == 8
        assert -3 in w and 4 in w and 5 not in w

    def test_rejects_reversed(self):
        with pytest.raises(ValueError):
            Window(2, 1)


class TestEntries:
    def test_entry_walks_blocks(self):
        x = SHIFT.random_point(random.Random("po:1"))
        y = flip(SHIFT.iterate(x, 3), -5)
        po = PseudoOrbit(SHIFT, ((x, 3), (y, 2)), 0)
        for n in range(0, 3):
            assert po.entry(n) == SHIFT.iterate(x, n)
        for n in range(3, 5):
            assert po.entry(n) == SHIFT.iterate(y, n - 3)
        # tails extend the end blocks as true orbits
        assert po.entry(-4) == SHIFT.iterate(x, -4)
        assert po.entry(9) == SHIFT.iterate(y, 6)

    def test_base_index_offsets_time(self):
        x = TORAL.random_point(random.Random("po:2"))
        po = PseudoOrbit(TORAL, ((x, 1),), 7)
        assert po.entry(7) == x
        assert po.entry(9) == TORAL.iterate(x, 2)

    def test_empty_blocks_rejected(self):
        with pytest.raises(ValueError):
            PseudoOrbit(SHIFT, ())
        x = SHIFT.random_point(random.Random("po:3"))
        with pytest.raises(ValueError):
            PseudoOrbit(SHIFT, ((x, 0),))


class TestJumps:
    def test_jump_measures_defect_from_previous_entry(self):
        # the jump at p must be d(T(entry(p-1)), entry(p)) -- nothing else
        x = SHIFT.random_point(random.Random("po:4"))
        y = flip(SHIFT.iterate(x, 3), -5)
        po = PseudoOrbit(SHIFT, ((x, 3), (y, 2)), 0)
        assert po.jumps == ((3, Fraction(1, 2**5)),)
        assert po.max_jump() == Fraction(1, 2**5)

    def test_toral_jump_size_exact(self):
        x = TORAL.random_point(random.Random("po:5"))
        v = (Fraction(1, 2**21), Fraction(-1, 2**23))
        y = TORAL.iterate(x, 2).translate(v)
        po = PseudoOrbit(TORAL, ((x, 2), (y, 1)), -1)
        assert po.jump_positions() == [1]
        assert po.jumps[0][1] == TORAL.wrap_norm(v)

    def test_seamless_boundary_is_not_a_jump(self):
        x = SHIFT.random_point(random.Random("po:6"))
        po = PseudoOrbit(SHIFT, ((x, 4), (SHIFT.iterate(x, 4), 2)), 0)
        assert po.jumps == ()
        assert po.jump_count == 0

    @given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=-8, max_value=8))
    @settings(max_examples=30)
    def test_shift_index_moves_jump_positions(self, seed, s):
        po = random_shift_po(random.Random(f"po:{seed}"), 2)
        moved = po.shift_index(s)
        # entry n of the result is entry(n + s) of the original
        assert moved.jump_positions() == [p - s for p in po.jump_positions()]
        assert [sz for _, sz in moved.jumps] == [sz for _, sz in po.jumps]
        for n in range(-3, 12):
            assert moved.entry(n) == po.entry(n + s)


class TestSerialization:
    @given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=3))
    @settings(max_examples=25)
    def test_shift_roundtrip(self, seed, k):
        po = random_shift_po(random.Random(f"ser:{seed}"), k)
        back = PseudoOrbit.parse(po.serialize())
        assert back.base_index == po.base_index
        assert back.jumps == po.jumps
        assert back.same_entries(po, -5, 15)

    def test_toral_roundtrip(self):
        rng = random.Random("ser:t")
        x = TORAL.random_point(rng)
        y = TORAL.iterate(x, 3).translate((Fraction(1, 2**12), Fraction(0)))
        po = PseudoOrbit(TORAL, ((x, 3), (y, 1)), -2)
        back = PseudoOrbit.parse(po.serialize())
        assert back.system.name == "toral"
        assert back.jumps == po.jumps
        assert back.same_entries(po, -6, 8)

    def test_parse_rejects_malformed(self):
        with pytest.raises(ValueError):
            PseudoOrbit.parse("nonsense\n")


class TestSurgery:
    def test_pure_orbit_has_no_jumps(self):
        x = SHIFT.random_point(random.Random("sur:0"))
        po = pure_orbit(SHIFT, x)
        assert po.jump_count == 0
        assert po.entry(5) == SHIFT.iterate(x, 5)

    def test_splice_takes_each_side(self):
        rng = random.Random("sur:1")
        a = random_shift_po(rng, 2)
        b = random_shift_po(rng, 2)
        cut = 3
        s = splice(a, b, cut)
        for n in range(-4, cut):
            assert s.entry(n) == a.entry(n)
        for n in range(cut, 14):
            assert s.entry(n) == b.entry(n)
        # jump positions: a's below the cut, b's above, maybe one at the cut
        expect = {p for p in a.jump_positions() if p < cut}
        expect |= {p for p in b.jump_positions() if p > cut}
        got = set(s.jump_positions())
        assert expect <= got <= expect | {cut}

    def test_splice_of_matching_orbits_is_seamless(self):
        x = SHIFT.random_point(random.Random("sur:2"))
        a = pure_orbit(SHIFT, x)
        b = pure_orbit(SHIFT, x)
        assert splice(a, b, 0).jump_count == 0

    def test_replace_segment_with_orbit(self):
        po = random_shift_po(random.Random("sur:3"), 3)
        start, length = 1, 6
        rep = replace_segment_with_orbit(po, start, length)
        seed = po.entry(start)
        for j in range(length):
            assert rep.entry(start + j) == SHIFT.iterate(seed, j)
        for n in range(-4, start):
            assert rep.entry(n) == po.entry(n)
        for n in range(start + length, start + length + 6):
            assert rep.entry(n) == po.entry(n)
        assert all(p <= start or p >= start + length for p in rep.jump_positions())

    def test_from_boundaries_drops_seamless(self):
        x = SHIFT.random_point(random.Random("sur:4"))
        po = from_boundaries(SHIFT, lambda n: SHIFT.iterate(x, n), [2, 5])
        assert po.jump_count == 0

    def test_canonical_preserves_entries_and_jumps(self):
        po = random_shift_po(random.Random("sur:5"), 2)
        canon = po.canonical()
        assert canon.jumps == po.jumps
        assert canon.same_entries(po, -5, 15)


class TestWindowSup:
    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=30)
    def test_sup_distance_matches_bruteforce(self, seed):
        rng = random.Random(f"sup:{seed}")
        a = random_shift_po(rng, rng.randint(0, 2))
        b = random_shift_po(rng, rng.randint(0, 2))
        w = Window(-4, 9)
        brute = max(SHIFT.dist(a.entry(n), b.entry(n)) for n in w.indices())
        assert sup_distance(a, b, w) == brute

    def test_profile_matches_pointwise(self):
        rng = random.Random("sup:t")
        x = TORAL.random_point(rng)
        a = pure_orbit(TORAL, x)
        b = pure_orbit(TORAL, x.translate((Fraction(1, 2**10), Fraction(1, 2**11))))
        w = Window(-3, 3)
        prof = list(distance_profile(a, b, w))
        assert [n for n, _ in prof] == list(w.indices())
        for n, d in prof:
            assert d == TORAL.dist(a.entry(n), b.entry(n))
        assert sup_distance(a, b, w) == max(d for _, d in prof)
