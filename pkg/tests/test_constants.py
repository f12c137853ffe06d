"""The certified constant chain, expansivity certificates, and the
semi-expansivity falsifier.

Closed forms used as oracles (derived by hand, independent of the code):
for the torus, eps * (lambda-1) / (2 C lambda) rationalizes to
eps * (5 - 2 sqrt5) / 4, so at eps = 1/64 the chain gives
delta = (5 - 2 sqrt5)/256 and rho = delta * 2 / (3^14 - 1).
"""

import random
from fractions import Fraction

import pytest

from shadowcert.constants import (
    CertifiedConstants,
    SharpenResult,
    _check_entry_pair,
    _check_lift_family,
    _toral_family_scales,
    _toral_lift_family,
    alpha_certify_shift,
    alpha_certify_toral,
    auto_alpha_toral,
    delta_semiexp,
    derive_constants,
    rho_for,
    semiexp_falsify,
    sharpen_check,
    uniform_n,
)
from shadowcert.orbit import PseudoOrbit, Window, pure_orbit
from shadowcert.quadratic import QuadraticNumber
from shadowcert.systems import get_system


class TestDeltaSemiexp:
    def test_shift_largest_power_of_two(self, shift):
        assert delta_semiexp(shift, Fraction(1, 64)) == Fraction(1, 64)
        assert delta_semiexp(shift, Fraction(3, 100)) == Fraction(1, 64)
        assert delta_semiexp(shift, Fraction(1, 2)) == Fraction(1, 2)
        with pytest.raises(ValueError):
            delta_semiexp(shift, 0)

    def test_toral_closed_form(self, toral):
        # eps (lambda-1) / (2 C lambda) == eps (5 - 2 sqrt5) / 4
        got = delta_semiexp(toral, Fraction(1, 64))
        assert got == QuadraticNumber.parse("5/256-1/128*s5")
        eps = QuadraticNumber(Fraction(1, 64))
        assert got * 4 == eps * QuadraticNumber.parse("5-2*s5")

    def test_toral_cap_keeps_linear_regime(self, toral):
        # at eps = 1 the wrap cap (1/2 - 3 alpha)/2 = 1/16 wins
        assert delta_semiexp(toral, 1) == QuadraticNumber(Fraction(1, 16))

    def test_toral_alpha_too_large(self, toral):
        with pytest.raises(ValueError):
            delta_semiexp(toral, Fraction(1, 64), alpha=Fraction(1, 6))


class TestUniformN:
    def test_shift_minimality(self, shift):
        # smallest N with 2^-(N+1) < eps; at eps = 2^-6 equality blocks N=5
        assert uniform_n(shift, Fraction(1, 64)) == 6
        assert uniform_n(shift, Fraction(1, 63)) == 5
        assert Fraction(1, 2**7) < Fraction(1, 64) <= Fraction(1, 2**6)

    def test_toral_minimality(self, toral, toral_constants):
        from shadowcert.quadratic import LAMBDA
        from shadowcert.torus import C_PROJ

        delta = toral_constants.delta
        n = uniform_n(toral, delta)
        assert C_PROJ * toral.alpha * LAMBDA**-n < delta
        assert not C_PROJ * toral.alpha * LAMBDA ** -(n - 1) < delta


class TestRho:
    def test_closed_forms(self, shift, toral):
        assert rho_for(shift, Fraction(1, 32), 2) == Fraction(1, 2**10)
        d = QuadraticNumber(Fraction(1, 10))
        assert rho_for(toral, d, 2) == d * Fraction(2, 3**6 - 1)

    @pytest.mark.parametrize("name", ["shift", "toral"])
    def test_segments_stay_delta_close(self, name, request):
        # rho keeps any (2N+2)-entry segment with per-step defects < rho
        # within delta of the true orbit of its first entry
        system = request.getfixturevalue(name)
        c = request.getfixturevalue(f"{name}_constants")
        rng = random.Random(f"segments:{name}")
        length = 2 * c.n_window + 2
        for _ in range(150):
            e = system.random_point(rng)
            seg = [e]
            for _ in range(length - 1):
                seg.append(system.random_jump_target(system.apply(seg[-1]), rng, c.rho))
            worst = max(
                system.dist(system.iterate(seg[0], j), seg[j]) for j in range(length)
            )
            assert worst < c.delta


class TestAlphaCertification:
    def test_shift_certificate(self, shift):
        rep = alpha_certify_shift(shift)
        assert rep.ok and rep.value == Fraction(1, 2)
        assert rep.method == "coordinate-forcing"
        assert rep.details["forcing_checks"] == 200
        assert rep.details["escape_checks"] > 0

    def test_shift_candidate_range(self, shift):
        with pytest.raises(ValueError):
            alpha_certify_shift(shift, candidate=Fraction(1, 4))
        with pytest.raises(ValueError):
            alpha_certify_shift(shift, candidate=Fraction(1))

    def test_toral_certificate(self):
        rep = alpha_certify_toral(Fraction(1, 8))
        assert rep.ok
        assert rep.method == "grid-sweep"
        d = rep.details
        assert d["grid"] == 16
        assert d["cells_certified"] + d["origin_cells"] == 16 * 16
        assert d["origin_cells"] == 4
        assert d["max_horizon"] >= 1
        assert d["tiny_samples"] == 3

    def test_toral_boundary_candidate(self):
        # 1/6 is the edge of the linear regime and still certifies
        assert alpha_certify_toral(Fraction(1, 6)).ok

    def test_toral_candidate_validation(self):
        with pytest.raises(ValueError):
            alpha_certify_toral(Fraction(1, 5))
        with pytest.raises(ValueError):
            alpha_certify_toral(Fraction(1, 8), grid=7)

    def test_auto_alpha(self):
        value, rep = auto_alpha_toral()
        assert value == Fraction(1, 8) and rep.ok


class TestDerivedChain:
    def test_shift_values(self, shift_constants):
        c = shift_constants
        assert c.epsilon == Fraction(1, 64)
        assert c.alpha == Fraction(1, 2)
        assert c.delta == Fraction(1, 64)
        assert c.n_window == 6
        assert c.rho == Fraction(1, 2**19)

    def test_toral_values(self, toral_constants):
        c = toral_constants
        assert c.alpha == Fraction(1, 8)
        assert c.delta == QuadraticNumber.parse("5/256-1/128*s5")
        assert c.n_window == 6
        assert c.rho == QuadraticNumber.parse("5/612219904-1/306109952*s5")
        assert c.rho == c.delta * Fraction(2, 3**14 - 1)

    @pytest.mark.parametrize("name", ["shift_constants", "toral_constants"])
    def test_provenance_and_json(self, name, request):
        c = request.getfixturevalue(name)
        keys = dict(c.provenance)
        for k in ("epsilon", "alpha", "delta", "N", "rho", "alpha_certification"):
            assert k in keys
        assert "semi-expansivity at epsilon" in keys["delta"]
        d = c.to_json_dict()
        assert d["N"] == c.n_window
        for field in ("epsilon", "alpha", "delta", "rho"):
            assert set(d[field]) == {"exact", "approx"}
            assert d[field]["approx"] == float(getattr(c, field))

    def test_chain_ordering_enforced(self):
        with pytest.raises(ValueError):
            CertifiedConstants("shift", Fraction(1, 4), Fraction(1, 2),
                               Fraction(1, 8), 3, Fraction(1, 4))
        with pytest.raises(ValueError):
            CertifiedConstants("shift", Fraction(1, 4), Fraction(1, 2),
                               Fraction(1, 8), -1, Fraction(1, 16))


class TestSharpenCheck:
    def test_pass(self, shift, shift_constants):
        x = shift.random_point(random.Random("sharp:0"))
        a = pure_orbit(shift, x)
        res = sharpen_check(shift, shift_constants, a, a, Window(-4, 4))
        assert res and res.sup == 0 and res.limit == Fraction(1, 4)

    def test_first_violation_reported(self, shift, shift_constants):
        x = shift.random_point(random.Random("sharp:1"))
        y = x.with_coord(0, "1" if x.coord(0) == "0" else "0")
        res = sharpen_check(shift, shift_constants, pure_orbit(shift, x),
                            pure_orbit(shift, y), Window(-2, 2))
        assert not res
        # d(T^n x, T^n y) = 2^-|n| >= 1/4 first at n = -2
        assert res.violation_index == -2
        assert res.sup == 1

    def test_rejects_oversized_jumps(self, shift, shift_constants):
        x = shift.random_point(random.Random("sharp:2"))
        reached = shift.iterate(x, 3)
        z = reached.with_coord(-1, "1" if reached.coord(-1) == "0" else "0")
        bad = PseudoOrbit(shift, ((x, 3), (z, 1)), 0)
        assert bad.max_jump() >= Fraction(1, 4)
        with pytest.raises(ValueError):
            sharpen_check(shift, shift_constants, bad,
                          pure_orbit(shift, x), Window(0, 3))


from conftest import revalidate_witness  # noqa: E402  (shared with the acceptance suite)


class TestFalsifier:
    def test_certified_shift_finds_nothing(self, shift, shift_constants):
        c = shift_constants
        out = semiexp_falsify(shift, c.delta, c.epsilon, 500, 0)
        assert not out.found
        assert out.trials == 500
        for t, closeness, adm in out.samples:
            if t % 5 in (0, 1, 4):
                assert adm, f"admissible family rejected at trial {t}"
                assert closeness < float(c.epsilon)
            if t % 5 == 2:
                # agrees on the window yet fails the tail certificate
                assert not adm
        assert out.admissible == sum(1 for _, _, a in out.samples if a)

    def test_certified_toral_finds_nothing(self, toral, toral_constants):
        c = toral_constants
        out = semiexp_falsify(toral, c.delta, c.epsilon, 500, 0)
        assert not out.found
        for t, closeness, adm in out.samples:
            if t % 5 in (0, 1, 4):
                assert adm
            else:
                assert not adm  # both translation families carry a tail residue

    def test_inflated_delta_yields_validated_witness(self, shift, shift_constants):
        c = shift_constants
        out = semiexp_falsify(shift, c.alpha, c.epsilon, 1000, 0)
        assert out.found and out.trials <= 1000
        revalidate_witness(shift, out, c.alpha, c.alpha, c.epsilon)

    def test_inflated_delta_toral_witness(self, toral, toral_constants):
        c = toral_constants
        out = semiexp_falsify(toral, toral.alpha, c.epsilon, 1000, 0)
        assert out.found
        revalidate_witness(toral, out, QuadraticNumber.coerce(toral.alpha),
                           QuadraticNumber.coerce(toral.alpha), c.epsilon)

    def test_deterministic(self, shift, shift_constants):
        c = shift_constants
        a = semiexp_falsify(shift, c.delta, c.epsilon, 120, 3)
        b = semiexp_falsify(shift, c.delta, c.epsilon, 120, 3)
        assert a.samples == b.samples

    def test_window_agreement_alone_is_not_admissible(self, shift, shift_constants):
        # the regression behind the tail certificates: a pair that agrees
        # on the whole window but diverges just outside must be rejected,
        # else it would read as a closeness-1/2 witness
        c = shift_constants
        w = 8
        x = shift.random_point(random.Random("hidden:1"))
        y = x.with_coord(w + 1, "1" if x.coord(w + 1) == "0" else "0")
        xs = [shift.iterate(x, n) for n in range(-w, w + 1)]
        es = [shift.iterate(y, n) for n in range(-w, w + 1)]
        closeness, _, admissible = _check_entry_pair(
            shift, xs, es, c.delta, c.alpha, w
        )
        assert closeness >= c.epsilon
        assert not admissible

    def test_toral_lift_checks_match_entry_checks(self, toral, toral_constants):
        # the lift-based fast path must agree exactly with checks run on
        # materialized entries
        c = toral_constants
        scales = _toral_family_scales(c.delta, c.alpha)
        rng = random.Random("liftcheck:0")
        w = 6
        for t in range(10):
            x = toral.random_point(rng)
            vs = _toral_lift_family(toral, rng, t, scales, w)
            cl_l, worst_l, adm_l = _check_lift_family(toral, vs, c.delta, c.alpha, w)
            xs = [toral.iterate(x, n) for n in range(-w, w + 1)]
            es = [p.translate(v) for p, v in zip(xs, vs)]
            cl_e, worst_e, adm_e = _check_entry_pair(toral, xs, es, c.delta, c.alpha, w)
            assert (cl_l, worst_l, adm_l) == (cl_e, worst_e, adm_e)

    def test_zero_trials_is_vacuous(self, shift, shift_constants):
        c = shift_constants
        out = semiexp_falsify(shift, c.delta, c.epsilon, 0, 0)
        assert not out.found and out.trials == 0 and out.samples == ()
