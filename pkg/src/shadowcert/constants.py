"""Derivation and certification of the shadowing constant chain.

For a target accuracy epsilon the chain is

    alpha : expansivity constant (certified per system),
    delta : one-jump admission threshold, small enough that
            (a) delta-pseudo-orbit pairs within alpha are within epsilon,
            (b) the one-jump oracle applies,
            (c) the same semi-expansivity upgrade works at alpha/2,
    N     : uniform expansivity window radius at delta,
    rho   : per-step defect bound so that any segment of length 2N+2
            stays within delta of the orbit of its first point.

All values are exact (Fraction, or Q(sqrt5) for the torus) and each
carries a provenance note saying how it was obtained.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .orbit import sup_distance
from .quadratic import LAMBDA, LAMBDA_INV, PHI, PHI_INV, QuadraticNumber
from .shiftspace import ShiftSystem, first_diff_ge, first_diff_le
from .torus import C_PROJ, K_PROJ, ToralSystem, norm_inf


def exact_str(v) -> str:
    if isinstance(v, QuadraticNumber):
        return str(v)
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    return str(v)


def _as_float(v) -> float:
    return float(v)


# ---------------------------------------------------------------------------
# constant derivations


def delta_semiexp(system, eps, alpha=None):
    """Jump threshold making alpha-close pseudo-orbit pairs eps-close.

    Shift: differing coordinates can only survive at radius > m when all
    jumps are < 2^-m (a defect is needed to carry a difference one step
    outward), so pointwise closeness is at most delta/2; the largest
    power of two <= eps works.

    Torus: pointwise alpha-closeness keeps difference lifts in the
    linear regime, where they satisfy v' = Av + e with |e| < 2 delta;
    the bounded solution obeys |v| <= 2*C*delta/(lambda-1), and the
    returned delta = eps (lambda-1) / (2 C lambda) clears eps with a
    factor lambda to spare.  Capped to keep one application of A away
    from the mod-1 wrap: 3 alpha + 2 delta <= 1/2.
    """
    if isinstance(system, ShiftSystem):
        if eps <= 0:
            raise ValueError("eps must be positive")
        delta = Fraction(1, 2)
        while delta > eps:
            delta /= 2
        return delta
    alpha = Fraction(system.alpha if alpha is None else alpha)
    formula = QuadraticNumber.coerce(eps) * (LAMBDA - 1) / (2 * C_PROJ * LAMBDA)
    cap = QuadraticNumber(Fraction(1, 2) - 3 * alpha) / 2
    if cap.sign() <= 0:
        raise ValueError("alpha too large for the linear regime")
    return min(formula, cap, QuadraticNumber(alpha))


def uniform_n(system, eps, alpha=None) -> int:
    """Smallest N such that alpha-closeness of two orbits for |n| <= N
    forces d(x, y) < eps.

    Shift: closeness <= 1/2 at time n pins coordinate n, so agreement on
    [-N, N] gives d <= 2^-(N+1).  Torus: both eigencomponents of the
    difference are bounded through A^{+-N} by K alpha lambda^-N, so
    d <= C alpha lambda^-N.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = 0
    if isinstance(system, ShiftSystem):
        while Fraction(1, 2 ** (n + 1)) >= eps:
            n += 1
        return n
    alpha = system.alpha if alpha is None else alpha
    bound = C_PROJ * alpha
    lam_inv = LAMBDA.inverse()
    while bound >= eps:
        bound = bound * lam_inv
        n += 1
    return n


def rho_for(system, delta, n: int):
    """Per-step bound keeping length-(2N+2) segments delta-close to the
    orbit of their first entry: drift after j steps is at most
    rho (L^j - 1)/(L - 1), maximized at j = 2N+1."""
    if isinstance(system, ShiftSystem):
        return delta * Fraction(1, 2 ** (2 * n + 1))
    return delta * Fraction(2, 3 ** (2 * n + 2) - 1)


# ---------------------------------------------------------------------------
# expansivity certification


@dataclass(frozen=True)
class CertReport:
    ok: bool
    value: Fraction
    method: str
    details: dict = field(default_factory=dict)


def alpha_certify_shift(system, candidate=Fraction(1, 2), samples=200, seed=7) -> CertReport:
    """Certify the expansivity constant 1/2 of the full shift.

    Structure: d(x, y) <= 1/2 holds iff x_0 = y_0, so d(T^n x, T^n y)
    <= 1/2 for all n forces equality coordinate by coordinate; distinct
    points escape to distance 1 at any differing coordinate.  The
    sampled checks exercise both directions exactly.
    """
    if not Fraction(1, 2) <= candidate < 1:
        raise ValueError("shift candidate must lie in [1/2, 1)")
    rng = random.Random(f"alpha-shift:{seed}")
    forcing = escapes = 0
    for _ in range(samples):
        p, q = system.random_point(rng), system.random_point(rng)
        agrees = p.coord(0) == q.coord(0)
        if (system.dist(p, q) <= candidate) != agrees:
            return CertReport(False, candidate, "coordinate-forcing", {"pair": (p, q)})
        forcing += 1
        if p != q:
            k = first_diff_ge(p, q, 0)
            if k is None:
                k = first_diff_le(p, q, -1)
            if system.dist(p.shift(k), q.shift(k)) != 1:
                return CertReport(False, candidate, "coordinate-forcing", {"pair": (p, q)})
            escapes += 1
    return CertReport(
        True,
        candidate,
        "coordinate-forcing",
        {"forcing_checks": forcing, "escape_checks": escapes},
    )


def alpha_certify_toral(candidate, grid: int = 16, horizon: int = 64) -> CertReport:
    """Certify an expansivity constant for the toral automorphism.

    While consecutive distances stay <= alpha <= 1/6 the canonical
    difference lift evolves linearly (|Av| <= 3 alpha <= 1/2, so no
    mod-1 wrap), hence equals A^n v.  Splitting v along the
    eigendirections, max(|vs|, |vu|) >= |v|/2, and the dominant
    component grows by lambda per step (forward if unstable, backward if
    stable) while the other is bounded by K alpha lambda^-n.  The sweep
    covers [-alpha, alpha]^2 by grid cells; for each cell a lower bound
    mu on max(|vs|, |vu|) yields an explicit horizon n with
    lambda^n mu - K alpha lambda^-n > alpha, contradicting closeness.
    Cells whose closure meets the origin are covered by the same
    argument applied pointwise (no uniform horizon is needed), checked
    here on exact tiny samples.
    """
    candidate = Fraction(candidate)
    if not 0 < candidate <= Fraction(1, 6):
        raise ValueError("toral candidate must lie in (0, 1/6]")
    if grid < 2 or grid % 2:
        raise ValueError("grid must be a positive even number")

    lam_pows = [QuadraticNumber(1)]
    for _ in range(horizon):
        lam_pows.append(lam_pows[-1] * LAMBDA)
    k_alpha = K_PROJ * candidate

    def interval_min_abs(lo, hi):
        if lo <= 0 <= hi:
            return Fraction(0)
        return min(abs(lo), abs(hi))

    corners = [-candidate + Fraction(2 * candidate * i, grid) for i in range(grid + 1)]
    max_horizon = 0
    cells = origin_cells = 0
    for i in range(grid):
        for j in range(grid):
            x_lo, x_hi = corners[i], corners[i + 1]
            y_lo, y_hi = corners[j], corners[j + 1]
            if x_lo <= 0 <= x_hi and y_lo <= 0 <= y_hi:
                origin_cells += 1
                continue
            mu = max(interval_min_abs(x_lo, x_hi), interval_min_abs(y_lo, y_hi)) / 2
            assert mu > 0
            for n in range(horizon + 1):
                if lam_pows[n] * mu - k_alpha / lam_pows[n] > candidate:
                    break
            else:
                return CertReport(
                    False,
                    candidate,
                    "grid-sweep",
                    {"cell": ((x_lo, x_hi), (y_lo, y_hi)), "horizon": horizon},
                )
            max_horizon = max(max_horizon, n)
            cells += 1

    # the per-vector escape argument on exact tiny samples (origin cells)
    splitter = ToralSystem()
    tiny_checks = 0
    for t in (8, 13, 21):
        v = (candidate / 2**t, -candidate / 3**t)
        vs, vu = splitter.split(v)
        mu = max(norm_inf(vs), norm_inf(vu))
        assert mu * 2 >= norm_inf(v)
        n, grown = 0, mu
        while grown - k_alpha / lam_pows[min(n, horizon)] <= candidate:
            n += 1
            grown = grown * LAMBDA
            if n > 400:
                return CertReport(False, candidate, "grid-sweep", {"tiny_sample": v})
        tiny_checks += 1

    return CertReport(
        True,
        candidate,
        "grid-sweep",
        {
            "grid": grid,
            "cells_certified": cells,
            "origin_cells": origin_cells,
            "max_horizon": max_horizon,
            "tiny_samples": tiny_checks,
        },
    )


def auto_alpha_toral(start=Fraction(1, 8), grid: int = 16, horizon: int = 64):
    """Largest certified dyadic fraction <= start (halving on failure)."""
    candidate = Fraction(start)
    for _ in range(12):
        report = alpha_certify_toral(candidate, grid, horizon)
        if report.ok:
            return candidate, report
        candidate /= 2
    raise RuntimeError("could not certify any expansivity constant")


# ---------------------------------------------------------------------------
# certified constants


@dataclass(frozen=True)
class CertifiedConstants:
    system_name: str
    epsilon: Fraction
    alpha: Fraction
    delta: object
    n_window: int
    rho: object
    provenance: tuple = ()

    def __post_init__(self):
        if not 0 < self.rho <= self.delta <= self.alpha:
            raise ValueError("constants must satisfy 0 < rho <= delta <= alpha")
        if self.n_window < 0:
            raise ValueError("window radius must be non-negative")

    def to_json_dict(self) -> dict:
        def entry(v):
            return {"exact": exact_str(v), "approx": _as_float(v)}

        return {
            "system": self.system_name,
            "epsilon": entry(self.epsilon),
            "alpha": entry(self.alpha),
            "delta": entry(self.delta),
            "N": self.n_window,
            "rho": entry(self.rho),
            "provenance": {k: v for k, v in self.provenance},
        }


def derive_constants(system, epsilon, grid: int = 16, horizon: int = 64) -> CertifiedConstants:
    """The full certified chain for a system at accuracy epsilon."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    if isinstance(system, ShiftSystem):
        report = alpha_certify_shift(system)
        if not report.ok:
            raise RuntimeError("expansivity certification failed for the shift")
        alpha = report.value
        one_jump = system.one_jump_threshold
        alpha_note = (
            f"{report.method}: d<=1/2 iff coordinate-0 agreement; "
            f"{report.details['forcing_checks']} forcing and "
            f"{report.details['escape_checks']} escape checks"
        )
        n_note = "smallest N with 2^-(N+1) < delta"
        rho_note = "delta * 2^-(2N+1): binary drift over segments of length 2N+2"
    else:
        alpha, report = auto_alpha_toral(Fraction(system.alpha), grid, horizon)
        one_jump = QuadraticNumber.coerce(alpha) / K_PROJ
        alpha_note = (
            f"{report.method}: grid {report.details['grid']}, "
            f"{report.details['cells_certified']} cells certified, "
            f"max horizon {report.details['max_horizon']}"
        )
        if alpha != system.alpha:
            alpha_note += f" (lowered from {system.alpha})"
        n_note = "smallest N with C*alpha*lambda^-N < delta, C = 2*lambda/sqrt5"
        rho_note = "delta * 2/(3^(2N+2)-1): ternary drift over segments of length 2N+2"

    candidates = [
        ("semi-expansivity at epsilon", delta_semiexp(system, epsilon, alpha)),
        ("one-jump admission (alpha/K)", one_jump),
        ("semi-expansivity at alpha/2", delta_semiexp(system, alpha / 2, alpha)),
        ("alpha", alpha),
    ]
    delta = min(v for _, v in candidates)
    winners = [name for name, v in candidates if v == delta]
    n = uniform_n(system, delta, alpha)
    rho = rho_for(system, delta, n)

    provenance = (
        ("epsilon", "requested accuracy"),
        ("alpha", alpha_note),
        (
            "delta",
            "min of {"
            + ", ".join(f"{name}: {exact_str(v)}" for name, v in candidates)
            + "}; achieved by " + winners[0],
        ),
        ("N", n_note),
        ("rho", rho_note),
        ("alpha_certification", repr(report.details)),
    )
    return CertifiedConstants(
        system_name=system.name,
        epsilon=epsilon,
        alpha=alpha,
        delta=delta,
        n_window=n,
        rho=rho,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# the half-alpha sharpening check


@dataclass(frozen=True)
class SharpenResult:
    ok: bool
    sup: object
    limit: object
    violation_index: object = None

    def __bool__(self):
        return self.ok


def sharpen_check(system, constants: CertifiedConstants, xi, eta, window) -> SharpenResult:
    """Verify that xi stays within alpha/2 of eta over the window.

    This is the improvement step for pseudo-orbit pairs: if both are
    delta-pseudo-orbits with delta admissible for alpha/2 and xi
    alpha-shadows eta, it must in fact alpha/2-shadow it.  The check
    measures the window sup exactly and reports the first violating
    index on failure.
    """
    admissible = delta_semiexp(system, Fraction(constants.alpha, 2), constants.alpha)
    for po in (xi, eta):
        bad = [p for p, s in po.jumps if s >= admissible]
        if bad:
            raise ValueError(f"jump at {bad[0]} too large for the alpha/2 upgrade")
    limit = Fraction(constants.alpha, 2)
    sup = sup_distance(xi, eta, window)
    if sup < limit:
        return SharpenResult(True, sup, limit)
    violation = next(
        n for n in window.indices() if system.dist(xi.entry(n), eta.entry(n)) >= limit
    )
    return SharpenResult(False, sup, limit, violation)


# ---------------------------------------------------------------------------
# semi-expansivity falsifier


@dataclass(frozen=True)
class FalsifyWitness:
    trial: int
    index: int
    closeness: object
    xi_text: str
    eta_text: str


@dataclass(frozen=True)
class FalsifyOutcome:
    witness: object
    trials: int
    admissible: int
    window: int
    samples: tuple

    @property
    def found(self) -> bool:
        return self.witness is not None


def _first_power_below(delta) -> int:
    """Smallest m with 2^-m < delta."""
    m = 1
    while Fraction(1, 2**m) >= delta:
        m += 1
    return m


def _falsify_shift_trial(system, rng, t, delta, window):
    """Build one candidate entry pair (window lists) for the shift.

    Five-trial rotation: two flip-defect pseudo-orbits (admissible, tiny
    closeness), one orbit of a point flipped just outside the window
    (agrees on the whole window but fails the right tail certificate),
    one unrelated orbit pair, and one steered drift family -- a fresh
    far-coordinate flip per entry, so every defect has size 2^-m < delta
    while the pointwise distance stays 2^-m across the window.  The drift
    starts inside the window, keeping the left tail a true orbit match.
    """
    w = window
    x = system.random_point(rng)
    xs = [system.iterate(x, n) for n in range(-w, w + 1)]
    kind = t % 5
    if kind == 4:
        m = _first_power_below(delta) + rng.randint(0, 1)
        n0 = -w + 1 + rng.randint(0, 2)
        flip = {}
        es = []
        for n, base in zip(range(-w, w + 1), xs):
            if n < n0:
                es.append(base)
                continue
            old = base.coord(-m)
            new = flip.setdefault(
                old, rng.choice([c for c in system.alphabet if c != old])
            )
            es.append(base.with_coord(-m, new))
    elif kind == 3:
        y = system.random_point(rng)
        es = [system.iterate(y, n) for n in range(-w, w + 1)]
    elif kind == 2:
        c = w + rng.randint(1, 3)
        old = x.coord(c)
        new = rng.choice([ch for ch in system.alphabet if ch != old])
        y = x.with_coord(c, new)
        es = [system.iterate(y, n) for n in range(-w, w + 1)]
    else:
        m = _first_power_below(delta)
        flips = []
        for p in sorted(rng.sample(range(-w + 1, w + 1), rng.randint(1, 3))):
            c = p - (m + rng.randint(0, 4))
            old = x.coord(c)
            new = rng.choice([ch for ch in system.alphabet if ch != old])
            flips.append((p, c, new))
        es = []
        for n, base in zip(range(-w, w + 1), xs):
            q = base
            for p, c, new in flips:
                if n >= p:
                    q = q.with_coord(c - n, new)
            es.append(q)
    return xs, es


def _check_entry_pair(system, xs, es, delta, alpha, window):
    """Exact admissibility of an explicit entry pair over the window.

    Admissible means: pointwise distance <= alpha on the window, every
    defect d(T eta_n, eta_{n+1}) < delta, and both edge pairs continue as
    alpha-close orbits outside the window (tail evidence).  Returns
    (closeness, worst index, admissible).
    """
    closeness = system.zero_dist
    worst = -window
    for i, (p, q) in enumerate(zip(xs, es)):
        d = system.dist(p, q)
        if d > closeness:
            closeness, worst = d, i - window
    ok = closeness <= alpha
    if ok:
        for side, edge in (("left", 0), ("right", len(xs) - 1)):
            good, bound, _method = system.tail_evidence(xs[edge], es[edge], side)
            if not good or bound > alpha:
                ok = False
                break
    if ok:
        for i in range(1, len(es)):
            if system.dist(system.apply(es[i - 1]), es[i]) >= delta:
                ok = False
                break
    return closeness, worst, ok


def _toral_family_scales(delta, alpha):
    """Per-run jump scales for the toral families (hoisted off the trial loop)."""
    delta = QuadraticNumber.coerce(delta)
    steered = min(delta * Fraction(3, 4), QuadraticNumber.coerce(alpha) * Fraction(9, 10) / PHI) / PHI
    return {
        "steered": steered,
        "jump_base": delta / PHI,
        "unstable": delta / (2 * PHI),
    }


def _toral_lift_family(system, rng, t, scales, window):
    """Difference lifts v_n (eta_n = xi_n + v_n) for one toral trial.

    Five-trial rotation: two random stable-jump bursts (admissible, tiny
    closeness), one mixed constant translation (rejected: stable residue
    on the left tail), one pure-unstable constant translation (rejected:
    unstable residue on the right tail), and one steered stable burst --
    consecutive stable-direction jumps whose contributions pile up into a
    pointwise closeness of about phi times the jump size.
    """
    w = window
    kind = t % 5
    if kind == 2:
        u1 = Fraction(rng.randint(1, 15), 16 * 2 ** rng.randint(6, 24))
        sign = 1 if rng.random() < 0.5 else -1
        u2 = Fraction(sign * rng.randint(1, 15), 16 * 2 ** rng.randint(6, 24))
        v = (QuadraticNumber.coerce(u1), QuadraticNumber.coerce(u2))
        return [v] * (2 * w + 1)
    if kind == 3:
        cu = scales["unstable"]
        v = (cu, cu * PHI_INV)
        return [v] * (2 * w + 1)
    if kind == 4:
        burst = rng.randint(2, 5)
        n0 = rng.randint(-w + 1, w - burst + 1)
        jumps = {n: scales["steered"] for n in range(n0, n0 + burst)}
    else:
        base = scales["jump_base"]
        jumps = {
            p: base * Fraction(rng.randint(1, 7), 8)
            for p in rng.sample(range(-w + 1, w + 1), rng.randint(1, 3))
        }
    vs = []
    c = system.zero_dist
    for n in range(-w, w + 1):
        c = c * LAMBDA_INV
        tn = jumps.get(n)
        if tn is not None:
            c = c + tn
        vs.append((c, -(c * PHI)))
    return vs


def _check_lift_family(system, vs, delta, alpha, window):
    """Exact admissibility of a toral pair given as difference lifts.

    Because T is linear, d(T eta_n, eta_{n+1}) equals the wrap norm of
    A v_n - v_{n+1} and d(xi_n, eta_n) the wrap norm of v_n, so the whole
    check runs on the lifts.  Tail evidence at the edges reduces to the
    split: the left tail needs a vanishing stable part, the right a
    vanishing unstable part.
    """
    closeness = system.zero_dist
    worst = -window
    for i, v in enumerate(vs):
        d = system.wrap_norm(v)
        if d > closeness:
            closeness, worst = d, i - window
    ok = closeness <= alpha
    if ok:
        stable, _unstable = system.split(vs[0])
        if norm_inf(stable) != 0:
            ok = False
    if ok:
        _stable, unstable = system.split(vs[-1])
        if norm_inf(unstable) != 0:
            ok = False
    if ok:
        for i in range(1, len(vs)):
            (a, b), (a2, b2) = vs[i - 1], vs[i]
            if system.wrap_norm((a + a + b - a2, a + b - b2)) >= delta:
                ok = False
                break
    return closeness, worst, ok


def semiexp_falsify(system, delta, epsilon, trials: int, seed: int, alpha=None, window: int = 8) -> FalsifyOutcome:
    """Search for pseudo-orbit pairs violating the semi-expansivity claim.

    Each trial builds a pair of delta-pseudo-orbits over [-window,
    window] and checks admissibility exactly: all defects < delta,
    pointwise distance within alpha across the window, and both edge
    pairs certified to continue as alpha-close orbits outside the window
    (without the tail certificates, pairs that merely agree on the window
    would fake the bi-infinite hypothesis).  A witness is an admissible
    pair with closeness >= epsilon.  Every fifth trial uses a steered
    family that maximizes closeness per defect size; the rest alternate
    admissible random families with families built to exercise each
    rejection path.  With certified constants no witness should exist;
    with delta inflated to alpha one appears within a handful of trials.
    """
    alpha = system.alpha if alpha is None else alpha
    rng = random.Random(f"falsify:{system.name}:{seed}")
    samples = []
    admissible_count = 0
    shift_like = isinstance(system, ShiftSystem)
    if not shift_like:
        scales = _toral_family_scales(delta, alpha)

    for t in range(trials):
        if shift_like:
            xs, es = _falsify_shift_trial(system, rng, t, delta, window)
            closeness, worst, admissible = _check_entry_pair(
                system, xs, es, delta, alpha, window
            )
            anchor = xs[window]
        else:
            anchor = system.random_point(rng)
            vs = _toral_lift_family(system, rng, t, scales, window)
            closeness, worst, admissible = _check_lift_family(
                system, vs, delta, alpha, window
            )
        if admissible:
            admissible_count += 1
            samples.append((t, float(closeness), True))
            if closeness >= epsilon:
                from .orbit import PseudoOrbit

                if not shift_like:
                    xi_entries = [
                        system.iterate(anchor, n) for n in range(-window, window + 1)
                    ]
                    es = [p.translate(v) for p, v in zip(xi_entries, vs)]
                xi = PseudoOrbit(system, ((anchor, 1),), 0)
                eta = PseudoOrbit(system, tuple((p, 1) for p in es), -window)
                witness = FalsifyWitness(
                    t, worst, closeness, xi.serialize(), eta.serialize()
                )
                return FalsifyOutcome(witness, t + 1, admissible_count, window, tuple(samples))
        else:
            samples.append((t, float(closeness), False))
    return FalsifyOutcome(None, trials, admissible_count, window, tuple(samples))
