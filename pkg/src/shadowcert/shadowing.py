"""Constructive shadowing of finite-jump pseudo-orbits.

Induction on the number of jumps.  With constants (alpha, delta, N, rho)
certified, a rho-pseudo-orbit xi with k jumps is shadowed as follows:

  k = 0: the orbit of entry(0) shadows exactly.
  k = 1: reindex the jump to step 0 and glue the backward orbit of the
         pre-jump point to the forward orbit of the post-jump point
         (the system's one-jump oracle).
  k >= 2: reindex so the LAST jump sits at step 2N+1.  The leading
         segment [0, 2N+1] stays within delta of the orbit of entry(0)
         (drift bound, re-verified).  Recurse on the past spliced with
         that orbit (strictly fewer jumps) to get y; one-jump glue the
         orbit spliced with the future to get z.  Both shadow a common
         middle within alpha/2 (re-verified), so d(T^N y, T^N z) < delta
         by uniform expansivity (re-verified), and one final one-jump
         glue at step N produces the shadow.

Every certificate records the exact window sup, half-line tail evidence
beyond the window, and one trace record per glue event; all quantities
are re-verifiable from the certificate alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .constants import CertifiedConstants, exact_str, sharpen_check, uniform_n
from .orbit import (
    PseudoOrbit,
    Window,
    distance_profile,
    pure_orbit,
    replace_segment_with_orbit,
    splice,
    sup_distance,
)
from .quadratic import LAMBDA, QuadraticNumber
from .shiftspace import ShiftPoint, ShiftSystem
from .systems import TailEvidence, certify_tail_equal_orbit
from .torus import C_PROJ


class ShadowingError(Exception):
    """Base class for shadowing failures."""


class JumpSizeError(ShadowingError):
    """The pseudo-orbit has defects too large for the certified rho."""


class ConstantsViolation(ShadowingError):
    """A re-verified inequality from the constant chain failed."""

    def __init__(self, condition: str, index, value, limit):
        self.condition = condition
        self.index = index
        self.value = value
        self.limit = limit
        super().__init__(
            f"{condition} violated at {index}: {exact_str(value)} !< {exact_str(limit)}"
        )


@dataclass(frozen=True)
class GlueStep:
    """One glue event: defect sizes, re-verified sups, and midpoints."""

    kind: str  # 'one-jump' or 'glue'
    reindex_shift: int
    jumps_before: int
    jumps_past: int
    jump_size: object
    delta_used: object
    alpha_used: Fraction
    n_window: int
    seg_max: object = None
    sharpen_past: object = None
    sharpen_future: object = None
    sharpen_glued: object = None
    mid_gap: object = None
    mid_past: object = None
    mid_future: object = None
    intermediates: tuple = ()


@dataclass(frozen=True)
class ShadowCertificate:
    system: object
    method: str  # 'inductive' or 'direct'
    target: PseudoOrbit
    shadow: object
    epsilon: object
    window: Window
    sup_error: object
    tail_left: TailEvidence
    tail_right: TailEvidence
    trace: tuple = ()
    profile: tuple = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    problems: tuple = ()

    def __bool__(self):
        return self.ok


def default_margin(system, constants: CertifiedConstants) -> int:
    return uniform_n(system, constants.epsilon, constants.alpha)


def certification_window(xi: PseudoOrbit, n_window: int, margin: int) -> Window:
    pad = 2 * n_window + 2 + margin
    positions = xi.jump_positions()
    if not positions:
        return Window(-pad, pad)
    return Window(positions[0] - pad, positions[-1] + pad)


def _certify(system, xi, shadow, epsilon, n_window, margin, method, trace,
             with_profile=False, details=None) -> ShadowCertificate:
    window = certification_window(xi, n_window, margin)
    orbit_w = pure_orbit(system, shadow)
    sup = sup_distance(orbit_w, xi, window)
    if not sup < epsilon:
        raise ConstantsViolation("window-sup", window, sup, epsilon)
    tails = {}
    for side, edge in (("left", window.lo), ("right", window.hi)):
        ev = certify_tail_equal_orbit(system, orbit_w, xi, side, edge)
        if not ev.ok:
            raise ConstantsViolation(f"tail-{side}", edge, ev.method, epsilon)
        if not ev.bound < epsilon:
            raise ConstantsViolation(f"tail-{side}", edge, ev.bound, epsilon)
        tails[side] = ev
    profile = tuple(distance_profile(orbit_w, xi, window)) if with_profile else None
    return ShadowCertificate(
        system=system,
        method=method,
        target=xi,
        shadow=shadow,
        epsilon=epsilon,
        window=window,
        sup_error=sup,
        tail_left=tails["left"],
        tail_right=tails["right"],
        trace=trace,
        profile=profile,
        details=details or {},
    )


# ---------------------------------------------------------------------------
# the inductive construction


def _glue(system, c: CertifiedConstants, xi: PseudoOrbit, record: bool):
    jumps = xi.jumps
    k = len(jumps)
    if k == 0:
        return xi.entry(0), ()
    n = c.n_window

    if k == 1:
        pos, size = jumps[0]
        xr = xi.shift_index(pos)
        x0 = xr.entry(0)
        y0 = system.apply(xr.entry(-1))
        if not size < c.delta:
            raise ConstantsViolation("one-jump-admission", pos, size, c.delta)
        glued = system.one_jump_shadow(x0, y0)
        level = Window(-(2 * n + 1), 2 * n + 1)
        level_sup = sup_distance(pure_orbit(system, glued), xr, level)
        if not level_sup < c.alpha:
            raise ConstantsViolation("one-jump-alpha", pos, level_sup, c.alpha)
        step = GlueStep(
            kind="one-jump",
            reindex_shift=pos,
            jumps_before=1,
            jumps_past=0,
            jump_size=size,
            delta_used=c.delta,
            alpha_used=c.alpha,
            n_window=n,
            sharpen_glued=level_sup,
            intermediates=(("target", xr.serialize()),) if record else (),
        )
        return system.iterate(glued, -pos), (step,)

    # k >= 2: park the last jump at step 2N+1
    last_pos = jumps[-1][0]
    shift = last_pos - (2 * n + 1)
    xr = xi.shift_index(shift)
    x0 = xr.entry(0)
    head = Window(0, 2 * n + 1)

    # the leading segment stays delta-close to the orbit of its start
    seg_max = sup_distance(pure_orbit(system, x0), xr, head)
    if not seg_max < c.delta:
        raise ConstantsViolation("segment-delta", shift, seg_max, c.delta)

    # past: recurse on strictly fewer jumps
    eta = splice(xr, pure_orbit(system, x0), 0)
    if not eta.jump_count < xr.jump_count:
        raise ShadowingError("splice failed to reduce the jump count")
    y, past_trace = _glue(system, c, eta, record)
    mid_window = Window(0, 2 * n)
    sh_past = sharpen_check(system, c, pure_orbit(system, y), eta, mid_window)
    if not sh_past.ok:
        raise ConstantsViolation(
            "sharpen-past", sh_past.violation_index, sh_past.sup, sh_past.limit
        )

    # future: at most one jump remains, glued directly
    zeta = splice(pure_orbit(system, x0), xr, 2 * n + 1)
    if zeta.jump_count == 0:
        z = x0
        future_size = system.zero_dist
    else:
        (zpos, future_size), = zeta.jumps
        assert zpos == 2 * n + 1
        if not future_size < c.delta:
            raise ConstantsViolation("one-jump-admission", zpos, future_size, c.delta)
        zx = zeta.entry(zpos)
        zy = system.apply(zeta.entry(zpos - 1))
        z = system.iterate(system.one_jump_shadow(zx, zy), -zpos)
    sh_future = sharpen_check(system, c, pure_orbit(system, z), zeta, mid_window)
    if not sh_future.ok:
        raise ConstantsViolation(
            "sharpen-future", sh_future.violation_index, sh_future.sup, sh_future.limit
        )

    # uniform expansivity pays out at the midpoint
    hyp_sup = system.orbit_pair_sup(y, z, 2 * n)
    if not hyp_sup < c.alpha:
        raise ConstantsViolation("uniform-hypothesis", None, hyp_sup, c.alpha)
    mid_past = system.iterate(y, n)
    mid_future = system.iterate(z, n)
    mid_gap = system.dist(mid_past, mid_future)
    if not mid_gap < c.delta:
        raise ConstantsViolation("mid-gap", n, mid_gap, c.delta)

    # final glue at step N
    if mid_gap == 0:
        glued = z
    else:
        glued = system.iterate(system.one_jump_shadow(mid_future, mid_past), -n)
    level_sup = sup_distance(pure_orbit(system, glued), xr, head)
    if not level_sup < c.alpha:
        raise ConstantsViolation("level-alpha", shift, level_sup, c.alpha)

    intermediates = ()
    if record:
        tau = splice(pure_orbit(system, y), pure_orbit(system, z), n)
        intermediates = (
            ("replaced", replace_segment_with_orbit(xr, 0, 2 * n + 1).serialize()),
            ("past", eta.serialize()),
            ("future", zeta.serialize()),
            ("glue", tau.serialize()),
        )
    step = GlueStep(
        kind="glue",
        reindex_shift=shift,
        jumps_before=xr.jump_count,
        jumps_past=eta.jump_count,
        jump_size=future_size,
        delta_used=c.delta,
        alpha_used=c.alpha,
        n_window=n,
        seg_max=seg_max,
        sharpen_past=sh_past.sup,
        sharpen_future=sh_future.sup,
        sharpen_glued=level_sup,
        mid_gap=mid_gap,
        mid_past=mid_past,
        mid_future=mid_future,
        intermediates=intermediates,
    )
    return system.iterate(glued, -shift), past_trace + (step,)


def inductive_shadow(system, constants: CertifiedConstants, xi: PseudoOrbit,
                     margin=None, with_profile=False, record_intermediates=False) -> ShadowCertificate:
    """Shadow a rho-pseudo-orbit by the inductive gluing construction."""
    oversized = [(p, s) for p, s in xi.jumps if not s < constants.rho]
    if oversized:
        p, s = oversized[0]
        raise JumpSizeError(
            f"jump at {p} has size {exact_str(s)}, not below rho = {exact_str(constants.rho)}"
        )
    shadow, trace = _glue(system, constants, xi, record_intermediates)
    if len(trace) > xi.jump_count:
        raise ShadowingError("trace exceeded the jump count")
    margin = default_margin(system, constants) if margin is None else margin
    return _certify(
        system, xi, shadow, constants.epsilon, constants.n_window, margin,
        "inductive", trace, with_profile,
    )


# ---------------------------------------------------------------------------
# direct per-system oracles


def direct_shadow_shift(system, constants: CertifiedConstants, xi: PseudoOrbit,
                        margin=None, with_profile=False) -> ShadowCertificate:
    """Diagonal shadow for the shift: coordinate k of the shadow is
    coordinate 0 of entry k.  With all jumps < 2^-m the error profile is
    d(T^n w, entry n) <= 2^-(m+1-dist to nearest jump), at most 2^-(m+1).
    """
    if not isinstance(system, ShiftSystem):
        raise TypeError("direct_shadow_shift needs a shift system")
    jumps = xi.jumps
    if not jumps:
        shadow = xi.entry(0)
        bound = system.zero_dist
    else:
        m = min(s.denominator.bit_length() - 1 for _, s in jumps) - 1
        if m < 1:
            raise JumpSizeError("jumps must be smaller than 1/2 for the diagonal oracle")
        bound = Fraction(1, 2 ** (m + 1))
        j_first, j_last = jumps[0][0], jumps[-1][0]
        left = system.iterate(xi.blocks[0][0], -xi._starts[0])
        right = system.iterate(xi.blocks[-1][0], -xi._starts[-1])
        lo = min(left.left_start, j_first)
        hi = max(right.right_start, j_last)
        core = "".join(xi.entry(k).coord(0) for k in range(lo, hi))
        shadow = ShiftPoint.from_coords(core, lo, left, right)
    margin = default_margin(system, constants) if margin is None else margin
    cert = _certify(
        system, xi, shadow, constants.epsilon, constants.n_window, margin,
        "direct", (), with_profile, details={"profile_bound": bound},
    )
    if not cert.sup_error <= bound:
        raise ConstantsViolation("direct-profile", None, cert.sup_error, bound)
    return cert


def direct_shadow_toral(system, constants: CertifiedConstants, xi: PseudoOrbit,
                        margin=None, with_profile=False) -> ShadowCertificate:
    """Bounded solution of the defect recurrence for the torus.

    With jump vector j_p (canonical lift of entry(p) - A entry(p-1)) the
    deviation d_n = A^n w - entry(n) satisfies d_n = A d_{n-1} - j_n; the
    unique bounded solution has eigencoefficients u_0 = sum_{p>0}
    lambda^-p c_u(j_p) and s_0 = -sum_{p<=0} lambda^p c_s(j_p), giving
    w = entry(0) + d_0 with max deviation <= C rho lambda/(lambda-1).
    """
    from .torus import ToralSystem

    if not isinstance(system, ToralSystem):
        raise TypeError("direct_shadow_toral needs the toral system")
    jumps = xi.jumps
    if not jumps:
        shadow = xi.entry(0)
        bound = system.zero_dist
    else:
        u0 = QuadraticNumber(0)
        s0 = QuadraticNumber(0)
        max_size = system.zero_dist
        for p, size in jumps:
            vec = system.lift_diff(xi.entry(p), system.apply(xi.entry(p - 1)))
            vs, vu = system.split(vec)
            c_u = vu[0]  # e_u = (1, .), so the first component is the coefficient
            c_s = vs[0]  # e_s = (1, .)
            if p > 0:
                u0 = u0 + c_u * LAMBDA ** (-p)
            else:
                s0 = s0 - c_s * LAMBDA**p
            if size > max_size:
                max_size = size
        from .quadratic import PHI, PHI_INV

        d0 = (u0 + s0, u0 * PHI_INV - s0 * PHI)
        shadow = xi.entry(0).translate(d0)
        bound = C_PROJ * LAMBDA / (LAMBDA - 1) * max_size
        if not bound < system.linear_regime:
            raise ConstantsViolation("linear-regime", None, bound, system.linear_regime)
    margin = default_margin(system, constants) if margin is None else margin
    cert = _certify(
        system, xi, shadow, constants.epsilon, constants.n_window, margin,
        "direct", (), with_profile, details={"profile_bound": bound},
    )
    if not cert.sup_error <= bound:
        raise ConstantsViolation("direct-profile", None, cert.sup_error, bound)
    return cert


def direct_shadow(system, constants, xi, margin=None, with_profile=False):
    if isinstance(system, ShiftSystem):
        return direct_shadow_shift(system, constants, xi, margin, with_profile)
    return direct_shadow_toral(system, constants, xi, margin, with_profile)


# ---------------------------------------------------------------------------
# certificate verification


def verify_certificate(cert: ShadowCertificate) -> VerifyResult:
    """Re-derive every claim in a certificate from scratch.

    Returns ok=False with the list of discrepancies; never raises for a
    merely-wrong certificate.
    """
    problems = []
    sys_ = cert.system
    orbit_w = pure_orbit(sys_, cert.shadow)
    positions = cert.target.jump_positions()
    if positions and not (cert.window.lo < positions[0] and positions[-1] < cert.window.hi):
        problems.append("window does not enclose all jumps")

    sup = sup_distance(orbit_w, cert.target, cert.window)
    if sup != cert.sup_error:
        problems.append(
            f"stored window sup {exact_str(cert.sup_error)} != recomputed {exact_str(sup)}"
        )
    if not sup < cert.epsilon:
        problems.append(f"window sup {exact_str(sup)} not below epsilon {exact_str(cert.epsilon)}")

    for stored in (cert.tail_left, cert.tail_right):
        ev = certify_tail_equal_orbit(sys_, orbit_w, cert.target, stored.side, stored.edge)
        if not ev.ok:
            problems.append(f"{stored.side} tail: {ev.method}")
            continue
        if not ev.bound < cert.epsilon:
            problems.append(f"{stored.side} tail bound {exact_str(ev.bound)} not below epsilon")
        if ev.bound != stored.bound or ev.method != stored.method:
            problems.append(f"{stored.side} tail evidence does not match the stored one")
    if cert.tail_left.edge != cert.window.lo or cert.tail_right.edge != cert.window.hi:
        problems.append("tail edges do not meet the window")

    if len(cert.trace) > cert.target.jump_count:
        problems.append("trace longer than the jump count")
    for i, step in enumerate(cert.trace):
        half_alpha = Fraction(step.alpha_used, 2)
        if step.kind == "glue":
            if not step.jumps_past < step.jumps_before:
                problems.append(f"trace[{i}]: past target does not lose a jump")
            gap = sys_.dist(step.mid_past, step.mid_future)
            if gap != step.mid_gap:
                problems.append(f"trace[{i}]: stored mid gap differs from the midpoints")
            if not gap < step.delta_used:
                problems.append(f"trace[{i}]: mid gap {exact_str(gap)} not below delta")
            for name in ("sharpen_past", "sharpen_future"):
                if not getattr(step, name) < half_alpha:
                    problems.append(f"trace[{i}]: {name} not below alpha/2")
            if not step.seg_max < step.delta_used:
                problems.append(f"trace[{i}]: segment drift not below delta")
        if not step.jump_size < step.delta_used:
            problems.append(f"trace[{i}]: glued jump not below delta")
        if not step.sharpen_glued < step.alpha_used:
            problems.append(f"trace[{i}]: glued level sup not below alpha")

    if cert.profile is not None:
        fresh = tuple(distance_profile(orbit_w, cert.target, cert.window))
        if fresh != cert.profile:
            problems.append("stored error profile does not match recomputation")

    return VerifyResult(not problems, tuple(problems))


@dataclass(frozen=True)
class CrossReport:
    gap: object
    err_inductive: object
    err_direct: object
    ok: bool


def cross_validate(cert_ind: ShadowCertificate, cert_dir: ShadowCertificate) -> CrossReport:
    """Exact triangle check between the two shadows at index 0."""
    sys_ = cert_ind.system
    x0 = cert_ind.target.entry(0)
    e1 = sys_.dist(cert_ind.shadow, x0)
    e2 = sys_.dist(cert_dir.shadow, x0)
    gap = sys_.dist(cert_ind.shadow, cert_dir.shadow)
    return CrossReport(gap, e1, e2, gap <= e1 + e2)
