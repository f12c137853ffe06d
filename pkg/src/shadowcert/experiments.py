"""Experiment driver: seeded campaigns, artifacts, and audits.

Campaigns are configured by an ExperimentConfig (defaults per system,
optionally overlaid from a plain key=value config file, with explicit
flags winning).  All randomness flows through per-trial seeds of the
form "<campaign>:<system>:<seed>:<trial>", so artifacts are reproducible
byte for byte; timing is never written into artifacts.

Artifacts per output directory: trials.csv (exact values plus float
approximations), constants.json (the certified chain with provenance),
report.txt (the run summary), witness.txt (falsifier finds, when any),
error_table.csv (per-index profiles, on request), and the figures
rendered from the same data (PNG bytes are excluded from the
reproducibility claim).
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .constants import (
    CertifiedConstants,
    FalsifyOutcome,
    derive_constants,
    exact_str,
    semiexp_falsify,
)
from .orbit import PseudoOrbit, pure_orbit
from .quadratic import PHI_INV, QuadraticNumber
from .shadowing import (
    ShadowingError,
    cross_validate,
    direct_shadow,
    inductive_shadow,
    verify_certificate,
)
from .shiftspace import ShiftSystem
from .systems import get_system


def parse_exact(text):
    """Parse an exact distance: '2^-6', '1/64', '0.125', or Q(sqrt5)
    forms like '5/256-1/128*s5'."""
    text = str(text).strip()
    if "s5" in text:
        return QuadraticNumber.parse(text)
    if text.startswith("2^"):
        return Fraction(2) ** int(text[2:])
    return Fraction(text)


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    v = str(text).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_SYSTEM_DEFAULTS = {
    # trials, max jumps per trial
    "shift": (500, 8),
    "toral": (200, 4),
}


@dataclass(frozen=True)
class ExperimentConfig:
    system: str = "shift"
    epsilon: object = Fraction(1, 64)
    trials: int = None
    jumps: int = None
    jump_scale: object = None  # None -> the derived rho
    seed: int = 0
    window_margin: int = None
    output_dir: str = None
    figures: bool = True
    emit_error_table: bool = False
    delta_override: object = None  # falsify only
    falsify_window: int = 8

    def resolved(self) -> "ExperimentConfig":
        """Fill per-system defaults for trials and jumps."""
        base = self.system.split(":", 1)[0]
        trials_default, jumps_default = _SYSTEM_DEFAULTS.get(base, (50, 4))
        out = self
        if out.trials is None:
            out = replace(out, trials=trials_default)
        if out.jumps is None:
            out = replace(out, jumps=jumps_default)
        if out.trials < 0:
            raise ValueError("trials must be >= 0")
        if out.jumps < 0:
            raise ValueError("jumps must be >= 0")
        return out


_CONFIG_PARSERS = {
    "system": str,
    "epsilon": parse_exact,
    "trials": int,
    "jumps": int,
    "jump_scale": parse_exact,
    "seed": int,
    "window_margin": int,
    "output_dir": str,
    "figures": _parse_bool,
    "emit_error_table": _parse_bool,
    "delta_override": parse_exact,
    "falsify_window": int,
}


def parse_config_text(text: str) -> dict:
    """key=value lines; '#' starts a comment; unknown keys rejected."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_PARSERS:
            raise ValueError(f"config line {lineno}: cannot parse {raw!r}")
        out[key] = _CONFIG_PARSERS[key](value.strip())
    return out


def build_config(file_text: str = None, **overrides) -> ExperimentConfig:
    """Defaults, then config file, then explicit overrides (flags win)."""
    merged = {}
    if file_text is not None:
        merged.update(parse_config_text(file_text))
    for key, value in overrides.items():
        if value is not None:
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = value
    return ExperimentConfig(**merged)


# ---------------------------------------------------------------------------
# generation


def gen_pseudo_orbit(system, constants: CertifiedConstants, k: int, rng,
                     jump_scale=None) -> PseudoOrbit:
    """A pseudo-orbit with exactly k jumps, sizes strictly below
    jump_scale (default: the certified rho), at seeded positions."""
    scale = constants.rho if jump_scale is None else jump_scale
    if not 0 < scale <= constants.rho:
        raise ValueError(
            f"jump scale must lie in (0, rho]; derived rho = {exact_str(constants.rho)}"
        )
    x = system.random_point(rng)
    blocks = [(x, 1)]
    for _ in range(k):
        gap = rng.randint(1, 2 * constants.n_window + 5)
        blocks[-1] = (blocks[-1][0], gap)
        reached = system.iterate(blocks[-1][0], gap)
        blocks.append((system.random_jump_target(reached, rng, scale), 1))
    xi = PseudoOrbit(system, tuple(blocks), rng.randint(-10, 10))
    if xi.jump_count != k:
        raise ShadowingError(f"generator produced {xi.jump_count} jumps, wanted {k}")
    return xi


# ---------------------------------------------------------------------------
# uniform-expansivity audit


@dataclass(frozen=True)
class UniformAudit:
    trials: int
    checked: int
    worst_mid: object
    limit: object
    ok: bool
    failures: tuple = ()


def uniform_audit(system, constants: CertifiedConstants, trials: int, seed: int) -> UniformAudit:
    """Sample orbit pairs alpha-close on [0, 2N] and verify that the
    midpoint distance d(T^N y, T^N z) lands strictly below delta."""
    rng = random.Random(f"uniform:{system.name}:{seed}")
    n = constants.n_window
    alpha = constants.alpha
    worst = system.zero_dist
    checked = 0
    failures = []
    for t in range(trials):
        y = system.random_point(rng)
        if isinstance(system, ShiftSystem):
            pos = -rng.randint(1, 4) if rng.random() < 0.5 else 2 * n + rng.randint(1, 4)
            old = y.coord(pos)
            z = y.with_coord(pos, rng.choice([c for c in system.alphabet if c != old]))
        else:
            q1 = Fraction(rng.randint(-8, 8), 8)
            q2 = Fraction(rng.randint(-8, 8), 8)
            if q1 == 0 and q2 == 0:
                q1 = Fraction(1)
            from .quadratic import LAMBDA, PHI

            c_u = Fraction(alpha, 2) * q1 * LAMBDA ** (-2 * n)
            c_s = Fraction(alpha, 2) * q2 * PHI_INV
            v = (c_u + c_s, c_u * PHI_INV - c_s * PHI)
            z = y.translate(v)
        if system.orbit_pair_sup(y, z, 2 * n) > alpha:
            continue  # not an instance of the hypothesis
        checked += 1
        mid = system.dist(system.iterate(y, n), system.iterate(z, n))
        if mid > worst:
            worst = mid
        if not mid < constants.delta:
            failures.append((t, mid))
    return UniformAudit(trials, checked, worst, constants.delta, not failures, tuple(failures))


# ---------------------------------------------------------------------------
# deterministic artifact rendering


def _approx(v) -> str:
    return repr(float(v))


def constants_json_text(constants: CertifiedConstants) -> str:
    return json.dumps(constants.to_json_dict(), sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


SHADOW_CSV_HEADER = (
    "trial", "k",
    "rho", "rho_float",
    "window_sup_error", "window_sup_error_float",
    "oracle_error", "oracle_error_float",
    "agreement_gap", "agreement_gap_float",
    "agreement_bound", "agreement_bound_float",
)

FALSIFY_CSV_HEADER = ("trial", "closeness_float", "admissible")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    k: int
    sup_error: object
    oracle_error: object
    gap: object
    bound: object
    verified: bool
    problems: tuple = ()

    def csv_row(self, rho):
        return (
            self.trial, self.k,
            exact_str(rho), _approx(rho),
            exact_str(self.sup_error), _approx(self.sup_error),
            exact_str(self.oracle_error), _approx(self.oracle_error),
            exact_str(self.gap), _approx(self.gap),
            exact_str(self.bound), _approx(self.bound),
        )


@dataclass(frozen=True)
class RunResult:
    ok: bool
    config: ExperimentConfig
    constants: CertifiedConstants
    report_text: str
    artifacts: tuple = ()
    records: tuple = ()
    outcome: object = None
    audit: object = None


def _write(outdir: Path, name: str, text: str, artifacts: list):
    path = outdir / name
    path.write_text(text)
    artifacts.append(str(path))


def _config_lines(config: ExperimentConfig, constants: CertifiedConstants):
    scale = constants.rho if config.jump_scale is None else config.jump_scale
    return [
        f"system: {constants.system_name}",
        f"epsilon: {exact_str(constants.epsilon)} (~{_approx(constants.epsilon)})",
        f"alpha: {exact_str(constants.alpha)} (~{_approx(constants.alpha)})",
        f"delta: {exact_str(constants.delta)} (~{_approx(constants.delta)})",
        f"N: {constants.n_window}",
        f"rho: {exact_str(constants.rho)} (~{_approx(constants.rho)})",
        f"seed: {config.seed}",
        f"jump scale: {exact_str(scale)} (~{_approx(scale)})",
    ]


def run_shadowing(config: ExperimentConfig) -> RunResult:
    """Derive constants, shadow `trials` seeded pseudo-orbits, verify and
    cross-validate every certificate, emit artifacts.  ok is False iff
    any certificate fails verification or cross-validation."""
    config = config.resolved()
    system = get_system(config.system)
    constants = derive_constants(system, config.epsilon)
    if config.jump_scale is not None and not config.jump_scale <= constants.rho:
        raise ValueError(
            f"jump_scale {exact_str(config.jump_scale)} exceeds the derived "
            f"rho = {exact_str(constants.rho)}"
        )

    records = []
    profiles = []
    failures = []
    for t in range(config.trials):
        rng = random.Random(f"shadow:{system.name}:{config.seed}:{t}")
        k = rng.randint(0, config.jumps)
        xi = gen_pseudo_orbit(system, constants, k, rng, config.jump_scale)
        problems = []
        try:
            cert = inductive_shadow(
                system, constants, xi,
                margin=config.window_margin,
                with_profile=config.emit_error_table,
            )
            ver = verify_certificate(cert)
            if not ver.ok:
                problems.extend(f"inductive: {p}" for p in ver.problems)
            dcert = direct_shadow(system, constants, xi, margin=config.window_margin)
            dver = verify_certificate(dcert)
            if not dver.ok:
                problems.extend(f"direct: {p}" for p in dver.problems)
            cross = cross_validate(cert, dcert)
            if not cross.ok:
                problems.append("agreement gap exceeds the triangle bound")
            rec = TrialRecord(
                t, k, cert.sup_error, dcert.sup_error,
                cross.gap, cross.err_inductive + cross.err_direct,
                not problems, tuple(problems),
            )
            if config.emit_error_table and cert.profile:
                profiles.append((t, cert.profile))
        except ShadowingError as exc:
            rec = TrialRecord(
                t, k, None, None, None, None, False, (f"exception: {exc}",)
            )
        records.append(rec)
        if not rec.verified:
            failures.append(rec)

    ok = not failures
    verified = sum(1 for r in records if r.verified)
    errs = [r.sup_error for r in records if r.sup_error is not None]
    gaps = [r.gap for r in records if r.gap is not None]
    max_err = max(errs, default=system.zero_dist)
    max_gap = max(gaps, default=system.zero_dist)

    lines = ["shadowing campaign", ""]
    lines += _config_lines(config, constants)
    lines += [
        f"trials: {config.trials}",
        f"jumps: up to {config.jumps} per trial",
        "",
        f"certificates verified: {verified}/{config.trials}",
        f"cross-validations passed: {verified}/{config.trials}",
        f"max window sup error: {exact_str(max_err)} (~{_approx(max_err)})",
        f"max agreement gap: {exact_str(max_gap)} (~{_approx(max_gap)})",
        f"result: {'ok' if ok else 'FAILED'}",
    ]
    for rec in failures:
        lines.append(f"trial {rec.trial} FAILED:")
        lines.extend(f"  {p}" for p in rec.problems)
    report = "\n".join(lines) + "\n"

    artifacts = []
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        rows = [r.csv_row(constants.rho) for r in records]
        _write(outdir, "trials.csv", _csv_text(SHADOW_CSV_HEADER, rows), artifacts)
        _write(outdir, "constants.json", constants_json_text(constants), artifacts)
        _write(outdir, "report.txt", report, artifacts)
        if config.emit_error_table:
            table_rows = [
                (t, n, exact_str(d), _approx(d))
                for t, profile in profiles
                for n, d in profile
            ]
            _write(
                outdir, "error_table.csv",
                _csv_text(("trial", "n", "error", "error_float"), table_rows),
                artifacts,
            )
        if config.figures:
            from . import plots

            artifacts.extend(
                plots.save_shadow_figures(records, constants, outdir)
            )
            if profiles:
                artifacts.extend(
                    plots.save_profile_figure(profiles, constants, outdir)
                )
    return RunResult(ok, config, constants, report, tuple(artifacts), tuple(records))


def run_falsify(config: ExperimentConfig) -> RunResult:
    """Hunt for semi-expansivity counterexamples and audit the uniform
    expansivity midpoint bound.  ok is False iff a witness (or audit
    failure) appears at the certified constants; an overridden delta is
    exploratory and never fails the run."""
    config = config.resolved()
    system = get_system(config.system)
    constants = derive_constants(system, config.epsilon)
    delta = constants.delta if config.delta_override is None else config.delta_override
    overridden = config.delta_override is not None

    outcome = semiexp_falsify(
        system, delta, constants.epsilon, config.trials, config.seed,
        alpha=constants.alpha, window=config.falsify_window,
    )
    audit = uniform_audit(system, constants, config.trials, config.seed)
    ok = (not outcome.found or overridden) and audit.ok

    lines = ["semi-expansivity falsification", ""]
    lines += _config_lines(config, constants)
    if overridden:
        lines.append(
            f"delta OVERRIDDEN to {exact_str(delta)} (~{_approx(delta)}); exploratory run"
        )
    lines += [
        f"trials: {config.trials}",
        f"window: [-{outcome.window}, {outcome.window}]",
        "",
        f"admissible pairs: {outcome.admissible}/{outcome.trials}",
    ]
    if config.trials == 0:
        lines.append("vacuous pass: zero trials requested")
    if outcome.found:
        w = outcome.witness
        lines += [
            f"WITNESS at trial {w.trial}: closeness {exact_str(w.closeness)} "
            f"(~{_approx(w.closeness)}) >= epsilon at index {w.index}",
        ]
    else:
        lines.append("no witness found")
    lines += [
        "",
        "uniform-expansivity audit (midpoint < delta):",
        f"  instances checked: {audit.checked}/{audit.trials}",
        f"  worst midpoint distance: {exact_str(audit.worst_mid)} (~{_approx(audit.worst_mid)})",
        f"  limit: {exact_str(audit.limit)} (~{_approx(audit.limit)})",
        f"  result: {'ok' if audit.ok else 'FAILED'}",
        "",
        f"result: {'ok' if ok else 'FAILED'}",
    ]
    report = "\n".join(lines) + "\n"

    artifacts = []
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        rows = [(t, repr(c), "yes" if adm else "no") for t, c, adm in outcome.samples]
        _write(outdir, "trials.csv", _csv_text(FALSIFY_CSV_HEADER, rows), artifacts)
        _write(outdir, "constants.json", constants_json_text(constants), artifacts)
        _write(outdir, "report.txt", report, artifacts)
        if outcome.found:
            w = outcome.witness
            witness_text = (
                f"trial {w.trial}\nindex {w.index}\n"
                f"closeness {exact_str(w.closeness)}\n"
                f"--- pseudo-orbit xi ---\n{w.xi_text}"
                f"--- pseudo-orbit eta ---\n{w.eta_text}"
            )
            _write(outdir, "witness.txt", witness_text, artifacts)
        if config.figures:
            from . import plots

            artifacts.extend(
                plots.save_falsify_figures(outcome, constants, delta, outdir)
            )
    return RunResult(
        ok, config, constants, report, tuple(artifacts),
        outcome=outcome, audit=audit,
    )


def run_constants(config: ExperimentConfig) -> RunResult:
    """Derive and report the certified constant chain."""
    config = config.resolved()
    system = get_system(config.system)
    constants = derive_constants(system, config.epsilon)
    lines = ["certified constants", ""]
    lines += _config_lines(config, constants)
    lines += ["", "provenance:"]
    for key, note in constants.provenance:
        lines.append(f"  {key}: {note}")
    report = "\n".join(lines) + "\n"

    artifacts = []
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        _write(outdir, "constants.json", constants_json_text(constants), artifacts)
        _write(outdir, "report.txt", report, artifacts)
        if config.figures:
            from . import plots

            artifacts.extend(plots.save_constants_figure(constants, outdir))
    return RunResult(True, config, constants, report, tuple(artifacts))


def run_gen(config: ExperimentConfig) -> tuple:
    """Generate one pseudo-orbit per the config; returns (xi, text)."""
    config = config.resolved()
    system = get_system(config.system)
    constants = derive_constants(system, config.epsilon)
    rng = random.Random(f"gen:{system.name}:{config.seed}")
    xi = gen_pseudo_orbit(system, constants, config.jumps, rng, config.jump_scale)
    return xi, xi.serialize()
