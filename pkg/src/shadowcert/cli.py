"""Command-line interface.

Subcommands:
  shadow     derive constants, shadow seeded pseudo-orbits, verify + cross-validate
  falsify    hunt for semi-expansivity counterexamples, audit the midpoint bound
  constants  derive and report the certified constant chain
  gen        print one seeded pseudo-orbit in the serialization format

Exit status: 0 on success, 1 when a certificate fails or a witness is
found at certified constants, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import (
    build_config,
    parse_exact,
    run_constants,
    run_falsify,
    run_gen,
    run_shadowing,
)
from .shadowing import ShadowingError


def _add_common(p: argparse.ArgumentParser, *, trials=True, jumps=True):
    p.add_argument("--system", help="shift | shift:m (2..16) | toral")
    p.add_argument("--epsilon", help="target accuracy, e.g. 2^-6 or 1/64")
    p.add_argument("--seed", type=int, help="campaign seed (default 0)")
    p.add_argument("--config", help="key=value config file; flags override it")
    if trials:
        p.add_argument("--trials", type=int, help="number of trials")
    if jumps:
        p.add_argument("--jumps", type=int, help="max jumps per pseudo-orbit")
        p.add_argument("--jump-scale", help="defect size bound (must be <= rho)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowcert",
        description="certified shadowing of finite-jump pseudo-orbits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shadow", help="run a shadowing campaign")
    _add_common(p)
    p.add_argument("--out", help="output directory for artifacts")
    p.add_argument("--window-margin", type=int, help="extra certification window padding")
    p.add_argument("--emit-error-table", action="store_true", default=None,
                   help="also write per-index error profiles")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip PNG rendering")

    p = sub.add_parser("falsify", help="search for semi-expansivity witnesses")
    _add_common(p, jumps=False)
    p.add_argument("--out", help="output directory for artifacts")
    p.add_argument("--delta", help="override the certified delta (exploratory)")
    p.add_argument("--window", type=int, help="pair window radius (default 8)")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip PNG rendering")

    p = sub.add_parser("constants", help="derive the certified constant chain")
    _add_common(p, trials=False, jumps=False)
    p.add_argument("--out", help="output directory for artifacts")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip PNG rendering")

    p = sub.add_parser("gen", help="generate one pseudo-orbit")
    _add_common(p, trials=False)
    p.add_argument("--out", help="output file (default: stdout)")
    return parser


def _config_kwargs(args) -> dict:
    out = {}
    for key, attr in (
        ("system", "system"),
        ("trials", "trials"),
        ("jumps", "jumps"),
        ("seed", "seed"),
        ("window_margin", "window_margin"),
        ("figures", "figures"),
        ("emit_error_table", "emit_error_table"),
    ):
        out[key] = getattr(args, attr, None)
    if getattr(args, "epsilon", None) is not None:
        out["epsilon"] = parse_exact(args.epsilon)
    if getattr(args, "jump_scale", None) is not None:
        out["jump_scale"] = parse_exact(args.jump_scale)
    if getattr(args, "delta", None) is not None:
        out["delta_override"] = parse_exact(args.delta)
    if getattr(args, "window", None) is not None:
        out["falsify_window"] = args.window
    if args.command != "gen" and getattr(args, "out", None) is not None:
        out["output_dir"] = args.out
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    file_text = None
    if getattr(args, "config", None):
        try:
            file_text = Path(args.config).read_text()
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
    try:
        config = build_config(file_text, **_config_kwargs(args))
    except (ValueError, ZeroDivisionError) as exc:
        parser.error(str(exc))

    try:
        if args.command == "shadow":
            result = run_shadowing(config)
        elif args.command == "falsify":
            result = run_falsify(config)
        elif args.command == "constants":
            result = run_constants(config)
        else:  # gen
            _, text = run_gen(config)
            if args.out:
                Path(args.out).write_text(text)
                print(f"wrote {args.out}")
            else:
                print(text, end="")
            return 0
    except (ValueError, ShadowingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(result.report_text, end="")
    for path in result.artifacts:
        print(f"wrote {path}")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
