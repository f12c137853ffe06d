"""System registry and orbit-tail certification.

Both concrete systems (the full shift and the toral automorphism) expose
the same small interface: apply/apply_inv/iterate, an exact metric,
exact sup over orbit-segment pairs, a one-jump gluing oracle with its
admission threshold, point (de)serialization, random generation, and
half-line tail evidence.  Everything downstream is written against that
interface.
"""

from __future__ import annotations

from dataclasses import dataclass

from .shiftspace import ShiftSystem
from .torus import ToralSystem


def get_system(spec: str):
    """Build a system from its name: 'shift', 'shift:m' (2..16), 'toral'."""
    spec = spec.strip()
    if spec == "toral":
        return ToralSystem()
    if spec == "shift":
        return ShiftSystem(2)
    if spec.startswith("shift:"):
        return ShiftSystem(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown system {spec!r}")


@dataclass(frozen=True)
class TailEvidence:
    """Certified bound for sup d(entry_xi(n), entry_eta(n)) over a half-line."""

    side: str  # 'left' or 'right'
    edge: int  # half-line boundary: n <= edge (left) or n >= edge (right)
    ok: bool
    bound: object  # exact distance; sound only when ok
    method: str


def certify_tail_equal_orbit(system, xi, eta, side: str, edge: int) -> TailEvidence:
    """Certify closeness of two pseudo-orbits on a jump-free half-line.

    Requires that neither pseudo-orbit has a jump on the half-line, so
    both tails are true orbit rays; the certified bound then comes from
    the structure of the difference at the edge alone (periodicity
    alignment for the shift, stable/unstable purity for the torus).
    """
    if side == "left":
        clean = all(p > edge for p in xi.jump_positions() + eta.jump_positions())
    elif side == "right":
        clean = all(p <= edge for p in xi.jump_positions() + eta.jump_positions())
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not clean:
        return TailEvidence(side, edge, False, None, "jump-on-tail")
    ok, bound, method = system.tail_evidence(xi.entry(edge), eta.entry(edge), side)
    return TailEvidence(side, edge, ok, bound, method)
