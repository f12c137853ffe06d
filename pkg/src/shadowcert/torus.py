"""Hyperbolic automorphism of the 2-torus induced by [[2, 1], [1, 1]].

All coordinates live in Q(sqrt5), so eigendirections, distances and the
stable/unstable splitting are exact.  The metric is the sup metric from
the unit square with wrap-around:

    d(p, q) = max_i min(|p_i - q_i|, 1 - |p_i - q_i|)  (mod 1 per entry)

Eigenvalues: lambda = (3 + sqrt5)/2 (unstable), 1/lambda (stable), with
eigenvectors e_u = (1, (sqrt5-1)/2) and e_s = (1, -(sqrt5+1)/2).
"""

from __future__ import annotations

from fractions import Fraction

from .quadratic import LAMBDA, LAMBDA_INV, PHI, PHI_INV, SQRT5, QuadraticNumber

_HALF = Fraction(1, 2)

# sup-norm of either eigenprojection (attained); the combined constant
# 2*lambda/sqrt5 bounds |v_s| + |v_u| against |v| in the sup norm.
K_PROJ = LAMBDA / SQRT5
C_PROJ = 2 * K_PROJ

# matrix entries of A^n are consecutive-Fibonacci combinations; we just
# square-and-multiply 2x2 integer matrices.
_A = ((2, 1), (1, 1))
_A_INV = ((1, -1), (-1, 2))


def _mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _mat_pow(m, k: int):
    result = ((1, 0), (0, 1))
    while k:
        if k & 1:
            result = _mat_mul(result, m)
        m = _mat_mul(m, m)
        k >>= 1
    return result


def norm_inf(v) -> QuadraticNumber:
    return max(abs(v[0]), abs(v[1]))


class ToralPoint:
    """A point of the 2-torus with coordinates in Q(sqrt5) mod 1."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        object.__setattr__(self, "x", QuadraticNumber.coerce(x).mod1())
        object.__setattr__(self, "y", QuadraticNumber.coerce(y).mod1())

    def __setattr__(self, name, value):
        raise AttributeError("ToralPoint is immutable")

    def translate(self, v) -> "ToralPoint":
        return ToralPoint(self.x + v[0], self.y + v[1])

    def __eq__(self, other):
        if not isinstance(other, ToralPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    __hash__ = None

    def __repr__(self):
        return f"ToralPoint({self.x!r}, {self.y!r})"


class ToralSystem:
    """The cat-map style automorphism of the 2-torus, exactly."""

    name = "toral"

    # certified expansivity constant (see constants.alpha_certify_toral);
    # any candidate must stay within the linear regime below.
    alpha = Fraction(1, 8)

    # sup-norm operator bound for both A and A^-1
    lipschitz = 3

    # radius within which mod-1 differences behave linearly
    linear_regime = Fraction(1, 6)

    zero_dist = QuadraticNumber(0)

    def __init__(self, alpha=None):
        if alpha is not None:
            self.alpha = alpha

    # one-jump gluing keeps errors <= K_PROJ * d(x, y); requiring
    # d(x, y) <= alpha / K_PROJ certifies alpha-shadowing.
    @property
    def one_jump_threshold(self) -> QuadraticNumber:
        return QuadraticNumber.coerce(self.alpha) / K_PROJ

    def apply(self, p: ToralPoint) -> ToralPoint:
        return ToralPoint(2 * p.x + p.y, p.x + p.y)

    def apply_inv(self, p: ToralPoint) -> ToralPoint:
        return ToralPoint(p.x - p.y, -p.x + 2 * p.y)

    def iterate(self, p: ToralPoint, n: int) -> ToralPoint:
        if n == 0:
            return p
        m = _mat_pow(_A if n > 0 else _A_INV, abs(n))
        return ToralPoint(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)

    # -- metric ---------------------------------------------------------

    @staticmethod
    def _coord_dist(a: QuadraticNumber, b: QuadraticNumber) -> QuadraticNumber:
        d = (a - b).mod1()
        return d if d <= _HALF else 1 - d

    def dist(self, p: ToralPoint, q: ToralPoint) -> QuadraticNumber:
        return max(self._coord_dist(p.x, q.x), self._coord_dist(p.y, q.y))

    def wrap_norm(self, v) -> QuadraticNumber:
        """Torus distance between p and p.translate(v), for any lift v.

        Equals dist(p, p + v) for every p, so difference vectors can be
        measured without touching the (often bulkier) point coordinates.
        """
        out = None
        for c in v:
            w = QuadraticNumber.coerce(c).mod1()
            if w > _HALF:
                w = 1 - w
            if out is None or w > out:
                out = w
        return out

    def dist_float(self, d) -> float:
        return float(d)

    def format_dist(self, d) -> str:
        return str(QuadraticNumber.coerce(d))

    @staticmethod
    def lift_diff(p: ToralPoint, q: ToralPoint):
        """The canonical lift of p - q, with entries in (-1/2, 1/2]."""
        out = []
        for a, b in ((p.x, q.x), (p.y, q.y)):
            d = (a - b).mod1()
            out.append(d if d <= _HALF else d - 1)
        return tuple(out)

    @staticmethod
    def split(v):
        """Decompose a plane vector as v = vs + vu along e_s, e_u."""
        c_u = (PHI * v[0] + v[1]) / SQRT5
        c_s = (PHI_INV * v[0] - v[1]) / SQRT5
        vs = (c_s, -c_s * PHI)
        vu = (c_u, c_u * PHI_INV)
        return vs, vu

    def orbit_pair_sup(self, p: ToralPoint, q: ToralPoint, steps: int):
        best = self.dist(p, q)
        for _ in range(steps):
            p, q = self.apply(p), self.apply(q)
            d = self.dist(p, q)
            if d > best:
                best = d
        return best

    def orbit_pair_errors(self, p, q, steps):
        out = [self.dist(p, q)]
        for _ in range(steps):
            p, q = self.apply(p), self.apply(q)
            out.append(self.dist(p, q))
        return out

    def one_jump_shadow(self, x: ToralPoint, y: ToralPoint) -> ToralPoint:
        """Shadow of the one-jump pseudo-orbit (..., T^-1 y, x, Tx, ...).

        With v the canonical lift of y - x, the point w = x + vs satisfies
        d(T^n w, T^n x) = lambda^-n |vs| for n >= 0 and d(T^n w, T^n y) =
        lambda^-|n| |vu| for n < 0, both <= K_PROJ * d(x, y) <= alpha.
        """
        if self.dist(x, y) > self.one_jump_threshold:
            raise ValueError("one-jump gluing needs d(x, y) <= alpha/K")
        vs, _ = self.split(self.lift_diff(y, x))
        return x.translate(vs)

    # -- generation -------------------------------------------------------

    def random_point(self, p_rng) -> ToralPoint:
        den = p_rng.randint(5, 200)
        return ToralPoint(
            Fraction(p_rng.randrange(den), den), Fraction(p_rng.randrange(den), den)
        )

    def random_jump_target(self, p: ToralPoint, rng, scale) -> ToralPoint:
        j = 0
        while QuadraticNumber.coerce(Fraction(1, 2**j)) >= QuadraticNumber.coerce(scale):
            j += 1
        unit = Fraction(1, 2 ** (j + 2))
        while True:
            c1, c2 = rng.randint(-3, 3), rng.randint(-3, 3)
            if c1 or c2:
                break
        return p.translate((c1 * unit, c2 * unit))

    # -- serialization ------------------------------------------------------

    def format_point(self, p: ToralPoint) -> str:
        return f"x={p.x}, y={p.y}"

    def parse_point(self, text: str) -> ToralPoint:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad toral point: {text!r}")
        coords = {}
        for part in parts:
            key, _, value = part.partition("=")
            coords[key.strip()] = QuadraticNumber.parse(value)
        if set(coords) != {"x", "y"}:
            raise ValueError(f"bad toral point: {text!r}")
        return ToralPoint(coords["x"], coords["y"])

    # -- tail evidence ------------------------------------------------------

    def tail_evidence(self, p: ToralPoint, q: ToralPoint, side: str):
        """Certify sup of d(T^m p, T^m q) over a half-line of times.

        On the left half-line the difference must be purely unstable (it
        then contracts backward); on the right, purely stable.  In both
        cases the sup equals the distance at m = 0, exactly.
        """
        v = self.lift_diff(p, q)
        if v[0] == 0 and v[1] == 0:
            return True, QuadraticNumber(0), "identical"
        vs, vu = self.split(v)
        bound = self.dist(p, q)
        if side == "left":
            if vs[0] == 0 and vs[1] == 0:
                return True, bound, "unstable-decay"
            return False, QuadraticNumber(1), "stable-residue"
        if side == "right":
            if vu[0] == 0 and vu[1] == 0:
                return True, bound, "stable-decay"
            return False, QuadraticNumber(1), "unstable-residue"
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
