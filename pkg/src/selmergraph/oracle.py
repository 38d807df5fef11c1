"""Generic local solvability oracle for quartic torsor models.

Decides whether d*w^2 = a + b z^2 + c z^4 has a point over R or over Q_l
(points at infinity of the smooth projective model included), with no
knowledge of the congruence tables.  Intentionally simple: the p-adic part
is an exact residue-disc search whose only accelerations are mathematically
forced (stable square classes and Hensel's lemma).  This module is the
independent referee the tables and graphs are checked against.
"""

from __future__ import annotations

from . import _backend
from .arith import is_prime, vl
from .model import CurveParams, Place, torsor_coeffs


class DepthExceeded(RuntimeError):
    """The disc search hit its depth bound undecided; never a verdict."""


def _check_model(a: int, b: int, c: int) -> None:
    if a == 0 or c == 0 or b * b - 4 * a * c == 0:
        raise ValueError("degenerate quartic model (a, c, b^2-4ac must be nonzero)")


def real_solvable(d: int, a: int, b: int, c: int) -> bool:
    """Solvability over R by exact sign analysis of P(t) = a + b t + c t^2, t = z^2 >= 0."""
    _check_model(a, b, c)
    if d == 0:
        raise ValueError("d must be nonzero")
    if d * c > 0:
        return True  # point at infinity
    if d > 0:
        # need P(t) >= 0 somewhere on t >= 0; c < 0 here unless a or vertex helps
        if a >= 0 or c > 0:
            return True
        return b > 0 and b * b - 4 * a * c >= 0
    # d < 0: need P(t) <= 0 somewhere on t >= 0
    if a <= 0 or c < 0:
        return True
    return b < 0 and b * b - 4 * a * c >= 0


def default_depth(a: int, b: int, c: int, l: int) -> int:
    """Depth bound for the disc search at l: v_l(16ac(b^2-4ac)) + 6."""
    return vl(16 * a * c * (b * b - 4 * a * c), l) + 6


def padic_solvable(d: int, a: int, b: int, c: int, l: int, depth: int | None = None) -> bool:
    """Solvability over Q_l; raises DepthExceeded if the bound is exhausted."""
    _check_model(a, b, c)
    if d == 0:
        raise ValueError("d must be nonzero")
    if not is_prime(l):
        raise ValueError("l must be a prime, got %r" % (l,))
    kmax = default_depth(a, b, c, l) if depth is None else depth
    res = _backend.quartic_padic_solvable(d, a, b, c, l, kmax)
    if res == -1:
        raise DepthExceeded("undecided at depth %d for l=%d, d=%d, (a,b,c)=(%d,%d,%d)"
                            % (kmax, l, d, a, b, c))
    return bool(res)


def locally_solvable(params: CurveParams, d: int, family: str, place: Place,
                     depth: int | None = None) -> bool:
    """Oracle verdict for the family torsor of class d at one place."""
    a, b, c = torsor_coeffs(params, d, family)
    if place.tag == "inf":
        return real_solvable(d, a, b, c)
    return padic_solvable(d, a, b, c, place.value, depth)


def global_member(params: CurveParams, d: int, family: str,
                  depth: int | None = None) -> bool:
    """True when the class torsor is solvable at every place of S (and R)."""
    from .model import places  # local import to keep module load cheap

    return all(locally_solvable(params, d, family, pl, depth) for pl in places(params))
