"""Rational functions in one designated variable, and exact Pade reconstruction.

A RationalFunction keeps numerator and denominator as MultiPoly in a main
variable; any other variables ride along in the coefficient field.  When both
parts are genuinely univariate with scalar coefficients the representation is
reduced (polynomial gcd cancelled, denominator normalized to constant term 1
where possible).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .poly import MultiPoly, poly_divmod
from .scalars import inv, is_zero, normalize, to_scalar
from .series import QSeries


class PadeError(ValueError):
    """Raised when no rational function of the requested degrees matches."""


def _is_univariate_scalar(p: MultiPoly, name: str) -> bool:
    return p.variables_used() <= {name}


def _univariate_gcd(a, b):
    """Monic gcd of scalar coefficient lists (low-to-high degree)."""

    def degree(c):
        d = len(c) - 1
        while d >= 0 and is_zero(c[d]):
            d -= 1
        return d

    def rem(num, den):
        num = list(num)
        dd = degree(den)
        lead = den[dd]
        while degree(num) >= dd and degree(num) >= 0:
            dn = degree(num)
            f = normalize(num[dn] * inv(lead))
            for i in range(dd + 1):
                num[dn - dd + i] = normalize(num[dn - dd + i] - f * den[i])
        return num

    a, b = list(a), list(b)
    while degree(b) >= 0:
        a, b = b, rem(a, b)
    da = degree(a)
    if da < 0:
        return [1]
    lead_inv = inv(a[da])
    return [normalize(c * lead_inv) for c in a[: da + 1]]


class RationalFunction:
    __slots__ = ("num", "den", "var")

    def __init__(self, num, den, var="q", reduce=True):
        if isinstance(num, (int,)) or not isinstance(num, MultiPoly):
            num = MultiPoly.constant(num, (var,))
        if not isinstance(den, MultiPoly):
            den = MultiPoly.constant(den, (var,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.var = var
        self.num, self.den = (self._reduced(num, den, var) if reduce else (num, den))

    @staticmethod
    def _reduced(num, den, var):
        if _is_univariate_scalar(num, var) and _is_univariate_scalar(den, var):
            nc = [num.scalar_coefficient((k,)) for k in range(num.degree_in(var) + 1)] if not num.is_zero() else [0]
            nc = [to_scalar(c) for c in (nc or [0])]
            dc = [to_scalar(den.scalar_coefficient((k,))) for k in range(den.degree_in(var) + 1)]
            num1 = MultiPoly((var,), {(k,): c for k, c in enumerate(nc) if not is_zero(c)})
            den1 = MultiPoly((var,), {(k,): c for k, c in enumerate(dc) if not is_zero(c)})
            if not num1.is_zero():
                g = _univariate_gcd(nc, dc)
                if len(g) > 1:
                    gp = MultiPoly((var,), {(k,): c for k, c in enumerate(g) if not is_zero(c)})
                    num1, _ = poly_divmod(num1, gp, var)
                    den1, _ = poly_divmod(den1, gp, var)
            c0 = den1.constant_term()
            if is_zero(c0):
                lead = den1.coefficient({var: den1.degree_in(var)}).as_scalar()
                scale = inv(lead)
            else:
                scale = inv(to_scalar(c0))
            return num1 * scale, den1 * scale
        return num, den

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __str__(self):
        return f"({self.num})/({self.den})"

    def evaluate(self, value):
        n = self.num.subs({self.var: value}).as_scalar()
        d = self.den.subs({self.var: value}).as_scalar()
        if is_zero(d):
            raise ZeroDivisionError("pole at evaluation point")
        return normalize(n * inv(to_scalar(d)))

    def series(self, order: int) -> QSeries:
        """Taylor expansion at 0 up to the requested order (denominator must
        be a unit at 0)."""
        num_s = QSeries(
            (self.var,),
            (order,),
            {(k,): self.num.scalar_coefficient((k,)) for k in range(min(order, max(self.num.degree_in(self.var), 0)) + 1)},
        )
        den_s = QSeries(
            (self.var,),
            (order,),
            {(k,): self.den.scalar_coefficient((k,)) for k in range(min(order, max(self.den.degree_in(self.var), 0)) + 1)},
        )
        from .series import series_invert

        return num_s * series_invert(den_s)


@dataclass
class PadeResult:
    function: RationalFunction
    unique: bool


def pade_reconstruct(s: QSeries, num_deg: int, den_deg: int) -> PadeResult:
    """Reconstruct p/q with deg p <= num_deg, deg q <= den_deg, q(0) = 1.

    Requires a single-variable series with scalar coefficients and order(s) at
    least num_deg + den_deg.  The full available order is used: the result
    matches the series through order(s), or PadeError is raised.  When the
    requested degrees overshoot, the minimal-degree representative is returned
    with ``unique=False``.
    """
    if len(s.vars) != 1:
        raise ValueError("Pade reconstruction needs a single-variable series")
    order = s.orders[0]
    if order < num_deg + den_deg:
        raise ValueError(
            f"need >= {num_deg + den_deg + 1} terms, series carries {order + 1}"
        )
    var = s.vars[0]
    c = []
    for k in range(order + 1):
        val = s.coefficient((k,))
        if isinstance(val, MultiPoly):
            val = val.as_scalar()
        c.append(to_scalar(val))

    if all(is_zero(x) for x in c):
        return PadeResult(
            RationalFunction(MultiPoly.constant(0, (var,)), MultiPoly.constant(1, (var,)), var),
            num_deg == 0 and den_deg == 0,
        )

    for dd in range(den_deg + 1):
        # unknowns b_1..b_dd with b_0 = 1; equations kill orders num_deg+1..order
        rows = []
        rhs = []
        for k in range(num_deg + 1, order + 1):
            rows.append([c[k - j] if 0 <= k - j <= order else 0 for j in range(1, dd + 1)])
            rhs.append(-c[k])
        try:
            if rows and dd > 0:
                sol, free = linalg.solve(rows, rhs)
            elif rows:
                if any(not is_zero(x) for x in rhs):
                    raise ValueError("inconsistent linear system")
                sol, free = [], 0
            else:
                sol, free = [0] * dd, dd
        except ValueError:
            continue
        b = [1] + [to_scalar(x) for x in sol]
        a = []
        for k in range(num_deg + 1):
            acc = 0
            for j in range(len(b)):
                if k - j >= 0:
                    acc = acc + b[j] * c[k - j]
            a.append(normalize(acc))
        num = MultiPoly((var,), {(k,): v for k, v in enumerate(a) if not is_zero(v)})
        den = MultiPoly((var,), {(k,): v for k, v in enumerate(b) if not is_zero(v)})
        rf = RationalFunction(num, den, var)
        # the reduced representative must still be within the requested degrees
        if rf.num.degree_in(var) > num_deg or rf.den.degree_in(var) > den_deg:
            continue
        # uniqueness: the requested-degree system had no extra freedom and the
        # minimal dd is the requested one
        if dd == den_deg:
            unique = free == 0
        else:
            unique = False
        return PadeResult(rf, unique)
    raise PadeError("not rational at these degrees")
