"""Truncated power series in one or more bookkeeping variables.

Coefficients may be exact scalars or MultiPoly values.  All arithmetic
truncates to the componentwise minimum of the operands' orders, so a product
never claims more precision than its inputs carry.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .poly import MultiPoly
from .scalars import GaussianRational, inv, is_zero, normalize, scalar_str, to_scalar

_SCALARS = (int, Fraction, GaussianRational)


def _norm_value(v):
    if isinstance(v, MultiPoly):
        if v.is_constant():
            return normalize(v.constant_term())
        return v
    return normalize(v)


def _value_is_zero(v):
    if isinstance(v, MultiPoly):
        return v.is_zero()
    return is_zero(v)


class QSeries:
    __slots__ = ("vars", "orders", "coeffs")

    def __init__(self, variables, orders, coeffs=None):
        self.vars = tuple(variables)
        if isinstance(orders, int):
            orders = (orders,) * len(self.vars)
        self.orders = tuple(orders)
        if len(self.orders) != len(self.vars):
            raise ValueError("one truncation order per series variable")
        self.coeffs = {}
        if coeffs:
            for deg, val in coeffs.items():
                deg = tuple(deg)
                if any(d > o for d, o in zip(deg, self.orders)):
                    continue
                val = _norm_value(val)
                if not _value_is_zero(val):
                    self.coeffs[deg] = val

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c, variables=("q",), orders=0):
        v = tuple(variables)
        return QSeries(v, orders, {(0,) * len(v): c})

    @staticmethod
    def variable(name="q", order=1):
        return QSeries((name,), (order,), {(1,): 1})

    # -- queries --------------------------------------------------------

    def coefficient(self, deg):
        if isinstance(deg, int):
            deg = (deg,)
        return self.coeffs.get(tuple(deg), 0)

    def is_zero(self):
        return not self.coeffs

    def constant_coefficient(self):
        return self.coeffs.get((0,) * len(self.vars), 0)

    def degrees(self):
        return sorted(self.coeffs)

    # -- alignment -------------------------------------------------------

    @staticmethod
    def _aligned(a, b):
        if a.vars == b.vars:
            orders = tuple(min(x, y) for x, y in zip(a.orders, b.orders))
            return a, b, orders
        merged = tuple(dict.fromkeys(a.vars + b.vars))

        def lift(s):
            pos = [merged.index(v) for v in s.vars]
            orders = [None] * len(merged)
            for i, v in enumerate(merged):
                orders[i] = s.orders[s.vars.index(v)] if v in s.vars else None
            coeffs = {}
            for deg, val in s.coeffs.items():
                nd = [0] * len(merged)
                for i, d in zip(pos, deg):
                    nd[i] = d
                coeffs[tuple(nd)] = val
            return orders, coeffs

        oa, ca = lift(a)
        ob, cb = lift(b)
        orders = tuple(
            min(x for x in (pa, pb) if x is not None) for pa, pb in zip(oa, ob)
        )
        return (
            QSeries(merged, orders, ca),
            QSeries(merged, orders, cb),
            orders,
        )

    def truncated(self, orders):
        if isinstance(orders, int):
            orders = (orders,) * len(self.vars)
        return QSeries(self.vars, orders, self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, _SCALARS + (MultiPoly,)):
            other = QSeries.constant(other, self.vars, self.orders)
        elif not isinstance(other, QSeries):
            return NotImplemented
        a, b, orders = QSeries._aligned(self, other)
        coeffs = dict(a.coeffs)
        for deg, val in b.coeffs.items():
            coeffs[deg] = coeffs.get(deg, 0) + val
        return QSeries(a.vars, orders, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.vars, self.orders, {d: -v for d, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS + (MultiPoly,)):
            return QSeries(
                self.vars, self.orders, {d: v * other for d, v in self.coeffs.items()}
            )
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, orders = QSeries._aligned(self, other)
        coeffs = {}
        for d1, v1 in a.coeffs.items():
            for d2, v2 in b.coeffs.items():
                deg = tuple(x + y for x, y in zip(d1, d2))
                if any(d > o for d, o in zip(deg, orders)):
                    continue
                prev = coeffs.get(deg)
                coeffs[deg] = v1 * v2 if prev is None else prev + v1 * v2
        return QSeries(a.vars, orders, coeffs)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = QSeries.constant(1, self.vars, self.orders)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, _SCALARS + (MultiPoly,)):
            other = QSeries.constant(other, self.vars, self.orders)
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, orders = QSeries._aligned(self, other)

        def val_eq(x, y):
            if isinstance(x, MultiPoly) or isinstance(y, MultiPoly):
                return (x - y).is_zero() if isinstance(x, MultiPoly) else (y - x).is_zero()
            return x == y

        for deg in set(a.coeffs) | set(b.coeffs):
            if not val_eq(a.coeffs.get(deg, 0), b.coeffs.get(deg, 0)):
                return False
        return True

    def __hash__(self):
        raise TypeError("QSeries is unhashable")

    # -- printing ------------------------------------------------------------

    def __repr__(self):
        return f"QSeries({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for deg in sorted(self.coeffs):
            val = self.coeffs[deg]
            mono = "*".join(
                f"{v}^{d}" if d > 1 else v for v, d in zip(self.vars, deg) if d
            )
            vs = scalar_str(val) if not isinstance(val, MultiPoly) else f"({val})"
            if "+" in vs[1:] or "-" in vs[1:]:
                vs = f"({vs})" if not vs.startswith("(") else vs
            parts.append(f"{vs}*{mono}" if mono else vs)
        return " + ".join(parts)


def series_invert(f: QSeries) -> QSeries:
    """Multiplicative inverse up to the truncation order.

    The constant term must be an invertible scalar (or constant MultiPoly).
    """
    c0 = f.constant_coefficient()
    if isinstance(c0, MultiPoly):
        if not c0.is_constant():
            raise ValueError("not a unit: constant term is not scalar")
        c0 = c0.as_scalar()
    if is_zero(c0):
        raise ValueError("not a unit: zero constant term")
    c0_inv = inv(to_scalar(c0))
    orders = f.orders
    # g_m = -c0^{-1} * sum_{0 < k <= m} f_k g_{m-k}, computed in graded order
    out = {(0,) * len(f.vars): c0_inv}
    grid = [range(o + 1) for o in orders]
    degrees = sorted(itertools.product(*grid), key=lambda d: (sum(d), d))
    fcoeffs = f.coeffs
    for deg in degrees:
        if all(d == 0 for d in deg):
            continue
        acc = None
        for k, fk in fcoeffs.items():
            if all(x <= y for x, y in zip(k, deg)) and any(x > 0 for x in k):
                rest = tuple(y - x for x, y in zip(k, deg))
                g = out.get(rest)
                if g is None:
                    continue
                term = fk * g
                acc = term if acc is None else acc + term
        if acc is not None:
            val = _norm_value(acc * (-1) * c0_inv if isinstance(acc, MultiPoly) else -c0_inv * acc)
            if not _value_is_zero(val):
                out[deg] = val
    return QSeries(f.vars, orders, out)


def truncated_exp(arg: MultiPoly, nilpotency_bound: int) -> MultiPoly:
    """sum_{k=0}^{bound} arg^k / k! — the exponential against a nilpotent argument."""
    if nilpotency_bound < 0:
        raise ValueError("nilpotency bound must be >= 0")
    out = MultiPoly.constant(1, arg.vars)
    power = MultiPoly.constant(1, arg.vars)
    fact = 1
    for k in range(1, nilpotency_bound + 1):
        power = power * arg
        fact *= k
        if power.is_zero():
            break
        out = out + power / fact
    return out


def geometric_series(ratio_coeff, variable="q", order=4, scale=1):
    """scale / (1 - ratio_coeff * q) expanded to the requested order."""
    coeffs = {}
    acc = to_scalar(scale)
    r = to_scalar(ratio_coeff)
    for d in range(order + 1):
        coeffs[(d,)] = acc
        acc = acc * r
    return QSeries((variable,), (order,), coeffs)
