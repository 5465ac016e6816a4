"""Per-geometry correlator constructors with the q <-> e^(FI) sign dictionaries.

Every engine computes the quasimap-side series directly (coefficient
extraction or explicit residue sums) and reports in the geometric variable q.
The matching gauge-theory model is available through ``TargetSpec.model()``,
and ``TargetSpec.dictionary()`` returns the sign rule translating raw residue
output into q-units: raw coefficient at degree d equals
``global_sign * degree_sign^d`` times the engine coefficient.

Degree conventions:

* the complete-intersection engines insert the constraint Euler factor v and
  the per-degree constraint class; q = (-1)^n e^(FI) and a global (-1)^r from
  the constraint-field orientation;
* the concave engine follows the closed-form selection rule (nonzero only at
  insertion degree n + r): its per-degree pairing extracts the x^(n(d+1))
  coefficient, one power above the plain residue pairing, so it relates to
  the gauge-theory series by one insertion power (engine<P> = raw<P/x>);
* the Grassmannian engines carry the (-1)^((r-1)d) orientation sign
  explicitly, matching the vector-multiplet sign in the gauge theory, so
  q = e^(FI) on the nose there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import models
from .poly import MultiPoly, product_coefficient
from .residues import PoleAssignment, RationalExpression, jk_residue, sum_residues
from .rings import RingOracle, elementary_symmetric, root_product
from .scalars import is_zero, normalize, to_scalar
from .series import QSeries


class EngineError(ValueError):
    pass


@dataclass
class SignRule:
    """raw gauge-theory coefficient = global_sign * degree_sign^|d| * engine coefficient."""

    global_sign: int = 1
    degree_sign: int = 1
    insertion_shift: int = 0  # engine<P> corresponds to raw<P / x^shift>


@dataclass
class TargetSpec:
    kind: str
    n: int = 0
    r: int = 0
    degrees: tuple = ()
    bundle_weights: tuple = ()
    charge_matrix: tuple = ()
    eta: tuple = ()
    lambdas: tuple = None
    mu: object = None
    z: object = None
    cy: bool = False

    @staticmethod
    def projective(n, lambdas=None, z=None):
        return TargetSpec(kind="projective", n=n, r=1, lambdas=lambdas, z=z)

    @staticmethod
    def projective_ci(n, degrees, lambdas=None, z=None, cy=True):
        degrees = tuple(int(l) for l in degrees)
        if any(l <= 0 for l in degrees):
            raise EngineError("constraint degrees must be positive")
        if cy and sum(degrees) != n:
            raise EngineError("degrees must sum to n for the anticanonical condition")
        return TargetSpec(kind="projective_ci", n=n, degrees=degrees, lambdas=lambdas, z=z, cy=cy)

    @staticmethod
    def concave(n, degrees):
        degrees = tuple(int(l) for l in degrees)
        if any(l <= 0 for l in degrees):
            raise EngineError("bundle degrees must be positive")
        return TargetSpec(kind="concave", n=n, degrees=degrees)

    @staticmethod
    def toric(charge_matrix, eta, bundle_rows=None):
        cm = tuple(tuple(int(x) for x in row) for row in charge_matrix)
        rows = tuple(tuple(int(x) for x in row) for row in bundle_rows) if bundle_rows else ()
        return TargetSpec(kind="toric", charge_matrix=cm, eta=tuple(eta), bundle_weights=rows)

    @staticmethod
    def grassmannian(r, n, lambdas=None, z=None):
        return TargetSpec(kind="grassmannian", r=r, n=n, lambdas=lambdas, z=z)

    @staticmethod
    def grassmannian_ci(r, n, bundle_weights, z=None):
        bw = tuple(tuple(int(x) for x in w) for w in bundle_weights)
        for w in bw:
            if len(w) != r:
                raise EngineError("bundle weights are covectors on the Cartan torus")
        return TargetSpec(kind="grassmannian_ci", r=r, n=n, bundle_weights=bw, z=z)

    @staticmethod
    def tstar_grassmannian(r, n, lambdas, mu):
        return TargetSpec(kind="tstar_grassmannian", r=r, n=n, lambdas=tuple(lambdas), mu=mu)

    # -- dictionaries -----------------------------------------------------

    def dictionary(self) -> SignRule:
        if self.kind == "projective":
            return SignRule()
        if self.kind == "projective_ci":
            return SignRule(
                global_sign=(-1) ** len(self.degrees),
                degree_sign=(-1) ** self.n,
            )
        if self.kind == "concave":
            return SignRule(insertion_shift=1)
        if self.kind == "toric":
            return SignRule()
        if self.kind == "grassmannian":
            return SignRule()
        if self.kind == "grassmannian_ci":
            # constraint fields contribute (-1)^(sum_w <w,d> + #weights); the
            # column sums of the weights share one parity for Weyl-symmetric
            # bundles, so the degree part is a function of |d|
            cols = [sum(w[j] for w in self.bundle_weights) for j in range(self.r)]
            if len({c % 2 for c in cols}) > 1:
                raise EngineError("bundle weight columns must share parity for a |d|-graded dictionary")
            return SignRule(
                global_sign=(-1) ** len(self.bundle_weights),
                degree_sign=(-1) ** (cols[0] % 2 if cols else 0),
            )
        if self.kind == "tstar_grassmannian":
            return SignRule()
        raise EngineError(f"unknown target kind {self.kind!r}")

    def model(self) -> models.GlsmModel:
        if self.kind == "projective":
            return models.projective_model(self.n, self.lambdas, self.z)
        if self.kind == "projective_ci":
            return models.projective_ci_model(self.n, self.degrees, self.lambdas, self.z)
        if self.kind == "concave":
            return models.concave_model(self.n, self.degrees)
        if self.kind == "toric":
            return models.toric_model(self.charge_matrix, self.eta)
        if self.kind == "grassmannian":
            return models.grassmannian_model(self.r, self.n, self.lambdas, self.z)
        if self.kind == "grassmannian_ci":
            return models.grassmannian_ci_model(
                self.r, self.n, self.bundle_weights, self.lambdas, self.z
            )
        if self.kind == "tstar_grassmannian":
            return models.tstar_grassmannian_model(self.r, self.n, self.lambdas, self.mu)
        raise EngineError(f"unknown target kind {self.kind!r}")


# -- constraint classes -------------------------------------------------------


def mp_class(spec: TargetSpec, d, z=None) -> MultiPoly:
    """Per-degree constraint class.

    projective_ci: prod_i (l_i x)^(l_i d);
    toric: (sum u)^(<sum u, d>) * prod_(<u_i,d> < 0) u_i^(-<u_i,d> - 1);
    grassmannian_ci: prod_w prod_{l=1..<w,d>} (w.x + l z), z = 0 allowed.
    """
    if spec.kind == "projective_ci":
        (dd,) = tuple(d) if not isinstance(d, int) else (d,)
        x = MultiPoly.var("x1")
        out = MultiPoly.constant(1, ("x1",))
        for l in spec.degrees:
            out = out * (l * x) ** (l * dd)
        return out
    if spec.kind == "toric":
        rows = [list(r) for r in spec.charge_matrix]
        rank = len(rows[0])
        var_names = tuple(f"x{i+1}" for i in range(rank))
        forms = [MultiPoly.linear(var_names, row) for row in rows]
        total = MultiPoly.constant(0, var_names)
        for f in forms:
            total = total + f
        pairing_sum = 0
        out = MultiPoly.constant(1, var_names)
        for row, f in zip(rows, forms):
            k = sum(a * b for a, b in zip(row, d))
            pairing_sum += k
            if k < 0:
                out = out * f ** (-k - 1)
        if pairing_sum < 0:
            raise EngineError("degree pairs negatively with the anticanonical class")
        return out * total ** pairing_sum
    if spec.kind == "grassmannian_ci":
        var_names = tuple(f"x{i+1}" for i in range(spec.r))
        zval = to_scalar(z) if z is not None else (to_scalar(spec.z) if spec.z is not None else 0)
        out = MultiPoly.constant(1, var_names)
        for w in spec.bundle_weights:
            pairing = sum(a * b for a, b in zip(w, d))
            for l in range(1, pairing + 1):
                out = out * MultiPoly.linear(var_names, w, normalize(l * zval))
        return out
    raise EngineError(f"no constraint class for target kind {spec.kind!r}")


def euler_insertion(spec: TargetSpec) -> MultiPoly:
    """Euler factor of the constraint bundle (the degree-0 insertion v)."""
    if spec.kind == "projective_ci":
        x = MultiPoly.var("x1")
        out = MultiPoly.constant(1, ("x1",))
        for l in spec.degrees:
            out = out * (l * x)
        return out
    if spec.kind == "grassmannian_ci":
        var_names = tuple(f"x{i+1}" for i in range(spec.r))
        out = MultiPoly.constant(1, var_names)
        for w in spec.bundle_weights:
            out = out * MultiPoly.linear(var_names, w)
        return out
    raise EngineError(f"no Euler insertion for target kind {spec.kind!r}")


# -- engines ------------------------------------------------------------------


def projective_correlator(n: int, P: MultiPoly, cutoff: int) -> QSeries:
    """<P(x)> over P^(n-1): q^d coefficient is the x^(n(d+1)-1) coefficient of P."""
    P = P.with_vars(("x1",)) if P.variables_used() <= {"x1"} else P
    coeffs = {}
    for d in range(cutoff + 1):
        c = P.coefficient({"x1": n * (d + 1) - 1})
        if not c.is_zero():
            coeffs[(d,)] = c.as_scalar()
    return QSeries(("q",), (cutoff,), coeffs)


def ci_correlator(n: int, degrees, P: MultiPoly, cutoff: int) -> QSeries:
    """Complete intersection in P^(n-1): inserts the constraint class and the
    Euler factor v; q = (-1)^n e^(FI)."""
    spec = TargetSpec.projective_ci(n, degrees)
    P = P.with_vars(("x1",)) if P.variables_used() <= {"x1"} else P
    v = euler_insertion(spec)
    coeffs = {}
    for d in range(cutoff + 1):
        integrand = P * mp_class(spec, d) * v
        c = integrand.coefficient({"x1": n * (d + 1) - 1})
        if not c.is_zero():
            coeffs[(d,)] = c.as_scalar()
    return QSeries(("q",), (cutoff,), coeffs)


def concave_correlator(n: int, degrees, P: MultiPoly, cutoff: int) -> QSeries:
    """Sum of negative line bundles over P^(n-1).

    Nonzero only at insertion degree n + r; the q^d coefficient pairs P times
    prod (-l_i x)^(l_i d - 1) against x^(n(d+1)) (Laurent pairing: the
    degree-0 obstruction factor has exponent -1).
    """
    spec = TargetSpec.concave(n, degrees)
    P = P.with_vars(("x1",)) if P.variables_used() <= {"x1"} else P
    r = len(spec.degrees)
    coeffs = {}
    for d in range(cutoff + 1):
        # Laurent data of prod (-l_i x)^(l_i d - 1): scalar part and x-exponent
        scalar = Fraction(1)
        shift = 0
        for l in spec.degrees:
            scalar = scalar * Fraction(-l) ** (l * d - 1)
            shift += l * d - 1
        c = P.coefficient({"x1": n * (d + 1) - shift})
        if not c.is_zero():
            coeffs[(d,)] = normalize(c.as_scalar() * scalar)
    return QSeries(("q",), (cutoff,), coeffs)


def toric_correlator(charge_matrix, eta, P: MultiPoly, cutoff, bundle_rows=None) -> QSeries:
    """Toric target from a charge matrix; multi-variable series in q_1..q_r.

    Without bundle rows the plain target correlator is computed (only the
    negative-pairing part of the constraint class appears).  With bundle rows
    (e.g. the all-ones anticanonical row) the full per-degree class
    prod_rows (row.u)^(<row.u, d>) is inserted; the insertion polynomial P is
    expected to carry any Euler factor itself.  ``cutoff`` may be an int
    (componentwise) or a tuple of per-variable orders.
    """
    spec = TargetSpec.toric(charge_matrix, eta, bundle_rows)
    rows = [list(r) for r in spec.charge_matrix]
    rank = len(rows[0])
    var_names = tuple(f"x{i+1}" for i in range(rank))
    if isinstance(cutoff, int):
        orders = (cutoff,) * rank
    else:
        orders = tuple(cutoff)
    qnames = tuple(f"q{i+1}" for i in range(rank)) if rank > 1 else ("q",)
    forms = [MultiPoly.linear(var_names, row) for row in rows]
    # bundle row b defines the class sum_i b_i u_i
    bundle_forms = []
    for brow in spec.bundle_weights or ():
        if len(brow) != len(rows):
            raise EngineError("bundle row length must match the number of fields")
        acc = MultiPoly.constant(0, var_names)
        for b, f in zip(brow, forms):
            acc = acc + f * b
        bundle_forms.append((brow, acc))

    coeffs = {}
    for d in itertools.product(*[range(o + 1) for o in orders]):
        numerator = P
        den = []
        ok = True
        for row, f in zip(rows, forms):
            k = sum(a * b for a, b in zip(row, d))
            if k >= 0:
                den.append((f, k + 1))
            else:
                numerator = numerator * f ** (-k - 1)
        for brow, bf in bundle_forms:
            pairing = sum(
                b * sum(a * c for a, c in zip(row, d)) for b, row in zip(brow, rows)
            )
            if pairing < 0:
                ok = False
                break
            numerator = numerator * bf ** pairing
        if not ok:
            continue
        jk_factors = [(_weight_of(f, var_names), p) for f, p in den]
        value = jk_residue(
            numerator.with_vars(tuple(dict.fromkeys(tuple(numerator.vars) + var_names))),
            jk_factors,
            spec.eta,
            var_names,
        )
        if not is_zero(value):
            coeffs[d] = value
    return QSeries(qnames, orders, coeffs)


def _weight_of(form: MultiPoly, var_names):
    w = []
    for name in var_names:
        c = form.coefficient({name: 1})
        w.append(int(c.as_scalar()) if not c.is_zero() else 0)
    return tuple(w)


TORIC_PRESETS = {
    "P1": dict(charge_matrix=[(1,), (1,)], eta=(1,)),
    "P2": dict(charge_matrix=[(1,), (1,), (1,)], eta=(1,)),
    "P4": dict(charge_matrix=[(1,), (1,), (1,), (1,), (1,)], eta=(1,)),
    "P1xP1": dict(charge_matrix=[(1, 0), (1, 0), (0, 1), (0, 1)], eta=(1, 1)),
    "P2xP1": dict(charge_matrix=[(1, 0), (1, 0), (1, 0), (0, 1), (0, 1)], eta=(1, 1)),
    # P(O + O(-1)) over P^1; eta interior to the ample chamber and off the
    # partial-sum rays of the charge rows
    "F1": dict(charge_matrix=[(1, 0), (1, 0), (1, 1), (0, 1)], eta=(5, 2)),
}


def grassmannian_degree_tuples(r: int, total: int):
    """All r-tuples of nonnegative integers with the given sum."""
    if r == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in grassmannian_degree_tuples(r - 1, total - first):
            yield (first,) + rest


def _gr_term(r, n, P, dvec, extra=None):
    """(1/r!) Res prod_(i!=j)(x_i-x_j) P [extra] / prod x_i^(n(d_i+1))."""
    var_names = tuple(f"x{i+1}" for i in range(r))
    targets = {name: n * (dvec[i] + 1) - 1 for i, name in enumerate(var_names)}
    factors = [root_product(var_names), P]
    if extra is not None:
        factors.append(extra)
    val = product_coefficient(factors, targets)
    if is_zero(val):
        return 0
    return normalize(val * Fraction(1, math.factorial(r)))


def grassmannian_ab_correlator(r: int, n: int, P: MultiPoly, cutoff: int, variant: str = "plain") -> QSeries:
    """Torus-quotient route to Gr(r, n) correlators.

    q^d coefficient: (-1)^((r-1)d) sum over degree tuples |d| = d of the
    root-product residue; for r = 1 this is the plain projective correlator.
    The ``variant`` tag selects the parameter content of the matching gauge
    model in cross-checks; the engine itself computes the plain series.
    """
    if variant != "plain":
        raise EngineError("the torus-quotient engine computes the plain series; use the gauge model for equivariant variants")
    var_names = tuple(f"x{i+1}" for i in range(r))
    P = P.with_vars(tuple(dict.fromkeys(tuple(P.vars) + var_names)))
    if not P.is_symmetric(var_names):
        raise EngineError("insertion must be symmetric")
    coeffs = {}
    for d in range(cutoff + 1):
        sign = (-1) ** ((r - 1) * d)
        total = 0
        for dvec in grassmannian_degree_tuples(r, d):
            total = normalize(total + _gr_term(r, n, P, dvec))
        if not is_zero(total):
            coeffs[(d,)] = normalize(sign * total)
    return QSeries(("q",), (cutoff,), coeffs)


def grassmannian_ci_correlator(spec: TargetSpec, P: MultiPoly, cutoff: int) -> QSeries:
    """Complete intersection in Gr(r, n): inserts the z = 0 constraint class
    and the Euler factor into the torus-quotient correlator."""
    if spec.kind != "grassmannian_ci":
        raise EngineError("need a grassmannian_ci target")
    r, n = spec.r, spec.n
    var_names = tuple(f"x{i+1}" for i in range(r))
    P = P.with_vars(tuple(dict.fromkeys(tuple(P.vars) + var_names)))
    if not P.is_symmetric(var_names):
        raise EngineError("insertion must be symmetric")
    v = euler_insertion(spec)
    coeffs = {}
    for d in range(cutoff + 1):
        sign = (-1) ** ((r - 1) * d)
        total = 0
        for dvec in grassmannian_degree_tuples(r, d):
            extra = mp_class(spec, dvec, z=0) * v
            total = normalize(total + _gr_term(r, n, P, dvec, extra))
        if not is_zero(total):
            coeffs[(d,)] = normalize(sign * total)
    return QSeries(("q",), (cutoff,), coeffs)


def tstar_gr_correlator(r: int, n: int, lambdas, mu, P: MultiPoly, cutoff: int) -> QSeries:
    """Cotangent-bundle correlator: per-degree sum of residues at the n^r
    points x_i in {lambda_j}, with the ((-1)^(r-1) e^t)^|d| bookkeeping."""
    spec = TargetSpec.tstar_grassmannian(r, n, lambdas, mu)
    model = spec.model()  # validates genericity
    lams = [to_scalar(l) for l in lambdas]
    mu = to_scalar(mu)
    var_names = tuple(f"x{i+1}" for i in range(r))
    P = P.with_vars(tuple(dict.fromkeys(tuple(P.vars) + var_names)))
    if not P.is_symmetric(var_names):
        raise EngineError("insertion must be symmetric")
    coeffs = {}
    for d in range(cutoff + 1):
        total = 0
        for dvec in grassmannian_degree_tuples(r, d):
            # the vector-multiplet factor carries the (-1)^((r-1)|d|) sign
            factors = models.z_factor(model, dvec)
            expr = RationalExpression.from_factors(1, factors) * P
            assignments = [
                PoleAssignment(list(zip(var_names, pts)))
                for pts in itertools.product(lams, repeat=r)
            ]
            total = normalize(total + sum_residues(expr, assignments))
        if not is_zero(total):
            coeffs[(d,)] = normalize(total * Fraction(1, math.factorial(r)))
    return QSeries(("q",), (cutoff,), coeffs)
