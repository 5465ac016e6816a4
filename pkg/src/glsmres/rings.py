"""Presented cohomology rings with exact integration, plus a float root-sum oracle.

Supported presentations:

* projective space P^{n-1}: one variable with x^n -> 0, or the equivariant
  relation prod_i (x - lambda_i) -> 0 with bound rational lambda;
* products of projective factors (independent variables, one relation each);
* Grassmannian Gr(r, n): integration is routed through the torus quotient,
  i.e. a product of projective factors with the root-product insertion
  prod_{i != j} (x_i - x_j) and a 1/r! prefactor, classically and
  equivariantly.  The quantum Grassmannian ring is deliberately not presented
  by relations; quantum integrals are checked against the float root-sum
  oracle instead.

Quantum reduction for projective space sends x^n to q (more generally the
equivariant relation to q), turning coefficients into q-series.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

from . import linalg
from .poly import MultiPoly, poly_divmod
from .scalars import inv, is_zero, normalize, to_scalar
from .series import QSeries


class RingError(ValueError):
    pass


def elementary_symmetric(k: int, var_names) -> MultiPoly:
    """sigma_k of the given variables."""
    var_names = tuple(var_names)
    out = MultiPoly.constant(0, var_names)
    for combo in itertools.combinations(range(len(var_names)), k):
        term = MultiPoly.constant(1, var_names)
        for i in combo:
            term = term * MultiPoly.var(var_names[i])
        out = out + term
    return out


def root_product(var_names) -> MultiPoly:
    """prod_{i != j} (x_i - x_j); the square of the Vandermonde up to sign."""
    var_names = tuple(var_names)
    out = MultiPoly.constant(1, var_names)
    for i, j in itertools.permutations(range(len(var_names)), 2):
        out = out * (MultiPoly.var(var_names[i]) - MultiPoly.var(var_names[j]))
    return out


class ProjectiveFactor:
    """One projective factor: variable name, dimension n, optional lambdas."""

    def __init__(self, name: str, n: int, lambdas=None):
        self.name = name
        self.n = n
        self.lambdas = None if lambdas is None else tuple(to_scalar(l) for l in lambdas)
        if self.lambdas is not None:
            if len(self.lambdas) != n:
                raise RingError("need one mass parameter per homogeneous coordinate")
            if len(set(self.lambdas)) != n:
                raise RingError("coincident mass parameters")

    def modulus(self) -> MultiPoly:
        x = MultiPoly.var(self.name)
        if self.lambdas is None:
            return x ** self.n
        out = MultiPoly.constant(1, (self.name,))
        for l in self.lambdas:
            out = out * (x - l)
        return out


class RingOracle:
    """A presented ring: product of projective factors, with optional Weyl
    (Grassmannian) structure for integration."""

    def __init__(self, factors, weyl_group_order=1, grassmannian=False):
        self.factors = list(factors)
        self.weyl_group_order = weyl_group_order
        self.grassmannian = grassmannian
        self.var_names = tuple(f.name for f in self.factors)
        names = set(self.var_names)
        if len(names) != len(self.factors):
            raise RingError("duplicate ring variable names")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def projective(n: int, lambdas=None, name: str = "x"):
        return RingOracle([ProjectiveFactor(name, n, lambdas)])

    @staticmethod
    def projective_product(ns, lambdas=None, names=None):
        ns = tuple(ns)
        if names is None:
            names = tuple(f"x{i+1}" for i in range(len(ns)))
        lams = lambdas if lambdas is not None else [None] * len(ns)
        return RingOracle(
            [ProjectiveFactor(nm, n, lam) for nm, n, lam in zip(names, ns, lams)]
        )

    @staticmethod
    def grassmannian(r: int, n: int, lambdas=None, names=None):
        """Gr(r, n) presented on the torus quotient (P^{n-1})^r."""
        if names is None:
            names = tuple(f"x{i+1}" for i in range(r))
        lams = [lambdas] * r
        oracle = RingOracle(
            [ProjectiveFactor(nm, n, lam) for nm, lam in zip(names, lams)],
            weyl_group_order=math.factorial(r),
            grassmannian=True,
        )
        return oracle

    @property
    def flavor(self):
        equivariant = any(f.lambdas is not None for f in self.factors)
        return "equivariant" if equivariant else "classical"

    def dimension(self):
        base = sum(f.n - 1 for f in self.factors)
        if self.grassmannian:
            r = len(self.factors)
            base -= r * (r - 1)
        return base

    # -- reduction --------------------------------------------------------

    def reduce(self, p: MultiPoly) -> MultiPoly:
        """Normal form modulo the per-variable relations."""
        p = p.with_vars(tuple(dict.fromkeys(tuple(p.vars) + self.var_names)))
        for f in self.factors:
            if p.degree_in(f.name) >= f.n:
                _, p = poly_divmod(p, f.modulus().with_vars(p.vars), f.name)
        return p

    def reduce_quantum(self, p: MultiPoly, q_order: int, q_name: str = "q") -> QSeries:
        """Reduction in the quantum ring: the relation polynomial is replaced
        by the series bookkeeping variable rather than by zero."""
        if self.grassmannian:
            raise RingError("no relation presentation for the quantum Grassmannian ring")
        if len(self.factors) != 1:
            raise RingError("quantum reduction is implemented for a single projective factor")
        f = self.factors[0]
        name = f.name
        coeffs = {}  # q-degree -> MultiPoly
        work = {0: p.with_vars((name,)) if p.variables_used() <= {name} else p}
        modulus = f.modulus()
        # relation: modulus = q, i.e. x^n -> q + (x^n - modulus)
        correction = MultiPoly.var(name) ** f.n - modulus  # degree < n
        while work:
            deg, poly = work.popitem()
            while poly.degree_in(name) >= f.n:
                d = poly.degree_in(name)
                lead = poly.coefficient({name: d})
                high = lead * MultiPoly.var(name) ** (d - f.n)
                poly = poly - high * MultiPoly.var(name) ** f.n + high * correction
                if deg + 1 <= q_order:  # carries only flow to higher q-degree
                    work[deg + 1] = work.get(deg + 1, MultiPoly.constant(0)) + high
            if deg <= q_order and not poly.is_zero():
                coeffs[(deg,)] = coeffs.get((deg,), MultiPoly.constant(0)) + poly
        return QSeries((q_name,), (q_order,), coeffs)

    # -- integration -------------------------------------------------------

    def _check_symmetric(self, p: MultiPoly):
        if self.grassmannian and not p.is_symmetric(self.var_names):
            raise RingError("insertion must be Weyl invariant (symmetric)")

    def integrate_classical(self, p: MultiPoly):
        """Coefficient extraction against the top monomial (times the root
        product and 1/r! in the Grassmannian case)."""
        for f in self.factors:
            if f.lambdas is not None:
                raise RingError("use integrate_equivariant on equivariant rings")
        self._check_symmetric(p)
        if self.grassmannian:
            p = p * root_product(self.var_names)
        p = self.reduce(p)
        top = {f.name: f.n - 1 for f in self.factors}
        val = p.coefficient(top)
        out = val.as_scalar()
        if self.grassmannian:
            out = normalize(out * inv(self.weyl_group_order))
        return out

    def integrate_equivariant(self, p: MultiPoly):
        """Fixed-point localization sum; exact in the bound mass parameters."""
        self._check_symmetric(p)
        if self.grassmannian:
            return self._integrate_martin(p)
        total = 0
        for assignment, euler in self._fixed_points():
            val = p.subs(assignment)
            total = total + val.as_scalar() * inv(euler)
        return normalize(total)

    def _fixed_points(self):
        """(assignment, equivariant Euler scalar) per torus-fixed point."""
        per_factor = []
        for f in self.factors:
            if f.lambdas is None:
                raise RingError("equivariant integration needs bound mass parameters")
            entries = []
            for i, li in enumerate(f.lambdas):
                euler = 1
                for j, lj in enumerate(f.lambdas):
                    if j != i:
                        euler = euler * (li - lj)
                entries.append((li, normalize(euler)))
            per_factor.append(entries)
        for combo in itertools.product(*per_factor):
            assignment = {f.name: c[0] for f, c in zip(self.factors, combo)}
            euler = 1
            for c in combo:
                euler = euler * c[1]
            yield assignment, normalize(euler)

    def _integrate_martin(self, p: MultiPoly):
        """Sum over r-subsets of the lambdas with the root-product insertion."""
        r = len(self.factors)
        f0 = self.factors[0]
        if f0.lambdas is None:
            raise RingError("equivariant integration needs bound mass parameters")
        lams = f0.lambdas
        n = f0.n
        insertion = p * root_product(self.var_names)
        total = 0
        for subset in itertools.combinations(range(n), r):
            assignment = {self.var_names[i]: lams[subset[i]] for i in range(r)}
            val = insertion.subs(assignment).as_scalar()
            if is_zero(val):
                continue
            euler = 1
            for i in range(r):
                for j in range(n):
                    if j != subset[i]:
                        euler = euler * (lams[subset[i]] - lams[j])
            total = total + val * inv(normalize(euler))
        return normalize(total)

    def invert(self, p: MultiPoly) -> MultiPoly:
        """Ring inverse by exact linear solve in the monomial basis."""
        basis = list(
            itertools.product(*[range(f.n) for f in self.factors])
        )
        index = {b: i for i, b in enumerate(basis)}
        dim = len(basis)
        # multiplication matrix of p acting on the basis
        cols = []
        for b in basis:
            mono = MultiPoly(self.var_names, {tuple(b): 1})
            prod = self.reduce(p * mono).with_vars(self.var_names)
            col = [0] * dim
            for exp, c in prod.terms.items():
                col[index[exp]] = c
            cols.append(col)
        mat = [[cols[j][i] for j in range(dim)] for i in range(dim)]
        rhs = [0] * dim
        rhs[index[(0,) * len(self.factors)]] = 1
        try:
            sol, free = linalg.solve(mat, rhs)
        except ValueError:
            raise RingError("not invertible at these parameter values")
        if free:
            raise RingError("not invertible at these parameter values")
        terms = {b: to_scalar(sol[i]) for b, i in index.items() if not is_zero(sol[i])}
        return MultiPoly(self.var_names, terms)


def quantum_projective_integral(n: int, p: MultiPoly, q_order: int, name: str = "x") -> QSeries:
    """Integral of the quantum reduction over P^{n-1}: the q-series whose
    coefficients are the x^{n-1} parts of the reduced class."""
    oracle = RingOracle.projective(n, name=name)
    reduced = oracle.reduce_quantum(p, q_order)
    coeffs = {}
    for deg in reduced.degrees():
        val = reduced.coefficient(deg)
        if isinstance(val, MultiPoly):
            c = val.coefficient({name: n - 1})
            if not c.is_zero():
                coeffs[deg] = c.as_scalar()
        elif n == 1:
            coeffs[deg] = val
    return QSeries(("q",), (q_order,), coeffs)


def vi_oracle_float(r: int, n: int, q_value: complex, P: MultiPoly) -> complex:
    """Root-sum evaluation of Grassmannian quantum integrals in complex doubles.

    Sums P (times the root product for r > 1) over r-tuples of n-th roots of
    (-1)^(r-1) q, divided by prod_i x_i^{n-1}, weighted by 1/(r! n^r).
    """
    if q_value == 0:
        raise ValueError("q must be nonzero for the root-sum oracle")
    target = ((-1) ** (r - 1)) * complex(q_value)
    base = target ** (1.0 / n)
    roots = [base * cmath.exp(2j * cmath.pi * k / n) for k in range(n)]
    var_names = tuple(f"x{i+1}" for i in range(r))
    P = P.with_vars(tuple(dict.fromkeys(tuple(P.vars) + var_names)))
    # float evaluation of P and the root product
    total = 0 + 0j
    for combo in itertools.product(roots, repeat=r):
        val = _eval_complex(P, dict(zip(var_names, combo)))
        for i in range(r):
            for j in range(r):
                if i != j:
                    val *= combo[i] - combo[j]
        denom = 1 + 0j
        for x in combo:
            denom *= x ** (n - 1)
        total += val / denom
    return total / (math.factorial(r) * n ** r)


def _eval_complex(p: MultiPoly, assignment: dict) -> complex:
    from .scalars import scalar_to_complex

    total = 0 + 0j
    for exp, c in p.terms.items():
        term = scalar_to_complex(c)
        for name, e in zip(p.vars, exp):
            if e:
                term *= assignment[name] ** e
        total += term
    return total
