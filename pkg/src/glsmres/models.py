"""Gauge theory data and the general degree-summed residue correlator.

A model is a gauge rank, a list of matter fields (integer weight covector,
even R-charge, bound twisted mass), root data for the nonabelian part, an FI
vector selecting the residue chamber, and a pointed cone of degrees to sum
over.  The per-degree one-loop factor is assembled as a factored rational
expression and fed to the Jeffrey-Kirwan residue; the correlator is the
resulting series, graded by the pairing of a grading vector with the degree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import MultiPoly
from .residues import JKFactor, jk_residue
from .scalars import is_zero, normalize, to_scalar
from .series import QSeries


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class MatterField:
    weight: tuple  # integer covector on the Cartan torus
    r_charge: int = 0
    mass: object = 0  # bound twisted mass value (exact scalar)

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(w) for w in self.weight))
        if self.r_charge % 2 != 0:
            raise ModelError("R-charges must be even integers")
        object.__setattr__(self, "mass", to_scalar(self.mass))


def _full_positive_roots(rank):
    roots = []
    for i in range(rank):
        for j in range(i + 1, rank):
            alpha = [0] * rank
            alpha[i] = 1
            alpha[j] = -1
            roots.append(tuple(alpha))
    return roots


@dataclass
class GlsmModel:
    rank: int
    matter: list
    positive_roots: list = field(default_factory=list)
    weyl_order: int = 1
    eta: tuple = ()
    degree_rays: list = field(default_factory=list)
    eta_deg: tuple = None
    z: object = None  # bound domain-rotation parameter, when used
    var_names: tuple = None

    def __post_init__(self):
        self.matter = [
            m if isinstance(m, MatterField) else MatterField(*m) for m in self.matter
        ]
        self.positive_roots = [tuple(int(a) for a in r) for r in self.positive_roots]
        for m in self.matter:
            if len(m.weight) != self.rank:
                raise ModelError("matter weight length must equal the rank")
        for r in self.positive_roots:
            if len(r) != self.rank:
                raise ModelError("root length must equal the rank")
        if not self.eta:
            self.eta = (Fraction(1),) * self.rank
        self.eta = tuple(Fraction(e) for e in self.eta)
        if not self.degree_rays:
            self.degree_rays = [
                tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)
            ]
        self.degree_rays = [tuple(int(x) for x in r) for r in self.degree_rays]
        if self.eta_deg is None:
            self.eta_deg = self.eta
        self.eta_deg = tuple(Fraction(e) for e in self.eta_deg)
        if self.var_names is None:
            self.var_names = tuple(f"x{i+1}" for i in range(self.rank))
        if self.z is not None:
            self.z = to_scalar(self.z)
        self._check_weyl()
        self._check_cone()

    def _check_weyl(self):
        """Only the shipped families: trivial (abelian) or the full
        permutation root system with |W| = rank!."""
        if not self.positive_roots:
            if self.weyl_order != 1:
                raise ModelError("abelian models have trivial Weyl group")
            return
        expected = set(_full_positive_roots(self.rank))
        got = set(self.positive_roots)
        if got == expected:
            if self.weyl_order != math.factorial(self.rank):
                raise ModelError(
                    f"Weyl order must be {math.factorial(self.rank)} for the full root system"
                )
            return
        raise ModelError("unsupported root data (trivial or full A-type only)")

    def _check_cone(self):
        for ray in self.degree_rays:
            pairing = sum(e * r for e, r in zip(self.eta_deg, ray))
            if pairing <= 0:
                raise ModelError(
                    "degree cone is not pointed against the grading vector"
                )

    # -- degree enumeration ------------------------------------------------

    def degrees(self, cutoff: int):
        """All cone points d with <eta_deg, d> <= cutoff."""
        seen = {}
        rays = self.degree_rays
        grades = [sum(e * r for e, r in zip(self.eta_deg, ray)) for ray in rays]

        def rec(i, current, grade):
            if i == len(rays):
                seen[tuple(current)] = True
                return
            c = 0
            while grade + c * grades[i] <= cutoff:
                rec(
                    i + 1,
                    [x + c * r for x, r in zip(current, rays[i])],
                    grade + c * grades[i],
                )
                c += 1

        rec(0, [0] * self.rank, Fraction(0))
        return sorted(seen)

    def grade(self, d):
        g = sum(e * x for e, x in zip(self.eta_deg, d))
        if g != int(g):
            raise ModelError("grading vector must give integer degrees on the cone")
        return int(g)

    def is_weyl_invariant(self, p: MultiPoly) -> bool:
        if not self.positive_roots:
            return True
        return p.is_symmetric(self.var_names)


def _alpha_form(alpha, var_names):
    return MultiPoly.linear(var_names, alpha)


def z_factor(model: GlsmModel, d) -> list:
    """One-loop factor at degree d, as a list of (linear form, exponent).

    Vector part: prod_{alpha>0} (-1)^(alpha(d)+1) alpha(x)^2; matter part:
    prod_i (w_i.x + mass_i)^(R_i - w_i(d) - 1).  The sign is carried as a
    constant factor (first list entry with exponent 1).
    """
    factors = []
    sign = 1
    for alpha in model.positive_roots:
        ad = sum(a * x for a, x in zip(alpha, d))
        if (ad + 1) % 2 == 1:
            sign = -sign
        factors.append((_alpha_form(alpha, model.var_names), 2))
    for m in model.matter:
        wd = sum(w * x for w, x in zip(m.weight, d))
        exponent = m.r_charge - wd - 1
        if exponent != 0:
            factors.append(
                (MultiPoly.linear(model.var_names, m.weight, m.mass), exponent)
            )
    if sign == -1:
        factors.insert(0, (MultiPoly.constant(-1, model.var_names), 1))
    return factors


def z_factor_equivariant(model: GlsmModel, d, z=None) -> list:
    """One-loop factor with the domain-rotation parameter z.

    Vector part: prod (-1)^(alpha(d)+1) alpha(x) alpha(x - d z); this is the
    orientation for which the degree-d correlator factorizes through the
    hypergeometric coefficients (the same form the nonabelian complete
    intersection displays use), and it degenerates to alpha(x)^2 at z = 0.
    Matter part per field: the semi-infinite quotient collapses to the finite
    window between -1 and w(d) - R: levels l contribute
    (w.x + mass - (l + R/2) z), in the numerator for w(d) - R < l <= -1 and in
    the denominator for 0 <= l <= w(d) - R.  At z = 0 the whole factor equals
    z_factor exactly.
    """
    if z is None:
        z = model.z
    if z is None:
        raise ModelError("model has no bound z value")
    z = to_scalar(z)
    factors = []
    sign = 1
    for alpha in model.positive_roots:
        ad = sum(a * x for a, x in zip(alpha, d))
        if (ad + 1) % 2 == 1:
            sign = -sign
        factors.append((_alpha_form(alpha, model.var_names), 1))
        factors.append(
            (MultiPoly.linear(model.var_names, alpha, to_scalar(-ad * z)), 1)
        )
    for m in model.matter:
        wd = sum(w * x for w, x in zip(m.weight, d))
        top = wd - m.r_charge
        half = Fraction(m.r_charge, 2)
        if top >= 0:
            for l in range(0, top + 1):
                shift = normalize(m.mass - (l + half) * z)
                factors.append(
                    (MultiPoly.linear(model.var_names, m.weight, shift), -1)
                )
        else:
            for l in range(top + 1, 0):
                shift = normalize(m.mass - (l + half) * z)
                factors.append(
                    (MultiPoly.linear(model.var_names, m.weight, shift), 1)
                )
    if sign == -1:
        factors.insert(0, (MultiPoly.constant(-1, model.var_names), 1))
    return factors


VARIANTS = ("plain", "Gm", "H", "HxGm")


def correlator_terms(model: GlsmModel, insertion: MultiPoly, cutoff: int, variant: str = "plain") -> dict:
    """Per-degree residue values {d: JK(Z_d * P) / |W|} up to the cutoff."""
    if variant not in VARIANTS:
        raise ModelError(f"unknown variant {variant!r}; one of {VARIANTS}")
    if not model.is_weyl_invariant(insertion):
        raise ModelError("insertion must be Weyl invariant")
    use_z = variant in ("Gm", "HxGm")
    out = {}
    for d in model.degrees(cutoff):
        factors = (
            z_factor_equivariant(model, d) if use_z else z_factor(model, d)
        )
        value = _jk_of_factored(model, insertion, factors)
        if not is_zero(value):
            out[d] = normalize(value * Fraction(1, model.weyl_order))
    return out


def _jk_of_factored(model, insertion, factors):
    numerator = insertion.with_vars(
        tuple(dict.fromkeys(tuple(insertion.vars) + model.var_names))
    )
    jk_factors = []
    for form, e in factors:
        if e > 0:
            if form.is_constant():
                numerator = numerator * form.as_scalar() ** e
            else:
                numerator = numerator * form ** e
        elif e < 0:
            weight = [0] * model.rank
            shift = form.constant_term()
            for i, name in enumerate(model.var_names):
                c = form.coefficient({name: 1})
                c = c.constant_term() if not c.is_zero() else 0
                weight[i] = int(c)
            jk_factors.append(JKFactor(tuple(weight), -e, shift))
    if not jk_factors:
        return 0
    return jk_residue(numerator, jk_factors, model.eta, model.var_names)


def correlator(
    model: GlsmModel,
    insertion: MultiPoly,
    cutoff: int,
    variant: str = "plain",
    series_var: str = "q",
) -> QSeries:
    """Degree-summed correlator as a truncated series in e^(FI) bookkeeping.

    The coefficient at power k collects every degree with <eta_deg, d> = k;
    no sign dictionary is applied here (raw residue output).
    """
    terms = correlator_terms(model, insertion, cutoff, variant)
    coeffs = {}
    for d, val in terms.items():
        k = model.grade(d)
        coeffs[(k,)] = normalize(coeffs.get((k,), 0) + val)
    return QSeries((series_var,), (cutoff,), coeffs)


# -- shipped model families --------------------------------------------------


def projective_model(n: int, lambdas=None, z=None) -> GlsmModel:
    """P^(n-1): rank 1, n fields of weight 1, masses -lambda_i."""
    lams = [0] * n if lambdas is None else list(lambdas)
    if len(lams) != n:
        raise ModelError("need one mass per homogeneous coordinate")
    matter = [MatterField((1,), 0, normalize(-to_scalar(l))) for l in lams]
    return GlsmModel(rank=1, matter=matter, eta=(1,), z=z)


def projective_ci_model(n: int, degrees, lambdas=None, z=None) -> GlsmModel:
    """P^(n-1) with constraint fields of weight -l_i and R-charge 2."""
    base = projective_model(n, lambdas, z)
    matter = list(base.matter)
    for l in degrees:
        if l <= 0:
            raise ModelError("constraint degrees must be positive")
        matter.append(MatterField((-int(l),), 2, 0))
    return GlsmModel(rank=1, matter=matter, eta=(1,), z=z)


def concave_model(n: int, degrees, lambdas=None, z=None) -> GlsmModel:
    """Total space of a sum of negative line bundles: weight -l_i, R-charge 0."""
    base = projective_model(n, lambdas, z)
    matter = list(base.matter)
    for l in degrees:
        if l <= 0:
            raise ModelError("bundle degrees must be positive")
        matter.append(MatterField((-int(l),), 0, 0))
    return GlsmModel(rank=1, matter=matter, eta=(1,), z=z)


def grassmannian_model(r: int, n: int, lambdas=None, z=None) -> GlsmModel:
    """Gr(r, n): rank r, n fields per Cartan direction, full root system."""
    lams = [0] * n if lambdas is None else list(lambdas)
    if len(lams) != n:
        raise ModelError("need one mass per flavor")
    matter = []
    for i in range(r):
        w = tuple(int(k == i) for k in range(r))
        for l in lams:
            matter.append(MatterField(w, 0, normalize(-to_scalar(l))))
    return GlsmModel(
        rank=r,
        matter=matter,
        positive_roots=_full_positive_roots(r),
        weyl_order=math.factorial(r),
        eta=(1,) * r,
        eta_deg=(1,) * r,
        z=z,
    )


def grassmannian_ci_model(r: int, n: int, bundle_weights, lambdas=None, z=None) -> GlsmModel:
    """Gr(r, n) with constraint fields of weight -delta and R-charge 2."""
    base = grassmannian_model(r, n, lambdas, z)
    matter = list(base.matter)
    for w in bundle_weights:
        matter.append(MatterField(tuple(-int(x) for x in w), 2, 0))
    return GlsmModel(
        rank=r,
        matter=matter,
        positive_roots=base.positive_roots,
        weyl_order=base.weyl_order,
        eta=(1,) * r,
        eta_deg=(1,) * r,
        z=z,
    )


def toric_model(charge_matrix, eta, z=None, degree_rays=None) -> GlsmModel:
    """Abelian model from an m x r charge matrix (rows are field weights)."""
    rows = [tuple(int(x) for x in row) for row in charge_matrix]
    if not rows:
        raise ModelError("empty charge matrix")
    rank = len(rows[0])
    matter = [MatterField(w, 0, 0) for w in rows]
    return GlsmModel(
        rank=rank,
        matter=matter,
        eta=tuple(eta),
        degree_rays=degree_rays or [],
        z=z,
    )


def tstar_grassmannian_model(r: int, n: int, lambdas, mu, z=None) -> GlsmModel:
    """Cotangent bundle of Gr(r, n): fundamental + antifundamental + adjoint.

    Fields: (e_i, R=0, -lambda_j), (-e_i, R=0, lambda_j - mu), and the full
    r x r adjoint block (e_i - e_j incl. diagonal, R=2, mu).
    """
    lams = [to_scalar(l) for l in lambdas]
    mu = to_scalar(mu)
    if len(lams) != n:
        raise ModelError("need one mass per flavor")
    if len(set(lams)) != n:
        raise ModelError("non-generic lambda, mu: coincident lambda values")
    for a in lams:
        for b in lams:
            if normalize(a - b + mu) == 0 or normalize(a - b - mu) == 0:
                raise ModelError("non-generic lambda, mu: lambda difference hits mu")
    matter = []
    for i in range(r):
        w = tuple(int(k == i) for k in range(r))
        wneg = tuple(-int(k == i) for k in range(r))
        for l in lams:
            matter.append(MatterField(w, 0, normalize(-l)))
            matter.append(MatterField(wneg, 0, normalize(l - mu)))
    for i in range(r):
        for j in range(r):
            w = tuple(int(k == i) - int(k == j) for k in range(r))
            matter.append(MatterField(w, 2, mu))
    return GlsmModel(
        rank=r,
        matter=matter,
        positive_roots=_full_positive_roots(r),
        weyl_order=math.factorial(r),
        eta=(1,) * r,
        z=z,
    )
