"""Effective potential terms, exponentiated gradients, and Bethe-type systems.

The effective potential itself carries logarithms and is only represented
structurally; everything computable goes through its exponentiated gradient,
which is an exact rational function times e^(FI) and a tracked sign.  The
root-reflection term contributes -pi sqrt(-1) per positive root, entering all
formulas only through that sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .models import GlsmModel
from .poly import MultiPoly
from .scalars import is_zero, normalize, scalar_str, to_scalar


class PotentialError(ValueError):
    pass


@dataclass
class EffectivePotential:
    """Structural form: FI pairing, root list (each with a -pi sqrt(-1)
    coefficient, stored as sign data), and matter terms (linear form,
    multiplicity)."""

    rank: int
    roots: list
    matter_forms: list  # (MultiPoly linear form, multiplicity)

    @staticmethod
    def of_model(model: GlsmModel):
        forms = {}
        for m in model.matter:
            form = MultiPoly.linear(model.var_names, m.weight, m.mass)
            key = str(form)
            if key in forms:
                forms[key] = (form, forms[key][1] + 1)
            else:
                forms[key] = (form, 1)
        return EffectivePotential(
            rank=model.rank,
            roots=list(model.positive_roots),
            matter_forms=list(forms.values()),
        )


@dataclass
class ExpGradient:
    """e^(d/dx_k of the effective potential) as exact structured data:
    sign * e^(t_k) * prod_factors (form ^ exponent)."""

    variable: str
    sign: int
    factors: list  # (MultiPoly, int exponent), exponents may be negative

    def numerator(self) -> MultiPoly:
        out = MultiPoly.constant(self.sign)
        for f, e in self.factors:
            if e > 0:
                out = out * f ** e
        return out

    def denominator(self) -> MultiPoly:
        out = MultiPoly.constant(1)
        for f, e in self.factors:
            if e < 0:
                out = out * f ** (-e)
        return out

    def __str__(self):
        sign = "-" if self.sign < 0 else ""
        parts = [f"{sign}e^t_{self.variable}"]
        for f, e in self.factors:
            parts.append(f"({f})^{e}")
        return "*".join(parts)


def exp_grad(model: GlsmModel, k: int) -> ExpGradient:
    """Exponentiated gradient in the k-th Cartan direction (0-based).

    e^(t_k) * (-1)^(sum of root pairings) * prod_i (w_i.x + mass_i)^(-w_i(e_k));
    the root term contributes the exact sign (-1)^(sum_alpha alpha(e_k)).
    """
    if not (0 <= k < model.rank):
        raise PotentialError("variable index out of range")
    sign = 1
    for alpha in model.positive_roots:
        if alpha[k] % 2 != 0:
            sign = -sign
    factors = {}
    for m in model.matter:
        e = -m.weight[k]
        if e == 0:
            continue
        form = MultiPoly.linear(model.var_names, m.weight, m.mass)
        key = str(form)
        if key in factors:
            f, acc = factors[key]
            factors[key] = (f, acc + e)
        else:
            factors[key] = (form, e)
    flist = [(f, e) for f, e in factors.values() if e != 0]
    return ExpGradient(model.var_names[k], sign, flist)


@dataclass
class BetheEquation:
    """lhs_num/lhs_den = coeff * e^t * rhs_num/rhs_den, all MultiPoly."""

    variable: str
    lhs_num: MultiPoly
    lhs_den: MultiPoly
    coeff: object  # exact scalar, carries the (-1)^n-type sign
    rhs_num: MultiPoly
    rhs_den: MultiPoly

    def cleared(self):
        """(lhs_num * rhs_den, coeff * rhs_num * lhs_den): the two sides of
        the polynomial identity obtained by clearing denominators."""
        return self.lhs_num * self.rhs_den, self.rhs_num * self.lhs_den * self.coeff

    def to_json(self):
        return {
            "variable": self.variable,
            "lhs_num": str(self.lhs_num),
            "lhs_den": str(self.lhs_den),
            "coeff": scalar_str(self.coeff),
            "rhs_num": str(self.rhs_num),
            "rhs_den": str(self.rhs_den),
        }


def bethe_equations(model: GlsmModel) -> list:
    """The unit-gradient system, arranged with flavor ratios on the left and
    interaction ratios (times the exact sign) on the right.

    For each Cartan direction k, e^(grad_k) = 1 is rewritten by moving the
    factors whose weight is supported only on direction k to the left-hand
    side and the interaction factors to the right; the accumulated sign sits
    in the right-hand coefficient.
    """
    out = []
    for k in range(model.rank):
        g = exp_grad(model, k)
        lhs_num = MultiPoly.constant(1)
        lhs_den = MultiPoly.constant(1)
        rhs_num = MultiPoly.constant(1)
        rhs_den = MultiPoly.constant(1)
        sign = g.sign
        for form, e in g.factors:
            # normalize every factor so its x_k coefficient is +1
            c = form.coefficient({model.var_names[k]: 1})
            lead = c.as_scalar() if not c.is_zero() else 0
            if lead == -1:
                form = -form
                if e % 2 != 0:
                    sign = -sign
            weight_support = {
                v for v in form.variables_used() if v in model.var_names
            }
            if weight_support <= {model.var_names[k]}:
                # flavor factors go left with inverted exponent
                if e < 0:
                    lhs_num = lhs_num * form ** (-e)
                else:
                    lhs_den = lhs_den * form ** e
            else:
                if e > 0:
                    rhs_num = rhs_num * form ** e
                else:
                    rhs_den = rhs_den * form ** (-e)
        out.append(
            BetheEquation(
                variable=model.var_names[k],
                lhs_num=lhs_num,
                lhs_den=lhs_den,
                coeff=sign,
                rhs_num=rhs_num,
                rhs_den=rhs_den,
            )
        )
    return out


@dataclass
class VacuumReport:
    variable: str
    passed: bool
    lhs: str
    rhs: str
    detail: str = ""


def check_vacuum_relation(model: GlsmModel, relation_poly: MultiPoly, q_coeff=1, k: int = 0) -> VacuumReport:
    """Verify that clearing denominators in exp_grad(model, k) = 1 gives
    relation_poly = q_coeff * q.

    The cleared unit equation reads denominator = sign * numerator * e^(t_k);
    the declared relation passes when relation_poly * (sign * numerator *
    q_coeff^(-1)) equals the denominator as polynomials, i.e. when
    denominator * q_coeff == sign * numerator * relation_poly.
    """
    g = exp_grad(model, k)
    lhs = g.denominator() * to_scalar(q_coeff)
    rhs = g.numerator() * relation_poly
    ok = lhs == rhs
    return VacuumReport(
        variable=g.variable,
        passed=ok,
        lhs=str(lhs),
        rhs=str(rhs),
        detail="cleared unit-gradient equation",
    )
