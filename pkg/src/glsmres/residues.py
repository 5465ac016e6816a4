"""Residue operators on rational expressions with factored denominators.

The central objects are quotients N / prod_j F_j^{p_j} with MultiPoly
numerator and factors.  Residues at a point are taken by exact Laurent
expansion: after shifting the variable, each factor splits as t^v * G with
G(0) a nonzero polynomial in the remaining variables, and the needed Laurent
coefficient is assembled without ever inverting a polynomial (only the scalar
product of the G(0) ends up in the output denominator, via
1/prod G = sum_k (-1)^k (prod G - C)^k / C^{k+1} with C = prod G(0)).

On top of the single-variable operator sit iterated residues, sums over pole
assignments, and the Jeffrey-Kirwan residue with cone selection by an FI
vector.  The JK residue handles affine arrangements: each denominator factor
is a linear form with an optional constant shift, intersection points are
enumerated from r-subsets of independent factors, and at every contributing
point the subset rule (unimodular change of variables + iterated Laurent
expansion at the origin, weighted by 1/|det|) is applied.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .poly import MultiPoly
from .scalars import inv, is_zero, normalize, scalar_div, to_scalar


class ResidueError(ValueError):
    pass


class RationalExpression:
    """numerator / prod factors^power, factors kept unexpanded."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.constant(num)
        self.num = num
        # constant factors fold into the numerator; the rest stay unexpanded
        den_clean = []
        scale = 1
        for f, p in den:
            if p == 0:
                continue
            if p < 0:
                raise ValueError("denominator powers must be positive")
            if not isinstance(f, MultiPoly):
                f = MultiPoly.constant(f)
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            if f.is_constant():
                scale = normalize(scale * inv(to_scalar(f.as_scalar())) ** p)
            else:
                den_clean.append((f, p))
        if scale != 1:
            self.num = self.num * scale
        self.den = tuple(den_clean)

    @staticmethod
    def from_factors(scalar_coeff, factors):
        """Build from a list of (linear form, integer exponent); negative
        exponents go to the denominator."""
        num = MultiPoly.constant(scalar_coeff)
        den = []
        for f, e in factors:
            if e > 0:
                num = num * f ** e
            elif e < 0:
                den.append((f, -e))
        return RationalExpression(num, den)

    def __mul__(self, other):
        if isinstance(other, RationalExpression):
            return RationalExpression(self.num * other.num, self.den + other.den)
        return RationalExpression(self.num * other, self.den)

    __rmul__ = __mul__

    def is_zero(self):
        return self.num.is_zero()

    def as_scalar(self):
        val = self.num.as_scalar()
        for f, p in self.den:
            c = f.as_scalar()
            val = normalize(val * inv(to_scalar(c)) ** p)
        return val

    def variables_used(self):
        used = set(self.num.variables_used())
        for f, _ in self.den:
            used |= f.variables_used()
        return used

    def __repr__(self):
        if not self.den:
            return f"RationalExpression({self.num})"
        den = " * ".join(f"({f})^{p}" if p > 1 else f"({f})" for f, p in self.den)
        return f"RationalExpression(({self.num}) / {den})"


def _shift_poly(p: MultiPoly, name: str, pole, tname: str) -> MultiPoly:
    """Substitute name -> pole + t."""
    t = MultiPoly.var(tname) + MultiPoly.constant(to_scalar(pole))
    return p.subs({name: t})


def _t_valuation_split(p: MultiPoly, tname: str):
    """Write p = t^v * g with g having a nonzero t-constant part."""
    if p.is_zero():
        raise ZeroDivisionError("zero factor in valuation split")
    ti = p.vars.index(tname) if tname in p.vars else None
    if ti is None:
        return 0, p
    v = min(e[ti] for e in p.terms)
    if v == 0:
        return 0, p
    terms = {}
    for e, c in p.terms.items():
        e2 = list(e)
        e2[ti] -= v
        terms[tuple(e2)] = c
    return v, MultiPoly(p.vars, terms)


def residue_at(expr: RationalExpression, name: str, pole) -> RationalExpression:
    """Coefficient of (name - pole)^(-1) in the Laurent expansion at the pole.

    Works for poles of arbitrary finite order; the result is a rational
    expression in the remaining variables (denominator factors that do not
    involve ``name`` pass through, and constant terms of shifted factors are
    accumulated into a single power in the output denominator).
    """
    pole = to_scalar(pole)
    tname = "_t"
    while tname in expr.variables_used():
        tname += "_"

    passthrough = []
    active = []
    for f, p in expr.den:
        if name in f.variables_used():
            active.append((_shift_poly(f, name, pole, tname), p))
        else:
            passthrough.append((f, p))

    num = _shift_poly(expr.num, name, pole, tname) if name in expr.num.variables_used() else expr.num

    # pole order from factor valuations
    order = 0
    units = []  # (g, p) with g(0) != 0 in t
    for f, p in active:
        v, g = _t_valuation_split(f, tname)
        order += v * p
        units.append((g, p))
    if order <= 0:
        return RationalExpression(MultiPoly.constant(0))

    K = order - 1  # need coefficient of t^K in num / prod units

    def trunc(p):
        return p.truncate_exponents({tname: K})

    num = trunc(num)
    if num.is_zero():
        return RationalExpression(MultiPoly.constant(0))

    B = MultiPoly.constant(1)
    C = MultiPoly.constant(1)
    for g, p in units:
        g0 = g.coefficient({tname: 0})
        if g0.is_zero():
            raise ResidueError("factor with vanishing constant part after shift")
        for _ in range(p):
            B = trunc(B * g)
            C = C * g0
    # 1/B = sum_k (-1)^k (B - C)^k / C^(k+1); (B - C) has t-valuation >= 1
    D = trunc(B - C)
    acc = MultiPoly.constant(0)
    power = num  # num * D^k, truncated
    c_pow = [MultiPoly.constant(1)]
    for _ in range(K + 1):
        c_pow.append(c_pow[-1] * C)
    sign = 1
    for k in range(K + 1):
        coeff_k = power.coefficient({tname: K})
        if not coeff_k.is_zero():
            acc = acc + sign * coeff_k * c_pow[K - k]
        if k < K:
            power = trunc(power * D)
            if power.is_zero():
                break
        sign = -sign

    if acc.is_zero():
        return RationalExpression(MultiPoly.constant(0))
    den = list(passthrough)
    if not C.is_constant():
        den.append((C, K + 1))
    else:
        acc = acc * inv(to_scalar(C.as_scalar())) ** (K + 1)
    return RationalExpression(acc, den)


@dataclass
class PoleAssignment:
    """One pole per integration variable, with the evaluation order recorded."""

    steps: tuple  # ((var, pole), ...) applied right to left

    def __init__(self, steps):
        object.__setattr__(self, "steps", tuple((v, to_scalar(p)) for v, p in steps))

    def points(self):
        return tuple(p for _, p in self.steps)


def iterated_residue(expr: RationalExpression, order) -> object:
    """Apply residue_at right-to-left along the (variable, pole) list."""
    if isinstance(order, PoleAssignment):
        order = order.steps
    out = expr
    for name, pole in reversed(list(order)):
        out = residue_at(out, name, pole)
        if out.is_zero():
            return 0
    return out.as_scalar()


def sum_residues(expr: RationalExpression, assignments) -> object:
    """Sum of iterated residues over a list of pole assignments."""
    assignments = [a if isinstance(a, PoleAssignment) else PoleAssignment(a) for a in assignments]
    seen = {}
    for a in assignments:
        key = a.points()
        if key in seen:
            raise ResidueError(f"non-generic parameters: coincident pole assignment {key}")
        seen[key] = True
    total = 0
    for a in assignments:
        total = normalize(total + iterated_residue(expr, a))
    return total


# -- Jeffrey-Kirwan ---------------------------------------------------------


def _primitive(vec):
    """Scale an integer/rational covector by a positive rational to a primitive
    integer vector (sign preserved)."""
    fr = [Fraction(x) for x in vec]
    from math import gcd, lcm

    denom = lcm(*[f.denominator for f in fr]) if fr else 1
    ints = [int(f * denom) for f in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero weight in arrangement")
    return tuple(x // g for x in ints)


@dataclass
class JKFactor:
    weight: tuple  # integer covector, nonzero
    power: int = 1
    shift: object = 0  # scalar constant: the factor is weight.x + shift

    def __post_init__(self):
        self.weight = tuple(int(w) for w in self.weight)
        if all(w == 0 for w in self.weight):
            raise ValueError("zero weight in arrangement")
        self.shift = to_scalar(self.shift)

    def form(self, var_names) -> MultiPoly:
        return MultiPoly.linear(var_names, self.weight, self.shift)


class Arrangement:
    """Rank, weights with multiplicities, and the FI vector eta.

    Validation helpers check projectivity (weights in an open half-space) and
    eta-genericity (eta off every cone wall spanned by rank-1 many weights).
    """

    def __init__(self, rank: int, weights, eta):
        self.rank = rank
        self.weights = [(_primitive(w), int(m)) for w, m in weights]
        self.eta = tuple(Fraction(e) for e in eta)
        if len(self.eta) != rank:
            raise ValueError("eta must have one entry per rank")

    def directions(self):
        seen = {}
        for w, _ in self.weights:
            seen[w] = True
        return list(seen)

    def check_projective(self):
        dirs = self.directions()
        if not _in_open_halfspace(dirs, self.rank):
            raise ResidueError("non-projective arrangement")

    def check_eta_generic(self):
        if _eta_on_wall(self.directions(), self.eta, self.rank):
            raise ResidueError("degenerate FI vector")


def _in_open_halfspace(dirs, rank):
    """Is there v with <w, v> > 0 for every direction w?

    Equivalent to 0 not lying in the convex hull of the directions; checked
    exactly via Caratheodory (affinely independent subsets of size <= rank+1).
    """
    if not dirs:
        return True
    if rank == 1:
        signs = {1 if w[0] > 0 else -1 for w in dirs}
        return len(signs) == 1
    for size in range(1, rank + 2):
        for subset in itertools.combinations(dirs, size):
            mat = [[Fraction(w[i]) for w in subset] for i in range(rank)]
            mat.append([Fraction(1)] * size)
            rhs = [Fraction(0)] * rank + [Fraction(1)]
            try:
                lam, free = linalg.solve(mat, rhs)
            except ValueError:
                continue
            if free == 0 and all(Fraction(x) >= 0 for x in lam):
                return False
    return True


def _eta_on_wall(dirs, eta, rank):
    """Does eta lie on a hyperplane spanned by rank-1 directions (or equal a
    scaled direction when rank is 1)?"""
    if rank == 1:
        return eta[0] == 0
    for subset in itertools.combinations(dirs, rank - 1):
        mat = [list(w) for w in subset] + [list(eta)]
        if linalg.det(mat) == 0:
            # eta in the span of the subset: also require the subset to be
            # linearly independent for this to be a genuine wall
            if linalg.null_space_dim([list(w) for w in subset]) == 1:
                return True
    return False


def _cone_contains(subset, eta, rank):
    """eta in the nonnegative span of the subset (which is a basis)."""
    mat = [[subset[j][i] for j in range(rank)] for i in range(rank)]
    coeffs, _ = linalg.solve(mat, list(eta))
    return all(Fraction(c) >= 0 for c in coeffs)


def _normalize_factor(f: JKFactor):
    """Positive-scale the linear form to a primitive covector.

    Returns (primitive weight, shift, power, scalar) where the original factor
    equals scalar * (weight.x + shift); the sign of the covector is preserved,
    so the direction data survives normalization.
    """
    w = _primitive(f.weight)
    scale = None
    for orig, prim in zip(f.weight, w):
        if orig != 0:
            scale = Fraction(orig, prim)
            break
    return w, to_scalar(scalar_div(f.shift, scale)), f.power, to_scalar(scale)


def _hyperplane_key(w, shift):
    """Identify (w, s) with (-w, -s): canonical representative has its first
    nonzero weight entry positive."""
    for x in w:
        if x != 0:
            if x < 0:
                return tuple(-y for y in w), to_scalar(-shift), -1
            return w, shift, 1
    raise ValueError("zero weight")


def jk_residue(numerator: MultiPoly, factors, eta, var_names=None) -> object:
    """Jeffrey-Kirwan residue of numerator / prod (w.x + shift)^p selected by eta.

    ``factors`` is a list of JKFactor (or (weight, power) / (weight, power,
    shift) tuples).  Affine arrangements are handled: intersection points are
    enumerated from subsets of independent hyperplanes, and at every point the
    subset rule is applied: for each set of rank-many distinct hyperplanes
    through the point with a direction choice whose nonnegative span contains
    eta, change variables unimodularly to the chosen forms and take the
    iterated Laurent expansion of the whole integrand at the origin, weighted
    by 1/|det|.  Multiplicities, regular factors, and same-hyperplane factors
    of the opposite direction are all handled inside the expansion.

    eta must be off every cone wall spanned by fewer than rank-many local
    directions ("degenerate FI vector" otherwise); the single-direction
    hyperplanes at a point must fit in an open half-space ("non-projective
    arrangement" otherwise).  eta should also avoid rays spanned by sums of
    weights when more than rank-many hyperplanes meet a point; the shipped
    model families satisfy this.
    """
    fs = []
    for f in factors:
        if isinstance(f, JKFactor):
            fs.append(f)
        elif len(f) == 2:
            fs.append(JKFactor(f[0], f[1]))
        else:
            fs.append(JKFactor(f[0], f[1], f[2]))
    rank = len(fs[0].weight) if fs else len(tuple(eta))
    if var_names is None:
        var_names = tuple(f"x{i+1}" for i in range(rank))
    eta = tuple(Fraction(e) for e in eta)

    # group factors by hyperplane; keep per-direction powers and the scalar
    # prefactors pulled out by normalization
    hyperplanes = {}  # key -> {direction sign: (weight, shift, power)}
    scalar_correction = 1
    for f in fs:
        w, shift, power, scale = _normalize_factor(f)
        scalar_correction = normalize(scalar_correction * inv(scale) ** power)
        kw, kshift, sign = _hyperplane_key(w, shift)
        slot = hyperplanes.setdefault((kw, kshift), {})
        if sign in slot:
            ww, ss, pp = slot[sign]
            slot[sign] = (ww, ss, pp + power)
        else:
            slot[sign] = (w, shift, power)

    numerator = numerator.with_vars(
        tuple(dict.fromkeys(tuple(numerator.vars) + tuple(var_names)))
    ) * scalar_correction

    # flat factor list for assembling integrands
    all_factors = []
    for slot in hyperplanes.values():
        for w, s, p in slot.values():
            all_factors.append(JKFactor(w, p, s))

    # candidate intersection points from independent hyperplane subsets
    keys = list(hyperplanes)
    points = {}
    for subset in itertools.combinations(range(len(keys)), rank):
        mat = [list(keys[i][0]) for i in subset]
        if linalg.det(mat) == 0:
            continue
        try:
            rhs = [-Fraction(to_scalar(keys[i][1])) for i in subset]
        except TypeError:
            raise ResidueError("non-rational shifts not supported in JK residue")
        pt, _ = linalg.solve(mat, rhs)
        points[tuple(Fraction(x) for x in pt)] = True

    total = 0
    for pt in points:
        local = []  # (hyperplane key, {sign: (w, shift, power)})
        for key, slot in hyperplanes.items():
            probe = JKFactor(key[0], 1, key[1])
            if is_zero(_eval_affine(probe, pt)):
                local.append((key, slot))
        if len(local) < rank:
            continue
        # projectivity: single-direction hyperplanes must fit in an open
        # half-space (a hyperplane carrying both directions cannot obstruct)
        single_dirs = [
            next(iter(slot.values()))[0] for _, slot in local if len(slot) == 1
        ]
        if not _in_open_halfspace(list(dict.fromkeys(single_dirs)), rank):
            raise ResidueError("non-projective arrangement")
        local_dirs = []
        for _, slot in local:
            for w, _, _ in slot.values():
                local_dirs.append(w)
        if _eta_on_wall(list(dict.fromkeys(local_dirs)), eta, rank):
            raise ResidueError("degenerate FI vector")
        for subset in itertools.combinations(local, rank):
            # pick one direction per chosen hyperplane such that the cone of
            # the chosen directions contains eta; genericity makes the choice
            # unique when it exists
            for choice in itertools.product(*[list(slot.values()) for _, slot in subset]):
                dirs = [c[0] for c in choice]
                mat = [list(d) for d in dirs]
                d = linalg.det(mat)
                if d == 0:
                    continue
                if not _cone_contains(dirs, eta, rank):
                    continue
                value = _subset_residue(numerator, all_factors, choice, var_names, rank)
                if not is_zero(value):
                    total = normalize(total + scalar_div(value, abs(Fraction(d))))
                break
    return normalize(total)


def _eval_affine(h: JKFactor, pt):
    acc = to_scalar(h.shift)
    for w, p in zip(h.weight, pt):
        acc = acc + w * p
    return normalize(acc)


def _subset_residue(numerator, all_factors, choice, var_names, rank):
    """Iterated residue at the subset's intersection point in the subset's own
    coordinates y_k = w_k.x + shift_k."""
    mat = [list(c[0]) for c in choice]
    minv = linalg.invert_matrix(mat)  # x = M^{-1} (y - shift)
    ynames = tuple(f"_y{i+1}" for i in range(rank))
    subs_map = {}
    for i, xn in enumerate(var_names):
        expr = MultiPoly.constant(0, ynames)
        for j, yn in enumerate(ynames):
            if minv[i][j] != 0:
                expr = expr + (MultiPoly.var(yn) - choice[j][1]) * minv[i][j]
        subs_map[xn] = expr

    num = numerator.subs(subs_map)
    den = []
    for h in all_factors:
        f = h.form(var_names).subs(subs_map)
        den.append((f, h.power))
    expr = RationalExpression(num, den)
    # eliminate y_1 first (innermost), i.e. list it last
    steps = [(yn, 0) for yn in reversed(ynames)]
    return iterated_residue(expr, steps)
