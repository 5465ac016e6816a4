"""Sparse multivariate polynomials over the exact scalar fields.

Terms are stored as a map from exponent tuples to nonzero coefficients, with
an ordered tuple of variable names.  Binary operations merge variable sets by
name, so polynomials built over different variable subsets combine freely.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussianRational, is_zero, normalize, scalar_div, scalar_str, to_scalar

_SCALARS = (int, Fraction, GaussianRational)


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables=(), terms=None):
        self.vars = tuple(variables)
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c, variables=()):
        c = to_scalar(c)
        v = tuple(variables)
        if is_zero(c):
            return MultiPoly(v, {})
        return MultiPoly(v, {(0,) * len(v): c})

    @staticmethod
    def var(name, power=1, coeff=1):
        coeff = to_scalar(coeff)
        if is_zero(coeff):
            return MultiPoly((name,), {})
        return MultiPoly((name,), {(power,): coeff})

    @staticmethod
    def linear(variables, coeffs, shift=0):
        """c_1*x_1 + ... + c_k*x_k + shift."""
        variables = tuple(variables)
        terms = {}
        for i, c in enumerate(coeffs):
            c = to_scalar(c)
            if not is_zero(c):
                e = [0] * len(variables)
                e[i] = 1
                terms[tuple(e)] = c
        shift = to_scalar(shift)
        if not is_zero(shift):
            terms[(0,) * len(variables)] = shift
        return MultiPoly(variables, terms)

    # -- basic queries -------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def as_scalar(self):
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.constant_term()

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def coefficient(self, exponents: dict):
        """Coefficient of the monomial with the given exponents, as a polynomial
        in the remaining variables.  Variables absent from the polynomial count
        as exponent zero."""
        rest = tuple(v for v in self.vars if v not in exponents)
        if any(name not in self.vars and e != 0 for name, e in exponents.items()):
            return MultiPoly(rest, {})
        idx = {name: self.vars.index(name) for name in exponents if name in self.vars}
        rest_pos = [i for i, v in enumerate(self.vars) if v not in exponents]
        out = {}
        for exp, c in self.terms.items():
            if all(exp[i] == exponents[name] for name, i in idx.items()):
                key = tuple(exp[i] for i in rest_pos)
                out[key] = c
        return MultiPoly(rest, out)

    def scalar_coefficient(self, exponents: tuple):
        return self.terms.get(tuple(exponents), 0)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def variables_used(self):
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(self.vars[i])
        return used

    # -- variable alignment ---------------------------------------------

    def with_vars(self, variables):
        """Reindex onto a variable tuple that must contain all used variables."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            pos.append(variables.index(v) if v in variables else -1)
        terms = {}
        n = len(variables)
        for exp, c in self.terms.items():
            out = [0] * n
            for i, e in enumerate(exp):
                if e:
                    if pos[i] < 0:
                        raise ValueError(f"variable {self.vars[i]} not in target set")
                    out[pos[i]] = e
            terms[tuple(out)] = c
        return MultiPoly(variables, terms)

    @staticmethod
    def _aligned(a, b):
        if a.vars == b.vars:
            return a, b
        merged = tuple(dict.fromkeys(a.vars + b.vars))
        return a.with_vars(merged), b.with_vars(merged)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = MultiPoly.constant(other, self.vars)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly._aligned(self, other)
        terms = dict(a.terms)
        for exp, c in b.terms.items():
            s = normalize(terms.get(exp, 0) + c)
            if is_zero(s):
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return MultiPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            other = to_scalar(other)
            if is_zero(other):
                return MultiPoly(self.vars, {})
            return MultiPoly(self.vars, {e: normalize(c * other) for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly._aligned(self, other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(exp)
                terms[exp] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly(a.vars, {e: normalize(c) for e, c in terms.items() if not is_zero(c)})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return MultiPoly(self.vars, {e: scalar_div(c, other) for e, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("negative power of a polynomial; use series inversion instead")
        out = MultiPoly.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            return self.is_constant() and self.constant_term() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly._aligned(self, other)
        return a.terms == b.terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        used = sorted(self.variables_used())
        p = self.with_vars(tuple(used))
        return hash((p.vars, frozenset(p.terms.items())))

    # -- substitution ------------------------------------------------------

    def subs(self, assignment: dict):
        """Substitute scalars or polynomials for variables."""
        keep = tuple(v for v in self.vars if v not in assignment)
        out = MultiPoly.constant(0, keep)
        powers = {}
        for exp, c in self.terms.items():
            term = MultiPoly.constant(c, keep)
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                name = self.vars[i]
                if name in assignment:
                    val = assignment[name]
                    key = (name, e)
                    if key not in powers:
                        if isinstance(val, MultiPoly):
                            powers[key] = val ** e
                        else:
                            powers[key] = to_scalar(val) ** e
                    term = term * powers[key]
                else:
                    term = term * MultiPoly.var(name, e)
            out = out + term
        return out

    def eval(self, assignment: dict):
        return self.subs(assignment).as_scalar()

    # -- structure helpers --------------------------------------------------

    def univariate_coeffs(self, name):
        """Coefficients in one variable; entries are polynomials in the rest."""
        d = self.degree_in(name)
        return [self.coefficient({name: k}) for k in range(max(d, 0) + 1)]

    def is_symmetric(self, variables):
        """Invariance under all transpositions of the listed variables."""
        variables = list(variables)
        for i in range(len(variables) - 1):
            a, b = variables[i], variables[i + 1]
            swapped = self.subs({a: MultiPoly.var(b), b: MultiPoly.var(a)})
            if swapped != self:
                return False
        return True

    def truncate_exponents(self, bounds: dict):
        """Drop terms whose exponent in any listed variable exceeds its bound."""
        idx = [(self.vars.index(v), b) for v, b in bounds.items() if v in self.vars]
        terms = {e: c for e, c in self.terms.items() if all(e[i] <= b for i, b in idx)}
        return MultiPoly(self.vars, terms)

    def map_coefficients(self, fn):
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not is_zero(v):
                terms[e] = v
        return MultiPoly(self.vars, terms)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                f"{self.vars[i]}^{e}" if e > 1 else self.vars[i]
                for i, e in enumerate(exp)
                if e
            )
            cs = scalar_str(c)
            if isinstance(c, GaussianRational) and c.im != 0:
                cs = f"({cs})"
            if mono:
                piece = mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
            else:
                piece = cs
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += piece if piece.startswith("-") else "+" + piece
        return out


ZERO = MultiPoly()
ONE = MultiPoly.constant(1)


def poly_divmod(dividend: MultiPoly, divisor: MultiPoly, name: str):
    """Long division in the variable ``name``.

    The divisor's leading coefficient in ``name`` must be a nonzero scalar
    (constant in the other variables).  Returns (quotient, remainder).
    """
    dividend, divisor = MultiPoly._aligned(dividend, divisor)
    dd = divisor.degree_in(name)
    lead = divisor.coefficient({name: dd})
    if not lead.is_constant():
        raise ValueError("divisor leading coefficient must be scalar")
    lc = lead.as_scalar()
    if is_zero(lc):
        raise ZeroDivisionError("zero divisor")
    xv = MultiPoly.var(name)
    quotient = MultiPoly.constant(0, dividend.vars)
    rem = dividend
    while not rem.is_zero() and rem.degree_in(name) >= dd:
        dr = rem.degree_in(name)
        coeff = rem.coefficient({name: dr}) / lc
        piece = coeff.with_vars(rem.vars) * xv.with_vars(rem.vars) ** (dr - dd)
        quotient = quotient + piece
        rem = rem - piece * divisor
    return quotient, rem


def divexact(dividend: MultiPoly, divisor: MultiPoly):
    """Exact multivariate division; raises ValueError when not divisible.

    Implemented as sparse division with the lexicographic leading term of the
    divisor, which suffices for the structured divisors used here (products of
    linear forms).
    """
    dividend, divisor = MultiPoly._aligned(dividend, divisor)
    if divisor.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if dividend.is_zero():
        return MultiPoly(dividend.vars, {})
    lead_exp = max(divisor.terms)
    lead_c = divisor.terms[lead_exp]
    quot_terms = {}
    rem = dividend
    while not rem.is_zero():
        exp = max(rem.terms)
        c = rem.terms[exp]
        diff = tuple(a - b for a, b in zip(exp, lead_exp))
        if any(d < 0 for d in diff):
            raise ValueError("not divisible")
        qc = scalar_div(c, lead_c)
        quot_terms[diff] = qc
        piece = MultiPoly(rem.vars, {diff: qc}) * divisor
        rem = rem - piece
    return MultiPoly(dividend.vars, quot_terms)


def product_coefficient(factors, targets: dict):
    """Coefficient of ``prod_v v^targets[v]`` in the product of the factors.

    Multiplies left to right, pruning any monomial whose exponent already
    exceeds the target in one of the bounded variables.  All factors must have
    nonnegative exponents only (plain polynomials), so pruned monomials can
    never come back under the bound.
    """
    acc = ONE
    for f in factors:
        acc = (acc * f).truncate_exponents(targets)
        if acc.is_zero():
            return 0
    exps = dict(targets)
    rest = acc.coefficient(exps)
    if rest.is_zero():
        return 0
    return rest.as_scalar()


def parse_poly(text: str, known_vars=None) -> MultiPoly:
    """Parse polynomial text with explicit ``*`` and ``^`` (also accepts ``**``).

    Grammar: sums/differences of products of powers of atoms, where an atom is
    a variable name, a rational like ``3`` or ``3/4``, ``i`` (the Gaussian
    unit), or a parenthesised expression.
    """
    from .scalars import I_UNIT

    s = text.replace("**", "^")
    pos = 0

    def peek():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1
        return s[pos] if pos < len(s) else ""

    def parse_sum():
        nonlocal pos
        sign = 1
        ch = peek()
        if ch in "+-":
            pos += 1
            sign = -1 if ch == "-" else 1
        node = parse_product() * sign
        while True:
            ch = peek()
            if ch == "+":
                pos += 1
                node = node + parse_product()
            elif ch == "-":
                pos += 1
                node = node - parse_product()
            else:
                return node

    def parse_product():
        nonlocal pos
        node = parse_power()
        while True:
            ch = peek()
            if ch == "*":
                pos += 1
                node = node * parse_power()
            elif ch == "(" or ch.isalpha() or ch.isdigit():
                # implicit product like 3x or 2(x+1)
                node = node * parse_power()
            else:
                return node

    def parse_power():
        nonlocal pos
        base = parse_atom()
        if peek() == "^":
            pos += 1
            num = parse_integer()
            return base ** num
        return base

    def parse_integer():
        nonlocal pos
        peek()
        start = pos
        if pos < len(s) and s[pos] in "+-":
            pos += 1
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected integer at {start} in {text!r}")
        return int(s[start:pos])

    def parse_atom():
        nonlocal pos
        ch = peek()
        if ch == "(":
            pos += 1
            node = parse_sum()
            if peek() != ")":
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            pos += 1
            return node
        if ch.isdigit():
            start = pos
            while pos < len(s) and s[pos].isdigit():
                pos += 1
            num = int(s[start:pos])
            if peek() == "/":
                save = pos
                pos += 1
                if peek().isdigit():
                    start = pos
                    while pos < len(s) and s[pos].isdigit():
                        pos += 1
                    return MultiPoly.constant(Fraction(num, int(s[start:pos])))
                pos = save
            return MultiPoly.constant(num)
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < len(s) and (s[pos].isalnum() or s[pos] == "_"):
                pos += 1
            name = s[start:pos]
            if name == "i":
                return MultiPoly.constant(I_UNIT)
            if known_vars is not None and name not in known_vars:
                raise ValueError(f"unknown variable {name!r}")
            return MultiPoly.var(name)
        raise ValueError(f"unexpected character {ch!r} at {pos} in {text!r}")

    node = parse_sum()
    if peek():
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return node
