"""Exact scalar fields: rationals and Gaussian rationals.

Plain rationals are stdlib ``fractions.Fraction`` (kept as ``int`` whenever the
value is integral, which is much faster in the polynomial kernels).  The
Gaussian-rational field Q(i) is an opt-in extension used by the spin-chain
parameter dictionary; it interoperates with int/Fraction through the usual
arithmetic operators.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """a + b*i with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return scalar_str(self)

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self):
        """a^2 + b^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        return to_scalar(other) * self.inverse() if not isinstance(other, GaussianRational) else NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __complex__(self):
        return complex(float(self.re), float(self.im))


I_UNIT = GaussianRational(0, 1)


def to_scalar(x):
    """Coerce to a canonical exact scalar (int, Fraction or GaussianRational)."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return to_scalar(x.re)
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def normalize(x):
    """Cheap canonical form after arithmetic (demote integral Fractions)."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    if type(x) is GaussianRational and x.im == 0:
        return normalize(x.re)
    return x


def is_zero(x) -> bool:
    return not x


def inv(x):
    """Exact multiplicative inverse."""
    if isinstance(x, GaussianRational):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return normalize(Fraction(1, 1) / Fraction(x))


def scalar_div(a, b):
    """Exact a / b staying inside the scalar field."""
    if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
        ga = a if isinstance(a, GaussianRational) else GaussianRational(a)
        return normalize(ga * inv(to_scalar(b)) if not isinstance(b, GaussianRational) else ga * b.inverse())
    return normalize(Fraction(a) / Fraction(b))


def scalar_str(x) -> str:
    """Canonical text form: "p/q", or "a/b+c/d*i" for Gaussian rationals."""
    if isinstance(x, GaussianRational):
        re, im = x.re, x.im
        if im == 0:
            return _frac_str(re)
        im_part = f"{_frac_str(im)}*i"
        if re == 0:
            return im_part
        sign = "+" if im > 0 else "-"
        return f"{_frac_str(re)}{sign}{_frac_str(abs(im))}*i"
    return _frac_str(Fraction(x))


def _frac_str(f: Fraction) -> str:
    f = Fraction(f)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_scalar(text: str):
    """Parse the canonical text form back into an exact scalar.

    Accepts "p", "p/q", and Gaussian forms like "1/2+3/4*i", "-i", "2*i".
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    if "i" not in s:
        return to_scalar(Fraction(s))
    # split into real and imaginary parts at the last top-level +/- that is
    # not a leading sign
    body = s
    split_at = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "+-/*":
            split_at = k
            break
    if split_at > 0 and "i" in body[split_at:]:
        re_part, im_part = body[:split_at], body[split_at:]
    else:
        re_part, im_part = "", body
    im_part = im_part.replace("*i", "").replace("i", "")
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    re = Fraction(re_part) if re_part else Fraction(0)
    return to_scalar(GaussianRational(re, im))


def scalar_to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(Fraction(x))
