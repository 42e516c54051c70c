"""Coefficient arithmetic.

Scalars are Laurent polynomials in ``u``, a formal square root of the
quantum parameter ``omega``.  They can be specialized at an odd root of
unity, either exactly inside a cyclotomic field or as complex floats, and
expanded to first order in ``hbar`` under ``omega = exp(-hbar/4)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


class LaurentScalar:
    """Immutable Laurent polynomial in u = omega^(1/2).

    Coefficients are integers or Fractions (rationals only appear once a
    Poisson bracket has been taken).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in dict(terms).items():
                if c:
                    clean[int(k)] = _normalize_number(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def omega(cls, power=1):
        """omega^power, with ``power`` an integer or half-integer."""
        doubled = Fraction(power) * 2
        if doubled.denominator != 1:
            raise ValueError("omega exponents must be half-integers")
        return cls({int(doubled): 1})

    @classmethod
    def q(cls, power=1):
        return cls({-8 * power: 1})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentScalar):
            return x
        if isinstance(x, (int, Rational)):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentScalar")

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def is_one(self):
        return self._terms == {0: 1}

    def is_monomial(self):
        return len(self._terms) == 1

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = LaurentScalar.coerce(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        try:
            other = LaurentScalar.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = LaurentScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = LaurentScalar.coerce(other)
        except TypeError:
            return NotImplemented
        out = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentScalar(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            (k, c), = self._terms.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials are invertible")
            return LaurentScalar({k * n: c ** n})
        out = LaurentScalar({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by u^k."""
        return LaurentScalar({e + k: c for e, c in self._terms.items()})

    def at_one(self):
        """Specialize omega = 1 (and u = 1)."""
        return _normalize_number(sum(self._terms.values(), 0))

    def has_only_even_exponents(self):
        return all(k % 2 == 0 for k in self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (k, c) in enumerate(sorted(self._terms.items())):
            body = str(abs(c)) if k == 0 else f"{abs(c)}*u^{k}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"


def _normalize_number(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


# ---------------------------------------------------------------------------
# cyclotomic fields


def _poly_divmod_monic(num, den):
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c:
            out[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    return tuple(poly)


class CyclotomicField:
    """The field Q(zeta_N) with zeta_N = exp(2 pi i / N)."""

    _cache = {}

    def __new__(cls, n):
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        self.n = n
        self.phi = cyclotomic_polynomial(n)
        self.degree = len(self.phi) - 1
        self.units = tuple(a for a in range(1, n) if math.gcd(a, n) == 1)
        self._zeta_powers = {}
        cls._cache[n] = self
        return self

    def __reduce__(self):
        return (CyclotomicField, (self.n,))

    def _reduce(self, coeffs):
        # fold x^N = 1 first, then divide by Phi_N
        folded = [Fraction(0)] * self.n
        for i, c in enumerate(coeffs):
            if c:
                folded[i % self.n] += c
        d = self.degree
        for i in range(self.n - 1, d - 1, -1):
            c = folded[i]
            if c:
                folded[i] = Fraction(0)
                for j in range(d):
                    folded[i - d + j] -= c * self.phi[j]
        return tuple(folded[:d])

    def element(self, coeffs):
        return Cyc(self, self._reduce([Fraction(c) for c in coeffs]))

    def rational(self, r):
        v = [Fraction(0)] * self.degree
        v[0] = Fraction(r)
        return Cyc(self, tuple(v))

    @property
    def zero(self):
        return self.rational(0)

    @property
    def one(self):
        return self.rational(1)

    def zeta(self, k=1):
        k %= self.n
        z = self._zeta_powers.get(k)
        if z is None:
            v = [Fraction(0)] * (k + 1)
            v[k] = Fraction(1)
            z = Cyc(self, self._reduce(v))
            self._zeta_powers[k] = z
        return z


class Cyc:
    """Element of a cyclotomic field in the power basis."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _lift(self, other):
        if isinstance(other, Cyc):
            if other.field is not self.field:
                raise ValueError("cyclotomic field mismatch")
            return other
        if isinstance(other, (int, Rational)):
            return self.field.rational(other)
        raise TypeError(f"cannot combine Cyc with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return Cyc(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return Cyc(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return Cyc(self.field, tuple(a * other for a in self.coeffs))
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return Cyc(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def conjugate_by(self, a):
        """Image under the Galois automorphism zeta -> zeta^a."""
        out = [Fraction(0)] * (self.field.n * abs(a) + 1)
        n = self.field.n
        for i, c in enumerate(self.coeffs):
            if c:
                out[(i * a) % n] += c
        return Cyc(self.field, self.field._reduce(out))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if all(c == 0 for c in self.coeffs[1:]):
            return self.field.rational(1 / self.coeffs[0])
        others = self.field.one
        for a in self.field.units:
            if a != 1:
                others = others * self.conjugate_by(a)
        norm = (self * others).coeffs
        assert all(c == 0 for c in norm[1:])
        return others * (1 / norm[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return Cyc(self.field, tuple(a / other for a in self.coeffs))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = self.field.one
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return not any(self.coeffs)

    def rational_value(self):
        """The rational number this element equals, or None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self.field.rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.n, self.coeffs))
        return self._hash

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.field.n)
        return complex(sum(float(c) * z ** i for i, c in enumerate(self.coeffs) if c))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Cyc[{self.field.n}]({' + '.join(terms) or '0'})"


# ---------------------------------------------------------------------------
# evaluation contexts


class RootOfUnityContext:
    """omega evaluated at zeta = exp(2 pi i / N), N odd.

    ``mode`` is ``"exact"`` (cyclotomic) or ``"float"`` (complex).
    """

    def __init__(self, n, mode="exact", tol=1e-10):
        if not isinstance(n, int) or n <= 1 or n % 2 == 0:
            raise ValueError(f"root of unity order must be odd and > 1, got {n!r}")
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {mode!r}")
        self.n = n
        self.mode = mode
        self.tol = tol
        self.half = (n + 1) // 2
        self.field = CyclotomicField(n) if mode == "exact" else None

    @property
    def exact(self):
        return self.mode == "exact"

    def __repr__(self):
        return f"RootOfUnityContext(N={self.n}, mode={self.mode!r})"

    def __eq__(self, other):
        return isinstance(other, RootOfUnityContext) and (self.n, self.mode) == (other.n, other.mode)

    def __hash__(self):
        return hash((self.n, self.mode))

    @property
    def zero(self):
        return self.field.zero if self.exact else 0j

    @property
    def one(self):
        return self.field.one if self.exact else 1 + 0j

    def zeta(self, k=1):
        """zeta^k, the value of omega^k."""
        if self.exact:
            return self.field.zeta(k)
        return cmath.exp(2j * cmath.pi * (k % self.n) / self.n)

    def u_power(self, k):
        """Value of u^k, where u = omega^(1/2) -> zeta^((N+1)/2)."""
        return self.zeta(k * self.half)

    def q_power(self, k):
        return self.u_power(-8 * k)

    def coerce(self, x):
        if self.exact:
            if isinstance(x, Cyc):
                return x
            if isinstance(x, (int, Rational)):
                return self.field.rational(x)
            raise TypeError(f"exact mode needs rational or cyclotomic values, got {x!r}")
        return complex(x)

    def to_complex(self, x):
        return complex(x)

    def is_zero(self, x):
        if self.exact:
            return x.is_zero()
        return abs(x) <= self.tol

    def eq(self, a, b):
        if self.exact:
            return a == b
        return abs(complex(a) - complex(b)) <= self.tol * max(1.0, abs(complex(a)), abs(complex(b)))


def evaluate_at_root(s, ctx):
    """Substitute u -> zeta^((N+1)/2)."""
    s = LaurentScalar.coerce(s)
    out = ctx.zero
    for k, c in s.items():
        out = out + ctx.u_power(k) * c
    return out


@dataclass(frozen=True)
class DualScalar:
    """a + b*eps with eps^2 = 0; ``b`` is the derivative in hbar at 0."""

    value: object = 0
    deriv: object = 0

    @staticmethod
    def coerce(x):
        return x if isinstance(x, DualScalar) else DualScalar(x, 0)

    def __add__(self, other):
        other = DualScalar.coerce(other)
        return DualScalar(self.value + other.value, self.deriv + other.deriv)

    __radd__ = __add__

    def __neg__(self):
        return DualScalar(-self.value, -self.deriv)

    def __sub__(self, other):
        return self + (-DualScalar.coerce(other))

    def __mul__(self, other):
        other = DualScalar.coerce(other)
        return DualScalar(self.value * other.value,
                          self.value * other.deriv + self.deriv * other.value)

    __rmul__ = __mul__


def first_order(s):
    """Value and hbar-derivative at hbar = 0 under omega = exp(-hbar/4).

    u = exp(-hbar/8), so u^k contributes (1, -k/8).
    """
    s = LaurentScalar.coerce(s)
    value = sum((c for _, c in s.items()), 0)
    deriv = sum((Fraction(-k, 8) * c for k, c in s.items()), Fraction(0))
    return DualScalar(_normalize_number(Fraction(value)), _normalize_number(deriv))
