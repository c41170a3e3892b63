"""Exact scalars a + b*sqrt(d) over a fixed real quadratic field.

Nothing in this module ever rounds.  A scalar carries the discriminant
``d`` of the field it lives in (``d == 0`` marks a plain rational) and is
stored as one integer triple (A + B*sqrt(d)) / Q in lowest terms, which
keeps the arithmetic to one gcd per operation and makes sign tests pure
integer comparisons.  The rational coefficients are exposed as
``fractions.Fraction`` values.  Mixing two distinct nonzero discriminants
is an error: one run of the pipeline works in one field.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
import re


class FieldMismatchError(ValueError):
    """Two scalars from different quadratic fields met in one operation."""


class ScalarParseError(ValueError):
    """Text did not match the scalar grammar."""


def _is_squarefree(d: int) -> bool:
    i = 2
    while i * i <= d:
        if d % (i * i) == 0:
            return False
        i += 1
    return True


def _check_discriminant(d: int) -> int:
    if d == 0:
        return 0
    if d < 2 or not _is_squarefree(d):
        raise ValueError(f"discriminant must be 0 or a squarefree integer >= 2, got {d}")
    return d


def _merge_discriminants(d1: int, d2: int) -> int:
    if d1 == d2 or d2 == 0:
        return d1
    if d1 == 0:
        return d2
    raise FieldMismatchError(f"cannot mix sqrt({d1}) with sqrt({d2})")


def _surd_sign(A: int, B: int, d: int) -> int:
    """Sign of A + B*sqrt(d); equality of squares cannot occur for squarefree d."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return (B > 0) - (B < 0)
    if (A > 0) == (B > 0):
        return 1 if A > 0 else -1
    return (1 if A > 0 else -1) if A * A > d * B * B else (1 if B > 0 else -1)


_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<a>{_RATIONAL})(?:(?P<sign>[+-])(?P<b>\d+(?:/\d+)?)\*sqrt\((?P<d>\d+)\))?$"
)


class Scalar:
    """Immutable element of Q or Q(sqrt(d)), kept in canonical form.

    Canonical means: gcd(A, B, Q) = 1 with Q > 0, and ``d == 0`` whenever
    the irrational coefficient vanishes.  Equality is structural, which
    canonical form makes the same as numeric equality.
    """

    __slots__ = ("_qa", "_qb", "_q", "d")

    d: int

    def __init__(self, a, b=0, d: int = 0) -> None:
        a = Fraction(a)
        b = Fraction(b)
        d = _check_discriminant(d)
        if b != 0 and d == 0:
            raise ValueError("irrational part requires a nonzero discriminant")
        if b == 0:
            d = 0
        q = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        object.__setattr__(self, "_qa", a.numerator * (q // a.denominator))
        object.__setattr__(self, "_qb", b.numerator * (q // b.denominator))
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _make(cls, qa: int, qb: int, q: int, d: int) -> Scalar:
        # trusted path: d already validated, q nonzero
        if q < 0:
            qa, qb, q = -qa, -qb, -q
        g = gcd(qa, qb, q)
        if g > 1:
            qa //= g
            qb //= g
            q //= g
        self = object.__new__(cls)
        object.__setattr__(self, "_qa", qa)
        object.__setattr__(self, "_qb", qb)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "d", d if qb else 0)
        return self

    @property
    def a(self) -> Fraction:
        return Fraction(self._qa, self._q)

    @property
    def b(self) -> Fraction:
        return Fraction(self._qb, self._q)

    @classmethod
    def sqrt_of(cls, d: int) -> Scalar:
        return cls(0, 1, d)

    @staticmethod
    def _coerce(value) -> Scalar:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, Rational):
            return Scalar(value)
        return NotImplemented

    # -- field arithmetic ------------------------------------------------

    def __add__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        d = self.d if self.d == other.d else _merge_discriminants(self.d, other.d)
        q1, q2 = self._q, other._q
        return Scalar._make(
            self._qa * q2 + other._qa * q1,
            self._qb * q2 + other._qb * q1,
            q1 * q2,
            d,
        )

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._make(-self._qa, -self._qb, self._q, self.d)

    def __sub__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        d = self.d if self.d == other.d else _merge_discriminants(self.d, other.d)
        q1, q2 = self._q, other._q
        return Scalar._make(
            self._qa * q2 - other._qa * q1,
            self._qb * q2 - other._qb * q1,
            q1 * q2,
            d,
        )

    def __rsub__(self, other) -> Scalar:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        d = self.d if self.d == other.d else _merge_discriminants(self.d, other.d)
        return Scalar._make(
            self._qa * other._qa + d * self._qb * other._qb,
            self._qa * other._qb + self._qb * other._qa,
            self._q * other._q,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("scalar is zero")
        # conjugate trick; norm A^2 - d B^2 is nonzero since sqrt(d) is irrational
        norm = self._qa * self._qa - self.d * self._qb * self._qb
        return Scalar._make(self._q * self._qa, -self._q * self._qb, norm, self.d)

    def __truediv__(self, other) -> Scalar:
        if type(other) is not Scalar:
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> Scalar:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    # -- predicates and order --------------------------------------------

    def is_zero(self) -> bool:
        return self._qa == 0 and self._qb == 0

    def is_rational(self) -> bool:
        return self._qb == 0

    def rational_part(self) -> Fraction:
        return Fraction(self._qa, self._q)

    def sign(self) -> int:
        return _surd_sign(self._qa, self._qb, self.d)

    def _cmp_sign(self, other) -> int:
        """Sign of self - other without building the difference."""
        d = self.d if self.d == other.d else _merge_discriminants(self.d, other.d)
        q1, q2 = self._q, other._q
        return _surd_sign(
            self._qa * q2 - other._qa * q1,
            self._qb * q2 - other._qb * q1,
            d,
        )

    def __eq__(self, other) -> bool:
        if type(other) is not Scalar:
            other = Scalar._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        return (
            self._qa == other._qa
            and self._qb == other._qb
            and self._q == other._q
            and self.d == other.d
        )

    def __lt__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._cmp_sign(other) < 0

    def __le__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._cmp_sign(other) <= 0

    def __gt__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._cmp_sign(other) > 0

    def __ge__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._cmp_sign(other) >= 0

    def __hash__(self) -> int:
        return hash((self._qa, self._qb, self._q, self.d))

    def __bool__(self) -> bool:
        return self._qa != 0 or self._qb != 0

    # -- text form -------------------------------------------------------

    def __str__(self) -> str:
        if self._qb == 0:
            return str(self.a)
        sign = "+" if self._qb > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.d})"

    def __repr__(self) -> str:
        return f"Scalar({self.a!r}, {self.b!r}, {self.d!r})"

    @classmethod
    def parse(cls, text: str) -> Scalar:
        m = _SCALAR_RE.match(text)
        if m is None:
            raise ScalarParseError(f"bad scalar literal: {text!r}")
        a = Fraction(m.group("a"))
        if m.group("b") is None:
            return cls(a)
        b = Fraction(m.group("b"))
        if m.group("sign") == "-":
            b = -b
        try:
            return cls(a, b, int(m.group("d")))
        except ValueError as exc:
            raise ScalarParseError(str(exc)) from None


ZERO = Scalar(0)
ONE = Scalar(1)


def as_scalar(value) -> Scalar:
    coerced = Scalar._coerce(value)
    if coerced is NotImplemented:
        raise TypeError(f"cannot interpret {value!r} as a Scalar")
    return coerced


# -- additive solutions of the Cauchy equation on [0, inf) ----------------
#
# f(x + y) = f(x) + f(y).  Two families matter here: honest linear maps
# x -> lam*x, and the coefficient projection a + b*sqrt(d) -> a.  The
# projection is additive yet not linear over the field, which is exactly
# what makes it a useful stress test downstream.


class CauchySolution:
    def value_at(self, x: Scalar) -> Scalar:
        raise NotImplementedError

    def __call__(self, x: Scalar) -> Scalar:
        return cauchy_eval(self, x)


class Linear(CauchySolution):
    __slots__ = ("coefficient",)

    def __init__(self, coefficient) -> None:
        object.__setattr__(self, "coefficient", as_scalar(coefficient))

    def value_at(self, x: Scalar) -> Scalar:
        return self.coefficient * x

    def __eq__(self, other) -> bool:
        return isinstance(other, Linear) and self.coefficient == other.coefficient

    def __hash__(self) -> int:
        return hash(("linear", self.coefficient))

    def __repr__(self) -> str:
        return f"Linear({self.coefficient!r})"


class RationalPart(CauchySolution):
    """a + b*sqrt(d) -> a.  Additive, discontinuous, not field-linear."""

    __slots__ = ()

    def value_at(self, x: Scalar) -> Scalar:
        return Scalar(x.a)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPart)

    def __hash__(self) -> int:
        return hash("rational_part")

    def __repr__(self) -> str:
        return "RationalPart()"


def cauchy_eval(f: CauchySolution, x) -> Scalar:
    x = as_scalar(x)
    if x.sign() < 0:
        raise ValueError(f"cauchy solutions are evaluated on [0, inf), got {x}")
    return f.value_at(x)
