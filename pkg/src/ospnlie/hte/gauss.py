"""Exact Gaussian rationals ``p + q i`` with ``p, q`` in Q."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class Gauss:
    """Immutable complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gauss is immutable")

    @classmethod
    def coerce(cls, x) -> "Gauss":
        if isinstance(x, Gauss):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Gauss exactly")

    @classmethod
    def i(cls, scale=1) -> "Gauss":
        return cls(0, scale)

    def __add__(self, other):
        try:
            o = Gauss.coerce(other)
        except TypeError:
            return NotImplemented
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = Gauss.coerce(other)
        except TypeError:
            return NotImplemented
        return Gauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return Gauss.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return Gauss(self.re * other, self.im * other)
        if not isinstance(other, Gauss):
            return NotImplemented
        return Gauss(self.re * other.re - self.im * other.im,
                     self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def reciprocal(self) -> "Gauss":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("Gauss division by zero")
        return Gauss(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("Gauss division by zero")
            return Gauss(self.re / other, self.im / other)
        if not isinstance(other, Gauss):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return Gauss.coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out, base = Gauss(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = Gauss.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"Gauss({self.re})"
        return f"Gauss({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        return f"({self.re} + {self.im}*I)"


ZERO = Gauss(0)
ONE = Gauss(1)
I = Gauss(0, 1)
