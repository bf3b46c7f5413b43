"""Truncated power series in ``beta`` over an exact coefficient ring.

Coefficients may be :class:`PoleRational` (functions of ``v``) or
:class:`LaurentAtPoint` (local expansions in ``y``).  Both expose
``is_scalar``, ``scalar`` and ``like`` plus ring arithmetic with exact scalars.
The order-0 term may additionally carry a symbolic ``log(base)`` so that
``exp(log 3 + ...)`` stays rational.
"""

from __future__ import annotations

from fractions import Fraction

from .gauss import Gauss


class BetaSeries:
    """``log_base`` (if set) contributes ``log(log_base)`` to the order-0 term."""

    __slots__ = ("coeffs", "log_base")

    def __init__(self, coeffs, log_base=None):
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise ValueError("BetaSeries needs at least the order-0 coefficient")
        self.log_base = None if log_base is None else Gauss.coerce(log_base)
        if self.log_base is not None and not self.log_base:
            raise ValueError("log of zero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, order: int) -> "BetaSeries":
        return BetaSeries(self.coeffs[: order + 1], self.log_base)

    def _zero(self):
        return self.coeffs[0].like(0)

    def __add__(self, other):
        if not isinstance(other, BetaSeries):
            return BetaSeries([self.coeffs[0] + other] + self.coeffs[1:], self.log_base)
        if self.log_base is not None and other.log_base is not None:
            base = self.log_base * other.log_base
        else:
            base = self.log_base if self.log_base is not None else other.log_base
        n = min(self.order, other.order)
        return BetaSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], base)

    def __neg__(self):
        if self.log_base is not None:
            raise ArithmeticError("cannot negate symbolic log term exactly")
        return BetaSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BetaSeries):
            if self.log_base is not None:
                raise ArithmeticError("cannot scale symbolic log term exactly")
            return BetaSeries([c * other for c in self.coeffs])
        if self.log_base is not None or other.log_base is not None:
            raise ArithmeticError("product with symbolic log term")
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = self.coeffs[0] * other.coeffs[k]
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return BetaSeries(out)

    __rmul__ = __mul__

    def exp(self) -> "BetaSeries":
        """exp of the series; the order-0 coefficient must vanish apart from ``log_base``."""
        c0 = self.coeffs[0]
        if not c0.is_scalar() or c0.scalar():
            raise ArithmeticError("exp needs a symbolic (log) order-0 term")
        start = self.log_base if self.log_base is not None else Gauss(1)
        out = [c0.like(start)]
        for n in range(1, self.order + 1):
            acc = self.coeffs[1] * out[n - 1]
            for k in range(2, n + 1):
                acc = acc + self.coeffs[k] * out[n - k] * k
            out.append(acc * Fraction(1, n))
        return BetaSeries(out)

    def log(self) -> "BetaSeries":
        """log of the series; order-0 term must be a nonzero scalar."""
        if self.log_base is not None:
            raise ArithmeticError("log of a series with symbolic log term")
        c0 = self.coeffs[0]
        if not c0.is_scalar() or not c0.scalar():
            raise ArithmeticError("log needs an invertible scalar order-0 term")
        x0 = c0.scalar()
        inv = x0.reciprocal()
        out = [self._zero()]
        for n in range(1, self.order + 1):
            acc = self.coeffs[n] * n
            for k in range(1, n):
                acc = acc - out[k] * self.coeffs[n - k] * k
            out.append(acc * (inv * Fraction(1, n)))
        return BetaSeries(out, None if x0 == 1 else x0)

    def reciprocal(self) -> "BetaSeries":
        if self.log_base is not None:
            raise ArithmeticError("reciprocal of a series with symbolic log term")
        c0 = self.coeffs[0]
        if not c0.is_scalar() or not c0.scalar():
            raise ArithmeticError("reciprocal needs an invertible scalar order-0 term")
        inv = c0.scalar().reciprocal()
        out = [c0.like(inv)]
        for n in range(1, self.order + 1):
            acc = self.coeffs[1] * out[n - 1]
            for k in range(2, n + 1):
                acc = acc + self.coeffs[k] * out[n - k]
            out.append(acc * (-inv))
        return BetaSeries(out)

    def __eq__(self, other):
        if not isinstance(other, BetaSeries):
            return NotImplemented
        return self.log_base == other.log_base and self.coeffs == other.coeffs

    def __repr__(self):
        tag = f", log_base={self.log_base}" if self.log_base is not None else ""
        return f"BetaSeries(order={self.order}{tag})"
