"""Truncated Laurent series with exact Gaussian-rational coefficients."""

from __future__ import annotations

from .gauss import Gauss, ZERO


class LaurentAtPoint:
    """``sum_{k=lo}^{hi} coeffs[k-lo] * w**k`` with ``w = v - point``.

    Every stored coefficient is exact; terms above ``hi`` are unknown, so
    arithmetic propagates ``hi`` as the highest exponent still exact.
    """

    __slots__ = ("point", "lo", "coeffs")

    def __init__(self, point, lo: int, coeffs):
        self.point = Gauss.coerce(point)
        self.lo = int(lo)
        self.coeffs = [Gauss.coerce(c) for c in coeffs]
        if not self.coeffs:
            raise ValueError("empty Laurent series; use hi < lo via zero()")

    @classmethod
    def zero(cls, point, hi: int) -> "LaurentAtPoint":
        return cls(point, hi, [ZERO])

    @classmethod
    def constant(cls, point, value, hi: int) -> "LaurentAtPoint":
        if hi < 0:
            raise ValueError("constant needs hi >= 0")
        return cls(point, 0, [value] + [ZERO] * hi)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Gauss:
        if k > self.hi:
            raise IndexError(f"exponent {k} beyond exact range (hi={self.hi})")
        if k < self.lo:
            return ZERO
        return self.coeffs[k - self.lo]

    def _check(self, other):
        if self.point != other.point:
            raise ValueError("Laurent series expanded at different points")

    def truncate(self, hi: int) -> "LaurentAtPoint":
        if hi >= self.hi:
            return self
        if hi < self.lo:
            return LaurentAtPoint.zero(self.point, hi)
        return LaurentAtPoint(self.point, self.lo, self.coeffs[: hi - self.lo + 1])

    def __add__(self, other):
        if isinstance(other, LaurentAtPoint):
            self._check(other)
            hi = min(self.hi, other.hi)
            lo = min(self.lo, other.lo)
            return LaurentAtPoint(self.point, lo,
                                  [self[k] + other[k] for k in range(lo, hi + 1)]).normalized()
        c = Gauss.coerce(other)
        return self + LaurentAtPoint.constant(self.point, c, max(self.hi, 0))

    __radd__ = __add__

    def __neg__(self):
        return LaurentAtPoint(self.point, self.lo, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentAtPoint):
            c = Gauss.coerce(other)
            return LaurentAtPoint(self.point, self.lo, [x * c for x in self.coeffs])
        self._check(other)
        lo = self.lo + other.lo
        hi = min(self.lo + other.hi, other.lo + self.hi)
        if hi < lo:
            return LaurentAtPoint.zero(self.point, hi)
        out = [ZERO] * (hi - lo + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k > hi - lo:
                    break
                if b:
                    out[k] = out[k] + a * b
        return LaurentAtPoint(self.point, lo, out).normalized()

    __rmul__ = __mul__

    def normalized(self) -> "LaurentAtPoint":
        """Drop leading zero coefficients (raises ``lo``)."""
        k = 0
        while k < len(self.coeffs) - 1 and not self.coeffs[k]:
            k += 1
        if k == 0:
            return self
        return LaurentAtPoint(self.point, self.lo + k, self.coeffs[k:])

    # BetaSeries coefficient protocol
    def is_scalar(self) -> bool:
        return all(not self[k] for k in range(self.lo, self.hi + 1) if k != 0)

    def scalar(self) -> Gauss:
        return self[0] if self.lo <= 0 <= self.hi else ZERO

    def like(self, value) -> "LaurentAtPoint":
        return LaurentAtPoint.constant(self.point, value, max(self.hi, 0))

    def pole_order(self) -> int:
        return max(0, -self.normalized().lo) if any(self.coeffs) else 0

    def principal_part(self):
        """Coefficients of ``w**-1, w**-2, ...`` as a list (index m-1)."""
        n = -self.lo
        if n <= 0:
            return []
        if self.hi < -1:
            raise ValueError("principal part not exactly known")
        return [self[-m] for m in range(1, n + 1)]

    def residue(self) -> Gauss:
        return self[-1]

    def evaluate(self, w: complex) -> complex:
        return sum(complex(c) * w ** (self.lo + k) for k, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"LaurentAtPoint(point={self.point}, lo={self.lo}, hi={self.hi})"
