"""Exact-rational Pade approximants of truncated power series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import PadeDegeneracyError
from .linalg import solve_exact


@dataclass(frozen=True)
class PadeApproximant:
    numerator: tuple      # p_0 .. p_m
    denominator: tuple    # q_0 = 1, q_1 .. q_n
    requested: tuple      # (m, n) asked for; differs from the degrees if a fallback was used

    @property
    def degrees(self):
        return len(self.numerator) - 1, len(self.denominator) - 1

    def __call__(self, x):
        num = sum(float(p) * x ** k for k, p in enumerate(self.numerator))
        den = sum(float(q) * x ** k for k, q in enumerate(self.denominator))
        return num / den

    def exact(self, x: Fraction) -> Fraction:
        num = sum(p * x ** k for k, p in enumerate(self.numerator))
        den = sum(q * x ** k for k, q in enumerate(self.denominator))
        return num / den


def _solve(c, m: int, n: int):
    # sum_{j=0}^{n} q_j c_{m+i-j} = 0 for i = 1..n, q_0 = 1
    get = lambda k: c[k] if 0 <= k < len(c) else Fraction(0)
    if n == 0:
        q = [Fraction(1)]
    else:
        matrix = [[get(m + i - j) for j in range(1, n + 1)] for i in range(1, n + 1)]
        rhs = [-get(m + i) for i in range(1, n + 1)]
        try:
            sol = solve_exact(matrix, rhs)
        except ZeroDivisionError as exc:
            raise PadeDegeneracyError(f"singular Hankel system for [{m}/{n}]",
                                      quantity=f"pade[{m}/{n}]", module="hte-series") from exc
        q = [Fraction(1)] + [x.re for x in sol]
    p = [sum(q[j] * get(k - j) for j in range(0, min(k, n) + 1)) for k in range(m + 1)]
    return tuple(p), tuple(q)


def pade(coeffs, m: int, n: int, fallback: bool = True) -> PadeApproximant:
    """[m/n] Pade approximant of ``sum_k coeffs[k] x**k``.

    On a singular Hankel system the numerator degree is lowered step by step
    ([m-1/n], [m-2/n], ...) when ``fallback`` is set.
    """
    c = [Fraction(x) for x in coeffs]
    if m + n > len(c) - 1:
        raise ValueError(f"[{m}/{n}] needs {m + n + 1} coefficients, got {len(c)}")
    mm = m
    while True:
        try:
            p, q = _solve(c, mm, n)
            return PadeApproximant(p, q, (m, n))
        except PadeDegeneracyError:
            if not fallback or mm == 0:
                raise
            mm -= 1
