"""Asymptotic values Q^(a)_m of the fused transfer matrices and the Q-system.

Everything here is exact (``fractions.Fraction`` over Python big integers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial


def q_closed_form(a: int, m: int, s: int) -> Fraction:
    """Closed product formula for Q^(a)_m, 1 <= a <= s (a = 0 or m = 0 give 1)."""
    if s < 1:
        raise ValueError("rank s must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    if a == 0 or m == 0:
        return Fraction(1)
    if a == s + 1:
        a = s
    if not 1 <= a <= s:
        raise ValueError(f"a={a} outside 0..{s + 1}")
    g = 2 * s + 1
    lead = Fraction(factorial(m + g) * factorial(m), factorial(m + a) * factorial(m + g - a)) ** m
    prod = Fraction(1)
    for k in range(1, m + 1):
        prod *= Fraction((k + a) * (k + g - a), k * (k + g)) ** k
    return lead * prod


@dataclass
class QTable:
    """Q^(a)_m for 0 <= a <= s+1 and 0 <= m <= m_max, with Q^(s+1)_m = Q^(s)_m."""

    s: int
    m_max: int
    values: dict = field(default_factory=dict)

    @classmethod
    def build(cls, s: int, m_max: int) -> "QTable":
        table = cls(s, m_max)
        for m in range(m_max + 1):
            for a in range(s + 1):
                table.values[(a, m)] = q_closed_form(a, m, s)
            table.values[(s + 1, m)] = table.values[(s, m)]
        return table

    def __getitem__(self, key) -> Fraction:
        return self.values[key]

    def __setitem__(self, key, value):
        self.values[key] = Fraction(value)


@dataclass
class RecursionCheck:
    ok: bool
    failures: list   # every (a, m) whose recursion line fails

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None


def q_check_recursion(table: QTable, m_max: int | None = None) -> RecursionCheck:
    """Check (Q^a_m)^2 = Q^a_{m-1} Q^a_{m+1} + Q^{a-1}_m Q^{a+1}_m exactly.

    For a = s the last factor is Q^(s)_m itself.  Needs the table filled up to
    m_max + 1.  A corrupted entry Q^(a)_m shows up in the line (a, m) and in
    its neighbours.
    """
    s = table.s
    m_max = table.m_max - 1 if m_max is None else m_max
    if m_max + 1 > table.m_max:
        raise ValueError("table must extend to m_max + 1")
    failures = []
    for m in range(1, m_max + 1):
        for a in range(1, s + 1):
            upper = table[(a + 1, m)] if a < s else table[(s, m)]
            lhs = table[(a, m)] ** 2
            rhs = table[(a, m - 1)] * table[(a, m + 1)] + table[(a - 1, m)] * upper
            if lhs != rhs:
                failures.append((a, m))
    return RecursionCheck(not failures, failures)


def q1_values(s: int):
    """Q^(a)_1 = binom(2s+1, a) for a = 0..s+1 (with the a = s+1 convention)."""
    out = [Fraction(comb(2 * s + 1, a)) for a in range(s + 1)]
    return out + [out[-1]]
