"""Order-by-order high-temperature expansion of the m=1 NLIE for s=1.

The ansatz is ``T(v) = exp(sum_n a_n(v) beta**n)`` with ``beta = J/T`` and
``a_0 = log 3``.  At each order the four contour integrals of the NLIE reduce
to residues at ``y = 0``: the integrand ``F(y)`` is expanded as a Laurent
series there and the Cauchy kernel ``1/(v - y - b)`` as a geometric series in
``y``, so ``[y**-m] F`` multiplies ``(v - b)**-m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import AnsatzError
from .gauss import Gauss, I, ZERO
from .laurent import LaurentAtPoint
from .polerational import PoleRational
from .series import BetaSeries

Q1 = 3
ANSATZ_SHIFTS = (Fraction(1), Fraction(9, 4))

# Contour centres sigma*beta_k (k = 1, 2) with the numerator and denominator
# shifts of the integrand:  F(y) = T0(y+c1) T(y+c1) / T(y+c2).
CONTOUR_TERMS = tuple(
    (sigma * b, sigma * b - sigma * Fraction(1, 2), sigma * b - sigma)
    for b in (Fraction(1), Fraction(3, 2))
    for sigma in (1, -1)
)


def _ig(x) -> Gauss:
    return Gauss(0, x)


def t0_exponent() -> PoleRational:
    """Order-1 coefficient of log T0(v) = -beta/(v^2 + 1/4)."""
    # -1/(v^2+1/4) = i [1/(v - i/2) - 1/(v + i/2)]
    return PoleRational(0, {_ig(Fraction(1, 2)): [I], _ig(Fraction(-1, 2)): [-I]})


def shift_laurent(f: PoleRational, center, order: int) -> LaurentAtPoint:
    """Laurent expansion of ``f(y + center)`` at ``y = 0`` through ``y**order``."""
    center = Gauss.coerce(center)
    if center.re != 0:
        raise ValueError(f"unsupported center {center}: must be purely imaginary")
    local = f.laurent_at(center, order)
    return LaurentAtPoint(ZERO, local.lo, local.coeffs)


def _integrand_series(a, c1, c2, n: int) -> BetaSeries:
    """Beta-series of F(y) = T0 T(y+c1) / T(y+c2) at y = 0, through order n.

    ``a`` is the list [a_1, ..., a_k] of known coefficients (k may be < n; the
    missing ones are treated as zero).
    """
    hi = n
    zero = LaurentAtPoint.constant(ZERO, 0, hi)
    g = [zero]
    for m in range(1, n + 1):
        term = zero
        if m <= len(a):
            term = shift_laurent(a[m - 1], _ig(c1), hi) - shift_laurent(a[m - 1], _ig(c2), hi)
        if m == 1:
            term = term + shift_laurent(t0_exponent(), _ig(c1), hi)
        g.append(term)
    return BetaSeries(g).exp()


def contour_residue_rhs(a, n: int) -> PoleRational:
    """Order-n coefficient of the NLIE right-hand side with ``a_n`` set to zero."""
    if n == 0:
        return PoleRational(Q1)
    total = PoleRational(0)
    for b, c1, c2 in CONTOUR_TERMS:
        fn = _integrand_series(a[: n - 1], c1, c2, n)[n]
        pp = fn.principal_part()
        if pp:
            total = total + PoleRational(0, {_ig(b): pp})
    return total


def _lhs_known(a, n: int) -> PoleRational:
    """[beta^n] of Q1*exp(sum a_k beta^k) with a_n = 0 (a has n-1 entries)."""
    coeffs = [PoleRational(0)] + list(a[: n - 1]) + [PoleRational(0)]
    return BetaSeries(coeffs, log_base=Q1).exp()[n]


def match_ansatz(n: int, rhs: PoleRational, lhs_known: PoleRational) -> PoleRational:
    """Solve ``Q1 a_n - (a_n pole parts carried by the k=2 terms) = rhs - lhs_known``.

    The unknown a_n enters the right-hand side only through a_n(y +- i), whose
    principal part at y = 0 equals that of a_n at v = +-i; it is relocated to
    the contour centres +-3i/2.  The resulting linear system is triangular in
    the pole-part coefficients and is solved exactly.
    """
    r = rhs - lhs_known
    if r.const:
        raise AnsatzError(f"order {n}: nonzero constant {r.const} in residual equation",
                          quantity=f"a_{n}", module="hte-series")
    up1, dn1 = _ig(1), _ig(-1)
    up3, dn3 = _ig(Fraction(3, 2)), _ig(Fraction(-3, 2))
    extra = set(r.poles) - {up1, dn1, up3, dn3}
    if extra:
        raise AnsatzError(f"order {n}: residual has poles outside the ansatz at "
                          f"{sorted(map(str, extra))}", quantity=f"a_{n}", module="hte-series")
    poles = {}
    for p1, p3 in ((up1, up3), (dn1, dn3)):
        d = [c * Fraction(1, Q1) for c in r.poles.get(p1, [])]
        r3 = r.poles.get(p3, [])
        size = max(len(d), len(r3))
        e = [((r3[m] if m < len(r3) else ZERO) + (d[m] if m < len(d) else ZERO)) * Fraction(1, Q1)
             for m in range(size)]
        poles[p1], poles[p3] = d, e
    an = PoleRational(0, poles)
    try:
        an.to_even_family(n, ANSATZ_SHIFTS)
    except AnsatzError as exc:
        raise AnsatzError(f"order {n}: {exc}", quantity=f"a_{n}", module="hte-series") from exc
    return an


def matched_identity_residual(a, n: int) -> PoleRational:
    """LHS minus RHS at order n with the computed a_n in place (exactly zero if solved)."""
    lhs = BetaSeries([PoleRational(0)] + list(a[:n]), log_base=Q1).exp()[n]
    rhs = PoleRational(0)
    for b, c1, c2 in CONTOUR_TERMS:
        pp = _integrand_series(a[:n], c1, c2, n)[n].principal_part()
        if pp:
            rhs = rhs + PoleRational(0, {_ig(b): pp})
    return lhs - rhs


@dataclass
class HTEResult:
    a: list = field(default_factory=list)          # a_1 .. a_N as PoleRational
    f_over_t: list = field(default_factory=list)   # c_1 .. c_N (f/T = -log 3 + sum c_n beta^n)
    specific_heat: list = field(default_factory=list)  # C_n, n = 1 .. N (C_1 = 0)

    @property
    def order(self) -> int:
        return len(self.a)

    def family(self, n: int) -> dict:
        """b_{n,j}, c_{n,j} of a_n as {1: [...], 9/4: [...]}."""
        return self.a[n - 1].to_even_family(n, ANSATZ_SHIFTS)

    def free_energy(self, T: float, J: float = -1.0, order: int | None = None) -> float:
        beta = J / T
        terms = self.f_over_t[: order or self.order]
        return T * (-math.log(Q1) + sum(float(c) * beta ** (k + 1) for k, c in enumerate(terms)))

    def specific_heat_value(self, T: float, J: float = -1.0, order: int | None = None) -> float:
        beta = J / T
        terms = self.specific_heat[: order or self.order]
        return sum(float(c) * beta ** (k + 1) for k, c in enumerate(terms))


def specific_heat_coefficients(f_over_t):
    """C_n = n(1-n) c_n for f/T = sum_n c_n beta^n (beta = J/T)."""
    return [Fraction(n * (1 - n)) * c for n, c in enumerate(f_over_t, start=1)]


class _Expansion:
    """Incremental state: beta-series of every integrand and of the LHS.

    With ``a_1..a_{n-1}`` fixed, all coefficients below order n are final and
    the order-n ones are affine in ``a_n`` (the exp recursion only adds
    ``a_n`` times the order-0 term), so nothing is recomputed across orders.
    """

    def __init__(self, order_max: int):
        self.hi = order_max
        self.a = []
        self.lhs = [PoleRational(Q1)]
        self.g = {t: [None] for t in CONTOUR_TERMS}
        self.F = {t: [LaurentAtPoint.constant(ZERO, 1, self.hi)] for t in CONTOUR_TERMS}

    def _partial(self, n):
        rhs = PoleRational(0)
        for t in CONTOUR_TERMS:
            b, c1, _ = t
            g, F = self.g[t], self.F[t]
            gn = shift_laurent(t0_exponent(), _ig(c1), self.hi) if n == 1 else None
            acc = gn if gn is not None else LaurentAtPoint.constant(ZERO, 0, self.hi)
            acc = acc * n
            for k in range(1, n):
                acc = acc + g[k] * F[n - k] * k
            fn = acc * Fraction(1, n)
            g.append(gn if gn is not None else LaurentAtPoint.constant(ZERO, 0, self.hi))
            F.append(fn)
            pp = fn.principal_part()
            if pp:
                rhs = rhs + PoleRational(0, {_ig(b): pp})
        acc = PoleRational(0)
        for k in range(1, n):
            acc = acc + self.a[k - 1] * self.lhs[n - k] * k
        self.lhs.append(acc * Fraction(1, n))
        return rhs, self.lhs[n]

    def step(self):
        n = len(self.a) + 1
        rhs, lhs_known = self._partial(n)
        an = match_ansatz(n, rhs, lhs_known)
        self.a.append(an)
        self.lhs[n] = self.lhs[n] + an * Q1
        for t in CONTOUR_TERMS:
            _, c1, c2 = t
            delta = shift_laurent(an, _ig(c1), self.hi) - shift_laurent(an, _ig(c2), self.hi)
            self.g[t][n] = self.g[t][n] + delta
            self.F[t][n] = self.F[t][n] + delta
        return an


def run_hte(order_max: int = 12) -> HTEResult:
    if not 1 <= order_max <= 16:
        raise ValueError("order_max must lie in 1..16")
    res = HTEResult()
    state = _Expansion(order_max)
    for n in range(1, order_max + 1):
        an = state.step()
        res.a.append(an)
        value = an.evaluate(0)
        if not value.is_real():
            raise AnsatzError(f"a_{n}(0) not real", quantity=f"a_{n}", module="hte-series")
        res.f_over_t.append((-1 if n == 1 else 0) - value.re)
    res.specific_heat = specific_heat_coefficients(res.f_over_t)
    return res


def numeric_rhs_order(a, n: int, v: complex, radius: float = 0.2, nodes: int = 256) -> complex:
    """Quadrature oracle for :func:`contour_residue_rhs` at a point ``v``.

    The order-n integrand coefficient is built numerically on a circle of the
    given radius around each contour centre and integrated against the Cauchy
    kernel with the trapezoid rule.  Independent of the residue bookkeeping.
    """
    theta = 2 * np.pi * np.arange(nodes) / nodes
    y = radius * np.exp(1j * theta)
    total = 0j
    for b, c1, c2 in CONTOUR_TERMS:
        g = []
        for m in range(1, n + 1):
            vals = np.zeros(nodes, dtype=complex)
            if m <= len(a):
                vals += np.array([a[m - 1].evaluate(complex(t) + 1j * float(c1))
                                  - a[m - 1].evaluate(complex(t) + 1j * float(c2)) for t in y])
            if m == 1:
                w = y + 1j * float(c1)
                vals += -1.0 / (w * w + 0.25)
            g.append(vals)
        # exp recursion on sampled values
        F = [np.ones(nodes, dtype=complex)]
        for k in range(1, n + 1):
            acc = np.zeros(nodes, dtype=complex)
            for j in range(1, k + 1):
                acc += j * g[j - 1] * F[k - j]
            F.append(acc / k)
        kernel = 1.0 / (v - y - 1j * float(b))
        total += np.mean(F[n] * kernel * y)
    return complex(total)


__all__ = [
    "ANSATZ_SHIFTS", "CONTOUR_TERMS", "HTEResult", "Q1", "contour_residue_rhs",
    "match_ansatz", "matched_identity_residual", "numeric_rhs_order", "run_hte",
    "shift_laurent", "specific_heat_coefficients", "t0_exponent",
]
