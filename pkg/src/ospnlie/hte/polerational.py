"""Rational functions of ``v`` kept in partial-fraction normal form.

A :class:`PoleRational` is ``const + sum_p sum_m d[p][m-1] / (v - p)**m`` with
finitely many Gaussian-rational poles ``p``.  Every rational function that is
bounded at infinity has exactly one such representation, which makes equality
testing and coefficient extraction exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from ..errors import AnsatzError, PoleError
from .gauss import Gauss, ZERO, ONE
from .laurent import LaurentAtPoint
from .linalg import solve_exact


def _binom_neg(m: int, j: int) -> int:
    """binom(-m, j) for m >= 1."""
    return (-1) ** j * comb(m + j - 1, j)


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


class PoleRational:
    __slots__ = ("const", "poles")

    def __init__(self, const=0, poles=None):
        self.const = Gauss.coerce(const)
        clean = {}
        for p, cs in (poles or {}).items():
            cs = _strip(Gauss.coerce(c) for c in cs)
            if cs:
                clean[Gauss.coerce(p)] = cs
        self.poles = clean

    @classmethod
    def simple_pole(cls, point, order: int = 1, coeff=1) -> "PoleRational":
        cs = [ZERO] * order
        cs[-1] = Gauss.coerce(coeff)
        return cls(0, {point: cs})

    # ---- structure -------------------------------------------------------
    def pole_order(self, point) -> int:
        return len(self.poles.get(Gauss.coerce(point), []))

    def is_scalar(self) -> bool:
        return not self.poles

    def scalar(self) -> Gauss:
        return self.const

    def like(self, value) -> "PoleRational":
        return PoleRational(value)

    def __eq__(self, other):
        if not isinstance(other, PoleRational):
            try:
                other = PoleRational(other)
            except TypeError:
                return NotImplemented
        return self.const == other.const and self.poles == other.poles

    def __hash__(self):
        return hash((self.const, tuple(sorted((hash(p), tuple(c)) for p, c in self.poles.items()))))

    # ---- ring operations ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PoleRational):
            other = PoleRational(other)
        poles = {p: list(c) for p, c in self.poles.items()}
        for p, cs in other.poles.items():
            mine = poles.get(p, [])
            n = max(len(mine), len(cs))
            poles[p] = [(mine[k] if k < len(mine) else ZERO) + (cs[k] if k < len(cs) else ZERO)
                        for k in range(n)]
        return PoleRational(self.const + other.const, poles)

    __radd__ = __add__

    def __neg__(self):
        return PoleRational(-self.const, {p: [-c for c in cs] for p, cs in self.poles.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, PoleRational) else PoleRational(-Gauss.coerce(other)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PoleRational":
        c = Gauss.coerce(c)
        return PoleRational(self.const * c, {p: [x * c for x in cs] for p, cs in self.poles.items()})

    def __mul__(self, other):
        if not isinstance(other, PoleRational):
            return self.scale(other)
        out = PoleRational(self.const * other.const)
        for p in set(self.poles) | set(other.poles):
            n_self, n_other = self.pole_order(p), other.pole_order(p)
            prod = self.laurent_at(p, max(n_other - 1, 0)) * other.laurent_at(p, max(n_self - 1, 0))
            out = out + PoleRational(0, {p: prod.principal_part()})
        return out

    __rmul__ = __mul__

    # ---- analysis ----------------------------------------------------------
    def laurent_at(self, point, hi: int) -> LaurentAtPoint:
        """Exact Laurent expansion in ``w = v - point`` through ``w**hi``."""
        point = Gauss.coerce(point)
        own = self.poles.get(point, [])
        lo = -len(own) if own else 0
        lo = min(lo, hi)
        out = [ZERO] * (hi - lo + 1)
        for m, c in enumerate(own, start=1):
            if -m <= hi:
                out[-m - lo] = out[-m - lo] + c
        if 0 <= hi:
            out[-lo] = out[-lo] + self.const
        if hi < 0:
            return LaurentAtPoint(point, lo, out)
        for q, cs in self.poles.items():
            if q == point:
                continue
            inv = (point - q).reciprocal()
            powers = [ONE]
            for _ in range(len(cs) + hi):
                powers.append(powers[-1] * inv)
            # (w + delta)^{-m} = sum_j binom(-m, j) delta^{-m-j} w^j
            for j in range(hi + 1):
                acc = ZERO
                for m, c in enumerate(cs, start=1):
                    if c:
                        acc = acc + c * powers[m + j] * _binom_neg(m, j)
                out[j - lo] = out[j - lo] + acc
        return LaurentAtPoint(point, lo, out)

    def shift(self, c) -> "PoleRational":
        """Return ``v -> f(v + c)``."""
        c = Gauss.coerce(c)
        return PoleRational(self.const, {p - c: list(cs) for p, cs in self.poles.items()})

    def evaluate(self, v):
        """Exact value for Gauss/Fraction/int input, complex for float input."""
        if isinstance(v, (complex, float)):
            total = complex(self.const)
            for p, cs in self.poles.items():
                w = v - complex(p)
                if w == 0:
                    raise PoleError(f"evaluation at pole {p}", module="hte-series")
                for m, c in enumerate(cs, start=1):
                    total += complex(c) / w ** m
            return total
        v = Gauss.coerce(v)
        total = self.const
        for p, cs in self.poles.items():
            w = v - p
            if not w:
                raise PoleError(f"evaluation at pole {p}", module="hte-series")
            inv = w.reciprocal()
            pw = inv
            for c in cs:
                total = total + c * pw
                pw = pw * inv
        return total

    def is_real_function(self) -> bool:
        """True iff f(conj v) == conj f(v) identically."""
        if not self.const.is_real():
            return False
        for p, cs in self.poles.items():
            if self.poles.get(p.conjugate()) != [c.conjugate() for c in cs]:
                return False
        return True

    def is_even(self) -> bool:
        """True iff f(-v) == f(v) identically."""
        for p, cs in self.poles.items():
            mirrored = [c * (-1) ** m for m, c in enumerate(cs, start=1)]
            if self.poles.get(-p) != mirrored:
                return False
        return True

    def __repr__(self):
        parts = [str(self.const)] if self.const else []
        for p, cs in sorted(self.poles.items(), key=lambda kv: (kv[0].im, kv[0].re)):
            for m, c in enumerate(cs, start=1):
                if c:
                    parts.append(f"{c}/(v - {p})^{m}")
        return "PoleRational(" + (" + ".join(parts) or "0") + ")"

    # ---- even/real pole-family form ---------------------------------------
    def to_even_family(self, n: int, shifts) -> dict:
        """Express as ``sum_h P_h(v^2) / (v^2 + h)**n`` for the given shifts ``h``.

        Returns ``{h: [e_0, ..., e_{n-1}]}`` with rational ``e_j`` such that
        ``P_h(v^2) = sum_j e_j v^(2j)``.  Raises :class:`AnsatzError` if the
        function is not real, not even, has other poles, poles above order
        ``n``, or a nonzero constant.
        """
        if self.const:
            raise AnsatzError("nonzero constant term", module="hte-series")
        if not self.is_real_function() or not self.is_even():
            raise AnsatzError("function is not real and even", module="hte-series")
        shifts = [Fraction(h) for h in shifts]
        ups = {h: Gauss(0, _sqrt_rational(h)) for h in shifts}
        known = {p for p in ups.values()} | {-p for p in ups.values()}
        extra = set(self.poles) - known
        if extra:
            raise AnsatzError(f"poles outside ansatz family: {sorted(map(str, extra))}",
                              module="hte-series")
        out = {}
        for h, p_up in ups.items():
            if self.pole_order(p_up) > n:
                raise AnsatzError(f"pole order above {n} at {p_up}", module="hte-series")
            target = self.poles.get(p_up, [])
            target = target + [ZERO] * (n - len(target))
            coeffs = solve_exact(_family_matrix(n, h), target)
            if not all(c.is_real() for c in coeffs):
                raise AnsatzError("non-real family numerator", module="hte-series")
            out[h] = [c.re for c in coeffs]
        return out

    @classmethod
    def from_even_family(cls, n: int, family: dict) -> "PoleRational":
        """Inverse of :meth:`to_even_family`."""
        total = cls(0)
        for h, coeffs in family.items():
            root = _sqrt_rational(Fraction(h))
            p_up, p_dn = Gauss(0, root), Gauss(0, -root)
            # 1/(v^2+h) = 1/((v-p_up)(v-p_dn)); v^2/(v^2+h) = 1 - h/(v^2+h)
            base = cls.simple_pole(p_up) * cls.simple_pole(p_dn)
            v2_frac = cls(1) - base.scale(Fraction(h))
            # v^(2j)/(v^2+h)^n = base^(n-j) * v2_frac^j
            for j, e in enumerate(coeffs):
                if not e:
                    continue
                piece = cls(1)
                for _ in range(n - j):
                    piece = piece * base
                for _ in range(j):
                    piece = piece * v2_frac
                total = total + piece.scale(e)
        return total


@lru_cache(maxsize=None)
def _family_matrix(n: int, h: Fraction):
    """Columns: principal part at +i sqrt(h) of v^(2j)/(v^2+h)^n, j < n."""
    p_up = Gauss(0, _sqrt_rational(h))
    cols = []
    for j in range(n):
        unit = [0] * n
        unit[j] = 1
        part = PoleRational.from_even_family(n, {h: unit}).poles.get(p_up, [])
        cols.append(part + [ZERO] * (n - len(part)))
    return tuple(tuple(cols[j][m] for j in range(n)) for m in range(n))


def _sqrt_rational(h: Fraction) -> Fraction:
    from math import isqrt

    num, den = h.numerator, h.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ValueError(f"{h} is not a rational square")
    return Fraction(rn, rd)
