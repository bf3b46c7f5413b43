"""Dressed vacuum form of the QTM eigenvalues and the Bethe ansatz equations.

Labels are indexed as in :mod:`ospnlie.lattice`: index ``i < s`` is label
``i+1``, index ``s`` is label 0 and index ``i > s`` is label ``(2s-i+1)``-bar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, PoleError


@dataclass(frozen=True)
class VacuumData:
    """phi_(+/-)(v) = (v +/- i u)^(N/2)."""

    u: float
    N: int

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError("Trotter number N must be even and positive")

    def phi_plus(self, v):
        return (v + 1j * self.u) ** (self.N // 2)

    def phi_minus(self, v):
        return (v - 1j * self.u) ** (self.N // 2)


@dataclass
class BetheRoots:
    s: int
    roots: list                          # roots[a-1] = array of color-a roots
    eps: list = field(default=None)      # epsilon_a
    zeta: list = field(default=None)     # zeta per label index 0..2s

    def __post_init__(self):
        self.roots = [np.asarray(r, dtype=complex) for r in self.roots]
        if len(self.roots) != self.s:
            raise ValueError(f"need {self.s} colours of roots")
        if self.eps is None:
            self.eps = [1.0] * self.s
        if self.zeta is None:
            self.zeta = [1.0] * (2 * self.s + 1)

    @property
    def sizes(self):
        return [len(r) for r in self.roots]

    def q(self, a: int, v):
        """Q_a(v) with Q_0 = 1 and Q_{s+1} = Q_s."""
        if a == 0:
            return 1.0
        if a == self.s + 1:
            a = self.s
        r = self.roots[a - 1]
        return np.prod(v - r) if len(r) else 1.0

    def flat(self) -> np.ndarray:
        return np.concatenate(self.roots)

    @classmethod
    def empty(cls, s: int) -> "BetheRoots":
        return cls(s, [np.zeros(0)] * s)


def _div(num, den, what):
    if den == 0:
        raise PoleError(f"vanishing denominator in {what}", quantity=what, module="bethe-dvf")
    return num / den


def vacuum_psi(idx: int, v, vac: VacuumData, s: int, zeta=1.0):
    """Vacuum part psi_a(v) for the label with index ``idx``."""
    pp, pm = vac.phi_plus, vac.phi_minus
    if idx == 0:
        return zeta * _div(pp(v) * pm(v + 1j) * pp(v - (2 * s - 1) / 2 * 1j),
                           pp(v - (2 * s + 1) / 2 * 1j), "psi_1")
    if idx == 2 * s:
        return zeta * _div(pm(v) * pp(v - 1j) * pm(v + (2 * s - 1) / 2 * 1j),
                           pm(v + (2 * s + 1) / 2 * 1j), "psi_1bar")
    return zeta * pp(v) * pm(v)


def z_function(idx: int, v, roots: BetheRoots, vac: VacuumData):
    """z(a; v) for the label with index ``idx``."""
    s = roots.s
    Q = roots.q
    ps = vacuum_psi(idx, v, vac, s, roots.zeta[idx])
    if idx < s:
        a = idx + 1
        num = Q(a - 1, v + 0.5j * (a + 1)) * Q(a, v + 0.5j * (a - 2))
        den = Q(a - 1, v + 0.5j * (a - 1)) * Q(a, v + 0.5j * a)
    elif idx == s:
        num = Q(s, v + 0.5j * (s - 1)) * Q(s, v + 0.5j * (s + 2))
        den = Q(s, v + 0.5j * (s + 1)) * Q(s, v + 0.5j * s)
    else:
        a = 2 * s - idx + 1
        num = Q(a - 1, v - 0.5j * (a - 2 * s)) * Q(a, v - 0.5j * (a - 2 * s - 3))
        den = Q(a - 1, v - 0.5j * (a - 2 * s - 2)) * Q(a, v - 0.5j * (a - 2 * s - 1))
    return ps * _div(num, den, f"z({idx})")


def tableaux(a: int, m: int, s: int):
    """Arrays d[j][k] (m rows, a columns): weakly increasing down, strictly along rows."""
    g = 2 * s + 1
    cells = [(j, k) for j in range(m) for k in range(a)]
    out = []
    for vals in itertools.product(range(g), repeat=len(cells)):
        d = dict(zip(cells, vals))
        if all(d[(j, k)] <= d[(j + 1, k)] for j in range(m - 1) for k in range(a)) and \
                all(d[(j, k)] < d[(j, k + 1)] for j in range(m) for k in range(a - 1)):
            out.append(d)
    return out


def dvf_count(a: int, s: int, m: int = 1) -> int:
    return len(tableaux(a, m, s))


def dvf_t(a: int, v, roots: BetheRoots, vac: VacuumData, m: int = 1):
    """T^(a)_m(v) as the sum over tableaux of products of z-functions."""
    s = roots.s
    if not 1 <= a <= s:
        raise ValueError(f"a must lie in 1..{s}")
    total = 0j
    for d in tableaux(a, m, s):
        term = 1.0 + 0j
        for (j, k), idx in d.items():
            # rows j = 1..m, columns k = 1..a in the shift formula
            term *= z_function(idx, v - 0.5j * (m - a - 2 * (j + 1) + 2 * (k + 1)), roots, vac)
        total += term
    return total


def normalization(a: int, m: int, v, vac: VacuumData):
    """N~^(a)_m(v)."""
    pp, pm = vac.phi_plus, vac.phi_minus
    out = _div(pm(v + (m + a) / 2 * 1j) * pp(v - (m + a) / 2 * 1j),
               pm(v - (m - a) / 2 * 1j) * pp(v + (m - a) / 2 * 1j), "normalization")
    for j in range(1, m + 1):
        for k in range(1, a + 1):
            x = (m - a - 2 * j + 2 * k) / 2 * 1j
            out *= pm(v - x) * pp(v - x)
    return out


def t_tilde(a: int, m: int, v, roots: BetheRoots, vac: VacuumData):
    """Normalized T~^(a)_m(v) with the boundary values T~^(a)_0 = 1 and T~^(0)_m."""
    s = roots.s
    if m == 0:
        return 1.0
    if a == 0:
        pp, pm = vac.phi_plus, vac.phi_minus
        return _div(pm(v - m / 2 * 1j) * pp(v + m / 2 * 1j),
                    pm(v + m / 2 * 1j) * pp(v - m / 2 * 1j), "T~(0)")
    if a == s + 1:
        a = s
    return dvf_t(a, v, roots, vac, m) / normalization(a, m, v, vac)


def tsystem_residual(a: int, m: int, v, roots: BetheRoots, vac: VacuumData) -> complex:
    """LHS - RHS of the T-system relation at (a, m); a = s uses T~^(s-1) T~^(s)."""
    s = roots.s
    lhs = t_tilde(a, m, v + 0.5j, roots, vac) * t_tilde(a, m, v - 0.5j, roots, vac)
    upper = t_tilde(a + 1, m, v, roots, vac) if a < s else t_tilde(s, m, v, roots, vac)
    rhs = (t_tilde(a, m + 1, v, roots, vac) * t_tilde(a, m - 1, v, roots, vac)
           + t_tilde(a - 1, m, v, roots, vac) * upper)
    return complex(lhs - rhs)


def _b(a: int, d: int) -> int:
    return 2 * (a == d) - (a == d + 1) - (a == d - 1)


def _bae_lhs(v, vac: VacuumData, g: int):
    pp, pm = vac.phi_plus, vac.phi_minus
    return _div(pm(v + 0.5j) * pp(v + 0.5j - 0.5j * g), pm(v - 0.5j) * pp(v - 0.5j - 0.5j * g), "BAE")


def bae_residual(roots: BetheRoots, vac: VacuumData) -> np.ndarray:
    """LHS^(delta_a1) + eps_a prod_d Q_d(v + i B/2)/Q_d(v - i B/2) for every root."""
    s, g = roots.s, 2 * roots.s + 1
    out = []
    for a in range(1, s + 1):
        for vk in roots.roots[a - 1]:
            lhs = _bae_lhs(vk, vac, g) if a == 1 else 1.0
            prod = 1.0 + 0j
            for d in range(1, s + 2):
                B = _b(a, d)
                if B:
                    prod *= _div(roots.q(d, vk + 0.5j * B), roots.q(d, vk - 0.5j * B), "BAE")
            out.append(lhs + roots.eps[a - 1] * prod)
    return np.array(out, dtype=complex)


def _log_system(x, s: int, M: int, vac: VacuumData, eps):
    """log(-ratio) form of the BAE and its analytic Jacobian (roots flattened by colour)."""
    g = 2 * s + 1
    n2 = vac.N // 2
    u = vac.u
    n = len(x)
    res = np.zeros(n, dtype=complex)
    jac = np.zeros((n, n), dtype=complex)
    for a in range(1, s + 1):
        for k in range(M):
            i = (a - 1) * M + k
            vk = x[i]
            if a == 1:
                ratio = _bae_lhs(vk, vac, g)
                for shift, sign in ((0.5j - 1j * u, 1), (0.5j - 0.5j * g + 1j * u, 1),
                                    (-0.5j - 1j * u, -1), (-0.5j - 0.5j * g + 1j * u, -1)):
                    jac[i, i] += sign * n2 / (vk + shift)
            else:
                ratio = 1.0 + 0j
            ratio = ratio / eps[a - 1]
            for d in range(1, s + 2):
                B = _b(a, d)
                if not B:
                    continue
                dd = min(d, s)
                for l in range(M):
                    j = (dd - 1) * M + l
                    w = x[j]
                    ratio /= (vk + 0.5j * B - w) / (vk - 0.5j * B - w)
                    jac[i, i] -= 1 / (vk + 0.5j * B - w) - 1 / (vk - 0.5j * B - w)
                    jac[i, j] -= -1 / (vk + 0.5j * B - w) + 1 / (vk - 0.5j * B - w)
            res[i] = np.log(-ratio)
    return res, jac


def two_string_seed(s: int, N: int, u: float) -> np.ndarray:
    """Initial guess for the largest-eigenvalue sector (M_a = N for every colour).

    Colour-a roots sit near i a/2 and i (g-a)/2, one pair per real position;
    N/2 positions are spread symmetrically around 0.
    """
    g = 2 * s + 1
    ns = N // 2
    xs = (np.arange(ns) - (ns - 1) / 2) * max(2 * abs(u), 2e-3)
    seed = []
    for a in range(1, s + 1):
        for x in xs:
            seed += [x + 1j * (a / 2 + 0.6 * u / a), x + 1j * ((g - a) / 2 - 0.6 * u / a)]
    return np.array(seed, dtype=complex)


@dataclass
class NewtonTrace:
    residuals: list = field(default_factory=list)
    iterates: list = field(default_factory=list)


def solve_two_string(s: int, N: int, u: float, seed=None, tol: float = 1e-13,
                     max_iter: int = 200, trace: NewtonTrace | None = None) -> BetheRoots:
    """Newton solve of the log-form BAE in the two-string sector, eps = zeta = 1."""
    vac = VacuumData(u, N)
    x = two_string_seed(s, N, u) if seed is None else np.asarray(seed, dtype=complex).copy()
    M = len(x) // s
    eps = [1.0] * s
    best = np.inf
    for _ in range(max_iter):
        r, jac = _log_system(x, s, M, vac, eps)
        best = np.abs(r).max()
        if trace is not None:
            trace.residuals.append(best)
            trace.iterates.append(x.copy())
        if best < tol:
            return BetheRoots(s, [x[a * M:(a + 1) * M] for a in range(s)])
        dx = np.linalg.solve(jac, r)
        lam = 1.0
        while True:
            xn = x - lam * dx
            with np.errstate(all="ignore"):
                rn, _ = _log_system(xn, s, M, vac, eps)
            if np.all(np.isfinite(rn)) and np.abs(rn).max() < best:
                break
            lam /= 2
            if lam < 1e-4:
                break
        x = xn
    last = BetheRoots(s, [x[a * M:(a + 1) * M] for a in range(s)])
    raise ConvergenceError(f"Newton stalled at residual {best:.3e}", quantity="Bethe roots",
                           module="bethe-dvf", result=last)


def pole_locations(roots: BetheRoots, a: int = 1):
    """Points where a dress-part denominator of T^(a)_1 vanishes."""
    s = roots.s
    locs = []
    for idx in range(2 * s + 1):
        if idx < s:
            b = idx + 1
            pairs = [(b - 1, 0.5j * (b - 1)), (b, 0.5j * b)]
        elif idx == s:
            pairs = [(s, 0.5j * (s + 1)), (s, 0.5j * s)]
        else:
            b = 2 * s - idx + 1
            pairs = [(b - 1, -0.5j * (b - 2 * s - 2)), (b, -0.5j * (b - 2 * s - 1))]
        for colour, shift in pairs:
            if colour == 0:
                continue
            colour = min(colour, s)
            for r in roots.roots[colour - 1]:
                locs.append(r - shift)
    if a != 1:
        # columns of height a use z at v + (i/2)(a + 1 - 2k), k = 1..a
        locs = [p - 0.5j * (a + 1 - 2 * k) for p in locs for k in range(1, a + 1)]
    return np.array(locs)


def pole_cancellation_check(roots: BetheRoots, vac: VacuumData, a: int = 1, m: int = 1,
                            radius: float = 1e-3, nodes: int = 32) -> float:
    """Largest |residue| of T~^(a)_m around the dress-part pole candidates."""
    if m != 1:
        raise NotImplementedError("pole check implemented for m = 1")
    theta = 2 * np.pi * np.arange(nodes) / nodes
    circle = radius * np.exp(1j * theta)
    worst = 0.0
    for p in pole_locations(roots, a):
        vals = np.array([t_tilde(a, 1, p + c, roots, vac) for c in circle])
        residue = np.mean(vals * circle)
        worst = max(worst, abs(residue))
    return worst


def largest_eigenvalue_dvf(v, s: int, N: int, u: float, roots: BetheRoots | None = None) -> complex:
    """T^(1)_1(v) on the two-string solution."""
    roots = solve_two_string(s, N, u) if roots is None else roots
    return complex(dvf_t(1, v, roots, VacuumData(u, N)))


__all__ = [
    "BetheRoots", "NewtonTrace", "VacuumData", "bae_residual", "dvf_count", "dvf_t",
    "largest_eigenvalue_dvf", "normalization", "pole_cancellation_check", "pole_locations",
    "solve_two_string", "t_tilde", "tableaux", "tsystem_residual", "two_string_seed",
    "vacuum_psi", "z_function",
]
