"""Fixed-point solver for the m=1 nonlinear integral equations.

Each unknown T^(a)(v), a = 1..s, equals Q^(a)_1 plus four contour integrals
around the points +-beta_k (k = 1, 2).  Expanding the Cauchy kernel
1/(v - y - b) in powers of y/(v - b) turns every integral into a principal
part sum_n p_n (v - b)^(-n) whose coefficients are the negative-power Laurent
coefficients of the integrand at y = 0.  With trapezoid nodes on a circle of
radius r these are one FFT away from the sampled integrand, so the state of
the iteration is the array of p_n.  For finite Trotter number the kernel
factor (1 - (y/(v - b))^(N/2)) truncates the sum at n = N/2 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import (ConvergenceError, DivisionBlowupError, KernelCollisionError, PoleError)

MODULE = "nlie-core"


@dataclass(frozen=True)
class Contour:
    """Circle ``center + radius * exp(2 pi i j / nodes)``."""

    center: complex
    radius: float
    nodes: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.nodes < 32 or self.nodes & (self.nodes - 1):
            raise ValueError("node count must be a power of two >= 32")

    def points(self) -> np.ndarray:
        return self.center + self.radius * np.exp(2j * np.pi * np.arange(self.nodes) / self.nodes)


@dataclass(frozen=True)
class BetaPoints:
    """beta^(a)_k = (1+a)i/2 and (g+1-a)i/2; finite-N values are shifted by -iu."""

    s: int
    u: float = 0.0

    def beta(self, a: int, k: int) -> complex:
        g = 2 * self.s + 1
        return 0.5j * (1 + a) if k == 1 else 0.5j * (g + 1 - a)

    def beta_tilde(self, a: int, k: int) -> complex:
        return self.beta(a, k) - 1j * self.u


@dataclass(frozen=True)
class SolverConfig:
    r: float = 0.2
    M: int = 64
    tol: float = 1e-12
    max_iter: int = 500
    omega: float = 1.0
    auto_relax: bool = True
    adaptive_nodes: bool = True
    max_nodes: int = 512
    init_scale: float = 1.0

    def __post_init__(self):
        if not 0 < self.r < 0.25:
            raise ValueError("contour radius must satisfy 0 < r < 1/4")
        if self.tol <= 1e-15:
            raise ValueError("tolerance must exceed 1e-15")
        if not 0 < self.omega <= 1:
            raise ValueError("omega must lie in (0, 1]")
        Contour(0j, self.r, self.M)  # validates M


@dataclass(frozen=True)
class NlieParams:
    s: int
    J: float
    T: float
    N: int | None = None     # None selects the Trotter limit

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("rank s must be >= 1")
        if self.T <= 0:
            raise ValueError("temperature must be positive")
        if self.N is not None and (self.N < 2 or self.N % 2):
            raise ValueError("Trotter number N must be even and >= 2")

    @property
    def u(self) -> float:
        return 0.0 if self.N is None else -self.J / (self.T * self.N)

    @property
    def mode(self) -> str:
        return "trotter" if self.N is None else "finite-n"


def t0_known(m: int, v, J: float, T: float):
    """T^(0)_m(v) = exp(-m J / ((v^2 + m^2/4) T)) in the Trotter limit."""
    v = np.asarray(v, dtype=complex)
    den = v * v + m * m / 4
    if np.any(den == 0):
        raise PoleError("T^(0) evaluated at v = +-im/2", quantity="T0", module=MODULE)
    out = np.exp(-m * J / (den * T))
    return out if out.ndim else complex(out)


def t0_finite_n(v, u: float, N: int):
    """T~^(0)_1(v) at finite Trotter number."""
    v = np.asarray(v, dtype=complex)
    n = N // 2
    num = (v - 0.5j - 1j * u) * (v + 0.5j + 1j * u)
    den = (v + 0.5j - 1j * u) * (v - 0.5j + 1j * u)
    if np.any(den == 0):
        raise PoleError("finite-N T^(0) at its pole", quantity="T0", module=MODULE)
    out = (num / den) ** n
    return out if out.ndim else complex(out)


@dataclass
class ContourSolution:
    """Converged (or last) iterate: principal-part coefficients of every T^(a)_1.

    ``coeffs[a-1, k-1, side, n-1]`` multiplies (v - sigma beta_k)^(-n) with
    sigma = +1 for side 0 and -1 for side 1.
    """

    params: NlieParams
    config: SolverConfig
    coeffs: np.ndarray
    iterations: int = 0
    change: float = math.inf
    converged: bool = False
    omega_used: float = 1.0
    nodes: int = 0
    history: list = field(default_factory=list)
    offset: np.ndarray | None = None

    @property
    def s(self) -> int:
        return self.params.s

    @property
    def nmax(self) -> int:
        return self.coeffs.shape[-1]

    def q1(self, a: int) -> float:
        return float(comb(2 * self.s + 1, a))

    def centers(self, a: int):
        bp = BetaPoints(self.s, self.params.u)
        return [(k, side, (1 if side == 0 else -1) * bp.beta_tilde(a, k))
                for k in (1, 2) for side in (0, 1)]

    def t(self, a: int, v, coeffs=None, guard: bool = True):
        """T^(a)_1(v) from the principal-part representation (a = 0 and s+1 handled)."""
        p = self.params
        if a == 0:
            return t0_known(1, v, p.J, p.T) if p.N is None else t0_finite_n(v, p.u, p.N)
        if a == self.s + 1:
            a = self.s
        c = self.coeffs if coeffs is None else coeffs
        v = np.asarray(v, dtype=complex)
        base = self.q1(a) + (0.0 if self.offset is None else self.offset[a - 1])
        out = np.full(v.shape, base, dtype=complex)
        n = np.arange(1, c.shape[-1] + 1)
        for k, side, b in self.centers(a):
            w = v - b
            if guard and np.any(np.abs(w) < self.config.r * (1 - 1e-9)):
                raise KernelCollisionError(
                    f"T^({a}) requested at distance {np.abs(w).min():.3g} < r from {b}",
                    quantity=f"T^({a})", module=MODULE)
            out = out + (c[a - 1, k - 1, side] * w[..., None] ** (-n)).sum(-1)
        return out if out.ndim else complex(out)

    def samples(self, coeffs=None) -> np.ndarray:
        """Values of every T^(a) on the circles around its principal-part centres."""
        y = Contour(0j, self.config.r, self.nodes or self.config.M).points()
        out = []
        for a in range(1, self.s + 1):
            for _, _, b in self.centers(a):
                out.append(self.t(a, y + b, coeffs))
        return np.concatenate(out)


def _integrands(sol: ContourSolution, coeffs, y: np.ndarray):
    """Sampled integrands F (centre +beta) and Fbar (centre -beta) for every (a, k)."""
    s = sol.s
    bp = BetaPoints(s, sol.params.u)
    out = {}
    for a in range(1, s + 1):
        for k in (1, 2):
            b = bp.beta_tilde(a, k)
            for side, sign in ((0, 1), (1, -1)):
                shift = sign * b
                num_at = y + shift - sign * 0.5j
                den_at = y + shift - sign * 1j
                den = sol.t(a, den_at, coeffs, guard=False)
                if np.any(np.abs(den) < 1e-12):
                    raise DivisionBlowupError(f"|T^({a})| < 1e-12 on a quadrature node",
                                              quantity=f"T^({a})", module=MODULE)
                num = sol.t(a - 1, num_at, coeffs, guard=False) * sol.t(a + 1, num_at, coeffs, guard=False)
                out[(a, k, side)] = num / den
    return out


def _iterate_map(sol: ContourSolution, coeffs, M: int) -> np.ndarray:
    r = sol.config.r
    y = Contour(0j, r, M).points()
    n = np.arange(1, coeffs.shape[-1] + 1)
    new = np.empty_like(coeffs)
    for (a, k, side), F in _integrands(sol, coeffs, y).items():
        new[a - 1, k - 1, side] = np.fft.ifft(F)[n] * r ** n
    return new


def _resolution(sol: ContourSolution, coeffs, M: int) -> float:
    """Relative size of the Nyquist band of the sampled integrands' spectra."""
    y = Contour(0j, sol.config.r, M).points()
    worst = 0.0
    for F in _integrands(sol, coeffs, y).values():
        power = np.abs(np.fft.fft(F)) / M
        band = power[M // 2 - 2: M // 2 + 3].max()
        worst = max(worst, band / power.max())
    return worst


def _nmax(params: NlieParams, M: int) -> int:
    return M // 2 - 1 if params.N is None else params.N // 2


def solve_fixed_point(params: NlieParams, config: SolverConfig | None = None,
                      raise_on_failure: bool = False) -> ContourSolution:
    """Iterate the m=1 system from T^(a) = init_scale * Q^(a)_1 to a fixed point.

    Convergence: sup-norm change of the sampled values on all circles,
    relative to their sup-norm, below ``config.tol``.  The relaxation factor
    drops to 0.5 when the change grows twice in a row or sets no new minimum
    for 8 iterations (if ``auto_relax``).
    With ``adaptive_nodes`` the node count doubles while the integrand spectra
    are not resolved to 1e-13 at the Nyquist band.
    """
    config = config or SolverConfig()
    M = config.M
    if params.N is not None and params.N // 2 > M // 2 - 1:
        raise ValueError(f"need M > N + 1 nodes for N = {params.N}")
    s = params.s
    coeffs = np.zeros((s, 2, 2, _nmax(params, M)), dtype=complex)
    sol = ContourSolution(params, config, coeffs, nodes=M, omega_used=config.omega)
    # the starting guess scale * Q^(a) is carried as a constant offset that the
    # map itself never produces, so it decays like (1 - omega)^k
    sol.offset = np.array([(config.init_scale - 1) * sol.q1(a) for a in range(1, s + 1)])
    omega = config.omega
    prev = sol.samples(coeffs)
    rises = stall = 0
    last_change = best = math.inf
    total = 0
    while True:
        converged = False
        for _ in range(config.max_iter - total):
            total += 1
            new = _iterate_map(sol, coeffs, M)
            coeffs = (1 - omega) * coeffs + omega * new
            sol.offset = (1 - omega) * sol.offset
            cur = sol.samples(coeffs)
            if not np.all(np.isfinite(cur)):
                sol.coeffs, sol.iterations, sol.change = coeffs, total, math.inf
                raise ConvergenceError("iteration produced non-finite values", quantity="T^(a)_1",
                                       module=MODULE, result=sol)
            change = float(np.abs(cur - prev).max() / np.abs(cur).max())
            prev = cur
            sol.history.append(change)
            if config.auto_relax and omega > 0.5:
                rises = rises + 1 if change > last_change else 0
                stall = 0 if change < best else stall + 1
                if rises >= 2 or stall >= 8:
                    omega = 0.5
            best = min(best, change)
            last_change = change
            if change < config.tol:
                converged = True
                break
        sol.coeffs, sol.iterations, sol.change, sol.omega_used = coeffs, total, change, omega
        if not converged:
            break
        if not (config.adaptive_nodes and params.N is None and 2 * M <= config.max_nodes
                and _resolution(sol, coeffs, M) > 1e-13):
            break
        M *= 2
        padded = np.zeros((s, 2, 2, _nmax(params, M)), dtype=complex)
        padded[..., : coeffs.shape[-1]] = coeffs
        coeffs = padded
        sol.coeffs, sol.nodes = coeffs, M
        prev = sol.samples(coeffs)
        last_change = best = math.inf
        rises = stall = 0
    sol.converged = converged
    sol.nodes = M
    if not converged and raise_on_failure:
        raise ConvergenceError(f"no convergence after {total} iterations (change {change:.3e})",
                               quantity="T^(a)_1", module=MODULE, result=sol)
    return sol


def evaluate_t(a: int, v, sol: ContourSolution):
    """T^(a)_1(v) at admissible v (outside every circle of radius r)."""
    return sol.t(a, v)


def _kernel_guard(v, b, r):
    d = abs(abs(v - b) - r)
    if d <= r / 2 or abs(v - b) < r:
        raise KernelCollisionError(f"v={v} within r/2 of the contour around {b}",
                                   quantity="kernel", module=MODULE)


def rhs_trotter(a: int, v: complex, sol: ContourSolution, nodes: int | None = None) -> complex:
    """Right-hand side by direct trapezoid quadrature of the Cauchy kernels."""
    if sol.params.N is not None:
        raise ValueError("use rhs_finite_n for finite Trotter number")
    return _rhs_direct(a, v, sol, nodes, None)


def rhs_finite_n(a: int, v: complex, sol: ContourSolution, nodes: int | None = None) -> complex:
    """Right-hand side of the finite-N equation with kernel (1 - (y/(v-b))^(N/2))/(v - y - b)."""
    if sol.params.N is None:
        raise ValueError("finite-N right-hand side needs a Trotter number")
    return _rhs_direct(a, v, sol, nodes, sol.params.N // 2)


def _rhs_direct(a, v, sol, nodes, half_n):
    M = nodes or sol.nodes
    r = sol.config.r
    y = Contour(0j, r, M).points()
    total = sol.q1(a)
    for (aa, k, side), F in _integrands(sol, sol.coeffs, y).items():
        if aa != a:
            continue
        b = (1 if side == 0 else -1) * BetaPoints(sol.s, sol.params.u).beta_tilde(a, k)
        _kernel_guard(v, b, r)
        w = v - b
        kernel = 1.0 / (w - y)
        if half_n is not None:
            kernel = kernel * (1 - (y / w) ** half_n)
        # dy/(2 pi i) on the circle is y dtheta/(2 pi)
        total = total + np.mean(F * kernel * y)
    return complex(total)


def free_energy(sol: ContourSolution) -> float:
    """f = -J - T log T^(1)_1(0), the same closed form at finite N and in the Trotter limit."""
    p = sol.params
    if not sol.converged:
        raise ConvergenceError(f"state not converged (change {sol.change:.3e})",
                               quantity="free energy", module=MODULE, result=sol)
    val = sol.t(1, 0.0)
    if val.real <= 0:
        raise ValueError(f"T^(1)_1(0) = {val} is not positive")
    return float(-p.J - p.T * math.log(val.real))


def lattice_free_energy(sol: ContourSolution) -> float:
    """Finite-N lattice value -T log Lambda(0) with Lambda = T^(1)_1 (1-u)^N restored."""
    p = sol.params
    if p.N is None:
        raise ValueError("lattice free energy needs a Trotter number")
    val = sol.t(1, 0.0)
    return float(-p.T * (math.log(val.real) + p.N * math.log(1 - p.u)))


def t2_from_tsystem(a: int, v, sol: ContourSolution):
    """T^(a)_2(v) = T^(a)_1(v+i/2) T^(a)_1(v-i/2) - T^(a-1)_1(v) T^(a+1)_1(v)."""
    return sol.t(a, v + 0.5j) * sol.t(a, v - 0.5j) - sol.t(a - 1, v) * sol.t(a + 1, v)


def y_function(a: int, v, sol: ContourSolution):
    """Y^(a)_1 = T^(a)_2 / (T^(a-1)_1 T^(a+1)_1), with T^(s)_1 in place of T^(s+1)_1."""
    upper = sol.t(a + 1, v) if a < sol.s else sol.t(sol.s, v)
    return t2_from_tsystem(a, v, sol) / (sol.t(a - 1, v) * upper)


def solve_free_energy(s: int, J: float, T: float, config: SolverConfig | None = None,
                      N: int | None = None) -> float:
    return free_energy(solve_fixed_point(NlieParams(s, J, T, N), config, raise_on_failure=True))


@dataclass
class ThermoPoint:
    T: float
    f: float
    S: float
    C: float
    iterations: int


def _derivatives(fun, T: float, rel_step: float):
    h = rel_step * T
    vals = {x: fun(T + x * h) for x in (-1, -0.5, 0.5, 1)}
    f0 = fun(T)
    d1 = lambda k: (vals[k] - vals[-k]) / (2 * k * h)
    d2 = lambda k: (vals[k] - 2 * f0 + vals[-k]) / (k * h) ** 2
    # Richardson: error of the central formulas is O(h^2)
    first = (4 * d1(0.5) - d1(1)) / 3
    second = (4 * d2(0.5) - d2(1)) / 3
    return f0, first, second


def thermo_point(s: int, J: float, T: float, config: SolverConfig | None = None,
                 rel_step: float = 1e-3) -> ThermoPoint:
    """f, S = -df/dT and C = -T d2f/dT2 at one temperature."""
    iters = []

    def fun(t):
        sol = solve_fixed_point(NlieParams(s, J, t), config)
        iters.append(sol.iterations)
        return free_energy(sol)

    f0, d1, d2 = _derivatives(fun, T, rel_step)
    return ThermoPoint(T, f0, -d1, -T * d2, max(iters))


def thermo_sweep(s: int, J: float, temperatures, config: SolverConfig | None = None,
                 rel_step: float = 1e-3, workers: int = 1):
    """Thermodynamics on a temperature grid; results ordered like ``temperatures``.

    A non-converged point raises :class:`ConvergenceError` naming its T.
    """
    temps = [float(t) for t in temperatures]
    args = [(s, J, t, config, rel_step) for t in temps]
    if workers <= 1:
        results = [_sweep_task(a) for a in args]
    else:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, args))
    for t, res in zip(temps, results):
        if isinstance(res, ConvergenceError):
            raise ConvergenceError(f"sweep point T={t} did not converge: {res}",
                                   quantity=f"f(T={t})", module=MODULE)
    return results


def _sweep_task(args):
    s, J, T, config, rel_step = args
    try:
        return thermo_point(s, J, T, config, rel_step)
    except ConvergenceError as exc:
        return exc


def log_grid(t_min: float, t_max: float, count: int) -> np.ndarray:
    return np.geomspace(t_min, t_max, count)


__all__ = [
    "BetaPoints", "Contour", "ContourSolution", "NlieParams", "SolverConfig", "ThermoPoint",
    "evaluate_t", "free_energy", "lattice_free_energy", "log_grid", "rhs_finite_n", "rhs_trotter",
    "solve_fixed_point", "solve_free_energy", "t0_finite_n", "t0_known", "t2_from_tsystem",
    "thermo_point", "thermo_sweep", "y_function",
]
