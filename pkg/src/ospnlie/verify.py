"""Oracle suites behind ``ospnlie verify``.

Each suite returns a list of :class:`Check` records; a suite passes when every
check does.  Oracles are independent computations (exact recursion, dense
linear algebra, Bethe roots, exact diagonalization, exact series), never
stored numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import bethe, lattice, nlie, qsystem
from .hte import run_hte


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    value: float
    bound: float
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return f"{mark} [{self.suite}] {self.name}: {self.value:.3e} (bound {self.bound:.1e}) {self.detail}".rstrip()


def _check(suite, name, value, bound, detail=""):
    return Check(suite, name, bool(value < bound), float(value), float(bound), detail)


def suite_qsystem(s_max: int = 4, m_max: int = 20):
    out = []
    for s in range(1, s_max + 1):
        table = qsystem.QTable.build(s, m_max + 1)
        res = qsystem.q_check_recursion(table, m_max)
        out.append(Check("qsystem", f"recursion s={s} m<={m_max}", res.ok, len(res.failures), 1,
                         f"failures {res.failures[:3]}" if res.failures else ""))
        bad = sum(table[(a, 1)] != comb(2 * s + 1, a) for a in range(s + 1))
        out.append(Check("qsystem", f"Q^(a)_1 = binom(2s+1, a) s={s}", bad == 0, bad, 1))
    return out


def _rel_commutator(x, y):
    c = x @ y - y @ x
    return np.linalg.norm(c) / (np.linalg.norm(x) * np.linalg.norm(y))


def commutator_norms(family, pairs):
    """Largest relative ||[F(v), F(w)]||_F / (||F(v)|| ||F(w)||) and largest absolute norm."""
    rel = ab = 0.0
    for v, w in pairs:
        x, y = family(v), family(w)
        rel = max(rel, _rel_commutator(x, y))
        ab = max(ab, float(np.linalg.norm(x @ y - y @ x)))
    return rel, ab


def random_pairs(count: int = 20, seed: int = 0):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.5, 1.5, (count, 2)) + 1j * rng.uniform(-0.3, 0.3, (count, 2))
    return [(complex(a), complex(b)) for a, b in z]


def hamiltonian_commutator(s: int = 1, L: int = 4, J: float = 1.0, v: complex = 0.37 + 0.11j) -> float:
    h = lattice.hamiltonian(s, L, J).matrix
    t = lattice.row_transfer(v, s, L).matrix
    return float(np.linalg.norm(h @ t - t @ h))


def suite_ybe_commutation(count: int = 20, seed: int = 0):
    out = []
    pairs = random_pairs(count, seed)
    for s in (1, 2):
        rel, ab = commutator_norms(lambda v, s=s: lattice.row_transfer(v, s, 3).matrix, pairs)
        out.append(_check("ybe-commutation", f"row transfer s={s} L=3 (relative)", rel, 1e-10,
                          f"absolute {ab:.1e}"))
    for N in (2, 4):
        p = lattice.ModelParams(1, -1.0, 2.0, N=N)
        rel, ab = commutator_norms(lambda v, p=p: lattice.qtm_matrix(v, p).matrix, pairs)
        out.append(_check("ybe-commutation", f"QTM s=1 N={N} (relative)", rel, 1e-10,
                          f"absolute {ab:.1e}"))
    out.append(_check("ybe-commutation", "[H, t(v)] s=1 L=4", hamiltonian_commutator(), 1e-9))
    return out


def dvf_vs_qtm(T: float = 20.0, points=(0.0, 0.3, -0.7, 0.2 + 0.1j, 0.5 - 0.15j)):
    """s=1, N=2: Bethe roots, then DVF against the nearest dense-QTM eigenvalue."""
    p = lattice.ModelParams(1, -1.0, T, N=2)
    vac = bethe.VacuumData(p.u, 2)
    roots = bethe.solve_two_string(1, 2, p.u)
    worst = 0.0
    for v in points:
        ev = np.linalg.eigvals(lattice.qtm_matrix(v, p).matrix)
        worst = max(worst, float(np.min(np.abs(ev - bethe.dvf_t(1, v, roots, vac)))))
    lam0 = lattice.largest_eigenvalue(lattice.qtm_matrix(0.0, p))
    branch = abs(lam0 - bethe.dvf_t(1, 0.0, roots, vac))
    bae = float(np.abs(bethe.bae_residual(roots, vac)).max())
    poles = bethe.pole_cancellation_check(roots, vac)
    return bae, worst, float(branch), poles


def suite_bae():
    bae, worst, branch, poles = dvf_vs_qtm()
    return [
        _check("bae", "BAE residual s=1 N=2 u=0.025", bae, 1e-10),
        _check("bae", "DVF vs dense QTM at 5 points", worst, 1e-8),
        _check("bae", "DVF is the largest eigenvalue at v=0", branch, 1e-8),
        _check("bae", "pole-cancellation residues", poles, 1e-8),
    ]


def ed_sequence(T: float = 5.0, lengths=(4, 6, 8)):
    return [lattice.finite_L_free_energy(1, L, -1.0, T) for L in lengths]


def suite_nlie_vs_ed(T: float = 5.0):
    f = nlie.solve_free_energy(1, -1.0, T)
    seq = ed_sequence(T)
    gaps = [abs(x - f) for x in seq]
    mono = all(b < a for a, b in zip(gaps, gaps[1:]))
    return [
        _check("nlie-vs-ed", f"|f_NLIE - f_L=8| at T={T}", gaps[-1], 1e-3),
        Check("nlie-vs-ed", "L=4,6,8 gaps decrease", mono, gaps[-1], gaps[0],
              "gaps " + ", ".join(f"{g:.2e}" for g in gaps)),
    ]


def first_omitted_term(T: float, J: float = -1.0, order: int = 12) -> float:
    """|T c_{order+1} (J/T)^(order+1)| from the exact expansion one order further."""
    c = run_hte(order + 1).f_over_t[order]
    return abs(T * float(c) * (J / T) ** (order + 1))


def suite_nlie_vs_hte():
    res = run_hte(13)
    out = []
    for T, bound in ((10.0, 1e-8), (8.0, None), (15.0, None)):
        f = nlie.solve_free_energy(1, -1.0, T)
        series = res.free_energy(T, -1.0, 12)
        if bound is None:
            bound = 3 * abs(T * float(res.f_over_t[12]) * (-1.0 / T) ** 13)
        out.append(_check("nlie-vs-hte", f"|f_NLIE - f_series| at T={T:g}", abs(f - series), bound))
    return out


def trotter_sequence(T: float = 2.0, Ns=(8, 16, 32), config: nlie.SolverConfig | None = None):
    config = config or nlie.SolverConfig(M=128)
    return [nlie.solve_free_energy(1, -1.0, T, config, N=N) for N in Ns]


def suite_trotter(T: float = 2.0):
    f_inf = nlie.solve_free_energy(1, -1.0, T)
    seq = trotter_sequence(T)
    gaps = [abs(x - f_inf) for x in seq]
    mono = all(b < a for a, b in zip(gaps, gaps[1:]))
    # the gap closes like 1/N^2; Richardson on N = 16, 32
    extrap = (4 * seq[2] - seq[1]) / 3
    p = lattice.ModelParams(1, -1.0, 2.0, N=2)
    vac = bethe.VacuumData(p.u, 2)
    lam = lattice.largest_eigenvalue(lattice.qtm_matrix(0.0, p)) / bethe.normalization(1, 1, 0.0, vac)
    sol = nlie.solve_fixed_point(nlie.NlieParams(1, -1.0, 2.0, 2), raise_on_failure=True)
    return [
        Check("trotter", "N=8,16,32 approach the Trotter limit monotonically", mono, gaps[-1], gaps[0],
              "gaps " + ", ".join(f"{g:.2e}" for g in gaps)),
        _check("trotter", "extrapolated gap", abs(extrap - f_inf), 1e-5),
        _check("trotter", "N=2 NLIE vs normalized dense QTM at v=0", abs(sol.t(1, 0.0) - lam), 1e-6),
    ]


SUITES = {
    "qsystem": suite_qsystem,
    "ybe-commutation": suite_ybe_commutation,
    "bae": suite_bae,
    "nlie-vs-ed": suite_nlie_vs_ed,
    "nlie-vs-hte": suite_nlie_vs_hte,
    "trotter": suite_trotter,
}


def run_suites(names):
    names = list(SUITES) if names == ["all"] or names == "all" else list(names)
    checks = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        checks.extend(SUITES[name]())
    return checks
