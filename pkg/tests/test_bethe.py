import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ospnlie import lattice
from ospnlie.bethe import (BetheRoots, NewtonTrace, VacuumData, bae_residual, dvf_count, dvf_t,
                           largest_eigenvalue_dvf, pole_cancellation_check,
                           solve_two_string, t_tilde, tsystem_residual)
from ospnlie.errors import ConvergenceError
from ospnlie.qsystem import q_closed_form

CASES = [(1, 2, 0.025), (1, 2, -0.03), (1, 4, 0.05), (2, 2, 0.05), (2, 4, 0.025)]


@pytest.fixture(scope="module")
def solved():
    return {c: solve_two_string(*c) for c in CASES}


@settings(deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.data())
def test_tableau_count_is_q(s, m, data):
    a = data.draw(st.integers(1, s))
    assert dvf_count(a, s, m) == q_closed_form(a, m, s)


@pytest.mark.parametrize("case", CASES)
def test_bae_residual(solved, case):
    s, N, u = case
    roots = solved[case]
    assert roots.sizes == [N] * s
    assert np.abs(bae_residual(roots, VacuumData(u, N))).max() < 1e-10


@pytest.mark.parametrize("case", CASES)
def test_tsystem_m1(solved, case):
    s, N, u = case
    vac = VacuumData(u, N)
    for v in (0.3 + 0.05j, -0.8, 1.7 - 0.2j):
        for a in range(1, s + 1):
            assert abs(tsystem_residual(a, 1, v, solved[case], vac)) < 1e-10


@pytest.mark.parametrize("case", CASES)
def test_asymptotics(solved, case):
    s, N, u = case
    vac = VacuumData(u, N)
    for a in range(1, s + 1):
        assert abs(t_tilde(a, 1, 1e3, solved[case], vac) - q_closed_form(a, 1, s)) < 1e-4


@pytest.mark.parametrize("case", [(1, 2, 0.025), (1, 4, 0.05), (2, 2, 0.05)])
def test_dvf_matches_dense_qtm(solved, case):
    s, N, u = case
    T = 1.0 / (N * u)
    p = lattice.ModelParams(s, -1.0, T, N=N)
    vac = VacuumData(u, N)
    for v in (0.0, 0.4, -0.3 + 0.1j):
        ev = np.linalg.eigvals(lattice.qtm_matrix(v, p).matrix)
        d = dvf_t(1, v, solved[case], vac)
        assert np.min(np.abs(ev - d)) < 1e-8 * abs(d)
    assert abs(lattice.largest_eigenvalue(lattice.qtm_matrix(0.0, p)) - dvf_t(1, 0.0, solved[case], vac)) < 1e-8


@pytest.mark.parametrize("case", CASES)
def test_poles_cancel(solved, case):
    s, N, u = case
    vac = VacuumData(u, N)
    for a in range(1, s + 1):
        assert pole_cancellation_check(solved[case], vac, a) < 1e-8


def test_poles_do_not_cancel_off_shell():
    roots = solve_two_string(1, 2, 0.025)
    bad = BetheRoots(1, [roots.roots[0] + 0.01])
    assert pole_cancellation_check(bad, VacuumData(0.025, 2)) > 1e-6


def test_newton_trace_and_failure():
    trace = NewtonTrace()
    solve_two_string(1, 2, 0.025, trace=trace)
    assert trace.residuals[-1] < 1e-13
    with pytest.raises(ConvergenceError) as exc:
        solve_two_string(1, 2, 0.025, max_iter=1)
    assert exc.value.result is not None


@settings(max_examples=8, deadline=None)
@given(st.floats(0.005, 0.06))
def test_largest_eigenvalue_branch_is_real(u):
    lam = largest_eigenvalue_dvf(0.0, 1, 2, u)
    assert abs(lam.imag) < 1e-10
    assert lam.real > 0
