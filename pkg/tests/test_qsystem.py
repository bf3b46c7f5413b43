from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from ospnlie.qsystem import QTable, q1_values, q_check_recursion, q_closed_form


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_recursion_exact(s):
    res = q_check_recursion(QTable.build(s, 21), 20)
    assert res.ok and res.failures == [] and res.first_failure is None


@given(st.integers(1, 6))
def test_q1_binomial(s):
    assert q1_values(s)[: s + 1] == [comb(2 * s + 1, a) for a in range(s + 1)]
    assert all(q_closed_form(a, 1, s) == comb(2 * s + 1, a) for a in range(1, s + 1))


def test_q2_values():
    # (Q^(1)_1)^2 - Q^(2)_1 style checks: 9 - 3 = 6 at s=1
    assert [q_closed_form(1, 2, s) for s in (1, 2, 3, 4)] == [6, 15, 28, 45]


def test_boundaries():
    assert q_closed_form(0, 5, 2) == 1
    assert q_closed_form(2, 0, 2) == 1
    assert q_closed_form(3, 4, 2) == q_closed_form(2, 4, 2)
    with pytest.raises(ValueError):
        q_closed_form(4, 1, 2)
    with pytest.raises(ValueError):
        q_closed_form(1, -1, 2)


@given(st.integers(1, 3), st.integers(1, 8), st.data())
def test_tampering_detected(s, m, data):
    table = QTable.build(s, 10)
    a = data.draw(st.integers(1, s))
    table[(a, m)] = table[(a, m)] + Fraction(1, 7)
    if a == s:
        table[(s + 1, m)] = table[(a, m)]
    res = q_check_recursion(table, 9)
    assert not res.ok
    assert (a, m) in res.failures


def test_table_must_extend():
    with pytest.raises(ValueError):
        q_check_recursion(QTable.build(1, 5), 5)
