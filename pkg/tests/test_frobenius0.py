from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import op
from oracles import apply_naive_0
from regsing.diffop import EulerComponent, decompose, from_euler_form, indicial
from regsing.errors import DomainError, IrregularSingularity, NonRationalExponent
from regsing.exactalg import FieldDesc, Poly
from regsing.frobenius0 import (
    ExponentGroup,
    GroupSolver,
    LogSeries,
    apply_extended,
    euler_kernel0,
    group_exponents,
    perturbation_sum,
    right_inverse0,
    solve0,
)

Q = FieldDesc()
s = Poly.variable(Q)

SEC22 = "x^5*D^5 - 2*x^4*D^4 - 2*x^3*D^3 + 16*x^2*D^2 - 16*x*D - x"
HYPERGEOMETRIC = "x^3*D^3 + 4*x^2*D^2 + x*D - 1 - (x^4*D^3 + 8*x^3*D^2 + 13*x^2*D + 3*x)"


def groups_of(src):
    return group_exponents(indicial(op(src)))


def test_grouping_examples():
    (g,) = groups_of(SEC22)
    assert g.exponents == (0, 2, 5) and g.partial_sums == (2, 3, 5)
    (g,) = groups_of(HYPERGEOMETRIC)
    assert g.exponents == (-1, 1) and g.multiplicities == (2, 1)
    halves = groups_of("2*x^2*D^2 + x*D")
    assert [h.exponents for h in halves] == [(0,), (Fraction(1, 2),)]
    with pytest.raises(NonRationalExponent):
        groups_of("x^2*D^2 + x*D - 2")


def test_function_space_layout():
    (g,) = groups_of(SEC22)
    layout = g.layout()
    assert layout == [(0, 0), (0, 1), (2, 2), (5, 3), (5, 4)]
    for k in range(8):
        for i in range(7):
            from_layout = any(off <= k and zi == i for off, zi in layout)
            assert g.contains(k, i) == from_layout


def test_extended_action_examples():
    L0 = op("x^2*D^2 + 3*x*D + 1")
    assert apply_extended(L0, LogSeries.monomial(-1, 0, 1)).is_zero()

    L = op("x^3*D^3 - 4*x^2*D^2 + 9*x*D - 9")
    for rho in (Fraction(0), Fraction(1, 3), Fraction(2), Fraction(-5, 2)):
        for i in range(5):
            got = apply_extended(L, LogSeries.monomial(rho, 0, i))
            # sum over l of chi^(l)(rho) / l! * i(i-1)...(i-l+1) z^(i-l)
            expected = {
                0: (rho - 1) * (rho - 3) ** 2,
                1: (3 * rho - 5) * (rho - 3) * i,
                2: (3 * rho - 7) * i * (i - 1),
                3: i * (i - 1) * (i - 2),
            }
            want = {(0, i - d): v for d, v in expected.items() if i - d >= 0 and v}
            assert got.coeffs == want
            direct = apply_naive_0(L, {(rho, i): 1})
            assert {(e - rho, zi): c for (e, zi), c in direct.items()} == want


def test_euler_kernels():
    L = EulerComponent(0, (s - 1) * (s - 3) ** 2)
    (g,) = group_exponents(indicial(from_euler_form({0: L.phi}, Q)))
    assert [(m.base + k, i) for m in euler_kernel0(L, g) for (k, i) in m.coeffs] == [(1, 0), (3, 0), (3, 1)]
    L = EulerComponent(0, (s + 1) ** 2)
    (g,) = group_exponents(indicial(from_euler_form({0: L.phi}, Q)))
    assert [(m.base + k, i) for m in euler_kernel0(L, g) for (k, i) in m.coeffs] == [(-1, 0), (-1, 1)]


def test_right_inverse_examples():
    g = ExponentGroup((Fraction(0),), (1,))
    assert right_inverse0(EulerComponent(0, s), g, (1, 0)) == LogSeries(0, {(1, 0): 1})
    g = ExponentGroup((Fraction(0), Fraction(4)), (1, 1))
    assert right_inverse0(EulerComponent(0, s**2 - 4 * s), g, (4, 0)) == LogSeries(0, {(4, 1): Fraction(1, 4)})
    g = ExponentGroup((Fraction(0),), (2,))
    assert right_inverse0(EulerComponent(0, s**2), g, (1, 0)) == LogSeries(0, {(1, 0): 1})
    with pytest.raises(DomainError):
        right_inverse0(EulerComponent(0, s), ExponentGroup((Fraction(0),), (1,)), (0, 0))


def test_resonant_solution_gains_a_log():
    (y,) = [sol for sol in solve0(op("x^2*D^2 - 3*x*D - 3*x - x^2 - x^3"), 4) if sol.rho == 0]
    half = Fraction(1, 2)
    assert y.series.coeffs == {(0, 0): 1, (1, 0): -1, (2, 0): half, (3, 0): -half, (4, 1): -half}


def test_hypergeometric_solutions():
    basis = solve0(op(HYPERGEOMETRIC), 13)
    by_label = {(sol.rho, sol.i): sol.series for sol in basis}
    assert by_label[(-1, 0)].coeffs == {(0, 0): 1}
    assert by_label[(-1, 1)].coeffs == {(0, 1): 1}
    y = by_label[(1, 0)]
    for k in range(1, 13):
        a_k = Fraction(k * (k + 2), k + 1)
        assert Fraction(3, 2) * y.coeffs.get((k + 1, 0), 0) == a_k
    assert y.z_degree() == 0


def test_euler_operator_solutions_are_monomials():
    basis = solve0(op("x^3*D^3 - 4*x^2*D^2 + 9*x*D - 9"), 10)
    assert [(sol.series.base + k, i) for sol in basis for (k, i) in sol.series.coeffs] == [(1, 0), (3, 0), (3, 1)]


def test_irregular_is_rejected():
    with pytest.raises(IrregularSingularity):
        solve0(op("x^3*D^2 + (x^2 - x)*D + 1"), 5)


# -- properties over random operators with rational exponents ---------------

EXPONENTS = [Fraction(0), Fraction(1), Fraction(2), Fraction(3), Fraction(-1), Fraction(1, 2), Fraction(5, 2)]


@st.composite
def regular_operators(draw, max_order=3):
    n = draw(st.integers(1, max_order))
    roots = draw(st.lists(st.sampled_from(EXPONENTS), min_size=n, max_size=n))
    phi0 = Poly.from_roots(Q, [Q(r) for r in roots]) * draw(st.sampled_from([1, 2, -3]))
    forms = {0: phi0}
    for tau in range(1, draw(st.integers(1, 3)) + 1):
        cs = draw(st.lists(st.integers(-3, 3), min_size=1, max_size=n + 1))
        forms[tau] = Poly(Q, cs)
    return from_euler_form(forms, Q)


@settings(max_examples=25, deadline=None)
@given(regular_operators())
def test_right_inverse_identity(L):
    comps = decompose(L)
    L0 = from_euler_form({0: comps[0].phi}, Q)
    for g in group_exponents(indicial(L)):
        solver = GroupSolver(comps, g)
        for k in range(1, 13):
            for i in range(g.z_bound(k - 1)):
                h = LogSeries(g.base, solver.right_inverse(k, i), None)
                assert apply_extended(L0, h) == LogSeries.monomial(g.base, k, i)
                # h lies in the function space and avoids the kernel monomials x^rho_j z^i, i < m_j
                for kk, ii in h.coeffs:
                    assert g.contains(kk, ii)
                    idx = g.index_of_offset(kk)
                    assert idx is None or ii >= g.multiplicities[idx]


@settings(max_examples=25, deadline=None)
@given(regular_operators())
def test_normal_form_identity_on_generators(L):
    N = 8
    comps = decompose(L)
    L0 = from_euler_form({0: comps[0].phi}, Q)
    for g in group_exponents(indicial(L)):
        for off, i in g.layout():
            f = LogSeries.monomial(g.base, off, i, N)
            v = perturbation_sum(L, g, f, N)
            assert apply_extended(L, v) == apply_extended(L0, f)


@settings(max_examples=25, deadline=None)
@given(regular_operators())
def test_solutions_annihilated_by_direct_differentiation(L):
    N = 7
    basis = solve0(L, N)
    assert len(basis) == L.order
    for sol in basis:
        terms = {(sol.series.base + k, i): c for (k, i), c in sol.series.coeffs.items()}
        residual = apply_naive_0(L, terms)
        assert all(e > sol.series.base + N for e, _ in residual)
        assert sol.series.coeffs.get((sol.rho - sol.series.base, sol.i)) == 1
