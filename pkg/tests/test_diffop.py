import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import op
from regsing.diffop import (
    DiffOp,
    decompose,
    from_euler_form,
    indicial,
    indicial_polynomial,
    initial_form,
    is_regular_singular,
    recompose,
    shift_normalize,
    to_euler_form,
)
from regsing.errors import DomainError
from regsing.exactalg import FieldDesc, Poly

Q = FieldDesc()


def s_poly(*coeffs, desc=Q):
    return Poly(desc, list(coeffs))


def operators(desc=Q, max_order=3, max_deg=3):
    coeff = st.integers(-4, 4) if desc.characteristic == 0 else st.integers(0, desc.characteristic - 1)
    term = st.tuples(st.integers(0, max_deg), st.integers(0, max_order))
    return st.dictionaries(term, coeff, max_size=6).map(lambda t: DiffOp(desc, t))


def test_weyl_commutator():
    x, D = DiffOp.x(Q), DiffOp.d(Q)
    assert D * x == x * D + 1
    assert D * D == D**2
    assert (D * x) != x * D


@settings(max_examples=50)
@given(operators(), operators(), operators())
def test_product_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_shift_normalize_examples():
    L = op("x^3*D^3 - 4*x^2*D^2 + 9*x*D - 9")
    assert shift_normalize(L) == (L, 0)
    assert shift_normalize(op("x*(x*D - x)")) == (op("x*D - x"), 1)
    assert shift_normalize(op("D - 1")) == (op("x*D - x"), -1)
    with pytest.raises(DomainError):
        shift_normalize(DiffOp(Q))


def test_decompose_examples():
    (c,) = decompose(op("x^2*D^2 + 3*x*D + 1"))
    assert c.shift == 0 and c.phi == s_poly(1, 2, 1)
    comps = decompose(op("x*D - x"))
    assert [(c.shift, c.phi) for c in comps] == [(0, s_poly(0, 1)), (1, s_poly(-1))]
    comps = decompose(op("x^2*D^2 - 3*x*D - 3*x - x^2 - x^3"))
    assert [(c.shift, c.phi) for c in comps] == [
        (0, s_poly(0, -4, 1)),
        (1, s_poly(-3)),
        (2, s_poly(-1)),
        (3, s_poly(-1)),
    ]


def test_indicial_examples():
    ind = indicial(op("x^5*D^5 - 2*x^4*D^4 - 2*x^3*D^3 + 16*x^2*D^2 - 16*x*D - x"))
    s = Poly.variable(Q)
    assert ind.chi == s**2 * (s - 2) * (s - 5) ** 2
    assert [(r.to_int(), m) for r, m in ind.exponents] == [(0, 2), (2, 1), (5, 2)]

    F2 = FieldDesc(2)
    chi = indicial_polynomial(op("x^6*D^6 + x^4*D^4 + x^3*D^3 + x^2*D^2", 2))
    t = Poly.variable(F2)
    assert chi == (t - 1) ** 5 * t

    ind = indicial(op("x*D"))
    assert [(r.to_int(), m) for r, m in ind.exponents] == [(0, 1)]


def test_regularity():
    assert not is_regular_singular(shift_normalize(op("x^3*D^2 + (x^2 - x)*D + 1"))[0])
    assert is_regular_singular(op("x^3*D^3 - 4*x^2*D^2 + 9*x*D - 9"))
    L = op("x^2*D^2 + (1 - 2*x)*x*D + x*(x - 1)")
    assert is_regular_singular(L)
    ind = indicial(L)
    assert [(r.to_int(), m) for r, m in ind.exponents] == [(0, 2)]


def test_initial_form_keeps_lowest_shift():
    L = op("x^2*D^2 - 3*x*D - 3*x - x^2 - x^3")
    assert initial_form(L) == op("x^2*D^2 - 3*x*D")


def test_euler_form_examples():
    assert to_euler_form(op("x^2*D^2 + x*D")) == {0: s_poly(0, 0, 1)}
    assert to_euler_form(op("x*D - x")) == {0: s_poly(0, 1), 1: s_poly(-1)}
    assert to_euler_form(op("x^2*D^2")) == {0: s_poly(0, -1, 1)}


@settings(max_examples=60)
@given(st.sampled_from([Q, FieldDesc(2), FieldDesc(3), FieldDesc(5)]).flatmap(operators))
def test_euler_form_round_trip(L):
    if L.is_zero():
        return
    Ln, _ = shift_normalize(L)
    assert from_euler_form(to_euler_form(Ln), L.desc) == Ln
    assert recompose(decompose(Ln), L.desc) == Ln


@settings(max_examples=60)
@given(operators())
def test_indicial_roots_carry_full_degree(L):
    if L.is_zero():
        return
    Ln, _ = shift_normalize(L)
    ind = indicial(Ln)
    if ind.complete:
        assert sum(m for _, m in ind.exponents) == ind.chi.degree()
    assert is_regular_singular(Ln) == (ind.chi.degree() == Ln.order)


def test_map_to_finite_field():
    L = op("x^2*D^2 - 3*x*D - 3*x - x^2 - x^3")
    assert L.map(FieldDesc(3)) == op("x^2*D^2 - x^2 - x^3", 3)
