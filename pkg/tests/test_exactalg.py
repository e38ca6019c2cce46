from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsing.errors import DomainError
from regsing.exactalg import (
    FieldDesc,
    Poly,
    embed,
    falling_factorial,
    field_roots,
    hasse_derivative,
    multiplicity_by_division,
    multiplicity_by_hasse,
    nullspace,
    poly_gcd,
    root_multiplicity,
    smallest_irreducible,
    stirling2,
)

FIELDS = [FieldDesc(2), FieldDesc(3), FieldDesc(5), FieldDesc(2, 3), FieldDesc(3, 2), FieldDesc(5, 2)]


def elements(desc):
    if desc.characteristic == 0:
        return st.fractions(max_denominator=20).map(desc)
    return st.lists(st.integers(0, desc.characteristic - 1), min_size=desc.ext_degree,
                    max_size=desc.ext_degree).map(lambda v: desc(tuple(v)))


def polys(desc, max_deg=5):
    return st.lists(elements(desc), max_size=max_deg + 1).map(lambda cs: Poly(desc, cs))


field_and_elements = st.sampled_from(FIELDS + [FieldDesc()]).flatmap(
    lambda d: st.tuples(st.just(d), elements(d), elements(d), elements(d))
)


@given(field_and_elements)
def test_field_axioms(data):
    _, a, b, c = data
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == a.desc.zero
    if not a.is_zero():
        assert a * a.inverse() == a.desc.one


@given(st.sampled_from(FIELDS).flatmap(lambda d: elements(d)))
def test_frobenius_fixes_prime_field_and_order(a):
    q = a.desc.order
    assert a ** q == a
    assert (a ** a.desc.characteristic == a) == a.in_prime_field()


def test_default_moduli_are_lexicographically_smallest():
    assert smallest_irreducible(5, 2) == (2, 0, 1)
    assert smallest_irreducible(2, 3) == (1, 1, 0, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)


def test_rejects_bad_field_descriptors():
    with pytest.raises(DomainError):
        FieldDesc(4)
    with pytest.raises(DomainError):
        FieldDesc(5, 2, (1, 0, 1))  # w^2 + 1 = (w - 2)(w + 2) over F_5
    with pytest.raises(DomainError):
        FieldDesc(0, 2)


def test_rational_reduction_and_embedding():
    F7 = FieldDesc(7)
    assert F7(Fraction(1, 2)) == 4
    with pytest.raises(DomainError):
        F7(Fraction(1, 7))
    F49 = FieldDesc(7, 2)
    assert embed(F7(3), F49) == F49(3)
    w = F49.gen
    assert embed(w, F49) is w


def test_extension_element_text():
    F25 = FieldDesc(5, 2)
    w = F25.gen
    assert str(w * 2 + 1) == "2*w + 1"
    assert str(F25.zero) == "0"
    assert w * w == F25(3)  # modulus w^2 + 2


@pytest.mark.parametrize(
    "j, desc, expected",
    [
        (0, FieldDesc(), [1]),
        (2, FieldDesc(), [0, -1, 1]),
        (3, FieldDesc(2), [0, 0, 1, 1]),
    ],
)
def test_falling_factorial(j, desc, expected):
    assert falling_factorial(j, desc) == Poly(desc, expected)


def test_stirling2_values():
    assert stirling2(0, 0, FieldDesc()) == 1
    assert stirling2(4, 2, FieldDesc()) == 7
    assert stirling2(4, 2, FieldDesc(7)).is_zero()
    with pytest.raises(DomainError):
        stirling2(2, 3, FieldDesc())


@given(st.integers(0, 9))
def test_stirling_inverts_falling_factorials(n):
    # s^n = sum_k S(n, k) s(s-1)...(s-k+1)
    Q = FieldDesc()
    total = Poly(Q)
    for k in range(n + 1):
        total = total + falling_factorial(k, Q) * stirling2(n, k, Q)
    assert total == Poly.monomial(Q, n)


def test_hasse_derivative_examples():
    F5 = FieldDesc(5)
    assert hasse_derivative(Poly.monomial(F5, 5), 1).is_zero()
    Q = FieldDesc()
    assert hasse_derivative(Poly.monomial(Q, 3), 2) == Poly(Q, [0, 3])
    F2 = FieldDesc(2)
    s = Poly.variable(F2)
    q = (s - 1) ** 5 * s
    assert hasse_derivative(q, 5)(F2(1)) == 1
    assert multiplicity_by_hasse(q, F2(1)) == 5


def test_root_multiplicity_examples():
    Q = FieldDesc()
    s = Poly.variable(Q)
    chi = s**2 * (s - 2) * (s - 5) ** 2
    assert root_multiplicity(chi, Q(5)) == 2
    assert root_multiplicity(s - 1, Q(0)) == 0
    F2 = FieldDesc(2)
    t = Poly.variable(F2)
    assert root_multiplicity((t - 1) * (t - 3) ** 2, F2(1)) == 3
    with pytest.raises(DomainError):
        root_multiplicity(Poly(Q), Q(0))


@settings(max_examples=60)
@given(st.sampled_from([FieldDesc(2), FieldDesc(3), FieldDesc(5), FieldDesc()]).flatmap(
    lambda d: st.tuples(polys(d, 4), elements(d), st.integers(0, 6))))
def test_multiplicity_routes_agree(data):
    q, a, k = data
    if q.is_zero():
        return
    s = Poly.variable(q.desc)
    q = q * (s - a) ** k
    m = multiplicity_by_division(q, a)
    assert m >= k
    assert multiplicity_by_hasse(q, a) == m


def test_field_roots_examples():
    F5 = FieldDesc(5)
    s = Poly.variable(F5)
    roots = field_roots(s**2 - 2, 2)
    assert roots.complete and roots.field.order == 25
    assert [m for _, m in roots] == [1, 1]
    for w, _ in roots:
        assert w * w == 2
    assert not field_roots(s**2 - 2, 1).complete

    Q = FieldDesc()
    t = Poly.variable(Q)
    assert [(r.to_fraction(), m) for r, m in field_roots(t**2 * (t - 1))] == [(0, 2), (1, 1)]
    irr = field_roots(t**2 - 2)
    assert not irr.complete and irr.cofactor.degree() == 2


@settings(max_examples=40)
@given(st.sampled_from([2, 3, 5, 7]).flatmap(lambda p: st.lists(st.integers(0, p - 1), min_size=1, max_size=5)
                                              .map(lambda rs: (p, rs))))
def test_field_roots_recovers_planted_roots(data):
    p, rs = data
    F = FieldDesc(p)
    q = Poly.from_roots(F, [F(r) for r in rs])
    found = field_roots(q, 1)
    assert found.complete
    assert sum(m for _, m in found) == len(rs)
    for r, m in found:
        assert m == rs.count(r.to_int())


def test_poly_division_and_gcd():
    F3 = FieldDesc(3)
    s = Poly.variable(F3)
    a = (s - 1) ** 2 * (s + 1)
    b = (s - 1) * (s**2 + 1)
    assert poly_gcd(a, b) == s - 1
    quo, rem = divmod(a, b)
    assert quo * b + rem == a and rem.degree() < b.degree()


def test_nullspace_basis_is_in_kernel():
    F5 = FieldDesc(5)
    rows = [[F5(v) for v in row] for row in ([1, 2, 3, 4], [1, 1, 1, 1])]
    basis = nullspace(rows, 4, F5)
    assert len(basis) == 2
    for vec in basis:
        for row in rows:
            assert sum((a * b for a, b in zip(row, vec)), F5.zero).is_zero()
