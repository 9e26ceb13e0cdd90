import pytest
from hypothesis import given, settings, strategies as st

from q2bkss import bring
from q2bkss.arith import LocalScalar
from q2bkss.bring import (
    DELTA,
    Q2,
    Q4,
    SIGMA,
    TAU,
    EigenClass,
    InhomogeneousError,
    Monomial,
    RingElement,
    a_elem,
    antisymmetrize,
    b_elem,
    c4,
    c6,
    from_q,
    h_map,
    ker_coker_h,
    ker_coker_h_closed,
    ker_coker_h_snf,
    project_coker_h,
    psi2,
    psi_d,
    to_q,
)


def q(coeff=1, **powers):
    return {(powers.get("q2", 0), powers.get("q4", 0), powers.get("d", 0)): coeff}


# -- coordinates ----------------------------------------------------------------


def test_from_q_generators():
    assert from_q(q(q4=1)) == SIGMA * LocalScalar(1, 8)
    assert from_q(q(d=1)) == SIGMA**2 * TAU * LocalScalar(1, 8)
    assert from_q(q(q2=2)) == (SIGMA + TAU) * LocalScalar(1, 2)
    assert Q4 == from_q(q(q4=1)) and DELTA == from_q(q(d=1))


def test_delta_in_q_coordinates():
    # Delta = q4^2 (16 q2^2 - 64 q4)
    assert to_q(DELTA) == {(2, 2, 0): LocalScalar(16), (0, 3, 0): LocalScalar(-64)}


def test_weierstrass_invariants():
    assert c4() == SIGMA * 2 + TAU * 8
    assert c6() == Q2 * (SIGMA * 4 - TAU * 32)
    assert c4() ** 3 - c6() ** 2 == SIGMA**2 * TAU * 216
    assert c4() ** 3 - c6() ** 2 == bring.delta_pow(1) * 1728


def test_inverse_powers():
    assert SIGMA * SIGMA**-1 == RingElement.scalar(1)
    assert DELTA * bring.delta_pow(-1) == RingElement.scalar(1)
    assert from_q(to_q(SIGMA**-1)) == SIGMA**-1
    assert from_q(to_q(TAU**-2)) == TAU**-2


def test_inhomogeneous_degree():
    x = SIGMA + RingElement.scalar(1)
    assert not x.is_homogeneous()
    assert x.degree() == "inhomogeneous"
    assert RingElement().degree() is None


def test_json_roundtrip():
    x = c6() * DELTA ** -1 - Q2 * LocalScalar(5, 7)
    assert RingElement.from_json(x.to_json()) == x


# -- Adams operations -------------------------------------------------------------


def test_psi_examples():
    assert psi_d(SIGMA) == TAU * 4
    assert psi_d(TAU) == SIGMA * 4
    assert psi_d(c4()) == SIGMA * 32 + TAU * 8
    assert psi2(Q2) == Q2 * 4
    assert psi_d(Q2) == Q2 * -2


def test_h_examples():
    assert h_map(a_elem(-1, 1)) == RingElement()
    assert h_map(b_elem(0, 1)) == b_elem(0, 1) * 9
    assert h_map(RingElement.scalar(1)) == RingElement.scalar(2)


monomials = st.builds(Monomial, st.integers(-6, 6), st.integers(-6, 6), st.integers(0, 1))
coeffs = st.integers(-50, 50).map(LocalScalar)


@st.composite
def homogeneous(draw):
    m = draw(st.integers(-6, 6))
    e = draw(st.integers(0, 1))
    terms = {}
    for i in draw(st.lists(st.integers(-6, 6), min_size=1, max_size=4)):
        terms[Monomial(i, m - i, e)] = draw(coeffs)
    return RingElement(terms)


@settings(max_examples=60, deadline=None)
@given(homogeneous(), homogeneous())
def test_psi_d_is_ring_map(x, y):
    assert psi_d(x * y) == psi_d(x) * psi_d(y)
    assert psi_d(x + y) == psi_d(x) + psi_d(y)


@settings(max_examples=60, deadline=None)
@given(homogeneous())
def test_psi_d_squared_is_psi2(x):
    assert psi_d(psi_d(x)) == psi2(x)


@settings(max_examples=40, deadline=None)
@given(homogeneous())
def test_psi2_scales_by_degree(x):
    if x:
        assert psi2(x) == x * LocalScalar(2) ** x.degree()


@settings(max_examples=60, deadline=None)
@given(homogeneous())
def test_from_q_inverts_to_q(x):
    assert from_q(to_q(x)) == x


@settings(max_examples=60, deadline=None)
@given(homogeneous())
def test_antisymmetrize_reconstructs(x):
    cs, rest = antisymmetrize(x)
    total = rest
    for c, d in cs.items():
        total = total + c.element() * d
    assert total == x
    assert psi_d(rest) + rest == h_map(rest)


@settings(max_examples=60, deadline=None)
@given(homogeneous())
def test_image_of_h_dies_in_cokernel(x):
    assert not any(project_coker_h(h_map(x)).values())


# -- eigenstructure ----------------------------------------------------------------


@pytest.mark.parametrize("m", range(-12, 13))
def test_eigenvalues(m):
    for i in range(-8, 9):
        j = m - i
        if i >= j:
            continue
        assert h_map(a_elem(i, j)) == a_elem(i, j) * (1 - LocalScalar(4) ** m)
        assert h_map(b_elem(i, j)) == b_elem(i, j) * (1 + 2 * LocalScalar(4) ** m)


def test_orders():
    assert [bring.a_order(m) for m in (1, 3, 9, -6)] == [1, 2, 3, 2]
    assert [bring.b_order(m) for m in (1, 4, 13, 0)] == [2, 3, 4, 1]


def test_eigen_labels():
    x = EigenClass.from_mv("A", 3, 0)
    assert (x.i, x.j, x.m, x.v) == (1, 2, 3, 0)
    assert x.label() == "A_0^3"


def test_antisymmetrize_examples():
    cs, rest = antisymmetrize(a_elem(1, 2))
    assert cs == {EigenClass("A", 1, 2): LocalScalar(1)} and not rest
    x = SIGMA**2 * TAU**2
    cs, rest = antisymmetrize(x)
    assert cs == {} and rest == x
    cs, rest = antisymmetrize(DELTA * -3)
    assert cs == {EigenClass("A", 1, 2): LocalScalar(3, 16)}
    assert rest == (SIGMA**2 * TAU + SIGMA * TAU**2) * LocalScalar(-3, 16)


def test_project_examples():
    assert project_coker_h(DELTA * -3) == {EigenClass("A", 1, 2): 3}
    assert not any(project_coker_h(-(c4() ** 3)).values())


def test_project_rejects_inhomogeneous():
    with pytest.raises(InhomogeneousError):
        project_coker_h(SIGMA + TAU**2)


def test_ker_coker_h_shapes():
    k, c = ker_coker_h(0, 6)
    assert k.invariants() == (7, ()) and c.invariants() == (7, ())
    k, c = ker_coker_h(12, 6)
    assert k.is_zero() and c.invariants() == (0, (2,) * 7)
    k, c = ker_coker_h(14, 6)
    assert k.is_zero() and c.invariants() == (0, (1,) * 7)
    k, c = ker_coker_h(7, 6)
    assert k.is_zero() and c.is_zero()


@pytest.mark.parametrize("t", range(-40, 41, 2))
def test_closed_form_matches_smith(t):
    k1, c1 = ker_coker_h_closed(t, 10)
    k2, c2 = ker_coker_h_snf(t, 10)
    assert k1.iso_equal(k2) and c1.iso_equal(c2)
