import pytest
from hypothesis import given
from hypothesis import strategies as st

from invol2.algebra import make_matrix_algebra, make_quaternion
from invol2.errors import ZeroEntry
from invol2.field import FieldCtx, is_square
from invol2.forms import (
    DiagonalForm,
    PfisterForm,
    derivative_isotropy_search,
    i_after_sqrt_extension,
    i_invariant,
    is_anisotropic,
    isotropy_vector,
    pfister_invariant,
    q_value_membership,
    tensor_forms,
)
from invol2.involution import make_quat_orthogonal, make_transpose

from strategies import F3, nonzero_polys


def test_value_membership(Fxy, Fxyz):
    x, y = Fxy.gens()
    b = PfisterForm([x, y]).expansion
    assert q_value_membership(b, x + y) == [0, 1, 1, 0]
    X, Y, Z = Fxyz.gens()
    assert q_value_membership(PfisterForm([X, Y]).expansion, Z) is None


def test_zero_value_iff_dependent(Fxy):
    x, y = Fxy.gens()
    assert q_value_membership(PfisterForm([x, y]).expansion, Fxy.zero) is None
    v = q_value_membership(PfisterForm([x, x]).expansion, Fxy.zero)
    assert v is not None and any(v)


def test_anisotropy_examples(Fxy):
    x, y = Fxy.gens()
    one = Fxy.one
    b = DiagonalForm([one, one])
    assert not is_anisotropic(b)
    assert isotropy_vector(b) == [one, one]
    assert is_anisotropic(PfisterForm([x, y]).expansion)
    assert not is_anisotropic(PfisterForm([x, x]).expansion)
    with pytest.raises(ZeroEntry):
        DiagonalForm([one, Fxy.zero])


def test_i_invariant_examples(Fxy):
    x, y = Fxy.gens()
    assert i_invariant(PfisterForm([Fxy.one, Fxy.one])) == 2
    assert i_invariant(PfisterForm([x, y])) == 0
    assert i_invariant(PfisterForm([x, x])) == 1


def test_i_invariant_oracle_values(Fxy):
    # frozen outputs of the derivative-matrix search
    x, y = Fxy.gens()
    assert derivative_isotropy_search(PfisterForm([x, y]).expansion.entries, Fxy) is None
    assert derivative_isotropy_search(PfisterForm([x, x]).expansion.entries, Fxy) == [0, 1, 1, 0]


def test_pfister_invariants(Fxy):
    x, y = Fxy.gens()
    Fz = FieldCtx(("x", "y", "z", "w"))
    M = make_matrix_algebra(2, Fxy)
    assert list(pfister_invariant([(None, make_transpose(M))]).generators) == [Fxy.one]
    X, Y, Z, W = Fz.gens()
    _, q1 = make_quaternion(X, Y, Fz)
    _, q2 = make_quaternion(Z, W, Fz)
    p = pfister_invariant([(q1, make_quat_orthogonal(q1)), (q2, make_quat_orthogonal(q2))])
    assert list(p.generators) == [Y, W]
    _, q = make_quaternion(x, y, Fxy)
    p = pfister_invariant([(q, make_quat_orthogonal(q)), (None, make_transpose(M))])
    assert list(p.generators) == [y, Fxy.one] and p.i_invariant == 1


def test_sqrt_extension_examples(Fxy, Fxyz):
    x, y = Fxy.gens()
    assert i_after_sqrt_extension(PfisterForm([x, y]), x) == 1
    X, Y, Z = Fxyz.gens()
    assert i_after_sqrt_extension(PfisterForm([X, Y]), Z) == 0
    one = Fxy.one
    assert i_after_sqrt_extension(PfisterForm([one, one]), x) == 2


pfister_gens = st.lists(nonzero_polys, min_size=1, max_size=3)
vectors = st.lists(st.sampled_from([F3.zero, F3.one, F3.gen("x"), F3.gen("y") + 1]),
                   min_size=8, max_size=8)


@given(pfister_gens, vectors)
def test_values_are_members(gens, v):
    b = PfisterForm(gens, F3).expansion
    v = v[: len(b)]
    if not any(v):
        return
    w = q_value_membership(b, b.value(v))
    assert w is not None and b.value(w) == b.value(v)


@given(pfister_gens)
def test_i_invariant_matches_dependence_search(gens):
    p = PfisterForm(gens, F3)
    assert (i_invariant(p) == 0) == is_anisotropic(p.expansion)
    assert (i_invariant(p) == 0) == (derivative_isotropy_search(p.expansion.entries, F3) is None)


@given(pfister_gens, vectors)
def test_sqrt_of_value_raises_i_by_one(gens, v):
    p = PfisterForm(gens, F3)
    alpha = p.expansion.value(v[: 1 << p.n])
    if not alpha or is_square(alpha) is not None:
        return
    assert i_after_sqrt_extension(p, alpha) == i_invariant(p) + 1


@given(st.lists(nonzero_polys, min_size=1, max_size=2), st.lists(nonzero_polys, min_size=1,
                                                                 max_size=1), vectors)
def test_products_of_values_are_values(g1, g2, v):
    b1, b2 = PfisterForm(g1, F3).expansion, PfisterForm(g2, F3).expansion
    a = b1.value(v[: len(b1)])
    c = b2.value(v[-len(b2):])
    if not a or not c:
        return
    assert q_value_membership(tensor_forms(b1, b2), a * c) is not None
