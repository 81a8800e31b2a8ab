import pytest

from invol2.algebra import make_matrix_algebra, make_quaternion, tensor
from invol2.errors import InvolutionContractError
from invol2.field import FieldCtx, is_square
from invol2.involution import (
    ORTHOGONAL,
    SYMPLECTIC,
    Involution,
    alt_plus_F_member,
    make_adjoint_diagonal,
    make_adjoint_hermitian,
    make_canonical,
    make_quat_orthogonal,
    make_transpose,
    quat_discriminant,
    sym_plus_member,
    tensor_involution,
)


@pytest.fixture(scope="module")
def qtau(Fxy):
    x, y = Fxy.gens()
    Q, q = make_quaternion(x, y, Fxy)
    return q, make_quat_orthogonal(q)


def test_orthogonal_quaternion_involution(qtau):
    q, tau = qtau
    assert tau(q.w) == q.w + q.v
    assert tau(q.w) + q.w == q.v and tau.in_alt(q.v)
    assert tau.kind == ORTHOGONAL
    assert len(tau.sym_basis) == 3 and len(tau.alt_basis) == 1


def test_canonical_is_symplectic(qtau):
    q, _ = qtau
    gamma = make_canonical(q)
    assert gamma.kind == SYMPLECTIC
    assert gamma.in_alt(q.algebra.one)


def test_transpose_alt_is_zero_diagonal(Fxy):
    M = make_matrix_algebra(2, Fxy)
    t = make_transpose(M)
    assert t.kind == ORTHOGONAL
    (a,) = t.alt_basis
    assert a == M["e12"] + M["e21"]


def test_adjoint_diagonal(Fxy):
    x = Fxy.gen("x")
    M, s = make_adjoint_diagonal([Fxy.one, Fxy.one], ctx=Fxy)
    assert s.images == make_transpose(M).images
    M, s = make_adjoint_diagonal([Fxy.one, x], ctx=Fxy)
    assert s(M["e12"]) == x.inverse() * M["e21"]
    s.verify()
    assert is_square(quat_discriminant(s) / x) is not None


def test_adjoint_hermitian_small(qtau):
    q, _ = qtau
    gamma = make_canonical(q)
    A, rho = make_adjoint_hermitian(q, [q.algebra.one], gamma)
    assert A.dim == 4
    assert [rho(A.basis(k)).coords for k in range(4)] == [gamma(q.algebra.basis(k)).coords
                                                             for k in range(4)]
    A2, rho2 = make_adjoint_hermitian(q, [q.algebra.one] * 2, gamma)
    assert A2.dim == 16 and rho2.kind == SYMPLECTIC


def test_tensor_of_transposes_is_block_transpose(Fxy):
    M = make_matrix_algebra(2, Fxy)
    t = make_transpose(M)
    A = tensor(M, M)
    s = tensor_involution(t, t, A)
    e = A.pure_tensor([M["e12"], M["e11"]])
    assert s(e) == A.pure_tensor([M["e21"], M["e11"]])
    assert all(s(s(A.basis(k))) == A.basis(k) for k in range(A.dim))


def test_alt_of_split_tensor_matches_blocks(inst):
    # Alt(B ⊗ M2, rho ⊗ t) = {[[a, b], [sigma(b), c]] : a, c in Alt(B)}
    D = inst.iso4
    s = D.involution
    B = D.factors[0]
    M = D.factors[1].algebra
    alt_B = B.involution.alt_basis
    expected = []
    for a in alt_B:
        expected += [D.algebra.pure_tensor([a, M["e11"]]), D.algebra.pure_tensor([a, M["e22"]])]
    for k in range(B.algebra.dim):
        b = B.algebra.basis(k)
        expected.append(D.algebra.pure_tensor([b, M["e12"]])
                        + D.algebra.pure_tensor([B.involution(b), M["e21"]]))
    from invol2.algebra import span_of

    assert s.alt_span == span_of(D.algebra, expected)


def test_sym_plus_membership(qtau, Fxy):
    q, tau = qtau
    v = sym_plus_member(q.v, tau)
    assert v.ok and v.square == Fxy.gen("y")
    assert not sym_plus_member(q.u, tau).ok
    one = sym_plus_member(q.algebra.one, tau)
    assert one.ok and one.square == Fxy.one


def test_alt_plus_F(qtau, inst):
    q, tau = qtau
    assert alt_plus_F_member(q.v, tau) == 0
    assert alt_plus_F_member(q.algebra.one, tau) == 1
    from invol2.structure import count_witness

    D = inst.iso8
    assert alt_plus_F_member(count_witness(D), D.involution) is None


def test_discriminants(qtau, Fxy):
    q, tau = qtau
    assert quat_discriminant(tau) == Fxy.gen("y")
    assert quat_discriminant(make_transpose(make_matrix_algebra(2, Fxy))) == Fxy.one
    F = FieldCtx(("X", "t"))
    Q, qp = make_quaternion(F.gen("X"), F.gen("t"), F)
    assert quat_discriminant(make_quat_orthogonal(qp)) == F.gen("t")


def test_discriminant_independent_of_alt_unit(qtau, Fxy):
    q, tau = qtau
    x, y = Fxy.gens()
    for c in (x, y + 1, x * y + x):
        v = c * q.v
        sq = (v * v).coords[0]
        assert is_square(sq / quat_discriminant(tau)) is not None


def test_contract_violation_rejected(qtau):
    q, _ = qtau
    Q = q.algebra
    # identity map is not anti-multiplicative on a noncommutative algebra
    with pytest.raises(InvolutionContractError):
        Involution(Q, [Q.basis(k).data for k in range(Q.dim)])


def test_all_constructors_orthogonal_iff_one_not_in_alt(inst):
    for D in inst.all(1).values():
        s = D.involution
        assert (s.kind == ORTHOGONAL) == (not s.in_alt(D.algebra.one))
        s.check_sym_alt()
