from hypothesis import given
from hypothesis import strategies as st

from invol2.linalg import Matrix, Subspace, image_basis, inverse, kernel_basis, rank, solve

from strategies import F3, polys


def test_identity_solve(Fxy):
    x, y = Fxy.gens()
    assert solve(Matrix.identity(2, Fxy), [x, y]) == [x, y]


def test_diagonal_solve(Fxy):
    x = Fxy.gen("x")
    A = Matrix.from_rows([[x, 0], [0, x]], Fxy)
    assert solve(A, [x * x, x]) == [x, Fxy.one]


def test_inconsistent(Fxy):
    assert solve(Matrix.zeros(1, 1, Fxy), [Fxy.one]) is None


def test_kernels(Fxy):
    assert len(kernel_basis(Matrix.zeros(2, 2, Fxy))) == 2
    assert kernel_basis(Matrix.identity(3, Fxy)) == []
    (v,) = kernel_basis(Matrix.from_rows([[1, 1]], Fxy))
    assert v == [Fxy.one, Fxy.one]


def test_images(Fxy):
    x = Fxy.gen("x")
    assert len(image_basis(Matrix.identity(3, Fxy))) == 3
    assert image_basis(Matrix.zeros(2, 2, Fxy)) == []
    assert len(image_basis(Matrix.from_rows([[x, x * x], [1, x]], Fxy))) == 1


def test_inverse(Fxy):
    x, y = Fxy.gens()
    A = Matrix.from_rows([[x, 1], [1, y]], Fxy)
    B = inverse(A)
    for j in range(2):
        assert A.mul_vec(B.column(j)) == [Fxy.one if i == j else Fxy.zero for i in range(2)]


def test_subspace_canonical(Fxy):
    x = Fxy.gen("x")
    a = Subspace([[1, x], [0, 1]], 2, Fxy)
    b = Subspace([[x, 0], [1, 1]], 2, Fxy)
    assert a == b and a.rank == 2


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(polys, min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rank_nullity(rows):
    A = Matrix.from_rows(rows, F3)
    ker = kernel_basis(A)
    assert rank(A) + len(ker) == A.cols
    for v in ker:
        assert all(not e for e in A.mul_vec(v))


@given(matrices, st.data())
def test_solve_resubstitutes(rows, data):
    A = Matrix.from_rows(rows, F3)
    b = data.draw(st.lists(polys, min_size=A.rows, max_size=A.rows))
    sol = solve(A, b)
    if sol is not None:
        assert A.mul_vec(sol) == b
