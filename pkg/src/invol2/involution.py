"""Involutions of the first kind, stored as verified linear maps.

An :class:`Involution` keeps the image of every basis vector.  Building
one checks that it squares to the identity, fixes 1 and reverses products
on every pair of basis vectors.  Symmetric and alternating subspaces,
orthogonal/symplectic type and quaternion discriminants are derived from
that map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import (
    AlgElement,
    _axpy,
    _tensor_sparse,
    is_scalar,
    is_unit,
    make_matrix_algebra,
    reduced_trace_quat,
    tensor,
)
from .errors import (
    AltNotLine,
    InvolutionContractError,
    NonSymmetricEntry,
    NonUnitEntry,
    NotMatrixAlgebra,
    VerificationError,
    ZeroEntry,
)
from .field import square_class_rep
from .linalg import Matrix, Subspace, kernel_basis, solve

ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class Verdict:
    """Tagged yes/no answer; ``square`` is set on yes, ``reason`` on no."""

    ok: bool
    square: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self):
        if self.ok:
            return {"verdict": "yes", "square": str(self.square)}
        return {"verdict": "no", "reason": self.reason}


class Involution:
    def __init__(self, algebra, images, name="sigma", verify=True):
        if len(images) != algebra.dim:
            raise InvolutionContractError("need one image per basis vector")
        self.algebra = algebra
        self.images = [{k: c for k, c in img.items() if c} for img in images]
        self.name = name
        if verify:
            self.verify()

    def __repr__(self):
        return f"Involution({self.name} on {self.algebra.name})"

    def apply_sparse(self, data):
        acc = {}
        for j, c in data.items():
            _axpy(acc, c, self.images[j])
        return acc

    def __call__(self, x):
        if x.algebra is not self.algebra:
            raise ValueError("element is not in the algebra of this involution")
        return AlgElement(self.algebra, self.apply_sparse(x.data))

    @property
    def matrix(self):
        alg = self.algebra
        rows = [{} for _ in range(alg.dim)]
        for j, img in enumerate(self.images):
            for k, c in img.items():
                rows[k][j] = c
        return Matrix.from_sparse(rows, alg.dim, alg.ctx)

    # -- contract ------------------------------------------------------------

    def check_square(self):
        for j in range(self.algebra.dim):
            if self.apply_sparse(self.images[j]) != {j: self.algebra.ctx.one}:
                raise InvolutionContractError(f"sigma^2 != id on {self.algebra.labels[j]}")

    def check_unit(self):
        if self.apply_sparse(self.algebra.unit) != self.algebra.unit:
            raise InvolutionContractError("sigma(1) != 1")

    def check_anti(self):
        alg = self.algebra
        T = alg.table
        imgs = self.images
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = self.apply_sparse(T[i][j])
                rhs = alg.mul_sparse(imgs[j], imgs[i])
                if lhs != rhs:
                    raise InvolutionContractError(
                        f"sigma({alg.labels[i]}*{alg.labels[j]}) != sigma({alg.labels[j]})*sigma({alg.labels[i]})")

    def verify(self):
        self.check_unit()
        self.check_square()
        self.check_anti()
        return True

    # -- derived subspaces ---------------------------------------------------------

    def _sigma_plus_id(self):
        alg = self.algebra
        rows = [{} for _ in range(alg.dim)]
        for j, img in enumerate(self.images):
            col = _axpy(dict(img), None, {j: alg.ctx.one})
            for k, c in col.items():
                rows[k][j] = c
        return Matrix.from_sparse(rows, alg.dim, alg.ctx)

    @cached_property
    def sym_basis(self):
        return [self.algebra.element(v) for v in kernel_basis(self._sigma_plus_id())]

    @cached_property
    def alt_span(self):
        # image of sigma + id, spanned by the columns
        M = self._sigma_plus_id()
        return Subspace([M.column(j) for j in range(M.cols)], self.algebra.dim, self.algebra.ctx)

    @cached_property
    def alt_basis(self):
        return [AlgElement(self.algebra, dict(r)) for r in self.alt_span.basis]

    @cached_property
    def sym_span(self):
        return Subspace([x.data for x in self.sym_basis], self.algebra.dim, self.algebra.ctx)

    @cached_property
    def kind(self):
        return SYMPLECTIC if self.alt_span.contains(self.algebra.unit) else ORTHOGONAL

    def check_sym_alt(self):
        """dim Sym + dim Alt = dim A and Alt lies inside Sym."""
        if len(self.sym_basis) + len(self.alt_basis) != self.algebra.dim:
            raise InvolutionContractError("dim Sym + dim Alt != dim A")
        for a in self.alt_basis:
            if self(a) != a:
                raise InvolutionContractError("an alternating element is not symmetric")
        return True

    def is_symmetric(self, x):
        return self(x) == x

    def in_alt(self, x):
        return self.alt_span.contains(x.data)

    def alt_preimage(self, x):
        """Some ``y`` with ``sigma(y) + y == x``, or None when x is not alternating."""
        sol = solve(self._sigma_plus_id(), list(x.coords))
        if sol is None:
            return None
        return self.algebra.element(sol)

    def to_json(self):
        return {"name": self.name, "kind": self.kind,
                "images": [AlgElement(self.algebra, img).to_json() for img in self.images]}


# -- constructors ---------------------------------------------------------------


def make_transpose(M, name="t"):
    n = M.matrix_size
    if n is None:
        raise NotMatrixAlgebra(f"{M.name} is not a matrix algebra")
    one = M.ctx.one
    images = [{j * n + i: one} for i in range(n) for j in range(n)]
    return Involution(M, images, name=name)


def _images_from_quaternion_basis(q, mapping):
    """Involution images on the algebra basis given images of (1, u, v, w)."""
    alg = q.algebra
    basis = [q.one, q.u, q.v, q.w]
    P = Matrix.from_columns([b.coords for b in basis], alg.ctx)
    images = []
    for j in range(alg.dim):
        coords = solve(P, [alg.ctx.one if k == j else alg.ctx.zero for k in range(alg.dim)])
        acc = alg.zero
        for c, img in zip(coords, mapping):
            if c:
                acc = acc + c * img
        images.append(acc.data)
    return images


def make_quat_orthogonal(q, name="tau"):
    """``tau(u) = u``, ``tau(v) = v``; hence ``tau(w) = vu = w + v``."""
    mapping = [q.one, q.u, q.v, q.w + q.v]
    return Involution(q.algebra, _images_from_quaternion_basis(q, mapping), name=name)


def make_canonical(q, name="gamma"):
    """``gamma(x) = x + Trd(x)``."""
    mapping = []
    for b in (q.one, q.u, q.v, q.w):
        mapping.append(b + q.algebra.scalar(reduced_trace_quat(b, q)))
    return Involution(q.algebra, _images_from_quaternion_basis(q, mapping), name=name)


def make_adjoint_diagonal(entries, n=None, ctx=None, name="ad"):
    """``M_n`` with ``X -> B^-1 X^t B`` for ``B = diag(entries)``."""
    entries = list(entries)
    n = n or len(entries)
    if len(entries) != n:
        raise ValueError("need exactly n diagonal entries")
    ctx = ctx or entries[0].ctx
    entries = [ctx(e) for e in entries]
    if any(not e for e in entries):
        raise ZeroEntry("diagonal entries must be nonzero")
    M = make_matrix_algebra(n, ctx)
    images = []
    for i in range(n):
        for j in range(n):
            images.append({j * n + i: entries[i] / entries[j]})
    return M, Involution(M, images, name=name)


def make_adjoint_hermitian(q, entries, gamma=None, name="rho", verify=True):
    """``M_n(Q) = M_n(F) ⊗ Q`` with ``X -> H^-1 gamma(X)^t H``, ``H = diag(entries)``.

    On a basis vector: ``e_ij ⊗ b -> e_ji ⊗ h_j^-1 gamma(b) h_i``.
    """
    Q = q.algebra
    gamma = gamma or make_canonical(q)
    entries = list(entries)
    n = len(entries)
    inverses = []
    for h in entries:
        if gamma(h) != h:
            raise NonSymmetricEntry(f"{h} is not gamma-symmetric")
        ok, inv = is_unit(h)
        if not ok:
            raise NonUnitEntry(f"{h} is not a unit")
        inverses.append(inv)
    M = make_matrix_algebra(n, Q.ctx)
    A = tensor(M, Q, name=f"M{n}({Q.name})", verify=False)
    dq = Q.dim
    images = []
    for i in range(n):
        for j in range(n):
            for k in range(dq):
                part = inverses[j] * gamma(Q.basis(k)) * entries[i]
                images.append({(j * n + i) * dq + r: c for r, c in part.data.items()})
    return A, Involution(A, images, name=name, verify=verify)


def tensor_involution(s1, s2, algebra=None, name=None, verify=True):
    """``s1 ⊗ s2`` on ``algebra`` (built as ``A1 ⊗ A2`` when omitted)."""
    A1, A2 = s1.algebra, s2.algebra
    if algebra is None:
        algebra = tensor(A1, A2, verify=False)
    if algebra.dim != A1.dim * A2.dim:
        raise ValueError("algebra is not the tensor product of the two factors")
    images = []
    for i in range(A1.dim):
        for j in range(A2.dim):
            images.append(_tensor_sparse([s1.images[i], s2.images[j]], [A1.dim, A2.dim]))
    return Involution(algebra, images, name=name or f"{s1.name}{'⊗'}{s2.name}", verify=verify)


# -- membership tests --------------------------------------------------------------


def sym_basis(s):
    return list(s.sym_basis)


def alt_basis(s):
    return list(s.alt_basis)


def sym_plus_member(x, s):
    if s(x) != x:
        return Verdict(False, reason="not symmetric")
    sq = is_scalar(x * x)
    if sq is None:
        return Verdict(False, reason="square is not a scalar")
    return Verdict(True, square=sq)


def alt_plus_member(x, s):
    if not s.in_alt(x):
        return Verdict(False, reason="not alternating")
    sq = is_scalar(x * x)
    if sq is None:
        return Verdict(False, reason="square is not a scalar")
    return Verdict(True, square=sq)


def alt_plus_F_member(x, s):
    """``lam`` with ``x + lam`` alternating, or None if ``x`` is outside Alt ⊕ F."""
    alg = x.algebra
    rx = s.alt_span.reduce(x.data)
    if not rx:
        return alg.ctx.zero
    r1 = s.alt_span.reduce(alg.unit)
    if not r1:
        return None
    k = next(iter(r1))
    if k not in rx:
        return None
    lam = rx[k] / r1[k]
    if {j: lam * c for j, c in r1.items()} != rx:
        return None
    if not s.in_alt(x + alg.scalar(lam)):
        raise VerificationError("shifted element failed the alternating re-check")
    return lam


def quat_discriminant(s):
    """Square-class representative of ``v^2`` for ``v`` spanning Alt."""
    if s.kind != ORTHOGONAL:
        raise AltNotLine("involution is symplectic")
    alt = s.alt_basis
    if len(alt) != 1:
        raise AltNotLine(f"Alt has dimension {len(alt)}, expected 1")
    sq = is_scalar(alt[0] * alt[0])
    if sq is None or not sq:
        raise AltNotLine("the Alt generator does not square to a nonzero scalar")
    return square_class_rep(sq)
