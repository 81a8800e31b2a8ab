"""Finite-dimensional algebras given by structure constants.

``table[i][j]`` is the product ``e_i * e_j`` as a sparse map
``{k: scalar}``.  Quaternion symbols ``[alpha, beta)``, matrix algebras and
tensor products are built here; elements carry sparse coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import AlgebraContractError, NotSubalgebra, VerificationError, ZeroBeta
from .linalg import Matrix, Subspace, kernel_basis, solve

EXHAUSTIVE_LIMIT = 64
SAMPLED_TRIPLES = 500
TENSOR_SEP = "⊗"


def _axpy(acc, c, vec):
    """acc += c * vec on sparse dicts (in place)."""
    for k, x in vec.items():
        t = x if c is None else c * x
        if k in acc:
            s = acc[k] + t
            if s:
                acc[k] = s
            else:
                del acc[k]
        else:
            acc[k] = t
    return acc


class StructAlgebra:
    """Associative unital algebra over ``ctx`` with basis ``labels``.

    ``unit`` is the coordinate map of 1, which for a matrix algebra is
    ``sum e_ii`` rather than a single basis vector.  ``factors`` lists the
    tensor factors (``self`` when the algebra is not a tensor product).
    """

    def __init__(self, ctx, labels, table, unit, *, matrix_size=None, factors=None, name=None):
        self.ctx = ctx
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        if len(table) != self.dim or any(len(r) != self.dim for r in table):
            raise AlgebraContractError("table shape does not match the basis")
        self.table = [[{k: c for k, c in entry.items() if c} for entry in row] for row in table]
        self.unit = {k: c for k, c in unit.items() if c}
        self.matrix_size = matrix_size
        self.factors = tuple(factors) if factors else (self,)
        self.name = name or f"A{self.dim}"
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    def __repr__(self):
        return f"StructAlgebra({self.name}, dim={self.dim})"

    # -- elements -------------------------------------------------------------

    def element(self, coords):
        if isinstance(coords, dict):
            data = {int(k): self.ctx(c) for k, c in coords.items()}
        else:
            coords = list(coords)
            if len(coords) != self.dim:
                raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
            data = {k: self.ctx(c) for k, c in enumerate(coords)}
        return AlgElement(self, {k: c for k, c in data.items() if c})

    def basis(self, i):
        return AlgElement(self, {i: self.ctx.one})

    def __getitem__(self, label):
        return self.basis(self._index[label])

    def index(self, label):
        return self._index[label]

    @property
    def one(self):
        return AlgElement(self, dict(self.unit))

    @property
    def zero(self):
        return AlgElement(self, {})

    def scalar(self, c):
        c = self.ctx(c)
        if not c:
            return self.zero
        return AlgElement(self, {k: c * x for k, x in self.unit.items()})

    def random_element(self, rng, degree=1, density=0.5):
        data = {}
        for k in range(self.dim):
            if rng.random() < density:
                c = self.ctx.random_element(rng, degree)
                if c:
                    data[k] = c
        return AlgElement(self, data)

    # -- products ---------------------------------------------------------------

    def mul_sparse(self, x, y):
        acc = {}
        T = self.table
        for i, a in x.items():
            row = T[i]
            for j, b in y.items():
                entry = row[j]
                if entry:
                    _axpy(acc, a * b, entry)
        return acc

    def left_matrix(self, x):
        """Matrix of ``a -> x*a``."""
        rows = [{} for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.mul_sparse(x.data, {j: self.ctx.one}).items():
                rows[k][j] = c
        return Matrix.from_sparse(rows, self.dim, self.ctx)

    def right_matrix(self, x):
        """Matrix of ``a -> a*x``."""
        rows = [{} for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.mul_sparse({j: self.ctx.one}, x.data).items():
                rows[k][j] = c
        return Matrix.from_sparse(rows, self.dim, self.ctx)

    # -- contract checks ------------------------------------------------------

    def _assoc_triple(self, i, j, k):
        T = self.table
        left = {}
        for l, c in T[i][j].items():
            _axpy(left, c, T[l][k])
        right = {}
        for l, c in T[j][k].items():
            _axpy(right, c, T[i][l])
        return left == right

    def check_identity(self):
        for i in range(self.dim):
            e = {i: self.ctx.one}
            if self.mul_sparse(self.unit, e) != e or self.mul_sparse(e, self.unit) != e:
                raise AlgebraContractError(f"1 is not a two-sided identity on {self.labels[i]}")

    def check_associativity(self, seed=0):
        """Exhaustive on basis triples up to dimension 64.

        Above that, a tensor product is checked factor by factor (each
        factor exhaustively) together with the tensor law on every basis
        pair.  By trilinearity each basis-triple associator of the product
        is then a tensor of factor associators, so every triple is covered.
        500 seeded random triples of the full table are checked on top.
        Returns a short description of what was checked.
        """
        d = self.dim
        if d <= EXHAUSTIVE_LIMIT:
            for i in range(d):
                for j in range(d):
                    for k in range(d):
                        if not self._assoc_triple(i, j, k):
                            raise AlgebraContractError(
                                f"({self.labels[i]}*{self.labels[j]})*{self.labels[k]} differs")
            return f"exhaustive:{d ** 3}"
        if len(self.factors) > 1:
            for f in self.factors:
                f.check_associativity(seed)
            self.check_tensor_law()
        rng = random.Random(seed)
        for _ in range(SAMPLED_TRIPLES):
            i, j, k = rng.randrange(d), rng.randrange(d), rng.randrange(d)
            if not self._assoc_triple(i, j, k):
                raise AlgebraContractError(
                    f"({self.labels[i]}*{self.labels[j]})*{self.labels[k]} differs")
        if len(self.factors) > 1:
            return f"tensor-exhaustive:{d ** 3}+sampled:{SAMPLED_TRIPLES}"
        return f"sampled:{SAMPLED_TRIPLES}"

    def check_tensor_law(self):
        """Every table entry equals the product of the factor tables."""
        dims = [f.dim for f in self.factors]
        for i in range(self.dim):
            ii = _digits(i, dims)
            for j in range(self.dim):
                expect = _tensor_entry(self.factors, ii, _digits(j, dims), dims)
                if expect != self.table[i][j]:
                    raise AlgebraContractError(
                        f"tensor law fails on {self.labels[i]}, {self.labels[j]}")

    def verify(self, seed=0):
        self.check_identity()
        return self.check_associativity(seed)

    # -- tensor structure -----------------------------------------------------

    def embed(self, index, x):
        """Image of ``x`` (an element of factor ``index``) in this algebra."""
        dims = [f.dim for f in self.factors]
        if x.algebra is not self.factors[index]:
            raise ValueError("element does not belong to that factor")
        terms = [(f.unit if n != index else x.data) for n, f in enumerate(self.factors)]
        return AlgElement(self, _tensor_sparse(terms, dims))

    def pure_tensor(self, parts):
        dims = [f.dim for f in self.factors]
        return AlgElement(self, _tensor_sparse([p.data for p in parts], dims))

    def to_json(self):
        return {
            "labels": list(self.labels),
            "table": [[{self.labels[k]: str(c) for k, c in sorted(e.items())} for e in row]
                      for row in self.table],
        }


def _digits(i, dims):
    out = []
    for d in reversed(dims):
        out.append(i % d)
        i //= d
    return out[::-1]


def _tensor_sparse(parts, dims):
    acc = {0: None}
    for part, d in zip(parts, dims):
        nxt = {}
        for idx, c in acc.items():
            for k, x in part.items():
                nxt[idx * d + k] = x if c is None else c * x
        acc = nxt
    return {k: c for k, c in acc.items() if c}


def _tensor_entry(factors, ii, jj, dims):
    return _tensor_sparse([f.table[a][b] for f, a, b in zip(factors, ii, jj)], dims)


class AlgElement:
    """Element of a :class:`StructAlgebra` with sparse coordinates."""

    __slots__ = ("algebra", "data")

    def __init__(self, algebra, data):
        self.algebra = algebra
        self.data = data

    @property
    def coords(self):
        zero = self.algebra.ctx.zero
        return tuple(self.data.get(k, zero) for k in range(self.algebra.dim))

    def _check(self, other):
        if not isinstance(other, AlgElement) or other.algebra is not self.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgElement):
            other = self.algebra.scalar(other)
        self._check(other)
        return AlgElement(self.algebra, _axpy(dict(self.data), None, other.data))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._check(other)
            return AlgElement(self.algebra, self.algebra.mul_sparse(self.data, other.data))
        c = self.algebra.ctx(other)
        if not c:
            return self.algebra.zero
        return AlgElement(self.algebra, {k: c * x for k, x in self.data.items()})

    def __rmul__(self, other):
        c = self.algebra.ctx(other)
        if not c:
            return self.algebra.zero
        return AlgElement(self.algebra, {k: x * c for k, x in self.data.items()})

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = self.algebra.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def square(self):
        return self * self

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            if isinstance(other, int) or hasattr(other, "ctx"):
                other = self.algebra.scalar(other)
            else:
                return NotImplemented
        return self.algebra is other.algebra and self.data == other.data

    def __hash__(self):
        return hash(tuple(sorted(self.data.items())))

    def to_json(self):
        labels = self.algebra.labels
        return {labels[k]: str(c) for k, c in sorted(self.data.items())}

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for k, c in sorted(self.data.items()):
            lab = self.algebra.labels[k]
            parts.append(lab if c.is_one() else f"({c})*{lab}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgElement({self})"


# -- constructors ---------------------------------------------------------------


@dataclass(frozen=True)
class QuaternionDesc:
    """A quaternion basis ``(1, u, v, w)`` inside some algebra:
    ``u^2 + u = alpha``, ``v^2 = beta``, ``w = uv = vu + v``."""

    alpha: object
    beta: object
    one: AlgElement
    u: AlgElement
    v: AlgElement
    w: AlgElement
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def algebra(self):
        return self.u.algebra

    def check_relations(self):
        alg = self.algebra
        ok = (self.u * self.u + self.u == alg.scalar(self.alpha)
              and self.v * self.v == alg.scalar(self.beta)
              and self.u * self.v == self.w
              and self.v * self.u + self.v == self.w)
        if not ok:
            raise AlgebraContractError("quaternion relations fail")
        return True


def make_quaternion(alpha, beta, ctx=None, labels=("1", "u", "v", "w"), name=None):
    """The quaternion algebra ``[alpha, beta)`` on the basis ``1, u, v, w``."""
    ctx = ctx or alpha.ctx
    a, b = ctx(alpha), ctx(beta)
    if not b:
        raise ZeroBeta("beta must be nonzero")
    one = ctx.one
    # rows: left factor 1,u,v,w; entries {index: coeff}
    table = [
        [{0: one}, {1: one}, {2: one}, {3: one}],
        [{1: one}, {0: a, 1: one}, {3: one}, {2: a, 3: one}],
        [{2: one}, {2: one, 3: one}, {0: b}, {0: b, 1: b}],
        [{3: one}, {2: a}, {1: b}, {0: a * b}],
    ]
    alg = StructAlgebra(ctx, labels, table, {0: one}, name=name or f"[{a},{b})")
    alg.verify()
    q = QuaternionDesc(a, b, alg.one, alg.basis(1), alg.basis(2), alg.basis(3))
    q.check_relations()
    return alg, q


def make_matrix_algebra(n, ctx, name=None, label_prefix="e"):
    """``M_n(ctx)`` on matrix units ``e_ij`` (index ``i*n + j``, 1-based labels)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    one = ctx.one
    labels = [f"{label_prefix}{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    table = []
    for i in range(n):
        for j in range(n):
            row = []
            for k in range(n):
                for l in range(n):
                    row.append({i * n + l: one} if j == k else {})
            table.append(row)
    unit = {i * n + i: one for i in range(n)}
    alg = StructAlgebra(ctx, labels, table, unit, matrix_size=n, name=name or f"M{n}")
    alg.verify()
    return alg


def tensor(A, B, name=None, verify=True):
    """``A ⊗ B``; basis ``a_i ⊗ b_j`` at index ``i*dim(B) + j``."""
    if A.ctx != B.ctx:
        raise ValueError("tensor factors must share a field")
    factors = A.factors + B.factors
    dims = [f.dim for f in factors]
    labels = [f"{a}{TENSOR_SEP}{b}" for a in A.labels for b in B.labels]
    dA, dB = A.dim, B.dim
    table = []
    for i in range(dA):
        for j in range(dB):
            row = []
            for k in range(dA):
                left = A.table[i][k]
                for l in range(dB):
                    right = B.table[j][l]
                    entry = {}
                    if left and right:
                        for p, c in left.items():
                            for q, e in right.items():
                                entry[p * dB + q] = c * e
                    row.append(entry)
            table.append(row)
    unit = _tensor_sparse([A.unit, B.unit], [dA, dB])
    alg = StructAlgebra(A.ctx, labels, table, unit, factors=factors,
                        name=name or f"{A.name}{TENSOR_SEP}{B.name}")
    alg._factor_dims = dims
    if verify:
        alg.verify()
    return alg


# -- element-level operations -----------------------------------------------------


def elem_mul(x, y):
    return x * y


def elem_add(x, y):
    return x + y


def elem_square(x):
    return x * x


def is_scalar(x):
    """``c`` if ``x == c*1``, else None."""
    alg = x.algebra
    if not x.data:
        return alg.ctx.zero
    k0 = next(iter(alg.unit))
    c = x.data.get(k0)
    if c is None:
        return None
    c = c / alg.unit[k0]
    return c if alg.scalar(c) == x else None


def is_unit(x):
    """``(True, inverse)`` or ``(False, None)``; the inverse is re-verified."""
    alg = x.algebra
    sq = is_scalar(x * x)
    if sq is not None:
        # square-central: x^2 = c gives x^{-1} = x / c, or no inverse when c = 0
        if not sq:
            return False, None
        return True, x * sq.inverse()
    sol = solve(alg.left_matrix(x), [alg.unit.get(k, alg.ctx.zero) for k in range(alg.dim)])
    if sol is None:
        return False, None
    inv = alg.element(sol)
    if x * inv != alg.one or inv * x != alg.one:
        raise VerificationError("computed inverse fails re-verification")
    return True, inv


def inverse(x):
    ok, inv = is_unit(x)
    if not ok:
        raise AlgebraContractError(f"{x} is not a unit")
    return inv


def commutator_matrix(x):
    """Matrix of ``a -> a*x + x*a``."""
    alg = x.algebra
    rows = [{} for _ in range(alg.dim)]
    for j in range(alg.dim):
        e = {j: alg.ctx.one}
        acc = alg.mul_sparse(x.data, e)
        _axpy(acc, None, alg.mul_sparse(e, x.data))
        for k, c in acc.items():
            rows[k][j] = c
    return rows


def centralizer(xs, algebra=None):
    """Basis (as elements) of ``{a : a*x = x*a for every x in xs}``."""
    xs = list(xs)
    alg = algebra or xs[0].algebra
    stacked = []
    for x in xs:
        stacked.extend(commutator_matrix(x))
    if not stacked:
        return [alg.basis(i) for i in range(alg.dim)]
    M = Matrix.from_sparse(stacked, alg.dim, alg.ctx)
    return [alg.element(v) for v in kernel_basis(M)]


@dataclass
class SubalgebraDesc:
    """A subalgebra: generators, a canonical basis of its span, and an
    optional cache of inseparability flags."""

    algebra: StructAlgebra
    generators: list
    basis: list
    span: Subspace
    flags: dict | None = None

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, x):
        return self.span.contains(x.data)

    def same_as(self, other):
        return self.span == other.span

    def check_closed(self):
        """Every product of two basis elements lies in the span."""
        for a in self.basis:
            for b in self.basis:
                if not self.span.contains((a * b).data):
                    raise NotSubalgebra("span is not closed under multiplication")
        return True

    def to_json(self):
        return {
            "generators": [g.to_json() for g in self.generators],
            "basis": [b.to_json() for b in self.basis],
            "dim": self.dim,
            "flags": self.flags,
        }


def span_of(alg, vectors):
    return Subspace([v.data for v in vectors], alg.dim, alg.ctx)


def _elements_of(alg, span):
    return [AlgElement(alg, dict(row)) for row in span.basis]


def generated_subalgebra(gens, algebra=None):
    """Closure of ``span{1, gens}`` under multiplication."""
    gens = list(gens)
    alg = algebra or gens[0].algebra
    vectors = [alg.one] + gens
    span = span_of(alg, vectors)
    while True:
        basis = _elements_of(alg, span)
        new = list(basis)
        for a in basis:
            for b in basis:
                p = a * b
                if not span.contains(p.data):
                    new.append(p)
        if len(new) == len(basis):
            break
        span = span_of(alg, new)
        if span.rank == alg.dim:
            basis = _elements_of(alg, span)
            break
    desc = SubalgebraDesc(alg, gens, basis, span)
    desc.check_closed()
    return desc


def reduced_trace_quat(x, q):
    """Reduced trace of ``x`` in the quaternion algebra described by ``q``:
    the coefficient of ``u``."""
    alg = q.algebra
    if x.algebra is not alg:
        raise ValueError("element is not in the quaternion algebra")
    if alg.dim != 4:
        raise ValueError("reduced_trace_quat needs a 4-dimensional quaternion algebra")
    coords = solve(Matrix.from_columns([b.coords for b in (q.one, q.u, q.v, q.w)], alg.ctx),
                   list(x.coords))
    return coords[1]
