"""Exact linear algebra over a :class:`~invol2.field.FieldCtx`.

Everything funnels through one Gauss-Jordan routine.  Over a base field
``GF(2)(x_1..x_m)`` rows are cleared of denominators and eliminated
fraction-free on polynomials, dividing each updated row by the gcd of its
entries so coefficient degrees stay small.  Over a quadratic extension the
rows are eliminated with ordinary field division.

Rows are kept sparse (``{column: entry}``) since most matrices that come
out of structure constants are mostly zero.
"""

from __future__ import annotations

from .errors import VerificationError


class Matrix:
    """``rows x cols`` matrix with entries in ``ctx``, stored as sparse rows."""

    __slots__ = ("rows", "cols", "ctx", "_data")

    def __init__(self, rows, cols, entries, ctx):
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        data = []
        for i in range(rows):
            row = {}
            for j in range(cols):
                e = entries[i * cols + j]
                if e:
                    row[j] = ctx(e)
            data.append(row)
        self.rows, self.cols, self.ctx, self._data = rows, cols, ctx, data

    @classmethod
    def from_sparse(cls, sparse_rows, cols, ctx):
        m = cls.__new__(cls)
        m.rows, m.cols, m.ctx = len(sparse_rows), cols, ctx
        m._data = [{j: e for j, e in r.items() if e} for r in sparse_rows]
        return m

    @classmethod
    def from_rows(cls, rows, ctx):
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r], ctx)

    @classmethod
    def from_columns(cls, columns, ctx):
        columns = [list(c) for c in columns]
        nrows = len(columns[0]) if columns else 0
        data = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("ragged columns")
            for i, e in enumerate(col):
                if e:
                    data[i][j] = ctx(e)
        return cls.from_sparse(data, len(columns), ctx)

    @classmethod
    def identity(cls, n, ctx):
        return cls.from_sparse([{i: ctx.one} for i in range(n)], n, ctx)

    @classmethod
    def zeros(cls, rows, cols, ctx):
        return cls.from_sparse([{} for _ in range(rows)], cols, ctx)

    def __getitem__(self, key):
        i, j = key
        return self._data[i].get(j, self.ctx.zero)

    def row(self, i):
        r = self._data[i]
        return [r.get(j, self.ctx.zero) for j in range(self.cols)]

    def column(self, j):
        return [r.get(j, self.ctx.zero) for r in self._data]

    def sparse_rows(self):
        return [dict(r) for r in self._data]

    def mul_vec(self, v):
        v = _sparse(v)
        zero = self.ctx.zero
        out = []
        for r in self._data:
            acc = zero
            for j, e in r.items():
                x = v.get(j)
                if x is not None:
                    acc = acc + e * x
            out.append(acc)
        return out

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows and self.cols == other.cols
                and self._data == other._data)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def _sparse(v):
    if isinstance(v, dict):
        return {k: x for k, x in v.items() if x}
    return {k: x for k, x in enumerate(v) if x}


def _degree(e):
    if hasattr(e, "total_degree") and not callable(e.total_degree):
        return e.total_degree
    return int(e.total_degree())


# -- the elimination kernel ---------------------------------------------------


def _lift_rows(rows, ctx):
    """Clear denominators row by row: RatFunc rows -> polynomial rows."""
    out = []
    for r in rows:
        if not r:
            continue
        dens = [e.den for e in r.values() if not e.den.is_one()]
        if not dens:
            out.append({j: e.num for j, e in r.items()})
            continue
        lcm = dens[0]
        for d in dens[1:]:
            g = lcm.gcd(d)
            lcm = lcm * (d / g) if not g.is_one() else lcm * d
        out.append({j: e.num * (lcm / e.den) if not e.den.is_one() else e.num * lcm
                    for j, e in r.items()})
    return [_content_free(r) for r in out]


def _content_free(row):
    g = None
    for v in row.values():
        g = v if g is None else g.gcd(v)
        if g.is_one():
            return row
    if g is None or g.is_one():
        return row
    return {j: v / g for j, v in row.items()}


def _eliminate(rows, ncols, fraction_free):
    """Gauss-Jordan on sparse rows over the first ``ncols`` columns.

    Returns the updated rows and a list of ``(column, row_index)`` pivots.
    Every pivot column is zero outside its pivot row.  Columns beyond
    ``ncols`` are carried along (augmented right-hand sides).
    """
    rows = [r for r in rows if r]
    pivots = []
    unused = list(range(len(rows)))
    for c in range(ncols):
        best, best_key = None, None
        for i in unused:
            e = rows[i].get(c)
            if e is not None:
                key = (_degree(e), len(rows[i]), i)
                if best_key is None or key < best_key:
                    best, best_key = i, key
        if best is None:
            continue
        unused.remove(best)
        prow = rows[best]
        if not fraction_free:
            inv = prow[c].inverse()
            prow = {j: v * inv for j, v in prow.items()}
            rows[best] = prow
        piv = prow[c]
        for i in range(len(rows)):
            if i == best:
                continue
            r = rows[i]
            e = r.get(c)
            if e is None:
                continue
            new = {j: v * piv for j, v in r.items()} if fraction_free else dict(r)
            for j, v in prow.items():
                t = e * v
                if j in new:
                    s = new[j] + t
                    if s:
                        new[j] = s
                    else:
                        del new[j]
                else:
                    new[j] = t
            rows[i] = _content_free(new) if fraction_free else new
        pivots.append((c, best))
        if not unused:
            break
    return rows, pivots


def _reduced(A, extra=()):
    """Eliminate A (optionally augmented by extra columns).

    Returns ``(rows, pivots, to_field)`` where ``to_field(row, j)`` converts a
    stored entry to a field element.
    """
    ctx = A.ctx
    data = A.sparse_rows()
    for k, col in enumerate(extra):
        for i, e in _sparse(col).items():
            data[i][A.cols + k] = ctx(e)
    if ctx.is_extension:
        rows, pivots = _eliminate(data, A.cols, fraction_free=False)
        return rows, pivots, lambda x: x
    rows, pivots = _eliminate(_lift_rows(data, ctx), A.cols, fraction_free=True)
    return rows, pivots, ctx.fraction


# -- public operations --------------------------------------------------------


def rank(A):
    return len(_reduced(A)[1])


def solve_many(A, rhs_list):
    """Solve ``A s = b`` for each ``b``; one solution (free variables 0) or None."""
    rhs_list = [list(b) if not isinstance(b, dict) else b for b in rhs_list]
    if not rhs_list:
        return []
    ctx = A.ctx
    rows, pivots, conv = _reduced(A, rhs_list)
    pivot_rows = {i for _, i in pivots}
    inconsistent = set()
    for i, r in enumerate(rows):
        if i not in pivot_rows:
            for j in r:
                if j >= A.cols:
                    inconsistent.add(j - A.cols)
    out = []
    for k, b in enumerate(rhs_list):
        if k in inconsistent:
            out.append(None)
            continue
        sol = [ctx.zero] * A.cols
        col = A.cols + k
        for c, i in pivots:
            num = rows[i].get(col)
            if num is not None:
                sol[c] = conv(num) / conv(rows[i][c])
        if A.mul_vec(sol) != [ctx(x) for x in _dense(b, A.rows, ctx)]:
            raise VerificationError("linear solve failed re-substitution")
        out.append(sol)
    return out


def solve(A, b):
    return solve_many(A, [b])[0]


def _dense(b, n, ctx):
    if isinstance(b, dict):
        return [b.get(i, ctx.zero) for i in range(n)]
    return list(b)


def kernel_basis(A):
    """Null-space basis: one vector per free column, with a 1 there."""
    ctx = A.ctx
    rows, pivots, conv = _reduced(A)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(A.cols):
        if f in pivot_cols:
            continue
        v = [ctx.zero] * A.cols
        v[f] = ctx.one
        for c, i in pivots:
            e = rows[i].get(f)
            if e is not None:
                v[c] = conv(e) / conv(rows[i][c])
        basis.append(v)
    for v in basis:
        if any(A.mul_vec(v)):
            raise VerificationError("kernel vector failed re-verification")
    return basis


def image_basis(A):
    """Basis of the column space made of original columns of A."""
    _, pivots, _ = _reduced(A)
    return [A.column(c) for c, _ in sorted(pivots)]


def inverse(A):
    if A.rows != A.cols:
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    cols = solve_many(A, [{i: A.ctx.one} for i in range(n)])
    if any(c is None for c in cols):
        return None
    return Matrix.from_columns(cols, A.ctx)


class Subspace:
    """Subspace of ``ctx^dim`` held as a reduced row-echelon basis with
    pivots equal to 1, so two subspaces are equal iff their bases are."""

    __slots__ = ("ctx", "dim", "basis", "pivots")

    def __init__(self, vectors, dim, ctx):
        self.ctx, self.dim = ctx, dim
        rows = [{j: ctx(e) for j, e in _sparse(v).items()} for v in vectors]
        A = Matrix.from_sparse(rows, dim, ctx)
        rows, pivots, conv = _reduced(A)
        basis, piv_cols = [], []
        for c, i in sorted(pivots):
            lead = conv(rows[i][c])
            basis.append({j: conv(e) / lead for j, e in rows[i].items()})
            piv_cols.append(c)
        self.basis = basis
        self.pivots = piv_cols

    @property
    def rank(self):
        return len(self.basis)

    def reduce(self, v):
        """Remainder of ``v`` modulo the subspace (sparse dict)."""
        v = _sparse(v)
        for c, row in zip(self.pivots, self.basis):
            e = v.get(c)
            if e is None:
                continue
            for j, x in row.items():
                s = v.get(j, self.ctx.zero) + e * x
                if s:
                    v[j] = s
                else:
                    v.pop(j, None)
        return v

    def contains(self, v):
        return not self.reduce(v)

    def dense_basis(self):
        return [[r.get(j, self.ctx.zero) for j in range(self.dim)] for r in self.basis]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.dim == other.dim
                and self.pivots == other.pivots and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, dim={self.dim})"
