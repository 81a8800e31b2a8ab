"""Diagonal symmetric bilinear forms and bilinear Pfister forms in
characteristic 2.

For a diagonal form ``<a_1, ..., a_k>`` the value ``b(v, v)`` is
``sum a_i v_i^2``, so value sets are F^2-spans and isotropy is F^2-linear
dependence of the entries.  Every predicate below reduces to linear
algebra on Frobenius coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import log2

from .errors import SymplecticFactor, VerificationError, ZeroEntry
from .field import extend_by_sqrt, frobenius_decompose, solve_frobenius_linear
from .involution import ORTHOGONAL, quat_discriminant
from .linalg import Matrix, kernel_basis, rank


@dataclass(frozen=True)
class DiagonalForm:
    entries: tuple
    ctx: object

    def __init__(self, entries, ctx=None):
        entries = tuple(entries)
        ctx = ctx or entries[0].ctx
        entries = tuple(ctx(e) for e in entries)
        if not all(entries):
            raise ZeroEntry("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "ctx", ctx)

    def __len__(self):
        return len(self.entries)

    def value(self, v):
        """``b(v, v) = sum a_i v_i^2``."""
        out = self.ctx.zero
        for a, x in zip(self.entries, v):
            if x:
                out = out + a * x * x
        return out

    def to_json(self):
        return [str(e) for e in self.entries]


class PfisterForm:
    """``<<a_1, ..., a_n>> = <1, a_1> ⊗ ... ⊗ <1, a_n>``.

    The expansion entry at bitmask ``B`` is ``prod_{i in B} a_i``.
    """

    def __init__(self, generators, ctx=None):
        generators = list(generators)
        if ctx is None:
            if not generators:
                raise ValueError("ctx is required for the empty Pfister form")
            ctx = generators[0].ctx
        self.ctx = ctx
        self.generators = tuple(ctx(g) for g in generators)

    @property
    def n(self):
        return len(self.generators)

    @cached_property
    def expansion(self):
        entries = [self.ctx.one]
        for g in self.generators:
            entries = entries + [e * g for e in entries]
        return DiagonalForm(entries, self.ctx)

    @cached_property
    def i_invariant(self):
        return i_invariant(self)

    def to_json(self):
        return [str(g) for g in self.generators]

    def __repr__(self):
        return f"<<{', '.join(map(str, self.generators))}>>"


def tensor_forms(a, b):
    return DiagonalForm([x * y for x in a.entries for y in b.entries], a.ctx)


def q_value_membership(b, target):
    """``v`` with ``b(v, v) == target``, or None when target is not a value
    of ``b``.  For ``target == 0`` the witness is a nonzero isotropic vector."""
    if not b.ctx(target):
        return isotropy_vector(b)
    sol = solve_frobenius_linear([b.ctx(target)], b.entries)[0]
    if sol is None:
        return None
    if b.value(sol) != target:
        raise VerificationError("value witness failed re-verification")
    return sol


def _frobenius_matrix(entries, ctx):
    coords = [frobenius_decompose(e) for e in entries]
    masks = sorted({m for c in coords for m in c.coeffs})
    return Matrix.from_columns([[c.get(m) for m in masks] for c in coords], ctx)


def f2_rank(entries, ctx):
    """Rank of ``entries`` as vectors over the subfield of squares."""
    return rank(_frobenius_matrix(entries, ctx))


def isotropy_vector(b):
    """Nonzero ``v`` with ``b(v, v) = 0`` or None for anisotropic ``b``."""
    basis = kernel_basis(_frobenius_matrix(b.entries, b.ctx))
    if not basis:
        return None
    v = basis[0]
    if b.value(v):
        raise VerificationError("isotropy vector failed re-verification")
    return v


def is_anisotropic(b):
    return isotropy_vector(b) is None


def i_invariant(p):
    """``n - log2(F^2-rank of the expansion)``: the number of hyperbolic
    ``<<1>>`` factors split off."""
    r = f2_rank(p.expansion.entries, p.ctx)
    e = int(round(log2(r)))
    if 1 << e != r:
        raise VerificationError(f"F^2-rank {r} of a Pfister expansion is not a power of two")
    return p.n - e


def pfister_invariant(factors):
    """Pfister form on the discriminants of ``(quaternion, involution)`` factors."""
    gens = []
    for q, s in factors:
        if s.kind != ORTHOGONAL:
            raise SymplecticFactor(f"{s.name} is symplectic")
        gens.append(quat_discriminant(s))
    if not gens:
        raise ValueError("at least one factor is required")
    return PfisterForm(gens, gens[0].ctx)


def i_after_sqrt_extension(p, alpha):
    """The i-invariant of ``p`` over ``F(sqrt(alpha))``."""
    K = extend_by_sqrt(p.ctx, alpha)
    return i_invariant(PfisterForm([K.lift(g) for g in p.generators], K))


# -- independent cross-check ---------------------------------------------------


def _derivative_rows(a, names):
    """``(d_S a)`` for every subset ``S`` of the variables, where ``d_S`` is
    the product of the distinct partial derivatives in ``S``."""
    out = [a]
    for name in names:
        out = out + [f.derivative(name) if f else f for f in out]
    return out


def _sqrt_in_squares(c):
    """Square root of an element already known to be a square."""
    if not c:
        return c
    return c.ctx.fraction(c.num.sqrt(), c.den.sqrt())


def derivative_isotropy_search(entries, ctx):
    """F^2-dependence search for a base field that never touches Frobenius
    coordinates.

    The derivations ``d_S`` are F^2-linear and the matrix ``(d_S a_i)`` has
    the same rank over F as the entries have over F^2, so a kernel vector
    normalised at a free column has square entries; their square roots
    give ``c`` with ``sum c_i^2 a_i = 0``.  Returns ``c`` or None.
    """
    if ctx.is_extension:
        raise ValueError("derivative search works over the base field only")
    entries = [ctx(e) for e in entries]
    columns = [_derivative_rows(a, ctx.variables) for a in entries]
    basis = kernel_basis(Matrix.from_columns(columns, ctx))
    if not basis:
        return None
    c = [_sqrt_in_squares(x) for x in basis[0]]
    total = ctx.zero
    for ci, a in zip(c, entries):
        total = total + ci * ci * a
    if total or not any(c):
        raise VerificationError("derivative dependence failed re-verification")
    return c
