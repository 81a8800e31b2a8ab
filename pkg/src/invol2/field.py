"""Exact scalars over GF(2).

Two kinds of field live here:

* ``F = GF(2)(x_1, ..., x_m)``, elements are :class:`RatFunc` (reduced
  fractions of ``flint.nmod_mpoly`` polynomials mod 2);
* ``K = F[T]/(T^2 - alpha)`` for a non-square ``alpha``, elements are
  :class:`ExtElement` ``a + b*T``.

Both expose the same arithmetic protocol and both admit a Frobenius
decomposition ``f = sum c_S^2 * m_S`` over the square-free monomials of a
p-basis, which is how every F^2-linear question in the package is turned
into ordinary linear algebra.
"""

from __future__ import annotations

import ast
import itertools
import os
import random
from dataclasses import dataclass
from functools import cached_property

import flint

from .errors import AlreadySquare, DegreeOverflow, DivisionByZero, ParseError, VerificationError

DEFAULT_DEGREE_BUDGET = 64
EXTENSION_GENERATOR = "T"


def default_degree_budget():
    env = os.environ.get("INVOL2_DEGREE_BUDGET")
    if env:
        return int(env)
    return DEFAULT_DEGREE_BUDGET


class FieldCtx:
    """A field: either GF(2)(variables) or a quadratic purely inseparable
    extension ``base(sqrt(alpha))`` of such a field.

    Contexts are immutable and compare by value.
    """

    def __init__(self, variables, degree_budget=None, extension=None):
        variables = tuple(variables)
        if not variables:
            raise ValueError("at least one variable is required")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        for name in variables:
            if not name.isidentifier():
                raise ValueError(f"bad variable name {name!r}")
        if degree_budget is None:
            degree_budget = default_degree_budget()
        if degree_budget < 1:
            raise ValueError("degree_budget must be >= 1")
        self.variables = variables
        self.degree_budget = int(degree_budget)
        self.extension = None
        if extension is not None:
            base, alpha = extension
            if base.extension is not None:
                raise ValueError("towers of extensions are not supported")
            if alpha.ctx != base:
                raise ValueError("alpha must live in the base field")
            if base.variables != variables:
                raise ValueError("extension must keep the base variables")
            if is_square(alpha) is not None:
                raise AlreadySquare(f"{alpha} is a square in the base field")
            self.extension = (base, alpha)
        self._poly = flint.nmod_mpoly_ctx.get(variables, ordering="deglex", modulus=2)
        self._key = (variables, self.degree_budget,
                     None if extension is None else (str(self.extension[1]),))

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldCtx) and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.extension is None:
            return f"FieldCtx({', '.join(self.variables)})"
        return f"FieldCtx({', '.join(self.variables)})[{EXTENSION_GENERATOR}^2 = {self.extension[1]}]"

    @property
    def is_extension(self):
        return self.extension is not None

    @property
    def base(self):
        return self if self.extension is None else self.extension[0]

    @property
    def alpha(self):
        return None if self.extension is None else self.extension[1]

    # -- element construction ---------------------------------------------

    @cached_property
    def zero(self):
        if self.extension is None:
            return RatFunc(self._poly.constant(0), self._poly.constant(1), self)
        b = self.base
        return ExtElement(b.zero, b.zero, self)

    @cached_property
    def one(self):
        if self.extension is None:
            return RatFunc(self._poly.constant(1), self._poly.constant(1), self)
        b = self.base
        return ExtElement(b.one, b.zero, self)

    def fraction(self, num, den=None):
        """Build the reduced fraction ``num/den`` from flint polynomials."""
        if self.extension is not None:
            return self.lift(self.base.fraction(num, den))
        if den is None:
            den = self._poly.constant(1)
        return _reduce(num, den, self)

    def gen(self, name):
        if name == EXTENSION_GENERATOR and self.extension is not None and name not in self.variables:
            b = self.base
            return ExtElement(b.zero, b.one, self)
        idx = self.variables.index(name)
        var = RatFunc(self._poly.gens()[idx], self._poly.constant(1), self.base)
        return self.lift(var)

    def gens(self):
        return [self.gen(v) for v in self.variables]

    def lift(self, x):
        """Map an element of the base field into this field."""
        if x.ctx == self:
            return x
        if self.extension is not None and x.ctx == self.base:
            return ExtElement(x, self.base.zero, self)
        raise ValueError(f"cannot lift {x!r} into {self!r}")

    def __call__(self, value):
        if isinstance(value, (RatFunc, ExtElement)):
            return self.lift(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.one if value % 2 else self.zero
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} to a field element")

    def parse(self, text):
        """Parse expressions such as ``"x^2*y + z"`` or ``"(x+1)/(y)"``."""
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ParseError(f"cannot parse {text!r}: {exc}") from None
        return self._eval(tree.body, text)

    def _eval(self, node, text):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self(node.value)
        if isinstance(node, ast.Name):
            if node.id in self.variables or (node.id == EXTENSION_GENERATOR and self.extension):
                return self.gen(node.id)
            raise ParseError(f"unknown variable {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return self._eval(node.operand, text)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = _int_literal(node.right)
                if exp is None:
                    raise ParseError(f"exponent must be an integer literal in {text!r}")
                return self._eval(node.left, text) ** exp
            left = self._eval(node.left, text)
            right = self._eval(node.right, text)
            if isinstance(node.op, (ast.Add, ast.Sub)):
                return left + right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        raise ParseError(f"unsupported syntax in {text!r}")

    def random_element(self, rng, degree=2, nonzero=False):
        """Random polynomial with dense GF(2) coefficients on monomials of
        total degree <= ``degree`` (both components for extensions)."""
        if self.extension is not None:
            b = self.base
            while True:
                x = ExtElement(b.random_element(rng, degree), b.random_element(rng, degree), self)
                if x or not nonzero:
                    return x
        m = len(self.variables)
        while True:
            terms = {}
            for total in range(degree + 1):
                for exps in _exponents(m, total):
                    if rng.getrandbits(1):
                        terms[exps] = 1
            x = self.fraction(self._poly.from_dict(terms)) if terms else self.zero
            if x or not nonzero:
                return x

    def random_fraction(self, rng, degree=2):
        """Random nonzero reduced fraction of two random polynomials."""
        num = self.random_element(rng, degree, nonzero=True)
        den = self.random_element(rng, degree, nonzero=True)
        return num / den

    # -- p-basis ----------------------------------------------------------

    @cached_property
    def dropped_index(self):
        """Index of the base variable exchanged for T (extensions only).

        The lowest-indexed variable that occurs in a monomial carrying a
        nonzero Frobenius coefficient of alpha.
        """
        if self.extension is None:
            return None
        coords = frobenius_decompose(self.alpha)
        support = 0
        for mask in coords.coeffs:
            support |= mask
        for i in range(len(self.variables)):
            if support >> i & 1:
                return i
        raise AssertionError("non-square alpha must have a non-trivial Frobenius support")

    @cached_property
    def p_basis(self):
        """Names of the p-basis of this field over its subfield of squares."""
        if self.extension is None:
            return self.variables
        j = self.dropped_index
        return tuple(v for i, v in enumerate(self.variables) if i != j) + (EXTENSION_GENERATOR,)

    def monomial(self, mask):
        """The square-free monomial ``prod_{bit i of mask} p_basis[i]``."""
        out = self.one
        for i, name in enumerate(self.p_basis):
            if mask >> i & 1:
                out = out * self.gen(name)
        return out

    @cached_property
    def _exchange(self):
        # For each base mask S: list of (kmask, P, Q) with m_S = sum (P + Q*T)^2 * m_kmask.
        from .linalg import Matrix, inverse

        base = self.base
        m = len(self.variables)
        j = self.dropped_index
        others = [i for i in range(m) if i != j]
        sub_masks = []
        for r in range(1 << len(others)):
            sub_masks.append(sum(1 << others[k] for k in range(len(others)) if r >> k & 1))
        size = 1 << m
        columns = []
        for s in sub_masks:
            col = [base.zero] * size
            col[s] = base.one
            columns.append(col)
        for s in sub_masks:
            coords = frobenius_decompose(self.alpha * base.monomial(s))
            col = [base.zero] * size
            for mask, c in coords.coeffs.items():
                col[mask] = c
            columns.append(col)
        inv = inverse(Matrix.from_columns(columns, base))
        if inv is None:
            raise AssertionError("exchange matrix must be invertible")
        half = len(sub_masks)
        table = {}
        for s_full in range(size):
            entries = []
            for r in range(half):
                p = inv[r, s_full]
                q = inv[r + half, s_full]
                if p or q:
                    entries.append((r, ExtElement(p, q, self)))
            table[s_full] = entries
        return table, len(self.p_basis) - 1


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _int_literal(node.operand)
        return None if inner is None else -inner
    return None


def _exponents(m, total):
    if m == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exponents(m - 1, total - first):
            yield (first,) + rest


def _degree(p):
    return int(p.total_degree())


def _reduce(num, den, ctx):
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return ctx.zero
    if not den.is_one():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    if max(_degree(num), _degree(den)) > ctx.degree_budget:
        raise DegreeOverflow(
            f"degree {max(_degree(num), _degree(den))} exceeds budget {ctx.degree_budget}")
    return RatFunc(num, den, ctx)


def _reduce_by(num, den, g, ctx):
    """``num/den`` where any common factor divides ``g`` (None: coprime)."""
    if num.is_zero():
        return ctx.zero
    if g is not None:
        h = num.gcd(g)
        if not h.is_one():
            num, den = num / h, den / h
    if max(_degree(num), _degree(den)) > ctx.degree_budget:
        raise DegreeOverflow(
            f"degree {max(_degree(num), _degree(den))} exceeds budget {ctx.degree_budget}")
    return RatFunc(num, den, ctx)


class RatFunc:
    """Reduced fraction ``num/den`` of polynomials over GF(2).

    Over GF(2) the only unit is 1, so the reduced pair is canonical and
    equality is coefficient-wise.
    """

    __slots__ = ("num", "den", "ctx", "_hash")

    def __init__(self, num, den, ctx):
        self.num = num
        self.den = den
        self.ctx = ctx
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            raise ValueError("operands live in different fields")
        if isinstance(other, (int, bool)):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den.is_one() and other.den.is_one():
            num = self.num + other.num
            if num.is_zero():
                return self.ctx.zero
            return RatFunc(num, self.den, self.ctx)
        if self.den == other.den:
            return _reduce(self.num + other.num, self.den, self.ctx)
        # with g = gcd(b, d) the only common factor left sits inside g
        a, b, c, d = self.num, self.den, other.num, other.den
        g = b.gcd(d)
        if g.is_one():
            return _reduce_by(a * d + c * b, b * d, None, self.ctx)
        b1, d1 = b / g, d / g
        return _reduce_by(a * d1 + c * b1, b * d1, g, self.ctx)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return self.ctx.zero
        if self.den.is_one() and other.den.is_one():
            num = self.num * other.num
            if _degree(num) > self.ctx.degree_budget:
                raise DegreeOverflow(f"degree {_degree(num)} exceeds budget {self.ctx.degree_budget}")
            return RatFunc(num, self.den, self.ctx)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a, d = a / g1, d / g1
        if not g2.is_one():
            c, b = c / g2, b / g2
        num, den = a * c, b * d
        if max(_degree(num), _degree(den)) > self.ctx.degree_budget:
            raise DegreeOverflow(
                f"degree {max(_degree(num), _degree(den))} exceeds budget {self.ctx.degree_budget}")
        return RatFunc(num, den, self.ctx)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num, self.ctx)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.ctx.one
        num, den = self.num ** n, self.den ** n
        if max(_degree(num), _degree(den)) > self.ctx.degree_budget:
            raise DegreeOverflow(
                f"degree {max(_degree(num), _degree(den))} exceeds budget {self.ctx.degree_budget}")
        return RatFunc(num, den, self.ctx)

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def __eq__(self, other):
        if isinstance(other, (int, bool)):
            other = self.ctx(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den and self.ctx == other.ctx

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num.monoms()), tuple(self.den.monoms())))
        return self._hash

    @property
    def total_degree(self):
        return max(_degree(self.num), _degree(self.den))

    @property
    def is_polynomial(self):
        return self.den.is_one()

    def derivative(self, name):
        """Formal partial derivative; in characteristic 2 the quotient rule
        has no signs."""
        i = self.ctx.variables.index(name)
        num = self.num.derivative(i) * self.den + self.num * self.den.derivative(i)
        return _reduce(num, self.den * self.den, self.ctx)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


class ExtElement:
    """``a + b*T`` in ``K = F[T]/(T^2 - alpha)`` with ``a, b`` in ``F``."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, a, b, ctx):
        self.a = a
        self.b = b
        self.ctx = ctx

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.ctx is self.ctx or other.ctx == self.ctx:
                return other
            raise ValueError("operands live in different fields")
        if isinstance(other, RatFunc):
            return self.ctx.lift(other)
        if isinstance(other, (int, bool)):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExtElement(self.a + other.a, self.b + other.b, self.ctx)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        alpha = self.ctx.extension[1]
        return ExtElement(a * c + b * d * alpha, a * d + b * c, self.ctx)

    __rmul__ = __mul__

    def norm(self):
        """``(a + bT)(a + bT) = a^2 + alpha*b^2`` in the base field."""
        return self.a * self.a + self.b * self.b * self.ctx.extension[1]

    def inverse(self):
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of zero")
        ninv = n.inverse()
        return ExtElement(self.a * ninv, self.b * ninv, self.ctx)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ctx.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self):
        return not self

    def is_one(self):
        return self.a.is_one() and self.b.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, bool, RatFunc)):
            other = self.ctx(other)
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.ctx == other.ctx

    def __hash__(self):
        return hash((self.a, self.b))

    @property
    def total_degree(self):
        return max(self.a.total_degree, self.b.total_degree)

    def __str__(self):
        if not self.b:
            return str(self.a)
        tail = f"({self.b})*{EXTENSION_GENERATOR}"
        if not self.a:
            return tail
        return f"({self.a}) + {tail}"

    def __repr__(self):
        return f"ExtElement({self})"


@dataclass(frozen=True)
class FrobCoords:
    """``f = sum coeffs[S]^2 * m_S`` over square-free monomials ``m_S`` of
    the p-basis of ``ctx``; a monomial is encoded as a bitmask over
    ``ctx.p_basis``."""

    ctx: FieldCtx
    coeffs: dict

    def reconstruct(self):
        out = self.ctx.zero
        for mask, c in self.coeffs.items():
            out = out + c * c * self.ctx.monomial(mask)
        return out

    def named(self):
        """Same data keyed by monomial name, ``"1"`` for the empty monomial."""
        out = {}
        for mask, c in sorted(self.coeffs.items()):
            names = [n for i, n in enumerate(self.ctx.p_basis) if mask >> i & 1]
            out["*".join(names) or "1"] = c
        return out

    def get(self, mask):
        return self.coeffs.get(mask, self.ctx.zero)


def frobenius_decompose(f):
    """Coordinates of ``f`` over the square-free monomials of the p-basis."""
    ctx = f.ctx
    if not f:
        return FrobCoords(ctx, {})
    if ctx.extension is None:
        product = f.num * f.den
        buckets = {}
        for exps in product.monoms():
            mask = 0
            for i, e in enumerate(exps):
                if e & 1:
                    mask |= 1 << i
            buckets.setdefault(mask, {})[tuple(e >> 1 for e in exps)] = 1
        coeffs = {mask: _reduce(ctx._poly.from_dict(terms), f.den, ctx)
                  for mask, terms in buckets.items()}
        return FrobCoords(ctx, coeffs)

    table, t_bit = ctx._exchange
    acc = {}
    for part, shift in ((f.a, 0), (f.b, 1 << t_bit)):
        for mask, c in frobenius_decompose(part).coeffs.items():
            for kmask, root in table[mask]:
                key = kmask | shift
                term = root * c
                acc[key] = acc[key] + term if key in acc else term
    return FrobCoords(ctx, {k: v for k, v in acc.items() if v})


def is_square(f):
    """Square root of ``f`` if ``f`` is a square in its field, else None."""
    coords = frobenius_decompose(f)
    if any(mask != 0 for mask in coords.coeffs):
        return None
    root = coords.get(0)
    if root * root != f:
        raise VerificationError(f"square root of {f} failed re-verification")
    return root


def field_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def solve_frobenius_linear(targets, generators):
    """For each target find ``c`` with ``sum c_i^2 * g_i == target``.

    Returns one coefficient list (or None when the target is outside the
    F^2-span) per target, each re-verified by direct arithmetic.
    """
    from .linalg import Matrix, solve_many

    generators = list(generators)
    targets = list(targets)
    ctx = (generators or targets)[0].ctx
    gen_coords = [frobenius_decompose(g) for g in generators]
    tgt_coords = [frobenius_decompose(t) for t in targets]
    masks = sorted({m for c in gen_coords + tgt_coords for m in c.coeffs})
    if not generators:
        return [[] if not t else None for t in targets]
    if not masks:
        return [[ctx.zero] * len(generators) for _ in targets]
    A = Matrix.from_columns([[c.get(m) for m in masks] for c in gen_coords], ctx)
    rhs = [[c.get(m) for m in masks] for c in tgt_coords]
    results = solve_many(A, rhs)
    for t, sol in zip(targets, results):
        if sol is None:
            continue
        check = ctx.zero
        for c, g in zip(sol, generators):
            if c:
                check = check + c * c * g
        if check != t:
            raise VerificationError("Frobenius-linear solution failed re-verification")
    return results


def extend_by_sqrt(ctx, alpha):
    """The field ``ctx(sqrt(alpha))``; raises AlreadySquare for squares."""
    alpha = ctx(alpha)
    if ctx.extension is not None:
        raise ValueError("towers of extensions are not supported")
    return FieldCtx(ctx.variables, ctx.degree_budget, extension=(ctx, alpha))


def square_class_rep(f):
    """Canonical representative of ``f * F^{x2}`` for nonzero ``f`` in a base
    field: ``num*den`` with every even-multiplicity irreducible factor
    removed."""
    if not f:
        raise DivisionByZero("zero has no square class")
    ctx = f.ctx
    product = f.num * f.den
    _, factors = product.factor()
    out = ctx._poly.constant(1)
    for q, e in factors:
        if e % 2:
            out = out * q
    return RatFunc(out, ctx._poly.constant(1), ctx)


def subset_masks(n):
    return range(1 << n)


def popcount_parity(mask):
    return bin(mask).count("1") & 1


def all_subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def seeded_rng(seed):
    return random.Random(seed)
