"""Hypothesis strategies for low-degree field elements."""

from hypothesis import strategies as st

from invol2.field import FieldCtx

F3 = FieldCtx(("x", "y", "z"))

# exponent vectors of total degree <= 3
_MONOMIALS = [(i, j, k) for i in range(4) for j in range(4) for k in range(4) if i + j + k <= 3]


def _poly(terms):
    out = F3.zero
    for i, j, k in terms:
        out = out + F3.gen("x") ** i * F3.gen("y") ** j * F3.gen("z") ** k
    return out


polys = st.sets(st.sampled_from(_MONOMIALS), max_size=5).map(_poly)
nonzero_polys = polys.filter(bool)
fractions = st.tuples(polys, nonzero_polys).map(lambda p: p[0] / p[1])
nonzero_fractions = st.tuples(nonzero_polys, nonzero_polys).map(lambda p: p[0] / p[1])
