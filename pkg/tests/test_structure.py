import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invol2.algebra import centralizer, generated_subalgebra, is_scalar, is_unit, span_of
from invol2.errors import BadChoice, NotIsotropic, SquareInput, WrongShape
from invol2.field import is_square
from invol2.involution import alt_plus_F_member, sym_plus_member
from invol2.scenario import element_from_json, parse_element
from invol2.structure import (
    DecomposedAlgebra,
    build_inseparable,
    check_inseparable,
    cor_ia_check,
    count_witness,
    exm1_partial,
    isotropy_witness,
    lemma3_pair,
    met_isotropy_vector,
    nonuniqueness_extend,
    pos_iterate,
    quat_subalgebra_containing,
    quaternion_factor,
    represents,
    split_factor,
)

seeds = st.integers(0, 2**32 - 1)


def _random_s(D, seed):
    return D.s_element(D.random_s_coeffs(random.Random(seed), 1))


# -- inseparable subalgebras -------------------------------------------------------------


def test_standard_subalgebra_is_inseparable(inst):
    D = inst.aniso4
    S = generated_subalgebra(D.v, D.algebra)
    flags, ok = check_inseparable(D, S)
    assert ok and S.dim == 4


def test_u_generator_fails(inst):
    D = inst.aniso4
    S = generated_subalgebra([D.u[0], D.v[1]], D.algebra)
    flags, ok = check_inseparable(D, S)
    assert not ok and not flags["in_sym_plus"]


def test_scalars_alone_fail(Fxy):
    x, y = Fxy.gens()
    D = DecomposedAlgebra([quaternion_factor(x, y)])
    S = generated_subalgebra([D.algebra.one], D.algebra)
    flags, ok = check_inseparable(D, S)
    assert not ok and not flags["dim_ok"]


def test_shifted_choice_gives_same_subalgebra(inst):
    D = inst.aniso4
    F = D.ctx
    shifted = [f.quat.v + f.algebra.scalar(F.gen("a")) for f in D.factors]
    assert build_inseparable(D, shifted).same_as(build_inseparable(D))


def test_u_choice_rejected(inst):
    D = inst.aniso4
    with pytest.raises(BadChoice):
        build_inseparable(D, [D.factors[0].quat.u, None])


def test_degree_four_isotropic_choices_coincide(inst):
    D = inst.iso4
    F = D.ctx
    mu, lam = F.parse("a + 1"), F.parse("b")
    variants = [build_inseparable(D, [f.quat.v * mu + f.algebra.scalar(lam) if m >> i & 1
                                      else f.quat.v for i, f in enumerate(D.factors)])
                for m in range(4)]
    assert all(S.same_as(variants[0]) for S in variants)


# -- the degree-8 pair -------------------------------------------------------------------

S1_GENS = [{"v⊗1⊗e11": "1", "v⊗1⊗e22": "1"}, {"1⊗v⊗e11": "1", "1⊗v⊗e22": "1"},
           {"1⊗1⊗e12": "1", "1⊗1⊗e21": "1"}]
S2_GENS = [{"v⊗1⊗e12": "1", "v⊗1⊗e21": "1", "v⊗u⊗e11": "1", "v⊗u⊗e12": "1",
            "v⊗u⊗e21": "1", "v⊗u⊗e22": "1"},
           {"1⊗v⊗e12": "1", "1⊗v⊗e21": "1", "u⊗v⊗e11": "1", "u⊗v⊗e12": "1",
            "u⊗v⊗e21": "1", "u⊗v⊗e22": "1"},
           {"1⊗1⊗e12": "1", "1⊗1⊗e21": "1"}]


def test_two_distinct_subalgebras_degree8(inst):
    D = inst.iso8
    S1, S2 = lemma3_pair(D)
    assert not S1.same_as(S2)
    assert all(S1.flags.values()) and all(S2.flags.values())
    assert [g.to_json() for g in S1.generators] == S1_GENS
    assert [g.to_json() for g in S2.generators] == S2_GENS


def test_second_subalgebra_generator(inst):
    D = inst.iso8
    u1, u2 = D.u[0], D.u[1]
    v1, v2, v3 = D.v
    v1p = u2 * v1 + (u2 * v1 + v1) * v3
    S1, S2 = lemma3_pair(D)
    assert sym_plus_member(v1p, D.involution).ok
    assert S2.contains(v1p)
    assert S1.contains(v3) and S2.contains(v3)


def test_nonuniqueness_degree16(inst):
    T1, T2 = nonuniqueness_extend(inst.iso16)
    assert not T1.same_as(T2) and T1.dim == T2.dim == 16


def test_nonuniqueness_needs_split_factor(inst):
    with pytest.raises(WrongShape):
        nonuniqueness_extend(inst.aniso8)


# -- iterations and isotropy -------------------------------------------------------------


def test_pos_commuting_and_trivial(inst):
    D = inst.iso4
    x, y = D.v[0], D.v[1]
    assert pos_iterate(D, x, y)[0] == 1
    assert pos_iterate(D, x, D.algebra.one)[0] == 1


def test_pos_noncommuting_pair(inst):
    D = inst.iso8
    _, S2 = lemma3_pair(D)
    x = S2.generators[0]
    y = D.v[1] + D.algebra.one
    assert x * y != y * x
    k, p = pos_iterate(D, x, y)
    assert k == 2
    assert sym_plus_member(p, D.involution).ok and p * x == x * p


def test_met_degree4(inst):
    D = inst.iso4
    x = D.v[0]
    z, r, y = met_isotropy_vector(D, x)
    assert r == 1
    assert z.to_json() == {"v⊗e11": "1", "v⊗e12": "1", "v⊗e21": "1", "v⊗e22": "1"}
    assert not D.involution(z) * z
    assert span_of(D.algebra, centralizer([x], D.algebra)).contains(z.data)


def test_met_anisotropic(inst):
    with pytest.raises(NotIsotropic):
        met_isotropy_vector(inst.aniso4, inst.aniso4.v[0])


def test_isotropy_witnesses(inst, Fxy):
    D = DecomposedAlgebra([split_factor(Fxy)])
    w = isotropy_witness(D)
    assert w is not None and not D.involution(w) * w
    assert isotropy_witness(inst.aniso4) is None
    w = isotropy_witness(inst.iso8)
    assert w.to_json() == {"1⊗1⊗e11": "1", "1⊗1⊗e12": "1", "1⊗1⊗e21": "1", "1⊗1⊗e22": "1"}


def test_witness_presence_matches_i(inst):
    for D in inst.all(4).values():
        assert (isotropy_witness(D) is not None) == (D.i_invariant > 0)


# -- representation ----------------------------------------------------------------------


def test_represents_examples(inst):
    D = inst.aniso4
    b, d = D.ctx.gen("b"), D.ctx.gen("d")
    rep = represents(D, b)
    assert rep and rep.witness == D.v[0]
    assert not represents(D, D.ctx.zero)
    rep = represents(D, b + d)
    assert rep and rep.witness == D.v[0] + D.v[1]


@given(seeds)
def test_squares_are_represented(inst, seed):
    D = inst.aniso4
    x = _random_s(D, seed)
    if not x:
        return
    rep = represents(D, is_scalar(x * x))
    assert rep and rep.witness * rep.witness == x * x


@given(seeds)
def test_sqrt_extension_raises_i(inst, seed):
    D = inst.aniso4
    x = _random_s(D, seed)
    alpha = is_scalar(x * x)
    if not alpha or is_square(alpha) is not None:
        return
    before, after = cor_ia_check(D, x)
    assert after == before + 1


def test_cor_ia_examples(inst):
    assert cor_ia_check(inst.aniso4, inst.aniso4.v[0]) == (0, 1)
    assert cor_ia_check(inst.iso8, inst.iso8.v[0]) == (1, 2)
    with pytest.raises(SquareInput):
        cor_ia_check(inst.aniso4, inst.aniso4.algebra.one)


# -- properties of S in the anisotropic case ---------------------------------------------


@given(seeds)
def test_sym_plus_closed_on_s(inst, seed):
    D = inst.aniso4
    rng = random.Random(seed)
    c = D.ctx.random_element(rng, 1)
    x = _random_s(D, seed) + D.algebra.scalar(c)
    y = _random_s(D, seed + 1)
    s = D.involution
    assert x * y == y * x
    assert sym_plus_member(x * y, s).ok and sym_plus_member(x + y, s).ok
    for e in (x, y, x * y, x + y):
        if e:
            assert is_unit(e)[0]


# -- quaternion subalgebras --------------------------------------------------------------


def test_quaternion_for_v1(inst):
    D = inst.aniso4
    found = quat_subalgebra_containing(D, D.v[0])
    assert found.method == "euler"
    assert found.quat.u.to_json() == {"u⊗1": "1"}
    assert (found.quat.alpha, found.quat.beta) == (D.ctx.gen("a"), D.ctx.gen("b"))


def test_quaternion_rejects_scalar(inst):
    with pytest.raises(SquareInput):
        quat_subalgebra_containing(inst.aniso4, inst.aniso4.algebra.one)


def test_quaternion_in_isotropic_degree8(inst):
    D = inst.iso8
    x = parse_element(D, "v1 + (a+1)*v2*v3 + c*v1*v2")
    found = quat_subalgebra_containing(D, x)
    found.subalgebra.check_closed()
    assert found.subalgebra.contains(x)


@given(seeds)
def test_elements_of_s_lie_in_quaternions(inst, seed):
    D = inst.aniso4
    x = _random_s(D, seed)
    alpha = is_scalar(x * x)
    if not alpha or is_square(alpha) is not None:
        return
    found = quat_subalgebra_containing(D, x, max_trials=0)
    sub = found.subalgebra
    found.quat.check_relations()
    sub.check_closed()
    assert sub.contains(x)
    assert all(sub.contains(D.involution(b)) for b in sub.basis)


# -- count witness and the partial example -----------------------------------------------

COUNT8 = {"1⊗u⊗e11": "1", "1⊗u⊗e12": "1", "1⊗u⊗e21": "1", "1⊗u⊗e22": "1",
          "v⊗1⊗e12": "1", "v⊗1⊗e21": "1"}


def test_count_witness(inst):
    D = inst.iso8
    x = count_witness(D)
    assert x.to_json() == COUNT8
    assert is_scalar(x * x) == is_scalar(D.v[0] * D.v[0])
    assert alt_plus_F_member(x, D.involution) is None
    with pytest.raises(Exception):
        quat_subalgebra_containing(D, x, max_trials=0)


def test_count_witness_degree16(inst):
    D = inst.iso16
    x = count_witness(D)
    sq = is_scalar(x * x)
    assert D.involution(x) == x and sq and is_square(sq) is None
    assert alt_plus_F_member(x, D.involution) is None


def test_count_witness_needs_split_factor(inst):
    with pytest.raises(WrongShape):
        count_witness(inst.aniso8)


def test_partial_example():
    report = exm1_partial()
    assert report["dims"] == {"B": 64, "A": 256}
    assert all(report["checks"].values())
    one_v = report["objects"]["one_v"]
    assert is_scalar(one_v * one_v) == one_v.algebra.ctx.gen("t")
    assert report["objects"]["sigma"].in_alt(one_v)


def test_json_round_trip(inst):
    D = inst.iso8
    x = count_witness(D)
    assert element_from_json(D, x.to_json()) == x

