"""The bundled verification suite: one function per acceptance criterion.

Each criterion returns a :class:`CriterionResult`; ``run_suite`` runs them
in order over a shared set of instances.  ``scale >= 4`` adds degree-16
instances to the criteria that take them.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass
from functools import cached_property
from importlib import resources

from .algebra import centralizer, is_scalar, make_matrix_algebra, make_quaternion, span_of
from .field import FieldCtx, is_square
from .forms import PfisterForm, derivative_isotropy_search, i_invariant
from .involution import alt_plus_F_member, make_canonical, make_quat_orthogonal, make_transpose
from .scenario import load_scenario, parse_element, random_pos_pair
from .structure import (
    DecomposedAlgebra,
    build_inseparable,
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


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:>2}. {self.title} ({self.seconds:.1f}s) {self.detail}"


class Instances:
    """The algebras the criteria run on, built once and shared."""

    def __init__(self, seed=0):
        self.seed = seed
        self.F4 = FieldCtx(("a", "b", "c", "d"))
        self.F6 = FieldCtx(("a", "b", "c", "d", "e", "f"))

    def _quats(self, F, n):
        g = F.gens()
        return [quaternion_factor(g[2 * i], g[2 * i + 1], ctx=F) for i in range(n)]

    @cached_property
    def aniso4(self):
        """``([a,b),tau) ⊗ ([c,d),tau)``, anisotropic."""
        return DecomposedAlgebra(self._quats(self.F4, 2))

    @cached_property
    def iso4(self):
        """``([a,b),tau) ⊗ (M_2,t)``."""
        return DecomposedAlgebra(self._quats(self.F4, 1) + [split_factor(self.F4)])

    @cached_property
    def iso8(self):
        """``([a,b),tau) ⊗ ([c,d),tau) ⊗ (M_2,t)``."""
        return DecomposedAlgebra(self._quats(self.F4, 2) + [split_factor(self.F4)])

    @cached_property
    def aniso8(self):
        """``([a,b),tau) ⊗ ([c,d),tau) ⊗ ([e,f),tau)`` over six variables."""
        return DecomposedAlgebra(self._quats(self.F6, 3))

    @cached_property
    def iso16(self):
        return DecomposedAlgebra(self._quats(self.F6, 3) + [split_factor(self.F6)])

    def all(self, scale=1):
        out = {"aniso4": self.aniso4, "iso4": self.iso4, "iso8": self.iso8,
               "aniso8": self.aniso8}
        if scale >= 4:
            out["iso16"] = self.iso16
        return out


def _timed(number, title, fn, limit=None):
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - t0
    if limit is not None and seconds >= limit:
        passed, detail = False, f"took {seconds:.1f}s, limit {limit}s; {detail}"
    return CriterionResult(number, title, bool(passed), detail, seconds)


def _random_nonscalar_s(D, rng):
    while True:
        x = D.s_element(D.random_s_coeffs(rng, 1))
        sq = is_scalar(x * x)
        if x and sq and is_square(sq) is None:
            return x


# -- criteria -----------------------------------------------------------------------------


def c1_contracts(inst, scale=1):
    """Exhaustive contract checks on every instance up to dimension 64 and
    on the dimension-256 example."""
    F = inst.F4
    a, b = F.gen("a"), F.gen("b")
    Q, q = make_quaternion(a, b, F)
    algebras = [Q, make_matrix_algebra(2, F)]
    involutions = [make_quat_orthogonal(q), make_canonical(q), make_transpose(algebras[1])]
    for D in inst.all(1).values():
        algebras.append(D.algebra)
        involutions.append(D.involution)
    how = []
    for A in algebras:
        how.append(A.verify())
    for s in involutions:
        s.verify()
        s.check_sym_alt()
    report = exm1_partial(verify=True)
    if not all(report["checks"].values()):
        return False, f"dim-256 example checks: {report['checks']}"
    exhaustive = sum(1 for h in how if h.startswith("exhaustive"))
    return True, (f"{exhaustive} algebras exhaustive (dim <= 64), {len(involutions)} involutions; "
                  f"dim-256 example: dim {report['dims']['A']}: {report['checks']['A_associativity']}")


def c2_two_subalgebras(inst, scale=1):
    S1, S2 = lemma3_pair(inst.iso8)
    flags = [S1.flags, S2.flags]
    ok = not S1.same_as(S2) and all(all(f.values()) for f in flags) and len(flags[0]) == 5
    return ok, f"S1 != S2: {not S1.same_as(S2)}, flags {flags}"


def c3_represents(inst, scale=1):
    rng = random.Random(inst.seed + 3)
    cases = [inst.aniso4, inst.iso8] + ([inst.iso16] if scale >= 4 else [])
    squares = values = negatives = 0
    while squares < 100:
        D = cases[squares % len(cases)]
        x = D.s_element(D.random_s_coeffs(rng, 1))
        if not x:
            continue
        rep = represents(D, is_scalar(x * x))
        if not rep or rep.witness * rep.witness != x * x:
            return False, f"x^2 not represented for x = {x}"
        squares += 1
    while values < 100:
        D = cases[values % len(cases)]
        alpha = D.ctx.zero
        for e in D.pfister.expansion.entries:
            c = D.ctx.random_element(rng, 1)
            alpha = alpha + c * c * e
        if not alpha:
            continue
        rep = represents(D, alpha)
        if not rep or rep.witness * rep.witness != D.algebra.scalar(alpha):
            return False, f"value {alpha} of the Pfister form not represented"
        values += 1
    for idx in range(20):
        D = cases[idx % len(cases)]
        # no factor discriminant involves a, so a carries its own Frobenius coordinate
        fresh = D.ctx.gen("a")
        c = D.ctx.random_element(rng, 1, nonzero=True)
        alpha = fresh * c * c + D.ctx.random_element(rng, 1) ** 2
        if represents(D, alpha):
            return False, f"negative control {alpha} was represented"
        negatives += 1
    return True, (
        f"{squares} squares, {values} Pfister values represented; {negatives} negative controls rejected")


def c4_i_invariant(inst, scale=1):
    rng = random.Random(inst.seed + 4)
    F = FieldCtx(("x", "y", "z"))
    counts = {"isotropic": 0, "anisotropic": 0}
    # half the forms draw generators from sparse sums over a small pool, which
    # makes F^2-dependences (isotropic forms) common
    x, y, z = F.gens()
    pool = [F.one, x, y, z, x * y, x * z, y * z, x * x, y * y, z * z]
    for k in range(50):
        n = 1 + k % 3
        if k % 2:
            gens = []
            while len(gens) < n:
                g = sum(rng.sample(pool, rng.randint(1, 2)), F.zero)
                if g:
                    gens.append(g)
        else:
            gens = [F.random_element(rng, 2, nonzero=True) for _ in range(n)]
        p = PfisterForm(gens, F)
        i = i_invariant(p)
        found = derivative_isotropy_search(p.expansion.entries, F)
        if (i == 0) != (found is None):
            return False, f"disagreement on {p!r}: i = {i}, derivative search {found}"
        counts["anisotropic" if i == 0 else "isotropic"] += 1
    return True, f"50 forms agree ({counts['anisotropic']} anisotropic, {counts['isotropic']} isotropic)"


def c5_sqrt_extension(inst, scale=1):
    rng = random.Random(inst.seed + 5)
    runs = []
    for name, D, x in (("aniso4", inst.aniso4, inst.aniso4.v[0]),
                       ("iso4", inst.iso4, inst.iso4.v[0]),
                       ("iso8", inst.iso8, inst.iso8.v[0]),
                       ("aniso8", inst.aniso8, _random_nonscalar_s(inst.aniso8, rng))):
        before, after = cor_ia_check(D, x)
        runs.append(f"{name} {before}->{after}")
        if after != before + 1:
            return False, "; ".join(runs)
    return True, "; ".join(runs)


def c6_isotropy(inst, scale=1):
    parts = []
    for name, D in (("iso4", inst.iso4), ("iso8", inst.iso8)):
        x = D.v[0]
        z, r, _ = met_isotropy_vector(D, x)
        cent = span_of(D.algebra, centralizer([x], D.algebra))
        if D.involution(z) * z or not z or not cent.contains(z.data):
            return False, f"met vector fails on {name}"
        parts.append(f"{name} r={r}")
    instances = dict(inst.all(scale))
    for path in _bundled_scenarios():
        sc = load_scenario(path)
        instances[path.name] = sc.build(verify=False)
    for name, D in instances.items():
        w = isotropy_witness(D)
        if (w is not None) != (D.i_invariant > 0):
            return False, f"witness presence disagrees with i on {name}"
        if w is not None and D.involution(w) * w:
            return False, f"isotropy witness fails on {name}"
    return True, f"{', '.join(parts)}; witness presence matches i on {len(instances)} instances"


def c7_pos(inst, scale=1):
    rng = random.Random(inst.seed + 7)
    ks = []
    second = lemma3_pair(inst.iso8)[1]
    for idx in range(20):
        D = inst.iso4 if idx % 2 == 0 else inst.iso8
        source = second if idx % 4 == 1 else None
        x, y = random_pos_pair(D, rng, source)
        k, p = pos_iterate(D, x, y)
        sq = is_scalar(p * p)
        if D.involution(p) != p or sq is None or p * x != x * p:
            return False, f"postcondition fails for pair {idx}"
        ks.append(k)
    return True, f"20 pairs, k values {sorted(set(ks))}"


def c8_count(inst, scale=1):
    out = []
    for name, D in (("iso8", inst.iso8), ("iso16", inst.iso16)):
        x = count_witness(D)
        sq = is_scalar(x * x)
        ok = (D.involution(x) == x and sq is not None and bool(sq) and is_square(sq) is None
              and alt_plus_F_member(x, D.involution) is None)
        if not ok:
            return False, f"count witness fails on {name}"
        out.append(f"{name}: x^2 = {sq}")
    return True, "; ".join(out)


def c9_quaternions(inst, scale=1):
    rng = random.Random(inst.seed + 9)
    cases = [(inst.aniso4, inst.aniso4.v[0])]
    cases += [(inst.aniso4, _random_nonscalar_s(inst.aniso4, rng)) for _ in range(3)]
    cases += [(inst.iso8, inst.iso8.v[0])]
    cases += [(inst.iso8, _random_nonscalar_s(inst.iso8, rng)) for _ in range(3)]
    if scale >= 4:
        # sparse elements only: a dense element of S in degree 16 takes many minutes
        D = inst.iso16
        for text in ("v1 + a*v2*v3", "v1 + v2*v4 + c*v1*v3", "v2 + (a+1)*v1*v4"):
            cases.append((D, parse_element(D, text)))
    methods = []
    for D, x in cases:
        found = quat_subalgebra_containing(D, x, seed=inst.seed)
        sub, q = found.subalgebra, found.quat
        sub.check_closed()
        q.check_relations()
        if not all(sub.contains(D.involution(b)) for b in sub.basis) or not sub.contains(x):
            return False, "span not sigma-stable or misses x"
        methods.append(found.method)
    return True, f"{len(cases)} elements embedded ({', '.join(methods)})"


def c10_uniqueness(inst, scale=1):
    D = inst.aniso8
    if D.i_invariant != 0:
        return False, "instance is not anisotropic"
    F = D.ctx
    mu, lam = F.parse("a + c"), F.parse("e + 1")
    variants = []
    for mask in range(1 << D.n):
        choices = [f.quat.v * mu + f.algebra.scalar(lam) if mask >> i & 1 else f.quat.v
                   for i, f in enumerate(D.factors)]
        variants.append(build_inseparable(D, choices))
    same = all(S.same_as(variants[0]) for S in variants)
    S1, S2 = nonuniqueness_extend(inst.iso8)
    distinct = not S1.same_as(S2)
    detail = f"{len(variants)} variants identical: {same}; isotropic pair distinct: {distinct}"
    if scale >= 4:
        T1, T2 = nonuniqueness_extend(inst.iso16)
        distinct = distinct and not T1.same_as(T2)
        detail += f"; degree-16 pair distinct: {not T1.same_as(T2)}"
    return same and distinct, detail


# (number, title, function, time limit in seconds or None)
CRITERIA = [
    (1, "algebra/involution contracts", c1_contracts, 60),
    (2, "two inseparable subalgebras in degree 8", c2_two_subalgebras, 30),
    (3, "representation round trip", c3_represents, 60),
    (4, "i-invariant cross-validation", c4_i_invariant, 60),
    (5, "i-invariant after a square-root extension", c5_sqrt_extension, None),
    (6, "isotropy vectors", c6_isotropy, None),
    (7, "symmetric powers of xy", c7_pos, None),
    (8, "elements outside Alt + F", c8_count, None),
    (9, "quaternion subalgebras containing x", c9_quaternions, None),
    (10, "uniqueness and non-uniqueness of S", c10_uniqueness, None),
]


def _bundled_scenarios():
    root = resources.files("invol2") / "scenarios"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def run_criterion(number, inst, scale=1):
    _, title, fn, limit = next(c for c in CRITERIA if c[0] == number)
    return _timed(number, title, lambda: fn(inst, scale), limit)


def run_suite(seed=0, scale=1):
    inst = Instances(seed)
    return [run_criterion(c[0], inst, scale) for c in CRITERIA]


def summary_json(results):
    return json.dumps({"all_passed": all(r.passed for r in results),
                       "criteria": [asdict(r) for r in results]}, indent=2)
