"""Scenario files and replayable certificates.

A scenario is JSON::

    {"name": "...",
     "field": {"vars": ["a", "b"], "degree_budget": 64},
     "factors": [{"type": "quat", "alpha": "a", "beta": "b", "involution": "tau"},
                 {"type": "m2t"}],
     "seed": 0,
     "actions": [{"action": "build"}, {"action": "represents", "alpha": "b",
                                        "expect": "yes"}]}

Elements inside actions are expressions in the field variables and the
embedded factor bases ``u1, v1, w1, u2, ...`` (1-based), e.g.
``"v1 + (a+1)*v2*v3"``.  Certificates record each action's verdict and
its witnesses as ``{basis label: coefficient}`` maps, plus a SHA-256 of
the witnesses so a replay can spot tampering.
"""

from __future__ import annotations

import ast
import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .algebra import AlgElement, generated_subalgebra, is_scalar, is_unit
from .errors import (
    IterationCapExceeded,
    NotIsotropic,
    ParseError,
    SearchExhausted,
    VerificationError,
    WrongShape,
)
from .field import FieldCtx, is_square
from .forms import q_value_membership
from .involution import alt_plus_F_member, sym_plus_member
from .structure import (
    DecomposedAlgebra,
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
    verify_quaternion,
    split_factor,
)

ACTIONS = ("build", "check-inseparable", "lemma3", "pos", "met", "witness-isotropy",
           "represents", "cor-ia", "quat-embed", "count", "exm1")


@dataclass
class Scenario:
    name: str
    variables: list[str]
    factors: list[dict]
    actions: list[dict]
    seed: int = 0
    degree_budget: int | None = None
    raw: dict = field(default_factory=dict)

    def context(self) -> FieldCtx:
        return FieldCtx(self.variables, degree_budget=self.degree_budget)

    def build(self, verify: bool = True) -> DecomposedAlgebra:
        ctx = self.context()
        out = []
        for f in self.factors:
            if f["type"] == "m2t":
                out.append(split_factor(ctx))
            else:
                out.append(quaternion_factor(ctx.parse(f["alpha"]), ctx.parse(f["beta"]),
                                             f.get("involution", "tau"), ctx))
        return DecomposedAlgebra(out, verify=verify)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParseError(msg)


def parse_scenario(data: Any) -> Scenario:
    """Validate a decoded scenario document."""
    _require(isinstance(data, dict), "scenario must be a JSON object")
    fld = data.get("field")
    _require(isinstance(fld, dict) and isinstance(fld.get("vars"), list), "field.vars is required")
    variables = fld["vars"]
    _require(all(isinstance(v, str) and v.isidentifier() for v in variables),
             "field variables must be identifiers")
    _require(len(set(variables)) == len(variables), "duplicate field variables")
    factors = data.get("factors")
    _require(isinstance(factors, list) and factors, "factors must be a non-empty list")
    n = len(factors)
    reserved = {f"{c}{i}" for c in "uvw" for i in range(1, n + 1)}
    _require(not reserved & set(variables), "field variables clash with factor basis names")
    for f in factors:
        _require(isinstance(f, dict) and f.get("type") in ("quat", "m2t"),
                 "factor type must be 'quat' or 'm2t'")
        if f["type"] == "quat":
            _require(isinstance(f.get("alpha"), str) and isinstance(f.get("beta"), str),
                     "quat factors need alpha and beta strings")
            _require(f.get("involution", "tau") in ("tau", "gamma"), "involution must be tau or gamma")
    actions = data.get("actions", [])
    _require(isinstance(actions, list), "actions must be a list")
    for a in actions:
        _require(isinstance(a, dict) and a.get("action") in ACTIONS,
                 f"unknown action {a.get('action') if isinstance(a, dict) else a!r}")
    seed = data.get("seed", 0)
    _require(isinstance(seed, int), "seed must be an integer")
    budget = fld.get("degree_budget")
    _require(budget is None or isinstance(budget, int), "degree_budget must be an integer")
    return Scenario(data.get("name", "scenario"), variables, factors, actions, seed, budget, data)


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    return parse_scenario(data)


# -- element expressions ---------------------------------------------------------------


def _names(D):
    out = {}
    for i, f in enumerate(D.factors, start=1):
        for key in "uvw":
            out[f"{key}{i}"] = (i - 1, key)
    return out


def parse_element(D, text: str) -> AlgElement:
    """Evaluate an expression over the field variables and ``u_i, v_i, w_i``."""
    if not isinstance(text, str):
        raise ParseError(f"element must be a string, got {text!r}")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from None
    names = _names(D)
    cache = {}

    def basis(name):
        if name not in cache:
            i, key = names[name]
            cache[name] = D.embed(i, getattr(D.factors[i].quat, key))
        return cache[name]

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return D.ctx(node.value)
        if isinstance(node, ast.Name):
            if node.id in names:
                return basis(node.id)
            if node.id in D.ctx.variables:
                return D.ctx.gen(node.id)
            raise ParseError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            return ev(node.operand)
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError(f"exponent must be an integer literal in {text!r}")
                return left ** node.right.value
            if isinstance(node.op, (ast.Add, ast.Sub)):
                if isinstance(left, AlgElement) or isinstance(right, AlgElement):
                    return _as_elem(D, left) + _as_elem(D, right)
                return left + right
            if isinstance(node.op, ast.Mult):
                if isinstance(left, AlgElement) or isinstance(right, AlgElement):
                    return _as_elem(D, left) * _as_elem(D, right)
                return left * right
            if isinstance(node.op, ast.Div):
                if isinstance(right, AlgElement):
                    raise ParseError(f"division by an algebra element in {text!r}")
                return left * right.inverse() if isinstance(left, AlgElement) else left / right
        raise ParseError(f"unsupported syntax in {text!r}")

    return _as_elem(D, ev(tree.body))


def _as_elem(D, x):
    return x if isinstance(x, AlgElement) else D.algebra.scalar(x)


def element_from_json(D, data: dict) -> AlgElement:
    A = D.algebra
    try:
        return A.element({A.index(k): D.ctx.parse(v) for k, v in data.items()})
    except KeyError as exc:
        raise ParseError(f"unknown basis label {exc}") from None


def _json(x):
    return x.to_json() if isinstance(x, AlgElement) else x


def witness_hash(witnesses: dict) -> str:
    blob = json.dumps(witnesses, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# -- actions --------------------------------------------------------------------------


@dataclass
class Outcome:
    verdict: str
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)


def _default_x(D):
    """``v`` of the first factor whose ``v^2`` is not a square."""
    for i, f in enumerate(D.factors):
        if is_square(f.quat.beta) is None:
            return D.v[i]
    raise WrongShape("no factor with a non-square v^2")


def _act_build(D, params, rng):
    return Outcome("yes", details={
        "dim": D.algebra.dim,
        "associativity": D.verification,
        "i_invariant": D.i_invariant,
        "pfister": D.pfister.to_json(),
        "kind": D.involution.kind,
    })


def _act_check_inseparable(D, params, rng):
    gens = [parse_element(D, g) for g in params.get("generators", [])] or D.v
    S = generated_subalgebra(gens, D.algebra)
    flags, ok = check_inseparable(D, S)
    return Outcome("yes" if ok else "no",
                   witnesses={"generators": [g.to_json() for g in gens]},
                   details={"flags": flags, "dim": S.dim})


def _act_lemma3(D, params, rng):
    pair = lemma3_pair(D) if D.n == 3 else nonuniqueness_extend(D)
    distinct = not pair[0].same_as(pair[1])
    return Outcome("yes" if distinct else "no",
                   witnesses={"S1": [g.to_json() for g in pair[0].generators],
                              "S2": [g.to_json() for g in pair[1].generators]},
                   details={"flags": [S.flags for S in pair], "dims": [S.dim for S in pair]})


def _random_unit_in_s(D, rng):
    while True:
        x = D.s_element(D.random_s_coeffs(rng, 1))
        if x and is_unit(x)[0]:
            return x


def conjugator(D):
    """``g = u_i + (u_i + 1) v_m`` for a non-split ``i`` and a split ``m``:
    ``g`` is symmetric with ``g^2 = 1``, so ``x -> g x g`` preserves Sym+."""
    ms = D.m2t_indices()
    if not ms:
        return None
    others = [i for i in range(D.n) if i not in ms]
    if not others:
        return None
    u, v = D.u[others[0]], D.v[ms[0]]
    g = u + (u + D.algebra.one) * v
    if g * g != D.algebra.one or D.involution(g) != g:
        raise VerificationError("conjugator failed re-verification")
    return g


def _random_unit_in(S, rng):
    ctx = S.algebra.ctx
    while True:
        x = S.algebra.zero
        for b in S.basis:
            c = ctx.random_element(rng, 1)
            if c:
                x = x + c * b
        if x and is_unit(x)[0]:
            return x


def random_pos_pair(D, rng, source=None):
    """A unit ``x`` in Sym+ and a unit ``y`` in S.  ``x`` comes from the
    inseparable subalgebra ``source`` when given, otherwise from S moved by
    :func:`conjugator`."""
    if source is not None:
        x = _random_unit_in(source, rng)
    else:
        x = _random_unit_in_s(D, rng)
        g = conjugator(D)
        if g is not None:
            x = g * x * g
    return x, _random_unit_in_s(D, rng)


def _act_pos(D, params, rng):
    pairs = []
    if "x" in params:
        pairs.append((parse_element(D, params["x"]), parse_element(D, params.get("y", "1"))))
    count = params.get("pairs", 0 if pairs else 5)
    source = None
    if count and params.get("source") == "second-pair":
        source = (lemma3_pair(D) if D.n == 3 else nonuniqueness_extend(D))[1]
    for _ in range(count):
        pairs.append(random_pos_pair(D, rng, source))
    out = []
    for x, y in pairs:
        k, p = pos_iterate(D, x, y, params.get("cap"))
        out.append({"x": x.to_json(), "y": y.to_json(), "k": k, "power": p.to_json()})
    return Outcome("yes", witnesses={"pairs": out}, details={"ks": [o["k"] for o in out]})


def _act_met(D, params, rng):
    x = parse_element(D, params["x"]) if "x" in params else _default_x(D)
    try:
        z, r, y = met_isotropy_vector(D, x, params.get("cap"))
    except NotIsotropic:
        return Outcome("no", details={"reason": "anisotropic"})
    return Outcome("yes", witnesses={"x": x.to_json(), "y": y.to_json(), "z": z.to_json()},
                   details={"r": r})


def _act_witness_isotropy(D, params, rng):
    x = isotropy_witness(D)
    if x is None:
        return Outcome("no", details={"i_invariant": D.i_invariant})
    return Outcome("yes", witnesses={"x": x.to_json()}, details={"i_invariant": D.i_invariant})


def _act_represents(D, params, rng):
    alpha = D.ctx.parse(params["alpha"])
    rep = represents(D, alpha)
    if not rep:
        return Outcome("no", details={"alpha": str(alpha)})
    return Outcome("yes", witnesses={"x": rep.witness.to_json()}, details={"alpha": str(alpha)})


def _act_cor_ia(D, params, rng):
    x = parse_element(D, params["x"]) if "x" in params else _default_x(D)
    before, after = cor_ia_check(D, x)
    return Outcome("yes", witnesses={"x": x.to_json()},
                   details={"i_before": before, "i_after": after})


def _act_quat_embed(D, params, rng):
    x = parse_element(D, params["x"]) if "x" in params else _default_x(D)
    try:
        found = quat_subalgebra_containing(D, x, seed=params.get("seed", 0),
                                           max_trials=params.get("max_trials", 10_000))
    except SearchExhausted as exc:
        return Outcome("no", witnesses={"x": x.to_json()}, details={"reason": str(exc)})
    q = found.quat
    return Outcome("yes", witnesses={"x": x.to_json(), "u": q.u.to_json(), "v": q.v.to_json()},
                   details={"method": found.method, "alpha": str(q.alpha), "beta": str(q.beta)})


def _act_count(D, params, rng):
    x = count_witness(D)
    return Outcome("yes", witnesses={"x": x.to_json()},
                   details={"square": str(is_scalar(x * x))})


def _act_exm1(D, params, rng):
    report = exm1_partial(verify=params.get("verify", True))
    ok = all(report["checks"].values())
    checks = {k: v if isinstance(v, (bool, str)) else bool(v) for k, v in report["checks"].items()}
    return Outcome("yes" if ok else "no",
                   witnesses={"one_v": report["objects"]["one_v"].to_json()},
                   details={"dims": report["dims"], "checks": checks,
                            "unverified": report["unverified"]})


HANDLERS: dict[str, Callable] = {
    "build": _act_build,
    "check-inseparable": _act_check_inseparable,
    "lemma3": _act_lemma3,
    "pos": _act_pos,
    "met": _act_met,
    "witness-isotropy": _act_witness_isotropy,
    "represents": _act_represents,
    "cor-ia": _act_cor_ia,
    "quat-embed": _act_quat_embed,
    "count": _act_count,
    "exm1": _act_exm1,
}


def run_scenario(sc: Scenario, seed: int | None = None, timings: bool = True) -> dict:
    """Execute every action in order and return the certificate."""
    seed = sc.seed if seed is None else seed
    D = sc.build()
    results = []
    for idx, spec in enumerate(sc.actions):
        name = spec["action"]
        params = {k: v for k, v in spec.items() if k not in ("action", "expect")}
        rng = random.Random(f"{seed}:{idx}")
        t0 = time.perf_counter()
        out = HANDLERS[name](D, params, rng)
        entry = {
            "index": idx,
            "action": name,
            "params": params,
            "verdict": out.verdict,
            "expected": spec.get("expect", "yes"),
            "witnesses": out.witnesses,
            "details": out.details,
            "hash": witness_hash(out.witnesses),
        }
        entry["match"] = entry["verdict"] == entry["expected"]
        if timings:
            entry["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(entry)
    return {
        "scenario": sc.raw,
        "library_version": __version__,
        "seed": seed,
        "results": results,
        "all_match": all(r["match"] for r in results),
    }


def strip_timings(cert: dict) -> dict:
    out = dict(cert)
    out["results"] = [{k: v for k, v in r.items() if k != "seconds"} for r in cert["results"]]
    return out


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- replay ------------------------------------------------------------------------------


def _rc_check_inseparable(D, w, r):
    gens = [element_from_json(D, g) for g in w["generators"]]
    S = generated_subalgebra(gens, D.algebra)
    _, ok = check_inseparable(D, S)
    return (("yes" if ok else "no") == r["verdict"]) and S.dim == r["details"]["dim"]


def _rc_lemma3(D, w, r):
    subs = []
    for key in ("S1", "S2"):
        S = generated_subalgebra([element_from_json(D, g) for g in w[key]], D.algebra)
        if not check_inseparable(D, S)[1]:
            return False
        subs.append(S)
    return (not subs[0].same_as(subs[1])) == (r["verdict"] == "yes")


def _rc_pos(D, w, r):
    for pair in w["pairs"]:
        x, y = element_from_json(D, pair["x"]), element_from_json(D, pair["y"])
        p = element_from_json(D, pair["power"])
        k = pair["k"]
        xy = x * y
        q = D.algebra.one
        for j in range(1, k + 1):
            q = q * xy
            if j < k and sym_plus_member(q, D.involution).ok:
                return False
        if q != p or not sym_plus_member(p, D.involution).ok or p * x != x * p:
            return False
    return True


def _rc_met(D, w, r):
    if r["verdict"] == "no":
        return D.i_invariant == 0
    x, z = element_from_json(D, w["x"]), element_from_json(D, w["z"])
    return bool(z) and z * x == x * z and not D.involution(z) * z


def _rc_witness_isotropy(D, w, r):
    if r["verdict"] == "no":
        return D.i_invariant == 0
    x = element_from_json(D, w["x"])
    return bool(x) and not D.involution(x) * x


def _rc_represents(D, w, r):
    alpha = D.ctx.parse(r["details"]["alpha"])
    if r["verdict"] == "no":
        target = q_value_membership(D.value_form.expansion, alpha) if alpha else None
        return target is None and (bool(alpha) or D.i_invariant == 0)
    x = element_from_json(D, w["x"])
    return bool(x) and D.involution(x) == x and x * x == D.algebra.scalar(alpha)


def _rc_cor_ia(D, w, r):
    before, after = cor_ia_check(D, element_from_json(D, w["x"]))
    return [before, after] == [r["details"]["i_before"], r["details"]["i_after"]]


def _rc_quat_embed(D, w, r):
    if r["verdict"] == "no":
        return True
    x, u, v = (element_from_json(D, w[k]) for k in ("x", "u", "v"))
    lam = is_scalar(v + x)
    if lam is None:
        return False
    return verify_quaternion(D, x, v, u, "recheck", lam) is not None


def _rc_count(D, w, r):
    x = element_from_json(D, w["x"])
    sq = is_scalar(x * x)
    return (D.involution(x) == x and sq is not None and bool(sq) and is_square(sq) is None
            and alt_plus_F_member(x, D.involution) is None)


def _rc_exm1(D, w, r):
    report = exm1_partial(verify=r["params"].get("verify", True))
    return (report["objects"]["one_v"].to_json() == w["one_v"]
            and all(report["checks"].values()) == (r["verdict"] == "yes"))


RECHECKS: dict[str, Callable] = {
    "build": lambda D, w, r: r["details"]["i_invariant"] == D.i_invariant,
    "check-inseparable": _rc_check_inseparable,
    "lemma3": _rc_lemma3,
    "pos": _rc_pos,
    "met": _rc_met,
    "witness-isotropy": _rc_witness_isotropy,
    "represents": _rc_represents,
    "cor-ia": _rc_cor_ia,
    "quat-embed": _rc_quat_embed,
    "count": _rc_count,
    "exm1": _rc_exm1,
}


def recheck(cert: dict) -> list[dict]:
    """Re-verify every witness of a certificate; one report per action."""
    sc = parse_scenario(cert["scenario"])
    D = sc.build()
    reports = []
    for r in cert["results"]:
        w = r["witnesses"]
        ok = witness_hash(w) == r["hash"]
        reason = "" if ok else "hash mismatch"
        if ok:
            try:
                ok = bool(RECHECKS[r["action"]](D, w, r))
                reason = "" if ok else "witness failed"
            except (VerificationError, IterationCapExceeded, WrongShape, ValueError) as exc:
                ok, reason = False, f"{type(exc).__name__}: {exc}"
        reports.append({"index": r["index"], "action": r["action"], "ok": ok, "reason": reason})
    return reports
