"""Named checks of the structural statements, run on configurable samples.

Each check takes a parameter dict (defaults come from ``samples.json``) and
returns a :class:`Report`.  Check names follow the result they exercise
(``lemma4.cases``, ``prop51.parity``, ...); ``TRACE`` maps each covered
result to its checks.
"""

from __future__ import annotations

import fnmatch
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import linalg
from .gmod import (
    Inconclusive,
    _generalized_submodule,
    _rational_roots,
    casimir_matrix,
    composition_factors,
    factor_casimirs,
    gl2_dense,
    gl2_simple,
    gl2_verma,
    translate,
)
from .modules import (
    WeightModule,
    find_isomorphism,
    intertwiners,
    parity_flip,
    restrict_window,
    subspace_module,
    transpose_twist,
)
from .qmod import (
    _closure,
    annihilation_check,
    clifford,
    highest_weight_simple,
    induce,
    is_simple_on_window,
    restrict,
    simple_top,
    singular_vectors,
    verma_super,
)
from .scalars import ALPHA, Weight, format_scalar, make_scalar_context, parse_weight, to_fraction
from .subalg import (
    NotAtypical,
    cartan_top_simple,
    check_atypical_split,
    restrict_sq,
    sq_closure_defects,
    submodule_search,
)
from .superalg import (
    SuperElement,
    bracket,
    bracket_table,
    casimir_element,
    find_anticenter,
    format_element,
    generator,
    matrix_supercommutator,
    monomials_up_to_degree,
)
from .twist import (
    LocalizedElement,
    conjugate_by_f,
    dense_family_scan,
    f_map_intertwines,
    localize,
    theta,
    twist_module,
)

__all__ = ["Report", "Check", "REGISTRY", "TRACE", "IN_SCOPE", "UnknownCheck", "run_check", "run_suite", "load_samples"]


class UnknownCheck(KeyError):
    pass


@dataclass
class Report:
    check: str
    params: dict
    verdict: str
    witnesses: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def to_json(self, timing: bool = True) -> dict:
        out = {"check": self.check, "params": self.params, "verdict": self.verdict, "witnesses": self.witnesses}
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=1)


@dataclass
class Check:
    name: str
    anchor: str
    claim: str
    defaults: dict
    fn: object


REGISTRY: dict[str, Check] = {}


def load_samples() -> dict:
    return json.loads(resources.files("q2").joinpath("samples.json").read_text())


def _sample_weights(kind=None):
    ws = load_samples()["weights"]
    if kind is None:
        return [w for group in ws.values() for w in group]
    return list(ws[kind])


def check(name: str, anchor: str, claim: str, **defaults):
    def deco(fn):
        REGISTRY[name] = Check(name, anchor, claim, defaults, fn)
        return fn

    return deco


# -- small helpers ----------------------------------------------------------------


def _w(text) -> Weight:
    return text if isinstance(text, Weight) else parse_weight(text)


def _s(x):
    if isinstance(x, Fraction):
        return str(x)
    return format_scalar(x) if not isinstance(x, (str, int, bool, type(None))) else x


def _factor_key(label: dict):
    return tuple(sorted((k, str(v)) for k, v in label.items()))


def _factor_counter(factors) -> Counter:
    c = Counter()
    for label, mult in factors:
        c[_factor_key(label)] += mult
    return c


def _factor_summary(factors):
    return [
        {"casimir": label["casimir"], "kind": label["kind"], "top": label.get("top"), "dim": label.get("dim"), "mult": mult}
        for label, mult in factors
    ]


def _dims_table(m: WeightModule):
    return {str(m.weight(k)): list(m.dims[k]) for k in m.krange() if m.dim(k)}


def _lemma4_branch(lam: Weight) -> str:
    if lam.is_zero():
        return "i"
    if not lam.is_typical():
        return "ii"
    if lam.diff == 1:
        return "iii"
    if lam.is_dominant():
        return "iv"
    return "v"


def _dense_simple(lam: Weight, z, depth: int, window: int):
    """The dense supermodule obtained by twisting the localization of ``L(V(lam))``."""
    lmod = highest_weight_simple(lam, depth)
    base = localize(lmod, window=window + 3)
    return restrict_window(twist_module(base, to_fraction(z)), -window, window)


def _casimir_scalar(m: WeightModule, k: int):
    c = casimir_matrix(m, k)
    if c is None or not c:
        return None
    x = c[0][0]
    if not linalg.is_zero(linalg.sub(c, [[x if i == j else 0 for j in range(len(c))] for i in range(len(c))])):
        return None
    return x


# -- algebra ------------------------------------------------------------------------


@check("algebra.brackets", "algebra", "structure constants agree with 4x4 matrices and satisfy super-Jacobi")
def _algebra_brackets(p):
    table = bracket_table()
    mismatches = [(a, b) for a in range(8) for b in range(8) if table[a, b] != matrix_supercommutator(a, b)]
    gens = [generator(g) for g in ("F", "H1", "H2", "E", "bF", "bH1", "bH2", "bE")]
    jac = 0
    for x in gens:
        for y in gens:
            for z in gens:
                px, py = x.parity(), y.parity()
                lhs = bracket(x, bracket(y, z))
                rhs = bracket(bracket(x, y), z) + bracket(y, bracket(x, z)) * (-1) ** (px * py)
                if lhs != rhs:
                    jac += 1
    return not mismatches and not jac, {"pairs": 64, "mismatches": len(mismatches), "jacobi_triples": 512, "jacobi_failures": jac}


@check("algebra.pbw", "algebra", "PBW monomials of degree <= 2 number 41", max_degree=2)
def _algebra_pbw(p):
    n = len(monomials_up_to_degree(int(p["max_degree"])))
    # (1+t)^4/(1-t)^4 truncated
    expected = {0: 1, 1: 9, 2: 41, 3: 129}[int(p["max_degree"])]
    return n == expected, {"count": n, "expected": expected}


@check("theta.laws", "theta", "theta_z composes additively and matches conjugation by F^z at integers", pairs=[["1/3", "1/4"], ["-2/5", "3/7"], ["1/2", "1/2"], ["5/3", "-1/6"], ["-3/4", "2/9"]])
def _theta_laws(p):
    gens = ("F", "H1", "H2", "E", "bF", "bH1", "bH2", "bE")
    bad = []
    for a, b in p["pairs"]:
        za, zb = to_fraction(a), to_fraction(b)
        for g in gens:
            if theta(za, theta(zb, generator(g))) != theta(za + zb, generator(g)):
                bad.append([a, b, g])
    conj_bad = []
    for z in (-2, -1, 0, 1, 2):
        for g in gens:
            if theta(z, generator(g)) != conjugate_by_f(z, generator(g)):
                conj_bad.append([z, g])
    return not bad and not conj_bad, {"composition_failures": bad, "conjugation_failures": conj_bad}


# -- Clifford modules and highest weight theory ----------------------------------------


@check("lemma1.ii", "lemma1", "V(lam) = Pi V(lam) exactly when lam1*lam2 = 0 and lam != 0", weights=["1,0", "0,-2", "1,1", "2,-2", "0,0"])
def _lemma1(p):
    rows = {}
    ok = True
    for text in p["weights"]:
        lam = _w(text)
        v = clifford(lam)
        maps = intertwiners(v, parity_flip(v))
        iso = find_isomorphism(maps) is not None
        expected = lam.l1 * lam.l2 == 0 and not lam.is_zero()
        rows[str(lam)] = {"iso": iso, "expected": expected, "dims": list(v.dims[0])}
        ok &= iso == expected
    return ok, rows


@check("lemmapar.parity", "lemmapar", "H1bar + H2bar identifies even and odd parts for typical weights", weights=None, depth=6)
def _lemmapar(p):
    rows = {}
    ok = True
    u = generator("bH1") + generator("bH2")
    for text in p["weights"] or _sample_weights():
        lam = _w(text)
        if lam.is_zero():
            continue
        m = verma_super(clifford(lam), int(p["depth"]))
        row = {}
        if lam.is_typical():
            sq_ok = True
            for k in m.krange():
                a = m.element_matrix(u, k)[k]
                a2 = linalg.matmul(a, a, m.dim(k))
                if not linalg.is_zero(linalg.sub(a2, linalg.scale(linalg.identity(m.dim(k)), lam.charge))):
                    sq_ok = False
                if linalg.rank(a) < m.dim(k):
                    sq_ok = False
            row["squares_to_charge_and_invertible"] = sq_ok
            ok &= sq_ok
        even, odd = restrict(m, "evenPart"), restrict(parity_flip(m), "evenPart")
        maps = intertwiners(even, odd)
        row["even_odd_iso"] = find_isomorphism(maps) is not None
        ok &= row["even_odd_iso"]
        rows[str(lam)] = row
    return ok, rows


@check("lemma3.char", "lemma3", "the even part of M(V(lam)) has the character of M(lam) + M(lam - alpha)", weight="5/2,1/3", depth=10)
def _lemma3(p):
    lam, depth = _w(p["weight"]), int(p["depth"])
    m = verma_super(clifford(lam), depth)
    even = restrict(m, "evenPart")
    a, b = gl2_verma(lam, depth), gl2_verma(lam - ALPHA, depth - 1)
    mismatch = []
    for k in even.krange():
        w = even.weight(k)
        want = 0
        for g in (a, b):
            kk = g.index_of(w)
            if kk is not None and g.kmin <= kk <= g.kmax:
                want += g.dim(kk)
        if even.dim(k) != want:
            mismatch.append(str(w))
    zero = verma_super(clifford(Weight(0, 0)), depth)
    z_even = restrict(zero, "evenPart")
    z_odd = restrict(parity_flip(zero), "evenPart")
    iso0 = find_isomorphism(intertwiners(z_even, gl2_verma(Weight(0, 0), depth))) is not None
    iso1 = find_isomorphism(intertwiners(z_odd, gl2_verma(-ALPHA, depth - 1))) is not None
    w = {"character_mismatches": mismatch, "zero_even_is_M(0)": iso0, "zero_odd_is_M(-alpha)": iso1, "depth": depth}
    return not mismatch and iso0 and iso1, w


def _expected_even_factors(lam: Weight, branch: str, depth: int):
    if branch == "i":
        return composition_factors(gl2_simple(lam, depth))
    if branch in ("ii", "iii"):
        return composition_factors(gl2_simple(lam, depth))
    if branch == "iv":
        return composition_factors(gl2_simple(lam, depth)) + composition_factors(gl2_simple(lam - ALPHA, depth - 1))
    return composition_factors(gl2_verma(lam, depth)) + composition_factors(gl2_verma(lam - ALPHA, depth - 1))


@check("lemma4.cases", "lemma4", "shape of the even part of L(V(lam)) in each of the five cases", weights=None, depth=10)
def _lemma4(p):
    depth = int(p["depth"])
    rows = {}
    ok = True
    for text in p["weights"] or _sample_weights():
        lam = _w(text)
        branch = _lemma4_branch(lam)
        verma = verma_super(clifford(lam), depth)
        top = simple_top(verma)
        got = composition_factors(restrict(top, "evenPart"))
        want = _expected_even_factors(lam, branch, depth)
        match = _factor_counter(got) == _factor_counter(want)
        row = {"branch": branch, "dims": _dims_table(top), "total_dim": top.total_dim() if top.closed_bottom else None, "even_factors": _factor_summary(got), "match": match}
        if branch == "i":
            row["trivial"] = top.total_dim() == 1 and top.dims[top.kmax] == (1, 0)
            match &= row["trivial"]
        if branch == "v":
            row["L_equals_M"] = top.dims == verma.dims
            match &= row["L_equals_M"]
        ok &= match
        rows[str(lam)] = row
    return ok, rows


@check("prop5.elements", "prop5", "central annihilating elements of L(V(lam))", weights=None, depth=8)
def _prop5_elements(p):
    depth = int(p["depth"])
    c = casimir_element()
    one = SuperElement({(0,) * 8: Fraction(1)})
    rows = {}
    ok = True
    for text in p["weights"] or _sample_weights():
        lam = _w(text)
        lmod = highest_weight_simple(lam, depth)
        row = {}
        u = generator("H1") + generator("H2") - one * lam.charge
        row["charge"] = annihilation_check(u, lmod)[0]
        d = lam.diff
        c_plus = c - one * (d + 1) ** 2
        c_minus = c - one * (d - 1) ** 2
        if lam.is_typical():
            row["casimir_product"] = annihilation_check(c_plus * c_minus, lmod)[0]
            single = annihilation_check(c_plus, lmod)[0]
            row["single_factor"] = single
            if lam.is_regular() and d != 1:
                row["single_factor_expected"] = False
            elif d == 1:
                # the even part is L(lam) alone, with Casimir (d+1)^2
                row["single_factor_expected"] = True
            ok &= row["casimir_product"]
            if "single_factor_expected" in row:
                ok &= single == row["single_factor_expected"]
        else:
            row["casimir"] = annihilation_check(c_plus, lmod)[0]
            ok &= row["casimir"]
        ok &= row["charge"]
        rows[str(lam)] = row
    return ok, rows


@check("prop5.theta-construction", "prop5", "twisting the localized atypical module lands on the annihilator of L(V(mu))", weight="1/3,-1/3", z="-10/3", depth=12, window=8)
def _prop5_theta(p):
    lam = _w(p["weight"])
    z = to_fraction(p["z"])
    mu = Weight(lam.l2 - 1, lam.l1 + 1)
    depth, window = int(p["depth"]), int(p["window"])
    lmod = highest_weight_simple(lam, depth)
    base = localize(lmod, window=window + 3)
    tw = restrict_window(twist_module(base, z), -window, window)
    charge_zero = True
    casimirs = set()
    full = restrict(tw, "fullRes")
    for k in full.interior():
        h = linalg.add(tw.action("H1", k), tw.action("H2", k))
        if not linalg.is_zero(h):
            charge_zero = False
        casimirs.add(_s(_casimir_scalar(full, k)))
    target = (mu.diff + 1) ** 2
    w = {"mu": str(mu), "charge_zero": charge_zero, "casimir": sorted(str(x) for x in casimirs), "expected_casimir": str(target), "twisted_weight_line": str(tw.base)}
    ok = charge_zero and casimirs == {str(target)}
    # The highest weight piece sits where the weights pass through mu.
    shift = (mu - lam).l1
    hw = restrict_window(twist_module(base, shift), -window, window)
    sv = singular_vectors(hw)
    tops = [str(hw.weight(k)) for k, v in sorted(sv.items()) if v]
    w["highest_weight_z"] = str(shift)
    w["highest_weights"] = tops
    if tops:
        k0 = max(k for k, v in sv.items() if v)
        span = _closure(hw, {k0: sv[k0]}, list(hw.interior()))
        sub = subspace_module(hw, {k: span.get(k, []) for k in hw.interior()}, kmin=list(hw.interior())[0], kmax=k0).replace(closed_top=True)
        even = restrict(sub, "evenPart")
        maps = intertwiners(even, gl2_verma(mu, window))
        w["even_part_is_L(mu)"] = find_isomorphism(maps) is not None
        ok = ok and w["even_part_is_L(mu)"] and tops == [str(mu)]
    else:
        ok = False
    return ok, w


# -- induced modules and finite length ------------------------------------------------------


@check("prop7.ind-embedding", "prop7", "a simple supermodule or its parity flip embeds into Ind of a simple gl2 module", weight="2,1", depth=6)
def _prop7(p):
    lam = _w(p["weight"])
    n = highest_weight_simple(lam, int(p["depth"]))
    lg = gl2_simple(lam, int(p["depth"]))
    ind = induce(lg)
    out = {}
    ok = False
    for name, cand in (("N", n), ("PiN", parity_flip(n))):
        maps = intertwiners(cand, ind)
        injective = any(all(linalg.rank(m) == len(m[0]) for m in phi.matrices.values() if m and m[0]) for phi in maps)
        out[name] = {"maps": len(maps), "injective": injective}
        ok |= injective
    out["ind_dims"] = _dims_table(ind)
    return ok, out


@check("prop8.finite-length", "prop8", "Res of induced modules has finitely many factors, stable in the window", casimir="16/9", coset="0", charge="17/6", window=10)
def _prop8(p):
    d = gl2_dense(to_fraction(p["charge"]), to_fraction(p["casimir"]), to_fraction(p["coset"]), int(p["window"]))
    ind = induce(d)
    fac = composition_factors(restrict(ind, "fullRes"))
    count = sum(m for _, m in fac)
    return count == 16, {"factors": count, "casimirs": [str(x) for x in factor_casimirs(fac)], "note": "16 = dim of the exterior algebra on the odd part"}


@check("lemma9.finite", "lemma9", "L(V(lam)) is finite dimensional exactly for zero or dominant lam", weights=None, depth=10)
def _lemma9(p):
    rows = {}
    ok = True
    for text in p["weights"] or _sample_weights():
        lam = _w(text)
        top = highest_weight_simple(lam, int(p["depth"]))
        finite = top.closed_bottom
        expected = lam.is_zero() or lam.is_dominant()
        rows[str(lam)] = {"finite": finite, "expected": expected, "dim": top.total_dim() if finite else None}
        ok &= finite == expected
    return ok, rows


# -- restriction structure -------------------------------------------------------------------


@check("prop10.restriction", "prop10", "atypical simples restrict to L + L (and Res to L)", weight="1/3,-1/3", z="1/2", depth=12, window=8)
def _prop10(p):
    lam = _w(p["weight"])
    depth, window = int(p["depth"]), int(p["window"])
    target = str((lam.diff + 1) ** 2)
    out = {}
    ok = True
    lmod = highest_weight_simple(lam, depth)
    dense = _dense_simple(lam, p["z"], depth, window)
    for name, n in (("highest", lmod), ("dense", dense)):
        full = composition_factors(restrict(n, "fullRes"))
        even = composition_factors(restrict(n, "evenPart"))
        fc = factor_casimirs(full)
        row = {"fullRes": [str(x) for x in fc], "evenPart": [str(x) for x in factor_casimirs(even)]}
        row["pass"] = len(fc) == 2 and all(str(x) == target for x in fc) and sum(m for _, m in even) == 1
        ok &= row["pass"]
        out[name] = row
    out["expected_casimir"] = target
    return ok, out


@check("lemma111.element", "lemma111", "H1bar - H2bar kills one parity part of the atypical simple", weight="1/3,-1/3", depth=10)
def _lemma111(p):
    lam = _w(p["weight"])
    ctx = make_scalar_context(lam, couple_roots=True)
    s1, s2, i = ctx.sqrt1(), ctx.sqrt2(), ctx.i()
    minus = s1 - i * s2
    plus = s1 + i * s2
    branch = "J" if minus else "J'"
    lmod = highest_weight_simple(lam, int(p["depth"]))
    u = generator("bH1") - generator("bH2")
    even = annihilation_check(u, lmod, on="even")[0]
    odd = annihilation_check(u, lmod, on="odd")[0]
    expected = "even" if minus else "odd"
    got = "even" if even and not odd else ("odd" if odd and not even else "none")
    w = {"sqrt_t - i sqrt(-t)": _s(minus), "sqrt_t + i sqrt(-t)": _s(plus), "branch": branch, "killed_part": got, "expected": expected}
    return got == expected, w


def _restriction_shape(lam, z, depth, window):
    n = _dense_simple(lam, z, depth, window)
    full = composition_factors(restrict(n, "fullRes"))
    even = composition_factors(restrict(n, "evenPart"))
    return n, full, even


@check("prop21.restriction", "prop21", "typical regular nonintegral: Res N = L + TL + L + TL", weight="5/2,1/3", z="1/2", depth=14, window=7)
def _prop21(p):
    return _four_factor(p)


@check("prop31.restriction", "prop31", "typical regular integral: Res N = L + TL + L + TL", weight="-1,2", z="1/2", depth=14, window=7)
def _prop31(p):
    return _four_factor(p)


@check("prop32.restriction", "prop32", "typical with lam1 - lam2 = -1: Res N = L + TL + L + TL, T onto the wall", weight="0,1", z="1/2", depth=14, window=7)
def _prop32(p):
    return _four_factor(p, onto_wall=True)


def _four_factor(p, onto_wall: bool = False):
    lam = _w(p["weight"])
    d = lam.diff
    n, full, even = _restriction_shape(lam, p["z"], int(p["depth"]), int(p["window"]))
    fc = factor_casimirs(full)
    expected = sorted([(d + 1) ** 2] * 2 + [(d - 1) ** 2] * 2)
    w = {
        "fullRes_casimirs": [str(x) for x in fc],
        "expected": [str(x) for x in expected],
        "fullRes_kinds": sorted(l["kind"] for l, m in full for _ in range(m)),
        "evenPart_casimirs": [str(x) for x in factor_casimirs(even)],
        "weight_space": list(n.dims[0]),
    }
    ok = fc == expected and len(factor_casimirs(even)) == 2
    # one Casimir part is the translate of the other; on the wall the
    # simple one is the translate onto it
    src, dst = ((d - 1) ** 2, (d + 1) ** 2) if onto_wall else ((d + 1) ** 2, (d - 1) ** 2)
    e = restrict(n, "evenPart")
    try:
        part = _generalized_submodule(e, src, list(e.krange()))
        moved = translate(part, dst)
        tf = composition_factors(moved)
        w["translate_factors"] = [str(x) for x in factor_casimirs(tf)]
        ok = ok and len(tf) == 1 and tf[0][1] == 1
    except Inconclusive as exc:
        w["translate_factors"] = f"inconclusive: {exc}"
        ok = False
    return ok, w


@check("remark33.wall", "remark33", "translation to the wall keeps simples simple and back-and-forth doubles", charge="1", casimir="4", coset="1/2", window=12)
def _remark33(p):
    d = gl2_dense(to_fraction(p["charge"]), to_fraction(p["casimir"]), to_fraction(p["coset"]), int(p["window"]))
    wall = translate(d, 0)
    f_wall = composition_factors(wall)
    back = translate(wall, to_fraction(p["casimir"]))
    f_back = composition_factors(back)
    w = {"to_wall": _factor_summary(f_wall), "back": _factor_summary(f_back)}
    simple_wall = sum(m for _, m in f_wall) == 1
    doubled = len(f_back) == 1 and f_back[0][1] == 2 and f_back[0][0]["casimir"] == str(to_fraction(p["casimir"]))
    return simple_wall and doubled, w


@check("prop41.rough-structure", "prop41", "singular typical: Res N = Y + Y with simple socle and top both L", weight="1,1", z="1/2", depth=14, window=7, compare_highest=True)
def _prop41(p):
    lam = _w(p["weight"])
    target = (lam.diff + 1) ** 2
    n = _dense_simple(lam, p["z"], int(p["depth"]), int(p["window"]))
    out = {"dense": _rough(restrict(n, "evenPart"), target)}
    ok = out["dense"]["socle_top_match"]
    full = composition_factors(restrict(n, "fullRes"))
    out["fullRes_factors"] = sum(m for _, m in full)
    if p.get("compare_highest"):
        hw = highest_weight_simple(lam, int(p["depth"]))
        out["highest"] = _rough(restrict(hw, "evenPart"), target)
    return ok, out


def _rough(y: WeightModule, target):
    """Socle, top and middle homology of ``y`` via ``c - target``."""
    ks = list(y.interior())
    nil = {}
    for k in ks:
        c = casimir_matrix(y, k)
        nil[k] = [[c[i][j] - (target if i == j else 0) for j in range(len(c))] for i in range(len(c))]
    nonzero = any(not linalg.is_zero(m) for m in nil.values())
    square_zero = all(linalg.is_zero(linalg.matmul(m, m, len(m))) for m in nil.values() if m)
    image = {k: linalg.rref(linalg.transpose(m))[0] if m else [] for k, m in nil.items()}
    kernel = {k: linalg.nullspace(m, len(m)) if m else [] for k, m in nil.items()}
    socle = subspace_module(y, image, kmin=ks[0], kmax=ks[-1]).replace(closed_top=y.closed_top and ks[-1] == y.kmax)
    ker = subspace_module(y, kernel, kmin=ks[0], kmax=ks[-1]).replace(closed_top=socle.closed_top)
    f_socle = composition_factors(socle)
    homology = {str(y.weight(k)): len(kernel[k]) - len(image[k]) for k in ks if len(kernel[k]) != len(image[k])}
    top_quotient = {k: len(linalg.identity(y.dim(k))) - len(kernel[k]) for k in ks}
    f_ker = composition_factors(ker)
    socle_simple = sum(m for _, m in f_socle) == 1
    homology_factors = [l for l, m in f_ker for _ in range(m) if l not in [x for x, _ in f_socle]]
    return {
        "nilpotent_nonzero": nonzero,
        "square_zero": square_zero,
        "socle": _factor_summary(f_socle),
        "top_dims_match_socle": all(top_quotient[k] == len(image[k]) for k in ks),
        "homology_dims": homology,
        "homology_factors": _factor_summary([(l, 1) for l in homology_factors]),
        "socle_top_match": nonzero and square_zero and socle_simple and all(top_quotient[k] == len(image[k]) for k in ks),
    }


# -- parity, weight modules -------------------------------------------------------------


@check("prop51.parity", "prop51", "strongly typical and atypical simples differ from their parity flips; other typical ones do not", strongly_typical="2,1", typical="1,0", atypical="1/3,-1/3", depth=6, max_degree=4)
def _prop51(p):
    found = None
    for deg in range(1, int(p["max_degree"]) + 3):
        basis = find_anticenter(deg)
        if basis:
            found = (deg, basis[0])
            break
    w = {}
    if found is None:
        return False, {"anticenter": "not found up to degree " + str(int(p["max_degree"]) + 2)}
    deg, t = found
    w["anticenter_degree"] = deg
    w["anticenter"] = format_element(t)
    ok = deg <= int(p["max_degree"])
    depth = int(p["depth"])
    n = highest_weight_simple(_w(p["strongly_typical"]), depth)
    k = n.kmax
    tm = n.element_matrix(t, k)[k]
    e = n.dims[k][0]
    tau = tm[0][0]
    scalar_even = all(tm[i][j] == (tau if i == j else 0) for i in range(e) for j in range(e))
    scalar_odd = all(tm[i][j] == (-tau if i == j else 0) for i in range(e, n.dim(k)) for j in range(e, n.dim(k)))
    w["tau"] = _s(tau)
    w["tau_even_minus_tau_odd"] = scalar_even and scalar_odd
    w["strongly_typical_iso"] = bool(intertwiners(n, parity_flip(n)))
    m = highest_weight_simple(_w(p["typical"]), depth)
    w["typical_iso"] = find_isomorphism(intertwiners(m, parity_flip(m))) is not None
    a = highest_weight_simple(_w(p["atypical"]), depth)
    w["atypical_iso"] = bool(intertwiners(a, parity_flip(a)))
    ok = ok and bool(tau) and scalar_even and scalar_odd and not w["strongly_typical_iso"] and w["typical_iso"] and not w["atypical_iso"]
    return ok, w


def _shape(n: WeightModule) -> str:
    if n.closed_top and n.closed_bottom:
        return "finite"
    if n.closed_top:
        return "highest"
    if n.closed_bottom:
        return "lowest"
    return "dense"


def _e_det_roots(n: WeightModule, k: int):
    """Values of z for which theta_z(E) fails to be injective on the k-space."""
    dim = n.dim(k)
    deg = 2 * dim
    pts = list(range(deg + 2))
    vals = []
    for j in pts:
        e = twist_module(n, j).action("E", k)
        vals.append(linalg.charpoly(e)[0] if dim else Fraction(1))
    vand = [[Fraction(j) ** q for q in range(deg + 1)] for j in pts[:-1]]
    coef = linalg.matvec(linalg.inverse(vand), vals[:-1])
    extra = sum(c * Fraction(pts[-1]) ** q for q, c in enumerate(coef))
    if extra != vals[-1]:
        raise Inconclusive("determinant is not polynomial of the expected degree")
    while coef and not coef[-1]:
        coef.pop()
    lead = coef[-1]
    coef = [c / lead for c in coef]
    return _rational_roots(coef)


@check("prop61.shapes", "prop61", "every simple weight supermodule is finite, highest, lowest or a twisted localization", finite="3,1", highest="1/3,-1/3", dense_from="1/3,-1/3", z="1/2", depth=16, window=9)
def _prop61(p):
    depth, window = int(p["depth"]), int(p["window"])
    w = {}
    f = highest_weight_simple(_w(p["finite"]), depth)
    h = highest_weight_simple(_w(p["highest"]), depth)
    low = transpose_twist(h)
    w["shapes"] = {"finite": _shape(f), "highest": _shape(h), "lowest": _shape(low)}
    w["lowest_relations_hold"] = low.relation_audit() == []
    w["lowest_weight"] = str(low.weight(low.kmin))
    n = _dense_simple(_w(p["dense_from"]), p["z"], depth, window + 3)
    n = restrict_window(n, -window, window)
    w["shapes"]["dense"] = _shape(n)
    roots = _e_det_roots(n, 0)
    w["kernel_z"] = [str(r) for r in roots]
    rebuilt = []
    for z in roots:
        t = twist_module(n, z)
        sv = singular_vectors(t)
        hits = [k for k, v in sv.items() if v]
        if not hits:
            continue
        k0 = max(hits)
        mu = t.weight(k0)
        ks = list(t.interior())
        span = _closure(t, {k0: sv[k0]}, ks)
        sub = subspace_module(t, {k: span.get(k, []) for k in ks}, kmin=ks[0], kmax=k0).replace(closed_top=True)
        hw = highest_weight_simple(mu, depth)
        for name, cand in (("L", hw), ("PiL", parity_flip(hw))):
            if find_isomorphism(intertwiners(cand, sub)) is None:
                continue
            back = twist_module(localize(cand, window=depth), -z)
            iso = find_isomorphism(intertwiners(back, n, window=6)) is not None
            rebuilt.append({"z": str(z), "highest_weight": str(mu), "module": name, "twist_back_iso": iso})
    w["rebuilt"] = rebuilt
    ok = w["shapes"] == {"finite": "finite", "highest": "highest", "lowest": "lowest", "dense": "dense"}
    ok = ok and w["lowest_relations_hold"]
    ok = ok and any(r["twist_back_iso"] for r in rebuilt)
    return ok, w


@check("lemma52.family", "lemma52", "twists L^z: isomorphic iff z - z' is an integer; at most one extra non-simple coset", weight="1/3,-1/3", z_samples=None, depth=16, window=8)
def _lemma52(p):
    lam = _w(p["weight"])
    zs = p["z_samples"] or load_samples()["z_samples"]
    depth, window = int(p["depth"]), int(p["window"])
    lmod = highest_weight_simple(lam, depth)
    report = dense_family_scan(lmod, zs, window=window)
    base = localize(lmod, window=window + 3)
    f_ok, f_weights = f_map_intertwines(base, 0)
    half = next((r for r in report["samples"] if r["z"] == "1/2"), None)
    int_pairs = [q for q in report["pairs"] if q["same_coset"]]
    non_pairs = [q for q in report["pairs"] if not q["same_coset"]]
    extra = [c for c in report["nonsimple_cosets"] if c != "0"]
    w = {
        "F_map_L0_to_L1": f_ok,
        "F_map_weights": f_weights,
        "samples": report["samples"],
        "pairs": report["pairs"],
        "nonsimple_cosets": report["nonsimple_cosets"],
    }
    ok = f_ok and half is not None and half["simple"] is True
    ok = ok and all(q["isomorphic"] for q in int_pairs) and all(q["isomorphic"] is False for q in non_pairs)
    ok = ok and len(extra) <= 1 and "0" in report["nonsimple_cosets"]
    return ok, w


# -- sq and its quotients -------------------------------------------------------------------


@check("prop71.sq-typical", "prop71", "typical simples stay simple over sq", weight="2,1", dense_weight="5/2,1/3", z="1/2", depth=12, window=6)
def _prop71(p):
    lam = _w(p["weight"])
    closure = sq_closure_defects()
    s = restrict_sq(highest_weight_simple(lam, int(p["depth"])))
    subs = submodule_search(s)
    w = {"sq_closed": not closure, "audit_failures": len(s.relation_audit()), "dims": _dims_table(s), "invariant_subsets": len(subs), "cartan_top_simple": cartan_top_simple(s)}
    ok = not closure and w["audit_failures"] == 0 and len(subs) == 2 and w["cartan_top_simple"]
    dense = restrict_sq(_dense_simple(_w(p["dense_weight"]), p["z"], int(p["depth"]), int(p["window"])))
    try:
        simple, witness = is_simple_on_window(dense)
    except Inconclusive as exc:
        simple, witness = None, {"reason": str(exc)}
    w["dense_simple"] = simple
    w["dense_witness"] = witness
    return ok and simple is True, w


@check("prop72.sq-atypical", "prop72", "atypical simples over sq: one parity part is killed by the odd part and the quotient is its flip", weight="1/3,-1/3", typical="1,0", z="1/2", depth=10, window=6)
def _prop72(p):
    lam = _w(p["weight"])
    n = highest_weight_simple(lam, int(p["depth"]))
    split = check_atypical_split(n)
    dense = _dense_simple(lam, p["z"], int(p["depth"]) + 4, int(p["window"]))
    dsplit = check_atypical_split(dense)
    try:
        check_atypical_split(highest_weight_simple(_w(p["typical"]), 4))
        typical_rejected = False
    except NotAtypical:
        typical_rejected = True
    w = {"highest": split, "dense": dsplit, "typical_rejected": typical_rejected}
    ok = split.get("split") and split.get("quotient_iso") and split.get("verma_iso")
    ok = bool(ok and dsplit.get("split") and dsplit.get("quotient_iso") and typical_rejected)
    return ok, w


# -- traceability -------------------------------------------------------------------------

IN_SCOPE = (
    "algebra", "theta", "lemma1", "lemmapar", "lemma3", "lemma4", "prop5", "prop7", "prop8", "lemma9",
    "prop10", "lemma111", "prop21", "prop31", "prop32", "remark33", "prop41", "prop51", "prop61",
    "lemma52", "prop71", "prop72",
)


def _trace():
    out: dict[str, list] = {}
    for c in REGISTRY.values():
        out.setdefault(c.anchor, []).append(c.name)
    return out


TRACE = _trace()


# -- driver -------------------------------------------------------------------------------


def _grow(params: dict) -> dict | None:
    grown = dict(params)
    changed = False
    for key in ("depth", "window"):
        if key in grown and isinstance(grown[key], int):
            grown[key] = grown[key] * 2
            changed = True
    return grown if changed else None


def run_check(name: str, params: dict | None = None) -> Report:
    chk = REGISTRY.get(name)
    if chk is None:
        raise UnknownCheck(name)
    unknown = sorted(set(params or {}) - set(chk.defaults))
    if unknown:
        raise ValueError(f"{name} takes no parameter(s) {', '.join(unknown)}")
    merged = dict(chk.defaults)
    merged.update(params or {})
    start = time.perf_counter()
    try:
        ok, witnesses = chk.fn(merged)
        verdict = "pass" if ok else "fail"
    except Inconclusive as exc:
        grown = _grow(merged)
        verdict, witnesses = "inconclusive", {"reason": str(exc)}
        if grown is not None:
            try:
                ok, witnesses = chk.fn(grown)
                verdict = "pass" if ok else "fail"
                witnesses = dict(witnesses, retried_with=grown)
            except Inconclusive as exc2:
                witnesses = {"reason": str(exc2), "retried_with": grown}
    elapsed = int((time.perf_counter() - start) * 1000)
    return Report(name, _jsonable(merged), verdict, _jsonable(witnesses), elapsed)


def run_suite(pattern: str = "*", params: dict | None = None) -> list[Report]:
    names = sorted(n for n in REGISTRY if fnmatch.fnmatchcase(n, pattern))
    return [run_check(n, (params or {}).get(n)) for n in names]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return _s(x) if not isinstance(x, Weight) else str(x)
