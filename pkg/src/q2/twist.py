"""Localization of U(q) at powers of F, the twisting automorphisms theta_z,
and twisted (dense) modules.

Elements of the localization are stored as sums of ``F^n * m`` with
``n`` an arbitrary integer and ``m`` a canonical PBW monomial free of ``F``.
Moving ``F^n`` past an element uses

    u F^n = sum_j binom(n, j) (-1)^j F^(n-j) ad_F^j(u),

which holds for every integer ``n`` because ``ad_F`` is locally nilpotent.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .modules import SHIFT, WeightModule, find_isomorphism, intertwiners, is_intertwiner, restrict_window
from .qmod import is_simple_on_window
from .scalars import ALPHA, Scalar, to_fraction
from .superalg import GENERATORS, SuperElement, bracket, engine, format_monomial, generator

__all__ = [
    "LocalizedElement",
    "binom",
    "ad_f",
    "theta",
    "conjugate_by_f",
    "localize",
    "twist_module",
    "e_finite_part",
    "dense_family_scan",
    "FNotBijective",
]

_F = 0
_NOF = lambda m: (0,) + tuple(m[1:])  # noqa: E731


class FNotBijective(ValueError):
    pass


def binom(z, k: int):
    """``z (z-1) ... (z-k+1) / k!`` for any scalar ``z``."""
    out = Fraction(1)
    for i in range(k):
        out = out * (z - i) / (i + 1)
    return out


def ad_f(u: SuperElement) -> SuperElement:
    return bracket(generator("F"), u)


def _ad_powers(u: SuperElement):
    out = [u]
    while out[-1]:
        out.append(ad_f(out[-1]))
        if len(out) > 64:
            raise RuntimeError("ad_F is not nilpotent on this element")
    return out[:-1]


class LocalizedElement:
    """Finite sum of ``c * F^n * m`` with ``m`` an F-free canonical monomial."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_element(cls, u: SuperElement) -> "LocalizedElement":
        out = {}
        for m, c in u.terms.items():
            key = (m[_F], _NOF(m))
            out[key] = out.get(key, 0) + c
        return cls(out)

    @classmethod
    def f_power(cls, n: int) -> "LocalizedElement":
        return cls({(n, (0,) * 8): Fraction(1)})

    def __add__(self, other):
        other = _as_loc(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LocalizedElement(out)

    def __neg__(self):
        return LocalizedElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_loc(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return LocalizedElement({k: v * other for k, v in self.terms.items()})
        return _loc_mul(self, _as_loc(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return LocalizedElement({k: other * v for k, v in self.terms.items()})
        return _loc_mul(_as_loc(other), self)

    def __eq__(self, other):
        try:
            other = _as_loc(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_polynomial(self) -> bool:
        return all(n >= 0 for n, _ in self.terms)

    def to_element(self) -> SuperElement:
        if not self.is_polynomial():
            raise ValueError("element has negative powers of F")
        out = {}
        for (n, m), c in self.terms.items():
            mm = (n,) + tuple(m[1:])
            out[mm] = out.get(mm, 0) + c
        return SuperElement(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (n, m), c in sorted(self.terms.items(), key=lambda t: (-t[0][0], t[0][1])):
            rest = format_monomial(m)
            fpart = "" if n == 0 else ("F" if n == 1 else f"F^{n}" if n > 0 else f"F^({n})")
            mono = "*".join(p for p in (fpart, "" if rest == "1" else rest) if p) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def _as_loc(x) -> LocalizedElement:
    if isinstance(x, LocalizedElement):
        return x
    if isinstance(x, SuperElement):
        return LocalizedElement.from_element(x)
    if isinstance(x, (int, Fraction, Scalar)):
        return LocalizedElement({(0, (0,) * 8): x})
    raise TypeError(f"cannot use {x!r} in the localization")


_AD_CACHE: dict = {}


def _ad_powers_mono(m):
    hit = _AD_CACHE.get(m)
    if hit is None:
        hit = _AD_CACHE[m] = _ad_powers(SuperElement({m: Fraction(1)}))
    return hit


def _loc_mul(a: LocalizedElement, b: LocalizedElement) -> LocalizedElement:
    eng = engine()
    out: dict = {}
    for (p, x), ca in a.terms.items():
        ads = _ad_powers_mono(x)
        for (q, y), cb in b.terms.items():
            for j, adx in enumerate(ads):
                coef = binom(q, j) * (-1) ** j
                if not coef:
                    continue
                prod = eng.mul_terms(adx.terms, {y: Fraction(1)})
                for m, c in prod.items():
                    key = (p + q - j + m[_F], _NOF(m))
                    out[key] = out.get(key, 0) + ca * cb * coef * c
    return LocalizedElement(out)


def theta(z, u) -> LocalizedElement:
    """``theta_z(u) = sum_k binom(z, k) ad_F^k(u) F^(-k)``."""
    if isinstance(u, SuperElement):
        out = LocalizedElement()
        for k, adk in enumerate(_ad_powers(u)):
            c = binom(z, k)
            if c:
                out = out + LocalizedElement.from_element(adk) * LocalizedElement.f_power(-k) * c
        return out
    u = _as_loc(u)
    out = LocalizedElement()
    for (n, m), c in u.terms.items():
        out = out + LocalizedElement.f_power(n) * theta(z, SuperElement({m: Fraction(1)})) * c
    return out


def conjugate_by_f(n: int, u) -> LocalizedElement:
    """``F^n u F^(-n)`` computed by multiplication in the localization."""
    return LocalizedElement.f_power(n) * _as_loc(u) * LocalizedElement.f_power(-n)


# -- modules --------------------------------------------------------------------

_GEN_AD: dict = {}


def _generator_ad_powers(g: str):
    hit = _GEN_AD.get(g)
    if hit is None:
        hit = _GEN_AD[g] = _ad_powers(generator(g))
    return hit


def _check_f_bijective(n: WeightModule, ks):
    for k in ks:
        a = n.action("F", k)
        if a is None:
            continue
        if n.dim(k) != n.dim(k - 1) or (n.dim(k) and linalg.rank(a) < n.dim(k)):
            raise FNotBijective(f"F is not bijective at weight {n.weight(k)}")


def localize(lmod: WeightModule, window: int = 12, anchor: int | None = None) -> WeightModule:
    """``U' (x) L`` for a supermodule ``L`` on which F is injective.

    Every weight space is identified with one deep space ``L_K`` through a
    power of F; the result has the same dimension at every index in
    ``-window..window`` (indices relative to ``L``'s base).
    """
    ks = list(lmod.interior())
    if anchor is None:
        anchor = ks[0] + 2
    K = anchor
    for k in (K - 1, K, K + 1):
        a = lmod.action("F", k)
        if a is None or lmod.dim(k) != lmod.dim(k - 1) or (lmod.dim(k) and linalg.rank(a) < lmod.dim(k)):
            raise FNotBijective(f"F is not bijective near the anchor weight {lmod.weight(K)}")
    n = lmod.dim(K)
    f_up = lmod.action("F", K + 1)  # L_{K+1} -> L_K
    f_inv1 = linalg.inverse(lmod.action("F", K))  # L_{K-1} -> L_K
    f2 = linalg.matmul(lmod.action("F", K - 1), lmod.action("F", K), n)
    f_inv2 = linalg.inverse(f2)  # L_{K-2} -> L_K
    to_anchor = {1: f_up, 0: linalg.identity(n), -1: f_inv1, -2: f_inv2}

    pieces = {}
    for g in lmod.generators:
        s = SHIFT[g]
        ads = _generator_ad_powers(g)
        mats = []
        for j, adj in enumerate(ads):
            t = s - j
            em = lmod.element_matrix(adj, K)
            if em is None:
                raise FNotBijective("anchor too close to the window edge")
            m = em.get(K + t, linalg.zeros(lmod.dim(K + t), n))
            mats.append((j, linalg.matmul(to_anchor[t], m, n)))
        pieces[g] = mats

    dims = {k: lmod.dims[K] for k in range(-window, window + 1)}
    actions = {}
    for g in lmod.generators:
        s = SHIFT[g]
        for k in range(-window, window + 1):
            if not (-window <= k + s <= window):
                continue
            npow = K - k
            acc = linalg.zeros(n, n)
            for j, m in pieces[g]:
                c = binom(npow, j) * (-1) ** j
                if c:
                    acc = linalg.add(acc, linalg.scale(m, c))
            actions[g, k] = acc
    labels = {k: [f"F^({K - k})*{x}" for x in (lmod.labels.get(K) or [f"v{i}" for i in range(n)])] for k in dims}
    return WeightModule(
        algebra=lmod.algebra,
        base=lmod.base,
        kmin=-window,
        kmax=window,
        dims=dims,
        actions=actions,
        ctx=lmod.ctx,
        labels=labels,
        provenance={"kind": "localized", "anchor": str(lmod.weight(K)), "of": lmod.provenance.get("kind"), "lambda": lmod.provenance.get("lambda")},
    )


def twist_module(n: WeightModule, z) -> WeightModule:
    """The module with ``g`` acting by ``theta_z(g)`` (weights move by ``z*alpha``)."""
    z = to_fraction(z)
    _check_f_bijective(n, n.krange())
    inv = {}
    for k in n.krange():
        a = n.action("F", k + 1)
        if a is not None:
            inv[k] = linalg.inverse(a)  # N_k -> N_{k+1}
            if inv[k] is None:
                raise FNotBijective(f"F is singular at weight {n.weight(k + 1)}")
    actions = {}
    for g in n.generators:
        s = SHIFT[g]
        ads = _generator_ad_powers(g)
        for k in n.krange():
            if not (n.kmin <= k + s <= n.kmax):
                continue
            dim = n.dim(k)
            acc = linalg.zeros(n.dim(k + s), dim)
            ok = True
            for j, adj in enumerate(ads):
                c = binom(z, j)
                if not c:
                    continue
                # F^(-j): N_k -> N_{k+j}
                cur = linalg.identity(dim)
                for step in range(j):
                    m = inv.get(k + step)
                    if m is None:
                        ok = False
                        break
                    cur = linalg.matmul(m, cur, dim)
                if not ok:
                    break
                em = n.element_matrix(adj, k + j)
                if em is None:
                    ok = False
                    break
                part = em.get(k + s)
                if part is None:
                    continue
                acc = linalg.add(acc, linalg.scale(linalg.matmul(part, cur, dim), c))
            actions[g, k] = acc if ok else None
    out = n.replace(
        base=n.base + ALPHA * z,
        actions=actions,
        closed_top=False,
        closed_bottom=False,
        provenance=dict(n.provenance, kind="twisted", z=str(z)),
    )
    return out


def e_finite_part(n: WeightModule, max_power: int | None = None):
    """Per index, a basis of vectors killed by some power ``E^r`` that fits in the window.

    Window-dependent approximation of the locally E-finite subspace.
    """
    out = {}
    cache: dict = {}
    for k in n.krange():
        best = []
        r_max = (n.kmax - k) if max_power is None else min(max_power, n.kmax - k)
        for r in range(1, r_max + 1):
            mat = n.word_matrix((3,) * r, k, cache)
            if mat is None:
                break
            ker = linalg.nullspace(mat, n.dim(k)) if mat else linalg.identity(n.dim(k))
            if len(ker) > len(best):
                best = ker
        out[k] = best
    return out


def dense_family_scan(lmod: WeightModule, z_samples, window: int = 8):
    """Simplicity of each twist ``L^z`` and isomorphism between the samples."""
    base = localize(lmod, window=window + 3)
    twisted = {}
    rows = []
    for z in z_samples:
        z = to_fraction(z)
        t = twist_module(base, z)
        t = restrict_window(t, -window, window)
        twisted[z] = t
        try:
            simple, witness = is_simple_on_window(t)
        except Exception as exc:  # Inconclusive
            simple, witness = None, {"reason": str(exc)}
        rows.append({"z": str(z), "simple": simple, "witness": witness, "weights": str(t.weight(0))})
    pairs = []
    zs = list(twisted)
    for i, z1 in enumerate(zs):
        for z2 in zs[i + 1 :]:
            integral = (z1 - z2).denominator == 1
            m1, m2 = twisted[z1], twisted[z2]
            if integral:
                found = intertwiners(m1, m2, window=5)
                iso = find_isomorphism(found) is not None
                pairs.append({"z": str(z1), "z'": str(z2), "same_coset": True, "isomorphic": iso, "intertwiners": len(found)})
            else:
                same_support = m2.index_of(m1.weight(0)) is not None
                pairs.append({"z": str(z1), "z'": str(z2), "same_coset": False, "isomorphic": False if not same_support else None, "reason": "different weight supports" if not same_support else "same support"})
    cosets = sorted({str(Fraction(r["z"]) % 1) for r in rows if r["simple"] is False})
    return {"samples": rows, "pairs": pairs, "nonsimple_cosets": cosets}


def f_map_intertwines(base: WeightModule, z0: int = 0):
    """Check that ``v -> F v`` maps ``L^z0`` to ``L^(z0+1)`` as an intertwiner."""
    l0 = twist_module(base, z0)
    l1 = twist_module(base, z0 + 1)
    phi = {}
    for k in l0.interior():
        w = l0.weight(k)
        a = base.action("F", k)
        k1 = l1.index_of(w)
        if a is None or k1 is None or k1 not in l1.interior():
            continue
        phi[w] = a
    return is_intertwiner(l0, l1, phi), len(phi)
