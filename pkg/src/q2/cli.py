"""Command-line front end.

    q2 normal-form "E*F"
    q2 build-module --kind verma --lambda 3,1 --depth 10 --dump m.json
    q2 verify 'lemma4*' --json

Exit codes: 0 on success (every check passed), 1 if a check failed, 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .scalars import ZeroDivisor, format_scalar, make_scalar_context, parse_rational, parse_weight, to_fraction
from .superalg import (
    GENERATORS,
    SuperElement,
    bracket,
    bracket_table,
    casimir_element,
    find_anticenter,
    format_element,
    generator,
)

__all__ = ["ElementSyntaxError", "UnknownIdentifier", "parse_element", "main"]


class ElementSyntaxError(SyntaxError):
    """Malformed element text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, msg: str, text: str, position: int):
        super().__init__(f"{msg} at position {position}")
        self.text = text
        self.position = position


class UnknownIdentifier(ValueError):
    pass


class UsageError(Exception):
    pass


_TOKEN = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9]*)|([-+*/^()\[\],])")
_SCALAR_SYMBOLS = ("i", "s1", "s2")


def _tokenize(text: str):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ElementSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = ("num", "id", "op")[m.lastindex - 1]
        out.append((kind, m.group(0), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    # expr   := term (('+' | '-') term)*
    # term   := unary ('*' unary)*
    # unary  := '-' unary | power
    # power  := atom ('^' NUM)?
    # atom   := NUM ('/' NUM)? | IDENT | '(' expr ')' | '[' expr ',' expr ']'

    def __init__(self, text: str, ctx=None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ElementSyntaxError(f"expected {value!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> SuperElement:
        if self.peek()[0] == "end":
            raise ElementSyntaxError("empty expression", self.text, 0)
        x = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ElementSyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return x

    def expr(self):
        x = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self):
        x = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            x = x * self.unary()
        return x

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        x = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                raise ElementSyntaxError("exponent must be a non-negative integer", self.text, tok[2])
            self.take()
            x = x ** int(tok[1])
        return x

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            q = Fraction(int(value))
            if self.peek()[:2] == ("op", "/"):
                self.take()
                kind2, den, pos2 = self.peek()
                if kind2 != "num":
                    raise ElementSyntaxError("expected a denominator", self.text, pos2)
                self.take()
                if int(den) == 0:
                    raise ElementSyntaxError("zero denominator", self.text, pos2)
                q /= int(den)
            return SuperElement.scalar(q)
        if kind == "id":
            self.take()
            if value in GENERATORS:
                return generator(value)
            if value in _SCALAR_SYMBOLS:
                if self.ctx is None:
                    raise UnknownIdentifier(f"scalar symbol {value!r} needs a --lambda context (position {pos})")
                c = {"i": self.ctx.i, "s1": self.ctx.sqrt1, "s2": self.ctx.sqrt2}[value]()
                return SuperElement.scalar(c)
            raise UnknownIdentifier(f"unknown identifier {value!r} at position {pos}")
        if kind == "op" and value == "(":
            self.take()
            x = self.expr()
            self.take(")")
            return x
        if kind == "op" and value == "[":
            self.take()
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            return bracket(x, y)
        what = "end of input" if kind == "end" else repr(value)
        raise ElementSyntaxError(f"unexpected {what}", self.text, pos)


def parse_element(text: str, lam=None) -> SuperElement:
    """Parse element text into PBW normal form.

    ``lam`` (a weight or weight literal) enables the scalar symbols ``i``,
    ``s1``, ``s2`` with ``s_j^2 = lam_j``.
    """
    ctx = None
    if lam is not None:
        if isinstance(lam, str):
            lam = parse_weight(lam)
        ctx = make_scalar_context(lam, couple_roots=True)
    return _Parser(text, ctx).parse()


# -- module construction ----------------------------------------------------------


def _weight(args):
    if args.lam is None:
        raise UsageError("--lambda is required")
    return parse_weight(args.lam)


def _build(args):
    from .gmod import gl2_dense, gl2_simple, gl2_verma
    from .modules import restrict_window, transpose_twist
    from .qmod import clifford, highest_weight_simple, induce, verma_super
    from .twist import localize, twist_module

    kind = args.kind
    if kind == "dense":
        if args.casimir is None:
            raise UsageError("--kind dense needs --casimir (and optionally --charge, --coset)")
        m = gl2_dense(args.charge, args.casimir, args.coset, args.window)
    elif kind == "gl2-verma":
        m = gl2_verma(_weight(args), args.depth)
    elif kind == "gl2-simple":
        m = gl2_simple(_weight(args), args.depth)
    elif kind == "clifford":
        m = clifford(_weight(args), args.flip)
    elif kind == "verma":
        m = verma_super(clifford(_weight(args), args.flip), args.depth)
    elif kind == "simple":
        m = highest_weight_simple(_weight(args), args.depth, args.flip)
    elif kind == "lowest":
        m = transpose_twist(highest_weight_simple(_weight(args), args.depth, args.flip))
    elif kind == "induced":
        m = induce(gl2_simple(_weight(args), args.depth))
    elif kind in ("localized", "twisted"):
        lmod = highest_weight_simple(_weight(args), args.depth, args.flip)
        m = localize(lmod, window=args.window + 3)
        if kind == "twisted":
            m = twist_module(m, args.z)
        m = restrict_window(m, -args.window, args.window)
    else:
        raise UsageError(f"unknown module kind {kind!r}")
    return _as_algebra(m, args.algebra)


def _as_algebra(m, algebra):
    from .subalg import as_quotient_view, restrict_sq

    if algebra in (None, "q") or m.algebra == "gl2":
        if algebra not in (None, "q") and m.algebra == "gl2":
            raise UsageError(f"--algebra {algebra} applies to q-supermodules only")
        return m
    if algebra == "sq":
        return restrict_sq(m)
    return as_quotient_view(m, algebra)


def _summary(m) -> dict:
    return {
        "algebra": m.algebra,
        "base": str(m.base),
        "window": [m.kmin, m.kmax],
        "closed": {"top": m.closed_top, "bottom": m.closed_bottom},
        "character": m.character(),
        "provenance": json.loads(json.dumps(m.to_json()["provenance"])),
    }


def _emit(args, data, text: str):
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=1))
    else:
        print(text)


def _character_text(m) -> str:
    lines = [f"{m.algebra}-module, base {m.base}, window {m.kmin}..{m.kmax}"]
    for w, (e, o) in m.character().items():
        lines.append(f"  {w}: {e}|{o}")
    return "\n".join(lines)


# -- commands ------------------------------------------------------------------------


def cmd_normal_form(args):
    x = parse_element(args.expr, args.lam)
    nf = format_element(x)
    _emit(args, {"input": args.expr, "normal_form": nf}, nf)
    return 0


def cmd_bracket_table(args):
    table = bracket_table()
    rows = {}
    for a in range(8):
        for b in range(8):
            val = SuperElement({tuple(1 if g == h else 0 for g in range(8)): Fraction(c) for h, c in table[a, b].items()})
            rows[f"[{GENERATORS[a]},{GENERATORS[b]}]"] = format_element(val)
    _emit(args, rows, "\n".join(f"{k} = {v}" for k, v in rows.items()))
    return 0


def cmd_casimir(args):
    c = casimir_element()
    data = {"casimir": format_element(c)}
    text = f"c = {data['casimir']}"
    if args.lam is not None:
        lam = _weight(args)
        value = (lam.diff + 1) ** 2
        data["lambda"] = str(lam)
        data["value_on_highest_weight"] = str(value)
        text += f"\nc acts by {value} on a highest weight vector of weight {lam}"
    _emit(args, data, text)
    return 0


def cmd_anticenter(args):
    from .modules import find_isomorphism, intertwiners, parity_flip
    from .qmod import highest_weight_simple

    basis = find_anticenter(args.max_degree)
    data = {"max_degree": args.max_degree, "basis": [format_element(t) for t in basis], "tau": {}}
    lines = [f"anticenter basis up to degree {args.max_degree}: {len(basis)} element(s)"]
    lines += [f"  T = {format_element(t)}" for t in basis]
    if basis:
        t = basis[0]
        samples = [args.lam] if args.lam else ["2,1", "1,0", "1/3,-1/3"]
        for s in samples:
            lam = parse_weight(s)
            n = highest_weight_simple(lam, 2)
            k = n.kmax
            mat = n.element_matrix(t, k)[k]
            tau = mat[0][0]
            iso = find_isomorphism(intertwiners(n, parity_flip(n), window=3)) is not None
            data["tau"][str(lam)] = {"tau": format_scalar(tau), "parity_iso": iso}
            lines.append(f"  lambda = {lam}: tau = {format_scalar(tau)}, N ~ Pi N: {'yes' if iso else 'no'}")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_build_module(args):
    m = _build(args)
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(m.dumps())
    if args.json and not args.dump:
        print(m.dumps())
    else:
        _emit(args, _summary(m), _character_text(m))
    return 0


def cmd_restrict(args):
    from .qmod import restrict

    m = _build(args)
    if m.algebra not in ("q", "pq"):
        raise UsageError("restrict needs a q-supermodule")
    r = restrict(m, args.mode)
    _emit(args, _summary(r), _character_text(r))
    return 0


def cmd_factors(args):
    from .gmod import composition_factors
    from .qmod import restrict

    m = _build(args)
    if m.algebra != "gl2":
        m = restrict(m, args.mode)
    fs = composition_factors(m)
    data = [{"factor": {k: str(v) for k, v in label.items()}, "multiplicity": c} for label, c in fs]
    lines = [f"{len(fs)} distinct factor(s), {sum(c for _, c in fs)} in total"]
    for label, c in fs:
        desc = ", ".join(f"{k}={v}" for k, v in label.items())
        lines.append(f"  {c} x [{desc}]")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_twist(args):
    from .gmod import casimir_spectrum
    from .subalg import central_charge_zero

    args.kind = "twisted"
    m = _build(args)
    from .qmod import restrict

    spec = casimir_spectrum(restrict(m, "fullRes"), [0])
    data = {
        "z": str(to_fraction(args.z)),
        "base": str(m.base),
        "central_charge_zero": central_charge_zero(m),
        "casimir_spectrum": [str(v) for v in spec],
        "character": m.character(),
    }
    text = f"twist by z = {data['z']}: base weight {m.base}, H1+H2 = 0: {data['central_charge_zero']}, Casimir spectrum {', '.join(data['casimir_spectrum'])}"
    _emit(args, data, text)
    return 0


def cmd_scan_family(args):
    from .qmod import highest_weight_simple
    from .twist import dense_family_scan

    zs = [parse_rational(z) for z in args.zs.split(";")] if args.zs else None
    if zs is None:
        from .verify import load_samples

        zs = [parse_rational(z) for z in load_samples()["z_samples"]]
    lmod = highest_weight_simple(_weight(args), args.depth)
    res = dense_family_scan(lmod, zs, window=min(args.window, 8))
    lines = [f"z = {r['z']}: simple = {r['simple']}" for r in res["samples"]]
    lines.append("non-simple cosets: " + (", ".join(res["nonsimple_cosets"]) or "none"))
    _emit(args, json.loads(json.dumps(res, default=str)), "\n".join(lines))
    return 0


def cmd_verify(args):
    from .verify import run_suite

    reports = run_suite(args.pattern)
    if not reports:
        raise UsageError(f"no check matches {args.pattern!r}")
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=1, sort_keys=True))
    else:
        for r in reports:
            print(f"{r.verdict:<12} {r.check:<28} {r.elapsed_ms} ms")
    return 0 if all(r.verdict == "pass" for r in reports) else 1


def parse_weight_key(text):
    w = parse_weight(text)
    return (w.l1, w.l2)


_DUMP_KEYS = {"algebra", "base", "window", "closed", "scalars", "weights", "spaces", "actions", "provenance"}


def cmd_dump(args):
    try:
        with open(args.file) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read module dump: {exc}") from exc
    missing = sorted(_DUMP_KEYS - set(data))
    if missing:
        raise UsageError(f"not a module dump, missing keys: {', '.join(missing)}")
    summary = {
        "algebra": data["algebra"],
        "base": data["base"],
        "window": data["window"],
        "character": {w: [len(data["spaces"][w]["even"]), len(data["spaces"][w]["odd"])] for w in sorted(data["spaces"], key=parse_weight_key, reverse=True)},
        "generators": sorted(data["actions"]),
        "provenance": data["provenance"],
    }
    lines = [f"{data['algebra']}-module dump, base {data['base']}, window {data['window'][0]}..{data['window'][1]}"]
    lines += [f"  {w}: {e}|{o}" for w, (e, o) in summary["character"].items()]
    _emit(args, summary, "\n".join(lines))
    return 0


# -- argument parsing ------------------------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, module=False):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--lambda", dest="lam", metavar="L1,L2", help="weight, e.g. 1/3,-1/3")
    if module:
        p.add_argument("--kind", default="simple", help="clifford, verma, simple, lowest, induced, localized, twisted, dense, gl2-verma, gl2-simple")
        p.add_argument("--depth", type=int, default=10)
        p.add_argument("--window", type=int, default=8)
        p.add_argument("--z", type=parse_rational, default=Fraction(0))
        p.add_argument("--algebra", choices=("q", "sq", "pq", "psq"), default=None)
        p.add_argument("--flip", action="store_true", help="start from the parity-flipped Clifford module")
        p.add_argument("--charge", type=parse_rational, default=Fraction(0))
        p.add_argument("--casimir", type=parse_rational, default=None)
        p.add_argument("--coset", type=parse_rational, default=Fraction(0))


def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="q2", description="Exact computations with q(2) and its weight supermodules.")
    sub = ap.add_subparsers(dest="command", parser_class=_ArgParser)

    p = sub.add_parser("normal-form", help="PBW normal form of an element")
    p.add_argument("expr")
    _common(p)
    p.set_defaults(fn=cmd_normal_form)

    p = sub.add_parser("bracket-table", help="superbrackets of all generator pairs")
    _common(p)
    p.set_defaults(fn=cmd_bracket_table)

    p = sub.add_parser("casimir", help="the Casimir element of gl2")
    _common(p)
    p.set_defaults(fn=cmd_casimir)

    p = sub.add_parser("anticenter", help="anticenter basis and its scalar on sample modules")
    p.add_argument("--max-degree", type=int, default=4)
    _common(p)
    p.set_defaults(fn=cmd_anticenter)

    p = sub.add_parser("build-module", help="construct a module, print its character or dump it")
    p.add_argument("--dump", metavar="FILE")
    _common(p, module=True)
    p.set_defaults(fn=cmd_build_module)

    p = sub.add_parser("restrict", help="restriction of a q-supermodule to gl2")
    p.add_argument("--mode", choices=("evenPart", "fullRes"), default="fullRes")
    _common(p, module=True)
    p.set_defaults(fn=cmd_restrict)

    p = sub.add_parser("factors", help="gl2 composition factors (of the restriction)")
    p.add_argument("--mode", choices=("evenPart", "fullRes"), default="fullRes")
    _common(p, module=True)
    p.set_defaults(fn=cmd_factors)

    p = sub.add_parser("twist", help="twisted localization of L(V(lambda))")
    _common(p, module=True)
    p.set_defaults(fn=cmd_twist)

    p = sub.add_parser("scan-family", help="simplicity and isomorphism across twists")
    p.add_argument("--zs", help="semicolon-separated rationals; default: the sample list")
    _common(p, module=True)
    p.set_defaults(fn=cmd_scan_family)

    p = sub.add_parser("verify", help="run named checks")
    p.add_argument("pattern", nargs="?", default="*")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("dump", help="summarize a module dump file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_dump)
    return ap


_VALUE_FLAGS = ("--lambda", "--z", "--charge", "--casimir", "--coset", "--zs")


def _glue_negative_values(argv):
    # argparse reads "-10/3" as an option; "--z=-10/3" is unambiguous
    out = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            v = next(it, None)
            out.append(a if v is None else f"{a}={v}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = ap.parse_args(_glue_negative_values(argv))
        if not getattr(args, "fn", None):
            raise UsageError("a command is required")
        return args.fn(args)
    except (UsageError, ElementSyntaxError, UnknownIdentifier, ZeroDivisor, ValueError) as exc:
        print(f"q2: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
