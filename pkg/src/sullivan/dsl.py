"""Line-oriented text format for algebras, morphisms, fibrations and Lie algebras.

Example::

    # Example fibration S^3 -> E -> CP^2
    algebra E54
      gen x 2
      gen y 5
      gen a 3
      d y = x^3
      d a = x^2

    morphism phi : E54 -> E54q
      map y = y + x*a

    fibration F : base CP2 fiber {
      gen a 3
      d a = x^2
    }

    lie L2
      gen a 1
      gen b 2
      bracket [a,a] = b

    wedge W : spheres 3 3 cutoff 12

    expect E54 coformalize CertifiedCoformal

Declarations must appear before they are referenced.  ``#`` starts a
comment.  Monomials may be written in any factor order; they are brought to
normal form with the Koszul sign, and a warning is recorded when that flips
the sign of a term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import GradedContext, Polynomial, format_polynomial, normalize

__all__ = [
    "AlgebraDecl",
    "DegreeMismatch",
    "DslDocument",
    "DslError",
    "DslSyntaxError",
    "ExpectDecl",
    "FibrationDecl",
    "LieDecl",
    "MorphismDecl",
    "UnknownGenerator",
    "UnknownName",
    "WedgeDecl",
    "parse",
    "parse_polynomial",
    "print_document",
]


class DslError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(loc + message)


class DslSyntaxError(DslError):
    def __init__(self, line, col, expected, found=None):
        self.expected = expected
        msg = f"expected {expected}" + (f", found {found!r}" if found is not None else "")
        super().__init__(msg, line, col)


class UnknownGenerator(DslError):
    pass


class UnknownName(DslError):
    pass


class DegreeMismatch(DslError):
    pass


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<op>[-+*/^()\[\],=:{}]))"
)


@dataclass
class Tok:
    kind: str
    text: str
    col: int  # 1-based


def tokenize(text: str, line: int = 1) -> list:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise DslSyntaxError(line, bad + 1, "a token", text[bad])
        kind = m.lastgroup
        toks.append(Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    toks.append(Tok("end", "", n + 1))
    return toks


class _Cursor:
    def __init__(self, toks, line):
        self.toks = toks
        self.i = 0
        self.line = line

    @property
    def tok(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("op", "arrow")

    def expect_op(self, text):
        t = self.tok
        if not self.at(text):
            raise DslSyntaxError(self.line, t.col, repr(text), t.text or "end of line")
        return self.next()

    def expect_kind(self, kind, what):
        t = self.tok
        if t.kind != kind:
            raise DslSyntaxError(self.line, t.col, what, t.text or "end of line")
        return self.next()

    def expect_word(self, word):
        t = self.tok
        if t.kind != "ident" or t.text != word:
            raise DslSyntaxError(self.line, t.col, repr(word), t.text or "end of line")
        return self.next()

    def expect_end(self):
        t = self.tok
        if t.kind != "end":
            raise DslSyntaxError(self.line, t.col, "end of line", t.text)


# ---------------------------------------------------------------------------
# polynomial expressions


class _PolyParser:
    def __init__(self, cur: _Cursor, ctx: GradedContext, warnings: Optional[list]):
        self.cur = cur
        self.ctx = ctx
        self.warnings = warnings

    def poly(self) -> Polynomial:
        cur = self.cur
        sign = 1
        if cur.at("+") or cur.at("-"):
            sign = -1 if cur.next().text == "-" else 1
        out = self.term().scale(sign)
        while cur.at("+") or cur.at("-"):
            sign = -1 if cur.next().text == "-" else 1
            out = out + self.term().scale(sign)
        return out

    def term(self) -> Polynomial:
        cur = self.cur
        start = cur.tok.col
        coeff = Fraction(1)
        word = []
        extra = None
        while True:
            t = cur.tok
            if t.kind == "num":
                cur.next()
                c = Fraction(int(t.text))
                if cur.at("/"):
                    cur.next()
                    den = cur.expect_kind("num", "a denominator")
                    if int(den.text) == 0:
                        raise DslSyntaxError(cur.line, den.col, "a nonzero denominator", den.text)
                    c /= int(den.text)
                coeff *= c
            elif t.kind == "ident":
                cur.next()
                if t.text not in self.ctx._index:
                    raise UnknownGenerator(f"unknown generator {t.text!r}", cur.line, t.col)
                e = 1
                if cur.at("^"):
                    cur.next()
                    e = int(cur.expect_kind("num", "an exponent").text)
                word.extend([t.text] * e)
            elif cur.at("("):
                cur.next()
                inner = self.poly()
                cur.expect_op(")")
                e = 1
                if cur.at("^"):
                    cur.next()
                    e = int(cur.expect_kind("num", "an exponent").text)
                inner = inner ** e
                extra = inner if extra is None else extra * inner
            else:
                raise DslSyntaxError(cur.line, t.col, "a number, generator or '('", t.text or "end of line")
            if not cur.at("*"):
                break
            cur.next()
        sign, mono = normalize(self.ctx, word)
        if sign == 0:
            base = Polynomial(self.ctx)
        else:
            if sign < 0 and self.warnings is not None:
                self.warnings.append(
                    f"line {cur.line}, col {start}: reordering {'*'.join(word)} into normal form flips the sign"
                )
            base = Polynomial(self.ctx, {mono: sign * coeff})
        return base if extra is None else base * extra


def parse_polynomial(text: str, ctx: GradedContext, warnings: Optional[list] = None, line: int = 1) -> Polynomial:
    cur = _Cursor(tokenize(text, line), line)
    p = _PolyParser(cur, ctx, warnings).poly()
    cur.expect_end()
    return p


def _parse_linear(cur: _Cursor, names: dict) -> dict:
    """``c1*e1 + c2*e2 ...`` over Lie basis names; returns {name: Fraction}."""
    out: dict = {}

    def term(sign):
        coeff = Fraction(sign)
        name = None
        while True:
            t = cur.tok
            if t.kind == "num":
                cur.next()
                c = Fraction(int(t.text))
                if cur.at("/"):
                    cur.next()
                    c /= int(cur.expect_kind("num", "a denominator").text)
                coeff *= c
            elif t.kind == "ident":
                cur.next()
                if t.text not in names:
                    raise UnknownGenerator(f"unknown Lie basis element {t.text!r}", cur.line, t.col)
                if name is not None:
                    raise DslSyntaxError(cur.line, t.col, "a linear expression", t.text)
                name = t.text
            else:
                raise DslSyntaxError(cur.line, t.col, "a number or basis element", t.text or "end of line")
            if not cur.at("*"):
                break
            cur.next()
        if name is None:
            if coeff == 0:
                return
            raise DslSyntaxError(cur.line, cur.tok.col, "a basis element in a bracket value", cur.tok.text)
        v = out.get(name, 0) + coeff
        if v:
            out[name] = v
        else:
            out.pop(name, None)

    sign = 1
    if cur.at("+") or cur.at("-"):
        sign = -1 if cur.next().text == "-" else 1
    term(sign)
    while cur.at("+") or cur.at("-"):
        sign = -1 if cur.next().text == "-" else 1
        term(sign)
    return out


# ---------------------------------------------------------------------------
# document model


@dataclass
class AlgebraDecl:
    name: str
    gens: list  # [(name, degree)]
    diffs: list  # [(name, Polynomial)]

    def context(self) -> GradedContext:
        return GradedContext.of(*self.gens)


@dataclass
class MorphismDecl:
    name: str
    source: str
    target: str
    maps: list  # [(source generator, Polynomial in target)]


@dataclass
class FibrationDecl:
    name: str
    base: str
    gens: list  # fiber generators
    diffs: list  # [(fiber generator, Polynomial in base+fiber context)]


@dataclass
class LieDecl:
    name: str
    gens: list  # [(name, degree)]
    brackets: list  # [((x, y), {name: Fraction})]


@dataclass
class WedgeDecl:
    name: str
    spheres: tuple
    cutoff: int


@dataclass
class ExpectDecl:
    target: str
    key: str
    value: str


@dataclass
class DslDocument:
    items: list = field(default_factory=list)
    warnings: list = field(default_factory=list, compare=False)

    def __post_init__(self):
        self._built = {}

    def names(self) -> list:
        return [it.name for it in self.items if not isinstance(it, ExpectDecl)]

    def get(self, name):
        for it in self.items:
            if not isinstance(it, ExpectDecl) and it.name == name:
                return it
        raise UnknownName(f"no declaration named {name!r}")

    def expectations(self, target: Optional[str] = None) -> list:
        return [it for it in self.items if isinstance(it, ExpectDecl) and (target is None or it.target == target)]

    def of_kind(self, kind) -> list:
        return [it for it in self.items if isinstance(it, kind)]

    # semantic objects -------------------------------------------------------
    def algebra(self, name: str):
        """The Sullivan algebra named ``name``; fibrations give their total algebra."""
        from .dga import SullivanAlgebra
        from .lie import wedge_of_spheres_model

        key = ("alg", name)
        if key in self._built:
            return self._built[key]
        decl = self.get(name)
        if isinstance(decl, AlgebraDecl):
            ctx = decl.context()
            dmap = dict(decl.diffs)
            alg = SullivanAlgebra(ctx, tuple(dmap.get(n, Polynomial(ctx)) for n in ctx.names))
        elif isinstance(decl, WedgeDecl):
            alg = wedge_of_spheres_model(decl.spheres, decl.cutoff)
        elif isinstance(decl, FibrationDecl):
            alg = self.fibration(name).total
        else:
            raise UnknownName(f"{name!r} is not an algebra")
        self._built[key] = alg
        return alg

    def morphism(self, name: str):
        from .morphism import DgaMorphism

        decl = self.get(name)
        if not isinstance(decl, MorphismDecl):
            raise UnknownName(f"{name!r} is not a morphism")
        src = self.algebra(decl.source)
        tgt = self.algebra(decl.target)
        return DgaMorphism.from_partial(src, tgt, dict(decl.maps))

    def fibration(self, name: str, cutoff: Optional[int] = None):
        from .fibration import assemble

        key = ("fib", name, cutoff)
        if key in self._built:
            return self._built[key]
        decl = self.get(name)
        if not isinstance(decl, FibrationDecl):
            raise UnknownName(f"{name!r} is not a fibration")
        base = self.algebra(decl.base)
        rm = assemble(base, GradedContext.of(*decl.gens), dict(decl.diffs), cutoff)
        self._built[key] = rm
        return rm

    def lie(self, name: str):
        from .lie import GradedLieAlgebra

        decl = self.get(name)
        if not isinstance(decl, LieDecl):
            raise UnknownName(f"{name!r} is not a Lie algebra")
        return GradedLieAlgebra.from_brackets(decl.gens, {k: v for k, v in decl.brackets})


_HEADERS = ("algebra", "morphism", "fibration", "lie", "wedge", "expect")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse(text: str) -> DslDocument:
    doc = DslDocument()
    lines = text.splitlines()
    n = len(lines)
    i = 0
    contexts: dict = {}  # algebra name -> GradedContext

    def body(start, closing):
        out = []
        j = start
        while j < n:
            raw = _strip_comment(lines[j])
            s = raw.strip()
            if not s:
                j += 1
                continue
            first = s.split()[0]
            if closing and s == "}":
                return out, j + 1
            if not closing and first in _HEADERS:
                return out, j
            out.append((j + 1, raw))
            j += 1
        if closing:
            raise DslSyntaxError(n, 1, "'}' closing the fiber block")
        return out, j

    def parse_gen(cur, gens, seen):
        cur.expect_word("gen")
        t = cur.expect_kind("ident", "a generator name")
        deg = int(cur.expect_kind("num", "a degree").text)
        cur.expect_end()
        if t.text in seen:
            raise DslError(f"generator {t.text!r} declared twice", cur.line, t.col)
        seen.add(t.text)
        gens.append((t.text, deg))

    def parse_diffs(rows, ctx, own):
        diffs = []
        for lineno, raw, cur in rows:
            cur.expect_word("d")
            t = cur.expect_kind("ident", "a generator name")
            if t.text not in own:
                raise UnknownGenerator(f"d of undeclared generator {t.text!r}", lineno, t.col)
            cur.expect_op("=")
            p = _PolyParser(cur, ctx, doc.warnings).poly()
            cur.expect_end()
            want = ctx.degree_of(t.text) + 1
            if p and p.degrees() != {want}:
                got = sorted(p.degrees())
                raise DegreeMismatch(
                    f"d {t.text} has degree {got[0] if len(got) == 1 else got}, expected {want}", lineno, t.col
                )
            if any(n == t.text for n, _ in diffs):
                raise DslError(f"d {t.text} given twice", lineno, t.col)
            diffs.append((t.text, p))
        return diffs

    while i < n:
        raw = _strip_comment(lines[i])
        if not raw.strip():
            i += 1
            continue
        lineno = i + 1
        cur = _Cursor(tokenize(raw, lineno), lineno)
        head = cur.tok
        if head.kind != "ident" or head.text not in _HEADERS:
            raise DslSyntaxError(lineno, head.col, "a declaration (" + ", ".join(_HEADERS) + ")", head.text)
        cur.next()
        kw = head.text

        if kw == "expect":
            target = cur.expect_kind("ident", "a declaration name").text
            key = cur.expect_kind("ident", "a key").text
            vals = []
            while cur.tok.kind != "end":
                vals.append(cur.next().text)
            if not vals:
                raise DslSyntaxError(lineno, cur.tok.col, "a value")
            doc.get(target)
            doc.items.append(ExpectDecl(target, key, " ".join(vals)))
            i += 1
            continue

        name_tok = cur.expect_kind("ident", "a name")
        name = name_tok.text
        if name in doc.names():
            raise DslError(f"{name!r} declared twice", lineno, name_tok.col)

        if kw == "algebra":
            cur.expect_end()
            rows, i = body(i + 1, False)
            gens, seen, drows = [], set(), []
            for ln, r in rows:
                c = _Cursor(tokenize(r, ln), ln)
                if c.tok.text == "gen":
                    parse_gen(c, gens, seen)
                elif c.tok.text == "d":
                    drows.append((ln, r, c))
                else:
                    raise DslSyntaxError(ln, c.tok.col, "'gen' or 'd'", c.tok.text)
            try:
                ctx = GradedContext.of(*gens)
            except ValueError as exc:
                raise DslError(str(exc), lineno, 1) from None
            diffs = parse_diffs(drows, ctx, set(ctx.names))
            contexts[name] = ctx
            doc.items.append(AlgebraDecl(name, gens, diffs))

        elif kw == "wedge":
            cur.expect_op(":")
            cur.expect_word("spheres")
            dims = []
            while cur.tok.kind == "num":
                dims.append(int(cur.next().text))
            if not dims:
                raise DslSyntaxError(lineno, cur.tok.col, "sphere dimensions", cur.tok.text)
            cur.expect_word("cutoff")
            cutoff = int(cur.expect_kind("num", "a cutoff").text)
            cur.expect_end()
            i += 1
            decl = WedgeDecl(name, tuple(dims), cutoff)
            doc.items.append(decl)
            contexts[name] = doc.algebra(name).ctx

        elif kw == "morphism":
            cur.expect_op(":")
            src = cur.expect_kind("ident", "a source algebra").text
            cur.expect_op("->")
            tgt = cur.expect_kind("ident", "a target algebra").text
            cur.expect_end()
            for ref in (src, tgt):
                if ref not in contexts:
                    raise UnknownName(f"unknown algebra {ref!r}", lineno, 1)
            sctx, tctx = contexts[src], contexts[tgt]
            rows, i = body(i + 1, False)
            maps = []
            for ln, r in rows:
                c = _Cursor(tokenize(r, ln), ln)
                c.expect_word("map")
                t = c.expect_kind("ident", "a source generator")
                if t.text not in sctx._index:
                    raise UnknownGenerator(f"{t.text!r} is not a generator of {src}", ln, t.col)
                c.expect_op("=")
                p = _PolyParser(c, tctx, doc.warnings).poly()
                c.expect_end()
                want = sctx.degree_of(t.text)
                if p and p.degrees() != {want}:
                    raise DegreeMismatch(f"map {t.text} has degree {sorted(p.degrees())}, expected {want}", ln, t.col)
                maps.append((t.text, p))
            doc.items.append(MorphismDecl(name, src, tgt, maps))

        elif kw == "fibration":
            cur.expect_op(":")
            cur.expect_word("base")
            base = cur.expect_kind("ident", "a base algebra").text
            cur.expect_word("fiber")
            cur.expect_op("{")
            cur.expect_end()
            if base not in contexts:
                raise UnknownName(f"unknown algebra {base!r}", lineno, 1)
            rows, i = body(i + 1, True)
            gens, seen, drows = [], set(), []
            for ln, r in rows:
                c = _Cursor(tokenize(r, ln), ln)
                if c.tok.text == "gen":
                    parse_gen(c, gens, seen)
                elif c.tok.text == "d":
                    drows.append((ln, r, c))
                else:
                    raise DslSyntaxError(ln, c.tok.col, "'gen' or 'd'", c.tok.text)
            bctx = contexts[base]
            try:
                ctx = GradedContext.of(*(bctx.pairs() + gens))
            except ValueError as exc:
                raise DslError(str(exc), lineno, 1) from None
            diffs = parse_diffs(drows, ctx, {g for g, _ in gens})
            contexts[name] = ctx
            doc.items.append(FibrationDecl(name, base, gens, diffs))

        elif kw == "lie":
            cur.expect_end()
            rows, i = body(i + 1, False)
            gens, seen, brackets = [], set(), []
            for ln, r in rows:
                c = _Cursor(tokenize(r, ln), ln)
                if c.tok.text == "gen":
                    c.expect_word("gen")
                    t = c.expect_kind("ident", "a basis element name")
                    deg = int(c.expect_kind("num", "a degree").text)
                    c.expect_end()
                    if deg < 1:
                        raise DslError("Lie degrees must be >= 1", ln, t.col)
                    if t.text in seen:
                        raise DslError(f"basis element {t.text!r} declared twice", ln, t.col)
                    seen.add(t.text)
                    gens.append((t.text, deg))
                elif c.tok.text == "bracket":
                    c.next()
                    c.expect_op("[")
                    x = c.expect_kind("ident", "a basis element")
                    c.expect_op(",")
                    y = c.expect_kind("ident", "a basis element")
                    c.expect_op("]")
                    c.expect_op("=")
                    degs = dict(gens)
                    for t in (x, y):
                        if t.text not in degs:
                            raise UnknownGenerator(f"unknown Lie basis element {t.text!r}", ln, t.col)
                    val = _parse_linear(c, degs)
                    c.expect_end()
                    want = degs[x.text] + degs[y.text]
                    for k in val:
                        if degs[k] != want:
                            raise DegreeMismatch(f"[{x.text},{y.text}] has degree {want}, {k} has degree {degs[k]}", ln, x.col)
                    brackets.append(((x.text, y.text), val))
                else:
                    raise DslSyntaxError(ln, c.tok.col, "'gen' or 'bracket'", c.tok.text)
            doc.items.append(LieDecl(name, gens, brackets))
    return doc


# ---------------------------------------------------------------------------
# printing


def _fmt_linear(val: dict) -> str:
    parts = []
    for k, c in val.items():
        neg = c < 0
        a = -c if neg else c
        body = k if a == 1 else f"{a}*{k}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0"


def print_document(doc: DslDocument) -> str:
    out = []
    for it in doc.items:
        if isinstance(it, AlgebraDecl):
            out.append(f"algebra {it.name}")
            out += [f"  gen {g} {d}" for g, d in it.gens]
            out += [f"  d {g} = {format_polynomial(p)}" for g, p in it.diffs]
        elif isinstance(it, MorphismDecl):
            out.append(f"morphism {it.name} : {it.source} -> {it.target}")
            out += [f"  map {g} = {format_polynomial(p)}" for g, p in it.maps]
        elif isinstance(it, FibrationDecl):
            out.append(f"fibration {it.name} : base {it.base} fiber {{")
            out += [f"  gen {g} {d}" for g, d in it.gens]
            out += [f"  d {g} = {format_polynomial(p)}" for g, p in it.diffs]
            out.append("}")
        elif isinstance(it, LieDecl):
            out.append(f"lie {it.name}")
            out += [f"  gen {g} {d}" for g, d in it.gens]
            out += [f"  bracket [{x},{y}] = {_fmt_linear(v)}" for (x, y), v in it.brackets]
        elif isinstance(it, WedgeDecl):
            out.append(f"wedge {it.name} : spheres {' '.join(map(str, it.spheres))} cutoff {it.cutoff}")
        elif isinstance(it, ExpectDecl):
            out.append(f"expect {it.target} {it.key} {it.value}")
        out.append("")
    return "\n".join(out)
