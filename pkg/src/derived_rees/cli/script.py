"""Statement language for batch reports.

::

    script    := (statement (';' | NEWLINE))*
    statement := 'ring' NAME '=' 'poly' '(' var (',' var)* ')'
               | 'ideal' NAME '=' '(' expr (',' expr)* ')' ['in' NAME]
               | 'rees' NAME '=' 'rees_ext' '(' NAME ',' NAME ')'
               | 'rees' NAME '=' 'rees_sym' '(' NAME ',' module ')'
               | 'blowup' NAME '=' 'blowup' '(' NAME ',' NAME ')'
               | 'report' COMMAND '(' arg (',' arg)* ')'
    var       := NAME ':' INT
    module    := 'module' '(' gen (',' gen)* [';' 'd' '(' NAME ')' '=' expr (',' ...)*] ')'
    gen       := NAME ':' INT [':' INT]          # degree, optional weight
    arg       := NAME | NAME '=' (INT | '[' INT ',' INT ']')

``#`` starts a comment.  An ideal without ``in`` lives in the most recent ring.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..expr import _Parser, to_text

KIND_OF_BINDING = {"ring": "ring", "ideal": "ideal", "rees": "rees", "blowup": "blowup"}

# command -> (positional kinds, allowed keywords)
COMMANDS = {
    "connectivity": (("rees",), {"hmin", "cutoff"}),
    "fibers": (("rees",), {"range", "cutoff"}),
    "weights": (("rees",), {"w", "cutoff"}),
    "classical": (("rees",), set()),
    "charts": (("blowup",), {"range", "cutoff"}),
    "cotangent": (("ring", "ideal"), {"n", "cutoff"}),
}


class ScriptError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple  # ((name, weight), ...)
    span: tuple = field(default=(0, 0), compare=False)

    def text(self):
        return f"ring {self.name} = poly({', '.join(f'{n}:{w}' for n, w in self.variables)})"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    gens: tuple  # expression ASTs
    ring: str
    span: tuple = field(default=(0, 0), compare=False)

    def text(self):
        return f"ideal {self.name} = ({', '.join(to_text(g) for g in self.gens)}) in {self.ring}"


@dataclass(frozen=True)
class ModuleSpec:
    gens: tuple   # ((name, degree, weight), ...)
    diffs: tuple  # ((name, expr), ...)

    def text(self):
        gs = ", ".join(f"{n}:{k}:{w}" for n, k, w in self.gens)
        ds = ", ".join(f"d({n}) = {to_text(e)}" for n, e in self.diffs)
        return f"module({gs}{'; ' + ds if ds else ''})"


@dataclass(frozen=True)
class ReesDecl:
    name: str
    kind: str  # rees_ext | rees_sym
    ring: str
    ideal: str | None = None
    module: ModuleSpec | None = None
    span: tuple = field(default=(0, 0), compare=False)

    def text(self):
        arg = self.ideal if self.kind == "rees_ext" else self.module.text()
        return f"rees {self.name} = {self.kind}({self.ring}, {arg})"


@dataclass(frozen=True)
class BlowupDecl:
    name: str
    ring: str
    ideal: str
    span: tuple = field(default=(0, 0), compare=False)

    def text(self):
        return f"blowup {self.name} = blowup({self.ring}, {self.ideal})"


@dataclass(frozen=True)
class Report:
    command: str
    args: tuple     # positional names
    options: tuple  # ((key, int | (int, int)), ...)
    span: tuple = field(default=(0, 0), compare=False)

    def text(self):
        parts = list(self.args)
        for k, v in self.options:
            parts.append(f"{k}=[{v[0]}, {v[1]}]" if isinstance(v, tuple) else f"{k}={v}")
        return f"report {self.command}({', '.join(parts)})"


@dataclass(frozen=True)
class Script:
    statements: tuple

    def text(self) -> str:
        return "".join(s.text() + ";\n" for s in self.statements)


pretty = Script.text


_COMMENT = re.compile(r"#[^\n]*")


class _ScriptParser(_Parser):
    def __init__(self, text):
        from ..expr import tokenize

        clean = _COMMENT.sub(lambda m: " " * len(m.group()), text)
        super().__init__(tokenize(clean), text)
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", text)]
        self.bound: dict = {}
        self.last_ring = None

    def where(self, pos):
        line = 0
        for i, s in enumerate(self.line_starts):
            if s <= pos:
                line = i
        return line + 1, pos - self.line_starts[line] + 1

    def fail(self, msg, pos=None):
        pos = self.peek()[2] if pos is None else pos
        raise ScriptError(msg, *self.where(pos))

    def error(self, msg):  # used by the expression parser
        self.fail(msg)

    def describe(self):
        kind, val, _ = self.peek()
        return "end of input" if kind == "eof" else repr(val)

    def expect(self, val):
        if self.peek()[:2] not in (("op", val), ("name", val)):
            self.fail(f"expected {val!r}, found {self.describe()}")
        return self.take()

    def is_op(self, val):
        return self.peek()[:2] == ("op", val)

    def name(self):
        if self.peek()[0] != "name":
            self.fail(f"expected a name, found {self.describe()}")
        return self.take()[1]

    def integer(self):
        neg = False
        if self.is_op("-"):
            self.take()
            neg = True
        if self.peek()[0] != "num":
            self.fail(f"expected an integer, found {self.describe()}")
        v = int(self.take()[1])
        return -v if neg else v

    def ref(self, kind):
        pos = self.peek()[2]
        n = self.name()
        if n not in self.bound:
            self.fail(f"unbound identifier {n!r}", pos)
        if self.bound[n] != kind:
            self.fail(f"{n!r} is a {self.bound[n]}, expected a {kind}", pos)
        return n

    # -- statements --

    def script(self):
        out = []
        while self.peek()[0] != "eof":
            if self.is_op(";"):
                self.take()
                continue
            start = self.peek()[2]
            st = self.statement(start)
            out.append(st)
            end_tok = self.toks[self.i - 1]
            if self.is_op(";"):
                self.take()
            elif self.peek()[0] != "eof" and self.where(self.peek()[2])[0] == self.where(end_tok[2])[0]:
                self.fail(f"expected ';' or end of line, found {self.describe()}")
        return Script(tuple(out))

    def statement(self, start):
        pos = self.peek()[2]
        kw = self.name()
        if kw == "report":
            return self.report(start)
        if kw not in KIND_OF_BINDING:
            self.fail(f"unknown statement {kw!r}", pos)
        name = self.name()
        self.expect("=")
        st = getattr(self, "bind_" + kw)(name, start)
        self.bound[name] = KIND_OF_BINDING[kw]
        return st

    def bind_ring(self, name, start):
        self.expect("poly")
        self.expect("(")
        vs = []
        if not self.is_op(")"):
            while True:
                v = self.name()
                self.expect(":")
                vs.append((v, self.integer()))
                if not self.is_op(","):
                    break
                self.take()
        self.expect(")")
        self.last_ring = name
        return RingDecl(name, tuple(vs), (start, self.peek()[2]))

    def bind_ideal(self, name, start):
        self.expect("(")
        gens = []
        if not self.is_op(")"):
            while True:
                gens.append(self.expr())
                if self.is_op(")"):
                    break
                if not self.is_op(","):
                    self.fail(f"expected ',' or ')', found {self.describe()}")
                self.take()
        self.expect(")")
        if self.peek()[:2] == ("name", "in"):
            self.take()
            ring = self.ref("ring")
        else:
            if self.last_ring is None:
                self.fail("ideal declared before any ring")
            ring = self.last_ring
        return IdealDecl(name, tuple(gens), ring, (start, self.peek()[2]))

    def bind_rees(self, name, start):
        pos = self.peek()[2]
        kind = self.name()
        if kind not in ("rees_ext", "rees_sym"):
            self.fail(f"unknown Rees construction {kind!r}", pos)
        self.expect("(")
        ring = self.ref("ring")
        self.expect(",")
        if kind == "rees_ext":
            st = ReesDecl(name, kind, ring, ideal=self.ref("ideal"))
        else:
            st = ReesDecl(name, kind, ring, module=self.module())
        self.expect(")")
        return ReesDecl(st.name, st.kind, st.ring, st.ideal, st.module, (start, self.peek()[2]))

    def module(self):
        self.expect("module")
        self.expect("(")
        gens, diffs = [], []
        while True:
            g = self.name()
            self.expect(":")
            k = self.integer()
            w = 0
            if self.is_op(":"):
                self.take()
                w = self.integer()
            gens.append((g, k, w))
            if not self.is_op(","):
                break
            self.take()
        if self.is_op(";"):
            self.take()
            while True:
                self.expect("d")
                self.expect("(")
                pos = self.peek()[2]
                g = self.name()
                if g not in {x[0] for x in gens}:
                    self.fail(f"unknown module generator {g!r}", pos)
                self.expect(")")
                self.expect("=")
                diffs.append((g, self.expr()))
                if not self.is_op(","):
                    break
                self.take()
        self.expect(")")
        return ModuleSpec(tuple(gens), tuple(diffs))

    def bind_blowup(self, name, start):
        self.expect("blowup")
        self.expect("(")
        ring = self.ref("ring")
        self.expect(",")
        ideal = self.ref("ideal")
        self.expect(")")
        return BlowupDecl(name, ring, ideal, (start, self.peek()[2]))

    def report(self, start):
        pos = self.peek()[2]
        cmd = self.name()
        if cmd not in COMMANDS:
            self.fail(f"unknown command {cmd!r}", pos)
        kinds, allowed = COMMANDS[cmd]
        self.expect("(")
        args, opts = [], []
        while not self.is_op(")"):
            if len(args) < len(kinds) and not opts:
                args.append(self.ref(kinds[len(args)]))
            else:
                pos = self.peek()[2]
                key = self.name()
                if key not in allowed:
                    self.fail(f"unknown option {key!r} for {cmd}", pos)
                self.expect("=")
                if self.is_op("["):
                    self.take()
                    a = self.integer()
                    self.expect(",")
                    b = self.integer()
                    self.expect("]")
                    opts.append((key, (a, b)))
                else:
                    opts.append((key, self.integer()))
            if not self.is_op(","):
                break
            self.take()
        self.expect(")")
        if len(args) != len(kinds):
            self.fail(f"{cmd} expects {len(kinds)} argument(s): {', '.join(kinds)}")
        return Report(cmd, tuple(args), tuple(opts), (start, self.peek()[2]))


def parse(text: str) -> Script:
    return _ScriptParser(text).script()
