"""CCS terms: actions, relabelings, the process AST, concrete syntax and substitution.

Concrete syntax (ASCII)::

    0            nil
    a.P  'a.P    input / output prefix
    t.P          tau prefix
    P + Q        sum
    P | Q        parallel composition
    nu {a,b} P   restriction on a set of names
    P[b/a]       relabeling (a becomes b)
    rec A. P     recursion
    A            variable

Precedence from loosest to tightest: ``+``, ``|``, prefixes / ``nu`` / ``rec``,
postfix relabeling.  Bodies of ``a.``, ``nu`` and ``rec`` extend over a single
unary term, so ``rec A. a.A + b.0`` is ``(rec A. a.A) + b.0``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import CaptureError, CCSSyntaxError, DefinitionError, UnboundConstruct

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"t", "rec", "nu"})
HOLE_NAME = "_"


def check_name(text: str) -> str:
    if not isinstance(text, str) or not NAME_RE.match(text) or text in RESERVED:
        raise ValueError(f"invalid name: {text!r}")
    return text


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True, order=True)
class Label:
    name: str
    output: bool = False

    def __post_init__(self):
        check_name(self.name)

    def complement(self) -> "Label":
        return Label(self.name, not self.output)

    def __str__(self):
        return ("'" if self.output else "") + self.name


@dataclass(frozen=True)
class Tau:
    def __str__(self):
        return "t"


TAU = Tau()
Action = Union[Tau, Label]


def In(name: str) -> Label:
    return Label(name, False)


def Out(name: str) -> Label:
    return Label(name, True)


def is_tau(u: Action) -> bool:
    return isinstance(u, Tau)


def action_key(u: Action):
    """Total order on actions: tau first, then by name, inputs before outputs."""
    if isinstance(u, Tau):
        return (0, "", False)
    return (1, u.name, u.output)


def parse_action(text: str) -> Action:
    text = text.strip()
    if text in ("t", "tau"):
        return TAU
    if text.startswith("'"):
        return Out(text[1:].strip())
    return In(text)


@dataclass(frozen=True)
class Relabeling:
    """A finite name map, identity outside its domain.  ``pairs`` is sorted by old name."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        olds = [old for old, _ in self.pairs]
        if not self.pairs:
            raise UnboundConstruct("empty relabeling")
        if len(set(olds)) != len(olds):
            raise UnboundConstruct(f"relabeling maps a name twice: {self.pairs}")
        for old, new in self.pairs:
            check_name(old)
            check_name(new)
        if list(self.pairs) != sorted(self.pairs):
            object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "Relabeling":
        return cls(tuple(sorted(mapping.items())))

    def rename(self, name: str) -> str:
        for old, new in self.pairs:
            if old == name:
                return new
        return name

    def __call__(self, u: Action) -> Action:
        return relabel_action(self, u)

    def __str__(self):
        return "[" + ", ".join(f"{new}/{old}" for old, new in self.pairs) + "]"


def relabel_action(rf: Relabeling, u: Action) -> Action:
    if isinstance(u, Tau):
        return u
    return Label(rf.rename(u.name), u.output)


# ---------------------------------------------------------------------------
# Processes


class Process:
    """Base of the immutable process AST.  Hashes are computed once at construction."""

    __match_args__: tuple[str, ...] = ()

    def __post_init__(self):
        h = hash((type(self).__name__,) + tuple(getattr(self, n) for n in self.__match_args__))
        object.__setattr__(self, "_h", h)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._h != other._h:
            return False
        return all(getattr(self, n) == getattr(other, n) for n in self.__match_args__)

    def __ne__(self, other):
        return not self == other

    def __str__(self):
        return pretty(self)

    # convenience builders used heavily in tests
    def __add__(self, other: "Process") -> "Process":
        return Sum(self, other)

    def __or__(self, other: "Process") -> "Process":
        return Par(self, other)


@dataclass(frozen=True, eq=False)
class Nil(Process):
    pass


@dataclass(frozen=True, eq=False)
class Var(Process):
    name: str


@dataclass(frozen=True, eq=False)
class Prefix(Process):
    action: Action
    body: Process


@dataclass(frozen=True, eq=False)
class Sum(Process):
    left: Process
    right: Process


@dataclass(frozen=True, eq=False)
class Par(Process):
    left: Process
    right: Process


@dataclass(frozen=True, eq=False)
class Restr(Process):
    names: frozenset
    body: Process

    def __post_init__(self):
        if not isinstance(self.names, frozenset):
            object.__setattr__(self, "names", frozenset(self.names))
        if not self.names:
            raise ValueError("restriction needs at least one name")
        for n in self.names:
            check_name(n)
        super().__post_init__()


@dataclass(frozen=True, eq=False)
class Relab(Process):
    body: Process
    rf: Relabeling


@dataclass(frozen=True, eq=False)
class Rec(Process):
    var: str
    body: Process


NIL = Nil()


def prefix(u: Action | str, body: Process = NIL) -> Process:
    if isinstance(u, str):
        u = parse_action(u)
    return Prefix(u, body)


# ---------------------------------------------------------------------------
# Structural helpers


def _memo(p: Process, key: str, compute):
    try:
        return p.__dict__[key]
    except KeyError:
        value = compute(p)
        object.__setattr__(p, key, value)
        return value


def _fv(p: Process) -> frozenset:
    match p:
        case Nil():
            return frozenset()
        case Var(name):
            return frozenset({name})
        case Prefix(_, body) | Restr(_, body) | Relab(body, _):
            return free_variables(body)
        case Sum(left, right) | Par(left, right):
            return free_variables(left) | free_variables(right)
        case Rec(var, body):
            return free_variables(body) - {var}
    raise TypeError(p)


def free_variables(p: Process) -> frozenset:
    return _memo(p, "_fv", _fv)


def is_closed(p: Process) -> bool:
    return not free_variables(p)


def _has_rec(p: Process) -> bool:
    match p:
        case Rec():
            return True
        case Nil() | Var():
            return False
        case Prefix(_, body) | Restr(_, body) | Relab(body, _):
            return has_rec(body)
        case Sum(left, right) | Par(left, right):
            return has_rec(left) or has_rec(right)
    raise TypeError(p)


def has_rec(p: Process) -> bool:
    return _memo(p, "_rec", _has_rec)


def names(p: Process) -> frozenset:
    """Every identifier occurring in ``p``: channels, restricted and relabeled names, variables."""
    match p:
        case Nil():
            return frozenset()
        case Var(name):
            return frozenset({name})
        case Prefix(u, body):
            here = frozenset() if is_tau(u) else frozenset({u.name})
            return here | names(body)
        case Sum(left, right) | Par(left, right):
            return names(left) | names(right)
        case Restr(ns, body):
            return ns | names(body)
        case Relab(body, rf):
            return names(body) | {n for pair in rf.pairs for n in pair}
        case Rec(var, body):
            return names(body) | {var}
    raise TypeError(p)


def size(p: Process) -> int:
    match p:
        case Nil() | Var():
            return 1
        case Prefix(_, body) | Restr(_, body) | Relab(body, _) | Rec(_, body):
            return 1 + size(body)
        case Sum(left, right) | Par(left, right):
            return 1 + size(left) + size(right)
    raise TypeError(p)


def substitute(body: Process, var: str, value: Process) -> Process:
    """Replace the free occurrences of ``var`` in ``body`` by ``value``.

    Raises CaptureError when an open ``value`` would be captured by a binder of
    ``body``; closed values never are.
    """
    value_fv = free_variables(value)

    def go(p: Process) -> Process:
        if var not in free_variables(p):
            return p
        match p:
            case Var():
                return value
            case Prefix(u, b):
                return Prefix(u, go(b))
            case Sum(l, r):
                return Sum(go(l), go(r))
            case Par(l, r):
                return Par(go(l), go(r))
            case Restr(ns, b):
                return Restr(ns, go(b))
            case Relab(b, rf):
                return Relab(go(b), rf)
            case Rec(y, b):
                if y in value_fv:
                    raise CaptureError(
                        f"substituting {pretty(value)} for {var} would be captured by rec {y}"
                    )
                return Rec(y, go(b))
        raise TypeError(p)

    return go(body)


def canonical(p: Process) -> Process:
    """Alpha-normal form: Rec binders renamed X0, X1, ... in preorder.

    Names already free in ``p`` are skipped so no free variable is captured.
    """
    if not has_rec(p):
        return p
    try:
        return p.__dict__["_canon"]
    except KeyError:
        pass
    avoid = free_variables(p)
    counter = itertools.count()

    def fresh() -> str:
        while True:
            name = f"X{next(counter)}"
            if name not in avoid:
                return name

    def go(q: Process, env: dict) -> Process:
        if not env and not has_rec(q):
            return q
        match q:
            case Nil():
                return q
            case Var(name):
                return Var(env[name]) if name in env else q
            case Prefix(u, b):
                return Prefix(u, go(b, env))
            case Sum(l, r):
                return Sum(go(l, env), go(r, env))
            case Par(l, r):
                return Par(go(l, env), go(r, env))
            case Restr(ns, b):
                return Restr(ns, go(b, env))
            case Relab(b, rf):
                return Relab(go(b, env), rf)
            case Rec(y, b):
                z = fresh()
                return Rec(z, go(b, {**env, y: z}))
        raise TypeError(q)

    result = go(p, {})
    object.__setattr__(p, "_canon", result)
    object.__setattr__(result, "_canon", result)
    return result


def alpha_equal(p: Process, q: Process) -> bool:
    return canonical(p) == canonical(q)


# ---------------------------------------------------------------------------
# Pretty printing

_SUM, _PAR, _UNARY, _ATOM = range(4)


def _pp(p: Process, level: int) -> str:
    match p:
        case Nil():
            return "0"
        case Var(name):
            return name
        case Prefix(u, body):
            text, mine = f"{u}.{_pp(body, _UNARY)}", _UNARY
        case Restr(ns, body):
            text, mine = "nu {" + ", ".join(sorted(ns)) + "} " + _pp(body, _UNARY), _UNARY
        case Rec(var, body):
            text, mine = f"rec {var}. {_pp(body, _UNARY)}", _UNARY
        case Relab(body, rf):
            text, mine = _pp(body, _ATOM) + str(rf), _ATOM
        case Sum(left, right):
            text, mine = f"{_pp(left, _SUM)} + {_pp(right, _PAR)}", _SUM
        case Par(left, right):
            text, mine = f"{_pp(left, _PAR)} | {_pp(right, _UNARY)}", _PAR
        case _:
            raise TypeError(p)
    return f"({text})" if mine < level else text


def pretty(p: Process) -> str:
    return _memo(p, "_pretty", lambda q: _pp(q, _SUM))


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<comment>\#[^\n]*)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<sym>[0.+|(){}\[\],/'=;_])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CCSSyntaxError(line, pos - line_start + 1, "a token", text[pos])
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok("ident" if kind == "ident" else chunk, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, allow_hole: bool = False):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_hole = allow_hole

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        tok = self.peek()
        raise CCSSyntaxError(tok.line, tok.col, expected, tok.text or "end of input")

    def expect(self, kind: str, what: str | None = None) -> _Tok:
        if self.peek().kind != kind:
            self.fail(what or repr(kind))
        return self.advance()

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in RESERVED:
            self.fail("a name")
        return self.advance().text

    def proc(self) -> Process:
        left = self.par()
        while self.peek().kind == "+":
            self.advance()
            left = Sum(left, self.par())
        return left

    def par(self) -> Process:
        left = self.unary()
        while self.peek().kind == "|":
            self.advance()
            left = Par(left, self.unary())
        return left

    def unary(self) -> Process:
        actions: list[Action] = []
        while True:
            tok = self.peek()
            if tok.kind == "'":
                self.advance()
                actions.append(Out(self.name()))
                self.expect(".")
            elif tok.kind == "ident" and self.peek(1).kind == "." and tok.text not in ("rec", "nu"):
                self.advance()
                self.advance()
                actions.append(TAU if tok.text == "t" else In(tok.text))
            else:
                break
        p = self.atom()
        while self.peek().kind == "[":
            p = Relab(p, self.relabeling())
        for u in reversed(actions):
            p = Prefix(u, p)
        return p

    def atom(self) -> Process:
        tok = self.peek()
        if tok.kind == "0":
            self.advance()
            return NIL
        if tok.kind == "_":
            if not self.allow_hole:
                self.fail("a process (holes are only allowed in contexts)")
            self.advance()
            return Var(HOLE_NAME)
        if tok.kind == "(":
            self.advance()
            p = self.proc()
            self.expect(")")
            return p
        if tok.kind == "ident" and tok.text == "nu":
            self.advance()
            self.expect("{")
            ns = [self.name()]
            while self.peek().kind == ",":
                self.advance()
                ns.append(self.name())
            self.expect("}")
            return Restr(frozenset(ns), self.unary())
        if tok.kind == "ident" and tok.text == "rec":
            self.advance()
            var = self.name()
            self.expect(".")
            return Rec(var, self.unary())
        if tok.kind == "ident" and tok.text not in RESERVED:
            return Var(self.advance().text)
        self.fail("a process")

    def relabeling(self) -> Relabeling:
        self.expect("[")
        pairs = []
        while True:
            new_tok = self.peek()
            if new_tok.kind != "ident":
                self.fail("a relabeling clause new/old")
            if new_tok.text in RESERVED:
                raise UnboundConstruct(
                    f"{new_tok.line}:{new_tok.col}: {new_tok.text!r} cannot appear in a relabeling"
                )
            self.advance()
            self.expect("/")
            old_tok = self.peek()
            if old_tok.kind != "ident":
                self.fail("a name after '/'")
            if old_tok.text in RESERVED:
                raise UnboundConstruct(
                    f"{old_tok.line}:{old_tok.col}: {old_tok.text!r} cannot appear in a relabeling"
                )
            self.advance()
            pairs.append((old_tok.text, new_tok.text))
            if self.peek().kind == ",":
                self.advance()
                continue
            break
        self.expect("]")
        olds = [o for o, _ in pairs]
        if len(olds) != len(set(olds)):
            raise UnboundConstruct(f"relabeling renames a name twice: {pairs}")
        return Relabeling(tuple(sorted(pairs)))


def parse(text: str, *, allow_hole: bool = False) -> Process:
    parser = _Parser(text, allow_hole)
    p = parser.proc()
    if parser.peek().kind != "eof":
        parser.fail("end of input")
    return p


# ---------------------------------------------------------------------------
# Definition files:  agent NAME = proc ;


def parse_definitions(text: str) -> dict[str, Process]:
    """Parse and compile a definition file.

    A definition may mention itself (compiled to ``rec``) and any other agent,
    provided no two agents depend on each other.  References to other agents are
    inlined, so the result maps each name to a self-contained process.
    """
    parser = _Parser(text)
    raw: dict[str, Process] = {}
    while parser.peek().kind != "eof":
        tok = parser.peek()
        if tok.kind != "ident" or tok.text != "agent":
            parser.fail("'agent'")
        parser.advance()
        name_tok = parser.peek()
        name = parser.name()
        if name in raw:
            raise DefinitionError(f"{name_tok.line}:{name_tok.col}: agent {name} defined twice")
        parser.expect("=")
        raw[name] = parser.proc()
        parser.expect(";")

    compiled: dict[str, Process] = {}
    visiting: list[str] = []

    def build(name: str) -> Process:
        if name in compiled:
            return compiled[name]
        if name in visiting:
            cycle = " -> ".join(visiting[visiting.index(name):] + [name])
            raise DefinitionError(f"mutual recursion between agents: {cycle}")
        visiting.append(name)
        body = raw[name]
        for dep in sorted(free_variables(body) & raw.keys() - {name}):
            body = substitute(body, dep, build(dep))
        visiting.pop()
        compiled[name] = Rec(name, body) if name in free_variables(body) else body
        return compiled[name]

    for name in raw:
        build(name)
    return compiled


def resolve(p: Process, definitions: Mapping[str, Process]) -> Process:
    """Inline defined agents for the free variables of ``p``."""
    for name in sorted(free_variables(p) & definitions.keys()):
        p = substitute(p, name, definitions[name])
    return p


def sum_of(ps: Iterable[Process]) -> Process:
    ps = list(ps)
    if not ps:
        return NIL
    out = ps[0]
    for q in ps[1:]:
        out = Sum(out, q)
    return out
