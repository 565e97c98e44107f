"""Term and hyperterm ASTs, the formula DSL, evaluation, and the T/T^-1
transformations between quasi-identities and hyper-quasi-identities.

Grammar:  formula := [eq ("&" eq)* "->"] eq ;  eq := term "=" term ;
term := IDENT | IDENT "(" term ("," term)* ")".  A bare lowercase identifier
is always a variable; a lowercase identifier with parentheses is a signature
symbol (so nullary symbols are written ``zero()``); an uppercase-initial
identifier with parentheses is a hypervariable whose arity is fixed by its
first occurrence.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import FormulaError, ParseError


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple


@dataclass(frozen=True)
class HApp:
    hypervar: str
    args: tuple


def term_is_hyper(t):
    if isinstance(t, Var):
        return False
    if isinstance(t, HApp):
        return True
    return any(term_is_hyper(s) for s in t.args)


def term_variables(t, out=None):
    """Variable names in order of first occurrence (prefix walk)."""
    if out is None:
        out = []
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    else:
        for s in t.args:
            term_variables(s, out)
    return out


def term_hypervars(t, out=None):
    """Hypervariable -> arity in order of first occurrence."""
    if out is None:
        out = {}
    if isinstance(t, Var):
        return out
    if isinstance(t, HApp):
        if t.hypervar not in out:
            out[t.hypervar] = len(t.args)
    for s in t.args:
        term_hypervars(s, out)
    return out


class HornFormula:
    """Premise equations (possibly none) and one conclusion equation."""

    def __init__(self, premises, conclusion):
        self.premises = tuple((l, r) for l, r in premises)
        self.conclusion = (conclusion[0], conclusion[1])

    def equations(self):
        return list(self.premises) + [self.conclusion]

    def variables(self):
        out = []
        for l, r in self.equations():
            term_variables(l, out)
            term_variables(r, out)
        return out

    def hypervars(self):
        out = {}
        for l, r in self.equations():
            term_hypervars(l, out)
            term_hypervars(r, out)
        return out

    @property
    def is_hyper(self):
        return any(
            term_is_hyper(l) or term_is_hyper(r) for l, r in self.equations()
        )

    def __eq__(self, other):
        return (
            isinstance(other, HornFormula)
            and self.premises == other.premises
            and self.conclusion == other.conclusion
        )

    def __hash__(self):
        return hash((self.premises, self.conclusion))

    def __repr__(self):
        return "HornFormula(%s)" % format_formula(self)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(->|[A-Za-z][A-Za-z0-9_]*|[(),=&])")


def _tokenize(src):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            if src[pos:].strip():
                raise ParseError("unexpected character %r" % src[pos:].lstrip()[0],
                                 pos + len(src[pos:]) - len(src[pos:].lstrip()))
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append((None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src, sig):
        self.src = src
        self.sig = sig
        self.tokens = _tokenize(src)
        self.i = 0
        self.hyper_arities = {}

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.advance()
        if tok != want:
            raise ParseError("expected %r, found %r" % (want, tok), pos)
        return tok

    def term(self):
        tok, pos = self.advance()
        if tok is None or not tok[0].isalpha():
            raise ParseError("expected a term, found %r" % tok, pos)
        name = tok
        if self.peek() != "(":
            if name[0].isupper():
                raise ParseError(
                    "hypervariable %r needs an argument list" % name, pos
                )
            return Var(name)
        self.expect("(")
        args = []
        if self.peek() != ")":
            args.append(self.term())
            while self.peek() == ",":
                self.advance()
                args.append(self.term())
        self.expect(")")
        args = tuple(args)
        if name[0].isupper():
            known = self.hyper_arities.get(name)
            if known is None:
                self.hyper_arities[name] = len(args)
            elif known != len(args):
                raise ParseError(
                    "hypervariable %s used with arity %d after arity %d"
                    % (name, len(args), known),
                    pos,
                )
            return HApp(name, args)
        if name not in self.sig.arities:
            raise ParseError("unknown symbol %r" % name, pos)
        want = self.sig.arities[name]
        if want != len(args):
            raise ParseError(
                "arity clash: %s expects %d arguments, got %d"
                % (name, want, len(args)),
                pos,
            )
        return App(name, args)

    def equation(self):
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return (lhs, rhs)

    def formula(self):
        eqs = [self.equation()]
        while self.peek() == "&":
            self.advance()
            eqs.append(self.equation())
        if self.peek() == "->":
            self.advance()
            conclusion = self.equation()
            premises = eqs
        else:
            if len(eqs) != 1:
                raise ParseError("conjunction needs a '->' conclusion", self.pos())
            premises, conclusion = [], eqs[0]
        tok, pos = self.advance()
        if tok is not None:
            raise ParseError("trailing input %r" % tok, pos)
        return HornFormula(premises, conclusion)


def parse_formula(src, sig):
    """Parse the DSL into a HornFormula over Term or HyperTerm nodes."""
    return _Parser(src, sig).formula()


def parse_term(src, sig):
    """Parse a single term (used for witness replay)."""
    p = _Parser(src, sig)
    t = p.term()
    tok, pos = p.advance()
    if tok is not None:
        raise ParseError("trailing input %r" % tok, pos)
    return t


def parse_horn_file(text, sig):
    """Formulas one per line; '#' comments and blank lines ignored."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line, sig))
    return out


# ---------------------------------------------------------------------------
# printing (canonical spacing: tight argument lists, spaced = & ->)

def format_term(t):
    if isinstance(t, Var):
        return t.name
    head = t.symbol if isinstance(t, App) else t.hypervar
    return "%s(%s)" % (head, ",".join(format_term(s) for s in t.args))


def format_formula(f):
    eqs = ["%s = %s" % (format_term(l), format_term(r)) for l, r in f.premises]
    conclusion = "%s = %s" % (format_term(f.conclusion[0]), format_term(f.conclusion[1]))
    if eqs:
        return "%s -> %s" % (" & ".join(eqs), conclusion)
    return conclusion


# ---------------------------------------------------------------------------
# evaluation

def eval_term(a, t, asg):
    """Recursive evaluation of a Term under an assignment dict."""
    if isinstance(t, Var):
        if t.name not in asg:
            raise FormulaError("unbound variable %r" % t.name)
        return asg[t.name]
    if isinstance(t, HApp):
        raise FormulaError("cannot evaluate hypervariable %r directly" % t.hypervar)
    args = tuple(eval_term(a, s, asg) for s in t.args)
    return a.apply(t.symbol, args)


class TermOperation:
    """An n-ary operation on a carrier as a flat table plus a witness term."""

    def __init__(self, arity, table, witness):
        self.arity = int(arity)
        arr = np.asarray(table, dtype=np.int64).ravel().copy()
        arr.setflags(write=False)
        self.table = arr
        self.witness = witness

    def key(self):
        return self.table.tobytes()

    def __eq__(self, other):
        return (
            isinstance(other, TermOperation)
            and self.arity == other.arity
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((self.arity, self.key()))

    def __repr__(self):
        return "TermOperation(%d, %s)" % (self.arity, format_term(self.witness))


def variable_tables(n, k):
    """Value of each of k variables across all n^k row-major assignments."""
    total = n ** k
    out = []
    for j in range(k):
        block = n ** (k - 1 - j)
        out.append((np.arange(total, dtype=np.int64) // block) % n)
    return out


def term_to_table(a, t, var_order):
    """The term operation induced by t with arguments ordered by var_order."""
    var_order = list(var_order)
    missing = [v for v in term_variables(t) if v not in var_order]
    if missing:
        raise FormulaError("variable %r missing from variable order" % missing[0])
    k = len(var_order)
    n = a.size
    total = n ** k
    columns = dict(zip(var_order, variable_tables(n, k)))

    def walk(node):
        if isinstance(node, Var):
            return columns[node.name]
        if isinstance(node, HApp):
            raise FormulaError("cannot tabulate hypervariable %r" % node.hypervar)
        table = a.table(node.symbol)
        if not node.args:
            return np.full(total, table[0], dtype=np.int64)
        idx = walk(node.args[0]).copy()
        for s in node.args[1:]:
            idx *= n
            idx += walk(s)
        return table[idx]

    return TermOperation(k, walk(t), t)


# ---------------------------------------------------------------------------
# T and T^-1

def transform_T(q):
    """Replace each basic symbol with a dedicated hypervariable F1, F2, ...

    Returns the hyper formula together with the recorded binding
    {hypervariable: original symbol}; feeding both to transform_Tinv
    restores the input.
    """
    names = {}

    def fresh(symbol):
        if symbol not in names:
            names[symbol] = "F%d" % (len(names) + 1)
        return names[symbol]

    def walk(t):
        if isinstance(t, Var):
            return t
        if isinstance(t, HApp):
            raise FormulaError("transform_T expects a plain Term formula")
        return HApp(fresh(t.symbol), tuple(walk(s) for s in t.args))

    premises = [(walk(l), walk(r)) for l, r in q.premises]
    conclusion = (walk(q.conclusion[0]), walk(q.conclusion[1]))
    binding = {hv: sym for sym, hv in names.items()}
    return HornFormula(premises, conclusion), binding


def transform_Tinv(h, binding, sig=None):
    """Replace each hypervariable by its bound basic symbol."""
    arities = h.hypervars()
    for hv, arity in arities.items():
        if hv not in binding:
            raise FormulaError("unbound hypervariable %r" % hv)
        if sig is not None and sig.arity(binding[hv]) != arity:
            raise FormulaError(
                "arity mismatch: %s is %d-ary but %s is %d-ary"
                % (hv, arity, binding[hv], sig.arity(binding[hv]))
            )

    def walk(t):
        if isinstance(t, Var):
            return t
        args = tuple(walk(s) for s in t.args)
        if isinstance(t, HApp):
            return App(binding[t.hypervar], args)
        return App(t.symbol, args)

    premises = [(walk(l), walk(r)) for l, r in h.premises]
    conclusion = (walk(h.conclusion[0]), walk(h.conclusion[1]))
    return HornFormula(premises, conclusion)


def substitute(t, mapping):
    """Simultaneous substitution of variables by terms."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    args = tuple(substitute(s, mapping) for s in t.args)
    if isinstance(t, HApp):
        return HApp(t.hypervar, args)
    return App(t.symbol, args)
