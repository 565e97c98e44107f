"""Clone slices (all k-ary term operations), hypersubstitutions, and
derived algebras.

Generation is breadth-first by composition depth, so each operation's
witness term has minimal depth; operations discovered in the same round are
ordered lexicographically by table.  A completed slice is sorted
lexicographically by table, and that order indexes hypersubstitution
enumeration.
"""

import itertools

import numpy as np

from . import kernels
from .errors import CloneLimitError, FormulaError, ValidationError
from .terms import App, TermOperation, Var, substitute, term_to_table, variable_tables

DEFAULT_CLONE_LIMIT = 4096

_COMPOSE_CHUNK = 8192


def formal_vars(k):
    return [Var("x%d" % (i + 1)) for i in range(k)]


def iter_clone_ops(a, arity, limit=DEFAULT_CLONE_LIMIT):
    """Yield the k-ary term operations of ``a`` in discovery order.

    Seeds are the k projections followed by every nullary-symbol constant
    viewed as k-ary; each closure round applies every basic symbol to all
    tuples of already-found operations.  Raises CloneLimitError as soon as
    the count passes ``limit``.
    """
    if arity < 0:
        raise ValidationError("arity must be >= 0")
    n = a.size
    total = n ** arity

    ops = []
    seen = set()

    def add(table, witness):
        key = table.tobytes()
        if key in seen:
            return None
        if len(ops) + 1 > limit:
            raise CloneLimitError(len(ops) + 1, limit)
        op = TermOperation(arity, table, witness)
        seen.add(key)
        ops.append(op)
        return op

    seeds = []
    for j, col in enumerate(variable_tables(n, arity)):
        seeds.append((col, Var("x%d" % (j + 1))))
    for sym, ar in a.sig.symbols:
        if ar == 0:
            seeds.append((np.full(total, a.tables[sym][0], dtype=np.int64), App(sym, ())))
    for table, witness in seeds:
        op = add(table, witness)
        if op is not None:
            yield op

    old_count = 0
    while old_count < len(ops):
        prev = len(ops)
        stacked = np.vstack([op.table for op in ops]) if ops else np.zeros((0, total), np.int64)
        round_new = []
        for sym, ar in a.sig.symbols:
            if ar == 0:
                continue
            combos_iter = (
                c
                for c in itertools.product(range(prev), repeat=ar)
                if max(c) >= old_count
            )
            while True:
                chunk = list(itertools.islice(combos_iter, _COMPOSE_CHUNK))
                if not chunk:
                    break
                combos = np.array(chunk, dtype=np.int64).reshape(len(chunk), ar)
                results = kernels.compose_batch(a.tables[sym], stacked, combos, n)
                for row, combo in zip(results, chunk):
                    key = row.tobytes()
                    if key in seen:
                        continue
                    if len(ops) + len(round_new) + 1 > limit:
                        raise CloneLimitError(len(ops) + len(round_new) + 1, limit)
                    seen.add(key)
                    witness = App(sym, tuple(ops[i].witness for i in combo))
                    round_new.append(TermOperation(arity, row, witness))
        round_new.sort(key=lambda op: tuple(op.table))
        for op in round_new:
            ops.append(op)
            yield op
        old_count = prev


class CloneSlice:
    """All term operations of one arity, sorted lexicographically by table."""

    def __init__(self, algebra, arity, operations):
        self.algebra = algebra
        self.arity = arity
        self.operations = tuple(sorted(operations, key=lambda op: tuple(op.table)))

    def __len__(self):
        return len(self.operations)

    def __iter__(self):
        return iter(self.operations)

    def __getitem__(self, i):
        return self.operations[i]

    def __repr__(self):
        return "CloneSlice(%r, arity=%d, %d operations)" % (
            self.algebra.name,
            self.arity,
            len(self.operations),
        )


def clone_slice(a, arity, limit=DEFAULT_CLONE_LIMIT):
    return CloneSlice(a, arity, list(iter_clone_ops(a, arity, limit)))


class Hypersubstitution:
    """A finite map from hypervariables (or basic symbols) to term operations."""

    def __init__(self, mapping):
        self.mapping = dict(mapping)

    def __getitem__(self, name):
        return self.mapping[name]

    def __contains__(self, name):
        return name in self.mapping

    def items(self):
        return self.mapping.items()

    def witness_terms(self):
        return {name: op.witness for name, op in self.mapping.items()}

    def __repr__(self):
        inner = ",".join(
            "%s:=%s" % (name, op) for name, op in sorted(self.mapping.items())
        )
        return "Hypersubstitution(%s)" % inner


def enumerate_hypersubstitutions(hypervars, slices):
    """All assignments of slice operations to the given (name, arity) list.

    Index tuples run with the FIRST hypervariable varying fastest, so the
    first reported witness matches the published expectations (e.g. the
    join/meet witness on M3).  The empty list yields one empty substitution.
    """
    hypervars = list(hypervars)
    for name, arity in hypervars:
        if arity not in slices:
            raise ValidationError("missing clone slice for arity %d" % arity)
    ranges = [range(len(slices[arity])) for _, arity in reversed(hypervars)]
    for rev_idx in itertools.product(*ranges):
        idx = rev_idx[::-1]
        yield Hypersubstitution(
            {
                name: slices[arity][i]
                for (name, arity), i in zip(hypervars, idx)
            }
        )


def apply_hypersubstitution(h, t):
    """Instantiate hypervariables by their witness terms, variables untouched."""
    if isinstance(t, Var):
        return t
    args = tuple(apply_hypersubstitution(h, s) for s in t.args)
    if isinstance(t, App):
        return App(t.symbol, args)
    if t.hypervar not in h:
        raise FormulaError("unbound hypervariable %r" % t.hypervar)
    op = h[t.hypervar]
    if op.arity != len(args):
        raise FormulaError(
            "arity mismatch: %s is used %d-ary but bound to a %d-ary operation"
            % (t.hypervar, len(args), op.arity)
        )
    mapping = {"x%d" % (j + 1): arg for j, arg in enumerate(args)}
    return substitute(op.witness, mapping)


def apply_hypersubstitution_formula(h, f):
    from .terms import HornFormula

    premises = [
        (apply_hypersubstitution(h, l), apply_hypersubstitution(h, r))
        for l, r in f.premises
    ]
    conclusion = (
        apply_hypersubstitution(h, f.conclusion[0]),
        apply_hypersubstitution(h, f.conclusion[1]),
    )
    return HornFormula(premises, conclusion)


def derived_algebra(a, sigma, name=None):
    """Same carrier, each basic table replaced by sigma's term operation."""
    mapping = sigma.mapping if isinstance(sigma, Hypersubstitution) else dict(sigma)
    tables = {}
    for sym, arity in a.sig.symbols:
        if sym not in mapping:
            raise ValidationError("hypersubstitution misses symbol %r" % sym)
        op = mapping[sym]
        if op.arity != arity:
            raise ValidationError(
                "arity mismatch for %r: symbol is %d-ary, operation is %d-ary"
                % (sym, arity, op.arity)
            )
        tables[sym] = op.table
    from .algebra import FiniteAlgebra

    if name is None:
        name = "%s^sigma" % a.name
    return FiniteAlgebra(name, a.sig, a.size, tables)


def derive_by_terms(a, terms, name=None):
    """Derived algebra from witness terms (formal variables x1..xk)."""
    sigma = {}
    for sym, arity in a.sig.symbols:
        if sym not in terms:
            raise ValidationError("missing term for symbol %r" % sym)
        sigma[sym] = term_to_table(a, terms[sym], ["x%d" % (i + 1) for i in range(arity)])
    return derived_algebra(a, Hypersubstitution(sigma), name=name)


def enumerate_derived_algebras(a, limit=DEFAULT_CLONE_LIMIT, dedup=False):
    """All derived algebras, one per choice of term operation per symbol.

    Pairs (hypersubstitution-on-symbols, derived algebra); no deduplication
    unless requested each table tuple is reported as produced.
    """
    arities = sorted({ar for _, ar in a.sig.symbols})
    slices = {ar: clone_slice(a, ar, limit) for ar in arities}
    syms = [(sym, ar) for sym, ar in a.sig.symbols]
    seen = set()
    count = 0
    for sigma in enumerate_hypersubstitutions(syms, slices):
        b = derived_algebra(a, sigma, name="%s^%d" % (a.name, count))
        count += 1
        if dedup:
            key = tuple(b.tables[s].tobytes() for s in b.sig.names())
            if key in seen:
                continue
            seen.add(key)
        yield sigma, b
