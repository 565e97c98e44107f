"""Finite algebras as explicit operation tables, with first-order constructions.

Tables are flat int64 arrays in row-major order with the FIRST argument most
significant: index(a_1, ..., a_k) = sum a_j * n^(k-j).  The same mixed-radix
convention (first factor most significant) encodes tuples in direct products.
"""

import itertools
import re

import numpy as np

from .errors import CongruenceError, ParseError, ValidationError

SYMBOL_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


class Signature:
    """Ordered operation symbols with fixed arities.

    Symbol names are lowercase-initial identifiers; uppercase-initial names
    are reserved for hypervariables in the formula DSL.
    """

    def __init__(self, symbols):
        symbols = tuple((str(name), int(arity)) for name, arity in symbols)
        problems = []
        seen = set()
        for name, arity in symbols:
            if not SYMBOL_RE.match(name):
                problems.append("bad symbol name %r" % name)
            if name in seen:
                problems.append("duplicate symbol %r" % name)
            seen.add(name)
            if arity < 0:
                problems.append("negative arity for %r" % name)
        if problems:
            raise ValidationError(problems)
        self.symbols = symbols
        self.arities = dict(symbols)

    def arity(self, name):
        if name not in self.arities:
            raise ValidationError("unknown symbol %r" % name)
        return self.arities[name]

    def names(self):
        return [name for name, _ in self.symbols]

    def __eq__(self, other):
        return isinstance(other, Signature) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return "Signature(%r)" % (self.symbols,)


def table_index(args, n):
    idx = 0
    for a in args:
        idx = idx * n + a
    return idx


def decode_args(idx, n, k):
    args = [0] * k
    for j in range(k - 1, -1, -1):
        args[j] = idx % n
        idx //= n
    return tuple(args)


class FiniteAlgebra:
    """A finite carrier {0..size-1} with one total table per symbol."""

    def __init__(self, name, sig, size, tables):
        self.name = str(name)
        self.sig = sig
        self.size = int(size)
        fixed = {}
        for sym, table in tables.items():
            arr = np.asarray(table, dtype=np.int64).ravel().copy()
            arr.setflags(write=False)
            fixed[sym] = arr
        self.tables = fixed

    def table(self, symbol):
        if symbol not in self.tables:
            raise ValidationError("unknown symbol %r" % symbol)
        return self.tables[symbol]

    def apply(self, symbol, args):
        return op_apply(self, symbol, args)

    def elements(self):
        return range(self.size)

    def __repr__(self):
        return "FiniteAlgebra(%r, size=%d)" % (self.name, self.size)


def tables_equal(a, b):
    """True when a and b share signature, size and bit-identical tables."""
    if a.sig != b.sig or a.size != b.size:
        return False
    return all(np.array_equal(a.tables[s], b.tables[s]) for s in a.sig.names())


def algebra_problems(a):
    """Every invariant violation of a FiniteAlgebra, as strings."""
    problems = []
    if a.size < 1:
        problems.append("size must be >= 1, got %d" % a.size)
    for name, arity in a.sig.symbols:
        if name not in a.tables:
            problems.append("missing table for symbol %r" % name)
            continue
        table = a.tables[name]
        want = a.size ** arity
        if len(table) != want:
            problems.append(
                "length mismatch for %r: table has %d entries, expected %d"
                % (name, len(table), want)
            )
            continue
        bad = np.nonzero((table < 0) | (table >= a.size))[0]
        for i in bad:
            problems.append(
                "entry out of range for %r at flat index %d: %d"
                % (name, int(i), int(table[i]))
            )
    extra = set(a.tables) - set(a.sig.names())
    for name in sorted(extra):
        problems.append("table for symbol %r not in signature" % name)
    return problems


def validate_algebra(a):
    """Raise ValidationError listing every violation; no-op when valid."""
    problems = algebra_problems(a)
    if problems:
        raise ValidationError(problems)


def op_apply(a, symbol, args):
    arity = a.sig.arity(symbol)
    if len(args) != arity:
        raise ValidationError(
            "arity mismatch: %s expects %d arguments, got %d"
            % (symbol, arity, len(args))
        )
    for x in args:
        if not 0 <= x < a.size:
            raise ValidationError("element out of range: %d" % x)
    return int(a.tables[symbol][table_index(args, a.size)])


def trivial_algebra(sig, name="trivial"):
    """The one-element algebra of a signature (all tables constant 0)."""
    tables = {sym: np.zeros(1, dtype=np.int64) for sym, _ in sig.symbols}
    return FiniteAlgebra(name, sig, 1, tables)


def direct_product(family, sig=None, name=None):
    """Coordinatewise product; carrier codes are mixed-radix tuples.

    The empty product is the one-element trivial algebra of ``sig``.
    """
    family = list(family)
    if not family:
        if sig is None:
            raise ValidationError("empty product needs an explicit signature")
        return trivial_algebra(sig, name or "trivial")
    sig = family[0].sig
    for b in family[1:]:
        if b.sig != sig:
            raise ValidationError(
                "signature mismatch between %r and %r" % (family[0].name, b.name)
            )
    sizes = [a.size for a in family]
    total = 1
    for s in sizes:
        total *= s

    # coords[i] maps a product code to its i-th coordinate
    codes = np.arange(total, dtype=np.int64)
    coords = []
    rest = codes
    for s in reversed(sizes):
        coords.append(rest % s)
        rest = rest // s
    coords.reverse()

    tables = {}
    for sym, arity in sig.symbols:
        args = np.arange(total ** arity, dtype=np.int64)
        arg_codes = []
        rest = args
        for _ in range(arity):
            arg_codes.append(rest % total)
            rest = rest // total
        arg_codes.reverse()
        out = np.zeros(total ** arity, dtype=np.int64)
        for i, a in enumerate(family):
            idx = np.zeros(total ** arity, dtype=np.int64)
            for ac in arg_codes:
                idx = idx * a.size + coords[i][ac]
            out = out * a.size + a.tables[sym][idx]
        tables[sym] = out
    if name is None:
        name = " x ".join(a.name for a in family)
    return FiniteAlgebra(name, sig, total, tables)


def product_coordinates(code, sizes):
    """Decode a mixed-radix product code to its coordinate tuple."""
    out = [0] * len(sizes)
    for i in range(len(sizes) - 1, -1, -1):
        out[i] = code % sizes[i]
        code //= sizes[i]
    return tuple(out)


def subuniverse_generated(a, seed):
    """Least subset containing ``seed`` closed under all operations.

    Values of nullary symbols are always included.  Raises when the result
    would be empty (no seed and no nullary symbols).
    """
    members = set()
    for x in seed:
        if not 0 <= x < a.size:
            raise ValidationError("seed element out of range: %d" % x)
        members.add(int(x))
    for sym, arity in a.sig.symbols:
        if arity == 0:
            members.add(int(a.tables[sym][0]))
    if not members:
        raise ValidationError("empty subuniverse: no seed and no nullary symbols")
    frontier = list(members)
    while frontier:
        fresh = set()
        current = sorted(members)
        for sym, arity in a.sig.symbols:
            if arity == 0:
                continue
            table = a.tables[sym]
            for args in itertools.product(current, repeat=arity):
                if not any(x in frontier for x in args):
                    continue
                val = int(table[table_index(args, a.size)])
                if val not in members and val not in fresh:
                    fresh.add(val)
        members |= fresh
        frontier = fresh
    return frozenset(members)


def restrict_algebra(a, subset, name=None):
    """Re-index a closed subset as a standalone algebra (increasing order)."""
    elems = sorted(subset)
    index = {x: i for i, x in enumerate(elems)}
    k = len(elems)
    tables = {}
    for sym, arity in a.sig.symbols:
        table = a.tables[sym]
        out = np.zeros(k ** arity, dtype=np.int64)
        for i, args in enumerate(itertools.product(elems, repeat=arity)):
            out[i] = index[int(table[table_index(args, a.size)])]
        tables[sym] = out
    if name is None:
        name = "%s|{%s}" % (a.name, ",".join(str(x) for x in elems))
    return FiniteAlgebra(name, a.sig, k, tables)


SUBALGEBRA_CAP = 12


def all_subalgebras(a, cap=SUBALGEBRA_CAP):
    """Every nonempty closed subset with its re-indexed algebra.

    Results are ordered by (size, element tuple).  Carriers above ``cap``
    are rejected outright: the scan is over all 2^n subsets.
    """
    if a.size > cap:
        raise ValidationError(
            "carrier size %d exceeds subalgebra cap %d" % (a.size, cap)
        )
    constants = [int(a.tables[sym][0]) for sym, ar in a.sig.symbols if ar == 0]
    found = []
    for mask in range(1, 2 ** a.size):
        subset = [x for x in range(a.size) if mask >> x & 1]
        if any(c not in subset for c in constants):
            continue
        inside = set(subset)
        closed = True
        for sym, arity in a.sig.symbols:
            if arity == 0:
                continue
            table = a.tables[sym]
            for args in itertools.product(subset, repeat=arity):
                if int(table[table_index(args, a.size)]) not in inside:
                    closed = False
                    break
            if not closed:
                break
        if closed:
            found.append(frozenset(subset))
    found.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return [(s, restrict_algebra(a, s)) for s in found]


class Homomorphism:
    """A map between algebras of the same signature, given elementwise."""

    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        self.map = tuple(int(x) for x in mapping)

    def __call__(self, x):
        return self.map[x]

    def __repr__(self):
        return "Homomorphism(%r -> %r, %r)" % (
            self.source.name,
            self.target.name,
            self.map,
        )


def is_homomorphism(h):
    """(True, None) or (False, (symbol, argument tuple)) for the first break."""
    a, b = h.source, h.target
    if a.sig != b.sig:
        raise ValidationError("signature mismatch")
    if len(h.map) != a.size:
        raise ValidationError(
            "map length %d does not match source size %d" % (len(h.map), a.size)
        )
    for v in h.map:
        if not 0 <= v < b.size:
            raise ValidationError("map value out of range: %d" % v)
    # cheapest symbols first, so constant clashes are witnessed directly
    for sym, arity in sorted(a.sig.symbols, key=lambda s: s[1]):
        ta, tb = a.tables[sym], b.tables[sym]
        for args in itertools.product(range(a.size), repeat=arity):
            lhs = h.map[int(ta[table_index(args, a.size)])]
            rhs = int(tb[table_index([h.map[x] for x in args], b.size)])
            if lhs != rhs:
                return False, (sym, args)
    return True, None


def all_homomorphisms(a, b):
    """Every homomorphism a -> b, by exhaustive scan over maps."""
    homs = []
    for mapping in itertools.product(range(b.size), repeat=a.size):
        h = Homomorphism(a, b, mapping)
        ok, _ = is_homomorphism(h)
        if ok:
            homs.append(h)
    return homs


def identity_homomorphism(a):
    return Homomorphism(a, a, range(a.size))


def iso_search(a, b):
    """Lexicographically least isomorphism a -> b, or None.

    Backtracking over bijections in increasing target order, with forced
    propagation: whenever all arguments of a table entry are mapped, the
    image of the result is forced.
    """
    if a.sig != b.sig:
        raise ValidationError("signature mismatch")
    if a.size != b.size:
        return None
    n = a.size
    fwd = [-1] * n
    rev = [-1] * n
    trail = []

    def assign(x, y):
        if fwd[x] != -1:
            return fwd[x] == y
        if rev[y] != -1:
            return False
        fwd[x] = y
        rev[y] = x
        trail.append(x)
        return True

    def undo(mark):
        while len(trail) > mark:
            x = trail.pop()
            rev[fwd[x]] = -1
            fwd[x] = -1

    def propagate():
        changed = True
        while changed:
            changed = False
            assigned = [x for x in range(n) if fwd[x] != -1]
            for sym, arity in a.sig.symbols:
                ta, tb = a.tables[sym], b.tables[sym]
                for args in itertools.product(assigned, repeat=arity):
                    res = int(ta[table_index(args, n)])
                    img = int(tb[table_index([fwd[x] for x in args], n)])
                    if fwd[res] == -1 and rev[img] == -1:
                        changed = True
                    if not assign(res, img):
                        return False
        return True

    def search():
        try:
            d = fwd.index(-1)
        except ValueError:
            return True
        for y in range(n):
            if rev[y] != -1:
                continue
            mark = len(trail)
            if assign(d, y) and propagate() and search():
                return True
            undo(mark)
        return False

    if not propagate():
        return None
    if search():
        return tuple(fwd)
    return None


class Equivalence:
    """An equivalence on {0..n-1} via an idempotent representative map."""

    def __init__(self, reps):
        reps = tuple(int(x) for x in reps)
        n = len(reps)
        problems = []
        for x, r in enumerate(reps):
            if not 0 <= r < n:
                problems.append("representative out of range at %d" % x)
            elif reps[r] != r:
                problems.append(
                    "representative map not idempotent at %d: rep(%d)=%d" % (x, r, reps[r])
                )
        if problems:
            raise ValidationError(problems)
        self.reps = reps
        self.size = n

    @classmethod
    def from_classes(cls, n, classes):
        reps = list(range(n))
        for cl in classes:
            cl = sorted(cl)
            for x in cl:
                reps[x] = cl[0]
        return cls(reps)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def total(cls, n):
        return cls([0] * n)

    def related(self, x, y):
        return self.reps[x] == self.reps[y]

    def classes(self):
        by_rep = {}
        for x, r in enumerate(self.reps):
            by_rep.setdefault(r, []).append(x)
        return [by_rep[r] for r in sorted(by_rep)]


def check_congruence(a, e):
    """Raise CongruenceError at the first incompatible operation entry.

    Single-coordinate replacement suffices: coordinatewise compatibility
    follows by chaining replacements one position at a time.
    """
    if e.size != a.size:
        raise ValidationError("equivalence size %d != algebra size %d" % (e.size, a.size))
    n = a.size
    reps = np.asarray(e.reps, dtype=np.int64)
    related = [
        [y for y in range(n) if e.reps[y] == e.reps[x] and y != x] for x in range(n)
    ]
    for sym, arity in a.sig.symbols:
        if arity == 0:
            continue
        table = a.tables[sym]
        shaped = table.reshape((n,) * arity)
        for pos in range(arity):
            moved = np.moveaxis(shaped, pos, 0).reshape(n, -1)
            rep_rows = reps[moved]
            for x in range(n):
                for y in related[x]:
                    if y < x:
                        continue
                    diff = np.nonzero(rep_rows[x] != rep_rows[y])[0]
                    if diff.size:
                        rest = decode_args(int(diff[0]), n, arity - 1)
                        args_a = rest[:pos] + (x,) + rest[pos:]
                        args_b = rest[:pos] + (y,) + rest[pos:]
                        raise CongruenceError(sym, args_a, args_b)


def quotient(a, e, name=None):
    """Quotient by a congruence; refuses non-congruences outright."""
    check_congruence(a, e)
    class_reps = sorted(set(e.reps))
    index = {r: i for i, r in enumerate(class_reps)}
    k = len(class_reps)
    tables = {}
    for sym, arity in a.sig.symbols:
        table = a.tables[sym]
        out = np.zeros(k ** arity, dtype=np.int64)
        for i, args in enumerate(itertools.product(class_reps, repeat=arity)):
            out[i] = index[e.reps[int(table[table_index(args, a.size)])]]
        tables[sym] = out
    if name is None:
        name = "%s/~" % a.name
    return FiniteAlgebra(name, a.sig, k, tables)


# ---------------------------------------------------------------------------
# line-oriented algebra text format

def format_algebra(a):
    lines = ["algebra %s" % a.name, "size %d" % a.size]
    for sym, arity in a.sig.symbols:
        lines.append("op %s %d" % (sym, arity))
        lines.append("table %s" % " ".join(str(int(v)) for v in a.tables[sym]))
    return "\n".join(lines) + "\n"


def parse_algebra(text):
    name = None
    size = None
    symbols = []
    tables = {}
    pending = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "algebra":
            name = line[len("algebra"):].strip()
            if not name:
                raise ParseError("algebra line needs a name", lineno)
        elif kind == "size":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("bad size line", lineno)
            size = int(parts[1])
        elif kind == "op":
            if len(parts) != 3 or not parts[2].isdigit():
                raise ParseError("bad op line", lineno)
            if pending is not None:
                raise ParseError("op %r has no table" % pending, lineno)
            symbols.append((parts[1], int(parts[2])))
            pending = parts[1]
        elif kind == "table":
            if pending is None:
                raise ParseError("table line without preceding op", lineno)
            try:
                tables[pending] = [int(v) for v in parts[1:]]
            except ValueError:
                raise ParseError("non-integer table entry", lineno)
            pending = None
        else:
            raise ParseError("unknown directive %r" % kind, lineno)
    if name is None or size is None:
        raise ParseError("missing algebra or size line")
    if pending is not None:
        raise ParseError("op %r has no table" % pending)
    a = FiniteAlgebra(name, Signature(symbols), size, tables)
    validate_algebra(a)
    return a
