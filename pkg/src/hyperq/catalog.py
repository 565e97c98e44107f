"""Built-in named algebras used throughout tests and docs."""

import itertools

from .algebra import FiniteAlgebra, Signature, ValidationError, validate_algebra

GROUP_SIG = Signature([("plus", 2), ("neg", 1), ("zero", 0)])
LATTICE_SIG = Signature([("meet", 2), ("join", 2)])
BAND_SIG = Signature([("dot", 2)])


def make_zn(n, name=None):
    """The cyclic group Z_n in signature (plus, neg, zero)."""
    if n < 1:
        raise ValidationError("modulus must be >= 1")
    plus = [(x + y) % n for x in range(n) for y in range(n)]
    neg = [(n - x) % n for x in range(n)]
    a = FiniteAlgebra(name or "z%d" % n, GROUP_SIG, n, {
        "plus": plus, "neg": neg, "zero": [0],
    })
    validate_algebra(a)
    return a


_LATTICE_ORDERS = {
    # chain2: 0 < 1
    "chain2": (2, lambda x, y: x <= y),
    # n5: 0 < a < b < 1 with c incomparable to a and b; elements (0,a,b,c,1)
    "n5": (5, lambda x, y: x == y or x == 0 or y == 4 or (x == 1 and y == 2)),
    # m3: bottom, three incomparable atoms, top; elements (0,a,b,c,1)
    "m3": (5, lambda x, y: x == y or x == 0 or y == 4),
}


def make_lattice(name):
    """One of the named lattices chain2, n5, m3 in signature (meet, join)."""
    if name not in _LATTICE_ORDERS:
        raise ValidationError("unknown lattice %r" % name)
    n, leq = _LATTICE_ORDERS[name]

    def below(z):
        return {w for w in range(n) if leq(w, z)}

    def meet(x, y):
        lower = [z for z in range(n) if leq(z, x) and leq(z, y)]
        return max(lower, key=lambda z: len(below(z)))

    def join(x, y):
        upper = [z for z in range(n) if leq(x, z) and leq(y, z)]
        return min(upper, key=lambda z: len(below(z)))

    tables = {
        "meet": [meet(x, y) for x in range(n) for y in range(n)],
        "join": [join(x, y) for x in range(n) for y in range(n)],
    }
    a = FiniteAlgebra(name, LATTICE_SIG, n, tables)
    validate_algebra(a)
    return a


def make_rect_band(m, k, name=None):
    """The m-by-k rectangular band: (i,j)*(p,q) = (i,q), encoded i*k + j."""
    if m < 1 or k < 1:
        raise ValidationError("band dimensions must be >= 1")
    n = m * k
    dot = [(x // k) * k + (y % k) for x in range(n) for y in range(n)]
    a = FiniteAlgebra(name or "rb%d%d" % (m, k), BAND_SIG, n, {"dot": dot})
    validate_algebra(a)
    return a


def make_s3():
    """The symmetric group on three points, in group signature.

    Elements are the six permutations of (0,1,2) in lexicographic order;
    plus is composition (left acts after right), neg the inverse.
    """
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):
        return tuple(p[q[x]] for x in range(3))

    def inverse(p):
        out = [0, 0, 0]
        for x in range(3):
            out[p[x]] = x
        return tuple(out)

    plus = [index[compose(p, q)] for p in perms for q in perms]
    neg = [index[inverse(p)] for p in perms]
    a = FiniteAlgebra("s3", GROUP_SIG, 6, {"plus": plus, "neg": neg, "zero": [0]})
    validate_algebra(a)
    return a


_BUILDERS = {
    "z1": lambda: make_zn(1),
    "z2": lambda: make_zn(2),
    "z3": lambda: make_zn(3),
    "z4": lambda: make_zn(4),
    "z5": lambda: make_zn(5),
    "z6": lambda: make_zn(6),
    "s3": make_s3,
    "chain2": lambda: make_lattice("chain2"),
    "n5": lambda: make_lattice("n5"),
    "m3": lambda: make_lattice("m3"),
    "rb11": lambda: make_rect_band(1, 1),
    "rb12": lambda: make_rect_band(1, 2),
    "rb22": lambda: make_rect_band(2, 2),
    "rb23": lambda: make_rect_band(2, 3),
}


def catalog_names():
    return sorted(_BUILDERS)


def catalog_get(name):
    if name not in _BUILDERS:
        raise ValidationError("unknown catalog algebra %r" % name)
    return _BUILDERS[name]()


def catalog_algebras(max_size=None):
    """All catalog entries, optionally restricted by carrier size."""
    out = []
    for name in catalog_names():
        a = catalog_get(name)
        if max_size is None or a.size <= max_size:
            out.append(a)
    return out
