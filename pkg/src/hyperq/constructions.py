"""Reduced/ultra products over filters, direct and superdirect limits."""

import itertools

from .algebra import (
    Equivalence,
    Homomorphism,
    ValidationError,
    direct_product,
    is_homomorphism,
    product_coordinates,
    quotient,
    table_index,
)


class FilterFamily:
    """A proper filter of subsets of {0..m-1}.

    Must contain the full index set, exclude the empty set, and be closed
    under pairwise intersection and supersets.
    """

    def __init__(self, index_size, members):
        self.index_size = int(index_size)
        full = frozenset(range(self.index_size))
        sets = set()
        for s in members:
            fs = frozenset(int(x) for x in s)
            if not fs <= full:
                raise ValidationError("member set %r not within index set" % sorted(fs))
            sets.add(fs)
        problems = []
        if full not in sets:
            problems.append("filter must contain the full index set")
        if frozenset() in sets:
            problems.append("filter must not contain the empty set (proper)")
        for s, t in itertools.combinations(sets, 2):
            if s & t not in sets:
                problems.append(
                    "not intersection-closed: %r and %r" % (sorted(s), sorted(t))
                )
                break
        upward_ok = True
        for s in sets:
            if not upward_ok:
                break
            for t in map(frozenset, _supersets(s, self.index_size)):
                if t not in sets:
                    problems.append(
                        "not upward closed: %r misses superset %r"
                        % (sorted(s), sorted(t))
                    )
                    upward_ok = False
                    break
        if problems:
            raise ValidationError(problems)
        self.members = frozenset(sets)

    def __contains__(self, subset):
        return frozenset(subset) in self.members

    def is_ultrafilter(self):
        """(True, None) or (False, witness subset in neither half)."""
        full = frozenset(range(self.index_size))
        for r in range(self.index_size + 1):
            for s in itertools.combinations(range(self.index_size), r):
                fs = frozenset(s)
                if fs not in self.members and (full - fs) not in self.members:
                    return False, fs
        return True, None

    def __repr__(self):
        shown = sorted(sorted(s) for s in self.members)
        return "FilterFamily(%d, %r)" % (self.index_size, shown)


def _supersets(s, m):
    rest = [x for x in range(m) if x not in s]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            yield set(s) | set(extra)


def principal_filter(index_size, generator):
    """The filter of all supersets of ``generator``."""
    gen = frozenset(generator)
    if not gen:
        raise ValidationError("principal filter needs a nonempty generator")
    return FilterFamily(index_size, _supersets(gen, index_size))


def principal_ultrafilter(index_size, point):
    return principal_filter(index_size, {point})


def all_filters(index_size):
    """Every filter over {0..m-1}; on a finite set all are principal."""
    out = []
    for r in range(1, index_size + 1):
        for gen in itertools.combinations(range(index_size), r):
            out.append(principal_filter(index_size, gen))
    return out


def filter_equivalence(family, f):
    """The relation a ~_F b iff {i : a_i = b_i} is in the filter."""
    sizes = [a.size for a in family]
    total = 1
    for s in sizes:
        total *= s
    coords = [product_coordinates(c, sizes) for c in range(total)]
    reps = [-1] * total
    for p in range(total):
        if reps[p] != -1:
            continue
        reps[p] = p
        for q in range(p + 1, total):
            if reps[q] != -1:
                continue
            agree = frozenset(i for i in range(len(sizes)) if coords[p][i] == coords[q][i])
            if agree in f:
                reps[q] = p
    return Equivalence(reps)


def reduced_product(family, f, name=None):
    """Direct product quotiented by the filter-equality congruence."""
    family = list(family)
    if len(family) != f.index_size:
        raise ValidationError(
            "family size %d does not match filter index size %d"
            % (len(family), f.index_size)
        )
    if not family:
        raise ValidationError("reduced product of an empty family")
    prod = direct_product(family)
    e = filter_equivalence(family, f)
    if name is None:
        name = "(%s)/F" % " x ".join(a.name for a in family)
    return quotient(prod, e, name=name)


def ultraproduct(family, f, name=None):
    ok, witness = f.is_ultrafilter()
    if not ok:
        raise ValidationError(
            "not an ultrafilter: neither %r nor its complement is a member"
            % sorted(witness)
        )
    return reduced_product(family, f, name=name)


class DirectSpectrum:
    """An up-directed poset of algebras with compatible homomorphisms.

    ``leq`` is a full relation matrix; ``homs`` maps each pair (i, j) with
    i <= j to a Homomorphism from algebras[i] to algebras[j].
    """

    def __init__(self, leq, algebras, homs):
        self.leq = [[bool(v) for v in row] for row in leq]
        self.algebras = list(algebras)
        self.homs = dict(homs)
        self.validate()

    def validate(self):
        n = len(self.algebras)
        problems = []
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise ValidationError("order matrix shape does not match algebra count")
        sig = self.algebras[0].sig
        for a in self.algebras[1:]:
            if a.sig != sig:
                problems.append("algebras do not share a signature")
                break
        leq = self.leq
        for i in range(n):
            if not leq[i][i]:
                problems.append("order not reflexive at %d" % i)
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    problems.append("order not antisymmetric at (%d,%d)" % (i, j))
                for k in range(n):
                    if leq[i][j] and leq[j][k] and not leq[i][k]:
                        problems.append(
                            "order not transitive at (%d,%d,%d)" % (i, j, k)
                        )
        for i in range(n):
            for j in range(n):
                if not any(leq[i][k] and leq[j][k] for k in range(n)):
                    problems.append("not up-directed: no upper bound of %d,%d" % (i, j))
        for i in range(n):
            for j in range(n):
                if not leq[i][j]:
                    if (i, j) in self.homs:
                        problems.append("hom given for unrelated pair (%d,%d)" % (i, j))
                    continue
                h = self.homs.get((i, j))
                if h is None:
                    problems.append("missing hom for (%d,%d)" % (i, j))
                    continue
                if h.source is not self.algebras[i] or h.target is not self.algebras[j]:
                    problems.append("hom (%d,%d) endpoints wrong" % (i, j))
                    continue
                ok, witness = is_homomorphism(h)
                if not ok:
                    problems.append(
                        "map (%d,%d) is not a homomorphism, breaks at %r" % (i, j, witness)
                    )
        if problems:
            raise ValidationError(problems)
        for i in range(n):
            h = self.homs[(i, i)]
            if list(h.map) != list(range(self.algebras[i].size)):
                problems.append("g_%d%d is not the identity" % (i, i))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.leq[i][j] and self.leq[j][k]:
                        gij = self.homs[(i, j)].map
                        gjk = self.homs[(j, k)].map
                        gik = self.homs[(i, k)].map
                        if any(gjk[gij[x]] != gik[x] for x in range(len(gij))):
                            problems.append(
                                "composition g_%d%d . g_%d%d != g_%d%d"
                                % (j, k, i, j, i, k)
                            )
        if problems:
            raise ValidationError(problems)

    def topological_order(self):
        """Kahn order, smallest index first among available elements."""
        n = len(self.algebras)
        remaining = set(range(n))
        order = []
        while remaining:
            ready = sorted(
                i
                for i in remaining
                if not any(self.leq[j][i] for j in remaining if j != i)
            )
            order.append(ready[0])
            remaining.remove(ready[0])
        return order

    def upper_bound(self, indices, position, reverse=False):
        """Common upper bound with least (or greatest) topological position."""
        n = len(self.algebras)
        cands = [
            k for k in range(n) if all(self.leq[i][k] for i in indices)
        ]
        key = (lambda k: -position[k]) if reverse else (lambda k: position[k])
        return min(cands, key=key)


def direct_limit(s, name=None, _reverse_choice=False):
    """Colimit of a direct spectrum.

    Carrier: pairs (element, index) modulo (a,i) == (b,j) iff some upper
    bound k has g_ik(a) = g_jk(b); classes are numbered by their least
    member in the disjoint-union order.  Operations evaluate at the common
    upper bound of the argument indices with least topological position
    (``_reverse_choice`` picks the greatest instead; the result must not
    depend on it).
    """
    n = len(s.algebras)
    offsets = []
    total = 0
    for a in s.algebras:
        offsets.append(total)
        total += a.size
    owner = []
    for i, a in enumerate(s.algebras):
        owner.extend((i, x) for x in range(a.size))

    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    for p in range(total):
        i, a = owner[p]
        for q in range(p + 1, total):
            j, b = owner[q]
            for k in range(n):
                if s.leq[i][k] and s.leq[j][k]:
                    if s.homs[(i, k)].map[a] == s.homs[(j, k)].map[b]:
                        union(p, q)
                        break

    roots = sorted({find(p) for p in range(total)})
    class_index = {r: c for c, r in enumerate(roots)}
    size = len(roots)

    position = {}
    for pos, i in enumerate(s.topological_order()):
        position[i] = pos

    sig = s.algebras[0].sig
    import numpy as np

    tables = {}
    for sym, arity in sig.symbols:
        out = np.zeros(size ** arity, dtype=np.int64)
        for flat, classes in enumerate(itertools.product(roots, repeat=arity)):
            pairs = [owner[r] for r in classes]
            j = s.upper_bound([i for i, _ in pairs], position, reverse=_reverse_choice)
            args = [s.homs[(i, j)].map[a] for i, a in pairs]
            val = int(s.algebras[j].tables[sym][table_index(args, s.algebras[j].size)])
            out[flat] = class_index[find(offsets[j] + val)]
        tables[sym] = out
    from .algebra import FiniteAlgebra

    if name is None:
        name = "lim(%s)" % ",".join(a.name for a in s.algebras)
    return FiniteAlgebra(name, sig, size, tables)


def is_superdirect(s):
    """True iff every spectrum map is surjective."""
    for (i, j), h in s.homs.items():
        if i == j:
            continue
        if len(set(h.map)) != s.algebras[j].size:
            return False
    return True


def is_subdirect(b, embedding, family):
    """Check a given embedding realizes b as a subdirect product.

    ``embedding`` maps b's elements to product codes of ``family``.  Must be
    an injective homomorphism; returns True iff every coordinate projection
    restricted to its image is onto.
    """
    family = list(family)
    prod = direct_product(family)
    emb = list(int(x) for x in embedding)
    if len(set(emb)) != len(emb):
        raise ValidationError("embedding is not injective")
    h = Homomorphism(b, prod, emb)
    ok, witness = is_homomorphism(h)
    if not ok:
        raise ValidationError("embedding is not a homomorphism, breaks at %r" % (witness,))
    sizes = [a.size for a in family]
    for i, a in enumerate(family):
        image = {product_coordinates(code, sizes)[i] for code in emb}
        if image != set(range(a.size)):
            return False
    return True
