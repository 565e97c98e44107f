"""Named, runnable checks of the structural facts the package is built
around: the derived-algebra equality for hyper-quasi-identities, the eight
operator inclusions, the medial example over cyclic groups, and the
lattice/band examples.

Every check returns a CheckResult; a False result from the prop41/prop53
checks indicates an implementation bug, since the underlying statements
are theorems at any finite instance.
"""

import itertools
from dataclasses import dataclass
from importlib import resources

from .algebra import (
    Homomorphism,
    all_homomorphisms,
    all_subalgebras,
    direct_product,
    identity_homomorphism,
    iso_search,
    subuniverse_generated,
    tables_equal,
)
from .catalog import catalog_get, make_zn
from .clone import (
    DEFAULT_CLONE_LIMIT,
    clone_slice,
    derive_by_terms,
    enumerate_derived_algebras,
)
from .constructions import (
    DirectSpectrum,
    all_filters,
    direct_limit,
    is_subdirect,
    is_superdirect,
    principal_ultrafilter,
    reduced_product,
    ultraproduct,
)
from .errors import FormulaError
from .satisfaction import holds_hyperidentity, holds_hyperquasi, holds_quasi, is_abelian
from .terms import (
    format_term,
    parse_formula,
    parse_term,
    term_to_table,
    transform_Tinv,
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self):
        return "CHECK %s %s%s" % (
            self.name,
            "PASS" if self.ok else "FAIL",
            " %s" % self.detail if self.detail else "",
        )


class FormulaBattery:
    """Named formulas over one signature, loaded from a versioned file."""

    def __init__(self, sig, named_formulas):
        self.sig = sig
        self.entries = list(named_formulas)
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise FormulaError("battery names must be unique")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def load_battery(sig, text=None):
    """Parse a battery file ('name: formula' lines) under a signature."""
    if text is None:
        text = (
            resources.files("hyperq").joinpath("data/standard_battery.horn").read_text()
        )
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, src = line.partition(":")
        if not _:
            raise FormulaError("battery line needs 'name: formula': %r" % raw)
        entries.append((name.strip(), parse_formula(src.strip(), sig)))
    return FormulaBattery(sig, entries)


def canonical_binding(formula, sig):
    """Bind hypervariables (first-occurrence order) to basic symbols.

    Each hypervariable takes the first not-yet-used symbol of its arity;
    when all are used the first symbol of that arity is reused.
    """
    binding = {}
    used = set()
    for hv, arity in formula.hypervars().items():
        candidates = [name for name, ar in sig.symbols if ar == arity]
        if not candidates:
            raise FormulaError(
                "no symbol of arity %d to bind hypervariable %s" % (arity, hv)
            )
        unused = [c for c in candidates if c not in used]
        pick = unused[0] if unused else candidates[0]
        used.add(pick)
        binding[hv] = pick
    return binding


# ---------------------------------------------------------------------------
# derived-algebra equality for hyper-quasi-identities

def verify_prop41(a, battery=None, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """For each battery formula e*: hyper-satisfaction in ``a`` must equal
    plain quasi-satisfaction of its symbol form in every derived algebra."""
    if battery is None:
        battery = load_battery(a.sig)
    derived = [
        (sigma, b) for sigma, b in enumerate_derived_algebras(a, max_clone_ops)
    ]
    out = []
    by_arity = {
        ar: len(clone_slice(a, ar, max_clone_ops))
        for ar in {ar for _, ar in a.sig.symbols}
    }
    sizes = [by_arity[ar] for _, ar in a.sig.symbols]
    out.append(
        CheckResult(
            "prop41:%s:derived" % a.name,
            True,
            "count=%d slices=%s"
            % (len(derived), "x".join(str(s) for s in sizes)),
        )
    )
    for name, formula in battery:
        lhs = holds_hyperquasi(a, formula, max_clone_ops).holds
        binding = canonical_binding(formula, a.sig)
        symbol_form = transform_Tinv(formula, binding, a.sig)
        rhs = all(holds_quasi(b, symbol_form).holds for _, b in derived)
        out.append(
            CheckResult(
                "prop41:%s:%s" % (a.name, name),
                lhs == rhs,
                "hyper=%s derived=%s" % (lhs, rhs),
            )
        )
    return out


# ---------------------------------------------------------------------------
# the eight operator inclusions, instance scale

def _derived_list(a, max_clone_ops):
    return list(enumerate_derived_algebras(a, max_clone_ops))


def _family_sizes(a, cap=64):
    sizes = []
    for m in (2, 3):
        if a.size ** m <= cap:
            sizes.append(m)
    return sizes


def _check_item1(k_algebras, max_clone_ops):
    """Derived algebras of subalgebras embed among subalgebras of derived."""
    tried = matched = 0
    for a in k_algebras:
        rhs = []
        for _, da in _derived_list(a, max_clone_ops):
            rhs.extend(sub for _, sub in all_subalgebras(da))
        for _, s in all_subalgebras(a):
            for _, ds in _derived_list(s, max_clone_ops):
                tried += 1
                if any(iso_search(ds, t) is not None for t in rhs):
                    matched += 1
    return tried == matched, "%d/%d matched" % (matched, tried)


def _check_item2(k_algebras, max_clone_ops, include_empty=False):
    """Derived product tables equal the product of componentwise derivations."""
    tried = matched = 0
    families = []
    if include_empty:
        families.append([])
    for a in k_algebras:
        for m in _family_sizes(a):
            families.append([a] * m)
        families.append([a])
    if len(k_algebras) > 1:
        families.append(list(k_algebras[:2]))
    sig = k_algebras[0].sig
    for family in families:
        prod = direct_product(family, sig=sig)
        for sigma, dp in _derived_list(prod, max_clone_ops):
            tried += 1
            terms = sigma.witness_terms()
            parts = [derive_by_terms(b, terms) for b in family]
            pd = direct_product(parts, sig=sig)
            if tables_equal(dp, pd):
                matched += 1
    return tried == matched, "%d/%d equal tables" % (matched, tried)


def _check_item4(k_algebras, max_clone_ops):
    """Derived diagonal subdirect products stay subdirect over derived factors."""
    tried = matched = 0
    for a in k_algebras:
        diag = sorted(x * a.size + x for x in range(a.size))
        prod = direct_product([a, a])
        sub = subuniverse_generated(prod, diag)
        if sorted(sub) != diag:
            return False, "diagonal of %s is not closed" % a.name
        from .algebra import restrict_algebra

        b = restrict_algebra(prod, diag)
        embedding = diag
        for sigma, db in _derived_list(b, max_clone_ops):
            tried += 1
            terms = sigma.witness_terms()
            parts = [derive_by_terms(a, terms), derive_by_terms(a, terms)]
            if is_subdirect(db, embedding, parts):
                matched += 1
    return tried == matched, "%d/%d subdirect" % (matched, tried)


def _check_item5(k_algebras, max_clone_ops, ultra=False):
    """Derived reduced products are reduced products of derived factors."""
    tried = matched = 0
    for a in k_algebras:
        for m in _family_sizes(a):
            family = [a] * m
            if ultra:
                filters = [principal_ultrafilter(m, i) for i in range(m)]
            else:
                filters = all_filters(m)
            for f in filters:
                build = ultraproduct if ultra else reduced_product
                r = build(family, f)
                for sigma, dr in _derived_list(r, max_clone_ops):
                    tried += 1
                    terms = sigma.witness_terms()
                    parts = [derive_by_terms(b, terms) for b in family]
                    r2 = build(parts, f)
                    if iso_search(dr, r2) is not None:
                        matched += 1
    return tried == matched, "%d/%d isomorphic" % (matched, tried)


def _test_spectra(a, cap=36):
    """Small deterministic direct spectra over copies of one algebra."""
    spectra = []
    ident = identity_homomorphism(a)
    spectra.append(DirectSpectrum([[True]], [a], {(0, 0): ident}))
    endos = all_homomorphisms(a, a)
    leq2 = [[True, True], [False, True]]
    for e in endos:
        algebras = [a, a]
        homs = {
            (0, 0): identity_homomorphism(a),
            (1, 1): identity_homomorphism(a),
            (0, 1): Homomorphism(a, a, e.map),
        }
        spectra.append(DirectSpectrum(leq2, algebras, homs))
    pairs = list(itertools.product(endos, endos))[:cap]
    leq_chain = [
        [True, True, True],
        [False, True, True],
        [False, False, True],
    ]
    for e1, e2 in pairs:
        comp = [e2.map[e1.map[x]] for x in range(a.size)]
        homs = {
            (0, 0): identity_homomorphism(a),
            (1, 1): identity_homomorphism(a),
            (2, 2): identity_homomorphism(a),
            (0, 1): Homomorphism(a, a, e1.map),
            (1, 2): Homomorphism(a, a, e2.map),
            (0, 2): Homomorphism(a, a, comp),
        }
        spectra.append(DirectSpectrum(leq_chain, [a, a, a], homs))
    leq_vee = [
        [True, False, True],
        [False, True, True],
        [False, False, True],
    ]
    for e1, e2 in pairs:
        homs = {
            (0, 0): identity_homomorphism(a),
            (1, 1): identity_homomorphism(a),
            (2, 2): identity_homomorphism(a),
            (0, 2): Homomorphism(a, a, e1.map),
            (1, 2): Homomorphism(a, a, e2.map),
        }
        spectra.append(DirectSpectrum(leq_vee, [a, a, a], homs))
    return spectra


def _derived_spectrum(s, terms):
    algebras = [derive_by_terms(b, terms) for b in s.algebras]
    homs = {
        (i, j): Homomorphism(algebras[i], algebras[j], h.map)
        for (i, j), h in s.homs.items()
    }
    return DirectSpectrum(s.leq, algebras, homs)


def _check_item7(k_algebras, max_clone_ops, superdirect_only=False):
    """Derived direct limits are limits of derived spectra."""
    tried = matched = 0
    for a in k_algebras:
        for s in _test_spectra(a):
            if superdirect_only and not is_superdirect(s):
                continue
            lim = direct_limit(s)
            for sigma, dl in _derived_list(lim, max_clone_ops):
                tried += 1
                terms = sigma.witness_terms()
                ds = _derived_spectrum(s, terms)
                if superdirect_only and not is_superdirect(ds):
                    continue
                if iso_search(dl, direct_limit(ds)) is not None:
                    matched += 1
    return tried == matched, "%d/%d isomorphic" % (matched, tried)


def verify_prop53_instances(k_algebras, max_clone_ops=DEFAULT_CLONE_LIMIT):
    k_algebras = list(k_algebras)
    tag = "{%s}" % ",".join(a.name for a in k_algebras)
    items = [
        ("1:subalgebras", lambda: _check_item1(k_algebras, max_clone_ops)),
        ("2:products", lambda: _check_item2(k_algebras, max_clone_ops)),
        (
            "3:finite-products",
            lambda: _check_item2(k_algebras, max_clone_ops, include_empty=True),
        ),
        ("4:subdirect", lambda: _check_item4(k_algebras, max_clone_ops)),
        ("5:reduced-products", lambda: _check_item5(k_algebras, max_clone_ops)),
        (
            "6:ultraproducts",
            lambda: _check_item5(k_algebras, max_clone_ops, ultra=True),
        ),
        ("7:direct-limits", lambda: _check_item7(k_algebras, max_clone_ops)),
        (
            "8:superdirect-limits",
            lambda: _check_item7(k_algebras, max_clone_ops, superdirect_only=True),
        ),
    ]
    out = []
    for name, run in items:
        ok, detail = run()
        out.append(CheckResult("prop53:%s:%s" % (tag, name), ok, detail))
    return out


# ---------------------------------------------------------------------------
# worked examples

MEDIAL = "F(F(u,v),F(x,y)) = F(F(u,x),F(v,y))"
PROP32 = "F(x,y) = F(x,z) -> F(x,y) = F(x,G(y,z))"


def verify_section1(n, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """Medial hyperidentity on Z_n plus the n^2 binary slice count."""
    if not 2 <= n <= 6:
        raise FormulaError("modulus must be between 2 and 6, got %d" % n)
    a = make_zn(n)
    formula = parse_formula(MEDIAL, a.sig)
    verdict = holds_hyperidentity(a, formula, max_clone_ops)
    size = len(clone_slice(a, 2, max_clone_ops))
    return [
        CheckResult("sec1:z%d:medial" % n, verdict.holds),
        CheckResult(
            "sec1:z%d:slice" % n, size == n * n, "size=%d expected=%d" % (size, n * n)
        ),
    ]


_RB_HYPERIDENTITIES = [
    ("idempotence", "F(x,x) = x"),
    ("left-collapse", "F(F(x,y),z) = F(x,z)"),
    ("right-collapse", "F(x,F(y,z)) = F(x,z)"),
    ("bicollapse", "F(F(x,y),F(z,w)) = F(x,w)"),
]

_PROP32_CASES = [("y", "x1"), ("z", "x2"), ("meet", "meet(x1,x2)"), ("join", "join(x1,x2)")]
_PROP32_F_CASES = [("x", "x1"), ("y", "x2"), ("meet", "meet(x1,x2)"), ("join", "join(x1,x2)")]


def verify_section3(max_clone_ops=DEFAULT_CLONE_LIMIT):
    out = []
    rb = catalog_get("rb22")
    for name, src in _RB_HYPERIDENTITIES:
        v = holds_hyperidentity(rb, parse_formula(src, rb.sig), max_clone_ops)
        out.append(CheckResult("sec3:rb22:%s" % name, v.holds))
    out.append(CheckResult("sec3:rb22:abelian", is_abelian(rb, 3, max_clone_ops).holds))

    n5 = catalog_get("n5")
    formula = parse_formula(PROP32, n5.sig)
    out.append(
        CheckResult(
            "sec3:n5:prop32", holds_hyperquasi(n5, formula, max_clone_ops).holds
        )
    )
    # replay the proof's case split: every (F, G) instance as a plain
    # quasi-identity
    from .clone import Hypersubstitution, apply_hypersubstitution_formula

    for case, (fname, fsrc) in enumerate(_PROP32_F_CASES, start=1):
        fop = term_to_table(n5, parse_term(fsrc, n5.sig), ["x1", "x2"])
        for gname, gsrc in _PROP32_CASES:
            gop = term_to_table(n5, parse_term(gsrc, n5.sig), ["x1", "x2"])
            inst = apply_hypersubstitution_formula(
                Hypersubstitution({"F": fop, "G": gop}), formula
            )
            v = holds_quasi(n5, inst)
            out.append(
                CheckResult("sec3:n5:case%d:F=%s:G=%s" % (case, fname, gname), v.holds)
            )

    m3 = catalog_get("m3")
    v = holds_hyperquasi(m3, parse_formula(PROP32, m3.sig), max_clone_ops)
    shape_ok = (
        not v.holds
        and format_term(v.witness.sigma["F"].witness) == "join(x1,x2)"
        and format_term(v.witness.sigma["G"].witness) == "meet(x1,x2)"
        and v.witness.assignment == {"x": 1, "y": 2, "z": 3}
    )
    out.append(
        CheckResult(
            "sec3:m3:prop32-fails",
            shape_ok,
            "witness=%r" % (v.witness,),
        )
    )
    return out


def verify_all(max_clone_ops=DEFAULT_CLONE_LIMIT):
    out = []
    for name in ("z2", "chain2", "rb22"):
        out.extend(verify_prop41(catalog_get(name), max_clone_ops=max_clone_ops))
    for name in ("z2", "chain2", "rb22"):
        out.extend(
            verify_prop53_instances([catalog_get(name)], max_clone_ops=max_clone_ops)
        )
    for n in range(2, 7):
        out.extend(verify_section1(n, max_clone_ops))
    out.extend(verify_section3(max_clone_ops))
    return out
