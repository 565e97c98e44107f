"""hyperq: deciding identities, quasi-identities, hyperidentities and
hyper-quasi-identities in finite algebras by exhaustive search."""

from .algebra import (
    Equivalence,
    FiniteAlgebra,
    Homomorphism,
    Signature,
    all_subalgebras,
    direct_product,
    format_algebra,
    is_homomorphism,
    iso_search,
    op_apply,
    parse_algebra,
    quotient,
    subuniverse_generated,
    tables_equal,
    trivial_algebra,
    validate_algebra,
)
from .catalog import catalog_get, catalog_names, make_lattice, make_rect_band, make_s3, make_zn
from .clone import (
    CloneSlice,
    Hypersubstitution,
    apply_hypersubstitution,
    clone_slice,
    derive_by_terms,
    derived_algebra,
    enumerate_derived_algebras,
    enumerate_hypersubstitutions,
    iter_clone_ops,
)
from .constructions import (
    DirectSpectrum,
    FilterFamily,
    all_filters,
    direct_limit,
    is_subdirect,
    is_superdirect,
    principal_filter,
    principal_ultrafilter,
    reduced_product,
    ultraproduct,
)
from .errors import (
    CloneLimitError,
    CongruenceError,
    FormulaError,
    HyperqError,
    ParseError,
    ValidationError,
)
from .satisfaction import (
    Verdict,
    find_all_failures,
    holds_hyperidentity,
    holds_hyperquasi,
    holds_identity,
    holds_quasi,
    is_abelian,
)
from .terms import (
    App,
    HApp,
    HornFormula,
    TermOperation,
    Var,
    eval_term,
    format_formula,
    format_term,
    parse_formula,
    parse_horn_file,
    parse_term,
    term_to_table,
    transform_T,
    transform_Tinv,
)
from .verify import (
    CheckResult,
    canonical_binding,
    load_battery,
    verify_all,
    verify_prop41,
    verify_prop53_instances,
    verify_section1,
    verify_section3,
)

__version__ = "0.1.0"
