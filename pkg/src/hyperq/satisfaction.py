"""Decision procedures for identities, quasi-identities, hyperidentities and
hyper-quasi-identities, plus the term-condition abelianness check.

All checkers scan exhaustively and report the first counterexample in a fixed
order: hypersubstitutions outer (first hypervariable varying fastest over
table-sorted clone slices), assignments inner (row-major over the formula's
variables in order of first occurrence).
"""

import numpy as np

from . import kernels
from .clone import (
    DEFAULT_CLONE_LIMIT,
    apply_hypersubstitution_formula,
    clone_slice,
    iter_clone_ops,
)
from .errors import FormulaError
from .terms import term_to_table
from .algebra import decode_args


class Witness:
    """A concrete violation: optional hypersubstitution, assignment, and the
    index of the failing formula within the checked batch."""

    def __init__(self, sigma, assignment, eq_index=0):
        self.sigma = sigma
        self.assignment = dict(assignment)
        self.eq_index = eq_index

    def __repr__(self):
        return "Witness(sigma=%r, asg=%r, eq=%d)" % (
            self.sigma,
            self.assignment,
            self.eq_index,
        )


class ConditionWitness:
    """A term-condition violation: the operation's witness term, the two
    distinguished elements, the two argument tuples, and the direction."""

    def __init__(self, term, u, v, xs, ys, forward):
        self.term = term
        self.u = u
        self.v = v
        self.xs = tuple(xs)
        self.ys = tuple(ys)
        self.forward = forward

    def __repr__(self):
        return "ConditionWitness(%r, u=%d, v=%d, xs=%r, ys=%r, forward=%r)" % (
            self.term,
            self.u,
            self.v,
            self.xs,
            self.ys,
            self.forward,
        )


class Verdict:
    def __init__(self, holds, witness=None):
        self.holds = holds
        self.witness = witness

    def __bool__(self):
        return self.holds

    def __repr__(self):
        if self.holds:
            return "Verdict(holds)"
        return "Verdict(fails, %r)" % self.witness


def _assignment(var_order, n, flat):
    values = decode_args(flat, n, len(var_order))
    return dict(zip(var_order, values))


def _scan_term_formula(a, f, var_order):
    """First failing assignment index of a plain Term formula, or -1."""
    n = a.size
    total = n ** len(var_order)
    if f.premises:
        prem_l = np.vstack([term_to_table(a, l, var_order).table for l, _ in f.premises])
        prem_r = np.vstack([term_to_table(a, r, var_order).table for _, r in f.premises])
    else:
        prem_l = np.zeros((0, total), dtype=np.int64)
        prem_r = np.zeros((0, total), dtype=np.int64)
    conc_l = term_to_table(a, f.conclusion[0], var_order).table
    conc_r = term_to_table(a, f.conclusion[1], var_order).table
    return kernels.horn_scan(prem_l, prem_r, conc_l, conc_r)


def _all_failures_term_formula(a, f, var_order, cap):
    n = a.size
    total = n ** len(var_order)
    mask = np.ones(total, dtype=bool)
    for l, r in f.premises:
        mask &= term_to_table(a, l, var_order).table == term_to_table(a, r, var_order).table
    mask &= term_to_table(a, f.conclusion[0], var_order).table != term_to_table(
        a, f.conclusion[1], var_order
    ).table
    return [int(i) for i in np.nonzero(mask)[0][:cap]]


def holds_identity(a, f):
    """Exhaustive check of an identity (no premises, no hypervariables)."""
    if f.premises:
        raise FormulaError("identity mode takes a formula without premises")
    if f.is_hyper:
        raise FormulaError("formula contains hypervariables; use a hyper mode")
    return holds_quasi(a, f)


def holds_quasi(a, f):
    """Exhaustive check of a quasi-identity (no hypervariables)."""
    if f.is_hyper:
        raise FormulaError("formula contains hypervariables; use a hyper mode")
    var_order = f.variables()
    idx = _scan_term_formula(a, f, var_order)
    if idx < 0:
        return Verdict(True)
    return Verdict(False, Witness(None, _assignment(var_order, a.size, idx)))


def _needed_slices(a, f, max_clone_ops):
    arities = sorted({ar for ar in f.hypervars().values()})
    return {ar: clone_slice(a, ar, max_clone_ops) for ar in arities}


def _scan_hyper(a, f, max_clone_ops):
    from .clone import enumerate_hypersubstitutions

    var_order = f.variables()
    hypervars = list(f.hypervars().items())
    slices = _needed_slices(a, f, max_clone_ops)
    for sigma in enumerate_hypersubstitutions(hypervars, slices):
        inst = apply_hypersubstitution_formula(sigma, f)
        idx = _scan_term_formula(a, inst, var_order)
        if idx >= 0:
            return Verdict(
                False, Witness(sigma, _assignment(var_order, a.size, idx))
            )
    return Verdict(True)


def holds_hyperidentity(a, f, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """Check an identity under every hypersubstitution from the clone."""
    if f.premises:
        raise FormulaError("hyperidentity mode takes a formula without premises")
    return _scan_hyper(a, f, max_clone_ops)


def holds_hyperquasi(a, f, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """Check a Horn formula under every hypersubstitution from the clone."""
    return _scan_hyper(a, f, max_clone_ops)


def check_formula(a, f, mode, max_clone_ops=DEFAULT_CLONE_LIMIT):
    if mode == "id":
        return holds_identity(a, f)
    if mode == "quasi":
        return holds_quasi(a, f)
    if mode == "hyper":
        return holds_hyperidentity(a, f, max_clone_ops)
    if mode == "hyperquasi":
        return holds_hyperquasi(a, f, max_clone_ops)
    raise FormulaError("unknown mode %r" % mode)


def find_all_failures(a, f, cap=10, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """Up to ``cap`` distinct witnesses in deterministic enumeration order."""
    from .clone import enumerate_hypersubstitutions

    if cap < 1:
        raise FormulaError("cap must be >= 1")
    var_order = f.variables()
    out = []
    if not f.is_hyper:
        for idx in _all_failures_term_formula(a, f, var_order, cap):
            out.append(Witness(None, _assignment(var_order, a.size, idx)))
        return out
    hypervars = list(f.hypervars().items())
    slices = _needed_slices(a, f, max_clone_ops)
    for sigma in enumerate_hypersubstitutions(hypervars, slices):
        inst = apply_hypersubstitution_formula(sigma, f)
        for idx in _all_failures_term_formula(a, inst, var_order, cap - len(out)):
            out.append(Witness(sigma, _assignment(var_order, a.size, idx)))
        if len(out) >= cap:
            break
    return out


def is_abelian(a, max_arity=3, max_clone_ops=DEFAULT_CLONE_LIMIT):
    """Term condition over every term operation of arity 2..max_arity.

    Operations are checked in clone discovery order, so a violation by a
    basic operation is found without completing the (possibly huge) slice.
    """
    if max_arity < 2:
        raise FormulaError("max_arity must be >= 2")
    for m in range(2, max_arity + 1):
        for op in iter_clone_ops(a, m, max_clone_ops):
            hit = kernels.tc_scan(op.table, a.size, m)
            if hit is not None:
                u, v, xflat, yflat, forward = hit
                xs = decode_args(xflat, a.size, m - 1)
                ys = decode_args(yflat, a.size, m - 1)
                return Verdict(
                    False, ConditionWitness(op.witness, u, v, xs, ys, forward)
                )
    return Verdict(True)


def replay_witness(a, f, witness):
    """Re-check a Witness against its formula; True when it is genuine."""
    from .terms import eval_term

    inst = f
    if witness.sigma is not None:
        inst = apply_hypersubstitution_formula(witness.sigma, f)
    asg = witness.assignment
    for l, r in inst.premises:
        if eval_term(a, l, asg) != eval_term(a, r, asg):
            return False
    l, r = inst.conclusion
    return eval_term(a, l, asg) != eval_term(a, r, asg)


def replay_condition_witness(a, witness):
    """Re-check a ConditionWitness by direct evaluation of the term."""
    from .terms import eval_term

    m = len(witness.xs) + 1
    names = ["x%d" % (i + 1) for i in range(m)]

    def value(first, rest):
        asg = dict(zip(names, (first,) + tuple(rest)))
        return eval_term(a, witness.term, asg)

    lhs = value(witness.u, witness.xs) == value(witness.u, witness.ys)
    rhs = value(witness.v, witness.xs) == value(witness.v, witness.ys)
    if witness.forward:
        return lhs and not rhs
    return rhs and not lhs
