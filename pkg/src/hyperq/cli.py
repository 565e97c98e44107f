"""Command-line front end.

Exit codes: 0 = property holds / construction succeeded, 1 = property fails
(witness on stdout), 2 = usage, parse, or validation error.  All output is
deterministic for fixed inputs and limits.
"""

import argparse
import os
import sys

from .algebra import format_algebra, parse_algebra, all_subalgebras, direct_product
from .catalog import catalog_get, catalog_names
from .clone import (
    DEFAULT_CLONE_LIMIT,
    clone_slice,
    enumerate_derived_algebras,
)
from .constructions import FilterFamily, reduced_product, ultraproduct
from .errors import HyperqError
from .satisfaction import check_formula, find_all_failures, is_abelian
from .terms import (
    HApp,
    Var,
    eval_term,
    format_term,
    parse_formula,
    parse_term,
    substitute,
)
from .verify import (
    verify_all,
    verify_prop41,
    verify_prop53_instances,
    verify_section1,
    verify_section3,
)

MODES = ("id", "quasi", "hyper", "hyperquasi")


def _clone_limit(flag_value):
    """Flag beats HYPERQ_MAX_CLONE_OPS beats the built-in default."""
    limit = flag_value
    if limit is None:
        env = os.environ.get("HYPERQ_MAX_CLONE_OPS")
        limit = int(env) if env else DEFAULT_CLONE_LIMIT
    if limit < 1:
        raise HyperqError("clone operation limit must be positive")
    return limit


def _load_algebra(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def _load_formulas(spec, sig):
    """Inline formula string, or @file with one formula per line."""
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        sources = [
            line.split("#", 1)[0].strip()
            for line in lines
        ]
        sources = [s for s in sources if s]
    else:
        sources = [spec]
    return [(src, parse_formula(src, sig)) for src in sources]


def _check_mode(formula, mode):
    if mode in ("id", "quasi") and formula.is_hyper:
        raise HyperqError("formula contains hypervariables; use a hyper mode")
    if mode in ("id", "hyper") and formula.premises:
        raise HyperqError("mode %s takes a formula without premises" % mode)


def emit_witness(witness, hyper):
    """One line: sigma block (hyper modes only), assignment, formula index."""
    parts = ["WITNESS"]
    if hyper:
        entries = sorted(witness.sigma.items()) if witness.sigma is not None else []
        inner = ",".join(
            "%s:=%s" % (name, format_term(op.witness)) for name, op in entries
        )
        parts.append("sigma{%s}" % inner)
    asg = ",".join(
        "%s:=%d" % (var, val) for var, val in sorted(witness.assignment.items())
    )
    parts.append("asg{%s}" % asg)
    parts.append("eq=%d" % witness.eq_index)
    return " ".join(parts)


def emit_condition_witness(witness):
    return "WITNESS term=%s u=%d v=%d xs=%s ys=%s dir=%s" % (
        format_term(witness.term),
        witness.u,
        witness.v,
        ",".join(str(x) for x in witness.xs),
        ",".join(str(y) for y in witness.ys),
        "fwd" if witness.forward else "rev",
    )


def _parse_block(line, key):
    start = line.index(key + "{") + len(key) + 1
    end = line.index("}", start)
    body = line[start:end]
    out = {}
    if body:
        for part in _split_top(body):
            name, _, value = part.partition(":=")
            out[name] = value
    return out


def _split_top(body):
    """Split on commas not nested inside parentheses."""
    parts = []
    depth = 0
    cur = []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    parts.append("".join(cur))
    return parts


def replay_witness_line(line, algebra, formulas):
    """Re-parse an emitted WITNESS line and reconfirm the violation."""
    eq = int(line.rsplit("eq=", 1)[1])
    formula = formulas[eq]
    asg = {
        name: int(value) for name, value in _parse_block(line, "asg").items()
    }
    if "sigma{" in line:
        sigma_terms = {
            name: parse_term(src, algebra.sig)
            for name, src in _parse_block(line, "sigma").items()
        }

        def instantiate(t):
            if isinstance(t, Var):
                return t
            args = tuple(instantiate(s) for s in t.args)
            if isinstance(t, HApp):
                mapping = {"x%d" % (j + 1): arg for j, arg in enumerate(args)}
                return substitute(sigma_terms[t.hypervar], mapping)
            return type(t)(t.symbol, args)

        premises = [(instantiate(l), instantiate(r)) for l, r in formula.premises]
        conclusion = (
            instantiate(formula.conclusion[0]),
            instantiate(formula.conclusion[1]),
        )
    else:
        premises = list(formula.premises)
        conclusion = formula.conclusion
    for l, r in premises:
        if eval_term(algebra, l, asg) != eval_term(algebra, r, asg):
            return False
    l, r = conclusion
    return eval_term(algebra, l, asg) != eval_term(algebra, r, asg)


def replay_condition_line(line, algebra):
    fields = dict(
        part.split("=", 1) for part in line.split()[1:]
    )
    term = parse_term(fields["term"], algebra.sig)
    u, v = int(fields["u"]), int(fields["v"])
    xs = [int(x) for x in fields["xs"].split(",")] if fields["xs"] else []
    ys = [int(y) for y in fields["ys"].split(",")] if fields["ys"] else []
    names = ["x%d" % (i + 1) for i in range(len(xs) + 1)]

    def value(first, rest):
        return eval_term(algebra, term, dict(zip(names, [first] + list(rest))))

    lhs = value(u, xs) == value(u, ys)
    rhs = value(v, xs) == value(v, ys)
    return (lhs and not rhs) if fields["dir"] == "fwd" else (rhs and not lhs)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_check(args):
    algebra = _load_algebra(args.algebra)
    formulas = _load_formulas(args.formula, algebra.sig)
    limit = _clone_limit(args.max_clone_ops)
    hyper = args.mode in ("hyper", "hyperquasi")
    for _, formula in formulas:
        _check_mode(formula, args.mode)
        if args.max_arity is not None:
            for hv, arity in formula.hypervars().items():
                if arity > args.max_arity:
                    raise HyperqError(
                        "hypervariable %s has arity %d above --max-arity %d"
                        % (hv, arity, args.max_arity)
                    )
    for index, (_, formula) in enumerate(formulas):
        verdict = check_formula(algebra, formula, args.mode, limit)
        if not verdict.holds:
            if args.witness_cap > 1:
                witnesses = find_all_failures(
                    algebra, formula, cap=args.witness_cap, max_clone_ops=limit
                )
            else:
                witnesses = [verdict.witness]
            for witness in witnesses:
                witness.eq_index = index
                line = emit_witness(witness, hyper)
                print(line)
                if args.replay:
                    ok = replay_witness_line(
                        line, algebra, [f for _, f in formulas]
                    )
                    if not ok:
                        raise HyperqError("replay failed to reconfirm the witness")
                    print("REPLAY confirmed")
            return 1
    return 0


def _cmd_clone(args):
    algebra = _load_algebra(args.algebra)
    limit = _clone_limit(args.max_clone_ops)
    s = clone_slice(algebra, args.arity, limit)
    for i, op in enumerate(s):
        print(
            "%d %s %s"
            % (i, " ".join(str(int(v)) for v in op.table), format_term(op.witness))
        )
    return 0


def _cmd_derived(args):
    algebra = _load_algebra(args.algebra)
    limit = _clone_limit(args.max_clone_ops)
    for i, (sigma, b) in enumerate(
        enumerate_derived_algebras(algebra, limit, dedup=args.dedup)
    ):
        inner = ",".join(
            "%s:=%s" % (name, format_term(op.witness))
            for name, op in sorted(sigma.items())
        )
        print("# %d sigma{%s}" % (i, inner))
        sys.stdout.write(format_algebra(b))
        print()
    return 0


def _cmd_product(args):
    family = [_load_algebra(p) for p in args.algebras]
    prod = direct_product(family, name=args.name)
    sys.stdout.write(format_algebra(prod))
    return 0


def _cmd_subalgebras(args):
    algebra = _load_algebra(args.algebra)
    for subset, _ in all_subalgebras(algebra):
        print("{%s}" % ",".join(str(x) for x in sorted(subset)))
    return 0


def _cmd_abelian(args):
    algebra = _load_algebra(args.algebra)
    limit = _clone_limit(args.max_clone_ops)
    verdict = is_abelian(algebra, args.max_arity, limit)
    if verdict.holds:
        return 0
    line = emit_condition_witness(verdict.witness)
    print(line)
    if args.replay:
        if not replay_condition_line(line, algebra):
            raise HyperqError("replay failed to reconfirm the witness")
        print("REPLAY confirmed")
    return 1


def _parse_filter_spec(spec, size):
    sets = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            sets.append([])
            continue
        sets.append([int(x) for x in part.split(",")])
    return FilterFamily(size, sets)


def _cmd_reduced_product(args):
    family = [_load_algebra(p) for p in args.algebras]
    f = _parse_filter_spec(args.filter, len(family))
    build = ultraproduct if args.ultra else reduced_product
    result = build(family, f, name=args.name)
    sys.stdout.write(format_algebra(result))
    return 0


def _cmd_verify(args):
    limit = _clone_limit(args.max_clone_ops)
    what = args.what
    results = []
    if what == "all":
        results = verify_all(limit)
    elif what == "prop41":
        if args.algebra:
            targets = [_load_algebra(args.algebra)]
        else:
            targets = [catalog_get(n) for n in ("z2", "chain2", "rb22")]
        for a in targets:
            results.extend(verify_prop41(a, max_clone_ops=limit))
    elif what == "prop53":
        if args.algebra:
            classes = [[_load_algebra(args.algebra)]]
        else:
            classes = [[catalog_get(n)] for n in ("z2", "chain2", "rb22")]
        for k in classes:
            results.extend(verify_prop53_instances(k, max_clone_ops=limit))
    elif what == "sec1":
        for n in range(2, 7):
            results.extend(verify_section1(n, limit))
    elif what == "sec3":
        results = verify_section3(limit)
    for r in results:
        print(r.line())
    return 0 if all(r.ok for r in results) else 1


def _cmd_catalog(args):
    if args.action == "list":
        for name in catalog_names():
            print(name)
        return 0
    sys.stdout.write(format_algebra(catalog_get(args.name)))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hyperq",
        description="Check identities, quasi-identities, hyperidentities and "
        "hyper-quasi-identities in finite algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide a formula in an algebra")
    p.add_argument("algebra", help="algebra file")
    p.add_argument("--formula", required=True, help="formula string or @file")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("--max-clone-ops", type=int, default=None)
    p.add_argument("--max-arity", type=int, default=None)
    p.add_argument("--witness-cap", type=int, default=1)
    p.add_argument("--replay", action="store_true")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("clone", help="list a clone slice")
    p.add_argument("algebra")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--max-clone-ops", type=int, default=None)
    p.set_defaults(run=_cmd_clone)

    p = sub.add_parser("derived", help="enumerate derived algebras")
    p.add_argument("algebra")
    p.add_argument("--max-clone-ops", type=int, default=None)
    p.add_argument("--dedup", action="store_true")
    p.set_defaults(run=_cmd_derived)

    p = sub.add_parser("product", help="direct product of algebra files")
    p.add_argument("algebras", nargs="+")
    p.add_argument("--name", default=None)
    p.set_defaults(run=_cmd_product)

    p = sub.add_parser("subalgebras", help="list all subuniverses")
    p.add_argument("algebra")
    p.set_defaults(run=_cmd_subalgebras)

    p = sub.add_parser("abelian", help="term-condition abelianness check")
    p.add_argument("algebra")
    p.add_argument("--max-arity", type=int, default=3)
    p.add_argument("--max-clone-ops", type=int, default=None)
    p.add_argument("--replay", action="store_true")
    p.set_defaults(run=_cmd_abelian)

    p = sub.add_parser("reduced-product", help="reduced product over a filter")
    p.add_argument("algebras", nargs="+")
    p.add_argument(
        "--filter",
        required=True,
        help="member sets, e.g. '0,1,2;0,1;0' (semicolon-separated)",
    )
    p.add_argument("--ultra", action="store_true", help="require an ultrafilter")
    p.add_argument("--name", default=None)
    p.set_defaults(run=_cmd_reduced_product)

    p = sub.add_parser("verify", help="run the named instance-scale checks")
    p.add_argument("what", choices=("all", "prop41", "prop53", "sec1", "sec3"))
    p.add_argument("--algebra", default=None)
    p.add_argument("--max-clone-ops", type=int, default=None)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("catalog", help="built-in algebras")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(run=_cmd_catalog)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog" and args.action == "show" and not args.name:
        print("error: catalog show needs a name", file=sys.stderr)
        return 2
    try:
        return args.run(args)
    except HyperqError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
