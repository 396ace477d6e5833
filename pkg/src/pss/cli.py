"""Command line interface.

Subcommands:

* ``compute``: Fourier expansion of a Poincare square series of weight
  3/2 or 2 for a given lattice, index and twist element.
* ``eisenstein``: weight 3/2 Eisenstein series of a lattice of odd rank.
* ``verify``: built-in identity checks (class number relations, the
  overpartition rank identity, the overpartition product identity, and
  the theta decomposition crosscheck).
* ``pell``: unit orbits of a given norm in a real quadratic order.
* ``discriminant``: invariants of the discriminant group of a lattice.

Exit codes: 0 success, 1 a verification failed or the computation gave
up, 2 invalid input, 3 a coefficient that must be rational failed to
simplify.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from .lattice_core import GramMatrix, build_discriminant_form, parse_gram
from .local_counting import (
    BudgetError,
    DEFAULT_BUDGET,
    FitError,
    LocalFactorCache,
)
from .oracles import (
    check_kronecker_hurwitz,
    check_product_identity,
    check_prop20,
)
from .pell_engine import (
    fundamental_unit_plus,
    norm_orbits,
    orbit_sum,
    trace_bound,
)
from .series_builder import (
    RationalityError,
    SeriesRequest,
    plain_eisenstein_threehalves,
    pss_expansion,
    theta_crosscheck,
)

THREE_HALVES = Fraction(3, 2)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError("not a rational number: %r" % text) from exc


def _parse_beta(text: Optional[str]) -> Optional[tuple]:
    if text is None or text.strip() == "":
        return None
    return tuple(_parse_fraction(part) for part in text.split(","))


def _load_gram(args: argparse.Namespace) -> GramMatrix:
    if getattr(args, "gram_file", None):
        with open(args.gram_file, "r", encoding="utf-8") as fh:
            return parse_gram(fh.read())
    if args.gram is None:
        raise ValueError("a Gram matrix is required (--gram or --gram-file)")
    return parse_gram(args.gram)


def _open_cache(args: argparse.Namespace) -> Optional[LocalFactorCache]:
    path = getattr(args, "cache", None) or os.environ.get("PSS_CACHE")
    if not path:
        return None
    return LocalFactorCache(path)


def _mapper(jobs: int):
    if jobs <= 1:
        return None

    def parallel(fn, tasks):
        tasks = list(tasks)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))

    return parallel


def _emit_expansion(expansion, fmt: str, out) -> None:
    if fmt == "json":
        out.write(expansion.to_json() + "\n")
    else:
        out.write(expansion.render_text() + "\n")


def _cmd_compute(args: argparse.Namespace) -> int:
    gram = _load_gram(args)
    weight = _parse_fraction(args.weight)
    request = SeriesRequest(
        gram=gram,
        weight=weight,
        m=_parse_fraction(args.m),
        beta=_parse_beta(args.beta),
        precision=args.prec,
    )
    cache = _open_cache(args)
    expansion = pss_expansion(
        request, budget=args.budget, cache=cache, mapper=_mapper(args.jobs))
    if cache:
        cache.save()
    _emit_expansion(expansion, args.format, sys.stdout)
    return 0


def _cmd_eisenstein(args: argparse.Namespace) -> int:
    gram = _load_gram(args)
    cache = _open_cache(args)
    expansion = plain_eisenstein_threehalves(
        gram, args.prec, budget=args.budget, cache=cache,
        mapper=_mapper(args.jobs))
    if cache:
        cache.save()
    _emit_expansion(expansion, args.format, sys.stdout)
    return 0


def _report_lines(reports, name: str, out) -> int:
    failures = 0
    for rep in reports:
        if not rep.ok:
            failures += 1
            out.write("%s n=%d: lhs=%s rhs=%s MISMATCH\n"
                      % (rep.identity, rep.n, rep.lhs, rep.rhs))
    out.write("%s: %d checks, %d failures\n" % (name, len(reports), failures))
    return 1 if failures else 0


def _cmd_verify(args: argparse.Namespace) -> int:
    out = sys.stdout
    if args.what == "hurwitz":
        reports = [check_kronecker_hurwitz(n) for n in range(1, args.limit + 1)]
        return _report_lines(reports, "hurwitz", out)
    if args.what == "prop20":
        reports = [check_prop20(n) for n in range(1, args.limit + 1)]
        return _report_lines(reports, "prop20", out)
    if args.what == "product":
        report = check_product_identity(args.prec)
        return _report_lines([report], "product", out)
    # theta decomposition crosscheck
    gram = _load_gram(args)
    m_frac = _parse_fraction(args.m)
    if m_frac.denominator != 1:
        raise ValueError("the theta check needs an integer index m")
    cache = _open_cache(args)
    records = theta_crosscheck(
        gram, int(m_frac), args.prec, budget=args.budget, cache=cache)
    if cache:
        cache.save()
    failures = 0
    for rec in records:
        if not rec.ok:
            failures += 1
            out.write("theta gamma=%s n=%s r=%s: jacobi=%s plain=%s MISMATCH\n"
                      % (rec.gamma, rec.n, rec.r,
                         rec.jacobi_value, rec.plain_value))
    out.write("theta: %d comparisons, %d mismatches\n"
              % (len(records), failures))
    return 1 if failures else 0


def _cmd_pell(args: argparse.Namespace) -> int:
    out = sys.stdout
    unit = fundamental_unit_plus(args.d)
    out.write("fundamental unit: %s\n" % (unit,))
    out.write("trace bound: %.6f\n" % trace_bound(args.d, args.c))
    orbits = norm_orbits(args.d, args.c)
    shown = 0
    for orbit in orbits:
        tr = orbit.trace
        if args.mod is not None:
            residue = args.res if args.res is not None else 0
            if int(tr) % args.mod != residue % args.mod:
                continue
        shown += 1
        out.write("orbit: trace=%s rep=%s self_conjugate=%s sum=%r\n"
                  % (tr, orbit.rep, orbit.self_conjugate, orbit_sum(orbit)))
    out.write("orbits: %d shown of %d\n" % (shown, len(orbits)))
    return 0


def _cmd_discriminant(args: argparse.Namespace) -> int:
    out = sys.stdout
    gram = _load_gram(args)
    form = build_discriminant_form(gram)
    bplus, bminus = form.signature_pair
    out.write("rank: %d\n" % gram.rank)
    out.write("order: %d\n" % form.order)
    out.write("elementary divisors: %s\n"
              % (",".join(str(d) for d in form.elementary_divisors) or "-"))
    out.write("signature: (%d, %d)\n" % (bplus, bminus))
    for weight, label in ((THREE_HALVES, "3/2"), (Fraction(2), "2")):
        residue = (2 * weight + bplus - bminus) % 4
        out.write("weight %s compatible: %s\n"
                  % (label, "yes" if residue == 0 else "no"))
    for gamma in form.elements():
        out.write("element %s: q=%s order=%d\n"
                  % (form.label(gamma), form.q(gamma),
                     form.denominator(gamma)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pss",
        description="Exact Fourier expansions of Poincare square series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gram(p: argparse.ArgumentParser) -> None:
        p.add_argument("--gram", help="Gram matrix, e.g. '[[2,1],[1,-2]]' "
                       "or '2,1;1,-2'; empty string for the trivial lattice")
        p.add_argument("--gram-file", help="file containing the Gram matrix")

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cache", help="path of the local factor cache "
                       "(default: the PSS_CACHE environment variable)")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker threads for coefficient evaluation")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="work budget per local counting fit")

    p_compute = sub.add_parser("compute", help="Poincare square series")
    add_gram(p_compute)
    p_compute.add_argument("--weight", required=True, choices=("3/2", "2"))
    p_compute.add_argument("--m", required=True, help="index, a rational > 0")
    p_compute.add_argument("--beta", help="twist element as a comma separated "
                           "rational lift, e.g. '0,0,1/2'")
    p_compute.add_argument("--prec", type=int, required=True)
    add_common(p_compute)
    p_compute.set_defaults(func=_cmd_compute)

    p_eis = sub.add_parser("eisenstein", help="weight 3/2 Eisenstein series")
    add_gram(p_eis)
    p_eis.add_argument("--prec", type=int, required=True)
    add_common(p_eis)
    p_eis.set_defaults(func=_cmd_eisenstein)

    p_verify = sub.add_parser("verify", help="identity checks")
    p_verify.add_argument("what",
                          choices=("hurwitz", "prop20", "product", "theta"))
    p_verify.add_argument("--limit", type=int, default=100,
                          help="upper index for hurwitz/prop20 checks")
    p_verify.add_argument("--prec", type=int, default=8,
                          help="precision for product/theta checks")
    add_gram(p_verify)
    p_verify.add_argument("--m", default="1", help="index for the theta check")
    p_verify.add_argument("--cache")
    p_verify.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p_verify.set_defaults(func=_cmd_verify)

    p_pell = sub.add_parser("pell", help="norm orbits in a real quadratic order")
    p_pell.add_argument("--d", type=int, required=True,
                        help="squarefree discriminant direction > 1")
    p_pell.add_argument("--c", type=int, required=True, help="norm > 0")
    p_pell.add_argument("--mod", type=int, help="only traces in a residue class")
    p_pell.add_argument("--res", type=int, help="residue for --mod")
    p_pell.set_defaults(func=_cmd_pell)

    p_disc = sub.add_parser("discriminant", help="discriminant group data")
    add_gram(p_disc)
    p_disc.set_defaults(func=_cmd_discriminant)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RationalityError as exc:
        sys.stderr.write("rationality failure: %s\n" % exc)
        return 3
    except (BudgetError, FitError) as exc:
        sys.stderr.write("computation gave up: %s\n" % exc)
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
