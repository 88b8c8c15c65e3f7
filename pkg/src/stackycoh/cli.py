"""Command-line frontend.

Exit statuses: 0 success, 1 invalid input, 2 oracle budget exhausted,
64 usage error.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from . import render, verify
from .descriptor import NODAL, DescriptorError, load_descriptor
from .gcoh import BudgetExceeded, ModuleDescriptor, WildError, group_cohomology
from .groups import FiniteGroup, GroupError
from .stackcurve import (
    PipelineError,
    cohomology,
    cohomology_twisted_nodal,
    h2_abelian_crosscheck,
    kummer_h2,
    picard_orbicurve,
)
from .zlin import AbelianGroup, ZlinError

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def parse_group(spec: str) -> FiniteGroup:
    """``Z/4``, ``C4``, ``Z/2xZ/4``, ``D6`` (order 6) or ``1``."""
    s = spec.replace(" ", "")
    if s in ("1", "0", "trivial"):
        return FiniteGroup.cyclic(1)
    m = re.fullmatch(r"D(\d+)", s)
    if m:
        n = int(m.group(1))
        if n < 2 or n % 2:
            raise GroupError(f"dihedral order must be even and >= 2, got {n}")
        return FiniteGroup.dihedral(n // 2)
    orders = []
    for tok in re.split(r"[x*]", s):
        m = re.fullmatch(r"(?:Z/|C)(\d+)", tok)
        if not m:
            raise GroupError(f"cannot parse group {spec!r}")
        orders.append(int(m.group(1)))
    if any(d < 1 for d in orders):
        raise GroupError(f"cyclic orders must be >= 1 in {spec!r}")
    canon = AbelianGroup.from_cyclic_orders(orders)
    return FiniteGroup.abelian(canon.invariant_factors or (1,))


def parse_coeff(spec: str) -> ModuleDescriptor | AbelianGroup:
    s = spec.strip()
    if s == "k*":
        return ModuleDescriptor.units_of_field()
    m = re.fullmatch(r"Pic0\(g=(\d+)\)", s.replace(" ", ""))
    if m:
        return ModuleDescriptor.picard_zero(int(m.group(1)))
    try:
        return AbelianGroup.parse(s)
    except ValueError:
        raise GroupError(f"cannot parse coefficients {spec!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stackycoh", description="Cohomology of G_m on tame stacky curves.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(q):
        q.add_argument("--format", choices=("text", "json"), default="text")

    q = sub.add_parser("cohom", help="H^r(X, G_m) for r = 0..R")
    q.add_argument("--input", required=True)
    q.add_argument("--max-degree", type=int, required=True)
    fmt(q)
    q = sub.add_parser("picard", help="Picard group of the underlying orbicurve")
    q.add_argument("--input", required=True)
    fmt(q)
    q = sub.add_parser("groupcoh", help="H^r(G, M) for trivial action")
    q.add_argument("--group", required=True)
    q.add_argument("--coeff", required=True)
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--oracle", action="store_true", help="force the bar-complex oracle")
    fmt(q)
    q = sub.add_parser("kummer", help="H^2(Y, mu_n) = Pic(Y)/n")
    q.add_argument("--input", required=True)
    q.add_argument("--n", type=int, required=True)
    fmt(q)
    q = sub.add_parser("crosscheck", help="H^2 against the product gerbe")
    q.add_argument("--input", required=True)
    fmt(q)
    q = sub.add_parser("verify", help="run self-verification suites")
    q.add_argument("suite", choices=("all",) + verify.SUITES)
    fmt(q)
    return p


def _cohom(args) -> int:
    if args.max_degree < 0:
        raise ValueError("--max-degree must be >= 0")
    desc = load_descriptor(args.input)
    records = [render.result_record(cohomology(desc, r)) for r in range(args.max_degree + 1)]
    if args.format == "json":
        print(render.dumps(records))
    else:
        print(render.table(records, ["degree", "value", "provenance", "resolved", "order",
                                     "notes"]))
    return EXIT_OK


def _picard(args) -> int:
    desc = load_descriptor(args.input)
    if desc.coarse.kind == NODAL:
        rec = render.result_record(cohomology_twisted_nodal(desc, 1))
    else:
        rec = render.picard_record(picard_orbicurve(desc))
    if args.format == "json":
        print(render.dumps(rec))
    else:
        print("\n".join(f"{k}: {render.cell(v)}" for k, v in sorted(rec.items())))
    return EXIT_OK


def _groupcoh(args) -> int:
    g = parse_group(args.group)
    res = group_cohomology(g, parse_coeff(args.coeff), args.degree, oracle=args.oracle)
    if args.format == "json":
        print(render.dumps({"group": str(g), "coeff": args.coeff, "degree": args.degree,
                            "value": str(res.value), "provenance": res.provenance}))
    else:
        print(f"{res.value}  [{res.provenance}]")
    return EXIT_OK


def _kummer(args) -> int:
    desc = load_descriptor(args.input)
    val = kummer_h2(desc, args.n)
    if args.format == "json":
        print(render.dumps({"n": args.n, "value": str(val), "order": val.order}))
    else:
        print(val)
    return EXIT_OK


def _crosscheck(args) -> int:
    rep = h2_abelian_crosscheck(load_descriptor(args.input))
    if args.format == "json":
        print(render.dumps(rep))
    else:
        print(f"status: {rep['status']}")
        print(f"direct: {rep['direct']['value']} [{rep['direct']['provenance']}]")
        print(f"product gerbe: {rep['product_gerbe']['value']} "
              f"[{rep['product_gerbe']['provenance']}]")
        print(f"exact: {render.cell(rep['exact'])}")
        for n in rep["notes"]:
            print(f"note: {n}")
    return EXIT_OK


def _verify(args) -> int:
    checks = verify.run_suite(args.suite)
    if args.format == "json":
        print(render.dumps([c.as_dict() for c in checks]))
    else:
        for c in checks:
            print(f"{c.status.upper():8} {c.suite}.{c.name}  {c.detail}")
    return EXIT_INVALID if verify.failed(checks) else EXIT_OK


_COMMANDS = {"cohom": _cohom, "picard": _picard, "groupcoh": _groupcoh, "kummer": _kummer,
             "crosscheck": _crosscheck, "verify": _verify}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DescriptorError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, PipelineError, WildError, GroupError, ZlinError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
