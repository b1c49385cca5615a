"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 internal assertion failure
(a structural identity did not hold), 3 usage error.  Reports go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import mvss, persistence, report, toroidal
from .complexes import ContractError, homology
from .io import InputError, load_cycle, load_periodic
from .linalg import LinAlgError
from .monodromy import build_monodromy
from .periodic import (
    build_quotient, build_window, normalize, validate_periodic,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ASSERT = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="report format (default json)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed recorded in the report, for randomized "
                             "reruns")
    common.add_argument("--quiet", action="store_true",
                        help="suppress the report body; keep exit codes")
    common.add_argument("--figures", metavar="DIR", default=None,
                        help="also render matplotlib figures into DIR")
    p = _Parser(prog="perihom",
                description="Homology of 1-periodic cell complexes: window "
                            "pairs, translation endomorphisms, toroidal "
                            "cycles, filtrations and oracles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("validate", parents=[common],
                        help="check a periodic complex file")
    sp.add_argument("file")

    sp = sub.add_parser("homology", parents=[common],
                        help="Betti numbers of U, V and the n-fold quotient")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, default=1)

    sp = sub.add_parser("monodromy", parents=[common],
                        help="translation endomorphisms on window homology")
    sp.add_argument("file")
    sp.add_argument("--degree", default="all",
                    help="restrict to one homology degree (default all)")
    sp.add_argument("--emit-matrices", action="store_true")

    sp = sub.add_parser("toroidal", parents=[common],
                        help="toroidal/non-toroidal split of the quotient")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--recover", action="store_true",
                    help="also recover explicit toroidal representatives")
    sp.add_argument("--max-n", type=int, default=None,
                    help="report the smallest n <= bound where the "
                         "dimension match holds in every degree")

    sp = sub.add_parser("classify", parents=[common],
                        help="decide whether a given cycle is toroidal")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cycle", required=True)

    sp = sub.add_parser("persist", parents=[common],
                        help="per-step windows, monodromy and unimodality")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, default=None,
                    help="also classify the n-fold quotient of the full "
                         "complex")
    sp.add_argument("--emit-matrices", action="store_true")

    sp = sub.add_parser("oracle", parents=[common],
                        help="strip-image and blow-up cross-checks")
    sp.add_argument("file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-strips", type=int, default=64)
    return p


def _emit(doc: dict, args) -> None:
    if args.figures:
        from . import plots
        doc["figures"] = plots.render(args.command, doc, args.figures)
    if args.quiet:
        return
    if args.format == "text":
        sys.stdout.write(report.to_plain_text(doc) + "\n")
    else:
        sys.stdout.write(report.to_json_text(doc))


def _header(args, np_=None) -> dict:
    doc = report.header(args.command, args.file, np_)
    if args.seed is not None:
        doc["seed"] = args.seed
    return doc


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ContractError, LinAlgError) as e:
        print(f"internal assertion failed: {e}", file=sys.stderr)
        return EXIT_ASSERT


def _dispatch(args) -> int:
    if args.command == "validate":
        p = load_periodic(args.file)
        diags = validate_periodic(p)
        doc = _header(args)
        doc["field"] = p.field.to_json()
        doc["valid"] = not diags
        doc["diagnostics"] = diags
        _emit(doc, args)
        return EXIT_OK if not diags else EXIT_INVALID

    p = load_periodic(args.file)
    diags = validate_periodic(p)
    if diags:
        raise InputError("; ".join(diags))
    np_ = normalize(p)

    if args.command == "homology":
        _check_n(args.n)
        w = build_window(np_)
        g = build_quotient(np_, args.n)
        doc = _header(args, np_)
        doc["n"] = args.n
        doc["homology"] = {
            "U": report.homology_json(homology(w.U)),
            "V": report.homology_json(homology(w.V)),
            "quotient": report.homology_json(homology(g.complex)),
        }
        _emit(doc, args)
        return EXIT_OK

    if args.command == "monodromy":
        degree = None
        if args.degree != "all":
            try:
                degree = int(args.degree)
            except ValueError:
                raise InputError(f"--degree must be an integer or 'all', "
                                 f"got {args.degree!r}")
        ms = build_monodromy(build_window(np_))
        doc = _header(args, np_)
        doc["monodromy"] = report.monodromy_json(
            ms, degree=degree, emit_matrices=args.emit_matrices)
        _emit(doc, args)
        return EXIT_OK

    if args.command == "toroidal":
        _check_n(args.n)
        ms = build_monodromy(build_window(np_))
        rep = toroidal.classify(np_, args.n, ms=ms,
                                recover_representatives=args.recover)
        g = build_quotient(np_, args.n)
        doc = _header(args, np_)
        doc["toroidal"] = report.toroidal_json(rep, g)
        if args.max_n is not None:
            doc["toroidal"]["smallest_matching_n"] = _smallest_matching_n(
                np_, ms, args.max_n)
        _emit(doc, args)
        return EXIT_OK

    if args.command == "classify":
        _check_n(args.n)
        g = build_quotient(np_, args.n)
        degree, chain = load_cycle(args.cycle, g)
        ms = build_monodromy(build_window(np_))
        try:
            verdict = toroidal.is_toroidal(np_, args.n, degree, chain, ms=ms)
        except ContractError as e:
            if "not a cycle" in str(e):
                raise InputError(str(e))
            raise
        doc = _header(args, np_)
        doc["n"] = args.n
        doc["degree"] = degree
        doc["verdict"] = report.verdict_json(verdict, g.complex.field)
        _emit(doc, args)
        return EXIT_OK

    if args.command == "persist":
        if p.filtration is None:
            raise InputError("persist needs a filtration")
        fa = persistence.analyze_filtration(np_)
        uni = persistence.check_unimodality(fa)
        timeline = persistence.toroidal_timeline(fa)
        doc = _header(args, np_)
        doc["persistence"] = report.persistence_json(
            fa, uni, timeline, emit_matrices=args.emit_matrices)
        if args.n is not None:
            _check_n(args.n)
            rep = toroidal.classify(np_, args.n)
            doc["toroidal"] = report.toroidal_json(
                rep, build_quotient(np_, args.n))
        _emit(doc, args)
        return EXIT_OK

    if args.command == "oracle":
        _check_n(args.n)
        g = build_quotient(np_, args.n)
        hg = homology(g.complex)
        simg = toroidal.nontoroidal_image(np_, args.n, hg, g,
                                          max_strips=args.max_strips)
        b = mvss.build_blowup(np_, args.n)
        ht = mvss.total_homology(b)
        doc = _header(args, np_)
        doc["n"] = args.n
        doc["oracle"] = report.oracle_json(simg, hg, ht.betti_vector,
                                           g.complex.max_degree)
        _emit(doc, args)
        return EXIT_OK if doc["oracle"]["mvss_agrees"] else EXIT_ASSERT

    raise InputError(f"unknown command {args.command!r}")


def _check_n(n: int) -> None:
    if n < 1:
        raise InputError(f"--n must be >= 1, got {n}")


def _smallest_matching_n(np_, ms, bound: int):
    for n in range(1, bound + 1):
        rep = toroidal.classify(np_, n, ms=ms)
        if all(d.phi1_iso for d in rep.degrees if d.degree >= 1):
            return n
    return None


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
