"""Command-line entry point.

Exit codes: 0 success or certificate accepted, 1 no certificate found or
certificate rejected, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .arith import IntPolynomial
from .knotio import DiagramError, parse_diagram, render_pd, canonical_form, validate, require_valid
from .polysys import FactorizationTooLarge, TooFewGenerators, density_scan, encode_noncommutative, format_rows, unconditional_prime
from .present import alexander, wirtinger
from .prover import BudgetExhausted, NotFound, ProverConfig, prove
from .verifier import verify_bytes

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, check: bool = True):
    try:
        d = parse_diagram(_read(path))
        if check:
            require_valid(d)
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None
    return d


def cmd_parse(args) -> int:
    try:
        d = parse_diagram(_read(args.file), check_labels=False)
    except DiagramError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    report = validate(d)
    if not report.ok:
        print("invalid")
        for issue in report.issues:
            print(f"  {issue}")
        return EXIT_FAIL
    canon = canonical_form(d)
    print(render_pd(canon))
    print(f"crossings={canon.n} signs={' '.join('+' if x.sign > 0 else '-' for x in canon.crossings)}")
    return EXIT_OK


def cmd_group(args) -> int:
    d = _load(args.file)
    print(wirtinger(canonical_form(d)).pretty())
    return EXIT_OK


def cmd_alex(args) -> int:
    d = _load(args.file)
    delta = alexander(d)
    print(delta.pretty("t"))
    if args.coeffs:
        print(delta.to_csv())
    return EXIT_OK


def cmd_prove(args) -> int:
    d = _load(args.file)
    try:
        cfg = ProverConfig(
            prime_min=args.pmin,
            prime_max=args.pmax,
            strategy=args.strategy,
            deterministic=args.deterministic,
            max_nodes=args.max_nodes,
            workers=args.workers,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        result = prove(d, cfg)
    except BudgetExhausted as exc:
        print(f"gave up: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if isinstance(result, NotFound):
        print(f"not found: {result}", file=sys.stderr)
        print("(this does not show the knot is trivial)", file=sys.stderr)
        return EXIT_FAIL
    data = result.to_bytes()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        print(f"certificate p={result.prime} written to {args.out}")
    else:
        sys.stdout.write(data.decode("ascii"))
    return EXIT_OK


def cmd_verify(args) -> int:
    d = _load(args.file, check=False)
    try:
        with open(args.cert, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc.strerror}") from None
    verdict = verify_bytes(data, d)
    line = "accepted" if verdict.accepted else "rejected"
    print(f"{line}: {verdict}")
    if verdict.detail:
        print(verdict.detail, file=sys.stderr)
    return EXIT_OK if verdict.accepted else EXIT_FAIL


def _poly(text: str) -> IntPolynomial:
    try:
        return IntPolynomial.parse(text)
    except ValueError as exc:
        raise InputError(f"bad polynomial {text!r}: {exc}") from None


def cmd_density(args) -> int:
    h = _poly(args.poly)
    rows: list | None = [] if args.csv else None
    try:
        report = density_scan(h, args.xmax, rows)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(report.summary())
    try:
        p, x0 = unconditional_prime(h)
        print(f"unconditional prime = {p} (h({x0}) = {h(x0)}, root {x0 % p} mod {p})")
    except FactorizationTooLarge as exc:
        print(f"unconditional prime: {exc}", file=sys.stderr)
    if args.csv:
        text = format_rows(rows)
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w", encoding="ascii") as fh:
                fh.write(text)
    return EXIT_OK


def _pair(text: str, names) -> tuple[int, int]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 2:
        raise InputError(f"--pair wants two generators, got {text!r}")
    out = []
    for s in parts:
        if s in names:
            out.append(names.index(s))
        elif s.isdigit() and 1 <= int(s) <= len(names):
            out.append(int(s) - 1)
        else:
            raise InputError(f"unknown generator {s!r} (names {','.join(names)} or 1..{len(names)})")
    return out[0], out[1]


def cmd_encode(args) -> int:
    d = _load(args.file)
    pres = wirtinger(canonical_form(d))
    pair = _pair(args.pair, list(pres.generators))
    try:
        system = encode_noncommutative(pres, pair)
    except (TooFewGenerators, ValueError) as exc:
        raise InputError(str(exc)) from None
    print(system.describe())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knotcert", description="Certificates of knottedness over SL(2, Z/p).")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("parse", help="validate a diagram and print its canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("group", help="print the Wirtinger presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("alex", help="print the Alexander polynomial")
    p.add_argument("file")
    p.add_argument("--coeffs", action="store_true", help="also print coefficients, constant term first")
    p.set_defaults(func=cmd_alex)

    p = sub.add_parser("prove", help="search for a certificate")
    p.add_argument("file")
    p.add_argument("--pmin", type=int, default=2)
    p.add_argument("--pmax", type=int, default=1 << 20)
    p.add_argument("--strategy", choices=("alexander", "backtrack", "auto"), default="auto")
    p.add_argument("--deterministic", action="store_true", help="smallest prime wins even with several workers")
    p.add_argument("--max-nodes", type=int, default=20_000, help="backtracking budget per prime")
    p.add_argument("--workers", type=int, default=None, help="prover processes (capped by KNOTCERT_THREADS)")
    p.add_argument("--out", help="write the certificate here instead of stdout")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="check a certificate against a diagram")
    p.add_argument("file")
    p.add_argument("--cert", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="count primes modulo which a polynomial has a root")
    p.add_argument("--poly", required=True, help='coefficients, constant first, e.g. "1,0,1"')
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--csv", help="write p,has_root,first_root rows to this file ('-' for stdout)")
    p.add_argument("--deterministic", action="store_true", help="accepted for symmetry; the scan is sequential")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("encode", help="print the polynomial system for a non-commuting generator pair")
    p.add_argument("file")
    p.add_argument("--pair", default="1,2", help="two generators by name or 1-based index")
    p.set_defaults(func=cmd_encode)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
