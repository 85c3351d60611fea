"""Command-line front end for the oja toolkit.

Subcommands
-----------
transpose   Berglund–Hübsch transpose of an invertible polynomial.
symmetry    Maximal diagonal symmetry group, or its SL subgroup.
milnor      Milnor number (dimension of the Jacobian algebra).
jacobian    Jacobian algebra: basis, Hessian class, trace normalization.
orbifold    Orbifold Jacobian algebra of a polynomial with a symmetry group.
verify      Certify catalog rows by embedded witness or ansatz search.
graph       Assemble and certify the catalog's isomorphism graph.

The global flags ``--json`` (machine-readable output) and ``--catalog PATH``
(alternate catalog file) are accepted before or after the subcommand.

Exit codes: 0 on success, 1 on a verification failure, 2 on bad input.
``OJA_THREADS`` caps the worker pool used by ``verify --all``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .catalog import Catalog, CatalogRow, load_catalog, row_source, row_target, row_witness
from .duality import RowCertificate, SearchFailure, certify, duality_graph
from .jacobian import QuotientAlgebra, milnor, quotient_algebra
from .orbifold import OrbifoldAlgebra, orbifold_algebra
from .poly import Poly, parse
from .scalar import CycScalar
from .symmetry import (GroupElement, InvertiblePoly, SymmetryGroup,
                       build_invertible, max_symmetry_group, sl_subgroup,
                       transpose)


class CliError(Exception):
    """Bad command-line input, reported on stderr with exit code 2."""


# --- input parsing -----------------------------------------------------------

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_CANONICAL = re.compile(r"x[1-9][0-9]*\Z")

_ALIASES = ("x", "y", "z")


def _infer_vars(text: str) -> tuple[str, ...]:
    """Variable tuple for a polynomial given in canonical or alias names.

    Canonical names x1…xN fix the tuple (x1, …, xN) with N the largest
    index used; the aliases x, y, z are accepted as-is, in that order.
    """
    names = set(_IDENTIFIER.findall(text))
    if not names:
        raise CliError(f"no variables found in {text!r}")
    if all(_CANONICAL.match(n) for n in names):
        top = max(int(n[1:]) for n in names)
        return tuple(f"x{i}" for i in range(1, top + 1))
    if names <= set(_ALIASES):
        return tuple(n for n in _ALIASES if n in names)
    raise CliError(
        f"cannot infer variables from {sorted(names)}; "
        "use canonical names x1..xN (or the aliases x, y, z)")


def _explicit_vars(spec: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in spec.split(","))
    if any(not n for n in names) or len(set(names)) != len(names):
        raise CliError(f"bad variable list {spec!r}")
    return names


def _poly(text: str, vars: tuple[str, ...] | None = None) -> Poly:
    return parse(text, vars if vars is not None else _infer_vars(text))


def _invertible(text: str, vars: tuple[str, ...] | None = None) -> InvertiblePoly:
    return build_invertible(_poly(text, vars))


def _group_element(text: str, arity: int) -> GroupElement:
    g = GroupElement.parse(text)
    if g.arity != arity:
        raise CliError(f"group element ({text}) has {g.arity} phases, expected {arity}")
    return g


def _load_catalog(args: argparse.Namespace) -> Catalog:
    try:
        return load_catalog(args.catalog)
    except FileNotFoundError:
        raise CliError(f"catalog file not found: {args.catalog}") from None
    except KeyError as exc:
        raise CliError(f"invalid catalog: missing key {exc}") from None
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise CliError(f"invalid catalog: {exc}") from None


def _thread_cap() -> int:
    raw = os.environ.get("OJA_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise CliError(f"OJA_THREADS must be an integer, got {raw!r}") from None
        if cap < 1:
            raise CliError("OJA_THREADS must be at least 1")
        return cap
    return min(8, os.cpu_count() or 1)


# --- output helpers ----------------------------------------------------------


def _emit(args: argparse.Namespace, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _mono_str(vars: Sequence[str], exponents: Sequence[int]) -> str:
    if not any(exponents):
        return "1"
    return str(Poly.monomial(tuple(vars), tuple(exponents)))


def _display_generators(group: SymmetryGroup) -> list[GroupElement]:
    """A small deterministic generating set for printing.

    Stored generators are used when they still generate the whole group
    (subgroup constructions may filter them away).  Otherwise a cyclic group
    is shown through its largest maximal-order element, and the general case
    falls back to a greedy closure sweep over the canonical element order.
    """
    if group.order == 1:
        return []
    arity = group.elements[0].arity
    gens = [g for g in group.generators if not g.is_identity()]
    if gens and SymmetryGroup.generated_by(gens, arity) == group:
        return gens
    cyclic = [g for g in group if g.order() == group.order]
    if cyclic:
        return [max(cyclic, key=lambda g: g.phases)]
    chosen: list[GroupElement] = []
    span = SymmetryGroup.trivial(arity)
    for g in group:
        if g in span:
            continue
        chosen.append(g)
        span = SymmetryGroup.generated_by(chosen, arity)
        if span == group:
            break
    return chosen


# --- subcommands -------------------------------------------------------------


def cmd_transpose(args: argparse.Namespace) -> int:
    vars = _explicit_vars(args.vars) if args.vars else None
    tp = transpose(_invertible(args.poly, vars))
    payload = {
        "polynomial": str(tp.poly),
        "variables": list(tp.vars),
        "weights": list(tp.weights),
        "degree": tp.degree,
    }
    _emit(args, payload, [str(tp.poly)])
    return 0


def cmd_symmetry(args: argparse.Namespace) -> int:
    group = max_symmetry_group(_invertible(args.poly))
    if args.sl:
        group = sl_subgroup(group)
    gens = _display_generators(group)
    lines = [f"order {group.order}"]
    lines.extend(f"generator ({g})" for g in gens)
    payload = {
        "order": group.order,
        "generators": [str(g) for g in gens],
        "elements": [str(g) for g in group],
    }
    _emit(args, payload, lines)
    return 0


def cmd_milnor(args: argparse.Namespace) -> int:
    f = _poly(args.poly)
    mu = milnor(f)
    _emit(args, {"polynomial": str(f), "milnor": mu}, [str(mu)])
    return 0


def _jacobian_lines(args: argparse.Namespace, algebra: QuotientAlgebra,
                    trace: CycScalar) -> list[str]:
    if args.basis:
        return [_mono_str(algebra.vars, m) for m in algebra.basis]
    if args.hessian:
        return [str(algebra.hess_nf)]
    socle = _mono_str(algebra.vars, algebra.socle)
    if args.trace:
        return [f"socle {socle}", f"trace {trace}"]
    return [
        f"dimension {algebra.dim}",
        f"weights {','.join(str(w) for w in algebra.weights)}",
        f"degree {algebra.degree}",
        f"socle {socle}",
    ]


def cmd_jacobian(args: argparse.Namespace) -> int:
    ip = _invertible(args.poly)
    algebra = quotient_algebra(ip.poly, ip.weights, ip.degree)
    trace = CycScalar.from_rational(algebra.mu) * algebra.trace_scale
    payload = {
        "polynomial": str(ip.poly),
        "dimension": algebra.dim,
        "weights": list(algebra.weights),
        "degree": algebra.degree,
        "basis": [_mono_str(algebra.vars, m) for m in algebra.basis],
        "socle": _mono_str(algebra.vars, algebra.socle),
        "hessian": str(algebra.hess_nf),
        "trace": str(trace),
    }
    _emit(args, payload, _jacobian_lines(args, algebra, trace))
    return 0


def _orbifold_lines(args: argparse.Namespace, algebra: OrbifoldAlgebra) -> list[str]:
    if args.structure:
        return [f"{algebra.label(i)} * {algebra.label(j)} = "
                f"{algebra.vector_str(algebra.basis_vector_product(i, j))}"
                for (i, j) in sorted(algebra.structure)]
    if args.pairing:
        return [f"eta[{algebra.label(i)}, {algebra.label(j)}] = {c}"
                for i, row in enumerate(algebra.gram)
                for j, c in enumerate(row) if not c.is_zero()]
    lines = [f"dimension {algebra.dim}"]
    parity = {0: "even", 1: "odd"}
    lines.extend(f"{algebra.label(i)}  degree {algebra.degrees[i]}  {parity[p]}"
                 for i, p in enumerate(algebra.parities))
    return lines


def cmd_orbifold(args: argparse.Namespace) -> int:
    ip = _invertible(args.poly)
    generators = [_group_element(text, ip.arity) for text in args.group]
    group = SymmetryGroup.generated_by(generators, ip.arity)
    if not group.is_subgroup_of(sl_subgroup(max_symmetry_group(ip))):
        raise CliError(
            f"<{'; '.join(args.group)}> is not a special-linear symmetry group of {ip.poly}")
    algebra = orbifold_algebra(ip, group)
    payload = {"dimension": algebra.dim, **algebra.to_json()}
    _emit(args, payload, _orbifold_lines(args, algebra))
    return 0


def _certify_row(row: CatalogRow, search: bool
                 ) -> tuple[CatalogRow, RowCertificate | None, str]:
    source = row_source(row)
    target_ip, group = row_target(row)
    target = orbifold_algebra(target_ip, group)
    witness = None if search else row_witness(row)
    try:
        return row, certify(source, target, witness), ""
    except SearchFailure as exc:
        return row, None, str(exc)


def _row_line(row: CatalogRow, cert: RowCertificate | None, error: str) -> str:
    pair = f"{row.f1_type} ~ {row.f2_type}"
    if cert is None:
        return f"row {row.index}: {pair} failed ({error})"
    return f"row {row.index}: {pair} {cert.level} ({cert.method})"


def cmd_verify(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args)
    if args.row is not None:
        try:
            rows = [catalog.row(args.row)]
        except KeyError:
            raise CliError(f"no catalog row {args.row}") from None
    else:
        rows = list(catalog.rows)

    cap = min(_thread_cap(), len(rows))
    if cap <= 1:
        results = [_certify_row(row, args.search) for row in rows]
    else:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(lambda row: _certify_row(row, args.search), rows))

    lines = [_row_line(row, cert, error) for row, cert, error in results]
    if args.row is not None:
        row, cert, _ = results[0]
        if cert is not None:
            lines.extend(f"  {v} -> {cert.witness.image_str(i)}"
                         for i, v in enumerate(cert.witness.source.vars))
            lines.extend(
                f"  {check.name}: {'ok' if check.passed else 'FAIL (' + check.detail + ')'}"
                for check in cert.report.checks)
    full = sum(1 for _, cert, _ in results if cert is not None and cert.full)
    partial = [row.index for row, cert, _ in results if cert is not None and not cert.full]
    failed = [row.index for row, cert, _ in results if cert is None]
    if len(results) > 1:
        lines.append(f"{full}/{len(results)} rows certified at Frobenius level")
        if partial:
            lines.append("algebra level only: " + " ".join(str(i) for i in partial))
        if failed:
            lines.append("not certified: " + " ".join(str(i) for i in failed))

    payload = {
        "rows": [{
            "index": row.index,
            "pair": [row.f1_type, row.f2_type],
            "certificate": cert.to_json() if cert is not None else None,
            "error": error,
        } for row, cert, error in results],
        "frobenius": full,
        "total": len(results),
        "passed": full == len(results),
    }
    _emit(args, payload, lines)
    return 0 if full == len(results) else 1


def cmd_graph(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args)
    try:
        graph = duality_graph(catalog)
    except (SearchFailure, ValueError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(graph.to_json(), indent=2, sort_keys=True))
        return 0
    if args.dot:
        print(graph.to_dot())
        return 0
    lines = [f"nodes {len(graph.nodes)}", f"edges {len(graph.edges)}"]
    lines.extend("component " + " ".join(comp) for comp in graph.components)
    lines.extend(graph.certifications)
    lines.extend(f"compare {a} {b}: {'equal' if eq else 'distinct'}"
                 for a, b, eq in graph.fingerprint_comparisons())
    for line in lines:
        print(line)
    return 0


# --- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oja",
        description="Exact orbifold Jacobian algebras over Q(zeta_24).")
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON instead of text")
    parser.add_argument("--catalog", metavar="PATH", default=None,
                        help="alternate catalog file (default: the embedded catalog)")
    parser.set_defaults(func=None)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def command(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        # Accept the global flags after the subcommand too; SUPPRESS keeps
        # the subparser from clobbering values the root parser already set.
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                       help=argparse.SUPPRESS)
        p.add_argument("--catalog", metavar="PATH", default=argparse.SUPPRESS,
                       help=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = command("transpose", cmd_transpose,
                "Berglund-Hubsch transpose of an invertible polynomial")
    p.add_argument("poly", help='polynomial, e.g. "x1^3*x2+x2^3+x3^2"')
    p.add_argument("--vars", metavar="a,b,c", default=None,
                   help="comma-separated variable names (default: inferred)")

    p = command("symmetry", cmd_symmetry,
                "maximal diagonal symmetry group of an invertible polynomial")
    p.add_argument("poly", help="invertible polynomial")
    p.add_argument("--sl", action="store_true",
                   help="restrict to the special-linear (integral-age) subgroup")

    p = command("milnor", cmd_milnor, "Milnor number of an isolated singularity")
    p.add_argument("poly", help="polynomial with an isolated critical point at 0")

    p = command("jacobian", cmd_jacobian,
                "Jacobian algebra of an invertible polynomial")
    p.add_argument("poly", help="invertible polynomial")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--basis", action="store_true",
                      help="print the standard-monomial basis, one per line")
    mode.add_argument("--hessian", action="store_true",
                      help="print the normal form of the Hessian determinant")
    mode.add_argument("--trace", action="store_true",
                      help="print the trace of the socle class")

    p = command("orbifold", cmd_orbifold,
                "orbifold Jacobian algebra for a polynomial and group")
    p.add_argument("poly", help="invertible polynomial")
    p.add_argument("--group", metavar="a1/r,...,aN/r", action="append", required=True,
                   help="group generator as comma-separated phases (repeatable)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--structure", action="store_true",
                      help="print all nonzero basis products")
    mode.add_argument("--pairing", action="store_true",
                      help="print all nonzero pairing values")

    p = command("verify", cmd_verify,
                "certify catalog rows (exit 1 unless all reach Frobenius level)")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--row", type=int, metavar="ID", default=None,
                       help="certify a single catalog row")
    which.add_argument("--all", action="store_true",
                       help="certify every catalog row")
    p.add_argument("--search", action="store_true",
                   help="ignore embedded witnesses and always run the ansatz search")

    p = command("graph", cmd_graph,
                "build the certified isomorphism graph of the catalog")
    p.add_argument("--dot", action="store_true", help="emit Graphviz dot")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.func is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
