"""Command line front end.

Commands: parametrize, verify, solve-conic, trivialize, lie-algebra, generate.
Exit codes: 0 success, 1 parse/internal error, 2 not rational / not split,
3 unknown (search budget reached), 4 unrecognized input, 5 verification
failed, 6 factorization budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .fields import QQ
from .linalg import Matrix, SymQuadric
from .polys import (
    MultiPoly,
    PolyMap,
    parse_multipoly,
    poly_to_str,
    quadric_to_matrix,
    detect_z_arity,
    z_varnames,
)
from .dioph import FactorizationLimit, conic_point, conic_parametrization
from .linalg import congruence_diagonalize
from .assoc import AssocAlgebra
from .csa import trivialize, DEFAULT_HEIGHT_CAP, DEFAULT_SEARCH_BUDGET
from .surfaces import (
    KINDS,
    Parametrization,
    QuadricVariety,
    generate_example,
    lie_algebra_of_variety,
    parametrize_variety,
    standard_monomials,
    verify_parametrization,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_RATIONAL = 2
EXIT_UNKNOWN = 3
EXIT_UNRECOGNIZED = 4
EXIT_VERIFY_FAILED = 5
EXIT_FACTOR_LIMIT = 6


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _strip_lines(text):
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_variety(text) -> QuadricVariety:
    lines = _strip_lines(text)
    if not lines:
        raise ValueError("no generators in input")
    n1 = detect_z_arity(lines)
    names = z_varnames(n1)
    gens = []
    for line in lines:
        f = parse_multipoly(line, names)
        gens.append(quadric_to_matrix(f))
    return QuadricVariety(n1 - 1, gens)


PARAM_VARS = {2: ["s", "t"], 3: ["a", "b", "c"], 4: ["s0", "s1", "t0", "t1"]}


def _param_varnames(nvars):
    return PARAM_VARS.get(nvars, [f"u{i}" for i in range(nvars)])


def format_parametrization(P: Parametrization, structured: bool) -> str:
    names = _param_varnames(P.monomials.source_vars)
    lines = []
    if structured:
        lines.append("FIELD QQ")
        lines.append(f"MATRIX {P.matrix.nrows} {P.matrix.ncols}")
        for i in range(P.matrix.nrows):
            lines.append(" ".join(str(x) for x in P.matrix.row(i)))
        lines.append("MONOMIALS " + ",".join(names))
        for comp in P.monomials.components:
            lines.append(poly_to_str(comp, names))
        lines.append("POLY")
        for comp in P.composed.components:
            lines.append(poly_to_str(comp, names))
        lines.append("END")
    else:
        lines.append("parametrization matrix (rows -> coordinates):")
        for i in range(P.matrix.nrows):
            lines.append("  [" + ", ".join(str(x) for x in P.matrix.row(i)) + "]")
        lines.append("monomials: (" + " : ".join(poly_to_str(c, names) for c in P.monomials.components) + ")")
        lines.append("composed: (" + " : ".join(poly_to_str(c, names) for c in P.composed.components) + ")")
    return "\n".join(lines)


def parse_parametrization(text) -> Parametrization:
    lines = [l.rstrip() for l in text.splitlines() if l.strip() and not l.strip().startswith("#")]
    i = 0
    assert lines[i].startswith("FIELD"), "expected FIELD header"
    assert lines[i].split()[1] == "QQ", "only rational parametrizations supported"
    i += 1
    assert lines[i].startswith("MATRIX")
    _, r, c = lines[i].split()
    r, c = int(r), int(c)
    i += 1
    rows = []
    for _ in range(r):
        rows.append([Fraction(tok) for tok in lines[i].split()])
        assert len(rows[-1]) == c
        i += 1
    assert lines[i].startswith("MONOMIALS")
    names = lines[i].split(None, 1)[1].split(",")
    i += 1
    comps = []
    while i < len(lines) and lines[i] not in ("POLY", "END"):
        comps.append(parse_multipoly(lines[i], names))
        i += 1
    pm = PolyMap(comps)
    return Parametrization(QQ, Matrix(QQ, rows), pm)


# ---------------------------------------------------------------------------
# commands


def cmd_parametrize(args) -> int:
    try:
        V = parse_variety(_read_text(args.input))
    except Exception as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        res = parametrize_variety(V, kind=args.kind,
                                  height_cap=args.height_cap, budget=args.factor_budget_search())
    except FactorizationLimit as e:
        print(f"factorization limit: {e}", file=sys.stderr)
        return EXIT_FACTOR_LIMIT
    if res.status == "parametrized":
        print(format_parametrization(res.parametrization, args.format == "structured"))
        return EXIT_OK
    if res.status == "not_rational":
        print(f"not-rational: {res.detail}")
        return EXIT_NOT_RATIONAL
    if res.status == "unknown":
        print(f"unknown (search bound reached): {res.detail}")
        return EXIT_UNKNOWN
    print(f"unrecognized: {res.detail}")
    return EXIT_UNRECOGNIZED


def cmd_verify(args) -> int:
    try:
        V = parse_variety(_read_text(args.variety))
        P = parse_parametrization(_read_text(args.parametrization))
    except Exception as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if verify_parametrization(V, P):
        print("verified: parametrization maps into the variety")
        return EXIT_OK
    print("verification failed")
    return EXIT_VERIFY_FAILED


def cmd_solve_conic(args) -> int:
    try:
        text = args.expr if args.expr else _read_text(args.input)
        lines = _strip_lines(text)
        assert len(lines) == 1, "expected a single ternary quadratic"
        n1 = max(detect_z_arity(lines), 3)
        assert n1 == 3, "conic must use variables z0, z1, z2"
        f = parse_multipoly(lines[0], z_varnames(3))
        q = quadric_to_matrix(f)
    except Exception as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        pt = conic_point(q, trial_bound=args.factor_budget, rho_budget=args.factor_budget * 2)
    except FactorizationLimit as e:
        print(f"factorization limit: {e}", file=sys.stderr)
        return EXIT_FACTOR_LIMIT
    if pt is None:
        print("no rational point (Legendre conditions fail)")
        return EXIT_NOT_RATIONAL
    print(f"point: ({pt.coords[0]} : {pt.coords[1]} : {pt.coords[2]})")
    if q.A.rank() == 3:
        P, d = congruence_diagonalize(q)
        y = P.inverse().apply([Fraction(c) for c in pt.coords])
        from .dioph import _primitive

        Dq = SymQuadric(Matrix(QQ, [[d[i] if i == j else 0 for j in range(3)] for i in range(3)]))
        M = P * conic_parametrization(Dq, _primitive(y))
        print("parametrization matrix (z = M (s^2, st, t^2)^T):")
        for i in range(3):
            print("  [" + ", ".join(str(x) for x in M.row(i)) + "]")
    return EXIT_OK


def parse_structure_constants(text):
    toks = []
    for line in _strip_lines(text):
        toks.extend(line.split())
    dim = int(toks[0])
    vals = [Fraction(t) for t in toks[1:]]
    assert len(vals) == dim ** 3, f"expected {dim**3} structure constants, got {len(vals)}"
    sc = []
    t = 0
    for i in range(dim):
        row = []
        for j in range(dim):
            row.append(vals[t : t + dim])
            t += dim
        sc.append(row)
    # identity: solve e * b_j = b_j for all j
    from .linalg import solve as lsolve

    rows = []
    rhs = []
    for j in range(dim):
        for k in range(dim):
            rows.append([sc[i][j][k] for i in range(dim)])
            rhs.append(Fraction(1) if j == k else Fraction(0))
    one = lsolve(Matrix(QQ, rows), rhs)
    assert one is not None, "structure constants define no identity element"
    return AssocAlgebra(QQ, sc, one)


def cmd_trivialize(args) -> int:
    try:
        A = parse_structure_constants(_read_text(args.input))
        n = args.degree
        assert A.dim == n * n, f"dimension {A.dim} is not degree^2"
    except Exception as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        res = trivialize(A, n, height_cap=args.height_cap, budget=args.factor_budget_search())
    except FactorizationLimit as e:
        print(f"factorization limit: {e}", file=sys.stderr)
        return EXIT_FACTOR_LIMIT
    if res.verdict == "split":
        print(f"split: isomorphism with M_{n}(Q); basis images:")
        for i in range(A.dim):
            img = res.iso.to_matrix(A.basis_element(i))
            rows = "; ".join(" ".join(str(x) for x in img.row(r)) for r in range(n))
            print(f"  b{i} -> [{rows}]")
        return EXIT_OK
    if res.verdict == "not_split":
        print(f"not split: {res.detail}")
        return EXIT_NOT_RATIONAL
    print(f"unknown: {res.detail}")
    return EXIT_UNKNOWN


def cmd_lie_algebra(args) -> int:
    try:
        V = parse_variety(_read_text(args.input))
    except Exception as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_ERROR
    g, g0 = lie_algebra_of_variety(V)
    print(f"g (dim {g.dim}) basis:")
    for b in g.basis:
        print("  " + "; ".join(" ".join(str(x) for x in b.row(i)) for i in range(b.nrows)))
    print(f"g0 (dim {g0.dim}) basis:")
    for b in g0.basis:
        print("  " + "; ".join(" ".join(str(x) for x in b.row(i)) for i in range(b.nrows)))
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind not in KINDS:
        print(f"unknown kind {args.kind}; choose from {KINDS}", file=sys.stderr)
        return EXIT_ERROR
    V, S = generate_example(args.kind, args.bound, args.seed)
    names = z_varnames(V.n + 1)
    lines = [f"# {args.kind} transformed, bound {args.bound}, seed {args.seed}"]
    from .polys import matrix_to_quadric

    for q in V.gens:
        lines.append(poly_to_str(matrix_to_quadric(q), names))
    if args.emit_secret:
        lines.append("# SECRET point transform matrix")
        for i in range(S.nrows):
            lines.append("# " + " ".join(str(x) for x in S.row(i)))
    text = "\n".join(lines) + "\n"
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dpparam",
        description="Parametrize conics and Del Pezzo surfaces of degree 8/9 via Lie algebras",
    )
    ap.add_argument("--height-cap", type=int, default=DEFAULT_HEIGHT_CAP,
                    help="height cap for norm-equation searches (default 2^10)")
    ap.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                    help="candidate budget for norm-equation searches")
    ap.add_argument("--factor-budget", type=int, default=10**6,
                    help="trial division bound for integer factorization")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parametrize", help="parametrize a quadric variety")
    p.add_argument("input", help="file of generators (one polynomial in z0..zN per line), or -")
    p.add_argument("--kind", choices=KINDS, default=None, help="override surface classification")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_parametrize)

    p = sub.add_parser("verify", help="verify a parametrization against a variety")
    p.add_argument("variety")
    p.add_argument("parametrization")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-conic", help="rational point and parametrization of a ternary conic")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--expr", default=None, help="inline conic, e.g. 'z0^2 + z1^2 - 2*z2^2'")
    p.set_defaults(func=cmd_solve_conic)

    p = sub.add_parser("trivialize", help="trivialize a central simple algebra")
    p.add_argument("input", help="structure constants file: dim then dim^3 rationals")
    p.add_argument("--degree", type=int, required=True, choices=(2, 3, 4))
    p.set_defaults(func=cmd_trivialize)

    p = sub.add_parser("lie-algebra", help="print g and g0 of a quadric variety")
    p.add_argument("input")
    p.set_defaults(func=cmd_lie_algebra)

    p = sub.add_parser("generate", help="generate a transformed standard surface")
    p.add_argument("--kind", required=True)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-secret", action="store_true")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "solve-conic" and (args.input is None) == (args.expr is None):
        print("exactly one of INPUT or --expr is required", file=sys.stderr)
        return EXIT_ERROR
    args.factor_budget_search = lambda: args.search_budget
    try:
        return args.func(args)
    except FactorizationLimit as e:
        print(f"factorization limit: {e}", file=sys.stderr)
        return EXIT_FACTOR_LIMIT
    except BrokenPipeError:
        return EXIT_ERROR
    except Exception as e:  # no panic paths on malformed input
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
