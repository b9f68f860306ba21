"""Command-line interface: ``dsspectra <verb> [options]``.

Exit codes: 0 success / certified, 1 malformed input, 2 internal
verification failure, 3 refuted, 4 unknown.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from . import certify as cert
from . import checklist
from . import exactmat as em
from . import graphbridge as gb
from . import permsim, spectra, triangle3
from .exactmat import ExactMatrix
from .scalars import format_scalar, parse_scalar

EXIT_OK, EXIT_MALFORMED, EXIT_VERIFY, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input / output helpers


def load_matrix(source: str) -> ExactMatrix:
    """A matrix from a file path or inline JSON (object with ``entries`` or a list of rows)."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        if not os.path.exists(source):
            raise UsageError(f"no such file: {source}")
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None
    try:
        if isinstance(obj, list):
            return ExactMatrix([[parse_scalar(x) if isinstance(x, str) else x for x in r] for r in obj])
        return ExactMatrix.from_json_obj(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"malformed matrix: {exc}") from None


def parse_rational(text: str) -> Fraction:
    try:
        v = parse_scalar(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not isinstance(v, Fraction):
        raise UsageError(f"expected a rational, got {text!r}")
    return v


def decimal12(x: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        q = (Decimal(x.numerator) / Decimal(x.denominator)).quantize(Decimal("1e-12"))
        return format(q, "f")


class Out:
    """Collects output lines; prints seed and budget first for text and CSV."""

    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []

    def header(self):
        if self.args.format != "json":
            self.lines.append(f"# seed={self.args.seed} budget={self.args.budget}")

    def text(self, line: str = ""):
        self.lines.append(line)

    def json(self, obj: dict):
        obj = dict(obj)
        obj.setdefault("seed", self.args.seed)
        obj.setdefault("budget", self.args.budget)
        self.lines.append(json.dumps(obj, indent=2, sort_keys=True))

    def flush(self):
        data = "\n".join(self.lines) + "\n"
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _matrix_text(out: Out, M: ExactMatrix, title: str | None = None):
    if title:
        out.text(title)
    out.text(str(M))


def _need_inputs(args, count: int) -> list[ExactMatrix]:
    ins = args.inputs or []
    if len(ins) != count:
        raise UsageError(f"expected {count} --in argument(s), got {len(ins)}")
    return [load_matrix(s) for s in ins]


# ---------------------------------------------------------------------------
# verbs


def cmd_construct(args, out: Out) -> int:
    if args.family is None or args.n is None:
        raise UsageError("construct needs --family and --n")
    params = {}
    if args.a is not None:
        params["a"] = parse_rational(args.a)
    if args.which:
        params["which"] = args.which
    if args.perm:
        try:
            params["perm"] = [int(x) - 1 for x in args.perm.strip("[]").split(",")]
        except ValueError:
            raise UsageError(f"malformed permutation {args.perm!r}") from None
    try:
        M = em.construct(args.family, args.n, **params)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out.json(M.to_json_obj())
    else:
        out.header()
        _matrix_text(out, M)
    return EXIT_OK


def cmd_spectrum(args, out: Out) -> int:
    (M,) = _need_inputs(args, 1)
    p = spectra.char_poly(M)
    roots = p.roots() if M.is_rational else []
    numeric = None
    if em.is_symmetric(M) and M.is_rational:
        numeric = list(spectra.eigenvalues_symmetric(M).values)
    if args.format == "json":
        out.json({
            "char_poly": p.to_json_obj(),
            "rational_roots": [[format_scalar(r), m] for r, m in roots],
            "numeric_eigenvalues": numeric,
        })
    else:
        out.header()
        out.text(f"char_poly: {p}")
        out.text("rational roots: " + (", ".join(f"{format_scalar(r)} (x{m})" for r, m in roots) or "none"))
        if numeric is not None:
            out.text("numeric eigenvalues: " + ", ".join(f"{v:.12g}" for v in numeric))
    return EXIT_OK


def cmd_cospectral(args, out: Out) -> int:
    A, B = _need_inputs(args, 2)
    same = spectra.cospectral(A, B)
    if args.format == "json":
        out.json({"cospectral": same, "char_poly_a": spectra.char_poly(A).to_json_obj(),
                  "char_poly_b": spectra.char_poly(B).to_json_obj()})
    else:
        out.header()
        out.text(f"cospectral: {'yes' if same else 'no'}")
    return EXIT_OK


def cmd_permsim(args, out: Out) -> int:
    A, B = _need_inputs(args, 2)
    try:
        w = permsim.are_perm_similar(A, B)
    except permsim.BudgetError as exc:
        raise UsageError(str(exc)) from None
    if w and A.permuted(w.permutation) != B:
        return EXIT_VERIFY
    if args.format == "json":
        out.json({"witness": w.one_based() if w else None, "reason": w.invariant_report})
    else:
        out.header()
        out.text(f"witness: {w.one_based()}" if w else f"witness: none ({w.invariant_report})")
    return EXIT_OK


def cmd_classify3(args, out: Out) -> int:
    (M,) = _need_inputs(args, 1)
    try:
        c = triangle3.classify(M)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj = {
        "verdict": c.verdict,
        "segment": c.segment_name,
        "t": None if c.t is None else format_scalar(c.t),
        "trace": format_scalar(c.trace),
        "slice_point": [format_scalar(c.slice_point.x), format_scalar(c.slice_point.y)],
        "d": None if c.d is None else format_scalar(c.d),
    }
    if args.format == "json":
        out.json(obj)
    else:
        out.header()
        for k, v in obj.items():
            out.text(f"{k}: {v}")
    return EXIT_OK


def cmd_mate(args, out: Out) -> int:
    (M,) = _need_inputs(args, 1)
    if not em.is_doubly_stochastic(M) or not em.is_symmetric(M):
        raise UsageError("mate needs a symmetric doubly stochastic matrix")
    W = None
    note = None
    if M.n == 3:
        c = triangle3.classify(M)
        if c.is_ds:
            note = f"no mate: matrix lies on segment {c.segment_name}"
        else:
            try:
                W = triangle3.mate_for(M)
            except triangle3.MateSearchFailure as exc:
                sys.stderr.write(f"internal failure: {exc}\n")
                return EXIT_VERIFY
    else:
        v = cert.certify(M, "sym", budget=args.budget, seed=args.seed)
        if v.status == cert.REFUTED:
            W = v.witness
        elif v.status == cert.CERTIFIED:
            note = f"no mate: certified DS ({v.certificate})"
        else:
            note = "no mate found within budget"
    if W is not None and cert.witness_problem(M, W, "sym"):
        return EXIT_VERIFY
    if args.format == "json":
        out.json({"witness": None if W is None else W.to_json_obj(), "note": note})
    else:
        out.header()
        if W is not None:
            _matrix_text(out, W, "mate:")
        else:
            out.text(note)
    if W is None and note == "no mate found within budget":
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_certify(args, out: Out) -> int:
    (M,) = _need_inputs(args, 1)
    try:
        v = cert.certify(M, args.scope, budget=args.budget, seed=args.seed)
    except cert.VerificationError as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return EXIT_VERIFY
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out.json(v.to_json_obj())
    else:
        out.header()
        out.text(f"status: {v.status}")
        out.text(f"scope: {v.scope}")
        if v.certificate:
            out.text(f"certificate: {v.certificate}")
        for tag in v.also:
            out.text(f"also: {tag}")
        if v.evidence:
            out.text(f"evidence: {v.evidence}")
        if v.witness is not None:
            _matrix_text(out, v.witness, "witness:")
        if v.stats:
            out.text(f"stats: {json.dumps(v.stats, sort_keys=True)}")
    return v.exit_code


def cmd_characterize(args, out: Out) -> int:
    if not args.spectrum:
        raise UsageError("characterize needs --spectrum, e.g. --spectrum 1,0,-2/3")
    lam = [parse_rational(x) for x in args.spectrum.split(",")]
    try:
        r = cert.spectrum_characterization(lam, args.n, budget=args.budget, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out.json({
            "status": r.status,
            "reason": r.reason,
            "realization": None if r.realization is None else r.realization.to_json_obj(),
            "mate": None if r.mate is None else r.mate.to_json_obj(),
        })
    else:
        out.header()
        out.text(f"status: {r.status}")
        out.text(f"reason: {r.reason}")
        if r.realization is not None:
            _matrix_text(out, r.realization, "realization:")
        if r.mate is not None:
            _matrix_text(out, r.mate, "mate:")
    return {"characterizes": EXIT_OK, "does-not-characterize": EXIT_REFUTED}.get(r.status, EXIT_UNKNOWN)


def cmd_scan(args, out: Out) -> int:
    if args.n is None or args.a is None:
        raise UsageError("scan-conjecture needs --n and --a")
    try:
        rep = cert.conjecture_scan(args.n, parse_rational(args.a), samples=args.count or 500,
                                   seed=args.seed, budget=args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj = rep.to_json_obj()
    if args.format == "json":
        out.json(obj)
    else:
        out.header()
        for k in ("n", "a", "samples", "on_segment", "on_segment_certified", "off_segment",
                  "refuted", "unknown", "certified_off_segment"):
            out.text(f"{k}: {obj[k]}")
        out.text(f"counterexample candidates: {len(rep.candidates)}")
        for name, status in rep.anchors:
            out.text(f"anchor {name}: {status}")
    return EXIT_OK


def cmd_graphs(args, out: Out) -> int:
    if args.graph:
        try:
            G = gb.from_graph6(args.graph)
            rep = gb.graph_ds_report(G, budget=args.budget, seed=args.seed)
        except gb.GraphError as exc:
            raise UsageError(str(exc)) from None
        obj = rep.to_json_obj()
        if args.format == "json":
            out.json(obj)
        else:
            out.header()
            out.text(f"graph: {G.graph6()} n={rep.n} k={rep.k}")
            out.text(f"DS among {rep.k}-regular graphs: {'yes' if rep.graph_ds else 'no'}")
            for H in rep.graph_mates:
                out.text(f"graph mate: {H.graph6()}")
            out.text(f"matrix verdict: {rep.verdict.status} {rep.verdict.certificate or rep.verdict.evidence or ''}".rstrip())
        return EXIT_OK
    if args.n is None:
        raise UsageError("graphs needs --n (with optional --k) or --graph")
    ks = [args.k] if args.k is not None else [k for k in range(1, args.n) if args.n * k % 2 == 0]
    rows = []
    mates = []
    try:
        for k in ks:
            graphs = gb.enumerate_regular(args.n, k)
            pairs = gb.cospectral_mates(args.n, k)
            rows.append((k, graphs))
            mates += [(k, p) for p in pairs]
    except gb.GraphError as exc:
        raise UsageError(str(exc)) from None
    for _, p in mates:
        v = cert.certify(p.witnesses[0], "sym", budget=args.budget, seed=args.seed)
        if v.status != cert.REFUTED:
            return EXIT_VERIFY
    if args.format == "json":
        out.json({
            "n": args.n,
            "graphs": {str(k): [g.graph6() for g in graphs] for k, graphs in rows},
            "mates": [{"k": k, "g": p.G.graph6(), "h": p.H.graph6()} for k, p in mates],
        })
    elif args.format == "csv":
        out.header()
        out.text("n,k,g,h,char_poly")
        for k, p in mates:
            out.text(f"{args.n},{k},{p.G.graph6()},{p.H.graph6()},\"{p.char_poly}\"")
    else:
        out.header()
        for k, graphs in rows:
            out.text(f"k={k}: {len(graphs)} graphs")
            for g in graphs:
                out.text(f"  {g.graph6()}")
        out.text(f"cospectral mate pairs: {len(mates)}")
        for k, p in mates:
            out.text(f"  k={k}: {p.G.graph6()} {p.H.graph6()}")
    return EXIT_OK


_POLY_COORDS = {
    "I": (0, 0, 0),
    "X": (0, 0, 1),
    "Y": (0, 1, 0),
    "Z": (1, 0, 0),
    "C": (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
}
_HULL_EDGES = [("X", "Y"), ("Y", "Z"), ("Z", "X"), ("I", "X"), ("I", "Y"), ("I", "Z"),
               ("C", "X"), ("C", "Y"), ("C", "Z")]


def cmd_plotdata(args, out: Out) -> int:
    what = args.what
    out.header()
    if what == "triangle":
        N = (args.grid or 201) - 1
        if N < 1:
            raise UsageError("--grid must be at least 2")
        out.text("x,y,f")
        for i in range(N + 1):
            for j in range(N + 1 - i):
                x, y = Fraction(i, N), Fraction(j, N)
                v = triangle3.f(triangle3.TriPoint(x, y))
                out.text(f"{decimal12(x)},{decimal12(y)},{decimal12(v)}")
    elif what == "polytope":
        # coordinates are the off-diagonal entries (m12, m13, m23)
        out.text("kind,name,m12,m13,m23,m12_end,m13_end,m23_end,ds")
        for name, c in _POLY_COORDS.items():
            out.text(f"vertex,{name}," + ",".join(decimal12(Fraction(v)) for v in c) + ",,,,1")
        ds = {frozenset(s) for s in triangle3.DS_SEGMENTS}
        for p, q in _HULL_EDGES + [("I", "C")]:
            kind = "axis" if (p, q) == ("I", "C") else "edge"
            coords = [decimal12(Fraction(v)) for v in _POLY_COORDS[p] + _POLY_COORDS[q]]
            flag = 1 if frozenset((p, q)) in ds else 0
            out.text(f"{kind},{p}{q}," + ",".join(coords) + f",{flag}")
    elif what == "level":
        if args.d is None:
            raise UsageError("plotdata level needs --d")
        try:
            pts = triangle3.level_curve_points(parse_rational(args.d), args.count or 20)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out.text("x,y,x_exact,y_exact")
        for p in pts:
            out.text(f"{decimal12(p.x)},{decimal12(p.y)},{format_scalar(p.x)},{format_scalar(p.y)}")
    else:
        raise UsageError("plotdata needs one of: triangle, polytope, level")
    return EXIT_OK


def cmd_verify(args, out: Out) -> int:
    results = checklist.run_all()
    if args.format == "json":
        out.json({"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results]})
    else:
        out.header()
        for r in results:
            out.text(r.line())
        failed = sum(not r.passed for r in results)
        out.text(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


VERBS = {
    "construct": cmd_construct,
    "spectrum": cmd_spectrum,
    "cospectral": cmd_cospectral,
    "permsim": cmd_permsim,
    "classify3": cmd_classify3,
    "mate": cmd_mate,
    "certify": cmd_certify,
    "characterize": cmd_characterize,
    "scan-conjecture": cmd_scan,
    "graphs": cmd_graphs,
    "plotdata": cmd_plotdata,
    "verify-paper": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dsspectra", description="Spectral determination of doubly stochastic matrices.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("what", nargs="?", help="plotdata target: triangle, polytope or level")
    p.add_argument("--in", dest="inputs", action="append", help="matrix file or inline JSON (repeatable)")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--seed", type=int, default=cert.DEFAULT_SEED)
    p.add_argument("--budget", type=int, default=cert.DEFAULT_BUDGET)
    p.add_argument("--grid", type=int)
    p.add_argument("--scope", choices=list(cert.SCOPES), default="sym")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", help="trace parameter (rational, e.g. 1/2)")
    p.add_argument("--d", help="level parameter (rational)")
    p.add_argument("--count", type=int)
    p.add_argument("--family", help="construct: identity, J, C, vertex3, permutation, D_of_trace, block_I/J/C")
    p.add_argument("--which", help="construct vertex3: X, Y or Z")
    p.add_argument("--perm", help="construct permutation: one-based images, e.g. 2,1,3")
    p.add_argument("--spectrum", help="characterize: comma-separated eigenvalues")
    p.add_argument("--graph", help="graphs: graph6 string for a DS report")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.budget < 0:
            raise UsageError("--budget must be nonnegative")
        out = Out(args)
        code = VERBS[args.verb](args, out)
        out.flush()
        return code
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
