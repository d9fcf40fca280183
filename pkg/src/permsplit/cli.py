"""Command-line front end and the report formats it owns.

Exit codes: 0 success, 1 parse error, 2 intransitive action, 3 resource
limit, 4 internal invariant violation, 5 verification failure.  Reports are
byte-identical for identical inputs and seed; timing lines go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import mpmath

from .centralizer import compute_orbitals, compute_structure_constants
from .errors import (
    IncompleteDecomposition,
    IntransitiveAction,
    InvariantViolation,
    MatrixCapExceeded,
    MultiplicityMismatch,
    OrthogonalityViolation,
    ParseError,
    ResourceLimit,
    SliceExhausted,
)
from .exactfield import (
    ComplexBall,
    FieldElement,
    field_element_from_json,
    field_element_to_json,
    parse_field_element,
    render_field_element,
)
from .perms import parse_generators
from .splitter import Decomposition, Projector, SplitConfig, split_from_constants
from .verify import compare_to_reference, verify_family_algebraic, verify_matrix_level

__all__ = [
    "main",
    "render_analyze_text",
    "analyze_to_json",
    "render_decomposition_text",
    "parse_decomposition_text",
    "decomposition_to_json",
    "decomposition_from_json",
]


# -- analyze report -------------------------------------------------------------


def render_analyze_text(basis, consts=None):
    lengths = ", ".join(str(x) for x in basis.lengths_in_order())
    lines = [f"Rank: {basis.rank}. Suborbit lengths: {lengths}"]
    lines.append(f"Degree: {basis.degree}")
    sym = [f"A{r}" for r in range(1, basis.rank + 1) if basis.symmetric[r]]
    lines.append("Symmetric: " + (", ".join(sym) if sym else "none"))
    pairs = []
    for r in range(1, basis.rank + 1):
        rs = int(basis.transpose_of[r])
        if rs > r:
            pairs.append(f"(A{r}, A{rs})")
    lines.append("Transpose pairs: " + (", ".join(pairs) if pairs else "none"))
    if consts is not None:
        lines.append(
            "Commutative: " + ("yes" if consts.is_commutative() else "no")
        )
    return "\n".join(lines) + "\n"


def analyze_to_json(basis, consts=None, include_tensor=False):
    obj = {
        "degree": basis.degree,
        "rank": basis.rank,
        "suborbit_lengths": basis.lengths_in_order(),
        "suborbit_representatives": [
            int(basis.suborbit_representative[r]) for r in range(1, basis.rank + 1)
        ],
        "symmetric": [bool(basis.symmetric[r]) for r in range(1, basis.rank + 1)],
        "transpose_of": [
            int(basis.transpose_of[r]) for r in range(1, basis.rank + 1)
        ],
    }
    if consts is not None:
        obj["commutative"] = consts.is_commutative()
        if include_tensor:
            rank = consts.rank
            obj["structure_constants"] = [
                [[consts.c(p, q, r) for r in range(1, rank + 1)]
                 for q in range(1, rank + 1)]
                for p in range(1, rank + 1)
            ]
    return obj


# -- decomposition report ---------------------------------------------------------


def _decomposition_line(deco):
    """``10 ≅ 1 ⊕ 4 ⊕ 5`` with multiplicity blocks parenthesized and the
    second member of a conjugate pair marked with ``~``."""
    parts = []
    i = 0
    projs = deco.projectors
    while i < len(projs):
        p = projs[i]
        if p.block is not None:
            j = i
            while j < len(projs) and projs[j].block == p.block:
                j += 1
            inner = " ⊕ ".join(str(projs[k].dimension) for k in range(i, j))
            parts.append(f"({inner})")
            i = j
        else:
            parts.append(_dim_mark(projs, i))
            i += 1
    return f"{deco.degree} ≅ " + " ⊕ ".join(parts)


def _dim_mark(projs, i):
    p = projs[i]
    mark = "~" if (p.conjugate_of is not None and p.conjugate_of < i) else ""
    return f"{p.dimension}{mark}"


def _appendix_line(p, index):
    """Human-facing factored form: ``B[2] = 2/5*(A1 - 2/3*A2 + 1/6*A3)``."""
    if not p.exact:
        return f"# B[{index}] d={p.dimension} has numeric coordinates"
    b1 = p.coefficients[0]
    chunks = []
    for r, c in enumerate(p.coefficients, start=1):
        ratio = c / b1
        if ratio.is_zero():
            continue
        if ratio == 1:
            body, neg = f"A{r}", False
        elif ratio.is_rational():
            q = ratio.rational_value()
            neg = q < 0
            body = f"A{r}" if abs(q) == 1 else f"{abs(q)}*A{r}"
        else:
            neg = False
            body = f"({render_field_element(ratio, factored=False)})*A{r}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return f"# B[{index}] = {render_field_element(b1)}*({' '.join(chunks)})"


def _ball_to_strings(ball, precision):
    digits = max(int(precision * 0.302) + 8, 24)
    with mpmath.workprec(precision + 24):
        re = mpmath.nstr(ball.mid.real, digits, strip_zeros=False)
        im = mpmath.nstr(ball.mid.imag, digits, strip_zeros=False)
        rad = mpmath.nstr(ball.rad, 8)
    return re, im, rad


def render_decomposition_text(deco):
    out = []
    out.append(f"Degree: {deco.degree}")
    out.append(f"Rank: {deco.rank}")
    out.append(
        "Suborbit lengths: " + ", ".join(str(x) for x in deco.suborbit_lengths)
    )
    out.append("Decomposition: " + _decomposition_line(deco))
    out.append("")
    for m, p in enumerate(deco.projectors, start=1):
        out.append(_appendix_line(p, m))
        out.append(f"projector {m}")
        out.append(f"dimension {p.dimension}")
        out.append(f"exact {'true' if p.exact else 'false'}")
        out.append(f"provenance {p.provenance}")
        out.append(f"block {p.block if p.block is not None else '-'}")
        out.append(
            f"conjugate-of {p.conjugate_of + 1 if p.conjugate_of is not None else '-'}"
        )
        for r, c in enumerate(p.coefficients, start=1):
            if isinstance(c, FieldElement):
                out.append(f"coeff {r} {render_field_element(c)}")
            else:
                re, im, rad = _ball_to_strings(c, p.precision or 128)
                out.append(f"coeff {r} numeric {re} {im} {rad} {p.precision or 128}")
        out.append("end")
        out.append("")
    for note in deco.notes:
        out.append(f"# note: {note}")
    return "\n".join(out).rstrip() + "\n"


def parse_decomposition_text(text):
    degree = rank = None
    lengths = []
    projectors = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("Degree:"):
            degree = int(line.split(":", 1)[1])
        elif line.startswith("Rank:"):
            rank = int(line.split(":", 1)[1])
        elif line.startswith("Suborbit lengths:"):
            lengths = [int(t) for t in line.split(":", 1)[1].split(",")]
        elif line.startswith("Decomposition:"):
            continue
        elif line.startswith("projector"):
            current = {"coeffs": {}}
        elif line == "end":
            if current is None:
                raise ParseError("end without projector", lineno)
            projectors.append(_projector_from_record(current, rank, lineno))
            current = None
        elif current is not None:
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "dimension":
                current["dimension"] = int(rest)
            elif key == "exact":
                current["exact"] = rest == "true"
            elif key == "provenance":
                current["provenance"] = rest
            elif key == "block":
                current["block"] = None if rest == "-" else int(rest)
            elif key == "conjugate-of":
                current["conjugate_of"] = None if rest == "-" else int(rest) - 1
            elif key == "coeff":
                parts = rest.split(None, 1)
                r = int(parts[0])
                current["coeffs"][r] = parts[1].strip()
            else:
                raise ParseError(f"unknown projector field {key!r}", lineno)
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if degree is None or rank is None:
        raise ParseError("missing Degree/Rank headers")
    return Decomposition(
        degree=degree,
        rank=rank,
        projectors=projectors,
        complete=True,
        suborbit_lengths=lengths,
    )


def _projector_from_record(rec, rank, lineno):
    coeffs = []
    precision = 128
    for r in range(1, (rank or len(rec["coeffs"])) + 1):
        txt = rec["coeffs"].get(r)
        if txt is None:
            raise ParseError(f"missing coeff {r}", lineno)
        if txt.startswith("numeric "):
            _, re, im, rad, prec = txt.split()
            precision = int(prec)
            with mpmath.workprec(precision + 24):
                ball = ComplexBall(
                    mpmath.mpc(mpmath.mpf(re), mpmath.mpf(im)), mpmath.mpf(rad)
                )
            coeffs.append(ball)
        else:
            coeffs.append(parse_field_element(txt))
    return Projector(
        coefficients=tuple(coeffs),
        dimension=rec["dimension"],
        exact=rec.get("exact", True),
        provenance=rec.get("provenance", "uniqueSolution"),
        precision=precision,
        block=rec.get("block"),
        conjugate_of=rec.get("conjugate_of"),
    )


def decomposition_to_json(deco):
    projs = []
    for p in deco.projectors:
        coeffs = []
        for c in p.coefficients:
            if isinstance(c, FieldElement):
                coeffs.append(field_element_to_json(c))
            else:
                re, im, rad = _ball_to_strings(c, p.precision or 128)
                coeffs.append(
                    {"numeric": {"re": re, "im": im, "rad": rad,
                                 "precision": p.precision or 128}}
                )
        projs.append(
            {
                "dimension": p.dimension,
                "exact": p.exact,
                "provenance": p.provenance,
                "block": p.block,
                "conjugate_of": p.conjugate_of,
                "coefficients": coeffs,
            }
        )
    return {
        "format": "permsplit.decomposition.v1",
        "degree": deco.degree,
        "rank": deco.rank,
        "suborbit_lengths": list(deco.suborbit_lengths),
        "decomposition": _decomposition_line(deco),
        "projectors": projs,
        "notes": list(deco.notes),
    }


def decomposition_from_json(obj):
    projectors = []
    for rec in obj["projectors"]:
        coeffs = []
        precision = 128
        for c in rec["coefficients"]:
            if "numeric" in c:
                nv = c["numeric"]
                precision = int(nv.get("precision", 128))
                with mpmath.workprec(precision + 24):
                    coeffs.append(
                        ComplexBall(
                            mpmath.mpc(mpmath.mpf(nv["re"]), mpmath.mpf(nv["im"])),
                            mpmath.mpf(nv["rad"]),
                        )
                    )
            else:
                coeffs.append(field_element_from_json(c))
        projectors.append(
            Projector(
                coefficients=tuple(coeffs),
                dimension=rec["dimension"],
                exact=rec["exact"],
                provenance=rec.get("provenance", "uniqueSolution"),
                precision=precision,
                block=rec.get("block"),
                conjugate_of=rec.get("conjugate_of"),
            )
        )
    return Decomposition(
        degree=obj["degree"],
        rank=obj["rank"],
        projectors=projectors,
        complete=True,
        suborbit_lengths=list(obj["suborbit_lengths"]),
        notes=list(obj.get("notes", [])),
    )


def load_decomposition(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return decomposition_from_json(json.loads(text))
    return parse_decomposition_text(text)


# -- command implementations ----------------------------------------------------------


def _default_threads():
    try:
        return max(1, int(os.environ.get("PERMSPLIT_THREADS", "1")))
    except ValueError:
        return 1


def _config_from_args(args):
    return SplitConfig(
        max_dimension=getattr(args, "max_dimension", None),
        max_groebner_pairs=getattr(args, "max_groebner_pairs", 40000),
        slice_seed=getattr(args, "seed", 0),
        precision=getattr(args, "precision", 128),
        rank_cap=getattr(args, "rank_cap", 64),
        matrix_cap=getattr(args, "matrix_cap", 2000),
        threads=args.threads,
    )


def _wants_json(args):
    return args.format == "json" or getattr(args, "json", False)


def cmd_analyze(args):
    t0 = time.perf_counter()
    gens = parse_generators(args.file)
    basis = compute_orbitals(gens, rank_cap=args.rank_cap)
    consts = None
    if args.tensor or args.constants:
        consts = compute_structure_constants(gens, basis, threads=args.threads)
    elapsed = time.perf_counter() - t0
    if _wants_json(args):
        obj = analyze_to_json(basis, consts, include_tensor=args.tensor)
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        sys.stdout.write(render_analyze_text(basis, consts))
    print(f"time analyze: {elapsed:.3f} s", file=sys.stderr)
    return 0


def cmd_split(args):
    t0 = time.perf_counter()
    gens = parse_generators(args.file)
    basis = compute_orbitals(gens, rank_cap=args.rank_cap)
    consts = compute_structure_constants(gens, basis, threads=args.threads)
    t_analyze = time.perf_counter() - t0
    config = _config_from_args(args)
    deco = split_from_constants(basis, consts, config)
    report = verify_family_algebraic(consts, deco, precision=config.precision)
    if not report.passed:
        for line in report.lines():
            print(line, file=sys.stderr)
        print("refusing to print an unverified decomposition", file=sys.stderr)
        raise InvariantViolation("algebraic verification failed after split")
    t_split = time.perf_counter() - t0 - t_analyze
    if args.verify == "matrix":
        mreport = verify_matrix_level(
            gens, basis, deco,
            mode="exact" if deco.exact_only() else "numeric",
            matrix_cap=args.matrix_cap, precision=config.precision,
        )
        for line in mreport.lines():
            print(line, file=sys.stderr)
        if not mreport.passed:
            raise InvariantViolation("matrix-level verification failed")
    if _wants_json(args):
        print(json.dumps(decomposition_to_json(deco), indent=2, sort_keys=True))
    else:
        sys.stdout.write(render_decomposition_text(deco))
    print(f"time analyze: {t_analyze:.3f} s", file=sys.stderr)
    print(f"time split: {t_split:.3f} s", file=sys.stderr)
    return 0


def cmd_verify(args):
    gens = parse_generators(args.file)
    basis = compute_orbitals(gens, rank_cap=args.rank_cap)
    consts = compute_structure_constants(gens, basis, threads=args.threads)
    config = _config_from_args(args)
    deco = split_from_constants(basis, consts, config)
    ref = load_decomposition(args.decomposition)
    report = compare_to_reference(deco, ref)
    algebraic = verify_family_algebraic(consts, ref, precision=config.precision)
    for line in report.lines() + algebraic.lines():
        print(line)
    if report.passed and algebraic.passed:
        print("verification: OK")
        return 0
    print("verification: FAILED")
    return 5


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="permsplit",
        description=(
            "Split a transitive permutation representation into irreducible "
            "projectors over an exact radical tower."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--json", action="store_true", help="shorthand for --format json")
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--rank-cap", type=int, default=64, dest="rank_cap")

    pa = sub.add_parser("analyze", help="rank, suborbit lengths, basis structure")
    pa.add_argument("file")
    common(pa)
    pa.add_argument("--tensor", action="store_true",
                    help="include the full structure-constant tensor (json)")
    pa.add_argument("--constants", action="store_true",
                    help="compute structure constants for the commutativity line")
    pa.set_defaults(func=cmd_analyze)

    def split_opts(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-groebner-pairs", type=int, default=40000,
                       dest="max_groebner_pairs")
        p.add_argument("--precision", type=int, default=128)
        p.add_argument("--max-dimension", type=int, default=None, dest="max_dimension")
        p.add_argument("--matrix-cap", type=int, default=2000, dest="matrix_cap")

    ps = sub.add_parser("split", help="compute the full projector decomposition")
    ps.add_argument("file")
    common(ps)
    split_opts(ps)
    ps.add_argument("--verify", choices=("none", "matrix"), default="none")
    ps.set_defaults(func=cmd_split)

    pv = sub.add_parser("verify", help="compare a decomposition file against a fresh run")
    pv.add_argument("file")
    pv.add_argument("decomposition")
    common(pv)
    split_opts(pv)
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except IntransitiveAction as e:
        print(f"intransitive: {e}; orbit of 1 = {sorted(e.orbit)}", file=sys.stderr)
        return 2
    except (ResourceLimit, MatrixCapExceeded, SliceExhausted) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 3
    except (
        InvariantViolation,
        MultiplicityMismatch,
        OrthogonalityViolation,
        IncompleteDecomposition,
    ) as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
