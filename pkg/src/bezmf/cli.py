"""Command-line front end.

Data goes to stdout (human-readable by default, ``--json`` for the
schema-validated report); warnings and errors go to stderr.  Exit codes:
0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import classify, divgroups, divisors, factorizations, homology, invariants
from .errors import BezmfError
from .factorizations import (
    ElementaryFactorization,
    matrix_factorization_from_json,
)


def _fe_str(x) -> str:
    return str(x if not hasattr(x, "to_factored") else x.to_factored())


def _indices(s) -> list[int]:
    return sorted(s)


def _potential(spec: str) -> divisors.Potential:
    return divisors.parse_potential(spec)


def _element_of(spec: str, w: divisors.Potential) -> ElementaryFactorization:
    return factorizations.elementary(divisors.parse_element(spec), w)


def _emit(command: str, result: dict, as_json: bool, human_lines: list[str]):
    if as_json:
        print(json.dumps({"command": command, "result": result}, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------


def _cmd_count(args) -> int:
    w = _potential(args.W)
    grading = classify.normalize_grading(args.grading)
    pipeline = classify.count_classes(w, grading)
    result = {
        "W": str(w),
        "potential": w.to_json(),
        "grading": grading,
        "count": pipeline,
    }
    lines = [str(pipeline)]
    if args.literal:
        literal, diag = classify.count_classes_literal(w, grading)
        result.update(
            {
                "count": literal,
                "literal": literal,
                "pipeline": pipeline,
                "literal_strict": str(diag.strict),
                "literal_inclusive": str(diag.inclusive),
                "literal_matches_pipeline": diag.strict_matches,
            }
        )
        lines = [str(literal)]
        if diag.mismatch:
            _warn(
                f"literal theorem value {diag.strict} disagrees with the "
                f"oracle-verified pipeline count {pipeline}; "
                f"inclusive K-range reading gives {diag.inclusive}"
            )
    _emit("count", result, args.json, lines)
    return 0


def _invariant_json(e: ElementaryFactorization) -> dict:
    data = invariants.invariant(e)
    return {
        "v": _fe_str(e.v),
        "s": _fe_str(data.s),
        "v_prime": _fe_str(data.v_prime),
        "u_prime": _fe_str(data.u_prime),
        "x": _fe_str(data.x),
        "y": _fe_str(data.y),
        "z": _fe_str(data.z),
        "I_s": _indices(data.i_s),
        "I_x": _indices(data.i_x),
        "I_y": _indices(data.i_y),
        "I_z": _indices(data.i_z),
        "m": list(data.m),
    }


def _h_json(e: ElementaryFactorization) -> dict:
    hv = invariants.h(e)
    hev = invariants.h_even(e)
    return {
        "s": _fe_str(hv.s),
        "partition": [list(hv.partition[0]), list(hv.partition[1])],
        "I_x": _indices(hev.i_x),
        "I_y": _indices(hev.i_y),
    }


def _cmd_classes(args) -> int:
    w = _potential(args.W)
    grading = classify.normalize_grading(args.grading)
    census = classify.enumerate_classes(w, grading, bound=args.bound)
    classes = []
    for cid, (key, reps) in enumerate(census.buckets):
        inv: dict = {"s": _fe_str(key.s)}
        if grading == classify.GRADED:
            inv["partition"] = [list(key.partition[0]), list(key.partition[1])]
        else:
            inv["I_x"] = _indices(key.i_x)
            inv["I_y"] = _indices(key.i_y)
        classes.append(
            {
                "class_id": cid,
                "invariant": inv,
                "representatives": [_fe_str(r) for r in reps],
            }
        )
    result = {
        "W": str(w),
        "potential": w.to_json(),
        "grading": grading,
        "count": census.n_total,
        "classes": classes,
        "essence_counts": [
            {"z": _fe_str(divisors.NormalizedDivisor(w, z)), "classes": n}
            for z, n in census.essence_counts
        ],
    }
    lines = [f"{census.n_total} classes of W = {w} ({grading})"]
    for c in classes:
        lines.append(
            f"  [{c['class_id']}] s={c['invariant']['s']}"
            f" reps: {', '.join(c['representatives'])}"
        )
    _emit("classes", result, args.json, lines)
    return 0


def _cmd_iso(args) -> int:
    if args.v1.startswith("@") or args.v2.startswith("@"):
        return _cmd_iso_matrix(args)
    if args.W is None:
        raise BezmfError("--W is required for divisor operands")
    w = _potential(args.W)
    e1, e2 = _element_of(args.v1, w), _element_of(args.v2, w)
    even = invariants.iso_even(e1, e2)
    odd = invariants.iso_odd(e1, e2)
    result = {
        "W": str(w),
        "route": "elementary",
        "v1": _fe_str(e1.v),
        "v2": _fe_str(e2.v),
        "even": even,
        "odd": odd,
        "graded": even or odd,
        "invariant1": _h_json(e1),
        "invariant2": _h_json(e2),
    }
    lines = [
        f"even:   {even}",
        f"odd:    {odd}",
        f"graded: {even or odd}",
        f"h(e_{e1.v}) = (s={result['invariant1']['s']}, I_x={result['invariant1']['I_x']}, I_y={result['invariant1']['I_y']})",
        f"h(e_{e2.v}) = (s={result['invariant2']['s']}, I_x={result['invariant2']['I_x']}, I_y={result['invariant2']['I_y']})",
    ]
    _emit("iso", result, args.json, lines)
    return 0


def _read_json_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_iso_matrix(args) -> int:
    if not (args.v1.startswith("@") and args.v2.startswith("@")):
        raise BezmfError("matrix comparison needs two @file operands")
    a = matrix_factorization_from_json(_read_json_file(args.v1[1:]))
    b = matrix_factorization_from_json(_read_json_file(args.v2[1:]))
    if a.w != b.w:
        raise BezmfError(f"operands factor different potentials: {a.w} vs {b.w}")
    nf_a = classify.normal_form([a])
    nf_b = classify.normal_form([b])
    gf_a = classify.normal_form([a], classify.GRADED)
    gf_b = classify.normal_form([b], classify.GRADED)
    result = {
        "W": str(a.w),
        "route": "matrix",
        "even": nf_a == nf_b,
        "graded": gf_a == gf_b,
        "normal_form1": _form_json(nf_a),
        "normal_form2": _form_json(nf_b),
    }
    lines = [f"even:   {result['even']}", f"graded: {result['graded']}"]
    _emit("iso", result, args.json, lines)
    return 0


def _cmd_hom(args) -> int:
    w = _potential(args.W)
    e1, e2 = _element_of(args.v1, w), _element_of(args.v2, w)
    parities = [0, 1] if args.parity == "both" else [0 if args.parity == "even" else 1]
    modules = []
    for parity in parities:
        hm = homology.hom_module(e1, e2, parity)
        ann = hm.annihilator
        presentation = f"R/<{ann}>"
        if w.is_integer_backend():
            presentation += f" = Z/{ann.value()}"
        modules.append(
            {
                "parity": "even" if parity == 0 else "odd",
                "generator": [
                    [(_fe_str(x) if x is not None else "0") for x in row]
                    for row in hm.generator
                ],
                "annihilator": _fe_str(ann),
                "presentation": presentation,
                "zero": hm.is_zero(),
            }
        )
    result = {"W": str(w), "v1": _fe_str(e1.v), "v2": _fe_str(e2.v), "modules": modules}
    print(json.dumps({"command": "hom", "result": result}, sort_keys=True, indent=2))
    return 0


def _cmd_endring(args) -> int:
    w = _potential(args.W)
    e = _element_of(args.v, w)
    d, t = homology.end_ring_presentation(e)
    result = {
        "W": str(w),
        "v": _fe_str(e.v),
        "d": _fe_str(d),
        "t": _fe_str(t),
        "presentation": f"(R/<{d}>)[w]/(w^2 + {t})",
    }
    lines = [result["presentation"]]
    _emit("endring", result, args.json, lines)
    return 0


def _cmd_invariant(args) -> int:
    w = _potential(args.W)
    e = _element_of(args.v, w)
    result = {"W": str(w), "potential": w.to_json(), **_invariant_json(e)}
    print(json.dumps({"command": "invariant", "result": result}, sort_keys=True, indent=2))
    return 0


def _form_json(form: classify.KrullSchmidtForm) -> list[dict]:
    return [
        {"prime_index": p.prime_index, "order": p.order, "size": p.size}
        for p in form.parts
    ]


def _cmd_decompose(args) -> int:
    w = _potential(args.W)
    e = _element_of(args.v, w)
    grading = classify.normalize_grading(args.grading)
    form = classify.primary_decompose(e, grading)
    parts = []
    for part in form.parts:
        p = w.primes[part.prime_index]
        parts.append(
            {
                "prime": str(p),
                "prime_index": part.prime_index,
                "order": part.order,
                "size": part.size,
            }
        )
    result = {
        "W": str(w),
        "v": _fe_str(e.v),
        "grading": grading,
        "parts": parts,
        "zero_object": form.is_zero(),
    }
    lines = (
        ["zero object"]
        if form.is_zero()
        else [f"e_{p['prime']}^{p['size']} (order {p['order']})" for p in parts]
    )
    _emit("decompose", result, args.json, lines)
    return 0


def _cmd_snf(args) -> int:
    obj = json.load(sys.stdin) if args.file == "-" else _read_json_file(args.file)
    a = matrix_factorization_from_json(obj)
    dec = factorizations.smith_decompose(a)
    b_inv = factorizations.mat_inverse_unimodular(dec.b_mat)
    reproduced = factorizations.mat_mul(
        factorizations.mat_mul(dec.a_mat, a.v_mat), b_inv
    ) == tuple(
        tuple(dec.diagonal[i] if i == j else 0 for j in range(a.rho))
        for i in range(a.rho)
    )
    result = {
        "W": a.w,
        "rho": a.rho,
        "diagonal": list(dec.diagonal),
        "elementaries": [str(e) for e in dec.elementaries],
        "A": [list(r) for r in dec.a_mat],
        "B": [list(r) for r in dec.b_mat],
        "det_A": factorizations.mat_det(dec.a_mat),
        "det_B": factorizations.mat_det(dec.b_mat),
        "diagonal_reproduced": reproduced,
    }
    lines = [
        "diag(" + ", ".join(map(str, dec.diagonal)) + ")",
        " + ".join(str(e) for e in dec.elementaries),
    ]
    _emit("snf", result, args.json, lines)
    return 0


def _cmd_poset(args) -> int:
    obj = json.load(sys.stdin) if args.file == "-" else _read_json_file(args.file)
    p = divgroups.poset(obj.get("elements", []), obj.get("covers", []))
    if args.action == "analyze":
        rep = divgroups.analyze_poset(p)
        result = {
            "is_tree": rep.is_tree,
            "unique_min": rep.unique_min,
            "kaplansky_i": rep.kaplansky_i,
            "kaplansky_ii": rep.kaplansky_ii,
            "x_star": sorted(rep.x_star),
            "spectral_tree": rep.is_spectral_tree(),
        }
        lines = [f"{k}: {v}" for k, v in sorted(result.items())]
    elif args.action == "primes":
        star = set(p.x_star())
        candidates = sorted(x for x in p.maximal_elements() if x in star)
        rows = [
            {
                "x": x,
                "prime_up_to_bound": divgroups.is_prime_principal_filter(
                    x, p, args.bound
                ),
            }
            for x in candidates
        ]
        result = {"bound": args.bound, "candidates": rows}
        lines = [
            f"{row['x']}: prime up to bound {args.bound}: {row['prime_up_to_bound']}"
            for row in rows
        ]
    else:  # filter-check
        if not args.generator:
            raise BezmfError("filter-check needs --generator JSON")
        gen = divgroups.element(p, json.loads(args.generator))
        rep = divgroups.check_principal_filter_prime(gen, p, args.bound)
        result = {
            "bound": args.bound,
            "generator": dict(gen.values),
            "refuted": rep.refuted,
            "prime_up_to_bound": rep.prime_up_to_bound,
            "counterexample": (
                None
                if rep.counterexample is None
                else [dict(rep.counterexample[0].values), dict(rep.counterexample[1].values)]
            ),
        }
        lines = [
            f"refuted: {rep.refuted}"
            if rep.refuted
            else f"prime up to bound {args.bound}"
        ]
    _emit("poset", result, args.json, lines)
    return 0


def _cmd_verify(args) -> int:
    import itertools

    syms = ["p", "q", "t", "w", "v"]
    rows = []
    failures = literal_mismatches = 0
    for r in range(1, args.r_max + 1):
        for orders in itertools.product(range(2, args.n_max + 1), repeat=r):
            w = divisors.validate_potential(list(zip(syms[:r], orders)))
            for grading in ("graded", "even"):
                census = classify.enumerate_classes(w, grading).n_total
                pipeline = classify.count_classes(w, grading)
                literal, diag = classify.count_classes_literal(w, grading)
                ok = census == pipeline
                if not ok:
                    failures += 1
                if diag.mismatch:
                    literal_mismatches += 1
                rows.append(
                    {
                        "W": str(w),
                        "grading": grading,
                        "census": census,
                        "pipeline": pipeline,
                        "ok": ok,
                        "literal": literal,
                        "literal_matches": diag.strict_matches,
                    }
                )
    result = {
        "potentials": len(rows) // 2,
        "checks": len(rows),
        "failures": failures,
        "literal_mismatches": literal_mismatches,
        "rows": rows,
    }
    lines = []
    if args.verbose:
        for row in rows:
            status = "ok" if row["ok"] else "FAIL"
            lines.append(
                f"{status} {row['W']} [{row['grading']}] census={row['census']}"
                f" pipeline={row['pipeline']} literal={row['literal']}"
            )
    lines.append(
        f"{result['checks']} checks, {failures} failures, "
        f"{literal_mismatches} literal-theorem mismatches (expected; pipeline is authoritative)"
    )
    if literal_mismatches:
        _warn(
            f"the literal theorem formulas disagree with the oracle on "
            f"{literal_mismatches} checks; the pipeline count is authoritative"
        )
    _emit("verify", result, args.json, lines)
    return 0 if failures == 0 else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bezmf",
        description="Elementary matrix factorizations over Bezout domains: "
        "counting, isomorphism, Hom modules, Smith decomposition, spectral posets.",
        epilog=f"Environment: {divisors.FACTOR_BOUND_ENV} overrides the integer "
        "factorization bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grading=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if grading:
            p.add_argument(
                "--grading",
                default="HEF",
                choices=["HEF", "hef", "graded", "even"],
                help="HEF/graded or hef/even (default HEF)",
            )

    p = sub.add_parser("count", help="number of isomorphism classes")
    p.add_argument("--W", required=True, help="potential, e.g. p^3*q^3 or 216")
    p.add_argument("--literal", action="store_true", help="evaluate the literal theorem formula (diagnostic)")
    add_common(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("classes", help="full census with representatives")
    p.add_argument("--W", required=True)
    p.add_argument("--bound", type=int, default=10**6, help="max |A_W| to enumerate")
    add_common(p)
    p.set_defaults(func=_cmd_classes)

    p = sub.add_parser("iso", help="isomorphism decision for two objects")
    p.add_argument("v1", help="divisor of W, or @file.json with a matrix factorization")
    p.add_argument("v2")
    p.add_argument("--W", help="potential (divisor operands)")
    add_common(p, grading=False)
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("hom", help="Hom module description (JSON)")
    p.add_argument("v1")
    p.add_argument("v2")
    p.add_argument("--W", required=True)
    p.add_argument("--parity", default="both", choices=["even", "odd", "both"])
    p.set_defaults(func=_cmd_hom)

    p = sub.add_parser("endring", help="endomorphism ring presentation (d, t)")
    p.add_argument("v")
    p.add_argument("--W", required=True)
    add_common(p, grading=False)
    p.set_defaults(func=_cmd_endring)

    p = sub.add_parser("invariant", help="full invariant data of e_v (JSON)")
    p.add_argument("v")
    p.add_argument("--W", required=True)
    p.set_defaults(func=_cmd_invariant)

    p = sub.add_parser("decompose", help="Krull-Schmidt primary decomposition")
    p.add_argument("--v", required=True)
    p.add_argument("--W", required=True)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument(
        "--grading",
        default="hef",
        choices=["HEF", "hef", "graded", "even"],
        help="hef keeps sizes as-is; HEF identifies l with n-l (default hef)",
    )
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("snf", help="Smith decomposition of a matrix factorization")
    p.add_argument("file", help="JSON {\"W\":..,\"v\":[[..]],\"u\":[[..]]} or - for stdin")
    add_common(p, grading=False)
    p.set_defaults(func=_cmd_snf)

    p = sub.add_parser("poset", help="spectral poset toolkit")
    p.add_argument("action", choices=["analyze", "primes", "filter-check"])
    p.add_argument("file", help="JSON {\"elements\":[..],\"covers\":[[a,b],..]} or -")
    p.add_argument("--bound", type=int, default=4, help="value box bound")
    p.add_argument("--generator", help="JSON map for filter-check, e.g. '{\"1\": 1}'")
    add_common(p, grading=False)
    p.set_defaults(func=_cmd_poset)

    p = sub.add_parser("verify", help="oracle-vs-formula suite over a potential family")
    p.add_argument("--r-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--verbose", action="store_true", help="one line per check")
    add_common(p, grading=False)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BezmfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
