"""Command line interface: config ingestion and bit-stable report emission.

Commands:

    exunits count     --config PATH [--method formula|brute|both]
    exunits verify    --config PATH
    exunits asympt    --config PATH --max-norm B [--products 0|1|2] [--out PATH]
    exunits example25 --a INT --c INT --modulus JSON [--mode corrected|strict-paper]

Reports go to stdout (JSON, or CSV for asympt), diagnostics to stderr.
Exit codes: 0 success, 1 input error, 2 mathematical-hypothesis failure
(bad reduction, with the witness point in the JSON).
"""

import argparse
import io
import json
import sys

from . import counting
from .errors import BadReduction, ExunitsError, UnitIdeal
from .ideals import (
    factor_poly_mod_p,
    hnf_from_generators,
    ideal_mul,
    ideal_norm,
    ideal_pow,
    prime_ideals_above,
    unit_ideal,
)
from .number_ring import make_number_ring
from .polys import VarietySpec, parse_poly
from .residues import residue_ctx


class ConfigError(ExunitsError):
    pass


def _parse_element(ring, literal):
    if isinstance(literal, int):
        return ring.from_int(literal)
    if isinstance(literal, list) and all(isinstance(x, int) for x in literal):
        if len(literal) != ring.deg:
            raise ConfigError(
                f"element literal {literal} has {len(literal)} coordinates, "
                f"ring degree is {ring.deg}"
            )
        return tuple(literal)
    raise ConfigError(f"bad element literal: {literal!r}")


def parse_modulus(ring, literal):
    """Ideal literal: {"generators": [...]} or {"primes": [{p, h, exponent}]}."""
    if not isinstance(literal, dict):
        raise ConfigError("modulus must be an object")
    if "generators" in literal:
        gens = [_parse_element(ring, g) for g in literal["generators"]]
        return hnf_from_generators(ring, gens)
    if "primes" in literal:
        ideal = unit_ideal(ring)
        for spec in literal["primes"]:
            p = spec["p"]
            h = tuple(c % p for c in spec["h"])
            exponent = spec.get("exponent", 1)
            matches = [
                pf
                for pf in prime_ideals_above(ring, p)
                if pf.h_coeffs == h
            ]
            if not matches:
                valid = [list(f) for f, _ in factor_poly_mod_p(ring.min_poly, p)]
                raise ConfigError(
                    f"h={spec['h']} is not an irreducible factor of g mod {p}; "
                    f"valid factors: {valid}"
                )
            ideal = ideal_mul(ring, ideal, ideal_pow(ring, matches[0].hnf, exponent))
        if ideal_norm(ideal) < 2:
            raise UnitIdeal("modulus must be a proper ideal")
        return ideal
    raise ConfigError("modulus needs a 'generators' or 'primes' key")


def load_config(path):
    with open(path) as fh:
        raw = json.load(fh)
    try:
        ring = make_number_ring(raw["field"]["min_poly"])
        vspec = raw["variety"]
        amb = vspec["amb"]
        equations = tuple(
            parse_poly(src, ring, amb) for src in vspec.get("equations", [])
        )
        variety = VarietySpec(
            amb=amb,
            codim=vspec["codim"],
            equations=equations,
            declared_degree=vspec.get(
                "degree", max((eq.total_degree() for eq in equations), default=1)
            ),
        )
        f = parse_poly(raw["f"], ring, 1)
        modulus = parse_modulus(ring, raw["modulus"]) if "modulus" in raw else None
        options = raw.get("options", {})
    except KeyError as exc:
        raise ConfigError(f"missing config key: {exc}") from exc
    return {
        "ring": ring,
        "variety": variety,
        "f": f,
        "modulus": modulus,
        "options": options,
    }


def _fraction_json(fr):
    return {"num": fr.numerator, "den": fr.denominator}


def _locals_json(locals_):
    out = []
    for ld in locals_:
        pf = ld.prime
        count_n = ld.count_N
        if not isinstance(count_n, int):  # strict-paper half-integer case
            count_n = _fraction_json(count_n)
        out.append(
            {
                "p": pf.p,
                "h": list(pf.h_coeffs),
                "f_res": pf.f_res,
                "e_ram": pf.e_ram,
                "exponent": pf.exponent,
                "norm": pf.norm,
                "count_X": ld.count_X,
                "count_N": count_n,
                "factor": _fraction_json(ld.factor),
            }
        )
    return out


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _bad_reduction_json(exc):
    return {
        "error": "BadReduction",
        "p": exc.prime.p,
        "h": list(exc.prime.h_coeffs),
        "witness": [list(x) for x in exc.witness],
    }


def cmd_count(args):
    cfg = load_config(args.config)
    if cfg["modulus"] is None:
        raise ConfigError("count requires a modulus")
    cap = cfg["options"].get("cap", counting.DEFAULT_CAP)
    workers = args.workers or cfg["options"].get("workers", 1)
    method = args.method
    ring, V, f, n_ideal = cfg["ring"], cfg["variety"], cfg["f"], cfg["modulus"]
    report = None
    brute_total = None
    try:
        if method in ("formula", "both"):
            report = counting.theorem1_count(
                ring, V, f, n_ideal, cap=cap, workers=workers
            )
        if method in ("brute", "both"):
            brute_total = counting.brute_force_count(
                ring, V, f, n_ideal, cap=cap, workers=workers
            )
    except BadReduction as exc:
        _emit(_bad_reduction_json(exc))
        return 2
    out = {
        "modulus_norm": str(ideal_norm(n_ideal)),
        "exponent": V.amb - V.codim,
        "locals": _locals_json(report.locals) if report else [],
        "total": str(report.total if report else brute_total),
        "method": method,
    }
    if method == "both":
        out["agreement"] = report.total == brute_total
    _emit(out)
    return 0


def cmd_verify(args):
    cfg = load_config(args.config)
    if cfg["modulus"] is None:
        raise ConfigError("verify requires a modulus")
    cap = cfg["options"].get("cap", counting.DEFAULT_CAP)
    ring, V, f, n_ideal = cfg["ring"], cfg["variety"], cfg["f"], cfg["modulus"]
    from .ideals import factor_ideal
    from .polys import check_good_reduction

    factors = factor_ideal(ring, n_ideal)
    checks = []
    bad = False
    for pf in factors:
        rep = check_good_reduction(ring, V, pf, cap=cap)
        check = {
            "name": f"good_reduction p={pf.p} h={list(pf.h_coeffs)}",
            "pass": rep.ok,
        }
        if not rep.ok:
            check["witness"] = [list(x) for x in rep.witness]
            bad = True
        checks.append(check)
        if rep.ok and pf.norm ** (2 * V.amb) <= cap:
            hist = counting.lifting_census(ring, V, pf, 1, cap=cap)
            expected = pf.norm ** (V.amb - V.codim)
            single_bin = set(hist) <= {expected}
            checks.append(
                {
                    "name": f"lifting_census k=1 p={pf.p} h={list(pf.h_coeffs)}",
                    "pass": single_bin,
                    "histogram": {str(k): v for k, v in sorted(hist.items())},
                }
            )
    if not bad and len(factors) >= 2:
        norm = ideal_norm(n_ideal)
        if norm ** V.amb <= cap:
            whole = counting.brute_force_count(ring, V, f, n_ideal, cap=cap)
            product = 1
            parts = []
            for pf in factors:
                piece = counting.brute_force_count(
                    ring, V, f, ideal_pow(ring, pf.hnf, pf.exponent), cap=cap
                )
                parts.append(piece)
                product *= piece
            checks.append(
                {
                    "name": "multiplicativity",
                    "pass": whole == product,
                    "count": whole,
                    "prime_power_counts": parts,
                }
            )
    all_pass = all(c["pass"] for c in checks)
    _emit({"checks": checks, "all_pass": all_pass})
    return 0 if all_pass else 2


def _fmt_float(x):
    return format(x, ".12g")


def cmd_asympt(args):
    cfg = load_config(args.config)
    cap = cfg["options"].get("cap", counting.DEFAULT_CAP)
    workers = args.workers or cfg["options"].get("workers", 1)
    max_norm = args.max_norm or cfg["options"].get("max_norm")
    if max_norm is None:
        raise ConfigError("asympt requires --max-norm")
    if max_norm > 10 ** 4:
        raise ConfigError("max-norm must be at most 10^4")
    products = args.products if args.products is not None else cfg["options"].get(
        "products", 0
    )
    ring, V, f = cfg["ring"], cfg["variety"], cfg["f"]
    primes = counting.good_reduction_primes(ring, V, max_norm, cap=cap)
    family = [pf.hnf for pf in primes]
    if products >= 2:
        for i in range(len(primes)):
            for j in range(i + 1, len(primes)):
                family.append(ideal_mul(ring, primes[i].hnf, primes[j].hnf))
    records = counting.asympt_series(ring, V, f, family, cap=cap, workers=workers)
    records.sort(key=lambda r: (r.N, r.description))
    buf = io.StringIO()
    buf.write("modulus,N,count,ratio,omega,sum_inv_sqrt,sum_inv,max_local_dev\n")
    for r in records:
        buf.write(
            ",".join(
                [
                    r.description,
                    str(r.N),
                    str(r.count),
                    _fmt_float(float(r.ratio)),
                    str(r.omega),
                    _fmt_float(r.sum_inv_sqrt),
                    _fmt_float(r.sum_inv),
                    _fmt_float(r.max_local_dev),
                ]
            )
            + "\n"
        )
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_example25(args):
    ring = make_number_ring([5, 0, 1])
    try:
        literal = json.loads(args.modulus)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad modulus JSON: {exc}") from exc
    n_ideal = parse_modulus(ring, literal)
    mode = args.mode.replace("-", "_")
    c = args.c
    circle = parse_poly(f"x1^2 + x2^2 - ({c})", ring, 2)
    V = VarietySpec(amb=2, codim=1, equations=(circle,), declared_degree=2)
    f = parse_poly(f"x1 - ({args.a})", ring, 1)
    try:
        example = counting.example25_count(ring, args.a, c, n_ideal, mode=mode)
        theorem = counting.theorem1_count(ring, V, f, n_ideal)
    except BadReduction as exc:
        _emit(_bad_reduction_json(exc))
        return 2
    out = {
        "example_total": str(example.total),
        "theorem1_total": str(theorem.total),
    }
    totals = [example.total, theorem.total]
    norm = ideal_norm(n_ideal)
    if norm ** 2 <= counting.DEFAULT_CAP:
        brute = counting.brute_force_count(ring, V, f, n_ideal)
        out["brute_total"] = str(brute)
        totals.append(brute)
    out["agree"] = len(set(totals)) == 1
    _emit(out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="exunits",
        description="Count polynomial-type exceptional units on affine varieties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="run the counting formula and/or brute force")
    p_count.add_argument("--config", required=True)
    p_count.add_argument(
        "--method", choices=["formula", "brute", "both"], default="formula"
    )
    p_count.add_argument("--workers", type=int, default=None)
    p_count.set_defaults(func=cmd_count)

    p_verify = sub.add_parser("verify", help="good reduction, lifting and multiplicativity checks")
    p_verify.add_argument("--config", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_asympt = sub.add_parser("asympt", help="per-prime asymptotics table (CSV)")
    p_asympt.add_argument("--config", required=True)
    p_asympt.add_argument("--max-norm", type=int, default=None)
    p_asympt.add_argument("--products", type=int, choices=[0, 1, 2], default=None)
    p_asympt.add_argument("--out", default=None)
    p_asympt.add_argument("--workers", type=int, default=None)
    p_asympt.set_defaults(func=cmd_asympt)

    p_ex = sub.add_parser("example25", help="circle closed form over Q(sqrt(-5))")
    p_ex.add_argument("--a", type=int, required=True)
    p_ex.add_argument("--c", type=int, required=True)
    p_ex.add_argument("--modulus", required=True, help="ideal literal as JSON")
    p_ex.add_argument(
        "--mode", choices=["corrected", "strict-paper"], default="corrected"
    )
    p_ex.set_defaults(func=cmd_example25)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ExunitsError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
