"""Command-line entry point: ``cmlab <subcommand> [options]``.

Exit codes: 0 success, 1 domain error, 2 usage error.  Results go to stdout;
progress and error messages go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath

from . import classpoly, hecke, modfunc, modpoly, padic, quadforms, sunits
from .config import OUTPUT_FORMATS, Config
from .errors import CMLabError
from .ffield import parse_elem
from .padic import Place, fraction_str

Rows = Tuple[List[str], List[list]]  # header, rows for csv/table output


# --- value parsers (raise ArgumentTypeError, so bad values are usage errors) ---


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def _positive(text: str) -> int:
    n = _int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def _prime(text: str) -> int:
    n = _int(text)
    if not quadforms.is_prime(n):
        raise argparse.ArgumentTypeError(f"{text!r} is not prime")
    return n


def _prime_set(text: str) -> Tuple[int, ...]:
    if text.strip().lower() == "none":
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise argparse.ArgumentTypeError(f"empty entry in prime list {text!r}")
        out.append(_prime(part))
    return tuple(sorted(set(out)))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/16, got {text!r}") from None


def _place(text: str) -> Place:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return Place.infinity()
    return Place.finite(_prime(text))


def _int_list(text: str) -> List[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _base(text: str) -> sunits.Base:
    """'0', 'singular:<relation>:<D0>' or 'poly:c0,c1,...' (constant term first)."""
    if text == "0":
        return sunits.Base.zero()
    kind, _, rest = text.partition(":")
    if kind == "singular":
        rel, _, d0 = rest.partition(":")
        if not rel or not d0:
            raise argparse.ArgumentTypeError("singular base needs the form singular:<relation>:<D0>")
        return sunits.Base.singular(rel, _int(d0))
    if kind == "poly":
        return sunits.Base.algebraic(_int_list(rest))
    raise argparse.ArgumentTypeError(f"unknown base {text!r}; use 0, singular:REL:D0 or poly:c0,c1,...")


def _tau(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected tau as RE,IM, got {text!r}")
    return parts[0].strip(), parts[1].strip()


# --- output ---------------------------------------------------------------


def _emit(out, cfg: Config, records: List[dict], rows: Optional[Rows] = None, fmt: Optional[str] = None) -> None:
    fmt = fmt or cfg.output
    if fmt == "json" or rows is None:
        for rec in records:
            out.write(json.dumps(rec) + "\n")
        return
    header, body = rows
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        out.write(buf.getvalue())
        return
    cells = [header] + [[str(c) for c in r] for r in body]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip() + "\n")


def _strs(p: Sequence[int]) -> List[str]:
    return [str(c) for c in p]


def _coeffs_str(p: Sequence[int]) -> str:
    return " ".join(str(c) for c in p)


def _relation(name: str) -> modfunc.ModularRelation:
    return modfunc.builtin_relation(name)


# --- subcommands ------------------------------------------------------------


def cmd_hclass(args, cfg, out):
    cp = classpoly.hilbert_class_poly(args.D, classpoly.PrecisionPolicy(cfg.default_precision_bits))
    rec = {"D": cp.discriminant.value, "coeffs": _strs(cp.coefficients)}
    _emit(out, cfg, [rec], (["D", "h", "coeffs"], [[rec["D"], cp.degree, _coeffs_str(cp.coefficients)]]))


def cmd_forms(args, cfg, out):
    forms = quadforms.reduced_forms(args.D)
    rec = {"D": args.D, "h": len(forms), "forms": [[f.a, f.b, f.c] for f in forms]}
    _emit(out, cfg, [rec], (["a", "b", "c"], [[f.a, f.b, f.c] for f in forms]))


def cmd_sunit_search(args, cfg, out):
    rel = _relation(args.rel)
    reps = sunits.sunit_search(
        rel, args.base, args.S, args.Dmax, Dmin=args.Dmin, workers=cfg.parallelism,
        hits_only=not args.all, progress=args.err if args.progress else None,
    )
    rows = [
        [r.D, r.factor_index, r.base, _coeffs_str(r.polynomial), int(r.is_s_unit)] for r in reps
    ]
    _emit(out, cfg, [r.to_dict() for r in reps], (["D", "factor_index", "base", "polynomial", "is_s_unit"], rows))


def cmd_diff_norm(args, cfg, out):
    n = sunits.norm_of_difference_cm(args.D, args.D0)
    rec = {"D": args.D, "D0": args.D0, "norm": str(n)}
    _emit(out, cfg, [rec], (["D", "D0", "norm"], [[args.D, args.D0, str(n)]]))


def cmd_disperse(args, cfg, out):
    rel = _relation(args.rel)
    table = padic.dispersal_table(
        rel, args.alpha, args.place, args.r, args.Dmax, Dmin=args.Dmin, only_supersingular=args.supersingular
    )
    recs = [
        {"D": r.D, "orbit_size": r.orbit_size, "in_disc": r.in_disc, "fraction": fraction_str(r.fraction)}
        for r in table
    ]
    rows = [[r["D"], r["orbit_size"], r["in_disc"], r["fraction"]] for r in recs]
    _emit(out, cfg, recs, (["D", "orbit_size", "in_disc", "fraction"], rows), fmt=args.format or "csv")


def cmd_approx_ratio(args, cfg, out):
    table = padic.approx_ratio_table(args.D0, args.p, args.Dmax, Dmin=args.Dmin)
    recs = [
        {
            "D": r.D, "max_valuation": fraction_str(r.max_valuation), "ratio": f"{r.ratio:.12f}",
            "running_max": f"{r.running_max:.12f}", "new_max": r.new_max,
        }
        for r in table
    ]
    rows = [[r["D"], r["max_valuation"], r["ratio"], r["running_max"], int(r["new_max"])] for r in recs]
    _emit(out, cfg, recs, (["D", "max_valuation", "ratio", "running_max", "new_max"], rows))


def _divisor_record(div: hecke.HeckeDivisor) -> dict:
    return {"p": div.p, "entries": [[[a, b], m] for (a, b), m in div.entries]}


def cmd_hecke(args, cfg, out):
    if args.cm is not None:
        div = hecke.cm_reduction_divisor(args.cm, args.p)
        rec = _divisor_record(div)
        _emit(out, cfg, [rec], (["j", "mult"], [[f"{a},{b}", m] for (a, b), m in div.entries]))
        return
    if args.j is None:
        raise CMLabError("hecke needs --j (or --cm D)")
    j0 = parse_elem(args.j, args.p)
    if args.orbit is not None:
        meas = hecke.hecke_orbit_measure(j0, args.orbit, args.p)
        recs = [
            {
                "n": r.n, "max_atom": fraction_str(r.max_atom), "running_max": fraction_str(r.running_max),
                "weights": [fraction_str(w) for w in r.weights],
            }
            for r in meas.rows
        ]
        rows = [[r["n"], r["max_atom"], r["running_max"], " ".join(r["weights"])] for r in recs]
        _emit(out, cfg, recs, (["n", "max_atom", "running_max", "weights"], rows))
        return
    div = hecke.hecke_image(j0, args.n, args.p)
    rec = _divisor_record(div)
    _emit(out, cfg, [rec], (["j", "mult"], [[f"{a},{b}", m] for (a, b), m in div.entries]))


def cmd_ssset(args, cfg, out):
    pts = hecke.supersingular_set(args.p)
    rec = {"p": args.p, "points": [list(e) for e in pts]}
    _emit(out, cfg, [rec], (["a", "b"], [list(e) for e in pts]))


def cmd_phi(args, cfg, out):
    phi = modpoly.classical_modular_poly(args.n)
    s = modpoly.sigma1(args.n)
    terms = sorted(phi.items())
    rec = {"name": f"phi_{args.n}", "deg_x": s, "deg_y": s, "terms": [[i, j, str(c)] for (i, j), c in terms]}
    _emit(out, cfg, [rec], (["i", "j", "coeff"], [[i, j, str(c)] for (i, j), c in terms]))


def _singular_moduli_output(rel_name: str, D: int, cfg, out):
    rel = _relation(rel_name)
    factors = modfunc.singular_moduli_polys(rel, D)
    rec = {"relation": rel_name, "D": D, "factors": [_strs(f) for f in factors]}
    _emit(out, cfg, [rec], (["relation", "D", "factor"], [[rel_name, D, _coeffs_str(f)] for f in factors]))


def _complex_record(z, digits: int) -> List[str]:
    return [mpmath.nstr(z.real, digits, strip_zeros=False), mpmath.nstr(z.imag, digits, strip_zeros=False)]


def cmd_weber(args, cfg, out):
    if args.tau is not None:
        bits = cfg.default_precision_bits
        with mpmath.workprec(bits + 32):
            tau = mpmath.mpc(*args.tau)
            v = classpoly.eval_eta_quotient(args.variant, tau, classpoly.PrecisionPolicy(bits))
            digits = max(10, int(bits * 0.30103) - 2)
            val = _complex_record(v, digits)
        rec = {"variant": args.variant, "tau": list(args.tau), "value": val}
        _emit(out, cfg, [rec], (["variant", "re", "im"], [[args.variant, *val]]))
        return
    if args.D is None:
        raise CMLabError("weber needs -D (singular moduli) or --tau (evaluation)")
    _singular_moduli_output(f"weber_{args.sign}", args.D, cfg, out)


def cmd_lambda(args, cfg, out):
    _singular_moduli_output("lambda", args.D, cfg, out)


def cmd_height(args, cfg, out):
    if args.poly is not None:
        h = classpoly.weil_height(classpoly.AlgebraicNumber(tuple(args.poly)))
        rec = {"poly": _strs(classpoly.AlgebraicNumber(tuple(args.poly)).minpoly), "height": f"{h:.15f}"}
    elif args.D is not None:
        H = classpoly.hilbert_class_poly(args.D).as_list()
        h = classpoly.weil_height(classpoly.AlgebraicNumber(tuple(H)))
        rec = {"D": args.D, "height": f"{h:.15f}"}
    else:
        raise CMLabError("height needs --poly or -D")
    _emit(out, cfg, [rec], (list(rec), [[v if not isinstance(v, list) else " ".join(v) for v in rec.values()]]))


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None, help="cache directory (default $CMLAB_CACHE_DIR or ./cache)")
    common.add_argument("--bits", type=_positive, default=None, help="default working precision in bits")
    common.add_argument("--workers", type=_positive, default=None, help="parallel workers for searches")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="output format")

    parser = argparse.ArgumentParser(prog="cmlab", description="CM singular moduli, S-units and Hecke orbits.")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("hclass", cmd_hclass, "Hilbert class polynomial H_D")
    p.add_argument("-D", type=_int, required=True)

    p = add("forms", cmd_forms, "reduced primitive forms of discriminant D")
    p.add_argument("-D", type=_int, required=True)

    p = add("sunit-search", cmd_sunit_search, "S-unit differences of singular moduli")
    p.add_argument("--rel", required=True, help=f"relation: {', '.join(modfunc.BUILTIN_NAMES)}")
    p.add_argument("--base", type=_base, required=True, help="0 | singular:REL:D0 | poly:c0,c1,...")
    p.add_argument("--S", type=_prime_set, required=True, help="comma-separated primes, or 'none'")
    p.add_argument("--Dmax", type=_positive, required=True)
    p.add_argument("--Dmin", type=_positive, default=3)
    p.add_argument("--all", action="store_true", help="report non-units too")
    p.add_argument("--progress", action="store_true", help="progress on stderr")

    p = add("diff-norm", cmd_diff_norm, "Res(H_D, H_D0), the norm of j - j0")
    p.add_argument("-D", type=_int, required=True)
    p.add_argument("--D0", type=_int, required=True)

    p = add("disperse", cmd_disperse, "conjugates inside a v-adic disc, per discriminant (CSV)")
    p.add_argument("--rel", default="identity")
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--place", type=_place, required=True, help="a prime, or inf")
    p.add_argument("--r", type=_fraction, required=True, help="radius, e.g. 1/16")
    p.add_argument("--Dmax", type=_positive, required=True)
    p.add_argument("--Dmin", type=_positive, default=3)
    p.add_argument("--supersingular", action="store_true", help="only D with p non-split")

    p = add("approx-ratio", cmd_approx_ratio, "max v_p(j - j0) log p / log|D| per discriminant")
    p.add_argument("--D0", type=_int, required=True)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--Dmax", type=_positive, required=True)
    p.add_argument("--Dmin", type=_positive, default=3)

    p = add("hecke", cmd_hecke, "Hecke images T_n(j0) over F_{p^2}")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--j", default=None, help="seed j0 as 'a' or 'a,b' (a + b x)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=_positive, help="level of T_n")
    g.add_argument("--orbit", type=_positive, metavar="N", help="normalized T_n(j0) for all n <= N")
    g.add_argument("--cm", type=_int, metavar="D", help="reduction of the roots of H_D instead")

    p = add("ssset", cmd_ssset, "supersingular j-invariants in F_{p^2}")
    p.add_argument("--p", type=_prime, required=True)

    p = add("phi", cmd_phi, "modular polynomial Phi_n")
    p.add_argument("--n", type=_positive, required=True)

    p = add("weber", cmd_weber, "Weber singular moduli (-D) or numeric values (--tau)")
    p.add_argument("-D", type=_int, default=None)
    p.add_argument("--sign", choices=("minus", "plus"), default="minus")
    p.add_argument("--tau", type=_tau, default=None, help="RE,IM")
    p.add_argument("--variant", choices=classpoly.ETA_VARIANTS, default="weber_f")

    p = add("lambda", cmd_lambda, "lambda singular moduli over discriminant D")
    p.add_argument("-D", type=_int, required=True)

    p = add("height", cmd_height, "absolute logarithmic Weil height")
    p.add_argument("--poly", type=_int_list, default=None, help="c0,c1,... constant term first")
    p.add_argument("-D", type=_int, default=None, help="height of a discriminant-D singular modulus")

    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = Config.from_env(
            cache_dir=args.cache_dir, default_precision_bits=args.bits, parallelism=args.workers,
            output=args.format,
        )
        cfg.activate()
        args.err = stderr
        args.func(args, cfg, stdout)
    except (CMLabError, ValueError, ArithmeticError) as exc:
        stderr.write(f"cmlab {args.command}: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
