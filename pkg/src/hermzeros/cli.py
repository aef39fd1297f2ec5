"""Command-line front end.  One command runs one analysis and writes one
JSON (or CSV) report; exit status 0 = all checks passed, 1 = a check
failed, 2 = invalid input."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import SCHEMA_VERSION, __version__
from . import asymptotics as asy
from .exact_poly import Poly, format_rational, parse_rational
from .generalized import MultiIndexSpec, SequencePair, gen_hermite, multiple_hermite
from .hermite import CombinationSpec, Normalization, SpecError, combination
from .roots import analyze, complex_roots
from .zero_analysis import (
    DEFAULT_CEILING,
    DEFAULT_THETAS,
    CeilingExceeded,
    SharedZeroError,
    interlaces,
    pencil_threshold_appell,
    sign_counts_check,
    threshold_appell,
    turan_appell,
    turan_generalized,
    turan_standard,
    verify_real_rooted_standard,
)

COMMANDS = ("build", "roots", "interlace", "turan", "threshold", "pencil", "signs",
            "asymptotics", "conjecture", "selftest")
ASYMPTOTIC_CHECKS = ("mehler-heine", "scaling", "central", "edge", "nonreal", "semicircle")


class UsageError(ValueError):
    pass


def _rationals(text: str) -> list[Fraction]:
    return [parse_rational(t.strip()) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _range(text: Optional[str], default: tuple) -> tuple:
    if not text:
        return default
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


# --- input objects ----------------------------------------------------------

def _combination_spec(args) -> Optional[CombinationSpec]:
    if args.gamma is None:
        return None
    return CombinationSpec(_rationals(args.gamma))


def _sequence(args) -> Optional[SequencePair]:
    if args.phi is None and args.psi is None:
        return None
    return SequencePair(_rationals(args.phi or ""), _rationals(args.psi) if args.psi else None)


def _multi(args) -> Optional[MultiIndexSpec]:
    if args.multi_n is None:
        return None
    if args.c is None:
        raise UsageError("--multi-n needs --c")
    return MultiIndexSpec(_ints(args.multi_n), _rationals(args.c))


def _single_n(args) -> int:
    if not args.n:
        raise UsageError("--n is required")
    ns = _ints(args.n)
    if len(ns) != 1:
        raise UsageError("this command takes a single --n")
    return ns[0]


def _family(args):
    """(description, callable n -> polynomial) for whichever family was given."""
    spec, seq, multi = _combination_spec(args), _sequence(args), _multi(args)
    given = [x for x in (spec, seq, multi) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --gamma, --phi/--psi, --multi-n/--c")
    if spec is not None:
        norm = Normalization(args.norm)
        return ({"family": "combination", "normalization": norm.value, **spec.to_json()},
                lambda n: combination(spec, norm, n))
    if seq is not None:
        return {"family": "generalized", **seq.to_json()}, lambda n: gen_hermite(seq, n)
    return {"family": "multiple", **multi.to_json()}, lambda n: multiple_hermite(multi)


def _poly_json(p: Poly) -> dict:
    return {"degree": int(p.degree) if not p.is_zero() else None,
            "coefficients": [format_rational(c) for c in p.coeffs],
            "text": repr(p)}


# --- commands ---------------------------------------------------------------

def cmd_build(args):
    desc, make = _family(args)
    n = None if args.multi_n else _single_n(args)
    p = make(n)
    if n is not None:
        desc["n"] = n
    return desc, {"polynomial": _poly_json(p)}, True


def cmd_roots(args):
    desc, make = _family(args)
    n = None if args.multi_n else _single_n(args)
    p = make(n)
    result = {"polynomial": _poly_json(p), "report": analyze(p).to_json()}
    if args.complex:
        result["complex_roots"] = [
            {"re": r.value.real, "im": r.value.imag, "residual": r.residual, "approximate": True}
            for r in complex_roots(p, args.precision_bits)]
    if n is not None:
        desc["n"] = n
    return desc, result, True


def cmd_interlace(args):
    spec = _combination_spec(args)
    if args.range and spec is not None and Normalization(args.norm) is Normalization.STANDARD:
        lo, hi = _range(args.range, (spec.K, DEFAULT_CEILING))
        sweep = verify_real_rooted_standard(spec, lo, hi)
        return {**spec.to_json(), "normalization": "standard", "range": [lo, hi]}, sweep.to_json(), sweep.holds
    desc, make = _family(args)
    if args.multi_n:
        raise UsageError("interlace needs a one-parameter family")
    n = _single_n(args)
    verdict = interlaces(make(n + 1), make(n))
    return {**desc, "n": n, "pair": [n + 1, n]}, verdict.to_json(), verdict.holds


def cmd_turan(args):
    n = _single_n(args)
    spec, seq = _combination_spec(args), _sequence(args)
    if spec is not None:
        norm = Normalization(args.norm)
        res = turan_standard(spec, n) if norm is Normalization.STANDARD else turan_appell(spec, n)
        desc = {**spec.to_json(), "normalization": norm.value}
    elif seq is not None:
        res = turan_generalized(seq, n)
        desc = {"family": "generalized", **seq.to_json()}
    else:
        raise UsageError("turan needs --gamma or --phi/--psi")
    return {**desc, "n": n}, res.to_json(), res.holds


def _need_spec(args) -> CombinationSpec:
    spec = _combination_spec(args)
    if spec is None:
        raise UsageError("--gamma is required")
    return spec


def cmd_threshold(args):
    spec = _need_spec(args)
    res = threshold_appell(spec, args.ceiling)
    return {**spec.to_json(), "ceiling": args.ceiling}, res.to_json(), res.holds


def cmd_pencil(args):
    spec = _need_spec(args)
    thetas = _rationals(args.theta) if args.theta else list(DEFAULT_THETAS)
    res = pencil_threshold_appell(spec, thetas, args.ceiling)
    return ({**spec.to_json(), "theta": [format_rational(t) for t in thetas],
             "ceiling": args.ceiling}, res.to_json(), res.holds)


def cmd_signs(args, conjecture: bool = False):
    spec = _need_spec(args)
    lo, hi = _range(args.range, (spec.K, 40))
    res = sign_counts_check(spec, lo, hi)
    result = res.to_json()
    if conjecture:
        even = [r for r in res.rows.values() if r.parity == "even"]
        result["balanced_even_rows"] = sum(r.observed[0] == r.observed[1] for r in even)
        result["even_rows"] = len(even)
        result["evidence_only"] = True
        passed = True
    else:
        passed = res.holds if res.status == "corollary" else True
    return {**spec.to_json(), "range": [lo, hi]}, result, passed


def cmd_asymptotics(args):
    check = args.check
    if check not in ASYMPTOTIC_CHECKS:
        raise UsageError(f"--check must be one of {', '.join(ASYMPTOTIC_CHECKS)}")
    ns = _ints(args.n) if args.n else [40]
    tol = args.tolerance
    bits = args.precision_bits
    checks = []
    desc = {"check": check, "n": ns}
    if check == "mehler-heine":
        desc.update(x=args.x, parity=args.parity)
        checks = [asy.mehler_heine(n, args.x, args.parity, tol, bits) for n in ns]
    else:
        spec = _need_spec(args)
        desc.update(spec.to_json())
        for n in ns:
            if check == "scaling":
                z = complex(args.z)
                desc["z"] = {"re": z.real, "im": z.imag}
                checks.append(asy.appell_scaling(spec, n, z, tol, bits))
            elif check == "central":
                desc["j"] = args.j
                checks.append(asy.central_zero_check(spec, n, args.j, tol))
            elif check == "edge":
                checks.extend(asy.edge_zero_check(spec, n, tol))
            elif check == "nonreal":
                checks.extend(asy.nonreal_zero_check(spec, n, tol, max(bits, 256)))
            else:
                desc["f"] = args.f
                checks.append(asy.semicircle_statistic(spec, n, args.f, tol))
    return desc, {"checks": [c.to_json() for c in checks]}, all(c.passes for c in checks), checks


def cmd_selftest(args):
    from .acceptance import run_all
    only = _ints(args.only) if args.only else None
    results = run_all(only)
    for r in results:
        print(r.line(), file=sys.stderr)
    return ({"only": only}, {"criteria": [r.to_json() for r in results]},
            all(r.passed for r in results))


HANDLERS = {
    "build": cmd_build, "roots": cmd_roots, "interlace": cmd_interlace, "turan": cmd_turan,
    "threshold": cmd_threshold, "pencil": cmd_pencil, "signs": cmd_signs,
    "asymptotics": cmd_asymptotics, "conjecture": lambda a: cmd_signs(a, conjecture=True),
    "selftest": cmd_selftest,
}


# --- parser -----------------------------------------------------------------

def _default_precision() -> int:
    return int(os.environ.get("HERMZEROS_PRECISION", asy.DEFAULT_PRECISION_BITS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermzeros", description=__doc__, allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with the command and its options")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--gamma", help="comma-separated rationals gamma_0..gamma_K, gamma_0 = 1")
    parser.add_argument("--norm", choices=[m.value for m in Normalization], default="appell")
    parser.add_argument("--n", help="index, comma list or lo:hi")
    parser.add_argument("--range", help="lo:hi sweep range")
    parser.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    parser.add_argument("--phi", help="comma-separated rationals phi_1, phi_2, ...")
    parser.add_argument("--psi", help="comma-separated rationals psi_1, psi_2, ...")
    parser.add_argument("--multi-n", dest="multi_n", help="multi-index, comma-separated")
    parser.add_argument("--c", help="distinct rationals c_1..c_r for the multi-index")
    parser.add_argument("--theta", help="comma-separated pencil parameters")
    parser.add_argument("--check", choices=ASYMPTOTIC_CHECKS, default="mehler-heine")
    parser.add_argument("--x", type=float, default=0.0)
    parser.add_argument("--parity", choices=("even", "odd"), default="even")
    parser.add_argument("--z", default="1", help="complex point for the scaling check")
    parser.add_argument("--j", type=int, default=0)
    parser.add_argument("--f", choices=sorted(asy.TEST_FUNCTIONS), default="x2")
    parser.add_argument("--complex", action="store_true", help="also report float complex roots")
    parser.add_argument("--only", help="selftest: criteria numbers to run")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--precision-bits", dest="precision_bits", type=int,
                        default=_default_precision())
    parser.add_argument("--tolerance", type=float)
    return parser


def _apply_config(argv: list[str]) -> list[str]:
    """Prepend the options of a --config JSON file so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return argv
    with open(known.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    out: list[str] = []
    if "command" in cfg and not any(a in COMMANDS for a in rest):
        out.append(str(cfg.pop("command")))
    else:
        cfg.pop("command", None)
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                out.append(flag)
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        out += [flag, str(value)]
    return out + rest


def _csv_rows(command: str, result: dict, checks) -> str:
    if checks is not None:
        return asy.write_series_csv(checks)
    if command == "threshold":
        lines = ["n,n_real,n_nonreal"]
        lines += [f"{n},{r['n_real']},{r['n_nonreal']}" for n, r in result["per_n"].items()]
        return "\n".join(lines) + "\n"
    if command in ("signs", "conjecture"):
        lines = ["n,parity,pred_negative,pred_positive,obs_negative,obs_positive,agrees"]
        for n, r in result["rows"].items():
            lines.append(",".join([n, r["parity"], *map(str, r["predicted"]),
                                   *map(str, r["observed"]), str(r["agrees"]).lower()]))
        return "\n".join(lines) + "\n"
    raise UsageError(f"csv output is not available for {command}")


def run(argv: Sequence[str]) -> tuple[int, str, Optional[str]]:
    """Execute one command; returns (exit status, report text, output path)."""
    argv = _apply_config(list(argv))
    args = build_parser().parse_args(argv)
    out = HANDLERS[args.command](args)
    desc, result, passed = out[:3]
    checks = out[3] if len(out) > 3 else None
    if args.format == "csv":
        return (0 if passed else 1), _csv_rows(args.command, result, checks), args.output
    report = {
        "schema_version": SCHEMA_VERSION,
        "library": {"name": "hermzeros", "version": __version__},
        "command": args.command,
        "input": desc,
        "passed": passed,
        "result": result,
    }
    text = json.dumps(report, indent=2) + "\n"
    return (0 if passed else 1), text, args.output


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        status, text, output = run(argv)
    except (SpecError, UsageError, SharedZeroError, ValueError, IndexError) as exc:
        print(f"hermzeros: error: {exc}", file=sys.stderr)
        return 2
    except CeilingExceeded as exc:
        print(f"hermzeros: check failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"hermzeros: error: {exc}", file=sys.stderr)
        return 2
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status
