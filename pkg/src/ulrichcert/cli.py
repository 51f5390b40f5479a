"""Command-line frontend: `ulrichcert <subcommand> [flags]`.

All state flows through flags; environment variables are not consulted.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import invariants as inv
from .mpoly import read_ideal_file, write_ideal_file
from .pipeline import PipelineConfig, certify, construct
from .presentation import Ideal
from .resolve import betti_table, degree_genus, free_resolution, hilbert_series_numerator

IDEAL_FILES = {"I_Dprime": "I_Dprime.txt", "I_Gamma": "I_Gamma.txt", "I_Delta": "I_Delta.txt",
               "I_D": "I_D.txt", "I_X": "I_X.txt"}


class CliError(Exception):
    """A user-facing error; printed without a traceback."""


def _common(parser):
    parser.add_argument("--prime", type=int, default=997)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="output file or directory")
    parser.add_argument("--format", choices=["json", "text"], default="text")
    parser.add_argument("--check-smooth", action="store_true",
                        help="also check smoothness of X by the Jacobian criterion")
    parser.add_argument("--attempts", type=int, default=3, help="max attempts per random stage")


def build_parser():
    ap = argparse.ArgumentParser(prog="ulrichcert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="run the full randomized pipeline")
    _common(p)

    p = sub.add_parser("certify", help="re-check a given (I_D, I_X) pair")
    _common(p)
    p.add_argument("ideal_D")
    p.add_argument("ideal_X")

    p = sub.add_parser("betti", help="Betti table of S/I for an ideal file")
    _common(p)
    p.add_argument("ideal")

    p = sub.add_parser("hilbert", help="Hilbert series of S/I for an ideal file")
    _common(p)
    p.add_argument("ideal")

    p = sub.add_parser("chern", help="Chern data of rank-r Ulrich bundles on X")
    _common(p)
    p.add_argument("--rank", type=int, required=True)

    p = sub.add_parser("bgn", help="nonemptiness of a higher-rank Brill-Noether locus")
    _common(p)
    for name in ("g", "r", "d", "k"):
        p.add_argument(name, type=int)

    p = sub.add_parser("dims", help="moduli dimension counts for Ulrich bundles")
    _common(p)
    p.add_argument("--rank", type=int, required=True)

    p = sub.add_parser("sweep", help="run the pipeline over consecutive seeds")
    _common(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--min-pass", type=int, default=8, help="passes needed for exit status 0")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("export-oracle", help="write a Macaulay2 cross-validation script")
    _common(p)
    p.add_argument("--ideals", default=None,
                   help="directory written by `construct --out`; constructs afresh if omitted")
    return ap


def _config(args):
    try:
        return PipelineConfig(prime=args.prime, seed=args.seed, max_attempts=args.attempts,
                              check_X_smoothness=args.check_smooth)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _read_ideal(path):
    try:
        ring, polys = read_ideal_file(path)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except ValueError as exc:
        msg = str(exc)
        raise CliError(msg if msg.startswith(str(path)) else f"{path}: {msg}") from None
    return Ideal(polys, ring)


def _emit(args, text, data):
    """Print `text` or `data` as JSON; with --out (a file) write there too."""
    out = json.dumps(data, indent=2) + "\n" if args.format == "json" else text + "\n"
    sys.stdout.write(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)


def report_text(rep):
    lines = [f"verdict: {rep['verdict']} (prime {rep['prime']}, seed {rep['seed']})"]
    for name, st in rep["stages"].items():
        lines.append(f"{name}: {st['status']} (attempts {st['attempts']})")
        for c in st["checks"]:
            mark = "ok" if c["pass"] else "FAIL"
            got = json.dumps(c["got"])
            if len(got) > 70:
                got = got[:67] + "..."
            lines.append(f"  [{mark}] {c['name']} = {got}    <{c['anchor']}>")
        for n in st["notes"]:
            lines.append(f"  note: {n}")
    return "\n".join(lines)


def _write_report(args, report, ideals=None):
    rep = report.to_json()
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w") as fh:
            fh.write(report.dumps())
        for key, I in (ideals or {}).items():
            write_ideal_file(os.path.join(args.out, IDEAL_FILES[key]), I.ring, I.gens)
    sys.stdout.write(report.dumps() if args.format == "json" else report_text(rep) + "\n")
    return 0 if report.verdict == "pass" else 1


def cmd_construct(args):
    res = construct(_config(args))
    return _write_report(args, res.report, res.ideals)


def cmd_certify(args):
    I_D = _read_ideal(args.ideal_D)
    I_X = _read_ideal(args.ideal_X)
    if I_D.ring.header() != I_X.ring.header():
        raise CliError("I_D and I_X live in different rings")
    if I_D.ring.p != args.prime:
        raise CliError(f"ideal files are over F_{I_D.ring.p}, not F_{args.prime}")
    return _write_report(args, certify(I_D, I_X, _config(args)))


def cmd_betti(args):
    I = _read_ideal(args.ideal)
    B = betti_table(free_resolution(I.gens))
    _emit(args, str(B), {"totals": list(B.totals()), "betti": B.to_json()})
    return 0


def cmd_hilbert(args):
    I = _read_ideal(args.ideal)
    H = hilbert_series_numerator(I.gens)
    den = " ".join(f"(1-{_mono(d)})^{e}" if e > 1 else f"(1-{_mono(d)})"
                   for d, e in sorted(H.denominator_exponents().items(), reverse=True))
    text = f"numerator: {H}\ndenominator: {den}"
    data = {"numerator": {",".join(map(str, k)): v for k, v in sorted(H.numerator.items())},
            "var_degrees": [list(d) for d in H.var_degrees]}
    if I.ring.grading_rank == 1:
        dim, deg, genus = degree_genus(I.gens)
        text += f"\ndim {dim}, degree {deg}" + (f", genus {genus}" if genus is not None else "")
        data.update(dim=dim, degree=deg, genus=genus)
    _emit(args, text, data)
    return 0


def _mono(d):
    names = ["t"] if len(d) == 1 else ["s", "t", "u", "v"][:len(d)]
    return "".join(f"{n}^{e}" if e > 1 else n for n, e in zip(names, d) if e)


def cmd_chern(args):
    try:
        C = inv.fm_chern(args.rank)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    anchor = "c = (1, r, 2r^2 - r, r(r-2)(2r+1)/3) in (1, H, L, P); 2d - 3s = r, d - 2s = 0"
    text = str(C) + "\n# " + anchor + "".join(f"\n# {n}" for n in C.notes)
    _emit(args, text, {"rank": C.r, "chern": list(C.chern), "s": C.s, "d": C.d,
                       "notes": list(C.notes), "anchor": anchor})
    return 0


def cmd_bgn(args):
    try:
        q = inv.BNQuery(args.g, args.r, args.d, args.k)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    ok = inv.bgn_nonempty(q)
    rho = inv.bn_rho(q)
    anchor = "nonempty iff d > 0, r <= d + (r-k)g, (r,d,k) != (r,r,r) for r >= 2"
    text = ("nonempty" if ok else "empty") + f"\n# expected dimension {rho}; {anchor}"
    _emit(args, text, {"query": vars(q), "nonempty": ok, "rho": rho, "anchor": anchor})
    return 0


def cmd_dims(args):
    try:
        D = inv.ulrich_moduli_dims(args.rank)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    fmt = lambda v: "-" if v is None else str(v)
    text = (f"moduli {D.moduli_dim}, strictly semistable {fmt(D.strict_ss_dim)}, "
            f"ext1 {fmt(D.ext1_dim)}, chi(E x E*) {D.chi_EE}, "
            f"h0(E) {inv.ulrich_section_count(args.rank)}")
    data = {"rank": D.r, "moduli_dim": D.moduli_dim, "strict_ss_dim": D.strict_ss_dim,
            "ext1_dim": D.ext1_dim, "chi_EE": D.chi_EE,
            "h0": inv.ulrich_section_count(args.rank)}
    if args.rank >= 2:
        J = inv.jumping_locus_bounds(args.rank)
        text += f"\njumping locus: ext1 {J['ext1']}, family <= {J['family']}, swept <= {J['swept']}"
        data["jumping_locus"] = J
    if args.rank == 3:
        B = inv.r3_orthogonality_dims()
        text += "\northogonality bounds: " + ", ".join(f"{k} {v}" for k, v in B.as_dict().items())
        data["orthogonality"] = B.as_dict()
    _emit(args, text, data)
    return 0


def _sweep_one(job):
    prime, seed, attempts, smooth = job
    cfg = PipelineConfig(prime=prime, seed=seed, max_attempts=attempts,
                         check_X_smoothness=smooth)
    return seed, construct(cfg).report.dumps()


def cmd_sweep(args):
    _config(args)
    jobs = [(args.prime, args.seed + i, args.attempts, args.check_smooth)
            for i in range(args.count)]
    workers = args.jobs or os.cpu_count() or 1
    if workers == 1:
        results = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_one, jobs))
    verdicts = {}
    for seed, dump in results:
        verdicts[seed] = json.loads(dump)["verdict"]
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            with open(os.path.join(args.out, f"report_{seed}.json"), "w") as fh:
                fh.write(dump)
    passed = sum(v == "pass" for v in verdicts.values())
    text = "\n".join(f"seed {s}: {v}" for s, v in verdicts.items())
    text += f"\npass rate {passed}/{len(verdicts)}"
    data = {"verdicts": {str(s): v for s, v in verdicts.items()}, "passed": passed,
            "count": len(verdicts)}
    sys.stdout.write(json.dumps(data, indent=2) + "\n" if args.format == "json" else text + "\n")
    return 0 if passed >= args.min_pass else 1


def cmd_export_oracle(args):
    from .oracle import macaulay2_script
    if args.ideals:
        ideals = {}
        for key, fname in IDEAL_FILES.items():
            path = os.path.join(args.ideals, fname)
            if os.path.exists(path):
                ideals[key] = _read_ideal(path)
        if "I_D" not in ideals or "I_X" not in ideals:
            raise CliError(f"{args.ideals}: needs {IDEAL_FILES['I_D']} and {IDEAL_FILES['I_X']}")
    else:
        res = construct(_config(args))
        if res.report.verdict != "pass":
            raise CliError(f"construction failed for seed {args.seed}")
        ideals = res.ideals
    script = macaulay2_script(ideals)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(script)
    else:
        sys.stdout.write(script)
    return 0


COMMANDS = {"construct": cmd_construct, "certify": cmd_certify, "betti": cmd_betti,
            "hilbert": cmd_hilbert, "chern": cmd_chern, "bgn": cmd_bgn, "dims": cmd_dims,
            "sweep": cmd_sweep, "export-oracle": cmd_export_oracle}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.attempts < 1:
        print("ulrichcert: error: --attempts must be at least 1", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"ulrichcert: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
