"""Command-line front end: ``cealg <command> ...``.

Exit codes for ``check``: 0 CE confirmed, 1 not CE, 2 unknown; 3 for a
usage/precondition error, 64 for unparsable input, 65 when the enumeration
budget is exceeded.  ``verify-paper`` exits 0 iff every claim passes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algebra import (
    DEFAULT_BUDGET,
    MatAlgebra,
    close_under_multiplication,
    is_commutative,
    nil_index,
    power_chain,
)
from .ce import CE, NOT_CE, ce_certificate_verify, ce_exhaustive, ce_random_search
from .claims import CLAIMS, PASS, VERIFY_BUDGET, ClaimContext, run_claim
from .constructions import FAMILIES, FamilySpec, build, theorem_1_2_certificate
from .errors import BudgetExceeded, FormatError, NotClosedError, NotNilpotentError
from .explorer import CampaignConfig, run_ce_implies_commutative_campaign, run_oq54_search
from .field import FieldSpec
from .fileio import dumps_algebra, load_algebra, load_certificate, parse_matrix_text, save_algebra, save_certificate
from .linalg import Mat, nilpotent_jordan, partition_from_kernels

EXIT_CE, EXIT_NOT_CE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3
EXIT_PARSE, EXIT_BUDGET = 64, 65

_STATUS_EXIT = {CE: EXIT_CE, NOT_CE: EXIT_NOT_CE}


class _UsageError(Exception):
    pass


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.from_label(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _matrix_lines(m: Mat) -> list[str]:
    width = max((len(m.field.format(x)) for r in m.rows for x in r), default=1)
    return ["  " + " ".join(m.field.format(x).rjust(width) for x in r) for r in m.rows]


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(lines))


def _load(args) -> MatAlgebra:
    return load_algebra(args.path, auto_close=getattr(args, "auto_close", False))


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    alg = _load(args)
    if args.certificate:
        cert = load_certificate(args.certificate)
        res = ce_certificate_verify(alg, cert)
        status = CE if res.accepted else "Unknown"
        verdict = {"status": status, "certificate_id": cert.cert_id, "failed": res.failed, "reason": res.detail}
        witness = None
    elif args.random is not None:
        v = ce_random_search(alg, samples=args.random, seed=args.seed)
        verdict, status, witness = v.to_dict(), v.status, v.witness
    else:
        if not alg.field.is_finite:
            raise _UsageError("exhaustive checking needs a finite field; use --random or --certificate")
        v = ce_exhaustive(alg, args.budget)
        verdict, status, witness = v.to_dict(), v.status, v.witness

    comm = is_commutative(alg)
    chain = power_chain(alg)
    payload = {
        "algebra": alg.name,
        "field": alg.field.label,
        "n": alg.n,
        "dim": alg.dim,
        "verdict": verdict,
        "center_dim": alg.center().dim,
        "nilpotence_index": chain.nilpotence_index,
        "commutative": bool(comm),
    }
    lines = [
        f"algebra:          {alg.name or args.path} (n={alg.n}, dim={alg.dim}, field={alg.field.label})",
        f"verdict:          {status}",
        f"center dimension: {alg.center().dim}",
        f"nilpotence index: {chain.nilpotence_index if chain.nilpotence_index is not None else 'not nilpotent'}",
        f"commutative:      {'yes' if comm else 'no'}",
    ]
    if verdict.get("reason"):
        lines.append(f"note:             {verdict['reason']}")
    if witness is not None:
        lines.append("witness (non-central, fails the test):")
        lines.extend(_matrix_lines(witness))
    _emit(args, payload, lines)
    return _STATUS_EXIT.get(status, EXIT_UNKNOWN)


def cmd_construct(args) -> int:
    try:
        obj = build(FamilySpec(args.family, args.n, args.field))
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if isinstance(obj, Mat):
        # a single matrix is exported as the algebra it generates
        obj = close_under_multiplication([obj], n=obj.n, field=obj.field, name=f"{args.family}{args.n}({args.field.label})")
    elif not isinstance(obj, MatAlgebra):
        obj = MatAlgebra(obj, name=f"{args.family}({args.field.label})")
    if args.certificate:
        if args.family != "theorem12":
            raise _UsageError("certificates are only available for the theorem12 family")
        save_certificate(theorem_1_2_certificate(obj), args.certificate)
    text = dumps_algebra(obj)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {obj.name}: n={obj.n}, dim={obj.dim} -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_center(args) -> int:
    alg = _load(args)
    z = alg.center()
    payload = {"dim": z.dim, "basis": [[[str(x) for x in r] for r in m.rows] for m in z.mats]}
    lines = [f"center dimension {z.dim} (algebra dimension {alg.dim})"]
    for k, m in enumerate(z.mats):
        lines.append(f"basis element {k + 1}:")
        lines.extend(_matrix_lines(m))
    _emit(args, payload, lines)
    if args.out:
        save_algebra(MatAlgebra(z, name=f"center of {alg.name or 'algebra'}"), args.out)
    return 0


def cmd_jordan(args) -> int:
    m = parse_matrix_text(args.matrix, args.field)
    try:
        jd = nilpotent_jordan(m)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    payload = {
        "partition": list(jd.partition),
        "kernel_partition": list(partition_from_kernels(m)),
        "P": [[str(x) for x in r] for r in jd.P.rows],
        "J": [[str(x) for x in r] for r in jd.J.rows],
    }
    lines = [f"partition: {list(jd.partition)}", "P:", *_matrix_lines(jd.P), "J = P^-1 A P:", *_matrix_lines(jd.J)]
    _emit(args, payload, lines)
    return 0


def cmd_nilindex(args) -> int:
    alg = _load(args)
    strategy = "randomized" if args.random is not None else "exhaustive"
    try:
        res = nil_index(alg, strategy=strategy, samples=args.random or 0, budget=args.budget, seed=args.seed)
    except NotNilpotentError as exc:
        raise _UsageError(str(exc)) from exc
    payload = {"nil_index": res.value, "certainty": res.certainty, "examined": res.examined}
    _emit(args, payload, [f"nil-index {res.value} ({res.certainty}, {res.examined} elements examined)"])
    return 0


def cmd_search(args) -> int:
    cfg = CampaignConfig(
        FamilySpec(args.ambient, args.n, args.field),
        trials=args.trials,
        seed=args.seed,
        budget=args.budget,
        jobs=args.jobs,
    )
    runner = run_ce_implies_commutative_campaign if args.campaign == "commutative" else run_oq54_search
    try:
        report = runner(cfg)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_dict(with_records=args.records), indent=2, default=str))
    _emit(args, report.to_dict(), [report.summary])
    return 0


def cmd_verify_paper(args) -> int:
    ctx = ClaimContext(budget=args.budget, seed=args.seed, jobs=args.jobs)
    if args.trials is not None:
        ctx.search_trials = args.trials
    wanted = {c.strip().upper() for c in args.only.split(",")} if args.only else None
    rows = []
    for claim in CLAIMS:
        if wanted and claim.claim_id not in wanted:
            continue
        res = run_claim(claim, ctx)
        rows.append((claim, res))
        if not args.json:
            line = f"{claim.claim_id:<5} {res.status:<8} {claim.anchor}"
            if args.timings:
                line += f"  [{res.seconds:.1f}s]"
            print(line, flush=True)
            if args.verbose or res.status != PASS:
                print(f"      {res.detail}", flush=True)
    passed = sum(r.status == PASS for _, r in rows)
    if args.json:
        out = [
            {
                "id": c.claim_id,
                "anchor": c.anchor,
                "procedure": c.procedure,
                "expected": c.expected,
                "status": r.status,
                "detail": r.detail,
                **({"seconds": round(r.seconds, 3)} if args.timings else {}),
            }
            for c, r in rows
        ]
        print(json.dumps(out, indent=2))
    else:
        print(f"{passed}/{len(rows)} claims passed")
    return 0 if rows and passed == len(rows) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=FieldSpec.from_label("F3"), help="Q or Fp (default F3)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of enumerated elements")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for campaigns")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cealg", description="Centrally essential matrix algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide whether an algebra file is CE")
    p.add_argument("path")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="enumerate every element (default)")
    mode.add_argument("--random", type=int, metavar="N", help="sample N random elements")
    mode.add_argument("--certificate", metavar="PATH", help="verify a sum-of-squares certificate")
    p.add_argument("--auto-close", action="store_true", help="close a non-closed basis instead of failing")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", parents=[common], help="write a named algebra to a file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, help="matrix size, or dim V for exterior")
    p.add_argument("--certificate", metavar="PATH", help="also write the sum-of-squares certificate (theorem12)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("center", parents=[common], help="basis of the center")
    p.add_argument("path")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("jordan", parents=[common], help="Jordan form of a nilpotent matrix")
    p.add_argument("--matrix", required=True, help='rows separated by ";", e.g. "0 1; 0 0"')
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("nilindex", parents=[common], help="maximum nilpotence index of elements")
    p.add_argument("path")
    p.add_argument("--random", type=int, metavar="N", help="sample N elements instead of enumerating")
    p.set_defaults(func=cmd_nilindex)

    p = sub.add_parser("search", parents=[common], help="random subalgebra campaign")
    p.add_argument("--ambient", default="strict", choices=("strict", "upper", "full"))
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--campaign", choices=("noncommutative", "commutative"), default="noncommutative")
    p.add_argument("--records", action="store_true", help="include per-trial records in --out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify-paper", parents=[common], help="run the claim-by-claim reproduction table")
    p.add_argument("--only", help="comma-separated claim ids, e.g. AC1,AC5")
    p.add_argument("--trials", type=int, help="override the search trial count of AC12")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify_paper, budget=VERIFY_BUDGET)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, NotClosedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
