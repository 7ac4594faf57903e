"""``qsetk`` command line: repl, run, check, fock."""

from __future__ import annotations

import argparse
import json
import re
import sys

from qsetk import checker, core, counting, fock
from qsetk.dsl.repl import repl, run_script
from qsetk.errors import QsetError


def _parse_amps(text: str) -> list[tuple[int, complex]]:
    out = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        n, _, value = item.partition(":")
        re_, _, im = value.partition(",")
        out.append((int(n), complex(float(re_), float(im) if im else 0.0)))
    return out


def _parse_probs(text: str) -> list[tuple[int, float]]:
    out = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        n, _, p = item.partition(":")
        out.append((int(n), float(p)))
    return out


def _parse_profile(text: str) -> dict[str, int]:
    prof: dict[str, int] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        m = re.fullmatch(r"([A-Za-z_]\w*)(?:\*(\d+))?", item)
        if m is None:
            raise ValueError(f"bad quasiset description {item!r}")
        prof[m.group(1)] = prof.get(m.group(1), 0) + int(m.group(2) or 1)
    return prof


def _cmd_check(args) -> int:
    b = checker.Bounds(args.max_kinds, args.max_atoms, args.max_classical, args.max_nesting, args.pow_cap)
    ids = tuple(args.theorem) if args.theorem else checker.ALL_IDS
    report = checker.run_suite(b, symmetry=not args.no_symmetry, theorems=ids, jobs=args.jobs)
    if args.json:
        print(report.to_json())
    else:
        for v in report.verdicts:
            status = "holds" if v.holds else "FAILS"
            print(f"{v.theorem_id:<8} {status}  universes={v.universes_checked} instances={v.instances_checked}")
            if v.counterexample:
                print(f"  counterexample: {json.dumps(v.counterexample, ensure_ascii=False)}")
        print(f"elapsed {report.elapsed_ms:.0f} ms")
    return 0 if report.holds else 1


def _verdict_record(verdict, dim: int) -> dict:
    u = core.make_universe([("q", dim)])
    if isinstance(verdict, fock.Eigenstate):
        X = fock.to_qset(verdict, u, "q")
        return {"verdict": "eigenstate", "n": verdict.n, "qset": X.canon(), "qcard": counting.qcard(X).n}
    if isinstance(verdict, fock.IgnoranceMixture):
        family = fock.to_qset(verdict, u, "q")
        return {
            "verdict": "ignorance-mixture",
            "distribution": {str(n): p for n, p in sorted(verdict.distribution.items())},
            "family": [{"p": p, "qset": X.canon(), "qcard": counting.qcard(X).n} for p, X in family],
        }
    return {"verdict": "undefined", "off_diagonal_norm": verdict.off_diagonal_norm, "representable": False}


def _verdict_text(rec: dict) -> str:
    if rec["verdict"] == "eigenstate":
        return f"eigenstate n={rec['n']}; quasiset {rec['qset']} with qcard {rec['qcard']}"
    if rec["verdict"] == "ignorance-mixture":
        parts = ", ".join(f"{f['p']:.6g}: {f['qset']}" for f in rec["family"])
        return f"ignorance mixture; weighted family {{{parts}}}"
    return (f"undefined particle number (off-diagonal norm {rec['off_diagonal_norm']:.6g}); "
            "no quasiset representation")


def _cmd_fock(args) -> int:
    if args.ionize:
        u = core.make_universe(sorted(_parse_profile(args.ionize).items()))
        X = core.make_qset(u, _parse_profile(args.ionize))
        chain, log = fock.ionization_experiment(X, args.seed)
        rec = {"chain": [m.canon() for m in chain.members], "extractions": log, "steps": len(log),
               "qcard": counting.qcard(X).n}
        print(json.dumps(rec, ensure_ascii=False) if args.json
              else f"{chain.canon()}\nextracted {', '.join(log) or 'nothing'}; finished in {len(log)} steps")
        return 0
    if isinstance(args.mixture, str):
        rho = fock.mixture(_parse_probs(args.mixture), args.dim)
    elif args.amps:
        amps = _parse_amps(args.amps)
        if args.mixture:
            state = fock.make_state(amps, args.dim)
            rho = fock.mixture([(n, abs(a) ** 2) for n, a in enumerate(state.amplitudes) if a], args.dim)
        else:
            rho = fock.density_of(fock.make_state(amps, args.dim))
    else:
        print("fock: one of --amps, --mixture LIST or --ionize is required", file=sys.stderr)
        return 2
    rec = _verdict_record(fock.number_verdict(rho, args.eps), args.dim)
    print(json.dumps(rec, ensure_ascii=False, sort_keys=True) if args.json else _verdict_text(rec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsetk", description="Derived quasicardinality toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("repl", help="interactive session").add_argument("--seed", type=int, default=0)

    run = sub.add_parser("run", help="run a script")
    run.add_argument("file")
    run.add_argument("--json", action="store_true")
    run.add_argument("--seed", type=int, default=0)

    chk = sub.add_parser("check", help="exhaustively check axioms and theorems")
    chk.add_argument("--theorem", action="append", choices=checker.ALL_IDS)
    chk.add_argument("--max-kinds", type=int, default=checker.DESK_BOUNDS.max_kinds)
    chk.add_argument("--max-atoms", type=int, default=checker.DESK_BOUNDS.max_total_matoms)
    chk.add_argument("--max-classical", type=int, default=checker.DESK_BOUNDS.max_classical)
    chk.add_argument("--max-nesting", type=int, default=checker.DESK_BOUNDS.max_nesting)
    chk.add_argument("--pow-cap", type=int, default=checker.DESK_BOUNDS.powerset_card_cap)
    chk.add_argument("--no-symmetry", action="store_true")
    chk.add_argument("--jobs", type=int, default=1)
    chk.add_argument("--json", action="store_true")

    fk = sub.add_parser("fock", help="classify a Fock state by particle number")
    fk.add_argument("--amps", help='amplitudes "n:re[,im];..."')
    fk.add_argument("--mixture", nargs="?", const=True, default=None,
                    help='probabilities "n:p;...", or bare flag to mix the --amps weights')
    fk.add_argument("--ionize", help='pure quasiset such as "e*2" or "e*2,f*1"')
    fk.add_argument("--seed", type=int, default=0)
    fk.add_argument("--dim", type=int, default=fock.DEFAULT_DIM)
    fk.add_argument("--eps", type=float, default=fock.EPS)
    fk.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "repl":
            return repl(seed=args.seed)
        if args.command == "run":
            return run_script(args.file, as_json=args.json, seed=args.seed)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_fock(args)
    except (QsetError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
