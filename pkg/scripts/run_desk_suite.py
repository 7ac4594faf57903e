"""Run the exhaustive checker at desk bounds and write the JSON report."""

import argparse
import json
import sys

from qsetk.checker import DESK_BOUNDS, Bounds, run_suite


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--max-atoms", type=int, default=DESK_BOUNDS.max_total_matoms)
    args = p.parse_args(argv)

    bounds = Bounds(**{**DESK_BOUNDS.__dict__, "max_total_matoms": args.max_atoms})
    report = run_suite(bounds, symmetry=not args.no_symmetry, jobs=args.jobs)
    for v in report.verdicts:
        print(f"{v.theorem_id:<8} {'holds' if v.holds else 'FAILS':<6} "
              f"universes={v.universes_checked:<4} instances={v.instances_checked}", file=sys.stderr)
    print(f"elapsed {report.elapsed_ms / 1000:.1f}s", file=sys.stderr)
    text = json.dumps(report.to_dict(), indent=2, ensure_ascii=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0 if report.holds else 1


if __name__ == "__main__":
    sys.exit(main())
