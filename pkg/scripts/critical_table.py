"""Critical accuracy for a grid of (B, l, u), computed two ways.

    python3 scripts/critical_table.py --B 5 10 --max-day 12 > critical.csv
"""

import argparse
import csv
import sys

from drcr.analysis import critical_accuracy, critical_accuracy_bisection


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--B", type=int, nargs="+", default=[5, 10])
    ap.add_argument("--max-day", type=int, default=12)
    ap.add_argument("--no-bisection", action="store_true")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["B", "l", "u", "critical_lp", "critical_bisection", "abs_diff"])
    for B in args.B:
        for lo in range(1, args.max_day + 1):
            for hi in range(lo, args.max_day + 1):
                a = critical_accuracy(B, lo, hi)
                if args.no_bisection:
                    w.writerow([B, lo, hi, f"{a:.9f}", "", ""])
                    continue
                b = critical_accuracy_bisection(B, lo, hi)
                w.writerow([B, lo, hi, f"{a:.9f}", f"{b:.9f}", f"{abs(a - b):.1e}"])


if __name__ == "__main__":
    main()
