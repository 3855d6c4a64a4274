#!/usr/bin/env python3
"""Generate a Fierz coefficient table as JSON.

Usage: python3 scripts/generate_fierz_table.py --max 4 --out fierz.json
Equivalent to `qspin fierz-table`.
"""

import argparse

from qspin.recoupling import FierzTable


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max", type=int, default=3)
    parser.add_argument("--out", default=None)
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()
    table = FierzTable.generate(args.max, args.max, threads=args.threads)
    text = table.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        print(text)


if __name__ == "__main__":
    main()
