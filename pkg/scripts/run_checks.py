#!/usr/bin/env python3
"""Run a verification manifest and print the pass/fail table.

Usage:
  python3 scripts/run_checks.py                  # built-in full manifest
  python3 scripts/run_checks.py --manifest m.json
  python3 scripts/run_checks.py --dump-default   # print the default manifest
"""

import argparse
import json
import sys

from qspin.matrixlab import default_manifest, run_manifest


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--dump-default", action="store_true")
    args = parser.parse_args()
    if args.dump_default:
        print(json.dumps(default_manifest(), indent=2))
        return 0
    if args.manifest:
        with open(args.manifest) as fh:
            doc = json.load(fh)
    else:
        doc = default_manifest()
    report = run_manifest(doc, threads=args.threads)
    for r in sorted(
        report["results"],
        key=lambda r: (r["name"], json.dumps(r["params"], sort_keys=True)),
    ):
        status = "PASS" if r["passed"] else "FAIL"
        extra = f"  ({r['error']})" if r.get("error") else ""
        print(f"{status}  {r['name']}  {json.dumps(r['params'], sort_keys=True)}{extra}")
    print("all passed" if report["all_passed"] else "FAILURES PRESENT")
    return 0 if report["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
