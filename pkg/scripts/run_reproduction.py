#!/usr/bin/env python3
"""Run the full acceptance suite and print one line per criterion.

Equivalent to `bforge reproduce`; exits nonzero if any criterion fails.
"""

import sys

from bforge.reproduce import run_criteria


def main() -> int:
    results = run_criteria()
    for r in results:
        print(r.line())
        for d in r.details:
            print("    " + d)
    ok = all(r.ok for r in results)
    print("ALL PASS" if ok else "FAILURES PRESENT")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
