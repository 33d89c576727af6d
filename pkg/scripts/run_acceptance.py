#!/usr/bin/env python3
"""Run the acceptance checks and print one line per check.

    python3 scripts/run_acceptance.py [--quick]
"""

import argparse
import sys

from prodcoh.cli import selftest


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="skip the slow checks")
    args = ap.parse_args()
    return selftest(args.quick)


if __name__ == "__main__":
    sys.exit(main())
