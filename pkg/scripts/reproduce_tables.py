"""Recompute every reference table and print the rows.

Usage: python scripts/reproduce_tables.py [--json]
"""

import argparse
import sys

from essmin.report import TABLES, reproduce, rows_to_json, rows_to_text


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    args = parser.parse_args()
    ok = True
    for table_id in TABLES:
        rows = reproduce(table_id)
        ok &= all(r.passed for r in rows)
        sys.stdout.write(rows_to_json(table_id, rows) if args.json else rows_to_text(table_id, rows))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
