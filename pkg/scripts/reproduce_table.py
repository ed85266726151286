"""Rebuild the lower-segment table and diff it against the transcription."""

import argparse
import sys
import time

from nicesec.table import build_segment_table, parse_tsv
from nicesec.verify import table_fixture


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-height", type=int, default=6)
    ap.add_argument("--no-criteria", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    table = build_segment_table(args.max_height, use_criteria=not args.no_criteria)
    dt = time.perf_counter() - t0
    got = parse_tsv(table.to_tsv())
    want = {c: v for c, v in parse_tsv(table_fixture()).items() if len(c) <= args.max_height}
    diff = [c for c in want if got.get(c) != want[c]]
    for row in table:
        mark = "" if row.code not in diff else "   <-- differs"
        print(f"{row.code:>7}  {'y' if row.flag else 'n'}  {row.how}{mark}")
    print(f"{len(got)} rows in {dt:.2f}s, {len(diff)} differ from the transcription")
    sys.exit(1 if diff else 0)


if __name__ == "__main__":
    main()
