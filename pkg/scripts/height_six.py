"""Height-six survey: stack retracts by both routes, and tower retracts
with a 32 or 23 level pair."""

import time

from nicesec.sections import codes_of_height, section
from nicesec.splits import search_retractive_split
from nicesec.stacks import oracle_4crown_stack_retract
from nicesec.table import build_segment_table
from nicesec.towers import check_theo32

flags = build_segment_table(5).flag
print("code    split  oracle  tower   heights   s(split) s(oracle)")
for code in codes_of_height(6, "N2"):
    P = section(code)
    t0 = time.perf_counter()
    split = search_retractive_split(P, code, flags) is not None
    t1 = time.perf_counter()
    oracle = oracle_4crown_stack_retract(P) is not None
    t2 = time.perf_counter()
    d = check_theo32(P, code)
    tower = "-" if d is None else ("23" if d.dual else "32")
    hs = "" if d is None else ",".join(map(str, d.heights))
    print(f"{code}  {'y' if split else 'n':>5}  {'y' if oracle else 'n':>6}  {tower:>5}   {hs:<8}  {t1 - t0:8.3f} {t2 - t1:8.3f}")
