"""The table of lower segments: which codes have a 4-crown-stack retract.

Codes are processed by increasing height so every lookup made by the split
search refers to an earlier row.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .maps import Budget, _budget
from .sections import codes_of_height, section
from .splits import SplitCertificate, search_retractive_split, tbase_levels
from .stacks import oracle_4crown_stack_retract

MAX_TABLE_HEIGHT = 6
# rows settled directly rather than by the split recursion carry no level list
LISTED_FROM_HEIGHT = 4


@dataclass
class Row:
    code: str
    flag: bool
    tbase: list[int] | None = None
    certificate: SplitCertificate | None = None
    how: str = ""


@dataclass
class SegmentTable:
    rows: dict[str, Row] = field(default_factory=dict)

    def flag(self, code: str) -> bool:
        return self.rows[code].flag

    def __contains__(self, code):
        return code in self.rows

    def __iter__(self):
        return iter(self.rows.values())

    def __len__(self):
        return len(self.rows)

    def to_tsv(self) -> str:
        lines = ["code\ttbase_levels\tflag"]
        for row in self.rows.values():
            levels = ""
            if row.tbase is not None and len(row.code) >= LISTED_FROM_HEIGHT:
                levels = ",".join(map(str, row.tbase))
            lines.append(f"{row.code}\t{levels}\t{'y' if row.flag else 'n'}")
        return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> dict[str, tuple[str, str]]:
    out = {}
    for line in text.strip().splitlines()[1:]:
        code, levels, flag = line.split("\t")
        out[code] = (levels, flag)
    return out


def build_segment_table(
    max_height: int = MAX_TABLE_HEIGHT,
    use_criteria: bool = True,
    budget: Budget | None = None,
    limit: int = 10,
) -> SegmentTable:
    """Flag every code starting with 1 of height up to ``max_height``.

    * ``1`` (the 6-crown): direct search.
    * final bit 0: the lower segment ``c + "0"`` of height h has a stack
      retract iff ``P(0 -> h-2)`` retracts onto a 2-antichain or a stack.
    * final bit 1: retractive split search against the earlier rows.
    """
    if not 1 <= max_height <= limit:
        raise ValueError(f"max_height must lie in [1, {limit}]")
    budget = _budget(budget)
    table = SegmentTable()
    for h in range(1, max_height + 1):
        for code in codes_of_height(h, "LS"):
            if code == "1":
                found = oracle_4crown_stack_retract(section(code), budget)
                table.rows[code] = Row(code, found is not None, how="direct")
            elif code.endswith("0"):
                head = code[:-2]
                flag = head == "" or table.flag(head)
                table.rows[code] = Row(code, flag, how=f"reduced to {head or 'antichain'}")
            else:
                cert = search_retractive_split(section(code), code, table.flag, use_criteria, budget)
                table.rows[code] = Row(
                    code, cert is not None, tbase_levels(code, table.flag), cert, how="split"
                )
    return table


def decide_stack_retract(code: str, budget: Budget | None = None, memo: dict | None = None) -> bool:
    """Method route for any segment code: a 3C end pair reduces to the
    segment two levels shorter, height one is searched directly, and N_2
    codes go through the split search."""
    budget = _budget(budget)
    memo = {} if memo is None else memo
    if code in memo:
        return memo[code]

    def antichain_or_stack(c):
        # an all-3C segment is three disjoint chains, hence onto a 2-antichain
        return set(c) <= {"0"} or decide_stack_retract(c, budget, memo)

    if len(code) == 1:
        out = oracle_4crown_stack_retract(section(code), budget) is not None
    elif code[-1] == "0":
        out = antichain_or_stack(code[:-2])
    elif code[0] == "0":
        out = antichain_or_stack(code[2:])
    else:
        flags = lambda c: decide_stack_retract(c, budget, memo)
        out = search_retractive_split(section(code), code, flags, True, budget) is not None
    memo[code] = out
    return out
