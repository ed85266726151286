"""Retractive up- and down-splits of posets in N_2.

An up-split ``(k, U, s, t)`` pairs a retraction ``s`` of ``P(0 -> k)`` minus
``U`` with a retraction ``t`` of ``P(k+1 -> h)``, both onto 2-antichains or
4-crown stacks.  Under the two coupling conditions checked by
:func:`validate_split` the pieces glue to a retraction of ``P`` onto the
4-crown stack ``S + T``, and every such retract arises this way, so the
search below decides the existence of 4-crown-stack retracts.

The search always works with down-splits; an up-split of ``P`` is a
down-split of the dual poset on the same points with ``k`` replaced by
``h - k``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Callable, Mapping

from .maps import Budget, RetractionMap, _budget, is_retraction
from .poset import Poset, bits, is_4crown_stack, mask_of
from .stacks import stack_images, stack_retraction


class SplitKind(enum.Enum):
    UP = "up"
    DOWN = "down"


class ConditionError(ValueError):
    pass


@dataclass(frozen=True)
class SplitCertificate:
    kind: SplitKind
    k: int
    deleted: frozenset[int]
    s: Mapping[int, int]
    t: Mapping[int, int]

    @property
    def S(self) -> frozenset[int]:
        return frozenset(x for x, y in self.s.items() if x == y)

    @property
    def T(self) -> frozenset[int]:
        return frozenset(x for x, y in self.t.items() if x == y)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "k": self.k,
            "deleted": sorted(self.deleted),
            "s": {str(x): self.s[x] for x in sorted(self.s)},
            "t": {str(x): self.t[x] for x in sorted(self.t)},
            "S": sorted(self.S),
            "T": sorted(self.T),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> SplitCertificate:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            SplitKind(data["kind"]),
            int(data["k"]),
            frozenset(data["deleted"]),
            {int(x): y for x, y in data["s"].items()},
            {int(x): y for x, y in data["t"].items()},
        )

    def dualized(self, h: int) -> SplitCertificate:
        """The same certificate read in the dual poset."""
        kind = SplitKind.DOWN if self.kind is SplitKind.UP else SplitKind.UP
        return replace(self, kind=kind, k=h - self.k)


# --- validation ---------------------------------------------------------------------


def _levels_of(P: Poset, mask: int) -> list[int]:
    """Level masks of the induced poset on ``mask``, as masks over ``P``."""
    Q, old = P.induced(bits(mask))
    return [mask_of(old[i] for i in bits(l)) for l in Q.ls.levels]


def _stack_ends(P: Poset, image: frozenset[int]) -> tuple[int, int] | None:
    m = mask_of(image)
    if not is_4crown_stack(P, m):
        return None
    lv = _levels_of(P, m)
    return lv[0], lv[-1]


def _check_down(P: Poset, cert: SplitCertificate) -> bool:
    ls = P.ls
    h, k = ls.height, cert.k
    if not 1 <= k <= h:
        return False
    s_base = ls.span(k, h)
    t_base = ls.span(0, k - 1)
    dmask = mask_of(cert.deleted)
    if dmask & ~s_base:
        return False
    if set(cert.s) != set(bits(s_base & ~dmask)) or set(cert.t) != set(bits(t_base)):
        return False
    if not is_retraction(P, cert.s, s_base & ~dmask) or not is_retraction(P, cert.t, t_base):
        return False
    s_ends, t_ends = _stack_ends(P, cert.S), _stack_ends(P, cert.T)
    if s_ends is None or t_ends is None:
        return False
    s_bottom, t_top = s_ends[0], t_ends[1]
    if not P.all_below(t_top, s_bottom):
        return False
    for d in cert.deleted:
        if not any(
            all(not P.lt(p, d) for p, img in cert.t.items() if img == v) for v in bits(t_top)
        ):
            return False
    return True


def validate_split(P: Poset, cert: SplitCertificate) -> bool:
    """Pure re-check of a certificate: shapes, retractions, both conditions."""
    if cert.kind is SplitKind.DOWN:
        return _check_down(P, cert)
    return _check_down(P.dual(), cert.dualized(P.ls.height))


def assemble_split_retraction(P: Poset, cert: SplitCertificate) -> RetractionMap:
    """Glue ``s`` and ``t``; each deleted point goes to the point of the
    adjacent end level of ``T`` other than one whose fibre avoids it."""
    if not validate_split(P, cert):
        raise ConditionError("certificate does not satisfy the split conditions")
    # top of T in the down-split reading (bottom of T for an up-split)
    Q = P if cert.kind is SplitKind.DOWN else P.dual()
    t_top = _stack_ends(Q, cert.T)[1]
    out = dict(cert.s)
    out.update(cert.t)
    for d in sorted(cert.deleted):
        avoid = [
            v for v in bits(t_top) if all(not Q.lt(p, d) for p, img in cert.t.items() if img == v)
        ]
        if not avoid:
            raise ConditionError(f"no target level point avoids {d}")
        (other,) = [v for v in bits(t_top) if v != avoid[0]]
        out[d] = other
    r = RetractionMap(P, tuple(out[x] for x in P.points))
    assert is_retraction(P, r.map), "assembled map is not a retraction"
    return r


# --- pruning --------------------------------------------------------------------------


@dataclass(frozen=True)
class PruneVerdict:
    reject: bool
    criterion: int | str | None = None

    def __bool__(self):
        return not self.reject


PASS = PruneVerdict(False)

Flags = Callable[[str], bool]


def _has_stack_or_antichain_retract(code: str, flags: Flags) -> bool:
    # the empty code is a single 3-antichain, which retracts onto a 2-antichain
    return code == "" or flags(code)


def apply_criteria(code: str, kind: SplitKind, k: int, deleted_size: int | None, flags: Flags) -> PruneVerdict:
    """Sound rejections of an s-base candidate of a poset in N_2 of height >= 3.

    ``flags(c)`` answers whether the lower segment with code ``c`` has a
    4-crown-stack retract.
    """
    h = len(code)
    if kind is SplitKind.UP:
        return apply_criteria(code[::-1], SplitKind.DOWN, h - k, deleted_size, flags)
    if h < 3:
        return PASS
    if k == h:
        # t restricted to P(0 -> h-3) must already retract onto a stack
        if not _has_stack_or_antichain_retract(code[: h - 3], flags):
            return PruneVerdict(True, 1)
    if k == h - 1:
        if deleted_size is not None and deleted_size < 2:
            return PruneVerdict(True, 2)
        if code[h - 2] == "1":
            return PruneVerdict(True, 3)
    if k == 1:
        if deleted_size is not None and deleted_size > 1:
            return PruneVerdict(True, 4)
        if code[1] == "1" and not _has_stack_or_antichain_retract(code[3:][::-1], flags):
            return PruneVerdict(True, 5)
    # a segment 011 minus a single bottom point has no stack retract
    if code[k:] == "011" and deleted_size is not None and deleted_size < 2:
        return PruneVerdict(True, "011")
    return PASS


# --- search -----------------------------------------------------------------------------


def tbase_levels(code: str, flags: Flags) -> list[int]:
    """Levels ``k`` for which the lower segment ``P(0 -> k)`` retracts onto a
    2-antichain or 4-crown stack (``k = 0`` always)."""
    return [0] + [k for k in range(1, len(code)) if flags(code[:k])]


def _down_search(
    P: Poset, code: str, flags: Flags, use_criteria: bool, budget: Budget, stats: dict | None
) -> SplitCertificate | None:
    ls = P.ls
    h = ls.height
    tb = set(tbase_levels(code, flags))
    for k in range(1, h + 1):
        if k - 1 not in tb:
            continue
        if use_criteria and apply_criteria(code, SplitKind.DOWN, k, None, flags).reject:
            continue
        t_stacks = list(stack_images(P, ls.span(0, k - 1)))
        for size in range(0, 4):
            if k == h and size > 1:
                break
            if use_criteria and apply_criteria(code, SplitKind.DOWN, k, size, flags).reject:
                if stats is not None:
                    stats["pruned"] = stats.get("pruned", 0) + 1
                continue
            cert = candidate_split(P, k, size, budget, t_stacks)
            if cert is not None:
                return cert
    return None


def candidate_split(
    P: Poset, k: int, size: int, budget: Budget | None = None, t_stacks=None
) -> SplitCertificate | None:
    """First down-split at level ``k`` deleting ``size`` points of ``P(k)``,
    searched without any pruning."""
    budget = _budget(budget)
    ls = P.ls
    s_base = ls.span(k, ls.height)
    t_base = ls.span(0, k - 1)
    if t_stacks is None:
        t_stacks = list(stack_images(P, t_base))
    for D in combinations(ls.level_points(k), size):
        cert = _try_split(P, k, mask_of(D), s_base, t_base, t_stacks, budget)
        if cert is not None:
            return cert
    return None


def _try_split(P, k, dmask, s_base, t_base, t_stacks, budget):
    # s-side: feasible bottoms S(0), first witness for each
    s_dom = s_base & ~dmask
    feasible: dict[int, dict[int, int]] = {}
    for levels in stack_images(P, s_dom):
        if levels[0] in feasible:
            continue
        m = stack_retraction(P, s_dom, levels, budget=budget)
        if m is not None:
            feasible[levels[0]] = m
    if not feasible:
        return None
    deleted = bits(dmask)
    for levels in t_stacks:
        top = levels[-1]
        s_bottoms = [b for b in feasible if P.all_below(top, b)]
        if not s_bottoms:
            continue
        top_pts = bits(top)
        for choice in product(top_pts, repeat=len(deleted)):
            forbid: dict[int, int] = {}
            ok = True
            for d, v in zip(deleted, choice):
                if P.lt(v, d):
                    ok = False
                    break
                for p in bits(P.down[d] & t_base):
                    forbid[p] = forbid.get(p, 0) | 1 << v
            if not ok:
                continue
            m = stack_retraction(P, t_base, levels, forbid=forbid, budget=budget)
            if m is not None:
                return SplitCertificate(SplitKind.DOWN, k, frozenset(deleted), feasible[s_bottoms[0]], m)
    return None


def search_retractive_split(
    P: Poset,
    code: str,
    flags: Flags,
    use_criteria: bool = True,
    budget: Budget | None = None,
    stats: dict | None = None,
) -> SplitCertificate | None:
    """A retractive split witnessing a 4-crown-stack retract of the N_2 poset
    ``P`` with code ``code``, or None when there is none.

    Down-splits are tried first, then up-splits via the dual.
    """
    budget = _budget(budget)
    if not (len(code) >= 2 and code[0] == code[-1] == "1"):
        raise ValueError(f"{code} is not an N_2 code")
    cert = _down_search(P, code, flags, use_criteria, budget, stats)
    if cert is None:
        dual = P.dual()
        found = _down_search(dual, code[::-1], flags, use_criteria, budget, stats)
        if found is not None:
            cert = found.dualized(P.ls.height)
    if cert is not None:
        assert validate_split(P, cert), "search produced an invalid certificate"
    return cert
