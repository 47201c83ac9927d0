"""Recognizing integrated epr-relations and rebuilding source pairs.

A relation q is recognized as an integration result when its event variables
split into two sides such that every row formula lives wholly on one side,
every constraint bridges the two sides, and every constraint matches exactly
one row syntactically.  Variable groups touched by no constraint are free:
either side works, and every choice yields the same distribution.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NotIntegrated, ValidationError
from .logic import Formula, iter_vars
from .prdb import EprRelation, PrRelation, PrTuple
from .unionfind import UnionFind

VarSet = tuple[str, ...]


@dataclass(frozen=True)
class PartitionResult:
    """Outcome of the variable-grouping and 2-coloring pass.

    v1/w1 are the side labels forced by constraints; free_groups are variable
    groups no constraint touches.  On failure only ``failure`` and
    ``condition3_ok`` are meaningful.
    """

    v1: VarSet
    w1: VarSet
    free_groups: tuple[VarSet, ...]
    condition3_ok: bool
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None and self.condition3_ok


@dataclass(frozen=True)
class PrPair:
    """Two pr-relations over disjoint variable sets."""

    r: PrRelation
    s: PrRelation

    @classmethod
    def of(cls, r: PrRelation, s: PrRelation) -> "PrPair":
        shared = set(r.variables()) & set(s.variables())
        if shared:
            raise ValidationError(
                "pair sides share event variables: " + ", ".join(sorted(shared))
            )
        return cls(r, s)


def _formulas_of(q: EprRelation):
    """Row formulas, then constraint sides, in relation order."""
    for row in q.rows:
        yield row.event
    for lhs, rhs in q.constraints:
        yield lhs
        yield rhs


def _variable_groups(q: EprRelation, stats: dict | None = None) -> list[VarSet]:
    """Groups of variables co-occurring in some formula, ordered by first occurrence."""
    first_seen: dict[str, int] = {}
    uf = UnionFind()
    for f in _formulas_of(q):
        anchor = None
        for name in iter_vars(f):
            first_seen.setdefault(name, len(first_seen))
            if anchor is None:
                anchor = name
                uf.add(name)
            else:
                uf.union(anchor, name)
    groups = sorted(
        (tuple(members) for members in uf.groups().values()),
        key=lambda g: min(first_seen[name] for name in g),
    )
    if stats is not None:
        stats["ops"] = stats.get("ops", 0) + uf.ops + len(first_seen)
    return groups


def _rows_by_event(q: EprRelation) -> dict[Formula, list[PrTuple]]:
    index: dict[Formula, list[PrTuple]] = {}
    for row in q.rows:
        index.setdefault(row.event, []).append(row)
    return index


def _condition3(q: EprRelation, stats: dict | None = None) -> bool:
    """Each constraint must match exactly one row's formula structurally."""
    index = _rows_by_event(q)
    if stats is not None:
        stats["ops"] = stats.get("ops", 0) + len(q.rows) + len(q.constraints)
    for lhs, rhs in q.constraints:
        matches = len(index.get(lhs, ()))
        if rhs != lhs:
            matches += len(index.get(rhs, ()))
        if matches != 1:
            return False
    return True


def partition(q: EprRelation, stats: dict | None = None) -> PartitionResult:
    """Group co-occurring variables and 2-color the groups across constraints.

    Groups linked by a constraint must take opposite side labels; a group
    forced onto both sides is a failure.  Groups no constraint touches are
    reported as free.  ``stats`` (optional) accumulates an operation count
    under key "ops" for complexity assertions.
    """
    groups = _variable_groups(q, stats)
    index = {name: k for k, group in enumerate(groups) for name in group}
    adjacency: dict[int, set[int]] = {k: set() for k in range(len(groups))}
    condition3_ok = _condition3(q, stats)
    for lhs, rhs in q.constraints:
        if stats is not None:
            stats["ops"] = stats.get("ops", 0) + 1
        left_vars = list(iter_vars(lhs))
        right_vars = list(iter_vars(rhs))
        if not left_vars or not right_vars:
            continue
        a, b = index[left_vars[0]], index[right_vars[0]]
        if a == b:
            return PartitionResult(
                (), (), (), condition3_ok,
                failure="constraint links variable group "
                f"{{{', '.join(groups[a])}}} to itself",
            )
        adjacency[a].add(b)
        adjacency[b].add(a)
    labels: dict[int, str] = {}
    for seed in range(len(groups)):
        if seed in labels or not adjacency[seed]:
            continue
        labels[seed] = "V"
        queue = deque([seed])
        while queue:
            node = queue.popleft()
            want = "W" if labels[node] == "V" else "V"
            for nxt in sorted(adjacency[node]):
                if stats is not None:
                    stats["ops"] = stats.get("ops", 0) + 1
                if nxt not in labels:
                    labels[nxt] = want
                    queue.append(nxt)
                elif labels[nxt] != want:
                    return PartitionResult(
                        (), (), (), condition3_ok,
                        failure="variable group "
                        f"{{{', '.join(groups[nxt])}}} would be labeled both sides",
                    )
    v1 = sorted(n for k, g in enumerate(groups) if labels.get(k) == "V" for n in g)
    w1 = sorted(n for k, g in enumerate(groups) if labels.get(k) == "W" for n in g)
    free = tuple(g for k, g in enumerate(groups) if k not in labels)
    return PartitionResult(tuple(v1), tuple(w1), free, condition3_ok)


def check_integrated(q: EprRelation, v, w) -> bool:
    """Test the three recognition conditions for the given side split."""
    v, w = frozenset(v), frozenset(w)
    names = set(q.variables())
    if (v & w) or (v | w) != names:
        raise ValidationError("v and w must partition the variables of the relation")
    for row in q.rows:
        used = set(iter_vars(row.event))
        if not (used <= v or used <= w):
            return False
    for lhs, rhs in q.constraints:
        lv = set(iter_vars(lhs))
        rv = set(iter_vars(rhs))
        if not ((lv <= v and rv <= w) or (lv <= w and rv <= v)):
            return False
    return _condition3(q)


def _constraint_partner(q: EprRelation, event: Formula) -> Formula | None:
    """The opposite side of the first constraint one of whose sides equals event."""
    for lhs, rhs in q.constraints:
        if lhs == event:
            return rhs
        if rhs == event:
            return lhs
    return None


def build_pair(q: EprRelation, v, w, stats: dict | None = None) -> PrPair:
    """Rebuild a source pair (r, s) with integrate_pr(r, s) equal to q.

    Rows route to r or s by which side owns their variables; then each
    constraint f = g adds the missing side's row: if t@f sits in r, t@g is
    added to s, and symmetrically.  Raises NotIntegrated when the
    recognition conditions fail.
    """
    v, w = frozenset(v), frozenset(w)
    if not check_integrated(q, v, w):
        raise NotIntegrated("the relation is not recognized as an integration result")
    sides: dict = {}
    rows = {"r": [], "s": []}
    for row in q.rows:
        if stats is not None:
            stats["ops"] = stats.get("ops", 0) + 1
        used = set(iter_vars(row.event))
        if used:
            side = "r" if used <= v else "s"
        else:
            partner = _constraint_partner(q, row.event)
            partner_vars = set() if partner is None else set(iter_vars(partner))
            if partner_vars and partner_vars <= v:
                side = "s"
            else:
                side = "r"
        sides[row.tuple] = side
        rows[side].append(row)
    index = _rows_by_event(q)
    for lhs, rhs in q.constraints:
        if stats is not None:
            stats["ops"] = stats.get("ops", 0) + 1
        match = index.get(lhs, []) + (index.get(rhs, []) if rhs != lhs else [])
        row = match[0]
        other = rhs if row.event == lhs else lhs
        target = "s" if sides[row.tuple] == "r" else "r"
        if any(existing.tuple == row.tuple for existing in rows[target]):
            raise NotIntegrated(
                "two constraints resolve to the same tuple "
                f"{row.tuple}; no source pair can produce that"
            )
        rows[target].append(PrTuple(row.tuple, other))
    r_rows = tuple(sorted(rows["r"], key=lambda row: row.tuple))
    s_rows = tuple(sorted(rows["s"], key=lambda row: row.tuple))
    if q.var_probs is None:
        r_probs = s_probs = None
    else:
        r_probs = {n: p for n, p in q.var_probs.items() if n in v}
        s_probs = {n: p for n, p in q.var_probs.items() if n in w}
    return PrPair.of(PrRelation.of(r_rows, r_probs), PrRelation.of(s_rows, s_probs))


def enumerate_pairs(q: EprRelation, limit: int | None = None) -> list[PrPair]:
    """All pairs reachable by assigning each free group to either side.

    Pair k sends free group i to the V side iff bit i of k is set, so pair 0
    (every free group on the W side) is the deterministic default.  Raises
    NotIntegrated when recognition fails.
    """
    part = partition(q)
    if part.failure is not None:
        raise NotIntegrated(part.failure)
    if not part.condition3_ok:
        raise NotIntegrated("some constraint does not match exactly one row")
    total = 1 << len(part.free_groups)
    count = total if limit is None else min(limit, total)
    pairs = []
    for k in range(count):
        v = set(part.v1)
        w = set(part.w1)
        for i, group in enumerate(part.free_groups):
            (v if k >> i & 1 else w).update(group)
        pairs.append(build_pair(q, v, w))
    return pairs
