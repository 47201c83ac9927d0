"""Possible-worlds model: uncertain databases and their integration.

An uncertain database is a set of tuples together with a nonempty set of
possible worlds (subsets of the tuple set), optionally weighted with exact
rational probabilities.  Two worlds from different sources are compatible
when they agree on every tuple both sources know about; integration keeps
exactly the unions of compatible world pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyIntegration, ProbConstraintViolation, ValidationError
from .unionfind import UnionFind

Tuple = tuple[str, ...]
World = frozenset[Tuple]


def world_key(world: World) -> tuple[Tuple, ...]:
    """Canonical sort key: the world's tuples in lexicographic order."""
    return tuple(sorted(world))


def format_tuple(t: Tuple) -> str:
    return "(" + ",".join(t) + ")"


def format_world(world: World) -> str:
    return "{" + ", ".join(format_tuple(t) for t in world_key(world)) + "}"


@dataclass(frozen=True)
class UncertainDB:
    """A tuple set, its possible worlds, and optional world probabilities."""

    tuple_set: frozenset[Tuple]
    worlds: tuple[World, ...]
    probs: tuple[Fraction, ...] | None = None

    @classmethod
    def of(cls, tuple_set, worlds, probs=None) -> "UncertainDB":
        """Build from loose iterables, coercing probabilities to exact rationals."""
        return cls(
            frozenset(tuple(t) for t in tuple_set),
            tuple(frozenset(tuple(t) for t in w) for w in worlds),
            None if probs is None else tuple(Fraction(p) for p in probs),
        )

    def prob_of(self, world: World) -> Fraction:
        total = Fraction(0)
        for w, p in zip(self.worlds, self.probs):
            if w == world:
                total += p
        return total


def validate_udb(u: UncertainDB) -> list[str]:
    """Check every invariant and report violations as strings, never raising."""
    return _structural_violations(u) + _prob_violations(u)


def _structural_violations(u: UncertainDB) -> list[str]:
    report = []
    for t in u.tuple_set:
        if len(t) == 0:
            report.append("tuple set contains an empty tuple")
            break
    if len(u.worlds) == 0:
        report.append("database has no possible worlds")
    for i, w in enumerate(u.worlds):
        extra = w - u.tuple_set
        if extra:
            report.append(
                f"world {i} uses tuples outside the tuple set: "
                + ", ".join(format_tuple(t) for t in sorted(extra))
            )
    seen = {}
    for i, w in enumerate(u.worlds):
        if w in seen:
            report.append(f"worlds {seen[w]} and {i} are identical")
        else:
            seen[w] = i
    return report


def _prob_violations(u: UncertainDB) -> list[str]:
    if u.probs is None:
        return []
    report = []
    if len(u.probs) != len(u.worlds):
        report.append(
            f"{len(u.probs)} probabilities given for {len(u.worlds)} worlds"
        )
    for i, p in enumerate(u.probs):
        if not 0 < p <= 1:
            report.append(f"probability of world {i} is {p}, outside (0, 1]")
    total = sum(u.probs, Fraction(0))
    if u.probs and total != 1:
        report.append(f"probabilities sum to {total} != 1")
    return report


def _require_valid(u: UncertainDB, role: str, with_probs: bool) -> None:
    report = _structural_violations(u)
    if with_probs:
        if u.probs is None:
            report = report + [f"{role} carries no probabilities"]
        else:
            report = report + _prob_violations(u)
    if report:
        raise ValidationError([f"{role}: {line}" for line in report])


def compatible(d_i: World, d_j: World, t1, t2) -> bool:
    """True when the worlds agree on membership of every tuple in both tuple sets."""
    for t in frozenset(t1) & frozenset(t2):
        if (t in d_i) != (t in d_j):
            return False
    return True


def integrate_pw(s1: UncertainDB, s2: UncertainDB) -> UncertainDB:
    """Integrate two sources world-by-world, ignoring probabilities.

    The result has tuple set T1 | T2 and one world per compatible pair,
    duplicate unions merged.  Raises EmptyIntegration if no pair of worlds
    is compatible.
    """
    _require_valid(s1, "first source", with_probs=False)
    _require_valid(s2, "second source", with_probs=False)
    common = s1.tuple_set & s2.tuple_set
    merged: dict = {}
    for d_i in s1.worlds:
        for d_j in s2.worlds:
            if compatible(d_i, d_j, common, common):
                union = d_i | d_j
                merged.setdefault(world_key(union), union)
    if not merged:
        raise EmptyIntegration()
    worlds = tuple(merged[k] for k in sorted(merged))
    return UncertainDB(s1.tuple_set | s2.tuple_set, worlds)


@dataclass(frozen=True)
class CompatibilityGraph:
    """Bipartite graph over the two sources' world indices.

    ``components`` lists each connected component as (left indices, right
    indices), both sorted; isolated worlds form their own components.
    """

    n_left: int
    n_right: int
    edges: frozenset[tuple[int, int]]
    components: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def is_complete_bipartite(self) -> bool:
        """Every component carries all |left| * |right| edges."""
        counts = [0] * len(self.components)
        index = {}
        for k, (left, right) in enumerate(self.components):
            for i in left:
                index[("L", i)] = k
        for i, j in self.edges:
            counts[index[("L", i)]] += 1
        return all(
            counts[k] == len(left) * len(right)
            for k, (left, right) in enumerate(self.components)
        )


def compatibility_graph(s1: UncertainDB, s2: UncertainDB) -> CompatibilityGraph:
    """Edges join compatible world pairs; components come from a union-find pass."""
    _require_valid(s1, "first source", with_probs=False)
    _require_valid(s2, "second source", with_probs=False)
    common = s1.tuple_set & s2.tuple_set
    edges = set()
    uf = UnionFind()
    for i in range(len(s1.worlds)):
        uf.add(("L", i))
    for j in range(len(s2.worlds)):
        uf.add(("R", j))
    for i, d_i in enumerate(s1.worlds):
        for j, d_j in enumerate(s2.worlds):
            if compatible(d_i, d_j, common, common):
                edges.add((i, j))
                uf.union(("L", i), ("R", j))
    groups = {}
    for side, idx in list(uf.parent):
        root = uf.find((side, idx))
        groups.setdefault(root, ([], []))[0 if side == "L" else 1].append(idx)
    components = sorted(
        (tuple(sorted(left)), tuple(sorted(right)))
        for left, right in groups.values()
    )
    return CompatibilityGraph(
        len(s1.worlds), len(s2.worlds), frozenset(edges), tuple(components)
    )


@dataclass(frozen=True)
class ComponentSummary:
    """Probability balance of one connected component."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    left_sum: Fraction
    right_sum: Fraction

    @property
    def balanced(self) -> bool:
        return self.left_sum == self.right_sum

    @property
    def constant(self) -> Fraction:
        """The shared component probability P; meaningful only when balanced."""
        return self.left_sum


def check_prob_constraints(
    s1: UncertainDB, s2: UncertainDB, graph: CompatibilityGraph
) -> list[tuple[ComponentSummary, str | None]]:
    """Per component, compare the two sides' probability mass.

    Integration requires the sums to agree exactly; a world with no
    compatible partner strands its mass and is reported too.
    """
    _require_valid(s1, "first source", with_probs=True)
    _require_valid(s2, "second source", with_probs=True)
    out = []
    for k, (left, right) in enumerate(graph.components):
        left_sum = sum((s1.probs[i] for i in left), Fraction(0))
        right_sum = sum((s2.probs[j] for j in right), Fraction(0))
        summary = ComponentSummary(left, right, left_sum, right_sum)
        if summary.balanced:
            reason = None
        elif not right:
            reason = (
                f"component {k}: left worlds {list(left)} carry mass {left_sum} "
                "but have no compatible partner"
            )
        elif not left:
            reason = (
                f"component {k}: right worlds {list(right)} carry mass {right_sum} "
                "but have no compatible partner"
            )
        else:
            reason = (
                f"component {k}: left worlds {list(left)} sum to {left_sum}, "
                f"right worlds {list(right)} sum to {right_sum}"
            )
        out.append((summary, reason))
    return out


def integrate_pw_prob(s1: UncertainDB, s2: UncertainDB) -> UncertainDB:
    """Integrate two probabilistic sources under partial independence.

    Each compatible pair contributes P(D_i) * P(D'_j) / P, where P is the
    probability constant of the pair's component; duplicate union worlds
    accumulate.  Raises ProbConstraintViolation when any component is
    unbalanced and EmptyIntegration when there are no compatible pairs.
    """
    graph = compatibility_graph(s1, s2)
    checks = check_prob_constraints(s1, s2, graph)
    failures = [(c, reason) for c, reason in checks if reason is not None]
    if failures:
        raise ProbConstraintViolation(failures)
    if not graph.edges:
        raise EmptyIntegration()
    constant = {}
    for summary, _ in checks:
        for i in summary.left:
            constant[i] = summary.constant
    merged: dict = {}
    for i, j in sorted(graph.edges):
        union = s1.worlds[i] | s2.worlds[j]
        key = world_key(union)
        p = s1.probs[i] * s2.probs[j] / constant[i]
        if key in merged:
            merged[key] = (union, merged[key][1] + p)
        else:
            merged[key] = (union, p)
    worlds = []
    probs = []
    for key in sorted(merged):
        world, p = merged[key]
        worlds.append(world)
        probs.append(p)
    assert sum(probs, Fraction(0)) == 1
    return UncertainDB(s1.tuple_set | s2.tuple_set, tuple(worlds), tuple(probs))
