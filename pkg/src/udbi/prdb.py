"""Probabilistic relations: tuples guarded by event formulas.

A pr-relation lists rows t@f where f is a propositional formula over
independent boolean event variables with known probabilities.  Every truth
assignment selects the set of tuples whose formulas hold, so a pr-relation
denotes an uncertain database.  An epr-relation adds event constraints
f = g that rule out assignments where the two sides disagree; constraints
are what integrating two sources produces for their common tuples.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ExpansionTooLarge,
    MissingVarProb,
    NoValidAssignment,
    ValidationError,
)
from .logic import (
    DEFAULT_VAR_CAP,
    Formula,
    Iff,
    Not,
    Variable,
    conjoin,
    disjoin,
    evaluate,
    is_valid_name,
    iter_vars,
    rename_vars,
    to_text,
)
from .pwdb import Tuple, UncertainDB, World, format_tuple, validate_udb, world_key

_NAME_FRAGMENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class PrTuple:
    """One row: a data tuple guarded by its event formula."""

    tuple: Tuple
    event: Formula

    def __str__(self) -> str:
        return f"{format_tuple(self.tuple)}@{to_text(self.event)}"


def _coerce_var_probs(var_probs) -> dict[str, Fraction] | None:
    if var_probs is None:
        return None
    out = {}
    bad = []
    for name, p in var_probs.items():
        if not is_valid_name(str(name)):
            bad.append(f"invalid variable name {name!r} in probabilities")
            continue
        p = Fraction(p)
        if not 0 < p < 1:
            bad.append(f"probability of variable {name} is {p}, outside (0, 1)")
        out[str(name)] = p
    if bad:
        raise ValidationError(bad)
    return out


def _check_rows(rows: tuple[PrTuple, ...]) -> None:
    seen = {}
    bad = []
    for i, row in enumerate(rows):
        if len(row.tuple) == 0:
            bad.append(f"row {i} has an empty tuple")
        if row.tuple in seen:
            bad.append(
                f"rows {seen[row.tuple]} and {i} share the tuple {format_tuple(row.tuple)}"
            )
        else:
            seen[row.tuple] = i
    if bad:
        raise ValidationError(bad)


@dataclass(frozen=True)
class PrRelation:
    """Rows plus the probability of each event variable being true."""

    rows: tuple[PrTuple, ...]
    var_probs: dict[str, Fraction] | None = None

    @classmethod
    def of(cls, rows, var_probs=None) -> "PrRelation":
        rows = tuple(
            row if isinstance(row, PrTuple) else PrTuple(tuple(row[0]), row[1])
            for row in rows
        )
        _check_rows(rows)
        var_probs = _coerce_var_probs(var_probs)
        rel = cls(rows, var_probs)
        if var_probs is not None:
            missing = set(rel.variables()) - set(var_probs)
            if missing:
                raise ValidationError(
                    "event variables without probabilities: " + ", ".join(sorted(missing))
                )
        return rel

    def variables(self) -> tuple[str, ...]:
        """Variables occurring in row formulas, sorted."""
        names = set()
        for row in self.rows:
            names.update(iter_vars(row.event))
        return tuple(sorted(names))

    def tuples(self) -> frozenset[Tuple]:
        return frozenset(row.tuple for row in self.rows)


@dataclass(frozen=True)
class EprRelation:
    """A pr-relation extended with event constraints lhs = rhs."""

    rows: tuple[PrTuple, ...]
    constraints: tuple[tuple[Formula, Formula], ...] = ()
    var_probs: dict[str, Fraction] | None = None

    @classmethod
    def of(cls, rows, constraints=(), var_probs=None) -> "EprRelation":
        rows = tuple(
            row if isinstance(row, PrTuple) else PrTuple(tuple(row[0]), row[1])
            for row in rows
        )
        _check_rows(rows)
        constraints = tuple((lhs, rhs) for lhs, rhs in constraints)
        return cls(rows, constraints, _coerce_var_probs(var_probs))

    def variables(self) -> tuple[str, ...]:
        """Variables of row formulas and constraint sides, sorted."""
        names = set()
        for row in self.rows:
            names.update(iter_vars(row.event))
        for lhs, rhs in self.constraints:
            names.update(iter_vars(lhs))
            names.update(iter_vars(rhs))
        return tuple(sorted(names))

    def tuples(self) -> frozenset[Tuple]:
        return frozenset(row.tuple for row in self.rows)


@dataclass(frozen=True)
class Distribution:
    """Worlds with exact probabilities, in canonical world order."""

    entries: tuple[tuple[World, Fraction], ...]

    @classmethod
    def of(cls, pairs) -> "Distribution":
        entries = tuple(
            sorted(((frozenset(w), Fraction(p)) for w, p in pairs), key=lambda e: world_key(e[0]))
        )
        seen = set()
        bad = []
        for w, p in entries:
            if w in seen:
                bad.append(f"duplicate world {_fmt_world(w)}")
            seen.add(w)
            if not 0 < p <= 1:
                bad.append(f"probability {p} outside (0, 1]")
        total = sum((p for _, p in entries), Fraction(0))
        if total != 1:
            bad.append(f"probabilities sum to {total} != 1")
        if bad:
            raise ValidationError(bad)
        return cls(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict[World, Fraction]:
        return dict(self.entries)

    def prob_of(self, world) -> Fraction:
        return self.as_dict().get(frozenset(world), Fraction(0))


def _fmt_world(w: World) -> str:
    return "{" + ", ".join(format_tuple(t) for t in world_key(w)) + "}"


# --- expansion ----------------------------------------------------------------

def _assignment_mass(names, mu, var_probs) -> Fraction:
    mass = Fraction(1)
    for name in names:
        p = var_probs[name]
        mass *= p if mu[name] else 1 - p
    return mass


def expand_pr(r: PrRelation, cap: int = DEFAULT_VAR_CAP) -> tuple[UncertainDB, Distribution]:
    """Enumerate all assignments and collect each one's world and mass.

    The mass of an assignment is the product over variables of P(a) or
    1 - P(a); assignments yielding the same world accumulate.  Raises
    MissingVarProb if a row variable has no probability and
    ExpansionTooLarge past the cap.
    """
    names = r.variables()
    have = set() if r.var_probs is None else set(r.var_probs)
    missing = set(names) - have
    if missing:
        raise MissingVarProb(missing)
    if len(names) > cap:
        raise ExpansionTooLarge(len(names), cap)
    acc: dict = {}
    for values in itertools.product((False, True), repeat=len(names)):
        mu = dict(zip(names, values))
        world = frozenset(row.tuple for row in r.rows if evaluate(row.event, mu))
        mass = _assignment_mass(names, mu, r.var_probs or {})
        key = world_key(world)
        if key in acc:
            acc[key] = (world, acc[key][1] + mass)
        else:
            acc[key] = (world, mass)
    ordered = [acc[key] for key in sorted(acc)]
    udb = UncertainDB(
        frozenset(row.tuple for row in r.rows),
        tuple(w for w, _ in ordered),
        tuple(p for _, p in ordered),
    )
    return udb, Distribution.of(ordered)


def expand_epr(q: EprRelation, cap: int = DEFAULT_VAR_CAP) -> list[tuple[World, dict[str, bool]]]:
    """Worlds reachable by constraint-respecting assignments, with one witness each.

    Assignments are enumerated in binary-counter order over the sorted
    variables (false first), and the first valid assignment reaching a world
    is kept as its witness.  Raises NoValidAssignment when the constraints
    rule out every assignment.
    """
    names = q.variables()
    if len(names) > cap:
        raise ExpansionTooLarge(len(names), cap)
    found: dict = {}
    for values in itertools.product((False, True), repeat=len(names)):
        mu = dict(zip(names, values))
        if not all(evaluate(lhs, mu) == evaluate(rhs, mu) for lhs, rhs in q.constraints):
            continue
        world = frozenset(row.tuple for row in q.rows if evaluate(row.event, mu))
        found.setdefault(world_key(world), (world, mu))
    if not found:
        raise NoValidAssignment()
    return [found[key] for key in sorted(found)]


# --- integration ---------------------------------------------------------------

def _all_names(rel) -> set[str]:
    names = set(rel.variables())
    if rel.var_probs is not None:
        names.update(rel.var_probs)
    return names


def _rename_relation(r: PrRelation, prefix: str) -> PrRelation:
    rows = tuple(PrTuple(row.tuple, rename_vars(row.event, prefix)) for row in r.rows)
    probs = None
    if r.var_probs is not None:
        probs = {f"{prefix}::{name}": p for name, p in r.var_probs.items()}
    return PrRelation(rows, probs)


def integrate_pr(r: PrRelation, s: PrRelation) -> EprRelation:
    """Integrate two pr-relations into an epr-relation.

    Tuples private to one source keep their formulas.  Each common tuple is
    kept once, with the second source's formula, and contributes the event
    constraint f = g pairing the two sources' formulas.  When the raw
    variable sets intersect, both sides are renamed apart first.
    """
    if _all_names(r) & _all_names(s):
        r = _rename_relation(r, "s1")
        s = _rename_relation(s, "s2")
    left = {row.tuple: row for row in r.rows}
    right = {row.tuple: row for row in s.rows}
    rows = []
    constraints = []
    for t in sorted(set(left) | set(right)):
        if t in right:
            rows.append(right[t])
            if t in left:
                constraints.append((left[t].event, right[t].event))
        else:
            rows.append(left[t])
    if r.var_probs is None and s.var_probs is None:
        var_probs = None
    else:
        var_probs = {**(r.var_probs or {}), **(s.var_probs or {})}
    return EprRelation(tuple(rows), tuple(constraints), var_probs)


# --- event-variable formulas ----------------------------------------------------

def evf(rel, world) -> Formula:
    """The formula selecting exactly the assignments that yield this world.

    Constraints (for epr-relations) contribute lhs <-> rhs conjuncts first,
    then each row contributes its event or its negation depending on world
    membership.
    """
    world = frozenset(tuple(t) for t in world)
    extra = world - rel.tuples()
    if extra:
        raise ValidationError(
            "world uses tuples absent from the relation: "
            + ", ".join(format_tuple(t) for t in sorted(extra))
        )
    parts = []
    if isinstance(rel, EprRelation):
        parts.extend(Iff(lhs, rhs) for lhs, rhs in rel.constraints)
    for row in rel.rows:
        parts.append(row.event if row.tuple in world else Not(row.event))
    return conjoin(parts)


# --- encoding a possible-worlds database ------------------------------------------

def encode_pw(u: UncertainDB, var_base: str = "x") -> PrRelation:
    """Encode a probabilistic uncertain database as an equivalent pr-relation.

    Fresh chain variables x1..x(n-1) select which world holds: world i is
    picked by !x1 & .. & !x(i-1) & xi (the last world by all-negated), with
    P(xi) = P(Di) / (1 - P(D1) - .. - P(D(i-1))) so each selector's mass is
    exactly P(Di).  A tuple's event is the disjunction of the selectors of
    the worlds containing it.  Round-tripping through expand_pr recovers the
    input distribution exactly.
    """
    if not _NAME_FRAGMENT.match(var_base):
        raise ValidationError(f"invalid variable base {var_base!r}")
    report = validate_udb(u)
    if u.probs is None:
        report.append("source carries no probabilities")
    if report:
        raise ValidationError(report)
    n = len(u.worlds)
    names = [f"{var_base}{i}" for i in range(1, n)]
    var_probs = {}
    remaining = Fraction(1)
    for i, name in enumerate(names):
        p = u.probs[i] / remaining
        assert 0 < p < 1
        var_probs[name] = p
        remaining -= u.probs[i]
    selectors = []
    negated: list[Formula] = []
    for i in range(n):
        if i < n - 1:
            selectors.append(conjoin(negated + [Variable(names[i])]))
            negated.append(Not(Variable(names[i])))
        else:
            selectors.append(conjoin(negated))
    rows = tuple(
        PrTuple(t, disjoin(selectors[i] for i in range(n) if t in u.worlds[i]))
        for t in sorted(u.tuple_set)
    )
    return PrRelation(rows, var_probs)
