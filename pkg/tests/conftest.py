"""Shared golden instances for the test suite.

Two scenarios recur everywhere.  The roster scenario: two sources report
which courses Bob takes, one source denying CS102 outright; integration
pins Bob to CS101.  The weighted scenario: the same student seen by two
offices with exact rational uncertainty; integration yields six worlds
whose probabilities are known in closed form.
"""

from fractions import Fraction

from udbi.logic import FALSE, Not, Or, Variable, parse_formula
from udbi.prdb import EprRelation, PrRelation, PrTuple
from udbi.pwdb import UncertainDB

CS100 = ("Bob", "CS100")
CS101 = ("Bob", "CS101")
CS102 = ("Bob", "CS102")
CS201 = ("Bob", "CS201")
CS202 = ("Bob", "CS202")


def world(*tuples) -> frozenset:
    return frozenset(tuples)


# --- roster scenario (no probabilities) ------------------------------------------

def roster_pw_sources(denial: bool = True) -> tuple[UncertainDB, UncertainDB]:
    """Bob takes exactly one of CS100/CS101 (source 1) and one of CS101/CS102
    (source 2).  With ``denial`` source 1 also knows CS102 and rules it out."""
    t1 = [CS100, CS101] + ([CS102] if denial else [])
    s1 = UncertainDB.of(t1, [world(CS100), world(CS101)])
    s2 = UncertainDB.of([CS101, CS102], [world(CS101), world(CS102)])
    return s1, s2


def roster_pr_sources(denial: bool = True) -> tuple[PrRelation, PrRelation]:
    """The same two sources written as pr-relations over variables x and y."""
    x, y = Variable("x"), Variable("y")
    rows1 = [PrTuple(CS100, x), PrTuple(CS101, Not(x))]
    if denial:
        rows1.append(PrTuple(CS102, FALSE))
    rows2 = [PrTuple(CS101, y), PrTuple(CS102, Not(y))]
    return PrRelation.of(rows1), PrRelation.of(rows2)


# --- weighted scenario (exact rational probabilities) ------------------------------

def office_pw_sources() -> tuple[UncertainDB, UncertainDB]:
    """Two offices' weighted views of Bob's registrations."""
    s1 = UncertainDB.of(
        [CS100, CS101],
        [world(CS100), world(CS100, CS101), world(CS101)],
        ["3/10", "1/2", "1/5"],
    )
    s2 = UncertainDB.of(
        [CS100, CS201, CS202],
        [world(CS100), world(CS100, CS201), world(CS201), world(CS201, CS202)],
        ["7/20", "9/20", "1/20", "3/20"],
    )
    return s1, s2


def office_pr_sources() -> tuple[PrRelation, PrRelation]:
    """The same two offices as pr-relations; expanding them gives the pw sources."""
    r1 = PrRelation.of(
        [
            (CS100, parse_formula("!c1")),
            (CS101, parse_formula("c1 | c2")),
        ],
        {"c1": "1/5", "c2": "5/8"},
    )
    r2 = PrRelation.of(
        [
            (CS100, parse_formula("b1 | b2")),
            (CS201, parse_formula("!b1")),
            (CS202, parse_formula("!b1 & !b2 & !b3")),
        ],
        {"b1": "7/20", "b2": "9/13", "b3": "1/4"},
    )
    return r1, r2


def office_epr() -> EprRelation:
    """integrate_pr of the two offices, written out explicitly."""
    return EprRelation.of(
        [
            (CS100, parse_formula("b1 | b2")),
            (CS101, parse_formula("c1 | c2")),
            (CS201, parse_formula("!b1")),
            (CS202, parse_formula("!b1 & !b2 & !b3")),
        ],
        [(parse_formula("!c1"), parse_formula("b1 | b2"))],
        {"b1": "7/20", "b2": "9/13", "b3": "1/4", "c1": "1/5", "c2": "5/8"},
    )


OFFICE_DISTRIBUTION = {
    world(CS100): Fraction(21, 160),
    world(CS100, CS201): Fraction(27, 160),
    world(CS100, CS101): Fraction(35, 160),
    world(CS100, CS101, CS201): Fraction(45, 160),
    world(CS101, CS201): Fraction(1, 20),
    world(CS101, CS201, CS202): Fraction(3, 20),
}


# --- a minimal relation with a free variable group ---------------------------------

def free_group_epr(var_probs=None) -> EprRelation:
    """Three rows, one constraint a = c, and a free group {b}.

    Decomposes two ways: the b-row can sit on either side.  Any var_probs
    with P(a) = P(c) keeps the integration balanced.
    """
    a, b, c, d = (Variable(n) for n in "abcd")
    return EprRelation.of(
        [
            (("t1",), a),
            (("t2",), b),
            (("t3",), Or(Not(c), d)),
        ],
        [(a, c)],
        var_probs,
    )


FREE_GROUP_PROBS = {"a": "1/3", "b": "2/5", "c": "1/3", "d": "1/2"}
