"""End-to-end exact distributions for integrated epr-relations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import (
    FREE_GROUP_PROBS,
    OFFICE_DISTRIBUTION,
    free_group_epr,
    office_epr,
    office_pr_sources,
    roster_pr_sources,
)
from udbi.decompose import PrPair
from udbi.errors import MissingVarProb, ProbConstraintViolation
from udbi.gen import gen_integrated_epr
from udbi.logic import Variable
from udbi.prdb import EprRelation, expand_epr, expand_pr, integrate_pr
from udbi.probcalc import cross_check, epr_distribution


def test_office_distribution_is_exact():
    result = epr_distribution(office_epr())
    assert dict(result.distribution) == OFFICE_DISTRIBUTION
    assert sum((p for _, p in result.distribution), Fraction(0)) == 1


def test_office_components_and_pair_are_reported():
    r1, r2 = office_pr_sources()
    result = epr_distribution(office_epr())
    assert [c.constant for c in result.components] == [Fraction(4, 5), Fraction(1, 5)]
    assert all(c.balanced for c in result.components)
    assert result.pair_used == PrPair(r2, r1)


def test_distribution_support_equals_the_valid_assignment_worlds():
    q = office_epr()
    assert [w for w, _ in epr_distribution(q).distribution] == [
        w for w, _ in expand_epr(q)
    ]


def test_constraint_free_relations_reduce_to_plain_expansion():
    r1, _ = office_pr_sources()
    q = EprRelation.of(r1.rows, (), r1.var_probs)
    _, expanded = expand_pr(r1)
    assert dict(epr_distribution(q).distribution) == dict(expanded)


def test_free_groups_do_not_change_the_answer():
    q = free_group_epr(FREE_GROUP_PROBS)
    assert cross_check(q)


def test_cross_check_accepts_the_office_relation():
    assert cross_check(office_epr())


def test_cross_check_can_supply_probabilities():
    assert cross_check(free_group_epr(), var_probs=FREE_GROUP_PROBS)


def test_unbalanced_probabilities_raise_for_every_pair():
    unbalanced = dict(FREE_GROUP_PROBS, a="1/2")
    with pytest.raises(ProbConstraintViolation):
        cross_check(free_group_epr(), var_probs=unbalanced)
    with pytest.raises(ProbConstraintViolation):
        epr_distribution(free_group_epr(unbalanced))


def test_missing_probabilities_are_reported_by_name():
    q = EprRelation.of(
        [(("t",), Variable("a"))],
        [(Variable("a"), Variable("c"))],
        {"a": "1/2"},
    )
    with pytest.raises(MissingVarProb) as err:
        epr_distribution(q)
    assert err.value.names == ("c",)


def test_stranded_worlds_make_the_integration_undefined():
    andy, jane = roster_pr_sources()
    q = integrate_pr(andy, jane)
    for px, py in (("1/2", "1/2"), ("1/3", "2/3"), ("9/10", "1/10")):
        weighted = EprRelation.of(q.rows, q.constraints, {"x": px, "y": py})
        with pytest.raises(ProbConstraintViolation) as err:
            epr_distribution(weighted)
        assert any("no compatible partner" in reason for _, reason in err.value.failures)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_generated_integrations_cross_check(seed):
    q = gen_integrated_epr(seed)
    assert cross_check(q)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_generated_distributions_sum_to_one(seed):
    q = gen_integrated_epr(seed)
    result = epr_distribution(q)
    assert sum((p for _, p in result.distribution), Fraction(0)) == 1
    assert all(c.balanced for c in result.components)
