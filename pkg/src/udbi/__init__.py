"""Uncertain databases: possible-worlds and probabilistic-relation models.

The package models uncertain data two ways. An uncertain database lists its
possible worlds explicitly, optionally with exact rational probabilities. A
probabilistic relation attaches a propositional event formula to each tuple
over independent boolean variables; event constraints extend the model so
that integrating two relations stays compact. Integration of two sources is
defined world-by-world through compatibility, and the probability of each
integrated world has an exact closed form under partial independence. A
decomposition pass recognizes relations that are integration results and
recovers source pairs, which is how the distribution of a constrained
relation is computed; a brute-force expansion of the possible worlds serves
as the oracle everywhere.
"""

from .errors import (
    EmptyIntegration,
    ExpansionTooLarge,
    MissingVarProb,
    NotIntegrated,
    NoValidAssignment,
    ParseError,
    ProbConstraintViolation,
    UdbError,
    UnboundVariable,
    ValidationError,
)
from .logic import (
    DEFAULT_VAR_CAP,
    And,
    Const,
    FALSE,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    TRUE,
    Variable,
    equivalent,
    evaluate,
    parse_formula,
    rename_vars,
    to_text,
    variables,
)

__all__ = [
    "And",
    "Const",
    "DEFAULT_VAR_CAP",
    "EmptyIntegration",
    "ExpansionTooLarge",
    "FALSE",
    "Formula",
    "Iff",
    "Implies",
    "MissingVarProb",
    "Not",
    "NotIntegrated",
    "NoValidAssignment",
    "Or",
    "ParseError",
    "ProbConstraintViolation",
    "TRUE",
    "UdbError",
    "UnboundVariable",
    "ValidationError",
    "Variable",
    "equivalent",
    "evaluate",
    "parse_formula",
    "rename_vars",
    "to_text",
    "variables",
]
