"""JSON documents for the three source models.

A document is an object with a ``model`` tag: "pw" carries ``tuples`` plus
``worlds`` (index arrays, optional ``prob`` strings), "pr" carries ``rows``
({tuple, event}) plus optional ``var_probs``, and "epr" adds ``constraints``
({lhs, rhs} formula strings).  Probabilities are decimal or fraction
strings; numbers are rejected since binary floats are not exact.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ValidationError
from .logic import parse_formula, to_text
from .prdb import EprRelation, PrRelation, PrTuple
from .pwdb import UncertainDB, validate_udb


def _parse_prob(value, where: str) -> Fraction:
    if not isinstance(value, str):
        raise ValidationError(
            f"{where}: probabilities must be strings like \"0.3\" or \"9/13\", got {value!r}"
        )
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: cannot read probability {value!r}") from None


def _parse_tuple(value, where: str) -> tuple[str, ...]:
    if (
        not isinstance(value, list)
        or not value
        or not all(isinstance(x, str) for x in value)
    ):
        raise ValidationError(f"{where}: a tuple must be a nonempty array of strings")
    return tuple(value)


def _parse_event(text, where: str):
    if not isinstance(text, str):
        raise ValidationError(f"{where}: event must be a formula string")
    return parse_formula(text)


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ValidationError(f"{where}: unknown keys {sorted(extra)}")


def _parse_pw(obj: dict) -> UncertainDB:
    _require_keys(obj, {"model", "tuples", "worlds"}, "pw document")
    raw_tuples = obj.get("tuples")
    if not isinstance(raw_tuples, list):
        raise ValidationError("pw document: \"tuples\" must be an array")
    tuples = [_parse_tuple(t, f"tuples[{i}]") for i, t in enumerate(raw_tuples)]
    raw_worlds = obj.get("worlds")
    if not isinstance(raw_worlds, list):
        raise ValidationError("pw document: \"worlds\" must be an array")
    worlds = []
    probs = []
    for i, entry in enumerate(raw_worlds):
        where = f"worlds[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{where}: must be an object")
        _require_keys(entry, {"tuples", "prob"}, where)
        indices = entry.get("tuples")
        if not isinstance(indices, list) or not all(
            isinstance(k, int) and not isinstance(k, bool) and 0 <= k < len(tuples)
            for k in indices
        ):
            raise ValidationError(f"{where}: \"tuples\" must be an array of tuple indices")
        worlds.append(frozenset(tuples[k] for k in indices))
        if "prob" in entry:
            probs.append(_parse_prob(entry["prob"], where))
        else:
            probs.append(None)
    if any(p is None for p in probs) and any(p is not None for p in probs):
        raise ValidationError("pw document: either every world has a prob or none does")
    udb = UncertainDB(
        frozenset(tuples),
        tuple(worlds),
        None if not probs or probs[0] is None else tuple(probs),
    )
    report = validate_udb(udb)
    if report:
        raise ValidationError(report)
    return udb


def _parse_rows(obj: dict, where: str) -> tuple[PrTuple, ...]:
    raw = obj.get("rows")
    if not isinstance(raw, list):
        raise ValidationError(f"{where}: \"rows\" must be an array")
    rows = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ValidationError(f"rows[{i}]: must be an object")
        _require_keys(entry, {"tuple", "event"}, f"rows[{i}]")
        rows.append(
            PrTuple(
                _parse_tuple(entry.get("tuple"), f"rows[{i}].tuple"),
                _parse_event(entry.get("event"), f"rows[{i}].event"),
            )
        )
    return tuple(rows)


def _parse_var_probs(obj: dict, where: str) -> dict[str, Fraction] | None:
    raw = obj.get("var_probs")
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ValidationError(f"{where}: \"var_probs\" must be an object")
    return {name: _parse_prob(p, f"var_probs.{name}") for name, p in raw.items()}


def _parse_pr(obj: dict) -> PrRelation:
    _require_keys(obj, {"model", "rows", "var_probs"}, "pr document")
    return PrRelation.of(_parse_rows(obj, "pr document"), _parse_var_probs(obj, "pr document"))


def _parse_epr(obj: dict) -> EprRelation:
    _require_keys(obj, {"model", "rows", "constraints", "var_probs"}, "epr document")
    raw = obj.get("constraints", [])
    if not isinstance(raw, list):
        raise ValidationError("epr document: \"constraints\" must be an array")
    constraints = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ValidationError(f"constraints[{i}]: must be an object")
        _require_keys(entry, {"lhs", "rhs"}, f"constraints[{i}]")
        constraints.append(
            (
                _parse_event(entry.get("lhs"), f"constraints[{i}].lhs"),
                _parse_event(entry.get("rhs"), f"constraints[{i}].rhs"),
            )
        )
    return EprRelation.of(
        _parse_rows(obj, "epr document"),
        constraints,
        _parse_var_probs(obj, "epr document"),
    )


def parse_document(obj) -> UncertainDB | PrRelation | EprRelation:
    """Turn a decoded JSON object into the model value its tag names."""
    if not isinstance(obj, dict):
        raise ValidationError("document must be a JSON object")
    model = obj.get("model")
    if model == "pw":
        return _parse_pw(obj)
    if model == "pr":
        return _parse_pr(obj)
    if model == "epr":
        return _parse_epr(obj)
    raise ValidationError('document needs a "model" key of "pw", "pr" or "epr"')


def load_document(path) -> UncertainDB | PrRelation | EprRelation:
    try:
        with open(path, encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as err:
        raise ValidationError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ValidationError(f"{path} is not valid JSON: {err}") from None
    return parse_document(obj)


def document_of(value) -> dict:
    """Serialize a model value to its JSON document (inverse of parse_document)."""
    if isinstance(value, UncertainDB):
        tuples = sorted(value.tuple_set)
        index = {t: k for k, t in enumerate(tuples)}
        worlds = []
        for i, w in enumerate(value.worlds):
            entry = {"tuples": sorted(index[t] for t in w)}
            if value.probs is not None:
                entry["prob"] = str(value.probs[i])
            worlds.append(entry)
        return {"model": "pw", "tuples": [list(t) for t in tuples], "worlds": worlds}
    if isinstance(value, EprRelation):
        doc = {"model": "epr", "rows": _rows_doc(value.rows)}
        doc["constraints"] = [
            {"lhs": to_text(lhs), "rhs": to_text(rhs)} for lhs, rhs in value.constraints
        ]
        if value.var_probs is not None:
            doc["var_probs"] = _var_probs_doc(value.var_probs)
        return doc
    if isinstance(value, PrRelation):
        doc = {"model": "pr", "rows": _rows_doc(value.rows)}
        if value.var_probs is not None:
            doc["var_probs"] = _var_probs_doc(value.var_probs)
        return doc
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _rows_doc(rows) -> list[dict]:
    return [{"tuple": list(row.tuple), "event": to_text(row.event)} for row in rows]


def _var_probs_doc(var_probs) -> dict[str, str]:
    return {name: str(var_probs[name]) for name in sorted(var_probs)}


def dumps_document(value) -> str:
    return json.dumps(document_of(value), indent=2) + "\n"


def write_document(value, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_document(value))
