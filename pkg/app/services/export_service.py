# app/services/export_service.py

import logging
from typing import Mapping

from pydantic import BaseModel, Field

from ..models.closure import Closure
from ..models.facts import fact_to_text, facts_to_text, sort_facts
from ..models.terms import PrefixTable, format_term
from ..utils.helpers import justification_key

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class BindingPair(BaseModel):
    variable: str
    value: str


class ProvenanceRecord(BaseModel):
    fact: str
    source: str = Field(description="Rule id or inverse-axiom id that produced the fact")
    binding: list[BindingPair] = Field(default_factory=list)
    antecedent_facts: list[str] = Field(default_factory=list)
    iteration: int


class LintRecord(BaseModel):
    rule_id: str
    cls: str
    message: str


class ClosureExport(BaseModel):
    """Structured form of a closure, for tools that do not read ``.swf``."""

    schema_version: int = SCHEMA_VERSION
    iterations: int
    input_count: int
    derived_count: int
    facts: list[str]
    derived: list[str]
    provenance: list[ProvenanceRecord] = Field(default_factory=list)
    lint_notes: list[LintRecord] = Field(default_factory=list)
    labels: dict[str, str] | None = None
    prefixes: dict[str, str] | None = Field(None, description="Prefixes used above that are not preloaded")


def prefix_header(prefixes: PrefixTable, preloaded: PrefixTable | None) -> str:
    """``@prefix`` lines a reader with only the preloaded table needs."""
    if preloaded is None:
        return ""
    return "".join(f"@prefix {name}: <{base}> .\n" for name, base in prefixes.declarations_beyond(preloaded))


def closure_to_text(
    closure: Closure, prefixes: PrefixTable, derived_only: bool = False, preloaded: PrefixTable | None = None
) -> str:
    """Canonical ``.swf`` text for the closure (or only its derived facts).

    With ``preloaded`` given, prefixes beyond it are declared at the top so
    the text reads back under the preloaded table alone.
    """
    facts = closure.derived if derived_only else closure.facts
    return prefix_header(prefixes, preloaded) + facts_to_text(facts, prefixes)


def build_export(
    closure: Closure,
    prefixes: PrefixTable,
    derived_only: bool = False,
    labels: Mapping[str, str] | None = None,
    preloaded: PrefixTable | None = None,
) -> ClosureExport:
    facts = closure.derived if derived_only else closure.facts
    declared = prefixes.declarations_beyond(preloaded) if preloaded is not None else []
    provenance = []
    for fact in sort_facts(closure.derived, prefixes):
        text = fact_to_text(fact, prefixes)
        for justification in sorted(closure.provenance.get(fact, ()), key=justification_key):
            provenance.append(
                ProvenanceRecord(
                    fact=text,
                    source=justification.source,
                    binding=[
                        BindingPair(variable=name, value=format_term(value, prefixes))
                        for name, value in justification.binding
                    ],
                    antecedent_facts=[fact_to_text(f, prefixes) for f in justification.antecedent_facts],
                    iteration=closure.derived_at.get(fact, 0),
                )
            )
    return ClosureExport(
        iterations=closure.iterations,
        input_count=len(closure.input_facts),
        derived_count=len(closure.derived),
        facts=[fact_to_text(f, prefixes) for f in sort_facts(facts, prefixes)],
        derived=[fact_to_text(f, prefixes) for f in sort_facts(closure.derived, prefixes)],
        provenance=provenance,
        lint_notes=[LintRecord(rule_id=n.rule_id, cls=n.cls, message=str(n)) for n in closure.lint_notes],
        labels=dict(sorted(labels.items())) if labels is not None else None,
        prefixes=dict(declared) or None,
    )


def closure_to_json(
    closure: Closure,
    prefixes: PrefixTable,
    derived_only: bool = False,
    labels: Mapping[str, str] | None = None,
    preloaded: PrefixTable | None = None,
) -> str:
    export = build_export(closure, prefixes, derived_only, labels, preloaded)
    logger.debug(f"Structured export: {len(export.facts)} facts, {len(export.provenance)} provenance records.")
    return export.model_dump_json(indent=2, exclude_none=True) + "\n"
