# app/models/facts.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .terms import GroundTerm, Individual, Iri, Literal, PrefixTable, format_term


@dataclass(frozen=True, slots=True)
class ClassAssertion:
    cls: Iri
    individual: Iri

    @property
    def predicate(self) -> Iri:
        return self.cls

    @property
    def subject(self) -> Iri:
        return self.individual

    @property
    def args(self) -> tuple[GroundTerm, ...]:
        return (Individual(self.individual),)


@dataclass(frozen=True, slots=True)
class PropertyAssertion:
    prop: Iri
    subject: Iri
    obj: GroundTerm

    def __post_init__(self):
        if not isinstance(self.obj, (Individual, Literal)):
            raise TypeError(f"Property assertion object must be ground, got {self.obj!r}")

    @property
    def predicate(self) -> Iri:
        return self.prop

    @property
    def args(self) -> tuple[GroundTerm, ...]:
        return (Individual(self.subject), self.obj)


Fact = Union[ClassAssertion, PropertyAssertion]


def fact_to_text(fact: Fact, prefixes: PrefixTable) -> str:
    """Canonical text form, e.g. ``obo:RO_0000056(I, legalconsent).``"""
    args = ", ".join(format_term(arg, prefixes) for arg in fact.args)
    return f"{prefixes.compact(fact.predicate)}({args})."


def sort_facts(facts: Iterable[Fact], prefixes: PrefixTable) -> list[Fact]:
    """Facts ordered lexicographically by their canonical text."""
    keyed = {fact_to_text(fact, prefixes): fact for fact in facts}
    return [keyed[text] for text in sorted(keyed)]


def facts_to_text(facts: Iterable[Fact], prefixes: PrefixTable) -> str:
    """Serialize facts as a canonical ``.swf`` document (sorted, LF-terminated)."""
    lines = sorted({fact_to_text(fact, prefixes) for fact in facts})
    return "".join(f"{line}\n" for line in lines)
