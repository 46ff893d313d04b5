# app/services/fact_base.py

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, Iterator, Mapping

from ..models.closure import Binding, Justification
from ..models.facts import ClassAssertion, Fact, PropertyAssertion, sort_facts
from ..models.rules import ClassAtom, PatternAtom, PropertyAtom
from ..models.terms import GroundTerm, Individual, Iri, Literal, PrefixTable, Term, Variable

logger = logging.getLogger(__name__)


class FactBase:
    """Deduplicating, indexed store of ground facts with provenance.

    Single writer: mutation happens between fixpoint iterations only, reads
    may happen concurrently in between.
    """

    def __init__(self, facts: Iterable[Fact] = ()):
        self._facts: set[Fact] = set()
        self.by_predicate: dict[Iri, set[Fact]] = defaultdict(set)
        self.by_subject: dict[Iri, set[Fact]] = defaultdict(set)
        self._by_predicate_subject: dict[tuple[Iri, Iri], set[Fact]] = defaultdict(set)
        self._by_predicate_object: dict[tuple[Iri, GroundTerm], set[Fact]] = defaultdict(set)
        self.provenance: dict[Fact, list[Justification]] = {}
        for fact in facts:
            self.assert_fact(fact)

    def __len__(self) -> int:
        return len(self._facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self._facts)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    @property
    def facts(self) -> frozenset[Fact]:
        return frozenset(self._facts)

    def assert_fact(self, fact: Fact) -> bool:
        """Insert ``fact``; True iff it was not already present."""
        if fact in self._facts:
            return False
        if not isinstance(fact, (ClassAssertion, PropertyAssertion)):
            raise TypeError(f"Not a fact: {fact!r}")
        self._facts.add(fact)
        self.by_predicate[fact.predicate].add(fact)
        self.by_subject[fact.subject].add(fact)
        self._by_predicate_subject[(fact.predicate, fact.subject)].add(fact)
        if isinstance(fact, PropertyAssertion):
            self._by_predicate_object[(fact.predicate, fact.obj)].add(fact)
        return True

    def contains(self, fact: Fact) -> bool:
        return fact in self._facts

    def attach_justification(self, fact: Fact, justification: Justification) -> None:
        self.provenance.setdefault(fact, []).append(justification)

    def copy(self) -> FactBase:
        clone = FactBase(self._facts)
        clone.provenance = {fact: list(js) for fact, js in self.provenance.items()}
        return clone

    # --- pattern matching ---

    def match_pattern(
        self, pattern: PatternAtom, partial: Binding | Mapping[str, GroundTerm] | None = None
    ) -> Iterator[Binding]:
        """Yield every extension of ``partial`` under which ``pattern`` is a fact here."""
        if not isinstance(pattern, (ClassAtom, PropertyAtom)):
            raise TypeError(f"match_pattern takes class or property atoms, got {type(pattern).__name__}")
        start = partial if isinstance(partial, Binding) else Binding.of(partial or {})
        for fact in list(self.candidates(pattern, start.as_dict())):
            binding = bind(pattern, fact, start)
            if binding is not None:
                yield binding

    def candidates(self, pattern: PatternAtom, bound: Mapping[str, GroundTerm]) -> Iterable[Fact]:
        """Facts that can possibly match ``pattern``, narrowed by the best index available."""
        args = pattern.args
        first = resolve(args[0], bound)
        if isinstance(first, Literal):
            return ()
        if isinstance(first, Individual):
            return self._by_predicate_subject.get((pattern.predicate, first.iri), ())
        if len(args) == 2:
            second = resolve(args[1], bound)
            if second is not None:
                return self._by_predicate_object.get((pattern.predicate, second), ())
        return self.by_predicate.get(pattern.predicate, ())


def resolve(term: Term, bound: Mapping[str, GroundTerm]) -> GroundTerm | None:
    if isinstance(term, Variable):
        return bound.get(term.name)
    return term


def bind(pattern: PatternAtom, fact: Fact, binding: Binding) -> Binding | None:
    """``binding`` extended so ``pattern`` matches ``fact``; None on a mismatch or a conflicting variable."""
    if isinstance(pattern, ClassAtom) != isinstance(fact, ClassAssertion):
        return None
    for term, value in zip(pattern.args, fact.args):
        if isinstance(term, Variable):
            binding = binding.extend(term.name, value)
            if binding is None:
                return None
        elif term != value:
            return None
    return binding


def unify(pattern: PatternAtom, fact: Fact, bound: dict[str, GroundTerm]) -> list[str] | None:
    """Extend ``bound`` in place so ``pattern`` matches ``fact``.

    Returns the newly bound variable names, or None (with ``bound`` left
    untouched) when the fact does not match.
    """
    if isinstance(pattern, ClassAtom) != isinstance(fact, ClassAssertion):
        return None
    added: list[str] = []
    for term, value in zip(pattern.args, fact.args):
        if isinstance(term, Variable):
            current = bound.get(term.name)
            if current is None:
                bound[term.name] = value
                added.append(term.name)
                continue
            if current == value:
                continue
        elif term == value:
            continue
        for name in added:
            del bound[name]
        return None
    return added


def diff(fb_a: Iterable[Fact], fb_b: Iterable[Fact], prefixes: PrefixTable) -> tuple[list[Fact], list[Fact]]:
    """Symmetric difference split by side, each sorted by canonical text."""
    a, b = set(fb_a), set(fb_b)
    return sort_facts(a - b, prefixes), sort_facts(b - a, prefixes)
