# app/models/closure.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator, Mapping

from .facts import Fact
from .terms import GroundTerm

if TYPE_CHECKING:
    from ..services.fact_base import FactBase


@dataclass(frozen=True, slots=True)
class Binding:
    """Immutable variable -> ground term map, kept sorted by variable name."""

    pairs: tuple[tuple[str, GroundTerm], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, GroundTerm]) -> Binding:
        return cls(tuple(sorted(mapping.items(), key=lambda kv: kv[0])))

    def as_dict(self) -> dict[str, GroundTerm]:
        return dict(self.pairs)

    def get(self, name: str, default: GroundTerm | None = None) -> GroundTerm | None:
        for key, value in self.pairs:
            if key == name:
                return value
        return default

    def extend(self, name: str, value: GroundTerm) -> Binding | None:
        """Add ``name -> value``; None on conflict with an existing value."""
        current = self.get(name)
        if current is not None:
            return self if current == value else None
        return Binding.of({**self.as_dict(), name: value})

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[str, GroundTerm]]:
        return iter(self.pairs)


@dataclass(frozen=True, slots=True)
class Justification:
    source: str
    binding: Binding
    antecedent_facts: tuple[Fact, ...]


@dataclass(frozen=True)
class LintNote:
    rule_id: str
    cls: str

    def __str__(self) -> str:
        return f"rule '{self.rule_id}' never fired: no individuals of {self.cls}"


@dataclass
class Closure:
    """Result of a fixpoint run.

    ``base`` holds every fact after the run; ``derived`` is what the run added.
    ``derived_at`` records the iteration in which each derived fact first appeared.
    """

    base: FactBase
    input_facts: frozenset[Fact]
    derived: frozenset[Fact]
    iterations: int
    derived_at: dict[Fact, int] = field(default_factory=dict)
    lint_notes: tuple[LintNote, ...] = ()

    @property
    def provenance(self) -> dict[Fact, list[Justification]]:
        return self.base.provenance

    @property
    def facts(self) -> frozenset[Fact]:
        return frozenset(self.base)


@dataclass(frozen=True)
class Explanation:
    """Justification tree node: an asserted leaf or a derived fact with its derivations."""

    fact: Fact
    asserted: bool
    derivations: tuple[tuple[Justification, tuple[Explanation, ...]], ...] = ()
