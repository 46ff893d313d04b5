# app/models/consent_model.py

"""Consent-form documents: a form holds permissions, each permission one consent
directive that is about a set of designated entities.

Forms are written in YAML; identifiers are qnames (``obo:ICO_0000382``) or bare
individual names, resolved against the prefix table when the form is lowered.
"""

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

DEFAULT_DIRECTIVE_CLASS = "obo:ICO_0000322"


class EntityKind(str, Enum):
    ACTOR = "actor"
    ACTION = "action"
    PURPOSE = "purpose"
    OBJECT = "object"


# Classes whose kind is fixed by the consent-form prose; others are unconstrained.
KIND_CLASSES: dict[EntityKind, tuple[str, ...]] = {
    EntityKind.ACTOR: ("obo:ICO_0000381", "obo:ICO_0000382", "obo:ICO_0000395", "obo:ICO_0000396", "obo:ICO_0000398"),
    EntityKind.ACTION: (
        "obo:ICO_0000332",
        "obo:ICO_0000334",
        "obo:ICO_0000336",
        "obo:ICO_0000330",
        "obo:ICO_0000339",
        "obo:ICO_0000365",
    ),
    EntityKind.PURPOSE: ("obo:ICO_0000344", "obo:ICO_0000345", "obo:ICO_0000354"),
    EntityKind.OBJECT: ("obo:ICO_0000370", "obo:ICO_0000375"),
}


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


class ConsentDirective(_Document):
    individual: str
    directive_class: str = Field(DEFAULT_DIRECTIVE_CLASS, alias="class")
    about: list[str] = Field(default_factory=list)


class DesignatedEntity(_Document):
    individual: str
    kind: EntityKind
    cls: str = Field(alias="class")


class ContextIndividual(_Document):
    """A planned process or act matched by class alone, or an individual with several classes."""

    individual: str
    classes: list[str] = Field(default_factory=list)


class Permission(_Document):
    id: str
    directive_text: str = ""
    consent_directive: ConsentDirective
    entities: list[DesignatedEntity] = Field(default_factory=list)
    context: list[ContextIndividual] = Field(default_factory=list)

    def declared(self) -> list[str]:
        return [e.individual for e in self.entities] + [c.individual for c in self.context]


class ConsentForm(_Document):
    id: str
    title: str = ""
    permissions: list[Permission] = Field(default_factory=list)


@dataclass(frozen=True)
class Violation:
    code: str
    permission_id: str | None
    detail: str

    def __str__(self) -> str:
        where = f"permission '{self.permission_id}'" if self.permission_id else "form"
        return f"[{self.code}] {where}: {self.detail}"
