# app/services/consent_service.py

import logging
from collections import Counter
from pathlib import Path
from typing import Sequence

import yaml
from pydantic import ValidationError

from ..exceptions import InputError, InvalidForm, UnknownPrefix
from ..models.closure import Closure
from ..models.consent_model import KIND_CLASSES, ConsentForm, Permission, Violation
from ..models.facts import ClassAssertion, Fact, PropertyAssertion
from ..models.rules import InverseAxiom, Rule
from ..models.terms import Individual, Iri, PrefixTable
from ..utils.helpers import read_text
from .reasoner_service import ReasonerService

logger = logging.getLogger(__name__)

IS_ABOUT = "obo:IAO_0000136"


class ConsentService:
    """Validates consent forms and lowers them to facts the reasoner can consume."""

    def __init__(self, prefixes: PrefixTable, reasoner: ReasonerService):
        self.prefixes = prefixes
        self.reasoner = reasoner
        self._kind_of = {
            self.prefixes.iri(qname): kind for kind, qnames in KIND_CLASSES.items() for qname in qnames
        }

    def load_form(self, path: Path) -> ConsentForm:
        path = Path(path)
        try:
            document = yaml.safe_load(read_text(path))
            form = ConsentForm.model_validate(document)
        except yaml.YAMLError as e:
            logger.error(f"Consent form '{path}' is not valid YAML: {e}")
            raise InputError(f"{path}: {e}") from e
        except ValidationError as e:
            logger.error(f"Consent form '{path}' does not match the form schema.")
            raise InputError(f"{path}: {e}") from e
        logger.info(f"Loaded consent form '{form.id}' with {len(form.permissions)} permissions from '{path}'.")
        return form

    def _resolve(self, name: str) -> Iri | None:
        try:
            return self.prefixes.iri(name)
        except (UnknownPrefix, ValueError):
            return None

    def validate(self, form: ConsentForm) -> list[Violation]:
        """Every problem with ``form``; an empty list means it can be lowered."""
        report: list[Violation] = []
        if not form.id.strip():
            report.append(Violation("empty-form-id", None, "form id is empty"))
        if not form.permissions:
            report.append(Violation("no-permissions", None, "a consent form needs at least one permission"))
        for pid, count in Counter(p.id for p in form.permissions).items():
            if count > 1:
                report.append(Violation("duplicate-permission-id", pid, f"id used by {count} permissions"))
        for permission in form.permissions:
            report.extend(self._validate_permission(permission))
        return report

    def _validate_permission(self, permission: Permission) -> list[Violation]:
        pid = permission.id
        report: list[Violation] = []
        directive = permission.consent_directive

        names = [directive.individual, directive.directive_class, *directive.about]
        for entity in permission.entities:
            names += [entity.individual, entity.cls]
        for ctx in permission.context:
            names += [ctx.individual, *ctx.classes]
        for name in dict.fromkeys(names):
            if self._resolve(name) is None:
                report.append(Violation("unresolvable-id", pid, f"'{name}' is not a resolvable identifier"))

        declared = permission.declared()
        for name, count in Counter(declared).items():
            if count > 1:
                report.append(Violation("duplicate-entity", pid, f"'{name}' is declared {count} times"))
        if not directive.about:
            report.append(Violation("empty-about", pid, "the consent directive is about nothing"))
        for target in directive.about:
            if target not in declared:
                report.append(Violation("dangling-about", pid, f"'{target}' is not a declared entity"))

        for entity in permission.entities:
            cls = self._resolve(entity.cls)
            expected = self._kind_of.get(cls) if cls is not None else None
            if expected is not None and expected != entity.kind:
                report.append(
                    Violation(
                        "kind-mismatch",
                        pid,
                        f"'{entity.individual}' is declared {entity.kind.value} but {entity.cls} is a {expected.value} class",
                    )
                )
        for ctx in permission.context:
            if not ctx.classes:
                report.append(Violation("empty-context-classes", pid, f"context individual '{ctx.individual}' has no class"))
        return report

    def lower_to_facts(self, form: ConsentForm) -> list[Fact]:
        """Ground facts for ``form``, permission by permission, without duplicates."""
        report = self.validate(form)
        if report:
            logger.error(f"Refusing to lower invalid consent form '{form.id}': {len(report)} violations.")
            raise InvalidForm(form.id, report)

        iri = self.prefixes.iri
        facts: dict[Fact, None] = {}
        for permission in form.permissions:
            directive = permission.consent_directive
            agree = iri(directive.individual)
            facts.setdefault(ClassAssertion(iri(directive.directive_class), agree), None)
            for entity in permission.entities:
                facts.setdefault(ClassAssertion(iri(entity.cls), iri(entity.individual)), None)
            for target in directive.about:
                facts.setdefault(PropertyAssertion(iri(IS_ABOUT), agree, Individual(iri(target))), None)
            for ctx in permission.context:
                for cls in ctx.classes:
                    facts.setdefault(ClassAssertion(iri(cls), iri(ctx.individual)), None)
        logger.info(f"Lowered consent form '{form.id}' to {len(facts)} facts.")
        return list(facts)

    def effective_permissions(
        self, form: ConsentForm, rules: Sequence[Rule], axioms: Sequence[InverseAxiom] = ()
    ) -> Closure:
        return self.reasoner.run_fixpoint(self.lower_to_facts(form), rules, axioms)
