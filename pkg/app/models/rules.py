# app/models/rules.py

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..exceptions import BuiltinInConsequent, UnsafeRule
from .terms import Iri, PrefixTable, Term, Variable, format_term


def _variables(args: tuple[Term, ...]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for arg in args:
        if isinstance(arg, Variable):
            seen.setdefault(arg.name, None)
    return tuple(seen)


@dataclass(frozen=True, slots=True)
class ClassAtom:
    cls: Iri
    arg: Term

    @property
    def predicate(self) -> Iri:
        return self.cls

    @property
    def args(self) -> tuple[Term, ...]:
        return (self.arg,)

    def variables(self) -> tuple[str, ...]:
        return _variables(self.args)


@dataclass(frozen=True, slots=True)
class PropertyAtom:
    prop: Iri
    subject: Term
    obj: Term

    @property
    def predicate(self) -> Iri:
        return self.prop

    @property
    def args(self) -> tuple[Term, ...]:
        return (self.subject, self.obj)

    def variables(self) -> tuple[str, ...]:
        return _variables(self.args)


@dataclass(frozen=True, slots=True)
class BuiltinAtom:
    builtin: Iri
    args: tuple[Term, ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError(f"Built-in {self.builtin.qname} needs at least two arguments")
        if not self.builtin.is_builtin:
            raise ValueError(f"{self.builtin.expansion} is not in the swrlb namespace")

    @property
    def predicate(self) -> Iri:
        return self.builtin

    def variables(self) -> tuple[str, ...]:
        return _variables(self.args)


Atom = Union[ClassAtom, PropertyAtom, BuiltinAtom]
PatternAtom = Union[ClassAtom, PropertyAtom]


@dataclass(frozen=True)
class Rule:
    """An antecedent -> consequent pair.

    Construction enforces safety: every consequent variable, and every
    built-in variable, must occur in a class or property atom of the
    antecedent. ``id`` is a label and takes no part in equality.
    """

    id: str = field(compare=False)
    antecedent: tuple[Atom, ...]
    consequent: tuple[Atom, ...]

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise ValueError(f"Rule '{self.id}' needs a non-empty antecedent and consequent")
        if any(isinstance(atom, BuiltinAtom) for atom in self.consequent):
            raise BuiltinInConsequent(self.id)
        bound = {name for atom in self.body_atoms for name in atom.variables()}
        for atom in self.builtins + self.consequent:
            for name in atom.variables():
                if name not in bound:
                    raise UnsafeRule(self.id, name)

    @property
    def body_atoms(self) -> tuple[PatternAtom, ...]:
        return tuple(a for a in self.antecedent if not isinstance(a, BuiltinAtom))

    @property
    def builtins(self) -> tuple[BuiltinAtom, ...]:
        return tuple(a for a in self.antecedent if isinstance(a, BuiltinAtom))

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for atom in self.antecedent:
            for name in atom.variables():
                seen.setdefault(name, None)
        return tuple(seen)


@dataclass(frozen=True, slots=True)
class InverseAxiom:
    prop: Iri
    inverse: Iri
    id: str = field(default="", compare=False)

    def __post_init__(self):
        if self.prop == self.inverse:
            raise ValueError(f"{self.prop.qname} cannot be its own inverse")


def format_atom(atom: Atom, prefixes: PrefixTable) -> str:
    args = ", ".join(format_term(arg, prefixes) for arg in atom.args)
    return f"{prefixes.compact(atom.predicate)}({args})"


def format_rule(rule: Rule, prefixes: PrefixTable) -> str:
    """Canonical one-line form: atoms joined by `` ^ ``, sides by `` -> ``."""
    body = " ^ ".join(format_atom(atom, prefixes) for atom in rule.antecedent)
    head = " ^ ".join(format_atom(atom, prefixes) for atom in rule.consequent)
    return f"{body} -> {head}"


def axiom_id(prop: Iri, inverse: Iri, prefixes: PrefixTable) -> str:
    return f"inverse({prefixes.compact(prop)}, {prefixes.compact(inverse)})"
