# app/services/rule_parser.py

"""Readers for the three text formats: ``.swrl`` rules, ``.swf`` facts, ``.ax`` axioms.

Rules are written exactly as in the consent-permission listings::

    obo:ICO_0000322(?agree) ^ obo:IAO_0000136(?agree, ?pi) ^ obo:ICO_0000382(?pi)
    -> obo:ICO_0000378(?pi)

Atoms are separated by ``^`` and the two sides by ``->``; whitespace and line
breaks inside a rule do not matter and a trailing ``.`` is optional.
``#`` starts a comment anywhere; a ``# id: <name>`` comment names the rule
that follows it. ``@prefix p: <base> .`` lines override the preloaded
prefix table for the rest of the file.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Any

import pyparsing as pp

from ..exceptions import BuiltinInConsequent, GroundnessError, RuleSyntaxError, SelfInverse
from ..models.facts import ClassAssertion, Fact, PropertyAssertion
from ..models.rules import (
    Atom,
    BuiltinAtom,
    ClassAtom,
    InverseAxiom,
    PatternAtom,
    PropertyAtom,
    Rule,
    axiom_id,
    format_rule,
)
from ..models.terms import Individual, Iri, Literal, PrefixTable, Term, Variable

logger = logging.getLogger(__name__)

__all__ = [
    "parse_rules",
    "parse_facts",
    "parse_fact_lines",
    "parse_fact",
    "parse_axioms",
    "parse_pattern",
    "declared_prefixes",
    "format_rule",
]

PREFIX_DIRECTIVE = re.compile(
    r"^[ \t]*@prefix[ \t]+(?P<prefix>[A-Za-z][A-Za-z0-9_]*)?:[ \t]*<(?P<base>[^>\s]*)>[ \t]*\.[ \t]*(?:#.*)?$"
)
RULE_ID_COMMENT = re.compile(r"^[ \t]*#[ \t]*id:[ \t]*(?P<id>[A-Za-z0-9_.\-]+)[ \t]*$", re.MULTILINE)


@dataclass(frozen=True)
class _Name:
    text: str
    loc: int


@dataclass(frozen=True)
class _Var:
    name: str
    loc: int


@dataclass(frozen=True)
class _Lit:
    value: int | str
    loc: int


@dataclass(frozen=True)
class _RawAtom:
    name: _Name
    args: tuple[Any, ...]


@dataclass(frozen=True)
class _RawRule:
    antecedent: tuple[_RawAtom, ...]
    consequent: tuple[_RawAtom, ...]


def _integer(s: str, loc: int, toks: pp.ParseResults) -> _Lit:
    text = toks[0]
    digits = text.lstrip("+-")
    if len(digits) > 1 and digits.startswith("0"):
        raise pp.ParseFatalException(s, loc, f"integer literal '{text}' has a leading zero")
    return _Lit(int(text), loc)


class SwrlGrammar:
    """pyparsing grammar shared by the rule, fact, axiom and pattern readers."""

    def __init__(self):
        self.qname = pp.Regex(r"(?:[A-Za-z][A-Za-z0-9_]*:)?[A-Za-z_][A-Za-z0-9_]*").set_name("identifier")
        self.qname.set_parse_action(lambda s, loc, toks: _Name(toks[0], loc))
        self.variable = pp.Regex(r"\?[A-Za-z_][A-Za-z0-9_]*").set_name("variable")
        self.variable.set_parse_action(lambda s, loc, toks: _Var(toks[0][1:], loc))
        self.integer = pp.Regex(r"[+-]?[0-9]+").set_name("integer")
        self.integer.set_parse_action(_integer)
        self.string = pp.QuotedString('"', esc_char="\\").set_name("string")
        self.string.set_parse_action(lambda s, loc, toks: _Lit(toks[0], loc))
        self.term = (self.variable | self.integer | self.string | self.qname).set_name("term")

        lpar, rpar = pp.Suppress("("), pp.Suppress(")")
        self.atom = self.qname + lpar - pp.Group(pp.Optional(pp.delimited_list(self.term)), aslist=True) + rpar
        self.atom.set_name("atom")
        self.atom.set_parse_action(lambda s, loc, toks: _RawAtom(toks[0], tuple(toks[1])))

        caret = pp.Suppress("^")
        arrow = pp.Suppress("->")
        atoms = pp.Group(self.atom + pp.ZeroOrMore(caret - self.atom), aslist=True)
        self.rule = atoms - arrow - atoms + pp.Optional(pp.Suppress("."))
        self.rule.set_parse_action(lambda s, loc, toks: _RawRule(tuple(toks[0]), tuple(toks[1])))
        self.rule_file = pp.ZeroOrMore(self.rule) + pp.StringEnd()
        self.rule_file.ignore(pp.python_style_comment)

        self.fact_line = self.atom + pp.Suppress(".") + pp.StringEnd()
        self.fact_line.ignore(pp.python_style_comment)

        self.pattern = self.atom + pp.Optional(pp.Suppress(".")) + pp.StringEnd()
        self.pattern.ignore(pp.python_style_comment)

        self.axiom_line = pp.Keyword("@inverse") - self.qname - self.qname - pp.Suppress(".") - pp.StringEnd()
        self.axiom_line.ignore(pp.python_style_comment)


_GRAMMAR = SwrlGrammar()


def _syntax_error(text: str, loc: int, message: str, line_offset: int = 0) -> RuleSyntaxError:
    return RuleSyntaxError(pp.lineno(loc, text) + line_offset, pp.col(loc, text), message)


def _from_pyparsing(err: pp.ParseBaseException, line_offset: int = 0) -> RuleSyntaxError:
    return RuleSyntaxError(err.lineno + line_offset, err.col, err.msg)


def _directives(text: str, prefixes: PrefixTable, keep: tuple[str, ...] = ()) -> tuple[PrefixTable, str]:
    """Apply ``@prefix`` lines and blank them out so offsets stay valid."""
    overrides: dict[str, str] = {}
    lines = text.split("\n")
    for number, line in enumerate(lines, start=1):
        stripped = line.lstrip()
        if not stripped.startswith("@"):
            continue
        match = PREFIX_DIRECTIVE.match(line)
        if match:
            if not match.group("base"):
                raise RuleSyntaxError(number, line.index("<") + 1, "prefix maps to an empty base")
            overrides[match.group("prefix") or ""] = match.group("base")
            lines[number - 1] = " " * len(line)
        elif not any(stripped.startswith(word) for word in keep):
            raise RuleSyntaxError(number, len(line) - len(stripped) + 1, f"unknown directive '{stripped.split()[0]}'")
    return prefixes.with_overrides(overrides), "\n".join(lines)


def declared_prefixes(text: str) -> dict[str, str]:
    """The document's own ``@prefix`` declarations; a later line wins."""
    declared: dict[str, str] = {}
    for line in text.split("\n"):
        match = PREFIX_DIRECTIVE.match(line)
        if match and match.group("base"):
            declared[match.group("prefix") or ""] = match.group("base")
    return declared


def _iri(name: _Name, prefixes: PrefixTable) -> Iri:
    return prefixes.iri(name.text)


def _term(raw: Any, prefixes: PrefixTable) -> Term:
    if isinstance(raw, _Var):
        return Variable(raw.name)
    if isinstance(raw, _Lit):
        return Literal(raw.value)
    return Individual(_iri(raw, prefixes))


def _atom(raw: _RawAtom, prefixes: PrefixTable, text: str, literal_objects: bool = False, line_offset: int = 0) -> Atom:
    iri = _iri(raw.name, prefixes)
    args = tuple(_term(a, prefixes) for a in raw.args)
    where = raw.name.loc
    if iri.is_builtin:
        if len(args) < 2:
            raise _syntax_error(text, where, f"built-in {raw.name.text} needs at least two arguments", line_offset)
        return BuiltinAtom(iri, args)
    for position, (arg_raw, arg) in enumerate(zip(raw.args, args)):
        if isinstance(arg, Literal) and not (literal_objects and position == 1):
            raise _syntax_error(text, arg_raw.loc, "literals are only allowed as built-in arguments", line_offset)
    if len(args) == 1:
        return ClassAtom(iri, args[0])
    if len(args) == 2:
        return PropertyAtom(iri, args[0], args[1])
    raise _syntax_error(text, where, f"{raw.name.text} takes one or two arguments, got {len(args)}", line_offset)


def parse_rules(text: str, prefixes: PrefixTable) -> list[Rule]:
    """Parse a ``.swrl`` document into safety-checked rules, in file order."""
    prefixes, body = _directives(text, prefixes)
    try:
        raw_rules = list(_GRAMMAR.rule_file.parse_string(body, parse_all=True))
    except pp.ParseBaseException as err:
        raise _from_pyparsing(err) from None

    id_comments = [(m.start(), m.group("id")) for m in RULE_ID_COMMENT.finditer(body)]
    rules: list[Rule] = []
    previous_end = -1
    for ordinal, raw in enumerate(raw_rules, start=1):
        start = raw.antecedent[0].name.loc
        named = [rule_id for loc, rule_id in id_comments if previous_end < loc < start]
        rule_id = named[-1] if named else f"rule{ordinal}"
        previous_end = raw.consequent[-1].name.loc

        antecedent = tuple(_atom(a, prefixes, body) for a in raw.antecedent)
        consequent = tuple(_atom(a, prefixes, body) for a in raw.consequent)
        if any(isinstance(atom, BuiltinAtom) for atom in consequent):
            raise BuiltinInConsequent(rule_id)
        rules.append(Rule(rule_id, antecedent, consequent))
        logger.debug(f"Parsed rule '{rule_id}': {len(antecedent)} antecedent / {len(consequent)} consequent atoms.")
    return rules


def _fact(atom: Atom, text: str, loc: int, line: int) -> Fact:
    if isinstance(atom, BuiltinAtom):
        raise RuleSyntaxError(line, pp.col(loc, text), "built-in atoms cannot be asserted as facts")
    for arg in atom.args:
        if isinstance(arg, Variable):
            raise GroundnessError(line, arg.name)
    if isinstance(atom, ClassAtom):
        return ClassAssertion(atom.cls, atom.arg.iri)
    return PropertyAssertion(atom.prop, atom.subject.iri, atom.obj)


def parse_fact_lines(text: str, prefixes: PrefixTable) -> list[tuple[int, Fact]]:
    """Parse a ``.swf`` document, keeping the line number of every fact."""
    prefixes, body = _directives(text, prefixes)
    facts: list[tuple[int, Fact]] = []
    for number, line in enumerate(body.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            raw = _GRAMMAR.fact_line.parse_string(line, parse_all=True)[0]
        except pp.ParseBaseException as err:
            raise _from_pyparsing(err, line_offset=number - 1) from None
        atom = _atom(raw, prefixes, line, literal_objects=True, line_offset=number - 1)
        facts.append((number, _fact(atom, line, raw.name.loc, number)))
    return facts


def parse_facts(text: str, prefixes: PrefixTable) -> list[Fact]:
    """Parse a ``.swf`` document: one period-terminated ground atom per line."""
    return [fact for _, fact in parse_fact_lines(text, prefixes)]


def parse_fact(text: str, prefixes: PrefixTable) -> Fact:
    """Parse a single ground atom; the trailing period is optional."""
    atom = parse_pattern(text, prefixes)
    return _fact(atom, text, 0, 1)


def parse_pattern(text: str, prefixes: PrefixTable) -> PatternAtom:
    """Parse one class or property atom that may contain variables (used by ``query``)."""
    try:
        raw = _GRAMMAR.pattern.parse_string(text.strip(), parse_all=True)[0]
    except pp.ParseBaseException as err:
        raise _from_pyparsing(err) from None
    atom = _atom(raw, prefixes, text.strip(), literal_objects=True)
    if isinstance(atom, BuiltinAtom):
        raise RuleSyntaxError(1, 1, "patterns must be class or property atoms")
    return atom


def parse_axioms(text: str, prefixes: PrefixTable) -> list[InverseAxiom]:
    """Parse an ``.ax`` document of ``@inverse <p> <q> .`` lines."""
    prefixes, body = _directives(text, prefixes, keep=("@inverse",))
    axioms: list[InverseAxiom] = []
    for number, line in enumerate(body.split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            _, prop_name, inverse_name = _GRAMMAR.axiom_line.parse_string(line, parse_all=True)
        except pp.ParseBaseException as err:
            raise _from_pyparsing(err, line_offset=number - 1) from None
        prop, inverse = _iri(prop_name, prefixes), _iri(inverse_name, prefixes)
        if prop == inverse:
            raise SelfInverse(number)
        axioms.append(InverseAxiom(prop, inverse, id=axiom_id(prop, inverse, prefixes)))
    return axioms
