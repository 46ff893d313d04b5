# app/models/terms.py

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from ..exceptions import NoPrefixFor, UnknownPrefix

LOCAL_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
PREFIX_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

DEFAULT_PREFIX = ""
SWRLB_BASE = "http://www.w3.org/2003/11/swrlb#"


@dataclass(frozen=True, eq=False, slots=True)
class Iri:
    """Identifier of a class, property, built-in or individual.

    ``prefix`` and ``local`` record how the identifier was written; equality
    and hashing use ``expansion`` only, so ``obo:X`` spelled under two prefix
    tables that map to the same base is one identifier.
    """

    prefix: str
    local: str
    expansion: str

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Iri):
            return NotImplemented
        return self.expansion == other.expansion

    def __hash__(self) -> int:
        return hash(self.expansion)

    def __repr__(self) -> str:
        return f"Iri({self.expansion!r})"

    @property
    def qname(self) -> str:
        return f"{self.prefix}:{self.local}" if self.prefix else self.local

    @property
    def is_builtin(self) -> bool:
        return self.expansion.startswith(SWRLB_BASE)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name or "?" in self.name:
            raise ValueError(f"Invalid variable name {self.name!r}")


@dataclass(frozen=True, slots=True)
class Individual:
    iri: Iri


@dataclass(frozen=True, slots=True)
class Literal:
    value: int | str

    def __post_init__(self):
        # bool is an int subclass; it is not a literal kind here
        if isinstance(self.value, bool) or not isinstance(self.value, (int, str)):
            raise ValueError(f"Literal values are integers or strings, got {self.value!r}")


Term = Union[Variable, Individual, Literal]
GroundTerm = Union[Individual, Literal]


class PrefixTable:
    """Map from prefix name to base identifier.

    The empty prefix is the default used for bare names. Tables are treated
    as immutable; ``with_overrides`` returns a new table.
    """

    def __init__(self, entries: Mapping[str, str]):
        for prefix, base in entries.items():
            if not base:
                raise ValueError(f"Prefix '{prefix}:' maps to an empty base")
            if prefix and not PREFIX_NAME.match(prefix):
                raise ValueError(f"Invalid prefix name {prefix!r}")
        self._entries = dict(entries)
        self._compact_cache: dict[str, str] = {}

    def __contains__(self, prefix: str) -> bool:
        return prefix in self._entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrefixTable):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"PrefixTable({self._entries!r})"

    def base(self, prefix: str) -> str:
        try:
            return self._entries[prefix]
        except KeyError:
            raise UnknownPrefix(prefix) from None

    def resolve(self, prefix: str, local: str) -> Iri:
        return Iri(prefix, local, self.base(prefix) + local)

    def iri(self, qname: str) -> Iri:
        """Resolve ``prefix:local`` (or a bare local name) to an Iri."""
        prefix, sep, local = qname.partition(":")
        if not sep:
            prefix, local = DEFAULT_PREFIX, qname
        if not LOCAL_NAME.match(local):
            raise ValueError(f"Invalid local name in {qname!r}")
        return self.resolve(prefix, local)

    def with_overrides(self, entries: Mapping[str, str]) -> PrefixTable:
        if not entries:
            return self
        merged = dict(self._entries)
        merged.update(entries)
        return PrefixTable(merged)

    def union(self, entries: Mapping[str, str]) -> PrefixTable:
        """A table that can write everything this one and ``entries`` can.

        Existing prefixes keep their bases. A declared name already taken by
        another base gets the first free numeric suffix (``ex1``, ``ns1`` for
        the default prefix); bases already present are skipped.
        """
        merged = dict(self._entries)
        bases = set(merged.values())
        for prefix, base in entries.items():
            if base in bases:
                continue
            name, suffix = prefix, 1
            while name in merged:
                name = f"{prefix or 'ns'}{suffix}"
                suffix += 1
            merged[name] = base
            bases.add(base)
        return self if merged == self._entries else PrefixTable(merged)

    def declarations_beyond(self, preloaded: PrefixTable) -> list[tuple[str, str]]:
        """Entries a reader holding only ``preloaded`` would need declared."""
        return sorted((p, b) for p, b in self._entries.items() if preloaded._entries.get(p) != b)

    def compact(self, iri: Iri) -> str:
        """Shortest-local qname for ``iri`` under this table (longest matching base)."""
        cached = self._compact_cache.get(iri.expansion)
        if cached is not None:
            return cached
        candidates = []
        for prefix, base in self._entries.items():
            local = iri.expansion[len(base):]
            if iri.expansion.startswith(base) and LOCAL_NAME.match(local):
                text = f"{prefix}:{local}" if prefix else local
                # longest base first, then prefix name so ties are stable
                candidates.append(((-len(base), prefix), text))
        if not candidates:
            raise NoPrefixFor(iri.expansion)
        text = min(candidates)[1]
        self._compact_cache[iri.expansion] = text
        return text


def format_term(term: Term, prefixes: PrefixTable) -> str:
    if isinstance(term, Variable):
        return f"?{term.name}"
    if isinstance(term, Individual):
        return prefixes.compact(term.iri)
    if isinstance(term.value, int):
        return str(term.value)
    escaped = term.value.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'

