# app/services/vocab_service.py

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import pandas as pd

from ..exceptions import EncodingError, InputError
from ..models.facts import Fact
from ..models.terms import Individual, Iri, PrefixTable
from .rule_parser import parse_fact_lines

logger = logging.getLogger(__name__)

COLUMNS = ["iri", "label", "source", "kind"]
LABEL_SOURCES = ("paper-prose", "unlabeled")
KINDS = ("class", "object-property", "data-property")


@dataclass(frozen=True)
class VocabEntry:
    iri: Iri
    label: str
    label_source: str
    kind: str


class VocabService:
    """Catalog of the ontology identifiers used by the packs, with human labels."""

    def __init__(self, vocab_path: Path, prefixes: PrefixTable):
        self.vocab_path = Path(vocab_path)
        self.prefixes = prefixes
        self.entries: dict[Iri, VocabEntry] = self._load()
        logger.info(f"Loaded {len(self.entries)} vocabulary entries from '{self.vocab_path}'.")

    def _load(self) -> dict[Iri, VocabEntry]:
        if not self.vocab_path.exists():
            raise FileNotFoundError(f"Vocabulary file not found at: {self.vocab_path}")
        try:
            df = pd.read_csv(self.vocab_path, sep="\t", dtype=str, keep_default_na=False, comment="#")
        except UnicodeDecodeError as e:
            logger.error(f"Vocabulary file '{self.vocab_path}' is not UTF-8 text.")
            raise EncodingError(self.vocab_path, e.start, e.reason) from e
        missing = [c for c in COLUMNS if c not in df.columns]
        if missing:
            raise InputError(f"{self.vocab_path}: missing columns {missing}")

        entries: dict[Iri, VocabEntry] = {}
        for row_number, row in enumerate(df.itertuples(index=False), start=2):
            try:
                iri = self.prefixes.iri(row.iri.strip())
            except (InputError, ValueError) as e:
                raise InputError(f"{self.vocab_path}:{row_number}: {e}") from e
            if iri in entries:
                raise InputError(f"{self.vocab_path}:{row_number}: duplicate entry for {row.iri}")
            if row.source not in LABEL_SOURCES:
                raise InputError(f"{self.vocab_path}:{row_number}: unknown label source '{row.source}'")
            if row.kind not in KINDS:
                raise InputError(f"{self.vocab_path}:{row_number}: unknown kind '{row.kind}'")
            entries[iri] = VocabEntry(iri, row.label.strip(), row.source, row.kind)
        return entries

    def __contains__(self, iri: Iri) -> bool:
        return iri in self.entries

    def label_of(self, iri: Iri) -> tuple[str, str]:
        """(label, label_source); uncatalogued or unlabeled identifiers fall back to the local name."""
        entry = self.entries.get(iri)
        if entry is None or entry.label_source == "unlabeled" or not entry.label:
            return iri.local, "unlabeled"
        return entry.label, entry.label_source

    def missing(self, iris: Iterable[Iri]) -> list[Iri]:
        return sorted({iri for iri in iris if iri not in self.entries}, key=lambda i: i.expansion)

    def _fact_labels(self, fact: Fact) -> list[str]:
        if fact.predicate not in self.entries:
            logger.warning(f"No vocabulary entry for {fact.predicate.qname}")
        labels = [self.label_of(fact.predicate)[0]]
        for arg in fact.args:
            if isinstance(arg, Individual) and arg.iri in self.entries:
                labels.append(self.label_of(arg.iri)[0])
        return list(dict.fromkeys(labels))

    def annotate(self, text: str) -> str:
        """Append a ``  # label`` comment to every fact line; other bytes are untouched."""
        if not text:
            return text
        lines = text.split("\n")
        for number, fact in parse_fact_lines(text, self.prefixes):
            lines[number - 1] = f"{lines[number - 1]}  # {'; '.join(self._fact_labels(fact))}"
        return "\n".join(lines)

    def labels_for(self, facts: Iterable[Fact], prefixes: PrefixTable | None = None) -> dict[str, str]:
        """Identifier -> label for every predicate in ``facts`` (structured export)."""
        prefixes = prefixes or self.prefixes
        labels: dict[str, str] = {}
        for fact in facts:
            labels[prefixes.compact(fact.predicate)] = self.label_of(fact.predicate)[0]
        return labels
