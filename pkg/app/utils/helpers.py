# app/utils/helpers.py

import logging
from pathlib import Path
from typing import Iterable

from ..exceptions import EncodingError
from ..models.closure import Binding, Justification
from ..models.facts import Fact, fact_to_text
from ..models.terms import GroundTerm, Individual, PrefixTable, format_term

logger = logging.getLogger(__name__)


def term_key(term: GroundTerm) -> tuple:
    if isinstance(term, Individual):
        return (0, 0, term.iri.expansion)
    if isinstance(term.value, int):
        return (1, 0, term.value)
    return (1, 1, term.value)


def canonical_key(fact: Fact) -> tuple:
    """Total order over facts that needs no prefix table."""
    return (fact.predicate.expansion, tuple(term_key(arg) for arg in fact.args))


def justification_key(justification: Justification) -> tuple:
    return (
        justification.source,
        tuple((name, term_key(value)) for name, value in justification.binding),
        tuple(canonical_key(f) for f in justification.antecedent_facts),
    )


def format_binding(binding: Binding, prefixes: PrefixTable) -> str:
    return ", ".join(f"?{name} = {format_term(value, prefixes)}" for name, value in binding)


def read_text(path: Path) -> str:
    """Read a UTF-8 asset, normalising line endings to LF."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        logger.error(f"'{path}' is not UTF-8 text.")
        raise EncodingError(path, e.start, e.reason) from e
    return text.replace("\r\n", "\n")


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Wrote {len(text.encode('utf-8'))} bytes to '{path}'.")


def format_diff(only_computed: Iterable[Fact], only_expected: Iterable[Fact], prefixes: PrefixTable) -> str:
    """Two-sided diff against an expected file.

    ``+`` lines are missing from the expected file, ``-`` lines should be
    removed from it; applying both makes the expected file match.
    """
    lines = [f"+{fact_to_text(f, prefixes)}" for f in only_computed]
    lines += [f"-{fact_to_text(f, prefixes)}" for f in only_expected]
    return "".join(f"{line}\n" for line in lines)
