# app/services/pack_service.py

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, TypeVar

from ..exceptions import ConsentReasonerError, PackLoadError, UnknownPack
from ..models.closure import Closure, LintNote
from ..models.facts import Fact
from ..models.rules import InverseAxiom, Rule
from ..models.terms import PrefixTable
from ..utils.helpers import read_text
from .fact_base import diff
from .reasoner_service import ReasonerService
from .rule_parser import declared_prefixes, parse_axioms, parse_facts, parse_rules

logger = logging.getLogger(__name__)

PACK_IDS = ("uc1", "uc2", "uc3", "uc4")
EXTRA_PACK_IDS = ("adult",)

DATA_FILE = "data.swf"
RULE_FILE = "rule.swrl"
AXIOMS_FILE = "axioms.ax"
EXPECTED_FILE = "expected.swf"
NARRATIVE_FILE = "narrative.txt"
FORM_FILE = "form.yaml"

T = TypeVar("T")


@dataclass(frozen=True)
class UseCasePack:
    id: str
    directory: Path
    facts: tuple[Fact, ...]
    rules: tuple[Rule, ...]
    axioms: tuple[InverseAxiom, ...]
    expected: frozenset[Fact]
    narrative: str = ""
    prefixes: PrefixTable | None = None

    @property
    def rule(self) -> Rule:
        return self.rules[0]


@dataclass
class PackCheckResult:
    pack_id: str
    passed: bool
    derived_count: int
    only_in_computed: list[Fact] = field(default_factory=list)
    only_in_expected: list[Fact] = field(default_factory=list)
    closure: Closure | None = None
    lint_notes: tuple[LintNote, ...] = ()
    prefixes: PrefixTable | None = None


class PackService:
    """Loads and checks the use-case packs under ``pack_dir``."""

    def __init__(self, pack_dir: Path, prefixes: PrefixTable, reasoner: ReasonerService):
        self.pack_dir = Path(pack_dir)
        self.prefixes = prefixes
        self.reasoner = reasoner

    def known_ids(self) -> tuple[str, ...]:
        return PACK_IDS + EXTRA_PACK_IDS

    def _read(self, path: Path) -> str:
        try:
            return read_text(path)
        except (ConsentReasonerError, OSError) as e:
            logger.error(f"Failed to read pack asset '{path}': {e}")
            raise PackLoadError(path, e) from e

    def _parse(self, path: Path, parser: Callable[[str, PrefixTable], T]) -> tuple[T, dict[str, str]]:
        """Parsed asset plus the prefixes it declares for itself."""
        text = self._read(path)
        try:
            return parser(text, self.prefixes), declared_prefixes(text)
        except ConsentReasonerError as e:
            logger.error(f"Failed to load pack asset '{path}': {e}")
            raise PackLoadError(path, e) from e

    def load_pack(self, pack_id: str) -> UseCasePack:
        if pack_id not in self.known_ids():
            raise UnknownPack(pack_id, self.known_ids())
        directory = self.pack_dir / pack_id
        if not directory.is_dir():
            raise PackLoadError(directory, FileNotFoundError("pack directory not found"))

        output = self.prefixes
        parsed = {}
        for name, parser in ((DATA_FILE, parse_facts), (RULE_FILE, parse_rules), (AXIOMS_FILE, parse_axioms),
                             (EXPECTED_FILE, parse_facts)):
            parsed[name], declared = self._parse(directory / name, parser)
            output = output.union(declared)
        rules = parsed[RULE_FILE]
        if len(rules) != 1:
            raise PackLoadError(directory / RULE_FILE, ValueError(f"expected exactly one rule, found {len(rules)}"))
        narrative_path = directory / NARRATIVE_FILE
        narrative = self._read(narrative_path) if narrative_path.exists() else ""

        pack = UseCasePack(
            id=pack_id,
            directory=directory,
            facts=tuple(parsed[DATA_FILE]),
            rules=tuple(rules),
            axioms=tuple(parsed[AXIOMS_FILE]),
            expected=frozenset(parsed[EXPECTED_FILE]),
            narrative=narrative,
            prefixes=output,
        )
        logger.info(
            f"Loaded pack '{pack_id}': {len(pack.facts)} facts, {len(pack.rule.antecedent)} antecedent atoms, "
            f"{len(pack.axioms)} axioms, {len(pack.expected)} expected facts."
        )
        return pack

    def run_pack(self, pack: UseCasePack) -> Closure:
        return self.reasoner.run_fixpoint(pack.facts, pack.rules, pack.axioms)

    def check_pack(self, pack_id: str) -> PackCheckResult:
        """Run the pack's fixpoint and compare the derived set with its expected file."""
        pack = self.load_pack(pack_id)
        closure = self.run_pack(pack)
        only_computed, only_expected = diff(closure.derived, pack.expected, pack.prefixes)
        passed = not only_computed and not only_expected
        result = PackCheckResult(
            pack_id=pack_id,
            passed=passed,
            derived_count=len(closure.derived),
            only_in_computed=only_computed,
            only_in_expected=only_expected,
            closure=closure,
            lint_notes=closure.lint_notes,
            prefixes=pack.prefixes,
        )
        if passed:
            logger.info(f"Pack '{pack_id}' passed: {result.derived_count} derived.")
        else:
            logger.warning(
                f"Pack '{pack_id}' failed: {len(only_computed)} unexpected, {len(only_expected)} missing."
            )
        return result

    def check_all(self, pack_ids: tuple[str, ...] = PACK_IDS, max_workers: int = 1) -> list[PackCheckResult]:
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                return list(pool.map(self.check_pack, pack_ids))
        return [self.check_pack(pack_id) for pack_id in pack_ids]
