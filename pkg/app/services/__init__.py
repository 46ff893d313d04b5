# app/services/__init__.py

from .consent_service import ConsentService
from .export_service import ClosureExport, closure_to_json, closure_to_text
from .fact_base import FactBase, diff
from .pack_service import PackService, UseCasePack
from .reasoner_service import ReasonerService, instantiate
from .rule_parser import (
    declared_prefixes,
    parse_axioms,
    parse_fact,
    parse_fact_lines,
    parse_facts,
    parse_pattern,
    parse_rules,
)
from .vocab_service import VocabService

__all__ = [
    "ConsentService",
    "ClosureExport",
    "closure_to_json",
    "closure_to_text",
    "FactBase",
    "diff",
    "PackService",
    "UseCasePack",
    "ReasonerService",
    "instantiate",
    "declared_prefixes",
    "parse_axioms",
    "parse_fact",
    "parse_fact_lines",
    "parse_facts",
    "parse_pattern",
    "parse_rules",
    "VocabService",
]
