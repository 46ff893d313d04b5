# app/main.py

import argparse
import json
import logging
import sys
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence, TextIO, TypeVar

from pydantic import ValidationError

from .config import AppSettings, load_app_config, load_prefix_table
from .exceptions import EvaluationError, InputError, RuleSyntaxError, RunConfigError, UnknownPack
from .models.closure import Closure, Explanation
from .models.facts import fact_to_text, facts_to_text, sort_facts
from .models.run_config import RunConfig
from .models.terms import PrefixTable
from .services import (
    ConsentService,
    PackService,
    ReasonerService,
    VocabService,
    closure_to_json,
    closure_to_text,
    declared_prefixes,
    instantiate,
    parse_axioms,
    parse_fact,
    parse_facts,
    parse_pattern,
    parse_rules,
)
from .services.export_service import ClosureExport
from .services.fact_base import FactBase
from .services.pack_service import AXIOMS_FILE, DATA_FILE, PACK_IDS, RULE_FILE
from .utils.helpers import format_binding, format_diff, read_text, write_text

logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_EVALUATION_ERROR = 3

PARSERS_BY_SUFFIX = {".swrl": parse_rules, ".swf": parse_facts, ".ax": parse_axioms}


class Services:
    """Everything a command needs, built once per invocation."""

    def __init__(self, settings: AppSettings, max_iterations: int | None = None, strategy: str | None = None,
                 vocab_path: Path | None = None):
        self.settings = settings
        self.prefixes: PrefixTable = load_prefix_table(settings.PREFIX_CONFIG_PATH)
        self.reasoner = ReasonerService(
            max_iterations=max_iterations or settings.MAX_ITERATIONS,
            strategy=strategy or settings.EVALUATION_STRATEGY,
            max_workers=settings.MAX_WORKERS,
            prefixes=self.prefixes,
        )
        self.packs = PackService(settings.PACK_DIR, self.prefixes, self.reasoner)
        self.consent = ConsentService(self.prefixes, self.reasoner)
        self._vocab_path = vocab_path or settings.VOCAB_PATH

    @cached_property
    def vocab(self) -> VocabService:
        return VocabService(self._vocab_path, self.prefixes)


def build_services(settings: AppSettings, args: argparse.Namespace) -> Services:
    logger.info(f"Starting {settings.APP_NAME} ({settings.ENVIRONMENT}).")
    services = Services(
        settings,
        max_iterations=getattr(args, "max_iterations", None),
        strategy=getattr(args, "strategy", None),
        vocab_path=getattr(args, "vocab", None),
    )
    logger.info(f"Services ready: prefixes from '{settings.PREFIX_CONFIG_PATH}', packs in '{settings.PACK_DIR}'.")
    return services


# --- input loading ---

def _load(path: Path, parser: Callable[[str, PrefixTable], T], prefixes: PrefixTable) -> tuple[T, dict[str, str]]:
    """Parsed file plus the prefixes it declares for itself."""
    text = read_text(path)
    try:
        return parser(text, prefixes), declared_prefixes(text)
    except RuleSyntaxError as e:
        logger.error(f"Syntax error in '{path}'.")
        raise e.with_source(str(path)) from None
    except InputError as e:
        logger.error(f"Invalid input in '{path}'.")
        raise InputError(f"{path}: {e}") from e


def _run_config(args: argparse.Namespace, services: Services) -> RunConfig:
    facts, rules, axioms = list(args.facts or []), list(args.rules or []), list(args.axioms or [])
    if args.pack:
        directory = services.settings.PACK_DIR / args.pack
        if args.pack not in services.packs.known_ids():
            raise UnknownPack(args.pack, services.packs.known_ids())
        facts.append(directory / DATA_FILE)
        rules.append(directory / RULE_FILE)
        axioms.append(directory / AXIOMS_FILE)
    try:
        config = RunConfig(
            facts=facts,
            rules=rules,
            axioms=axioms,
            out=getattr(args, "out", None),
            format=getattr(args, "format", "text"),
            vocab=args.vocab,
            max_iterations=args.max_iterations,
            strategy=args.strategy,
            annotate=getattr(args, "annotate", False),
            derived_only=getattr(args, "derived_only", False),
        )
    except ValidationError as e:
        raise RunConfigError(str(e)) from e
    config.require_sources()
    return config


def _closure(config: RunConfig, services: Services) -> tuple[Closure, PrefixTable]:
    """Closure of the configured inputs, and the table that can write every identifier in it."""
    output = services.prefixes
    inputs: dict[str, list] = {}
    for name, paths, parser in (
        ("facts", config.facts, parse_facts),
        ("rules", config.rules, parse_rules),
        ("axioms", config.axioms, parse_axioms),
    ):
        inputs[name] = []
        for path in paths:
            items, declared = _load(path, parser, services.prefixes)
            inputs[name].extend(items)
            output = output.union(declared)
    return services.reasoner.run_fixpoint(inputs["facts"], inputs["rules"], inputs["axioms"]), output


def _emit(text: str, out: Path | None, stdout: TextIO) -> None:
    if out is not None:
        write_text(out, text)
    else:
        stdout.write(text)


# --- commands ---

def cmd_reason(args: argparse.Namespace, services: Services) -> int:
    if args.print_schema:
        sys.stdout.write(json.dumps(ClosureExport.model_json_schema(), indent=2) + "\n")
        return EXIT_OK
    config = _run_config(args, services)
    closure, prefixes = _closure(config, services)
    preloaded = services.prefixes
    if config.format == "structured":
        labels = None
        if config.annotate:
            facts = closure.derived if config.derived_only else closure.facts
            labels = services.vocab.labels_for(facts, prefixes)
        text = closure_to_json(
            closure, prefixes, derived_only=config.derived_only, labels=labels, preloaded=preloaded
        )
    else:
        text = closure_to_text(closure, prefixes, derived_only=config.derived_only, preloaded=preloaded)
        if config.annotate:
            text = services.vocab.annotate(text)
    _emit(text, config.out, sys.stdout)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, services: Services) -> int:
    if args.all == bool(args.pack_id):
        raise RunConfigError("check takes either a pack id or --all")
    pack_ids = PACK_IDS if args.all else (args.pack_id,)
    results = services.packs.check_all(pack_ids, max_workers=services.settings.MAX_WORKERS)
    failed = False
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.pack_id} ({result.derived_count} derived)")
        for note in result.lint_notes:
            print(f"note: {result.pack_id}: {note}", file=sys.stderr)
        if not result.passed:
            failed = True
            prefixes = result.prefixes or services.prefixes
            sys.stdout.write(format_diff(result.only_in_computed, result.only_in_expected, prefixes))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def render_explanation(node: Explanation, prefixes: PrefixTable, depth: int = 0) -> list[str]:
    indent = "    " * depth
    text = fact_to_text(node.fact, prefixes)
    if node.asserted:
        return [f"{indent}{text} [asserted]"]
    lines = [f"{indent}{text}"]
    for justification, children in node.derivations:
        binding = format_binding(justification.binding, prefixes)
        suffix = f" [{binding}]" if binding else ""
        lines.append(f"{indent}  <= {justification.source}{suffix}")
        for child in children:
            lines.extend(render_explanation(child, prefixes, depth + 1))
    return lines


def cmd_explain(args: argparse.Namespace, services: Services) -> int:
    config = _run_config(args, services)
    closure, prefixes = _closure(config, services)
    fact = parse_fact(args.fact, prefixes)
    tree = services.reasoner.explain(closure, fact, prefixes)
    sys.stdout.write("".join(f"{line}\n" for line in render_explanation(tree, prefixes)))
    return EXIT_OK


def cmd_lower(args: argparse.Namespace, services: Services) -> int:
    form = services.consent.load_form(args.form)
    facts = services.consent.lower_to_facts(form)
    _emit(facts_to_text(facts, services.prefixes), args.out, sys.stdout)
    return EXIT_OK


def cmd_parse(args: argparse.Namespace, services: Services) -> int:
    for path in args.files:
        if path.suffix in (".yaml", ".yml"):
            form = services.consent.load_form(path)
            report = services.consent.validate(form)
            if report:
                for violation in report:
                    print(f"{path}: {violation}", file=sys.stderr)
                return EXIT_INPUT_ERROR
            print(f"OK {path}: consent form '{form.id}', {len(form.permissions)} permissions")
            continue
        parser = PARSERS_BY_SUFFIX.get(path.suffix)
        if parser is None:
            raise RunConfigError(f"{path}: cannot tell the format from the extension '{path.suffix}'")
        items, _ = _load(path, parser, services.prefixes)
        print(f"OK {path}: {len(items)} {parser.__name__.removeprefix('parse_')}")
    return EXIT_OK


def cmd_query(args: argparse.Namespace, services: Services) -> int:
    facts, declared = _load(args.closure, parse_facts, services.prefixes)
    prefixes = services.prefixes.union(declared)
    base = FactBase(facts)
    pattern = parse_pattern(args.pattern, prefixes)
    matches = {instantiate(pattern, binding.as_dict()) for binding in base.match_pattern(pattern)}
    lines = [fact_to_text(f, prefixes) for f in sort_facts((m for m in matches if m is not None), prefixes)]
    sys.stdout.write("".join(f"{line}\n" for line in lines))
    return EXIT_OK


# --- argument parsing ---

def _add_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--facts", nargs="+", action="extend", type=Path, metavar="PATH", help="fact files (.swf)")
    parser.add_argument("--rules", nargs="+", action="extend", type=Path, metavar="PATH", help="rule files (.swrl)")
    parser.add_argument("--axioms", nargs="+", action="extend", type=Path, metavar="PATH", help="inverse axiom files (.ax)")
    parser.add_argument("--pack", help="use the facts, rule and axioms of a use-case pack")
    parser.add_argument("--vocab", type=Path, help="vocabulary catalog overriding the shipped vocab.tsv")
    parser.add_argument("--max-iterations", type=int, help="fixpoint iteration cap")
    parser.add_argument("--strategy", choices=("semi-naive", "naive"), help="evaluation strategy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="consent-reasoner", description="Rule inference over consent permissions.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    reason = sub.add_parser("reason", help="compute the closure of facts under rules and inverse axioms")
    _add_inputs(reason)
    reason.add_argument("--out", type=Path, help="write the closure here instead of stdout")
    reason.add_argument("--format", choices=("text", "structured"), default="text")
    reason.add_argument("--annotate", action="store_true", help="attach vocabulary labels")
    reason.add_argument("--derived-only", action="store_true", help="write only derived facts")
    reason.add_argument("--print-schema", action="store_true", help="print the structured export schema and exit")
    reason.set_defaults(handler=cmd_reason)

    check = sub.add_parser("check", help="compare pack closures with their expected files")
    check.add_argument("pack_id", nargs="?")
    check.add_argument("--all", action="store_true", help="check the four use-case packs")
    check.set_defaults(handler=cmd_check)

    explain = sub.add_parser("explain", help="print the justification tree of a fact")
    _add_inputs(explain)
    explain.add_argument("--fact", required=True, help="ground atom, e.g. 'obo:ICO_0000378(pi)'")
    explain.set_defaults(handler=cmd_explain)

    lower = sub.add_parser("lower", help="convert a consent form to facts")
    lower.add_argument("form", type=Path)
    lower.add_argument("--out", type=Path)
    lower.set_defaults(handler=cmd_lower)

    parse = sub.add_parser("parse", help="syntax-check rule, fact, axiom or consent-form files")
    parse.add_argument("files", nargs="+", type=Path)
    parse.set_defaults(handler=cmd_parse)

    query = sub.add_parser("query", help="match a pattern against a closure file")
    query.add_argument("closure", type=Path)
    query.add_argument("pattern")
    query.set_defaults(handler=cmd_query)
    return parser


def _configure_logging(settings: AppSettings, verbosity: int) -> None:
    level = {0: settings.LOG_LEVEL.upper(), 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_app_config()
        _configure_logging(settings, args.verbose)
        services = build_services(settings, args)
        return args.handler(args, services)
    except (InputError, ValidationError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (EvaluationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_EVALUATION_ERROR


if __name__ == "__main__":
    sys.exit(main())
