import re

import pytest

from app.config import PACKS_DIR
from app.exceptions import InputError
from app.services import VocabService, parse_axioms, parse_facts, parse_rules
from app.services.pack_service import AXIOMS_FILE, DATA_FILE, EXPECTED_FILE, RULE_FILE
from app.utils.helpers import read_text

LABEL_COMMENT = re.compile(r"  # [^#\n]*$", re.MULTILINE)


def strip_labels(text: str) -> str:
    return LABEL_COMMENT.sub("", text)


def test_label_from_prose(vocab, prefixes):
    assert vocab.label_of(prefixes.iri("obo:ICO_0000378")) == ("designated permitted actor", "paper-prose")
    assert vocab.label_of(prefixes.iri("obo:IAO_0000136")) == ("is about", "paper-prose")


def test_unlabeled_falls_back_to_local_name(vocab, prefixes):
    assert vocab.label_of(prefixes.iri("obo:ICO_0000121")) == ("ICO_0000121", "unlabeled")
    assert vocab.label_of(prefixes.iri("obo:NOT_CATALOGUED")) == ("NOT_CATALOGUED", "unlabeled")


def test_annotate_fact_line(vocab):
    assert vocab.annotate("obo:RO_0000056(I, legalconsent).\n") == (
        "obo:RO_0000056(I, legalconsent).  # participates in\n"
    )


def test_annotate_unlabeled_line_shows_local_name(vocab):
    assert vocab.annotate("obo:ICO_0000105(explained).\n") == "obo:ICO_0000105(explained).  # ICO_0000105\n"


def test_annotate_empty(vocab):
    assert vocab.annotate("") == ""


def test_annotate_only_adds_comments(vocab):
    text = read_text(PACKS_DIR / "uc3" / EXPECTED_FILE)
    annotated = vocab.annotate(text)
    assert annotated != text
    assert strip_labels(annotated) == text


def test_annotate_keeps_an_existing_comment(vocab):
    text = "obo:ICO_0000382(pi).  # mine\n"
    annotated = vocab.annotate(text)
    assert annotated == "obo:ICO_0000382(pi).  # mine  # principal investigator\n"
    assert strip_labels(annotated) == text


def test_catalog_covers_every_pack_predicate(vocab, prefixes):
    predicates = set()
    for directory in sorted(p for p in PACKS_DIR.iterdir() if p.is_dir()):
        for name in (DATA_FILE, EXPECTED_FILE):
            predicates |= {f.predicate for f in parse_facts(read_text(directory / name), prefixes)}
        for rule in parse_rules(read_text(directory / RULE_FILE), prefixes):
            predicates |= {a.predicate for a in rule.antecedent + rule.consequent if not a.predicate.is_builtin}
        for axiom in parse_axioms(read_text(directory / AXIOMS_FILE), prefixes):
            predicates |= {axiom.prop, axiom.inverse}
    assert vocab.missing(predicates) == []


def test_duplicate_entries_are_rejected(tmp_path, prefixes):
    path = tmp_path / "vocab.tsv"
    path.write_text("iri\tlabel\tsource\tkind\nobo:X_1\t\tunlabeled\tclass\nobo:X_1\t\tunlabeled\tclass\n")
    with pytest.raises(InputError):
        VocabService(path, prefixes)


def test_unknown_kind_is_rejected(tmp_path, prefixes):
    path = tmp_path / "vocab.tsv"
    path.write_text("iri\tlabel\tsource\tkind\nobo:X_1\tx\tpaper-prose\tindividual\n")
    with pytest.raises(InputError):
        VocabService(path, prefixes)


def test_missing_file(tmp_path, prefixes):
    with pytest.raises(FileNotFoundError):
        VocabService(tmp_path / "absent.tsv", prefixes)
