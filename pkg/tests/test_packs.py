import shutil

import pytest

from app.config import PACKS_DIR
from app.exceptions import PackLoadError, UnknownPack
from app.models.facts import fact_to_text
from app.services import PackService
from app.services.pack_service import DATA_FILE, EXPECTED_FILE, PACK_IDS, RULE_FILE
from app.utils.helpers import format_diff

EXPECTED_COUNTS = {"uc1": 13, "uc2": 8, "uc3": 13, "uc4": 10}


@pytest.fixture
def pack_copy(tmp_path):
    """A writable copy of the shipped packs."""
    target = tmp_path / "packs"
    shutil.copytree(PACKS_DIR, target)
    return target


def test_load_uc1(packs, prefixes):
    pack = packs.load_pack("uc1")
    assert pack.rule.id == "uc1"
    assert len(pack.rule.antecedent) == 19
    assert len(pack.facts) == 19
    assert len(pack.axioms) == 1
    assert pack.narrative


def test_uc3_has_three_biospecimens(packs, prefixes):
    pack = packs.load_pack("uc3")
    biospecimen = prefixes.iri("obo:ICO_0000375")
    assert sum(1 for fact in pack.facts if fact.predicate == biospecimen) == 3


def test_unknown_pack(packs):
    with pytest.raises(UnknownPack) as err:
        packs.load_pack("uc9")
    assert "uc1" in str(err.value)


@pytest.mark.parametrize("pack_id", PACK_IDS)
def test_check_pack_passes(packs, pack_id):
    result = packs.check_pack(pack_id)
    assert result.passed
    assert result.derived_count == EXPECTED_COUNTS[pack_id]
    assert result.only_in_computed == [] and result.only_in_expected == []


@pytest.mark.parametrize("pack_id", PACK_IDS)
def test_expected_facts_are_not_asserted(packs, pack_id):
    pack = packs.load_pack(pack_id)
    assert not pack.expected & set(pack.facts)


def test_check_all_in_parallel(packs):
    results = packs.check_all(max_workers=4)
    assert [r.pack_id for r in results] == list(PACK_IDS)
    assert all(r.passed for r in results)


def test_missing_expected_line_fails_with_one_fact(pack_copy, prefixes, reasoner):
    expected = pack_copy / "uc2" / EXPECTED_FILE
    lines = expected.read_text().splitlines(keepends=True)
    removed = lines.pop(0)
    expected.write_text("".join(lines))

    result = PackService(pack_copy, prefixes, reasoner).check_pack("uc2")
    assert not result.passed
    assert result.only_in_expected == []
    [extra] = result.only_in_computed
    assert fact_to_text(extra, prefixes) == removed.strip()


def test_syntax_error_names_the_asset(pack_copy, prefixes, reasoner):
    rule = pack_copy / "uc1" / RULE_FILE
    rule.write_text(rule.read_text().replace("->", "", 1))
    with pytest.raises(PackLoadError) as err:
        PackService(pack_copy, prefixes, reasoner).load_pack("uc1")
    assert err.value.path == rule


def test_missing_pack_directory(tmp_path, prefixes, reasoner):
    with pytest.raises(PackLoadError):
        PackService(tmp_path, prefixes, reasoner).load_pack("uc1")


def test_non_utf8_asset_names_the_file(pack_copy, prefixes, reasoner):
    data = pack_copy / "uc2" / DATA_FILE
    data.write_bytes(data.read_bytes() + b"\xff\n")
    with pytest.raises(PackLoadError) as err:
        PackService(pack_copy, prefixes, reasoner).load_pack("uc2")
    assert err.value.path == data
    assert "not valid UTF-8" in str(err.value)


def test_diff_writes_prefixes_declared_by_the_pack(pack_copy, prefixes, reasoner):
    expected = pack_copy / "uc2" / EXPECTED_FILE
    expected.write_text("@prefix ex: <http://example.org/> .\n" + expected.read_text() + "ex:Extra(ex:a).\n")

    result = PackService(pack_copy, prefixes, reasoner).check_pack("uc2")
    assert not result.passed
    assert result.only_in_computed == []
    assert result.prefixes.base("ex") == "http://example.org/"
    assert format_diff(result.only_in_computed, result.only_in_expected, result.prefixes) == "-ex:Extra(ex:a).\n"
