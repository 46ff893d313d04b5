import pytest

from app.config import PACKS_DIR
from app.exceptions import InputError, InvalidForm
from app.models.consent_model import ConsentForm
from app.models.facts import facts_to_text
from app.services.pack_service import FORM_FILE, PACK_IDS
from app.utils.helpers import read_text


def _form(**overrides) -> ConsentForm:
    document = {
        "id": "mini",
        "permissions": [
            {
                "id": "p1",
                "directive_text": "I agree.",
                "consent_directive": {"individual": "agree", "about": ["I"]},
                "entities": [{"individual": "I", "kind": "actor", "class": "obo:ICO_0000398"}],
            }
        ],
    }
    document.update(overrides)
    return ConsentForm.model_validate(document)


def _codes(report) -> list[str]:
    return [violation.code for violation in report]


def test_minimal_form_lowers_to_three_facts(consent, prefixes):
    facts = consent.lower_to_facts(_form())
    assert facts_to_text(facts, prefixes) == (
        "obo:IAO_0000136(agree, I).\nobo:ICO_0000322(agree).\nobo:ICO_0000398(I).\n"
    )


def test_directive_class_can_be_overridden(consent, prefixes):
    form = _form()
    permission = form.permissions[0].model_copy(
        update={"consent_directive": form.permissions[0].consent_directive.model_copy(update={"directive_class": "Other"})}
    )
    facts = consent.lower_to_facts(form.model_copy(update={"permissions": [permission]}))
    assert "Other(agree)." in facts_to_text(facts, prefixes)


@pytest.mark.parametrize("pack_id", PACK_IDS)
def test_shipped_forms_are_valid(consent, pack_id):
    assert consent.validate(consent.load_form(PACKS_DIR / pack_id / FORM_FILE)) == []


@pytest.mark.parametrize("pack_id", PACK_IDS)
def test_lowering_reproduces_pack_data(consent, prefixes, pack_id):
    form = consent.load_form(PACKS_DIR / pack_id / FORM_FILE)
    lowered = facts_to_text(consent.lower_to_facts(form), prefixes)
    assert lowered == read_text(PACKS_DIR / pack_id / "data.swf")


def test_uc1_lowering_count(consent):
    form = consent.load_form(PACKS_DIR / "uc1" / FORM_FILE)
    assert len(consent.lower_to_facts(form)) == 19


def test_lowering_has_no_duplicates(consent):
    form = consent.load_form(PACKS_DIR / "uc3" / FORM_FILE)
    facts = consent.lower_to_facts(form)
    assert len(facts) == len(set(facts)) == 26


@pytest.mark.parametrize("pack_id", PACK_IDS)
def test_effective_permissions_match_pack_check(consent, packs, pack_id):
    form = consent.load_form(PACKS_DIR / pack_id / FORM_FILE)
    pack = packs.load_pack(pack_id)
    closure = consent.effective_permissions(form, pack.rules, pack.axioms)
    assert closure.facts == packs.check_pack(pack_id).closure.facts


def test_uc2_participant_seeks_medical_treatment(consent, packs, prefixes):
    form = consent.load_form(PACKS_DIR / "uc2" / FORM_FILE)
    pack = packs.load_pack("uc2")
    closure = consent.effective_permissions(form, pack.rules, pack.axioms)
    assert "obo:RO_0000056(I, medical)." in facts_to_text(closure.derived, prefixes)


def test_no_rules_derive_nothing(consent):
    assert consent.effective_permissions(_form(), []).derived == frozenset()


def test_no_permissions(consent):
    assert _codes(consent.validate(_form(permissions=[]))) == ["no-permissions"]


def test_dangling_about(consent):
    form = _form()
    directive = form.permissions[0].consent_directive.model_copy(update={"about": ["I", "ghost"]})
    permission = form.permissions[0].model_copy(update={"consent_directive": directive})
    report = consent.validate(form.model_copy(update={"permissions": [permission]}))
    assert _codes(report) == ["dangling-about"]


def test_empty_about(consent):
    form = _form()
    directive = form.permissions[0].consent_directive.model_copy(update={"about": []})
    permission = form.permissions[0].model_copy(update={"consent_directive": directive})
    assert _codes(consent.validate(form.model_copy(update={"permissions": [permission]}))) == ["empty-about"]


def test_kind_mismatch(consent):
    form = _form()
    entity = form.permissions[0].entities[0].model_copy(update={"cls": "obo:ICO_0000370"})
    permission = form.permissions[0].model_copy(update={"entities": [entity]})
    assert _codes(consent.validate(form.model_copy(update={"permissions": [permission]}))) == ["kind-mismatch"]


def test_duplicate_permission_ids(consent):
    form = _form()
    twice = form.model_copy(update={"permissions": form.permissions * 2})
    assert "duplicate-permission-id" in _codes(consent.validate(twice))


def test_unresolvable_identifier(consent):
    form = _form()
    entity = form.permissions[0].entities[0].model_copy(update={"cls": "nope:Class"})
    permission = form.permissions[0].model_copy(update={"entities": [entity]})
    assert _codes(consent.validate(form.model_copy(update={"permissions": [permission]}))) == ["unresolvable-id"]


def test_lowering_an_invalid_form_raises(consent):
    with pytest.raises(InvalidForm) as err:
        consent.lower_to_facts(_form(permissions=[]))
    assert _codes(err.value.report) == ["no-permissions"]


def test_unknown_field_is_rejected(consent, tmp_path):
    path = tmp_path / FORM_FILE
    path.write_text("id: x\npermissions: []\nsignature: me\n")
    with pytest.raises(InputError):
        consent.load_form(path)


def test_malformed_yaml(consent, tmp_path):
    path = tmp_path / FORM_FILE
    path.write_text("id: [unclosed\n")
    with pytest.raises(InputError):
        consent.load_form(path)
