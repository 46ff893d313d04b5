import random
import time

import pytest

from app.models.rules import Rule
from app.services import ReasonerService, closure_to_text
from app.services.pack_service import EXTRA_PACK_IDS, PACK_IDS

from .generators import Vocabulary, program_size, random_facts, random_program, random_rule

ALL_PACKS = PACK_IDS + EXTRA_PACK_IDS


def _shuffled(rng: random.Random, items) -> list:
    items = list(items)
    rng.shuffle(items)
    return items


@pytest.mark.parametrize("pack_id", ALL_PACKS)
def test_closure_is_independent_of_input_order(packs, reasoner, prefixes, pack_id):
    pack = packs.load_pack(pack_id)
    reference = closure_to_text(reasoner.run_fixpoint(pack.facts, pack.rules, pack.axioms), prefixes)
    rng = random.Random(pack_id)
    for _ in range(100):
        rules = [Rule(r.id, tuple(_shuffled(rng, r.antecedent)), tuple(_shuffled(rng, r.consequent))) for r in pack.rules]
        closure = reasoner.run_fixpoint(_shuffled(rng, pack.facts), _shuffled(rng, rules), _shuffled(rng, pack.axioms))
        assert closure_to_text(closure, prefixes) == reference


@pytest.mark.parametrize("pack_id", ALL_PACKS)
def test_naive_and_semi_naive_agree_on_packs(packs, prefixes, pack_id):
    pack = packs.load_pack(pack_id)
    semi = ReasonerService(strategy="semi-naive").run_fixpoint(pack.facts, pack.rules, pack.axioms)
    naive = ReasonerService(strategy="naive").run_fixpoint(pack.facts, pack.rules, pack.axioms)
    assert semi.facts == naive.facts
    assert semi.iterations == naive.iterations


@pytest.mark.parametrize("seed", range(200))
def test_naive_and_semi_naive_agree_on_random_programs(prefixes, seed):
    rng = random.Random(seed)
    facts, rules, axioms = random_program(rng, prefixes, program_size(seed), rng.randint(1, 20), rng.randint(0, 3))
    semi = ReasonerService(strategy="semi-naive").run_fixpoint(facts, rules, axioms)
    naive = ReasonerService(strategy="naive").run_fixpoint(facts, rules, axioms)
    assert semi.facts == naive.facts
    assert semi.derived_at == naive.derived_at
    assert semi.iterations <= len(semi.derived) + 1


@pytest.mark.parametrize("seed", range(40))
def test_closure_is_monotone(prefixes, seed):
    rng = random.Random(1000 + seed)
    facts, rules, axioms = random_program(rng, prefixes, rng.choice([20, 80]), rng.randint(1, 10), rng.randint(0, 2))
    subset = rng.sample(facts, len(facts) // 2)
    reasoner = ReasonerService()
    assert reasoner.run_fixpoint(subset, rules, axioms).facts <= reasoner.run_fixpoint(facts, rules, axioms).facts


@pytest.mark.parametrize("seed", range(40))
def test_fixpoint_is_idempotent(prefixes, seed):
    rng = random.Random(2000 + seed)
    facts, rules, axioms = random_program(rng, prefixes, rng.choice([20, 80]), rng.randint(1, 10), rng.randint(0, 2))
    reasoner = ReasonerService()
    first = reasoner.run_fixpoint(facts, rules, axioms)
    second = reasoner.run_fixpoint(first.base, rules, axioms)
    assert second.derived == frozenset()
    assert second.iterations == 1


@pytest.mark.parametrize("seed", range(40))
def test_inverse_closure_is_symmetric(prefixes, seed):
    rng = random.Random(3000 + seed)
    facts, rules, axioms = random_program(rng, prefixes, 60, rng.randint(0, 8), rng.randint(1, 3))
    closure = ReasonerService().run_fixpoint(facts, rules, axioms)
    by_predicate = closure.base.by_predicate
    for axiom in axioms:
        for prop, inverse in ((axiom.prop, axiom.inverse), (axiom.inverse, axiom.prop)):
            mirrored = {(f.obj.iri, f.subject) for f in by_predicate.get(inverse, ()) if hasattr(f.obj, "iri")}
            forward = {(f.subject, f.obj.iri) for f in by_predicate.get(prop, ()) if hasattr(f.obj, "iri")}
            assert forward <= mirrored


@pytest.mark.slow
def test_desk_scale_smoke(prefixes):
    rng = random.Random(7)
    vocab = Vocabulary(prefixes, n_classes=30, n_props=10)
    facts = random_facts(rng, vocab, 10_000, 5_000)
    rules = []
    while len(rules) < 50:
        rule = random_rule(rng, vocab, f"r{len(rules)}")
        # chains of property compositions make the closure quadratic; keep to the linear shapes
        if len(rule.body_atoms) == 2 and all(len(a.args) == 2 for a in rule.body_atoms):
            continue
        rules.append(rule)

    started = time.perf_counter()
    semi = ReasonerService().run_fixpoint(facts, rules)
    elapsed = time.perf_counter() - started
    naive = ReasonerService(strategy="naive").run_fixpoint(facts, rules)

    assert elapsed < 5
    assert semi.facts == naive.facts
