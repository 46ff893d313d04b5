# app/services/reasoner_service.py

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from ..exceptions import FactNotInClosure, IterationLimitExceeded
from ..models.closure import Binding, Closure, Explanation, Justification, LintNote
from ..models.facts import ClassAssertion, Fact, PropertyAssertion, fact_to_text
from ..models.rules import Atom, BuiltinAtom, ClassAtom, InverseAxiom, PatternAtom, Rule
from ..models.terms import GroundTerm, Individual, PrefixTable, Variable
from ..utils.helpers import canonical_key, justification_key
from .builtins import eval_builtin
from .fact_base import FactBase, resolve, unify

logger = logging.getLogger(__name__)

STRATEGIES = ("semi-naive", "naive")
DEFAULT_MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class _Step:
    index: int
    atom: PatternAtom
    from_delta: bool
    checks: tuple[BuiltinAtom, ...]


@dataclass(frozen=True)
class _Plan:
    prechecks: tuple[BuiltinAtom, ...]
    steps: tuple[_Step, ...]


@lru_cache(maxsize=4096)
def _plan(rule: Rule, seed: int | None) -> _Plan:
    """Join order for ``rule``'s body; the seed atom (if any) reads from the delta.

    Atoms with every argument already fixed go first, then the atom with the
    most fixed arguments. Built-ins are tests: each one runs right after the
    step that binds its last variable, whatever its place in the text.
    """
    body = rule.body_atoms
    order: list[int] = []
    bound: set[str] = set()
    remaining = list(range(len(body)))
    if seed is not None:
        order.append(seed)
        remaining.remove(seed)
        bound.update(body[seed].variables())

    def score(i: int) -> tuple:
        args = body[i].args
        fixed = sum(1 for a in args if not isinstance(a, Variable) or a.name in bound)
        return (fixed == len(args), fixed, -i)

    while remaining:
        best = max(remaining, key=score)
        order.append(best)
        remaining.remove(best)
        bound.update(body[best].variables())

    pending = [b for b in rule.builtins if b.variables()]
    prechecks = tuple(b for b in rule.builtins if not b.variables())
    seen: set[str] = set()
    steps = []
    for i in order:
        seen.update(body[i].variables())
        ready = tuple(b for b in pending if set(b.variables()) <= seen)
        pending = [b for b in pending if b not in ready]
        steps.append(_Step(i, body[i], i == seed, ready))
    return _Plan(prechecks, tuple(steps))


def instantiate(atom: Atom, bound: Mapping[str, GroundTerm]) -> Fact | None:
    """Ground ``atom`` under ``bound``; None if the result would not be a valid fact."""
    args = [resolve(a, bound) for a in atom.args]
    if any(a is None for a in args) or not isinstance(args[0], Individual):
        return None
    if isinstance(atom, ClassAtom):
        return ClassAssertion(atom.cls, args[0].iri)
    if isinstance(atom, BuiltinAtom):
        return None
    return PropertyAssertion(atom.prop, args[0].iri, args[1])


def _check(builtin: BuiltinAtom, bound: Mapping[str, GroundTerm]) -> bool:
    return eval_builtin(builtin.builtin, [resolve(a, bound) or a for a in builtin.args])


class ReasonerService:
    """Forward chaining over a FactBase with inverse-property closure and provenance."""

    def __init__(
        self,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        strategy: str = "semi-naive",
        max_workers: int = 1,
        prefixes: PrefixTable | None = None,
    ):
        if strategy not in STRATEGIES:
            raise ValueError(f"Unknown evaluation strategy '{strategy}' (expected one of {STRATEGIES})")
        self.max_iterations = max_iterations
        self.strategy = strategy
        self.max_workers = max(1, max_workers)
        self.prefixes = prefixes

    # --- single rule / axiom application ---

    def evaluate_rule(self, fb: FactBase, rule: Rule) -> set[tuple[Fact, Justification]]:
        """Every consequent fact ``rule`` yields against ``fb``; ``fb`` is not modified."""
        return set(self._fire(rule, fb, None))

    def apply_inverse_axioms(self, fb: FactBase, axioms: Sequence[InverseAxiom]) -> set[tuple[Fact, Justification]]:
        return set(self._invert(fb, axioms, None))

    def _fire(self, rule: Rule, full: FactBase, delta: FactBase | None) -> Iterator[tuple[Fact, Justification]]:
        body = rule.body_atoms
        if delta is None:
            seeds: list[int | None] = [None]
        else:
            seeds = [i for i, atom in enumerate(body) if delta.by_predicate.get(atom.predicate)]
        for seed in seeds:
            for bound, matched in self._solutions(_plan(rule, seed), full, delta):
                justification = Justification(rule.id, Binding.of(bound), matched)
                for atom in rule.consequent:
                    fact = instantiate(atom, bound)
                    if fact is None:
                        logger.warning(f"Rule '{rule.id}' produced an ill-typed consequent {atom!r}; skipped.")
                        continue
                    yield fact, justification

    def _solutions(
        self, plan: _Plan, full: FactBase, delta: FactBase | None
    ) -> Iterator[tuple[dict[str, GroundTerm], tuple[Fact, ...]]]:
        if not all(_check(b, {}) for b in plan.prechecks):
            return
        steps = plan.steps
        bound: dict[str, GroundTerm] = {}
        matched: list[Fact | None] = [None] * len(steps)

        def walk(depth: int) -> Iterator[None]:
            if depth == len(steps):
                yield None
                return
            step = steps[depth]
            source = delta if step.from_delta else full
            for fact in source.candidates(step.atom, bound):
                added = unify(step.atom, fact, bound)
                if added is None:
                    continue
                if all(_check(b, bound) for b in step.checks):
                    matched[step.index] = fact
                    yield from walk(depth + 1)
                for name in added:
                    del bound[name]

        for _ in walk(0):
            yield bound, tuple(matched)

    def _invert(
        self, fb: FactBase, axioms: Sequence[InverseAxiom], delta: FactBase | None
    ) -> Iterator[tuple[Fact, Justification]]:
        source = fb if delta is None else delta
        for axiom in axioms:
            axiom_source = axiom.id or f"inverse({axiom.prop.qname}, {axiom.inverse.qname})"
            for forward, backward in ((axiom.prop, axiom.inverse), (axiom.inverse, axiom.prop)):
                for fact in source.by_predicate.get(forward, ()):
                    if not isinstance(fact, PropertyAssertion) or not isinstance(fact.obj, Individual):
                        continue
                    mirrored = PropertyAssertion(backward, fact.obj.iri, Individual(fact.subject))
                    if mirrored not in fb:
                        yield mirrored, Justification(axiom_source, Binding(), (fact,))

    def _rule_results(
        self, rules: Sequence[Rule], base: FactBase, delta: FactBase | None
    ) -> list[list[tuple[Fact, Justification]]]:
        if self.max_workers > 1 and len(rules) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                return list(pool.map(lambda rule: list(self._fire(rule, base, delta)), rules))
        return [list(self._fire(rule, base, delta)) for rule in rules]

    # --- fixpoint ---

    def run_fixpoint(
        self,
        facts: FactBase | Iterable[Fact],
        rules: Sequence[Rule],
        axioms: Sequence[InverseAxiom] = (),
        max_iterations: int | None = None,
        strategy: str | None = None,
    ) -> Closure:
        """Apply ``rules`` and ``axioms`` until an iteration derives nothing new.

        The input base is copied, never modified. With the semi-naive strategy
        every iteration after the first only explores bindings that use at
        least one fact derived in the iteration before.
        """
        limit = max_iterations or self.max_iterations
        strategy = strategy or self.strategy
        if strategy not in STRATEGIES:
            raise ValueError(f"Unknown evaluation strategy '{strategy}'")
        base = facts.copy() if isinstance(facts, FactBase) else FactBase(facts)
        rules, axioms = list(rules), list(axioms)
        input_facts = base.facts
        derived_at: dict[Fact, int] = {}
        logger.info(
            f"Running {strategy} fixpoint over {len(base)} facts, {len(rules)} rules, {len(axioms)} inverse axioms."
        )

        delta: FactBase | None = None
        iterations = 0
        while True:
            iterations += 1
            if iterations > limit:
                logger.error(f"Fixpoint exceeded the iteration cap of {limit}.")
                raise IterationLimitExceeded(limit)
            frontier = None if strategy == "naive" else delta

            found: dict[Fact, set[Justification]] = {}
            for results in self._rule_results(rules, base, frontier):
                for fact, justification in results:
                    if fact not in base:
                        found.setdefault(fact, set()).add(justification)
            for fact, justification in self._invert(base, axioms, frontier):
                found.setdefault(fact, set()).add(justification)
            logger.debug(f"Iteration {iterations}: {len(found)} new facts.")
            if not found:
                break

            delta = FactBase()
            for fact in sorted(found, key=canonical_key):
                base.assert_fact(fact)
                delta.assert_fact(fact)
                derived_at[fact] = iterations
                for justification in sorted(found[fact], key=justification_key):
                    base.attach_justification(fact, justification)

        closure = Closure(
            base=base,
            input_facts=input_facts,
            derived=frozenset(derived_at),
            iterations=iterations,
            derived_at=derived_at,
            lint_notes=self.lint(base, rules),
        )
        logger.info(f"Fixpoint reached after {iterations} iterations: {len(closure.derived)} facts derived.")
        return closure

    def lint(self, base: FactBase, rules: Sequence[Rule]) -> tuple[LintNote, ...]:
        """Rules with an antecedent class that has no individuals, so they never fire."""
        notes: dict[LintNote, None] = {}
        for rule in rules:
            for atom in rule.body_atoms:
                if isinstance(atom, ClassAtom) and not base.by_predicate.get(atom.cls):
                    notes.setdefault(LintNote(rule.id, atom.cls.qname), None)
        for note in notes:
            logger.warning(str(note))
        return tuple(notes)

    # --- explanations ---

    def explain(self, closure: Closure, fact: Fact, prefixes: PrefixTable | None = None) -> Explanation:
        """Justification tree for ``fact``, down to asserted leaves."""
        prefixes = prefixes or self.prefixes
        if fact not in closure.base:
            text = fact_to_text(fact, prefixes) if prefixes else repr(fact)
            raise FactNotInClosure(text)
        memo: dict[Fact, Explanation] = {}

        def build(current: Fact) -> Explanation:
            if current in memo:
                return memo[current]
            if current in closure.input_facts:
                node = Explanation(current, asserted=True)
            else:
                node = Explanation(
                    current,
                    asserted=False,
                    derivations=tuple(
                        (j, tuple(build(f) for f in j.antecedent_facts)) for j in closure.provenance.get(current, ())
                    ),
                )
            memo[current] = node
            return node

        return build(fact)
