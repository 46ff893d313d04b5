# app/services/builtins.py

import logging
import operator
from typing import Callable, Sequence

from ..exceptions import TypeMismatch, UnboundArgument, UnknownBuiltin
from ..models.terms import SWRLB_BASE, Iri, Literal, Term, Variable

logger = logging.getLogger(__name__)

COMPARISONS: dict[str, Callable[[int, int], bool]] = {
    "greaterThan": operator.gt,
    "greaterThanOrEqual": operator.ge,
    "lessThan": operator.lt,
    "lessThanOrEqual": operator.le,
    "equal": operator.eq,
    "notEqual": operator.ne,
}


def eval_builtin(builtin: Iri, args: Sequence[Term]) -> bool:
    """Evaluate a ``swrlb`` comparison over ground integer arguments."""
    name = builtin.expansion[len(SWRLB_BASE):] if builtin.is_builtin else ""
    compare = COMPARISONS.get(name)
    if compare is None:
        raise UnknownBuiltin(builtin.expansion)
    if len(args) != 2:
        raise TypeMismatch(builtin.qname, f"expects exactly 2 arguments, got {len(args)}")
    values = []
    for arg in args:
        if isinstance(arg, Variable):
            raise UnboundArgument(builtin.qname, arg.name)
        if not isinstance(arg, Literal) or not isinstance(arg.value, int):
            raise TypeMismatch(builtin.qname, f"expects integer literals, got {arg!r}")
        values.append(arg.value)
    return compare(values[0], values[1])
