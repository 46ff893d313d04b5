# app/exceptions.py

"""Error hierarchy shared by the parser, reasoner, consent model and CLI.

``InputError`` covers anything wrong with the files or documents handed in
(the CLI exits with 2); ``EvaluationError`` covers failures while reasoning
(exit 3).
"""


class ConsentReasonerError(Exception):
    """Base class for every error raised by the engine."""


# --- Input (parse / validation) errors ---

class InputError(ConsentReasonerError):
    pass


class RuleSyntaxError(InputError):
    def __init__(self, line: int, col: int, message: str, source: str | None = None):
        self.line = line
        self.col = col
        self.message = message
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")

    def with_source(self, source: str) -> "RuleSyntaxError":
        return RuleSyntaxError(self.line, self.col, self.message, source=source)


class UnknownPrefix(InputError):
    def __init__(self, prefix: str):
        self.prefix = prefix
        super().__init__(f"Unknown prefix '{prefix}:'")


class UnsafeRule(InputError):
    def __init__(self, rule_id: str, variable: str):
        self.rule_id = rule_id
        self.variable = variable
        super().__init__(
            f"Rule '{rule_id}' is unsafe: variable ?{variable} is not bound by a class or property atom of the antecedent"
        )


class BuiltinInConsequent(InputError):
    def __init__(self, rule_id: str):
        self.rule_id = rule_id
        super().__init__(f"Rule '{rule_id}' has a built-in atom in its consequent")


class GroundnessError(InputError):
    def __init__(self, line: int, variable: str | None = None):
        self.line = line
        self.variable = variable
        detail = f" (?{variable})" if variable else ""
        super().__init__(f"line {line}: variables are not allowed in fact files{detail}")


class SelfInverse(InputError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"line {line}: a property cannot be declared its own inverse")


class NoPrefixFor(InputError):
    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"No prefix in the table can express '{iri}'")


class InvalidForm(InputError):
    def __init__(self, form_id: str, report: list):
        self.form_id = form_id
        self.report = report
        lines = "; ".join(str(v) for v in report)
        super().__init__(f"Consent form '{form_id}' is invalid: {lines}")


class UnknownPack(InputError):
    def __init__(self, pack_id: str, known: tuple[str, ...] = ()):
        self.pack_id = pack_id
        hint = f" (known: {', '.join(known)})" if known else ""
        super().__init__(f"Unknown use-case pack '{pack_id}'{hint}")


class PackLoadError(InputError):
    def __init__(self, path, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"{path}: {cause}")


class EncodingError(InputError):
    def __init__(self, path, offset: int, reason: str):
        self.path = path
        self.offset = offset
        super().__init__(f"{path}: not valid UTF-8 at byte {offset}: {reason}")


class RunConfigError(InputError):
    pass


# --- Evaluation errors ---

class EvaluationError(ConsentReasonerError):
    pass


class UnknownBuiltin(EvaluationError):
    def __init__(self, iri: str):
        self.iri = iri
        super().__init__(f"Unknown built-in '{iri}'")


class TypeMismatch(EvaluationError):
    def __init__(self, builtin: str, detail: str):
        self.builtin = builtin
        super().__init__(f"Built-in '{builtin}': {detail}")


class UnboundArgument(EvaluationError):
    def __init__(self, builtin: str, variable: str):
        self.builtin = builtin
        self.variable = variable
        super().__init__(f"Built-in '{builtin}' evaluated with unbound ?{variable}")


class IterationLimitExceeded(EvaluationError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"Fixpoint did not converge within {limit} iterations")


class FactNotInClosure(EvaluationError):
    def __init__(self, fact_text: str):
        self.fact_text = fact_text
        super().__init__(f"Fact not in closure: {fact_text}")
