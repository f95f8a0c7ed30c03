"""Exception hierarchy shared by all analysis modules."""


class MiningError(Exception):
    """Base class for all errors raised by this package."""


class FactsLoadError(MiningError):
    """A facts document could not be turned into a model."""


class FactsSchemaError(FactsLoadError):
    """Structurally invalid facts document; message names the offending record."""


class FactsResolutionError(FactsLoadError):
    """A record references a type or method id that does not exist."""


class UnknownElementError(MiningError, KeyError):
    """Lookup of a type, method, or candidate id that is not in the model."""

    def __str__(self) -> str:  # KeyError quotes its arg, which reads poorly
        return Exception.__str__(self)


class DegenerateCandidateError(MiningError):
    """Quality is undefined because the candidate has no rated elements."""


class ContextSizeError(MiningError):
    """The formal context exceeds the configured size guardrail."""


class NotRefinableError(MiningError):
    """A fan-in candidate's callee occurs in no grouped-calls candidate."""


class ConfigMismatchError(MiningError):
    """Inputs to a combination or oracle step come from different facts."""


class LabelValidationError(MiningError):
    """A seed label violates its invariants or references foreign elements."""


class GenerationError(MiningError):
    """A corpus specification cannot be satisfied."""
