"""Exception hierarchy shared by every stage of the pipeline.

Each error carries a short machine-readable ``code`` and the CLI exit status
it maps to: 1 for bad input, 2 for failures while computing scores.
"""


class ImpactError(Exception):
    code = "error"
    exit_code = 1


class InputError(ImpactError):
    code = "input"


class SchemaError(InputError, ValueError):
    code = "schema"


class DuplicateKeyError(InputError, ValueError):
    code = "duplicate-key"


class BylineError(InputError, ValueError):
    code = "byline"


class EmptyBylineError(BylineError):
    code = "empty-byline"


class OrderingError(InputError, ValueError):
    code = "ordering"


class ConfigError(InputError, ValueError):
    code = "config"


class SpecError(InputError, ValueError):
    code = "spec"


class EmptyCohortError(InputError, ValueError):
    code = "empty-cohort"


class DomainError(InputError, ValueError):
    code = "domain"


class CohortMismatchError(InputError, ValueError):
    code = "cohort-mismatch"


class ComputationError(ImpactError):
    code = "computation"
    exit_code = 2


class BaselineUndefinedError(ComputationError, LookupError):
    code = "baseline-undefined"


class MissingWeightsError(ComputationError, LookupError):
    code = "missing-weights"

    def __init__(self, sc_id, window_years):
        self.sc_id = sc_id
        self.window_years = window_years
        super().__init__(
            f"no weights row for subject category {sc_id!r}, window {window_years}"
        )


class UndefinedCorrelationError(ComputationError, ValueError):
    code = "undefined-correlation"
