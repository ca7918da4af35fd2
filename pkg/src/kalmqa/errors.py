"""Exception hierarchy.

Every error carries a short ``kind`` tag; batch commands write it as
``ERROR:<kind>`` instead of aborting.
"""


class KalmError(Exception):
    kind = "error"


class MalformedQuestion(KalmError):
    kind = "malformed-question"


class UnparseableSentence(KalmError):
    kind = "unparseable-sentence"

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class FrameLoadError(KalmError):
    kind = "frame-load"


class ConfigurationError(KalmError):
    kind = "configuration"


class TrainingRestrictionError(KalmError):
    kind = "training-restriction"


class UnreachableFiller(KalmError):
    kind = "unreachable-filler"


class UnsupportedConstruction(KalmError):
    kind = "unsupported-construction"


class ExtractionFailure(KalmError):
    kind = "extraction-failure"


class NotAQuestion(KalmError):
    kind = "not-a-question"


class NoInterpretation(KalmError):
    kind = "no-interpretation"


class GroupingAmbiguity(KalmError):
    kind = "grouping-ambiguity"


class IngestError(KalmError):
    kind = "ingest"


class RuleDefinitionError(KalmError):
    kind = "rule-definition"


class EvaluationError(KalmError):
    kind = "evaluation"


class PrologSyntaxError(KalmError):
    kind = "syntax"
