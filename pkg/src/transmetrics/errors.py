"""Exception hierarchy.

Everything raised for bad input data derives from :class:`DataError`; the
command-line driver maps that to exit status 1 and usage problems to 2.
"""


class TransmetricsError(Exception):
    """Base class for all errors raised by this package."""


class DataError(TransmetricsError):
    """The input data cannot be processed as requested."""


class ParseError(DataError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class AlignmentError(DataError):
    pass


class MissingTagsError(DataError):
    def __init__(self, sentence_index, message=None):
        self.sentence_index = sentence_index
        super().__init__(message or f"sentence {sentence_index} has untagged tokens")


class EmptyCorpusError(DataError):
    pass


class ZeroLengthSourceError(DataError, ZeroDivisionError):
    pass


class ZeroVarianceError(DataError):
    pass


class BootstrapDegenerateError(DataError):
    pass


class ConfigurationError(DataError):
    """Dataset layout does not fit the requested operation (e.g. no HT variant)."""


class IncompleteResultsError(DataError):
    pass
