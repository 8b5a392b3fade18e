"""
Exception hierarchy for the metabelian-top analysis
"""


class AnalysisError(Exception):
    """Base class for every domain error raised by the library"""


class InputError(AnalysisError, ValueError):
    """Malformed input or a violated operation precondition"""


class RankMismatchError(InputError):
    """Binary ring operation on polynomials of different ranks"""


class UnsupportedError(AnalysisError):
    """Well-formed input outside the range the exact pipelines cover"""


class InternalError(AnalysisError):
    """A self-check failed; always a bug"""
