"""Exception hierarchy shared by every module.

``UsageError`` marks a caller mistake (bad argument, violated precondition);
everything else under ``RbtError`` is a domain failure on otherwise valid input.
The CLI maps the two groups onto exit codes 2 and 1.
"""


class RbtError(Exception):
    pass


class UsageError(RbtError, ValueError):
    pass


class FieldMismatchError(UsageError):
    pass


class ConfigurationError(RbtError):
    pass


class InsufficientDataError(RbtError):
    pass


class InsufficientNodesError(InsufficientDataError):
    pass


class InsufficientHelpersError(RbtError):
    pass


class CorruptInputError(RbtError):
    pass


class CorruptChunkError(CorruptInputError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NotOnTradeoffError(UsageError):
    pass


class UnsupportedScenarioError(RbtError):
    pass
