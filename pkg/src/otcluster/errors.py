"""Exception hierarchy.

Every failure raised by the library derives from :class:`OtClusterError`,
so callers (and the CLI) can catch one type.  Parser failures additionally
derive from :class:`OcelParseError`.
"""


class OtClusterError(ValueError):
    pass


class OcelParseError(OtClusterError):
    """Input could not be turned into a valid :class:`~otcluster.ocel_io.OcelLog`."""


class MalformedJson(OcelParseError):
    pass


class MissingRequiredKey(OcelParseError):
    pass


class DanglingObjectRef(OcelParseError):
    pass


class BadTimestamp(OcelParseError):
    pass


class DuplicateId(OcelParseError):
    pass


class UnsupportedFormat(OcelParseError):
    pass


class UnknownObject(OtClusterError):
    pass


class InvalidSpec(OtClusterError):
    pass


class UnknownTask(OtClusterError):
    pass


class UnknownObjectType(OtClusterError):
    pass


class ThresholdOutOfRange(OtClusterError):
    pass


class EmptyTypeSet(OtClusterError):
    pass


class EmptyLog(OtClusterError):
    pass
