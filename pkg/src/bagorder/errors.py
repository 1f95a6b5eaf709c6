"""Exception hierarchy shared by every bagorder module."""


class BagOrderError(Exception):
    """Base class for all domain errors raised by bagorder."""


class CorpusLoadError(BagOrderError):
    """The corpus file could not be read."""


class ReservedTokenError(BagOrderError):
    def __init__(self, lineno, token="*"):
        super().__init__(f"line {lineno}: reserved token {token!r} found in corpus text")
        self.lineno = lineno


class VocabFrozenError(BagOrderError):
    pass


class TableFormatError(BagOrderError):
    """A persisted table file is malformed."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class TableVersionError(BagOrderError):
    pass


class ConfigurationError(BagOrderError):
    """Invalid model or search configuration (e.g. order above the trained order)."""


class NoArrangement(BagOrderError):
    """Every partial arrangement reached probability zero."""

    def __init__(self, level):
        super().__init__(f"no arrangement with nonzero score (search died at level {level})")
        self.level = level


class SearchSizeError(BagOrderError):
    pass
