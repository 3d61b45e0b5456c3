"""Exception and warning types raised across the package."""


class IdCorrError(Exception):
    """Base class for all errors raised by idcorr."""


class DocumentParseError(IdCorrError, ValueError):
    """Input text is not well-formed JSON."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class StructureError(IdCorrError, ValueError):
    """Well-formed input whose shape the document model does not accept."""


class KeyNormalizationError(IdCorrError, ValueError):
    """A raw key normalizes to the empty token."""


class DictionaryError(IdCorrError, ValueError):
    """Invalid attribute dictionary configuration."""


class ExtractionError(IdCorrError, ValueError):
    """A document asserts conflicting values for one scalar attribute."""


class PhoneticError(IdCorrError, ValueError):
    """A word carries no letters to encode."""


class UsageError(IdCorrError, ValueError):
    """The caller asked for something the scorer cannot do."""


class ExtractionWarning(UserWarning):
    """A value was found but could not be used."""


class ScoringWarning(UserWarning):
    """A document or segment was left out of scoring."""
