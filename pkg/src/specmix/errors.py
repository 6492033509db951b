from __future__ import annotations

from typing import Dict, Optional


class SpecmixError(Exception):
    """Base class for every error raised by specmix."""


class UsageError(SpecmixError):
    """Raised when command-line arguments are inconsistent."""


class ContractError(SpecmixError, ValueError):
    """Raised when an operation's precondition (shape, sign, range) is violated."""


class GenerationError(SpecmixError):
    """Raised when a synthetic library cannot be generated within the retry budget."""


class DegenerateDataError(SpecmixError):
    """Raised when data does not span enough dimensions for endmember extraction."""


class FormatError(SpecmixError):
    code = "format"


class BadMagicError(FormatError):
    code = "bad_magic"


class VersionMismatchError(FormatError):
    code = "version_mismatch"


class TruncatedPayloadError(FormatError):
    code = "truncated"


class MetadataError(FormatError):
    code = "metadata"


class LibraryParseError(FormatError):
    code = "library_parse"

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NumericError(SpecmixError):
    """Raised when a numeric computation leaves the finite range."""


class NonFiniteLossError(NumericError):
    def __init__(self, epoch: int, batch: int, terms: Dict[str, float]) -> None:
        self.epoch = epoch
        self.batch = batch
        self.terms = dict(terms)
        detail = " ".join(f"{k}={v:.6g}" for k, v in self.terms.items())
        super().__init__(f"non-finite loss at epoch={epoch} batch={batch}: {detail}")
