"""Exception taxonomy shared across the toolkit.

Every failure raised by qplumb is a subclass of :class:`QPlumbError`, so
pipeline drivers can catch one type and report the stage that failed.
Parsing errors additionally derive from :class:`ParseError` and may carry
the offending line number.
"""
from __future__ import annotations


class QPlumbError(Exception):
    """Base class for all qplumb errors."""


# --- gate-list parsing ------------------------------------------------------

class ParseError(QPlumbError):
    """A line of gate-list text could not be interpreted."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class MalformedLine(ParseError):
    """The line does not follow the gate grammar."""


class DuplicateOperand(ParseError):
    """A gate names the same wire twice."""


class NegativeTime(ParseError):
    """A scheduled time coordinate below 1 (the first slot)."""


class UnknownKind(ParseError):
    """Gate kind outside the known alphabet while strict parsing is on."""


# --- generators and importers -----------------------------------------------

class BadParam(QPlumbError):
    """A generator parameter is out of range or has the wrong type."""


class RealFormatError(QPlumbError):
    """A ``.real`` file violates the supported subset grammar."""


class MalformedHeader(RealFormatError):
    """Missing or inconsistent ``.numvars``/``.variables``/``.begin`` header."""


class UnsupportedGate(RealFormatError):
    """A ``.real`` gate outside the Toffoli family t1/t2/t3."""


# --- rewriting ----------------------------------------------------------------

class RuleFormatError(QPlumbError):
    """A ``.qrules`` file or rule definition is invalid."""


class StaleSite(QPlumbError):
    """A match site no longer describes the circuit it was found in."""


class MissingTemplate(QPlumbError):
    """Decomposition hit a gate kind with no template."""


# --- scheduling ----------------------------------------------------------------

class ScheduledInput(QPlumbError):
    """An operation that needs an unscheduled circuit saw scheduled gates."""


class UnscheduledInput(QPlumbError):
    """An operation that needs a fully scheduled circuit saw unscheduled gates."""


class OffsetConflict(QPlumbError):
    """An offset pushed a gate to or before the frontier of one of its wires."""


class BadWire(QPlumbError):
    """Wire id outside the circuit."""


class BadIndex(QPlumbError):
    """Gate index outside the circuit."""


class NonLinearLifetime(QPlumbError):
    """A wire is used before its init or after its terminal measurement."""


# --- layout ----------------------------------------------------------------

class NotICM(QPlumbError):
    """Layout stages accept only init/cx/mz/mx circuits."""


class InconsistentSchedule(QPlumbError):
    """A box schedule does not cover the circuit it is paired with."""


# --- pipeline / service -------------------------------------------------------

class StageError(QPlumbError):
    """A pipeline stage failed; wraps the underlying typed error."""

    def __init__(self, stage_index: int, stage_name: str, cause: Exception):
        self.stage_index = stage_index
        self.stage_name = stage_name
        self.cause = cause
        super().__init__(f"stage {stage_index} ({stage_name}): {cause}")


class NotFound(QPlumbError):
    """Unknown session, artifact, or operation name."""
