"""Exception types shared across the package."""


class SpecError(ValueError):
    """Base class for distribution-spec problems."""


class SpecSyntaxError(SpecError):
    """Malformed spec text.  ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class SpecValueError(SpecError):
    """Structurally valid spec with an out-of-domain parameter or weight."""

    def __init__(self, message: str, offset: int = -1):
        if offset >= 0:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class EmpiricalFileError(SpecError):
    """Empirical sample file is unreadable, empty, or contains nonpositive values."""


class AtomsNotAllowedError(ValueError):
    """Operation requires an atomless distribution."""


class InfiniteExpectationError(ValueError):
    """Operation requires a finite expectation."""


class InternalConsistencyError(RuntimeError):
    """A quantity implied by the definitions failed its self-check.

    Raised, e.g., when some price on a check grid earns more than the
    computed optimal revenue plus its certified tolerance, which can only
    happen through an implementation bug.
    """


class BoundViolationError(RuntimeError):
    """An inequality that holds in exact arithmetic failed numerically."""
