"""Exception hierarchy shared by all petrikit modules."""


class PetrikitError(Exception):
    """Base class for all toolkit errors."""


class StructuralError(PetrikitError):
    """A net, run, or module violates a structural invariant."""


class ParseError(PetrikitError):
    """A textual input could not be parsed."""

    def __init__(self, message: str, filename: str | None = None, line: int | None = None):
        self.filename = filename
        self.line = line
        super().__init__(message)

    def __str__(self) -> str:
        where = []
        if self.filename is not None:
            where.append(self.filename)
        if self.line is not None:
            where.append(str(self.line))
        prefix = ":".join(where)
        base = super().__str__()
        return f"{prefix}: {base}" if prefix else base


class EnablingError(PetrikitError):
    """A transition was fired without being enabled."""

    def __init__(self, message: str, transition: str | None = None,
                 deficient: tuple[str, ...] = (), index: int | None = None):
        self.transition = transition
        self.deficient = tuple(deficient)
        self.index = index
        super().__init__(message)


class ReversalError(PetrikitError):
    """A transition was unfired from a marking not covering its postset."""


class CompositionError(PetrikitError):
    """Two modules cannot be composed."""


class SynthesisError(PetrikitError):
    """A set of steps cannot be merged into one net."""


class SortError(PetrikitError):
    """A term or inscription is not well-sorted."""


class UndefinedRelationError(PetrikitError):
    """A concurrency verdict was requested for elements with no occurrences."""


class CapacityError(PetrikitError):
    """An enumeration or expansion exceeded its configured cap."""
