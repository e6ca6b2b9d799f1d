"""Exception types shared across the package.

Names follow the externally documented error vocabulary; keep them stable.
"""


class InvalidIndex(ValueError):
    """A tower index is below 2, or an index table is malformed."""


class ParityError(ValueError):
    """Centered domains need every cumulative modulus odd."""


class DepthExceeded(ValueError):
    """A level argument exceeds what the tower/skeleton materializes."""


class NotInDomain(ValueError):
    """An element was required to lie in some D_n and does not."""


class BudgetExceeded(RuntimeError):
    """An enumeration or window materialization would exceed its cap."""


class EmptySlot(RuntimeError):
    """A construction step found no candidate symbol position (invalid tower)."""


class BeyondDepth(LookupError):
    """A block or record index refers past the constructed steps."""


class NonAbelianUnsupported(TypeError):
    """Operation defined here only for abelian towers."""


class InconclusiveTail(RuntimeError):
    """The tower declares no tail behavior, so a limit cannot be certified."""


class UnknownCheck(KeyError):
    """verify was asked for a check name that is not registered."""

    def __str__(self):
        # KeyError.__str__ is repr(key); surface the message verbatim
        return Exception.__str__(self)


class Unsupported(TypeError):
    """The requested set has no cell-union representation."""
