"""Exception hierarchy shared by the library, the CLI and the API."""


class BlockGreedyError(Exception):
    """Base class for all library errors."""


class SpecError(BlockGreedyError, ValueError):
    """An instance, experiment or argument specification is invalid."""


class IncompatibleAlgorithmError(BlockGreedyError):
    """The requested algorithm cannot run on the given function or constraint."""


class NestedBatchError(BlockGreedyError, RuntimeError):
    """A batch was submitted while another batch of the same engine was running."""


class PreconditionError(BlockGreedyError, ValueError):
    """An algorithm precondition does not hold on its input."""
