"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class QueueLayError(Exception):
    """Base class for all errors raised by queuelay."""


class InputError(QueueLayError):
    """The caller supplied something the operation cannot accept.

    Malformed JSON, a rotation system that does not describe an embedding,
    a disconnected graph where a connected one is required, and similar.
    The CLI maps this to exit code 1.
    """


class InvariantError(QueueLayError):
    """A structural guarantee failed at runtime.

    Raised when a structural check (well-layeredness of the subdivision,
    range of a group index, a final layout verification) does not hold.
    This always indicates a bug, never bad input; the CLI maps it to exit
    code 2 and prints ``witness``.
    """

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness
