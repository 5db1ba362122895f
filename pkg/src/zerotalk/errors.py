"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new errors should subclass
one of the four families below rather than raising bare exceptions.
"""


class ZerotalkError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ZerotalkError):
    """A model file is malformed (bad JSON, missing or mistyped keys)."""


class ModelError(ZerotalkError):
    """Source data is structurally readable but violates a model invariant."""


class PartitionInvalid(ModelError):
    """A user partition does not cover the user set, overlaps, or is too coarse."""


class UnsupportedModel(ZerotalkError):
    """The requested operation is not defined for this source model."""


class NotTwoUsers(UnsupportedModel):
    """The hypergraphical conversion is only defined for two-user linear sources."""


class ExpansionTooLarge(ZerotalkError):
    """Enumerating the joint support would exceed the configured limit."""


class TooManyUsers(ZerotalkError):
    """Exhaustive partition search was asked for more users than the cap allows."""


class SubspaceNotContained(ZerotalkError):
    """A basis-extension or solve was asked for a space that is not contained."""


class WitnessInvalid(ZerotalkError):
    """A common-function witness is inconsistent with the source it claims to fit."""


class InternalRankError(ZerotalkError):
    """A rank or entropy identity that must hold by construction failed; a bug."""
