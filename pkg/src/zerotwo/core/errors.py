"""Exception hierarchy for the protocol core."""


class ZeroTwoError(Exception):
    """Base class for every error raised by this package."""


class EncodingError(ZeroTwoError):
    """A value cannot be serialized (oversize frame, negative integer)."""


class GroupError(ZeroTwoError):
    """Invalid group parameters or misuse of an injected test profile."""


class InvalidSecretError(ZeroTwoError):
    """A derived secret fell on a forbidden value; caller must retry."""


class ProtocolViolation(ZeroTwoError):
    """A peer-supplied protocol value is outside its legal range."""


class AuthenticationFailed(ZeroTwoError):
    """Proof verification failed.

    Deliberately carries no detail: a wrong secret and a tampered
    transcript are indistinguishable to the caller.
    """

    def __init__(self) -> None:
        super().__init__("authentication failed")


class DurationRejected(ZeroTwoError):
    """Requested session duration exceeds the enforced maximum."""


class SessionExpired(ZeroTwoError):
    """The session key is past its validity window."""


class RandomnessExhausted(ZeroTwoError):
    """Bounded resampling failed to produce an acceptable value."""
