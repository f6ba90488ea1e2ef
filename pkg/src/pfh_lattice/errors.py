"""Exception types shared across the package."""


class ProfileError(ValueError):
    """A twist profile violates its defining constraints."""


class IncompatibleSlopeError(ValueError):
    """A slope lies outside ``[0, h'(1)]`` for the profile in use."""

    def __init__(self, msg="incompatible slope"):
        super().__init__(msg)


class LemmaInapplicable(ValueError):
    """A bound was requested outside the hypotheses that make it valid."""

    def __init__(self, msg="lemma inapplicable"):
        super().__init__(msg)


class PathError(ValueError):
    """Malformed lattice path."""


class ParityError(ValueError):
    """Grading ``k`` does not have the parity of the degree ``d``."""


class OracleLimitError(ValueError):
    """Brute-force enumeration requested beyond the configured limits."""


class CertificateError(AssertionError):
    """A numerical certificate failed (should never happen for valid input)."""
