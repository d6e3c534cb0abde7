"""Error taxonomy shared across the package.

Two failure classes matter to callers: a value that is malformed or outside a
function's mathematical domain (InvalidInputError), and structurally valid
parameters that fall outside the regime where a formula is proved to hold
(RegimeError).  The CLI maps the former to exit code 2 and the latter to 3.
"""


class InvalidInputError(ValueError):
    """Malformed value or argument outside a function's domain."""


class RegimeError(ValueError):
    """Parameters outside the regime in which a bound or estimator is valid."""
