"""Exception hierarchy shared across the package.

Two failure classes are kept apart on purpose: bad *input* (a malformed
group, a tuple that is not a generating vector, a datum that does not act
freely) raises :class:`ValidationError`, while a violated internal identity
(a dimension count that disagrees with Riemann-Roch, a line-bundle degree
that is not an integer) raises :class:`ConsistencyError`.  The CLI maps the
former to exit code 1 and the latter to exit code 2.
"""


class VipclassError(Exception):
    """Base class for all package errors."""


class ValidationError(VipclassError):
    """Invalid user input or inadmissible combinatorial data."""


class ConsistencyError(VipclassError):
    """An internal cross-check failed; this always indicates a bug."""
