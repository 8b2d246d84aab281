"""Error conventions shared across the package.

Precondition violations (bad user input, unusable data) raise ValueError
subclasses; InternalCheckError marks an identity that should have held by
construction, i.e. a bug, and maps to a distinct process exit code in the
command-line interface.
"""

from __future__ import annotations


class InternalCheckError(RuntimeError):
    """An internal identity that must hold by construction failed."""
