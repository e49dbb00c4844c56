"""Exception types shared across the package."""

from __future__ import annotations


class MorsequiverError(Exception):
    """Base class for all package errors."""


class MeshParseError(MorsequiverError):
    """Malformed mesh+field input."""


class NonManifoldError(MorsequiverError):
    """Vertex link is not a sphere of the right dimension."""

    def __init__(self, vertex, message=""):
        self.vertex = vertex
        super().__init__(message or f"non-manifold link at vertex {vertex}")


class ClassificationError(MorsequiverError):
    """Critical classification could not be completed."""


class InvariantError(MorsequiverError):
    """An internal consistency check failed; names the failing check."""

    def __init__(self, check: str, message=""):
        self.check = check
        super().__init__(message or f"invariant failed: {check}")


class LevellingError(MorsequiverError):
    """A levelling function violates one of its defining conditions."""

    def __init__(self, condition: str, message=""):
        self.condition = condition
        super().__init__(message or f"levelling condition {condition} violated")
