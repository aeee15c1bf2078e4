# grover_pmp/errors.py

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """
    A point sits on (or within POLE_EPS of) a coordinate singularity of the
    (theta, phi) chart: theta in {0, pi} for fields carrying cot(theta), or
    sin(phi) = 0 for the [f, g] decomposition.
    """


class PreconditionError(DomainError):
    """A documented precondition of the call does not hold."""
