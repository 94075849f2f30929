#!/usr/bin/env python3
"""
Error Types
Exception hierarchy shared by the geometry, Fourier and discrepancy engines
"""


class DiscLabError(Exception):
    """Base class for every error raised by the laboratory"""


class DomainError(DiscLabError, ValueError):
    """Argument outside the domain of the requested operation"""


class FitError(DiscLabError):
    """Regression cannot be performed on the given rows"""


class RootError(DiscLabError):
    """A required root branch does not exist"""


class ConfigError(DiscLabError):
    """Malformed configuration text or inline spec"""
