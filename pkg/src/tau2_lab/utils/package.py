###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Package-related utility functions."""
from __future__ import annotations

__all__ = (
    'has_package',
)


def has_package(package: str) -> bool:
    """Check if the given package is available.

    :param package: Package name to search; hyphen-insensitive.
    :return: Whether the given package name is installed to the current environment.
    """
    from importlib.metadata import distributions
    package = package.replace('-', '_').lower()

    return any(
        package == (dist.metadata['Name'] or '').replace('-', '_').lower()
        for dist in distributions()
    )
