###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Custom :py:class:`Exception`'s and excepthook implementation."""
from __future__ import annotations

__all__ = (
    'ConfigError',
    'DegenerateBasis',
    'DegenerateSpectrum',
    'DimMismatch',
    'ExceptHookCallable',
    'ExceptionEvent',
    'ExceptionHook',
    'InvalidN',
    'InvalidParams',
    'LabError',
    'NonConvergence',
    'NotPeriodic',
    'NotScalar',
    'SingularLeading',
    'SiteOutOfRange',
    'SizeError',
    'ZeroPolynomial',
    'ZeroProjection',
    'ZeroRoot',
)

import sys
from collections.abc import Callable
from types import TracebackType
from typing import TypeAlias

from .events import Event
from .events import EventBus

ExceptHookCallable: TypeAlias = Callable[[type[BaseException], BaseException, TracebackType], None]


class LabError(Exception):
    """Base class of every error raised by tau2_lab."""


class InvalidN(LabError, ValueError):
    """Clock dimension N is below 2."""


class SiteOutOfRange(LabError, IndexError):
    """Site index outside 1..L."""


class DimMismatch(LabError, ValueError):
    """Operands do not share a matrix dimension."""


class NonConvergence(LabError, ArithmeticError):
    """An iteration failed to reach its tolerance within its iteration cap."""


class ZeroPolynomial(LabError, ValueError):
    """All coefficients of a polynomial vanish."""


class DegenerateSpectrum(LabError, ArithmeticError):
    """Two spectral values are closer than the minimum gap."""


class InvalidParams(LabError, ValueError):
    """Model couplings violate an invariant (wrong length or a vanishing b)."""


class NotScalar(LabError, ArithmeticError):
    """A matrix expected to be a multiple of the identity is not."""


class NotPeriodic(LabError, ArithmeticError):
    """A power of t not divisible by N survived in the functional product."""


class ZeroRoot(LabError, ArithmeticError):
    """A mode parameter r_k vanishes."""


class SingularLeading(LabError, ZeroDivisionError):
    """Constant term of the transfer matrix is too small to invert."""


class ZeroProjection(LabError, ArithmeticError):
    """Projection of every trial vector onto the ground sector vanished."""


class DegenerateBasis(LabError, ArithmeticError):
    """A raising-operator product annihilated the ground state."""


class ConfigError(LabError, ValueError):
    """Run configuration is invalid. ``path`` names the offending field."""

    def __init__(self, path: str, message: str | None = None) -> None:
        """Create a new :py:class:`ConfigError` for the dotted field ``path``."""
        super().__init__(path if message is None else f'{path}: {message}')
        self.path: str = path


class SizeError(LabError, ValueError):
    """State space dimension N**L exceeds the supported maximum."""


class ExceptionEvent(Event):
    """Event fired when an exception is caught by an :py:class:`ExceptionHook`."""

    __slots__ = ('exception', 'traceback')

    def __init__(self, exception: BaseException, traceback: TracebackType) -> None:
        """Create a new :py:class:`ExceptionEvent` with the given exception and its traceback."""
        self.exception: BaseException = exception
        self.traceback: TracebackType = traceback


class ExceptionHook:
    """Object that intercepts uncaught :py:class:`Exception`'s and publishes them on an event bus."""

    def __init__(self, bus_id: str = 'exceptions') -> None:
        """Initialize the :py:class:`ExceptionHook` for use in a context manager."""
        self.__old_hook: ExceptHookCallable = sys.excepthook
        self.bus_id: str = bus_id
        self.event_bus: EventBus = EventBus.get_or_create(bus_id)

    def __call__(self, type_: type[BaseException], exception: BaseException, traceback: TracebackType) -> None:
        """When an exception is raised."""
        # Don't handle BaseExceptions
        if not issubclass(type_, Exception):
            return self.old_hook(type_, exception, traceback)

        self.event_bus << ExceptionEvent(exception, traceback)

    def __repr__(self) -> str:
        return f'<{type(self).__name__} ({self.old_hook=})>'

    def __enter__(self) -> ExceptionHook:
        """Temporary extend current exception hook."""
        sys.excepthook = self
        return self

    def __exit__(self, *_) -> None:
        """Reset current exception hook to the original one."""
        sys.excepthook = self.old_hook
        if EventBus.get_bus(self.bus_id) is self.event_bus:
            del EventBus[self.bus_id]

    @property
    def old_hook(self) -> ExceptHookCallable:
        """Return the original exception hook."""
        return self.__old_hook
