###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Module used for Event subscription."""
from __future__ import annotations

__all__ = (
    'Event',
    'EventBus',
)

from collections import defaultdict
from collections.abc import Callable
from typing import Generic
from typing import TypeAlias
from typing import TypeVar

from .utils import get_parent_doc


class Event:
    """Normal event with no special abilities.

    The >> operator fires an :py:class:`Event` on an :py:class:`EventBus`. Ex::

        CheckStarted('commuting_family') >> EventBus['suite']
    """

    __slots__: tuple[str, ...] = ()

    def __repr__(self) -> str:
        """Representation of the :py:class:`Event` with its attributes' values."""
        values = {attr: getattr(self, attr) for attr in self.__slots__}
        return f'<"{self.name}" Event {values=}>' if self.__slots__ else f'<Empty {self.name}>'

    def __rshift__(self, __bus: EventBus, /) -> None:
        """Syntax sugar for __bus.fire(event)."""
        return __bus.fire(self)

    @property
    def name(self) -> str:
        """Name of event, defaults to the class name."""
        return type(self).__name__

    @property
    def description(self) -> str:
        """First line of the nearest docstring in the mro."""
        doc: str | None = get_parent_doc(type(self))
        return doc.splitlines()[0] if doc is not None else ''


_ET = TypeVar('_ET', bound=Event)
_EventPredicate: TypeAlias = Callable[[_ET], bool]
_EventRunnable: TypeAlias = Callable[[_ET], None]


class _EventBusMeta(type):
    """Metaclass mapping :py:class:`EventBus` objects to case-insensitive :py:class:`str` ids.

    Allows ``EventBus['suite']`` lookups and ``del EventBus['suite']``.
    """

    _id_bus_map: dict[str, EventBus] = {}

    def __getitem__(cls, id: str) -> EventBus:
        if (bus := cls.get_bus(id)) is None:
            raise KeyError(f'{cls.__name__} "{id}" does not exist.')
        return bus

    def __setitem__(cls, id: str, bus: EventBus) -> None:
        """Register a bus under ``id``.

        :raises TypeError: If id is not a str or bus is not an EventBus.
        """
        if not isinstance(id, str):
            raise TypeError(f'parameter {id=} is not of type {str}.')
        if not isinstance(bus, EventBus):
            raise TypeError(f'parameter {bus=} is not of type {EventBus}.')

        if bus.id is None:
            bus.id = id
        cls._id_bus_map[id.lower()] = bus

    def __delitem__(cls, id: str) -> None:
        del cls._id_bus_map[id.lower()]

    def get_bus(cls, id: str, default: EventBus | None = None) -> EventBus | None:
        """Get bus from the class map using the given id, with an optional default value."""
        return cls._id_bus_map.get(id.lower(), default)

    def get_or_create(cls, id: str) -> EventBus:
        """Return the bus registered as ``id``, registering a fresh one if needed."""
        if (bus := cls.get_bus(id)) is None:
            bus = cls(id)
        return bus


class EventBus(Generic[_ET], metaclass=_EventBusMeta):
    """Keeps track of :py:class:`Callable` subscriptions to :py:class:`Event` types.

    Firing an event calls every subscriber of its type or of any parent type. Buses created
    with an id are reachable from the class::

        EventBus('suite')
        EventBus['suite'] << SuiteEvents.CheckStarted('commuting_family', 'tau2')
    """

    def __init__(self, __id: str | None = None, /) -> None:
        """Create a new :py:class:`EventBus`, registering it if an id is given.

        :raises KeyError: When a bus with the given id already exists.
        """
        if __id is not None and type(self).get_bus(__id) is not None:
            raise KeyError(f'EventBus id "{__id}" is already registered in {type(type(self)).__name__}')

        self.id: str | None = __id
        self._subscribers: defaultdict[type[Event], list[tuple[_EventRunnable, _EventPredicate | None]]] = (
            defaultdict(list)
        )

        if __id is not None:
            type(self)[__id] = self

    def __lshift__(self, __event: _ET, /) -> None:
        """Syntax sugar for self.fire(event)."""
        return self.fire(__event)

    def __repr__(self) -> str:
        counts = ', '.join(f'{event.__name__}[{len(subs)}]' for event, subs in self._subscribers.items())
        return f'<{type(self).__name__} id={self.id!r}; Subscribers=({counts})>'

    def clear(self, event: type[_ET] | None = None) -> None:
        """Clear subscribers of a given event type; None clears everything."""
        if event is None:
            self._subscribers.clear()
        else:
            self._subscribers.pop(event, None)

    def fire(self, event: _ET) -> None:
        """Call every subscriber of the event's type and of its parent types, in subscription order."""
        for event_type, subscribers in tuple(self._subscribers.items()):
            if isinstance(event, event_type):
                for runnable, predicate in subscribers:
                    if predicate is None or predicate(event):
                        runnable(event)

    def subscribe(self,
                  __callable: _EventRunnable, /,
                  event: type[_ET],
                  event_predicate: _EventPredicate | None = None
                  ) -> None:
        """Subscribe a :py:class:`Callable` to an :py:class:`Event` type.

        :param __callable: Callable to run with the event as its only argument.
        :param event: Event type to subscribe to.
        :param event_predicate: Predicate to validate before running callable.
        :raises TypeError: If the given arguments are not valid.
        """
        if not (isinstance(event, type) and issubclass(event, Event)):
            raise TypeError(f'event is not subclass to {Event}.')
        if not callable(__callable):
            raise TypeError('subscriber is not callable.')
        if event_predicate is not None and not callable(event_predicate):
            raise TypeError('subscriber predicate is defined but not callable.')

        self._subscribers[event].append((__callable, event_predicate))
