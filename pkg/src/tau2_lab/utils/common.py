###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Common utility functions. These may be used in other utility modules."""
from __future__ import annotations

__all__ = (
    'complex_from_pair',
    'complex_to_pair',
    'dump_data',
    'format_tb',
    'get_parent_doc',
)

from collections.abc import Sequence
from pathlib import Path
from types import TracebackType


def complex_from_pair(pair: Sequence[float]) -> complex:
    """Build a complex number from an ``[re, im]`` pair.

    :raises ValueError: If the pair does not hold exactly two real numbers.
    """
    if isinstance(pair, (str, bytes)) or len(pair) != 2:
        raise ValueError(f'expected an [re, im] pair, got {pair!r}')
    re, im = pair
    if isinstance(re, bool) or isinstance(im, bool) or not all(isinstance(v, (int, float)) for v in (re, im)):
        raise ValueError(f'expected real numbers in pair, got {pair!r}')
    return complex(float(re), float(im))


def complex_to_pair(value: complex) -> list[float]:
    """Return ``[re, im]`` for a complex value, as stored in JSON documents."""
    value = complex(value)
    return [value.real, value.imag]


def dump_data(path: Path | str, data: bytes | dict | str, encoding: str | None = None) -> None:
    """Dump data to path as a file.

    Dictionaries are written as JSON with sorted keys, so equal data always gives equal bytes.
    """
    import json
    import os

    default_encoding = 'utf8'
    path = Path(path)
    if not path.parent.exists():
        os.makedirs(path.parent)

    if isinstance(data, str):
        path.write_text(data, encoding=encoding or default_encoding)
    elif isinstance(data, bytes):
        if encoding is not None:
            data = data.decode(encoding=encoding)
            path.write_text(data, encoding=encoding)
        else:
            path.write_bytes(data)
    elif isinstance(data, dict):
        with path.open(mode='w', encoding=encoding or default_encoding) as file:
            json.dump(data, file, indent=2, sort_keys=True)
            file.write('\n')


def format_tb(tb: TracebackType | None) -> str:
    """Format a traceback with linebreaks."""
    import traceback

    if tb is None:
        return ''

    return '\n'.join(traceback.format_tb(tb))


def get_parent_doc(__type: type, /) -> str | None:
    """Get the nearest parent documentation using the given :py:class:`type`'s mro.

    :return The closest docstring for an object's class, None if not found.
    """
    doc = None
    for parent in __type.__mro__:
        if doc := parent.__doc__:
            break
    return doc
