###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Version information."""
# Kept apart from __init__.py so flit can read it without importing numpy.

__version_info__ = (0, 3, 0, 'final', 0)
"""Major, Minor, Micro, Release level, Serial in respective order."""


def _stringify(major: int, minor: int, micro: int = 0, releaselevel: str = 'final', serial: int = 0) -> str:
    """Stringify a version tuple following :pep:`440`.

    | Ex: (0, 3) -> 0.3
    | Ex: (0, 3, 1, 'beta') -> 0.3.1b
    | Ex: (1, 0, 0, 'candidate', 2) -> 1.0rc2

    :raises ValueError: If the release level is unknown.
    """
    short_levels: dict[str, str] = {
        'alpha': 'a', 'a': 'a',
        'beta': 'b', 'b': 'b',
        'candidate': 'rc', 'c': 'rc', 'rc': 'rc',
        'final': '', 'release': '',
    }
    if releaselevel not in short_levels:
        raise ValueError(f'Release level "{releaselevel}" is not in known release levels')

    v_number: str = f'{major}.{minor}'
    v_number += f'.{micro}' if micro else ''

    if level := short_levels[releaselevel]:
        v_number += level
        v_number += str(serial) if serial else ''

    return v_number


__version__ = _stringify(*__version_info__)
"""String representation of version number."""
