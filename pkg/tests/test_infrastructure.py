###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Tests for the event bus, the exception hook, lab settings and utilities."""
import sys

import pytest

from tau2_lab.constants import *
from tau2_lab.events import Event
from tau2_lab.events import EventBus
from tau2_lab.exception_hook import ExceptionEvent
from tau2_lab.exception_hook import ExceptionHook
from tau2_lab.tomlfile import TomlEvents
from tau2_lab.tomlfile import TomlFile
from tau2_lab.tomlfile import load_settings
from tau2_lab.utils import Lcg
from tau2_lab.utils import complex_from_pair
from tau2_lab.utils import complex_to_pair
from tau2_lab.utils import dump_data
from tau2_lab.utils import has_package


class _Ping(Event):
    """Ping sent in tests."""

    __slots__ = ('value',)

    def __init__(self, value: int) -> None:
        self.value = value


class _LoudPing(_Ping):
    __slots__ = ()


def test_event_bus_dispatch():
    bus = EventBus()
    seen = []
    bus.subscribe(lambda e: seen.append(('any', e.value)), _Ping)
    bus.subscribe(lambda e: seen.append(('loud', e.value)), _LoudPing)
    bus.subscribe(lambda e: seen.append(('even', e.value)), _Ping, lambda e: e.value % 2 == 0)

    bus << _Ping(1)
    _LoudPing(2) >> bus
    assert seen == [('any', 1), ('any', 2), ('even', 2), ('loud', 2)]

    bus.clear(_Ping)
    bus << _LoudPing(4)
    assert seen[-1] == ('loud', 4)
    bus.clear()
    bus << _LoudPing(6)
    assert seen[-1] == ('loud', 4)


def test_event_bus_registry():
    bus = EventBus('test-registry')
    try:
        assert EventBus['TEST-REGISTRY'] is bus
        assert EventBus.get_or_create('test-registry') is bus
        with pytest.raises(KeyError):
            EventBus('test-registry')
    finally:
        del EventBus['test-registry']
    assert EventBus.get_bus('test-registry') is None
    with pytest.raises(KeyError):
        EventBus['test-registry']


def test_event_bus_rejects_bad_subscriptions():
    bus = EventBus()
    with pytest.raises(TypeError):
        bus.subscribe(print, int)
    with pytest.raises(TypeError):
        bus.subscribe('not callable', _Ping)
    with pytest.raises(TypeError):
        bus.subscribe(print, _Ping, 'not callable')


def test_event_description():
    assert _Ping(1).description == 'Ping sent in tests.'
    assert _LoudPing(1).description == 'Ping sent in tests.'
    assert _Ping(1).name == '_Ping'
    assert 'value' in repr(_Ping(3))


def test_exception_hook():
    caught = []
    with ExceptionHook('test-exceptions') as hook:
        assert sys.excepthook is hook
        hook.event_bus.subscribe(caught.append, ExceptionEvent)
        try:
            raise RuntimeError('boom')
        except RuntimeError as e:
            hook(type(e), e, e.__traceback__)
    assert sys.excepthook is hook.old_hook
    assert EventBus.get_bus('test-exceptions') is None
    assert len(caught) == 1
    assert str(caught[0].exception) == 'boom'


def test_settings_defaults(tmp_path):
    settings = load_settings(tmp_path / 'absent.toml')
    assert settings['numerics/gap_min'] == GAP_MIN_REL
    assert settings['tolerances/det_oracle'] == DET_ORACLE_MARGIN
    assert settings['sampling/ap96_samples'] == 64
    assert 'tolerances/algebra' in settings
    assert 'tolerances/nonsense' not in settings


def test_settings_overlay(tmp_path):
    path = tmp_path / 'settings.toml'
    path.write_text('[tolerances]\nprony = 1e-6\n\n[sampling]\nap96_samples = 8\n')
    settings = load_settings(path)
    assert settings['tolerances/prony'] == 1e-6
    assert settings['tolerances/algebra'] == 1e-12
    assert settings['sampling/ap96_samples'] == 8


def test_settings_from_environment(tmp_path, monkeypatch):
    path = tmp_path / 'env.toml'
    path.write_text('[numerics]\nroot_max_iter = 50\n')
    monkeypatch.setenv(TAU_SETTINGS_ENV, str(path))
    assert load_settings()['numerics/root_max_iter'] == 50


def test_toml_file_events(tmp_path):
    toml_file = TomlFile(tmp_path / 'lab.toml', default={'numerics': {'gap_min': 1e-6}})
    events = []
    toml_file.event_bus.subscribe(events.append, TomlEvents.TomlEvent)

    toml_file['sampling/trial_vectors'] = 4
    assert toml_file.get('sampling/trial_vectors') == 4
    assert toml_file.get('sampling/missing', 7) == 7
    with pytest.raises(KeyError):
        toml_file.get('sampling/missing')
    with pytest.raises(KeyError):
        toml_file['numerics'] = 3
    with pytest.raises(ValueError):
        toml_file.get('')

    assert toml_file.export_to(toml_file.path)
    assert TomlFile(tmp_path / 'lab.toml')['sampling/trial_vectors'] == 4
    assert [type(e) for e in events] == [TomlEvents.Set, TomlEvents.Get, TomlEvents.Export]
    assert not toml_file.export_to(tmp_path / 'missing' / 'lab.toml')
    assert isinstance(events[-1], TomlEvents.Fail)


def test_toml_file_bad_content(tmp_path):
    path = tmp_path / 'broken.toml'
    path.write_text('this is = = not toml')
    with pytest.warns(UserWarning):
        toml_file = TomlFile(path, default={'a': 1})
    assert toml_file['a'] == 1


def test_lcg_is_reproducible():
    first = Lcg(1)
    assert first.next_u64() == (LCG_MULTIPLIER + LCG_INCREMENT) % 2 ** 64
    a, b = Lcg(42), Lcg(42)
    assert [a.random() for _ in range(5)] == [b.random() for _ in range(5)]
    assert Lcg(2 ** 64 + 3).state == 3
    with pytest.raises(ValueError):
        Lcg(-1)


def test_lcg_ranges():
    rng = Lcg(7)
    for _ in range(200):
        assert 0.0 <= rng.random() < 1.0
        assert 0.5 <= abs(rng.coupling()) < 1.5
        assert 0 <= rng.randrange(5) < 5
    vector = rng.complex_vector(6)
    assert vector.shape == (6,)
    assert all(abs(v.real) <= 1 and abs(v.imag) <= 1 for v in vector)


def test_complex_pairs():
    assert complex_from_pair([1, -2.5]) == complex(1, -2.5)
    assert complex_to_pair(3 - 4j) == [3.0, -4.0]
    for bad in ([1], [1, 2, 3], 'ab', [True, 0], [1, None]):
        with pytest.raises(ValueError):
            complex_from_pair(bad)


def test_dump_data(tmp_path):
    path = tmp_path / 'deep' / 'data.json'
    dump_data(path, {'b': 1, 'a': [1, 2]})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('\n')
    dump_data(tmp_path / 'raw.bin', b'\x00\x01')
    assert (tmp_path / 'raw.bin').read_bytes() == b'\x00\x01'


def test_has_package():
    assert has_package('numpy')
    assert has_package('NumPy')
    assert not has_package('surely-not-an-installed-package')
