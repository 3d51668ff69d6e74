###################################################################################################
#                            MIT Licence (C) 2026 tau2-lab contributors                           #
###################################################################################################
"""Command line interface. :py:func:`main` acts as an entry-point."""
from __future__ import annotations

__all__ = (
    'apply_setting_overrides',
    'build_parser',
    'load_env',
    'main',
)

import argparse
import json
import sys
from pathlib import Path

import toml

from ._version import __version__
from .cli import SuiteEvents
from .cli import VerificationReport
from .cli import known_checks
from .cli import parse_config
from .cli import render_text
from .cli import run_suite
from .cli import solve_model
from .cli.config import RunConfig
from .constants import *
from .events import EventBus
from .exception_hook import ConfigError
from .exception_hook import ExceptionEvent
from .exception_hook import ExceptionHook
from .exception_hook import InvalidN
from .exception_hook import InvalidParams
from .exception_hook import LabError
from .exception_hook import SizeError
from .tomlfile import TomlFile
from .tomlfile import load_settings
from .utils import dump_data
from .utils import format_tb
from .utils import has_package

_CONFIG_ERRORS = (ConfigError, SizeError, InvalidParams, InvalidN)


def load_env(verbose: bool = False) -> None:
    """Load environment variables from a .env file, when python-dotenv is installed."""
    if not has_package('python-dotenv'):
        return

    from dotenv import load_dotenv
    load_dotenv(verbose=verbose)


def build_parser() -> argparse.ArgumentParser:
    """Build the ``tau2-lab`` argument parser with its four subcommands."""
    parser = argparse.ArgumentParser(prog='tau2-lab', description='Numerical verification of the open-boundary tau_2(t) model.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--settings', type=Path, help='lab settings TOML overriding the packaged defaults')
    parser.add_argument('--set', action='append', default=[], metavar='KEY=VAL', dest='overrides',
                        help='override one lab setting, ex: sampling/ap96_samples=128; may repeat')
    parser.add_argument('--quiet', action='store_true', help='suppress progress and text output')
    commands = parser.add_subparsers(dest='command', required=True)

    def model_command(name: str, help_: str) -> argparse.ArgumentParser:
        command = commands.add_parser(name, help=help_)
        command.add_argument('--config', type=Path, required=True, help='JSON run configuration')
        command.add_argument('--out', type=Path, help='write JSON output here instead of stdout')
        return command

    verify = model_command('verify', 'run the verification suite')
    verify.add_argument('--checks', help='comma separated check names to run')
    verify.add_argument('--tolerance', action='append', default=[], metavar='NAME=VAL',
                        help='override the tolerance of one check; may repeat')
    verify.set_defaults(handler=_verify)

    model_command('spectrum', 'print A0, s_l, r_k and the lambda grid').set_defaults(handler=_spectrum)
    model_command('eigenbasis', 'dump the constructed eigenbasis').set_defaults(handler=_eigenbasis)

    report = commands.add_parser('report', help='render a saved report as text')
    report.add_argument('path', type=Path, help='report JSON written by verify')
    report.set_defaults(handler=_report)
    return parser


def _read_config(path: Path, settings: TomlFile) -> RunConfig:
    try:
        text = path.read_bytes()
    except OSError as e:
        raise ConfigError('--config', str(e)) from e
    return parse_config(text, settings)


def _same_kind(old: object, new: object) -> bool:
    # An integer may stand in for a float, never the other way round
    if isinstance(old, float) and isinstance(new, int) and not isinstance(new, bool):
        return True
    return type(old) is type(new)


def apply_setting_overrides(items: list[str], settings: TomlFile) -> None:
    """Set ``KEY=VAL`` pairs on ``settings``. VAL is read as a TOML value; strings need quotes.

    :raises ConfigError: If a key is not an existing setting, names a table, or its value is unreadable
        or of another type than the setting it replaces.
    """
    for item in items:
        key, sep, text = item.partition('=')
        key = key.strip().strip('/')
        path = f'settings.{key.replace("/", ".") or item}'
        if not sep or not key or key not in settings or isinstance(settings[key], dict):
            raise ConfigError(path, 'expected KEY=VAL with an existing setting key')
        try:
            value = toml.loads(f'value = {text.strip()}')['value']
        except (ValueError, IndexError) as e:
            raise ConfigError(path, f'not a TOML value: {text!r}') from e
        if not _same_kind(settings[key], value):
            raise ConfigError(path, f'expected a {type(settings[key]).__name__}, got {value!r}')
        settings[key] = value


def _parse_tolerances(items: list[str], settings: TomlFile) -> dict[str, float]:
    known = known_checks(settings)
    result = {}
    for item in items:
        name, sep, value = item.partition('=')
        name = name.strip()
        if not sep or name not in known:
            raise ConfigError(f'tolerances.{name or item}', 'expected NAME=VAL with a known check name')
        try:
            result[name] = float(value)
        except ValueError as e:
            raise ConfigError(f'tolerances.{name}', f'not a number: {value!r}') from e
    return result


def _parse_checks(text: str | None, settings: TomlFile) -> list[str] | None:
    if text is None:
        return None
    names = [name.strip() for name in text.split(',') if name.strip()]
    known = known_checks(settings)
    for i, name in enumerate(names):
        if name not in known:
            raise ConfigError(f'checks[{i}]', f'unknown check {name!r}')
    return names


def _emit(data: dict, out: Path | None, quiet: bool) -> None:
    if out is not None:
        dump_data(out, data)
    elif not quiet:
        print(json.dumps(data, indent=2, sort_keys=True))


def _print_progress(event: SuiteEvents.SuiteEvent) -> None:
    match event:
        case SuiteEvents.CheckFinished(record=record):
            residual = '-' if record.residual is None else f'{record.residual:.3e}'
            print(f'[{event.stage}] {record.name}: {record.status} ({residual})', file=sys.stderr)
        case SuiteEvents.StageFailed(exception=exception):
            print(f'[{event.stage}] stage failed: {type(exception).__name__}: {exception}', file=sys.stderr)


def _verify(args: argparse.Namespace, settings: TomlFile) -> int:
    cfg = _read_config(args.config, settings).with_overrides(
        tolerances=_parse_tolerances(args.tolerance, settings),
        checks=_parse_checks(args.checks, settings),
        output=args.out,
    )

    bus = EventBus.get_or_create('suite')
    if not args.quiet:
        bus.subscribe(_print_progress, SuiteEvents.SuiteEvent)
    try:
        report = run_suite(cfg, settings, bus)
    finally:
        bus.clear()

    if not args.quiet:
        print(render_text(report), end='')
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _spectrum(args: argparse.Namespace, settings: TomlFile) -> int:
    cfg = _read_config(args.config, settings)
    spec = solve_model(cfg, 'spec', settings)['spec']
    _emit({'model': cfg.echo(), 'spectrum': spec.to_json()}, args.out, args.quiet)
    return EXIT_OK


def _eigenbasis(args: argparse.Namespace, settings: TomlFile) -> int:
    cfg = _read_config(args.config, settings)
    basis = solve_model(cfg, 'basis', settings)['basis']
    _emit({'model': cfg.echo(), 'spectrum': basis.spec.to_json(), 'basis': basis.to_json()}, args.out, args.quiet)
    return EXIT_OK


def _report(args: argparse.Namespace, settings: TomlFile) -> int:
    try:
        report = VerificationReport.load(args.path)
    except (OSError, ValueError, KeyError) as e:
        raise ConfigError(str(args.path), f'not a readable report: {e}') from e
    if not args.quiet:
        print(render_text(report), end='')
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _print_exception(event: ExceptionEvent) -> None:
    print(f'{type(event.exception).__name__}: {event.exception}\n{format_tb(event.traceback)}', file=sys.stderr)


def main(*args: str) -> int:
    """Run the command line. Console script entrypoint; without ``args``, sys.argv is parsed.

    :return: 0 when every check passed, 1 when a check or a stage failed, 2 on configuration errors.
    """
    args_ = build_parser().parse_args(args or None)
    load_env()

    # ExceptionHook is required for subscribing to ExceptionEvents
    with ExceptionHook() as hook:
        hook.event_bus.subscribe(_print_exception, ExceptionEvent)
        try:
            settings = load_settings(args_.settings)
            apply_setting_overrides(args_.overrides, settings)
            return args_.handler(args_, settings)
        except _CONFIG_ERRORS as e:
            print(f'config error: {e}', file=sys.stderr)
            return EXIT_CONFIG_ERROR
        except LabError as e:
            print(f'{type(e).__name__}: {e}', file=sys.stderr)
            return EXIT_CHECK_FAILED
        except Exception as e:
            hook(type(e), e, e.__traceback__)
            return EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main(*sys.argv[1:]))
