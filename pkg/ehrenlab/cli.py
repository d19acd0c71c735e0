"""
Command-line interface

Exit codes: 0 all passed, 1 a run or preset failed, 2 usage or
configuration error.
"""

import logging
import os
import sys

import click

from ehrenlab.config import get_config, setup_logging
from ehrenlab.exceptions import (
    ConfigurationError, EhrenlabError, GuardViolation, OutputError, ScenarioValidationError,
    UnknownPresetError
)
from ehrenlab.models.dynamics import ModelKind
from ehrenlab.services.experiments import (
    BOOST_HORIZON, boost_test, preset_descriptions, run_experiment, summarize
)
from ehrenlab.services.integrators import run as run_scenario
from ehrenlab.services.logging_service import LoggingService
from ehrenlab.services.scenario_parser import parse_scenario, scenario_schema
from ehrenlab.services.series_writer import emit_series, write_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _help_epilog() -> str:
    lines = ['\b', 'Presets:']
    for name, description in preset_descriptions().items():
        lines.append(f'  {name:<20} {description}')
    lines += ['', '\b', 'Scenario document (TOML) sections and keys:']
    for section, keys in scenario_schema().items():
        lines.append(f"  [{section}] {', '.join(keys)}")
    return '\n'.join(lines)


def _default_out() -> str:
    return get_config().OUTPUT_DIR


@click.group(epilog=_help_epilog())
@click.option('--env', default=None, help='Configuration environment (development, testing, default)')
@click.option('--log-level', default=None, help='Override EHRENLAB_LOG_LEVEL')
@click.pass_context
def cli(ctx, env, log_level):
    """ehrenlab: Schrodinger dynamics with Ehrenfest, boost and conservation diagnostics"""
    try:
        config_obj = get_config(env)
    except ConfigurationError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_USAGE)
    setup_logging(config_obj)
    if log_level:
        logging.getLogger().setLevel(log_level.upper())
    ctx.obj = config_obj


@cli.command('run')
@click.option('--config', 'config_path', required=True,
              type=click.Path(exists=True, dir_okay=False), help='Scenario document (TOML)')
@click.option('--out', 'out_dir', default=None, type=click.Path(file_okay=False),
              help='Output directory')
@click.pass_context
def run_command(ctx, config_path, out_dir):
    """Run one scenario document and write its series CSV"""
    out_dir = out_dir or _default_out()
    with open(config_path, 'r', encoding='utf-8') as handle:
        text = handle.read()
    try:
        scenario = parse_scenario(text)
    except ScenarioValidationError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_USAGE)

    events = LoggingService(out_dir)
    try:
        series = run_scenario(scenario)
    except GuardViolation as e:
        events.log_guard('error', f"Run {scenario.name} aborted", scenario=scenario.name,
                         step=e.step, diagnostic=e.diagnostic)
        click.echo(f"Run aborted: {e}", err=True)
        ctx.exit(EXIT_FAIL)

    try:
        csv_path = emit_series(series, os.path.join(out_dir, scenario.output.csv))
        summary = summarize(series, scenario)
        write_report(summary, os.path.join(out_dir, 'summary.json'))
    except OutputError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_FAIL)
    events.log_run('info', f"Run {scenario.name} finished", details=summary, scenario=scenario.name)
    click.echo(f"{scenario.name}: {len(series)} samples -> {csv_path}")
    click.echo(f"  norm drift {summary['norm_drift']:.3e}, momentum drift {summary['momentum_drift']:.3e}")
    ctx.exit(EXIT_PASS)


def _echo_report(report: dict):
    status = 'PASS' if report.get('passed') else 'FAIL'
    click.echo(f"[{status}] {report['preset']}")
    for criterion in report.get('criteria', []):
        mark = 'ok ' if criterion['passed'] else 'BAD'
        click.echo(f"    {mark} {criterion['name']}: {criterion['measured']} "
                   f"{criterion['comparison']} {criterion['tolerance']}")
    if report.get('diagnostic'):
        click.echo(f"    diagnostic: {report['diagnostic']}")


@cli.command('experiment')
@click.argument('preset')
@click.option('--out', 'out_dir', default=None, type=click.Path(file_okay=False),
              help='Output directory (a subdirectory per preset is created)')
@click.pass_context
def experiment_command(ctx, preset, out_dir):
    """Run one preset and write its CSVs and report.json"""
    try:
        report = run_experiment(preset, out_dir or _default_out())
    except UnknownPresetError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_USAGE)
    _echo_report(report.to_dict())
    ctx.exit(EXIT_PASS if report.passed else EXIT_FAIL)


@cli.command('check')
@click.option('--out', 'out_dir', default=None, type=click.Path(file_okay=False),
              help='Output directory')
@click.option('--workers', default=None, type=click.IntRange(min=1),
              help='Worker processes (default EHRENLAB_MAX_WORKERS)')
@click.pass_context
def check_command(ctx, out_dir, workers):
    """Run every preset; exits nonzero if any fails"""
    from workers.preset_worker import run_presets

    out_dir = out_dir or _default_out()
    names = list(preset_descriptions())
    reports = run_presets(names, out_dir, workers or ctx.obj.MAX_WORKERS)
    for report in reports:
        _echo_report(report)

    passed = all(r.get('passed') for r in reports)
    write_report({
        'passed': passed,
        'presets': {r['preset']: {'passed': r.get('passed', False),
                                  'diagnostic': r.get('diagnostic')} for r in reports},
    }, os.path.join(out_dir, 'check.json'))
    failed = [r['preset'] for r in reports if not r.get('passed')]
    click.echo(f"{len(reports) - len(failed)}/{len(reports)} presets passed"
               + (f"; failed: {', '.join(failed)}" if failed else ''))
    ctx.exit(EXIT_PASS if passed else EXIT_FAIL)


@cli.command('boost-test')
@click.option('--model', 'model_tag', required=True,
              type=click.Choice([kind.value for kind in ModelKind]), help='Dynamics family')
@click.option('--dv', required=True, type=float, help='Boost velocity')
@click.option('--horizon', default=BOOST_HORIZON, show_default=True, type=float,
              help='Evolution time T')
@click.pass_context
def boost_test_command(ctx, model_tag, dv, horizon):
    """Galilean covariance error of one dynamics family"""
    try:
        result = boost_test(model_tag, dv, horizon, LoggingService())
    except GuardViolation as e:
        click.echo(f"Run aborted: {e}", err=True)
        ctx.exit(EXIT_FAIL)
    except EhrenlabError as e:
        click.echo(str(e), err=True)
        ctx.exit(EXIT_USAGE)
    status = 'PASS' if result['passed'] else 'FAIL'
    click.echo(f"[{status}] {model_tag}: covariance error {result['covariance_error']:.3e} "
               f"(tolerance {result['tolerance']:.0e}); literal-phase form {result['literal_phase_error']:.3e}")
    ctx.exit(EXIT_PASS if result['passed'] else EXIT_FAIL)


def main(argv=None):
    return cli.main(args=argv, prog_name='ehrenlab')


if __name__ == '__main__':
    sys.exit(main())
