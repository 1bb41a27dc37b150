import json
import logging
from typing import Any, Dict, Tuple

import click
import pandas as pd

from dunkl_analyzer.database.connection import BaselineRegistry
from dunkl_analyzer.eft.lattice import make_lattice
from dunkl_analyzer.errors import ConfigError, DunklAnalyzerError
from dunkl_analyzer.measure.profile import AnalyticProfile
from dunkl_analyzer.measure.quadrature import make_measure
from dunkl_analyzer.suite.checks import select_checks
from dunkl_analyzer.suite.config import SuiteConfig
from dunkl_analyzer.suite.runner import collect_reports, judge_reports, open_registry, record_baselines, run_suite

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def parse_value(raw: str) -> Any:
    """JSON value when it parses, plain string otherwise"""
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def parse_params(params: Tuple[str, ...]) -> Dict[str, Any]:
    """
    Turn k=v pairs into nested config overrides; dots in k address nested keys

    Raises:
        ConfigError: A pair has no '='
    """
    overrides: Dict[str, Any] = {}
    for pair in params:
        if '=' not in pair:
            raise ConfigError(f"Expected k=v, got '{pair}'", field=pair)
        key, raw = pair.split('=', 1)
        target = overrides
        parts = key.strip().split('.')
        for part in parts[:-1]:
            target = target.setdefault(part, {})
        target[parts[-1]] = parse_value(raw.strip())
    return overrides


def _summarize(result_counts: Dict[str, int]) -> str:
    return ", ".join(f"{count} {verdict}" for verdict, count in sorted(result_counts.items()))


@click.group()
@click.option('--verbose', is_flag=True, help='Log numerical diagnostics')
def cli(verbose: bool):
    """Dunkl Analyzer - numerical checks of weighted Dunkl/Bessel harmonic analysis"""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@cli.group()
def suite():
    """Run or record the configured check suite"""
    pass


def _run(config_path: str, record: bool, workers: int):
    try:
        config = SuiteConfig(config_path)
        result = record_baselines(config, workers) if record else run_suite(config, workers=workers)
    except (ConfigError, KeyError) as e:
        click.echo(f"Error in configuration: {str(e)}", err=True)
        raise SystemExit(EXIT_CONFIG)
    except DunklAnalyzerError as e:
        click.echo(f"Error running suite: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    click.echo(f"\n{len(result.reports)} report(s): {_summarize(result.verdict_counts())}")
    click.echo(f"Reports saved to {result.reports_path}")
    click.echo(f"Summary saved to {result.summary_path}")
    for report in result.failed:
        click.echo(f"FAIL {report.check_id} {report.param_key}", err=True)
    raise SystemExit(result.exit_status)


@suite.command()
@click.argument('config_path', type=click.Path(exists=True))
@click.option('--workers', type=int, help='Worker processes (default: DUNKL_ANALYZER_WORKERS or CPU count)')
def run(config_path: str, workers: int):
    """
    Run the suite against the baseline registry

    Args:
        config_path: Path to the JSON suite configuration
    """
    _run(config_path, record=False, workers=workers)


@suite.command()
@click.argument('config_path', type=click.Path(exists=True))
@click.option('--workers', type=int, help='Worker processes (default: DUNKL_ANALYZER_WORKERS or CPU count)')
def record(config_path: str, workers: int):
    """
    Run the suite and store every band in the baseline registry

    Args:
        config_path: Path to the JSON suite configuration
    """
    _run(config_path, record=True, workers=workers)


@cli.command()
@click.argument('check_id')
@click.option('--param', 'params', multiple=True, help='Config override k=v, e.g. lambdas=[0.5] or sweeps.t=[1,2]')
@click.option('--config', 'config_path', type=click.Path(exists=True), help='Base JSON suite configuration')
def check(check_id: str, params: tuple, config_path: str):
    """Run a single check and print its reports as JSON"""
    try:
        overrides = parse_params(params)
        overrides["checks"] = [check_id]
        config = SuiteConfig(config_path, overrides=overrides)
        check_ids = select_checks(config.get_checks())
        reports = collect_reports(check_ids, config, workers=1)
    except (ConfigError, KeyError) as e:
        click.echo(f"Error in configuration: {str(e)}", err=True)
        raise SystemExit(EXIT_CONFIG)
    except DunklAnalyzerError as e:
        click.echo(f"Error running {check_id}: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    registry = open_registry(config)
    if registry is None:
        logger.warning(f"No registry at {config.get_registry()}; band contracts stay undecided")
    else:
        with registry:
            judge_reports(reports, registry, config.get_registry())

    click.echo(json.dumps([r.to_dict() for r in reports], indent=2))
    raise SystemExit(EXIT_FAIL if any(r.failed for r in reports) else EXIT_PASS)


@cli.command('export-profile')
@click.argument('family')
@click.option('--lambda', 'lam', type=float, default=0.0, help='Bessel index')
@click.option('--param', 'params', multiple=True, help='Family parameter k=v, e.g. a=0.5')
@click.option('--scale', type=float, default=1.0, help='Dilation s in f(s·)')
@click.option('--amplitude', type=float, default=1.0, help='Amplitude A')
@click.option('--output', help='Output JSON file (default: stdout)')
def export_profile(family: str, lam: float, params: tuple, scale: float, amplitude: float, output: str):
    """Export an analytic profile as JSON"""
    try:
        values = parse_params(params)
        profile = AnalyticProfile(family, values, make_measure(lam), scale, amplitude)
        document = profile.to_json(indent=2)
    except ConfigError as e:
        click.echo(f"Error in parameters: {str(e)}", err=True)
        raise SystemExit(EXIT_CONFIG)
    except (ValueError, TypeError, DunklAnalyzerError) as e:
        click.echo(f"Error exporting profile: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    if output:
        with open(output, 'w') as f:
            f.write(document)
        click.echo(f"Profile saved to {output}")
    else:
        click.echo(document)


@cli.command('export-lattice')
@click.option('--a', 'a', required=True, multiple=True, type=float, help='Lattice parameter, once per coordinate')
@click.option('--alpha', 'alphas', multiple=True, help='Weight direction as comma-separated entries')
@click.option('--k0', type=float, default=0.0, help='Exponent of |x| in the weight')
@click.option('--window', type=int, default=10, help='Window half-width N')
@click.option('--output', help='Output JSON file (default: stdout)')
def export_lattice(a: tuple, alphas: tuple, k0: float, window: int, output: str):
    """Export a near-lattice with its achieved δ and L as JSON"""
    try:
        directions = [[float(x) for x in alpha.split(',')] for alpha in alphas]
        seq = make_lattice(list(a), directions, k0, N=window)
        document = json.dumps(seq.to_dict(), indent=2)
    except (ValueError, DunklAnalyzerError) as e:
        click.echo(f"Error building lattice: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    if output:
        with open(output, 'w') as f:
            f.write(document)
        click.echo(f"Lattice saved to {output} (δ={seq.delta:.6g}, L={seq.L:.6g}, {seq.size} points)")
    else:
        click.echo(document)


@cli.group()
def registry():
    """Move recorded bands between the SQLite registry and CSV dumps"""
    pass


@registry.command('export')
@click.argument('output')
@click.option('--registry', 'registry_path', help='Registry file (default: DUNKL_ANALYZER_REGISTRY or baselines.db)')
def export_registry(output: str, registry_path: str):
    """Dump every recorded band to a CSV file"""
    config = SuiteConfig(overrides={"registry": registry_path} if registry_path else None)
    try:
        with BaselineRegistry(config.get_registry()) as baselines:
            frame = baselines.export_frame()
    except (FileNotFoundError, DunklAnalyzerError) as e:
        click.echo(f"Error reading registry: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    frame.to_csv(output, index=False)
    click.echo(f"Exported {len(frame)} band(s) to {output}")


@registry.command('load')
@click.argument('seed', type=click.Path(exists=True))
@click.option('--registry', 'registry_path', help='Registry file (default: DUNKL_ANALYZER_REGISTRY or baselines.db)')
def load_registry(seed: str, registry_path: str):
    """Record every band of a CSV dump, replacing bands with the same key"""
    config = SuiteConfig(overrides={"registry": registry_path} if registry_path else None)
    try:
        frame = pd.read_csv(seed)
        with BaselineRegistry(config.get_registry(), create=True) as baselines:
            count = baselines.load_frame(frame)
    except (ValueError, DunklAnalyzerError) as e:
        click.echo(f"Error loading {seed}: {str(e)}", err=True)
        raise SystemExit(EXIT_FAIL)

    click.echo(f"Loaded {count} band(s) into {config.get_registry()}")


if __name__ == '__main__':
    cli()
