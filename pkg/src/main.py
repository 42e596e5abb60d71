"""
pohocheck - Main Entry Point
"""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

# Add src to path for imports
src_path = Path(__file__).parent
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.export import Exporter
from core.flow import FlowConfig, FlowDivergedError, FlowError, certify, half_harmonic_flow
from core.identities.circle import FourierData, fourier_relations
from core.spectral import SpectralError, analyze
from core.suite import ConfigError, SuiteConfig, SuiteRunner, load_suite, resolve_suite_maps
from core.zoo import ZOO_MANIFEST, ZooError, perturb_tangent, resolve_map
from core.zoo.circle_maps import CircleMap
from presets.preset_manager import get_preset_manager
from utils.debug_log import debug_log


EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2

JOBS_ENV = "POHO_JOBS"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pohocheck",
        description="Numerical verification of Pohozaev identities for half-harmonic maps.")
    parser.add_argument('--debug', action='store_true', help="enable debug logging")
    parser.add_argument('--log-dir', help="directory of the debug log file")
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', help="run a verification suite")
    source = verify.add_mutually_exclusive_group()
    source.add_argument('--config', help="suite file (INI)")
    source.add_argument('--preset', default=None, help="built-in suite name (default: default)")
    verify.add_argument('--out', help="report JSON path")
    verify.add_argument('--grid', type=int, help="circle grid size N")
    verify.add_argument('--tol', type=float, help="override every tolerance")
    verify.add_argument('--seed', type=int, help="seed of randomized checks")
    verify.add_argument('--jobs', type=int, help=f"parallel cases (fallback: ${JOBS_ENV})")

    flow = sub.add_parser('flow', help="run the half-harmonic flow and certify its output")
    flow.add_argument('--map', default="identity", help="sphere-valued circle map id")
    flow.add_argument('--grid', type=int, default=256)
    flow.add_argument('--amplitude', type=float, default=0.1, help="tangential perturbation size")
    flow.add_argument('--seed', type=int, default=42)
    flow.add_argument('--tau', type=float, help="step size (default 1e-3 at N=256, scaled by 256/N)")
    flow.add_argument('--max-steps', type=int, default=10000)
    flow.add_argument('--tol', type=float, default=1e-6, help="stopping Euler-Lagrange residual")
    flow.add_argument('--kappa', type=float, default=1.0, help="certification condition factor")
    flow.add_argument('--n-max', type=int, default=2)
    flow.add_argument('--trace', default="flow_trace.csv", help="trace CSV path")
    flow.add_argument('--out', default="flow_certificate.json", help="certification JSON path")

    fourier = sub.add_parser('fourier', help="dump Fourier data and relation sums of a circle map")
    fourier.add_argument('map_id')
    fourier.add_argument('--n-max', type=int, default=10)
    fourier.add_argument('--grid', type=int, default=1024)
    fourier.add_argument('--out', default="fourier", help="output prefix")
    fourier.add_argument('--spectrum', action='store_true', help="also write the raw spectrum")

    sub.add_parser('list', help="list zoo map ids and built-in suites")
    return parser


def _resolve_jobs(flag: Optional[int], configured: int) -> int:
    """--jobs > $POHO_JOBS > suite file."""
    if flag is not None:
        return flag
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{JOBS_ENV} must be an integer, got {env!r}") from None
    return configured


def load_verify_config(args) -> SuiteConfig:
    if args.config:
        config = load_suite(args.config)
    else:
        config = get_preset_manager().load_suite(args.preset or "default")

    if args.out:
        config.out = args.out
    if args.grid is not None:
        config.grid = args.grid
    if args.tol is not None:
        config.tolerances = config.tolerances.with_all(args.tol)
    if args.seed is not None:
        config.seed = args.seed
    config.jobs = _resolve_jobs(args.jobs, config.jobs)
    resolve_suite_maps(config)
    return config


def cmd_verify(args) -> int:
    try:
        config = load_verify_config(args)
        runner = SuiteRunner(config)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    results = runner.run()
    reports = results['reports']
    if not Exporter().write_reports(reports, config.out):
        print(f"could not write {config.out}", file=sys.stderr)
        return EXIT_UNEXPECTED

    for report in results['unexpected']:
        print(f"UNEXPECTED {report.identity_name} [{report.param_string()}] "
              f"rel_gap={report.rel_gap:.3e}")
    for case_id, error in results['failed']:
        print(f"FAILED {case_id}: {error}")
    print(f"{len(reports)} identity instances, {len(results['unexpected'])} unexpected, "
          f"{len(results['failed'])} failed cases -> {config.out}")
    return EXIT_OK if results['success'] else EXIT_UNEXPECTED


def _circle_map(map_id: str) -> CircleMap:
    target = resolve_map(map_id)
    if not isinstance(target, CircleMap):
        raise ZooError(f"{map_id!r} is not a circle map")
    return target


def cmd_flow(args) -> int:
    try:
        cmap = _circle_map(args.map)
        u0 = cmap.grid(args.grid)
        if args.amplitude:
            u0 = perturb_tangent(u0, args.amplitude, args.seed)
        config = FlowConfig(tau=args.tau, max_steps=args.max_steps, tol=args.tol)
        result = half_harmonic_flow(u0, config)
    except (ZooError, SpectralError, FlowError) as e:
        if isinstance(e, FlowDivergedError):
            print(f"flow diverged: {e}", file=sys.stderr)
            return EXIT_UNEXPECTED
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    exporter = Exporter()
    exporter.write_flow_trace(result.energies, result.residuals, args.trace)
    reports = [r.with_params(map=args.map, seed=args.seed, amplitude=args.amplitude)
               for r in certify(result, args.kappa, args.n_max, map_id=args.map)]
    exporter.write_reports(reports, args.out)

    final = result.final
    print(f"steps={final.step} converged={result.converged} energy={final.energy:.15g} "
          f"el_residual={final.el_residual:.3e}")
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        print(f"  {status} {report.identity_name} rel_gap={report.rel_gap:.3e}")
    ok = result.converged and all(r.passed for r in reports)
    return EXIT_OK if ok else EXIT_UNEXPECTED


def cmd_fourier(args) -> int:
    try:
        cmap = _circle_map(args.map_id)
        u = cmap.grid(args.grid)
        data = FourierData.from_map(u)
        relations = fourier_relations(u, args.n_max, map_id=args.map_id, data=data)
    except (ZooError, SpectralError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    exporter = Exporter()
    K = min(data.K, 2 * args.n_max)
    ok = exporter.write_fourier_csv(data.a[:K + 1], data.b[:K + 1], f"{args.out}_coeffs.csv")
    ok &= exporter.write_relations_csv(relations, f"{args.out}_relations.csv")
    if args.spectrum:
        ok &= exporter.write_spectrum_csv(analyze(u), f"{args.out}_spectrum.csv")

    for rel in relations:
        print(f"n={rel.n:2d}  S_n={rel.S:+.3e}  T_n={rel.T:+.3e}  scale_n={rel.scale:.3e}")
    return EXIT_OK if ok else EXIT_UNEXPECTED


def cmd_list(args) -> int:
    print("Zoo maps:")
    for map_id, description in ZOO_MANIFEST.items():
        print(f"  {map_id:22s} {description}")
    print("Suites:")
    for preset in get_preset_manager().get_all_presets():
        print(f"  {preset.name:22s} {preset.description}")
    return EXIT_OK


COMMANDS = {
    'verify': cmd_verify,
    'flow': cmd_flow,
    'fourier': cmd_fourier,
    'list': cmd_list,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    args = build_parser().parse_args(argv)
    if args.debug:
        debug_log.enable(log_dir=args.log_dir, tag=args.command)
    try:
        return COMMANDS[args.command](args)
    finally:
        if args.debug:
            debug_log.disable()


if __name__ == '__main__':
    sys.exit(main())
