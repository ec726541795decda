"""
Command-line front end
Reproduces the efficiency/uncertainty curves, the motion table and the
feasibility table, and probes single scenarios. Data goes to stdout (or
--out), a one-line JSON manifest to stderr.

Usage:
    python cli.py fig1 [--gammas 1 1.1 2] [--x-min 0.01] [--x-max 0.99] [--points 99]
    python cli.py table1 [--format csv|json|markdown|html]
    python cli.py probe --scheme fg --x 0.25 [--gamma 1] [--emit-trajectory]
    python cli.py appendix-b [--n-max 10] [--gamma 2]
"""
import argparse
import hashlib
import io
import json
import logging
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from analysis import (
    delta_mfg_closed,
    efficiency_from_definitions,
    eta_mfg_closed,
    feasibility_window,
    geodesicity_test,
    oracle_cross_check,
    sweep,
    table1_rows,
    x_sq,
)
from config import log_level, trajectory_points
from errors import ConfigurationError, DomainError, PreconditionError, QuantumGeometryError
from oracle import default_integrator_spec
from reference_tables import check_table1
from reports import generate_table1_report, render_html
from search import SchemeKind, SearchConfig, geometric_trajectory, optimal_time

__version__ = '1.0.0'

logger = logging.getLogger('qsg.cli')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3

FIG1_COLUMNS = ['gamma', 'x', 'eta_closed', 'delta_over_h_closed', 'eta_numeric', 'delta_over_h_numeric']
TABLE1_COLUMNS = ['scheme', 'x', 'gamma', 'motion', 'delta_cell', 'eta_cell', 'residual_sup',
                  'eta_closed', 'delta_over_h_closed', 'eta_definitional', 'delta_over_h_definitional']
APPENDIX_B_COLUMNS = ['n', 'i_minus', 'i_plus', 'measure', 'gamma_sample', 'x_sq_sample', 'x_sq_gamma_one']


# ==================== OUTPUT FORMATTING ====================

def _round12(value):
    """12 significant digits for floats, recursively"""
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def to_csv(df: pd.DataFrame) -> str:
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, float_format='%.12g', lineterminator='\n')
    return buffer.getvalue()


def to_json(payload) -> str:
    return json.dumps(_round12(payload), sort_keys=True) + '\n'


def _table(df: pd.DataFrame, fmt: str) -> str:
    if fmt == 'json':
        return to_json(df.to_dict(orient='records'))
    return to_csv(df)


# ==================== COMMANDS ====================

def cmd_fig1(args) -> str:
    if not 0.0 < args.x_min <= args.x_max < 1.0:
        raise DomainError(f"need 0 < x-min <= x-max < 1, got [{args.x_min}, {args.x_max}]")
    if args.points < 1:
        raise DomainError(f"--points must be positive, got {args.points}")
    if not args.gammas or min(args.gammas) < 1.0:
        raise DomainError(f"every gamma must be >= 1, got {args.gammas}")
    x_grid = np.linspace(args.x_min, args.x_max, args.points) if args.points > 1 else [args.x_min]
    df = sweep(args.gammas, x_grid, numeric=True, points=args.trajectory_points)
    return _table(df[FIG1_COLUMNS], args.format)


def cmd_table1(args) -> Tuple[str, List[str]]:
    rows = table1_rows(points=args.trajectory_points)
    problems = check_table1(rows)
    if args.format in ('markdown', 'html'):
        text = generate_table1_report(rows)
        data = render_html(text) + '\n' if args.format == 'html' else text
    else:
        data = _table(pd.DataFrame(rows)[TABLE1_COLUMNS], args.format)
    return data, problems


def cmd_probe(args) -> str:
    kind = SchemeKind(args.scheme)
    cfg = SearchConfig(x=args.x, E=args.energy, gamma=args.gamma, hbar=args.hbar).for_scheme(kind)
    points = args.trajectory_points
    spec = default_integrator_spec()
    infidelity = oracle_cross_check(kind, cfg, spec)
    traj = geometric_trajectory(kind, cfg, points)
    payload = {
        'scheme': kind.value,
        'x': cfg.x,
        'gamma': cfg.gamma,
        'E': cfg.E,
        'hbar': cfg.hbar,
        't_star': optimal_time(kind, cfg),
        'eta_closed': eta_mfg_closed(cfg),
        'delta_over_h_closed': delta_mfg_closed(cfg),
        'efficiency': efficiency_from_definitions(traj).to_dict(),
        'geodesicity': geodesicity_test(kind, cfg, points).to_dict(),
        'oracle': {'steps': spec.steps, 'terminal_infidelity': infidelity},
    }
    if args.emit_trajectory:
        payload['trajectory'] = [
            [float(t), psi.a_w.real, psi.a_w.imag, psi.a_r.real, psi.a_r.imag]
            for t, psi in zip(traj.times, traj.states)
        ]
    return to_json(payload)


def cmd_appendix_b(args) -> str:
    if args.n_max < 1:
        raise DomainError(f"--n-max must be at least 1, got {args.n_max}")
    rows = []
    for n in range(1, args.n_max + 1):
        window = feasibility_window(n)
        rows.append({
            'n': n,
            'i_minus': window.i_minus,
            'i_plus': window.i_plus,
            'measure': window.measure,
            'gamma_sample': args.gamma,
            'x_sq_sample': x_sq(n, args.gamma),
            'x_sq_gamma_one': x_sq(n, 1.0),
        })
    return _table(pd.DataFrame(rows, columns=APPENDIX_B_COLUMNS), args.format)


# ==================== ENTRY POINT ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qsg', description="Geometry of analog quantum search evolutions.")
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p, formats=('csv', 'json')):
        p.add_argument('--format', choices=formats, default=formats[0])
        p.add_argument('--out', default=None, help="Write data to this path instead of stdout")
        p.add_argument('--trajectory-points', type=int, default=None,
                       help="Time-grid size of geometric trajectories (QSG_TRAJECTORY_POINTS)")

    fig1 = sub.add_parser('fig1', help="Efficiency and uncertainty versus overlap")
    fig1.add_argument('--gammas', type=float, nargs='+', default=[1.0, 1.1, 2.0])
    fig1.add_argument('--x-min', type=float, default=0.01)
    fig1.add_argument('--x-max', type=float, default=0.99)
    fig1.add_argument('--points', type=int, default=99)
    common(fig1)

    table1 = sub.add_parser('table1', help="Motion type of both schemes")
    common(table1, ('csv', 'json', 'markdown', 'html'))

    probe = sub.add_parser('probe', help="Single-scenario report")
    probe.add_argument('--scheme', choices=[k.value for k in SchemeKind], default='fg')
    probe.add_argument('--x', type=float, required=True)
    probe.add_argument('--gamma', type=float, default=1.0)
    probe.add_argument('--energy', type=float, default=1.0)
    probe.add_argument('--hbar', type=float, default=1.0)
    probe.add_argument('--emit-trajectory', action='store_true')
    common(probe, ('json',))

    appendix = sub.add_parser('appendix-b', help="Feasibility windows of the MFG geodesic condition")
    appendix.add_argument('--n-max', type=int, default=10)
    appendix.add_argument('--gamma', type=float, default=2.0)
    common(appendix)
    return parser


def _manifest(args, data: str) -> Dict:
    parameters = {k: v for k, v in sorted(vars(args).items()) if k not in ('command', 'out')}
    return {
        'command': args.command,
        'parameters': _round12(parameters),
        'version': __version__,
        'sha256': hashlib.sha256(data.encode('utf-8')).hexdigest(),
    }


def _emit(args, data: str) -> None:
    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='\n') as f:
            f.write(data)
    else:
        sys.stdout.write(data)
        sys.stdout.flush()
    sys.stderr.write(json.dumps(_manifest(args, data), sort_keys=True) + '\n')


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        logging.basicConfig(stream=sys.stderr, level=log_level(),
                            format='%(levelname)s %(name)s: %(message)s')
        if args.trajectory_points is None:
            args.trajectory_points = trajectory_points()
        if args.trajectory_points < 3:
            raise DomainError(f"--trajectory-points must be at least 3, got {args.trajectory_points}")

        problems = []
        if args.command == 'fig1':
            data = cmd_fig1(args)
        elif args.command == 'table1':
            data, problems = cmd_table1(args)
        elif args.command == 'probe':
            data = cmd_probe(args)
        else:
            data = cmd_appendix_b(args)
        _emit(args, data)
    except (DomainError, PreconditionError, ConfigurationError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except QuantumGeometryError as e:
        logger.error("consistency failure: %s", e)
        return EXIT_INCONSISTENT
    except ArithmeticError as e:
        logger.exception("arithmetic failure: %s", e)
        return EXIT_INCONSISTENT

    for problem in problems:
        logger.error("table contradiction: %s", problem)
    return EXIT_INCONSISTENT if problems else EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
