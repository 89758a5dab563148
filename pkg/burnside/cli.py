"""Command-line front end for the burnside toolkit.

Usage:
    python3 -m burnside marks --group S3
    python3 -m burnside ideals --group C6
    python3 -m burnside complete --group S3 --depth 12
    python3 -m burnside complete --group C2 --module bundle --target C2
    python3 -m burnside complete --group S4 --family FP
    python3 -m burnside stable-maps --source C2 --target C2 [--prime 2]
    python3 -m burnside dual --group S3 --format json
    python3 -m burnside crosscheck --source S3 --target C2

Exit codes: 0 success, 1 failed check (mismatch, unresolved tower, trichotomy
violation), 2 usage, parse or configuration error. Results go to stdout,
diagnostics to stderr.
"""
import argparse
import logging
import sys

from . import render
from .cache import ClassificationCache
from .config import load_config, set_config
from .errors import (
    BurnsideError,
    ConfigError,
    DecompositionKindError,
    FamilyError,
    GroupSpecError,
    OrderBoundError,
    TowerDepthError,
    UnlabeledBasisError,
)
from .groups import parse_group
from .lattice import configure_cache, family_classes
from .modules import (
    bundle_module,
    classify_completion,
    closed_form_completion,
    decomposition_shadow,
    quotient_tower,
    regular_module,
    restrict_to_family,
)
from .ring import augmentation_ideal, export_marks, table_of_marks, verify_trichotomy
from .stablemaps import (
    crosscheck,
    dual_decomposition,
    function_decomposition,
    p_local_decomposition,
    pi0_descriptor,
)

logger = logging.getLogger(__name__)

# errors that mean the request itself was bad
USAGE_ERRORS = (
    ConfigError,
    GroupSpecError,
    OrderBoundError,
    FamilyError,
    TowerDepthError,
    DecompositionKindError,
    UnlabeledBasisError,
)


class UsageError(Exception):
    pass


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['text', 'json'], default='text',
                        help='Output format (default: text)')
    common.add_argument('--cache-dir',
                        help='Directory for cached subgroup classifications '
                             '(BURNSIDE_CACHE_DIR takes precedence)')
    common.add_argument('--config', help='YAML file overriding defaults.yaml')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    common.add_argument('-q', '--quiet', action='store_true', help='Warnings only')

    parser = argparse.ArgumentParser(
        prog='burnside',
        description='Burnside rings, I(G)-adic completions and stable splittings of BG',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('marks', parents=[common], help='Table of marks')
    p.add_argument('--group', required=True, help='Group spec, e.g. S3 or "perm(3): (1 2), (1 2 3)"')

    p = sub.add_parser('ideals', parents=[common], help='Fixed-point ideals of I(G)')
    p.add_argument('--group', required=True)

    p = sub.add_parser('complete', parents=[common], help='I(G)-adic completion: tower oracle and closed form')
    p.add_argument('--group', required=True)
    p.add_argument('--module', choices=['regular', 'bundle'], default='regular',
                   help='A(G) or the bundle module A(G,K) (default: regular)')
    p.add_argument('--target', help='K for --module bundle')
    p.add_argument('--depth', type=int, help='Tower depth (default: tower.depth from config)')
    p.add_argument('--family', help='Restrict to a family first: F1, Fp(p), FP or Fall')

    p = sub.add_parser('stable-maps', parents=[common], help='Wedge decomposition of stable maps BG -> BK')
    p.add_argument('--source', required=True)
    p.add_argument('--target', required=True)
    p.add_argument('--prime', type=int, help='p-local decomposition at this prime')
    p.add_argument('--weyl-tables', action='store_true', help='Attach Weyl group multiplication tables')

    p = sub.add_parser('dual', parents=[common], help='Decomposition of the Spanier-Whitehead dual of BG')
    p.add_argument('--group', required=True)
    p.add_argument('--prime', type=int)
    p.add_argument('--weyl-tables', action='store_true')

    p = sub.add_parser('crosscheck', parents=[common],
                       help='Decomposition vs closed form vs tower for A(G,K)')
    p.add_argument('--source', required=True)
    p.add_argument('--target', required=True)
    p.add_argument('--depth', type=int)
    return parser


def _setup_logging(args, err):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(stream=err, level=level, format='%(levelname)s: %(message)s', force=True)


def cmd_marks(args, config):
    tom = table_of_marks(parse_group(args.group))
    return export_marks(tom), 0


def cmd_ideals(args, config):
    report = verify_trichotomy(parse_group(args.group))
    return render.build_ideals(report), 0 if report.passed else 1


def cmd_complete(args, config):
    G = parse_group(args.group)
    if args.module == 'bundle':
        if not args.target:
            raise UsageError('--module bundle needs --target')
        M = bundle_module(G, parse_group(args.target))
    else:
        M = regular_module(G)
    if args.family:
        M, _ = restrict_to_family(M, family_classes(M.classification, args.family))
    depth = args.depth or config.depth
    tower = quotient_tower(M, augmentation_ideal(M.ring), depth)
    oracle = classify_completion(tower)
    closed = closed_form_completion(M)
    payload = render.build_complete(M, args.family, tower, oracle, closed, decomposition_shadow(M))
    return payload, 0 if payload['agree'] else 1


def cmd_stable_maps(args, config):
    G, K = parse_group(args.source), parse_group(args.target)
    if args.prime is not None:
        d = p_local_decomposition(G, K, args.prime)
        pi0 = None
    else:
        d = function_decomposition(G, K)
        pi0 = pi0_descriptor(d)
    return render.build_decomposition(d, pi0, args.weyl_tables), 0


def cmd_dual(args, config):
    d = dual_decomposition(parse_group(args.group), args.prime)
    return render.build_decomposition(d, pi0_descriptor(d), args.weyl_tables), 0


def cmd_crosscheck(args, config):
    report = crosscheck(parse_group(args.source), parse_group(args.target), args.depth)
    return render.build_crosscheck(report), 0 if report.status == 'pass' else 1


COMMANDS = {
    'marks': (cmd_marks, render.print_marks),
    'ideals': (cmd_ideals, render.print_ideals),
    'complete': (cmd_complete, render.print_complete),
    'stable-maps': (cmd_stable_maps, render.print_decomposition),
    'dual': (cmd_dual, render.print_decomposition),
    'crosscheck': (cmd_crosscheck, render.print_crosscheck),
}


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    _setup_logging(args, err)

    try:
        config = load_config(args.config, cache_dir=args.cache_dir)
        set_config(config)
        if config.cache_dir:
            configure_cache(ClassificationCache(config.cache_dir, config.cache_format_version))
        else:
            configure_cache(None)
        build, show = COMMANDS[args.command]
        payload, code = build(args, config)
    except (UsageError, *USAGE_ERRORS) as e:
        print(f"ERROR: {e}", file=err)
        return 2
    except BurnsideError as e:
        print(f"ERROR: {e}", file=err)
        return 1

    if args.format == 'json':
        render.dump_json(payload, out)
    else:
        show(payload, out)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
