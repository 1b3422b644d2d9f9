#!/usr/bin/env python3
"""
Fusion toolkit command line.

Runs the proto-essential filter on a p-group and fusion-system queries on
realized fusion systems F_S(G), writing one JSON report per run.

Usage:
    python fusion_toolkit.py protoessential --group corpus:dihedral4 --prime 2 --mode aut
    python fusion_toolkit.py essentials --group corpus:alternating6 --prime 2
    python fusion_toolkit.py saturation --group file:groups/s4.json --prime 2
    python fusion_toolkit.py focal --group corpus:symmetric4 --prime 2
    python fusion_toolkit.py closure --group corpus:symmetric4 --prime 2
    python fusion_toolkit.py lemmas --group corpus:symmetric4 --prime 2 --seed 7
    python fusion_toolkit.py corpus list
    python fusion_toolkit.py corpus emit dihedral4 --file d8.json

Exit codes:
    0  success
    2  input error (bad group reference, malformed spec, bad parameters)
    3  a desk-scale bound was exceeded
    1  anything else (a bug; traceback printed)
"""

import sys
import os
import argparse
import time
import traceback
from typing import Any, Callable, Dict, Optional

# Add parent directory for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from sympy import factorint

from core.activity_log import log_event, log_stage_timings
from core.aut_cache import AutCache
from core.config import (
    CONJUGACY_MODES,
    DEFAULT_SEED,
    MODE_ALIASES,
    RANK_TEST_MODES,
    RunConfig,
    default_cache_path,
    normalize_mode,
)
from core.corpus import CORPUS, build_named, load_group
from core.fusion import (
    RealizedFusionSystem,
    alperin_generation_check,
    closure_flags,
    essential_subgroups,
    f_classes,
    focal_and_hyperfocal,
    focal_decomposition_holds,
    focal_oracle,
    fusion_p_core,
    hyperfocal_oracle,
    is_constrained,
    is_normal_in_fusion,
    is_saturated,
    saturation_flags,
)
from core.group_spec import emit_group_spec, write_group_spec
from core.lattice import thompson_subgroup
from core.lemmas import run_lemma_checks
from core.perm_groups import PermGroup, sylow_subgroup
from core.protoessential import STAGES, proto_essential_scan
from core.reports import (
    closure_report,
    essentials_report,
    focal_report,
    lemmas_report,
    pipeline_report,
    saturation_report,
    subgroup_record,
)
from core.utils import (
    EXIT_SUCCESS,
    InputError,
    ToolkitError,
    add_common_arguments,
    ensure_output_dir,
    parse_bound_overrides,
    safe_filename,
    save_json,
)


GROUP_COMMANDS = ('protoessential', 'essentials', 'saturation', 'focal', 'closure', 'lemmas')


def resolve_prime(G: PermGroup, prime: Optional[int]) -> int:
    """The requested prime, or the smallest prime dividing |G|."""
    if prime is not None:
        return prime
    factors = sorted(factorint(G.order()))
    if not factors:
        raise InputError("The trivial group has no prime; pass --prime")
    return int(factors[0])


def build_config(args: argparse.Namespace) -> RunConfig:
    cache_path = None
    if not args.no_cache:
        cache_path = args.cache or default_cache_path()
    return RunConfig(
        prime=args.prime,
        conjugacy_mode=normalize_mode(getattr(args, 'mode', 'inner')),
        rank_test_mode=getattr(args, 'rank_test', 'conservative'),
        diagnostic=getattr(args, 'diagnostic', False),
        overgroup_check=getattr(args, 'overgroup_check', False),
        seed=args.seed if args.seed is not None else DEFAULT_SEED,
        cache_path=cache_path,
        output_dir=args.output,
        report_path=args.report,
        record_timings=args.timings,
        bounds=parse_bound_overrides(getattr(args, 'bound', [])),
    )


def default_report_path(config: RunConfig, command: str, group_name: str) -> str:
    return os.path.join(config.output_dir, f"{command}_{safe_filename(group_name)}.json")


def fusion_system(config: RunConfig, G: PermGroup) -> RealizedFusionSystem:
    return RealizedFusionSystem(G, config.prime, seed=config.seed, name=G.name)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def run_protoessential(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    p = config.prime
    if G.is_p_group(p):
        S = G
    else:
        S = sylow_subgroup(G, p, config.seed)
        S.name = f"Syl_{p}({G.name})"
        print(f"  Scanning a Sylow {p}-subgroup of order {S.order()}")
    result = proto_essential_scan(S, p, mode=config.conjugacy_mode, config=config, cache=cache, quiet=quiet)
    counts = result.stage_counts
    print(f"  Classes: {counts['total']}")
    for stage in STAGES:
        print(f"    {stage:<9} {counts[stage]}")
    print(f"  Survivors: {len(result.survivors)}")
    if result.proto_essentials is not None:
        print(f"  Proto-essential after overgroup check: {len(result.proto_essentials)}")
    return pipeline_report(result, config)


def run_essentials(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    timings = {}
    t0 = time.perf_counter()
    F = fusion_system(config, G)
    essentials = essential_subgroups(F)
    timings['essentials'] = round(time.perf_counter() - t0, 4)

    t0 = time.perf_counter()
    focal, hyper = focal_and_hyperfocal(F)
    J = thompson_subgroup(F.sylow)
    flags = closure_flags(F, J).to_dict()
    timings['focal'] = round(time.perf_counter() - t0, 4)

    print(f"  |S| = {F.sylow.order()}, essential classes: {len(essentials)}")
    for c in essentials.classes:
        print(f"    order {c.representative.order()}, |Out_F| = {c.out_F_order}, class size {len(c.members)}")
    print(f"  |foc| = {focal.order()}, |hyp| = {hyper.order()}")
    return essentials_report(F, essentials, focal, hyper, flags, config, timings)


def run_saturation(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    F = fusion_system(config, G)
    classes = []
    for members in f_classes(F):
        record = subgroup_record(members[0])
        record['class_size'] = len(members)
        record['flags'] = saturation_flags(F, members[0]).to_dict()
        classes.append(record)
    saturated = is_saturated(F)
    alperin = alperin_generation_check(F)
    print(f"  F-classes: {len(classes)}, saturated: {saturated}, Alperin generation: {alperin}")
    return saturation_report(F, classes, saturated, alperin, config)


def run_focal(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    F = fusion_system(config, G)
    focal, hyper = focal_and_hyperfocal(F)
    checks = {
        'focal_equals_S_meet_derived': focal.elements() == focal_oracle(F).elements(),
        'hyperfocal_equals_S_meet_residual': hyper.elements() == hyperfocal_oracle(F).elements(),
        'focal_equals_derived_times_hyperfocal': focal_decomposition_holds(F),
    }
    print(f"  |foc| = {focal.order()}, |hyp| = {hyper.order()}")
    for name, value in checks.items():
        print(f"    {name}: {value}")
    return focal_report(F, focal, hyper, checks, config)


def run_closure(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    F = fusion_system(config, G)
    entries = []
    for members in f_classes(F):
        A = members[0]
        record = subgroup_record(A)
        record['class_size'] = len(members)
        record['flags'] = closure_flags(F, A).to_dict()
        record['flags']['normal'] = is_normal_in_fusion(F, A)
        entries.append(record)
    core = fusion_p_core(F)
    constrained = is_constrained(F)
    print(f"  |O_p(F)| = {core.order()}, constrained: {constrained}")
    return closure_report(F, entries, core, constrained, config)


def run_lemmas(config: RunConfig, G: PermGroup, cache: Optional[AutCache], quiet: bool) -> Dict[str, Any]:
    summaries = run_lemma_checks(G, config.prime, seed=config.seed, quiet=quiet, cache=cache)
    results = {name: s.to_dict() for name, s in summaries.items()}
    for name, s in sorted(summaries.items()):
        status = 'skipped' if s.skipped else f"{s.hypothesis_held}/{s.instances}, {len(s.violations)} violations"
        print(f"    {name:<32} {status}")
    return lemmas_report(G, config.prime, results, config)


RUNNERS: Dict[str, Callable[..., Dict[str, Any]]] = {
    'protoessential': run_protoessential,
    'essentials': run_essentials,
    'saturation': run_saturation,
    'focal': run_focal,
    'closure': run_closure,
    'lemmas': run_lemmas,
}


def process(command: str, args: argparse.Namespace) -> str:
    """
    Run one group command and write its report.

    Returns:
        Path of the written report
    """
    start_time = time.time()
    config = build_config(args)
    ensure_output_dir(config.output_dir)

    log_event(
        f'{command}_started',
        output_dir=config.output_dir,
        command=command,
        group=args.group,
        prime=args.prime,
        mode=config.conjugacy_mode,
    )

    try:
        print(f"Loading {args.group}...")
        G = load_group(args.group)
        config.prime = resolve_prime(G, args.prime)
        print(f"  |G| = {G.order()}, p = {config.prime}")

        cache = AutCache(config.cache_path) if config.cache_path else None
        with config.applied_bounds():
            report = RUNNERS[command](config, G, cache, args.quiet)

        path = config.report_path or default_report_path(config, command, G.name or 'group')
        save_json(report, path)
        if cache is not None:
            cache.save()
        print(f"  → {path}")

        log_stage_timings(command, report.get('timings'), output_dir=config.output_dir, group=G.name)
        elapsed = time.time() - start_time
        log_event(
            f'{command}_complete',
            output_dir=config.output_dir,
            command=command,
            group=G.name,
            prime=config.prime,
            status='success',
            report_file=os.path.basename(path),
            stage_timings=report.get('timings'),
            execution_time_seconds=round(elapsed, 2),
        )
        return path

    except Exception as e:
        elapsed = time.time() - start_time
        log_event(
            f'{command}_failed',
            output_dir=config.output_dir,
            command=command,
            group=args.group,
            status='failure',
            error=str(e),
            exit_code=getattr(e, 'exit_code', 1),
            execution_time_seconds=round(elapsed, 2),
        )
        raise


def corpus_command(args: argparse.Namespace) -> None:
    if args.action == 'list':
        for entry in CORPUS:
            order = entry.expected_order if entry.expected_order is not None else '?'
            primes = ','.join(str(p) for p in entry.primes) or '-'
            print(f"{entry.name:<24} {entry.describe():<28} order {order:<8} primes {primes}")
        return
    if not args.name:
        raise InputError("corpus emit needs a corpus name")
    G = build_named(args.name)
    if args.file:
        write_group_spec(G, args.file)
        print(f"  → {args.file}")
    else:
        sys.stdout.write(emit_group_spec(G))


def setup_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Proto-essential subgroups and realized fusion systems of small groups',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python fusion_toolkit.py protoessential --group corpus:extraspecial-3-27 --prime 3 --mode aut
    python fusion_toolkit.py essentials --group corpus:symmetric4 --prime 2
    python fusion_toolkit.py corpus list
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    scan = add_common_arguments(sub.add_parser('protoessential', help='Run the proto-essential filter'))
    scan.add_argument(
        '--mode',
        choices=sorted(MODE_ALIASES),
        default=CONJUGACY_MODES[0],
        help='Count subgroups up to S-conjugacy (inner) or Aut(S)-conjugacy (aut)'
    )
    scan.add_argument(
        '--rank-test',
        choices=RANK_TEST_MODES,
        default=RANK_TEST_MODES[0],
        help='Rank-test predicate (default: conservative)'
    )
    scan.add_argument(
        '--diagnostic',
        action='store_true',
        help='Run every test on every class'
    )
    scan.add_argument(
        '--overgroup-check',
        action='store_true',
        help='Confirm survivors with the overgroup test'
    )

    add_common_arguments(sub.add_parser('essentials', help='Essential subgroups of F_S(G)'))
    add_common_arguments(sub.add_parser('saturation', help='Saturation flags and Alperin generation'))
    add_common_arguments(sub.add_parser('focal', help='Focal and hyperfocal subgroups'))
    add_common_arguments(sub.add_parser('closure', help='Weak/strong closure and O_p(F)'))
    add_common_arguments(sub.add_parser('lemmas', help='Executable lemma checks'))

    corpus = sub.add_parser('corpus', help='List or emit bundled groups')
    corpus.add_argument('action', choices=('list', 'emit'))
    corpus.add_argument('name', nargs='?', help='Corpus name for emit')
    corpus.add_argument('--file', help='Write the group spec here instead of stdout')
    return parser


def main(argv=None) -> int:
    parser = setup_argparser()
    args = parser.parse_args(argv)

    try:
        if args.command == 'corpus':
            corpus_command(args)
        else:
            process(args.command, args)
        return EXIT_SUCCESS
    except ToolkitError as e:
        print(f"Error: {e}")
        return e.exit_code
    except Exception as e:
        print(f"Error: {e}")
        traceback.print_exc()
        return 1


if __name__ == '__main__':
    sys.exit(main())
