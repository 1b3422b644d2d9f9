"""
JSON report builders.

This module turns computation results into plain dictionaries:
- Proto-essential pipeline reports (pipeline_report)
- Essential-subgroup reports with focal data (essentials_report)
- Saturation, focal and closure reports for single fusion queries
- The provenance block every report carries

Reports contain no wall times unless the run asked for them, so two runs
with the same input produce byte-identical files.
"""

from typing import Any, Dict, List, Optional

from .config import TOOLKIT_VERSION, RunConfig
from .perm_groups import PermGroup, cycles_of, generating_set
from .protoessential import PipelineReport, TestOutcome, STAGES


def provenance(config: RunConfig) -> Dict[str, Any]:
    """Toolkit version, configuration and seed."""
    return {
        'toolkit_version': TOOLKIT_VERSION,
        'config': config.to_dict(),
        'seed': config.seed,
    }


def subgroup_record(H: PermGroup) -> Dict[str, Any]:
    """
    Order and canonical generators of a subgroup.

    Generators are the greedy generating set of the sorted elements, so the
    record depends only on the subgroup.
    """
    gens = generating_set(H.elements(), H.identity)
    return {
        'order': H.order(),
        'generators': [cycles_of(g) for g in gens],
    }


def group_record(G: PermGroup) -> Dict[str, Any]:
    return {
        'name': G.name,
        'degree': G.degree,
        'order': G.order(),
        'generators': [cycles_of(g) for g in G.gens],
    }


def outcome_record(outcome: TestOutcome) -> Dict[str, Any]:
    record = {
        'subgroup': subgroup_record(outcome.subgroup),
        'stage': outcome.stage,
        'passed': outcome.passed,
        'detail': outcome.detail,
    }
    if outcome.flagged:
        record['flagged'] = True
    return record


def _finish(report: Dict[str, Any], config: RunConfig, timings: Optional[Dict[str, float]]) -> Dict[str, Any]:
    report['provenance'] = provenance(config)
    if config.record_timings and timings is not None:
        report['timings'] = dict(sorted(timings.items()))
    return report


def pipeline_report(result: PipelineReport, config: RunConfig,
                    timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    """
    Dictionary form of a proto-essential scan.

    Field names: group, prime, mode, stage_counts, survivors, traces;
    "counting" records that counts are of subgroup classes.
    """
    counts = {'total': result.stage_counts['total']}
    counts.update({stage: result.stage_counts[stage] for stage in STAGES})
    report = {
        'group': result.group_name,
        'prime': result.prime,
        'mode': result.conjugacy_mode,
        'rank_test': result.rank_test_mode,
        'counting': 'classes',
        'stage_counts': counts,
        'survivors': [subgroup_record(E) for E in result.survivors],
        'traces': [outcome_record(t) for t in result.traces],
    }
    if result.proto_essentials is not None:
        report['proto_essentials'] = [subgroup_record(E) for E in result.proto_essentials]
    return _finish(report, config, timings if timings is not None else result.timings)


def essential_class_record(c) -> Dict[str, Any]:
    record = subgroup_record(c.representative)
    record.update({
        'class_size': len(c.members),
        'outF_order': c.out_F_order,
        'spe_witness_order': c.witness.order(),
        'flags': {
            'fully_normalized': c.fully_normalized,
            'centric': c.centric,
            'radical': c.radical,
        },
    })
    return record


def essentials_report(
    F,
    essentials,
    focal: PermGroup,
    hyperfocal: PermGroup,
    thompson_flags: Dict[str, bool],
    config: RunConfig,
    timings: Optional[Dict[str, float]] = None,
) -> Dict[str, Any]:
    report = {
        'group': F.name,
        'prime': F.prime,
        'ambient_order': F.ambient.order(),
        'sylow': subgroup_record(F.sylow),
        'essential_classes': [essential_class_record(c) for c in essentials.classes],
        'focal': subgroup_record(focal),
        'hyperfocal': subgroup_record(hyperfocal),
        'thompson': thompson_flags,
    }
    return _finish(report, config, timings)


def saturation_report(F, classes: List[Dict[str, Any]], saturated: bool, alperin: bool,
                      config: RunConfig, timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    report = {
        'group': F.name,
        'prime': F.prime,
        'sylow': subgroup_record(F.sylow),
        'saturated': saturated,
        'alperin_generation': alperin,
        'classes': classes,
    }
    return _finish(report, config, timings)


def focal_report(F, focal: PermGroup, hyperfocal: PermGroup, checks: Dict[str, bool],
                 config: RunConfig, timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    report = {
        'group': F.name,
        'prime': F.prime,
        'sylow': subgroup_record(F.sylow),
        'focal': subgroup_record(focal),
        'hyperfocal': subgroup_record(hyperfocal),
        'checks': checks,
    }
    return _finish(report, config, timings)


def closure_report(F, entries: List[Dict[str, Any]], p_core: PermGroup, constrained: bool,
                   config: RunConfig, timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    report = {
        'group': F.name,
        'prime': F.prime,
        'sylow': subgroup_record(F.sylow),
        'subgroups': entries,
        'fusion_p_core': subgroup_record(p_core),
        'constrained': constrained,
    }
    return _finish(report, config, timings)


def lemmas_report(group: PermGroup, prime: int, results: Dict[str, Dict[str, Any]],
                  config: RunConfig, timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    report = {
        'group': group.name,
        'prime': prime,
        'lemmas': dict(sorted(results.items())),
        'violations': sorted(name for name, r in results.items() if r.get('violations')),
    }
    return _finish(report, config, timings)
