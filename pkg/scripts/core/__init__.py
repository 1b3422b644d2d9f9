"""
Fusion Toolkit Core Modules

Permutation-group kernel, automorphism groups, realized fusion systems and
the proto-essential filter shared by the command-line tool.
"""

from .perm_groups import (
    PermGroup,
    SubgroupHandle,
    build_group,
    membership,
    centralizer,
    normalizer,
    commutator_subgroup,
    sylow_subgroup,
    p_core,
)
from .lattice import (
    all_subgroups,
    subgroup_classes,
    characteristic_subgroups,
    structure_predicates,
    thompson_subgroup,
)
from .automorphisms import (
    automorphism_group,
    outer_quotient,
    induced_quotient_action,
    has_element_of_order,
)
from .aut_cache import AutCache
from .fusion import (
    RealizedFusionSystem,
    hom_F,
    aut_F,
    out_F,
    f_class,
    saturation_flags,
    is_saturated,
    has_strongly_p_embedded,
    is_essential,
    essential_subgroups,
    closure_flags,
    normalizer_system,
    focal_and_hyperfocal,
    alperin_generation_check,
    fusion_p_core,
    is_constrained,
)
from .protoessential import (
    centric_test,
    rank_test,
    frattini_test,
    radical_test,
    lifting_test,
    proto_essential_scan,
)
from .lemmas import run_lemma_checks
from .corpus import CORPUS, corpus_build, load_group
from .group_spec import parse_group_spec, emit_group_spec
from .config import RunConfig
from .utils import (
    ToolkitError,
    InputError,
    GroupSpecError,
    ResourceBoundError,
    load_json,
    save_json,
    ensure_output_dir,
    safe_filename,
)
from .activity_log import (
    log_event,
    log_stage_timings,
    read_activity_log,
    get_run_summary,
    get_activity_log_path,
    clear_activity_log,
)

__all__ = [
    'PermGroup',
    'SubgroupHandle',
    'build_group',
    'membership',
    'centralizer',
    'normalizer',
    'commutator_subgroup',
    'sylow_subgroup',
    'p_core',
    'all_subgroups',
    'subgroup_classes',
    'characteristic_subgroups',
    'structure_predicates',
    'thompson_subgroup',
    'automorphism_group',
    'outer_quotient',
    'induced_quotient_action',
    'has_element_of_order',
    'AutCache',
    'RealizedFusionSystem',
    'hom_F',
    'aut_F',
    'out_F',
    'f_class',
    'saturation_flags',
    'is_saturated',
    'has_strongly_p_embedded',
    'is_essential',
    'essential_subgroups',
    'closure_flags',
    'normalizer_system',
    'focal_and_hyperfocal',
    'alperin_generation_check',
    'fusion_p_core',
    'is_constrained',
    'centric_test',
    'rank_test',
    'frattini_test',
    'radical_test',
    'lifting_test',
    'proto_essential_scan',
    'run_lemma_checks',
    'CORPUS',
    'corpus_build',
    'load_group',
    'parse_group_spec',
    'emit_group_spec',
    'RunConfig',
    'ToolkitError',
    'InputError',
    'GroupSpecError',
    'ResourceBoundError',
    'load_json',
    'save_json',
    'ensure_output_dir',
    'safe_filename',
    'log_event',
    'log_stage_timings',
    'read_activity_log',
    'get_run_summary',
    'get_activity_log_path',
    'clear_activity_log',
]
