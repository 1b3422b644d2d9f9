"""
Run configuration and desk-scale bounds.

All bounds live here so that commands, reports and tests agree on them:
- ENUMERATION_BOUND: largest group whose elements are listed explicitly
- SUBGROUP_BOUND_ODD / SUBGROUP_BOUND_TWO: largest p-group whose full
  subgroup lattice is enumerated
- AMBIENT_BOUND: largest ambient group accepted by fusion queries
- AUT_SEARCH_BOUND: leaf budget of the automorphism backtrack

Code reads them through active_bound(), so a RunConfig's overrides apply
while its applied_bounds() context is open. The cache directory can be
moved with FUSION_TOOLKIT_CACHE_DIR.
"""

import os
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field, asdict
from typing import Dict, Any, Iterator, Mapping, Optional

from .utils import InputError


ENUMERATION_BOUND = 20000
SUBGROUP_BOUND_ODD = 729
SUBGROUP_BOUND_TWO = 512
AMBIENT_BOUND = 100000
AUT_SEARCH_BOUND = 2000000
COPRIME_PAIR_SAMPLE_LIMIT = 10000
TRIPLE_SAMPLE_LIMIT = 500
HYPERFOCAL_WORDS = 20
DEFAULT_SEED = 20240601

CACHE_ENV_VAR = 'FUSION_TOOLKIT_CACHE_DIR'
CACHE_FILENAME = 'aut_cache.json'

CONJUGACY_MODES = ('inner', 'aut')
MODE_ALIASES = {'automorphism': 'aut', 'inner': 'inner', 'aut': 'aut'}
RANK_TEST_MODES = ('conservative', 'strict')
BOUND_NAMES = (
    'enumeration_bound',
    'subgroup_bound_odd',
    'subgroup_bound_two',
    'ambient_bound',
    'aut_search_bound',
)

_bound_overrides: ContextVar[Dict[str, int]] = ContextVar('bound_overrides', default={})


def _package_version() -> str:
    try:
        from importlib.metadata import version, PackageNotFoundError
    except ImportError:  # pragma: no cover
        return '1.0.0'
    try:
        return version('fusion-toolkit')
    except PackageNotFoundError:
        return '1.0.0'


TOOLKIT_VERSION = _package_version()


def validate_bounds(bounds: Mapping[str, int]) -> Dict[str, int]:
    """
    Check bound overrides by name and value.

    Raises:
        InputError: On an unknown name or a value that is not a positive integer
    """
    checked = {}
    for name, value in bounds.items():
        if name not in BOUND_NAMES:
            raise InputError(f"Unknown bound '{name}' (expected one of: {', '.join(BOUND_NAMES)})")
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise InputError(f"Bound {name} must be a positive integer, got {value!r}")
        checked[name] = value
    return checked


def active_bound(name: str) -> int:
    """The bound in force: an active override, else the module constant."""
    overrides = _bound_overrides.get()
    if name in overrides:
        return overrides[name]
    return globals()[name.upper()]


@contextmanager
def bound_overrides(bounds: Mapping[str, int]) -> Iterator[None]:
    """Apply bound overrides for the duration of the block; nested blocks stack."""
    token = _bound_overrides.set({**_bound_overrides.get(), **validate_bounds(bounds)})
    try:
        yield
    finally:
        _bound_overrides.reset(token)


def normalize_mode(mode: str) -> str:
    """Map 'automorphism' to 'aut'; reject unknown conjugacy modes."""
    if mode not in MODE_ALIASES:
        raise InputError(f"Unknown conjugacy mode '{mode}' (expected inner or aut)")
    return MODE_ALIASES[mode]


def default_cache_dir() -> str:
    """
    Resolve the cache directory.

    The environment variable wins over the per-user default.

    Returns:
        Directory path (not created here)
    """
    override = os.environ.get(CACHE_ENV_VAR)
    if override:
        return override
    return os.path.join(os.path.expanduser('~'), '.cache', 'fusion-toolkit')


def default_cache_path() -> str:
    return os.path.join(default_cache_dir(), CACHE_FILENAME)


@dataclass
class RunConfig:
    """
    Settings for one command invocation.

    Attributes:
        prime: The prime p
        conjugacy_mode: 'inner' or 'aut' (classes up to S- or Aut(S)-conjugacy)
        rank_test_mode: 'conservative' or 'strict'
        diagnostic: Force every stage for every class
        overgroup_check: Run the optional overgroup confirmation after lifting
        seed: Seed for sampled checks, recorded in every report
        cache_path: Automorphism cache file, None disables caching
        output_dir: Directory for the activity log and default reports
        report_path: Explicit report path
        record_timings: Embed wall times in the report
        bounds: Overrides for the module-level bounds, keyed by lower-case name
    """
    prime: Optional[int] = None
    conjugacy_mode: str = 'inner'
    rank_test_mode: str = 'conservative'
    diagnostic: bool = False
    overgroup_check: bool = False
    seed: int = DEFAULT_SEED
    cache_path: Optional[str] = None
    output_dir: str = './output'
    report_path: Optional[str] = None
    record_timings: bool = False
    bounds: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.bounds = validate_bounds(self.bounds)

    def bound(self, name: str) -> int:
        """Look up a bound, honouring this config's overrides (e.g. 'enumeration_bound')."""
        if name in self.bounds:
            return self.bounds[name]
        return active_bound(name)

    def applied_bounds(self):
        """Context in which every bound check sees this config's overrides."""
        return bound_overrides(self.bounds)

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view embedded in reports (paths excluded)."""
        data = asdict(self)
        for key in ('cache_path', 'output_dir', 'report_path', 'record_timings'):
            data.pop(key, None)
        data['bounds'] = dict(sorted(self.bounds.items()))
        return data
