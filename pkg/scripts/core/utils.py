"""
Common utilities for the fusion toolkit.

This module provides shared functionality for:
- The error hierarchy and its exit codes
- Command-line argument helpers
- File I/O operations (JSON with encoding detection)
- Progress reporting
"""

import os
import json
import re
import argparse
import chardet
from typing import Any, Dict, Iterable, List, Optional, Tuple

from tqdm import tqdm


EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_ERROR = 3


class ToolkitError(Exception):
    """
    Base class for errors the command line reports with a stable exit code.

    Attributes:
        exit_code: Process exit status for this error
    """
    exit_code = 1


class InputError(ToolkitError):
    """Raised for malformed or inconsistent input (exit code 2)."""
    exit_code = EXIT_INPUT_ERROR


class GroupSpecError(InputError):
    """
    Raised when a group-spec document violates the schema.

    Attributes:
        field: Offending field name, if known
        line: 1-based line in the source file, if known
    """
    def __init__(self, message: str, field: str = None, line: int = None):
        location = []
        if field:
            location.append(f"field '{field}'")
        if line:
            location.append(f"line {line}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.field = field
        self.line = line


class ResourceBoundError(ToolkitError):
    """
    Raised when a computation would exceed a desk-scale bound (exit code 3).

    Attributes:
        bound: The configured limit
        size: The size that exceeded it
        stage: Name of the computation that hit the limit
    """
    exit_code = EXIT_RESOURCE_ERROR

    def __init__(self, stage: str, size: int, bound: int):
        super().__init__(f"{stage}: size {size} exceeds bound {bound}")
        self.stage = stage
        self.size = size
        self.bound = bound


def check_bound(stage: str, size: int, bound: int) -> None:
    """
    Raise ResourceBoundError if size exceeds bound.

    Args:
        stage: Name reported in the error
        size: Observed size
        bound: Allowed maximum
    """
    if size > bound:
        raise ResourceBoundError(stage, size, bound)


def add_common_arguments(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    """
    Add the flags shared by every group-taking sub-command.

    Args:
        parser: Sub-command parser to extend

    Returns:
        The same parser (for chaining)
    """
    parser.add_argument(
        '--group', '-g',
        required=True,
        help='Group reference: corpus:NAME or file:PATH'
    )
    parser.add_argument(
        '--prime', '-p',
        type=int,
        help='The prime p (default: the smallest prime dividing |G|)'
    )
    parser.add_argument(
        '--report',
        help='Report path (default: <output>/<command>_<group>.json)'
    )
    parser.add_argument(
        '--output', '-o',
        default='./output',
        help='Output directory for reports and the activity log (default: ./output)'
    )
    parser.add_argument(
        '--cache',
        help='Automorphism cache file (default: $FUSION_TOOLKIT_CACHE_DIR/aut_cache.json)'
    )
    parser.add_argument(
        '--no-cache',
        action='store_true',
        help='Disable the automorphism cache'
    )
    parser.add_argument(
        '--seed',
        type=int,
        help='Seed for sampled checks'
    )
    parser.add_argument(
        '--bound',
        action='append',
        default=[],
        metavar='NAME=VALUE',
        help='Override a desk-scale bound, e.g. enumeration_bound=5000 (repeatable)'
    )
    parser.add_argument(
        '--timings',
        action='store_true',
        help='Embed wall times in the report'
    )
    parser.add_argument(
        '--quiet', '-q',
        action='store_true',
        help='Suppress progress output'
    )
    return parser


def parse_bound_overrides(items: List[str]) -> Dict[str, int]:
    """
    Parse NAME=VALUE bound overrides from the command line.

    Raises:
        InputError: On a malformed item or a non-integer value
    """
    bounds: Dict[str, int] = {}
    for item in items or []:
        name, sep, value = item.partition('=')
        if not sep or not name.strip():
            raise InputError(f"Bound override must look like NAME=VALUE, got '{item}'")
        try:
            bounds[name.strip().lower()] = int(value)
        except ValueError:
            raise InputError(f"Bound {name.strip()} needs an integer value, got '{value}'") from None
    return bounds


def parse_group_ref(ref: str) -> Tuple[str, str]:
    """
    Split a --group reference into its kind and value.

    Args:
        ref: 'corpus:NAME' or 'file:PATH'

    Returns:
        Tuple of (kind, value)

    Raises:
        InputError: If the prefix is missing or unknown
    """
    kind, sep, value = (ref or '').partition(':')
    if not sep or kind not in ('corpus', 'file') or not value:
        raise InputError(f"Group reference must be corpus:NAME or file:PATH, got '{ref}'")
    return kind, value


def read_text(path: str) -> str:
    """Decode a file as UTF-8, falling back to the encoding chardet guesses."""
    with open(path, 'rb') as f:
        raw = f.read()
    try:
        return raw.decode('utf-8')
    except UnicodeDecodeError:
        encoding = chardet.detect(raw).get('encoding') or 'latin-1'
        return raw.decode(encoding, errors='replace')


def load_json(path: str) -> Any:
    """
    Parse a JSON file, guessing the encoding when it is not UTF-8.

    Raises:
        FileNotFoundError: No file at path
        json.JSONDecodeError: Malformed JSON
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File not found: {path}")
    return json.loads(read_text(path))


def dump_json(data: Any) -> str:
    """Canonical JSON text used for reports and group specs."""
    return json.dumps(data, indent=2, ensure_ascii=False) + '\n'


def save_json(data: Any, path: str) -> None:
    """Write dump_json(data) to path, creating parent directories."""
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dump_json(data))


def ensure_output_dir(output_dir: str) -> str:
    os.makedirs(output_dir, exist_ok=True)
    return output_dir


_UNSAFE = re.compile(r'[^0-9A-Za-z_-]+')


def safe_filename(name: str) -> str:
    """
    Report-file stem for a group name: runs of anything other than
    letters, digits, '-' and '_' collapse to one underscore.

        safe_filename('Syl_2(alternating6)') -> 'Syl_2_alternating6'
    """
    stem = _UNSAFE.sub('_', name.strip())
    stem = re.sub(r'_{2,}', '_', stem).strip('_')
    return stem or 'group'


def progress(iterable: Iterable, desc: str, total: Optional[int] = None, quiet: bool = False):
    """
    Wrap an iterable in a tqdm bar unless quiet.

    Args:
        iterable: Items to iterate
        desc: Bar label
        total: Length hint
        quiet: Return the iterable unchanged

    Returns:
        Iterable yielding the same items
    """
    if quiet:
        return iterable
    return tqdm(iterable, desc=desc, total=total, leave=False)
