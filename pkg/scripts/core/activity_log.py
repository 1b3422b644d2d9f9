"""
Run log for toolkit commands.

Wall times live here rather than in the reports, which stay
byte-reproducible. Each line is one JSON event:

    <command>_started    group reference, prime, mode
    <command>_complete   report file, execution_time_seconds
    <command>_failed     error, exit_code
    stage_complete       one pipeline or fusion stage with its seconds

Location: <output_dir>/fusion_activity.jsonl
"""

import logging
import json
import os
import threading
from collections import Counter
from datetime import datetime
from typing import Any, Dict, Iterator, List, Optional


LOG_FILENAME = 'fusion_activity.jsonl'

_loggers: Dict[str, logging.Logger] = {}
_logger_lock = threading.Lock()


def _log_path(output_dir: str) -> str:
    return os.path.abspath(os.path.join(output_dir, LOG_FILENAME))


def _close_handlers(logger: logging.Logger) -> None:
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)


def _get_logger(output_dir: str) -> logging.Logger:
    """One logger per log file, created once under the module lock."""
    path = _log_path(output_dir)
    logger = _loggers.get(path)
    if logger is not None:
        return logger

    with _logger_lock:
        if path not in _loggers:
            os.makedirs(output_dir, exist_ok=True)
            logger = logging.getLogger(f'fusion_activity.{len(_loggers)}.{os.path.basename(output_dir)}')
            logger.setLevel(logging.INFO)
            _close_handlers(logger)
            handler = logging.FileHandler(path, mode='a', encoding='utf-8')
            handler.setFormatter(logging.Formatter('%(message)s'))
            logger.addHandler(handler)
            logger.propagate = False
            _loggers[path] = logger
        return _loggers[path]


def log_event(event_type: str, output_dir: str = './output', **fields) -> None:
    """
    Append one event to the run log. Never raises.

    Args:
        event_type: e.g. 'essentials_started', 'stage_complete'
        output_dir: Directory holding the log
        **fields: Event payload; values that are not JSON types are stringified
    """
    entry = {'timestamp': datetime.utcnow().isoformat() + 'Z', 'event_type': event_type}
    entry.update(fields)
    try:
        _get_logger(output_dir).info(json.dumps(entry, default=str))
    except Exception:
        # a broken log must not abort a computation
        pass


def log_stage_timings(
    command: str,
    timings: Optional[Dict[str, float]],
    output_dir: str = './output',
    group: Optional[str] = None,
) -> None:
    """One stage_complete event per timed stage, in stage order."""
    for stage, seconds in (timings or {}).items():
        log_event('stage_complete', output_dir=output_dir, command=command,
                  group=group, stage=stage, seconds=seconds)


def get_activity_log_path(output_dir: str = './output') -> str:
    return os.path.join(output_dir, LOG_FILENAME)


def _iter_entries(path: str) -> Iterator[Dict[str, Any]]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for raw in f:
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    yield json.loads(raw)
                except json.JSONDecodeError:
                    continue
    except (IOError, OSError):
        return


def read_activity_log(
    output_dir: str = './output',
    command: Optional[str] = None,
    event_type: Optional[str] = None,
) -> List[Dict]:
    """
    Events from the run log, oldest first. Malformed lines are skipped.

    Args:
        output_dir: Directory holding the log
        command: Keep only events of this command
        event_type: Keep only events of this type
    """
    path = get_activity_log_path(output_dir)
    if not os.path.exists(path):
        return []
    return [
        e for e in _iter_entries(path)
        if (command is None or e.get('command') == command)
        and (event_type is None or e.get('event_type') == event_type)
    ]


def _outcome(entry: Dict[str, Any]) -> Optional[str]:
    if not entry.get('command'):
        return None
    kind = entry.get('event_type', '')
    if kind.endswith('_complete') and kind != 'stage_complete':
        return 'completed'
    if kind.endswith('_failed'):
        return 'failed'
    return None


def get_run_summary(output_dir: str = './output') -> Dict[str, Any]:
    """
    Per-command totals over the run log.

    Returns:
        runs_completed, runs_failed, commands, groups, per-command counts,
        failure exit codes and total execution time
    """
    by_command: Dict[str, Dict[str, Any]] = {}
    exit_codes: Counter = Counter()
    groups = set()
    total = 0.0

    for entry in read_activity_log(output_dir):
        outcome = _outcome(entry)
        if outcome is None:
            continue
        row = by_command.setdefault(entry['command'], {'completed': 0, 'failed': 0, 'seconds': 0.0})
        row[outcome] += 1
        elapsed = entry.get('execution_time_seconds')
        if outcome == 'completed':
            if entry.get('group'):
                groups.add(entry['group'])
            if isinstance(elapsed, (int, float)):
                row['seconds'] = round(row['seconds'] + elapsed, 4)
                total += elapsed
        else:
            exit_codes[str(entry.get('exit_code', 1))] += 1

    completed = sum(row['completed'] for row in by_command.values())
    failed = sum(row['failed'] for row in by_command.values())
    return {
        'runs_completed': completed,
        'runs_failed': failed,
        'commands': sorted(by_command),
        'groups': sorted(groups),
        'by_command': dict(sorted(by_command.items())),
        'failure_exit_codes': dict(sorted(exit_codes.items())),
        'total_execution_time_seconds': round(total, 2),
        'all_successful': failed == 0,
    }


def clear_activity_log(output_dir: str = './output') -> None:
    """Delete the log file and forget its logger."""
    path = _log_path(output_dir)
    with _logger_lock:
        logger = _loggers.pop(path, None)
        if logger is not None:
            _close_handlers(logger)
    if os.path.exists(path):
        os.remove(path)
