"""
Persistent cache of automorphism group generators.

Entries are keyed by a hash of the group's sorted element list and store,
for each generator of Aut(E), the images of E's generating sequence (as
1-based image lists). automorphism_group() re-verifies every hit before
trusting it, so a stale or edited file only costs a recomputation.

File layout:
    {"version": 1, "entries": {"<sha256>": {"order": n, "aut_order": m,
        "generating_sequence": [[...], ...], "automorphisms": [[[...], ...], ...]}}}
"""

import hashlib
import json
import os
import threading
from typing import Dict, List, Optional, Sequence

from .perm_groups import Element, PermGroup
from .utils import load_json, save_json


CACHE_VERSION = 1


def group_key(E: PermGroup) -> str:
    """Stable key of a group: sha256 over its sorted elements."""
    payload = json.dumps([list(x) for x in E.sorted_elements()], separators=(',', ':'))
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def _encode(x: Element) -> List[int]:
    return [i + 1 for i in x]


def _decode(images: Sequence[int]) -> Element:
    return tuple(i - 1 for i in images)


class AutCache:
    """
    JSON-backed Aut cache with a lock around reads and writes.

    Attributes:
        path: Cache file location
        dirty: True when entries were added since the last save
    """

    def __init__(self, path: str):
        self.path = path
        self.dirty = False
        self._entries: Optional[Dict[str, Dict]] = None
        self._lock = threading.Lock()

    def _load(self) -> Dict[str, Dict]:
        if self._entries is None:
            entries: Dict[str, Dict] = {}
            if os.path.exists(self.path):
                try:
                    data = load_json(self.path)
                    if isinstance(data, dict) and data.get('version') == CACHE_VERSION:
                        entries = dict(data.get('entries') or {})
                except (ValueError, OSError):
                    entries = {}
            self._entries = entries
        return self._entries

    def lookup(self, E: PermGroup, generating_sequence: Sequence[Element]) -> Optional[List[List[Element]]]:
        """
        Stored generator images for E, or None.

        A hit only counts when the stored generating sequence matches the
        one requested.
        """
        with self._lock:
            entry = self._load().get(group_key(E))
        if not entry:
            return None
        if [_decode(g) for g in entry.get('generating_sequence', [])] != list(generating_sequence):
            return None
        try:
            return [[_decode(x) for x in images] for images in entry['automorphisms']]
        except (KeyError, TypeError):
            return None

    def expected_order(self, E: PermGroup) -> Optional[int]:
        """|Aut(E)| recorded with the entry, or None."""
        with self._lock:
            entry = self._load().get(group_key(E))
        return entry.get('aut_order') if entry else None

    def store(self, E: PermGroup, generating_sequence: Sequence[Element],
              automorphisms: Sequence[Sequence[Element]], aut_order: int) -> None:
        entry = {
            'order': E.order(),
            'aut_order': aut_order,
            'generating_sequence': [_encode(g) for g in generating_sequence],
            'automorphisms': [[_encode(x) for x in images] for images in automorphisms],
        }
        with self._lock:
            self._load()[group_key(E)] = entry
            self.dirty = True

    def save(self) -> None:
        """Write the cache file if anything changed."""
        with self._lock:
            if not self.dirty:
                return
            entries = self._load()
            save_json({'version': CACHE_VERSION, 'entries': dict(sorted(entries.items()))}, self.path)
            self.dirty = False

    def __len__(self) -> int:
        with self._lock:
            return len(self._load())
