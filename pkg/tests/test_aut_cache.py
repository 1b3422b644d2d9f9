"""
Tests for core/aut_cache.py - Persistent automorphism cache
"""

import sys
import os
import json
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

from core.aut_cache import CACHE_VERSION, AutCache, group_key
from core.automorphisms import automorphism_group
from core.lattice import minimal_generating_sequence
from core.corpus import build_named


class TestGroupKey:
    """Tests for group_key function."""

    def test_same_group_same_key(self):
        assert group_key(build_named('dihedral4')) == group_key(build_named('dihedral4'))

    def test_different_groups_differ(self):
        assert group_key(build_named('dihedral4')) != group_key(build_named('quaternion8'))


class TestAutCache:
    """Tests for AutCache storage and reuse."""

    def test_store_and_save(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            cache = AutCache(path)
            automorphism_group(build_named('quaternion8'), cache=cache)
            assert len(cache) == 1
            assert cache.dirty
            cache.save()
            assert not cache.dirty
            with open(path, 'r') as f:
                data = json.load(f)
            assert data['version'] == CACHE_VERSION
            entry = next(iter(data['entries'].values()))
            assert entry['order'] == 8

    def test_hit_reproduces_group(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            first = AutCache(path)
            automorphism_group(build_named('extraspecial-3-27'), cache=first)
            first.save()

            second = AutCache(path)
            E = build_named('extraspecial-3-27')
            assert second.lookup(E, minimal_generating_sequence(E)) is not None
            assert automorphism_group(E, cache=second).order() == 432
            assert not second.dirty

    def test_elementary_abelian_entries_are_stored(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            cache = AutCache(os.path.join(tmpdir, 'aut_cache.json'))
            automorphism_group(build_named('cpxcp-3'), cache=cache)
            assert len(cache) == 1

    def test_mismatched_sequence_is_a_miss(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            cache = AutCache(os.path.join(tmpdir, 'aut_cache.json'))
            E = build_named('dihedral4')
            automorphism_group(E, cache=cache)
            gens = minimal_generating_sequence(E)
            assert cache.lookup(E, list(reversed(gens))) is None

    def test_tampered_entry_is_recomputed(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            cache = AutCache(path)
            automorphism_group(build_named('dihedral4'), cache=cache)
            cache.save()

            with open(path, 'r') as f:
                data = json.load(f)
            for entry in data['entries'].values():
                degree = len(entry['generating_sequence'][0])
                identity = list(range(1, degree + 1))
                entry['automorphisms'] = [[identity for _ in entry['generating_sequence']]]
            with open(path, 'w') as f:
                json.dump(data, f)

            E = build_named('dihedral4')
            assert automorphism_group(E, cache=AutCache(path)).order() == 8

    def test_corrupt_file_is_ignored(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            with open(path, 'w') as f:
                f.write('{not json')
            cache = AutCache(path)
            assert len(cache) == 0

    def test_wrong_version_is_ignored(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            with open(path, 'w') as f:
                json.dump({'version': CACHE_VERSION + 1, 'entries': {'x': {}}}, f)
            assert len(AutCache(path)) == 0

    def test_save_without_changes_writes_nothing(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            AutCache(path).save()
            assert not os.path.exists(path)

    def test_images_outside_group_are_recomputed(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'aut_cache.json')
            cache = AutCache(path)
            automorphism_group(build_named('dihedral4'), cache=cache)
            cache.save()

            with open(path, 'r') as f:
                data = json.load(f)
            for entry in data['entries'].values():
                three_cycle = [2, 3, 1, 4]
                entry['automorphisms'] = [[three_cycle for _ in entry['generating_sequence']]]
            with open(path, 'w') as f:
                json.dump(data, f)

            E = build_named('dihedral4')
            reread = AutCache(path)
            aut = automorphism_group(E, cache=reread)
            assert aut.order() == 8
            assert reread.dirty
            stored = reread.lookup(E, minimal_generating_sequence(E))
            assert all(y in E.elements() for images in stored for y in images)
