"""
Tests for scripts/fusion_toolkit.py - Command line
"""

import pytest
import sys
import os
import json
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

from fusion_toolkit import main, resolve_prime, setup_argparser
from core.activity_log import read_activity_log
from core.corpus import build_named
from core.utils import InputError


def _run(tmpdir, *argv):
    return main(list(argv) + ['--output', tmpdir, '--no-cache', '--quiet'])


def _report(tmpdir, command, group):
    with open(os.path.join(tmpdir, f'{command}_{group}.json'), 'r', encoding='utf-8') as f:
        return json.load(f)


def _report_bytes(tmpdir, command, group):
    with open(os.path.join(tmpdir, f'{command}_{group}.json'), 'rb') as f:
        return f.read()


class TestResolvePrime:
    """Tests for resolve_prime function."""

    def test_explicit_prime(self):
        assert resolve_prime(build_named('symmetric4'), 3) == 3

    def test_smallest_prime(self):
        assert resolve_prime(build_named('extraspecial-3-27'), None) == 3

    def test_trivial_group(self):
        from core.perm_groups import PermGroup
        with pytest.raises(InputError):
            resolve_prime(PermGroup(2, []), None)


class TestArgParser:
    """Tests for the argument parser."""

    def test_mode_alias_accepted(self):
        args = setup_argparser().parse_args(
            ['protoessential', '--group', 'corpus:dihedral4', '--mode', 'automorphism']
        )
        assert args.mode == 'automorphism'

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            setup_argparser().parse_args(['sylow', '--group', 'corpus:dihedral4'])


class TestProtoessentialCommand:
    """Tests for the protoessential sub-command."""

    def test_d8_aut(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            code = _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral4', '--prime', '2', '--mode', 'aut')
            assert code == 0
            report = _report(tmpdir, 'protoessential', 'dihedral4')
            assert report['mode'] == 'aut'
            assert len(report['survivors']) == 1
            assert report['provenance']['seed'] > 0

    def test_reports_are_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            first = os.path.join(tmpdir, 'first.json')
            second = os.path.join(tmpdir, 'second.json')
            for path in (first, second):
                code = _run(tmpdir, 'protoessential', '--group', 'corpus:extraspecial-3-27',
                            '--mode', 'aut', '--report', path)
                assert code == 0
            with open(first, 'rb') as a, open(second, 'rb') as b:
                assert a.read() == b.read()

    def test_non_p_group_scans_sylow(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'a6.json')
            code = _run(tmpdir, 'protoessential', '--group', 'corpus:alternating6', '--prime', '2', '--report', path)
            assert code == 0
            with open(path) as f:
                report = json.load(f)
            assert report['group'] == 'Syl_2(alternating6)'
            assert len(report['survivors']) == 2

    def test_timings_flag(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            code = _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral4', '--timings')
            assert code == 0
            assert 'timings' in _report(tmpdir, 'protoessential', 'dihedral4')

    def test_uses_cache_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            cache = os.path.join(tmpdir, 'aut.json')
            code = main(['protoessential', '--group', 'corpus:extraspecial-3-27', '--mode', 'aut',
                         '--output', tmpdir, '--cache', cache, '--quiet'])
            assert code == 0
            assert os.path.exists(cache)

    def test_warm_cache_report_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            cache = os.path.join(tmpdir, 'aut.json')
            argv = ['protoessential', '--group', 'corpus:extraspecial-3-27', '--mode', 'aut',
                    '--diagnostic', '--output', tmpdir, '--cache', cache, '--quiet']
            assert main(argv) == 0
            cold = _report_bytes(tmpdir, 'protoessential', 'extraspecial-3-27')
            with open(cache, 'r', encoding='utf-8') as f:
                assert json.load(f)['entries']
            assert main(argv) == 0
            assert _report_bytes(tmpdir, 'protoessential', 'extraspecial-3-27') == cold
            assert _run(tmpdir, 'protoessential', '--group', 'corpus:extraspecial-3-27', '--mode', 'aut',
                        '--diagnostic') == 0
            assert _report_bytes(tmpdir, 'protoessential', 'extraspecial-3-27') == cold

    def test_corrupted_cache_entries_are_recomputed(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            cache = os.path.join(tmpdir, 'aut.json')
            argv = ['protoessential', '--group', 'corpus:extraspecial-3-27', '--mode', 'aut',
                    '--diagnostic', '--output', tmpdir, '--cache', cache, '--quiet']
            assert main(argv) == 0
            clean = _report_bytes(tmpdir, 'protoessential', 'extraspecial-3-27')

            with open(cache, 'r', encoding='utf-8') as f:
                data = json.load(f)
            for entry in data['entries'].values():
                degree = len(entry['generating_sequence'][0])
                three_cycle = [2, 3, 1] + list(range(4, degree + 1))
                entry['automorphisms'] = [[three_cycle for _ in entry['generating_sequence']]]
            with open(cache, 'w', encoding='utf-8') as f:
                json.dump(data, f)

            assert main(argv) == 0
            assert _report_bytes(tmpdir, 'protoessential', 'extraspecial-3-27') == clean

    def test_bound_override_exceeded(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            code = _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral8', '--bound', 'subgroup_bound_two=8')
            assert code == 3
            failed = read_activity_log(tmpdir, event_type='protoessential_failed')
            assert failed[-1]['exit_code'] == 3

    def test_bound_override_recorded(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            code = _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral4', '--bound', 'ambient_bound=5000')
            assert code == 0
            report = _report(tmpdir, 'protoessential', 'dihedral4')
            assert report['provenance']['config']['bounds'] == {'ambient_bound': 5000}

    @pytest.mark.parametrize('item', ['no_such_bound=5', 'enumeration_bound=0', 'enumeration_bound'])
    def test_bad_bound_override(self, item):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral4', '--bound', item) == 2


class TestFusionCommands:
    """Tests for the fusion-system sub-commands."""

    def test_essentials(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'essentials', '--group', 'corpus:symmetric4', '--prime', '2') == 0
            report = _report(tmpdir, 'essentials', 'symmetric4')
            assert len(report['essential_classes']) == 1
            assert report['focal']['order'] == 4
            assert report['hyperfocal']['order'] == 4

    def test_saturation(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'saturation', '--group', 'corpus:symmetric4', '--prime', '2') == 0
            report = _report(tmpdir, 'saturation', 'symmetric4')
            assert report['saturated'] is True
            assert report['alperin_generation'] is True
            assert len(report['classes']) == 7

    def test_focal(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'focal', '--group', 'corpus:alternating5', '--prime', '2') == 0
            report = _report(tmpdir, 'focal', 'alternating5')
            assert all(report['checks'].values())

    def test_closure(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'closure', '--group', 'corpus:symmetric4', '--prime', '2') == 0
            report = _report(tmpdir, 'closure', 'symmetric4')
            assert report['fusion_p_core']['order'] == 4
            assert report['constrained'] is True

    def test_lemmas(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'lemmas', '--group', 'corpus:symmetric3', '--prime', '2', '--seed', '5') == 0
            report = _report(tmpdir, 'lemmas', 'symmetric3')
            assert report['violations'] == []
            assert report['provenance']['seed'] == 5


class TestExitCodes:
    """Tests for error handling and exit codes."""

    def test_unknown_corpus_name(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'essentials', '--group', 'corpus:monster') == 2

    def test_bad_reference(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'focal', '--group', 'symmetric4') == 2

    def test_malformed_spec(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            spec = os.path.join(tmpdir, 'bad.json')
            with open(spec, 'w') as f:
                json.dump({'name': 'bad', 'degree': 3, 'generators': [[[1, 4]]]}, f)
            assert _run(tmpdir, 'essentials', '--group', f'file:{spec}') == 2

    def test_non_prime(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'essentials', '--group', 'corpus:symmetric4', '--prime', '4') == 2

    def test_ambient_bound(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            assert _run(tmpdir, 'essentials', '--group', 'corpus:symmetric9', '--prime', '3') == 3

    def test_failure_is_logged(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            _run(tmpdir, 'closure', '--group', 'corpus:monster')
            events = read_activity_log(tmpdir)
            assert events[-1]['event_type'] == 'closure_failed'
            assert events[-1]['exit_code'] == 2

    def test_success_is_logged(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            _run(tmpdir, 'protoessential', '--group', 'corpus:dihedral4')
            events = read_activity_log(tmpdir)
            assert [e['event_type'] for e in events] == ['protoessential_started', 'protoessential_complete']


class TestCorpusCommand:
    """Tests for the corpus sub-command."""

    def test_list(self, capsys):
        assert main(['corpus', 'list']) == 0
        assert 'extraspecial-3-27' in capsys.readouterr().out

    def test_emit_to_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'd8.json')
            assert main(['corpus', 'emit', 'dihedral4', '--file', path]) == 0
            with open(path) as f:
                assert json.load(f)['degree'] == 4

    def test_emit_needs_name(self):
        assert main(['corpus', 'emit']) == 2
