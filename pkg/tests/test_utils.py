"""
Tests for core/utils.py - Errors, argument helpers and JSON I/O
"""

import pytest
import sys
import os
import argparse
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

from core.utils import (
    EXIT_INPUT_ERROR,
    EXIT_RESOURCE_ERROR,
    GroupSpecError,
    InputError,
    ResourceBoundError,
    ToolkitError,
    add_common_arguments,
    check_bound,
    dump_json,
    ensure_output_dir,
    load_json,
    parse_bound_overrides,
    parse_group_ref,
    safe_filename,
    save_json,
)


class TestErrors:
    """Tests for the error hierarchy."""

    def test_exit_codes(self):
        assert InputError("x").exit_code == EXIT_INPUT_ERROR == 2
        assert ResourceBoundError('closure', 10, 5).exit_code == EXIT_RESOURCE_ERROR == 3

    def test_group_spec_error_is_input_error(self):
        error = GroupSpecError("Degree must be a positive integer", field='degree', line=3)
        assert isinstance(error, InputError)
        assert isinstance(error, ToolkitError)
        assert "field 'degree'" in str(error)
        assert "line 3" in str(error)
        assert error.field == 'degree'
        assert error.line == 3

    def test_resource_error_names_stage(self):
        error = ResourceBoundError('subgroup enumeration', 2187, 729)
        assert error.stage == 'subgroup enumeration'
        assert error.size == 2187
        assert error.bound == 729
        assert 'subgroup enumeration' in str(error)


class TestCheckBound:
    """Tests for check_bound function."""

    def test_within_bound(self):
        check_bound('closure', 100, 100)

    def test_over_bound(self):
        with pytest.raises(ResourceBoundError) as info:
            check_bound('closure', 101, 100)
        assert info.value.size == 101


class TestParseGroupRef:
    """Tests for parse_group_ref function."""

    def test_corpus_reference(self):
        assert parse_group_ref('corpus:dihedral4') == ('corpus', 'dihedral4')

    def test_file_reference_keeps_colons(self):
        assert parse_group_ref('file:C:/groups/s4.json') == ('file', 'C:/groups/s4.json')

    def test_missing_prefix(self):
        with pytest.raises(InputError):
            parse_group_ref('dihedral4')

    def test_unknown_prefix(self):
        with pytest.raises(InputError):
            parse_group_ref('gap:SmallGroup(8,3)')

    def test_empty_value(self):
        with pytest.raises(InputError):
            parse_group_ref('corpus:')


class TestAddCommonArguments:
    """Tests for add_common_arguments function."""

    def test_parses_shared_flags(self):
        parser = add_common_arguments(argparse.ArgumentParser())
        args = parser.parse_args([
            '--group', 'corpus:symmetric4', '--prime', '2', '--seed', '7',
            '--no-cache', '--timings', '-q',
        ])
        assert args.group == 'corpus:symmetric4'
        assert args.prime == 2
        assert args.seed == 7
        assert args.no_cache is True
        assert args.timings is True
        assert args.quiet is True
        assert args.output == './output'

    def test_group_is_required(self):
        parser = add_common_arguments(argparse.ArgumentParser())
        with pytest.raises(SystemExit):
            parser.parse_args(['--prime', '2'])

    def test_bound_is_repeatable(self):
        parser = add_common_arguments(argparse.ArgumentParser())
        args = parser.parse_args([
            '--group', 'corpus:symmetric4',
            '--bound', 'enumeration_bound=500', '--bound', 'ambient_bound=1000',
        ])
        assert args.bound == ['enumeration_bound=500', 'ambient_bound=1000']
        assert parser.parse_args(['--group', 'corpus:symmetric4']).bound == []


class TestParseBoundOverrides:
    """Tests for parse_bound_overrides function."""

    def test_parses_pairs(self):
        assert parse_bound_overrides(['Enumeration_Bound=500', 'ambient_bound = 9']) == {
            'enumeration_bound': 500, 'ambient_bound': 9,
        }

    def test_empty(self):
        assert parse_bound_overrides([]) == {}
        assert parse_bound_overrides(None) == {}

    @pytest.mark.parametrize('item', ['enumeration_bound', '=5', 'enumeration_bound=lots'])
    def test_malformed(self, item):
        with pytest.raises(InputError):
            parse_bound_overrides([item])


class TestSafeFilename:
    """Tests for safe_filename function."""

    def test_replaces_spaces(self):
        assert " " not in safe_filename("Syl 2 of A6")

    def test_removes_special_chars(self):
        result = safe_filename("Syl_3(S9)/restricted")
        assert "/" not in result
        assert "(" not in result

    def test_collapses_underscores(self):
        assert "__" not in safe_filename("a  b__c")


class TestReportStems:
    """safe_filename on the names the CLI builds."""

    def test_sylow_name(self):
        assert safe_filename('Syl_2(alternating6)') == 'Syl_2_alternating6'

    def test_corpus_name_unchanged(self):
        assert safe_filename('extraspecial-3-27') == 'extraspecial-3-27'

    def test_empty_name(self):
        assert safe_filename('()') == 'group'


class TestJsonIO:
    """Tests for load_json, save_json and dump_json."""

    def test_save_and_load(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'nested', 'report.json')
            data = {'group': 'dihedral4', 'stage_counts': {'total': 8}}
            save_json(data, path)
            assert load_json(path) == data

    def test_dump_is_stable(self):
        data = {'b': [1, 2], 'a': 'x'}
        assert dump_json(data) == dump_json(dict(data))
        assert dump_json(data).endswith('\n')

    def test_load_latin1(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'latin.json')
            with open(path, 'wb') as f:
                f.write('{"name": "gro\xdfe Gruppe"}'.encode('latin-1'))
            data = load_json(path)
            assert data['name'].startswith('gro')

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_json('/nonexistent/report.json')


class TestEnsureOutputDir:
    """Tests for ensure_output_dir function."""

    def test_creates_directory(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'a', 'b')
            assert ensure_output_dir(path) == path
            assert os.path.isdir(path)
