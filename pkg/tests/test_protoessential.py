"""
Tests for core/protoessential.py - Proto-essential candidate filter
"""

import pytest
import sys
import os
from itertools import product

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

from core.protoessential import (
    STAGES,
    OVERGROUP_STAGE,
    candidate_sylow_shape,
    centric_test,
    frattini_test,
    lifting_test,
    overgroup_test,
    proto_essential_scan,
    radical_test,
    rank_test,
    required_lifting_order,
)
from core.automorphisms import automorphism_group, extend_generator_images
from core.config import RunConfig
from core.corpus import build_named, fusion_pairs, p_group_names
from core.fusion import RealizedFusionSystem, essential_subgroups
from core.lattice import all_subgroups, subgroup_classes
from core.perm_groups import (
    closure,
    commutator,
    conj,
    element_order,
    generating_set,
    inv,
    mul,
    power,
    prime_of_order,
    whole,
)
from core.utils import InputError


def _brute_force_early_stages(S):
    """
    Class representatives passing the centric and rank tests, straight
    from the definitions: C_S(E) <= E, then N_S(E) > E.
    """
    S_elements = S.sorted_elements()
    centric = []
    ranked = []
    for c in subgroup_classes(S, 'inner'):
        E = c.representative
        members = E.elements()
        centralizer = [x for x in S_elements if all(mul(x, e) == mul(e, x) for e in members)]
        if not all(x in members for x in centralizer):
            continue
        centric.append(E)
        normalizer = [
            x for x in S_elements
            if all(conj(e, x) in members for e in members)
        ]
        if len(normalizer) > len(members):
            ranked.append(E)
    return centric, ranked


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _normalizer_elements(S, E):
    members = E.elements()
    return [x for x in S.sorted_elements() if all(conj(e, x) in members for e in members)]


def _automorphisms_by_search(elements, identity):
    """
    Every automorphism of the group on `elements`, as a permutation of
    their sorted positions, from all images of a generating set.
    """
    elements = sorted(elements)
    index = {x: i for i, x in enumerate(elements)}
    gens = generating_set(elements, identity)
    found = []
    for images in product(elements, repeat=len(gens)):
        phi = extend_generator_images(gens, images, identity, identity)
        if phi is not None and len(phi) == len(elements) and len(set(phi.values())) == len(elements):
            found.append(tuple(index[phi[x]] for x in elements))
    return elements, index, found


def _frattini_by_definition(S, E):
    """[N_S(E), E] not in Phi(E), and C_{N_S(E)}(E/Phi(E)) <= E."""
    members = E.elements()
    maximal = [H.elements() for H in all_subgroups(S)
               if H.elements() <= members and H.order() * prime_of_order(S.order()) == len(members)]
    phi = frozenset.intersection(*maximal) if maximal else frozenset([S.identity])
    N = _normalizer_elements(S, E)
    acting = [n for n in N if all(mul(inv(e), conj(e, n)) in phi for e in members)]
    return len(acting) < len(N) and all(n in members for n in acting)


def _radical_by_definition(S, E):
    """No conjugation by N_S(E) outside Inn(E) lies in O_p(Aut(E))."""
    p = prime_of_order(S.order())
    elements, index, auts = _automorphisms_by_search(E.elements(), S.identity)
    identity = tuple(range(len(elements)))

    def induced(g):
        return tuple(index[conj(x, g)] for x in elements)

    inner = {induced(e) for e in elements}
    for a in {induced(n) for n in _normalizer_elements(S, E)} - inner:
        normal = closure({conj(a, b) for b in auts}, identity)
        if _is_power_of(len(normal), p):
            return False
    return True


def _lifting_by_definition(S, E):
    """
    When N_S(E)/E is elementary abelian of order q > p, Aut(N_S(E)) has an
    element of order (q - 1)/(2, q - 1).
    """
    p = prime_of_order(S.order())
    members = E.elements()
    N = _normalizer_elements(S, E)
    q = len(N) // len(members)
    elementary = all(power(n, p) in members for n in N) and all(
        commutator(x, y) in members for x in N for y in N
    )
    if q <= p or not elementary:
        return True
    a0 = (q - 1) // (2 if q % 2 else 1)
    _, _, auts_N = _automorphisms_by_search(N, S.identity)
    if p >= 5:
        alt_order = 1
        for k in range(3, 2 * p + 1):
            alt_order *= k
        _, _, auts_E = _automorphisms_by_search(members, S.identity)
        if len(auts_E) % alt_order == 0 or len(auts_N) % alt_order == 0:
            return True
    return any(element_order(a) == a0 for a in auts_N)


class TestStageFunctions:
    """Tests for the individual tests on D8."""

    @pytest.fixture(scope='class')
    def d8_subgroups(self):
        S = build_named('dihedral4')
        by_shape = {}
        for H in all_subgroups(S):
            involutions = sum(1 for x in H.elements() if mul(x, x) == S.identity)
            by_shape.setdefault((H.order(), involutions), []).append(H)
        return S, by_shape

    def test_centric(self, d8_subgroups):
        S, by_shape = d8_subgroups
        assert centric_test(S, by_shape[(4, 4)][0]).passed
        assert not centric_test(S, by_shape[(2, 2)][0]).passed

    def test_rank_rejects_whole_group(self, d8_subgroups):
        S, by_shape = d8_subgroups
        outcome = rank_test(S, by_shape[(8, 6)][0])
        assert not outcome.passed
        assert 'trivial' in outcome.detail

    def test_frattini_rejects_cyclic_four(self, d8_subgroups):
        S, by_shape = d8_subgroups
        assert not frattini_test(S, by_shape[(4, 2)][0]).passed
        assert frattini_test(S, by_shape[(4, 4)][0]).passed

    def test_radical_elementary_abelian_shortcut(self, d8_subgroups):
        S, by_shape = d8_subgroups
        outcome = radical_test(S, by_shape[(4, 4)][0])
        assert outcome.passed
        assert not outcome.flagged

    def test_lifting_not_applicable_for_order_p(self, d8_subgroups):
        S, by_shape = d8_subgroups
        outcome = lifting_test(S, by_shape[(4, 4)][0])
        assert outcome.passed
        assert outcome.detail == 'not applicable'

    def test_overgroup_four_groups(self, d8_subgroups):
        S, by_shape = d8_subgroups
        outcome = overgroup_test(S, by_shape[(4, 4)][0])
        assert outcome.passed
        assert outcome.stage == OVERGROUP_STAGE
        assert not overgroup_test(S, by_shape[(4, 2)][0]).passed

    @pytest.mark.parametrize('p,n,order', [
        (2, 2, 3),
        (3, 2, 4),
        (2, 3, 7),
        (5, 2, 12),
        (3, 3, 13),
    ])
    def test_required_lifting_order(self, p, n, order):
        assert required_lifting_order(p, n) == order

    def test_sylow_shapes(self):
        assert candidate_sylow_shape(build_named('cyclic9'), 3)
        assert candidate_sylow_shape(build_named('cpxcp-3'), 3)
        assert candidate_sylow_shape(build_named('extraspecial-3-27'), 3)
        assert not candidate_sylow_shape(build_named('dihedral8'), 2)

    def test_quaternion_shapes_in_strict_mode(self):
        assert candidate_sylow_shape(build_named('quaternion8'), 2)
        assert not candidate_sylow_shape(build_named('quaternion16'), 2)


class TestProtoEssentialScan:
    """Tests for proto_essential_scan on named p-groups."""

    def test_d8_inner(self):
        report = proto_essential_scan(build_named('dihedral4'), 2, mode='inner')
        assert report.stage_counts == {
            'total': 8, 'centric': 4, 'rank': 3, 'frattini': 2, 'radical': 2, 'lifting': 2,
        }
        assert len(report.survivors) == 2
        assert all(E.order() == 4 for E in report.survivors)

    @pytest.mark.parametrize('mode', ['aut', 'automorphism'])
    def test_d8_aut(self, mode):
        report = proto_essential_scan(build_named('dihedral4'), 2, mode=mode)
        assert report.conjugacy_mode == 'aut'
        assert report.stage_counts['total'] == 6
        assert len(report.survivors) == 1

    @pytest.mark.parametrize('name,mode,survivors', [
        ('extraspecial-3-27', 'aut', 1),
        ('extraspecial-3-27', 'inner', 4),
        ('extraspecial-3-27-exp9', 'inner', 1),
        ('cpxcp-3', 'inner', 0),
        ('cpxcp-5', 'aut', 0),
        ('quaternion8', 'inner', 0),
        ('cyclic9', 'inner', 0),
    ])
    def test_survivor_counts(self, name, mode, survivors):
        report = proto_essential_scan(build_named(name), mode=mode)
        assert len(report.survivors) == survivors

    def test_diagnostic_runs_every_stage(self):
        config = RunConfig(diagnostic=True)
        report = proto_essential_scan(build_named('dihedral4'), 2, config=config)
        assert len(report.traces) == 8 * len(STAGES)
        plain = proto_essential_scan(build_named('dihedral4'), 2)
        assert report.stage_counts == plain.stage_counts

    def test_short_circuit_traces(self):
        report = proto_essential_scan(build_named('dihedral4'), 2)
        assert len(report.traces) < 8 * len(STAGES)
        assert report.traces[0].stage == 'centric'

    def test_overgroup_check(self):
        config = RunConfig(overgroup_check=True)
        report = proto_essential_scan(build_named('extraspecial-3-27'), 3, mode='aut', config=config)
        assert len(report.proto_essentials) == 1
        assert report.traces[-1].stage == OVERGROUP_STAGE

    def test_overgroup_check_off_by_default(self):
        report = proto_essential_scan(build_named('dihedral4'), 2)
        assert report.proto_essentials is None

    def test_strict_mode_refines(self):
        for name in ('dihedral4', 'extraspecial-3-27', 'wreath-3'):
            S = build_named(name)
            loose = proto_essential_scan(S, mode='inner')
            strict = proto_essential_scan(S, mode='inner', config=RunConfig(rank_test_mode='strict'))
            assert set(strict.survivors) <= set(loose.survivors)
            assert strict.rank_test_mode == 'strict'

    def test_rejects_non_p_group(self):
        with pytest.raises(InputError):
            proto_essential_scan(build_named('symmetric4'), 2)

    def test_rejects_wrong_prime(self):
        with pytest.raises(InputError):
            proto_essential_scan(build_named('dihedral4'), 3)

    def test_rejects_unknown_mode(self):
        with pytest.raises(InputError):
            proto_essential_scan(build_named('dihedral4'), 2, mode='outer')


class TestScanInvariants:
    """Properties that hold for every p-group in the corpus."""

    @pytest.mark.parametrize('name', p_group_names())
    def test_counts_are_monotone(self, name):
        S = build_named(name)
        report = proto_essential_scan(S, mode='inner')
        counts = [report.stage_counts['total']] + [report.stage_counts[s] for s in STAGES]
        assert counts == sorted(counts, reverse=True)
        assert report.stage_counts['lifting'] == len(report.survivors)
        assert sum(report.class_sizes) == len(all_subgroups(S))

    @pytest.mark.parametrize('name', p_group_names())
    def test_whole_group_never_survives(self, name):
        S = build_named(name)
        report = proto_essential_scan(S, mode='inner')
        assert whole(S) not in report.survivors

    @pytest.mark.parametrize('name', ['dihedral4', 'dihedral8', 'extraspecial-3-27', 'wreath-3'])
    def test_early_stages_match_definitions(self, name):
        S = build_named(name)
        report = proto_essential_scan(S, mode='inner')
        centric, ranked = _brute_force_early_stages(S)
        assert report.stage_counts['centric'] == len(centric)
        assert report.stage_counts['rank'] == len(ranked)

    @pytest.mark.parametrize('name', ['dihedral4', 'dihedral8', 'quaternion16', 'extraspecial-3-27', 'wreath-3'])
    def test_aut_mode_merges_inner_classes(self, name):
        S = build_named(name)
        inner = proto_essential_scan(S, mode='inner')
        aut = proto_essential_scan(S, mode='aut')
        aut_classes = subgroup_classes(S, 'aut', automorphisms=automorphism_group(S))
        merged = {
            next(k for k in aut_classes if E in k.members).representative.elements()
            for E in inner.survivors
        }
        assert merged == {E.elements() for E in aut.survivors}
        assert aut.stage_counts['total'] == len(aut_classes)

    @pytest.mark.parametrize('name', ['dihedral4', 'extraspecial-3-27', 'cpxcp-3', 'cpxcp-5'])
    def test_late_stages_match_definitions(self, name):
        S = build_named(name)
        report = proto_essential_scan(S, mode='inner', config=RunConfig(diagnostic=True))
        oracles = {
            'frattini': _frattini_by_definition,
            'radical': _radical_by_definition,
            'lifting': _lifting_by_definition,
        }
        checked = 0
        for outcome in report.traces:
            if outcome.stage in oracles:
                assert not outcome.flagged
                assert outcome.passed == oracles[outcome.stage](S, outcome.subgroup), (
                    f"{outcome.stage} on a subgroup of order {outcome.subgroup.order()}"
                )
                checked += 1
        assert checked == 3 * report.stage_counts['total']

    @pytest.mark.parametrize('name', ['dihedral4', 'dihedral8', 'quaternion16', 'semidihedral16', 'extraspecial-3-27'])
    def test_frattini_failure_implies_radical_failure(self, name):
        S = build_named(name)
        report = proto_essential_scan(S, mode='inner', config=RunConfig(diagnostic=True))
        by_class = {}
        for outcome in report.traces:
            by_class.setdefault(outcome.subgroup.elements(), {})[outcome.stage] = outcome
        rank_survivors = [
            stages for stages in by_class.values()
            if stages['centric'].passed and stages['rank'].passed
        ]
        assert rank_survivors
        for stages in rank_survivors:
            if not stages['frattini'].passed:
                assert not stages['radical'].passed


SMALL_FUSION_PAIRS = [
    (name, p) for name, p in fusion_pairs()
    if build_named(name).order() <= 720
]


class TestSoundness:
    """Every essential subgroup of a realized fusion system survives the filter."""

    @pytest.mark.parametrize('name,p', SMALL_FUSION_PAIRS)
    def test_essentials_survive(self, name, p):
        F = RealizedFusionSystem(build_named(name), p)
        S = F.sylow
        report = proto_essential_scan(S, p, mode='inner')
        survivors = set(report.survivors)
        classes = subgroup_classes(S, 'inner')
        for c in essential_subgroups(F).classes:
            for E in c.fully_normalized_members:
                s_class = next(k for k in classes if E in k.members)
                assert s_class.representative in survivors
