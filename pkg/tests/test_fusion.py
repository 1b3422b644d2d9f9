"""
Tests for core/fusion.py - Realized fusion systems
"""

import pytest
import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'scripts'))

from core.fusion import (
    RealizedFusionSystem,
    alperin_generation_check,
    aut_F,
    closure_flags,
    essential_subgroups,
    f_class,
    f_classes,
    focal_and_hyperfocal,
    focal_decomposition_holds,
    focal_oracle,
    fusion_p_core,
    has_strongly_p_embedded,
    hom_F,
    hyperfocal_oracle,
    inner_system,
    is_centric,
    is_constrained,
    is_essential,
    is_fully_normalized,
    is_normal_in_fusion,
    is_radical,
    is_saturated,
    normalizer_system,
    out_F,
    saturation_flags,
    sylow_intersection_graph_disconnected,
    sylow_normalizer_in,
    whole_sylow,
)
from core.perm_groups import center, mul, p_core, sylow_subgroup
from core.corpus import build_named
from core.utils import InputError


@pytest.fixture(scope='module')
def s4_at_2():
    return RealizedFusionSystem(build_named('symmetric4'), 2)


@pytest.fixture(scope='module')
def a6_at_2():
    return RealizedFusionSystem(build_named('alternating6'), 2)


def _normal_four_group(F):
    V = p_core(F.ambient, F.prime)
    return next(A for A in F.subgroups() if A.elements() == V.elements())


def _other_four_group(F):
    V = _normal_four_group(F)
    return next(
        A for A in F.subgroups()
        if A.order() == 4 and A != V and all(mul(a, a) == F.sylow.identity for a in A.elements())
    )


class TestRealizedFusionSystem:
    """Tests for constructing F_S(G)."""

    def test_sylow_order(self, s4_at_2):
        assert s4_at_2.sylow.order() == 8

    def test_rejects_composite(self):
        with pytest.raises(InputError):
            RealizedFusionSystem(build_named('symmetric4'), 4)

    def test_rejects_non_sylow(self):
        G = build_named('symmetric4')
        with pytest.raises(InputError):
            RealizedFusionSystem(G, 2, sylow=p_core(G, 2))

    def test_rejects_subgroup_outside_sylow(self, s4_at_2):
        P3 = sylow_subgroup(s4_at_2.ambient, 3)
        with pytest.raises(InputError):
            aut_F(s4_at_2, P3)


class TestMorphisms:
    """Tests for Hom_F and F-classes."""

    def test_hom_from_center(self, s4_at_2):
        Z = center(s4_at_2.sylow)
        assert len(hom_F(s4_at_2, Z, s4_at_2.sylow)) == 3

    def test_morphisms_are_distinct_maps(self, s4_at_2):
        maps = hom_F(s4_at_2, s4_at_2.sylow, s4_at_2.sylow)
        assert len(maps) == len(set(maps))

    def test_f_class_of_center(self, s4_at_2):
        assert len(f_class(s4_at_2, center(s4_at_2.sylow))) == 3

    def test_class_partition(self, s4_at_2):
        classes = f_classes(s4_at_2)
        assert len(classes) == 7
        assert sum(len(c) for c in classes) == 10

    def test_inner_system_classes_are_conjugacy_classes(self):
        F = inner_system(build_named('dihedral4'), 2)
        assert len(f_classes(F)) == 8


class TestAutomizers:
    """Tests for Aut_F and Out_F."""

    def test_aut_of_normal_four_group(self, s4_at_2):
        V = _normal_four_group(s4_at_2)
        assert aut_F(s4_at_2, V).order() == 6
        assert out_F(s4_at_2, V).order() == 6

    def test_out_of_sylow(self, s4_at_2):
        assert out_F(s4_at_2, whole_sylow(s4_at_2)).order() == 1

    def test_radical(self, s4_at_2):
        assert is_radical(s4_at_2, _normal_four_group(s4_at_2))
        assert not is_radical(s4_at_2, _other_four_group(s4_at_2))

    def test_center_has_trivial_automizer(self, s4_at_2):
        assert aut_F(s4_at_2, center(s4_at_2.sylow)).order() == 1


class TestSaturation:
    """Tests for saturation flags."""

    def test_realized_system_is_saturated(self, s4_at_2):
        assert is_saturated(s4_at_2)

    def test_flags_of_center(self, s4_at_2):
        flags = saturation_flags(s4_at_2, center(s4_at_2.sylow))
        assert flags.fully_normalized
        assert flags.fully_centralized
        assert flags.to_dict()['receptive'] is True

    def test_non_central_conjugate_is_not_fully_normalized(self, s4_at_2):
        members = f_class(s4_at_2, center(s4_at_2.sylow))
        small = [B for B in members if sylow_normalizer_in(s4_at_2, B).order() < 8]
        assert len(small) == 2
        assert not is_fully_normalized(s4_at_2, small[0])


class TestStronglyEmbedded:
    """Tests for strongly p-embedded subgroups."""

    def test_s3_at_2(self):
        witness = has_strongly_p_embedded(build_named('symmetric3'), 2)
        assert witness is not None
        assert witness.order() == 2

    def test_s3_at_3(self):
        assert has_strongly_p_embedded(build_named('symmetric3'), 3) is None

    def test_p_group_has_none(self):
        assert has_strongly_p_embedded(build_named('dihedral4'), 2) is None

    def test_graph_criterion_agrees(self):
        assert sylow_intersection_graph_disconnected(build_named('symmetric3'), 2)
        assert not sylow_intersection_graph_disconnected(build_named('symmetric4'), 2)
        assert has_strongly_p_embedded(build_named('symmetric4'), 2) is None


class TestEssentials:
    """Tests for essential_subgroups."""

    def test_s4_has_one_class(self, s4_at_2):
        report = essential_subgroups(s4_at_2)
        assert len(report) == 1
        cls = report.classes[0]
        assert cls.representative.order() == 4
        assert cls.out_F_order == 6
        assert cls.witness.order() == 2
        assert cls.radical

    def test_a6_has_two_classes(self, a6_at_2):
        report = essential_subgroups(a6_at_2)
        assert len(report) == 2
        assert all(c.representative.order() == 4 for c in report.classes)
        assert all(c.out_F_order == 6 for c in report.classes)

    def test_is_essential_matches_report(self, s4_at_2):
        rep = essential_subgroups(s4_at_2).representatives()[0]
        assert is_essential(s4_at_2, rep)
        assert not is_essential(s4_at_2, whole_sylow(s4_at_2))

    def test_essentials_are_centric(self, a6_at_2):
        for c in essential_subgroups(a6_at_2).classes:
            assert is_centric(a6_at_2, c.representative)

    def test_inner_system_has_none(self):
        assert len(essential_subgroups(inner_system(build_named('quaternion8'), 2))) == 0

    def test_alperin_generation(self, s4_at_2, a6_at_2):
        assert alperin_generation_check(s4_at_2)
        assert alperin_generation_check(a6_at_2)


class TestClosure:
    """Tests for weak and strong closure, O_p(F) and normalizer systems."""

    def test_normal_four_group_is_strongly_closed(self, s4_at_2):
        flags = closure_flags(s4_at_2, _normal_four_group(s4_at_2))
        assert flags.weakly_closed
        assert flags.strongly_closed

    def test_center_is_not_weakly_closed(self, s4_at_2):
        flags = closure_flags(s4_at_2, center(s4_at_2.sylow))
        assert not flags.weakly_closed
        assert not flags.strongly_closed

    def test_normal_subgroups_of_s4(self, s4_at_2):
        assert is_normal_in_fusion(s4_at_2, _normal_four_group(s4_at_2))
        assert not is_normal_in_fusion(s4_at_2, center(s4_at_2.sylow))
        assert not is_normal_in_fusion(s4_at_2, whole_sylow(s4_at_2))

    def test_center_not_normal_in_a6(self, a6_at_2):
        assert not is_normal_in_fusion(a6_at_2, center(a6_at_2.sylow))

    def test_p_core_of_s4(self, s4_at_2):
        assert fusion_p_core(s4_at_2).order() == 4
        assert is_constrained(s4_at_2)

    def test_p_core_of_a6(self, a6_at_2):
        assert fusion_p_core(a6_at_2).order() == 1
        assert not is_constrained(a6_at_2)

    def test_normalizer_system(self, s4_at_2):
        N = normalizer_system(s4_at_2, _normal_four_group(s4_at_2))
        assert N.ambient.order() == 24
        assert N.sylow.order() == 8

    def test_normalizer_system_requires_fully_normalized(self, s4_at_2):
        members = f_class(s4_at_2, center(s4_at_2.sylow))
        small = next(B for B in members if sylow_normalizer_in(s4_at_2, B).order() < 8)
        with pytest.raises(InputError):
            normalizer_system(s4_at_2, small)


class TestFocal:
    """Tests for focal and hyperfocal subgroups."""

    def test_s4_at_2(self, s4_at_2):
        focal, hyper = focal_and_hyperfocal(s4_at_2)
        assert focal.order() == 4
        assert hyper.order() == 4
        assert focal == focal_oracle(s4_at_2)
        assert hyper == hyperfocal_oracle(s4_at_2)

    def test_s3_at_3(self):
        F = RealizedFusionSystem(build_named('symmetric3'), 3)
        focal, hyper = focal_and_hyperfocal(F)
        assert focal.order() == 3
        assert hyper.order() == 3

    def test_s3_at_2(self):
        F = RealizedFusionSystem(build_named('symmetric3'), 2)
        focal, hyper = focal_and_hyperfocal(F)
        assert focal.order() == 1
        assert hyper.order() == 1

    @pytest.mark.parametrize('name,p', [
        ('alternating4', 2),
        ('alternating5', 2),
        ('alternating6', 3),
        ('gl2-3', 2),
        ('sl2-3', 3),
    ])
    def test_oracles_agree(self, name, p):
        F = RealizedFusionSystem(build_named(name), p)
        focal, hyper = focal_and_hyperfocal(F)
        assert focal.elements() == focal_oracle(F).elements()
        assert hyper.elements() == hyperfocal_oracle(F).elements()
        assert focal_decomposition_holds(F)

    def test_inner_system_focal_is_derived(self):
        F = inner_system(build_named('dihedral4'), 2)
        focal, hyper = focal_and_hyperfocal(F)
        assert focal.order() == 2
        assert hyper.order() == 1
