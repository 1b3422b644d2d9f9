"""
Subgroup lattices and characteristic subgroups of small groups.

- all_subgroups: closure-based enumeration, one cyclic subgroup at a time
- subgroup_classes: orbits of subgroups under conjugation or automorphisms
- characteristic_subgroups: Z, P', Phi, agemo, J and the upper central series
- structure_predicates: elementary abelian / extraspecial / special shapes

Enumeration is bounded by SUBGROUP_BOUND_TWO for 2-groups and
SUBGROUP_BOUND_ODD otherwise, or by their active overrides.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .config import active_bound
from .perm_groups import (
    Element,
    PermGroup,
    SubgroupHandle,
    closure,
    commutator,
    conj,
    derived_subgroup,
    center,
    element_order,
    exponent,
    extend_closure,
    generated_by,
    generating_set,
    mul,
    power,
    prime_of_order,
    subgroup_from_elements,
    trivial,
    whole,
)
from .utils import InputError, check_bound


@dataclass
class SubgroupClass:
    """One orbit of subgroups; the representative is its key-minimal member."""
    representative: SubgroupHandle
    members: List[SubgroupHandle]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class CharacteristicReport:
    center: SubgroupHandle
    derived: SubgroupHandle
    frattini: SubgroupHandle
    agemo: SubgroupHandle
    thompson: SubgroupHandle
    upper_central_series: List[SubgroupHandle]
    exponent: int


@dataclass
class StructureReport:
    order: int
    prime: Optional[int]
    is_abelian: bool
    is_cyclic: bool
    is_elementary_abelian: bool
    is_extraspecial: bool
    extraspecial_sign_or_exponent: Optional[Union[str, int]]
    is_special: bool
    rank: int
    center_order: int
    exponent: int = field(default=1)


def subgroup_bound(P: PermGroup) -> int:
    return active_bound('subgroup_bound_two' if prime_of_order(P.order()) == 2 else 'subgroup_bound_odd')


def cyclic_subgroups(P: PermGroup) -> List[SubgroupHandle]:
    """Distinct non-trivial cyclic subgroups, each generated by its smallest generator."""
    found: Dict[frozenset, Element] = {}
    for x in P.sorted_elements():
        if x == P.identity:
            continue
        c = closure([x], P.identity)
        if c not in found:
            found[c] = x
    handles = [SubgroupHandle(P, [x], elements=c) for c, x in found.items()]
    return sorted(handles, key=lambda H: H.sort_key())


def all_subgroups(P: PermGroup) -> List[SubgroupHandle]:
    """
    Every subgroup of P, sorted by (order, canonical key).

    Each subgroup found is extended by every cyclic subgroup it does not
    contain; every subgroup is reached this way from a smaller one.

    Raises:
        ResourceBoundError: If |P| exceeds the subgroup-enumeration bound
    """
    if 'subgroups' in P.cache:
        return list(P.cache['subgroups'])
    check_bound('subgroup enumeration', P.order(), subgroup_bound(P))

    cyclics = cyclic_subgroups(P)
    bottom = trivial(P)
    found = {bottom.elements(): bottom}
    layer = [bottom]
    while layer:
        next_layer = []
        for H in layer:
            members = H.elements()
            for C in cyclics:
                if C.elements() <= members:
                    continue
                K_elements = extend_closure(members, H.gens, C.gens)
                if K_elements not in found:
                    K = SubgroupHandle(P, list(H.gens) + list(C.gens), elements=K_elements)
                    found[K_elements] = K
                    next_layer.append(K)
        layer = next_layer

    result = sorted(found.values(), key=lambda H: H.sort_key())
    P.cache['subgroups'] = result
    return list(result)


def conjugation_maps(P: PermGroup) -> List[Dict[Element, Element]]:
    """Inner automorphisms induced by the generators of P, as element maps."""
    return [{x: conj(x, g) for x in P.elements()} for g in P.gens]


def subgroup_classes(
    P: PermGroup,
    action: str = 'inner',
    automorphisms=None,
) -> List[SubgroupClass]:
    """
    Subgroups of P up to conjugacy or up to automorphisms.

    Args:
        P: The group
        action: 'inner' for P-conjugacy, 'aut' for Aut(P)-conjugacy
        automorphisms: For 'aut', an object with generator_maps() returning
            element maps that generate the acting group

    Returns:
        Classes sorted by representative; sizes sum to the subgroup count

    Raises:
        InputError: If 'aut' is requested without automorphisms
    """
    if action == 'inner':
        maps = conjugation_maps(P)
    elif action == 'aut':
        if automorphisms is None:
            raise InputError("Automorphism action requested without an automorphism group")
        maps = automorphisms.generator_maps()
    else:
        raise InputError(f"Unknown action '{action}' (expected inner or aut)")

    subgroups = all_subgroups(P)
    by_elements = {H.elements(): H for H in subgroups}
    assigned = set()
    classes = []
    for H in subgroups:
        if H.elements() in assigned:
            continue
        orbit = {H.elements()}
        queue = [H.elements()]
        while queue:
            X = queue.pop()
            for phi in maps:
                Y = frozenset(phi[x] for x in X)
                if Y not in orbit:
                    orbit.add(Y)
                    queue.append(Y)
        assigned |= orbit
        members = sorted((by_elements[X] for X in orbit), key=lambda K: K.sort_key())
        classes.append(SubgroupClass(representative=members[0], members=members))
    return classes


def maximal_subgroups(P: PermGroup) -> List[SubgroupHandle]:
    subgroups = [H for H in all_subgroups(P) if H.order() < P.order()]
    return [
        H for H in subgroups
        if not any(H < K for K in subgroups if K.order() > H.order())
    ]


def agemo(P: PermGroup, p: Optional[int] = None) -> SubgroupHandle:
    """The subgroup generated by p-th powers."""
    p = p or prime_of_order(P.order())
    if p is None:
        return trivial(P)
    return generated_by(P, (power(x, p) for x in P.sorted_elements()))


def frattini_subgroup(P: PermGroup) -> SubgroupHandle:
    """
    Phi(P): P'.agemo(P) for p-groups, else the intersection of maximal subgroups.
    """
    if P.order() == 1:
        return trivial(P)
    p = prime_of_order(P.order())
    if p is not None:
        D = derived_subgroup(P)
        A = agemo(P, p)
        return SubgroupHandle(P, list(D.gens) + list(A.gens))
    members = set(P.elements())
    for M in maximal_subgroups(P):
        members &= M.elements()
    return subgroup_from_elements(P, members)


def _next_center(P: PermGroup, Z: SubgroupHandle) -> SubgroupHandle:
    members = Z.elements()
    layer = [
        x for x in P.sorted_elements()
        if all(commutator(x, g) in members for g in P.gens)
    ]
    return subgroup_from_elements(P, layer)


def upper_central_series(P: PermGroup) -> List[SubgroupHandle]:
    """
    Z_1 = Z(P) <= Z_2 <= ... until the series stops growing.

    Z_{i+1}/Z_i is the full center of P/Z_i. The last term equals P exactly
    when P is nilpotent.
    """
    series = [_next_center(P, trivial(P))]
    while True:
        nxt = _next_center(P, series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def is_elementary_abelian(P: PermGroup) -> bool:
    if P.order() == 1:
        return True
    p = prime_of_order(P.order())
    if p is None or not P.is_abelian():
        return False
    return all(element_order(x) == p for x in P.gens)


def thompson_subgroup(P: PermGroup) -> SubgroupHandle:
    """
    J(P): generated by the elementary abelian subgroups of largest order.

    Elementary abelian subgroups are grown one order-p element at a time,
    keeping only the top layer.

    Raises:
        InputError: If P is not a p-group
    """
    if P.order() == 1 or is_elementary_abelian(P):
        return whole(P)
    p = prime_of_order(P.order())
    if p is None:
        raise InputError("Thompson subgroup requires a p-group")

    order_p = [x for x in P.sorted_elements() if element_order(x) == p]
    level: Dict[frozenset, List[Element]] = {}
    for x in order_p:
        c = closure([x], P.identity)
        level.setdefault(c, [x])
    while True:
        following: Dict[frozenset, List[Element]] = {}
        for members, gens in level.items():
            for y in order_p:
                if y in members:
                    continue
                if all(mul(y, a) == mul(a, y) for a in gens):
                    bigger = extend_closure(members, gens, [y])
                    following.setdefault(bigger, gens + [y])
        if not following:
            break
        level = following
    union = sorted(set().union(*level.keys()))
    return generated_by(P, union, name='J')


def characteristic_subgroups(P: PermGroup) -> CharacteristicReport:
    """
    The standard characteristic subgroups of P.

    Raises:
        ResourceBoundError: If |P| exceeds the enumeration bound
    """
    if 'characteristic' in P.cache:
        return P.cache['characteristic']
    check_bound('characteristic subgroups', P.order(), active_bound('enumeration_bound'))
    report = CharacteristicReport(
        center=center(P),
        derived=derived_subgroup(P),
        frattini=frattini_subgroup(P),
        agemo=agemo(P),
        thompson=thompson_subgroup(P) if P.is_p_group() or P.order() == 1 else trivial(P),
        upper_central_series=upper_central_series(P),
        exponent=exponent(P),
    )
    P.cache['characteristic'] = report
    return report


def minimal_generating_sequence(P: PermGroup) -> List[Element]:
    """
    A short deterministic generating sequence.

    For p-groups the elements are chosen modulo Phi(P), so the length is the
    rank of P/Phi(P).
    """
    if P.order() == 1:
        return []
    if not P.is_p_group():
        return generating_set(P.elements(), P.identity)
    phi = frattini_subgroup(P)
    current = phi.elements()
    base = list(phi.gens)
    gens: List[Element] = []
    for x in P.sorted_elements():
        if x not in current:
            current = extend_closure(current, base + gens, [x])
            gens.append(x)
    return gens


def structure_predicates(P: PermGroup) -> StructureReport:
    """Shape flags used by weak-closure arguments and the strict rank test."""
    n = P.order()
    p = prime_of_order(n)
    abelian = P.is_abelian()
    exp = exponent(P)
    Z = center(P)
    elementary = is_elementary_abelian(P)
    rank = 0
    extraspecial = special = False
    sign_or_exponent = None

    if p is not None:
        phi = frattini_subgroup(P)
        D = derived_subgroup(P)
        rank = _log(n // phi.order(), p)
        special = (not abelian) and Z == D == phi
        extraspecial = special and Z.order() == p
        if extraspecial:
            if p == 2:
                half = _log(n // 2, 2) // 2
                involutions = sum(1 for x in P.elements() if mul(x, x) == P.identity)
                sign_or_exponent = '+' if involutions == 2 ** (2 * half) + 2 ** half else '-'
            else:
                sign_or_exponent = exp

    return StructureReport(
        order=n,
        prime=p,
        is_abelian=abelian,
        is_cyclic=abelian and exp == n,
        is_elementary_abelian=elementary,
        is_extraspecial=extraspecial,
        extraspecial_sign_or_exponent=sign_or_exponent,
        is_special=special,
        rank=rank,
        center_order=Z.order(),
        exponent=exp,
    )


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k
