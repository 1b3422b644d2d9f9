"""
Automorphism groups of small groups.

Aut(E) is realized as a permutation group on the non-identity elements of
E (sorted), so the kernel's Sylow, core and subgroup machinery applies to it
unchanged. Automorphisms are found by backtracking over the images of a
short generating sequence:
- candidates must match element order and conjugacy class size
- for p-groups, images of generators must avoid Phi(E)
- pairs of chosen images must reproduce the orders of pairwise products
- every leaf is extended along the Cayley graph, which is a complete
  homomorphism check

Elementary abelian groups skip the search: Aut(E) = GL_n(p) is generated
directly from a basis.

Usage:
    aut = automorphism_group(E)
    aut.order()
    out = outer_quotient(aut)
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy import factorint, primitive_root

from .config import active_bound
from .lattice import frattini_subgroup, is_elementary_abelian, minimal_generating_sequence
from .perm_groups import (
    Element,
    PermGroup,
    SubgroupHandle,
    conj,
    element_order,
    generating_set,
    identity_element,
    mul,
    power,
    prime_of_order,
)
from .utils import InputError, ResourceBoundError, check_bound


ElementMap = Dict[Element, Element]


class ElementDomain:
    """
    Indexing of the non-identity elements of a group.

    A map E -> E fixing the identity becomes a permutation of
    {0..|E|-2} through this indexing.
    """

    def __init__(self, E: PermGroup):
        self.group = E
        self.points: List[Element] = [x for x in E.sorted_elements() if x != E.identity]
        self.index: Dict[Element, int] = {x: i for i, x in enumerate(self.points)}

    @property
    def degree(self) -> int:
        return len(self.points)

    def perm_from_map(self, phi: ElementMap) -> Element:
        return tuple(self.index[phi[x]] for x in self.points)

    def map_from_perm(self, a: Element) -> ElementMap:
        phi = {self.group.identity: self.group.identity}
        for i, x in enumerate(self.points):
            phi[x] = self.points[a[i]]
        return phi

    def apply(self, a: Element, x: Element) -> Element:
        if x == self.group.identity:
            return x
        return self.points[a[self.index[x]]]


def extend_generator_images(
    generators: Sequence[Element],
    images: Sequence[Element],
    source_identity: Element,
    target_identity: Element,
) -> Optional[ElementMap]:
    """
    Extend generator images to a homomorphism on <generators>.

    Walks the Cayley graph from the identity; every edge x -> x*g must map
    to phi(x) -> phi(x)*image(g). A conflict means no homomorphism exists.

    Returns:
        The full element map, or None if the images are inconsistent
    """
    phi = {source_identity: target_identity}
    frontier = [source_identity]
    pairs = list(zip(generators, images))
    while frontier:
        next_frontier = []
        for x in frontier:
            fx = phi[x]
            for g, y in pairs:
                xg = mul(x, g)
                value = mul(fx, y)
                known = phi.get(xg)
                if known is None:
                    phi[xg] = value
                    next_frontier.append(xg)
                elif known != value:
                    return None
        frontier = next_frontier
    return phi


class GroupHomomorphism:
    """
    A homomorphism given by the images of a generating sequence.

    Attributes:
        source: Domain group
        target: Codomain group
        generators: Ordered generating sequence of the source
        generator_images: Image of each generator
        verified: True once the images extend to a homomorphism into target
        injective: Set by verify()
    """

    def __init__(
        self,
        source: PermGroup,
        target: PermGroup,
        generator_images: Dict[Element, Element],
        generators: Optional[Sequence[Element]] = None,
    ):
        self.source = source
        self.target = target
        self.generators = tuple(generators) if generators is not None else tuple(generator_images)
        self.generator_images = dict(generator_images)
        self.verified = False
        self.injective: Optional[bool] = None
        self._table: Optional[ElementMap] = None

    @classmethod
    def from_map(cls, source: PermGroup, target: PermGroup, phi: ElementMap,
                 generators: Optional[Sequence[Element]] = None) -> 'GroupHomomorphism':
        gens = tuple(generators) if generators is not None else source.gens
        hom = cls(source, target, {g: phi[g] for g in gens}, generators=gens)
        hom._table = dict(phi)
        return hom

    def verify(self) -> bool:
        """Extend the generator images; record whether the result is a homomorphism."""
        images = [self.generator_images[g] for g in self.generators]
        table = extend_generator_images(self.generators, images, self.source.identity, self.target.identity)
        if table is None or len(table) != self.source.order():
            self.verified = False
            return False
        if not all(self.target.contains(v) for v in set(table.values())):
            self.verified = False
            return False
        self._table = table
        self.injective = len(set(table.values())) == len(table)
        self.verified = True
        return True

    def as_map(self) -> ElementMap:
        if self._table is None and not self.verify():
            raise InputError("Generator images do not define a homomorphism")
        return self._table

    def __call__(self, x: Element) -> Element:
        return self.as_map()[x]

    def audit(self) -> bool:
        """Check phi(ab) = phi(a)phi(b) on the full multiplication table."""
        phi = self.as_map()
        elements = list(phi)
        return all(phi[mul(a, b)] == mul(phi[a], phi[b]) for a in elements for b in elements)

    def is_automorphism(self) -> bool:
        if not self.verified:
            self.verify()
        return (
            self.verified
            and bool(self.injective)
            and self.source.elements() == self.target.elements()
        )


class AutomorphismGroup:
    """
    Aut(E) as a permutation group on the non-identity elements of E.

    Attributes:
        base: The group E
        domain: Element indexing shared with fusion automizers
        action: Faithful permutation group of degree |E|-1
        generating_sequence: Generators of E whose images describe each map
        inner: Inn(E) as a subgroup of action
    """

    def __init__(
        self,
        base: PermGroup,
        domain: ElementDomain,
        action: PermGroup,
        generating_sequence: Sequence[Element],
    ):
        self.base = base
        self.domain = domain
        self.action = action
        self.generating_sequence = tuple(generating_sequence)
        inner_gens = [domain.perm_from_map({x: conj(x, g) for x in base.elements()}) for g in base.gens]
        self.inner = SubgroupHandle(action, inner_gens, name='Inn')

    def order(self) -> int:
        return self.action.order()

    def to_map(self, a: Element) -> GroupHomomorphism:
        phi = self.domain.map_from_perm(a)
        hom = GroupHomomorphism.from_map(self.base, self.base, phi, generators=self.generating_sequence)
        hom.verified = True
        hom.injective = True
        return hom

    def from_map(self, phi: ElementMap) -> Element:
        return self.domain.perm_from_map(phi)

    def generator_maps(self) -> List[ElementMap]:
        return [self.domain.map_from_perm(a) for a in self.action.gens]

    def __repr__(self):
        return f"AutomorphismGroup(|E|={self.base.order()}, |Aut|={self.order()})"


@dataclass
class OuterQuotient:
    """Out(E) = Aut(E)/Inn(E) as a faithful permutation group on Inn-cosets."""
    aut: AutomorphismGroup
    quotient: PermGroup
    project: Callable[[Element], Element]

    def order(self) -> int:
        return self.quotient.order()


@dataclass
class QuotientAction:
    """
    Action of a group of automorphisms on E/N.

    Attributes:
        group: The automorphisms, as a permutation group on E's non-identity elements
        image: Induced permutation group on the cosets of N
        kernel: Elements of group acting trivially on E/N
        coset_representatives: Smallest element of each coset
    """
    group: PermGroup
    image: PermGroup
    kernel: SubgroupHandle
    coset_representatives: List[Element]


def conjugacy_class_sizes(E: PermGroup) -> Dict[Element, int]:
    sizes: Dict[Element, int] = {}
    for x in E.sorted_elements():
        if x in sizes:
            continue
        orbit = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in E.gens:
                z = conj(y, g)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        for y in orbit:
            sizes[y] = len(orbit)
    return sizes


def _general_linear_images(basis: Sequence[Element], p: int) -> List[List[Element]]:
    """Images of the basis under generators of GL_n(p): a scaling, a transvection, two basis permutations."""
    n = len(basis)
    images = []
    if p > 2:
        a = int(primitive_root(p))
        images.append([power(basis[0], a)] + list(basis[1:]))
    if n >= 2:
        images.append([mul(basis[0], basis[1])] + list(basis[1:]))
        swapped = list(basis)
        swapped[0], swapped[1] = swapped[1], swapped[0]
        images.append(swapped)
        images.append(list(basis[1:]) + [basis[0]])
    return images


def _search_automorphisms(E: PermGroup, gens: Sequence[Element]) -> List[ElementMap]:
    elements = E.sorted_elements()
    identity = E.identity
    orders = {x: element_order(x) for x in elements}
    sizes = conjugacy_class_sizes(E)
    frattini = frattini_subgroup(E).elements() if E.is_p_group() else frozenset()

    candidates = [
        [y for y in elements
         if orders[y] == orders[g] and sizes[y] == sizes[g] and y not in frattini]
        for g in gens
    ]
    leaves = 1
    for c in candidates:
        leaves *= len(c)
    check_bound('automorphism search', leaves, active_bound('aut_search_bound'))

    pair_orders = {
        (i, j): element_order(mul(gens[i], gens[j]))
        for j in range(len(gens)) for i in range(j)
    }
    found: List[ElementMap] = []
    chosen: List[Element] = []

    def descend(depth: int) -> None:
        if depth == len(gens):
            phi = extend_generator_images(gens, chosen, identity, identity)
            if phi is not None and len(phi) == len(elements) and len(set(phi.values())) == len(elements):
                found.append(phi)
            return
        for y in candidates[depth]:
            if any(element_order(mul(chosen[i], y)) != pair_orders[(i, depth)] for i in range(depth)):
                continue
            chosen.append(y)
            descend(depth + 1)
            chosen.pop()

    descend(0)
    return found


def _cached_maps(E: PermGroup, gens: Sequence[Element], cached) -> Optional[List[ElementMap]]:
    """Maps rebuilt from cached generator images, or None unless each is a bijection of E."""
    members = E.elements()
    maps = []
    for images in cached:
        if len(images) != len(gens) or any(y not in members for y in images):
            return None
        phi = extend_generator_images(gens, images, E.identity, E.identity)
        if phi is None or len(phi) != len(members) or set(phi.values()) != members:
            return None
        maps.append(phi)
    return maps


def automorphism_group(E: PermGroup, cache=None) -> AutomorphismGroup:
    """
    Compute Aut(E).

    Args:
        E: A group within the enumeration bound
        cache: Optional AutCache; hits are re-verified before use

    Returns:
        AutomorphismGroup whose action has order |Aut(E)|

    Raises:
        ResourceBoundError: If E or the backtrack exceeds its bound
    """
    if 'aut' in E.cache:
        return E.cache['aut']
    check_bound('automorphism group', E.order(), active_bound('enumeration_bound'))
    domain = ElementDomain(E)
    gens = minimal_generating_sequence(E)
    identity = E.identity

    if not gens:
        action = PermGroup(domain.degree, [], elements=[identity_element(domain.degree)])
        aut = AutomorphismGroup(E, domain, action, gens)
        E.cache['aut'] = aut
        return aut

    cached = cache.lookup(E, gens) if cache is not None else None
    if cached is not None:
        maps = _cached_maps(E, gens, cached)
        if maps is not None:
            action = PermGroup(domain.degree, [domain.perm_from_map(m) for m in maps], name='Aut')
            if action.order() == cache.expected_order(E):
                aut = AutomorphismGroup(E, domain, action, gens)
                E.cache['aut'] = aut
                return aut

    if is_elementary_abelian(E):
        p = prime_of_order(E.order())
        maps = [extend_generator_images(gens, images, identity, identity)
                for images in _general_linear_images(gens, p)]
        action = PermGroup(domain.degree, [domain.perm_from_map(m) for m in maps], name='Aut')
    else:
        found = _search_automorphisms(E, gens)
        perms = [domain.perm_from_map(m) for m in found]
        check_bound('automorphism group', len(perms), active_bound('enumeration_bound'))
        action_gens = generating_set(perms, identity_element(domain.degree))
        action = PermGroup(domain.degree, action_gens, name='Aut', elements=perms)

    aut = AutomorphismGroup(E, domain, action, gens)
    if cache is not None:
        cache.store(E, gens, [[m[g] for g in gens] for m in aut.generator_maps()], aut.order())
    E.cache['aut'] = aut
    return aut


def quotient_by_normal(G: PermGroup, N: SubgroupHandle) -> Tuple[PermGroup, Callable[[Element], Element]]:
    """
    G/N as a permutation group on the right cosets of N.

    Returns:
        Tuple of (quotient group, projection from G)
    """
    coset_of: Dict[Element, int] = {}
    representatives: List[Element] = []
    members = N.elements()
    for x in G.sorted_elements():
        if x in coset_of:
            continue
        index = len(representatives)
        representatives.append(x)
        for n in members:
            coset_of[mul(n, x)] = index

    def project(g: Element) -> Element:
        return tuple(coset_of[mul(r, g)] for r in representatives)

    quotient = PermGroup(len(representatives), [project(g) for g in G.gens], name='quotient')
    return quotient, project


def outer_quotient(aut: AutomorphismGroup) -> OuterQuotient:
    """
    Out(E) with a projection from Aut(E).

    When Inn(E) is trivial the action itself is returned.
    """
    if aut.inner.order() == 1:
        return OuterQuotient(aut=aut, quotient=aut.action, project=lambda a: a)
    quotient, project = quotient_by_normal(aut.action, aut.inner)
    quotient.name = 'Out'
    return OuterQuotient(aut=aut, quotient=quotient, project=project)


def induced_quotient_action(
    maps: Sequence[GroupHomomorphism],
    N: SubgroupHandle,
    source: Optional[PermGroup] = None,
) -> QuotientAction:
    """
    Action induced on E/N by a set of automorphisms of E.

    Args:
        maps: Automorphisms of E
        N: Normal subgroup of E left invariant by every map
        source: E, needed only when maps is empty

    Returns:
        QuotientAction with the image on cosets and the kernel

    Raises:
        InputError: If N is not normal or some map does not leave it invariant
    """
    E = source if source is not None else (maps[0].source if maps else N.parent)
    members = N.elements()
    for g in E.gens:
        if any(conj(n, g) not in members for n in N.gens):
            raise InputError("Subgroup is not normal in the source group")
    tables = []
    for i, hom in enumerate(maps):
        phi = hom.as_map()
        if any(phi[n] not in members for n in N.gens):
            raise InputError(f"Map {i} does not leave the subgroup invariant")
        tables.append(phi)

    domain = ElementDomain(E)
    group = PermGroup(domain.degree, [domain.perm_from_map(phi) for phi in tables], name='automorphisms')

    coset_of: Dict[Element, int] = {}
    representatives: List[Element] = []
    for x in E.sorted_elements():
        if x in coset_of:
            continue
        index = len(representatives)
        representatives.append(x)
        for n in members:
            coset_of[mul(n, x)] = index

    def induced(a: Element) -> Element:
        return tuple(coset_of[domain.apply(a, r)] for r in representatives)

    image = PermGroup(len(representatives), [induced(a) for a in group.gens], name='induced')
    trivial_action = tuple(range(len(representatives)))
    kernel_elements = [a for a in group.sorted_elements() if induced(a) == trivial_action]
    kernel = SubgroupHandle(group, generating_set(kernel_elements, group.identity), elements=kernel_elements)
    return QuotientAction(group=group, image=image, kernel=kernel, coset_representatives=representatives)


def has_element_of_order(G: PermGroup, n: int) -> bool:
    """True iff some element of G has order exactly n."""
    if n < 1 or G.order() % n:
        return False
    return any(element_order(x) == n for x in G.elements())


def element_orders(G: PermGroup) -> List[int]:
    return sorted({element_order(x) for x in G.elements()})


def composition_factor_orders(G: PermGroup) -> List[int]:
    """
    Orders of the composition factors of G.

    Solvable groups use sympy's composition series. Otherwise the derived
    series is walked instead: abelian layers split into primes and the
    perfect residual counts as a single factor of its own order, so a
    non-abelian simple factor always divides one of the returned orders.
    """
    if G.order() == 1:
        return []
    group = G.sympy_group()
    if group.is_solvable:
        series = group.composition_series()
        return [int(series[i].order() // series[i + 1].order()) for i in range(len(series) - 1)]

    orders: List[int] = []
    series = group.derived_series()
    for upper, lower in zip(series, series[1:]):
        for q, e in sorted(factorint(int(upper.order() // lower.order())).items()):
            orders.extend([int(q)] * e)
    orders.append(int(series[-1].order()))
    return orders


def alternating_section_possible(G: PermGroup, m: int) -> bool:
    """
    Whether G may involve Alt(m) (m >= 5).

    True when some factor from composition_factor_orders has order
    divisible by m!/2; groups of smaller order are excluded outright.
    """
    target = 1
    for k in range(3, m + 1):
        target *= k
    if G.order() % target:
        return False
    return any(order % target == 0 for order in composition_factor_orders(G))
