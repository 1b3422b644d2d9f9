"""
Realized fusion systems F_S(G).

Every morphism of F_S(G) is a conjugation map c_g : A -> A^g with
A^g <= S. For each subgroup A of S the transporter {g in G : A^g <= S} is
computed once by scanning G, and everything else is read off it:
- Hom_F(A, B), the F-class of A, N_G(A) and C_G(A)
- Aut_F(A), Aut_S(A), Inn(A) and Out_F(A) as permutation groups on the
  non-identity elements of A, the same domain automorphism_group(A) uses
- saturation flags, essential subgroups, closure properties
- focal and hyperfocal subgroups, Alperin-Goldschmidt generation

Morphisms are compared by their values on A; the witness kept for a
morphism is the smallest g in G inducing it.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy import isprime

from .automorphisms import ElementDomain, quotient_by_normal
from .config import DEFAULT_SEED, active_bound
from .lattice import all_subgroups, subgroup_classes
from .perm_groups import (
    Element,
    PermGroup,
    SubgroupHandle,
    conj,
    derived_subgroup,
    generated_by,
    inv,
    intersection,
    mul,
    p_core,
    p_part,
    p_residual,
    subgroup_from_elements,
    sylow_subgroup,
)
from .utils import InputError, check_bound


# ---------------------------------------------------------------------------
# Fusion system and morphisms
# ---------------------------------------------------------------------------

@dataclass
class Transporter:
    """All g in G with A^g <= S, with the images of A's generators."""
    subgroup: SubgroupHandle
    generators: Tuple[Element, ...]
    entries: List[Tuple[Element, Tuple[Element, ...]]]


class RealizedFusionSystem:
    """
    The fusion system F_S(G) of an ambient group at a prime.

    Attributes:
        ambient: The group G
        sylow: A Sylow p-subgroup S of G
        prime: p
        name: Label carried into reports
    """

    def __init__(
        self,
        ambient: PermGroup,
        prime: int,
        sylow: Optional[SubgroupHandle] = None,
        seed: int = DEFAULT_SEED,
        name: Optional[str] = None,
    ):
        if not isprime(prime):
            raise InputError(f"{prime} is not prime")
        check_bound('fusion ambient group', ambient.order(), active_bound('ambient_bound'))
        self.ambient = ambient
        self.prime = prime
        self.name = name or ambient.name
        if sylow is None:
            sylow = sylow_subgroup(ambient, prime, seed)
        elif not isinstance(sylow, SubgroupHandle) or sylow.parent is not ambient:
            sylow = SubgroupHandle(ambient, sylow.gens, elements=sylow.elements())
        if sylow.order() != p_part(ambient.order(), prime):
            raise InputError(
                f"Subgroup of order {sylow.order()} is not a Sylow {prime}-subgroup "
                f"of a group of order {ambient.order()}"
            )
        if not sylow.elements() <= ambient.elements(bound=active_bound('ambient_bound')):
            raise InputError("Sylow subgroup is not contained in the ambient group")
        self.sylow = sylow
        self._elements = ambient.sorted_elements(bound=active_bound('ambient_bound'))
        self._transporters: Dict[FrozenSet[Element], Transporter] = {}
        self._automizers: Dict[FrozenSet[Element], 'Automizer'] = {}
        self._classes: Optional[List[List[SubgroupHandle]]] = None
        self._essentials: Optional['EssentialReport'] = None

    @property
    def S(self) -> SubgroupHandle:
        return self.sylow

    def subgroups(self) -> List[SubgroupHandle]:
        """All subgroups of S, sorted canonically."""
        return all_subgroups(self.sylow)

    def transporter(self, A: PermGroup) -> Transporter:
        self._check_in_sylow(A)
        key = A.elements()
        found = self._transporters.get(key)
        if found is None:
            gens = tuple(A.gens)
            members = self.sylow.elements()
            entries = []
            for g in self._elements:
                images = tuple(conj(a, g) for a in gens)
                if all(y in members for y in images):
                    entries.append((g, images))
            found = Transporter(subgroup=_as_handle(self.sylow, A), generators=gens, entries=entries)
            self._transporters[key] = found
        return found

    def _check_in_sylow(self, A: PermGroup) -> None:
        if A.degree != self.ambient.degree:
            raise InputError(f"Degree mismatch: subgroup of degree {A.degree}, ambient degree {self.ambient.degree}")
        if not A.elements() <= self.sylow.elements():
            raise InputError("Subgroup is not contained in the Sylow subgroup")

    def __repr__(self):
        return f"RealizedFusionSystem({self.name or 'G'}, p={self.prime}, |S|={self.sylow.order()})"


def _as_handle(S: SubgroupHandle, A: PermGroup) -> SubgroupHandle:
    if isinstance(A, SubgroupHandle):
        return A
    return SubgroupHandle(S, A.gens, elements=A.elements())


class FusionMorphism:
    """
    The morphism c_g : A -> A^g of F_S(G).

    Two morphisms are equal when they agree on A; the witness is only the
    smallest element of G inducing the map.
    """

    def __init__(self, domain: SubgroupHandle, witness: Element, generator_images: Tuple[Element, ...]):
        self.domain = domain
        self.witness = witness
        self.generator_images = tuple(generator_images)

    def __call__(self, x: Element) -> Element:
        return conj(x, self.witness)

    def as_map(self) -> Dict[Element, Element]:
        return {x: conj(x, self.witness) for x in self.domain.elements()}

    def image_elements(self) -> FrozenSet[Element]:
        return frozenset(conj(x, self.witness) for x in self.domain.elements())

    def image(self, parent: PermGroup) -> SubgroupHandle:
        return SubgroupHandle(parent, self.generator_images, elements=self.image_elements())

    def _key(self):
        return (self.domain.elements(), self.generator_images)

    def __eq__(self, other):
        if not isinstance(other, FusionMorphism):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FusionMorphism(|A|={self.domain.order()}, witness={self.witness})"


def _morphisms(F: RealizedFusionSystem, A: PermGroup) -> List[FusionMorphism]:
    t = F.transporter(A)
    seen: Dict[Tuple[Element, ...], FusionMorphism] = {}
    for g, images in t.entries:
        if images not in seen:
            seen[images] = FusionMorphism(t.subgroup, g, images)
    return sorted(seen.values(), key=lambda m: m.generator_images)


def hom_F(F: RealizedFusionSystem, A: PermGroup, B: PermGroup) -> List[FusionMorphism]:
    """
    Hom_F(A, B): one morphism per map A -> B induced by conjugation in G.

    Raises:
        InputError: If A or B is not contained in S
    """
    F._check_in_sylow(B)
    target = B.elements()
    return [m for m in _morphisms(F, A) if all(y in target for y in m.generator_images)]


def f_class(F: RealizedFusionSystem, A: PermGroup) -> List[SubgroupHandle]:
    """All subgroups of S that are F-isomorphic to A, sorted canonically."""
    images: Dict[FrozenSet[Element], SubgroupHandle] = {}
    for m in _morphisms(F, A):
        members = m.image_elements()
        if members not in images:
            images[members] = m.image(F.sylow)
    return sorted(images.values(), key=lambda H: H.sort_key())


def f_classes(F: RealizedFusionSystem) -> List[List[SubgroupHandle]]:
    """The subgroups of S partitioned into F-classes, each sorted canonically."""
    if F._classes is None:
        assigned = set()
        classes = []
        for A in F.subgroups():
            if A.elements() in assigned:
                continue
            members = f_class(F, A)
            assigned.update(B.elements() for B in members)
            classes.append(members)
        F._classes = classes
    return F._classes


# ---------------------------------------------------------------------------
# Automizers
# ---------------------------------------------------------------------------

@dataclass
class Automizer:
    """
    Aut_F(A) and its relatives for one subgroup A <= S.

    Permutation groups act on the non-identity elements of A, indexed by
    domain.

    Attributes:
        subgroup: A
        normalizer: N_G(A)
        centralizer: C_G(A)
        sylow_normalizer: N_S(A)
        sylow_centralizer: C_S(A)
        domain: Element indexing of A
        aut_F: Aut_F(A) = N_G(A)/C_G(A)
        aut_S: Aut_S(A), induced by N_S(A)
        inner: Inn(A)
        out_F: Out_F(A) = Aut_F(A)/Inn(A), acting on Inn-cosets
        out_S: Image of Aut_S(A) in out_F
        project: Aut_F(A) -> Out_F(A)
    """
    subgroup: SubgroupHandle
    normalizer: SubgroupHandle
    centralizer: SubgroupHandle
    sylow_normalizer: SubgroupHandle
    sylow_centralizer: SubgroupHandle
    domain: ElementDomain
    aut_F: PermGroup
    aut_S: SubgroupHandle
    inner: SubgroupHandle
    out_F: PermGroup
    out_S: SubgroupHandle
    project: Callable[[Element], Element]

    def map_of(self, a: Element) -> Dict[Element, Element]:
        return self.domain.map_from_perm(a)


def _conjugation_perm(domain: ElementDomain, g: Element) -> Element:
    return tuple(domain.index[conj(x, g)] for x in domain.points)


def automizer(F: RealizedFusionSystem, A: PermGroup) -> Automizer:
    """
    Aut_F(A), Aut_S(A), Inn(A) and Out_F(A) for A <= S.

    Raises:
        InputError: If A is not contained in S
    """
    t = F.transporter(A)
    key = t.subgroup.elements()
    if key in F._automizers:
        return F._automizers[key]

    A = t.subgroup
    members = A.elements()
    normalizer_elements = [g for g, images in t.entries if all(y in members for y in images)]
    centralizer_elements = [g for g, images in t.entries if images == t.generators]
    N = subgroup_from_elements(F.ambient, normalizer_elements, name='N_G(A)')
    C = subgroup_from_elements(F.ambient, centralizer_elements, name='C_G(A)')
    sylow_members = F.sylow.elements()
    NS = subgroup_from_elements(F.ambient, [g for g in normalizer_elements if g in sylow_members])
    CS = subgroup_from_elements(F.ambient, [g for g in centralizer_elements if g in sylow_members])

    domain = ElementDomain(A)
    aut_F = PermGroup(domain.degree, [_conjugation_perm(domain, g) for g in N.gens], name='Aut_F')
    aut_S = SubgroupHandle(aut_F, [_conjugation_perm(domain, g) for g in NS.gens], name='Aut_S')
    inner = SubgroupHandle(aut_F, [_conjugation_perm(domain, g) for g in A.gens], name='Inn')

    if inner.order() == 1:
        out_F, project = aut_F, (lambda a: a)
    else:
        out_F, project = quotient_by_normal(aut_F, inner)
        out_F.name = 'Out_F'
    out_S = SubgroupHandle(out_F, [project(a) for a in aut_S.gens], name='Out_S')

    result = Automizer(
        subgroup=A,
        normalizer=N,
        centralizer=C,
        sylow_normalizer=NS,
        sylow_centralizer=CS,
        domain=domain,
        aut_F=aut_F,
        aut_S=aut_S,
        inner=inner,
        out_F=out_F,
        out_S=out_S,
        project=project,
    )
    F._automizers[key] = result
    return result


def aut_F(F: RealizedFusionSystem, A: PermGroup) -> PermGroup:
    """Aut_F(A) as a permutation group on the non-identity elements of A."""
    return automizer(F, A).aut_F


def out_F(F: RealizedFusionSystem, A: PermGroup) -> PermGroup:
    """Out_F(A) = Aut_F(A)/Inn(A)."""
    return automizer(F, A).out_F


def sylow_normalizer_in(F: RealizedFusionSystem, A: PermGroup) -> SubgroupHandle:
    """N_S(A)."""
    return automizer(F, A).sylow_normalizer


def sylow_centralizer_in(F: RealizedFusionSystem, A: PermGroup) -> SubgroupHandle:
    """C_S(A)."""
    return automizer(F, A).sylow_centralizer


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

@dataclass
class SaturationFlags:
    fully_normalized: bool
    fully_centralized: bool
    fully_automized: bool
    receptive: bool

    def to_dict(self) -> Dict[str, bool]:
        return {
            'fully_normalized': self.fully_normalized,
            'fully_centralized': self.fully_centralized,
            'fully_automized': self.fully_automized,
            'receptive': self.receptive,
        }


def is_fully_normalized(F: RealizedFusionSystem, A: PermGroup) -> bool:
    order = sylow_normalizer_in(F, A).order()
    return all(sylow_normalizer_in(F, B).order() <= order for B in f_class(F, A))


def is_fully_centralized(F: RealizedFusionSystem, A: PermGroup) -> bool:
    order = sylow_centralizer_in(F, A).order()
    return all(sylow_centralizer_in(F, B).order() <= order for B in f_class(F, A))


def is_fully_automized(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """Aut_S(A) is a Sylow p-subgroup of Aut_F(A)."""
    data = automizer(F, A)
    return data.aut_S.order() == p_part(data.aut_F.order(), F.prime)


def is_receptive(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """
    Every F-isomorphism phi = c_w : B -> A extends to N_phi.

    N_phi = {x in N_S(B) : x^w in N_S(A)C_G(A)}; an extension exists iff
    some c in C_G(B) has N_phi^(cw) <= S.
    """
    target = automizer(F, A)
    A_handle = target.subgroup
    A_gens = F.transporter(A_handle).generators
    sylow_members = F.sylow.elements()
    aut_S_maps = {
        tuple(conj(a, n) for a in A_gens)
        for n in sylow_normalizer_in(F, A_handle).sorted_elements()
    }
    A_members = A_handle.elements()

    for B in f_class(F, A_handle):
        source = automizer(F, B)
        centralizer = source.centralizer.sorted_elements()
        N_SB = sylow_normalizer_in(F, B).sorted_elements()
        for phi in _morphisms(F, B):
            if phi.image_elements() != A_members:
                continue
            w = phi.witness
            N_phi = [x for x in N_SB if tuple(conj(a, conj(x, w)) for a in A_gens) in aut_S_maps]
            N_phi_gens = subgroup_from_elements(F.ambient, N_phi).gens
            if not any(
                all(conj(conj(x, c), w) in sylow_members for x in N_phi_gens)
                for c in centralizer
            ):
                return False
    return True


def saturation_flags(F: RealizedFusionSystem, A: PermGroup) -> SaturationFlags:
    """Fully normalized / centralized / automized and receptive flags of A."""
    return SaturationFlags(
        fully_normalized=is_fully_normalized(F, A),
        fully_centralized=is_fully_centralized(F, A),
        fully_automized=is_fully_automized(F, A),
        receptive=is_receptive(F, A),
    )


def is_saturated(F: RealizedFusionSystem) -> bool:
    """
    Every F-class has a member that is fully automized and receptive.

    Always true for realized systems; False means a computation is wrong.
    """
    for members in f_classes(F):
        if not any(is_fully_automized(F, B) and is_receptive(F, B) for B in members):
            return False
    return True


# ---------------------------------------------------------------------------
# Strongly p-embedded subgroups and essentials
# ---------------------------------------------------------------------------

def _right_coset_representatives(H: PermGroup, M: PermGroup) -> List[Element]:
    members = M.elements()
    covered = set()
    reps = []
    for x in H.sorted_elements():
        if x in covered:
            continue
        reps.append(x)
        covered.update(mul(m, x) for m in members)
    return reps


def is_strongly_p_embedded(H: PermGroup, M: PermGroup, p: int) -> bool:
    """
    M < H, p divides |M| and M meets M^x in a p'-group for x outside M.

    M^x depends only on the coset Mx, so one x per right coset is checked.
    """
    if M.order() % p or M.order() >= H.order():
        return False
    members = M.elements()
    for x in _right_coset_representatives(H, M):
        if x in members:
            continue
        meet = sum(1 for m in members if conj(m, x) in members)
        if meet % p == 0:
            return False
    return True


def has_strongly_p_embedded(H: PermGroup, p: int) -> Optional[SubgroupHandle]:
    """
    A strongly p-embedded subgroup of H, or None.

    Subgroup classes are searched by decreasing order, then canonical key;
    the first class representative that passes is returned.
    """
    n = H.order()
    if n % p or p_part(n, p) == n:
        return None
    candidates = [
        c.representative for c in subgroup_classes(H, 'inner')
        if c.representative.order() % p == 0 and c.representative.order() < n
    ]
    candidates.sort(key=lambda M: (-M.order(), M.canonical_key))
    for M in candidates:
        if is_strongly_p_embedded(H, M, p):
            return M
    return None


def sylow_intersection_graph_disconnected(H: PermGroup, p: int) -> bool:
    """
    Graph criterion for a strongly p-embedded subgroup.

    Vertices are the Sylow p-subgroups of H, edges join pairs meeting
    non-trivially. O_p(H) = 1 is necessary and checked first.
    """
    n = H.order()
    if n % p:
        return False
    if p_core(H, p).order() > 1:
        return False
    P = sylow_subgroup(H, p)
    start = P.elements()
    sylows = [start]
    seen = {start}
    for X in sylows:
        for g in H.gens:
            Y = frozenset(conj(x, g) for x in X)
            if Y not in seen:
                seen.add(Y)
                sylows.append(Y)
    if len(sylows) == 1:
        return False
    reached = {0}
    queue = [0]
    while queue:
        i = queue.pop()
        for j in range(len(sylows)):
            if j not in reached and len(sylows[i] & sylows[j]) > 1:
                reached.add(j)
                queue.append(j)
    return len(reached) < len(sylows)


def is_centric(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """C_S(B) <= B for every F-conjugate B of A."""
    for B in f_class(F, A):
        if not sylow_centralizer_in(F, B).elements() <= B.elements():
            return False
    return True


def is_radical(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """O_p(Out_F(A)) = 1."""
    return p_core(out_F(F, A), F.prime).order() == 1


def is_essential(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """F-centric, fully normalized, and Out_F(A) has a strongly p-embedded subgroup."""
    return (
        is_centric(F, A)
        and is_fully_normalized(F, A)
        and has_strongly_p_embedded(out_F(F, A), F.prime) is not None
    )


@dataclass
class EssentialClass:
    """
    One F-class of essential subgroups.

    Attributes:
        representative: Key-minimal fully normalized member
        members: The whole F-class
        out_F_order: |Out_F(representative)|
        witness: Strongly p-embedded subgroup of Out_F(representative)
        fully_normalized: Flags of the representative
        centric: Flags of the representative
        radical: Flags of the representative
        fully_normalized_members: Every fully normalized member of the class
    """
    representative: SubgroupHandle
    members: List[SubgroupHandle]
    out_F_order: int
    witness: SubgroupHandle
    fully_normalized: bool = True
    centric: bool = True
    radical: bool = True
    fully_normalized_members: List[SubgroupHandle] = field(default_factory=list)


@dataclass
class EssentialReport:
    """Essential classes of F, in canonical order."""
    system: RealizedFusionSystem
    classes: List[EssentialClass]

    def representatives(self) -> List[SubgroupHandle]:
        return [c.representative for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)


def essential_subgroups(F: RealizedFusionSystem) -> EssentialReport:
    """One entry per F-class of essential subgroups."""
    if F._essentials is not None:
        return F._essentials
    classes = []
    for members in f_classes(F):
        normalizer_orders = [sylow_normalizer_in(F, B).order() for B in members]
        top = max(normalizer_orders)
        fully_normalized = [B for B, n in zip(members, normalizer_orders) if n == top]
        rep = fully_normalized[0]
        if not is_centric(F, rep):
            continue
        witness = has_strongly_p_embedded(out_F(F, rep), F.prime)
        if witness is None:
            continue
        classes.append(EssentialClass(
            representative=rep,
            members=members,
            out_F_order=out_F(F, rep).order(),
            witness=witness,
            radical=is_radical(F, rep),
            fully_normalized_members=fully_normalized,
        ))
    F._essentials = EssentialReport(system=F, classes=classes)
    return F._essentials


# ---------------------------------------------------------------------------
# Closure, normal subgroups and normalizer systems
# ---------------------------------------------------------------------------

@dataclass
class ClosureFlags:
    weakly_closed: bool
    strongly_closed: bool

    def to_dict(self) -> Dict[str, bool]:
        return {'weakly_closed': self.weakly_closed, 'strongly_closed': self.strongly_closed}


def is_weakly_closed(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """Every morphism A -> S has image A."""
    return len(f_class(F, A)) == 1


def is_strongly_closed(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """x^g in S forces x^g in A, for every x in A and g in G."""
    F._check_in_sylow(A)
    members = A.elements()
    sylow_members = F.sylow.elements()
    seen = set()
    for x in sorted(members):
        if x in seen:
            continue
        orbit = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in F.ambient.gens:
                z = conj(y, g)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        if any(z in sylow_members and z not in members for z in orbit):
            return False
        seen |= orbit & members
    return True


def closure_flags(F: RealizedFusionSystem, A: PermGroup) -> ClosureFlags:
    return ClosureFlags(weakly_closed=is_weakly_closed(F, A), strongly_closed=is_strongly_closed(F, A))


def normalizer_system(F: RealizedFusionSystem, A: PermGroup) -> RealizedFusionSystem:
    """
    N_F(A), realized as F_{N_S(A)}(N_G(A)).

    Raises:
        InputError: If A is not fully normalized in F
    """
    if not is_fully_normalized(F, A):
        raise InputError(
            "Subgroup is not fully normalized; conjugate it to a fully normalized "
            "member of its F-class first"
        )
    N = automizer(F, A).normalizer
    NS = sylow_normalizer_in(F, A)
    return RealizedFusionSystem(
        N,
        F.prime,
        sylow=SubgroupHandle(N, NS.gens, elements=NS.elements()),
        name=f"N_F({F.name})" if F.name else None,
    )


def is_normal_in_fusion(F: RealizedFusionSystem, A: PermGroup) -> bool:
    """A is weakly closed and contained in every essential subgroup."""
    if not is_weakly_closed(F, A):
        return False
    members = A.elements()
    return all(members <= B.elements() for c in essential_subgroups(F).classes for B in c.members)


def fusion_p_core(F: RealizedFusionSystem) -> SubgroupHandle:
    """O_p(F): the largest subgroup of S normal in F."""
    normal = [A for A in F.subgroups() if is_normal_in_fusion(F, A)]
    largest = max(normal, key=lambda A: A.sort_key())
    return SubgroupHandle(F.sylow, largest.gens, elements=largest.elements(), name='O_p(F)')


def is_constrained(F: RealizedFusionSystem) -> bool:
    """C_S(O_p(F)) <= O_p(F)."""
    Q = fusion_p_core(F)
    return sylow_centralizer_in(F, Q).elements() <= Q.elements()


# ---------------------------------------------------------------------------
# Focal and hyperfocal subgroups
# ---------------------------------------------------------------------------

def _commutators_with(data: Automizer, perms: Sequence[Element]) -> List[Element]:
    """x^-1 (x phi) for x in A and phi in perms."""
    values = []
    for a in perms:
        for x in data.domain.points:
            y = data.domain.apply(a, x)
            if y != x:
                values.append(mul(inv(x), y))
    return values


def focal_and_hyperfocal(F: RealizedFusionSystem) -> Tuple[SubgroupHandle, SubgroupHandle]:
    """
    foc(F) and hyp(F), generated by [A, phi] over every A <= S.

    phi runs over generators of Aut_F(A) for foc, and over the p'-elements
    of Aut_F(A) (which generate O^p(Aut_F(A))) for hyp.
    """
    focal_gens: List[Element] = []
    hyper_gens: List[Element] = []
    for A in F.subgroups():
        if A.order() == 1:
            continue
        data = automizer(F, A)
        focal_gens.extend(_commutators_with(data, data.aut_F.gens))
        residual = p_residual(data.aut_F, F.prime)
        hyper_gens.extend(_commutators_with(data, residual.gens))
    focal = generated_by(F.sylow, sorted(set(focal_gens)), name='foc')
    hyper = generated_by(F.sylow, sorted(set(hyper_gens)), name='hyp')
    return focal, hyper


def focal_decomposition_holds(F: RealizedFusionSystem) -> bool:
    """foc(F) = S' hyp(F)."""
    focal, hyper = focal_and_hyperfocal(F)
    product = generated_by(F.sylow, list(derived_subgroup(F.sylow).gens) + list(hyper.gens))
    return product.elements() == focal.elements()


def focal_oracle(F: RealizedFusionSystem) -> SubgroupHandle:
    """S meet [G, G]."""
    return intersection(F.sylow, F.sylow, derived_subgroup(F.ambient))


def hyperfocal_oracle(F: RealizedFusionSystem) -> SubgroupHandle:
    """S meet O^p(G)."""
    return intersection(F.sylow, F.sylow, p_residual(F.ambient, F.prime))


# ---------------------------------------------------------------------------
# Alperin-Goldschmidt generation
# ---------------------------------------------------------------------------

def alperin_generators(F: RealizedFusionSystem) -> List[SubgroupHandle]:
    """S together with every fully normalized essential subgroup."""
    subgroups = [whole_sylow(F)]
    for c in essential_subgroups(F).classes:
        subgroups.extend(c.fully_normalized_members)
    return subgroups


def whole_sylow(F: RealizedFusionSystem) -> SubgroupHandle:
    return SubgroupHandle(F.sylow, F.sylow.gens, elements=F.sylow.elements(), name='S')


def alperin_generation_check(F: RealizedFusionSystem) -> bool:
    """
    F = <Aut_F(S), Aut_F(E) : E essential>.

    For each P <= S, the maps P -> S reachable by composing restrictions of
    the listed automizers are counted and compared with |Hom_F(P, S)|.
    """
    moves = []
    for D in alperin_generators(F):
        moves.append((D.elements(), automizer(F, D).normalizer.gens))

    for P in F.subgroups():
        start = tuple(P.gens)
        reached = {start}
        queue = [start]
        while queue:
            state = queue.pop()
            for members, conjugators in moves:
                if not all(y in members for y in state):
                    continue
                for n in conjugators:
                    nxt = tuple(conj(y, n) for y in state)
                    if nxt not in reached:
                        reached.add(nxt)
                        queue.append(nxt)
        if len(reached) != len(_morphisms(F, P)):
            return False
    return True


def inner_system(S: PermGroup, prime: int, name: Optional[str] = None) -> RealizedFusionSystem:
    """F_S(S) for a p-group S."""
    return RealizedFusionSystem(S, prime, name=name or S.name)
