"""
Permutation group kernel.

Elements are tuples of 0-based images (array form). Products read left to
right, (a*b)(i) = b[a[i]], the same convention as sympy.combinatorics, so
conjugation is x^g = g^-1 x g and commutators are [x, y] = x^-1 y^-1 x y.

Order and membership for groups that are not enumerated come from sympy's
Schreier-Sims implementation. Everything else at desk scale runs over
explicit element sets:
- closure-based subgroup generation
- centralizers, normalizers and commutator subgroups
- deterministic Sylow subgroups by normalizer ascent
- p-cores and p-residuals

Usage:
    G = build_group(4, [Permutation([[0, 1, 2, 3]]), Permutation([[0, 2]])])
    G.order()                              # 8
    membership(G, Permutation([[0, 2], [1, 3]]))   # True
"""

from math import gcd, lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime
from sympy.combinatorics import Permutation, PermutationGroup

from .config import DEFAULT_SEED, active_bound
from .utils import InputError, check_bound


Element = Tuple[int, ...]
PermLike = Union[Permutation, Sequence[int]]


# ---------------------------------------------------------------------------
# Element arithmetic
# ---------------------------------------------------------------------------

def identity_element(degree: int) -> Element:
    return tuple(range(degree))


def mul(a: Element, b: Element) -> Element:
    """Product a*b: apply a, then b."""
    return tuple(map(b.__getitem__, a))


def inv(a: Element) -> Element:
    result = [0] * len(a)
    for i, image in enumerate(a):
        result[image] = i
    return tuple(result)


def conj(x: Element, g: Element) -> Element:
    """x^g = g^-1 x g."""
    return mul(mul(inv(g), x), g)


def commutator(x: Element, y: Element) -> Element:
    return mul(mul(inv(x), inv(y)), mul(x, y))


def power(x: Element, k: int) -> Element:
    if k < 0:
        x, k = inv(x), -k
    result = identity_element(len(x))
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def element_order(x: Element) -> int:
    """Order of a permutation: lcm of its cycle lengths."""
    seen = [False] * len(x)
    result = 1
    for start in range(len(x)):
        if seen[start]:
            continue
        length = 0
        point = start
        while not seen[point]:
            seen[point] = True
            point = x[point]
            length += 1
        result = lcm(result, length)
    return result


def cycles_of(x: Element) -> List[List[int]]:
    """
    Non-trivial cycles of x as 1-based point lists.

    Each cycle starts at its smallest point; cycles are ordered by that point.
    """
    seen = [False] * len(x)
    cycles = []
    for start in range(len(x)):
        if seen[start] or x[start] == start:
            seen[start] = True
            continue
        cycle = []
        point = start
        while not seen[point]:
            seen[point] = True
            cycle.append(point + 1)
            point = x[point]
        cycles.append(cycle)
    return cycles


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    result = 1
    while n % p == 0:
        n //= p
        result *= p
    return result


def prime_of_order(n: int) -> Optional[int]:
    """The prime p if n is a non-trivial power of p, else None."""
    if n <= 1:
        return None
    factors = factorint(n)
    if len(factors) != 1:
        return None
    return next(iter(factors))


def is_p_element(x: Element, p: int) -> bool:
    order = element_order(x)
    return p_part(order, p) == order


def to_element(perm: PermLike, degree: int) -> Element:
    """
    Convert a sympy Permutation or a 1-based image list to array form.

    Args:
        perm: sympy Permutation (0-based) or sequence of images on {1..degree}
        degree: Expected degree

    Returns:
        Tuple of 0-based images

    Raises:
        InputError: On degree mismatch or a non-bijective image list
    """
    if isinstance(perm, Permutation):
        if perm.size > degree:
            raise InputError(f"Permutation of size {perm.size} does not fit degree {degree}")
        return tuple(perm.array_form) + tuple(range(perm.size, degree))

    images = list(perm)
    if len(images) != degree:
        raise InputError(f"Permutation has {len(images)} images, expected degree {degree}")
    if sorted(images) != list(range(1, degree + 1)):
        raise InputError(f"Not a bijection on 1..{degree}: {images}")
    return tuple(i - 1 for i in images)


def to_permutation(x: Element) -> Permutation:
    return Permutation(list(x), size=len(x))


# ---------------------------------------------------------------------------
# Closure
# ---------------------------------------------------------------------------

def closure(
    generators: Iterable[Element],
    identity: Element,
    bound: Optional[int] = None,
) -> FrozenSet[Element]:
    """
    Elements of the group generated by the given permutations.

    Args:
        generators: Generating permutations
        identity: Identity of the right degree
        bound: Abort with ResourceBoundError past this many elements

    Returns:
        Frozen set of all elements
    """
    return extend_closure(frozenset([identity]), [], generators, bound=bound)


def extend_closure(
    elements: FrozenSet[Element],
    old_generators: Sequence[Element],
    new_generators: Iterable[Element],
    bound: Optional[int] = None,
) -> FrozenSet[Element]:
    """
    Elements of <H, new_generators> given the elements and generators of H.

    Only edges leaving H through a new generator, and edges leaving newly
    found elements, are followed.
    """
    found = set(elements)
    new_gens = [g for g in new_generators if g not in found]
    if not new_gens:
        return frozenset(found)

    frontier = []
    for x in elements:
        for g in new_gens:
            y = mul(x, g)
            if y not in found:
                found.add(y)
                frontier.append(y)

    all_gens = list(old_generators) + new_gens
    while frontier:
        if bound is not None:
            check_bound('closure', len(found), bound)
        next_frontier = []
        for x in frontier:
            for g in all_gens:
                y = mul(x, g)
                if y not in found:
                    found.add(y)
                    next_frontier.append(y)
        frontier = next_frontier

    if bound is not None:
        check_bound('closure', len(found), bound)
    return frozenset(found)


def generating_set(elements: Iterable[Element], identity: Element) -> List[Element]:
    """
    Greedy generating set of a subgroup given by its elements.

    Scans elements in sorted order and keeps each one not yet generated,
    so the result is deterministic.
    """
    gens: List[Element] = []
    current = frozenset([identity])
    for x in sorted(elements):
        if x not in current:
            current = extend_closure(current, gens, [x])
            gens.append(x)
    return gens


# ---------------------------------------------------------------------------
# Groups and subgroup handles
# ---------------------------------------------------------------------------

class PermGroup:
    """
    A permutation group on {0..degree-1} given by generators.

    Element sets are computed lazily and cached; order and membership fall
    back to sympy's stabilizer chain while the elements are unknown.
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Element],
        name: Optional[str] = None,
        elements: Optional[Iterable[Element]] = None,
    ):
        self.degree = degree
        identity = identity_element(degree)
        self.gens: Tuple[Element, ...] = tuple(
            g for g in dict.fromkeys(tuple(g) for g in generators) if g != identity
        )
        self.name = name
        self._elements: Optional[FrozenSet[Element]] = (
            frozenset(elements) if elements is not None else None
        )
        self._sorted: Optional[List[Element]] = None
        self._order: Optional[int] = len(self._elements) if self._elements is not None else None
        self._sympy: Optional[PermutationGroup] = None
        # derived data (subgroup lattice, characteristic subgroups) keyed by name
        self.cache: Dict[str, object] = {}

    @property
    def identity(self) -> Element:
        return identity_element(self.degree)

    @property
    def generators(self) -> List[Permutation]:
        """Generators as sympy Permutations."""
        return [to_permutation(g) for g in self.gens]

    def sympy_group(self) -> PermutationGroup:
        if self._sympy is None:
            gens = self.generators or [to_permutation(self.identity)]
            self._sympy = PermutationGroup(gens)
        return self._sympy

    def order(self) -> int:
        if self._order is None:
            if not self.gens:
                self._order = 1
            else:
                self._order = int(self.sympy_group().order())
        return self._order

    def stabilizer_chain(self) -> Dict[str, List[int]]:
        """
        Base points (1-based) and basic transversal sizes.

        The product of the transversal sizes is the group order.
        """
        if not self.gens:
            return {'base': [], 'transversal_sizes': []}
        group = self.sympy_group()
        return {
            'base': [b + 1 for b in group.base],
            'transversal_sizes': [len(t) for t in group.basic_transversals],
        }

    def elements(self, bound: Optional[int] = None) -> FrozenSet[Element]:
        if self._elements is None:
            bound = active_bound('enumeration_bound') if bound is None else bound
            check_bound('element enumeration', self.order(), bound)
            self._elements = closure(self.gens, self.identity, bound=bound)
        return self._elements

    def sorted_elements(self, bound: Optional[int] = None) -> List[Element]:
        if self._sorted is None:
            self._sorted = sorted(self.elements(bound))
        return self._sorted

    def contains(self, x: Element) -> bool:
        if len(x) != self.degree:
            raise InputError(f"Degree mismatch: element of degree {len(x)} in group of degree {self.degree}")
        if self._elements is not None:
            return x in self._elements
        if not self.gens:
            return x == self.identity
        return bool(self.sympy_group().contains(to_permutation(x)))

    def is_p_group(self, p: Optional[int] = None) -> bool:
        q = prime_of_order(self.order())
        return q is not None and (p is None or q == p)

    def is_abelian(self) -> bool:
        return all(mul(a, b) == mul(b, a) for a in self.gens for b in self.gens)

    def __repr__(self):
        label = self.name or 'group'
        return f"PermGroup({label}, degree={self.degree}, order={self.order()})"


class SubgroupHandle(PermGroup):
    """
    A subgroup of a fixed parent group.

    Two handles are equal iff they have the same elements; the canonical
    key is the sorted element list.
    """

    def __init__(
        self,
        parent: PermGroup,
        generators: Iterable[Element],
        elements: Optional[Iterable[Element]] = None,
        name: Optional[str] = None,
    ):
        super().__init__(parent.degree, generators, name=name, elements=elements)
        self.parent = parent
        self._key: Optional[Tuple[Element, ...]] = None

    def elements(self, bound: Optional[int] = None) -> FrozenSet[Element]:
        if self._elements is None:
            bound = active_bound('ambient_bound') if bound is None else bound
            self._elements = closure(self.gens, self.identity, bound=bound)
            self._order = len(self._elements)
        return self._elements

    def order(self) -> int:
        if self._order is None:
            self.elements()
        return self._order

    @property
    def canonical_key(self) -> Tuple[Element, ...]:
        if self._key is None:
            self._key = tuple(sorted(self.elements()))
        return self._key

    def sort_key(self) -> Tuple[int, Tuple[Element, ...]]:
        return (self.order(), self.canonical_key)

    def __eq__(self, other):
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.degree == other.degree and self.elements() == other.elements()

    def __hash__(self):
        return hash(self.elements())

    def __le__(self, other: 'SubgroupHandle') -> bool:
        return self.elements() <= other.elements()

    def __lt__(self, other: 'SubgroupHandle') -> bool:
        return self.elements() < other.elements()

    def __repr__(self):
        label = f"{self.name}, " if self.name else ''
        return f"SubgroupHandle({label}order={self.order()})"


def subgroup(G: PermGroup, generators: Iterable[PermLike], name: Optional[str] = None) -> SubgroupHandle:
    """
    Subgroup of G generated by the given elements.

    Raises:
        InputError: If a generator is not in G
    """
    gens = []
    for g in generators:
        x = tuple(g) if not isinstance(g, Permutation) else to_element(g, G.degree)
        if not G.contains(x):
            raise InputError(f"Generator {cycles_of(x)} is not an element of {G.name or 'the group'}")
        gens.append(x)
    return SubgroupHandle(G, gens, name=name)


def subgroup_from_elements(
    G: PermGroup,
    elements: Iterable[Element],
    name: Optional[str] = None,
) -> SubgroupHandle:
    """Handle for a subgroup of G known by its full element set."""
    elements = frozenset(elements)
    gens = generating_set(elements, G.identity)
    return SubgroupHandle(G, gens, elements=elements, name=name)


def whole(G: PermGroup) -> SubgroupHandle:
    if isinstance(G, SubgroupHandle):
        return G
    return SubgroupHandle(G, G.gens, elements=G._elements, name=G.name)


def trivial(G: PermGroup) -> SubgroupHandle:
    return SubgroupHandle(G, [], elements=[G.identity])


def join(G: PermGroup, *groups: PermGroup) -> SubgroupHandle:
    """Subgroup of G generated by the given subgroups."""
    gens = [g for H in groups for g in H.gens]
    return SubgroupHandle(G, gens)


def intersection(G: PermGroup, A: PermGroup, B: PermGroup) -> SubgroupHandle:
    return subgroup_from_elements(G, A.elements() & B.elements())


def conjugate(G: PermGroup, H: PermGroup, g: Element) -> SubgroupHandle:
    """H^g as a subgroup of G."""
    return SubgroupHandle(
        G,
        [conj(h, g) for h in H.gens],
        elements=[conj(h, g) for h in H.elements()],
    )


def _ensure_subgroup(G: PermGroup, H: PermGroup) -> None:
    if H.degree != G.degree:
        raise InputError(f"Degree mismatch: subgroup of degree {H.degree} in group of degree {G.degree}")
    for h in H.gens:
        if not G.contains(h):
            raise InputError(f"Subgroup is not contained in {G.name or 'the group'}: {cycles_of(h)} is missing")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def build_group(degree: int, generators: Sequence[PermLike], name: Optional[str] = None) -> PermGroup:
    """
    Build a permutation group and verify its order.

    Args:
        degree: Number of points
        generators: sympy Permutations or 1-based image lists
        name: Optional label carried into reports

    Returns:
        PermGroup with a computed order

    Raises:
        InputError: On a malformed permutation or degree mismatch
    """
    if not isinstance(degree, int) or degree < 1:
        raise InputError(f"Degree must be a positive integer, got {degree!r}")
    try:
        gens = [to_element(g, degree) for g in generators]
    except (ValueError, TypeError) as e:
        raise InputError(f"Malformed permutation: {e}") from e
    G = PermGroup(degree, gens, name=name)
    G.order()
    return G


def membership(G: PermGroup, x: PermLike) -> bool:
    """
    Test whether x lies in G.

    Args:
        G: The group
        x: sympy Permutation (padded with fixed points up to the degree)
           or an array-form element

    Raises:
        InputError: If the degree of x differs from G's
    """
    element = to_element(x, G.degree) if isinstance(x, Permutation) else tuple(x)
    return G.contains(element)


def centralizer(G: PermGroup, H: PermGroup) -> SubgroupHandle:
    """
    C_G(H) by scanning the elements of G.

    Raises:
        InputError: If H is not inside G
        ResourceBoundError: If G is above the ambient bound
    """
    _ensure_subgroup(G, H)
    gens = H.gens
    elements = [
        g for g in G.sorted_elements(bound=active_bound('ambient_bound'))
        if all(mul(g, h) == mul(h, g) for h in gens)
    ]
    return subgroup_from_elements(G, elements)


def normalizer(G: PermGroup, H: PermGroup) -> SubgroupHandle:
    """
    N_G(H) by scanning the elements of G.

    Raises:
        InputError: If H is not inside G
        ResourceBoundError: If G is above the ambient bound
    """
    _ensure_subgroup(G, H)
    members = H.elements()
    gens = H.gens
    elements = [
        g for g in G.sorted_elements(bound=active_bound('ambient_bound'))
        if all(conj(h, g) in members for h in gens)
    ]
    return subgroup_from_elements(G, elements)


def centralizes(g: Element, H: PermGroup) -> bool:
    return all(mul(g, h) == mul(h, g) for h in H.gens)


def normal_closure_elements(
    identity: Element,
    generators: Iterable[Element],
    conjugators: Sequence[Element],
) -> Tuple[List[Element], FrozenSet[Element]]:
    """
    Smallest subgroup containing the generators and normalized by the conjugators.

    Returns:
        Tuple of (generators, elements)
    """
    gens = [g for g in dict.fromkeys(generators) if g != identity]
    elements = closure(gens, identity)
    changed = True
    while changed:
        changed = False
        for x in list(gens):
            for c in conjugators:
                y = conj(x, c)
                if y not in elements:
                    elements = extend_closure(elements, gens, [y])
                    gens.append(y)
                    changed = True
    return gens, elements


def normal_closure(G: PermGroup, H: PermGroup) -> SubgroupHandle:
    """Normal closure of H in G."""
    gens, elements = normal_closure_elements(G.identity, H.gens, G.gens)
    return SubgroupHandle(G, gens, elements=elements)


def commutator_subgroup(G: PermGroup, A: PermGroup, B: PermGroup) -> SubgroupHandle:
    """
    [A, B] as a subgroup of G.

    Uses the normal closure of the generator commutators in <A, B>.
    """
    seeds = [commutator(a, b) for a in A.gens for b in B.gens]
    gens, elements = normal_closure_elements(G.identity, seeds, list(A.gens) + list(B.gens))
    return SubgroupHandle(G, gens, elements=elements)


def derived_subgroup(P: PermGroup) -> SubgroupHandle:
    return commutator_subgroup(P, P, P)


def center(P: PermGroup) -> SubgroupHandle:
    elements = [x for x in P.sorted_elements() if centralizes(x, P)]
    return subgroup_from_elements(P, elements)


def exponent(P: PermGroup) -> int:
    result = 1
    for x in P.elements():
        result = lcm(result, element_order(x))
    return result


def sylow_subgroup(G: PermGroup, p: int, seed: int = DEFAULT_SEED) -> SubgroupHandle:
    """
    A Sylow p-subgroup of G.

    Groups within the ambient bound are handled by normalizer ascent: start
    from the trivial group and repeatedly adjoin the smallest p-element that
    normalizes the current subgroup without lying in it. Larger groups use
    sympy with its random source seeded.

    Args:
        G: The group
        p: A prime
        seed: Seed for the sympy fallback

    Returns:
        Subgroup of order the p-part of |G|

    Raises:
        InputError: If p is not prime
    """
    if not isprime(p):
        raise InputError(f"{p} is not prime")
    n = G.order()
    target = p_part(n, p)
    if target == 1:
        return trivial(G)
    if target == n:
        return whole(G)

    if n > active_bound('ambient_bound'):
        return _sympy_sylow(G, p, seed)

    p_elements = [x for x in G.sorted_elements(bound=active_bound('ambient_bound')) if x != G.identity and is_p_element(x, p)]
    gens: List[Element] = []
    members = frozenset([G.identity])
    while len(members) < target:
        for x in p_elements:
            if x in members:
                continue
            if all(conj(h, x) in members for h in gens):
                members = extend_closure(members, gens, [x])
                gens.append(x)
                break
        else:  # pragma: no cover
            raise RuntimeError(f"Sylow ascent stalled at order {len(members)}")
    return SubgroupHandle(G, gens, elements=members, name=f"Syl_{p}")


def _sympy_sylow(G: PermGroup, p: int, seed: int) -> SubgroupHandle:
    from sympy.core import random as sympy_random

    seed_fn = getattr(sympy_random, 'seed', None)
    if seed_fn is not None:
        seed_fn(seed)
    Q = G.sympy_group().sylow_subgroup(p)
    gens = [to_element(g, G.degree) for g in Q.generators]
    return SubgroupHandle(G, gens, name=f"Syl_{p}")


def p_core(G: PermGroup, p: int) -> SubgroupHandle:
    """
    O_p(G), the intersection of all Sylow p-subgroups.

    The Sylow subgroups are reached as the conjugation orbit of one of them
    under the generators of G.
    """
    if not isprime(p):
        raise InputError(f"{p} is not prime")
    P = sylow_subgroup(G, p)
    if P.order() == G.order():
        return P
    start = P.elements()
    seen = {start}
    queue = [start]
    core = set(start)
    while queue:
        X = queue.pop()
        for g in G.gens:
            Y = frozenset(conj(x, g) for x in X)
            if Y not in seen:
                seen.add(Y)
                queue.append(Y)
                core &= Y
    return subgroup_from_elements(G, core, name=f"O_{p}")


def generated_by(G: PermGroup, candidates: Iterable[Element], name: Optional[str] = None) -> SubgroupHandle:
    """Subgroup of G generated by a (possibly large) set of elements."""
    gens: List[Element] = []
    current = frozenset([G.identity])
    for x in candidates:
        if x not in current:
            current = extend_closure(current, gens, [x])
            gens.append(x)
    return SubgroupHandle(G, gens, elements=current, name=name)


def p_residual(G: PermGroup, p: int) -> SubgroupHandle:
    """O^p(G): generated by the p'-elements of G."""
    elements = G.sorted_elements(bound=active_bound('ambient_bound'))
    return generated_by(G, (x for x in elements if gcd(element_order(x), p) == 1), name=f"O^{p}")


def p_prime_residual(G: PermGroup, p: int) -> SubgroupHandle:
    """O^{p'}(G): generated by the p-elements of G."""
    elements = G.sorted_elements(bound=active_bound('ambient_bound'))
    return generated_by(G, (x for x in elements if is_p_element(x, p)), name=f"O^{p}'")
