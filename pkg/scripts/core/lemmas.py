"""
Executable checks of the group-theoretic lemmas the pipeline relies on.

Each check evaluates the hypotheses of one statement on concrete
subgroups and, when they hold, its conclusion. A violation (hypotheses
true, conclusion false) means a kernel computation is wrong.

- three_subgroups_check, thompson_characteristic_check, coprime_action_check
- burnside_check, centric_faithful_check
- weak_closure_equality_instance, is_weakly_closed_in_group
- extension_check, essentials_in_normalizer_check, thompson_weakly_closed_check
- hyperfocal_word_check, essential_radical_check, strongly_p_embedded_agreement

run_lemma_checks drives all of them over one group and prime; large
instance sets are sampled with a seeded random.Random.
"""

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from .automorphisms import AutomorphismGroup, automorphism_group, induced_quotient_action
from .config import (
    COPRIME_PAIR_SAMPLE_LIMIT,
    DEFAULT_SEED,
    HYPERFOCAL_WORDS,
    TRIPLE_SAMPLE_LIMIT,
    active_bound,
)
from .fusion import (
    RealizedFusionSystem,
    automizer,
    essential_subgroups,
    has_strongly_p_embedded,
    is_fully_normalized,
    is_radical,
    is_strongly_closed,
    is_weakly_closed,
    normalizer_system,
    out_F,
    sylow_intersection_graph_disconnected,
)
from .lattice import all_subgroups, frattini_subgroup, thompson_subgroup
from .perm_groups import (
    Element,
    PermGroup,
    SubgroupHandle,
    center,
    closure,
    commutator_subgroup,
    conj,
    element_order,
    inv,
    mul,
    normalizer,
    p_core,
    p_part,
    p_prime_residual,
    prime_of_order,
    subgroup_from_elements,
    sylow_subgroup,
)
from .utils import ResourceBoundError, progress


@dataclass
class LemmaCheck:
    """Outcome of one instance."""
    hypothesis_holds: bool
    conclusion_holds: bool
    detail: str = ''

    @property
    def violated(self) -> bool:
        return self.hypothesis_holds and not self.conclusion_holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hypothesis_holds': self.hypothesis_holds,
            'conclusion_holds': self.conclusion_holds,
            'detail': self.detail,
        }


@dataclass
class WordCheck(LemmaCheck):
    words_checked: int = 0
    violations: int = 0


@dataclass
class LemmaSummary:
    """Tally of the instances of one lemma."""
    name: str
    instances: int = 0
    hypothesis_held: int = 0
    violations: List[str] = field(default_factory=list)
    sampled: bool = False
    skipped: Optional[str] = None

    def record(self, check: LemmaCheck, label: str = '') -> None:
        self.instances += 1
        if check.hypothesis_holds:
            self.hypothesis_held += 1
        if check.violated:
            self.violations.append(label or check.detail)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'instances': self.instances,
            'hypothesis_held': self.hypothesis_held,
            'violations': len(self.violations),
            'sampled': self.sampled,
        }
        if self.violations:
            data['violation_details'] = self.violations[:10]
        if self.skipped:
            data['skipped'] = self.skipped
        return data


def _sample_indices(total: int, limit: int, rng: random.Random) -> Tuple[List[int], bool]:
    if total <= limit:
        return list(range(total)), False
    return sorted(rng.sample(range(total), limit)), True


def _is_trivial(H: PermGroup) -> bool:
    return H.order() == 1


# ---------------------------------------------------------------------------
# Group lemmas
# ---------------------------------------------------------------------------

def _triple(G: PermGroup, X: PermGroup, Y: PermGroup, Z: PermGroup) -> SubgroupHandle:
    return commutator_subgroup(G, commutator_subgroup(G, X, Y), Z)


def three_subgroups_check(G: PermGroup, X: PermGroup, Y: PermGroup, Z: PermGroup) -> LemmaCheck:
    """[X,Y,Z] = [Y,Z,X] = 1 implies [Z,X,Y] = 1."""
    hypothesis = _is_trivial(_triple(G, X, Y, Z)) and _is_trivial(_triple(G, Y, Z, X))
    if not hypothesis:
        return LemmaCheck(False, True)
    return LemmaCheck(True, _is_trivial(_triple(G, Z, X, Y)))


def thompson_characteristic_check(S: PermGroup, aut: AutomorphismGroup) -> LemmaCheck:
    """J(S) is fixed by Aut(S), and J(P) = J(S) whenever J(S) <= P <= S."""
    J = thompson_subgroup(S)
    members = J.elements()
    for phi in aut.generator_maps():
        if frozenset(phi[x] for x in members) != members:
            return LemmaCheck(True, False, "J(S) moved by an automorphism")
    for P in all_subgroups(S):
        if members <= P.elements() and thompson_subgroup(P).elements() != members:
            return LemmaCheck(True, False, f"J(P) != J(S) for |P| = {P.order()}")
    return LemmaCheck(True, True, f"|J(S)| = {J.order()}")


def _coset_index(A: PermGroup, B_members: FrozenSet[Element]) -> Dict[Element, int]:
    coset_of: Dict[Element, int] = {}
    for x in A.sorted_elements():
        if x in coset_of:
            continue
        index = len(coset_of) // len(B_members)
        for b in B_members:
            coset_of[mul(b, x)] = index
    return coset_of


def coprime_action_check(A: PermGroup, aut: AutomorphismGroup, H: PermGroup, B: PermGroup) -> LemmaCheck:
    """
    Coprime action of H <= Aut(A) with B an H-invariant normal subgroup of A.

    Conclusions: fixed cosets of B are the cosets of C_A(H)B; acting
    trivially on A/B and on B means acting trivially; acting trivially on
    A/Phi(A) means acting trivially.
    """
    domain = aut.domain
    B_members = B.elements()
    acting = H.gens
    hypothesis = (
        gcd(H.order(), A.order()) == 1
        and all(domain.apply(a, b) in B_members for a in acting for b in B.gens)
        and all(conj(b, g) in B_members for b in B.gens for g in A.gens)
    )
    if not hypothesis:
        return LemmaCheck(False, True)

    elements = A.sorted_elements()
    fixed = [x for x in elements if all(domain.apply(a, x) == x for a in acting)]
    trivial_on_A = len(fixed) == len(elements)

    coset_of = _coset_index(A, B_members)
    fixed_cosets = {
        coset_of[x] for x in elements
        if all(coset_of[domain.apply(a, x)] == coset_of[x] for a in acting)
    }
    if fixed_cosets != {coset_of[x] for x in fixed}:
        return LemmaCheck(True, False, "fixed cosets differ from C_A(H)B/B")

    trivial_on_B = all(domain.apply(a, b) == b for a in acting for b in B_members)
    trivial_on_quotient = len(fixed_cosets) == len(set(coset_of.values()))
    if trivial_on_B and trivial_on_quotient and not trivial_on_A:
        return LemmaCheck(True, False, "trivial on A/B and B but not on A")

    phi_index = _coset_index(A, frattini_subgroup(A).elements())
    trivial_mod_phi = all(phi_index[domain.apply(a, x)] == phi_index[x] for a in acting for x in elements)
    if trivial_mod_phi and not trivial_on_A:
        return LemmaCheck(True, False, "trivial on A/Phi(A) but not on A")
    return LemmaCheck(True, True, f"|C_A(H)| = {len(fixed)}")


def burnside_check(S: PermGroup, aut: AutomorphismGroup) -> LemmaCheck:
    """C_Aut(S)(S/Phi(S)) is a normal p-subgroup of Aut(S)."""
    p = prime_of_order(S.order())
    maps = [aut.to_map(a) for a in aut.action.gens]
    action = induced_quotient_action(maps, frattini_subgroup(S), source=S)
    K = action.kernel
    members = K.elements()
    normal = all(conj(k, g) in members for k in K.gens for g in action.group.gens)
    p_group = K.order() == 1 or K.is_p_group(p)
    return LemmaCheck(True, normal and p_group, f"|C(S/Phi(S))| = {K.order()}")


def centric_faithful_check(E: PermGroup, A: PermGroup, aut: AutomorphismGroup) -> LemmaCheck:
    """
    With A normal in E and C_E(A) <= A, and G the stabilizer of A in Aut(E),
    C_G(A) <= O_p(G).
    """
    A_members = A.elements()
    normal = all(conj(a, g) in A_members for a in A.gens for g in E.gens)
    centric = all(
        x in A_members for x in E.sorted_elements()
        if all(mul(x, a) == mul(a, x) for a in A.gens)
    )
    if not (normal and centric):
        return LemmaCheck(False, True)
    domain = aut.domain
    stabilizer = [
        a for a in aut.action.sorted_elements()
        if all(domain.apply(a, x) in A_members for x in A.gens)
    ]
    G = subgroup_from_elements(aut.action, stabilizer)
    fixing = {a for a in stabilizer if all(domain.apply(a, x) == x for x in A.gens)}
    p = prime_of_order(E.order())
    core = p_core(G, p).elements()
    return LemmaCheck(True, fixing <= core, f"|C_G(A)| = {len(fixing)}, |O_p(G)| = {len(core)}")


def is_weakly_closed_in_group(A: PermGroup, H: PermGroup, G: PermGroup) -> bool:
    """For every x in G with A^x <= H, A^x = A."""
    members = A.elements()
    H_members = H.elements()
    for x in G.sorted_elements(bound=active_bound('ambient_bound')):
        images = [conj(a, x) for a in A.gens]
        if all(y in H_members for y in images) and not all(y in members for y in images):
            return False
    return True


def _static_weak_closure_hypotheses(
    G: PermGroup, X: PermGroup, Y: PermGroup, Z: PermGroup, S: PermGroup,
) -> bool:
    p = prime_of_order(S.order())
    S_members = S.elements()
    if p is None and S.order() > 1:
        return False
    for K in (Y, Z):
        if not S_members <= K.elements():
            return False
        if p is not None and S.order() != p_part(K.order(), p):
            return False
    if not X.elements() <= S_members or not is_weakly_closed_in_group(X, S, G):
        return False
    N_Y = normalizer(Y, X)
    N_Z = normalizer(Z, X)
    if N_Y.elements() != N_Z.elements():
        return False
    Z_members = Z.elements()
    return all(
        all(conj(z, g) in Z_members for z in Z.gens)
        for g in normalizer(G, N_Z).sorted_elements()
    )


def weak_closure_equality_instance(
    G: PermGroup,
    X: PermGroup,
    Y: PermGroup,
    Z: PermGroup,
    S: PermGroup,
    g: Element,
) -> LemmaCheck:
    """
    X weakly closed in S (a common Sylow of Y and Z), Y^g <= Z,
    N_Y(X) = N_Z(X) and N_G(N_Z(X)) <= N_G(Z) give Y <= Z; Y^g = Z gives Y = Z.
    """
    Z_members = Z.elements()
    conjugate = [conj(y, g) for y in Y.gens]
    if not all(y in Z_members for y in conjugate):
        return LemmaCheck(False, True)
    if not _static_weak_closure_hypotheses(G, X, Y, Z, S):
        return LemmaCheck(False, True)
    return _weak_closure_conclusion(Y, Z)


def _weak_closure_conclusion(Y: PermGroup, Z: PermGroup) -> LemmaCheck:
    contained = Y.elements() <= Z.elements()
    if Y.order() == Z.order():
        return LemmaCheck(True, contained and Y.elements() == Z.elements(), "Y^g = Z")
    return LemmaCheck(True, contained, "Y^g < Z")


# ---------------------------------------------------------------------------
# Fusion lemmas
# ---------------------------------------------------------------------------

def extension_check(F: RealizedFusionSystem, A: PermGroup) -> LemmaCheck:
    """
    For fully normalized A, every alpha in Aut_F(A) normalizing Aut_S(A)
    extends to an element of Aut_F(N_S(A)).
    """
    if not is_fully_normalized(F, A):
        return LemmaCheck(False, True)
    data = automizer(F, A)
    aut_S_members = data.aut_S.elements()
    normalizing = [
        a for a in data.aut_F.sorted_elements()
        if all(conj(s, a) in aut_S_members for s in data.aut_S.gens)
    ]
    NS = data.sylow_normalizer
    NS_members = NS.elements()
    extendable = {
        tuple(data.domain.index[conj(x, g)] for x in data.domain.points)
        for g in data.normalizer.sorted_elements()
        if all(conj(n, g) in NS_members for n in NS.gens)
    }
    missing = [a for a in normalizing if a not in extendable]
    return LemmaCheck(True, not missing, f"{len(normalizing)} automorphisms, {len(missing)} without extension")


def _essential_members(F: RealizedFusionSystem) -> List[FrozenSet[Element]]:
    return [B.elements() for c in essential_subgroups(F).classes for B in c.fully_normalized_members]


def essentials_in_normalizer_check(F: RealizedFusionSystem, A: PermGroup) -> LemmaCheck:
    """For weakly closed A, E(N_F(A)) is the set of essentials of F containing A."""
    if not is_weakly_closed(F, A):
        return LemmaCheck(False, True)
    inside = set(_essential_members(normalizer_system(F, A)))
    members = A.elements()
    outside = {B for B in _essential_members(F) if members <= B}
    return LemmaCheck(True, inside == outside, f"{len(inside)} essential subgroups contain A")


def thompson_weakly_closed_check(F: RealizedFusionSystem) -> LemmaCheck:
    """J(S) is weakly F-closed."""
    J = thompson_subgroup(F.sylow)
    return LemmaCheck(True, is_weakly_closed(F, J), f"|J(S)| = {J.order()}")


def hyperfocal_word_check(
    F: RealizedFusionSystem,
    A: PermGroup,
    words: int = HYPERFOCAL_WORDS,
    seed: int = DEFAULT_SEED,
) -> WordCheck:
    """
    If [E, O^{p'}(Aut_F(E))] <= A for every essential E, then composites of
    such automorphisms move every point by an element of A, and a weakly
    closed A is strongly closed.

    Words of length 1 to 4 in the generators of the O^{p'}(Aut_F(E)) are
    drawn from random.Random(seed) and applied to every x in S along their
    domains.
    """
    A_members = A.elements()
    moves = []
    for c in essential_subgroups(F).classes:
        for E in c.fully_normalized_members:
            data = automizer(F, E)
            R = p_prime_residual(data.aut_F, F.prime)
            for a in R.gens:
                for x in data.domain.points:
                    if mul(inv(x), data.domain.apply(a, x)) not in A_members:
                        return WordCheck(False, True)
            if R.gens:
                moves.append((data, R.gens))

    rng = random.Random(seed)
    checked = violations = 0
    points = F.sylow.sorted_elements()
    for _ in range(words if moves else 0):
        word = []
        for _ in range(rng.randint(1, 4)):
            data, gens = rng.choice(moves)
            word.append((data, rng.choice(gens)))
        checked += 1
        for x in points:
            y = x
            for data, a in word:
                if y not in data.subgroup.elements():
                    break
                y = data.domain.apply(a, y)
            else:
                if mul(inv(x), y) not in A_members:
                    violations += 1
                    break

    closed = not is_weakly_closed(F, A) or is_strongly_closed(F, A)
    return WordCheck(
        True, violations == 0 and closed,
        f"{checked} words, {violations} violations, strongly closed: {closed}",
        words_checked=checked, violations=violations,
    )


def essential_radical_check(F: RealizedFusionSystem) -> LemmaCheck:
    """Every essential subgroup is F-radical."""
    classes = essential_subgroups(F).classes
    failing = [c for c in classes if not is_radical(F, c.representative)]
    return LemmaCheck(True, not failing, f"{len(classes)} classes")


def strongly_p_embedded_agreement(H: PermGroup, p: int) -> LemmaCheck:
    """The subgroup search and the Sylow intersection graph give the same verdict."""
    by_search = has_strongly_p_embedded(H, p) is not None
    by_graph = sylow_intersection_graph_disconnected(H, p)
    return LemmaCheck(True, by_search == by_graph, f"search: {by_search}, graph: {by_graph}")


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _candidate_overgroups(G: PermGroup, S: SubgroupHandle, X_list: Sequence[SubgroupHandle]) -> List[SubgroupHandle]:
    found: Dict[FrozenSet[Element], SubgroupHandle] = {}
    candidates = [S, normalizer(G, S)] + [normalizer(G, X) for X in X_list]
    candidates.append(subgroup_from_elements(G, G.elements(bound=active_bound('ambient_bound'))))
    for K in candidates:
        found.setdefault(K.elements(), K)
    return sorted(found.values(), key=lambda K: K.sort_key())


def run_lemma_checks(
    G: PermGroup,
    p: int,
    seed: int = DEFAULT_SEED,
    quiet: bool = True,
    cache=None,
) -> Dict[str, LemmaSummary]:
    """
    Run every lemma check on G at p.

    Group lemmas run on a Sylow p-subgroup S of G, fusion lemmas on
    F_S(G). Instance sets larger than their limit are sampled.

    Returns:
        LemmaSummary per lemma name
    """
    rng = random.Random(seed)
    S = sylow_subgroup(G, p, seed)
    F = RealizedFusionSystem(G, p, sylow=S, seed=seed, name=G.name)
    subgroups = all_subgroups(S)
    summaries: Dict[str, LemmaSummary] = {}

    def summary(name: str) -> LemmaSummary:
        summaries[name] = LemmaSummary(name)
        return summaries[name]

    s = summary('three_subgroups')
    n = len(subgroups)
    indices, s.sampled = _sample_indices(n ** 3, TRIPLE_SAMPLE_LIMIT, rng)
    for i in progress(indices, desc='Three subgroups', quiet=quiet):
        X, Y, Z = subgroups[i // (n * n)], subgroups[(i // n) % n], subgroups[i % n]
        s.record(three_subgroups_check(S, X, Y, Z), f"triple {i}")

    try:
        aut = automorphism_group(S, cache=cache)
    except ResourceBoundError as e:
        aut = None
        for name in ('thompson_characteristic', 'coprime_action', 'burnside', 'centric_faithful'):
            summary(name).skipped = str(e)

    if aut is not None and S.order() > 1:
        summary('thompson_characteristic').record(thompson_characteristic_check(S, aut))
        summary('burnside').record(burnside_check(S, aut))

        s = summary('coprime_action')
        identity = aut.action.identity
        seen = set()
        acting = []
        for a in aut.action.sorted_elements():
            if a == identity or element_order(a) % p == 0:
                continue
            c = closure([a], identity)
            if c not in seen:
                seen.add(c)
                acting.append(SubgroupHandle(aut.action, [a], elements=c))
        pairs, s.sampled = _sample_indices(len(acting) * n, COPRIME_PAIR_SAMPLE_LIMIT, rng)
        for i in pairs:
            H, B = acting[i // n], subgroups[i % n]
            s.record(coprime_action_check(S, aut, H, B), f"pair {i}")

        s = summary('centric_faithful')
        for A in subgroups:
            s.record(centric_faithful_check(S, A, aut), f"|A| = {A.order()}")

    s = summary('weak_closure_equality')
    X_list = [center(S), thompson_subgroup(S), S]
    overgroups = _candidate_overgroups(G, S, X_list)
    elements = G.sorted_elements(bound=active_bound('ambient_bound'))
    for X in X_list:
        for Y in overgroups:
            for Z in overgroups:
                static = _static_weak_closure_hypotheses(G, X, Y, Z, S)
                Z_members = Z.elements()
                for g in elements:
                    if static and all(conj(y, g) in Z_members for y in Y.gens):
                        check = _weak_closure_conclusion(Y, Z)
                    else:
                        check = LemmaCheck(False, True)
                    s.record(check, f"|X| = {X.order()}, |Y| = {Y.order()}, |Z| = {Z.order()}")

    s = summary('extension')
    t = summary('essentials_in_normalizer')
    u = summary('hyperfocal_words')
    for i, A in enumerate(progress(F.subgroups(), desc='Fusion lemmas', quiet=quiet)):
        label = f"|A| = {A.order()}"
        s.record(extension_check(F, A), label)
        t.record(essentials_in_normalizer_check(F, A), label)
        u.record(hyperfocal_word_check(F, A, seed=seed + i), label)

    summary('thompson_weakly_closed').record(thompson_weakly_closed_check(F))
    summary('essential_radical').record(essential_radical_check(F))

    s = summary('strongly_p_embedded_agreement')
    for A in F.subgroups():
        s.record(strongly_p_embedded_agreement(out_F(F, A), p), f"Out_F(A), |A| = {A.order()}")
    return summaries
