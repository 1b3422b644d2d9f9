"""
Proto-essential candidate filter for a finite p-group S.

Subgroup classes of S (up to S- or Aut(S)-conjugacy) go through five tests
in a fixed order; a class stops at its first failure unless the scan runs
in diagnostic mode:

    centric   C_S(E) <= E
    rank      Out_S(E) = N_S(E)/E could be Sylow in a group with a strongly
              p-embedded subgroup
    frattini  [N_S(E), E] not in Phi(E), and C_{N_S(E)}(E/Phi(E)) <= E
    radical   Out_S(E) meets O_p(Out(E)) trivially
    lifting   Aut(N_S(E)) has an element of order (p^n - 1)/(2, p^n - 1)
              when Out_S(E) is elementary abelian of order p^n > p

Every test over-approximates: an essential subgroup of any saturated
fusion system on S survives all five. Aut(E) is first needed at the
radical test, after the cheaper filters.

Usage:
    report = proto_essential_scan(S, 3, mode='aut')
    report.stage_counts    # {'total': ..., 'centric': ..., ...}
"""

import time
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional

from .automorphisms import (
    alternating_section_possible,
    automorphism_group,
    has_element_of_order,
    outer_quotient,
    quotient_by_normal,
)
from .config import RunConfig, active_bound, normalize_mode
from .lattice import (
    frattini_subgroup,
    is_elementary_abelian,
    structure_predicates,
    subgroup_classes,
)
from .perm_groups import (
    PermGroup,
    SubgroupHandle,
    centralizer,
    closure,
    commutator,
    commutator_subgroup,
    conj,
    normalizer,
    p_core,
    prime_of_order,
    subgroup_from_elements,
)
from .utils import InputError, ResourceBoundError, check_bound, progress


STAGES = ('centric', 'rank', 'frattini', 'radical', 'lifting')
OVERGROUP_STAGE = 'overgroup'


@dataclass
class TestOutcome:
    """
    Result of one test on one subgroup class.

    Attributes:
        subgroup: Class representative E
        stage: One of STAGES, or 'overgroup'
        passed: Whether E survives the test
        detail: Short diagnostic (orders, shapes, the element order sought)
        flagged: True when the pass is vacuous because a bound was hit
    """
    subgroup: SubgroupHandle
    stage: str
    passed: bool
    detail: str
    flagged: bool = False

    __test__ = False


@dataclass
class PipelineReport:
    """
    Outcome of a proto-essential scan.

    stage_counts[stage] is the number of classes passing every test up to
    and including that stage, so the counts never increase.
    """
    group_name: str
    prime: int
    conjugacy_mode: str
    rank_test_mode: str
    stage_counts: Dict[str, int]
    survivors: List[SubgroupHandle]
    traces: List[TestOutcome]
    class_sizes: List[int] = field(default_factory=list)
    proto_essentials: Optional[List[SubgroupHandle]] = None
    timings: Dict[str, float] = field(default_factory=dict)


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def _sylow_normalizer(S: PermGroup, E: SubgroupHandle) -> SubgroupHandle:
    key = ('sylow_normalizer', S.elements())
    if key not in E.cache:
        E.cache[key] = normalizer(S, E)
    return E.cache[key]


def out_s_quotient(S: PermGroup, E: SubgroupHandle) -> PermGroup:
    """Out_S(E) for centric E, as the permutation group N_S(E)/E."""
    N = _sylow_normalizer(S, E)
    quotient, _ = quotient_by_normal(N, E)
    return quotient


# ---------------------------------------------------------------------------
# The five tests
# ---------------------------------------------------------------------------

def centric_test(S: PermGroup, E: SubgroupHandle) -> TestOutcome:
    C = centralizer(S, E)
    passed = C.elements() <= E.elements()
    return TestOutcome(E, 'centric', passed, f"|C_S(E)| = {C.order()}")


def rank_bound_hook(S: PermGroup, E: SubgroupHandle, out_s: PermGroup) -> Optional[bool]:
    """
    Extra rank condition on E; None means no opinion.

    Disabled: the bound it would apply is not available, and returning
    anything but None could reject a genuine essential subgroup.
    """
    return None


def candidate_sylow_shape(Q: PermGroup, p: int) -> bool:
    """
    Strict shape predicate for Out_S(E).

    Accepts cyclic and elementary abelian groups, special groups of order
    p^3k with centre of order p^k, special 2-groups of order 2^2k with
    centre 2^k, and for p = 3 any group of order 3^3k with centre 3^k.

    Generalized quaternion groups of order 16 or more are rejected,
    although they occur as Sylow 2-subgroups of Frobenius complements;
    strict mode can therefore drop an E with Out_S(E) of that shape.
    Conservative mode keeps it.
    """
    info = structure_predicates(Q)
    n = _log(Q.order(), p)
    z = _log(info.center_order, p)
    if info.is_cyclic or info.is_elementary_abelian:
        return True
    if info.is_special and n == 3 * z:
        return True
    if p == 2 and info.is_special and n == 2 * z:
        return True
    if p == 3 and n % 3 == 0 and n == 3 * z:
        return True
    return False


def rank_test(S: PermGroup, E: SubgroupHandle, mode: str = 'conservative') -> TestOutcome:
    p = prime_of_order(S.order())
    Q = out_s_quotient(S, E)
    order = Q.order()
    if order == 1:
        return TestOutcome(E, 'rank', False, "Out_S(E) trivial")
    if mode == 'strict' and not candidate_sylow_shape(Q, p):
        return TestOutcome(E, 'rank', False, f"|Out_S(E)| = {order}, shape rejected")
    if rank_bound_hook(S, E, Q) is False:
        return TestOutcome(E, 'rank', False, f"|Out_S(E)| = {order}, rank of E too small")
    return TestOutcome(E, 'rank', True, f"|Out_S(E)| = {order}")


def frattini_test(S: PermGroup, E: SubgroupHandle) -> TestOutcome:
    N = _sylow_normalizer(S, E)
    phi = frattini_subgroup(E).elements()
    moved = commutator_subgroup(S, N, E)
    if moved.elements() <= phi:
        return TestOutcome(E, 'frattini', False, "[N_S(E), E] <= Phi(E)")
    members = E.elements()
    acting = [
        n for n in N.sorted_elements()
        if all(commutator(x, n) in phi for x in E.gens)
    ]
    passed = all(n in members for n in acting)
    return TestOutcome(E, 'frattini', passed, f"|C_N(E/Phi(E))| = {len(acting)}")


def radical_test(S: PermGroup, E: SubgroupHandle, cache=None) -> TestOutcome:
    if is_elementary_abelian(E):
        return TestOutcome(E, 'radical', True, "E elementary abelian")
    p = prime_of_order(S.order())
    try:
        aut = automorphism_group(E, cache=cache)
        out = outer_quotient(aut)
        N = _sylow_normalizer(S, E)
        conjugations = [
            aut.from_map({x: conj(x, n) for x in E.elements()}) for n in N.gens
        ]
        out_s = SubgroupHandle(out.quotient, [out.project(a) for a in conjugations])
        core = p_core(out.quotient, p)
    except ResourceBoundError as e:
        return TestOutcome(E, 'radical', True, f"not evaluated: {e}", flagged=True)
    meet = out_s.elements() & core.elements()
    return TestOutcome(
        E, 'radical', len(meet) == 1,
        f"|Out(E)| = {out.order()}, |O_p(Out(E))| = {core.order()}, |meet| = {len(meet)}",
    )


def required_lifting_order(p: int, n: int) -> int:
    """(p^n - 1)/gcd(2, p^n - 1)."""
    q = p ** n
    return (q - 1) // gcd(2, q - 1)


def lifting_test(S: PermGroup, E: SubgroupHandle, cache=None) -> TestOutcome:
    p = prime_of_order(S.order())
    Q = out_s_quotient(S, E)
    if Q.order() <= p or not is_elementary_abelian(Q):
        return TestOutcome(E, 'lifting', True, "not applicable")
    n = _log(Q.order(), p)
    a0 = required_lifting_order(p, n)
    N = _sylow_normalizer(S, E)
    try:
        if p >= 5:
            if any(alternating_section_possible(automorphism_group(X, cache=cache).action, 2 * p) for X in (E, N)):
                return TestOutcome(E, 'lifting', True, f"Alt({2 * p}) section possible")
        aut_N = automorphism_group(N, cache=cache)
        found = has_element_of_order(aut_N.action, a0)
    except ResourceBoundError as e:
        return TestOutcome(E, 'lifting', True, f"order {a0} not checked: {e}", flagged=True)
    return TestOutcome(E, 'lifting', found, f"element of order {a0} in Aut(N_S(E)): {found}")


def overgroup_test(S: PermGroup, E: SubgroupHandle, cache=None) -> TestOutcome:
    """
    Some X with Out_S(E) <= X <= Out(E) has O_p(X) = 1 and Out_S(E) Sylow in X.

    Overgroups are grown from Out_S(E) one cyclic subgroup at a time; any
    growth that enlarges the p-part is dropped, since it cannot lie below
    an X in which Out_S(E) is Sylow.
    """
    p = prime_of_order(S.order())
    try:
        aut = automorphism_group(E, cache=cache)
        out = outer_quotient(aut)
        N = _sylow_normalizer(S, E)
        conjugations = [aut.from_map({x: conj(x, n) for x in E.elements()}) for n in N.gens]
        T = SubgroupHandle(out.quotient, [out.project(a) for a in conjugations])
        target = T.order()
        cyclics = []
        seen_cyclic = set()
        for x in out.quotient.sorted_elements():
            c = subgroup_from_elements(out.quotient, closure([x], out.quotient.identity))
            if c.elements() not in seen_cyclic:
                seen_cyclic.add(c.elements())
                cyclics.append(c)
        found = {T.elements(): T}
        layer = [T]
        while layer:
            nxt = []
            for X in layer:
                if p_core(X, p).order() == 1:
                    return TestOutcome(E, OVERGROUP_STAGE, True, f"overgroup of order {X.order()}")
                for C in cyclics:
                    if C.elements() <= X.elements():
                        continue
                    Y = SubgroupHandle(out.quotient, list(X.gens) + list(C.gens))
                    if Y.elements() in found or Y.order() % (target * p) == 0:
                        continue
                    check_bound('overgroup search', len(found), active_bound('enumeration_bound'))
                    found[Y.elements()] = Y
                    nxt.append(Y)
            layer = nxt
    except ResourceBoundError as e:
        return TestOutcome(E, OVERGROUP_STAGE, True, f"not evaluated: {e}", flagged=True)
    return TestOutcome(E, OVERGROUP_STAGE, False, "no overgroup with trivial O_p")


# ---------------------------------------------------------------------------
# The scan
# ---------------------------------------------------------------------------

def run_stage(stage: str, S: PermGroup, E: SubgroupHandle, config: RunConfig, cache=None) -> TestOutcome:
    if stage == 'centric':
        return centric_test(S, E)
    if stage == 'rank':
        return rank_test(S, E, config.rank_test_mode)
    if stage == 'frattini':
        return frattini_test(S, E)
    if stage == 'radical':
        return radical_test(S, E, cache=cache)
    if stage == 'lifting':
        return lifting_test(S, E, cache=cache)
    raise InputError(f"Unknown stage '{stage}'")


def proto_essential_scan(
    S: PermGroup,
    p: Optional[int] = None,
    mode: str = 'inner',
    config: Optional[RunConfig] = None,
    cache=None,
    quiet: bool = True,
) -> PipelineReport:
    """
    Run the five tests over the subgroup classes of S.

    Args:
        S: A finite p-group within the subgroup-enumeration bound
        p: The prime (defaults to the prime dividing |S|)
        mode: 'inner' (S-conjugacy) or 'aut' / 'automorphism' (Aut(S)-conjugacy)
        config: Rank-test mode, diagnostic and overgroup switches, bound overrides
        cache: Optional AutCache
        quiet: Suppress the progress bar

    Returns:
        PipelineReport with cumulative stage counts, survivors and traces

    Raises:
        InputError: If S is not a p-group for p
        ResourceBoundError: If S (or Aut(S) in 'aut' mode) exceeds its bound
    """
    config = config or RunConfig()
    with config.applied_bounds():
        return _scan(S, p, normalize_mode(mode), config, cache, quiet)


def _scan(
    S: PermGroup,
    p: Optional[int],
    mode: str,
    config: RunConfig,
    cache,
    quiet: bool,
) -> PipelineReport:
    q = prime_of_order(S.order())
    p = p or config.prime or q
    if S.order() > 1 and q != p:
        raise InputError(f"Group of order {S.order()} is not a {p}-group")

    timings = {stage: 0.0 for stage in ('classes',) + STAGES}
    start = time.perf_counter()
    if mode == 'aut':
        classes = subgroup_classes(S, 'aut', automorphisms=automorphism_group(S, cache=cache))
    else:
        classes = subgroup_classes(S, 'inner')
    timings['classes'] = time.perf_counter() - start

    counts = {'total': len(classes)}
    counts.update({stage: 0 for stage in STAGES})
    survivors: List[SubgroupHandle] = []
    traces: List[TestOutcome] = []

    for c in progress(classes, desc='Subgroup classes', total=len(classes), quiet=quiet):
        E = c.representative
        alive = True
        for stage in STAGES:
            if not alive and not config.diagnostic:
                break
            t0 = time.perf_counter()
            outcome = run_stage(stage, S, E, config, cache=cache)
            timings[stage] += time.perf_counter() - t0
            traces.append(outcome)
            alive = alive and outcome.passed
            if alive:
                counts[stage] += 1
        if alive:
            survivors.append(E)

    proto = None
    if config.overgroup_check:
        proto = []
        for E in survivors:
            outcome = overgroup_test(S, E, cache=cache)
            traces.append(outcome)
            if outcome.passed:
                proto.append(E)

    return PipelineReport(
        group_name=S.name or 'S',
        prime=p,
        conjugacy_mode=mode,
        rank_test_mode=config.rank_test_mode,
        stage_counts=counts,
        survivors=survivors,
        traces=traces,
        class_sizes=[c.size for c in classes],
        proto_essentials=proto,
        timings={k: round(v, 4) for k, v in timings.items()},
    )

