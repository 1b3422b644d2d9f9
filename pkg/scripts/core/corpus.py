"""
Bundled corpus of small groups.

Groups are generated programmatically; building an entry checks its order
and, for p-groups, the structure flags it is supposed to have, so a broken
constructor fails loudly instead of producing a wrong test case.

Constructors:
- dihedral(n), quaternion(n), semidihedral(n): order 2n / n / n, from the
  right regular action of a metacyclic presentation where needed
- extraspecial(p, kind): p^{1+2}; kind '+'/'-' for p = 2, exponent p or
  p^2 for odd p
- wreath_cyclic(p): C_p wr C_p on p^2 points
- symmetric(n), alternating(n), cyclic(n), elementary_abelian(p, n)
- linear(kind, n, p): SL_n(p) or GL_n(p) on the non-zero vectors of F_p^n
- wreath_symmetric(k): S_k wr S_k on k^2 points
- from_file(path): a group-spec file

Usage:
    G = build_named('dihedral4')          # order 8
    G = load_group('corpus:extraspecial-3-27')
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Tuple

from sympy import isprime, primitive_root
from sympy.combinatorics.named_groups import (
    AbelianGroup,
    AlternatingGroup,
    CyclicGroup,
    DihedralGroup,
    SymmetricGroup,
)

from .lattice import structure_predicates
from .perm_groups import PermGroup, build_group
from .group_spec import parse_group_spec
from .utils import InputError, parse_group_ref


def _from_sympy(group, name: str) -> PermGroup:
    return build_group(group.degree, list(group.generators), name=name)


def _regular_metacyclic(m: int, k: int, r: int, t: int, name: str) -> PermGroup:
    """
    <a, b | a^m = 1, b^k = a^t, b^-1 a b = a^r> in its right regular action.

    The element a^i b^j (0 <= i < m, 0 <= j < k) is the point i + m*j.
    """
    s = pow(r, -1, m)

    def point(i: int, j: int) -> int:
        return (i % m) + m * j

    by_a = [0] * (m * k)
    by_b = [0] * (m * k)
    for j in range(k):
        for i in range(m):
            by_a[point(i, j)] = point(i + pow(s, j, m), j)
            by_b[point(i, j)] = point(i, j + 1) if j + 1 < k else point(i + t, 0)
    return build_group(m * k, [[x + 1 for x in by_a], [x + 1 for x in by_b]], name=name)


def _power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise InputError(f"cyclic({n}): n must be positive")
    return _from_sympy(CyclicGroup(n), f"C{n}")


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n on n points (n >= 3)."""
    if n < 3:
        raise InputError(f"dihedral({n}): need n >= 3")
    return _from_sympy(DihedralGroup(n), f"D{2 * n}")


def quaternion(n: int) -> PermGroup:
    """Generalized quaternion group of order n (a power of 2, n >= 8)."""
    if n < 8 or not _power_of_two(n):
        raise InputError(f"quaternion({n}): order must be a power of 2, at least 8")
    m = n // 2
    return _regular_metacyclic(m, 2, m - 1, m // 2, f"Q{n}")


def semidihedral(n: int) -> PermGroup:
    """Semidihedral group of order n (a power of 2, n >= 16)."""
    if n < 16 or not _power_of_two(n):
        raise InputError(f"semidihedral({n}): order must be a power of 2, at least 16")
    m = n // 2
    return _regular_metacyclic(m, 2, m // 2 - 1, 0, f"SD{n}")


def extraspecial(p: int, kind) -> PermGroup:
    """
    Extraspecial group of order p^3.

    For p = 2, kind is '+' (D8) or '-' (Q8). For odd p, kind is the
    exponent: p gives the Heisenberg group acting affinely on F_p^2,
    p^2 gives C_{p^2} extended by the automorphism a -> a^{1+p}.
    """
    if not isprime(p):
        raise InputError(f"extraspecial: {p} is not prime")
    if p == 2:
        if kind == '+':
            return dihedral(4)
        if kind == '-':
            return quaternion(8)
        raise InputError(f"extraspecial(2, {kind!r}): kind must be '+' or '-'")
    if kind == p:
        def point(u: int, v: int) -> int:
            return u * p + v
        translate = [0] * (p * p)
        shear = [0] * (p * p)
        for u in range(p):
            for v in range(p):
                translate[point(u, v)] = point((u + 1) % p, v)
                shear[point(u, v)] = point(u, (v + u) % p)
        return build_group(p * p, [[x + 1 for x in translate], [x + 1 for x in shear]], name=f"{p}^(1+2)_{p}")
    if kind == p * p:
        return _regular_metacyclic(p * p, p, 1 + p, 0, f"{p}^(1+2)_{p * p}")
    raise InputError(f"extraspecial({p}, {kind!r}): kind must be {p} or {p * p}")


def wreath_cyclic(p: int) -> PermGroup:
    """C_p wr C_p on p^2 points, order p^(p+1)."""
    if not isprime(p):
        raise InputError(f"wreath_cyclic: {p} is not prime")
    degree = p * p
    base = [0] * degree
    top = [0] * degree
    for block in range(p):
        for i in range(p):
            point = block * p + i
            base[point] = point if block else (i + 1) % p
            top[point] = ((block + 1) % p) * p + i
    return build_group(degree, [[x + 1 for x in base], [x + 1 for x in top]], name=f"{p}wr{p}")


def wreath_symmetric(k: int) -> PermGroup:
    """S_k wr S_k on k^2 points, order (k!)^(k+1)."""
    if k < 2:
        raise InputError(f"wreath_symmetric({k}): need k >= 2")
    degree = k * k
    gens = []
    for swap in ([1, 0] + list(range(2, k)), list(range(1, k)) + [0]):
        inner = list(range(degree))
        outer = list(range(degree))
        for i in range(k):
            inner[i] = swap[i]
            for block in range(k):
                outer[block * k + i] = swap[block] * k + i
        gens.extend([inner, outer])
    return build_group(degree, [[x + 1 for x in g] for g in gens], name=f"S{k}wrS{k}")


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InputError(f"symmetric({n}): n must be positive")
    return _from_sympy(SymmetricGroup(n), f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        raise InputError(f"alternating({n}): need n >= 3")
    return _from_sympy(AlternatingGroup(n), f"A{n}")


def elementary_abelian(p: int, n: int) -> PermGroup:
    """C_p^n as a direct product on n*p points."""
    if not isprime(p) or n < 1:
        raise InputError(f"elementary_abelian({p}, {n}): need p prime and n >= 1")
    return _from_sympy(AbelianGroup(*([p] * n)), f"{p}^{n}")


def linear(kind: str, n: int, p: int) -> PermGroup:
    """SL_n(p) or GL_n(p) acting on the non-zero row vectors of F_p^n."""
    if kind not in ('SL', 'GL') or n < 1 or not isprime(p):
        raise InputError(f"linear({kind!r}, {n}, {p}): need kind SL or GL, n >= 1 and p prime")
    vectors = [v for v in product(range(p), repeat=n) if any(v)]
    index = {v: i for i, v in enumerate(vectors)}

    def acting(matrix: List[List[int]]) -> List[int]:
        images = []
        for v in vectors:
            w = tuple(sum(v[i] * matrix[i][j] for i in range(n)) % p for j in range(n))
            images.append(index[w] + 1)
        return images

    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                matrix = [[int(a == b) for b in range(n)] for a in range(n)]
                matrix[i][j] = 1
                gens.append(acting(matrix))
    if kind == 'GL' and p > 2:
        matrix = [[int(a == b) for b in range(n)] for a in range(n)]
        matrix[0][0] = int(primitive_root(p))
        gens.append(acting(matrix))
    return build_group(len(vectors), gens, name=f"{kind}{n}({p})")


def from_file(path: str) -> PermGroup:
    return parse_group_spec(path)


CONSTRUCTORS: Dict[str, Callable[..., PermGroup]] = {
    'cyclic': cyclic,
    'dihedral': dihedral,
    'quaternion': quaternion,
    'semidihedral': semidihedral,
    'extraspecial': extraspecial,
    'wreath_cyclic': wreath_cyclic,
    'wreath_symmetric': wreath_symmetric,
    'symmetric': symmetric,
    'alternating': alternating,
    'elementary_abelian': elementary_abelian,
    'linear': linear,
    'from_file': from_file,
}


@dataclass
class CorpusEntry:
    """
    A named corpus group.

    Attributes:
        name: Corpus name, used as corpus:NAME
        constructor: Key into CONSTRUCTORS
        params: Positional arguments for the constructor
        expected_order: Order the built group must have
        structure: Required structure_predicates values (p-groups only)
        primes: Primes at which the group is used as a fusion ambient
    """
    name: str
    constructor: str
    params: Tuple[Any, ...]
    expected_order: Optional[int]
    structure: Dict[str, Any] = field(default_factory=dict)
    primes: Tuple[int, ...] = ()

    def describe(self) -> str:
        args = ', '.join(repr(a) for a in self.params)
        return f"{self.constructor}({args})"


CORPUS: List[CorpusEntry] = [
    CorpusEntry('cyclic4', 'cyclic', (4,), 4, {'is_cyclic': True}),
    CorpusEntry('cyclic9', 'cyclic', (9,), 9, {'is_cyclic': True, 'is_extraspecial': False}),
    CorpusEntry('cpxcp-2', 'elementary_abelian', (2, 2), 4, {'is_elementary_abelian': True}),
    CorpusEntry('cpxcp-3', 'elementary_abelian', (3, 2), 9, {'is_elementary_abelian': True}),
    CorpusEntry('cpxcp-5', 'elementary_abelian', (5, 2), 25, {'is_elementary_abelian': True}),
    CorpusEntry('elementary-2-3', 'elementary_abelian', (2, 3), 8, {'is_elementary_abelian': True}),
    CorpusEntry('dihedral4', 'dihedral', (4,), 8,
                {'is_extraspecial': True, 'extraspecial_sign_or_exponent': '+'}, (2,)),
    CorpusEntry('dihedral8', 'dihedral', (8,), 16, {'is_extraspecial': False, 'center_order': 2}, (2,)),
    CorpusEntry('quaternion8', 'quaternion', (8,), 8,
                {'is_extraspecial': True, 'extraspecial_sign_or_exponent': '-'}, (2,)),
    CorpusEntry('quaternion16', 'quaternion', (16,), 16, {'center_order': 2, 'exponent': 8}),
    CorpusEntry('semidihedral16', 'semidihedral', (16,), 16, {'center_order': 2, 'exponent': 8}),
    CorpusEntry('extraspecial-3-27', 'extraspecial', (3, 3), 27,
                {'is_extraspecial': True, 'extraspecial_sign_or_exponent': 3}, (3,)),
    CorpusEntry('extraspecial-3-27-exp9', 'extraspecial', (3, 9), 27,
                {'is_extraspecial': True, 'extraspecial_sign_or_exponent': 9}),
    CorpusEntry('extraspecial-5-125', 'extraspecial', (5, 5), 125,
                {'is_extraspecial': True, 'extraspecial_sign_or_exponent': 5}),
    CorpusEntry('wreath-2', 'wreath_cyclic', (2,), 8, {'is_extraspecial': True}),
    CorpusEntry('wreath-3', 'wreath_cyclic', (3,), 81, {'is_abelian': False, 'exponent': 9}),
    CorpusEntry('symmetric3', 'symmetric', (3,), 6, primes=(2, 3)),
    CorpusEntry('symmetric4', 'symmetric', (4,), 24, primes=(2, 3)),
    CorpusEntry('symmetric5', 'symmetric', (5,), 120, primes=(2,)),
    CorpusEntry('symmetric6', 'symmetric', (6,), 720, primes=(3,)),
    CorpusEntry('symmetric9', 'symmetric', (9,), 362880),
    CorpusEntry('alternating4', 'alternating', (4,), 12, primes=(2, 3)),
    CorpusEntry('alternating5', 'alternating', (5,), 60, primes=(2, 3, 5)),
    CorpusEntry('alternating6', 'alternating', (6,), 360, primes=(2, 3)),
    CorpusEntry('sl2-3', 'linear', ('SL', 2, 3), 24, primes=(2, 3)),
    CorpusEntry('gl2-3', 'linear', ('GL', 2, 3), 48, primes=(2, 3)),
    CorpusEntry('gl3-2', 'linear', ('GL', 3, 2), 168, primes=(2, 7)),
    CorpusEntry('sym3-wr-sym3', 'wreath_symmetric', (3,), 1296, primes=(3,)),
]

CORPUS_BY_NAME: Dict[str, CorpusEntry] = {entry.name: entry for entry in CORPUS}


def corpus_build(entry: CorpusEntry) -> PermGroup:
    """
    Build a corpus group and verify it.

    Raises:
        InputError: On an unknown constructor, unsupported parameters, a
            wrong order or a structure mismatch
    """
    constructor = CONSTRUCTORS.get(entry.constructor)
    if constructor is None:
        raise InputError(f"Unknown corpus constructor '{entry.constructor}'")
    G = constructor(*entry.params)
    G.name = entry.name
    if entry.expected_order is not None and G.order() != entry.expected_order:
        raise InputError(
            f"Corpus group {entry.name} has order {G.order()}, expected {entry.expected_order}"
        )
    if entry.structure:
        info = structure_predicates(G)
        for key, expected in entry.structure.items():
            actual = getattr(info, key)
            if actual != expected:
                raise InputError(f"Corpus group {entry.name}: {key} is {actual!r}, expected {expected!r}")
    return G


def build_named(name: str) -> PermGroup:
    entry = CORPUS_BY_NAME.get(name)
    if entry is None:
        raise InputError(f"Unknown corpus group '{name}' (see 'corpus list')")
    return corpus_build(entry)


def load_group(ref: str) -> PermGroup:
    """Resolve a corpus:NAME or file:PATH reference."""
    kind, value = parse_group_ref(ref)
    if kind == 'corpus':
        return build_named(value)
    return from_file(value)


def fusion_pairs() -> List[Tuple[str, int]]:
    """(name, p) pairs used as realized fusion systems in sweeps."""
    return [(entry.name, p) for entry in CORPUS for p in entry.primes]


def p_group_names() -> List[str]:
    return [entry.name for entry in CORPUS if entry.structure]
