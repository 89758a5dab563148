"""Finite groups as exact multiplication tables.

Elements are the indices 0..order-1 and the product is a lookup in an
order x order table. Every group built here passes the Latin-square,
identity, inverse and associativity checks before it is handed out.

Group spec grammar:
    NAME    := "C"n | "D"n | "S"n | "A"n | "Q8" | "V4"
    PRODUCT := NAME ("x" NAME)*
    PERM    := "perm(" degree "):" generator ("," generator)*

A generator is a product of cycles on 1-based points, e.g. "(1 2)(3 4)".
D<n> is the dihedral group of order 2n, so D4 has order 8.

Element ordering:
    C<n>   residues 0..n-1
    D<n>   r^a s^b at index a + n*b
    S<n>   permutations of 0..n-1 in lexicographic order, A<n> the even ones
    Q8     1, -1, i, -i, j, -j, k, -k
    perm   breadth-first closure from the identity, generators in input order
    GxK    (g, k) at index g*|K| + k
Permutations compose left to right: (x*y)(i) = y(x(i)).
"""
import hashlib
import itertools
import logging
import math
import re
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from sympy import factorint
from sympy.combinatorics import Permutation

from .config import get_config
from .errors import (
    GroupAxiomError,
    GroupSpecError,
    HomomorphismError,
    NotNormalError,
    NotSubgroupError,
    OrderBoundError,
)

logger = logging.getLogger(__name__)

NAME_RE = re.compile(r"^(?:(?P<kind>[CDSA])(?P<n>\d+)|(?P<fixed>Q8|V4))$")
PERM_RE = re.compile(r"^perm\(\s*(?P<degree>\d+)\s*\)\s*:(?P<body>.*)$", re.S)
CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    table: np.ndarray
    identity: int
    inverses: np.ndarray
    perm_degree: int | None = None
    perm_generators: tuple | None = None
    spec: str | None = None

    @property
    def order(self):
        return int(self.table.shape[0])

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverses[a])

    def conj(self, g, x):
        """g x g^-1"""
        return int(self.table[self.table[g, x], self.inverses[g]])

    def conjugate_set(self, g, members):
        arr = np.fromiter(members, dtype=np.int64)
        return frozenset(self.table[self.table[g, arr], self.inverses[g]].tolist())

    def generate(self, gens):
        """Members of the subgroup generated by gens."""
        gens = np.asarray(list(gens), dtype=np.int64)
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size and gens.size:
            cand = np.unique(self.table[np.ix_(frontier, gens)])
            cand = cand[~seen[cand]]
            seen[cand] = True
            frontier = cand
        return frozenset(np.flatnonzero(seen).tolist())

    @cached_property
    def element_orders(self):
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        power = idx.copy()
        for k in range(1, n + 1):
            hit = (power == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            power = self.table[power, idx]
        return orders

    def element_order(self, a):
        return int(self.element_orders[a])

    @cached_property
    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def digest(self):
        return hashlib.sha1(self.table.astype(np.int64).tobytes()).hexdigest()

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Members of a subgroup of `parent`; equal when the tables and members agree."""

    parent: FiniteGroup
    members: tuple

    @property
    def order(self):
        return len(self.members)

    @cached_property
    def member_set(self):
        return frozenset(self.members)

    def __contains__(self, x):
        return x in self.member_set

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent.digest == other.parent.digest and self.member_set == other.member_set

    def __hash__(self):
        return hash((self.parent.digest, self.member_set))

    def __repr__(self):
        return f"Subgroup({self.parent.name}, order={self.order})"


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple

    def __call__(self, x):
        return self.images[x]

    @cached_property
    def kernel(self):
        e = self.target.identity
        return frozenset(x for x, y in enumerate(self.images) if y == e)

    @property
    def is_injective(self):
        return len(set(self.images)) == len(self.images)


@dataclass(frozen=True)
class ProductGroup:
    group: FiniteGroup
    embed_left: GroupHom
    embed_right: GroupHom
    proj_left: GroupHom
    proj_right: GroupHom


def check_order_bound(order, bound, what="group"):
    if bound is None:
        bound = get_config().order_bound
    if order > bound:
        raise OrderBoundError(order, bound, what)


def _check_associative(name, table):
    cfg = get_config()
    n = table.shape[0]
    if n <= cfg.exhaustive_max_order:
        idx = np.arange(n)
        left = table[table[:, :, None], idx[None, None, :]]
        right = table[idx[:, None, None], table[None, :, :]]
        ok = np.array_equal(left, right)
    else:
        rng = np.random.default_rng(cfg.seed)
        a, b, c = rng.integers(0, n, size=(3, cfg.samples_per_element * n))
        ok = np.array_equal(table[table[a, b], c], table[a, table[b, c]])
    if not ok:
        raise GroupAxiomError(f"{name}: multiplication is not associative")


def make_group(name, table, perm_degree=None, perm_generators=None, spec=None):
    """Validate a multiplication table and wrap it as an immutable FiniteGroup."""
    table = np.array(table, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise GroupAxiomError(f"{name}: table must be a non-empty square matrix")
    n = table.shape[0]
    idx = np.arange(n)
    if not (np.array_equal(np.sort(table, axis=1), np.broadcast_to(idx, (n, n)))
            and np.array_equal(np.sort(table, axis=0), np.broadcast_to(idx[:, None], (n, n)))):
        raise GroupAxiomError(f"{name}: table is not a Latin square")
    ids = [e for e in range(n)
           if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx)]
    if not ids:
        raise GroupAxiomError(f"{name}: no two-sided identity")
    e = ids[0]
    inverses = np.argmax(table == e, axis=1)
    if not np.all(table[inverses, idx] == e):
        raise GroupAxiomError(f"{name}: left and right inverses differ")
    _check_associative(name, table)
    table.flags.writeable = False
    inverses.flags.writeable = False
    return FiniteGroup(name, table, e, inverses, perm_degree, perm_generators, spec)


def make_hom(source, target, images):
    """Validate images as a homomorphism source -> target."""
    img = np.asarray(images, dtype=np.int64)
    if img.shape != (source.order,) or img.min(initial=0) < 0 or img.max(initial=0) >= target.order:
        raise HomomorphismError("image array does not match the source and target")
    if img[source.identity] != target.identity:
        raise HomomorphismError("identity is not sent to the identity")
    cfg = get_config()
    n = source.order
    if n <= cfg.exhaustive_max_order:
        ok = np.array_equal(img[source.table], target.table[img[:, None], img[None, :]])
    else:
        rng = np.random.default_rng(cfg.seed)
        a, b = rng.integers(0, n, size=(2, cfg.samples_per_element * n))
        ok = np.array_equal(img[source.table[a, b]], target.table[img[a], img[b]])
    if not ok:
        raise HomomorphismError(f"map {source.name} -> {target.name} is not multiplicative")
    return GroupHom(source, target, tuple(int(x) for x in img))


def make_subgroup(group, members):
    arr = np.array(sorted(set(int(m) for m in members)), dtype=np.int64)
    if arr.size == 0 or group.identity not in arr:
        raise NotSubgroupError("subgroup must contain the identity")
    if arr[0] < 0 or arr[-1] >= group.order:
        raise NotSubgroupError("member index out of range")
    if not np.isin(group.table[np.ix_(arr, arr)], arr).all():
        raise NotSubgroupError("members are not closed under multiplication")
    if not np.isin(group.inverses[arr], arr).all():
        raise NotSubgroupError("members are not closed under inversion")
    if group.order % arr.size:
        raise NotSubgroupError("subgroup order does not divide the group order")
    return Subgroup(group, tuple(arr.tolist()))


def generated_subgroup(group, gens):
    return Subgroup(group, tuple(sorted(group.generate(gens))))


def trivial_subgroup(group):
    return Subgroup(group, (group.identity,))


def whole_group(group):
    return Subgroup(group, tuple(range(group.order)))


def _require_parent(group, H):
    # groups with identical tables share subgroups
    if H.parent is not group and H.parent.digest != group.digest:
        raise NotSubgroupError(f"subgroup of {H.parent.name} is not a subgroup of {group.name}")


def _require_subgroup(group, H):
    _require_parent(group, H)
    make_subgroup(group, H.members)


# named groups

def cyclic_group(n):
    idx = np.arange(n)
    return make_group(f"C{n}", (idx[:, None] + idx[None, :]) % n)


def dihedral_group(n):
    idx = np.arange(2 * n)
    a, b = idx % n, idx // n
    sign = 1 - 2 * b
    rot = (a[:, None] + sign[:, None] * a[None, :]) % n
    ref = (b[:, None] + b[None, :]) % 2
    return make_group(f"D{n}", rot + n * ref)


def _permutation_group(name, perms, degree, generators=None):
    arrs = np.array(perms, dtype=np.int64).reshape(len(perms), degree)
    index = {tuple(row): i for i, row in enumerate(arrs.tolist())}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        # (x_i * y_j)(k) = y_j(x_i(k))
        rows = arrs[:, arrs[i]]
        table[i] = [index[tuple(r)] for r in rows.tolist()]
    return make_group(name, table, perm_degree=degree, perm_generators=generators)


def symmetric_group(n):
    return _permutation_group(f"S{n}", list(itertools.permutations(range(n))), n)


def alternating_group(n):
    perms = [p for p in itertools.permutations(range(n)) if Permutation(list(p)).is_even]
    return _permutation_group(f"A{n}", perms, n)


# quaternion units 1, i, j, k as 0..3; (sign, unit) at index 2*unit + sign
_UNIT_PRODUCTS = {
    (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
    (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
    (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
    (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
}


def quaternion_group():
    table = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            sign, unit = _UNIT_PRODUCTS[(x // 2, y // 2)]
            table[x, y] = 2 * unit + (sign + x % 2 + y % 2) % 2
    return make_group("Q8", table)


def _named_order(kind, n):
    if kind == "C":
        return n
    if kind == "D":
        return 2 * n
    if kind == "S":
        return math.factorial(n)
    return max(1, math.factorial(n) // 2)


def _named_group(token, bound):
    m = NAME_RE.match(token)
    if not m:
        raise GroupSpecError(f"unknown group name '{token}'")
    if m.group("fixed") == "Q8":
        return quaternion_group()
    if m.group("fixed") == "V4":
        return replace(direct_product(cyclic_group(2), cyclic_group(2), bound).group, name="V4")
    kind, n = m.group("kind"), int(m.group("n"))
    if n < 1:
        raise GroupSpecError(f"'{token}': index must be at least 1")
    check_order_bound(_named_order(kind, n), bound, token)
    return {"C": cyclic_group, "D": dihedral_group,
            "S": symmetric_group, "A": alternating_group}[kind](n)


def _parse_generator(text, degree):
    text = text.strip()
    cycles = CYCLE_RE.findall(text)
    if not cycles or CYCLE_RE.sub("", text).strip():
        raise GroupSpecError(f"cannot parse generator '{text}'")
    parsed = []
    for cycle in cycles:
        try:
            points = [int(p) - 1 for p in cycle.split()]
        except ValueError as e:
            raise GroupSpecError(f"non-integer point in cycle '({cycle})'") from e
        if not points:
            raise GroupSpecError("empty cycle '()'")
        if len(set(points)) != len(points) or min(points) < 0 or max(points) >= degree:
            raise GroupSpecError(f"cycle '({cycle})' is not a cycle on 1..{degree}")
        parsed.append(points)
    return Permutation(parsed, size=degree)


def _parse_perm(spec, m, bound):
    degree = int(m.group("degree"))
    if degree < 1:
        raise GroupSpecError("permutation degree must be at least 1")
    body = m.group("body").strip()
    if not body:
        raise GroupSpecError("empty generator set")
    gens = [_parse_generator(part, degree) for part in body.split(",")]
    if bound is None:
        bound = get_config().order_bound
    identity = Permutation(list(range(degree)))
    elements = [identity]
    seen = {tuple(identity.array_form)}
    i = 0
    while i < len(elements):
        for g in gens:
            y = elements[i] * g
            key = tuple(y.array_form)
            if key not in seen:
                seen.add(key)
                elements.append(y)
                if len(elements) > bound:
                    raise OrderBoundError(len(elements), bound, spec)
        i += 1
    logger.debug("%s: closure has %d elements", spec, len(elements))
    return _permutation_group(
        spec, [p.array_form for p in elements], degree,
        generators=tuple(tuple(g.array_form) for g in gens),
    )


def parse_group(spec, order_bound=None):
    """Build the group named by a spec string (see the module docstring)."""
    if not isinstance(spec, str) or not spec.strip():
        raise GroupSpecError("empty group spec")
    text = spec.strip()
    m = PERM_RE.match(text)
    if m:
        group = _parse_perm(text, m, order_bound)
        return replace(group, spec=text)
    text = re.sub(r"\s+", "", text)
    tokens = text.split("x")
    for token in tokens:
        if not NAME_RE.match(token):
            raise GroupSpecError(f"cannot parse '{spec}': bad factor '{token}'")
    total = 1
    for token in tokens:
        mm = NAME_RE.match(token)
        if mm.group("fixed"):
            total *= 8 if mm.group("fixed") == "Q8" else 4
        else:
            total *= _named_order(mm.group("kind"), int(mm.group("n")))
    check_order_bound(total, order_bound, text)
    group = _named_group(tokens[0], order_bound)
    for token in tokens[1:]:
        group = direct_product(group, _named_group(token, order_bound), order_bound).group
    return replace(group, name=text, spec=text)


def direct_product(G, K, order_bound=None):
    """G x K with both coordinate embeddings and projections."""
    check_order_bound(G.order * K.order, order_bound, f"{G.name}x{K.name}")
    m = K.order
    idx = np.arange(G.order * m)
    gi, ki = idx // m, idx % m
    table = G.table[gi[:, None], gi[None, :]] * m + K.table[ki[:, None], ki[None, :]]
    spec = f"{G.spec}x{K.spec}" if G.spec and K.spec else None
    P = make_group(f"{G.name}x{K.name}", table, spec=spec)
    return ProductGroup(
        group=P,
        embed_left=make_hom(G, P, [g * m + K.identity for g in range(G.order)]),
        embed_right=make_hom(K, P, [G.identity * m + k for k in range(m)]),
        proj_left=make_hom(P, G, gi),
        proj_right=make_hom(P, K, ki),
    )


def _conjugates(G, H):
    """C[g, i] = g h_i g^-1 for every g in G."""
    arr = np.asarray(H.members, dtype=np.int64)
    return arr, G.table[G.table[:, arr], G.inverses[:, None]]


def normalizer(G, H):
    _require_subgroup(G, H)
    arr, conj = _conjugates(G, H)
    keep = np.isin(conj, arr).all(axis=1)
    return Subgroup(G, tuple(np.flatnonzero(keep).tolist()))


def is_normal(G, N):
    _require_subgroup(G, N)
    arr, conj = _conjugates(G, N)
    return bool(np.isin(conj, arr).all())


def quotient_group(G, N):
    """G/N and the projection; cosets are numbered by their first element index."""
    _require_subgroup(G, N)
    arr, conj = _conjugates(G, N)
    inside = np.isin(conj, arr)
    if not inside.all():
        g, i = np.argwhere(~inside)[0]
        raise NotNormalError(witness=int(g), element=int(arr[i]))
    label = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if label[g] < 0:
            label[G.table[g, arr]] = len(reps)
            reps.append(g)
    reps = np.asarray(reps, dtype=np.int64)
    table = label[G.table[np.ix_(reps, reps)]]
    Q = make_group(f"{G.name}/{N.order}", table)
    return Q, make_hom(G, Q, label)


def subgroup_group(H):
    """H as a group in its own right, with the inclusion into its parent."""
    G = H.parent
    arr = np.asarray(H.members, dtype=np.int64)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[arr] = np.arange(arr.size)
    S = make_group(f"{G.name}[{H.order}]", pos[G.table[np.ix_(arr, arr)]])
    return S, make_hom(S, G, arr)


def commutator_subgroup(G):
    idx = np.arange(G.order)
    ab = G.table[idx[:, None], idx[None, :]]
    comm = G.table[G.table[ab, G.inverses[:, None]], G.inverses[None, :]]
    return generated_subgroup(G, np.unique(comm).tolist())


def abelian_invariants(A):
    """Invariant factors d1 | d2 | ... (each > 1) of an abelian group."""
    if not A.is_abelian:
        raise GroupAxiomError(f"{A.name} is not abelian")
    orders = A.element_orders
    per_prime = []
    for p, e in factorint(A.order).items():
        # number of cyclic factors of exponent >= k is log_p of a ratio of counts
        logs = [round(math.log(int(np.sum(p ** k % orders == 0)), p)) for k in range(e + 1)]
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)]
        exps = []
        for k in range(e, 0, -1):
            exact = at_least[k - 1] - (at_least[k] if k < e else 0)
            exps.extend([k] * exact)
        per_prime.append((p, exps))
    width = max((len(exps) for _, exps in per_prime), default=0)
    factors = []
    for j in range(width):
        d = 1
        for p, exps in per_prime:
            if j < len(exps):
                d *= p ** exps[j]
        factors.append(d)
    return sorted(factors)


def abelianization(G):
    Q, _ = quotient_group(G, commutator_subgroup(G))
    return abelian_invariants(Q)


def structure_label(G):
    """Short structure descriptor for display; not a certified isomorphism type."""
    if G.order == 1:
        return "1"
    if G.is_abelian:
        return "x".join(f"C{d}" for d in abelian_invariants(G))
    return f"NA{G.order}"


def prime_power(n):
    """The prime p if n is a positive power of p, 0 if n == 1, None otherwise."""
    if n == 1:
        return 0
    f = factorint(n)
    if len(f) == 1:
        return next(iter(f))
    return None
