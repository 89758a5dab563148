"""Subgroup lattice: enumeration, conjugacy classes and families of subgroups.

Classes are ordered by subgroup order, ties broken by the lexicographically
smallest member tuple in the orbit, so the trivial class comes first and the
whole group last. Each class is represented by that smallest orbit member.

Usage:
    from burnside.groups import parse_group
    from burnside.lattice import subgroup_classes, family_classes

    cl = subgroup_classes(parse_group("S3"))
    family_classes(cl, "FP").members        # (0, 1, 2)

Family specs: "F1", "Fp(<prime>)", "FP", "Fall".
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

from .errors import FamilyError, MismatchedGroupError
from .groups import Subgroup, check_order_bound, prime_power, structure_label, subgroup_group

logger = logging.getLogger(__name__)

FP_RE = re.compile(r"^Fp\(\s*(\d+)\s*\)$")

# group digest -> SubgroupClassification
_memo = {}
_cache = None


@dataclass(frozen=True, eq=False)
class ConjugacyClass:
    index: int
    representative: Subgroup
    orbit: tuple

    @property
    def order(self):
        return self.representative.order

    @property
    def size(self):
        return len(self.orbit)


@dataclass(frozen=True, eq=False)
class SubgroupClassification:
    group: object
    classes: tuple
    subconjugacy: np.ndarray
    lookup: dict

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    def __iter__(self):
        return iter(self.classes)

    def class_of(self, members):
        """Index of the class containing the subgroup with these members."""
        return self.lookup[frozenset(members)]

    @cached_property
    def orders(self):
        return np.array([c.order for c in self.classes], dtype=np.int64)

    @cached_property
    def labels(self):
        out = []
        for c in self.classes:
            sub, _ = subgroup_group(c.representative)
            out.append(f"{structure_label(sub)}#{c.index}")
        return tuple(out)

    @property
    def subgroup_count(self):
        return sum(c.size for c in self.classes)


@dataclass(frozen=True, eq=False)
class Family:
    classification: SubgroupClassification
    kind: str
    members: tuple
    prime: int | None = None

    def __contains__(self, index):
        return index in self.members

    def __len__(self):
        return len(self.members)

    @property
    def name(self):
        if self.kind == "Fp":
            return f"Fp({self.prime})"
        return self.kind


def configure_cache(cache):
    """Install an on-disk classification cache (or None to disable it)."""
    global _cache
    _cache = cache


def clear_memo():
    _memo.clear()


def enumerate_subgroups(G):
    """All subgroups of G as frozensets: cyclic ones, then one-generator extensions."""
    gens_of = {}
    cyclic = []
    for x in range(G.order):
        C = G.generate([x])
        if C not in gens_of:
            gens_of[C] = (x,)
            cyclic.append((C, x))
    frontier = list(gens_of)
    while frontier:
        found = []
        for H in frontier:
            gens = gens_of[H]
            for C, x in cyclic:
                if C <= H:
                    continue
                J = G.generate(gens + (x,))
                if J not in gens_of:
                    gens_of[J] = gens + (x,)
                    found.append(J)
        frontier = found
    logger.debug("%s: %d subgroups", G.name, len(gens_of))
    return list(gens_of)


def _orbit(G, members):
    arr = np.fromiter(sorted(members), dtype=np.int64)
    conj = G.table[G.table[:, arr], G.inverses[:, None]]
    return {frozenset(row) for row in conj.tolist()}


def _subconjugacy(classes):
    n = len(classes)
    orbit_sets = [[frozenset(o) for o in c.orbit] for c in classes]
    sub = np.zeros((n, n), dtype=bool)
    for i, ci in enumerate(classes):
        rep = ci.representative.member_set
        for j, cj in enumerate(classes):
            if cj.order % ci.order == 0:
                sub[i, j] = any(rep <= K for K in orbit_sets[j])
    sub.flags.writeable = False
    return sub


def _assemble(G, orbits):
    classes = []
    lookup = {}
    for i, orbit in enumerate(orbits):
        orbit = tuple(sorted(tuple(sorted(o)) for o in orbit))
        classes.append(ConjugacyClass(i, Subgroup(G, orbit[0]), orbit))
        for o in orbit:
            lookup[frozenset(o)] = i
    classes = tuple(classes)
    return SubgroupClassification(G, classes, _subconjugacy(classes), lookup)


def classify(G, subgroups):
    """Group a complete list of subgroups into conjugacy classes."""
    remaining = set(subgroups)
    orbits = []
    for H in sorted(subgroups, key=lambda s: (len(s), sorted(s))):
        if H not in remaining:
            continue
        orbit = _orbit(G, H)
        remaining -= orbit
        orbits.append(orbit)
    return _assemble(G, orbits)


def classification_from_orbits(G, orbits, subconjugacy):
    """Rebuild a classification from stored orbits.

    The orbits must partition the subgroups of G into conjugation orbits in
    canonical order, and the matrix must match the one recomputed from them.
    Anything else raises ValueError.
    """
    seen = set()
    keys = []
    for orbit in orbits:
        members = {frozenset(o) for o in orbit}
        if len(members) != len(orbit) or members & seen:
            raise ValueError("stored orbits overlap")
        rep = min(tuple(sorted(o)) for o in members)
        if _orbit(G, rep) != members:
            raise ValueError("stored orbit is not a conjugation orbit")
        seen |= members
        keys.append((len(rep), rep))
    if any(a >= b for a, b in zip(keys, keys[1:])):
        raise ValueError("stored classes are out of order")
    if seen != set(enumerate_subgroups(G)):
        raise ValueError("stored orbits do not cover the subgroups")
    sub = np.array(subconjugacy, dtype=bool)
    if sub.shape != (len(orbits), len(orbits)):
        raise ValueError("stored subconjugacy matrix has the wrong shape")
    cl = _assemble(G, orbits)
    if not np.array_equal(cl.subconjugacy, sub):
        raise ValueError("stored subconjugacy matrix does not match the orbits")
    return cl


def subgroup_classes(G):
    check_order_bound(G.order, None, G.name)
    cl = _memo.get(G.digest)
    if cl is not None:
        return cl
    if _cache is not None and G.spec:
        cl = _cache.load(G.spec, G)
    if cl is None:
        cl = classify(G, enumerate_subgroups(G))
        if _cache is not None and G.spec:
            _cache.store(G.spec, cl)
    logger.debug("%s: %d conjugacy classes", G.name, len(cl))
    _memo[G.digest] = cl
    return cl


def is_subconjugate(classification, h, k):
    return bool(classification.subconjugacy[h, k])


def _check_closed(classification, members):
    inside = np.zeros(len(classification), dtype=bool)
    inside[list(members)] = True
    below = classification.subconjugacy[:, inside].any(axis=1)
    missing = np.flatnonzero(below & ~inside)
    if missing.size:
        raise FamilyError(
            f"class {classification.labels[missing[0]]} lies below the family but is not in it"
        )


def family_classes(classification, spec):
    """Family named by spec: "F1", "Fp(p)", "FP" or "Fall"."""
    spec = spec.strip()
    n = len(classification)
    orders = classification.orders.tolist()
    if spec == "F1":
        kind, prime, members = "F1", None, (0,)
    elif spec == "Fall":
        kind, prime, members = "Fall", None, tuple(range(n))
    elif spec == "FP":
        kind, prime = "FP", None
        members = tuple(i for i in range(n) if prime_power(orders[i]) is not None)
    else:
        m = FP_RE.match(spec)
        if not m:
            raise FamilyError(f"unknown family '{spec}'")
        prime = int(m.group(1))
        if not isprime(prime):
            raise FamilyError(f"{prime} is not prime")
        kind = "Fp"
        members = tuple(i for i in range(n) if prime_power(orders[i]) in (0, prime))
    _check_closed(classification, members)
    return Family(classification, kind, members, prime)


def custom_family(classification, indices):
    members = tuple(sorted(set(int(i) for i in indices)))
    if not members or members[0] < 0 or members[-1] >= len(classification):
        raise FamilyError("class index out of range")
    _check_closed(classification, members)
    return Family(classification, "custom", members)


def family_diagram(classification):
    """F1 followed by Fp(p) for each prime p dividing |G|."""
    primes = sorted(factorint(classification.group.order))
    return [family_classes(classification, "F1")] + [
        family_classes(classification, f"Fp({p})") for p in primes
    ]


def require_same(classification, other):
    if classification is not other and classification.group.digest != other.group.digest:
        raise MismatchedGroupError(
            f"{classification.group.name} and {other.group.name} are different classifications"
        )
