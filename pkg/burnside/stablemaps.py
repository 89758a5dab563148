"""Pairs (H, phi), Weyl groups and the wedge decompositions of stable maps BG -> BK.

A pair is a subgroup H of G with a homomorphism phi: H -> K, encoded by its
graph {(h, phi(h))} inside G x K. Two pairs are conjugate exactly when their
graphs are conjugate in G x K, so pair classes are graph orbits. Within a
class the representative has H the class representative of the lattice and
the smallest image tuple.

Decomposition kinds:
    full                    pairs with H of prime power order, W completed at p(H)
    p-local                 symbolic leading smash term plus nontrivial p-group pairs
    dual                    K trivial, indexed by subgroup classes of G
    fixed-point-splitting   pairs with H in a family, no completion

Each p-completed summand is read as the p-completion of the suspension
spectrum, so it contributes one Z_p to pi_0 (NOTE below).
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

from .config import get_config
from .errors import DecompositionKindError, FamilyError
from .groups import (
    Subgroup,
    abelianization,
    direct_product,
    make_hom,
    normalizer,
    parse_group,
    prime_power,
    quotient_group,
    subgroup_group,
)
from .lattice import subgroup_classes
from .modules import (
    UNRESOLVED,
    bundle_module,
    classify_completion,
    closed_form_completion,
    make_descriptor,
    quotient_tower,
)
from .ring import augmentation_ideal

logger = logging.getLogger(__name__)

NOTE = (
    "p-completed summands are read as p-completions of suspension spectra; "
    "each contributes Z_p to pi_0"
)

# (G digest, K digest) -> PairClassification
_pairs = {}


def _generating_sequence(H):
    gens = []
    span = {H.identity}
    for x in range(H.order):
        if x not in span:
            gens.append(x)
            span = H.generate(gens)
    return gens


def _extend(H, K, gens, imgs):
    """Images on <gens> forced by gens -> imgs, or None if inconsistent."""
    f = {H.identity: K.identity}
    queue = [H.identity]
    for x in queue:
        fx = f[x]
        for g, y in zip(gens, imgs):
            z = H.mul(x, g)
            w = K.mul(fx, y)
            if z in f:
                if f[z] != w:
                    return None
            else:
                f[z] = w
                queue.append(z)
    return f


def homomorphisms(H, K):
    """All homomorphisms H -> K as image tuples, sorted."""
    gens = _generating_sequence(H)
    k_orders = K.element_orders
    choices = [
        [y for y in range(K.order) if H.element_order(g) % int(k_orders[y]) == 0]
        for g in gens
    ]
    found = []

    def search(i, imgs):
        f = _extend(H, K, gens[:i], imgs)
        if f is None:
            return
        if i == len(gens):
            found.append(make_hom(H, K, [f[x] for x in range(H.order)]).images)
            return
        for y in choices[i]:
            search(i + 1, imgs + [y])

    search(0, [])
    found.sort()
    return found


@dataclass(frozen=True, eq=False)
class BundlePairClass:
    index: int
    source: object
    target: object
    h_class: int
    subgroup: Subgroup
    phi_images: tuple
    graph: Subgroup
    label: str

    @property
    def prime(self):
        """p(H): 0 for H trivial, the prime for a p-group, None otherwise."""
        return prime_power(self.subgroup.order)

    @property
    def is_prime_power(self):
        return self.prime is not None

    @cached_property
    def phi(self):
        source, _ = subgroup_group(self.subgroup)
        return make_hom(source, self.target, self.phi_images)


@dataclass(frozen=True, eq=False)
class PairClassification:
    source: object
    target: object
    product: object
    pairs: tuple
    lookup: dict
    classification: object


def _graph_orbit(P, members):
    arr = np.asarray(sorted(members), dtype=np.int64)
    conj = P.table[P.table[:, arr], P.inverses[:, None]]
    return {frozenset(row) for row in conj.tolist()}


def pair_classification(G, K):
    key = (G.digest, K.digest)
    cl = subgroup_classes(G)
    cached = _pairs.get(key)
    if cached is not None and cached.classification is cl:
        return cached
    prod = direct_product(G, K)
    P = prod.group
    m = K.order
    pairs = []
    lookup = {}
    for ch in cl:
        H = ch.representative
        Hg, _ = subgroup_group(H)
        for images in homomorphisms(Hg, K):
            graph = frozenset(h * m + k for h, k in zip(H.members, images))
            if graph in lookup:
                continue
            index = len(pairs)
            for member in _graph_orbit(P, graph):
                lookup[member] = index
            phi_label = "triv" if all(k == K.identity for k in images) else "[" + ",".join(map(str, images)) + "]"
            pairs.append(BundlePairClass(
                index, G, K, ch.index, H, tuple(images),
                Subgroup(P, tuple(sorted(graph))), f"({cl.labels[ch.index]},{phi_label})",
            ))
    logger.debug("%s, %s: %d pair classes", G.name, K.name, len(pairs))
    result = PairClassification(G, K, prod, tuple(pairs), lookup, cl)
    _pairs[key] = result
    return result


def pair_classes(G, K):
    return list(pair_classification(G, K).pairs)


def weyl_group(pair):
    """N(Delta)/Delta in G x K; G x K itself when H is trivial."""
    P = pair.graph.parent
    if pair.subgroup.order == 1:
        return P
    N = normalizer(P, pair.graph)
    Ng, incl = subgroup_group(N)
    pos = {x: i for i, x in enumerate(incl.images)}
    delta = Subgroup(Ng, tuple(sorted(pos[x] for x in pair.graph.members)))
    W, _ = quotient_group(Ng, delta)
    return W


@dataclass(frozen=True, eq=False)
class WedgeSummand:
    pair: BundlePairClass
    weyl: object
    prime: int | None
    completed: bool = True

    @cached_property
    def weyl_abelianization(self):
        return abelianization(self.weyl)

    @property
    def structure(self):
        return {"order": self.weyl.order, "abelianization": self.weyl_abelianization}


@dataclass(frozen=True)
class WedgeDecomposition:
    kind: str
    source: str
    target: str
    summands: tuple
    prime: int | None = None
    leading: tuple = ()
    note: str = NOTE


def _summands(pairs, prime_of, completed=True):
    return tuple(WedgeSummand(p, weyl_group(p), prime_of(p), completed) for p in pairs)


def _require_prime(p):
    if not isprime(p):
        raise FamilyError(f"{p} is not prime")


def split_leading_term(G, K):
    """The W(1) summand rewritten as BK plus one smash term per prime of |G|."""
    terms = [f"Σ∞B{K.name}₊"]
    for p in sorted(factorint(G.order)):
        terms.append(f"Σ∞(B{G.name}^∧_{p})₊ ∧ Σ∞B{K.name}₊")
    return tuple(terms)


def fixed_point_splitting(G, K, F):
    pairs = [p for p in pair_classes(G, K) if p.h_class in F]
    return WedgeDecomposition(
        "fixed-point-splitting", G.name, K.name, _summands(pairs, lambda p: None, False),
        note="",
    )


def function_decomposition(G, K):
    pairs = [p for p in pair_classes(G, K) if p.is_prime_power]
    return WedgeDecomposition(
        "full", G.name, K.name, _summands(pairs, lambda p: p.prime),
        leading=split_leading_term(G, K),
    )


def p_local_decomposition(G, K, p):
    _require_prime(p)
    pairs = [q for q in pair_classes(G, K) if q.prime == p]
    leading = (f"Σ∞(B{G.name}^∧_{p})₊ ∧ Σ∞B{K.name}₊",)
    return WedgeDecomposition(
        "p-local", G.name, K.name, _summands(pairs, lambda q: p), prime=p, leading=leading,
    )


def dual_decomposition(G, p=None):
    """Summands over subgroup classes of G with W = N_G(H)/H."""
    trivial = parse_group("C1")
    pairs = pair_classes(G, trivial)
    if p is None:
        chosen = _summands([q for q in pairs if q.is_prime_power], lambda q: q.prime)
    else:
        _require_prime(p)
        chosen = _summands([q for q in pairs if q.prime in (0, p)], lambda q: p)
    return WedgeDecomposition("dual", G.name, trivial.name, chosen, prime=p)


def pi0_descriptor(d):
    """One Z per summand with p = 0, one Z_p per p-completed summand."""
    if d.kind not in ("full", "dual"):
        raise DecompositionKindError(f"pi_0 is not computed for {d.kind} decompositions")
    free = sum(1 for s in d.summands if s.prime == 0)
    padic = {}
    for s in d.summands:
        if s.prime:
            padic[s.prime] = padic.get(s.prime, 0) + 1
    return make_descriptor(free, padic)


@dataclass(frozen=True)
class CrosscheckReport:
    source: str
    target: str
    depth: int
    decomposition: object
    closed_form: object
    tower: object
    levels: tuple = field(default=(), repr=False)

    @property
    def status(self):
        if self.tower.confidence == UNRESOLVED:
            return "unresolved"
        if self.decomposition.same_shape(self.closed_form) and self.decomposition.same_shape(self.tower):
            return "pass"
        return "mismatch"


def crosscheck(G, K, depth=None, escalate=True):
    """Decomposition, closed form and tower oracle for the bundle module A(G, K)."""
    cfg = get_config()
    depth = depth or cfg.depth
    decomposition = pi0_descriptor(function_decomposition(G, K))
    M = bundle_module(G, K)
    closed = closed_form_completion(M)
    J = augmentation_ideal(M.ring)
    tower = quotient_tower(M, J, depth)
    oracle = classify_completion(tower)
    if oracle.confidence == UNRESOLVED and escalate and cfg.escalated_depth > depth:
        logger.info("%s, %s: unresolved at depth %d, retrying at %d",
                    G.name, K.name, depth, cfg.escalated_depth)
        depth = cfg.escalated_depth
        tower = quotient_tower(M, J, depth)
        oracle = classify_completion(tower)
    report = CrosscheckReport(G.name, K.name, depth, decomposition, closed, oracle, tower.levels)
    if report.status == "unresolved":
        logger.warning("%s, %s: tower still unresolved at depth %d; raise --depth",
                       G.name, K.name, depth)
    return report

