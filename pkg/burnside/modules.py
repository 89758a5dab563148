"""Finitely generated A(G)-modules and their completions at an ideal of A(G).

A module is a labelled basis plus one integer matrix per subgroup class K,
the action of [G/K]; column j of that matrix is [G/K] * b_j. Labels carry the
isotropy class of the basis element (and the pair for bundle modules), which
is what family restrictions and the closed-form completion read.

Completion is never computed as a limit. quotient_tower builds M/J^nM exactly
with Hermite normal forms over ZZ, classify_completion reads the stable shape
off the last few levels, and closed_form_completion counts labels. The two
must agree.

Usage:
    from burnside.groups import parse_group
    from burnside.ring import augmentation_ideal
    from burnside.modules import regular_module, quotient_tower, classify_completion

    M = regular_module(parse_group("S3"))
    tower = quotient_tower(M, augmentation_ideal(M.ring), 12)
    str(classify_completion(tower))          # Z ⊕ Z_2 ⊕ Z_3
"""
import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sympy import ZZ, factorint, isprime, multiplicity
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, invariant_factors

from .config import get_config
from .errors import (
    ClosureViolation,
    ConsistencyError,
    FamilyError,
    MismatchedGroupError,
    ModuleStructureError,
    TowerDepthError,
    UnlabeledBasisError,
)
from .groups import prime_power
from .lattice import family_classes, family_diagram, require_same
from .ring import augmentation_ideal, burnside_ring

logger = logging.getLogger(__name__)

PROVED = "proved-stable"
HEURISTIC = "heuristic"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class BasisLabel:
    isotropy: int | None
    text: str
    pair: tuple | None = None


@dataclass(frozen=True, eq=False)
class GModule:
    ring: object
    labels: tuple
    actions: tuple
    name: str = ""

    @property
    def rank(self):
        return len(self.labels)

    @property
    def classification(self):
        return self.ring.classification

    @property
    def group(self):
        return self.ring.group

    def action(self, x):
        """Matrix of a Burnside ring element acting on the module."""
        if x.ring is not self.ring:
            raise MismatchedGroupError("ring element and module over different groups")
        out = np.zeros((self.rank, self.rank), dtype=object)
        for c, A in zip(x.coefficients, self.actions):
            if c:
                out += int(c) * A.astype(object)
        return out


def _freeze(A):
    A = np.array(A, dtype=np.int64)
    A.flags.writeable = False
    return A


def check_module(M):
    """Identity action of [G/G], commuting actions and ring-module compatibility."""
    n = len(M.actions)
    if n != M.ring.rank:
        raise ModuleStructureError(f"{M.name}: expected {M.ring.rank} action matrices, got {n}")
    if M.rank and not np.array_equal(M.actions[-1], np.eye(M.rank, dtype=np.int64)):
        raise ModuleStructureError(f"{M.name}: [G/G] does not act as the identity")
    C = M.ring.constants
    for i in range(n):
        for j in range(i, n):
            prod = M.actions[i] @ M.actions[j]
            if not np.array_equal(prod, M.actions[j] @ M.actions[i]):
                raise ModuleStructureError(f"{M.name}: actions of classes {i} and {j} do not commute")
            expected = np.zeros_like(prod)
            for k in np.flatnonzero(C[i, j]):
                expected += C[i, j, k] * M.actions[k]
            if not np.array_equal(prod, expected):
                raise ModuleStructureError(
                    f"{M.name}: action of the product of classes {i} and {j} is not the product of actions"
                )


def zero_module(ring):
    empty = _freeze(np.zeros((0, 0), dtype=np.int64))
    return GModule(ring, (), (empty,) * ring.rank, "0")


def regular_module(G):
    ring = burnside_ring(G)
    labels = tuple(BasisLabel(i, text) for i, text in enumerate(ring.classification.labels))
    actions = tuple(_freeze(ring.constants[k].T) for k in range(ring.rank))
    M = GModule(ring, labels, actions, f"A({G.name})")
    check_module(M)
    return M


def bundle_module(G, K):
    """A(G, K): basis the pair classes, [G/L] acting through L\\G/H double cosets."""
    from .stablemaps import pair_classification

    pc = pair_classification(G, K)
    ring = burnside_ring(G)
    m = K.order
    r = len(pc.pairs)
    actions = []
    for ck in ring.classification:
        l_arr = np.asarray(ck.representative.members, dtype=np.int64)
        l_set = ck.representative.member_set
        A = np.zeros((r, r), dtype=np.int64)
        for j, pair in enumerate(pc.pairs):
            h_arr = np.asarray(pair.subgroup.members, dtype=np.int64)
            phi = dict(zip(pair.subgroup.members, pair.phi_images))
            seen = np.zeros(G.order, dtype=bool)
            for g in range(G.order):
                if seen[g]:
                    continue
                seen[G.table[G.table[l_arr, g][:, None], h_arr[None, :]].ravel()] = True
                ginv = G.inv(g)
                S = l_set & G.conjugate_set(g, h_arr)
                graph = frozenset(s * m + phi[G.conj(ginv, s)] for s in S)
                A[pc.lookup[graph], j] += 1
        actions.append(_freeze(A))
    labels = tuple(
        BasisLabel(p.h_class, p.label, (p.h_class, p.phi_images)) for p in pc.pairs
    )
    M = GModule(ring, labels, tuple(actions), f"A({G.name},{K.name})")
    check_module(M)
    return M


def _require_labels(M):
    if any(lab.isotropy is None for lab in M.labels):
        raise UnlabeledBasisError(f"{M.name}: basis has elements without isotropy labels")


def _submodule(M, keep, name):
    keep = list(keep)
    actions = tuple(_freeze(A[np.ix_(keep, keep)]) for A in M.actions)
    return GModule(M.ring, tuple(M.labels[j] for j in keep), actions, name)


def restrict_to_family(M, F):
    """Span of the basis elements with isotropy in F, and its inclusion matrix."""
    _require_labels(M)
    require_same(M.classification, F.classification)
    keep = [j for j, lab in enumerate(M.labels) if lab.isotropy in F]
    outside = [j for j in range(M.rank) if j not in set(keep)]
    for k, A in enumerate(M.actions):
        if outside and keep and A[np.ix_(outside, keep)].any():
            raise ClosureViolation(
                f"{M.name}: action of class {k} leaves the span of {F.name}"
            )
    inclusion = np.zeros((M.rank, len(keep)), dtype=np.int64)
    inclusion[keep, np.arange(len(keep))] = 1
    return _submodule(M, keep, f"{M.name}[{F.name}]"), inclusion


def family_quotient(M, Fb, Fa):
    """M[Fb] modulo M[Fa], on the basis elements with isotropy in Fb minus Fa."""
    require_same(Fb.classification, Fa.classification)
    if not set(Fa.members) <= set(Fb.members):
        raise FamilyError(f"{Fa.name} is not contained in {Fb.name}")
    restrict_to_family(M, Fb)
    restrict_to_family(M, Fa)
    keep = [j for j, lab in enumerate(M.labels) if lab.isotropy in Fb and lab.isotropy not in Fa]
    return _submodule(M, keep, f"{M.name}[{Fb.name},{Fa.name}]")


# quotient towers

def _domain(A):
    rows = [[ZZ(int(v)) for v in row] for row in np.asarray(A).tolist()]
    return DomainMatrix(rows, A.shape, ZZ)


def _span(mat):
    """Hermite basis of the column lattice, None for the zero lattice."""
    if mat.shape[1] == 0 or mat.is_zero_matrix:
        return None
    return hermite_normal_form(mat)


def _contains(outer, inner):
    if inner is None:
        return True
    if outer is None:
        return False
    return _span(outer.hstack(inner)) == outer


def _structure(span, r):
    if span is None:
        return r, ()
    factors = [abs(int(d)) for d in invariant_factors(span) if d]
    return r - len(factors), tuple(sorted(d for d in factors if d > 1))


@dataclass(frozen=True)
class TowerLevel:
    n: int
    free: int
    torsion: tuple

    def __str__(self):
        return describe(self.free, {}, self.torsion)


@dataclass(frozen=True, eq=False)
class QuotientTower:
    module: GModule
    ideal: object
    levels: tuple

    @property
    def depth(self):
        return len(self.levels)


def quotient_tower(M, J, depth):
    """M/J^nM for n = 1..depth, exact over ZZ."""
    if depth < 1:
        raise TowerDepthError("tower depth must be at least 1")
    require_same(M.classification, J.ring.classification)
    r = M.rank
    gens = [_domain(M.action(x)) for x in J.generators] if r else []
    current = _domain(np.eye(r, dtype=np.int64)) if r else None
    levels = []
    for n in range(1, depth + 1):
        span = None
        if current is not None and gens:
            images = [g.matmul(current) for g in gens]
            span = _span(images[0].hstack(*images[1:]) if len(images) > 1 else images[0])
        if n > 1 and not _contains(current, span):
            raise ConsistencyError(f"{M.name}: J^{n}M is not contained in J^{n - 1}M")
        free, torsion = _structure(span, r)
        levels.append(TowerLevel(n, free, torsion))
        logger.debug("%s: level %d is %s", M.name, n, levels[-1])
        current = span
    return QuotientTower(M, J, tuple(levels))


# descriptors

def describe(free, padic, torsion):
    parts = []
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    for p, b in sorted(padic.items()):
        parts.append(f"Z_{p}" if b == 1 else f"Z_{p}^{b}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ProfiniteAbelianDescriptor:
    free: int = 0
    padic: tuple = ()
    torsion: tuple = ()
    confidence: str = PROVED
    unresolved_depth: int | None = None

    @property
    def padic_ranks(self):
        return dict(self.padic)

    @property
    def resolved(self):
        return self.confidence != UNRESOLVED

    def same_shape(self, other):
        """Equal free rank and p-adic ranks; torsion is not compared."""
        return self.free == other.free and self.padic == other.padic

    def to_json(self):
        doc = {
            "free": self.free,
            "padic": {str(p): b for p, b in self.padic},
            "torsion": list(self.torsion),
            "confidence": self.confidence,
        }
        if self.unresolved_depth is not None:
            doc["unresolved_depth"] = self.unresolved_depth
        return doc

    def __str__(self):
        if not self.resolved:
            return f"unresolved at depth {self.unresolved_depth}"
        return describe(self.free, self.padic_ranks, self.torsion)


def make_descriptor(free, padic, torsion=(), confidence=PROVED, unresolved_depth=None):
    padic = tuple(sorted((int(p), int(b)) for p, b in padic.items() if b))
    return ProfiniteAbelianDescriptor(
        int(free), padic, tuple(sorted(torsion)), confidence, unresolved_depth
    )


def unresolved(depth):
    return ProfiniteAbelianDescriptor(confidence=UNRESOLVED, unresolved_depth=depth)


def classify_completion(tower, window=None, min_depth=None):
    """Read the completed shape off the last window steps of a tower."""
    cfg = get_config()
    window = window or cfg.window
    min_depth = min_depth or cfg.min_depth
    if tower.depth < max(min_depth, window + 1):
        raise TowerDepthError(f"need a tower of depth {max(min_depth, window + 1)}, got {tower.depth}")
    tail = tower.levels[-(window + 1):]
    if len({lev.free for lev in tail}) > 1:
        logger.warning("%s: free rank not stable at depth %d", tower.module.name, tower.depth)
        return unresolved(tower.depth)
    padic = Counter()
    torsion = []
    primes = sorted({p for lev in tail for d in lev.torsion for p in factorint(d)})
    for p in primes:
        vals = [sorted((multiplicity(p, d) for d in lev.torsion if d % p == 0), reverse=True)
                for lev in tail]
        width = max(len(v) for v in vals)
        vals = [v + [0] * (width - len(v)) for v in vals]
        for i in range(width):
            trajectory = [v[i] for v in vals]
            steps = [b - a for a, b in zip(trajectory, trajectory[1:])]
            if all(s > 0 for s in steps):
                padic[p] += 1
            elif all(s == 0 for s in steps):
                torsion.append(p ** trajectory[-1])
            else:
                logger.warning("%s: %d-part not stable at depth %d", tower.module.name, p, tower.depth)
                return unresolved(tower.depth)
    return make_descriptor(tail[-1].free, padic, torsion, HEURISTIC)


def closed_form_completion(M):
    """Trivial isotropy gives Z, nontrivial p-group isotropy gives Z_p, the rest dies."""
    _require_labels(M)
    orders = M.classification.orders
    free = 0
    padic = Counter()
    for lab in M.labels:
        p = prime_power(int(orders[lab.isotropy]))
        if p == 0:
            free += 1
        elif p is not None:
            padic[p] += 1
    return make_descriptor(free, padic)


def p_local_completion(M, p):
    """Completion of the restriction to Fp(p): Z per free label, Z_p per other label."""
    if not isprime(p):
        raise FamilyError(f"{p} is not prime")
    sub, _ = restrict_to_family(M, family_classes(M.classification, f"Fp({p})"))
    orders = M.classification.orders
    free = sum(1 for lab in sub.labels if orders[lab.isotropy] == 1)
    return make_descriptor(free, {p: sub.rank - free})


@dataclass(frozen=True)
class ShadowPiece:
    family: str
    prime: int | None
    rank: int
    expected: ProfiniteAbelianDescriptor
    oracle: ProfiniteAbelianDescriptor | None = None

    @property
    def ok(self):
        return self.oracle is None or (self.oracle.resolved and self.oracle.same_shape(self.expected))


@dataclass(frozen=True)
class DecompositionShadow:
    module: str
    pieces: tuple
    total: ProfiniteAbelianDescriptor

    @property
    def ok(self):
        return all(piece.ok for piece in self.pieces)


def decomposition_shadow(M, depth=None):
    """Completion assembled over F1 and the layers [Fp, F1], optionally checked per piece."""
    _require_labels(M)
    diagram = family_diagram(M.classification)
    J = augmentation_ideal(M.ring) if depth else None

    def oracle(piece):
        if depth is None:
            return None
        return classify_completion(quotient_tower(piece, J, depth))

    f1, fps = diagram[0], diagram[1:]
    bottom, _ = restrict_to_family(M, f1)
    pieces = [ShadowPiece("F1", None, bottom.rank, make_descriptor(bottom.rank, {}), oracle(bottom))]
    padic = {}
    for F in fps:
        layer = family_quotient(M, F, f1)
        padic[F.prime] = layer.rank
        pieces.append(ShadowPiece(
            f"{F.name}/F1", F.prime, layer.rank,
            make_descriptor(0, {F.prime: layer.rank}), oracle(layer),
        ))
    return DecompositionShadow(M.name, tuple(pieces), make_descriptor(bottom.rank, padic))
