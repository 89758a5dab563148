"""The Burnside ring A(G): table of marks, products and fixed-point ideals.

A(G) is free abelian on the orbit types [G/K], one per subgroup class. The
mark of H on [G/K] is the number of H-fixed points of G/K; the marks matrix
is indexed m[K][H] with rows in class order, so it is lower triangular.

Products are computed from double cosets: [G/H][G/K] is the sum over
representatives g of H\\G/K of [G/(H n gKg^-1)]. The marks matrix is only
used to check the result.

Usage:
    from burnside.groups import parse_group
    from burnside.ring import burnside_ring, augmentation_ideal, phi_ideal

    A = burnside_ring(parse_group("S3"))
    I = augmentation_ideal(A)
    phi_ideal(1, I)          # IntegerIdeal(2)
"""
import logging
import math
from dataclasses import dataclass
from numbers import Integral

import numpy as np
from sympy import factorint

from .errors import ConsistencyError, MismatchedGroupError
from .groups import prime_power
from .lattice import subgroup_classes

logger = logging.getLogger(__name__)

# group digest -> BurnsideRing
_rings = {}


def _exact(values):
    """Object array of Python ints; coefficients are unbounded."""
    return np.array([int(v) for v in values], dtype=object)


def fixed_point_count(G, K, H):
    """Number of cosets gK with hgK = gK for all h in H."""
    k_arr = np.asarray(K.members, dtype=np.int64)
    h_arr = np.asarray(H.members, dtype=np.int64)
    seen = np.zeros(G.order, dtype=bool)
    count = 0
    for g in range(G.order):
        if seen[g]:
            continue
        seen[G.table[g, k_arr]] = True
        # g^-1 h g in K for every h
        moved = G.table[G.table[G.inverses[g], h_arr], g]
        if np.isin(moved, k_arr).all():
            count += 1
    return count


@dataclass(frozen=True, eq=False)
class TableOfMarks:
    classification: object
    marks: np.ndarray

    @property
    def group(self):
        return self.classification.group

    def __len__(self):
        return self.marks.shape[0]


def _transporter_marks(cl):
    G = cl.group
    n = len(cl)
    marks = np.zeros((n, n), dtype=np.int64)
    for h, ch in enumerate(cl):
        arr = np.asarray(ch.representative.members, dtype=np.int64)
        conj = G.table[G.table[:, arr], G.inverses[:, None]]
        for k, ck in enumerate(cl):
            if not cl.subconjugacy[h, k]:
                continue
            k_arr = np.asarray(ck.representative.members, dtype=np.int64)
            transporter = int(np.isin(conj, k_arr).all(axis=1).sum())
            marks[k, h] = transporter // ck.order
    marks.flags.writeable = False
    return marks


def table_of_marks(G):
    return burnside_ring(G).tom


@dataclass(frozen=True, eq=False)
class BurnsideRing:
    tom: TableOfMarks
    # constants[i, j] = coefficient vector of [G/H_i][G/H_j]
    constants: np.ndarray

    @property
    def classification(self):
        return self.tom.classification

    @property
    def group(self):
        return self.tom.group

    @property
    def rank(self):
        return len(self.tom)

    def element(self, coefficients):
        coefficients = tuple(int(c) for c in coefficients)
        if len(coefficients) != self.rank:
            raise ValueError(f"expected {self.rank} coefficients, got {len(coefficients)}")
        return BurnsideElement(self, coefficients)

    def basis(self, i):
        v = [0] * self.rank
        v[i] = 1
        return BurnsideElement(self, tuple(v))

    def one(self):
        return self.basis(self.rank - 1)

    def zero(self):
        return BurnsideElement(self, (0,) * self.rank)


@dataclass(frozen=True)
class BurnsideElement:
    ring: BurnsideRing
    coefficients: tuple

    def _check(self, other):
        if not isinstance(other, BurnsideElement) or other.ring is not self.ring:
            raise MismatchedGroupError("Burnside elements over different groups")

    def __add__(self, other):
        self._check(other)
        return BurnsideElement(self.ring, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        self._check(other)
        return BurnsideElement(self.ring, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self):
        return BurnsideElement(self.ring, tuple(-a for a in self.coefficients))

    def __mul__(self, other):
        if isinstance(other, Integral):
            return BurnsideElement(self.ring, tuple(int(other) * a for a in self.coefficients))
        return multiply(self, other)

    __rmul__ = __mul__

    @property
    def marks(self):
        return tuple(_exact(self.coefficients) @ self.ring.tom.marks.astype(object))

    @property
    def augmentation(self):
        return self.marks[0]


def _double_coset_constants(cl):
    G = cl.group
    n = len(cl)
    constants = np.zeros((n, n, n), dtype=np.int64)
    for i, ci in enumerate(cl):
        h_arr = np.asarray(ci.representative.members, dtype=np.int64)
        h_set = ci.representative.member_set
        for j, cj in enumerate(cl):
            k_arr = np.asarray(cj.representative.members, dtype=np.int64)
            seen = np.zeros(G.order, dtype=bool)
            for g in range(G.order):
                if seen[g]:
                    continue
                # H g K
                seen[G.table[G.table[h_arr, g][:, None], k_arr[None, :]].ravel()] = True
                stabilizer = h_set & G.conjugate_set(g, k_arr)
                constants[i, j, cl.class_of(stabilizer)] += 1
    return constants


def burnside_ring(G):
    cl = subgroup_classes(G)
    ring = _rings.get(G.digest)
    if ring is not None and ring.classification is cl:
        return ring
    marks = _transporter_marks(cl)
    constants = _double_coset_constants(cl)
    for i in range(len(cl)):
        for j in range(len(cl)):
            if not np.array_equal(constants[i, j] @ marks, marks[i] * marks[j]):
                raise ConsistencyError(
                    f"{G.name}: product of classes {i} and {j} disagrees with the marks"
                )
    constants.flags.writeable = False
    ring = BurnsideRing(TableOfMarks(cl, marks), constants)
    logger.debug("%s: Burnside ring of rank %d", G.name, len(cl))
    _rings[G.digest] = ring
    return ring


def multiply(x, y):
    x._check(y)
    n = x.ring.rank
    C = x.ring.constants.astype(object).reshape(n, n * n)
    out = _exact(y.coefficients) @ (_exact(x.coefficients) @ C).reshape(n, n)
    return BurnsideElement(x.ring, tuple(out))


def mark(h, x):
    """phi^H(x) for the class index h."""
    return x.marks[h]


@dataclass(frozen=True)
class BurnsideIdeal:
    ring: BurnsideRing
    generators: tuple


@dataclass(frozen=True)
class IntegerIdeal:
    d: int

    @property
    def is_zero(self):
        return self.d == 0

    @property
    def is_whole(self):
        return self.d == 1

    def __str__(self):
        if self.d == 0:
            return "(0)"
        if self.d == 1:
            return "Z"
        return f"({self.d})"


def _as_ring(G_or_ring):
    return G_or_ring if isinstance(G_or_ring, BurnsideRing) else burnside_ring(G_or_ring)


def augmentation_ideal(G_or_ring):
    """Generators [G/K] - |G:K|[G/G], one per proper subgroup class K."""
    ring = _as_ring(G_or_ring)
    G = ring.group
    one = ring.one()
    gens = tuple(
        ring.basis(k) - (G.order // c.order) * one
        for k, c in enumerate(ring.classification)
        if k != ring.rank - 1
    )
    return BurnsideIdeal(ring, gens)


def phi_ideal(h, J):
    return IntegerIdeal(math.gcd(*(mark(h, x) for x in J.generators)) if J.generators else 0)


@dataclass(frozen=True)
class TrichotomyRow:
    index: int
    label: str
    order: int
    ideal: IntegerIdeal
    expected: str
    ok: bool


@dataclass(frozen=True)
class TrichotomyReport:
    group: str
    rows: tuple

    @property
    def passed(self):
        return all(r.ok for r in self.rows)


def verify_trichotomy(G):
    """phi^H(I(G)) is (0) for H = 1, (p^k) for a nontrivial p-group, Z otherwise."""
    ring = burnside_ring(G)
    I = augmentation_ideal(ring)
    rows = []
    for h, c in enumerate(ring.classification):
        ideal = phi_ideal(h, I)
        p = prime_power(c.order)
        if p == 0:
            expected, ok = "(0)", ideal.is_zero
        elif p is not None:
            expected = f"({p}^k)"
            ok = ideal.d > 1 and set(factorint(ideal.d)) == {p}
        else:
            expected, ok = "Z", ideal.is_whole
        if not ok:
            logger.warning("%s: class %s gives %s, expected %s", G.name, c.index, ideal, expected)
        rows.append(TrichotomyRow(h, ring.classification.labels[h], c.order, ideal, expected, ok))
    return TrichotomyReport(G.name, tuple(rows))


def export_marks(tom, fmt="json"):
    """Table of marks as a JSON-ready dict or as an aligned text table."""
    cl = tom.classification
    if fmt == "json":
        return {
            "group": tom.group.name,
            "order": tom.group.order,
            "classes": [
                {"index": c.index, "label": cl.labels[c.index], "order": c.order, "size": c.size}
                for c in cl
            ],
            "marks": tom.marks.tolist(),
        }
    return format_marks(cl.labels, tom.marks.tolist())


def format_marks(labels, rows):
    """Aligned text table; zero marks print as dots."""
    width = max(max(len(s) for s in labels), max(len(str(v)) for row in rows for v in row))
    lines = [" " * width + " | " + " ".join(s.rjust(width) for s in labels)]
    lines.append("-" * len(lines[0]))
    for label, row in zip(labels, rows):
        cells = " ".join((str(v) if v else ".").rjust(width) for v in row)
        lines.append(f"{label.rjust(width)} | {cells}")
    return "\n".join(lines)
