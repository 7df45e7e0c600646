"""Graphs on integer lattices modulo a non-singular matrix.

A non-singular integer matrix M defines the finite group Z^n / M Z^n.  The
graph studied here has that group as vertex set and an edge between v and w
whenever v - w is congruent to a signed unit vector.  Vertices are labelled
canonically inside the box spanned by the diagonal of the Hermite normal
form of M, so two generator matrices of the same lattice produce identical
vertex sets and adjacency.
"""

from collections import namedtuple

import numpy as np

from lattice_net import intmat
from lattice_net.errors import PreconditionError, ResourceLimitError

MAX_ORDER = 1 << 24

Projection = namedtuple("Projection", ["graph", "side", "twist"])


class LatticeGraph:
    """Vertex-transitive graph of Z^n modulo the columns of a matrix.

    Attributes:
        matrix: the generator matrix as given.
        hermite: its column-style Hermite normal form.
        unimodular: U with matrix @ U == hermite.
        n: dimension (half the degree).
        sides: diagonal of the Hermite form; vertex labels x satisfy
            0 <= x[i] < sides[i].
        order: number of vertices, the product of the sides.
    """

    def __init__(self, m, name="custom"):
        self.matrix = intmat.matrix(m)
        self.n = len(self.matrix)
        self.hermite, self.unimodular = intmat.hermite_normal_form(self.matrix)
        self.sides = tuple(self.hermite[i][i] for i in range(self.n))
        order = 1
        for s in self.sides:
            order *= s
        if order > MAX_ORDER:
            raise ResourceLimitError(
                f"graph would have {order} vertices (limit {MAX_ORDER})"
            )
        self.order = order
        self.name = name
        strides = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            strides[i] = strides[i + 1] * self.sides[i + 1]
        self._strides = tuple(strides)
        self._labels = None
        self._ntable = None

    def __repr__(self):
        return f"LatticeGraph({self.name!r}, n={self.n}, order={self.order})"

    @property
    def degree(self):
        return 2 * self.n

    def reduce(self, v):
        """Canonical label of the residue class of v."""
        return intmat.reduce_mod(tuple(v), self.hermite)

    def index(self, label):
        """Lexicographic rank of a canonical label."""
        return sum(x * s for x, s in zip(label, self._strides))

    def label(self, idx):
        out = []
        for s in self._strides:
            out.append(idx // s)
            idx %= s
        return tuple(out)

    def vertices(self):
        """Yield all canonical labels in index order."""
        for idx in range(self.order):
            yield self.label(idx)

    def unit(self, dim, sign=1):
        return tuple(sign if i == dim else 0 for i in range(self.n))

    def move(self, v, dim, sign):
        """Neighbor of v across the generator sign * e_dim."""
        return self.reduce(tuple(x + (sign if i == dim else 0) for i, x in enumerate(v)))

    def neighbors(self, v):
        """Neighbors in the fixed order +e1, -e1, +e2, -e2, ..."""
        out = []
        for dim in range(self.n):
            out.append(self.move(v, dim, 1))
            out.append(self.move(v, dim, -1))
        return out

    def delta(self, vs, vd):
        """Canonical label of vd - vs; routing operates on this."""
        return self.reduce(tuple(d - s for s, d in zip(vs, vd)))

    def apply_record(self, v, record):
        """Destination reached from v by taking record[i] steps along e_i."""
        return self.reduce(tuple(x + r for x, r in zip(v, record)))

    def element_order(self, x):
        return intmat.element_order(self.matrix, x)

    def equivalent(self, other):
        """True when both matrices generate the same graph up to relabeling."""
        return self.hermite == other.hermite

    # Vectorized tables.  Labels and intermediate sums fit comfortably in
    # int64: every coordinate stays below max(sides) + 1 during reduction.

    def labels_array(self):
        if self._labels is None:
            grids = np.meshgrid(
                *[np.arange(s, dtype=np.int64) for s in self.sides], indexing="ij"
            )
            self._labels = np.stack(grids, axis=-1).reshape(-1, self.n)
        return self._labels

    def reduce_array(self, v):
        """Vectorized reduce over an (m, n) int64 array.  Returns labels."""
        v = np.array(v, dtype=np.int64, copy=True)
        h = self.hermite
        for i in range(self.n - 1, -1, -1):
            q = v[:, i] // h[i][i]
            col = np.array([h[r][i] for r in range(i + 1)], dtype=np.int64)
            v[:, : i + 1] -= q[:, None] * col[None, :]
        return v

    def index_array(self, labels):
        return labels @ np.array(self._strides, dtype=np.int64)

    def neighbor_table(self):
        """(order, 2n) array: column 2*d is +e_d, column 2*d+1 is -e_d."""
        if self._ntable is None:
            base = self.labels_array()
            cols = []
            for dim in range(self.n):
                for sign in (1, -1):
                    shifted = base.copy()
                    shifted[:, dim] += sign
                    cols.append(self.index_array(self.reduce_array(shifted)))
            self._ntable = np.stack(cols, axis=1)
        return self._ntable


def single_source_distances(graph, source=0):
    """Hop distances from one vertex to all others, by frontier expansion.

    Vertex transitivity makes one source enough: dist(u, v) equals
    dist(0, reduce(v - u)).
    """
    nbr = graph.neighbor_table()
    dist = np.full(graph.order, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        cand = np.unique(nbr[frontier].ravel())
        cand = cand[dist[cand] < 0]
        d += 1
        dist[cand] = d
        frontier = cand
    return dist


def torus(sides, name="torus"):
    sides = tuple(int(s) for s in sides)
    if not sides or any(s < 1 for s in sides):
        raise PreconditionError("torus sides must be positive integers")
    n = len(sides)
    return LatticeGraph(
        [[sides[i] if i == j else 0 for j in range(n)] for i in range(n)], name=name
    )


def pc(a):
    return torus((a, a, a), name="pc")


def rtt(a):
    return LatticeGraph([[2 * a, a], [0, a]], name="rtt")


def fcc(a):
    return LatticeGraph([[2 * a, a, a], [0, a, 0], [0, 0, a]], name="fcc")


def bcc(a):
    return LatticeGraph([[2 * a, 0, a], [0, 2 * a, a], [0, 0, a]], name="bcc")


def fcc4(a):
    return LatticeGraph(
        [[2 * a, a, a, a], [0, a, 0, 0], [0, 0, a, 0], [0, 0, 0, a]], name="fcc4"
    )


def bcc4(a):
    return LatticeGraph(
        [[2 * a, 0, 0, a], [0, 2 * a, 0, a], [0, 0, 2 * a, a], [0, 0, 0, a]],
        name="bcc4",
    )


def lip(a):
    return LatticeGraph(
        [
            [a, -a, -a, -a],
            [a, a, -a, a],
            [a, a, a, -a],
            [a, -a, a, a],
        ],
        name="lip",
    )


def crystal_fcc(a):
    """Face-centered cubic lattice in its textbook basis."""
    return LatticeGraph([[a, a, 0], [a, 0, a], [0, a, a]], name="fcc")


def crystal_bcc(a):
    """Body-centered cubic lattice in its textbook basis."""
    return LatticeGraph([[-a, a, a], [a, -a, a], [a, a, -a]], name="bcc")


def custom(matrix, name="custom"):
    if isinstance(matrix, str):
        matrix = intmat.parse_matrix(matrix)
    return LatticeGraph(matrix, name=name)


def direct_sum(g1, g2, name=None):
    """Cartesian product of two graphs: block-diagonal generator."""
    n1, n2 = g1.n, g2.n
    h1, h2 = g1.hermite, g2.hermite
    rows = []
    for i in range(n1):
        rows.append(list(h1[i]) + [0] * n2)
    for i in range(n2):
        rows.append([0] * n1 + list(h2[i]))
    return LatticeGraph(rows, name=name or f"{g1.name}+{g2.name}")


def lift_overlap(g1, g2):
    """Number of leading Hermite columns the two graphs share."""
    h1, h2 = g1.hermite, g2.hermite
    m = min(g1.n, g2.n)
    k = 0
    for j in range(m):
        if all(h1[i][j] == h2[i][j] for i in range(m)):
            k += 1
        else:
            break
    return k


def common_lift(g1, g2, name=None):
    """Smallest graph projecting onto both inputs along shared leading axes.

    With H1 = [[C, R1], [0, A]] and H2 = [[C, R2], [0, B]] sharing the k
    leading columns C, the lift is generated by

        [[C, R1, R2],
         [0,  A,  0],
         [0,  0,  B]]

    and has dimension n1 + n2 - k.  A zero overlap degenerates to the
    Cartesian product.
    """
    k = lift_overlap(g1, g2)
    n1, n2 = g1.n, g2.n
    if k == 0:
        return direct_sum(g1, g2, name=name)
    h1, h2 = g1.hermite, g2.hermite
    rows = []
    for i in range(k):
        rows.append(list(h1[i]) + [h2[i][j] for j in range(k, n2)])
    for i in range(k, n1):
        rows.append(list(h1[i]) + [0] * (n2 - k))
    for i in range(k, n2):
        rows.append([0] * n1 + [h2[i][j] for j in range(k, n2)])
    return LatticeGraph(rows, name=name or f"{g1.name}#{g2.name}")


def hybrid(a):
    """Lift of the doubled cube over the 3D twisted body-centered graph."""
    g = common_lift(pc(2 * a), bcc(a), name="hybrid")
    return g


def projection(graph, axis=None):
    """Split off one axis: the graph decomposes into `side` copies of a
    quotient graph, consecutive copies glued along the removed generator.

    With the Hermite form written [[B, c], [0, a]] (last row and column
    separated), the copies are isomorphic to the graph of B, there are a
    of them, and stepping along the removed axis from the last copy back
    to the first shifts the remaining coordinates by the twist c.

    Args:
        graph: graph to project.
        axis: coordinate to remove; defaults to the last.  Removing
            another axis first swaps it with the last, which relabels the
            generators but not the graph.

    Returns:
        Projection(graph, side, twist).
    """
    n = graph.n
    if n < 2:
        raise PreconditionError("projection needs at least two dimensions")
    if axis is None:
        axis = n - 1
    if not 0 <= axis < n:
        raise PreconditionError(f"axis {axis} out of range for dimension {n}")
    h = graph.hermite
    if axis != n - 1:
        rows = [list(r) for r in h]
        rows[axis], rows[n - 1] = rows[n - 1], rows[axis]
        h, _ = intmat.hermite_normal_form(intmat.matrix(rows))
    sub = tuple(r[: n - 1] for r in h[: n - 1])
    twist = tuple(h[i][n - 1] for i in range(n - 1))
    side = h[n - 1][n - 1]
    return Projection(LatticeGraph(sub, name=f"{graph.name}/e{axis + 1}"), side, twist)


CATALOG = {
    "pc": pc,
    "rtt": rtt,
    "fcc": fcc,
    "bcc": bcc,
    "fcc4": fcc4,
    "bcc4": bcc4,
    "lip": lip,
    "hybrid": hybrid,
}


def make_topology(kind, a=None, sides=None, matrix=None):
    """Build a graph from a topology token.

    Args:
        kind: one of pc, rtt, fcc, bcc, fcc4, bcc4, lip, hybrid, torus,
            custom.
        a: scale parameter for the single-parameter families.
        sides: iterable of ring lengths, torus only.
        matrix: generator matrix or ';'-separated literal, custom only.
    """
    kind = kind.lower()
    if kind == "torus":
        if sides is None:
            raise PreconditionError("torus requires sides")
        return torus(sides)
    if kind == "custom":
        if matrix is None:
            raise PreconditionError("custom requires a matrix")
        return custom(matrix)
    if kind in CATALOG:
        if a is None or int(a) < 1:
            raise PreconditionError(f"{kind} requires a positive scale a")
        return CATALOG[kind](int(a))
    raise PreconditionError(f"unknown topology {kind!r}")
