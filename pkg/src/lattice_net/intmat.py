"""Exact integer matrix algebra for lattice quotients.

Matrices are immutable tuples of row tuples of Python ints, vectors are tuples
of ints. Everything here is exact: Python integers never wrap, and the 64-bit
entry contract is enforced at construction so results always fit the documented
range. Supported dimensions are 1 through 8; the graphs these matrices define
blow up combinatorially long before larger matrices would be useful.

The central objects are the column-style Hermite normal form (upper triangular,
positive diagonal, entries to the right of the diagonal reduced modulo the
diagonal), which canonicalizes right equivalence, and the adjugate, which gives
exact congruence tests and element orders without rational arithmetic.
"""

from math import gcd

from .errors import DimensionError, EntryRangeError, PreconditionError, SingularMatrixError

Matrix = tuple  # tuple of row tuples of int
Vector = tuple  # tuple of int

MAX_DIM = 8
_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


def _check_entry(x):
    if not isinstance(x, int) or isinstance(x, bool):
        raise EntryRangeError("entries must be Python ints, got %r" % (x,))
    if x < _INT64_MIN or x > _INT64_MAX:
        raise EntryRangeError("entry %d outside the 64-bit range" % x)
    return x


def matrix(rows) -> Matrix:
    """Validate and freeze a square integer matrix.

    Args:
        rows: iterable of iterables of ints.

    Returns:
        Tuple-of-tuples form of the matrix.

    Raises:
        DimensionError: not square or dimension outside 1..8.
        EntryRangeError: an entry is not an int or exceeds 64 bits.
    """
    m = tuple(tuple(_check_entry(x) for x in row) for row in rows)
    n = len(m)
    if n < 1 or n > MAX_DIM:
        raise DimensionError("dimension %d outside supported range 1..%d" % (n, MAX_DIM))
    for row in m:
        if len(row) != n:
            raise DimensionError("matrix is not square")
    return m


def vector(entries) -> Vector:
    return tuple(_check_entry(x) for x in entries)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt) for ra in a
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            # Pivot on a lower row; a zero column means a zero determinant.
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update divides exactly by the previous pivot.
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _minor(a: Matrix, i: int, j: int) -> Matrix:
    return tuple(
        tuple(x for cj, x in enumerate(row) if cj != j)
        for ri, row in enumerate(a)
        if ri != i
    )


def adjugate(a: Matrix) -> Matrix:
    """Adjugate matrix: a @ adjugate(a) == determinant(a) * I, exactly."""
    n = len(a)
    if n == 1:
        return ((1,),)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = determinant(_minor(a, i, j))
            # Cofactor transpose: entry (j, i) of the adjugate.
            adj[j][i] = -c if (i + j) % 2 else c
    return tuple(tuple(row) for row in adj)


def is_unimodular(a: Matrix) -> bool:
    return abs(determinant(a)) == 1


def hermite_normal_form(a: Matrix):
    """Column-style Hermite normal form.

    Processes rows bottom-up, gathering the gcd of each row segment into the
    diagonal with extended-Euclid column operations, then reduces entries to
    the right of each diagonal into [0, diagonal).

    Args:
        a: nonsingular square integer matrix.

    Returns:
        (H, U) with H = a @ U, U unimodular, H upper triangular with positive
        diagonal and 0 <= H[i][j] < H[i][i] for j > i.

    Raises:
        SingularMatrixError: determinant zero.
    """
    n = len(a)
    h = [list(row) for row in a]
    u = [list(row) for row in identity(n)]

    def col_sub(j, i, q):
        # column_j -= q * column_i
        if q == 0:
            return
        for r in range(n):
            h[r][j] -= q * h[r][i]
            u[r][j] -= q * u[r][i]

    def col_swap(i, j):
        for r in range(n):
            h[r][i], h[r][j] = h[r][j], h[r][i]
            u[r][i], u[r][j] = u[r][j], u[r][i]

    def col_neg(i):
        for r in range(n):
            h[r][i] = -h[r][i]
            u[r][i] = -u[r][i]

    for i in range(n - 1, -1, -1):
        # Gather gcd of h[i][0..i] into column i using columns 0..i only;
        # rows below i already hold zeros in those columns and stay zero.
        while True:
            nz = [j for j in range(i + 1) if h[i][j] != 0]
            if not nz:
                raise SingularMatrixError("matrix has determinant zero")
            jmin = min(nz, key=lambda j: abs(h[i][j]))
            if jmin != i:
                col_swap(jmin, i)
            if h[i][i] < 0:
                col_neg(i)
            done = True
            for j in range(i):
                if h[i][j] != 0:
                    col_sub(j, i, h[i][j] // h[i][i])
                    if h[i][j] != 0:
                        done = False
            if done:
                break
    # Reduce entries right of the diagonal into [0, diagonal).
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            col_sub(j, i, h[i][j] // h[i][i])

    hm = tuple(tuple(row) for row in h)
    um = tuple(tuple(row) for row in u)
    assert mat_mul(a, um) == hm
    return hm, um


def is_hermite(h: Matrix) -> bool:
    """True when h is upper triangular with positive diagonal and reduced
    above-diagonal entries."""
    n = len(h)
    for i in range(n):
        if h[i][i] <= 0:
            return False
        for j in range(n):
            if j < i and h[i][j] != 0:
                return False
            if j > i and not (0 <= h[i][j] < h[i][i]):
                return False
    return True


def reduce_mod(v: Vector, h: Matrix) -> Vector:
    """Canonical representative of v modulo the columns of a Hermite form.

    Back-substitutes from the last coordinate to the first, so the result x
    satisfies 0 <= x[i] < h[i][i] and x == v modulo the column lattice of h.

    Raises:
        PreconditionError: h is not in Hermite normal form or sizes mismatch.
    """
    n = len(h)
    if len(v) != n:
        raise PreconditionError("vector length %d does not match matrix size %d" % (len(v), n))
    if not is_hermite(h):
        raise PreconditionError("reduction requires a Hermite normal form")
    w = list(v)
    for i in range(n - 1, -1, -1):
        q = w[i] // h[i][i]
        if q:
            for r in range(i + 1):
                w[r] -= q * h[r][i]
    return tuple(w)


def congruent(m: Matrix, v: Vector, w: Vector) -> bool:
    """True when v == w modulo the column lattice of m (m nonsingular)."""
    d = determinant(m)
    if d == 0:
        raise SingularMatrixError("matrix has determinant zero")
    adj = adjugate(m)
    diff = tuple(a - b for a, b in zip(v, w))
    return all(x % d == 0 for x in mat_vec(adj, diff))


def element_order(m: Matrix, x: Vector) -> int:
    """Order of x in the quotient group Z^n / m Z^n.

    Uses ord(x) = D / gcd(D, gcd_i((adjugate(m) @ x)_i)) with D = |det m|,
    which needs no rational arithmetic.
    """
    d = determinant(m)
    if d == 0:
        raise SingularMatrixError("matrix has determinant zero")
    d = abs(d)
    g = 0
    for entry in mat_vec(adjugate(m), x):
        g = gcd(g, entry)
    return d // gcd(d, g)


def right_equivalent(a: Matrix, b: Matrix) -> bool:
    """True when a = b @ P for some unimodular P, i.e. equal Hermite forms."""
    if len(a) != len(b):
        return False
    return hermite_normal_form(a)[0] == hermite_normal_form(b)[0]


def parse_matrix(text: str) -> Matrix:
    """Parse the row-major literal form, rows split by ';', entries by ','.

    Example: "8,4,4;0,4,0;0,0,4".
    """
    try:
        rows = [
            [int(tok.strip()) for tok in row.split(",")]
            for row in text.strip().split(";")
            if row.strip()
        ]
    except ValueError as exc:
        raise PreconditionError("bad matrix literal %r: %s" % (text, exc)) from exc
    if not rows:
        raise PreconditionError("empty matrix literal")
    return matrix(rows)


def format_matrix(m: Matrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in m)
