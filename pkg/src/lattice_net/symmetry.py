"""Linear automorphisms of lattice graphs fixing the origin.

A signed permutation P is a linear automorphism of the graph of M exactly
when M^-1 P M is integral, i.e. P maps the lattice M Z^n onto itself.  The
graph is called linearly symmetric when every axis can be reached from e_1
by such an automorphism; for n = 3 this happens iff the stabilizer contains
an element of order 3.
"""

from collections import Counter, namedtuple
from itertools import permutations, product

from lattice_net import intmat
from lattice_net.errors import DimensionError, PreconditionError, SingularMatrixError

SignedPermutation = namedtuple("SignedPermutation", ["perm", "signs", "matrix"])

StabilizerReport = namedtuple("StabilizerReport", ["members", "symmetric", "witnesses"])

FourCycle = namedtuple("FourCycle", ["steps", "profile"])

# Order-3 rotation candidates and their two similarity-class quotients.
P1 = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
P2 = ((0, 0, 1), (-1, 0, 0), (0, -1, 0))
P3 = ((0, 0, -1), (1, 0, 0), (0, -1, 0))
P4 = ((0, 0, -1), (-1, 0, 0), (0, 1, 0))
Q1 = ((1, 0, 0), (0, -1, 1), (0, -1, 0))
Q2 = ((1, 0, 1), (0, -1, 1), (0, -1, 0))


def signed_permutations(n):
    """All n! * 2^n signed permutation matrices, in a fixed order.

    The element for (perm, signs) sends e_j to signs[j] * e_perm[j].
    """
    if not 1 <= n <= 8:
        raise DimensionError(f"dimension {n} outside 1..8")
    out = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            mat = tuple(
                tuple(signs[j] if perm[j] == i else 0 for j in range(n))
                for i in range(n)
            )
            out.append(SignedPermutation(perm, signs, mat))
    return out


def _as_matrix(p):
    return p.matrix if isinstance(p, SignedPermutation) else p


def is_linear_automorphism(m, p):
    """True iff P maps the lattice of M to itself.

    Uses adjugate(M) P M == 0 (mod det M), which is the integrality of
    M^-1 P M without leaving exact arithmetic.
    """
    p = _as_matrix(p)
    d = intmat.determinant(m)
    if d == 0:
        raise SingularMatrixError("automorphism test needs a non-singular matrix")
    prod = intmat.mat_mul(intmat.mat_mul(intmat.adjugate(m), p), m)
    return all(x % d == 0 for row in prod for x in row)


def automorphism_quotient(m, p):
    """The integral Q with P M = M Q; raises if P is not an automorphism."""
    p = _as_matrix(p)
    d = intmat.determinant(m)
    if d == 0:
        raise SingularMatrixError("quotient needs a non-singular matrix")
    prod = intmat.mat_mul(intmat.mat_mul(intmat.adjugate(m), p), m)
    if any(x % d for row in prod for x in row):
        raise PreconditionError("P does not stabilize the lattice of M")
    return tuple(tuple(x // d for x in row) for row in prod)


def permutation_order(p):
    """Multiplicative order of a signed permutation matrix."""
    p = _as_matrix(p)
    n = len(p)
    ident = intmat.identity(n)
    power = p
    for k in range(1, 2 * n * n + 2):
        if power == ident:
            return k
        power = intmat.mat_mul(power, p)
    raise PreconditionError("not a finite-order matrix")


def stabilizer(m):
    """Scan all signed permutations for members of LAut(G(M), 0).

    Returns a StabilizerReport whose witnesses tuple holds, per axis i, a
    member whose first column is +-e_i (None when no member reaches that
    axis).  symmetric is true when every axis has a witness.
    """
    n = len(m)
    if n > 6:
        raise DimensionError("stabilizer scan supports n <= 6")
    d = intmat.determinant(m)
    if d == 0:
        raise SingularMatrixError("stabilizer needs a non-singular matrix")
    adj = intmat.adjugate(m)
    members = []
    for p in signed_permutations(n):
        # adj @ P is a signed column gather of adj; skip one full multiply.
        ap = tuple(
            tuple(p.signs[j] * adj[i][p.perm[j]] for j in range(n))
            for i in range(n)
        )
        prod = intmat.mat_mul(ap, m)
        if all(x % d == 0 for row in prod for x in row):
            members.append(p)
    witnesses = []
    for axis in range(n):
        found = None
        for p in members:
            if p.perm[0] == axis:
                found = p
                break
        witnesses.append(found)
    symmetric = all(w is not None for w in witnesses)
    return StabilizerReport(tuple(members), symmetric, tuple(witnesses))


def is_linearly_symmetric(m):
    return stabilizer(m).symmetric


def verify_similarity_witness(a, b, u):
    """Check a displayed similarity identity: U unimodular and A U = U B."""
    if not intmat.is_unimodular(u):
        return False
    return intmat.mat_mul(a, u) == intmat.mat_mul(u, b)


def circulant_family(a, b, c):
    """Matrices commuting with the plain 3-cycle rotation."""
    return intmat.matrix([[a, c, b], [b, a, c], [c, b, a]])


def alternate_family(a, b, c):
    """Matrices whose rotation quotient falls in the other similarity class."""
    return intmat.matrix([[a, b, c], [a, c, -b - c], [a, -b - c, b]])


def family_witness(m, n):
    """The (m, n)-parameterized identity collapsing triangular candidates.

    Returns (A, U) with Q1 U = U A, A = [[1, m+2n, m-n], [0,-1,1], [0,-1,0]]
    and U = [[1, n, m], [0,1,0], [0,0,1]].
    """
    a = ((1, m + 2 * n, m - n), (0, -1, 1), (0, -1, 0))
    u = ((1, n, m), (0, 1, 0), (0, 0, 1))
    return a, u


def verify_symmetric_family(family, a, b, c):
    """Build a family instance and decide its linear symmetry."""
    if family == "circulant":
        m = circulant_family(a, b, c)
    elif family == "alternate":
        m = alternate_family(a, b, c)
    else:
        raise PreconditionError(f"unknown family {family!r}")
    if intmat.determinant(m) == 0:
        raise SingularMatrixError(f"{family}({a},{b},{c}) is singular")
    return stabilizer(m).symmetric


def _signed_units(n):
    out = []
    for i in range(n):
        for s in (1, -1):
            out.append(tuple(s if j == i else 0 for j in range(n)))
    return out


def _cycle_profile(quad):
    tally = Counter(next(i for i, x in enumerate(v) if x) for v in quad)
    return tuple(sorted(tally.values(), reverse=True))


def _canonical_cycle(quad):
    images = []
    reverse = tuple(tuple(-x for x in v) for v in reversed(quad))
    for form in (quad, reverse):
        for r in range(4):
            images.append(form[r:] + form[:r])
    return min(images)


def nontrivial_4cycles(m):
    """Generator quadruples closing a 4-cycle with no cancelling pair.

    A quadruple (a, b, c, d) of signed unit vectors qualifies when its sum
    is congruent to 0 modulo M and no two entries are exact negatives.
    Quadruples are reported once up to rotation and traversal reversal,
    with the profile of per-axis usage counts, e.g. (2, 2) for a+a+b+b.
    """
    n = len(m)
    h, _ = intmat.hermite_normal_form(m)
    zero = (0,) * n
    seen = {}
    for quad in product(_signed_units(n), repeat=4):
        if any(
            all(x + y == 0 for x, y in zip(quad[i], quad[j]))
            for i in range(4)
            for j in range(i + 1, 4)
        ):
            continue
        total = tuple(sum(col) for col in zip(*quad))
        if intmat.reduce_mod(total, h) != zero:
            continue
        canon = _canonical_cycle(quad)
        if canon not in seen:
            seen[canon] = _cycle_profile(canon)
    return [FourCycle(q, p) for q, p in sorted(seen.items())]


def bcc_lift_scan(a):
    """Check that no one-generator lift of the 3D twisted BCC graph is
    linearly symmetric.

    Lift columns are scanned in Hermite ranges 0 <= x, y < 2a, 0 <= z < a
    with the trailing diagonal entry fixed at 1, the reduction used by the
    source argument.  Returns True when no scanned lift is symmetric.
    """
    if not 1 <= a <= 4:
        raise PreconditionError("scan supported for 1 <= a <= 4")
    for x in range(2 * a):
        for y in range(2 * a):
            for z in range(a):
                m = (
                    (2 * a, 0, a, x),
                    (0, 2 * a, a, y),
                    (0, 0, a, z),
                    (0, 0, 0, 1),
                )
                if stabilizer(m).symmetric:
                    return False
    return True
