"""Small exact linear algebra: ranks over the coefficient field and integer
lattice routines (Smith form style) for the toric cohomology backend."""

from fractions import Fraction


def field_rank(field, rows):
    """Rank of a matrix given as list of rows over `field`."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank, col = 0, 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [field.sub(a, field.mul(c, b))
                           for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def field_kernel_basis(field, rows, ncols):
    """Basis of the right kernel of the matrix (rows over `field`)."""
    rows = [list(r) for r in rows if any(r)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [field.sub(a, field.mul(c, b))
                           for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(rows[r][fc])
        basis.append(v)
    return basis


# ----------------------------------------------------------------------
# integer lattices
# ----------------------------------------------------------------------

def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]

def _addmul_row(M, dst, src, c):
    M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]


def smith_normal_form(A):
    """Return (D, S, T) with S*A*T = D diagonal, S and T unimodular.

    A is a list of rows of integers; matrices are small here.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    S = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(j1, j2, c):  # col j1 += c * col j2
        for r in D:
            r[j1] += c * r[j2]
        for r in T:
            r[j1] += c * r[j2]

    def col_swap(j1, j2):
        for r in D:
            r[j1], r[j2] = r[j2], r[j1]
        for r in T:
            r[j1], r[j2] = r[j2], r[j1]

    k = 0
    while k < min(m, n):
        # find a pivot
        piv = None
        for i in range(k, m):
            for j in range(k, n):
                if D[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if not piv:
            break
        i, j = piv
        _swap_rows(D, k, i), _swap_rows(S, k, i)
        col_swap(k, j)
        while True:
            # clear column k then row k; repeat until both clean
            dirty = False
            for i in range(k + 1, m):
                if D[i][k]:
                    q = D[i][k] // D[k][k]
                    _addmul_row(D, i, k, -q), _addmul_row(S, i, k, -q)
                    if D[i][k]:
                        _swap_rows(D, k, i), _swap_rows(S, k, i)
                        dirty = True
            for j in range(k + 1, n):
                if D[k][j]:
                    q = D[k][j] // D[k][k]
                    col_op(j, k, -q)
                    if D[k][j]:
                        col_swap(k, j)
                        dirty = True
            if not dirty:
                break
        if D[k][k] < 0:
            D[k] = [-v for v in D[k]]
            S[k] = [-v for v in S[k]]
        k += 1
    return D, S, T


def solve_integer(A, b):
    """One integer solution x of A x = b, or None (A rows of ints)."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [0] * n
    D, S, T = smith_normal_form(A)
    c = [sum(S[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(min(m, n)):
        d = D[i][i]
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    for i in range(n, m):
        pass
    for i in range(min(m, n), m):
        if c[i] != 0:
            return None
    return [sum(T[i][k] * y[k] for k in range(n)) for i in range(n)]


def integer_kernel_basis(A, n=None):
    """Basis of {x in Z^n : A x = 0}."""
    m = len(A)
    if n is None:
        n = len(A[0]) if m else 0
    if m == 0:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    D, S, T = smith_normal_form(A)
    out = []
    for j in range(n):
        dj = D[j][j] if j < min(m, n) else 0
        if dj == 0:
            out.append([T[i][j] for i in range(n)])
    return out


def solve_rational(A, b):
    """One rational solution of A x = b over Q, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    rank = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(rank, m) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][col]
        M[rank] = [v * inv for v in M[rank]]
        for i in range(m):
            if i != rank and M[i][col]:
                c = M[i][col]
                M[i] = [a - c * b2 for a, b2 in zip(M[i], M[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, m):
        if M[i][n]:
            return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        x[pc] = M[r][n]
    return x
