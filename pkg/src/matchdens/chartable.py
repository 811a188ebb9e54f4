"""Exact character tables of small finite groups.

The class-algebra method: class sums span the center of the group algebra, so
their structure-constant matrices commute and share a full set of eigenvectors
whose entries are the central character values.  We find those eigenvectors
over a prime field F_l with l = 1 (mod exponent) and l > 2*ceil(sqrt(|G|)),
recover degrees and character values mod l, then lift each value to an exact
sum of roots of unity by finite-field Fourier inversion over the cyclic group
generated by the class representative.  Row orthogonality is re-verified with
exact cyclotomic arithmetic before the table is returned.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .cyclotomic import CycValue
from .groupcore import ClassFunction, FiniteGroup

MAX_CLASSES = 30
MAX_ORDER = 2000
DEFAULT_MODULUS_BOUND = 10**6


class CharacterTableError(ValueError):
    """The group is outside the supported range or the method failed."""


# -- small dense linear algebra over F_l


def _mat_vec(m: list[list[int]], v: list[int], l: int) -> list[int]:
    return [sum(mi[j] * v[j] for j in range(len(v))) % l for mi in m]


def _charpoly_hessenberg(m: list[list[int]], l: int) -> list[int]:
    """Characteristic polynomial mod l, coefficients low -> high, monic."""
    n = len(m)
    h = [row[:] for row in m]
    for col in range(n - 2):
        pivot = next((r for r in range(col + 1, n) if h[r][col] % l), None)
        if pivot is None:
            continue
        if pivot != col + 1:
            h[pivot], h[col + 1] = h[col + 1], h[pivot]
            for row in h:
                row[pivot], row[col + 1] = row[col + 1], row[pivot]
        inv = pow(h[col + 1][col], -1, l)
        for r in range(col + 2, n):
            f = h[r][col] * inv % l
            if f:
                for j in range(n):
                    h[r][j] = (h[r][j] - f * h[col + 1][j]) % l
                for row in h:
                    row[col + 1] = (row[col + 1] + f * row[r]) % l
    # recurrence on leading principal minors of xI - H
    polys: list[list[int]] = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [(-h[k - 1][k - 1] * c) % l for c in prev] + [0]
        for idx, c in enumerate(prev):
            cur[idx + 1] = (cur[idx + 1] + c) % l
        subdiag = 1
        for i in range(k - 2, -1, -1):
            subdiag = subdiag * h[i + 1][i] % l
            coeff = h[i][k - 1] * subdiag % l
            if coeff:
                for idx, c in enumerate(polys[i]):
                    cur[idx] = (cur[idx] - coeff * c) % l
        polys.append(cur)
    return polys[n]


def _poly_roots(poly: list[int], l: int) -> list[int]:
    roots = []
    for x in range(l):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % l
        if acc == 0:
            roots.append(x)
    return roots


def _nullspace(m: list[list[int]], l: int) -> list[list[int]]:
    """Basis of the kernel of m over F_l (vectors as lists)."""
    n_rows, n_cols = len(m), len(m[0])
    a = [row[:] for row in m]
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        sel = next((r for r in range(row, n_rows) if a[r][col] % l), None)
        if sel is None:
            continue
        a[row], a[sel] = a[sel], a[row]
        inv = pow(a[row][col], -1, l)
        a[row] = [x * inv % l for x in a[row]]
        for r in range(n_rows):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % l for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n_cols
        v[fc] = 1
        for pr, pc in enumerate(pivots):
            v[pc] = (-a[pr][fc]) % l
        basis.append(v)
    return basis


def _column_reduce(cols: list[list[int]], l: int) -> list[list[int]]:
    """Reduced column echelon form: canonical basis of the column span."""
    n = len(cols[0])
    work = [c[:] for c in cols]
    out: list[list[int]] = []
    pivot_rows: list[int] = []
    for c in work:
        v = c[:]
        for b, pr in zip(out, pivot_rows):
            f = v[pr]
            if f:
                v = [(x - f * y) % l for x, y in zip(v, b)]
        row = next((r for r in range(n) if v[r]), None)
        if row is None:
            continue
        inv = pow(v[row], -1, l)
        v = [x * inv % l for x in v]
        for b in out:
            f = b[row]
            if f:
                for r in range(n):
                    b[r] = (b[r] - f * v[r]) % l
        out.append(v)
        pivot_rows.append(row)
    order = sorted(range(len(out)), key=lambda i: pivot_rows[i])
    return [out[i] for i in order]


def _coords_in_basis(basis: list[list[int]], vec: list[int], l: int) -> list[int]:
    """Coordinates of vec in a reduced-echelon column basis (must lie in the span)."""
    pivot_rows = [next(r for r in range(len(b)) if b[r]) for b in basis]
    coords = [vec[pr] % l for pr in pivot_rows]
    residual = vec[:]
    for c, b in zip(coords, basis):
        if c:
            residual = [(x - c * y) % l for x, y in zip(residual, b)]
    if any(residual):
        raise CharacterTableError("class-sum matrices do not preserve a split subspace")
    return coords


# -- the table computation


def _choose_modulus(order: int, exponent: int, bound: int) -> int:
    from .primes import is_prime

    floor = 2 * isqrt(order - 1) + 2 if order > 1 else 2
    l = exponent + 1
    while l <= bound:
        if l > floor and (exponent == 1 or l % exponent == 1) and is_prime(l):
            return l
        l += exponent
    raise CharacterTableError(
        f"no working prime modulus = 1 (mod {exponent}) below {bound}"
    )


def character_table_small(
    group: FiniteGroup, *, modulus_bound: int = DEFAULT_MODULUS_BOUND
) -> list[ClassFunction]:
    """Complete list of irreducible characters with exact cyclotomic values.

    Characters are ordered by degree, then lexicographically by their value
    vectors, so reruns are identical.  Raises CharacterTableError when the
    group exceeds 30 classes / order 2000 or no working modulus exists.
    """
    if group.order > MAX_ORDER:
        raise CharacterTableError(f"order {group.order} exceeds bound {MAX_ORDER}")
    part = group.conjugacy_classes()
    r = len(part)
    if r > MAX_CLASSES:
        raise CharacterTableError(f"{r} classes exceeds bound {MAX_CLASSES}")
    group.ensure_table()
    n = group.order
    exponent = group.exponent()
    l = _choose_modulus(n, exponent, modulus_bound)

    inv_of = [group.inv(i) for i in range(n)]
    class_of = part.class_of
    sizes = part.sizes
    reps = part.representatives
    identity_class = class_of[group.identity]

    # structure constants: A[i][j][k] = #{x in C_i with x^(-1) z_k in C_j}
    a_mats = [[[0] * r for _ in range(r)] for _ in range(r)]
    for k, z in enumerate(reps):
        for i, members in enumerate(part.classes):
            row_k = k
            for x in members:
                j = class_of[group.mul(inv_of[x], z)]
                a_mats[i][j][row_k] += 1

    # split the r-dimensional space into common eigenlines of the A_i
    spaces = [_column_reduce([_one_hot(t, r) for t in range(r)], l)]
    for i in range(r):
        if all(len(s) == 1 for s in spaces):
            break
        spaces = _split_spaces(spaces, a_mats[i], l)
    if not all(len(s) == 1 for s in spaces):
        raise CharacterTableError("class-sum matrices failed to separate characters")

    characters = []
    g_mod = n % l
    for (vec,) in spaces:
        omega = _normalize_at(vec, identity_class, l)
        # 1/d^2 = (1/|G|) sum_k omega_k omega_{k*} / |C_k|
        inv_dsq = 0
        for k in range(r):
            kstar = class_of[inv_of[reps[k]]]
            inv_dsq = (inv_dsq + omega[k] * omega[kstar] * pow(sizes[k], -1, l)) % l
        dsq = g_mod * pow(inv_dsq, -1, l) % l
        degree = next((d for d in range(1, isqrt(n) + 1) if d * d % l == dsq), None)
        if degree is None:
            raise CharacterTableError("degree recovery failed (modulus too small?)")
        chi_mod = [degree * omega[k] * pow(sizes[k], -1, l) % l for k in range(r)]
        values = _lift_values(group, part, chi_mod, degree, exponent, l)
        characters.append((degree, values))

    table = [
        ClassFunction(group, values, name=f"chi{deg}") for deg, values in characters
    ]
    _verify_table(group, part, table, inv_of)
    table.sort(
        key=lambda cf: (
            int(cf.degree().as_rational()),
            [v.sort_key(exponent) for v in cf.values],
        )
    )
    for idx, cf in enumerate(table):
        cf.name = f"chi{idx}"
    return table


def _one_hot(t: int, r: int) -> list[int]:
    v = [0] * r
    v[t] = 1
    return v


def _split_spaces(spaces, mat, l):
    out = []
    for basis in spaces:
        if len(basis) == 1:
            out.append(basis)
            continue
        images = [_mat_vec(mat, b, l) for b in basis]
        restricted_cols = [_coords_in_basis(basis, img, l) for img in images]
        m = len(basis)
        restricted = [[restricted_cols[cc][rr] for cc in range(m)] for rr in range(m)]
        for lam in sorted(_poly_roots(_charpoly_hessenberg(restricted, l), l)):
            shifted = [
                [(restricted[rr][cc] - (lam if rr == cc else 0)) % l for cc in range(m)]
                for rr in range(m)
            ]
            null = _nullspace(shifted, l)
            if not null:
                continue
            lifted = [
                [
                    sum(nv[t] * basis[t][row] for t in range(m)) % l
                    for row in range(len(basis[0]))
                ]
                for nv in null
            ]
            out.append(_column_reduce(lifted, l))
    return out


def _normalize_at(vec: list[int], idx: int, l: int) -> list[int]:
    pivot = vec[idx] % l
    if pivot == 0:
        raise CharacterTableError("eigenvector vanishes on the identity class")
    inv = pow(pivot, -1, l)
    return [x * inv % l for x in vec]


def _lift_values(group, part, chi_mod, degree, exponent, l):
    """Exact values from mod-l values via Fourier inversion on each rep's cycle."""
    z = _root_of_unity_mod(exponent, l)
    values = []
    for k, rep in enumerate(part.representatives):
        n_k = group.element_order(rep)
        # classes of rep^t for t = 0..n_k-1
        power_class = []
        cur = group.identity
        for _ in range(n_k):
            power_class.append(part.class_of[cur])
            cur = group.mul(cur, rep)
        zeta = pow(z, exponent // n_k, l)
        zeta_inv = pow(zeta, -1, l)
        n_inv = pow(n_k, -1, l)
        coeffs = {}
        check = 0
        for j in range(n_k):
            acc = 0
            w = 1
            step = pow(zeta_inv, j, l)
            for t in range(n_k):
                acc = (acc + chi_mod[power_class[t]] * w) % l
                w = w * step % l
            mult = acc * n_inv % l
            if mult > degree:
                raise CharacterTableError("eigenvalue multiplicities failed to lift")
            if mult:
                coeffs[j] = Fraction(mult)
                check = (check + mult * pow(zeta, j, l)) % l
        if check != chi_mod[k] % l:
            raise CharacterTableError("lifted value does not reduce back mod l")
        values.append(CycValue(n_k, coeffs))
    return values


def _root_of_unity_mod(e: int, l: int) -> int:
    """z of exact multiplicative order e mod l, from the smallest primitive root."""
    if e == 1:
        return 1
    order = l - 1
    factors = set()
    m, d = order, 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for w in range(2, l):
        if all(pow(w, order // q, l) != 1 for q in factors):
            return pow(w, order // e, l)
    raise CharacterTableError(f"no primitive root mod {l}")


def _verify_table(group, part, table, inv_of) -> None:
    n = group.order
    degs = [int(cf.degree().as_rational()) for cf in table]
    if sum(d * d for d in degs) != n:
        raise CharacterTableError("degrees do not satisfy sum(d^2) = |G|")
    for a, cfa in enumerate(table):
        for b in range(a, len(table)):
            cfb = table[b]
            acc = CycValue.zero()
            for k, size in enumerate(part.sizes):
                acc = acc + size * (cfa.values[k] * cfb.values[k].conjugate())
            inner = acc.as_rational() / n
            expected = 1 if a == b else 0
            if inner != expected:
                raise CharacterTableError(
                    f"orthogonality fails for characters {a}, {b}: <a,b> = {inner}"
                )


def integer_valued_two_dimensional(table: list[ClassFunction]) -> ClassFunction:
    """The unique 2-dimensional character whose values are all rational integers.

    Raises if there is none or more than one (the binary tetrahedral group is
    expected to have exactly one; a different count is a red flag).
    """
    hits = []
    for cf in table:
        if cf.degree() == 2 and all(
            v.is_rational() and v.as_rational().denominator == 1 for v in cf.values
        ):
            hits.append(cf)
    if len(hits) != 1:
        raise CharacterTableError(
            f"expected exactly one integer-valued 2-dimensional character, found {len(hits)}"
        )
    return hits[0]
