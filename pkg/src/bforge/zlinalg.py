"""Exact integer row reduction for finite abelian p-power layers.

Relation lattices L <= Z^m of full rank (they always contain p^E Z^m here)
are brought to upper-triangular Hermite form.  The quotient Z^m / L then has
the standard basis images as a polycyclic sequence: e_t has relative order
d_t (the t-th pivot) and e_t^{d_t} equals a word in later e's, which is
exactly the shape a pc presentation needs.
"""

from __future__ import annotations


def hermite_form(rows: list[list[int]], m: int) -> list[list[int]]:
    """Upper-triangular Hermite normal form of the lattice spanned by rows.

    Requires full column rank (guaranteed when modulus rows are included).
    Returns m rows; row t has positive pivot at column t, zeros before it,
    and entries above each pivot reduced into [0, pivot).
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if any(len(r) != m for r in A):
        raise ValueError("ragged relation matrix")
    out: list[list[int]] = []
    for t in range(m):
        # eliminate column t among remaining rows by repeated euclidean steps
        while True:
            piv = None
            best = None
            for i, row in enumerate(A):
                v = row[t]
                if v and (best is None or abs(v) < best):
                    best, piv = abs(v), i
            if piv is None:
                raise ValueError(f"relation lattice not full rank at column {t}")
            prow = A[piv]
            done = True
            for i, row in enumerate(A):
                if i != piv and row[t]:
                    q = row[t] // prow[t]
                    if q:
                        for j in range(t, m):
                            row[j] -= q * prow[j]
                    if row[t]:
                        done = False
            if done:
                break
        prow = A.pop(piv)
        if prow[t] < 0:
            prow = [-v for v in prow]
        out.append(prow)
        A = [row for row in A if any(row[t:])]
    # canonicalize entries above each pivot
    for t in range(m):
        for s in range(t):
            q = out[s][t] // out[t][t]
            if q:
                for j in range(t, m):
                    out[s][j] -= q * out[t][j]
    return out


def hnf_reduce(H: list[list[int]], x: list[int]) -> list[int]:
    """Unique normal form of x modulo the lattice with Hermite basis H:
    coordinates satisfy 0 <= y_t < H[t][t]."""
    y = list(map(int, x))
    m = len(H)
    for t in range(m):
        q = y[t] // H[t][t]
        if q:
            for j in range(t, m):
                y[j] -= q * H[t][j]
    return y
