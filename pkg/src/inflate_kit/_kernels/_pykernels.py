"""Pure-Python kernels.

These are the reference implementations; ``_ckernels.pyx`` mirrors them
function for function.  Inputs are plain lists of ints so both backends share
one calling convention.
"""
from __future__ import annotations

from math import gcd


# ---------------------------------------------------------------------------
# integer matrices

def dense_invariant_factors(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (arbitrary precision).

    Diagonalizes with smallest-magnitude pivots, then normalizes the diagonal
    into a divisibility chain.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv is not None and piv[0] == 1:
                break
        if piv is None:
            break
        _, pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                break
            # a remainder survived: move the smallest entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, bi, bj = best
            a[t], a[bi] = a[bi], a[t]
            for row in a:
                row[t], row[bj] = row[bj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


def rank_and_torsion(nrows: int, columns: list[list[tuple[int, int]]]) -> tuple[int, list[int]]:
    """Rank and invariant factors > 1 of a sparse integer matrix.

    ``columns[j]`` lists ``(row, value)`` pairs.  Unit pivots are eliminated
    sparsely (Markowitz choice among units); the residue without unit entries
    goes through :func:`dense_invariant_factors`.
    """
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, set[int]] = {}
    for j, col in enumerate(columns):
        c = {r: v for r, v in col if v}
        if c:
            cols[j] = c
            for r in c:
                rows.setdefault(r, set()).add(j)
    rank = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            c = cols.get(j)
            if c is None:
                continue
            best = None
            for r, v in c.items():
                if v == 1 or v == -1:
                    cnt = len(rows[r])
                    if best is None or cnt < best[0] or (cnt == best[0] and r < best[1]):
                        best = (cnt, r)
            if best is None:
                continue
            r = best[1]
            u = c[r]
            for j2 in sorted(rows[r]):
                if j2 == j:
                    continue
                c2 = cols[j2]
                f = c2[r] * u
                for rr, vv in c.items():
                    nv = c2.get(rr, 0) - f * vv
                    if nv:
                        if rr not in c2:
                            rows[rr].add(j2)
                        c2[rr] = nv
                    elif rr in c2:
                        del c2[rr]
                        rows[rr].discard(j2)
                if not c2:
                    del cols[j2]
            for rr in c:
                rows[rr].discard(j)
            del cols[j]
            rank += 1
            progress = True
    if not cols:
        return rank, []
    live_rows = sorted({r for c in cols.values() for r in c})
    rpos = {r: k for k, r in enumerate(live_rows)}
    dense = [[0] * len(cols) for _ in live_rows]
    for k, j in enumerate(sorted(cols)):
        for r, v in cols[j].items():
            dense[rpos[r]][k] = v
    factors = dense_invariant_factors(dense)
    return rank + len(factors), [d for d in factors if d > 1]


# ---------------------------------------------------------------------------
# sections of a finite-set diagram

def enumerate_sections(order: list[int], ucov: list[list[int]], emap: list[list[list[int]]],
                       sizes: list[int], limit: int = -1) -> list[tuple[int, ...]]:
    """Compatible families over an up-closed set.

    ``order`` lists the elements of the set so that each comes after all of
    its upper covers (which must also be in the set).  ``emap[e][k]`` maps the
    stalk of ``e`` into the stalk of ``ucov[e][k]``.  Result tuples are aligned
    with ``order`` and come out in lexicographic order; at most ``limit`` are
    returned when ``limit >= 0``.
    """
    pos = {e: k for k, e in enumerate(order)}
    m = len(order)
    cons = [[(pos[t], emap[e][k]) for k, t in enumerate(ucov[e])] for e in order]
    cand_size = [sizes[e] for e in order]
    out: list[tuple[int, ...]] = []
    val = [0] * m
    nxt = [0] * m
    k = 0
    if m == 0:
        return [()]
    while k >= 0:
        if nxt[k] >= cand_size[k]:
            nxt[k] = 0
            k -= 1
            continue
        x = nxt[k]
        nxt[k] += 1
        ok = True
        for p, mp in cons[k]:
            if mp[x] != val[p]:
                ok = False
                break
        if not ok:
            continue
        val[k] = x
        if k == m - 1:
            out.append(tuple(val))
            if 0 <= limit <= len(out):
                return out
        else:
            k += 1
    return out


def flabby_scan(n: int, order: list[int], ucov: list[list[int]], emap: list[list[list[int]]],
                sizes: list[int], up: list[int], down: list[int],
                canon: dict[tuple[int, int], list[int]], opens: list[int], maximal_only: bool = False):
    """First failure of the single-step extension criterion, or ``None``.

    For each nonempty open ``V`` (bitmask, in the given order) and each
    element ``s`` outside it, every section on ``V`` must extend over
    ``V | up[s]``.  Extension holds iff some ``x`` in the stalk of ``s`` maps to
    the section's values on the minimal elements of ``up[s] & V``.

    With ``maximal_only`` only elements whose strict upper cone lies in ``V``
    are tried (one-element extensions).  Saturated chains of opens compose, so
    the verdict is the same; the witness may differ.

    Returns ``(V, s, section)`` with ``section`` aligned to ``V``'s elements
    taken in ``order``.
    """
    for V in opens:
        vorder = [e for e in order if (V >> e) & 1]
        secs = enumerate_sections(vorder, ucov, emap, sizes)
        if not secs:
            continue
        pos = {e: k for k, e in enumerate(vorder)}
        for s in range(n):
            if (V >> s) & 1:
                continue
            if maximal_only and up[s] & ~V != 1 << s:
                continue
            W = up[s] & V
            if W == 0:
                if sizes[s] == 0:
                    return V, s, secs[0]
                continue
            mins = [b for b in range(n) if (W >> b) & 1 and (down[b] & W) == (1 << b)]
            sigs = {tuple(canon[s, b][x] for b in mins) for x in range(sizes[s])}
            at = [pos[b] for b in mins]
            for sec in secs:
                if tuple(sec[p] for p in at) not in sigs:
                    return V, s, sec
    return None
