# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels.  Same signatures and results as ``_pykernels``.

Sparse elimination runs on 64-bit integers and raises ``OverflowError`` once
an entry leaves the safe range; the package wrapper then reruns the pure-Python
version with arbitrary precision.
"""
from libcpp.vector cimport vector
from libcpp.map cimport map as cmap
from libcpp.set cimport set as cset
from libcpp.unordered_set cimport unordered_set
from cython.operator cimport dereference as deref, preincrement as inc

from ._pykernels import dense_invariant_factors

ctypedef long long i64
ctypedef cmap[int, i64] Col

cdef i64 SAFE = 1LL << 40


def rank_and_torsion(int nrows, columns):
    cdef int ncols = len(columns)
    cdef vector[Col] cols = vector[Col](ncols)
    cdef vector[cset[int]] rows = vector[cset[int]](nrows)
    cdef vector[char] alive = vector[char](ncols, 0)
    cdef int j, j2, r, rr, best_r, best_cnt, cnt, rank = 0
    cdef long long v, u, f, nv
    cdef bint progress = True
    cdef Col.iterator it, it2
    cdef vector[int] touched

    for j in range(ncols):
        for r, v in columns[j]:
            if v:
                if v > SAFE or v < -SAFE:
                    raise OverflowError("entry too large for the compiled kernel")
                cols[j][r] = v
                rows[r].insert(j)
        if cols[j].size():
            alive[j] = 1

    while progress:
        progress = False
        for j in range(ncols):
            if not alive[j]:
                continue
            best_r = -1
            best_cnt = 0
            it = cols[j].begin()
            while it != cols[j].end():
                v = deref(it).second
                if v == 1 or v == -1:
                    cnt = rows[deref(it).first].size()
                    if best_r < 0 or cnt < best_cnt:
                        best_cnt = cnt
                        best_r = deref(it).first
                inc(it)
            if best_r < 0:
                continue
            r = best_r
            u = cols[j][r]
            touched.assign(rows[r].begin(), rows[r].end())
            for j2 in touched:
                if j2 == j:
                    continue
                f = cols[j2][r] * u
                it = cols[j].begin()
                while it != cols[j].end():
                    rr = deref(it).first
                    it2 = cols[j2].find(rr)
                    if it2 == cols[j2].end():
                        nv = -f * deref(it).second
                        if nv > SAFE or nv < -SAFE:
                            raise OverflowError("entry too large for the compiled kernel")
                        cols[j2][rr] = nv
                        rows[rr].insert(j2)
                    else:
                        nv = deref(it2).second - f * deref(it).second
                        if nv > SAFE or nv < -SAFE:
                            raise OverflowError("entry too large for the compiled kernel")
                        if nv:
                            deref(it2).second = nv
                        else:
                            cols[j2].erase(it2)
                            rows[rr].erase(j2)
                    inc(it)
                if cols[j2].size() == 0:
                    alive[j2] = 0
            it = cols[j].begin()
            while it != cols[j].end():
                rows[deref(it).first].erase(j)
                inc(it)
            cols[j].clear()
            alive[j] = 0
            rank += 1
            progress = True

    # collect the residue through Python objects; it has no unit entries and is small
    residue = []
    for j in range(ncols):
        if alive[j]:
            col = []
            it = cols[j].begin()
            while it != cols[j].end():
                col.append((deref(it).first, deref(it).second))
                inc(it)
            residue.append(col)
    if not residue:
        return rank, []
    live_rows = sorted({r for col in residue for r, _ in col})
    rpos = {r: k for k, r in enumerate(live_rows)}
    dense = [[0] * len(residue) for _ in live_rows]
    for k, col in enumerate(residue):
        for r, v in col:
            dense[rpos[r]][k] = v
    factors = dense_invariant_factors(dense)
    return rank + len(factors), [d for d in factors if d > 1]


cdef class _Prepared:
    """Flat copies of the cover maps: entry ``x`` of map ``k`` at ``e`` is ``flat[off[e][k] + x]``.

    ``bucket`` lists each stalk grouped by the image under the first cover map;
    candidates for ``x`` with that image ``y`` are ``bucket[bstart[e][y]:bstart[e][y + 1]]``.
    """
    cdef vector[vector[int]] ucov
    cdef vector[vector[int]] off
    cdef vector[int] flat
    cdef vector[int] sizes
    cdef vector[vector[int]] bstart
    cdef vector[vector[int]] bucket

    def __init__(self, ucov, emap, sizes):
        cdef int e, k, y, x, t0
        n = len(sizes)
        self.ucov.resize(n)
        self.off.resize(n)
        self.bstart.resize(n)
        self.bucket.resize(n)
        for e in range(n):
            self.sizes.push_back(sizes[e])
        for e in range(n):
            for k, t in enumerate(ucov[e]):
                self.ucov[e].push_back(t)
                self.off[e].push_back(self.flat.size())
                for y in emap[e][k]:
                    self.flat.push_back(y)
            if self.ucov[e].size():
                t0 = self.ucov[e][0]
                self.bstart[e].assign(self.sizes[t0] + 1, 0)
                for x in range(self.sizes[e]):
                    self.bstart[e][self.flat[self.off[e][0] + x] + 1] += 1
                for y in range(self.sizes[t0]):
                    self.bstart[e][y + 1] += self.bstart[e][y]
                self.bucket[e].assign(self.sizes[e], 0)
                fill = self.bstart[e]
                for x in range(self.sizes[e]):
                    y = self.flat[self.off[e][0] + x]
                    self.bucket[e][fill[y]] = x
                    fill[y] += 1


cdef void _sections(_Prepared pr, vector[int]& order, vector[int]& pos, long limit, vector[int]& out) except *:
    """Append compatible families over ``order`` (row-major, ``len(order)`` wide) to ``out``."""
    cdef int m = order.size()
    cdef vector[int] val = vector[int](m, 0)
    cdef vector[int] nxt = vector[int](m, 0)
    cdef vector[int] hi = vector[int](m, 0)
    cdef int k = 0, x, e, c, p, y, found = 0
    cdef bint ok, fresh = True
    if m == 0:
        return
    while k >= 0:
        e = order[k]
        if fresh:
            # open the candidate range for level k
            if pr.ucov[e].size():
                y = val[pos[pr.ucov[e][0]]]
                nxt[k] = pr.bstart[e][y]
                hi[k] = pr.bstart[e][y + 1]
            else:
                nxt[k] = 0
                hi[k] = pr.sizes[e]
            fresh = False
        if nxt[k] >= hi[k]:
            k -= 1
            continue
        if pr.ucov[e].size():
            x = pr.bucket[e][nxt[k]]
        else:
            x = nxt[k]
        nxt[k] += 1
        ok = True
        for c in range(1, <int>pr.ucov[e].size()):
            p = pos[pr.ucov[e][c]]
            if pr.flat[pr.off[e][c] + x] != val[p]:
                ok = False
                break
        if not ok:
            continue
        val[k] = x
        if k == m - 1:
            out.insert(out.end(), val.begin(), val.end())
            found += 1
            if 0 <= limit <= found:
                return
        else:
            k += 1
            fresh = True


def enumerate_sections(order, ucov, emap, sizes, long limit=-1):
    cdef _Prepared pr = _Prepared(ucov, emap, sizes)
    cdef vector[int] ord_ = order
    cdef vector[int] pos = vector[int](len(sizes), -1)
    cdef vector[int] out
    cdef int k, m = ord_.size()
    if m == 0:
        return [()]
    for k in range(m):
        pos[ord_[k]] = k
    _sections(pr, ord_, pos, limit, out)
    return [tuple(out[r * m:(r + 1) * m]) for r in range(out.size() // m)]


def flabby_scan(int n, order, ucov, emap, sizes, up, down, canon, opens, bint maximal_only=False):
    cdef _Prepared pr = _Prepared(ucov, emap, sizes)
    cdef vector[int] full_order = order
    cdef vector[int] vorder, pos, secs, mins
    cdef vector[i64] radix
    cdef unordered_set[i64] codes
    cdef i64 code
    cdef vector[i64] upm = up, downm = down
    cdef vector[int] coff = vector[int](n * n, -1)
    cdef vector[int] cflat
    cdef long long V, W
    cdef int s, b, e, m, nsec, r, x, q, nm
    for (a, b2), arr in canon.items():
        coff[a * n + b2] = cflat.size()
        for y in arr:
            cflat.push_back(y)
    for V in opens:
        vorder.clear()
        for e in full_order:
            if (V >> e) & 1:
                vorder.push_back(e)
        m = vorder.size()
        pos.assign(n, -1)
        for r in range(m):
            pos[vorder[r]] = r
        secs.clear()
        _sections(pr, vorder, pos, -1, secs)
        nsec = secs.size() // m if m else 0
        if nsec == 0:
            continue
        for s in range(n):
            if (V >> s) & 1:
                continue
            if maximal_only and (upm[s] & ~V) != (1LL << s):
                continue
            W = upm[s] & V
            if W == 0:
                if pr.sizes[s] == 0:
                    return V, s, tuple(secs[0:m])
                continue
            mins.clear()
            for b in range(n):
                if (W >> b) & 1 and (downm[b] & W) == (1LL << b):
                    mins.push_back(b)
            nm = mins.size()
            # signature of each stalk element of s on the minimal elements of W,
            # packed in mixed radix over the stalk sizes of those elements
            radix.assign(nm, 1)
            for q in range(1, nm):
                radix[q] = radix[q - 1] * pr.sizes[mins[q - 1]]
                if radix[q] > SAFE:
                    raise OverflowError("signature space too large for the compiled kernel")
            codes.clear()
            for x in range(pr.sizes[s]):
                code = 0
                for q in range(nm):
                    code += radix[q] * cflat[coff[s * n + mins[q]] + x]
                codes.insert(code)
            for r in range(nsec):
                code = 0
                for q in range(nm):
                    code += radix[q] * secs[r * m + pos[mins[q]]]
                if codes.find(code) == codes.end():
                    return V, s, tuple(secs[r * m:(r + 1) * m])
    return None
