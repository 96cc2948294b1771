"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the algorithms under test beyond the Laurent container.
"""

from itertools import product

from qfermion.laurent import Laurent


def box_partitions_gf(p: int, m: int) -> Laurent:
    """Sum of q^|lambda| over partitions fitting in an m x p box, by enumeration."""
    acc: dict = {}

    def rec(rows_left, maxpart, total):
        if rows_left == 0:
            acc[total] = acc.get(total, 0) + 1
            return
        for x in range(maxpart + 1):
            rec(rows_left - 1, x, total + x)

    rec(m, p, 0)
    return Laurent(acc)


def series_mul(a: dict, b: dict, lo: int, hi: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            if lo <= i + j <= hi:
                out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def pochhammer_tail(start: int, lo: int, hi: int, skip_zero: bool = True) -> dict:
    """prod_{j >= start} (1 - q^j) truncated to degrees in [lo, hi]; the factor
    1 - q^0 is omitted when ``skip_zero`` (it cancels between both sides)."""
    acc = {0: 1}
    for j in range(start, hi + 1):
        if j == 0 and skip_zero:
            continue
        acc = series_mul(acc, {0: 1, j: -1}, lo, hi)
    return acc


def sl_weights_multiset(rows_shape, n: int) -> dict:
    """Weights (as exponent tuples) of the gl_n Schur module by SSYT enumeration."""
    shape = [r for r in rows_shape if r]
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
    out: dict = {}
    for fill in product(range(n), repeat=len(cells)):
        t = dict(zip(cells, fill))
        ok = all(t[(i, j)] <= t[(i, j + 1)] for (i, j) in cells if (i, j + 1) in t) and \
            all(t[(i, j)] < t[(i + 1, j)] for (i, j) in cells if (i + 1, j) in t)
        if ok:
            w = [0] * n
            for v in fill:
                w[v] += 1
            out[tuple(w)] = out.get(tuple(w), 0) + 1
    return out


def box_partitions_table(pmax: int, mmax: int) -> dict:
    """(p, m) -> coefficient list of the box generating function, for all p <= pmax, m <= mmax.

    Counts non-increasing part sequences row by row: cnt[y][s] is the number
    of sequences of the rows so far with last part y and total s.
    """
    out = {}
    for p in range(pmax + 1):
        top = p * mmax
        cnt = [[0] * (top + 1) for _ in range(p + 1)]
        cnt[p][0] = 1   # a virtual row 0 of length p
        out[(p, 0)] = [1]
        for m in range(1, mmax + 1):
            # suffix sums over the previous last part x >= y
            suf = [[0] * (top + 1) for _ in range(p + 2)]
            for y in range(p, -1, -1):
                row, nxt, cur = suf[y], suf[y + 1], cnt[y]
                for s in range(top + 1):
                    row[s] = nxt[s] + cur[s]
            new = [[0] * (top + 1) for _ in range(p + 1)]
            for y in range(p + 1):
                src, dst = suf[y], new[y]
                for s in range(y, top + 1):
                    dst[s] = src[s - y]
            cnt = new
            total = [sum(cnt[y][s] for y in range(p + 1)) for s in range(p * m + 1)]
            out[(p, m)] = total
    return out
