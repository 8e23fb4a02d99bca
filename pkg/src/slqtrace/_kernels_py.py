"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same names with the same semantics; ``kernels``
chooses one at import time.
"""

from __future__ import annotations


class BilinearForm:
    """Sparse integer bilinear form ``(a, b) -> sum Q[i][j] a[i] b[j]``."""

    __slots__ = ("dim", "_entries", "_upper")

    def __init__(self, matrix):
        self.dim = len(matrix)
        self._entries = [
            (i, j, w) for i, row in enumerate(matrix) for j, w in enumerate(row) if w
        ]
        self._upper = [(i, j, w) for i, j, w in self._entries if i < j]

    def pair(self, a, b):
        total = 0
        for i, j, w in self._entries:
            x = a[i]
            if x:
                y = b[j]
                if y:
                    total += w * x * y
        return total

    def lower_half(self, a):
        total = 0
        for i, j, w in self._upper:
            x = a[i]
            if x:
                total += w * x * a[j]
        return total


def laurent_mul(a, b, shift=0):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb + shift
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            elif e in out:
                del out[e]
    return out


def torus_mul(form, left, right):
    out = {}
    for ea, ca in left:
        for eb, cb in right:
            s = form.pair(ea, eb)
            key = tuple(x + y for x, y in zip(ea, eb))
            acc = out.setdefault(key, {})
            for e1, c1 in ca.items():
                for e2, c2 in cb.items():
                    e = e1 + e2 + s
                    c = acc.get(e, 0) + c1 * c2
                    if c:
                        acc[e] = c
                    elif e in acc:
                        del acc[e]
    return {k: v for k, v in out.items() if v}
