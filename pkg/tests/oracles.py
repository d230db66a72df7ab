"""Brute-force reference implementations, deliberately naive and independent of the package."""
from __future__ import annotations

import math
import re
from fractions import Fraction


def lcs_dp(a: str, b: str) -> int:
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def indel_distance(a: str, b: str) -> int:
    """Insert/delete-only edit distance by its own recurrence."""
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                d[i][j] = d[i - 1][j - 1]
            else:
                d[i][j] = 1 + min(d[i - 1][j], d[i][j - 1])
    return d[len(a)][len(b)]


def round_half_up(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


def ratio_oracle(a: str, b: str) -> int:
    if not a and not b:
        return 100
    if not a or not b:
        return 0
    return round_half_up(Fraction(100 * 2 * lcs_dp(a, b), len(a) + len(b)))


def tokens_oracle(text: str) -> list[str]:
    return [t for t in re.split(r"[^0-9a-zA-ZÀ-ɏ]+", text.lower()) if t]


def token_set_oracle(a: str, b: str) -> int:
    A, B = set(tokens_oracle(a)), set(tokens_oracle(b))
    t0 = " ".join(sorted(A & B))
    t1 = " ".join(x for x in (t0, " ".join(sorted(A - B))) if x)
    t2 = " ".join(x for x in (t0, " ".join(sorted(B - A))) if x)
    return max(ratio_oracle(t0, t1), ratio_oracle(t0, t2), ratio_oracle(t1, t2))
