"""Brute-force search for a ranking of the subsets of a 5-element set that
violates the classical cancelation condition.

Start from the additive ranking induced by weights 2^i (subset value = bitmask),
swap one adjacent pair of disjoint subsets, and look for a violating
indicator-sum identity 1_A1 + ... + 1_An = 1_B1 + ... + 1_Bn (n <= 2) with
A_i <= B_i and one strict. Representability of the result is cross-checked with
an LP (max margin over the probability simplex).
"""
import itertools
import numpy as np
from scipy.optimize import linprog

N = 5
FULL = (1 << N) - 1

def ind(mask):
    return np.array([(mask >> i) & 1 for i in range(N)])

def find_violation(rank):
    pos = {m: r for r, m in enumerate(rank)}
    subsets = range(FULL + 1)
    for a1, b1 in itertools.product(subsets, subsets):
        if pos[a1] >= pos[b1]:
            continue  # want a1 < b1 strictly
        diff = ind(b1) - ind(a1)
        for a2 in subsets:
            b2v = ind(a2) - diff  # 1_a1 + 1_a2 = 1_b1 + 1_b2
            if b2v.min() < 0 or b2v.max() > 1:
                continue
            b2 = int(sum(int(v) << i for i, v in enumerate(b2v)))
            if pos[a2] <= pos[b2]:
                return (a1, a2), (b1, b2)
    return None

def representable(rank):
    # variables p_0..p_4, eps; maximize eps s.t. p(b)-p(a) >= eps for consecutive a<b
    A, b = [], []
    for lo, hi in zip(rank, rank[1:]):
        A.append(list(ind(lo) - ind(hi)) + [1.0]); b.append(0.0)
    res = linprog(c=[0] * N + [-1], A_ub=A, b_ub=b, A_eq=[[1] * N + [0]], b_eq=[1],
                  bounds=[(0, None)] * N + [(None, 1)])
    return res.status == 0 and -res.fun > 1e-9

base = list(range(FULL + 1))
assert representable(base) and find_violation(base) is None
for k in range(1, FULL):
    x, y = base[k], base[k + 1]
    if x & y:
        continue
    rank = base[:]
    rank[k], rank[k + 1] = y, x
    v = find_violation(rank)
    if v is not None:
        print("swap", x, y, "rank prefix", rank[:8])
        print("violation lhs", v[0], "rhs", v[1])
        print("LP representable:", representable(rank))
        break
