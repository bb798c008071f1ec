"""Brute-force ground truth: raw generator-image enumeration over a
multiplication table and direct evaluation of lifts in extension pairs.
Deliberately independent of the Fox-calculus machinery."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class OracleBudget:
    max_letter_ops: int = 10**8
    used: int = 0

    def charge(self, n):
        self.used += n
        if self.used > self.max_letter_ops:
            raise BudgetExceeded("oracle budget of %d letter operations exceeded"
                                 % self.max_letter_ops)


@dataclass
class BruteResult:
    count: int | None
    verified: bool
    letter_ops: int

    def __int__(self):
        if not self.verified:
            raise BudgetExceeded("oracle result is unverified")
        return self.count


def _hom_mask(P, table, budget):
    """Boolean mask over all |T|^n image tuples (in mixed-radix order, first
    generator most significant), True where every relator evaluates to the
    identity."""
    N = table.n
    n = P.n
    total = N**n
    arr = table.as_array()
    inv = np.array(table.inv, dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    gens = []
    for g in range(n):
        gens.append((idx // (N ** (n - 1 - g))) % N)
    mask = np.ones(total, dtype=bool)
    for rel in P.relators:
        budget.charge(len(rel) * total)
        v = np.zeros(total, dtype=np.int64)
        for g, e in rel:
            col = gens[g] if e == 1 else inv[gens[g]]
            v = arr[v, col]
        mask &= v == 0
    return mask, gens


def brute_hom(P, table, budget=None):
    budget = budget if budget is not None else OracleBudget()
    try:
        mask, _ = _hom_mask(P, table, budget)
    except BudgetExceeded:
        return BruteResult(None, False, budget.used)
    return BruteResult(int(mask.sum()), True, budget.used)


def _closure_size(table, images):
    mul = table.mul
    seen = {0}
    frontier = [0]
    gl = sorted(set(images))
    while frontier:
        new = []
        for x in frontier:
            row = mul[x]
            for g in gl:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return len(seen)


def brute_epi(P, table, budget=None):
    budget = budget if budget is not None else OracleBudget()
    try:
        mask, gens = _hom_mask(P, table, budget)
        hits = np.nonzero(mask)[0]
        count = 0
        N = table.n
        for t in hits.tolist():
            images = []
            for g in range(P.n):
                images.append((t // (N ** (P.n - 1 - g))) % N)
            budget.charge(N * P.n)
            if _closure_size(table, images) == N:
                count += 1
    except BudgetExceeded:
        return BruteResult(None, False, budget.used)
    return BruteResult(count, True, budget.used)


def brute_hom_images(P, table, budget=None):
    """The image tuples of all homomorphisms (for oracle-side enumeration of
    maps, not just counts)."""
    budget = budget if budget is not None else OracleBudget()
    mask, _ = _hom_mask(P, table, budget)
    N = table.n
    out = []
    for t in np.nonzero(mask)[0].tolist():
        out.append(tuple((t // (N ** (P.n - 1 - g))) % N for g in range(P.n)))
    return out


# ---------------------------------------------------------------------------
# Direct lift checking in an extension pair (vector, base element), using the
# layer's sigma/chi tables but its own arithmetic.


def _pair_mul(layer, x, y):
    (a1, b1), (a2, b2) = x, y
    q, s = layer.q, layer.s
    sig = layer.sigma[b1]
    cv = layer.chi[b1][b2] if layer.chi is not None else (0,) * s
    vec = tuple(
        (a1[i] + sum(sig[i][j] * a2[j] for j in range(s)) + cv[i]) % q for i in range(s)
    )
    return vec, layer.base.mul[b1][b2]


def _pair_inv(layer, x):
    a, b = x
    q, s = layer.q, layer.s
    binv = layer.base.inv[b]
    sig = layer.sigma[binv]
    cv = layer.chi[binv][b] if layer.chi is not None else (0,) * s
    vec = tuple(
        (-sum(sig[i][j] * a[j] for j in range(s)) - cv[i]) % q for i in range(s)
    )
    return vec, binv


def brute_lift_check(P, rho_images, layer, avecs, budget=None):
    """Whether generator values a_i in E assemble with rho into a
    homomorphism to the extension: every relator, multiplied out pair by
    pair, must come out to (0, identity)."""
    budget = budget if budget is not None else OracleBudget()
    s = layer.s
    zero = (0,) * s
    lifted = [ (tuple(a), b) for a, b in zip(avecs, rho_images) ]
    for rel in P.relators:
        budget.charge(len(rel))
        acc = (zero, 0)
        for g, e in rel:
            letter = lifted[g] if e == 1 else _pair_inv(layer, lifted[g])
            acc = _pair_mul(layer, acc, letter)
        if acc[0] != zero or acc[1] != 0:
            return False
    return True
