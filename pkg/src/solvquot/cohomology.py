"""Twisted cocycle systems: linear algebra over Z_{q^r}, lifting systems
assembled from Fox derivatives, and cocycle counting for finite sources."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .presentations import symbolic_jacobian


def invmod(a, m):
    return pow(a, -1, m)


def _valuation(x, q, r):
    if x % (q**r) == 0:
        return r
    v = 0
    while x % q == 0:
        x //= q
        v += 1
    return v


# ---------------------------------------------------------------------------
# Solving A x = b over Z_{q^r}.
#
# Row reduction with pivoting on the entry of minimal q-valuation; the pivot
# is normalized to q^v by a unit, rows below are cleared, and the rest of the
# pivot row is cleared by column operations recorded in a substitution matrix
# C (x = C y).  The result is a diagonal system q^{v_t} y_t = c_t whose
# solution set is read off directly.


@dataclass
class ModSolveResult:
    q: int
    r: int
    ncols: int
    solvable: bool
    pivot_vals: tuple
    _C: tuple = field(repr=False)
    _y0: tuple = field(repr=False)

    @property
    def modulus(self):
        return self.q**self.r

    @property
    def count_exponent(self):
        """log_q of the number of solutions of the homogeneous system."""
        free = self.ncols - len(self.pivot_vals)
        return sum(self.pivot_vals) + self.r * free

    @property
    def witness(self):
        if not self.solvable:
            return None
        return self._apply(self._y0)

    def _apply(self, y):
        M = self.modulus
        return tuple(sum(c * yy for c, yy in zip(row, y)) % M for row in self._C)

    def solutions(self, limit=None):
        """All solutions of A x = b, deterministically ordered.  With
        ``limit`` set, raises if the solution count exceeds it."""
        if not self.solvable:
            return
        q, r, M = self.q, self.r, self.modulus
        if limit is not None and self.count_exponent > 0:
            if q**self.count_exponent > limit:
                raise OverflowError("solution count exceeds limit")
        choices = []
        for t in range(self.ncols):
            if t < len(self.pivot_vals):
                v = self.pivot_vals[t]
                step = q ** (r - v)
                choices.append([(self._y0[t] + k * step) % M for k in range(q**v)])
            else:
                choices.append(list(range(M)))
        for y in itertools.product(*choices):
            yield self._apply(y)


def solve_mod_prime_power(rows, rhs, ncols, q, r=1):
    """Solve ``rows . x = rhs`` over Z_{q**r}; ``rhs=None`` means the
    homogeneous system."""
    M = q**r
    A = [[x % M for x in row] for row in rows]
    b = [x % M for x in rhs] if rhs is not None else [0] * len(A)
    nrows = len(A)
    C = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    pivot_vals = []
    t = 0
    while t < nrows and t < ncols:
        best = None
        for i in range(t, nrows):
            Ai = A[i]
            for j in range(t, ncols):
                x = Ai[j]
                if x:
                    v = _valuation(x, q, r)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        b[t], b[bi] = b[bi], b[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            for row in C:
                row[t], row[bj] = row[bj], row[t]
        qv = q**v
        u = invmod((A[t][t] // qv) % M, M)
        A[t] = [(x * u) % M for x in A[t]]
        b[t] = (b[t] * u) % M
        for i in range(t + 1, nrows):
            x = A[i][t]
            if x:
                f = x // qv
                A[i] = [(a - f * p) % M for a, p in zip(A[i], A[t])]
                b[i] = (b[i] - f * b[t]) % M
        for j in range(t + 1, ncols):
            x = A[t][j]
            if x:
                f = x // qv
                for row in A:
                    row[j] = (row[j] - f * row[t]) % M
                for row in C:
                    row[j] = (row[j] - f * row[t]) % M
        pivot_vals.append(v)
        t += 1
    solvable = all(b[i] % M == 0 for i in range(t, nrows))
    y0 = [0] * ncols
    for k, v in enumerate(pivot_vals):
        if b[k] % (q**v):
            solvable = False
            break
        y0[k] = (b[k] // (q**v)) % M
    return ModSolveResult(
        q, r, ncols, solvable, tuple(pivot_vals), tuple(tuple(r_) for r_ in C), tuple(y0)
    )


def nullspace_dim_mod_prime(rows, ncols, q):
    return solve_mod_prime_power(rows, None, ncols, q, 1).count_exponent


class MixedSolveResult:
    """Solution set of a linear system over a non-homocyclic q-group:
    unknown j lives in Z_{q^col_exps[j]} and equation i holds mod
    q^row_exps[i]."""

    def __init__(self, inner, col_exps, q, R):
        self.q = q
        self.col_exps = tuple(col_exps)
        self._inner = inner
        self._R = R
        self.solvable = inner.solvable

    @property
    def count_exponent(self):
        # each true solution lifts to Z_{q^R}^n in exactly
        # prod q^(R - ce_j) ways
        return self._inner.count_exponent - sum(self._R - ce for ce in self.col_exps)

    @property
    def witness(self):
        w = self._inner.witness
        if w is None:
            return None
        return tuple(x % self.q**ce for x, ce in zip(w, self.col_exps))

    def solutions(self):
        seen = set()
        for x in self._inner.solutions():
            t = tuple(xx % self.q**ce for xx, ce in zip(x, self.col_exps))
            if t not in seen:
                seen.add(t)
                yield t


def solve_mixed_exponents(rows, rhs, col_exps, row_exps, q):
    """Scale equation i by q^(R - row_exps[i]) -- an equivalent congruence
    mod q^R -- and solve with every unknown ranging over Z_{q^R}.  Changing
    an unknown by q^{ce_j} must not change any equation (that is exactly the
    well-definedness of the coefficient matrix on the mixed group), so true
    solutions are the coordinate reductions, each hit uniformly often."""
    R = max(list(col_exps) + list(row_exps)) if (col_exps or row_exps) else 1
    for row, re_ in zip(rows, row_exps):
        for a, ce in zip(row, col_exps):
            if (a * q**ce) % q**re_:
                raise ValueError("matrix does not act on the mixed group")
    A = []
    b = []
    for row, c, re_ in zip(rows, rhs if rhs is not None else [0] * len(rows), row_exps):
        f = q ** (R - re_)
        A.append([f * x for x in row])
        b.append(f * c)
    res = solve_mod_prime_power(A, b if rhs is not None else None, len(col_exps), q, R)
    return MixedSolveResult(res, col_exps, q, R)


# ---------------------------------------------------------------------------
# Twisted actions on a finite abelian group, split by prime.


def _mat_mul(Amat, Bmat, M):
    n = len(Amat)
    k = len(Bmat)
    return tuple(
        tuple(sum(Amat[i][t] * Bmat[t][j] for t in range(k)) % M for j in range(len(Bmat[0])))
        for i in range(n)
    )


def _mat_id(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mat_inverse(mat, q, r):
    """Inverse of a matrix over Z_{q^r}; None if singular."""
    n = len(mat)
    cols = []
    for k in range(n):
        rhs = [int(i == k) for i in range(n)]
        res = solve_mod_prime_power([list(row) for row in mat], rhs, n, q, r)
        if not res.solvable or res.count_exponent != 0:
            return None
        cols.append(res.witness)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


@dataclass
class PrimeBlock:
    q: int
    exps: tuple  # per-coordinate exponents; homocyclic iff all equal
    mats: tuple  # one matrix per source generator
    inv_mats: tuple

    @property
    def modulus(self):
        return self.q ** max(self.exps)

    def word_matrix(self, w):
        M = self.modulus
        out = _mat_id(len(self.exps))
        for g, e in w:
            out = _mat_mul(out, self.mats[g] if e == 1 else self.inv_mats[g], M)
        return out


class TwistedAction:
    """Action of source generators on a finite abelian group given as a list
    of cyclic factors; stored per prime."""

    def __init__(self, factors, gen_matrices):
        self.factors = tuple(factors)
        self.n_gens = len(gen_matrices)
        self.blocks = {}
        primes = set()
        for f in factors:
            d = 2
            n = f
            while d * d <= n:
                if n % d == 0:
                    primes.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                primes.add(n)
        for q in sorted(primes):
            idx = []
            exps = []
            for j, f in enumerate(factors):
                e = 0
                while f % q == 0:
                    f //= q
                    e += 1
                if e:
                    idx.append(j)
                    exps.append(e)
            R = max(exps)
            M = q**R
            mats = tuple(
                tuple(tuple(mat[i][j] % M for j in idx) for i in idx) for mat in gen_matrices
            )
            invs = []
            for mat in mats:
                inv = _mat_inverse(mat, q, R)
                if inv is None:
                    raise ValueError("generator action is not invertible mod %d" % M)
                invs.append(inv)
            self.blocks[q] = PrimeBlock(q, tuple(exps), mats, tuple(invs))


def evaluate_ring_element(elem, action):
    """Image of a free-group-ring element under a twisted action; one matrix
    per prime of the coefficient group."""
    out = {}
    for q, blk in action.blocks.items():
        M = blk.modulus
        n = len(blk.exps)
        acc = [[0] * n for _ in range(n)]
        for w, c in elem.terms.items():
            mat = blk.word_matrix(w)
            for i in range(n):
                for j in range(n):
                    acc[i][j] = (acc[i][j] + c * mat[i][j]) % M
        out[q] = tuple(tuple(row) for row in acc)
    return out


def twisted_z1_count(P, action):
    """|Z^1| of the source acting on a finite abelian group: the twisted
    derivative systems are solved per prime and the counts multiplied."""
    jac = symbolic_jacobian(P)
    total = 1
    for q in sorted(action.blocks):
        blk = action.blocks[q]
        dim = len(blk.exps)
        M = blk.modulus
        rows = []
        row_exps = []
        for k in range(len(P.relators)):
            mats = []
            for i in range(P.n):
                acc = [[0] * dim for _ in range(dim)]
                for w, c in jac[k][i].terms.items():
                    mat = blk.word_matrix(w)
                    for a in range(dim):
                        for b in range(dim):
                            acc[a][b] = (acc[a][b] + c * mat[a][b]) % M
                mats.append(acc)
            for a in range(dim):
                row = []
                for i in range(P.n):
                    row.extend(mats[i][a])
                rows.append(row)
                row_exps.append(blk.exps[a])
        col_exps = list(blk.exps) * P.n
        if len(set(blk.exps)) == 1:
            res = solve_mod_prime_power(rows, None, P.n * dim, q, blk.exps[0])
        else:
            res = solve_mixed_exponents(rows, None, col_exps, row_exps, q)
        total *= q**res.count_exponent
    return total


# ---------------------------------------------------------------------------
# The lifting system of a homomorphism through an elementary abelian layer.
#
# For a presentation with relators r_k and a homomorphism rho into the base
# group of a layer (E = Z_q^s, monodromy sigma, cocycle chi), the lifts of rho
# correspond to solutions (a_1..a_n) in E^n of
#
#   sum_i sigma(rho(dr_k/dx_i)) a_i  +  chi-terms(r_k, rho)  =  0,
#
# where the chi-terms collect one chi(rho(prefix), rho(letter)) per adjacent
# prefix pair and, per inverse letter, the correction
# -sigma(rho(prefix)) chi(rho(x^-1), rho(x)) twisted by the prefix in front
# of the letter (the twist is forced by expanding f(w x^-1) with the cochain
# recursion; it vanishes from sight when the relevant prefixes act
# trivially, as in all central examples).


@dataclass
class LayerAction:
    """Minimal coefficient data for one elementary abelian extension layer."""

    q: int
    s: int
    base: object  # FiniteGroupTable
    sigma: list  # per base element: s x s matrix mod q
    chi: list = None  # per pair of base elements: vector mod q; None = zero


@dataclass
class CocycleSystem:
    q: int
    s: int
    n_gens: int
    n_rels: int
    matrix: list  # (n_rels*s) x (n_gens*s) over Z_q
    chi_vec: list  # length n_rels*s; solutions solve  matrix . a = -chi_vec


def eval_word_in_table(table, images, w):
    x = 0
    mul = table.mul
    inv = table.inv
    for g, e in w:
        x = mul[x][images[g] if e == 1 else inv[images[g]]]
    return x


def build_system(P, images, layer, check=True):
    base = layer.base
    q, s = layer.q, layer.s
    if check:
        for rel in P.relators:
            if eval_word_in_table(base, images, rel) != 0:
                raise ValueError("images do not satisfy the relators")
    n, m = P.n, len(P.relators)
    jac = symbolic_jacobian(P)
    rows = [[0] * (n * s) for _ in range(m * s)]
    for k in range(m):
        for i in range(n):
            for w, c in jac[k][i].terms.items():
                sig = layer.sigma[eval_word_in_table(base, images, w)]
                for a in range(s):
                    row = rows[k * s + a]
                    for b in range(s):
                        row[i * s + b] = (row[i * s + b] + c * sig[a][b]) % q
    chi_vec = [0] * (m * s)
    chi = layer.chi
    if chi is not None:
        mul = base.mul
        inv = base.inv
        for k, rel in enumerate(P.relators):
            acc = [0] * s
            prefix = 0
            for idx, (g, e) in enumerate(rel):
                li = images[g] if e == 1 else inv[images[g]]
                if idx > 0:
                    vec = chi[prefix][li]
                    for a in range(s):
                        acc[a] = (acc[a] + vec[a]) % q
                if e == -1:
                    sig = layer.sigma[prefix]
                    vec = chi[li][images[g]]
                    for a in range(s):
                        acc[a] = (acc[a] - sum(sig[a][b] * vec[b] for b in range(s))) % q
                prefix = mul[prefix][li]
            for a in range(s):
                chi_vec[k * s + a] = acc[a]
    return CocycleSystem(q, s, n, m, rows, chi_vec)


def solve_system(sys):
    rhs = [(-x) % sys.q for x in sys.chi_vec]
    return solve_mod_prime_power(sys.matrix, rhs, sys.n_gens * sys.s, sys.q, 1)


def homogeneous_count(sys):
    """log_q of the number of solutions of the homogeneous system."""
    return solve_system(sys).count_exponent


def epsilon_and_witness(sys):
    res = solve_system(sys)
    if not res.solvable:
        return 0, None
    w = res.witness
    return 1, tuple(tuple(w[i * sys.s : (i + 1) * sys.s]) for i in range(sys.n_gens))


def solution_vectors(sys, result=None, limit=None):
    """All solutions, each a tuple of n_gens vectors in Z_q^s."""
    res = result if result is not None else solve_system(sys)
    s = sys.s
    for x in res.solutions(limit=limit):
        yield tuple(tuple(x[i * s : (i + 1) * s]) for i in range(sys.n_gens))


@dataclass
class CohomologyReport:
    """Everything the lifting step needs to know about one (source, layer,
    homomorphism) triple."""

    q: int
    z1: int
    d: int
    b1: int
    h1: int
    epsilon: int
    witness: tuple = None

    def __post_init__(self):
        if self.z1 != self.b1 * self.q**self.h1:
            raise ArithmeticError("|Z^1| must equal |B^1| |H^1|")


def analyze_layer_system(P, images, layer, check=False):
    sys = build_system(P, images, layer, check=check)
    res = solve_system(sys)
    d = res.count_exponent
    b1_dim = layer.s - fixed_subspace_dim(layer, images)
    eps = 1 if res.solvable else 0
    wit = None
    if eps:
        w = res.witness
        wit = tuple(tuple(w[i * layer.s : (i + 1) * layer.s]) for i in range(sys.n_gens))
    return CohomologyReport(
        q=layer.q,
        z1=layer.q**d,
        d=d,
        b1=layer.q**b1_dim,
        h1=d - b1_dim,
        epsilon=eps,
        witness=wit,
    )


def fixed_subspace_dim(layer, images):
    """Dimension of the simultaneous fixed space of the generator actions."""
    q, s = layer.q, layer.s
    rows = []
    for img in images:
        sig = layer.sigma[img]
        for a in range(s):
            rows.append([(sig[a][b] - (1 if a == b else 0)) % q for b in range(s)])
    return nullspace_dim_mod_prime(rows, s, q)


def h1_dim(P, images, layer, d=None):
    """dim H^1 of the source acting through the layer: the coboundary space
    has dimension s - dim(fixed subspace of the image action)."""
    if d is None:
        d = homogeneous_count(build_system(P, images, layer))
    return d - (layer.s - fixed_subspace_dim(layer, images))


# ---------------------------------------------------------------------------
# Cocycles on a finite source group, by extending values on a generating
# sequence along a breadth-first expression of every element.


def finite_source_cochains(base, sigma, q, s, chi=None, cap=10**6):
    """All maps f: base -> Z_q^s with f(gh) = f(g) + sigma_g f(h) [+ chi(g,h)],
    returned as tuples of value vectors indexed by base element."""
    from .groups import generating_sequence, bfs_expressions

    n = len(base)
    zero = (0,) * s
    if n == 1:
        return [(zero,)] if chi is None else [(zero,)]
    gens = generating_sequence(base)
    links = bfs_expressions(base, gens)
    mul = base.mul
    if (q**s) ** len(gens) > cap:
        raise OverflowError("too many candidate cochains")
    vals = list(itertools.product(range(q), repeat=s))
    out = []
    for combo in itertools.product(vals, repeat=len(gens)):
        f = [None] * n
        f[0] = zero
        for elem, parent, gp in links:
            sig = sigma[parent]
            gv = combo[gp]
            v = tuple(
                (f[parent][a] + sum(sig[a][b] * gv[b] for b in range(s))) % q
                for a in range(s)
            )
            if chi is not None:
                cv = chi[parent][gens[gp]]
                v = tuple((v[a] + cv[a]) % q for a in range(s))
            f[elem] = v
        ok = True
        for g in range(n):
            fg = f[g]
            sig = sigma[g]
            for h in range(n):
                v = tuple(
                    (fg[a] + sum(sig[a][b] * f[h][b] for b in range(s))) % q
                    for a in range(s)
                )
                if chi is not None:
                    cv = chi[g][h]
                    v = tuple((v[a] + cv[a]) % q for a in range(s))
                if v != f[mul[g][h]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(f))
    return out


def finite_source_z1(base, sigma, q, s, chi=None, cap=10**6):
    """|Z^1| of a finite source group acting on Z_q^s (twisted by chi if
    given)."""
    return len(finite_source_cochains(base, sigma, q, s, chi=chi, cap=cap))
