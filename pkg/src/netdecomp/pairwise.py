"""Pairwise-independent Bernoulli(2^-l) variables from an l*m bit seed.

Variable i (1 <= i <= 2^m - 1) gets an l-bit label whose j-th bit is the
parity of (i AND r_j), where r_j is the j-th m-bit group of the seed; X_i is 1
iff every label bit is 1.  Seed bit j*m + k is bit k of group r_j.

Besides the plain space this module offers exact conditional first and second
moments under a fixed seed prefix, a greedy bit-fixing driver, and
`PairwiseObjective`, a vectorised evaluator for the quadratic objectives used
by the hitting-set, delay and isolation code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class PairwiseSpace:
    n: int
    ell: int
    m: int

    @property
    def seed_len(self) -> int:
        return self.ell * self.m

    @property
    def bias(self) -> Fraction:
        return Fraction(1, 1 << self.ell)


def build_space(n: int, q_request) -> PairwiseSpace:
    """Smallest space over 1..n whose bias is a power of two in [q, 2q)."""
    q = Fraction(q_request)
    if not (0 < q <= Fraction(1, 2)):
        raise ValueError(f"bias request {q} outside (0, 1/2]")
    if n < 1:
        raise ValueError("universe size must be >= 1")
    ell = 0
    while Fraction(1, 1 << (ell + 1)) >= q:
        ell += 1
    m = max(1, int(n).bit_length())
    return PairwiseSpace(int(n), ell, m)


def as_bits(seed: Union[str, Iterable[int]]) -> Bits:
    if isinstance(seed, str):
        out = tuple(int(c) for c in seed)
    else:
        out = tuple(int(b) for b in seed)
    if any(b not in (0, 1) for b in out):
        raise ValueError("seed bits must be 0 or 1")
    return out


def group_values(space: PairwiseSpace, bits: Sequence[int]) -> Tuple[List[int], int, int, int]:
    """Split a prefix into full group values, the current group index, its fixed width and partial value."""
    m = space.m
    g, t = divmod(len(bits), m)
    # bit k of a group has weight 2^k, so read each chunk as a reversed binary string
    text = "".join("1" if b else "0" for b in bits)
    full = [int(text[j * m:(j + 1) * m][::-1], 2) for j in range(g)]
    part = int(text[g * m:][::-1], 2) if t else 0
    return full, g, t, part


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def eval_variable(space: PairwiseSpace, seed, i: int) -> int:
    bits = as_bits(seed)
    if len(bits) != space.seed_len:
        raise ValueError(f"seed has {len(bits)} bits, expected {space.seed_len}")
    if not (1 <= i <= space.n):
        raise ValueError(f"index {i} outside 1..{space.n}")
    full, _, _, _ = group_values(space, bits)
    return int(all(_parity(i & r) for r in full))


def sample(space: PairwiseSpace, seed) -> List[int]:
    """Indices i in 1..n with X_i = 1 under a full seed."""
    bits = as_bits(seed)
    if len(bits) != space.seed_len:
        raise ValueError(f"seed has {len(bits)} bits, expected {space.seed_len}")
    full, _, _, _ = group_values(space, bits)
    idx = np.arange(1, space.n + 1, dtype=np.int64)
    keep = np.ones(space.n, dtype=bool)
    for r in full:
        keep &= (np.bitwise_count(idx & r) & 1).astype(bool)
    return idx[keep].tolist()


class _Conditioner:
    """Exact per-variable and per-pair probabilities given a seed prefix."""

    def __init__(self, space: PairwiseSpace, prefix):
        bits = as_bits(prefix)
        if len(bits) > space.seed_len:
            raise ValueError("prefix longer than the seed")
        self.space = space
        self.full, self.g, self.t, self.part = group_values(space, bits)
        self.free = space.ell - self.g - 1

    def _alive(self, i: int) -> bool:
        return all(_parity(i & r) for r in self.full)

    def single(self, i: int) -> Fraction:
        if not self._alive(i):
            return Fraction(0)
        if self.g == self.space.ell:
            return Fraction(1)
        if i >> self.t:
            f = Fraction(1, 2)
        else:
            f = Fraction(_parity(i & self.part))
        return f / (1 << self.free)

    def pair(self, i: int, j: int) -> Fraction:
        if i == j:
            return self.single(i)
        if not (self._alive(i) and self._alive(j)):
            return Fraction(0)
        if self.g == self.space.ell:
            return Fraction(1)
        hi, hj = i >> self.t, j >> self.t
        ci, cj = _parity(i & self.part), _parity(j & self.part)
        if hi and hj:
            if hi != hj:
                f = Fraction(1, 4)
            else:
                f = Fraction(1, 2) if ci == cj else Fraction(0)
        elif hi:
            f = Fraction(cj, 2)
        elif hj:
            f = Fraction(ci, 2)
        else:
            f = Fraction(ci * cj)
        return f / (1 << (2 * self.free))


def cond_first_moment(space: PairwiseSpace, prefix, coefficients: Mapping[int, object]) -> Fraction:
    """Sum of c_i * E[X_i | prefix] over the given index -> coefficient map."""
    cond = _Conditioner(space, prefix)
    total = Fraction(0)
    for i, c in coefficients.items():
        _check_index(space, i)
        total += Fraction(c) * cond.single(i)
    return total


def cond_second_moment(space: PairwiseSpace, prefix, indices: Iterable[int], coefficient=1) -> Fraction:
    """Sum over pairs i < j of the index set of c * E[X_i X_j | prefix]."""
    cond = _Conditioner(space, prefix)
    items = sorted(set(indices))
    for i in items:
        _check_index(space, i)
    alive = [i for i in items if cond._alive(i)]
    if cond.g == space.ell:
        return Fraction(coefficient) * (len(alive) * (len(alive) - 1) // 2)
    # Pair probabilities depend only on the unfixed high bits h and the parity c of
    # the fixed low bits, so counting classes replaces the pair loop.  In units of
    # 1/4: distinct nonzero h -> 1, same h and c -> 2, same h other c -> 0,
    # h = 0 with c = 1 against nonzero h -> 2, two such -> 4.
    same_h: Counter = Counter()
    same_hc: Counter = Counter()
    high = low_one = 0
    for i in alive:
        h, c = i >> cond.t, _parity(i & cond.part)
        if h:
            high += 1
            same_h[h] += 1
            same_hc[h, c] += 1
        elif c:
            low_one += 1
    quarters = (high * (high - 1) // 2 + 2 * high * low_one + 2 * low_one * (low_one - 1)
                - sum(v * (v - 1) // 2 for v in same_h.values())
                + 2 * sum(v * (v - 1) // 2 for v in same_hc.values()))
    return Fraction(coefficient) * Fraction(quarters, 4 << (2 * cond.free))


def _check_index(space: PairwiseSpace, i: int) -> None:
    if not (1 <= i <= (1 << space.m) - 1):
        raise ValueError(f"index {i} outside 1..{(1 << space.m) - 1}")


def fix_bits(space: PairwiseSpace, objective: Callable[[Bits], object],
             skip: Optional[Callable[[Bits], bool]] = None, martingale: bool = False) -> Bits:
    """Fix seed bits greedily so the conditional expectation never increases.

    `objective(prefix)` must return E[F | prefix] (any exactly comparable
    number).  `skip(prefix)` may report that the next bit cannot influence F;
    such bits are set to 0 without evaluation.  Ties go to 0.  With
    `martingale` the value for bit 1 is derived as 2*E[F|prefix] - E[F|prefix.0]
    instead of being evaluated.
    """
    prefix: List[int] = []
    current = objective(())
    for pos in range(space.seed_len):
        if skip is not None and skip(tuple(prefix)):
            prefix.append(0)
            continue
        e0 = objective(tuple(prefix) + (0,))
        e1 = 2 * current - e0 if martingale else objective(tuple(prefix) + (1,))
        if e0 <= e1:
            bit, value = 0, e0
        else:
            bit, value = 1, e1
        if value > current:
            raise AssertionError(f"conditional expectation increased at seed bit {pos}")
        prefix.append(bit)
        current = value
    return tuple(prefix)


class PairwiseObjective:
    """F = sum_c a_c (1 - sum_{v in c} X_v + sum_{v<w in c} X_v X_w)
          + lin_scale * sum_i b_i X_i + pair_scale * sum_(i,j) c_ij X_i X_j

    Clique coefficients a_c and the two scales are arbitrary Python integers;
    b_i and c_ij are small machine integers.  Expectations are returned as
    exact integers scaled by 4^l.
    """

    def __init__(self, space: PairwiseSpace,
                 cliques: Sequence[Sequence[int]] = (),
                 clique_coefs: Sequence[int] = (),
                 linear: Optional[Mapping[int, int]] = None,
                 lin_scale: int = 1,
                 pairs: Sequence[Tuple[int, int, int]] = (),
                 pair_scale: int = 1):
        if len(cliques) != len(clique_coefs):
            raise ValueError("one coefficient per clique expected")
        self.space = space
        linear = dict(linear or {})
        referenced = set()
        for c in cliques:
            referenced.update(c)
        referenced.update(linear)
        for i, j, _ in pairs:
            referenced.add(i)
            referenced.add(j)
        for i in referenced:
            if not (1 <= i <= space.n):
                raise ValueError(f"index {i} outside 1..{space.n}")
        self.U = np.array(sorted(referenced), dtype=np.int64)
        pos = {int(v): k for k, v in enumerate(self.U.tolist())}

        keep = [k for k, c in enumerate(cliques) if len(c) > 0]
        self.const_cliques = sum(int(clique_coefs[k]) for k, c in enumerate(cliques) if len(c) == 0)
        self.clique_coefs = [int(clique_coefs[k]) for k in keep]
        members, owner = [], []
        for new_id, k in enumerate(keep):
            c = cliques[k]
            if len(set(c)) != len(c):
                raise ValueError("clique members must be distinct")
            members.extend(pos[v] for v in c)
            owner.extend([new_id] * len(c))
        self.cl_pos = np.array(members, dtype=np.int64)
        self.cl_id = np.array(owner, dtype=np.int64)
        self.n_cliques = len(keep)

        self.lin_pos = np.array([pos[i] for i in sorted(linear)], dtype=np.int64)
        self.lin_w = np.array([linear[i] for i in sorted(linear)], dtype=np.int64)
        self.lin_scale = int(lin_scale)

        self.pi = np.array([pos[i] for i, _, _ in pairs], dtype=np.int64)
        self.pj = np.array([pos[j] for _, j, _ in pairs], dtype=np.int64)
        self.pc = np.array([c for _, _, c in pairs], dtype=np.int64)
        self.pair_scale = int(pair_scale)

        self._surv_key = None
        self._surv = None
        self._surv_bits = 0
        self.evaluations = 0

    # -- helpers -----------------------------------------------------------
    def _survivors(self, full: List[int]) -> np.ndarray:
        key = tuple(full)
        if key != self._surv_key:
            surv = np.ones(len(self.U), dtype=bool)
            for r in full:
                surv &= (np.bitwise_count(self.U & r) & 1).astype(bool)
            self._surv_key, self._surv = key, surv
            self._surv_bits = int(np.bitwise_or.reduce(self.U[surv])) if surv.any() else 0
        return self._surv

    def irrelevant(self, prefix: Bits) -> bool:
        """True when the next seed bit cannot change F."""
        full, g, t, _ = group_values(self.space, prefix)
        if g >= self.space.ell:
            return True
        self._survivors(full)
        return not (self._surv_bits >> t) & 1

    def _clique_pair_counts(self, surv, h, c, t):
        """Per clique: 4^-g scaled sum over member pairs of the pair probability numerators."""
        nc = self.n_cliques
        pos = self.cl_pos
        cid = self.cl_id
        s = surv[pos]
        hh = h[pos]
        cc = c[pos]
        nz = s & (hh != 0)
        z1 = s & (hh == 0) & (cc == 1)
        Znz = np.bincount(cid[nz], minlength=nc)
        Z1 = np.bincount(cid[z1], minlength=nc)
        raw = Znz * (Znz - 1) // 2 + 2 * Z1 * Znz + 2 * Z1 * (Z1 - 1)
        if t > 0 and np.any(nz):
            width = self.space.m - t + 1
            key = (cid[nz] << width) | hh[nz]
            uk, cnt = np.unique(key, return_counts=True)
            same = np.bincount(uk >> width, weights=cnt * (cnt - 1) // 2, minlength=nc)
            key2 = (key << 1) | cc[nz]
            uk2, cnt2 = np.unique(key2, return_counts=True)
            same_c = np.bincount(uk2 >> (width + 1), weights=cnt2 * (cnt2 - 1) // 2, minlength=nc)
            raw = raw - np.rint(same).astype(np.int64) + 2 * np.rint(same_c).astype(np.int64)
        return raw

    # -- public ------------------------------------------------------------
    def scaled_expectation(self, prefix: Bits) -> int:
        """4^l * E[F | prefix] as an exact integer."""
        self.evaluations += 1
        sp = self.space
        ell = sp.ell
        full, g, t, part = group_values(sp, prefix)
        surv = self._survivors(full)
        one = 1 << (2 * ell)
        total = self.const_cliques * one
        U = self.U
        if g == ell:
            s_int = surv.astype(np.int64)
            if self.n_cliques:
                a = np.bincount(self.cl_id, weights=s_int[self.cl_pos], minlength=self.n_cliques)
                a = np.rint(a).astype(np.int64)
                vals = (1 - a + a * (a - 1) // 2).tolist()
                total += one * sum(x * y for x, y in zip(self.clique_coefs, vals) if y)
            if len(self.lin_pos):
                total += one * self.lin_scale * int(np.dot(self.lin_w, s_int[self.lin_pos]))
            if len(self.pi):
                total += one * self.pair_scale * int(np.dot(self.pc, s_int[self.pi] & s_int[self.pj]))
            return total

        h = U >> t
        c = (np.bitwise_count(U & part) & 1).astype(np.int64)
        # 2^l * E[X_i], equal to surv * (2 f_i) * 2^g with f_i the current-group factor
        s1 = surv.astype(np.int64) * np.where(h != 0, 1, 2 * c) * (1 << g)
        if self.n_cliques:
            L = np.bincount(self.cl_id, weights=s1[self.cl_pos], minlength=self.n_cliques)
            L = np.rint(L).astype(np.int64)
            P = self._clique_pair_counts(surv, h, c, t) * (1 << (2 * g))
            vals = (one - L * (1 << ell) + P).tolist()
            total += sum(x * y for x, y in zip(self.clique_coefs, vals) if y)
        if len(self.lin_pos):
            total += self.lin_scale * (1 << ell) * int(np.dot(self.lin_w, s1[self.lin_pos]))
        if len(self.pi):
            hi, hj = h[self.pi], h[self.pj]
            ci, cj = c[self.pi], c[self.pj]
            both = (hi != 0) & (hj != 0)
            f = np.where(both,
                         np.where(hi == hj, np.where(ci == cj, 2, 0), 1),
                         np.where((hi == 0) & (hj == 0), 4 * ci * cj,
                                  np.where(hi == 0, 2 * ci, 2 * cj)))
            f = f * (surv[self.pi] & surv[self.pj])
            total += self.pair_scale * (1 << (2 * g)) * int(np.dot(self.pc, f))
        return total

    def expectation(self, prefix=()) -> Fraction:
        return Fraction(self.scaled_expectation(as_bits(prefix)), 1 << (2 * self.space.ell))

    def value(self, chosen: Iterable[int]) -> int:
        """F evaluated at the 0/1 assignment whose ones are `chosen`."""
        on = set(chosen)
        x = np.array([1 if int(v) in on else 0 for v in self.U.tolist()], dtype=np.int64)
        total = self.const_cliques
        if self.n_cliques:
            a = np.bincount(self.cl_id, weights=x[self.cl_pos], minlength=self.n_cliques)
            a = np.rint(a).astype(np.int64)
            vals = (1 - a + a * (a - 1) // 2).tolist()
            total += sum(p * q for p, q in zip(self.clique_coefs, vals))
        if len(self.lin_pos):
            total += self.lin_scale * int(np.dot(self.lin_w, x[self.lin_pos]))
        if len(self.pi):
            total += self.pair_scale * int(np.dot(self.pc, x[self.pi] * x[self.pj]))
        return total

    def minimize(self) -> Bits:
        return fix_bits(self.space, self.scaled_expectation, skip=self.irrelevant, martingale=True)
