"""Deterministic weighted hitting set via pairwise sampling and pessimistic estimators.

Quality is measured by the potential

    Phi_p(H) = (sum of weights of sets missed by H) / tau_p + |H| / (n p),
    tau_p    = sum_i w_i exp(-|S_i| p).

`solve` samples T = max(1, ceil(8 p Delta)) rounds of elements with bias
4p/T.  Each round fixes the seed of a pairwise-independent space so that the
conditional expectation of the round objective f^t never increases, using
Y = a - C(a, 2) (a = number of sampled elements of the set) as a pessimistic
estimator for "the set is hit".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .pairwise import PairwiseObjective, build_space, sample

EXP_DIGITS = 60


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class HittingInstance:
    n: int
    sets: Tuple[Tuple[int, ...], ...]
    weights: Tuple[int, ...]
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "sets", tuple(tuple(int(e) for e in s) for s in self.sets))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if self.n < 1:
            raise InstanceError("universe must be nonempty")
        if len(self.sets) != len(self.weights):
            raise InstanceError("one weight per set required")
        if not (0 < self.p <= Fraction(1, 2)):
            raise InstanceError(f"p = {self.p} outside (0, 1/2]")
        for s, w in zip(self.sets, self.weights):
            if not s:
                raise InstanceError("sets must be nonempty")
            if len(set(s)) != len(s):
                raise InstanceError("set elements must be distinct")
            if any(not (0 <= e < self.n) for e in s):
                raise InstanceError("set element outside the universe")
            if w < 0:
                raise InstanceError("weights must be nonnegative")

    @property
    def padded_count(self) -> int:
        """Number of sets after padding with zero-weight dummies up to max(n, 2)."""
        return max(len(self.sets), self.n, 2)

    @property
    def delta(self) -> int:
        return max((len(s) for s in self.sets), default=1)


@dataclass(frozen=True)
class OrderedInstance:
    n: int
    sets: Tuple[Tuple[int, ...], ...]
    p: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(int(e) for e in s) for s in self.sets))
        object.__setattr__(self, "p", Fraction(self.p))
        for s in self.sets:
            if not s or len(set(s)) != len(s) or any(not (0 <= e < self.n) for e in s):
                raise InstanceError("ordered sets must be nonempty permutations of universe elements")


@lru_cache(maxsize=None)
def exp_neg(x: Fraction) -> Fraction:
    """exp(-x) rounded to EXP_DIGITS significant decimal digits, as an exact Fraction."""
    with localcontext() as ctx:
        ctx.prec = EXP_DIGITS
        d = -(Decimal(x.numerator) / Decimal(x.denominator))
        return Fraction(d.exp())


def tau(inst: HittingInstance, p: Optional[Fraction] = None) -> Fraction:
    p = inst.p if p is None else Fraction(p)
    return sum((w * exp_neg(len(s) * p) for s, w in zip(inst.sets, inst.weights) if w), Fraction(0))


def potential(inst: HittingInstance, H: Iterable[int], p: Optional[Fraction] = None):
    p = inst.p if p is None else Fraction(p)
    chosen = set(H)
    missed = sum(w for s, w in zip(inst.sets, inst.weights) if not chosen.intersection(s))
    t = tau(inst, p)
    size_term = Fraction(len(chosen)) / (inst.n * p)
    if missed == 0:
        return size_term
    if t == 0:
        return math.inf
    return Fraction(missed) / t + size_term


def pessimistic_Y(members: Iterable[int], chosen) -> int:
    chosen = set(chosen)
    a = sum(1 for e in members if e in chosen)
    return a - a * (a - 1) // 2


@dataclass
class RoundRecord:
    t: int
    size: int
    expected: Fraction
    value: Fraction


@dataclass
class HittingResult:
    H: List[int]
    rounds: int
    p_effective: Fraction
    bias: Fraction
    certificate: List[RoundRecord] = field(default_factory=list)
    phi: object = None
    evaluations: int = 0
    seed_bits: int = 0

    @property
    def certificate_monotone(self) -> bool:
        vals = [r.value for r in self.certificate]
        return all(b <= a for a, b in zip(vals, vals[1:]))


def _integerize(values: Sequence[Fraction]) -> Tuple[List[int], int]:
    den = math.lcm(*[v.denominator for v in values]) if values else 1
    return [v.numerator * (den // v.denominator) for v in values], den


class RoundObjective:
    """f^t for one sampling round: exact value for a sample and exact conditional expectation.

    f^t(G) = sum over unhit sets of (1 - Y_i(G)) w_i exp(-|S_i|(T-t)p/T) / tau
             + (|G| + |H^1| + ... + |H^(t-1)| + 4n(T-t)p/T) / (4np)
    """

    def __init__(self, inst, alive, t, T, p, tau_p, used, space=None):
        n = inst.n
        self.n = n
        self.alive = list(alive)
        per_size: Dict[int, Fraction] = {}
        self.coef = []
        for i in self.alive:
            size = len(inst.sets[i])
            if size not in per_size:
                per_size[size] = exp_neg(size * (T - t) * p / T) / tau_p
            self.coef.append(inst.weights[i] * per_size[size])
        self.size_coef = Fraction(1) / (4 * n * p)
        self.const = (used + Fraction(4 * n * (T - t)) * p / T) * self.size_coef
        self.sets = [inst.sets[i] for i in self.alive]
        self.space = space
        self._obj = None
        self._int = None

    def value(self, chosen) -> Fraction:
        if self._int is None:
            self._int = _integerize(self.coef + [self.size_coef])
        coefs, den = self._int
        chosen = set(chosen)
        total = len(chosen) * coefs[-1]
        for s, c in zip(self.sets, coefs):
            total += (1 - pessimistic_Y(s, chosen)) * c
        return Fraction(total, den) + self.const

    @property
    def engine(self) -> PairwiseObjective:
        if self._obj is None:
            if self._int is None:
                self._int = _integerize(self.coef + [self.size_coef])
            coefs, den = self._int
            self._den = den
            self._obj = PairwiseObjective(self.space,
                                          cliques=[[e + 1 for e in s] for s in self.sets],
                                          clique_coefs=coefs[:-1],
                                          linear={i: 1 for i in range(1, self.n + 1)},
                                          lin_scale=coefs[-1])
        return self._obj

    def expectation(self, prefix=()) -> Fraction:
        """E[f^t(G) | seed prefix] for G drawn from the round's pairwise space."""
        return self.engine.expectation(prefix) / self._den + self.const


def round_parameters(inst: HittingInstance):
    """Number of rounds T, the per-round pairwise space and the effective p' = q'T/4."""
    p = inst.p
    T = max(1, math.ceil(8 * p * inst.delta))
    q = min(4 * p / T, Fraction(1, 2))
    space = build_space(inst.n, q)
    p_eff = space.bias * T / 4
    assert p <= p_eff < 2 * p
    return T, space, p_eff


def solve(inst: HittingInstance) -> HittingResult:
    """Deterministic H with a round-by-round certificate f^1(H^1) >= f^2(H^2) >= ...

    The requested bias 4p/T is rounded up to a power of two q' and the whole
    run is carried out for p' = q'T/4 in [p, 2p); everything proven for p'
    transfers to p with at most a factor 2 loss.
    """
    n = inst.n
    T, space, p_eff = round_parameters(inst)
    tau_eff = tau(inst, p_eff)

    positive = [i for i, w in enumerate(inst.weights) if w > 0]
    hit = [False] * len(inst.sets)
    H: set = set()
    used = 0
    result = HittingResult([], T, p_eff, space.bias)
    prev_value = None
    for t in range(1, T + 1):
        alive = [i for i in positive if not hit[i]]
        rnd = RoundObjective(inst, alive, t, T, p_eff, tau_eff, used, space)
        if alive:
            obj = rnd.engine
            expected = rnd.expectation(())
            seed = obj.minimize()
            chosen = [i - 1 for i in sample(space, seed)]
            result.evaluations += obj.evaluations
            result.seed_bits += space.seed_len
        else:
            # only the size term is left; the empty sample is optimal
            expected = rnd.const + n * space.bias * rnd.size_coef
            chosen = []
        value = rnd.value(chosen)
        if value > expected:
            raise AssertionError(f"round {t}: fixed value exceeds its expectation")
        if t == 1 and expected > 2:
            raise AssertionError("first-round expectation exceeds 2")
        if prev_value is not None and (expected > prev_value or value > prev_value):
            raise AssertionError(f"round {t}: certificate increased")
        result.certificate.append(RoundRecord(t, len(chosen), expected, value))
        prev_value = value
        used += len(chosen)
        H.update(chosen)
        chosen_set = set(chosen)
        for i in alive:
            if chosen_set.intersection(inst.sets[i]):
                hit[i] = True

    result.H = sorted(H)
    missed = sum(inst.weights[i] for i in positive if not hit[i])
    reached = Fraction(len(H)) / (4 * n * p_eff)
    if missed:
        reached += Fraction(missed) / tau_eff
    if reached > prev_value:
        raise AssertionError("final round value does not dominate the reached quality")
    result.phi = potential(inst, result.H)
    return result


def coverage_threshold(N: int, p: Fraction, log_base=None) -> Tuple[Decimal, int]:
    """10 log(N) / p (natural log unless `log_base` is given) and the truncation length."""
    p = Fraction(p)
    with localcontext() as ctx:
        ctx.prec = EXP_DIGITS
        log_n = Decimal(N).ln()
        if log_base is not None:
            log_n /= Decimal(log_base).ln()
        thr = 10 * log_n * Decimal(p.denominator) / Decimal(p.numerator)
        return thr, max(1, int(thr.to_integral_value(rounding="ROUND_CEILING")))


@dataclass
class CoverageResult:
    H: List[int]
    small: HittingResult
    large: HittingResult
    large_sets: List[int]
    threshold: float
    phi: object = None


def solve_with_coverage(inst: HittingInstance, log_base=None) -> CoverageResult:
    """`solve` on small sets plus a separate run forcing every large set to be hit.

    A set is large when |S| >= 10 ln(N) / p (N counts padded sets); its first
    ceil(10 ln N / p) elements form a set of weight N^2 in the second run.
    """
    N = inst.padded_count
    thr, L = coverage_threshold(N, inst.p, log_base)
    big, small = [], []
    for i, s in enumerate(inst.sets):
        (big if Decimal(len(s)) >= thr else small).append(i)
    small_inst = HittingInstance(inst.n, [inst.sets[i] for i in small], [inst.weights[i] for i in small], inst.p)
    large_inst = HittingInstance(inst.n, [inst.sets[i][:L] for i in big], [N * N] * len(big), inst.p)
    r_small = solve(small_inst)
    r_large = solve(large_inst)
    H = sorted(set(r_small.H) | set(r_large.H))
    chosen = set(H)
    for i in big:
        if not chosen.intersection(inst.sets[i][:L]):
            raise AssertionError(f"large set {i} left unhit")
    res = CoverageResult(H, r_small, r_large, big, float(thr))
    res.phi = potential(inst, H)
    return res


# -- ordered sets ------------------------------------------------------------

def ordered_cost(ordered: OrderedInstance, H: Iterable[int]) -> int:
    chosen = set(H)
    total = 0
    for s in ordered.sets:
        for pos, e in enumerate(s):
            if e in chosen:
                total += pos
                break
        else:
            total += len(s)
    return total


@dataclass
class OrderedReduction:
    instance: HittingInstance
    origin: List[int]

    def cost(self, H: Iterable[int]) -> int:
        chosen = set(H)
        inst = self.instance
        return sum(w for s, w in zip(inst.sets, inst.weights) if not chosen.intersection(s))


def reduce_ordered(ordered: OrderedInstance, p: Optional[Fraction] = None) -> OrderedReduction:
    """Prefixes of sizes 1, 2, 4, ..., 2^l (2^l <= |S| < 2^(l+1)) plus S, weighted by size.

    The reduced cost (total weight of missed prefixes) lies between the ordered
    cost and three times it.
    """
    sets, weights, origin = [], [], []
    for idx, s in enumerate(ordered.sets):
        size = 1
        while size <= len(s):
            sets.append(s[:size])
            weights.append(size)
            origin.append(idx)
            size *= 2
        if size // 2 != len(s):
            sets.append(s)
            weights.append(len(s))
            origin.append(idx)
    inst = HittingInstance(ordered.n, sets, weights, ordered.p if p is None else p)
    return OrderedReduction(inst, origin)


# -- text format ---------------------------------------------------------------

def parse_instance(text: str, ordered: bool = False):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            try:
                rows.append((lineno, [int(x) for x in line.split()]))
            except ValueError:
                raise InstanceError(f"line {lineno}: non-integer token") from None
    if not rows:
        raise InstanceError("empty instance")
    lineno, head = rows[0]
    if len(head) != 4:
        raise InstanceError(f"line {lineno}: header must be 'n N p_num p_den'")
    n, N, pn, pd = head
    if pd == 0:
        raise InstanceError(f"line {lineno}: zero denominator")
    if len(rows) - 1 != N:
        raise InstanceError(f"header announces {N} sets, found {len(rows) - 1}")
    sets, weights = [], []
    for lineno, nums in rows[1:]:
        if not ordered:
            if not nums:
                raise InstanceError(f"line {lineno}: missing weight")
            weights.append(nums[0])
            nums = nums[1:]
        if not nums or nums[0] != len(nums) - 1:
            raise InstanceError(f"line {lineno}: set length does not match element count")
        sets.append(tuple(e - 1 for e in nums[1:]))
    p = Fraction(pn, pd)
    try:
        if ordered:
            return OrderedInstance(n, sets, p)
        return HittingInstance(n, sets, weights, p)
    except InstanceError as exc:
        raise InstanceError(f"invalid instance: {exc}") from None


def dump_instance(inst) -> str:
    p = Fraction(inst.p)
    lines = [f"{inst.n} {len(inst.sets)} {p.numerator} {p.denominator}"]
    if isinstance(inst, OrderedInstance):
        for s in inst.sets:
            lines.append(" ".join(str(x) for x in [len(s)] + [e + 1 for e in s]))
    else:
        for s, w in zip(inst.sets, inst.weights):
            lines.append(" ".join(str(x) for x in [w, len(s)] + [e + 1 for e in s]))
    return "\n".join(lines) + "\n"
