"""Coalescing sign-driven walks on a discrete circle, and their chains.

A sign field puts one +1/-1 arrow on every cell (u, x) of the parity
sublattice (u + x even) of {0..T} x Z_N.  A walker at position x at time
u moves to x + sign(u, x); walkers sharing a cell share the arrow, so
trajectories coalesce and never cross.  Running every admissible start
from time s to time t gives a monotone map of the circle, and these maps
compose like a flow.

The second half of the module studies the half-difference chain of two
walkers: a lazy walk stepping -1, 0, +1 with weights 1/4, 1/2, 1/4.
Freezing that chain at 0 on a schedule S of times links three exactly
computable quantities: the averaged probability that the zero set of
the chain stays inside a shifted copy of S, the frozen chain's zero
occupation, and the correlation of two walkers driven by fields that
share their signs exactly on S.  All three are computed by independent
integer DPs and checked for exact rational equality.

Finally, a conditional-correlation bound: observables of gated data
(X_0, X_1 Y_1, ..., X_n Y_n) can correlate with an observable of the
companions Y only up to sqrt(max_k P(X_k = 1)); the checker computes
the exact best correlation by a small spectral problem.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

import numpy as np

from .config import (
    CORRELATION_ATOM_CAP,
    EIGEN_TOL,
    SUBSET_ENUM_CAP,
    ZERO_SPECTRAL_N_CAP,
    get_budget,
)
from .errors import BudgetExceeded, InvalidParameter, ParityMismatch
from .reporting import ExperimentReport


class SignField:
    """Arrows on the parity sublattice of {0..T-1} x Z_N."""

    __slots__ = ("N", "T", "signs")

    def __init__(self, N, T, signs):
        if N % 2 or N < 2:
            raise InvalidParameter("circumference N must be even and >= 2")
        if T < 0:
            raise InvalidParameter("horizon T must be >= 0")
        signs = np.asarray(signs, dtype=np.int8)
        if signs.shape != (T, N // 2):
            raise InvalidParameter("signs must have shape (T, N/2)")
        if signs.size and not np.all(np.abs(signs) == 1):
            raise InvalidParameter("signs must be +1 or -1")
        signs = signs.copy()
        signs.setflags(write=False)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "signs", signs)

    def __setattr__(self, name, value):
        raise AttributeError("SignField is immutable")

    def sign(self, u, x):
        """Arrow at time u, position x; the cell must sit on the sublattice."""
        if not 0 <= u < self.T:
            raise InvalidParameter("time %d outside the field horizon" % (u,))
        x %= self.N
        if (u + x) % 2:
            raise InvalidParameter("cell (%d, %d) is off the sublattice" % (u, x))
        # row u stores cells x = (u mod 2), (u mod 2) + 2, ... in order
        return int(self.signs[u, x // 2])

    @classmethod
    def random(cls, N, T, rng):
        return cls(N, T, rng.integers(0, 2, size=(T, N // 2)) * 2 - 1)

    @classmethod
    def from_bits(cls, N, T, bits):
        """Decode a field from the low T*N/2 bits of an integer."""
        cells = T * (N // 2)
        rows = np.zeros((T, N // 2), dtype=np.int8)
        for j in range(cells):
            rows[j // (N // 2), j % (N // 2)] = 1 if (bits >> j) & 1 else -1
        return cls(N, T, rows)


def enumerate_fields(N, T, budget=None):
    """All sign fields on the sublattice; 2^(T*N/2) of them."""
    cells = T * (N // 2)
    cap = get_budget(budget)
    if cells >= 63 or (1 << cells) > cap:
        raise BudgetExceeded("2^%d fields exceed budget %d" % (cells, cap))
    for bits in range(1 << cells):
        yield SignField.from_bits(N, T, bits)


class WebMap:
    """The circle map sending time-s positions to their time-t endpoints."""

    __slots__ = ("N", "s_parity", "t_parity", "values")

    def __init__(self, N, s_parity, t_parity, values):
        values = tuple(int(v) % N for v in values)
        if len(values) != N // 2:
            raise InvalidParameter("a web map needs one image per domain cell")
        for v in values:
            if (v + t_parity) % 2:
                raise InvalidParameter("image %d has the wrong parity" % (v,))
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "s_parity", s_parity % 2)
        object.__setattr__(self, "t_parity", t_parity % 2)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("WebMap is immutable")

    def domain(self):
        return tuple(range(self.s_parity, self.N, 2))

    def apply(self, x):
        """Image of x; off-parity starts are rounded down one position."""
        x %= self.N
        if (x + self.s_parity) % 2:
            x = (x - 1) % self.N
        return self.values[x // 2]

    def left_critical_points(self):
        """Domain points whose image differs from their left neighbor's."""
        vals = self.values
        k = len(vals)
        return tuple(self.domain()[j] for j in range(k)
                     if vals[j] != vals[(j - 1) % k])

    def __eq__(self, other):
        return (isinstance(other, WebMap) and other.N == self.N
                and other.s_parity == self.s_parity
                and other.t_parity == self.t_parity
                and other.values == self.values)

    def __hash__(self):
        return hash((self.N, self.s_parity, self.t_parity, self.values))

    def __repr__(self):
        return "WebMap(N=%d, %d->%d, values=%r)" % (
            self.N, self.s_parity, self.t_parity, self.values)


def evolve_web(field, s, t):
    """Run every admissible start from time s to time t through the field."""
    if not 0 <= s <= t <= field.T:
        raise InvalidParameter("need 0 <= s <= t <= T")
    positions = list(range(s % 2, field.N, 2))
    for u in range(s, t):
        positions = [(x + field.sign(u, x)) % field.N for x in positions]
    return WebMap(field.N, s, t, positions)


def compose_maps(first, second):
    """Apply `first`, then `second`; parities must chain."""
    if not isinstance(first, WebMap) or not isinstance(second, WebMap):
        raise InvalidParameter("compose_maps expects two WebMaps")
    if first.N != second.N:
        raise InvalidParameter("maps live on different circles")
    if first.t_parity != second.s_parity:
        raise ParityMismatch(
            "cannot chain parity %d->%d with %d->%d"
            % (first.s_parity, first.t_parity,
               second.s_parity, second.t_parity))
    return WebMap(first.N, first.s_parity, second.t_parity,
                  tuple(second.apply(v) for v in first.values))


def critical_count(web_map):
    """Number of distinct trajectories the map still distinguishes."""
    return len(set(web_map.values))


def critical_count_law(N, s, t, budget=None):
    """Exact law of critical_count(evolve(s, t)): count -> Fraction."""
    tally = {}
    fields = 0
    for field in enumerate_fields(N, t, budget=budget):
        k = critical_count(evolve_web(field, s, t))
        tally[k] = tally.get(k, 0) + 1
        fields += 1
    return {k: Fraction(v, fields) for k, v in sorted(tally.items())}


def expected_critical_count(N, s, t, budget=None):
    """Exact mean of critical_count(evolve(s, t)) over all fields."""
    law = critical_count_law(N, s, t, budget=budget)
    return sum((k * w for k, w in law.items()), Fraction(0))


def mc_critical_counts(N, s, t, samples, rng):
    """Sampled distinct-trajectory counts, one entry per simulated field."""
    if N % 2 or N < 2:
        raise InvalidParameter("circumference N must be even and >= 2")
    walkers = N // 2
    pos = np.tile(np.arange(s % 2, N, 2, dtype=np.int64), (samples, 1))
    for u in range(s, t):
        # row u has one arrow per sublattice cell; walker at x reads cell x//2
        arrows = rng.integers(0, 2, size=(samples, walkers)) * 2 - 1
        pos = (pos + np.take_along_axis(arrows, pos // 2, axis=1)) % N
    pos.sort(axis=1)
    return 1 + np.sum(np.diff(pos, axis=1) != 0, axis=1)


def mc_critical_count(N, s, t, samples, rng):
    """Sampled mean and standard error of the distinct-trajectory count."""
    distinct = mc_critical_counts(N, s, t, samples, rng)
    mean = float(np.mean(distinct))
    se = float(np.std(distinct, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return mean, se


def web_report(N, T, samples=64, seed=None, exhaustive=False, budget=None):
    """Flow property, monotone coalescence, and rounding semantics."""
    report = ExperimentReport(
        name="web", params={"N": N, "T": T, "exhaustive": exhaustive},
        seed=None if exhaustive else seed)
    if exhaustive:
        fields = list(enumerate_fields(N, T, budget=budget))
    else:
        rng = np.random.default_rng(seed)
        fields = [SignField.random(N, T, rng) for _ in range(samples)]
    flow_bad = 0
    monotone_bad = 0
    rounding_bad = 0
    triples = [(r, s, t) for r in range(T + 1)
               for s in range(r, T + 1) for t in range(s, T + 1)]
    for field in fields:
        maps = {(s, t): evolve_web(field, s, t)
                for s in range(T + 1) for t in range(s, T + 1)}
        for r, s, t in triples:
            if compose_maps(maps[(r, s)], maps[(s, t)]) != maps[(r, t)]:
                flow_bad += 1
        for s in range(1, T + 1):
            # growing the interval on the left can only merge trajectories
            if critical_count(maps[(s - 1, T)]) > critical_count(maps[(s, T)]):
                monotone_bad += 1
        wm = maps[(0, T)]
        for x in range(N):
            expected = wm.values[((x - 1) % N) // 2] if (x % 2) != (0 % 2) \
                else wm.values[x // 2]
            if wm.apply(x) != expected:
                rounding_bad += 1
    report.add_check("flow_property", flow_bad, 0, flow_bad == 0)
    report.add_check("coalescence_monotone", monotone_bad, 0, monotone_bad == 0)
    report.add_check("off_parity_rounds_down", rounding_bad, 0,
                     rounding_bad == 0)
    report.statistics["fields"] = len(fields)
    report.statistics["triples"] = len(triples)
    return report


# ---------------------------------------------------------------------------
# Half-difference chains, frozen chains, and the averaged identity.

def _normalize_schedule(schedule):
    S = frozenset(int(k) for k in schedule)
    if any(k < 0 for k in S):
        raise InvalidParameter("schedule times must be >= 0")
    return S


def halfdiff_chain_law(k):
    """Law of the lazy +-1 chain (weights 1/4, 1/2, 1/4) after k steps."""
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    # integer numerators over the implied denominator 4^k
    num = {0: 1}
    for _ in range(k):
        nxt = {}
        for pos, w in num.items():
            nxt[pos - 1] = nxt.get(pos - 1, 0) + w
            nxt[pos] = nxt.get(pos, 0) + 2 * w
            nxt[pos + 1] = nxt.get(pos + 1, 0) + w
        num = nxt
    den = 4 ** k
    return {pos: Fraction(w, den) for pos, w in num.items() if w}


def trapped_chain_law(schedule, k):
    """Law after k steps when the chain freezes at 0 at scheduled times."""
    S = _normalize_schedule(schedule)
    num = {0: 1}
    for j in range(k):
        nxt = {}
        for pos, w in num.items():
            if pos == 0 and j in S:
                nxt[0] = nxt.get(0, 0) + 4 * w
                continue
            nxt[pos - 1] = nxt.get(pos - 1, 0) + w
            nxt[pos] = nxt.get(pos, 0) + 2 * w
            nxt[pos + 1] = nxt.get(pos + 1, 0) + w
        num = nxt
    den = 4 ** k
    return {pos: Fraction(w, den) for pos, w in num.items() if w}


def trapped_zero_sum(schedule, n):
    """Sum over scheduled times k < n of P(frozen chain is at 0 at time k)."""
    S = _normalize_schedule(schedule)
    num = {0: 1}
    total = Fraction(0)
    for j in range(n):
        if j in S:
            total += Fraction(num.get(0, 0), 4 ** j)
        nxt = {}
        for pos, w in num.items():
            if pos == 0 and j in S:
                nxt[0] = nxt.get(0, 0) + 4 * w
                continue
            nxt[pos - 1] = nxt.get(pos - 1, 0) + w
            nxt[pos] = nxt.get(pos, 0) + 2 * w
            nxt[pos + 1] = nxt.get(pos + 1, 0) + w
        num = nxt
    return total


def trapped_second_moment(schedule, n):
    """E[X_n^2] for the frozen chain."""
    law = trapped_chain_law(schedule, n)
    return sum(w * pos * pos for pos, w in law.items())


def zero_inclusion_prob(k, schedule):
    """P(every zero of the free chain in [0, k] lands at a time j with k-j scheduled)."""
    S = _normalize_schedule(schedule)
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    if k not in S:
        return Fraction(0)   # time 0 is always a zero and needs k - 0 in S
    num = {0: 1}
    for j in range(1, k + 1):
        nxt = {}
        for pos, w in num.items():
            nxt[pos - 1] = nxt.get(pos - 1, 0) + w
            nxt[pos] = nxt.get(pos, 0) + 2 * w
            nxt[pos + 1] = nxt.get(pos + 1, 0) + w
        if (k - j) not in S:
            nxt.pop(0, None)
        num = nxt
    return Fraction(sum(num.values()), 4 ** k)


def averaged_zero_inclusion(n, schedule):
    """(1/n) sum_{k=0}^{n-1} zero_inclusion_prob(k, S)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    S = _normalize_schedule(schedule)
    total = sum((zero_inclusion_prob(k, S) for k in range(n)), Fraction(0))
    return total / n


def resampling_correlation(n, schedule):
    """E[X_n Y_n] for two walks sharing their sign exactly at scheduled times.

    X and Y are simple +-1 walks from 0.  At a scheduled time they step
    together when they sit on the same site, otherwise (different sites,
    or an unscheduled time) they step independently.  Exact integer DP
    over pairs with denominator 16^n.
    """
    S = _normalize_schedule(schedule)
    if n < 0:
        raise InvalidParameter("n must be >= 0")
    num = {(0, 0): 1}
    for j in range(n):
        shared = j in S
        nxt = {}
        for (x, y), w in num.items():
            if shared and x == y:
                nxt[(x + 1, y + 1)] = nxt.get((x + 1, y + 1), 0) + 8 * w
                nxt[(x - 1, y - 1)] = nxt.get((x - 1, y - 1), 0) + 8 * w
            else:
                for dx in (-1, 1):
                    for dy in (-1, 1):
                        key = (x + dx, y + dy)
                        nxt[key] = nxt.get(key, 0) + 4 * w
        num = nxt
    total = sum(x * y * w for (x, y), w in num.items())
    return Fraction(total, 16 ** n)


def _iter_schedules(n):
    for bits in range(1 << n):
        yield frozenset(j for j in range(n) if bits >> j & 1)


def theorem79_check(n, mode="all", sample_count=64, seed=None, budget=None):
    """Averaged zero-inclusion equals the frozen chain's zero occupation.

    For every schedule S inside {0..n-1}, checks the exact rational
    identity (1/n) sum_k P(zeros of the free chain in [0,k] sit in k-S)
    = (1/n) sum_{k in S} P(frozen chain at 0 at time k).
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    report = ExperimentReport(name="theorem79",
                              params={"n": n, "mode": mode},
                              seed=None if mode == "all" else seed)
    if mode == "all":
        cap = min(get_budget(budget), SUBSET_ENUM_CAP)
        if (1 << n) > cap:
            raise BudgetExceeded(
                "2^%d schedules exceed budget %d" % (n, cap))
        schedules = list(_iter_schedules(n))
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        schedules = [frozenset(int(j) for j in range(n)
                               if rng.integers(0, 2))
                     for _ in range(sample_count)]
    else:
        raise InvalidParameter("mode must be 'all' or 'sample'")
    mismatches = 0
    detail = len(schedules) <= 64
    for S in schedules:
        lhs = averaged_zero_inclusion(n, S)
        rhs = trapped_zero_sum(S, n) / n
        ok = lhs == rhs
        if not ok:
            mismatches += 1
        if detail:
            label = "s" + "".join(str(j) for j in sorted(S)) if S else "empty"
            report.add_check("schedule_%s" % label, lhs, rhs, ok)
    report.add_check("all_schedules_agree", mismatches, 0, mismatches == 0)
    report.statistics["schedules_checked"] = len(schedules)
    return report


def zero_spectral_identity(n, budget=None):
    """Tie the pair correlation to the frozen chain, schedule by schedule.

    For every S: the shared-sign pair correlation E[X_n Y_n] must equal
    both n - 2 E[(half-difference frozen at S)_n^2] and the frozen
    chain's zero occupation sum, and n times the averaged zero-inclusion
    probability must equal the same number.  All comparisons are exact.
    """
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if n > ZERO_SPECTRAL_N_CAP:
        raise BudgetExceeded(
            "pair identity capped at n=%d" % ZERO_SPECTRAL_N_CAP)
    report = ExperimentReport(name="zero_spectral", params={"n": n})
    bad_pair = 0
    bad_zero = 0
    bad_avg = 0
    for S in _iter_schedules(n):
        corr = resampling_correlation(n, S)
        second = trapped_second_moment(S, n)
        zero_sum = trapped_zero_sum(S, n)
        avg = averaged_zero_inclusion(n, S)
        if corr != n - 2 * second:
            bad_pair += 1
        if corr != zero_sum:
            bad_zero += 1
        if n * avg != corr:
            bad_avg += 1
    report.add_check("pair_equals_second_moment", bad_pair, 0, bad_pair == 0)
    report.add_check("pair_equals_zero_occupation", bad_zero, 0, bad_zero == 0)
    report.add_check("pair_equals_scaled_inclusion", bad_avg, 0, bad_avg == 0)
    report.statistics["schedules_checked"] = 1 << n
    return report


# ---------------------------------------------------------------------------
# Conditional-correlation bound for gated observations.

@dataclass(frozen=True)
class CorrelationBoundInstance:
    """A finite joint law for the gated-observation bound.

    head_gate_law: pairs ((x0, g1..gn), prob) giving the joint law of the
    head value x0 and the 0/1 gates; companion_laws: per coordinate, the
    marginal law of the independent companion Y_k as (value, prob) pairs.
    """

    head_gate_law: tuple
    companion_laws: tuple

    @property
    def n(self):
        return len(self.companion_laws)

    def gate_open_probability(self, k):
        """P(gate k is 1), exact."""
        return sum((w for (vec, w) in self.head_gate_law if vec[k + 1] == 1),
                   Fraction(0))

    def validate(self):
        total = sum((w for _, w in self.head_gate_law), Fraction(0))
        if total != 1:
            raise InvalidParameter("head/gate law must sum to 1")
        for vec, w in self.head_gate_law:
            if len(vec) != self.n + 1:
                raise InvalidParameter("head/gate atoms must have n+1 entries")
            if w <= 0:
                raise InvalidParameter("head/gate weights must be positive")
            if any(g not in (0, 1) for g in vec[1:]):
                raise InvalidParameter("gates must be 0 or 1")
        for law in self.companion_laws:
            tot = sum((w for _, w in law), Fraction(0))
            if tot != 1:
                raise InvalidParameter("companion laws must sum to 1")
            if any(w <= 0 for _, w in law):
                raise InvalidParameter("companion weights must be positive")
            if len({v for v, _ in law}) != len(law):
                raise InvalidParameter("companion atoms must be distinct")


def lemma74_bound_check(instance, tol=EIGEN_TOL):
    """Exact best correlation of the gated data with the companions.

    Builds the conditional expectations E[1{Y=y} | gated data] atom by
    atom in rational arithmetic, then solves the small spectral problem
    for the largest squared correlation over mean-zero observables of Y.
    That value must stay below max_k P(gate k open), up to tol for the
    final floating-point eigenvalue stage.
    """
    instance.validate()
    n = instance.n
    y_atoms = list(itertools.product(*[[v for v, _ in law]
                                       for law in instance.companion_laws]))
    y_probs = []
    for y in y_atoms:
        w = Fraction(1)
        for k, law in enumerate(instance.companion_laws):
            w *= dict(law)[y[k]]
        y_probs.append(w)
    if len(instance.head_gate_law) * len(y_atoms) > CORRELATION_ATOM_CAP:
        raise BudgetExceeded("instance exceeds the atom budget")

    # group atoms by what the gated data reveals: (x0, g1*y1, ..., gn*yn)
    cells = {}
    for vec, wx in instance.head_gate_law:
        x0, gates = vec[0], vec[1:]
        for yi, y in enumerate(y_atoms):
            key = (x0,) + tuple(g * v for g, v in zip(gates, y))
            cells.setdefault(key, []).append((yi, wx * y_probs[yi]))

    d = len(y_atoms)
    gram = [[Fraction(0)] * d for _ in range(d)]
    for atoms in cells.values():
        cell_mass = sum((w for _, w in atoms), Fraction(0))
        by_y = {}
        for yi, w in atoms:
            by_y[yi] = by_y.get(yi, Fraction(0)) + w
        items = list(by_y.items())
        for i, (yi, wi) in enumerate(items):
            for yj, wj in items[i:]:
                v = wi * wj / cell_mass
                gram[yi][yj] += v
                if yi != yj:
                    gram[yj][yi] += v

    q = np.array([float(w) for w in y_probs])
    s = np.array([[float(v) for v in row] for row in gram])
    root = np.sqrt(q)
    s_tilde = s / np.outer(root, root)
    proj = np.eye(d) - np.outer(root, root)   # root is unit length
    mat = proj @ s_tilde @ proj
    mat = (mat + mat.T) / 2.0
    norm_sq = float(max(np.linalg.eigvalsh(mat).max(), 0.0))

    bound = max((instance.gate_open_probability(k) for k in range(n)),
                default=Fraction(0))
    report = ExperimentReport(name="lemma74_bound", params={"n": n})
    report.add_check("correlation_le_gate_bound", norm_sq,
                     float(bound) + tol, norm_sq <= float(bound) + tol)
    report.statistics["norm_squared"] = norm_sq
    report.statistics["bound"] = bound
    report.statistics["y_atoms"] = d
    return report


def tightness_instance(q):
    """n=1 instance whose best squared correlation is exactly q."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise InvalidParameter("q must lie strictly between 0 and 1")
    return CorrelationBoundInstance(
        head_gate_law=(((0, 1), q), ((0, 0), 1 - q)),
        companion_laws=((( -1, Fraction(1, 2)), (1, Fraction(1, 2))),),
    )


def random_correlation_instance(n, max_head_atoms, max_support, rng, den=8):
    """A random exact instance: gates, head values, and companion laws."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    atom_count = int(rng.integers(1, max_head_atoms + 1))
    seen = set()
    while len(seen) < atom_count:
        x0 = int(rng.integers(0, 3))
        gates = tuple(int(g) for g in rng.integers(0, 2, size=n))
        seen.add((x0,) + gates)
    weights = [int(rng.integers(1, den + 1)) for _ in seen]
    total = sum(weights)
    head_gate = tuple((vec, Fraction(w, total))
                      for vec, w in zip(sorted(seen), weights))
    companions = []
    for _ in range(n):
        size = int(rng.integers(1, max_support + 1))
        values = rng.choice(np.arange(-3, 4), size=size, replace=False)
        probs = [int(rng.integers(1, den + 1)) for _ in range(size)]
        tot = sum(probs)
        companions.append(tuple((int(v), Fraction(w, tot))
                                for v, w in zip(sorted(values.tolist()), probs)))
    return CorrelationBoundInstance(head_gate_law=head_gate,
                                    companion_laws=tuple(companions))


def lemma74_batch_report(instances, tol=EIGEN_TOL):
    """Run the bound check over many instances; one summary check."""
    report = ExperimentReport(name="lemma74", params={"count": len(instances)})
    violations = 0
    worst_gap = -1.0
    for inst in instances:
        sub = lemma74_bound_check(inst, tol=tol)
        norm_sq = sub.statistics["norm_squared"]
        bound = float(sub.statistics["bound"])
        gap = norm_sq - bound
        worst_gap = max(worst_gap, gap)
        if not sub.passed:
            violations += 1
    report.add_check("all_instances_bounded", violations, 0, violations == 0)
    report.statistics["worst_gap"] = worst_gap
    report.statistics["instances"] = len(instances)
    return report
