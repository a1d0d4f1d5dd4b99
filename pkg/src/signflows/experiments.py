"""Scaling-limit and stability experiments over the exact machinery.

Each report here pins a rescaled discrete law against its continuum
target: the shift walk against the normal law, the reach a + 2b against
the absolute-value-process law, the rescaled plateau against the
exponentially thinned reach, trap waiting times against a truncated
exponential, and pattern counts against a Poisson law.  Exact modes
compute whole laws (no sampling) and measure the sup gap at every jump
point; Monte Carlo modes draw independent paths with a seeded PCG64
generator, so every report is reproducible from (name, params, seed).
"""

from fractions import Fraction
import math
import numbers

import numpy as np

from .config import (
    DENSE_DIMENSION_LIMIT,
    KERNEL_ABS_TOL,
    LIMIT_KS_TOL,
    MICRO_BLOCK_DECLARED_SCALE,
    MICRO_CORRELATION_TOL,
    POISSON_TV_TOL,
    SERIES_POINT_CAP,
    TRAP_KS_TOL,
    get_budget,
)
from .errors import BudgetExceeded, DimensionTooLarge, InvalidParameter
from .flow import sample_g3_endpoints, sample_trap_endpoints
from .reporting import ExperimentReport
from . import walsh as walsh_mod
from . import web as web_mod


# ---------------------------------------------------------------------------
# Distribution helpers.

def normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def maxwell_cdf(u):
    """CDF of the radial chi-3 law, the limit of the rescaled reach a + 2b."""
    if u <= 0:
        return 0.0
    return math.erf(u / math.sqrt(2.0)) \
        - math.sqrt(2.0 / math.pi) * u * math.exp(-u * u / 2.0)


def discrete_ks_against_cdf(atoms, probs, cdf):
    """Exact sup gap between a purely atomic law and a continuous CDF.

    The supremum over the whole line is attained at a jump point,
    approaching from the right (after the jump) or from the left.
    """
    order = np.argsort(np.asarray(atoms, dtype=np.float64))
    xs = np.asarray(atoms, dtype=np.float64)[order]
    ps = np.asarray(probs, dtype=np.float64)[order]
    cum = np.cumsum(ps)
    worst = 0.0
    for j, x in enumerate(xs):
        target = cdf(x)
        left = cum[j - 1] if j else 0.0
        worst = max(worst, abs(cum[j] - target), abs(target - left))
    return worst


def ecdf_ks_against_cdf(samples, cdf):
    """Sup gap between an empirical CDF and a continuous CDF."""
    xs = np.sort(np.asarray(samples, dtype=np.float64))
    count = xs.size
    worst = 0.0
    for j, x in enumerate(xs):
        target = cdf(x)
        worst = max(worst, abs((j + 1) / count - target),
                    abs(target - j / count))
    return worst


def two_sample_ks(first, second):
    """Sup gap between two empirical CDFs, evaluated at every jump."""
    a = np.sort(np.asarray(first, dtype=np.float64))
    b = np.sort(np.asarray(second, dtype=np.float64))
    pooled = np.unique(np.concatenate([a, b]))
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def exp1_from_uniform(u):
    """Unit exponential by the inverse CDF, -log(1 - U)."""
    return -np.log1p(-np.asarray(u, dtype=np.float64))


def _thin_series(points, cap=SERIES_POINT_CAP):
    if len(points) <= cap:
        return list(points)
    idx = np.linspace(0, len(points) - 1, cap).astype(int)
    return [points[i] for i in idx]


# ---------------------------------------------------------------------------
# Central limit of the shift walk.

def clt_report(i_list, mode="exact", samples=None, seed=None):
    """KS distance of the rescaled shift walk from the normal law.

    Exact mode builds the full binomial law with big-integer weights;
    the pass threshold at size i is 1/sqrt(i).
    """
    if isinstance(i_list, int):
        i_list = [i_list]
    i_list = [int(i) for i in i_list]
    if any(i < 1 for i in i_list):
        raise InvalidParameter("sizes must be >= 1")
    if mode not in ("exact", "mc"):
        raise InvalidParameter("mode must be 'exact' or 'mc'")
    report = ExperimentReport(
        name="clt", params={"i_list": i_list, "mode": mode},
        seed=seed if mode == "mc" else None,
        sample_count=samples if mode == "mc" else None)
    rng = np.random.default_rng(seed) if mode == "mc" else None
    for i in i_list:
        scale = math.sqrt(i)
        if mode == "exact":
            weights = [math.comb(i, k) for k in range(i + 1)]
            den = 1 << i
            cum_int = np.cumsum(weights, dtype=object)
            atoms = [(2 * k - i) / scale for k in range(i + 1)]
            cum = [float(Fraction(int(c), den)) for c in cum_int]
            worst = 0.0
            for j, x in enumerate(atoms):
                target = normal_cdf(x)
                left = cum[j - 1] if j else 0.0
                worst = max(worst, abs(cum[j] - target), abs(target - left))
            ks = worst
            series = [(x, cum[j], normal_cdf(x)) for j, x in enumerate(atoms)]
        else:
            if not samples or samples < 1:
                raise InvalidParameter("mc mode needs a sample count")
            ups = rng.binomial(i, 0.5, size=samples)
            rescaled = (2 * ups - i) / scale
            ks = ecdf_ks_against_cdf(rescaled, normal_cdf)
            xs = np.sort(rescaled)
            series = [(float(x), (j + 1) / samples, normal_cdf(float(x)))
                      for j, x in enumerate(xs)]
        threshold = 1.0 / scale
        report.add_check("clt_ks_i%d" % i, ks, threshold, ks <= threshold)
        report.distances["ks_i%d" % i] = ks
        report.data["cdf_i%d" % i] = _thin_series(series)
    return report


# ---------------------------------------------------------------------------
# Limit law of the rescaled reach a + 2b.

def _reach_law_dp(t, sigmas=10.0):
    """Exact-in-float DP for the law of a + 2b after t steps.

    State (v, b) with v = a + b: an up step raises v; a down step lowers
    v, except at v = 0 where it raises the barrier b instead.  Truncated
    at `sigmas` standard deviations; the lost mass is returned too.
    """
    cap = max(4, int(sigmas * math.sqrt(t)) + 2)
    prob = np.zeros((cap + 1, cap + 1))
    prob[0, 0] = 1.0
    for _ in range(t):
        nxt = np.zeros_like(prob)
        nxt[1:, :] += 0.5 * prob[:-1, :]
        nxt[:-1, :] += 0.5 * prob[1:, :]
        nxt[0, 1:] += 0.5 * prob[0, :-1]
        prob = nxt
    reach = np.zeros(2 * cap + 1)
    for b in range(cap + 1):
        reach[b:b + cap + 1] += prob[:, b]
    lost = 1.0 - float(reach.sum())
    return reach, lost


def reach_law_closed_form(t):
    """Exact law of a + 2b from the product formula, as a Fraction dict."""
    law = {}
    for j in range(t % 2, t + 1, 2):
        ups = (t + j) // 2
        num = (j + 1) * (j + 1) * math.factorial(t)
        den = (1 << t) * math.factorial(ups + 1) * math.factorial(t - ups)
        if t - ups >= 0:
            law[j] = Fraction(num, den)
    return law


def g2_limit_report(i, mode="exact", samples=None, seed=None):
    """KS distance of the rescaled reach from the radial chi-3 law."""
    i = int(i)
    if i < 16:
        raise InvalidParameter("reach limit report needs i >= 16")
    if mode not in ("exact", "mc"):
        raise InvalidParameter("mode must be 'exact' or 'mc'")
    report = ExperimentReport(
        name="g2limit", params={"i": i, "mode": mode},
        seed=seed if mode == "mc" else None,
        sample_count=samples if mode == "mc" else None)
    scale = math.sqrt(i)
    if mode == "exact":
        reach, lost = _reach_law_dp(i)
        atoms = np.nonzero(reach)[0]
        probs = reach[atoms]
        ks = discrete_ks_against_cdf(atoms / scale, probs, maxwell_cdf)
        report.statistics["truncation_loss"] = lost
        cum = np.cumsum(probs)
        series = [(float(h / scale), float(cum[j]), maxwell_cdf(h / scale))
                  for j, h in enumerate(atoms)]
    else:
        if not samples or samples < 1:
            raise InvalidParameter("mc mode needs a sample count")
        rng = np.random.default_rng(seed)
        steps = rng.integers(0, 2, size=(samples, i), dtype=np.int64) * 2 - 1
        a = np.cumsum(steps, axis=1)
        a_min = np.minimum(np.minimum.accumulate(a, axis=1)[:, -1], 0)
        h = (a[:, -1] - 2 * a_min) / scale
        ks = ecdf_ks_against_cdf(h, maxwell_cdf)
        xs = np.sort(h)
        series = [(float(x), (j + 1) / samples, maxwell_cdf(float(x)))
                  for j, x in enumerate(xs)]
    report.add_check("reach_ks", ks, LIMIT_KS_TOL, ks <= LIMIT_KS_TOL)
    report.distances["ks"] = ks
    report.data["cdf"] = _thin_series(series)
    return report


# ---------------------------------------------------------------------------
# Limit of the rescaled plateau under critical stickiness.

def g3_limit_report(i, samples=10000, seed=None):
    """Two-sample KS between the rescaled plateau and its predicted limit.

    At stickiness p = 1/sqrt(i), the plateau c/sqrt(i) must match
    max(0, reach/sqrt(i) - eta) with eta a unit exponential, built here
    on the same sampled paths; the point mass at 0 is checked separately
    against its exact conditional prediction (1-p)^reach.
    """
    i = int(i)
    root = math.isqrt(i)
    if root * root != i or i < 256:
        raise InvalidParameter("plateau limit report needs a perfect square i >= 256")
    if samples < 2:
        raise InvalidParameter("need at least 2 samples")
    p = Fraction(1, root)
    rng = np.random.default_rng(seed)
    a, a_min, c = sample_g3_endpoints(i, p, samples, rng)
    scale = float(root)
    reach = (a - a_min).astype(np.float64)
    plateau = c / scale
    eta = exp1_from_uniform(rng.random(samples))
    predicted = np.maximum(0.0, reach / scale - eta)
    ks = two_sample_ks(plateau, predicted)
    # the chance of an empty plateau, centred exactly: mean of the
    # per-path difference 1{c = 0} - (1-p)^reach has expectation zero
    diff = (c == 0).astype(np.float64) - (1.0 - 1.0 / scale) ** reach
    atom_gap = abs(float(np.mean(diff)))
    atom_se = float(np.std(diff, ddof=1) / math.sqrt(samples))
    report = ExperimentReport(
        name="g3limit", params={"i": i, "p": p}, seed=seed,
        sample_count=samples)
    report.add_check("plateau_ks", ks, LIMIT_KS_TOL, ks <= LIMIT_KS_TOL)
    report.add_check("empty_plateau_atom", atom_gap, 3.0 * atom_se,
                     atom_gap <= 3.0 * atom_se)
    report.distances["ks"] = ks
    report.statistics["empty_plateau_rate"] = float(np.mean(c == 0))
    xs = np.sort(plateau)
    ys = np.sort(predicted)
    grid = _thin_series(list(range(samples)))
    report.data["ecdf_pair"] = [
        (float(xs[j]), float(ys[j]), (j + 1) / samples) for j in grid]
    return report


# ---------------------------------------------------------------------------
# Trap-model waiting times.

def trap_waiting_report(m, t, samples=10000, seed=None):
    """KS for the rescaled trap statistic against its truncated target.

    W = 2^-m (a - c - min a) should look like min(eta, 2^-m (a - min a))
    with eta a unit exponential independent of the path.  The reference
    CDF is computed analytically, mixing the truncation point over the
    sampled ranges:

        F(w) = mean_j [ 1{R_j <= w} + (1 - e^-w) 1{R_j > w} ],

    and the sup gap takes both one-sided limits at every jump of either
    side, since the mixture carries a small atom at each R_j.
    """
    m = int(m)
    t = int(t)
    if m < 1 or t < 1:
        raise InvalidParameter("need m >= 1 and t >= 1")
    if samples < 2:
        raise InvalidParameter("need at least 2 samples")
    rng = np.random.default_rng(seed)
    a, a_min, c = sample_trap_endpoints(t, m, samples, rng)
    scale = float(2 ** m)
    observed = np.sort((a - c - a_min) / scale)
    ranges = np.sort((a - a_min) / scale)
    grid = np.unique(np.concatenate([observed, ranges]))
    decay = -np.expm1(-grid)
    n = float(samples)

    def mixture(side):
        saturated = np.searchsorted(ranges, grid, side=side)
        return (saturated + decay * (samples - saturated)) / n

    emp_right = np.searchsorted(observed, grid, side="right") / n
    emp_left = np.searchsorted(observed, grid, side="left") / n
    ks = float(max(np.max(np.abs(emp_right - mixture("right"))),
                   np.max(np.abs(emp_left - mixture("left")))))
    report = ExperimentReport(
        name="trap_waiting", params={"m": m, "t": t}, seed=seed,
        sample_count=samples)
    report.add_check("waiting_ks", ks, TRAP_KS_TOL, ks <= TRAP_KS_TOL)
    report.distances["ks"] = ks
    report.statistics["mean_observed"] = float(np.mean(observed))
    ref_right = mixture("right")
    picks = _thin_series(list(range(grid.size)))
    report.data["cdf"] = [
        (float(grid[j]), float(emp_right[j]), float(ref_right[j]))
        for j in picks]
    return report


# ---------------------------------------------------------------------------
# Product observables: micro versus block noise.

def product_observable(i, lam=1):
    """Normalized sum of sliding-window sign products, as a dense table."""
    i = int(i)
    if i > DENSE_DIMENSION_LIMIT:
        raise DimensionTooLarge(
            "dense product observable limited to i <= %d" % DENSE_DIMENSION_LIMIT)
    length = window_length(i, lam)
    masks = [((1 << length) - 1) << j for j in range(i - length + 1)]
    scale = 1.0 / math.sqrt(i)
    size = 1 << i
    values = np.zeros(size)
    for mask in masks:
        width = mask.bit_count()
        chi = np.array([1.0 if (width - (idx & mask).bit_count()) % 2 == 0
                        else -1.0 for idx in range(size)])
        values += chi
    return walsh_mod.Observable(i, values * scale)


def window_length(i, lam=1):
    """floor(lam * sqrt(i)); exact when i is a perfect square and lam rational."""
    i = int(i)
    if i < 1:
        raise InvalidParameter("size must be >= 1")
    root = math.isqrt(i)
    if root * root == i and isinstance(lam, numbers.Rational):
        length = int(Fraction(lam) * root)
    else:
        length = int(math.floor(float(lam) * math.sqrt(i)))
    if not 1 <= length <= i:
        raise InvalidParameter("window length %d out of range" % (length,))
    return length


def micro_block_report(i, lam=1, rho=math.exp(-1), blocks=4):
    """Micro-noise versus block-noise correlation of the window observable.

    The normalized micro correlation is rho^L with L the window length;
    the block correlation averages rho^(blocks hit) over windows.  Both
    follow from orthogonality of distinct window products, and at small
    i they are cross-checked against three dense-table routes.
    """
    i = int(i)
    length = window_length(i, lam)
    if isinstance(blocks, walsh_mod.BlockPartition):
        partition = blocks
        if partition.n != i:
            raise InvalidParameter("partition does not cover the i coordinates")
    else:
        partition = walsh_mod.BlockPartition.equal_split(i, int(blocks))
    rho_f = float(rho)
    windows = i - length + 1
    micro = rho_f ** length
    hit_hist = {}
    for j in range(windows):
        hits = partition.block_of(j + length - 1) - partition.block_of(j) + 1
        hit_hist[hits] = hit_hist.get(hits, 0) + 1
    block = sum(cnt * rho_f ** h for h, cnt in hit_hist.items()) / windows
    report = ExperimentReport(
        name="microblock",
        params={"i": i, "lam": lam, "rho": rho_f, "blocks": len(partition)})
    report.statistics["window_length"] = length
    report.statistics["windows"] = windows
    report.statistics["micro_correlation"] = micro
    report.statistics["block_correlation"] = block
    report.statistics["windows_by_blocks_hit"] = {
        str(h): hit_hist[h] for h in sorted(hit_hist)}
    if i >= MICRO_BLOCK_DECLARED_SCALE:
        report.add_check("micro_below_tolerance", micro,
                         MICRO_CORRELATION_TOL, micro <= MICRO_CORRELATION_TOL)
        report.add_check("block_above_rho_squared", block, rho_f ** 2,
                         block >= rho_f ** 2)
    if i <= 12:
        f = product_observable(i, lam)
        norm = f.norm_squared()
        spectral_micro = walsh_mod.noisy_correlation(f, f, rho_f) / norm
        coupling_micro = walsh_mod.coupling_correlation(f, f, rho_f) / norm
        joint_micro = walsh_mod.correlation_by_joint_enumeration(
            f, f, rho_f) / norm
        spectral_block = walsh_mod.block_noisy_correlation(
            f, f, partition, rho_f) / norm
        coupling_block = walsh_mod.block_coupling_correlation(
            f, f, partition, rho_f) / norm
        joint_block = walsh_mod.correlation_by_joint_enumeration(
            f, f, rho_f, blocks=partition) / norm
        for label, got in (
                ("micro_vs_spectral", spectral_micro),
                ("micro_vs_coupling", coupling_micro),
                ("micro_vs_joint", joint_micro)):
            report.add_check(label, got, micro,
                             abs(got - micro) <= KERNEL_ABS_TOL)
        for label, got in (
                ("block_vs_spectral", spectral_block),
                ("block_vs_coupling", coupling_block),
                ("block_vs_joint", joint_block)):
            report.add_check(label, got, block,
                             abs(got - block) <= KERNEL_ABS_TOL)
    sweep = np.linspace(0.0, 1.0, 101)
    report.data["noise_sweep"] = [
        (float(r), float(r ** length),
         float(sum(cnt * r ** h for h, cnt in hit_hist.items()) / windows))
        for r in sweep]
    return report


# ---------------------------------------------------------------------------
# Poisson pattern counts.

def poisson_block_report(n_pattern, t_span, samples=10000, seed=None):
    """Count up-then-(n-1)-down patterns and compare with a Poisson law.

    Over t_span * 2^n signs the number of windows matching the pattern
    (+1 followed by n-1 signs of -1) converges to Poisson(t_span); the
    report measures total variation over counts 0..10.
    """
    n_pattern = int(n_pattern)
    t_span = int(t_span)
    if not 1 <= n_pattern <= 24:
        raise InvalidParameter("pattern width must be in 1..24")
    if t_span < 1:
        raise InvalidParameter("span must be >= 1")
    if samples < 1:
        raise InvalidParameter("need at least 1 sample")
    m = t_span << n_pattern
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(samples, m), dtype=np.int8)
    plus = signs == 1
    match = plus[:, : m - n_pattern + 1].copy()
    for off in range(1, n_pattern):
        match &= ~plus[:, off: m - n_pattern + 1 + off]
    counts = match.sum(axis=1)
    lam = float(t_span) * (m - n_pattern + 1) / m
    # the limit intensity is t_span; the finite-size window count is kept
    # as a statistic but the comparison target is the limit law
    target = [math.exp(-t_span) * t_span ** j / math.factorial(j)
              for j in range(11)]
    emp = [float(np.mean(counts == j)) for j in range(11)]
    tv = 0.5 * sum(abs(e - p) for e, p in zip(emp, target))
    report = ExperimentReport(
        name="poisson", params={"n_pattern": n_pattern, "t_span": t_span},
        seed=seed, sample_count=samples)
    report.add_check("pattern_tv", tv, POISSON_TV_TOL, tv <= POISSON_TV_TOL)
    report.distances["tv"] = tv
    report.statistics["mean_count"] = float(np.mean(counts))
    report.statistics["window_intensity"] = lam
    report.data["pmf"] = [(j, emp[j], target[j]) for j in range(11)]
    return report


# ---------------------------------------------------------------------------
# Web experiment: exact mean trajectory count versus Monte Carlo.

def web_critical_report(N, s, t, samples=100000, seed=None, budget=None):
    """Exact E[number of distinct trajectories] against an MC estimate."""
    law = web_mod.critical_count_law(N, s, t, budget=budget)
    exact = sum((k * w for k, w in law.items()), Fraction(0))
    rng = np.random.default_rng(seed)
    counts = web_mod.mc_critical_counts(N, s, t, samples, rng)
    mean = float(np.mean(counts))
    se = float(np.std(counts, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    gap = abs(mean - float(exact))
    limit = 4.0 * se
    report = ExperimentReport(
        name="web_critical", params={"N": N, "s": s, "t": t}, seed=seed,
        sample_count=samples)
    report.add_check("mc_within_4_se", gap, limit, gap <= limit)
    report.statistics["exact_mean"] = exact
    report.statistics["mc_mean"] = mean
    report.statistics["mc_se"] = se
    report.data["pmf"] = [
        (int(k), float(np.mean(counts == k)), float(w))
        for k, w in law.items()]
    return report


# ---------------------------------------------------------------------------
# Spectral supports and profiles.

class FiniteSpectralSet:
    """A finite set of rescaled frequencies, kept sorted."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = tuple(sorted(points))
        for u, v in zip(pts, pts[1:]):
            if u == v:
                raise InvalidParameter("spectral points must be distinct")
        object.__setattr__(self, "points", pts)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteSpectralSet is immutable")

    @classmethod
    def from_mask(cls, mask, rescale):
        if rescale < 1:
            raise InvalidParameter("rescale must be >= 1")
        pts = []
        m = 0
        while mask:
            if mask & 1:
                pts.append(Fraction(m, rescale))
            mask >>= 1
            m += 1
        return cls(pts)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, FiniteSpectralSet) and other.points == self.points

    def __repr__(self):
        return "FiniteSpectralSet(%r)" % (self.points,)


def hausdorff_distance(first, second):
    """Classical Hausdorff distance between finite sets of reals.

    Conventions for the empty set: distance 0 to itself, 1 to anything
    else.  With these conventions the triangle inequality can fail for
    far-apart sets, so metric axioms are only claimed on nonempty sets.
    """
    a = first.points if isinstance(first, FiniteSpectralSet) else tuple(first)
    b = second.points if isinstance(second, FiniteSpectralSet) else tuple(second)
    if not a and not b:
        return 0
    if not a or not b:
        return 1
    d_ab = max(min(abs(x - y) for y in b) for x in a)
    d_ba = max(min(abs(x - y) for y in a) for x in b)
    return max(d_ab, d_ba)


def spectral_profile(f, rescale, depth=3):
    """Histogram the spectral energy by cardinality and by dyadic cells.

    Every nonzero mask is rescaled to points m/rescale in [0, 1); its
    energy lands in the depth-d cell containing all its points, or in a
    per-depth "split" bucket when the points straddle cells.
    """
    if isinstance(f, walsh_mod.Observable):
        spectrum = walsh_mod.walsh_transform(f)
    elif isinstance(f, walsh_mod.WalshSpectrum):
        spectrum = f
    else:
        raise InvalidParameter("spectral_profile expects an observable or spectrum")
    if rescale < 1:
        raise InvalidParameter("rescale must be >= 1")
    measure = walsh_mod.spectral_measure(spectrum)
    report = ExperimentReport(
        name="spectral_profile", params={"n": spectrum.n, "rescale": rescale,
                                         "depth": depth})
    by_card = measure.mass_by_cardinality()
    for k in sorted(by_card):
        report.statistics["mass_card_%d" % k] = by_card[k]
    cells = {}
    for mask in range(1, 1 << spectrum.n):
        w = measure.mass_at(mask)
        if not w:
            continue
        coords = [m for m in range(spectrum.n) if mask >> m & 1]
        for d in range(depth + 1):
            labels = {(m << d) // rescale for m in coords}
            key = ("cell_d%d_%d" % (d, labels.pop())) if len(labels) == 1 \
                else ("split_d%d" % d)
            cells[key] = cells.get(key, 0) + w
    for key in sorted(cells):
        report.statistics[key] = cells[key]
    report.data["cardinality"] = sorted(by_card.items())
    return report
