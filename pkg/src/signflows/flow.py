"""Random flows: words of one-step generators and their exact laws.

A flow of span t is the word g_1 g_2 ... g_t of i.i.d. one-step
generators, composed in word order (earliest step applied first).  Four
generator models are provided:

* ``g1``: up/down shifts, the simple walk.
* ``g2``: up/down reflected shifts; the product tracks the walk
  together with its running minimum.
* ``g3``: as g2 but an up step is sticky with probability p, restarting
  the plateau of mass currently held at the barrier.
* ``trap``: down steps carry a barrier of depth m and send the plateau
  to 0, up steps are always sticky; a caricature of a landscape of traps.

Exact laws are small dictionaries mapping semigroup elements to
Fractions, computed either by step-by-step convolution (the DP route)
or from closed-form product formulas, and the two are cross-checked.
The sticky layer has a second, pathwise description: every up step
opens a chord, chords are selected independently with probability p,
and the plateau value of the whole word is read off the lowest selected
chord that never closes.  That construction is enumerated literally
here and compared against the algebraic law.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
import numbers

import numpy as np

from .config import (
    CONDITIONAL_T_CAP,
    EXHAUSTIVE_T_CAP,
    TRAP_BOUND_CONSTANT,
    get_budget,
)
from .errors import BudgetExceeded, InvalidParameter
from .reporting import ExperimentReport
from .semigroup import (
    G1Element,
    G2Element,
    G3Element,
    G3_UNIT,
    STEP_DOWN,
    STEP_UP,
    STEP_UP_STICKY,
    compose,
    compose_g3,
    project,
    trap_step_down,
)

MODELS = ("g1", "g2", "g3", "trap")


def _exact_probability(p, name):
    if isinstance(p, float):
        raise InvalidParameter(
            "%s must be exact (int or Fraction), got float %r" % (name, p))
    if not isinstance(p, numbers.Rational):
        raise InvalidParameter("%s must be a rational number" % (name,))
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InvalidParameter("%s must lie in [0, 1], got %s" % (name, p))
    return p


@dataclass(frozen=True)
class GeneratorSet:
    """A finite set of one-step generators with exact probabilities."""

    model: str
    steps: tuple          # pairs (G3Element, Fraction)
    p: object = None      # stickiness, g3 only
    m: object = None      # trap depth, trap only

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidParameter("unknown model %r" % (self.model,))
        total = Fraction(0)
        for g, prob in self.steps:
            if not isinstance(g, G3Element):
                raise InvalidParameter("generators must be G3 elements")
            if prob < 0:
                raise InvalidParameter("generator probabilities must be >= 0")
            total += prob
        if total != 1:
            raise InvalidParameter("generator probabilities must sum to 1")


def standard_generators(model, p=None, m=None):
    """The generator set of one of the four models."""
    half = Fraction(1, 2)
    if model in ("g1", "g2"):
        return GeneratorSet(model, ((STEP_DOWN, half), (STEP_UP, half)))
    if model == "g3":
        if p is None:
            raise InvalidParameter("model g3 needs a stickiness p")
        p = _exact_probability(p, "p")
        return GeneratorSet(model, (
            (STEP_DOWN, half),
            (STEP_UP, (1 - p) / 2),
            (STEP_UP_STICKY, p / 2),
        ), p=p)
    if model == "trap":
        if m is None:
            raise InvalidParameter("model trap needs a depth m")
        m = int(m)
        return GeneratorSet(model, (
            (trap_step_down(m), half),
            (STEP_UP_STICKY, half),
        ), m=m)
    raise InvalidParameter("unknown model %r" % (model,))


_MODEL_DEPTH = {"g1": 1, "g2": 2, "g3": 3, "trap": 3}


def _element_depth(x):
    if isinstance(x, G3Element):
        return 3
    if isinstance(x, G2Element):
        return 2
    return 1


def _project_to_model(x, model):
    if model not in _MODEL_DEPTH:
        raise InvalidParameter("unknown model %r" % (model,))
    depth = _MODEL_DEPTH[model]
    if _element_depth(x) < depth:
        raise InvalidParameter(
            "cannot lift %r to the %s layer" % (x, model))
    while _element_depth(x) > depth:
        x = project(x)
    return x


def _element_sort_key(x):
    if isinstance(x, G3Element):
        return (x.a, x.b, x.c)
    if isinstance(x, G2Element):
        return (x.a, x.b, 0)
    return (x.a, 0, 0)


class FlowLaw:
    """Exact law of a flow endpoint: element -> Fraction, zeros dropped."""

    __slots__ = ("model", "t", "probs")

    def __init__(self, model, t, probs):
        if model not in MODELS:
            raise InvalidParameter("unknown model %r" % (model,))
        clean = {}
        for x, w in probs.items():
            w = Fraction(w)
            if w < 0:
                raise InvalidParameter("law weights must be >= 0")
            if w:
                clean[x] = clean.get(x, Fraction(0)) + w
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "probs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FlowLaw is immutable")

    def probability(self, x):
        return self.probs.get(x, Fraction(0))

    def support(self):
        return tuple(sorted(self.probs, key=_element_sort_key))

    def total_mass(self):
        return sum(self.probs.values(), Fraction(0))

    def project(self, model):
        """Push the law down to a coarser model (g3/trap -> g2 -> g1)."""
        order = {"g1": 1, "g2": 2, "g3": 3, "trap": 3}
        if order[model] > order[self.model]:
            raise InvalidParameter(
                "cannot project %s law to %s" % (self.model, model))
        out = {}
        for x, w in self.probs.items():
            y = _project_to_model(x, model)
            out[y] = out.get(y, Fraction(0)) + w
        return FlowLaw(model, self.t, out)

    def convolve(self, other):
        """Law of the concatenated word; self runs first."""
        if not isinstance(other, FlowLaw) or other.model != self.model:
            raise InvalidParameter("can only convolve laws of the same model")
        out = {}
        for x, wx in self.probs.items():
            for y, wy in other.probs.items():
                z = compose(x, y)
                out[z] = out.get(z, Fraction(0)) + wx * wy
        return FlowLaw(self.model, self.t + other.t, out)

    def __eq__(self, other):
        return (isinstance(other, FlowLaw) and other.model == self.model
                and other.probs == self.probs)

    def __repr__(self):
        return "FlowLaw(model=%r, t=%d, support=%d)" % (
            self.model, self.t, len(self.probs))

    def to_json_dict(self):
        entries = []
        for x in self.support():
            w = self.probs[x]
            entry = {"a": x.a}
            if isinstance(x, (G2Element, G3Element)):
                entry["b"] = x.b
            if isinstance(x, G3Element):
                entry["c"] = x.c
            entry["num"] = str(w.numerator)
            entry["den"] = str(w.denominator)
            entries.append(entry)
        return {"model": self.model, "t": self.t, "entries": entries}

    @classmethod
    def from_json_dict(cls, payload):
        probs = {}
        for e in payload["entries"]:
            if "c" in e:
                x = G3Element(e["a"], e["b"], e["c"])
            elif "b" in e:
                x = G2Element(e["a"], e["b"])
            else:
                x = G1Element(e["a"])
            probs[x] = Fraction(int(e["num"]), int(e["den"]))
        return cls(payload["model"], payload["t"], probs)


def law_max_difference(law1, law2):
    """Largest absolute probability gap over the union of supports."""
    keys = set(law1.probs) | set(law2.probs)
    gap = Fraction(0)
    for x in keys:
        d = abs(law1.probability(x) - law2.probability(x))
        if d > gap:
            gap = d
    return gap


def flow_law(gen, t, budget=None):
    """Exact endpoint law by convolving one step at a time."""
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    cap = get_budget(budget)
    dist = {G3_UNIT: Fraction(1)}
    for _ in range(t):
        nxt = {}
        for x, px in dist.items():
            for g, pg in gen.steps:
                if pg == 0:
                    continue
                y = compose_g3(x, g)
                nxt[y] = nxt.get(y, Fraction(0)) + px * pg
        if len(nxt) > cap:
            raise BudgetExceeded(
                "law support %d exceeds budget %d" % (len(nxt), cap))
        dist = nxt
    out = {}
    for x, w in dist.items():
        y = _project_to_model(x, gen.model)
        out[y] = out.get(y, Fraction(0)) + w
    return FlowLaw(gen.model, t, out)


def flow_law_by_enumeration(gen, t, budget=None):
    """Same law by brute force over all generator words; an oracle for tests."""
    cap = get_budget(budget)
    count = len(gen.steps) ** t
    if count > cap:
        raise BudgetExceeded("%d words exceed budget %d" % (count, cap))
    out = {}
    stack = [(G3_UNIT, Fraction(1), 0)]
    while stack:
        x, w, k = stack.pop()
        if k == t:
            y = _project_to_model(x, gen.model)
            out[y] = out.get(y, Fraction(0)) + w
            continue
        for g, pg in gen.steps:
            if pg:
                stack.append((compose_g3(x, g), w * pg, k + 1))
    return FlowLaw(gen.model, t, out)


def closed_form_law(model, t, p=None):
    """Exact endpoint law from the product formulas, no recursion."""
    if t < 0:
        raise InvalidParameter("t must be >= 0")
    if model == "g1":
        probs = {
            G1Element(a): Fraction(comb(t, (t + a) // 2), 1 << t)
            for a in range(-t, t + 1, 2)
        }
        return FlowLaw("g1", t, probs)
    if model == "g2":
        return FlowLaw("g2", t, dict(_g2_closed_entries(t)))
    if model == "g3":
        p = _exact_probability(p, "p")
        probs = {}
        for x, w in _g2_closed_entries(t):
            span = x.a + x.b
            probs[G3Element(x.a, x.b, 0)] = w * (1 - p) ** span
            for c in range(1, span + 1):
                probs[G3Element(x.a, x.b, c)] = w * p * (1 - p) ** (span - c)
        return FlowLaw("g3", t, probs)
    raise InvalidParameter("no closed form for model %r" % (model,))


def _g2_closed_entries(t):
    for b in range(0, t + 1):
        a_lo = -b
        if (a_lo + t) % 2:
            a_lo += 1
        for a in range(a_lo, t - 2 * b + 1, 2):
            num = (a + 2 * b + 1) * factorial(t)
            den = (1 << t) * factorial((t + a) // 2 + b + 1) \
                * factorial((t - a) // 2 - b)
            yield G2Element(a, b), Fraction(num, den)


@dataclass(frozen=True)
class LatticePath:
    """One realized word of generators, with its walk of partial shifts."""

    model: str
    steps: tuple   # G3Elements, one per time step

    @property
    def t(self):
        return len(self.steps)

    @property
    def increments(self):
        return tuple(g.a for g in self.steps)

    @property
    def a_values(self):
        """Partial shift a(0, k) for k = 0..t."""
        vals = [0]
        for g in self.steps:
            vals.append(vals[-1] + g.a)
        return tuple(vals)

    def prefix_elements(self):
        """Products of the first k steps, k = 0..t, in the full semigroup."""
        out = [G3_UNIT]
        for g in self.steps:
            out.append(compose_g3(out[-1], g))
        return out

    def endpoint(self):
        return self.prefix_elements()[-1]


def path_from_signs(signs, model="g2", m=None):
    """Build a path from up/down signs; sticky choices are left unselected."""
    steps = []
    for s in signs:
        if s == 1:
            steps.append(STEP_UP_STICKY if model == "trap" else STEP_UP)
        elif s == -1:
            steps.append(trap_step_down(m) if model == "trap" else STEP_DOWN)
        else:
            raise InvalidParameter("signs must be +1 or -1")
    return LatticePath(model, tuple(steps))


def sample_path(gen, t, seed):
    """Draw one word from the generator set; float thresholds, MC use only."""
    rng = seed if isinstance(seed, np.random.Generator) \
        else np.random.default_rng(seed)
    edges = np.cumsum([float(pg) for _, pg in gen.steps])
    last = len(gen.steps) - 1
    steps = []
    for _ in range(t):
        u = rng.random()
        k = min(int(np.searchsorted(edges, u, side="right")), last)
        steps.append(gen.steps[k][0])
    return LatticePath(gen.model, tuple(steps))


def check_path_identities(path):
    """Compare the composed barrier with pathwise running statistics.

    Along every prefix, the barrier of the product must equal minus the
    running minimum of the shift walk, and the reach a + b must equal
    the best shift over all later starting points.  Both checks recompute
    the right-hand sides literally from the walk.
    """
    report = ExperimentReport(name="path_identities",
                              params={"model": path.model, "t": path.t})
    a_vals = path.a_values
    defect_barrier = 0
    defect_reach = 0
    for k, x in enumerate(path.prefix_elements()):
        y = x if isinstance(x, G2Element) else project(x)
        run_min = min(a_vals[: k + 1])
        defect_barrier = max(defect_barrier, abs(y.b + run_min))
        reach = max(a_vals[k] - a_vals[s] for s in range(k + 1))
        defect_reach = max(defect_reach, abs((y.a + y.b) - reach))
    report.add_check("barrier_is_running_min", defect_barrier, 0,
                     defect_barrier == 0)
    report.add_check("reach_is_best_start", defect_reach, 0, defect_reach == 0)
    return report


def _all_sign_matrices(t, budget=None):
    cap = get_budget(budget)
    if (1 << t) > cap:
        raise BudgetExceeded("2^%d paths exceed budget %d" % (t, cap))
    idx = np.arange(1 << t, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(t, dtype=np.int64)[None, :]) & 1
    return (2 * bits - 1).astype(np.int64)


def identity_defect_exhaustive(t, model="g2", m=None, budget=None):
    """max |b + running-min| over all 2^t sign paths, via the step recurrence.

    Zero for the standard models; for the trap model the defect is
    positive but stays within TRAP_BOUND_CONSTANT * m.
    """
    if model == "trap":
        if m is None:
            raise InvalidParameter("trap defect needs m")
        b_down = int(m)
    else:
        b_down = 1
    signs = _all_sign_matrices(t, budget)
    count = signs.shape[0]
    a = np.zeros(count, dtype=np.int64)
    b = np.zeros(count, dtype=np.int64)
    run_min = np.zeros(count, dtype=np.int64)
    worst = 0
    for k in range(t):
        step = signs[:, k]
        b_gen = np.where(step < 0, b_down, 0)
        b = np.maximum(b, b_gen - a)
        a = a + step
        run_min = np.minimum(run_min, a)
        worst = max(worst, int(np.max(np.abs(b + run_min))))
    return worst


def trap_law_by_paths(t, m, budget=None):
    """Trap endpoint law by running every sign path through the recurrences."""
    signs = _all_sign_matrices(t, budget)
    count = signs.shape[0]
    a = np.zeros(count, dtype=np.int64)
    b = np.zeros(count, dtype=np.int64)
    c = np.zeros(count, dtype=np.int64)
    for k in range(t):
        step = signs[:, k]
        down = step < 0
        b = np.maximum(b, np.where(down, m, 0) - a)
        c = np.where(down, np.where(c > m, c - 1, 0), c + 1)
        a = a + step
    probs = {}
    weight = Fraction(1, count)
    for ai, bi, ci in zip(a.tolist(), b.tolist(), c.tolist()):
        x = G3Element(ai, bi, ci)
        probs[x] = probs.get(x, Fraction(0)) + weight
    return FlowLaw("trap", t, probs)


def trap_model_law(t, m, budget=None):
    return flow_law(standard_generators("trap", m=m), t, budget=budget)


# ---------------------------------------------------------------------------
# Chord construction of the sticky layer.

@dataclass(frozen=True)
class Chord:
    """An up step and the matching later down step, if any, at one level."""

    start: int
    end: object   # int or None when the chord never closes
    level: int

    @property
    def is_open(self):
        return self.end is None


@dataclass(frozen=True)
class ChordSet:
    """All chords of a sign path, with optional selection flags."""

    path: LatticePath
    chords: tuple
    selected: tuple = None

    def open_chords(self):
        return tuple(ch for ch in self.chords if ch.is_open)

    def open_levels(self):
        return tuple(sorted(ch.level for ch in self.open_chords()))


def chord_decomposition(path):
    """Match every up step with the next return to its starting level."""
    a_vals = path.a_values
    stack = []
    chords = []
    for k, inc in enumerate(path.increments):
        if inc == 1:
            stack.append((k, a_vals[k]))
        else:
            if stack:
                start, level = stack.pop()
                chords.append(Chord(start, k, level))
    for start, level in stack:
        chords.append(Chord(start, None, level))
    chords.sort(key=lambda ch: ch.start)
    return ChordSet(path, tuple(chords))


def truncated_geometric_c_law(a, b, p):
    """Conditional plateau law given (a, b): geometric from the top, truncated.

    The plateau is a + b + 1 - g when the g-th open level from the
    bottom is the lowest selected one, and 0 when nothing is selected.
    """
    p = _exact_probability(p, "p")
    span = a + b
    law = {0: (1 - p) ** span}
    for c in range(1, span + 1):
        law[c] = p * (1 - p) ** (span - c)
    return {c: w for c, w in law.items() if w}


def snake_conditional_c(path, p):
    """Plateau law of one sign path by enumerating chord selections.

    Only chords that never close can carry the plateau, so the sum runs
    over subsets of open chords; the plateau is the shift a minus the
    lowest selected open level, or 0 when no open chord is selected.
    """
    p = _exact_probability(p, "p")
    chords = chord_decomposition(path)
    levels = chords.open_levels()
    a_end = path.a_values[-1]
    law = {}
    k = len(levels)
    for mask in range(1 << k):
        weight = Fraction(1)
        lowest = None
        for j in range(k):
            if mask >> j & 1:
                weight *= p
                if lowest is None:
                    lowest = levels[j]
            else:
                weight *= 1 - p
        if weight == 0:
            continue
        c = 0 if lowest is None else a_end - lowest
        law[c] = law.get(c, Fraction(0)) + weight
    return law


def snake_alive_count_law(path, p):
    """Law of the number of selected open chords, by literal enumeration."""
    p = _exact_probability(p, "p")
    k = len(chord_decomposition(path).open_levels())
    law = {}
    for mask in range(1 << k):
        j = mask.bit_count()
        w = p ** j * (1 - p) ** (k - j)
        if w:
            law[j] = law.get(j, Fraction(0)) + w
    return law


def snake_flow_law(t, p, budget=None):
    """Aggregate the chord construction over all 2^t sign paths."""
    p = _exact_probability(p, "p")
    cap = get_budget(budget)
    if (1 << t) > cap:
        raise BudgetExceeded("2^%d paths exceed budget %d" % (t, cap))
    probs = {}
    path_weight = Fraction(1, 1 << t)
    for idx in range(1 << t):
        signs = [1 if idx >> k & 1 else -1 for k in range(t)]
        path = path_from_signs(signs, model="g3")
        a = path.a_values[-1]
        b = -min(path.a_values)
        for c, w in snake_conditional_c(path, p).items():
            x = G3Element(a, b, c)
            probs[x] = probs.get(x, Fraction(0)) + path_weight * w
    return FlowLaw("g3", t, probs)


# ---------------------------------------------------------------------------
# Report builders used by the command line and the acceptance suite.

def flow_report(t, p=Fraction(1, 2), budget=None):
    """Cross-check DP laws, closed forms, convolution, and projections."""
    p = _exact_probability(p, "p")
    report = ExperimentReport(name="flows", params={"t": t, "p": p})
    laws = {}
    for model in ("g1", "g2", "g3"):
        gen = standard_generators(model, p=p if model == "g3" else None)
        dp = flow_law(gen, t, budget=budget)
        closed = closed_form_law(model, t, p=p if model == "g3" else None)
        laws[model] = dp
        report.add_check("%s_dp_equals_closed_form" % model,
                         law_max_difference(dp, closed), Fraction(0),
                         dp == closed)
        report.add_check("%s_total_mass" % model, dp.total_mass(), Fraction(1),
                         dp.total_mass() == 1)
        half = flow_law(gen, t // 2, budget=budget)
        rest = flow_law(gen, t - t // 2, budget=budget)
        conv = half.convolve(rest)
        report.add_check("%s_convolution_consistent" % model,
                         law_max_difference(conv, dp), Fraction(0), conv == dp)
        report.statistics["%s_support" % model] = len(dp.probs)
    proj32 = laws["g3"].project("g2")
    report.add_check("g3_projects_to_g2",
                     law_max_difference(proj32, laws["g2"]), Fraction(0),
                     proj32 == laws["g2"])
    proj21 = laws["g2"].project("g1")
    report.add_check("g2_projects_to_g1",
                     law_max_difference(proj21, laws["g1"]), Fraction(0),
                     proj21 == laws["g1"])
    t_ex = min(t, EXHAUSTIVE_T_CAP)
    defect = identity_defect_exhaustive(t_ex, model="g2", budget=budget)
    report.add_check("pathwise_barrier_identity_t%d" % t_ex, defect, 0,
                     defect == 0)
    report.statistics["exhaustive_t"] = t_ex
    return report


def conditional_c_report(t, p, budget=None):
    """Check the conditional plateau law against the truncated geometric."""
    p = _exact_probability(p, "p")
    if t > CONDITIONAL_T_CAP:
        raise BudgetExceeded(
            "conditional report capped at t=%d" % CONDITIONAL_T_CAP)
    report = ExperimentReport(name="conditional_stickiness",
                              params={"t": t, "p": p})
    law = flow_law(standard_generators("g3", p=p), t, budget=budget)
    grouped = {}
    for x, w in law.probs.items():
        grouped.setdefault((x.a, x.b), {})[x.c] = w
    worst = Fraction(0)
    for (a, b) in sorted(grouped):
        slice_law = grouped[(a, b)]
        mass = sum(slice_law.values(), Fraction(0))
        conditional = {c: w / mass for c, w in slice_law.items()}
        target = truncated_geometric_c_law(a, b, p)
        keys = set(conditional) | set(target)
        gap = max(abs(conditional.get(c, Fraction(0))
                      - target.get(c, Fraction(0))) for c in keys)
        worst = max(worst, gap)
        report.add_check("conditional_a%+d_b%d" % (a, b), gap, Fraction(0),
                         gap == 0)
    report.add_check("conditional_worst_gap", worst, Fraction(0), worst == 0)
    report.statistics["ab_pairs"] = len(grouped)
    return report


def snake_report(t, p, budget=None):
    """Check the chord construction pathwise and in aggregate."""
    p = _exact_probability(p, "p")
    cap = get_budget(budget)
    if (1 << t) > cap:
        raise BudgetExceeded("2^%d paths exceed budget %d" % (t, cap))
    report = ExperimentReport(name="snake", params={"t": t, "p": p})
    bad_conditional = 0
    bad_levels = 0
    bad_alive = 0
    for idx in range(1 << t):
        signs = [1 if idx >> k & 1 else -1 for k in range(t)]
        path = path_from_signs(signs, model="g3")
        a = path.a_values[-1]
        b = -min(path.a_values)
        if chord_decomposition(path).open_levels() != tuple(range(-b, a)):
            bad_levels += 1
        if snake_conditional_c(path, p) != truncated_geometric_c_law(a, b, p):
            bad_conditional += 1
        alive = snake_alive_count_law(path, p)
        span = a + b
        binom = {j: comb(span, j) * p ** j * (1 - p) ** (span - j)
                 for j in range(span + 1)}
        binom = {j: w for j, w in binom.items() if w}
        if alive != binom:
            bad_alive += 1
    report.add_check("open_levels_fill_barrier_range", bad_levels, 0,
                     bad_levels == 0)
    report.add_check("per_path_conditional_is_geometric", bad_conditional, 0,
                     bad_conditional == 0)
    report.add_check("alive_count_is_binomial", bad_alive, 0, bad_alive == 0)
    aggregated = snake_flow_law(t, p, budget=budget)
    dp = flow_law(standard_generators("g3", p=p), t, budget=budget)
    closed = closed_form_law("g3", t, p=p)
    report.add_check("aggregate_equals_dp_law",
                     law_max_difference(aggregated, dp), Fraction(0),
                     aggregated == dp)
    report.add_check("aggregate_equals_closed_form",
                     law_max_difference(aggregated, closed), Fraction(0),
                     aggregated == closed)
    report.statistics["paths"] = 1 << t
    return report


def trap_report(t, m, budget=None):
    """Exact trap-model diagnostics: defect bound and dual law routes."""
    if m < 1:
        raise InvalidParameter("trap depth m must be >= 1")
    report = ExperimentReport(name="trap", params={"t": t, "m": m})
    t_ex = min(t, EXHAUSTIVE_T_CAP)
    defect = identity_defect_exhaustive(t_ex, model="trap", m=m, budget=budget)
    bound = TRAP_BOUND_CONSTANT * m
    report.add_check("barrier_defect_bounded_t%d" % t_ex, defect, bound,
                     defect <= bound)
    dp = trap_model_law(t_ex, m, budget=budget)
    by_paths = trap_law_by_paths(t_ex, m, budget=budget)
    report.add_check("dp_law_equals_path_enumeration",
                     law_max_difference(dp, by_paths), Fraction(0),
                     dp == by_paths)
    report.add_check("trap_total_mass", dp.total_mass(), Fraction(1),
                     dp.total_mass() == 1)
    depth1 = trap_model_law(min(t_ex, 8), 1, budget=budget)
    sticky1 = flow_law(standard_generators("g3", p=Fraction(1)),
                       min(t_ex, 8), budget=budget)
    gap1 = law_max_difference(depth1, sticky1)
    report.add_check("depth1_matches_fully_sticky", gap1, Fraction(0),
                     depth1.probs == sticky1.probs)
    report.statistics["support"] = len(dp.probs)
    report.statistics["defect"] = defect
    return report


# ---------------------------------------------------------------------------
# Vectorized endpoint samplers for the scaling-limit experiments.

def sample_g3_endpoints(t, p, size, rng):
    """Draw (a, running min of a, plateau) for `size` independent g3 words."""
    pf = float(p)
    if not 0 <= pf <= 1:
        raise InvalidParameter("p must lie in [0, 1]")
    a = np.zeros(size, dtype=np.int64)
    a_min = np.zeros(size, dtype=np.int64)
    c = np.zeros(size, dtype=np.int64)
    for _ in range(t):
        u = rng.random(size)
        down = u < 0.5
        sticky = u >= 1.0 - pf / 2.0
        # down: plateau erodes by 1, emptying at the barrier (values 0 and 1
        # both land on 0); plain up: a held plateau rises, an empty one stays
        # empty; sticky up: the plateau always rises, restarting at 1.
        c = np.where(down, np.where(c >= 2, c - 1, 0),
                     np.where(sticky, c + 1, np.where(c > 0, c + 1, 0)))
        a = a + np.where(down, -1, 1)
        a_min = np.minimum(a_min, a)
    return a, a_min, c


def sample_trap_endpoints(t, m, size, rng):
    """Draw (a, running min of a, plateau) for `size` trap words of depth m."""
    if m < 1:
        raise InvalidParameter("trap depth m must be >= 1")
    a = np.zeros(size, dtype=np.int64)
    a_min = np.zeros(size, dtype=np.int64)
    c = np.zeros(size, dtype=np.int64)
    for _ in range(t):
        down = rng.random(size) < 0.5
        c = np.where(down, np.where(c > m, c - 1, 0), c + 1)
        a = a + np.where(down, -1, 1)
        a_min = np.minimum(a_min, a)
    return a, a_min, c
