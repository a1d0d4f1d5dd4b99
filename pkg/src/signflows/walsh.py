"""Walsh analysis of observables on the sign cube {-1,+1}^n.

Sign assignments are indexed by integers 0..2^n-1: bit m of the index is
set exactly when coordinate m carries +1.  An observable is a dense table
of values over all 2^n assignments; its Walsh transform expands it over
the character basis chi_M(omega) = prod_{m in M} omega_m, with M again
encoded as a bit mask.

Tables hold either exact rationals or float64, decided at construction:
if every entry is an int or Fraction the exact path is kept, otherwise
everything is coerced to float64.  All transforms, operators, and
correlations run in whichever arithmetic the inputs carry, so every
float result has an exact twin for cross-checking at small n.
"""

from fractions import Fraction
import numbers

import numpy as np

from .config import DENSE_DIMENSION_LIMIT
from .errors import DimensionTooLarge, InvalidParameter


def _check_dimension(n):
    if not isinstance(n, int) or n < 0:
        raise InvalidParameter("dimension must be a nonnegative int, got %r" % (n,))
    if n > DENSE_DIMENSION_LIMIT:
        raise DimensionTooLarge(
            "n=%d exceeds the dense table limit %d" % (n, DENSE_DIMENSION_LIMIT))


def _normalize_table(n, values):
    """Return (storage, exact): a Fraction tuple or a read-only float64 array."""
    size = 1 << n
    if isinstance(values, np.ndarray):
        if values.shape != (size,):
            raise InvalidParameter("table must have 2^n entries")
        arr = values.astype(np.float64)
        arr.setflags(write=False)
        return arr, False
    vals = list(values)
    if len(vals) != size:
        raise InvalidParameter("table must have 2^n entries")
    if all(isinstance(v, numbers.Rational) for v in vals):
        return tuple(Fraction(v) for v in vals), True
    arr = np.asarray([float(v) for v in vals], dtype=np.float64)
    arr.setflags(write=False)
    return arr, False


def _tables_equal(x, y):
    if isinstance(x, tuple) and isinstance(y, tuple):
        return x == y
    if isinstance(x, np.ndarray) and isinstance(y, np.ndarray):
        return bool(np.array_equal(x, y))
    return False


class SignVector:
    """One assignment of signs to n coordinates."""

    __slots__ = ("n", "signs")

    def __init__(self, signs):
        signs = tuple(signs)
        if any(s not in (-1, 1) for s in signs):
            raise InvalidParameter("signs must be -1 or +1")
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "n", len(signs))
        _check_dimension(self.n)

    def __setattr__(self, name, value):
        raise AttributeError("SignVector is immutable")

    @classmethod
    def from_index(cls, n, index):
        _check_dimension(n)
        if not 0 <= index < (1 << n):
            raise InvalidParameter("index out of range")
        return cls(tuple(1 if (index >> m) & 1 else -1 for m in range(n)))

    def to_index(self):
        idx = 0
        for m, s in enumerate(self.signs):
            if s == 1:
                idx |= 1 << m
        return idx

    def flip(self, m):
        if not 0 <= m < self.n:
            raise InvalidParameter("coordinate out of range")
        signs = list(self.signs)
        signs[m] = -signs[m]
        return SignVector(signs)

    def __eq__(self, other):
        return isinstance(other, SignVector) and self.signs == other.signs

    def __hash__(self):
        return hash(("SignVector", self.signs))

    def __repr__(self):
        return "SignVector(%r)" % (self.signs,)


class _DenseTable:
    """Shared base for observables and spectra: n plus a 2^n table."""

    __slots__ = ("n", "_table", "_exact")

    def __init__(self, n, values):
        _check_dimension(n)
        table, exact = _normalize_table(n, values)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_exact", exact)

    def __setattr__(self, name, value):
        raise AttributeError("%s is immutable" % type(self).__name__)

    @property
    def values(self):
        return self._table

    @property
    def is_exact(self):
        return self._exact

    def to_array(self):
        if self._exact:
            return np.asarray([float(v) for v in self._table], dtype=np.float64)
        return np.array(self._table)

    def __len__(self):
        return 1 << self.n

    def __eq__(self, other):
        return (type(other) is type(self) and other.n == self.n
                and _tables_equal(self._table, other._table))

    def __repr__(self):
        return "%s(n=%d, exact=%s)" % (type(self).__name__, self.n, self._exact)


class Observable(_DenseTable):
    """A real-valued function of n signs, stored densely."""

    def value_at(self, where):
        if isinstance(where, SignVector):
            if where.n != self.n:
                raise InvalidParameter("sign vector has wrong length")
            where = where.to_index()
        return self._table[where]

    def mean(self):
        return _table_sum(self._table) / (1 << self.n)

    def inner(self, other):
        """Expectation of the pointwise product under the uniform law."""
        if not isinstance(other, Observable) or other.n != self.n:
            raise InvalidParameter("observables must share a dimension")
        if self._exact and other._exact:
            s = sum(u * v for u, v in zip(self._table, other._table))
            return Fraction(s, 1 << self.n)
        return float(np.dot(self.to_array(), other.to_array())) / (1 << self.n)

    def norm_squared(self):
        return self.inner(self)

    def is_sign_valued(self):
        if self._exact:
            return all(v == 1 or v == -1 for v in self._table)
        return bool(np.all(np.abs(self._table) == 1.0))


class WalshSpectrum(_DenseTable):
    """Walsh coefficients of an observable, indexed by character mask."""

    def coefficient(self, mask):
        if not 0 <= mask < (1 << self.n):
            raise InvalidParameter("mask out of range")
        return self._table[mask]

    def support(self):
        """Masks carrying a nonzero coefficient, ascending."""
        if self._exact:
            return tuple(m for m, v in enumerate(self._table) if v != 0)
        return tuple(int(m) for m in np.nonzero(self._table)[0])


class SpectralMeasure(_DenseTable):
    """Squared Walsh coefficients: the energy carried by each mask."""

    def mass_at(self, mask):
        return self._table[mask]

    def total_mass(self):
        return _table_sum(self._table)

    def mass_by_cardinality(self):
        """Energy grouped by |M|, as a dict {cardinality: mass}."""
        out = {}
        for mask in range(1 << self.n):
            w = self._table[mask]
            if w != 0:
                k = mask.bit_count()
                out[k] = out.get(k, 0) + w
        return out


def _table_sum(table):
    if isinstance(table, tuple):
        return sum(table, Fraction(0))
    return float(np.sum(table))


def _fwht_exact(vals, forward):
    # forward butterfly (u, v) -> (u + v, v - u); synthesis uses the transpose
    vals = list(vals)
    size = len(vals)
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            for j in range(start, start + h):
                u = vals[j]
                v = vals[j + h]
                if forward:
                    vals[j] = u + v
                    vals[j + h] = v - u
                else:
                    vals[j] = u - v
                    vals[j + h] = u + v
        h *= 2
    return vals


def _fwht_float(arr, forward):
    a = np.array(arr, dtype=np.float64)
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        u = a[:, 0, :].copy()
        v = a[:, 1, :].copy()
        if forward:
            a[:, 0, :] = u + v
            a[:, 1, :] = v - u
        else:
            a[:, 0, :] = u - v
            a[:, 1, :] = u + v
        a = a.reshape(size)
        h *= 2
    return a


def walsh_transform(f):
    """Walsh coefficients of an observable; exact on exact input."""
    if not isinstance(f, Observable):
        raise InvalidParameter("walsh_transform expects an Observable")
    if f.is_exact:
        raw = _fwht_exact(f.values, forward=True)
        scale = Fraction(1, 1 << f.n)
        return WalshSpectrum(f.n, [v * scale for v in raw])
    return WalshSpectrum(f.n, _fwht_float(f.values, forward=True) / (1 << f.n))


def synthesize(spectrum):
    """Rebuild the observable a spectrum expands; inverse of walsh_transform."""
    if not isinstance(spectrum, WalshSpectrum):
        raise InvalidParameter("synthesize expects a WalshSpectrum")
    if spectrum.is_exact:
        return Observable(spectrum.n, _fwht_exact(spectrum.values, forward=False))
    return Observable(spectrum.n, _fwht_float(spectrum.values, forward=False))


def spectral_measure(spectrum):
    if not isinstance(spectrum, WalshSpectrum):
        raise InvalidParameter("spectral_measure expects a WalshSpectrum")
    if spectrum.is_exact:
        return SpectralMeasure(spectrum.n, [v * v for v in spectrum.values])
    return SpectralMeasure(spectrum.n, np.square(spectrum.values))


def _retained_mask(n, coordinates):
    coords = set(coordinates)
    for m in coords:
        if not (isinstance(m, int) and 0 <= m < n):
            raise InvalidParameter("coordinate %r out of range for n=%d" % (m, n))
    return coords


def conditional_expectation(f, coordinates):
    """Average f over every coordinate outside the retained set."""
    if not isinstance(f, Observable):
        raise InvalidParameter("conditional_expectation expects an Observable")
    retained = _retained_mask(f.n, coordinates)
    if f.is_exact:
        vals = list(f.values)
        for m in range(f.n):
            if m in retained:
                continue
            bit = 1 << m
            for idx in range(len(vals)):
                if idx & bit:
                    continue
                avg = (vals[idx] + vals[idx | bit]) / 2
                vals[idx] = avg
                vals[idx | bit] = avg
        return Observable(f.n, vals)
    a = np.array(f.values)
    for m in range(f.n):
        if m in retained:
            continue
        a = a.reshape(-1, 2, 1 << m)
        avg = (a[:, 0, :] + a[:, 1, :]) / 2.0
        a[:, 0, :] = avg
        a[:, 1, :] = avg
        a = a.reshape(1 << f.n)
    return Observable(f.n, a)


class BlockPartition:
    """Ordered contiguous intervals covering coordinates 0..n-1."""

    __slots__ = ("n", "bounds")

    def __init__(self, n, bounds):
        if n < 1:
            raise InvalidParameter("dimension must be at least 1")
        bounds = tuple((int(lo), int(hi)) for lo, hi in bounds)
        cursor = 0
        for lo, hi in bounds:
            if lo != cursor or hi <= lo:
                raise InvalidParameter(
                    "blocks must be nonempty, contiguous, and cover 0..n-1")
            cursor = hi
        if cursor != n:
            raise InvalidParameter("blocks must cover exactly 0..n-1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bounds", bounds)

    def __setattr__(self, name, value):
        raise AttributeError("BlockPartition is immutable")

    @classmethod
    def equal_split(cls, n, k):
        """k blocks of near-equal size; earlier blocks take the remainder."""
        if not 1 <= k <= n:
            raise InvalidParameter("need 1 <= k <= n")
        base, extra = divmod(n, k)
        bounds = []
        lo = 0
        for j in range(k):
            hi = lo + base + (1 if j < extra else 0)
            bounds.append((lo, hi))
            lo = hi
        return cls(n, bounds)

    @classmethod
    def singletons(cls, n):
        return cls(n, [(m, m + 1) for m in range(n)])

    @classmethod
    def from_sizes(cls, n, sizes):
        bounds = []
        lo = 0
        for s in sizes:
            bounds.append((lo, lo + s))
            lo += s
        return cls(n, bounds)

    def __len__(self):
        return len(self.bounds)

    def __iter__(self):
        return iter(self.bounds)

    def __eq__(self, other):
        return (isinstance(other, BlockPartition)
                and other.n == self.n and other.bounds == self.bounds)

    def __repr__(self):
        return "BlockPartition(n=%d, bounds=%r)" % (self.n, self.bounds)

    def block_masks(self):
        return tuple(((1 << hi) - (1 << lo)) for lo, hi in self.bounds)

    def blocks_hit(self, mask):
        """Number of blocks a character mask intersects."""
        return sum(1 for bm in self.block_masks() if mask & bm)

    def block_of(self, m):
        for j, (lo, hi) in enumerate(self.bounds):
            if lo <= m < hi:
                return j
        raise InvalidParameter("coordinate out of range")


def _coerce_level(rho, exact):
    """Noise levels join the table's arithmetic; exact tables need rationals."""
    if not 0 <= rho <= 1:
        raise InvalidParameter(
            "noise survival level must lie in [0, 1], got %s" % (rho,))
    if exact and isinstance(rho, numbers.Rational):
        return Fraction(rho), True
    return float(rho), False


def noise_operator(spectrum, rho):
    """Damp each coefficient by rho^|M|."""
    if not isinstance(spectrum, WalshSpectrum):
        raise InvalidParameter("noise_operator expects a WalshSpectrum")
    level, exact = _coerce_level(rho, spectrum.is_exact)
    if exact:
        powers = [level ** k for k in range(spectrum.n + 1)]
        return WalshSpectrum(spectrum.n, [
            v * powers[mask.bit_count()] for mask, v in enumerate(spectrum.values)])
    masks = np.arange(1 << spectrum.n, dtype=np.uint32)
    card = np.array([int(m).bit_count() for m in masks], dtype=np.int64)
    return WalshSpectrum(spectrum.n, spectrum.to_array() * (level ** card))


def block_noise_operator(spectrum, blocks, rho):
    """Damp each coefficient by rho^(number of blocks its mask meets)."""
    if not isinstance(spectrum, WalshSpectrum):
        raise InvalidParameter("block_noise_operator expects a WalshSpectrum")
    if not isinstance(blocks, BlockPartition) or blocks.n != spectrum.n:
        raise InvalidParameter("partition must match the spectrum dimension")
    level, exact = _coerce_level(rho, spectrum.is_exact)
    hits = _blocks_hit_table(spectrum.n, blocks)
    if exact:
        powers = [level ** k for k in range(len(blocks) + 1)]
        return WalshSpectrum(spectrum.n, [
            v * powers[hits[mask]] for mask, v in enumerate(spectrum.values)])
    return WalshSpectrum(
        spectrum.n, spectrum.to_array() * (level ** np.asarray(hits)))


def _blocks_hit_table(n, blocks):
    masks = np.arange(1 << n, dtype=np.int64)
    hits = np.zeros(1 << n, dtype=np.int64)
    for bm in blocks.block_masks():
        hits += (masks & bm) != 0
    return hits.tolist()


def noisy_correlation(f, g, rho):
    """E[f(omega) g(omega')] under rho-correlated resampling, via spectra."""
    sf = walsh_transform(f)
    sg = walsh_transform(g)
    level, exact = _coerce_level(rho, sf.is_exact and sg.is_exact)
    if exact:
        total = Fraction(0)
        for mask in range(1 << f.n):
            u = sf.values[mask]
            v = sg.values[mask]
            if u != 0 and v != 0:
                total += u * v * level ** mask.bit_count()
        return total
    masks = np.arange(1 << f.n, dtype=np.uint32)
    card = np.array([int(m).bit_count() for m in masks], dtype=np.int64)
    return float(np.sum(sf.to_array() * sg.to_array() * (level ** card)))


def block_noisy_correlation(f, g, blocks, rho):
    """Same as noisy_correlation but whole blocks resample together."""
    sf = walsh_transform(f)
    sg = walsh_transform(g)
    if blocks.n != f.n:
        raise InvalidParameter("partition must match the observable dimension")
    level, exact = _coerce_level(rho, sf.is_exact and sg.is_exact)
    hits = _blocks_hit_table(f.n, blocks)
    if exact:
        total = Fraction(0)
        for mask in range(1 << f.n):
            u = sf.values[mask]
            v = sg.values[mask]
            if u != 0 and v != 0:
                total += u * v * level ** hits[mask]
        return total
    return float(np.sum(
        sf.to_array() * sg.to_array() * (level ** np.asarray(hits, dtype=np.float64))))


def resample_kernel(f, rho):
    """Apply the per-coordinate resampling channel to the table directly.

    Each coordinate keeps its sign with probability (1+rho)/2 and flips
    with probability (1-rho)/2, independently; this is the table-side
    twin of noise_operator and is used to cross-check it.
    """
    if not isinstance(f, Observable):
        raise InvalidParameter("resample_kernel expects an Observable")
    level, exact = _coerce_level(rho, f.is_exact)
    if exact:
        keep = (1 + level) / 2
        swap = (1 - level) / 2
        vals = list(f.values)
        for m in range(f.n):
            bit = 1 << m
            nxt = list(vals)
            for idx in range(len(vals)):
                nxt[idx] = keep * vals[idx] + swap * vals[idx ^ bit]
            vals = nxt
        return Observable(f.n, vals)
    keep = (1.0 + level) / 2.0
    swap = (1.0 - level) / 2.0
    a = f.to_array()
    for m in range(f.n):
        a = a.reshape(-1, 2, 1 << m)
        u = a[:, 0, :].copy()
        v = a[:, 1, :].copy()
        a[:, 0, :] = keep * u + swap * v
        a[:, 1, :] = keep * v + swap * u
        a = a.reshape(1 << f.n)
    return Observable(f.n, a)


def block_resample_kernel(f, blocks, rho):
    """Per block: keep with probability rho, else redraw the block uniformly."""
    if not isinstance(f, Observable):
        raise InvalidParameter("block_resample_kernel expects an Observable")
    if blocks.n != f.n:
        raise InvalidParameter("partition must match the observable dimension")
    level, exact = _coerce_level(rho, f.is_exact)
    current = f
    for lo, hi in blocks.bounds:
        outside = [m for m in range(f.n) if not lo <= m < hi]
        averaged = conditional_expectation(current, outside)
        if exact:
            vals = [level * u + (1 - level) * v
                    for u, v in zip(current.values, averaged.values)]
            current = Observable(f.n, vals)
        else:
            current = Observable(
                f.n, level * current.to_array() + (1.0 - level) * averaged.to_array())
    return current


def coupling_correlation(f, g, rho):
    """noisy_correlation computed without spectra: E[f * (kernel g)]."""
    return f.inner(resample_kernel(g, rho))


def block_coupling_correlation(f, g, blocks, rho):
    return f.inner(block_resample_kernel(g, blocks, rho))


def correlation_by_joint_enumeration(f, g, rho, blocks=None):
    """Literal sum over all pairs of assignments, weighted by the channel.

    Float-only and O(4^n); exists purely as an independent oracle for the
    spectral and kernel routes at small n.
    """
    if f.n != g.n:
        raise InvalidParameter("observables must share a dimension")
    if f.n > 12:
        raise DimensionTooLarge("joint enumeration is limited to n <= 12")
    if blocks is None:
        blocks = BlockPartition.singletons(f.n)
    level, _ = _coerce_level(rho, False)
    size = 1 << f.n
    fv = f.to_array()
    gv = g.to_array()
    omega = np.arange(size, dtype=np.int64)
    total = 0.0
    for idx in range(size):
        weight = np.ones(size, dtype=np.float64)
        diff = omega ^ idx
        for bm in blocks.block_masks():
            width = int(bm).bit_count()
            eq = (diff & bm) == 0
            weight *= level * eq + (1.0 - level) * (0.5 ** width)
        total += fv[idx] * float(np.dot(weight, gv))
    return total / size


def influence(f, m):
    """Half the mean absolute change of f when coordinate m is flipped."""
    if not isinstance(f, Observable):
        raise InvalidParameter("influence expects an Observable")
    if not 0 <= m < f.n:
        raise InvalidParameter("coordinate out of range")
    bit = 1 << m
    if f.is_exact:
        vals = f.values
        total = sum(abs(vals[idx] - vals[idx ^ bit]) for idx in range(len(vals)))
        return Fraction(total, 2 * len(vals))
    a = f.values
    idx = np.arange(a.size, dtype=np.int64)
    return float(np.mean(np.abs(a - a[idx ^ bit]))) / 2.0


def influence_from_spectrum(spectrum, m):
    """Energy of the masks containing m; equals influence for sign-valued f."""
    if not 0 <= m < spectrum.n:
        raise InvalidParameter("coordinate out of range")
    bit = 1 << m
    if spectrum.is_exact:
        return sum((v * v for mask, v in enumerate(spectrum.values) if mask & bit),
                   Fraction(0))
    masks = np.arange(1 << spectrum.n, dtype=np.int64)
    sel = (masks & bit) != 0
    return float(np.sum(np.square(spectrum.values[sel])))


def bks_statistic(f):
    """Sum of squared influences; small values mark noise-stable observables."""
    total = sum(influence(f, m) ** 2 for m in range(f.n))
    return total


def majority(n):
    """Sign of the coordinate sum; n must be odd."""
    if n % 2 == 0:
        raise InvalidParameter("majority needs odd n")
    size = 1 << n
    return Observable(n, [1 if (2 * idx.bit_count() > n) else -1
                          for idx in map(int, range(size))])


def dictator(n, m=0):
    if not 0 <= m < n:
        raise InvalidParameter("coordinate out of range")
    bit = 1 << m
    return Observable(n, [1 if idx & bit else -1 for idx in range(1 << n)])


def parity_observable(n, mask=None):
    """The character chi_M itself, as an observable."""
    if mask is None:
        mask = (1 << n) - 1
    if not 0 <= mask < (1 << n):
        raise InvalidParameter("mask out of range")
    width = mask.bit_count()
    return Observable(n, [
        1 if (width - (idx & mask).bit_count()) % 2 == 0 else -1
        for idx in range(1 << n)])


def random_sign_observable(n, rng):
    return Observable(n, (rng.integers(0, 2, size=1 << n) * 2 - 1).astype(np.float64))


def random_uniform_observable(n, rng):
    return Observable(n, rng.uniform(-1.0, 1.0, size=1 << n))


def random_rational_observable(n, rng, den_limit=16):
    dens = rng.integers(1, den_limit + 1, size=1 << n)
    nums = rng.integers(-den_limit, den_limit + 1, size=1 << n)
    return Observable(n, [Fraction(int(p), int(q)) for p, q in zip(nums, dens)])


OBSERVABLE_BUILDERS = {
    "majority": lambda n, rng: majority(n),
    "dictator": lambda n, rng: dictator(n),
    "parity": lambda n, rng: parity_observable(n),
    "random_sign": random_sign_observable,
    "random_uniform": random_uniform_observable,
    "random_rational": random_rational_observable,
}


def observable_from_name(name, n, rng=None):
    try:
        builder = OBSERVABLE_BUILDERS[name]
    except KeyError:
        raise InvalidParameter(
            "unknown observable %r; known: %s"
            % (name, ", ".join(sorted(OBSERVABLE_BUILDERS)))) from None
    if rng is None:
        rng = np.random.default_rng(0)
    return builder(n, rng)


def walsh_report(n, trials=3, seed=None, rho=None):
    """Dual-route verification: every operator exactly via two paths.

    Exact trials use rational tables and demand equality; float trials
    use the same identities and demand relative error below 2^-40.
    """
    from fractions import Fraction as _F
    from .config import EXACT_REL_TOL
    from .reporting import ExperimentReport

    if rho is None:
        rho = _F(1, 3)
    rng = np.random.default_rng(seed)
    report = ExperimentReport(name="walsh",
                              params={"n": n, "trials": trials, "rho": rho},
                              seed=seed)
    blocks = BlockPartition.equal_split(n, min(3, n))
    retained = frozenset(range((n + 1) // 2))
    fail = {key: 0 for key in (
        "roundtrip", "parseval", "noise_dual", "block_dual",
        "correlation_dual", "block_correlation_dual", "conditional_spectrum",
        "influence_dual")}
    for _ in range(trials):
        f = random_rational_observable(n, rng)
        g = random_rational_observable(n, rng)
        sf = walsh_transform(f)
        if synthesize(sf) != f:
            fail["roundtrip"] += 1
        if spectral_measure(sf).total_mass() != f.norm_squared():
            fail["parseval"] += 1
        if synthesize(noise_operator(sf, rho)) != resample_kernel(f, rho):
            fail["noise_dual"] += 1
        if synthesize(block_noise_operator(sf, blocks, rho)) \
                != block_resample_kernel(f, blocks, rho):
            fail["block_dual"] += 1
        if noisy_correlation(f, g, rho) != coupling_correlation(f, g, rho):
            fail["correlation_dual"] += 1
        if block_noisy_correlation(f, g, blocks, rho) \
                != block_coupling_correlation(f, g, blocks, rho):
            fail["block_correlation_dual"] += 1
        ce_spec = walsh_transform(conditional_expectation(f, retained))
        for mask in range(1 << n):
            inside = all(m in retained for m in range(n) if mask >> m & 1)
            want = sf.values[mask] if inside else 0
            if ce_spec.values[mask] != want:
                fail["conditional_spectrum"] += 1
                break
        signs = Observable(n, [int(v) for v in rng.integers(0, 2, 1 << n) * 2 - 1])
        s_spec = walsh_transform(signs)
        if any(influence(signs, m) != influence_from_spectrum(s_spec, m)
               for m in range(n)):
            fail["influence_dual"] += 1
    for key in sorted(fail):
        report.add_check("exact_%s" % key, fail[key], 0, fail[key] == 0)

    worst = 0.0
    for _ in range(trials):
        f = random_uniform_observable(n, rng)
        sf = walsh_transform(f)
        back = synthesize(sf).values
        scale = float(np.max(np.abs(f.values))) or 1.0
        worst = max(worst, float(np.max(np.abs(back - f.values))) / scale)
        pars = abs(spectral_measure(sf).total_mass() - f.norm_squared())
        worst = max(worst, pars / max(f.norm_squared(), 1.0))
        kernel = resample_kernel(f, float(rho)).values
        spectral = synthesize(noise_operator(sf, float(rho))).values
        worst = max(worst, float(np.max(np.abs(kernel - spectral))) / scale)
    report.add_check("float_rel_error", worst, EXACT_REL_TOL,
                     worst <= EXACT_REL_TOL)
    report.statistics["float_worst_rel_error"] = worst
    maj = majority(3)
    report.add_check("majority3_bks", bks_statistic(maj), _F(3, 4),
                     bks_statistic(maj) == _F(3, 4))
    return report
