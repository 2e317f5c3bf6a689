"""Whittaker functions of small rank and the measure they put on diagonals.

The function of rank n is an integral over triangular patterns with a fixed
bottom row: each pattern contributes the product of its type components raised
to the given parameters, damped by the exponential of its energy.  Ranks 1 to
3 are supported, by exact formula, one-dimensional adaptive quadrature, and
tensor quadrature respectively, always in logarithmic coordinates where the
integrand decays double-exponentially.

The diagonal (read corner-first, so the dual partition function comes first)
of the column-insertion image of a symmetric inverse-gamma environment is
distributed as (1/c) e^{-beta/x_n} Psi_{-alpha}(x) prod dx_i/x_i, where c is
the normalization constant from the polymer module.  whittaker_measure_check
compares that quadrature density against direct Monte Carlo, both through the
joint CDF on a quantile grid and through the Laplace transform of the first
component (the dual partition function, distributed as the replica partition
function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polymer import (
    EnvSpec,
    Stream,
    _collect_samples,
    burge_partition_vector,
    normalization_c,
    sample_symmetric_env,
)

_TAIL_LOG_DROP = 46.0  # stop once the integrand falls this far below its peak


class NonconvergentQuadratureError(RuntimeError):
    """The adaptive panels ran out before the tails became negligible."""


@dataclass(frozen=True)
class TriangularPattern:
    """Positive entries z_{i,j} for 1 <= j <= i <= n; row n is the argument."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for i, row in enumerate(rows, start=1):
            if len(row) != i:
                raise ValueError(f"row {i} must have {i} entries, got {len(row)}")
            if any(v <= 0 for v in row):
                raise ValueError(f"row {i} has a nonpositive entry")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def bottom(self) -> tuple:
        return self.rows[-1]


def energy(z: TriangularPattern) -> float:
    """Sum of z_{i+1,j+1}/z_{i,j} + z_{i,j}/z_{i+1,j} over rows i < n."""
    total = 0.0
    for i in range(z.n - 1):
        for j in range(i + 1):
            total += z.rows[i + 1][j + 1] / z.rows[i][j]
            total += z.rows[i][j] / z.rows[i + 1][j]
    return total


def type_vector(z: TriangularPattern) -> tuple:
    """Row-product ratios (row i over row i-1, the empty row counting as 1)."""
    out = []
    previous = 1.0
    for row in z.rows:
        current = math.prod(row)
        out.append(current / previous)
        previous = current
    return tuple(out)


@dataclass(frozen=True)
class WhittakerParams:
    """Rank, exponent vector, and argument of a Whittaker function."""

    n: int
    alpha: tuple
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if self.n < 1 or len(self.alpha) != self.n or len(self.x) != self.n:
            raise ValueError(f"need n = len(alpha) = len(x), got {self.n}")
        if any(v <= 0 for v in self.x):
            raise ValueError("the argument must be positive")


# -- adaptive quadrature in log coordinates ---------------------------------------


_GL_CACHE: dict = {}


def _gauss(nodes: int):
    if nodes not in _GL_CACHE:
        _GL_CACHE[nodes] = np.polynomial.legendre.leggauss(nodes)
    return _GL_CACHE[nodes]


def _line_integral(logf, center, nodes=20, panel_width=2.5, tail_tol=1e-13, max_panels=160):
    """Integral of exp(logf) over the real line by panel growth from the peak.

    logf maps a numpy array of points to their log-integrand values; panels
    are added on both sides of the (probed) peak until their contribution is
    negligible.  Returns the integral in linear scale.
    """
    probe = center + np.arange(-40.0, 41.0)
    vals = logf(probe)
    peak = float(np.max(vals))
    if math.isnan(peak) or peak == math.inf:
        raise NonconvergentQuadratureError("integrand is not finite near the probe range")
    if peak == -math.inf or peak < -745.0:
        return 0.0  # the whole integral underflows double precision
    top = float(probe[int(np.argmax(vals))])
    base, weights = _gauss(nodes)

    def panel(lo, hi):
        u = 0.5 * (hi - lo) * base + 0.5 * (hi + lo)
        return 0.5 * (hi - lo) * float(np.dot(weights, np.exp(logf(u) - peak)))

    lo = top - 0.5 * panel_width
    hi = top + 0.5 * panel_width
    total = panel(lo, hi)
    for _ in range(max_panels):
        part = panel(hi, hi + panel_width)
        hi += panel_width
        total += part
        if part <= tail_tol * total:
            break
    else:
        raise NonconvergentQuadratureError("right tail did not become negligible")
    for _ in range(max_panels):
        part = panel(lo - panel_width, lo)
        lo -= panel_width
        total += part
        if part <= tail_tol * total:
            break
    else:
        raise NonconvergentQuadratureError("left tail did not become negligible")
    return total * math.exp(peak)


def _psi2_logf(alpha, x):
    a1, a2 = alpha
    l1, l2 = math.log(x[0]), math.log(x[1])

    def logf(v):
        return (
            a1 * v
            + a2 * (l1 + l2 - v)
            - np.exp(np.minimum(l2 - v, 700.0))
            - np.exp(np.minimum(v - l1, 700.0))
        )

    return logf, 0.5 * (l1 + l2)


def _psi3_logf(alpha, x):
    a1, a2, a3 = alpha
    l1, l2, l3 = (math.log(v) for v in x)
    lx = l1 + l2 + l3

    def logf(u11, u21, u22):
        walls = (
            np.exp(np.minimum(u22 - u11, 700.0))
            + np.exp(np.minimum(u11 - u21, 700.0))
            + np.exp(np.minimum(l2 - u21, 700.0))
            + np.exp(np.minimum(u21 - l1, 700.0))
            + np.exp(np.minimum(l3 - u22, 700.0))
            + np.exp(np.minimum(u22 - l2, 700.0))
        )
        return a1 * u11 + a2 * (u21 + u22 - u11) + a3 * (lx - u21 - u22) - walls

    return logf, np.array([0.5 * (l1 + l2), 0.5 * (l1 + l2), 0.5 * (l2 + l3)])


def _tensor_axes(logf, centers, scan=60):
    """Coordinate-ascent peak search, then per-axis ranges where the
    along-axis profile stays within the tail drop of the peak."""
    u = np.array(centers, dtype=float)
    dim = len(u)
    offsets = np.arange(-float(scan), scan + 1.0)
    for _ in range(3):
        for axis in range(dim):
            grid = np.tile(u, (len(offsets), 1))
            grid[:, axis] = u[axis] + offsets
            vals = logf(*(grid[:, k] for k in range(dim)))
            u[axis] = grid[int(np.argmax(vals)), axis]
    peak = float(logf(*(np.array([v]) for v in u))[0])
    if not math.isfinite(peak):
        raise NonconvergentQuadratureError("integrand is not finite at its probed peak")
    axes = []
    for axis in range(dim):
        grid = np.tile(u, (len(offsets), 1))
        grid[:, axis] = u[axis] + offsets
        vals = logf(*(grid[:, k] for k in range(dim)))
        alive = offsets[vals >= peak - _TAIL_LOG_DROP]
        if len(alive) == 0 or alive[0] == offsets[0] or alive[-1] == offsets[-1]:
            raise NonconvergentQuadratureError(f"axis {axis} mass did not localize")
        axes.append((u[axis] + float(alive[0]) - 2.0, u[axis] + float(alive[-1]) + 2.0))
    return axes, peak


def _psi3_quadrature(alpha, x, nodes):
    logf, centers = _psi3_logf(alpha, x)
    axes, peak = _tensor_axes(logf, centers)
    pts = []
    wts = []
    base, weights = _gauss(nodes)
    for lo, hi in axes:
        pts.append(0.5 * (hi - lo) * base + 0.5 * (hi + lo))
        wts.append(0.5 * (hi - lo) * weights)
    u11, u21, u22 = np.meshgrid(*pts, indexing="ij", sparse=True)
    values = np.exp(logf(u11, u21, u22) - peak)
    total = np.einsum("i,j,k,ijk->", wts[0], wts[1], wts[2], values)
    return float(total) * math.exp(peak)


def _psi3_monte_carlo(alpha, x, samples=400_000, strata=8):
    """Stratified uniform sampling over the probed box; lower precision than
    the tensor quadrature but an independent evaluation route."""
    logf, centers = _psi3_logf(alpha, x)
    axes, peak = _tensor_axes(logf, centers)
    per_cell = max(samples // strata**3, 8)
    edges = [np.linspace(lo, hi, strata + 1) for lo, hi in axes]
    cell_vol = math.prod((hi - lo) / strata for lo, hi in axes)
    rng = np.random.default_rng(0x57A7)
    total = 0.0
    for i in range(strata):
        for j in range(strata):
            for k in range(strata):
                u = rng.random((per_cell, 3))
                u11 = edges[0][i] + (edges[0][i + 1] - edges[0][i]) * u[:, 0]
                u21 = edges[1][j] + (edges[1][j + 1] - edges[1][j]) * u[:, 1]
                u22 = edges[2][k] + (edges[2][k + 1] - edges[2][k]) * u[:, 2]
                total += float(np.mean(np.exp(logf(u11, u21, u22) - peak)))
    return total * cell_vol * math.exp(peak)


def psi(params: WhittakerParams, method: str = "quadrature") -> float:
    """The rank-n Whittaker function at params.x with exponents params.alpha.

    Rank 1 is the monomial prod x^alpha; rank 2 integrates over the single
    free entry; rank 3 integrates over the three free entries by tensor
    quadrature (method "quadrature") or stratified Monte Carlo over the same
    box (method "monte-carlo", noticeably less precise).
    """
    if method not in ("quadrature", "monte-carlo"):
        raise ValueError(f"unknown method {method!r}")
    if params.n == 1:
        return params.x[0] ** params.alpha[0]
    if params.n == 2:
        logf, center = _psi2_logf(params.alpha, params.x)
        return _line_integral(logf, center)
    if params.n == 3:
        if method == "monte-carlo":
            return _psi3_monte_carlo(params.alpha, params.x)
        return _psi3_quadrature(params.alpha, params.x, nodes=64)
    raise ValueError(f"unsupported rank {params.n}; only n <= 3 is implemented")


# -- the measure on diagonals ---------------------------------------------------------------


def _psi2_bulk(alpha, u1, u2, nodes_per_unit=8, pad=9.0):
    """Rank-2 Whittaker values at (e^{u1_k}, e^{u2}) for a whole column of
    first arguments, sharing one inner node set that covers every peak."""
    a1, a2 = alpha
    lo = min(u2, float(np.min(u1))) - pad
    hi = max(u2, float(np.max(u1))) + pad
    panels = max(int(math.ceil((hi - lo) / 2.5)), 1)
    base, weights = _gauss(20)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    v = (half[:, None] * base[None, :] + 0.5 * (edges[1:] + edges[:-1])[:, None]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    lf = (
        a1 * v[None, :]
        + a2 * (u1[:, None] + u2 - v[None, :])
        - np.exp(np.minimum(u2 - v, 700.0))[None, :]
        - np.exp(np.minimum(v[None, :] - u1[:, None], 700.0))
    )
    row_peak = lf.max(axis=1, keepdims=True)
    safe_peak = np.maximum(row_peak, -700.0)
    return (np.exp(lf - safe_peak) @ w) * np.exp(safe_peak[:, 0])


class _MeasureGrid:
    """Tensor-panel quadrature of e^{-beta/x2} Psi_{-alpha}(x1, x2) on the
    positive quadrant, in log coordinates, with prescribed cut lines aligned
    to panel boundaries so that cumulative sums are exact panel sums."""

    def __init__(self, alpha, beta, cuts1=(), cuts2=(), nodes=16, panel_width=2.5):
        self.alpha = tuple(float(a) for a in alpha)
        self.beta = float(beta)
        neg = tuple(-a for a in self.alpha)

        def logf(u1, u2):
            # scalar probe of the full integrand, in log coordinates
            value = _psi2_bulk(neg, np.array([u1]), u2)[0]
            damp = -self.beta * math.exp(min(-u2, 700.0))
            return (math.log(value) if value > 0 else -math.inf) + damp

        axes = self._probe_axes(logf)
        self._build(neg, axes, cuts1, cuts2, nodes, panel_width)

    def _probe_axes(self, logf):
        u = [0.0, 0.0]
        for _ in range(3):
            for axis in range(2):
                best = max(range(-40, 41), key=lambda k: logf(*self._shift(u, axis, k)))
                u[axis] += best
        peak = logf(u[0], u[1])
        if not math.isfinite(peak):
            raise NonconvergentQuadratureError("measure integrand has no finite peak")
        axes = []
        for axis in range(2):
            lo = self._walk(logf, u, axis, -1.0, peak)
            hi = self._walk(logf, u, axis, +1.0, peak)
            axes.append((lo - 2.0, hi + 2.0))
        return axes

    @staticmethod
    def _walk(logf, u, axis, step, peak, limit=400):
        """March along one axis until the profile drops below the tail
        threshold; slow power-law tails (small parameters) need long walks."""
        point = list(u)
        for _ in range(limit):
            point[axis] += step
            if logf(*point) < peak - _TAIL_LOG_DROP:
                return point[axis]
        raise NonconvergentQuadratureError(f"axis {axis} mass did not localize")

    @staticmethod
    def _shift(u, axis, k):
        out = list(u)
        out[axis] += k
        return out

    @staticmethod
    def _boundaries(lo, hi, cuts, panel_width):
        inner = sorted(c for c in cuts if lo < c < hi)
        edges = [lo] + inner + [hi]
        out = []
        for a, b in zip(edges, edges[1:]):
            pieces = max(int(math.ceil((b - a) / panel_width)), 1)
            out.extend(a + (b - a) * k / pieces for k in range(pieces))
        out.append(hi)
        return out

    def _build(self, neg, axes, cuts1, cuts2, nodes, panel_width):
        base, weights = _gauss(nodes)

        def axis_nodes(bounds):
            b = np.asarray(bounds)
            half = 0.5 * (b[1:] - b[:-1])
            mid = 0.5 * (b[1:] + b[:-1])
            return (half[:, None] * base + mid[:, None]).ravel(), (
                half[:, None] * weights
            ).ravel()

        b1 = self._boundaries(*axes[0], cuts1, panel_width)
        b2 = self._boundaries(*axes[1], cuts2, panel_width)
        self._u1, w1 = axis_nodes(b1)
        self._u2, w2 = axis_nodes(b2)
        mass = np.empty((len(self._u1), len(self._u2)))
        for j, (u2, w) in enumerate(zip(self._u2, w2)):
            damp = math.exp(-self.beta * math.exp(min(-u2, 700.0)))
            mass[:, j] = _psi2_bulk(neg, self._u1, u2) * (w1 * w * damp)
        self._mass = mass
        self.total = float(mass.sum())

    def cdf(self, s: float, t: float) -> float:
        """Mass of (0, s] x (0, t]; exact panel sums when the cut lines were
        prescribed at construction."""
        rows = self._u1 < math.log(s)
        cols = self._u2 < math.log(t)
        return float(self._mass[np.ix_(rows, cols)].sum())

    def expect_of_first(self, g) -> float:
        """Integral of g(x1) against the (unnormalized) measure."""
        return float(g(np.exp(self._u1)) @ self._mass.sum(axis=1))


def whittaker_density(n: int, alpha, beta: float, x) -> float:
    """Joint density, at x, of the corner-first diagonal of the
    column-insertion image of a symmetric inverse-gamma environment:
    (1/c) e^{-beta/x_n} Psi_{-alpha}(x) / prod(x)."""
    alpha = tuple(float(a) for a in alpha)
    x = tuple(float(v) for v in x)
    if any(a <= 0 for a in alpha) or beta <= 0:
        raise ValueError("parameters must be positive")
    params = WhittakerParams(n, tuple(-a for a in alpha), x)
    c = normalization_c(alpha, beta)
    return math.exp(-beta / x[-1]) * psi(params) / (c * math.prod(x))


def corollary_check(alpha, beta: float):
    """Both sides of the integral identity
    int e^{-beta/x_n} Psi_{-alpha}(x) prod dx_i/x_i = c, as (lhs, rhs, relerr);
    the left side by quadrature, for n <= 2."""
    alpha = tuple(float(a) for a in alpha)
    if any(a <= 0 for a in alpha) or beta <= 0:
        raise ValueError("parameters must be positive")
    rhs = normalization_c(alpha, beta)
    if len(alpha) == 1:
        a = alpha[0]

        def logf(u):
            return -a * u - beta * np.exp(np.minimum(-u, 700.0))

        lhs = _line_integral(logf, center=math.log(beta))
    elif len(alpha) == 2:
        lhs = _MeasureGrid(alpha, beta).total
    else:
        raise ValueError("quadrature for this identity is implemented for n <= 2")
    return lhs, rhs, abs(lhs - rhs) / rhs


def whittaker_measure_check(
    alpha,
    beta: float,
    samples: int,
    seed: int,
    r_values=(0.5, 1.0, 2.0),
    quantiles=(0.1, 0.3, 0.5, 0.7, 0.9),
    threads: int = 1,
) -> dict:
    """End-to-end n = 2 distribution check of the measure on diagonals.

    Draws the diagonal (read corner-first: x1 is the dual partition function)
    of the column-insertion image of sampled environments, then compares the
    empirical joint CDF on the quantile grid, and the Laplace transform of x1,
    against quadrature of the density.  Agreement is measured in standard
    errors (binomial for CDF points); three is the pass line.
    """
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != 2:
        raise ValueError("the end-to-end check is implemented for n = 2")
    spec = EnvSpec(2, alpha, beta)

    def per_sample(i):
        vec = burge_partition_vector(sample_symmetric_env(spec, Stream(seed, i)))
        return vec[1], vec[0]

    xs1, xs2 = _collect_samples(samples, per_sample, threads)
    xs1 = np.asarray(xs1)
    xs2 = np.asarray(xs2)
    s_cuts = [float(np.quantile(xs1, q)) for q in quantiles]
    t_cuts = [float(np.quantile(xs2, q)) for q in quantiles]
    grid = _MeasureGrid(
        alpha, beta, cuts1=[math.log(s) for s in s_cuts], cuts2=[math.log(t) for t in t_cuts]
    )
    c = normalization_c(alpha, beta)
    cdf_points = []
    worst = 0.0
    for s in s_cuts:
        below_s = xs1 <= s
        for t in t_cuts:
            predicted = grid.cdf(s, t) / c
            empirical = float(np.mean(below_s & (xs2 <= t)))
            se = max(math.sqrt(predicted * (1.0 - predicted) / samples), 1e-12)
            sigma = abs(empirical - predicted) / se
            worst = max(worst, sigma)
            cdf_points.append(
                {"s": s, "t": t, "empirical": empirical, "predicted": predicted, "sigma": sigma}
            )
    laplace = []
    for r in r_values:
        r = float(r)
        values = np.exp(-r * xs1)
        mc = float(np.mean(values))
        stderr = float(np.std(values, ddof=1) / math.sqrt(samples))
        predicted = grid.expect_of_first(lambda x1: np.exp(-r * x1)) / c
        sigma = abs(mc - predicted) / max(stderr, 1e-15)
        laplace.append(
            {"r": r, "estimate": mc, "stderr": stderr, "predicted": predicted, "sigma": sigma}
        )
    passed = worst <= 3.0 and all(row["sigma"] <= 3.0 for row in laplace)
    return {
        "test": "whittaker-measure",
        "n": 2,
        "alpha": list(alpha),
        "beta": beta,
        "samples": samples,
        "seed": seed,
        "total_mass": grid.total / c,
        "cdf_points": cdf_points,
        "cdf_max_sigma": worst,
        "laplace": laplace,
        "pass": bool(passed),
    }
