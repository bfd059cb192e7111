"""Radial discretization of R^N.

Uniform mesh on [0, R], quadrature weights that carry the full spherical
measure omega_{N-1} r^{N-1} dr, a fourth-order radial Laplacian with the
symmetry limit at the origin, and the two field-rescaling maps (fiber dilation
and the bend-preserving mass dilation).

Quadrature design: interior weights are the smooth product h * omega * r^{N-1}
(trapezoid measure, half weight at r = R), node 0 carries the exact integral
of the first cell's linear hat against r^{N-1}, and the five nodes adjacent to
each endpoint receive exact-rational Euler-Maclaurin corrections (Bernoulli
closed form on the left, moment matching against the Beta closed form on the
right). All corrections are computed in Fraction arithmetic, so the rule is
exact for integrands r^m * r^{N-1}, m <= 4, to float rounding. Weights stay
nonnegative; interior smoothness matters because the energy gradient divides
by them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import PchipInterpolator

from .landscape import DomainError

__all__ = [
    "RadialGrid",
    "RadialField",
    "build_grid",
    "integrate",
    "laplacian",
    "scale_field",
    "mass_dilate",
    "sphere_area",
    "save_field",
    "load_field",
]


def sphere_area(N: int) -> float:
    """Surface measure of the unit (N-1)-sphere."""
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    # B_0..B_m by the defining recurrence, exact
    if m == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(m):
        acc += Fraction(math.comb(m + 1, j)) * _bernoulli(j)
    return -acc / (m + 1)


def _solve5(A, b):
    # 5x5 Gaussian elimination over Fractions, partial structure not needed
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(5):
        piv = next(r for r in range(col, 5) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(5):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][5] for r in range(5)]


@lru_cache(maxsize=16)
def _weight_core(N: int, n: int) -> np.ndarray:
    # r_max enters only through the h^N prefactor, so the exact-arithmetic
    # part is cached per (N, n); callers must not mutate the result
    X = n - 1
    v = [Fraction(i) ** (N - 1) for i in range(n)]
    v[X] /= 2
    # node 0: integral of the linear hat on [0, h] against x^{N-1}
    pin = Fraction(1, N * (N + 1))
    v[0] = pin
    # left corrections d_1..d_5: match moments x^m, m = 0..4, whose exact
    # trapezoid defect is the Euler-Maclaurin boundary value at x = 0
    A = [[Fraction(i) ** m for i in range(1, 6)] for m in range(5)]
    bL = []
    for m in range(5):
        t = _bernoulli(m + N) / (m + N) if (m + N) % 2 == 0 else Fraction(0)
        if m == 0:
            t -= pin
        bL.append(t)
    dL = _solve5(A, bL)
    # right corrections in the shifted basis (x - X)^k, matched against the
    # exact Beta-function integral of (x - X)^k x^{N-1} over [0, X]
    bR = []
    for k in range(5):
        T = (Fraction((-1) ** k) * Fraction(X) ** (k + N)
             * Fraction(math.factorial(k) * math.factorial(N - 1),
                        math.factorial(k + N)))
        S = sum(v[i] * Fraction(i - X) ** k for i in range(n))
        dLq = sum(dL[j] * Fraction(j + 1 - X) ** k for j in range(5))
        bR.append(T - S - dLq)
    AR = [[Fraction(t) ** k for t in range(-4, 1)] for k in range(5)]
    dR = _solve5(AR, bR)
    for j in range(5):
        v[1 + j] += dL[j]
        v[X - 4 + j] += dR[j]
    return np.array([float(x) for x in v])


def _weights(N: int, n: int, r_max: float) -> np.ndarray:
    h = r_max / (n - 1)
    return _weight_core(N, n) * (h ** N * sphere_area(N))


def _laplacian_matrix(N: int, n: int, r_max: float) -> sp.csr_matrix:
    h = r_max / (n - 1)
    c2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * h * h)
    c1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12.0 * h)
    rows, cols, vals = [0, 0, 0], [0, 1, 2], [
        # r = 0: N * u''(0), second-derivative stencil folded evenly
        N * (-30.0) / (12.0 * h * h),
        N * 32.0 / (12.0 * h * h),
        N * (-2.0) / (12.0 * h * h),
    ]
    for i in range(1, n):
        r = i * h
        for off in range(-2, 3):
            j = i + off
            coeff = c2[off + 2] + (N - 1) / r * c1[off + 2]
            if j < 0:
                j = -j          # even extension through the origin
            if j < n:           # zero extension past R
                rows.append(i)
                cols.append(j)
                vals.append(coeff)
    m = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    m.sum_duplicates()
    return m


@dataclass(frozen=True)
class RadialGrid:
    dim: int
    n: int
    r_max: float
    nodes: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)
    lap: sp.csr_matrix = field(repr=False, compare=False)
    lap_t: sp.csr_matrix = field(repr=False, compare=False)

    @property
    def h(self) -> float:
        return self.r_max / (self.n - 1)

    def same_as(self, other: "RadialGrid") -> bool:
        return (self.dim, self.n, self.r_max) == (other.dim, other.n, other.r_max)


@dataclass(frozen=True)
class RadialField:
    grid: RadialGrid
    values: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise DomainError(
                f"field length {vals.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("field values must be finite")
        object.__setattr__(self, "values", vals)


def build_grid(dim: int, n: int, r_max: float) -> RadialGrid:
    """Uniform radial grid with spherical quadrature weights.

    dim >= 5 integer, n >= 64 nodes, r_max > 0.
    """
    if not isinstance(dim, int) or dim < 5:
        raise DomainError(f"dim must be an integer >= 5, got {dim!r}")
    if not isinstance(n, int) or n < 64:
        raise DomainError(f"n must be an integer >= 64, got {n!r}")
    if not (float(r_max) > 0):
        raise DomainError(f"r_max must be positive, got {r_max!r}")
    r_max = float(r_max)
    lap = _laplacian_matrix(dim, n, r_max)
    return RadialGrid(
        dim=dim, n=n, r_max=r_max,
        nodes=np.linspace(0.0, r_max, n),
        weights=_weights(dim, n, r_max),
        lap=lap,
        lap_t=sp.csr_matrix(lap.T),
    )


def integrate(grid: RadialGrid, samples: np.ndarray) -> float:
    """Quadrature of a radial sample vector over R^N."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.n,):
        raise DomainError(
            f"sample length {samples.shape} does not match grid n={grid.n}")
    return float(np.sum(grid.weights * samples))


def laplacian(fld: RadialField) -> RadialField:
    """Fourth-order discrete radial Laplacian u'' + (N-1)u'/r.

    Origin row is the symmetry limit N u''(0); fields are extended evenly
    through r = 0 and by zero past r = R.
    """
    return RadialField(fld.grid, fld.grid.lap @ fld.values)


def _pchip_eval(grid: RadialGrid, values: np.ndarray, x: np.ndarray) -> np.ndarray:
    # flat zero tails make pchip's slope ratios divide by zero; harmless
    with np.errstate(all="ignore"):
        interp = PchipInterpolator(grid.nodes, values, extrapolate=False)
        out = interp(x)
    return np.nan_to_num(out, nan=0.0, posinf=0.0, neginf=0.0)


def scale_field(fld: RadialField, s: float) -> RadialField:
    """Fiber dilation u_s(r) = s^{N/4} u(s^{1/2} r), zero beyond R.

    Monotone cubic interpolation; preserves mass up to interpolation and
    truncation error.
    """
    if not (s > 0):
        raise DomainError(f"dilation factor must be positive, got {s!r}")
    if s == 1.0:
        return RadialField(fld.grid, fld.values.copy())
    g = fld.grid
    x = math.sqrt(s) * g.nodes
    vals = s ** (g.dim / 4.0) * np.where(x <= g.r_max,
                                         _pchip_eval(g, fld.values, x), 0.0)
    return RadialField(g, vals)


def mass_dilate(fld: RadialField, c_from: float, c_to: float,
                mass_rtol: float = 1e-6) -> RadialField:
    """Bend-preserving dilation v(r) = a^{(N-4)/2} u(a r), a = (c_from/c_to)^{1/4}.

    Moves mass c_from to c_to while leaving the bending norm unchanged (up to
    interpolation error); the q-norm picks up the factor
    (c_to/c_from)^{(2N-q(N-4))/8}.
    """
    if c_from <= 0 or c_to <= 0:
        raise DomainError("masses must be positive")
    g = fld.grid
    have = integrate(g, fld.values ** 2)
    if abs(have - c_from) > mass_rtol * max(c_from, 1e-300):
        raise DomainError(
            f"field mass {have} is not c_from={c_from} within {mass_rtol}")
    if c_from == c_to:
        return RadialField(g, fld.values.copy())
    a = (c_from / c_to) ** 0.25
    amp = (c_from / c_to) ** ((g.dim - 4) / 8.0)
    x = a * g.nodes
    vals = amp * np.where(x <= g.r_max, _pchip_eval(g, fld.values, x), 0.0)
    return RadialField(g, vals)


def save_field(fld: RadialField, path) -> None:
    """Two-column CSV r,value with a grid-identification header line."""
    g = fld.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# dim={g.dim} n={g.n} r_max={g.r_max!r}\n")
        fh.write("r,value\n")
        for r, v in zip(g.nodes, fld.values):
            fh.write(f"{float(r)!r},{float(v)!r}\n")


def load_field(path, grid: RadialGrid | None = None) -> RadialField:
    """Load a field CSV; the header must agree with the target grid."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("# "):
            raise DomainError(f"{path}: missing grid header line")
        meta = dict(kv.split("=", 1) for kv in header[2:].split())
        try:
            dim, n, r_max = int(meta["dim"]), int(meta["n"]), float(meta["r_max"])
        except (KeyError, ValueError) as exc:
            raise DomainError(f"{path}: malformed grid header: {header}") from exc
        if fh.readline().strip() != "r,value":
            raise DomainError(f"{path}: expected 'r,value' column header")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if grid is None:
        grid = build_grid(dim, n, r_max)
    elif (grid.dim, grid.n, grid.r_max) != (dim, n, r_max):
        raise DomainError(
            f"{path}: header dim={dim} n={n} r_max={r_max} does not match "
            f"target grid dim={grid.dim} n={grid.n} r_max={grid.r_max}")
    if data.shape != (grid.n, 2):
        raise DomainError(f"{path}: expected {grid.n} rows, got {data.shape[0]}")
    if not np.allclose(data[:, 0], grid.nodes, rtol=0, atol=1e-9 * grid.r_max):
        raise DomainError(f"{path}: r column disagrees with the grid nodes")
    return RadialField(grid, data[:, 1])
