"""Free multiplicative convolution of an atomic spectrum with the Wishart family.

For a population measure H = sum_i w_i delta(t_i) and aspect ratio
c = N/L, the Stieltjes transform m(z) of the limiting sample-covariance
spectrum solves the self-consistency equation

    m = sum_i w_i / (t_i (1 - c - c z m) - z),

the scalar master equation of the convolution.  Cleared of denominators
it is a degree-(k+1) polynomial in m, solved here numerically per grid
point instead of symbolically once.  The boundary density is recovered
from Im m(x + i eta) / pi on a grid.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ecm import ArrayNoiseConfig, ensemble_spectrum
from .linalg import NumericError, poly_roots
from .spike import AtomicMeasure, classify, full_measure, reduce
from .specfun import zero_atom_mass

_FP_MAX_ITER = 2000
_FP_DAMPING = 0.5
_FP_TOL = 1e-12
_RESIDUAL_TOL = 1e-10
_NEGATIVE_DENSITY_TOL = 1e-8


class SolverError(RuntimeError):
    """No admissible Stieltjes branch root was found at a point."""

    def __init__(self, z: complex, residual: float):
        self.z = z
        self.residual = residual
        super().__init__(
            f"no Herglotz root with acceptable residual at z = {z} "
            f"(best residual {residual:.3e})"
        )


@dataclass(frozen=True)
class FmcProblem:
    """Population spectrum plus aspect ratio; the input to the convolution."""

    measure: AtomicMeasure
    c: float

    def __post_init__(self):
        if not (self.c > 0):
            raise ValueError(f"aspect ratio c must be > 0, got {self.c}")

    @property
    def zero_mass(self) -> float:
        return zero_atom_mass(self.c)


def _equation_coefficients(atoms, c, z) -> np.ndarray:
    """Ascending coefficients in m of the denominator-cleared master equation."""
    k = len(atoms)
    # each factor is a_j + b_j m with a_j = t_j (1-c) - z, b_j = -c z t_j
    factors = [(t * (1 - c) - z, -c * z * t) for t, _ in atoms]
    coeffs = np.zeros(k + 2, dtype=complex)
    for i, (_, w) in enumerate(atoms):
        partial = np.array([1.0 + 0j])
        for j, (aj, bj) in enumerate(factors):
            if j != i:
                partial = np.convolve(partial, [aj, bj])
        coeffs[:k] += w * partial
    full = np.array([1.0 + 0j])
    for aj, bj in factors:
        full = np.convolve(full, [aj, bj])
    coeffs[1:] -= full
    return coeffs


@dataclass(frozen=True)
class StieltjesPolynomial:
    """Denominator-cleared master equation as a polynomial in m at fixed z.

    degree = atom count + 1.  For the unit single-atom measure the
    coefficients reduce to the quadratic  c z m^2 - (1 - c - z) m + 1.
    """

    problem: FmcProblem
    degree: int

    def coefficients(self, z: complex) -> np.ndarray:
        """Ascending coefficients (length degree + 1) of the polynomial in m."""
        return _equation_coefficients(
            self.problem.measure.atoms, self.problem.c, complex(z)
        )


def build_polynomial(p: FmcProblem) -> StieltjesPolynomial:
    return StieltjesPolynomial(problem=p, degree=len(p.measure.atoms) + 1)


def _map_value(atoms, c, z, m):
    """Right-hand side of the self-consistency equation."""
    u = 1 - c - c * z * m
    total = 0j
    for t, w in atoms:
        total += w / (t * u - z)
    return total


def _map_derivative(atoms, c, z, m):
    u = 1 - c - c * z * m
    total = 0j
    for t, w in atoms:
        d = t * u - z
        total += w * t * c * z / (d * d)
    return total


def _residual(atoms, c, z, m) -> float:
    return abs(m - _map_value(atoms, c, z, m)) / max(1.0, abs(m))


def _acceptable(atoms, c, z, m) -> bool:
    return m.imag > 0 and _residual(atoms, c, z, m) <= _RESIDUAL_TOL


def _newton_m(atoms, c, z, m, itmax=80):
    for _ in range(itmax):
        g = m - _map_value(atoms, c, z, m)
        dg = 1 - _map_derivative(atoms, c, z, m)
        if dg == 0:
            return m, False
        step = g / dg
        m = m - step
        if abs(step) <= 1e-14 * max(1.0, abs(m)):
            return m, True
    return m, False


def _newton_regularized(atoms, c, z, mc, itmax=100):
    """Newton on the pole-subtracted equation, stable for c > 1 as z -> 0.

    With m = mc - z0/z and z0 = 1 - 1/c the equation becomes
    G(mc) = z mc - z0 + sum w / (1 + c t mc) = 0, free of the 1/z blowup.
    """
    z0 = 1 - 1 / c
    for _ in range(itmax):
        g = z * mc - z0
        dg = z + 0j
        for t, w in atoms:
            d = 1 + c * t * mc
            g += w / d
            dg -= w * c * t / (d * d)
        if dg == 0:
            return mc, False
        step = g / dg
        mc = mc - step
        if abs(step) <= 1e-14 * max(1.0, abs(mc)):
            return mc, True
    return mc, False


def _solve(atoms, c, z, mc0, zero_mass):
    """One admissible root, warm started and returned as mc = m + zero_mass/z.

    The continuation state is kept in the regularized coordinate because
    for c > 1 the raw transform carries a -zero_mass/z pole whose jump
    between neighbouring z values would wreck warm starts.
    """
    pole = zero_mass / z if zero_mass > 0 else 0j
    m0 = mc0 - pole
    # damped fixed point with stall detection
    m = m0
    last_delta = None
    for it in range(_FP_MAX_ITER):
        m_new = m + _FP_DAMPING * (_map_value(atoms, c, z, m) - m)
        delta = abs(m_new - m)
        m = m_new
        if delta <= _FP_TOL * max(1.0, abs(m)):
            break
        if it % 100 == 99:
            if last_delta is not None and delta > 0.7 * last_delta:
                break  # stalled or diverging
            last_delta = delta
    if _acceptable(atoms, c, z, m):
        return m + pole
    # Newton from the warm start (handles edge pinches the iteration circles)
    m, converged = _newton_m(atoms, c, z, m0)
    if converged and _acceptable(atoms, c, z, m):
        return m + pole
    if zero_mass > 0:
        mc, converged = _newton_regularized(atoms, c, z, mc0)
        if converged:
            m = mc - pole
            if _acceptable(atoms, c, z, m):
                return mc
    # companion-matrix enumeration, then pick the admissible root nearest
    # the warm start (branch continuity)
    coeffs = _equation_coefficients(atoms, c, z)
    best = None
    best_res = math.inf
    try:
        roots = poly_roots(coeffs / np.max(np.abs(coeffs)))
    except NumericError:
        roots = []
    for r in roots:
        mr, converged = _newton_m(atoms, c, z, complex(r), 60)
        if not converged:
            continue
        res = _residual(atoms, c, z, mr)
        best_res = min(best_res, res)
        if mr.imag > 0 and res <= _RESIDUAL_TOL:
            if best is None or abs(mr - m0) < abs(best - m0):
                best = mr
    if best is None:
        raise SolverError(z, best_res)
    return best + pole


def _normalized_atoms(measure: AtomicMeasure):
    return tuple((float(t), float(w)) for t, w in measure.atoms)


def stieltjes_at(p: FmcProblem, z: complex, warm_start: complex | None = None) -> complex:
    """Stieltjes transform of the limiting spectrum at z (upper half plane).

    Solves the self-consistency equation by damped fixed point from the
    warm start (default -1/z), escalating to Newton and companion-matrix
    enumeration; the accepted root must have Im m > 0 and satisfy the
    defining equation to 1e-10 relative.
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError(f"z must lie in the upper half plane, got {z}")
    atoms = _normalized_atoms(p.measure)
    zero_mass = p.zero_mass
    m0 = warm_start if warm_start is not None else -1 / z
    mc0 = m0 + (zero_mass / z if zero_mass > 0 else 0j)
    mc = _solve(atoms, p.c, z, mc0, zero_mass)
    return mc - (zero_mass / z if zero_mass > 0 else 0j)


@dataclass(frozen=True)
class SpectralDensity:
    """Sampled continuous density plus the mass of the point mass at zero."""

    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    zero_mass: float
    eta: float

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or len(grid) < 2:
            raise ValueError("grid and values must be matching 1-D arrays")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly ascending")
        if np.any(values < 0):
            raise ValueError("density values must be nonnegative")
        if not 0 <= self.zero_mass < 1:
            raise ValueError(f"zero_mass must lie in [0, 1), got {self.zero_mass}")

    @property
    def trapezoid_mass(self) -> float:
        return float(np.trapezoid(self.values, self.grid))

    @property
    def total_mass(self) -> float:
        return self.zero_mass + self.trapezoid_mass


def density_curve(p: FmcProblem, grid: np.ndarray, eta: float = 1e-6) -> SpectralDensity:
    """Boundary density Im m(x + i eta)/pi along an ascending grid.

    The first point is reached by marching the far-field asymptote down
    in imaginary part; subsequent points warm start from their left
    neighbour.  For c > 1 the zero atom's pole is subtracted so the
    samples describe only the continuous part.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a strictly ascending 1-D array")
    if not (eta > 0):
        raise ValueError(f"eta must be > 0, got {eta}")
    if p.c >= 1 and grid[0] <= 0:
        raise ValueError("grid points must be > 0 for c >= 1 (zero atom is separate)")
    atoms = _normalized_atoms(p.measure)
    zero_mass = p.zero_mass
    values = np.empty(len(grid))

    # far-field march down to eta at the first grid point
    x0 = float(grid[0])
    h = max(10.0, 2 * float(grid[-1]))
    mc = -(1 - zero_mass) / complex(x0, h)
    while h > eta:
        h = max(eta, 0.3 * h)
        mc = _solve(atoms, p.c, complex(x0, h), mc, zero_mass)
    values[0] = mc.imag / math.pi
    for j in range(1, len(grid)):
        z = complex(grid[j], eta)
        try:
            mc = _solve(atoms, p.c, z, mc, zero_mass)
        except SolverError as e:
            raise SolverError(z, e.residual) from e
        values[j] = mc.imag / math.pi
    worst = values.min()
    if worst < -_NEGATIVE_DENSITY_TOL:
        raise NumericError(
            f"density {worst:.3e} at x = {grid[int(values.argmin())]:.6g} is too "
            "negative for round-off; likely branch mis-selection"
        )
    np.clip(values, 0.0, None, out=values)
    return SpectralDensity(grid=grid, values=values, zero_mass=zero_mass, eta=eta)


def default_grid(p: FmcProblem, points: int) -> np.ndarray:
    """Uniform grid covering the limiting support with edge margins.

    Spans [max(1e-4, 0.5 t_min (1-sqrt(c))^2 for c < 1), 1.25 t_max (1+sqrt(c))^2],
    which contains every atom's smeared band t (1 +- sqrt(c))^2.
    """
    if points < 16:
        raise ValueError(f"points must be >= 16, got {points}")
    rc = math.sqrt(p.c)
    locs = p.measure.locations
    t_min, t_max = float(locs[0]), float(locs[-1])
    lo = 0.5 * t_min * (1 - rc) ** 2 if p.c < 1 else 0.0
    lo = max(1e-4, lo)
    hi = 1.25 * t_max * (1 + rc) ** 2
    return np.linspace(lo, hi, points)


def _auto_grid(p: FmcProblem, points: int) -> np.ndarray:
    """Default grid, switching to square-root grading when the bulk touches zero.

    Near c = 1 the density behaves like x^(-1/2) at the origin; a uniform
    grid cannot integrate that to the mass tolerance, so grade the points
    as u^2 instead.
    """
    rc = math.sqrt(p.c)
    locs = p.measure.locations
    t_min, t_max = float(locs[0]), float(locs[-1])
    hi = 1.25 * t_max * (1 + rc) ** 2
    edge = t_min * (1 - rc) ** 2
    if edge < 1e-4 * hi:
        u = np.linspace(math.sqrt(1e-6), math.sqrt(hi), points)
        return u * u
    return default_grid(p, points)


@dataclass(frozen=True)
class EdfPrediction:
    """Predicted density plus provenance of the run."""

    density: SpectralDensity
    atom_count: int
    mode: str
    c: float
    wall_ms: float


def predict_edf(
    cfg: ArrayNoiseConfig,
    c: float,
    mode: str = "reduced",
    points: int = 1500,
    eta: float = 1e-6,
    grid: np.ndarray | None = None,
) -> EdfPrediction:
    """End-to-end prediction: spectrum -> (collapse | keep all) -> density."""
    if mode not in ("reduced", "full"):
        raise ValueError(f"mode must be 'reduced' or 'full', got {mode!r}")
    start = time.perf_counter()
    spectrum = ensemble_spectrum(cfg)
    if mode == "reduced":
        measure = reduce(classify(spectrum, c), cfg.n)
    else:
        measure = full_measure(spectrum)
    problem = FmcProblem(measure=measure, c=c)
    if grid is None:
        grid = _auto_grid(problem, points)
    density = density_curve(problem, grid, eta)
    wall_ms = (time.perf_counter() - start) * 1e3
    return EdfPrediction(
        density=density,
        atom_count=len(measure.atoms),
        mode=mode,
        c=c,
        wall_ms=wall_ms,
    )
