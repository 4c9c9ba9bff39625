"""Bloch semi-norms, Bergman constants and composition-operator bounds.

Suprema over a domain are estimated by seeded sampling followed by compass
search.  Every reported value is the pointwise quantity evaluated at the
returned witness, so it is a certified lower bound for the supremum and
nothing more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .domains import (
    Ball,
    Disk,
    Polydisk,
    _as_point,
    bergman_distance,
    contains,
    dimension,
    factors,
    metric_matrix,
    rank,
    require_interior,
    sample_points,
    zhu_distance_ball,
)
from .errors import SingularityError, UnsupportedError, ValidationError
from .linalg import hermitian_quadratic_solve, max_generalized_eigenvalue
from .maps import HoloMap

DEFAULT_SCHEDULE = (0.5, 0.9, 0.99, 0.999)


@dataclass(frozen=True)
class EstimateConfig:
    samples: int = 20000
    seed: int = 42
    schedule: tuple = DEFAULT_SCHEDULE
    top: int = 5
    step: float = 0.05
    shrink: float = 0.5
    min_step: float = 1e-7
    max_evals: int = 4000  # per ascent start
    extra_seeds: tuple = ()

    def __post_init__(self):
        if self.samples < 1:
            raise ValidationError("samples must be >= 1")
        s = tuple(float(x) for x in self.schedule)
        if not s or any(not 0.0 < x < 1.0 for x in s) or any(b <= a for a, b in zip(s, s[1:])):
            raise ValidationError("radius schedule must be strictly increasing in (0, 1)")
        object.__setattr__(self, "schedule", s)

    def to_document(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "schedule": list(self.schedule),
            "top": self.top,
            "step": self.step,
            "shrink": self.shrink,
            "min_step": self.min_step,
        }


@dataclass
class EstimateReport:
    value: float
    witness: np.ndarray
    samples_used: int
    seed: int
    radius_schedule: tuple
    converged_flag: bool
    lower_bound_certified: bool = True
    level_maxima: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "value": self.value,
            "witness": [[float(x.real), float(x.imag)] for x in self.witness],
            "samples_used": self.samples_used,
            "seed": self.seed,
            "radius_schedule": list(self.radius_schedule),
            "converged_flag": self.converged_flag,
            "lower_bound_certified": self.lower_bound_certified,
            "level_maxima": self.level_maxima,
        }


# ----------------------------------------------------------------------------
# Pointwise quantities
# ----------------------------------------------------------------------------


def _scalar_gradient(f: HoloMap, z) -> np.ndarray:
    if f.n_out != 1:
        raise ValidationError("expected a scalar function")
    return np.asarray(f.jacobian(z), dtype=complex)[0]


def q_norm(f: HoloMap, spec, z) -> float:
    """``sup_u |grad f(z) . u| / H_z(u, u)^(1/2)``, computed as ``sqrt(g^T A^-1 conj(g))``."""
    z = _as_point(spec, z)
    require_interior(spec, z)
    g = _scalar_gradient(f, z)
    return math.sqrt(hermitian_quadratic_solve(metric_matrix(spec, z), g))


def zhu_q_ball(f: HoloMap, z, n: int) -> float:
    """``[(1 - |z|^2)(|grad f|^2 - |Rf|^2)]^(1/2)`` with the radial derivative ``Rf = sum z_k df/dz_k``."""
    spec = Ball(n)
    z = _as_point(spec, z)
    require_interior(spec, z)
    g = _scalar_gradient(f, z)
    zz = float(np.real(np.vdot(z, z)))
    Rf = np.sum(z * g)
    val = (1.0 - zz) * (float(np.real(np.vdot(g, g))) - abs(Rf) ** 2)
    return math.sqrt(max(val, 0.0))


def local_dilation(phi: HoloMap, spec, z) -> float:
    """``sup_u H_phi(z)(J u, J u)^(1/2) / H_z(u, u)^(1/2)`` for a self-map ``phi``."""
    z = _as_point(spec, z)
    require_interior(spec, z)
    w = np.asarray(phi.evaluate(z), dtype=complex)
    ok, margin = contains(spec, w)
    if not ok:
        raise ValidationError(f"image point is not interior (margin {margin:.3g}); not a self-map")
    J = np.asarray(phi.jacobian(z), dtype=complex)
    G = J.conj().T @ metric_matrix(spec, w) @ J
    return math.sqrt(max(max_generalized_eigenvalue(G, metric_matrix(spec, z)), 0.0))


# ----------------------------------------------------------------------------
# Supremum estimation
# ----------------------------------------------------------------------------


def _candidate_points(spec, config: EstimateConfig) -> list:
    """Origin, extra seeds, then an equal share of samples per schedule level."""
    dim = dimension(spec)
    levels = [[np.zeros(dim, dtype=complex)]]
    for s in config.extra_seeds:
        p = np.asarray(s, dtype=complex).reshape(-1)
        if p.shape[0] == dim and contains(spec, p)[0]:
            levels[0].append(p)
    per = max(1, config.samples // len(config.schedule))
    for i, cap in enumerate(config.schedule):
        levels.append(list(sample_points(spec, per, cap, config.seed + 7919 * i)))
    return levels


def _safe(func, z, warn_list):
    try:
        v = float(func(z))
    except (SingularityError, ValidationError) as exc:
        warn_list.append(f"skipped sample: {exc}")
        return None
    return v if math.isfinite(v) else None


def _compass_ascent(func, spec, x, fx, config: EstimateConfig, warn_list):
    """Maximize over real and imaginary coordinates; returns ``(x, fx, converged)``.

    Steps stay inside ``cap * D`` for the largest schedule cap; beyond it the
    metric is dominated by roundoff and the ascent would chase noise.
    """
    cap = config.schedule[-1]
    dim = x.shape[0]
    dirs = [np.eye(dim, dtype=complex)[k] * c for k in range(dim) for c in (1.0, -1.0, 1j, -1j)]
    step, evals = config.step, 0
    while step >= config.min_step:
        improved = False
        for d in dirs:
            y = x + step * d
            if not contains(spec, y / cap)[0]:
                continue
            evals += 1
            fy = _safe(func, y, warn_list)
            if fy is not None and fy > fx:
                x, fx, improved = y, fy, True
                break
        if evals >= config.max_evals:
            return x, fx, False
        if not improved:
            step *= config.shrink
    return x, fx, True


def estimate_supremum(func: Callable, spec, config: Optional[EstimateConfig] = None) -> EstimateReport:
    """Certified lower bound for ``sup func`` over the interior of ``spec``."""
    config = config or EstimateConfig()
    warn_list: list = []
    levels = _candidate_points(spec, config)
    scored, level_maxima, used = [], [], 0
    for pts in levels:
        best = -math.inf
        for p in pts:
            v = _safe(func, p, warn_list)
            used += 1
            if v is not None:
                scored.append((v, p))
                best = max(best, v)
        level_maxima.append(best if math.isfinite(best) else None)
    if not scored:
        raise SingularityError("every sample point was singular")
    # stable order: value, then sample order, so the result is independent of evaluation order
    order = sorted(range(len(scored)), key=lambda i: (-scored[i][0], i))
    best_v, best_x, converged = -math.inf, None, False
    for i in order[: config.top]:
        v0, x0 = scored[i]
        x, v, conv = _compass_ascent(func, spec, x0.copy(), v0, config, warn_list)
        if v > best_v:
            best_v, best_x, converged = v, x, conv
    # the reported value is recomputed at the witness
    value = float(func(best_x))
    margin = contains(spec, best_x)[1]
    if margin < 1e-6:
        converged = False
        warn_list.append("witness is close to the boundary; the supremum may not be attained")
    if len(warn_list) > 20:
        warn_list = warn_list[:20] + [f"... {len(warn_list) - 20} more"]
    return EstimateReport(
        value=value,
        witness=best_x,
        samples_used=used,
        seed=config.seed,
        radius_schedule=config.schedule,
        converged_flag=converged,
        lower_bound_certified=True,
        level_maxima=level_maxima,
        warnings=warn_list,
    )


def bloch_seminorm(
    f: HoloMap, spec, config: Optional[EstimateConfig] = None, normalization: str = "metric"
) -> EstimateReport:
    """Estimate ``beta_f = sup Q_f``.

    ``normalization="zhu"`` (disk and ball only) uses the unscaled ball
    quantity of :func:`zhu_q_ball` instead of the metric one.
    """
    if normalization == "metric":
        return estimate_supremum(lambda z: q_norm(f, spec, z), spec, config)
    if normalization == "zhu":
        if not isinstance(spec, (Disk, Ball)):
            raise UnsupportedError("the unscaled normalization exists only on the disk and the ball")
        n = dimension(spec)
        return estimate_supremum(lambda z: zhu_q_ball(f, z, n), spec, config)
    raise ValidationError(f"unknown normalization {normalization!r}")


def bloch_norm(
    f: HoloMap, spec, config: Optional[EstimateConfig] = None, normalization: str = "metric"
) -> float:
    f0 = complex(np.asarray(f.evaluate(np.zeros(dimension(spec))), dtype=complex)[0])
    return abs(f0) + bloch_seminorm(f, spec, config, normalization).value


def bergman_constant(phi: HoloMap, spec, config: Optional[EstimateConfig] = None) -> EstimateReport:
    return estimate_supremum(lambda z: local_dilation(phi, spec, z), spec, config)


# ----------------------------------------------------------------------------
# Lipschitz ratios
# ----------------------------------------------------------------------------


def _check_distance_support(spec):
    for f in factors(spec):
        if not isinstance(f, (Disk, Ball, Polydisk)):
            raise UnsupportedError(f"no closed-form Bergman distance on {f}")


def lipschitz_ratios(f: HoloMap, spec, pair_count: int, seed: int, centers: Sequence = ()) -> np.ndarray:
    """``|f(z) - f(w)| / rho(z, w)`` on seeded pairs.

    Half the pairs are independent points; the rest are short chords
    (length 1e-3 to 1e-1, random direction) around random points and around
    the optional ``centers``.
    """
    _check_distance_support(spec)
    dim = dimension(spec)
    rng = np.random.default_rng(seed)
    n_far = pair_count // 2
    n_near = pair_count - n_far
    far_z = sample_points(spec, max(n_far, 1), 0.9, seed + 1)
    far_w = sample_points(spec, max(n_far, 1), 0.9, seed + 2)
    bases = list(sample_points(spec, max(n_near, 1), 0.9, seed + 3))
    centers = [np.asarray(c, dtype=complex).reshape(-1) for c in centers]
    pairs = list(zip(far_z[:n_far], far_w[:n_far]))
    for i in range(n_near):
        base = centers[i % len(centers)] if centers and i % 2 == 0 else bases[i]
        d = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        eps = 10.0 ** rng.uniform(-3, -1)
        for _ in range(60):
            w = base + eps * d / np.linalg.norm(d)
            if contains(spec, w)[0]:
                break
            eps *= 0.5
        pairs.append((base, w))
    out = np.empty(len(pairs))
    for k, (z, w) in enumerate(pairs):
        rho = bergman_distance(spec, z, w)
        if rho == 0.0:
            out[k] = 0.0
            continue
        fz = np.asarray(f.evaluate(z), dtype=complex)[0]
        fw = np.asarray(f.evaluate(w), dtype=complex)[0]
        out[k] = abs(fz - fw) / rho
    return out


def lipschitz_ratio(f: HoloMap, spec, pair_count: int = 10000, seed: int = 42, centers: Sequence = ()) -> float:
    return float(np.max(lipschitz_ratios(f, spec, pair_count, seed, centers)))


# ----------------------------------------------------------------------------
# Composition operator bounds and semicontinuity
# ----------------------------------------------------------------------------


@dataclass
class NormBounds:
    lower: float
    upper: float
    rho: float
    bergman: EstimateReport
    upper_certified: float

    def to_document(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "rho_phi0": self.rho,
            "bergman_constant": self.bergman.value,
            "upper_certified": self.upper_certified,
        }


def origin_distance(spec, w) -> float:
    """``rho(w, 0)``; the ball uses the unscaled formula, other supported domains the metric distance."""
    w = _as_point(spec, w)
    zero = np.zeros_like(w)
    if isinstance(spec, (Disk, Ball)):
        return zhu_distance_ball(zero, w, dimension(spec))
    return bergman_distance(spec, zero, w)


def composition_norm_bounds(phi: HoloMap, spec, config: Optional[EstimateConfig] = None) -> NormBounds:
    """``max{1, rho} <= |C_phi| <= max{1, rho + B_phi}`` (lower bound ``1`` off the disk and ball).

    ``upper`` uses the estimated Bergman constant; ``upper_certified`` replaces
    it by the square root of the rank, which bounds every Bergman constant.
    """
    _check_distance_support(spec)
    w0 = np.asarray(phi.evaluate(np.zeros(dimension(spec))), dtype=complex)
    rho = origin_distance(spec, w0)
    B = bergman_constant(phi, spec, config)
    lower = max(1.0, rho) if isinstance(spec, (Disk, Ball)) else 1.0
    upper = max(1.0, rho + B.value)
    return NormBounds(lower, upper, rho, B, max(1.0, rho + math.sqrt(rank(spec))))


@dataclass
class LscResult:
    beta_limit: float
    min_tail_beta: float
    tail_betas: list
    grid_gaps: list


def lsc_check(
    f_seq: Sequence[HoloMap],
    f_limit: HoloMap,
    spec,
    config: Optional[EstimateConfig] = None,
    grid_cap: float = 0.7,
    grid_count: int = 200,
    convergence_tol: float = 0.25,
) -> LscResult:
    """Estimate ``beta(f_limit)`` and ``min_n beta(f_n)`` over the supplied tail.

    The tail must approach ``f_limit`` on a fixed grid: grid distances may not
    increase and the last one must be below ``convergence_tol``.
    """
    config = config or EstimateConfig()
    if not f_seq:
        raise ValidationError("empty sequence")
    grid = sample_points(spec, grid_count, grid_cap, config.seed + 17)
    lim = np.array([np.asarray(f_limit.evaluate(z), dtype=complex)[0] for z in grid])
    gaps = []
    for f in f_seq:
        vals = np.array([np.asarray(f.evaluate(z), dtype=complex)[0] for z in grid])
        gaps.append(float(np.max(np.abs(vals - lim))))
    if any(b > a + 1e-12 for a, b in zip(gaps, gaps[1:])) or gaps[-1] > convergence_tol:
        raise ValidationError(f"sequence does not converge to the limit on the grid (gaps {gaps})")
    tail = [bloch_seminorm(f, spec, config).value for f in f_seq]
    beta = bloch_seminorm(f_limit, spec, config).value
    return LscResult(beta, min(tail), tail, gaps)
