"""Finite-scale checks of the isometry conditions for composition operators.

A numerical tool cannot prove that ``C_phi`` is an isometry: the relevant
conditions quantify over infinite zero sets and sequences of automorphisms.
Verdicts are therefore three-valued, and ``ConsistentWithIsometry`` only
records how close the measured quantities are to their targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .bloch import EstimateConfig, EstimateReport, bergman_constant, bloch_seminorm, q_norm
from .domains import (
    CartanIV,
    Disk,
    Polydisk,
    boundary_scale,
    dimension,
    factors,
    sample_points,
    split_point,
)
from .errors import ValidationError
from .maps import (
    BlaschkeProduct,
    Compose,
    HoloMap,
    MobiusDisk,
    ModifiedProjection,
    Projection,
    PRECISE_DPS,
    _abs,
    _conj,
    _inside_disk,
    one_minus_abs2,
    rotation_map,
    to_mp,
)
from .spectrum import Irrational

AUTOMORPHISM_EXACT = "AutomorphismExact"
CONSISTENT = "ConsistentWithIsometry"
FAILS = "FailsNecessaryCondition"

ORIGIN_TOL = 1e-10


def thin_zeros(count: int, include_origin: bool = True, dps: int = PRECISE_DPS) -> list:
    """``1 - exp(-2^k)`` for ``k = 1..count`` as ``mpc`` (optionally preceded by 0)."""
    with mpmath.workdps(dps):
        zs = [mpmath.mpc(1 - mpmath.exp(-mpmath.mpf(2) ** k)) for k in range(1, count + 1)]
    return ([mpmath.mpc(0)] if include_origin else []) + zs


def _pseudo(z, w):
    return _abs(z - w) / _abs(1 - _conj(w) * z)


def thinness_products(zeros: Sequence, dps: int = PRECISE_DPS) -> list:
    """``d_k = prod_{j != k} |(z_k - z_j) / (1 - conj(z_j) z_k)|``."""
    zeros = list(zeros)
    with mpmath.workdps(dps):
        for i in range(len(zeros)):
            if not _inside_disk(zeros[i]):
                raise ValidationError("zeros must lie in the open unit disk")
            for j in range(i):
                if zeros[i] == zeros[j]:
                    raise ValidationError(f"duplicate zero {zeros[i]}")
        out = []
        for k, zk in enumerate(zeros):
            d = 1
            for j, zj in enumerate(zeros):
                if j != k:
                    d = d * _pseudo(zk, zj)
            out.append(float(d))
    return out


def condition_e_profile(B: BlaschkeProduct, dps: int = PRECISE_DPS) -> list:
    """``(1 - |z_k|^2) |B'(z_k)|`` at each zero, from the analytic derivative."""
    with mpmath.workdps(dps):
        out = []
        for a in B.zeros:
            a = mpmath.mpc(a)
            z = np.array([a], dtype=object)
            out.append(float(one_minus_abs2(a) * _abs(B.jacobian(z)[0, 0])))
    return out


# ----------------------------------------------------------------------------
# Automorphism sequences and convergence to the identity
# ----------------------------------------------------------------------------


def propose_unit_disk_automorphism_sequence(B: BlaschkeProduct, dps: int = PRECISE_DPS) -> list:
    """``S_k = psi_{z_k} o (rotation)`` with ``S_k(0) = z_k`` and ``(B o S_k)'(0) > 0``."""
    if not isinstance(B, BlaschkeProduct) or not B.zeros:
        raise ValidationError("need a Blaschke product with zeros")
    out = []
    with mpmath.workdps(dps):
        for a in B.zeros:
            a = mpmath.mpc(a)
            # (B o psi_a o R_theta)'(0) = B'(a) * (-(1 - |a|^2)) * e^{i theta}
            d = -B.jacobian(np.array([a], dtype=object))[0, 0] * one_minus_abs2(a)
            theta = -float(mpmath.arg(d)) if d != 0 else 0.0
            turns = (theta / (2 * math.pi)) % 1.0
            out.append(Compose(MobiusDisk(a), rotation_map(Irrational(turns, "aligning rotation"))))
    return out


def compact_grid(spec, count: int, cap: float, seed: int) -> np.ndarray:
    """Seeded points on the boundary of the domain scaled by ``cap``.

    The residual ``phi(S(z)) - z`` is holomorphic, so its maximum over the
    scaled domain is attained there; disk coordinates are pushed to modulus
    ``cap`` one by one, other factors radially.
    """
    pts = sample_points(spec, count, cap, seed)
    out = np.empty_like(pts)
    for i, z in enumerate(pts):
        parts = []
        for f, zf in zip(factors(spec), split_point(spec, z)):
            if isinstance(f, (Disk, Polydisk)):
                r = np.abs(zf)
                parts.append(np.where(r > 0, cap * zf / np.where(r > 0, r, 1.0), cap))
            else:
                parts.append(cap * boundary_scale(f, zf) * zf)
        out[i] = np.concatenate(parts)
    return out


def identity_convergence_check(
    phi: HoloMap,
    autos: Sequence[HoloMap],
    spec,
    grid_cap: float = 0.7,
    grid_count: int = 200,
    seed: int = 42,
    dps: Optional[int] = None,
) -> list:
    """``max_grid |phi(S_k(z)) - z|`` for each automorphism ``S_k``, on :func:`compact_grid`.

    With ``dps`` set the evaluation runs in mpmath at that precision, which
    is needed when ``S_k(0)`` is closer to the boundary than double precision
    resolves.
    """
    for S in autos:
        if not S.is_automorphism:
            raise ValidationError(f"not an automorphism: {S.kind}")
    grid = compact_grid(spec, grid_count, grid_cap, seed)
    residuals = []
    for S in autos:
        worst = 0.0
        if dps is None:
            for z in grid:
                worst = max(worst, float(np.linalg.norm(np.asarray(phi.evaluate(S.evaluate(z)), dtype=complex) - z)))
        else:
            with mpmath.workdps(dps):
                for z in grid:
                    zm = to_mp(z)
                    diff = phi.evaluate(S.evaluate(zm)) - zm
                    worst = max(worst, float(mpmath.sqrt(sum(_abs(x) ** 2 for x in diff))))
        residuals.append(worst)
    return residuals


# ----------------------------------------------------------------------------
# Disk symbols
# ----------------------------------------------------------------------------


@dataclass
class IsometryReport:
    fixes_origin: bool
    phi0: complex
    beta_hat: Optional[EstimateReport]
    bergman_hat: Optional[EstimateReport]
    verdict: str
    reason: str = ""
    condition_e_value: Optional[float] = None
    condition_e_profile: list = field(default_factory=list)
    thinness_profile: list = field(default_factory=list)
    condition_g_residuals: list = field(default_factory=list)
    truncation_level: Optional[int] = None
    warnings: list = field(default_factory=list)

    def to_document(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "fixes_origin": self.fixes_origin,
            "phi0": [self.phi0.real, self.phi0.imag],
            "beta_hat": None if self.beta_hat is None else self.beta_hat.value,
            "bergman_hat": None if self.bergman_hat is None else self.bergman_hat.value,
            "condition_e_value": self.condition_e_value,
            "condition_e_profile": self.condition_e_profile,
            "thinness_profile": self.thinness_profile,
            "condition_g_residuals": self.condition_g_residuals,
            "truncation_level": self.truncation_level,
        }


def _float_seeds(zeros):
    out = []
    for a in zeros:
        c = complex(a)
        if abs(c) < 1.0:
            out.append((c,))
    return tuple(out)


def check_disk_isometry(
    phi: HoloMap,
    config: Optional[EstimateConfig] = None,
    tol: float = 1e-6,
    beta_tol: float = 1e-3,
    selfmap_samples: int = 500,
) -> IsometryReport:
    """Evaluate the disk isometry conditions that are finitely checkable.

    Verdict rules, in order: ``phi(0) != 0`` fails; an estimate above 1 + tol
    fails (impossible for a self-map, so it signals bad input); automorphism
    kinds are exact; an estimated semi-norm below ``1 - beta_tol`` fails
    (reported as estimated); anything else is consistent with an isometry.
    """
    config = config or EstimateConfig()
    if phi.n_in != 1 or phi.n_out != 1:
        raise ValidationError("expected a map of the unit disk")
    spec = Disk()
    for z in sample_points(spec, selfmap_samples, 0.999, config.seed + 5):
        if abs(complex(phi.evaluate(z)[0])) >= 1.0:
            raise ValidationError(f"not a self-map of the disk: |phi(z)| >= 1 at z = {complex(z[0])}")
    phi0 = complex(phi.evaluate(np.zeros(1))[0])
    fixes = abs(phi0) <= ORIGIN_TOL

    blaschke = isinstance(phi, BlaschkeProduct)
    if blaschke:
        config = EstimateConfig(**{**config.__dict__, "extra_seeds": config.extra_seeds + _float_seeds(phi.zeros)})
    beta = bloch_seminorm(phi, spec, config)
    berg = bergman_constant(phi, spec, config)
    report = IsometryReport(fixes, phi0, beta, berg, CONSISTENT)
    report.warnings = beta.warnings + berg.warnings

    if blaschke:
        report.truncation_level = len(phi.zeros)
        report.condition_e_profile = condition_e_profile(phi)
        report.condition_e_value = max(report.condition_e_profile)
        try:
            report.thinness_profile = thinness_products(phi.zeros)
        except ValidationError as exc:
            report.warnings.append(str(exc))
        if fixes:
            autos = propose_unit_disk_automorphism_sequence(phi)
            report.condition_g_residuals = identity_convergence_check(
                phi, autos, spec, grid_cap=0.5, grid_count=50, seed=config.seed, dps=PRECISE_DPS
            )

    if not fixes:
        report.verdict, report.reason = FAILS, f"fixes_origin: |phi(0)| = {abs(phi0):.3g}"
    elif beta.value > 1.0 + tol or berg.value > 1.0 + tol:
        report.verdict, report.reason = FAILS, "beta: estimate exceeds 1; input is not a self-map"
    elif phi.is_automorphism:
        report.verdict, report.reason = AUTOMORPHISM_EXACT, "automorphism fixing the origin"
    elif beta.value < 1.0 - beta_tol:
        report.verdict = FAILS
        report.reason = f"beta (estimated): beta_hat = {beta.value:.9g} < 1 - {beta_tol:g}"
    else:
        report.reason = f"beta_hat = {beta.value:.9g}, B_hat = {berg.value:.9g}"
    return report


# ----------------------------------------------------------------------------
# Necessary conditions on product domains
# ----------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    status: str  # pass | fail | fail_estimated
    value: float
    target: float
    detail: str = ""

    @property
    def gap(self) -> float:
        return self.value - self.target

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "value": self.value,
            "target": self.target,
            "gap": self.gap,
            "detail": self.detail,
        }


@dataclass
class NecessaryConditionsReport:
    checks: list
    verdict: str
    reason: str = ""

    def failed(self) -> list:
        return [c for c in self.checks if c.status != "pass"]

    def to_document(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "checks": [c.to_document() for c in self.checks]}


def _seminorm_check(name, f, spec, target, config, tol, detail):
    v = bloch_seminorm(f, spec, config).value
    if v > target + tol:
        status = "fail"
    elif v < target - tol:
        status = "fail_estimated"
    else:
        status = "pass"
    return Check(name, status, v, target, detail)


def coordinate_seminorm(fac, p: HoloMap) -> float:
    """Semi-norm of a (modified) coordinate function of one factor, taken as ``Q_p(0)``.

    This is the Bloch constant of the factor, except for the off-diagonal
    coordinates of a symmetric-matrix domain: each such variable fills two
    matrix entries, so its semi-norm is the constant divided by sqrt(2).  An
    isometry must preserve the semi-norm of every coordinate function.
    """
    return q_norm(p, fac, np.zeros(dimension(fac)))


def component_gram_singular_value(phi: HoloMap, spec, seed: int = 42) -> float:
    """Smallest singular value of the component values on ``2 dim`` sample points."""
    pts = sample_points(spec, 2 * dimension(spec), 0.9, seed)
    V = np.array([np.asarray(phi.evaluate(z), dtype=complex) for z in pts])
    return float(np.linalg.svd(V, compute_uv=False)[-1])


def check_necessary_conditions(
    phi: HoloMap, spec, config: Optional[EstimateConfig] = None, tol: float = 1e-6
) -> NecessaryConditionsReport:
    """Necessary conditions for ``C_phi`` to be an isometry on a product domain.

    Components are grouped by the factor of ``spec`` that contains them; an
    R_IV factor is tested through ``phi_r +- i phi_s`` for every pair.
    """
    config = config or EstimateConfig()
    n = dimension(spec)
    if phi.n_in != n or phi.n_out != n:
        raise ValidationError(f"expected a self-map of {spec}")
    checks = []

    phi0 = np.asarray(phi.evaluate(np.zeros(n)), dtype=complex)
    err = float(np.max(np.abs(phi0)))
    checks.append(Check("fixes_origin", "pass" if err <= ORIGIN_TOL else "fail", err, 0.0))

    smin = component_gram_singular_value(phi, spec, config.seed)
    checks.append(
        Check("linear_independence", "pass" if smin > 1e-8 else "fail", smin, 1e-8, "smallest singular value")
    )

    offset = 0
    for fac in factors(spec):
        d = dimension(fac)
        idx = range(offset + 1, offset + d + 1)
        if isinstance(fac, CartanIV):
            for r in idx:
                for s in idx:
                    if r >= s:
                        continue
                    for sign in ("+", "-"):
                        c = coordinate_seminorm(fac, ModifiedProjection(r - offset, s - offset, sign, d))
                        f = Compose(ModifiedProjection(r, s, sign, n), phi)
                        checks.append(
                            _seminorm_check(
                                "modified_component_seminorm", f, spec, c, config, tol, f"phi_{r} {sign} i phi_{s}"
                            )
                        )
        else:
            for j in idx:
                c = coordinate_seminorm(fac, Projection(j - offset, d))
                f = Compose(Projection(j, n), phi)
                checks.append(_seminorm_check("component_seminorm", f, spec, c, config, tol, f"phi_{j}"))
        offset += d

    bad = [ch for ch in checks if ch.status != "pass"]
    if bad:
        first = bad[0]
        return NecessaryConditionsReport(checks, FAILS, f"{first.name} ({first.detail or first.status})")
    verdict = AUTOMORPHISM_EXACT if phi.is_automorphism else CONSISTENT
    return NecessaryConditionsReport(checks, verdict, "all checks pass")
