"""Bounded symmetric domains in standard form.

A point of a domain is a flat complex vector.  For the matrix domains the free
entries are arranged row by row: all ``m*n`` entries for type I, the entries on
and above the diagonal for type II, the entries strictly above the diagonal
for type III.

Metric matrices use the convention of :mod:`blochlab.linalg`:
``H_z(u, conj(v)) = v^* A u``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import UnsupportedError, ValidationError


@dataclass(frozen=True)
class Disk:
    def __str__(self):
        return "disk"


@dataclass(frozen=True)
class Ball:
    n: int

    def __post_init__(self):
        _check_int(self.n, 1, "Ball(n)")

    def __str__(self):
        return f"ball:{self.n}"


@dataclass(frozen=True)
class Polydisk:
    n: int

    def __post_init__(self):
        _check_int(self.n, 1, "Polydisk(n)")

    def __str__(self):
        return f"polydisk:{self.n}"


@dataclass(frozen=True)
class CartanI:
    m: int
    n: int

    def __post_init__(self):
        _check_int(self.n, 1, "CartanI n")
        _check_int(self.m, self.n, "CartanI m (m >= n)")

    def __str__(self):
        return f"cartan1:{self.m}x{self.n}"


@dataclass(frozen=True)
class CartanII:
    n: int

    def __post_init__(self):
        _check_int(self.n, 2, "CartanII(n)")

    def __str__(self):
        return f"cartan2:{self.n}"


@dataclass(frozen=True)
class CartanIII:
    n: int

    def __post_init__(self):
        _check_int(self.n, 5, "CartanIII(n)")

    def __str__(self):
        return f"cartan3:{self.n}"


@dataclass(frozen=True)
class CartanIV:
    n: int

    def __post_init__(self):
        _check_int(self.n, 5, "CartanIV(n)")

    def __str__(self):
        return f"cartan4:{self.n}"


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            if isinstance(f, Product):
                flat.extend(f.factors)
            elif isinstance(f, _IRREDUCIBLE):
                flat.append(f)
            else:
                raise ValidationError(f"not a domain spec: {f!r}")
        if not flat:
            raise ValidationError("Product needs at least one factor")
        object.__setattr__(self, "factors", tuple(flat))

    def __str__(self):
        return "product(" + ",".join(str(f) for f in self.factors) + ")"


_IRREDUCIBLE = (Disk, Ball, Polydisk, CartanI, CartanII, CartanIII, CartanIV)
DomainSpec = Union[Disk, Ball, Polydisk, CartanI, CartanII, CartanIII, CartanIV, Product]
MATRIX_TYPES = (CartanI, CartanII, CartanIII)


def _check_int(value, lower, what):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < lower:
        raise ValidationError(f"{what} must be an integer >= {lower}, got {value!r}")


def factors(spec) -> tuple:
    return spec.factors if isinstance(spec, Product) else (spec,)


# ----------------------------------------------------------------------------
# Text grammar
# ----------------------------------------------------------------------------

_SIMPLE = {
    "ball": Ball,
    "polydisk": Polydisk,
    "cartan2": CartanII,
    "cartan3": CartanIII,
    "cartan4": CartanIV,
}


def parse_domain(text: str):
    """Parse ``disk | ball:<n> | ... | product(<spec>,...)``."""
    s = text.replace(" ", "")
    spec, pos = _parse_spec(s, 0)
    if pos != len(s):
        raise ValidationError(f"unexpected text at position {pos} in domain spec {text!r}")
    return spec


def _parse_spec(s, pos):
    if s.startswith("product(", pos):
        pos += len("product(")
        items = []
        while True:
            item, pos = _parse_spec(s, pos)
            items.append(item)
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == ")":
                return Product(tuple(items)), pos + 1
            raise ValidationError(f"expected ',' or ')' at position {pos} in domain spec")
    m = re.compile(r"disk|cartan1:(\d+)x(\d+)|(ball|polydisk|cartan2|cartan3|cartan4):(\d+)").match(s, pos)
    if not m:
        raise ValidationError(f"cannot parse domain spec at position {pos}: {s[pos:]!r}")
    if m.group(0) == "disk":
        return Disk(), m.end()
    if m.group(1):
        return CartanI(int(m.group(1)), int(m.group(2))), m.end()
    return _SIMPLE[m.group(3)](int(m.group(4))), m.end()


# ----------------------------------------------------------------------------
# Scalar invariants
# ----------------------------------------------------------------------------


def dimension(spec) -> int:
    if isinstance(spec, Disk):
        return 1
    if isinstance(spec, (Ball, Polydisk, CartanIV)):
        return spec.n
    if isinstance(spec, CartanI):
        return spec.m * spec.n
    if isinstance(spec, CartanII):
        return spec.n * (spec.n + 1) // 2
    if isinstance(spec, CartanIII):
        return spec.n * (spec.n - 1) // 2
    return sum(dimension(f) for f in spec.factors)


def bloch_constant(spec) -> float:
    """Supremum of the Bloch semi-norms of holomorphic maps of the domain into the disk."""
    if isinstance(spec, (Disk, Polydisk)):
        return 1.0
    if isinstance(spec, Ball):
        return math.sqrt(2.0 / (spec.n + 1))
    if isinstance(spec, CartanI):
        return math.sqrt(2.0 / (spec.m + spec.n))
    if isinstance(spec, CartanII):
        return math.sqrt(2.0 / (spec.n + 1))
    if isinstance(spec, CartanIII):
        return math.sqrt(1.0 / (spec.n - 1))
    if isinstance(spec, CartanIV):
        return math.sqrt(2.0 / spec.n)
    return max(bloch_constant(f) for f in spec.factors)


# Values for the Cartan types come from the standard classification table.
def rank(spec) -> int:
    if isinstance(spec, (Disk, Ball)):
        return 1
    if isinstance(spec, (Polydisk, CartanI, CartanII)):
        return spec.n
    if isinstance(spec, CartanIII):
        return spec.n // 2
    if isinstance(spec, CartanIV):
        return 2
    return sum(rank(f) for f in spec.factors)


def _metric_scale(spec) -> float:
    if isinstance(spec, CartanI):
        return (spec.m + spec.n) / 2.0
    if isinstance(spec, CartanII):
        return (spec.n + 1) / 2.0
    if isinstance(spec, CartanIII):
        return (spec.n - 1) / 2.0
    raise TypeError(spec)


# ----------------------------------------------------------------------------
# Coordinates of the matrix domains
# ----------------------------------------------------------------------------


def _matrix_shape(spec) -> tuple[int, int]:
    if isinstance(spec, CartanI):
        return spec.m, spec.n
    return spec.n, spec.n


@lru_cache(maxsize=None)
def _free_entries(spec) -> tuple:
    if isinstance(spec, CartanI):
        return tuple((a, b) for a in range(spec.m) for b in range(spec.n))
    if isinstance(spec, CartanII):
        return tuple((a, b) for a in range(spec.n) for b in range(a, spec.n))
    return tuple((a, b) for a in range(spec.n) for b in range(a + 1, spec.n))


@lru_cache(maxsize=None)
def _basis_operator(spec) -> np.ndarray:
    """Real matrix ``C`` with ``vec(Z) = C @ coords`` (row-major ``vec``)."""
    p, q = _matrix_shape(spec)
    entries = _free_entries(spec)
    C = np.zeros((p * q, len(entries)))
    for j, (a, b) in enumerate(entries):
        C[a * q + b, j] += 1.0
        if isinstance(spec, CartanII) and a != b:
            C[b * q + a, j] += 1.0
        elif isinstance(spec, CartanIII):
            C[b * q + a, j] -= 1.0
    C.setflags(write=False)
    return C


def to_matrix(spec, z) -> np.ndarray:
    """Matrix form of a point of a type I, II or III domain."""
    p, q = _matrix_shape(spec)
    return (_basis_operator(spec) @ np.asarray(z, dtype=complex)).reshape(p, q)


def from_matrix(spec, Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    return np.array([Z[a, b] for a, b in _free_entries(spec)], dtype=complex)


def split_point(spec, z) -> list:
    """Split a point of a product into factor points."""
    out, k = [], 0
    for f in factors(spec):
        d = dimension(f)
        out.append(z[k : k + d])
        k += d
    return out


def _as_point(spec, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != dimension(spec):
        raise ValidationError(f"point has {z.shape[0]} coordinates, domain {spec} has dimension {dimension(spec)}")
    return z


# ----------------------------------------------------------------------------
# Membership
# ----------------------------------------------------------------------------


def _one_minus_abs2(z):
    # (1 - |z|)(1 + |z|) keeps full relative accuracy for real z near the circle
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def _margin(spec, z) -> float:
    if isinstance(spec, Disk):
        return float(_one_minus_abs2(z[0]))
    if isinstance(spec, Ball):
        return 1.0 - float(np.real(np.vdot(z, z)))
    if isinstance(spec, Polydisk):
        return float(np.min(_one_minus_abs2(z)))
    if isinstance(spec, MATRIX_TYPES):
        Z = to_matrix(spec, z)
        S = np.eye(Z.shape[0]) - Z @ Z.conj().T
        return float(np.linalg.eigvalsh(0.5 * (S + S.conj().T))[0])
    if isinstance(spec, CartanIV):
        s = np.sum(z * z)
        A = abs(s) ** 2 + 1.0 - 2.0 * float(np.real(np.vdot(z, z)))
        return min(A, 1.0 - abs(s))
    return min(_margin(f, zf) for f, zf in zip(spec.factors, split_point(spec, z)))


def contains(spec, z) -> tuple[bool, float]:
    """Return ``(interior?, margin)``; margin is the smallest defining-inequality slack."""
    z = _as_point(spec, z)
    if not np.all(np.isfinite(z)):
        return False, -math.inf
    m = _margin(spec, z)
    return bool(m > 0.0), float(m)


def require_interior(spec, z, what="point"):
    ok, margin = contains(spec, z)
    if not ok:
        raise ValidationError(f"{what} is not interior to {spec} (margin {margin:.3g})")


# ----------------------------------------------------------------------------
# Bergman metric
# ----------------------------------------------------------------------------


def _lie_ball_metric(n, z) -> np.ndarray:
    # (n/2) times the Levi form of -log A, A = |sum z_j^2|^2 + 1 - 2|z|^2.
    s = np.sum(z * z)
    A = abs(s) ** 2 + 1.0 - 2.0 * float(np.real(np.vdot(z, z)))
    dA = 2.0 * z * np.conj(s) - 2.0 * np.conj(z)  # dA/dz_i
    # Levi form entry [i, j] = d_j dbar_i (-log A)
    L = (2.0 * np.eye(n) - 4.0 * np.outer(np.conj(z), z)) / A + np.outer(np.conj(dA), dA) / A**2
    return 0.5 * n * L


def _metric_block(spec, z) -> np.ndarray:
    if isinstance(spec, Disk):
        return np.array([[1.0 / _one_minus_abs2(z[0]) ** 2]], dtype=complex)
    if isinstance(spec, Polydisk):
        return np.diag(1.0 / _one_minus_abs2(z) ** 2).astype(complex)
    if isinstance(spec, Ball):
        t = 1.0 - float(np.real(np.vdot(z, z)))
        return (spec.n + 1) / 2.0 * (t * np.eye(spec.n) + np.outer(z, np.conj(z))) / t**2
    if isinstance(spec, MATRIX_TYPES):
        Z = to_matrix(spec, z)
        p, q = Z.shape
        P = np.linalg.inv(np.eye(p) - Z @ Z.conj().T)
        Q = np.linalg.inv(np.eye(q) - Z.conj().T @ Z)
        # Full-matrix form: H(U, conj V) = c Tr[P U Q V^*] = vec(V)^* (P kron Q^T) vec(U)
        C = _basis_operator(spec)
        A = _metric_scale(spec) * (C.T @ np.kron(P, Q.T) @ C)
        return 0.5 * (A + A.conj().T)
    if isinstance(spec, CartanIV):
        return _lie_ball_metric(spec.n, z)
    raise TypeError(spec)


def metric_matrix(spec, z) -> np.ndarray:
    """Hermitian matrix ``A`` of the Bergman metric at ``z``: ``H_z(u, conj v) = v^* A u``.

    Products get the block-diagonal direct sum of the factor metrics.
    """
    z = _as_point(spec, z)
    require_interior(spec, z)
    if not isinstance(spec, Product):
        return _metric_block(spec, z)
    d = dimension(spec)
    A = np.zeros((d, d), dtype=complex)
    k = 0
    for f, zf in zip(spec.factors, split_point(spec, z)):
        m = dimension(f)
        A[k : k + m, k : k + m] = _metric_block(f, zf)
        k += m
    return A


def metric_form(spec, z, u, v=None) -> complex:
    """Evaluate ``H_z(u, conj v)`` (``v`` defaults to ``u``)."""
    A = metric_matrix(spec, z)
    u = np.asarray(u, dtype=complex)
    v = u if v is None else np.asarray(v, dtype=complex)
    return complex(np.vdot(v, A @ u))


# ----------------------------------------------------------------------------
# Inner radius (boundary scaling by bisection)
# ----------------------------------------------------------------------------


def boundary_scale(spec, u, iterations: int = 200) -> float:
    """Largest ``t`` such that ``t*u`` is in the closure of the domain."""
    u = _as_point(spec, u)
    lo, hi = 0.0, 1.0
    while contains(spec, hi * u)[0]:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise ValidationError("direction does not leave the domain")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if contains(spec, mid * u)[0]:
            lo = mid
        else:
            hi = mid
    return lo


def _extremal_directions(spec) -> list:
    d = dimension(spec)
    dirs = [np.eye(d, dtype=complex)[j] for j in range(d)]
    if isinstance(spec, CartanIV):
        for r in range(d):
            for s in range(r + 1, d):
                for sign in (1, -1):
                    e = np.zeros(d, dtype=complex)
                    e[r], e[s] = 0.5, sign * 0.5j
                    dirs.append(e)
    return dirs


def inner_radius(spec) -> float:
    """Minimum of ``H_0(u,u)^{1/2}`` over boundary points along the extremal directions."""
    if isinstance(spec, Product):
        return min(inner_radius(f) for f in spec.factors)
    A0 = metric_matrix(spec, np.zeros(dimension(spec), dtype=complex))
    best = math.inf
    for e in _extremal_directions(spec):
        u = boundary_scale(spec, e) * e
        best = min(best, math.sqrt(float(np.real(np.vdot(u, A0 @ u)))))
    return best


# ----------------------------------------------------------------------------
# Distances (disk, ball, polydisk and their products only)
# ----------------------------------------------------------------------------


def _artanh_from_complement(one_minus_t2: float, t: float) -> float:
    # near the boundary 1-t is taken from the separately computed 1-t^2
    if t < 0.5:
        return math.atanh(t)
    return 0.5 * math.log((1.0 + t) ** 2 / one_minus_t2)


def _ball_pseudo(z, w) -> tuple[float, float]:
    """Return ``(t, 1 - t^2)`` with ``t = |phi_z(w)|`` in the unit ball."""
    zz = float(np.real(np.vdot(z, z)))
    ww = float(np.real(np.vdot(w, w)))
    denom = abs(1.0 - np.vdot(z, w)) ** 2
    comp = (1.0 - zz) * (1.0 - ww) / denom
    t2 = min(max(1.0 - comp, 0.0), 1.0)
    # direct evaluation of |z-w|-type quantity avoids the cancellation in 1-comp for close points
    diff = np.asarray(w) - np.asarray(z)
    t2_direct = (
        float(np.real(np.vdot(diff, diff))) * (1.0 - zz)
        + abs(np.vdot(z, diff)) ** 2
    ) / denom
    if t2_direct < 0.5:
        t2 = t2_direct
    return math.sqrt(t2), comp


def zhu_distance_ball(z, w, n: int) -> float:
    """``0.5 log((1+|phi_z(w)|)/(1-|phi_z(w)|))`` on the unit ball (unscaled normalization)."""
    spec = Ball(n)
    z, w = _as_point(spec, z), _as_point(spec, w)
    require_interior(spec, z)
    require_interior(spec, w)
    t, comp = _ball_pseudo(z, w)
    return _artanh_from_complement(comp, t)


def _factor_distance(spec, z, w) -> float:
    if isinstance(spec, Disk):
        return zhu_distance_ball(z, w, 1)
    if isinstance(spec, Ball):
        return math.sqrt((spec.n + 1) / 2.0) * zhu_distance_ball(z, w, spec.n)
    if isinstance(spec, Polydisk):
        return math.sqrt(sum(zhu_distance_ball(z[k : k + 1], w[k : k + 1], 1) ** 2 for k in range(spec.n)))
    raise UnsupportedError(f"no closed-form Bergman distance on {spec}")


def bergman_distance(spec, z, w) -> float:
    """Distance of the metric returned by :func:`metric_matrix`.

    Products combine factor distances in the l2 sense (geodesics of a
    Riemannian product).
    """
    z, w = _as_point(spec, z), _as_point(spec, w)
    for f in factors(spec):
        if not isinstance(f, (Disk, Ball, Polydisk)):
            raise UnsupportedError(f"no closed-form Bergman distance on {f}")
    parts = [_factor_distance(f, zf, wf) for f, zf, wf in zip(factors(spec), split_point(spec, z), split_point(spec, w))]
    return math.sqrt(sum(p * p for p in parts))


# ----------------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------------

REJECTION_CAP = 1000


def _gauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _sample_ball_radius(rng, dim_real, cap):
    # radius of a uniform point in a ball of real dimension dim_real
    return cap * rng.random() ** (1.0 / dim_real)


def _sample_factor(spec, rng, cap) -> np.ndarray:
    if isinstance(spec, Disk):
        r = cap * math.sqrt(rng.random())
        return np.array([r * np.exp(2j * math.pi * rng.random())])
    if isinstance(spec, Polydisk):
        r = cap * np.sqrt(rng.random(spec.n))
        return r * np.exp(2j * math.pi * rng.random(spec.n))
    if isinstance(spec, Ball):
        g = _gauss(rng, spec.n)
        return g / np.linalg.norm(g) * _sample_ball_radius(rng, 2 * spec.n, cap)
    if isinstance(spec, MATRIX_TYPES):
        p, q = _matrix_shape(spec)
        G = _gauss(rng, (p, q))
        if isinstance(spec, CartanII):
            G = G + G.T
        elif isinstance(spec, CartanIII):
            G = G - G.T
        G = G / np.linalg.norm(G, 2) * _sample_ball_radius(rng, 2 * dimension(spec), cap)
        return from_matrix(spec, G)
    if isinstance(spec, CartanIV):
        # the Lie ball is convex, balanced and contained in the unit ball
        for _ in range(REJECTION_CAP):
            g = _gauss(rng, spec.n)
            w = g / np.linalg.norm(g) * _sample_ball_radius(rng, 2 * spec.n, 1.0)
            if _margin(spec, w) > 0.0:
                return cap * w
        raise ValidationError(f"rejection sampler exceeded {REJECTION_CAP} tries on {spec}")
    raise TypeError(spec)


def sample_points(spec, count: int, radius_cap: float, seed: int) -> np.ndarray:
    """Deterministic interior points, one per row.

    Each factor is sampled inside its own copy scaled by ``radius_cap``
    (spectral norm for matrix domains), so every point keeps a membership
    margin bounded away from zero.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if not 0.0 < radius_cap < 1.0:
        raise ValidationError("radius_cap must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    out = np.empty((count, dimension(spec)), dtype=complex)
    for i in range(count):
        out[i] = np.concatenate([_sample_factor(f, rng, radius_cap) for f in factors(spec)])
    return out
