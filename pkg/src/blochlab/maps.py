"""Holomorphic maps with analytic Jacobians.

Every map carries its input and output dimensions (``n_in``, ``n_out``);
scalar functions are maps with ``n_out == 1``.  ``evaluate`` returns a vector
of length ``n_out`` and ``jacobian`` an ``n_out x n_in`` matrix.

The one-variable kinds (Moebius maps, Blaschke products) also accept object
arrays of :class:`mpmath.mpc`, so that zeros such as ``1 - exp(-64)``, which
round to 1 in double precision, can be handled at extended precision.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import mpmath
import numpy as np

from . import expr as ex
from .domains import Ball, Disk, Polydisk, factors, split_point
from .errors import SingularityError, UnsupportedError, ValidationError
from .spectrum import Irrational, Rational, parse_rotation, rotation_to_document

SINGULAR_TOL = 1e-14
UNITARY_TOL = 1e-12
PRECISE_DPS = 60


# ----------------------------------------------------------------------------
# Scalars in double or extended precision
# ----------------------------------------------------------------------------


def _is_mp(z) -> bool:
    return isinstance(z, np.ndarray) and z.dtype == object


def _vec(values, mp: bool) -> np.ndarray:
    return np.array(list(values), dtype=object if mp else complex)


def _scalar(x, mp: bool):
    if mp:
        return x if isinstance(x, mpmath.mpc) else mpmath.mpc(x)
    return complex(x)


def _abs(x):
    return mpmath.fabs(x) if isinstance(x, (mpmath.mpc, mpmath.mpf)) else abs(x)


def _conj(x):
    return mpmath.conj(x) if isinstance(x, (mpmath.mpc, mpmath.mpf)) else complex(x).conjugate()


def _inside_disk(a) -> bool:
    if isinstance(a, (mpmath.mpc, mpmath.mpf)):
        # compare at extended precision so that 1 - 1e-28 is not rounded to 1
        with mpmath.workdps(PRECISE_DPS):
            return bool(mpmath.fabs(a) < 1)
    return abs(a) < 1


def _near_zero(d, mp: bool) -> bool:
    # extended precision resolves denominators far below the double tolerance
    return d == 0 if mp else abs(d) < SINGULAR_TOL


def one_minus_abs2(a):
    """``1 - |a|^2`` computed as ``(1 - |a|)(1 + |a|)``."""
    r = _abs(a)
    return (1 - r) * (1 + r)


def to_mp(z) -> np.ndarray:
    """Object array of ``mpc`` at the current mpmath precision."""
    return np.array([mpmath.mpc(x) for x in np.ravel(z)], dtype=object)


def rotation_value(r, mp: bool = False):
    """``exp(2 pi i r)`` for a rotation number."""
    if mp:
        if isinstance(r, Rational):
            return mpmath.expjpi(mpmath.mpf(2 * r.p) / r.q)
        return mpmath.expjpi(2 * mpmath.mpf(r.approx))
    return r.value()


def _check_dims(z, n):
    if not _is_mp(z):
        z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != n:
        raise ValidationError(f"map expects {n} coordinates, got {z.shape[0]}")
    return z


# ----------------------------------------------------------------------------
# Documents: complex numbers
# ----------------------------------------------------------------------------


def parse_complex(obj):
    """``{"re": x, "im": y}`` (numbers or decimal strings), a bare number, or a string.

    Decimal strings are kept at extended precision as ``mpc``.
    """
    try:
        if isinstance(obj, dict):
            re_, im_ = obj.get("re", 0), obj.get("im", 0)
            if isinstance(re_, str) or isinstance(im_, str):
                with mpmath.workdps(PRECISE_DPS):
                    return mpmath.mpc(mpmath.mpf(re_), mpmath.mpf(im_))
            return complex(float(re_), float(im_))
        if isinstance(obj, str):
            with mpmath.workdps(PRECISE_DPS):
                return mpmath.mpc(mpmath.mpf(obj))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad complex number {obj!r}") from exc
    if isinstance(obj, (int, float, complex)):
        return complex(obj)
    raise ValidationError(f"bad complex number {obj!r}")


def complex_to_document(x):
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        x = mpmath.mpc(x)
        return {"re": mpmath.nstr(x.real, 40), "im": mpmath.nstr(x.imag, 40)}
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def _complex_list(objs):
    return [parse_complex(o) for o in objs]


def _complex_matrix(rows):
    return np.array([[complex(parse_complex(x)) for x in row] for row in rows], dtype=complex)


# ----------------------------------------------------------------------------
# Base class
# ----------------------------------------------------------------------------


class HoloMap:
    kind = "abstract"
    is_automorphism = False

    n_in: int
    n_out: int

    def evaluate(self, z) -> np.ndarray:
        z = _check_dims(z, self.n_in)
        return self._evaluate(z)

    def jacobian(self, z) -> np.ndarray:
        z = _check_dims(z, self.n_in)
        return self._jacobian(z)

    def __call__(self, z):
        return self.evaluate(z)

    def _evaluate(self, z):
        raise NotImplementedError

    def _jacobian(self, z):
        raise NotImplementedError

    def to_document(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_document()})"


# ----------------------------------------------------------------------------
# One-variable kinds
# ----------------------------------------------------------------------------


class MobiusDisk(HoloMap):
    """``z -> lam (a - z) / (1 - conj(a) z)`` with ``lam = exp(2 pi i rotation)``."""

    kind = "mobius_disk"
    is_automorphism = True
    n_in = n_out = 1

    def __init__(self, a=0.0, rotation=Rational(0)):
        if not _inside_disk(a):
            raise ValidationError("Moebius parameter must lie in the unit disk")
        self.a = a
        self.rotation = parse_rotation(rotation)

    def _params(self, mp):
        return _scalar(self.a, mp), rotation_value(self.rotation, mp)

    def _evaluate(self, z):
        mp = _is_mp(z)
        a, lam = self._params(mp)
        d = 1 - _conj(a) * z[0]
        if _near_zero(d, mp):
            raise SingularityError("Moebius map evaluated at its pole")
        return _vec([lam * (a - z[0]) / d], mp)

    def _jacobian(self, z):
        mp = _is_mp(z)
        a, lam = self._params(mp)
        d = 1 - _conj(a) * z[0]
        if _near_zero(d, mp):
            raise SingularityError("Moebius map evaluated at its pole")
        return _vec([-lam * one_minus_abs2(a) / d**2], mp).reshape(1, 1)

    def to_document(self):
        return {"kind": self.kind, "a": complex_to_document(self.a), "rotation": rotation_to_document(self.rotation)}


def rotation_map(r) -> MobiusDisk:
    """``z -> exp(2 pi i r) z`` written as a Moebius map (``-z`` is ``a = 0, rotation 0``)."""
    r = parse_rotation(r)
    if isinstance(r, Rational):
        return MobiusDisk(0.0, r * Rational(1, 2))
    return MobiusDisk(0.0, Irrational(r.approx + 0.5, r.label))


class BlaschkeProduct(HoloMap):
    """``lam * prod_k b_k`` with ``b_k = (conj(a_k)/|a_k|)(a_k - z)/(1 - conj(a_k) z)`` and ``b_k = z`` for ``a_k = 0``."""

    kind = "blaschke"
    n_in = n_out = 1

    def __init__(self, zeros: Sequence, rotation=Rational(0)):
        zeros = list(zeros)
        if not zeros:
            raise ValidationError("a Blaschke product needs at least one zero")
        for a in zeros:
            if not _inside_disk(a):
                raise ValidationError("Blaschke zeros must lie in the open unit disk")
        self.zeros = zeros
        self.rotation = parse_rotation(rotation)

    @property
    def is_automorphism(self):
        return len(self.zeros) == 1

    def _factors(self, z0, mp):
        vals, ders = [], []
        for a in self.zeros:
            a = _scalar(a, mp)
            if a == 0:
                vals.append(z0)
                ders.append(1)
                continue
            c = _conj(a) / _abs(a)
            d = 1 - _conj(a) * z0
            if z0 == a:
                # exactly at the zero; keeps (1-|a|^2)|b'(a)| = 1 to the last bit
                vals.append(0 * z0)
                ders.append(-c / one_minus_abs2(a))
                continue
            if _near_zero(d, mp):
                raise SingularityError("Blaschke factor evaluated at its pole")
            vals.append(c * (a - z0) / d)
            ders.append(-c * one_minus_abs2(a) / d**2)
        return vals, ders

    def _evaluate(self, z):
        mp = _is_mp(z)
        vals, _ = self._factors(z[0], mp)
        out = rotation_value(self.rotation, mp)
        for v in vals:
            out = out * v
        return _vec([out], mp)

    def _jacobian(self, z):
        mp = _is_mp(z)
        vals, ders = self._factors(z[0], mp)
        total = 0
        for k in range(len(vals)):
            term = ders[k]
            for j, v in enumerate(vals):
                if j != k:
                    term = term * v
            total = total + term
        return _vec([rotation_value(self.rotation, mp) * total], mp).reshape(1, 1)

    def to_document(self):
        return {
            "kind": self.kind,
            "zeros": [complex_to_document(a) for a in self.zeros],
            "rotation": rotation_to_document(self.rotation),
        }


# ----------------------------------------------------------------------------
# Automorphisms of the ball and the polydisk
# ----------------------------------------------------------------------------


def _check_unitary(U, n):
    U = np.asarray(U, dtype=complex)
    if U.shape != (n, n):
        raise ValidationError(f"expected a {n}x{n} unitary matrix")
    if np.max(np.abs(U.conj().T @ U - np.eye(n))) > UNITARY_TOL:
        raise ValidationError("matrix is not unitary")
    return U


class BallAutomorphism(HoloMap):
    """``U phi_a`` with ``phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>)``, ``s_a = sqrt(1 - |a|^2)``.

    ``phi_0`` is ``z -> -z``; every ``phi_a`` is an involution exchanging ``a`` and 0.
    """

    kind = "ball_automorphism"
    is_automorphism = True

    def __init__(self, U=None, a=None, n: int = None):
        if a is None and U is None and n is None:
            raise ValidationError("need U, a or n")
        n = n or (len(a) if a is not None else np.asarray(U).shape[0])
        self.a = np.zeros(n, dtype=complex) if a is None else np.asarray(a, dtype=complex).reshape(-1)
        self.U = np.eye(n, dtype=complex) if U is None else _check_unitary(U, n)
        aa = float(np.real(np.vdot(self.a, self.a)))
        if aa >= 1.0:
            raise ValidationError("ball automorphism parameter must lie in the unit ball")
        self.n_in = self.n_out = n
        self._aa = aa
        self._s = math.sqrt(1.0 - aa)

    def _parts(self, z):
        a, aa, s = self.a, self._aa, self._s
        za = np.vdot(a, z)  # <z, a>
        D = 1.0 - za
        if abs(D) < SINGULAR_TOL:
            raise SingularityError("ball automorphism evaluated at its pole")
        Pz = za / aa * a if aa > 0 else np.zeros_like(z)
        N = a - Pz - s * (z - Pz)
        return N, D

    def _evaluate(self, z):
        N, D = self._parts(z)
        return self.U @ (N / D)

    def _jacobian(self, z):
        a, aa, s = self.a, self._aa, self._s
        N, D = self._parts(z)
        JN = -s * np.eye(self.n_in, dtype=complex)
        if aa > 0:
            JN -= (1.0 - s) * np.outer(a, a.conj()) / aa
        J = JN / D + np.outer(N, a.conj()) / D**2
        return self.U @ J

    def to_document(self):
        return {
            "kind": self.kind,
            "U": [[complex_to_document(x) for x in row] for row in self.U],
            "a": [complex_to_document(x) for x in self.a],
        }


class PolydiskAutomorphism(HoloMap):
    """``z -> (T_1(z_tau(1)), ..., T_n(z_tau(n)))`` with Moebius maps ``T_k`` and 1-based ``tau``."""

    kind = "polydisk_automorphism"
    is_automorphism = True

    def __init__(self, maps: Sequence[MobiusDisk], tau=None):
        from .spectrum import validate_permutation

        self.maps = list(maps)
        n = len(self.maps)
        if n == 0:
            raise ValidationError("need at least one Moebius factor")
        for m in self.maps:
            if not isinstance(m, MobiusDisk):
                raise ValidationError("polydisk automorphism factors must be Moebius maps")
        self.tau = validate_permutation(tau) if tau is not None else tuple(range(1, n + 1))
        if len(self.tau) != n:
            raise ValidationError("tau and the factor list differ in length")
        self.n_in = self.n_out = n

    def _evaluate(self, z):
        mp = _is_mp(z)
        return _vec([m._evaluate(z[t - 1 : t])[0] for m, t in zip(self.maps, self.tau)], mp)

    def _jacobian(self, z):
        mp = _is_mp(z)
        J = np.zeros((self.n_out, self.n_in), dtype=object if mp else complex)
        for k, (m, t) in enumerate(zip(self.maps, self.tau)):
            J[k, t - 1] = m._jacobian(z[t - 1 : t])[0, 0]
        return J

    def to_document(self):
        return {"kind": self.kind, "maps": [m.to_document() for m in self.maps], "tau": list(self.tau)}


# ----------------------------------------------------------------------------
# Linear pieces
# ----------------------------------------------------------------------------


class Identity(HoloMap):
    kind = "identity"
    is_automorphism = True

    def __init__(self, n: int):
        self.n_in = self.n_out = int(n)

    def _evaluate(self, z):
        return z.copy()

    def _jacobian(self, z):
        return np.eye(self.n_in, dtype=object if _is_mp(z) else complex)

    def to_document(self):
        return {"kind": self.kind, "n": self.n_in}


class Projection(HoloMap):
    """``z -> z_j`` (1-based)."""

    kind = "projection"
    n_out = 1

    def __init__(self, j: int, n: int):
        if not 1 <= j <= n:
            raise ValidationError(f"projection index {j} out of range 1..{n}")
        self.j, self.n_in = int(j), int(n)

    def _evaluate(self, z):
        return z[self.j - 1 : self.j].copy()

    def _jacobian(self, z):
        J = np.zeros((1, self.n_in), dtype=complex)
        J[0, self.j - 1] = 1.0
        return J

    def to_document(self):
        return {"kind": self.kind, "j": self.j, "n": self.n_in}


class ModifiedProjection(HoloMap):
    """``z -> z_r + i z_s`` or ``z_r - i z_s`` (1-based, ``r != s``)."""

    kind = "modified_projection"
    n_out = 1

    def __init__(self, r: int, s: int, sign: str, n: int):
        if not (1 <= r <= n and 1 <= s <= n) or r == s:
            raise ValidationError("need distinct indices r, s in 1..n")
        if sign not in ("+", "-"):
            raise ValidationError("sign must be '+' or '-'")
        self.r, self.s, self.sign, self.n_in = int(r), int(s), sign, int(n)
        self._c = 1j if sign == "+" else -1j

    def _evaluate(self, z):
        return np.array([z[self.r - 1] + self._c * z[self.s - 1]])

    def _jacobian(self, z):
        J = np.zeros((1, self.n_in), dtype=complex)
        J[0, self.r - 1] = 1.0
        J[0, self.s - 1] = self._c
        return J

    def to_document(self):
        return {"kind": self.kind, "r": self.r, "s": self.s, "sign": self.sign, "n": self.n_in}


class DiagonalEmbedding(HoloMap):
    """``z -> (z_1, ..., z_1)`` on ``n`` coordinates."""

    kind = "diagonal"

    def __init__(self, n: int):
        self.n_in = self.n_out = int(n)

    def _evaluate(self, z):
        return np.full(self.n_out, z[0], dtype=complex)

    def _jacobian(self, z):
        J = np.zeros((self.n_out, self.n_in), dtype=complex)
        J[:, 0] = 1.0
        return J

    def to_document(self):
        return {"kind": self.kind, "n": self.n_in}


class Affine(HoloMap):
    """``z -> M z + b``."""

    kind = "affine"

    def __init__(self, M, b=None):
        self.M = np.atleast_2d(np.asarray(M, dtype=complex))
        self.n_out, self.n_in = self.M.shape
        self.b = np.zeros(self.n_out, dtype=complex) if b is None else np.asarray(b, dtype=complex).reshape(-1)
        if self.b.shape[0] != self.n_out:
            raise ValidationError("offset length does not match the matrix")

    @property
    def is_automorphism(self):
        # unitary maps fix the origin and preserve the ball and the disk
        return (
            self.n_in == self.n_out
            and not np.any(self.b)
            and np.max(np.abs(self.M.conj().T @ self.M - np.eye(self.n_in))) <= UNITARY_TOL
        )

    def _evaluate(self, z):
        return self.M @ np.asarray(z, dtype=complex) + self.b

    def _jacobian(self, z):
        return self.M.copy()

    def to_document(self):
        return {
            "kind": self.kind,
            "M": [[complex_to_document(x) for x in row] for row in self.M],
            "b": [complex_to_document(x) for x in self.b],
        }


class Constant(HoloMap):
    kind = "constant"

    def __init__(self, value, n_in: int):
        self.value = np.atleast_1d(np.asarray(value, dtype=complex))
        self.n_in, self.n_out = int(n_in), self.value.shape[0]

    def _evaluate(self, z):
        return self.value.copy()

    def _jacobian(self, z):
        return np.zeros((self.n_out, self.n_in), dtype=complex)

    def to_document(self):
        return {"kind": self.kind, "value": [complex_to_document(x) for x in self.value], "n_in": self.n_in}


class ExtremalLogMap(HoloMap):
    """``f(z) = 0.5 log((|a| + <z, a>) / (|a| - <z, a>))`` with ``<z, a> = sum z_k conj(a_k)``."""

    kind = "extremal_log"
    n_out = 1

    def __init__(self, a):
        self.a = np.asarray(a, dtype=complex).reshape(-1)
        self.norm = float(np.linalg.norm(self.a))
        if self.norm == 0.0:
            raise ValidationError("extremal log map needs a nonzero parameter")
        self.n_in = self.a.shape[0]

    def _t(self, z):
        t = np.vdot(self.a, z)
        if min(abs(self.norm + t), abs(self.norm - t)) < SINGULAR_TOL * self.norm:
            raise SingularityError("extremal log map evaluated at a logarithmic singularity")
        return t

    def _evaluate(self, z):
        t = self._t(z)
        return np.array([0.5 * cmath.log((self.norm + t) / (self.norm - t))])

    def _jacobian(self, z):
        t = self._t(z)
        return (self.a.conj() * self.norm / (self.norm**2 - t**2)).reshape(1, -1)

    def to_document(self):
        return {"kind": self.kind, "a": [complex_to_document(x) for x in self.a]}


class ExprMap(HoloMap):
    """Components given as expressions in ``z1..zn``; Jacobian from symbolic gradients."""

    kind = "expr"

    def __init__(self, components, n: int):
        if isinstance(components, (str, ex.Const, ex.Var, ex.Neg, ex.BinOp, ex.Pow, ex.Func)):
            components = [components]
        self.n_in = int(n)
        self.asts = [ex.parse(c, self.n_in) if isinstance(c, str) else c for c in components]
        if not self.asts:
            raise ValidationError("expression map needs at least one component")
        self.n_out = len(self.asts)
        self.grads = [ex.gradient(a, self.n_in) for a in self.asts]

    def _evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return np.array([ex.evaluate(a, z) for a in self.asts])

    def _jacobian(self, z):
        z = np.asarray(z, dtype=complex)
        return np.array([[ex.evaluate(g, z) for g in row] for row in self.grads])

    def to_document(self):
        return {"kind": self.kind, "n": self.n_in, "components": [ex.to_text(a) for a in self.asts]}


# ----------------------------------------------------------------------------
# Combinators
# ----------------------------------------------------------------------------


class ProductMap(HoloMap):
    """Block product: the input is split among the maps and the outputs are concatenated."""

    kind = "product"

    def __init__(self, maps: Sequence[HoloMap]):
        self.maps = list(maps)
        if not self.maps:
            raise ValidationError("product of no maps")
        self.n_in = sum(m.n_in for m in self.maps)
        self.n_out = sum(m.n_out for m in self.maps)

    @property
    def is_automorphism(self):
        return all(m.is_automorphism for m in self.maps)

    def _pieces(self, z):
        k = 0
        for m in self.maps:
            yield m, z[k : k + m.n_in]
            k += m.n_in

    def _evaluate(self, z):
        mp = _is_mp(z)
        parts = [m.evaluate(zi) for m, zi in self._pieces(z)]
        return _vec([x for p in parts for x in p], mp)

    def _jacobian(self, z):
        mp = _is_mp(z)
        J = np.zeros((self.n_out, self.n_in), dtype=object if mp else complex)
        r = c = 0
        for m, zi in self._pieces(z):
            J[r : r + m.n_out, c : c + m.n_in] = m.jacobian(zi)
            r += m.n_out
            c += m.n_in
        return J

    def to_document(self):
        return {"kind": self.kind, "maps": [m.to_document() for m in self.maps]}


class Example51Map(ProductMap):
    """``(z, zeta) -> (U(z), phi(zeta))`` on ``D_1 x disk`` with ``U(0) = 0``."""

    kind = "example51"

    def __init__(self, U: HoloMap, phi: HoloMap):
        if phi.n_in != 1 or phi.n_out != 1:
            raise ValidationError("the second factor must be a disk map")
        if U.n_in != U.n_out:
            raise ValidationError("the first factor must be a self-map")
        if np.max(np.abs(np.asarray(U.evaluate(np.zeros(U.n_in)), dtype=complex))) > 1e-12:
            raise ValidationError("the first factor must fix the origin")
        super().__init__([U, phi])
        self.U, self.phi = U, phi

    def to_document(self):
        return {"kind": self.kind, "U": self.U.to_document(), "phi": self.phi.to_document()}


class Compose(HoloMap):
    """``outer o inner``."""

    kind = "compose"

    def __init__(self, outer: HoloMap, inner: HoloMap):
        if outer.n_in != inner.n_out:
            raise ValidationError(f"cannot compose: inner has {inner.n_out} outputs, outer takes {outer.n_in}")
        self.outer, self.inner = outer, inner
        self.n_in, self.n_out = inner.n_in, outer.n_out

    @property
    def is_automorphism(self):
        return self.outer.is_automorphism and self.inner.is_automorphism

    def _evaluate(self, z):
        return self.outer.evaluate(self.inner.evaluate(z))

    def _jacobian(self, z):
        w = self.inner.evaluate(z)
        return self.outer.jacobian(w) @ self.inner.jacobian(z)

    def to_document(self):
        return {"kind": self.kind, "outer": self.outer.to_document(), "inner": self.inner.to_document()}


def compose(f: HoloMap, g: HoloMap) -> HoloMap:
    return Compose(f, g)


def involution_at(spec, a) -> HoloMap:
    """Involutive automorphism exchanging ``a`` and the origin.

    Available for the disk, balls, polydisks and their products.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    pieces = []
    for f, af in zip(factors(spec), split_point(spec, a)):
        if isinstance(f, Disk):
            pieces.append(MobiusDisk(complex(af[0])))
        elif isinstance(f, Ball):
            pieces.append(BallAutomorphism(a=af))
        elif isinstance(f, Polydisk):
            pieces.append(PolydiskAutomorphism([MobiusDisk(complex(x)) for x in af]))
        else:
            raise UnsupportedError(f"no explicit involution on {f}")
    return pieces[0] if len(pieces) == 1 else ProductMap(pieces)


# ----------------------------------------------------------------------------
# Map documents
# ----------------------------------------------------------------------------


def _get(doc, key):
    try:
        return doc[key]
    except KeyError as exc:
        raise ValidationError(f"map document of kind {doc.get('kind')!r} needs {key!r}") from exc


def from_document(doc: dict) -> HoloMap:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("map document must be an object with a 'kind'")
    k = doc["kind"]
    if k == "mobius_disk":
        return MobiusDisk(parse_complex(doc.get("a", 0)), doc.get("rotation", "0/1"))
    if k == "blaschke":
        return BlaschkeProduct(_complex_list(_get(doc, "zeros")), doc.get("rotation", "0/1"))
    if k == "ball_automorphism":
        a = np.array([complex(x) for x in _complex_list(_get(doc, "a"))])
        U = _complex_matrix(doc["U"]) if "U" in doc else None
        return BallAutomorphism(U, a)
    if k == "polydisk_automorphism":
        return PolydiskAutomorphism([from_document(m) for m in _get(doc, "maps")], doc.get("tau"))
    if k == "identity":
        return Identity(_get(doc, "n"))
    if k == "projection":
        return Projection(_get(doc, "j"), _get(doc, "n"))
    if k == "modified_projection":
        return ModifiedProjection(_get(doc, "r"), _get(doc, "s"), doc.get("sign", "+"), _get(doc, "n"))
    if k == "diagonal":
        return DiagonalEmbedding(_get(doc, "n"))
    if k == "affine":
        b = doc.get("b")
        return Affine(_complex_matrix(_get(doc, "M")), None if b is None else [complex(x) for x in _complex_list(b)])
    if k == "constant":
        return Constant([complex(x) for x in _complex_list(_get(doc, "value"))], _get(doc, "n_in"))
    if k == "extremal_log":
        return ExtremalLogMap([complex(x) for x in _complex_list(_get(doc, "a"))])
    if k == "expr":
        comps = _get(doc, "components")
        return ExprMap([comps] if isinstance(comps, str) else comps, _get(doc, "n"))
    if k == "product":
        return ProductMap([from_document(m) for m in _get(doc, "maps")])
    if k == "example51":
        return Example51Map(from_document(_get(doc, "U")), from_document(_get(doc, "phi")))
    if k == "compose":
        return Compose(from_document(_get(doc, "outer")), from_document(_get(doc, "inner")))
    raise ValidationError(f"unknown map kind {k!r}")


def to_document(m: HoloMap) -> dict:
    return m.to_document()
