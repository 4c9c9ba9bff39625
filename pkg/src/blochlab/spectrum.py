"""Spectra of isometric composition operators with polydisk symbols.

Unimodular constants are carried as exact rational turns (``p/q`` stands for
``exp(2 pi i p/q)``) or as explicitly irrational values; finite orders are
never inferred from floating point angles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Union

import numpy as np

from .errors import ClassificationRequired, ValidationError

INFINITY = math.inf


@dataclass(frozen=True)
class Rational:
    """The root of unity ``exp(2 pi i p/q)`` with ``0 <= p < q`` in lowest terms."""

    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0:
            raise ValidationError("denominator must be positive")
        f = Fraction(self.p, self.q) % 1
        object.__setattr__(self, "p", f.numerator)
        object.__setattr__(self, "q", f.denominator)

    @property
    def turns(self) -> Fraction:
        return Fraction(self.p, self.q)

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * self.p / self.q)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return Rational(*_fraction_pq(self.turns + other.turns))
        return NotImplemented

    def inverse(self):
        return Rational(-self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True, eq=False)
class Irrational:
    """A unimodular constant declared to have infinite order.

    ``approx`` is the angle in turns; instances never compare equal to a
    :class:`Rational`.
    """

    approx: float
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "approx", float(self.approx) % 1.0)

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * self.approx)

    def __str__(self):
        return self.label or f"irrational({self.approx!r})"


RotationNumber = Union[Rational, Irrational]


def _fraction_pq(f: Fraction):
    f = f % 1
    return f.numerator, f.denominator


def parse_rotation(obj) -> RotationNumber:
    """Read ``"p/q"`` or ``{"irrational": x, "label": ...}``."""
    if isinstance(obj, (Rational, Irrational)):
        return obj
    if isinstance(obj, str):
        try:
            f = Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rotation number {obj!r}") from exc
        return Rational(f.numerator, f.denominator)
    if isinstance(obj, dict) and "irrational" in obj:
        try:
            x = float(obj["irrational"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad rotation number {obj!r}") from exc
        if not math.isfinite(x):
            raise ValidationError(f"bad rotation number {obj!r}")
        return Irrational(x, str(obj.get("label", "")))
    raise ValidationError(f"bad rotation number {obj!r}")


def rotation_to_document(r: RotationNumber):
    if isinstance(r, Rational):
        return str(r)
    doc = {"irrational": r.approx}
    if r.label:
        doc["label"] = r.label
    return doc


def order(r: RotationNumber) -> Union[int, float]:
    """Smallest positive ``k`` with ``r^k = 1`` (``math.inf`` for irrational rotations)."""
    if isinstance(r, Irrational):
        return INFINITY
    return r.q


def _lcm(values):
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


# ----------------------------------------------------------------------------
# Permutations
# ----------------------------------------------------------------------------


def validate_permutation(tau) -> tuple:
    """One-line notation, 1-based: ``tau[k-1]`` is the image of ``k``."""
    tau = tuple(int(t) for t in tau)
    if sorted(tau) != list(range(1, len(tau) + 1)):
        raise ValidationError(f"not a permutation of 1..{len(tau)}: {list(tau)}")
    return tau


def cycle_decomposition(tau) -> list:
    """Disjoint cycles (tuples of 1-based points) covering ``1..n``, fixed points included."""
    tau = validate_permutation(tau)
    seen, cycles = set(), []
    for start in range(1, len(tau) + 1):
        if start in seen:
            continue
        cyc, k = [], start
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = tau[k - 1]
        cycles.append(tuple(cyc))
    return cycles


def permutation_order(tau) -> int:
    return _lcm(len(c) for c in cycle_decomposition(tau))


# ----------------------------------------------------------------------------
# Symbols and spectra
# ----------------------------------------------------------------------------

AUTOMORPHISM = "automorphism"
NON_AUTO_ONTO = "non_auto_onto"
UNKNOWN = "unknown"
CLASSES = (AUTOMORPHISM, NON_AUTO_ONTO, UNKNOWN)


@dataclass(frozen=True)
class PolydiskSymbol:
    """``z -> (lambda_1 z_tau(1), ..., lambda_n z_tau(n))`` plus a class hint."""

    lambdas: tuple
    tau: tuple
    class_hint: str = AUTOMORPHISM

    def __post_init__(self):
        lambdas = tuple(parse_rotation(x) for x in self.lambdas)
        tau = validate_permutation(self.tau) if self.tau else tuple(range(1, len(lambdas) + 1))
        if len(tau) != len(lambdas):
            raise ValidationError("tau and lambdas must have the same length")
        if self.class_hint not in CLASSES:
            raise ValidationError(f"class must be one of {CLASSES}")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "tau", tau)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.array([lam.value() * z[t - 1] for lam, t in zip(self.lambdas, self.tau)])

    @classmethod
    def from_document(cls, doc: dict) -> "PolydiskSymbol":
        try:
            lambdas = doc["lambdas"]
        except (KeyError, TypeError) as exc:
            raise ValidationError("symbol document needs 'lambdas'") from exc
        return cls(tuple(lambdas), tuple(doc.get("tau") or ()), doc.get("class", AUTOMORPHISM))

    def to_document(self) -> dict:
        return {
            "lambdas": [rotation_to_document(x) for x in self.lambdas],
            "tau": list(self.tau),
            "class": self.class_hint,
        }


@dataclass(frozen=True)
class SpectrumResult:
    """``kind`` is ``closed_unit_disk``, ``unit_circle`` or ``finite_cyclic_group``.

    For the finite case the spectrum is the group of ``order``-th roots of
    unity; ``guaranteed_order`` describes the subgroup whose members have
    explicit eigenfunctions.
    """

    kind: str
    order: Optional[int] = None
    guaranteed_order: Optional[int] = None
    notes: tuple = field(default=())

    @property
    def elements(self) -> list:
        if self.kind != "finite_cyclic_group":
            return []
        return [Fraction(k, self.order) for k in range(self.order)]

    @property
    def element_labels(self) -> list:
        if self.kind != "finite_cyclic_group":
            return []
        return [f"{k}/{self.order}" for k in range(self.order)]

    @property
    def guaranteed_eigenvalues(self) -> list:
        if not self.guaranteed_order:
            return []
        return [Rational(k, self.guaranteed_order) for k in range(self.guaranteed_order)]

    def to_document(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind == "finite_cyclic_group":
            doc["order"] = self.order
            doc["elements"] = self.element_labels
            doc["guaranteed_order"] = self.guaranteed_order
            doc["guaranteed_eigenvalues"] = [
                f"{k * (self.order // self.guaranteed_order)}/{self.order}" for k in range(self.guaranteed_order)
            ]
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def cycle_products(sym: PolydiskSymbol) -> list:
    """For each cycle ``c`` of tau, the product of the lambdas over ``c`` (as a turn)."""
    out = []
    for cyc in cycle_decomposition(sym.tau):
        lams = [sym.lambdas[k - 1] for k in cyc]
        if any(isinstance(x, Irrational) for x in lams):
            out.append(None)
        else:
            out.append(reduce(lambda a, b: a * b, lams, Rational(0)))
    return out


def spectrum(sym: PolydiskSymbol) -> SpectrumResult:
    if sym.class_hint == UNKNOWN:
        raise ClassificationRequired("the symbol must be classified (automorphism or non-automorphic onto)")
    if sym.class_hint == NON_AUTO_ONTO:
        return SpectrumResult("closed_unit_disk")
    if any(isinstance(x, Irrational) for x in sym.lambdas):
        return SpectrumResult("unit_circle")
    L = _lcm([x.q for x in sym.lambdas] + [permutation_order(sym.tau)])
    # monomials prod_{j in c} z_j are eigenfunctions with eigenvalue prod_{j in c} lambda_j;
    # for tau = id this is the group generated by the lambdas themselves
    G = _lcm(r.q for r in cycle_products(sym))
    notes = ()
    if G != _lcm(x.q for x in sym.lambdas):
        notes = ("the group generated by the lambdas is larger than the cycle-product subgroup; "
                 "only the latter has explicit monomial eigenfunctions",)
    return SpectrumResult("finite_cyclic_group", order=L, guaranteed_order=G, notes=notes)


def monomial_eigenfunction(sym: PolydiskSymbol, eig: Rational):
    """Exponent vector of a monomial eigenfunction for ``eig``, or ``None``.

    Products of the cycle monomials are searched; the cycle products generate
    the guaranteed subgroup, so every guaranteed eigenvalue is found.
    """
    cycles = cycle_decomposition(sym.tau)
    prods = cycle_products(sym)
    usable = [(c, p) for c, p in zip(cycles, prods) if p is not None]
    target = eig.turns
    # breadth-first over exponent choices; orders are small
    bound = _lcm(p.q for _, p in usable) if usable else 1
    reachable = {Fraction(0): [0] * len(usable)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for t in frontier:
            for i, (_, p) in enumerate(usable):
                t2 = (t + p.turns) % 1
                if t2 not in reachable:
                    e = list(reachable[t])
                    e[i] += 1
                    reachable[t2] = e
                    nxt.append(t2)
        frontier = nxt
        if len(reachable) > bound:
            break
    if target % 1 not in reachable:
        return None
    exps = [0] * sym.n
    for (cyc, _), m in zip(usable, reachable[target % 1]):
        for k in cyc:
            exps[k - 1] += m
    return exps


def resolvent_determinant(alpha: int, mu: complex) -> complex:
    """Determinant of the cyclic ``alpha x alpha`` system matrix (diagonal ``-mu``,
    superdiagonal 1, bottom-left corner 1)."""
    if alpha < 1:
        raise ValidationError("alpha must be >= 1")
    if alpha == 1:
        # the corner and the diagonal coincide
        return complex(1.0 - mu)
    A = np.zeros((alpha, alpha), dtype=complex)
    A[np.arange(alpha), np.arange(alpha)] = -mu
    A[np.arange(alpha - 1), np.arange(1, alpha)] = 1.0
    A[alpha - 1, 0] = 1.0
    return complex(np.linalg.det(A))


def permutation_eigenfunctions(tau, lambdas, eig: RotationNumber) -> list:
    """Coefficient vectors ``x`` with ``f(phi(z)) = eig * f(z)`` for ``f(z) = sum x_j z_j``.

    One basis vector is returned per cycle of tau on which the linear system is
    singular.  Cycles carrying an irrational lambda, or an irrational ``eig``,
    contribute nothing because the singularity cannot be decided exactly.
    """
    tau = validate_permutation(tau)
    lambdas = [parse_rotation(x) for x in lambdas]
    eig = parse_rotation(eig)
    if len(lambdas) != len(tau):
        raise ValidationError("tau and lambdas must have the same length")
    if isinstance(eig, Irrational):
        return []
    mu = eig.value()
    out = []
    for cyc in cycle_decomposition(tau):
        lams = [lambdas[k - 1] for k in cyc]
        if any(isinstance(x, Irrational) for x in lams):
            continue
        # x_{tau(j)} = lambda_j x_j / mu around the cycle closes iff mu^len = prod lambda
        if (len(cyc) * eig.turns - sum(x.turns for x in lams)) % 1 != 0:
            continue
        x = np.zeros(len(tau), dtype=complex)
        j = cyc[0]
        x[j - 1] = 1.0
        for _ in range(len(cyc) - 1):
            x[tau[j - 1] - 1] = lambdas[j - 1].value() * x[j - 1] / mu
            j = tau[j - 1]
        out.append(x)
    return out
