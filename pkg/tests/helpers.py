"""Random maps and functions shared by the test modules."""

import warnings

import numpy as np

from blochlab.maps import (
    Affine,
    BallAutomorphism,
    BlaschkeProduct,
    Compose,
    DiagonalEmbedding,
    ExprMap,
    MobiusDisk,
    PolydiskAutomorphism,
    ProductMap,
)
from blochlab import expr as ex
from blochlab.errors import SingularityError, ValidationError
from blochlab.expr import BinOp, BranchCutWarning, Const, Func, Neg, Pow, Var
from blochlab.spectrum import Irrational


def random_unitary(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_disk_point(rng, cap=0.9):
    return cap * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())


def random_ball_point(rng, n, cap=0.9):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v) * cap * rng.random() ** (1 / (2 * n))


def random_mobius(rng, cap=0.9):
    return MobiusDisk(random_disk_point(rng, cap), Irrational(rng.random()))


def random_disk_selfmap(rng):
    kind = rng.integers(0, 4)
    if kind == 0:
        zeros = [random_disk_point(rng) for _ in range(rng.integers(1, 4))]
        return BlaschkeProduct(zeros, Irrational(rng.random()))
    if kind == 1:
        r = rng.uniform(0.1, 0.9)
        b = random_disk_point(rng, 0.99 - r)
        return Affine([[r * np.exp(2j * np.pi * rng.random())]], [b])
    if kind == 2:
        c = complex(rng.uniform(0.2, 0.95) * np.exp(2j * np.pi * rng.random()))
        k = int(rng.integers(2, 5))
        return Compose(random_mobius(rng), ExprMap(f"({c.real!r}+{c.imag!r}*i)*z1^{k}", 1))
    zeros = [random_disk_point(rng) for _ in range(2)]
    return Compose(random_mobius(rng), BlaschkeProduct(zeros))


def random_ball_selfmap(rng, n):
    kind = rng.integers(0, 3)
    if kind == 0:
        return BallAutomorphism(random_unitary(rng, n), random_ball_point(rng, n))
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = rng.uniform(0.1, 0.9)
    M = M / np.linalg.norm(M, 2) * s
    b = random_ball_point(rng, n, 0.99 - s)
    aff = Affine(M, b)
    if kind == 1:
        return aff
    return Compose(BallAutomorphism(random_unitary(rng, n), random_ball_point(rng, n)), aff)


def random_polydisk_selfmap(rng, n):
    kind = rng.integers(0, 3)
    if kind == 0:
        return ProductMap([random_disk_selfmap(rng) for _ in range(n)])
    if kind == 1:
        inner = ProductMap([random_disk_selfmap(rng) for _ in range(n)])
        return Compose(DiagonalEmbedding(n), inner)
    tau = [int(t) + 1 for t in rng.permutation(n)]
    auto = PolydiskAutomorphism([random_mobius(rng) for _ in range(n)], tau)
    return Compose(auto, ProductMap([random_disk_selfmap(rng) for _ in range(n)]))


def random_polynomial_text(rng, n, terms=3, max_deg=3, scale=1.0):
    parts = []
    for _ in range(terms):
        c = complex(scale * (rng.standard_normal() + 1j * rng.standard_normal()))
        f = [f"({c.real!r}+{c.imag!r}*i)"]
        for k in range(n):
            p = int(rng.integers(0, max_deg + 1))
            if p:
                f.append(f"z{k + 1}^{p}")
        parts.append("*".join(f))
    return " + ".join(parts)


def random_polynomial(rng, n, **kw):
    return ExprMap(random_polynomial_text(rng, n, **kw), n)


def fd_jacobian(f, z, h=1e-6):
    z = np.asarray(z, dtype=complex)
    cols = [(np.asarray(f(z + h * e)) - np.asarray(f(z - h * e))) / (2 * h) for e in np.eye(len(z))]
    return np.array(cols).T


def random_ast(rng, dim, depth=3):
    """Random tree whose text form parses back to the same tree."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.55:
            return Var(int(rng.integers(1, dim + 1)))
        if r < 0.65:
            return ex.I
        return Const(complex(round(float(rng.uniform(0.1, 2.0)), 3)))
    k = rng.integers(0, 6)
    if k == 0:
        return Neg(random_ast(rng, dim, depth - 1))
    if k == 1:
        return Pow(random_ast(rng, dim, depth - 1), int(rng.choice([-2, -1, 2, 3])))
    if k == 2:
        return Func(str(rng.choice(ex.FUNCTIONS)), random_ast(rng, dim, depth - 1))
    return BinOp(str(rng.choice(["+", "-", "*", "/"])), random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1))


def well_conditioned(node, z):
    """Divisors away from 0 and log/sqrt arguments away from the branch cut at ``z``."""
    if isinstance(node, (Const, Var)):
        return True
    if isinstance(node, (Neg, Func)):
        if not well_conditioned(node.arg, z):
            return False
        if isinstance(node, Func) and node.name != "exp":
            a = ex.evaluate(node.arg, z)
            return abs(a) > 0.2 and (a.real > 0 or abs(a.imag) > 0.2)
        return abs(ex.evaluate(node.arg, z)) < 5 if isinstance(node, Func) else True
    if isinstance(node, Pow):
        return well_conditioned(node.base, z) and (node.exponent > 0 or abs(ex.evaluate(node.base, z)) > 0.2)
    ok = well_conditioned(node.left, z) and well_conditioned(node.right, z)
    return ok and (node.op != "/" or abs(ex.evaluate(node.right, z)) > 0.2)


def generated(count, dim, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        node = random_ast(rng, dim)
        z = 0.6 * (rng.random(dim) - 0.5) + 0.6j * (rng.random(dim) - 0.5)
        if not ex.variables(node):
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            try:
                if not well_conditioned(node, z):
                    continue
            except (SingularityError, ValidationError, BranchCutWarning, OverflowError, ZeroDivisionError):
                continue
        out.append((node, z))
    return out


def fd_gradient(node, z, h=1e-6):
    g = []
    for k in range(len(z)):
        e = np.zeros(len(z), dtype=complex)
        e[k] = h
        g.append((ex.evaluate(node, z + e) - ex.evaluate(node, z - e)) / (2 * h))
    return np.array(g)


def check_gradient(node, z, dim):
    sym = np.array([ex.evaluate(d, z) for d in ex.gradient(node, dim)])
    fd = fd_gradient(node, z)
    return float(np.max(np.abs(sym - fd)) / max(1.0, float(np.max(np.abs(fd)))))
