"""Dense lattice operators for the osp(1|2s) chain.

Basis: labels 1, ..., s, 0, s-bar, ..., 1-bar map to indices 0 .. 2s.  On a
product space the leftmost site is the most significant digit.  A two-site
operator ``X`` is stored as ``M[c*g + d, a*g + b] = X^{cd}_{ab}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.special import logsumexp

from .errors import ConvergenceError, DimensionError, PoleError

MAX_DENSE_EIG = 2000
MAX_DIM = 3 ** 8


@dataclass(frozen=True)
class GradedIndexSet:
    """Ordered labels 1 < ... < s < 0 < s-bar < ... < 1-bar with parity and bar map."""

    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("rank s must be >= 1")

    @property
    def g(self) -> int:
        return 2 * self.s + 1

    @property
    def labels(self):
        s = self.s
        return [str(a) for a in range(1, s + 1)] + ["0"] + [f"{a}bar" for a in range(s, 0, -1)]

    def parity(self, i: int) -> int:
        return 0 if i == self.s else 1

    def parities(self) -> np.ndarray:
        p = np.ones(self.g, dtype=int)
        p[self.s] = 0
        return p

    def bar(self, i: int) -> int:
        return self.g - 1 - i

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class ModelParams:
    s: int
    J: float
    T: float
    N: int = 0
    L: int = 0

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("rank s must be >= 1")
        if self.T <= 0:
            raise ValueError("temperature must be positive")
        if self.N % 2:
            raise ValueError("Trotter number N must be even")

    @property
    def g(self) -> int:
        return 2 * self.s + 1

    @property
    def u(self) -> float:
        if self.N == 0:
            raise ValueError("u needs a finite Trotter number")
        return -self.J / (self.T * self.N)


@dataclass
class TensorOperator:
    """Dense operator on ``n_sites`` copies of a ``dim``-dimensional space."""

    matrix: np.ndarray
    n_sites: int
    dim: int
    sites: tuple = ()

    def __post_init__(self):
        size = self.dim ** self.n_sites
        if self.matrix.shape != (size, size):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {self.dim}^{self.n_sites}")
        if not self.sites:
            self.sites = tuple(range(self.n_sites))

    def __matmul__(self, other):
        return TensorOperator(self.matrix @ other.matrix, self.n_sites, self.dim, self.sites)

    def embed(self, sites, n_total: int) -> "TensorOperator":
        return TensorOperator(embed(self.matrix, self.dim, sites, n_total), n_total, self.dim)


def embed(op: np.ndarray, g: int, sites, n_total: int) -> np.ndarray:
    """Act with a k-site operator on the given (ordered) sites of an n_total-site space."""
    sites = list(sites)
    k = len(sites)
    rest = [j for j in range(n_total) if j not in sites]
    full = np.kron(op, np.eye(g ** (n_total - k))).reshape((g,) * (2 * n_total))
    order = sites + rest
    perm = np.argsort(order)
    full = full.transpose(list(perm) + [n_total + p for p in perm])
    return full.reshape(g ** n_total, g ** n_total)


def build_alpha(s: int) -> np.ndarray:
    idx = GradedIndexSet(s)
    g = idx.g
    alpha = np.zeros((g, g))
    for a in range(g):
        alpha[a, idx.bar(a)] = 1.0 if a <= s else -1.0
    return alpha


def build_P(s: int) -> np.ndarray:
    idx = GradedIndexSet(s)
    g, p = idx.g, idx.parities()
    out = np.zeros((g * g, g * g))
    for a in range(g):
        for b in range(g):
            out[b * g + a, a * g + b] = (-1.0) ** (p[a] * p[b])
    return out


def build_E(s: int) -> np.ndarray:
    g = 2 * s + 1
    alpha = build_alpha(s)
    alpha_inv = np.linalg.inv(alpha)
    # E[c*g+d, a*g+b] = alpha[a, b] * alpha_inv[c, d]
    return np.einsum("ab,cd->cdab", alpha, alpha_inv).reshape(g * g, g * g)


def _swap(g: int) -> np.ndarray:
    out = np.zeros((g * g, g * g))
    for a in range(g):
        for b in range(g):
            out[b * g + a, a * g + b] = 1.0
    return out


def r_check(v: complex, s: int) -> np.ndarray:
    """Check R-matrix I + v P - 2v/(2v - g) E."""
    g = 2 * s + 1
    if 2 * v == g:
        raise PoleError("R-matrix pole at 2v = g", quantity="R", module="lattice-model")
    return np.eye(g * g) + v * build_P(s) - (2 * v / (2 * v - g)) * build_E(s)


def r_matrix(v: complex, s: int) -> np.ndarray:
    """R^{cd}_{ab}(v) = Rcheck^{cd}_{ba}(v)."""
    return r_check(v, s) @ _swap(2 * s + 1)


def partial_transpose(m: np.ndarray, g: int, space: int) -> np.ndarray:
    """Transpose a two-site operator in the first (0) or second (1) tensor factor."""
    t = m.reshape(g, g, g, g)  # [c, d, a, b]
    t = t.transpose(2, 1, 0, 3) if space == 0 else t.transpose(0, 3, 2, 1)
    return t.reshape(g * g, g * g)


def r_and_rtilde(v: complex, s: int):
    """Return (R_{12}(v), Rtilde_{12}(v)) with Rtilde_{jk} = R_{kj} transposed in space k."""
    g = 2 * s + 1
    r = r_matrix(v, s)
    r21 = _swap(g) @ r @ _swap(g)
    return r, partial_transpose(r21, g, 1)


def hamiltonian(s: int, L: int, J: float, periodic: bool = True) -> TensorOperator:
    """H = J sum_k (P + (2/g) E)_{k,k+1} as a dense operator."""
    return TensorOperator(_hamiltonian_sparse(s, L, J, periodic).toarray(), L, 2 * s + 1)


def _bonds(L: int, periodic: bool):
    bonds = [(k, k + 1) for k in range(L - 1)]
    if periodic and L > 2:
        bonds.append((L - 1, 0))
    elif periodic and L == 2:
        bonds.append((1, 0))
    return bonds


def _hamiltonian_sparse(s: int, L: int, J: float, periodic: bool = True):
    if L < 2:
        raise ValueError("need L >= 2")
    g = 2 * s + 1
    h = (J * (build_P(s) + (2.0 / g) * build_E(s))).reshape(g, g, g, g)  # [c, d, a, b]
    dim = g ** L
    cfg = np.array(list(itertools.product(range(g), repeat=L)), dtype=np.int64)
    weights = g ** np.arange(L - 1, -1, -1)
    states = np.arange(dim)
    rows, cols, vals = [], [], []
    nz = np.argwhere(h != 0)
    rows.append(np.zeros(0, dtype=np.int64))
    cols.append(np.zeros(0, dtype=np.int64))
    vals.append(np.zeros(0))
    for i, j in _bonds(L, periodic):
        for c, d, a, b in nz:
            sel = states[(cfg[:, i] == a) & (cfg[:, j] == b)]
            target = sel + (c - a) * weights[i] + (d - b) * weights[j]
            rows.append(target)
            cols.append(sel)
            vals.append(np.full(sel.size, h[c, d, a, b]))
    return sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(dim, dim)).tocsr()


def _mpo_trace(blocks) -> np.ndarray:
    """Trace over the auxiliary space of an ordered product of site blocks.

    Each block has axes [aux_out, aux_in, site_out, site_in]; the first block
    acts on the most significant site.
    """
    g = blocks[0].shape[0]
    total = 0
    for start in range(g):
        w = blocks[0][start]  # [aux, site_out, site_in]
        for x in blocks[1:]:
            d_out, d_in = w.shape[1], w.shape[2]
            # contract aux_in of the running product with aux_out of the next block
            w = np.einsum("gij,ghkl->hikjl", w, x)
            w = w.reshape(x.shape[1], d_out * x.shape[2], d_in * x.shape[3])
        total = total + w[start]
    return total


def _blocks_r(v: complex, s: int) -> np.ndarray:
    g = 2 * s + 1
    r4 = r_matrix(v, s).reshape(g, g, g, g)  # (a,c) quantum site, (b,d) auxiliary
    return r4.transpose(1, 3, 0, 2)


def _blocks_rtilde(v: complex, s: int) -> np.ndarray:
    g = 2 * s + 1
    r4 = r_matrix(v, s).reshape(g, g, g, g)  # R_{j,a}: (a,c) auxiliary, (b,d) quantum site
    return r4.transpose(2, 0, 1, 3)


def row_transfer(v: complex, s: int, L: int) -> TensorOperator:
    """t(v) = Tr_a R_{aL}(v) ... R_{a1}(v) on the L-site space.

    This ordering makes the local term of t(0)^{-1} t'(0) equal to P + (2/g) E
    on (k, k+1) in the storage convention of this module, so t(v) commutes
    with :func:`hamiltonian`.  The opposite ordering yields the mirror chain.
    """
    if L < 2:
        raise ValueError("need L >= 2")
    g = 2 * s + 1
    _check_dim(g, L)
    forward = _mpo_trace([_blocks_r(v, s)] * L)
    flip = reflection(g, L)
    return TensorOperator(flip @ forward @ flip, L, g)


def reflection(g: int, L: int) -> np.ndarray:
    """Permutation operator sending site k to site L-1-k."""
    dim = g ** L
    cfg = np.array(list(itertools.product(range(g), repeat=L)))
    weights = g ** np.arange(L - 1, -1, -1)
    out = np.zeros((dim, dim))
    out[cfg[:, ::-1] @ weights, np.arange(dim)] = 1.0
    return out


def qtm_matrix(v: complex, params: ModelParams, max_dim: int = MAX_DIM) -> TensorOperator:
    """Quantum transfer matrix on the N-site Trotter space."""
    s, N = params.s, params.N
    if N < 2:
        raise ValueError("need an even Trotter number N >= 2")
    _check_dim(params.g, N, max_dim)
    u = params.u
    a, b = _blocks_r(u + 1j * v, s), _blocks_rtilde(u - 1j * v, s)
    return TensorOperator(_mpo_trace([a, b] * (N // 2)), N, params.g)


def cyclic_shift(g: int, L: int) -> np.ndarray:
    """Translation operator moving the content of site k to site k+1 (mod L)."""
    dim = g ** L
    cfg = np.array(list(itertools.product(range(g), repeat=L)))
    weights = g ** np.arange(L - 1, -1, -1)
    shifted = np.roll(cfg, 1, axis=1) @ weights
    out = np.zeros((dim, dim))
    out[shifted, np.arange(dim)] = 1.0
    return out


def _check_dim(g: int, n: int, max_dim: int = MAX_DIM):
    if g ** n > max_dim:
        raise DimensionError(f"dimension {g}^{n} exceeds cap {max_dim}",
                             quantity="dimension", module="lattice-model")


def largest_eigenvalue(op, tol: float = 1e-13, max_iter: int = 100_000, seed: int = 0) -> complex:
    """Eigenvalue of maximal modulus.

    Dense spectrum up to dimension 2000, power iteration above (Rayleigh
    quotient change below ``tol`` relative to its modulus).
    """
    m = op.matrix if isinstance(op, TensorOperator) else np.asarray(op)
    if m.shape[0] <= MAX_DENSE_EIG:
        ev = np.linalg.eigvals(m)
        return complex(ev[np.argmax(np.abs(ev))])
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(m.shape[0]) + 1j * rng.standard_normal(m.shape[0])
    x /= np.linalg.norm(x)
    lam = 0j
    for _ in range(max_iter):
        y = m @ x
        new = np.vdot(x, y)
        x = y / np.linalg.norm(y)
        if abs(new - lam) <= tol * abs(new):
            return complex(new)
        lam = new
    raise ConvergenceError("power iteration did not converge", quantity="largest eigenvalue",
                           module="lattice-model")


def _charge_blocks(s: int, L: int):
    """Group basis states by the conserved charges n_j - n_jbar, j = 1..s."""
    g = 2 * s + 1
    cfg = np.array(list(itertools.product(range(g), repeat=L)))
    key = np.stack([(cfg == j).sum(1) - (cfg == g - 1 - j).sum(1) for j in range(s)], axis=1)
    _, inverse = np.unique(key, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    return [np.flatnonzero(inverse == b) for b in range(inverse.max() + 1)]


def spectrum(s: int, L: int, J: float, periodic: bool = True, max_dim: int = MAX_DIM) -> np.ndarray:
    """All eigenvalues of the periodic Hamiltonian via charge-sector blocks."""
    _check_dim(2 * s + 1, L, max_dim)
    h = _hamiltonian_sparse(s, L, J, periodic)
    parts = []
    for idx in _charge_blocks(s, L):
        block = h[idx][:, idx].toarray()
        parts.append(np.linalg.eigvals(block))
    return np.concatenate(parts)


def finite_L_free_energy(s: int, L: int, J: float, T: float, max_dim: int = MAX_DIM) -> float:
    """f_L = -(T/L) log Tr exp(-H/T) for the periodic chain."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    ev = spectrum(s, L, J, True, max_dim)
    return float(-T / L * logsumexp(-ev.real / T))
