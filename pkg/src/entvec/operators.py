"""Pair flip operators and the bases that diagonalize them.

Every flip operator is a Pauli word: sigma_y at the two pair positions, and
either sigma_x (cat class, "ghz") or the identity (single-excitation class,
"w") at every other position. The same placement rule covers every pair and
every qubit count, so no pair is special-cased. Expansion weights are always
obtained by diagonalizing the operator in the matching basis rather than from
a lookup table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadPair, DomainError, NonUnimodularWeight
from .states import DensityMatrix, PureState, _check_qubit_count, to_density

CLASSES = ("ghz", "w")
WEIGHT_TOL = 1e-10
EXPANSION_TOL = 1e-12

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)
_LETTERS = "IXYZ"

# Weights at even positions (0, 2, 4, 6) of the three-qubit cat-class
# expansions, keyed by pair. The odd positions are their negatives. Derived
# by diagonalizing the operators; kept here so self-checks can compare
# against a fixed target instead of trusting the derivation twice.
EXPECTED_GHZ3_PATTERNS = {
    (1, 2): (-1.0, -1.0, 1.0, 1.0),
    (1, 3): (-1.0, 1.0, -1.0, 1.0),
    (2, 3): (-1.0, 1.0, 1.0, -1.0),
}


def check_class(cls: str) -> str:
    if cls not in CLASSES:
        raise DomainError(f"unknown class {cls!r}; expected one of {CLASSES}")
    return cls


def check_pair(n: int, pair) -> tuple[int, int]:
    """Validate a 1-based pair of distinct qubit labels; returns it sorted."""
    try:
        i, j = (int(x) for x in pair)
    except (TypeError, ValueError) as exc:
        raise BadPair(f"pair must be two qubit labels, got {pair!r}") from exc
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise BadPair(f"pair {pair!r} must be two distinct labels in 1..{n}")
    return (i, j) if i < j else (j, i)


def all_pairs(n: int) -> list[tuple[int, int]]:
    n = _check_qubit_count(n, minimum=2)
    return [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class PauliString:
    """Tensor word over {I, X, Y, Z}; entry k acts on qubit k+1."""

    word: tuple[int, ...]

    def __post_init__(self):
        if not self.word or any(s not in (0, 1, 2, 3) for s in self.word):
            raise DomainError(f"word symbols must be in 0..3, got {self.word}")

    @property
    def n_qubits(self) -> int:
        return len(self.word)

    def matrix(self) -> np.ndarray:
        out = np.array([[1.0 + 0.0j]])
        for s in self.word:
            out = np.kron(out, SIGMA[s])
        return out

    def __str__(self) -> str:
        return "".join(_LETTERS[s] for s in self.word)


def flip_operator(n: int, pair, cls: str) -> PauliString:
    """Pauli word with Y at the pair and X ("ghz") or I ("w") elsewhere."""
    n = _check_qubit_count(n, minimum=2)
    i, j = check_pair(n, pair)
    cls = check_class(cls)
    filler = 1 if cls == "ghz" else 0
    return PauliString(tuple(2 if q in (i, j) else filler for q in range(1, n + 1)))


@lru_cache(maxsize=None)
def _flip_matrix_cached(n: int, pair: tuple[int, int], cls: str) -> np.ndarray:
    m = flip_operator(n, pair, cls).matrix()
    m.flags.writeable = False
    return m


def flip_matrix(n: int, pair, cls: str) -> np.ndarray:
    """Dense matrix of the flip operator (cached; returned read-only)."""
    return _flip_matrix_cached(n, check_pair(n, pair), check_class(cls))


def ghz_basis(n: int) -> list[PureState]:
    """Orthonormal basis of cat-like kets pairing each index with its bitwise complement.

    Entry 2m is (|m> + |~m>)/sqrt(2) and entry 2m+1 the minus combination,
    for m = 0 .. 2^(n-1) - 1. At n = 2 this is the Bell basis.
    """
    n = _check_qubit_count(n, minimum=2)
    dim = 2**n
    out = []
    for k in range(dim):
        m = k // 2
        partner = dim - 1 - m
        sign = 1.0 if k % 2 == 0 else -1.0
        v = np.zeros(dim, dtype=complex)
        v[m] = 1.0 / np.sqrt(2.0)
        v[partner] = sign / np.sqrt(2.0)
        out.append(PureState(n, v))
    return out


def bell_product_basis(n: int, pair) -> list[PureState]:
    """Bell states on the pair tensored with computational kets on the spectators.

    Enumeration: spectator bit patterns ascending (most significant spectator
    first); within each pattern the Bell kets in the order (|00>+|11>),
    (|00>-|11>), (|01>+|10>), (|01>-|10>), all over sqrt(2).
    """
    n = _check_qubit_count(n, minimum=2)
    i, j = check_pair(n, pair)
    dim = 2**n
    mask_i = 1 << (n - i)
    mask_j = 1 << (n - j)
    spectators = [q for q in range(1, n + 1) if q not in (i, j)]
    out = []
    for config in range(2 ** len(spectators)):
        spect_bits = 0
        for pos, q in enumerate(spectators):
            if (config >> (len(spectators) - 1 - pos)) & 1:
                spect_bits |= 1 << (n - q)
        for j_bit in (0, 1):
            first = spect_bits | (mask_j if j_bit else 0)
            partner = first ^ mask_i ^ mask_j
            for sign in (1.0, -1.0):
                v = np.zeros(dim, dtype=complex)
                v[first] = 1.0 / np.sqrt(2.0)
                v[partner] = sign / np.sqrt(2.0)
                out.append(PureState(n, v))
    return out


def spin_flip(rho: DensityMatrix | PureState, pair, cls: str) -> DensityMatrix:
    """Conjugate the complex-conjugated state by the flip operator: P conj(rho) P."""
    rho = to_density(rho)
    p = flip_matrix(rho.n_qubits, pair, cls)
    flipped = p @ rho.matrix.conj() @ p
    return DensityMatrix(rho.n_qubits, flipped, validate=False)


@dataclass(frozen=True)
class WeightedBasis:
    """Orthonormal vectors and +/-1 weights whose weighted projectors sum to the operator."""

    n_qubits: int
    class_tag: str
    pair: tuple[int, int]
    vectors: tuple[PureState, ...]
    weights: np.ndarray


def _weights_in_basis(p: np.ndarray, vectors) -> np.ndarray:
    """Diagonal of the operator in the given basis; every entry must be +/-1."""
    weights = []
    for k, v in enumerate(vectors):
        x = v.amplitudes
        val = complex(x.conj() @ (p @ x))
        if abs(val.imag) > WEIGHT_TOL or abs(abs(val.real) - 1.0) > WEIGHT_TOL:
            raise NonUnimodularWeight(
                f"basis vector {k} has weight {val:.6g}, not +/-1 within {WEIGHT_TOL:.0e}"
            )
        weights.append(1.0 if val.real > 0 else -1.0)
    return np.array(weights)


def expansion_weights(n: int, pair, cls: str) -> WeightedBasis:
    """Diagonalize the flip operator in its class basis and return the +/-1 weights.

    Also verifies that the weighted projectors reproduce the operator
    entrywise within 1e-12.
    """
    n = _check_qubit_count(n, minimum=2)
    pair = check_pair(n, pair)
    cls = check_class(cls)
    vectors = ghz_basis(n) if cls == "ghz" else bell_product_basis(n, pair)
    p = flip_matrix(n, pair, cls)
    weights = _weights_in_basis(p, vectors)
    recon = np.zeros_like(p)
    for w, v in zip(weights, vectors):
        recon = recon + w * np.outer(v.amplitudes, v.amplitudes.conj())
    residual = float(np.max(np.abs(recon - p)))
    if residual > EXPANSION_TOL:
        raise NonUnimodularWeight(
            f"weighted projectors miss the operator by {residual:.3e} (> {EXPANSION_TOL:.0e})"
        )
    weights.flags.writeable = False
    return WeightedBasis(n_qubits=n, class_tag=cls, pair=pair, vectors=tuple(vectors), weights=weights)
