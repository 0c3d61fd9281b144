"""Pure-state and density-matrix containers, named constructors, and JSON I/O.

Conventions: qubit 1 is the most significant bit of the computational index,
so basis ket 0 is |0...0> and ket 2^n - 1 is |1...1>. Constructors never
renormalize silently; pass normalize=True to opt in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from collections.abc import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    BadDimension,
    BadStateFile,
    BadSubsystem,
    DomainError,
    NotHermitian,
    NotNormalized,
    NotPSD,
)

NORM_TOL = 1e-10
MIN_QUBITS = 1
MAX_QUBITS = 6


def _check_qubit_count(n: int, minimum: int = MIN_QUBITS) -> int:
    n = int(n)
    if not minimum <= n <= MAX_QUBITS:
        raise BadDimension(f"n_qubits {n} outside supported range {minimum}..{MAX_QUBITS}")
    return n


class PureState:
    """Normalized complex amplitude vector over n qubits."""

    def __init__(self, n_qubits: int, amplitudes, *, normalize: bool = False):
        n = _check_qubit_count(n_qubits)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**n:
            raise BadDimension(f"expected {2**n} amplitudes for {n} qubits, got {amps.size}")
        if not np.all(np.isfinite(amps.view(float))):
            raise BadDimension("amplitudes must be finite")
        norm = float(np.sqrt(np.sum(np.abs(amps) ** 2)))
        if normalize:
            if norm < NORM_TOL:
                raise NotNormalized("cannot normalize a (near-)zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"norm defect {abs(norm - 1.0):.3e} exceeds {NORM_TOL:.0e}")
        amps.flags.writeable = False
        self.n_qubits = n
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def to_density(self) -> DensityMatrix:
        rho = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.n_qubits, rho, validate=False)

    def __repr__(self) -> str:
        return f"PureState(n_qubits={self.n_qubits}, dim={self.dim})"


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix over n qubits.

    validate=False skips the invariant checks; it is reserved for outputs of
    operations that preserve them (rank-1 promotion, spin flips, reductions).
    """

    def __init__(self, n_qubits: int, matrix, *, normalize: bool = False, validate: bool = True):
        n = _check_qubit_count(n_qubits)
        m = linalg.as_complex_matrix(matrix)
        if m.shape[0] != 2**n:
            raise BadDimension(f"expected a {2**n}x{2**n} matrix for {n} qubits, got {m.shape}")
        if normalize:
            tr = complex(np.trace(m)).real
            if abs(tr) < NORM_TOL:
                raise NotNormalized("cannot normalize a (near-)zero-trace matrix")
            m = m / tr
        if validate:
            defect = linalg.hermiticity_defect(m)
            if defect > NORM_TOL:
                raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {NORM_TOL:.0e}")
            tr_defect = abs(complex(np.trace(m)) - 1.0)
            if tr_defect > NORM_TOL:
                raise NotNormalized(f"trace defect {tr_defect:.3e} exceeds {NORM_TOL:.0e}")
            low = float(linalg.hermitian_eig(m).eigenvalues.min())
            if low < linalg.PSD_CLAMP:
                raise NotPSD(f"eigenvalue {low:.3e} below {linalg.PSD_CLAMP:.0e}")
        m.flags.writeable = False
        self.n_qubits = n
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def partial_trace(self, keep: Iterable[int]) -> DensityMatrix:
        """Reduce to the 1-based qubit labels in `keep` (relative order preserved)."""
        reduced = linalg.partial_trace(self.matrix, keep)
        n_kept = reduced.shape[0].bit_length() - 1
        return DensityMatrix(n_kept, reduced, validate=False)

    def __repr__(self) -> str:
        return f"DensityMatrix(n_qubits={self.n_qubits}, dim={self.dim})"


def to_density(state: PureState | DensityMatrix) -> DensityMatrix:
    """Promote a pure state to its rank-1 density matrix; pass density matrices through."""
    if isinstance(state, PureState):
        return state.to_density()
    if isinstance(state, DensityMatrix):
        return state
    raise BadDimension(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def make_ghz(n: int, alpha: complex, beta: complex) -> PureState:
    """Cat-form state alpha|0...0> + beta|1...1> on n qubits."""
    n = _check_qubit_count(n, minimum=2)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = alpha
    amps[-1] = beta
    return PureState(n, amps)


def make_w(coeffs: Sequence[complex], *, anti: bool = False) -> PureState:
    """Single-excitation superposition a|001> + b|010> + c|100> (3 qubits).

    With anti=True the three amplitudes sit on the single-hole kets instead:
    a|011> + b|101> + c|110>.
    """
    c = np.array(list(coeffs), dtype=complex).reshape(-1)
    if c.size != 3:
        raise BadDimension(f"expected 3 coefficients, got {c.size}")
    amps = np.zeros(8, dtype=complex)
    if anti:
        amps[3], amps[5], amps[6] = c[0], c[1], c[2]
    else:
        amps[1], amps[2], amps[4] = c[0], c[1], c[2]
    return PureState(3, amps)


def make_product(factors: Sequence[Sequence[complex]]) -> PureState:
    """Tensor product of single-qubit kets; factors[0] is qubit 1 (most significant)."""
    if not 2 <= len(factors) <= MAX_QUBITS:
        raise BadDimension(f"expected 2..{MAX_QUBITS} factors, got {len(factors)}")
    amps = np.array([1.0 + 0.0j])
    for f in factors:
        v = np.array(list(f), dtype=complex).reshape(-1)
        if v.size != 2:
            raise BadDimension("each factor must have exactly 2 amplitudes")
        amps = np.kron(amps, v)
    return PureState(len(factors), amps)


def make_biseparable(
    block: Sequence[complex], factor: Sequence[complex], separable_qubit: int = 3
) -> PureState:
    """Two-qubit block tensored with one single-qubit factor (3 qubits total).

    `block` holds the four amplitudes of the entangled pair (the two qubits
    other than `separable_qubit`, in ascending label order); `factor` holds
    the two amplitudes of the separable party.
    """
    b = np.array(list(block), dtype=complex).reshape(-1)
    f = np.array(list(factor), dtype=complex).reshape(-1)
    if b.size != 4 or f.size != 2:
        raise BadDimension("block needs 4 amplitudes and factor needs 2")
    k = int(separable_qubit)
    if k not in (1, 2, 3):
        raise BadSubsystem(f"separable_qubit must be 1, 2, or 3, got {k}")
    tensor = np.zeros((2, 2, 2), dtype=complex)
    pair = [q for q in (1, 2, 3) if q != k]
    for bi in range(2):
        for bj in range(2):
            for bk in range(2):
                bits = {pair[0]: bi, pair[1]: bj, k: bk}
                tensor[bits[1], bits[2], bits[3]] = b[2 * bi + bj] * f[bk]
    return PureState(3, tensor.reshape(-1))


def random_pure(n: int, seed: int) -> PureState:
    """Haar-distributed pure state from normalized complex Gaussian amplitudes."""
    n = _check_qubit_count(n, minimum=2)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState(n, z, normalize=True)


def random_mixed(n: int, rank: int, seed: int) -> DensityMatrix:
    """Random density matrix G G^dagger / tr(G G^dagger) with G of shape 2^n x rank."""
    n = _check_qubit_count(n, minimum=2)
    rank = int(rank)
    if not 1 <= rank <= 2**n:
        raise BadDimension(f"rank {rank} outside 1..{2**n}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((2**n, rank)) + 1j * rng.standard_normal((2**n, rank))
    m = g @ g.conj().T
    return DensityMatrix(n, m / np.trace(m).real)


@dataclass(frozen=True)
class ValidationReport:
    """Diagnostics for the density-matrix invariants at tolerance 1e-10."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def validate(state) -> ValidationReport:
    """Check Hermiticity, unit trace, and positivity; never raises on defects."""
    if isinstance(state, (PureState, DensityMatrix)):
        m = to_density(state).matrix
    else:
        m = linalg.as_complex_matrix(state)
    herm = linalg.hermiticity_defect(m)
    tr = abs(complex(np.trace(m)) - 1.0)
    low = float(linalg.hermitian_eig((m + m.conj().T) / 2.0).eigenvalues.min())
    failures = []
    if herm > NORM_TOL:
        failures.append(f"hermiticity defect {herm:.3e} > {NORM_TOL:.0e}")
    if tr > NORM_TOL:
        failures.append(f"trace defect {tr:.3e} > {NORM_TOL:.0e}")
    if low < linalg.PSD_CLAMP:
        failures.append(f"min eigenvalue {low:.3e} < {linalg.PSD_CLAMP:.0e}")
    return ValidationReport(herm, tr, low, tuple(failures))


def permute_qubits(state: PureState | DensityMatrix, perm: Sequence[int]):
    """Relabel qubits: qubit i of the input becomes qubit perm[i-1] of the output."""
    if isinstance(state, PureState):
        n = state.n_qubits
    elif isinstance(state, DensityMatrix):
        n = state.n_qubits
    else:
        raise BadDimension(f"expected PureState or DensityMatrix, got {type(state).__name__}")
    p = [int(x) for x in perm]
    if sorted(p) != list(range(1, n + 1)):
        raise BadSubsystem(f"perm must be a permutation of 1..{n}, got {p}")
    inverse = [0] * n
    for i, target in enumerate(p):
        inverse[target - 1] = i
    if isinstance(state, PureState):
        t = state.amplitudes.reshape((2,) * n)
        out = np.transpose(t, inverse).reshape(-1)
        return PureState(n, out, normalize=False)
    t = state.matrix.reshape((2,) * (2 * n))
    axes = inverse + [i + n for i in inverse]
    out = np.transpose(t, axes).reshape((2**n, 2**n))
    return DensityMatrix(n, out, validate=False)


def apply_local_unitaries(state: PureState | DensityMatrix, unitaries: Sequence):
    """Apply one 2x2 unitary per qubit (index 0 acts on qubit 1)."""
    if isinstance(state, (PureState, DensityMatrix)):
        n = state.n_qubits
    else:
        raise BadDimension(f"expected PureState or DensityMatrix, got {type(state).__name__}")
    if len(unitaries) != n:
        raise BadSubsystem(f"expected {n} unitaries, got {len(unitaries)}")
    full = np.array([[1.0 + 0.0j]])
    for u in unitaries:
        m = np.asarray(u, dtype=complex)
        if m.shape != (2, 2):
            raise BadDimension("each local unitary must be 2x2")
        defect = float(np.max(np.abs(m.conj().T @ m - np.eye(2))))
        if defect > NORM_TOL:
            raise DomainError(f"factor is not unitary (defect {defect:.3e})")
        full = np.kron(full, m)
    if isinstance(state, PureState):
        return PureState(n, full @ state.amplitudes, normalize=False)
    return DensityMatrix(n, full @ state.matrix @ full.conj().T, validate=False)


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary (up to an irrelevant global phase)."""
    z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    z /= np.sqrt(np.sum(np.abs(z) ** 2))
    phase = np.exp(2j * np.pi * rng.random())
    return np.array([[z[0], -phase * z[1].conjugate()], [z[1], phase * z[0].conjugate()]])


def _pairs_to_array(values) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise BadStateFile(f"expected an array of [re, im] pairs: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise BadStateFile("expected an array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    """JSON-ready mapping; floats round-trip bit-exactly through json."""
    if isinstance(state, PureState):
        return {
            "n_qubits": state.n_qubits,
            "kind": "pure",
            "amplitudes": [[z.real, z.imag] for z in state.amplitudes],
        }
    if isinstance(state, DensityMatrix):
        return {
            "n_qubits": state.n_qubits,
            "kind": "mixed",
            "matrix": [[[z.real, z.imag] for z in row] for row in state.matrix],
        }
    raise BadDimension(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def state_from_dict(data: dict) -> PureState | DensityMatrix:
    if not isinstance(data, dict):
        raise BadStateFile("state document must be a JSON object")
    try:
        n = int(data["n_qubits"])
        kind = data["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadStateFile(f"missing or malformed field: {exc}") from exc
    if kind == "pure":
        if "amplitudes" not in data:
            raise BadStateFile("pure state document lacks 'amplitudes'")
        return PureState(n, _pairs_to_array(data["amplitudes"]))
    if kind == "mixed":
        if "matrix" not in data:
            raise BadStateFile("mixed state document lacks 'matrix'")
        rows = data["matrix"]
        try:
            m = np.array([[complex(re, im) for re, im in row] for row in rows])
        except (TypeError, ValueError) as exc:
            raise BadStateFile(f"malformed matrix rows: {exc}") from exc
        return DensityMatrix(n, m)
    raise BadStateFile(f"unknown kind {kind!r} (expected 'pure' or 'mixed')")


def save_state(state: PureState | DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=2)
        fh.write("\n")


def load_state(path) -> PureState | DensityMatrix:
    """Read a state file and re-validate every invariant."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise BadStateFile(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadStateFile(f"invalid JSON in {path}: {exc}") from exc
    return state_from_dict(data)
