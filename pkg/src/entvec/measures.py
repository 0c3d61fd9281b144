"""Pairwise concurrence vectors, entanglement vectors, and their aggregation.

Two interchangeable routes compute a pair concurrence:

* pure route: |x . P x| on the raw amplitude vector (no conjugation), used by
  default for pure inputs;
* mixed route: descending square-rooted spectrum lambda_k of the generation
  matrix rho^(1/2) rho~ rho^(1/2), combined as max(2*lambda_1 - sum, 0). This
  works for any density matrix and agrees with the pure route on rank-1 input.

The "whole" measure (3-qubit pure states only) rescales the summed class
concurrences by a spectator-party denominator; outside biseparable states it
is a literal extrapolation of that formula, computed with the deterministic
eigensolver so reports are reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import BadDimension, DegenerateDenominatorWarning, DomainError
from .operators import all_pairs, check_class, check_pair, flip_matrix, spin_flip
from .states import DensityMatrix, PureState, to_density

ENTROPY_DOMAIN_SLACK = 1e-12
NOISE_FLOOR = 1e-13
DENOMINATOR_TOL = 1e-12
COMPONENT_SLACK = 1e-9
MEASURE_CLASSES = ("ghz", "w", "whole")


def binary_entropy(x: float) -> float:
    """Base-2 entropy of a bit with probability x; endpoints return exactly 0."""
    x = float(x)
    if x < -ENTROPY_DOMAIN_SLACK or x > 1.0 + ENTROPY_DOMAIN_SLACK:
        raise DomainError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def entanglement_from_concurrence(c: float) -> float:
    """Map a concurrence in [0, 1] to the entropy of the matching Schmidt split."""
    c = float(c)
    if c < -COMPONENT_SLACK or c > 1.0 + COMPONENT_SLACK:
        raise DomainError(f"concurrence {c!r} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def generation_matrix(rho: DensityMatrix | PureState, pair, cls: str) -> np.ndarray:
    """Hermitian PSD sandwich rho^(1/2) (P conj(rho) P) rho^(1/2)."""
    rho = to_density(rho)
    pair = check_pair(rho.n_qubits, pair)
    cls = check_class(cls)
    s = linalg.psd_sqrt(rho.matrix)
    flipped = spin_flip(rho, pair, cls).matrix
    m = s @ flipped @ s
    return (m + m.conj().T) / 2.0


def concurrence_mixed(
    rho: DensityMatrix | PureState, pair, cls: str, *, noise_floor: float = NOISE_FLOOR
) -> float:
    """Pair concurrence of a density matrix via the generation-matrix spectrum.

    Eigenvalues of the generation matrix below `noise_floor` are treated as
    exact zeros: square-rooting them would amplify ~1e-16 rounding noise on
    rank-deficient inputs to ~1e-8 per eigenvalue, visibly biasing the result.
    """
    m = generation_matrix(rho, pair, cls)
    w = linalg.hermitian_eig(m).eigenvalues.copy()
    w[w < noise_floor] = 0.0
    lam = np.sqrt(w)
    return float(max(0.0, 2.0 * lam[0] - np.sum(lam)))


def concurrence_pure(psi: PureState, pair, cls: str, *, normalized: bool = False) -> float:
    """Pair concurrence of a pure state: |x . (P x)| on raw amplitudes.

    normalized=True divides by the spectator-party denominator (the same one
    the whole measure uses); only defined for 3-qubit states.
    """
    if not isinstance(psi, PureState):
        raise BadDimension(f"concurrence_pure expects a PureState, got {type(psi).__name__}")
    pair = check_pair(psi.n_qubits, pair)
    cls = check_class(cls)
    p = flip_matrix(psi.n_qubits, pair, cls)
    x = psi.amplitudes
    c = float(abs(x @ (p @ x)))
    if normalized:
        if psi.n_qubits != 3:
            raise BadDimension("normalized variant is only defined for 3 qubits")
        den = _spectator_denominator(psi, pair)
        if den < DENOMINATOR_TOL:
            warnings.warn(
                "spectator denominator below tolerance; reporting 0",
                DegenerateDenominatorWarning,
                stacklevel=2,
            )
            return 0.0
        c /= den
    return c


def _spectator_denominator(psi: PureState, pair: tuple[int, int]) -> float:
    """Spectral mix of the remaining party: sum_a lam_a (|a^2+b^2| + 2|ab|)."""
    k = ({1, 2, 3} - set(pair)).pop()
    rho_k = linalg.partial_trace(psi.to_density().matrix, {k})
    dec = linalg.hermitian_eig(rho_k)
    total = 0.0
    for lam, vec in zip(dec.eigenvalues, dec.eigenvectors.T):
        a, b = vec[0], vec[1]
        total += max(float(lam), 0.0) * (abs(a * a + b * b) + 2.0 * abs(a * b))
    return total


def whole_concurrence(psi: PureState, pair) -> float:
    """Denominator-rescaled sum of both class concurrences (3-qubit pure only).

    On block-times-single-qubit states this recovers the plain two-qubit
    concurrence of the block; elsewhere it applies the same formula literally.
    """
    if not isinstance(psi, PureState):
        raise BadDimension(f"whole_concurrence expects a PureState, got {type(psi).__name__}")
    if psi.n_qubits != 3:
        raise BadDimension(f"whole_concurrence is defined for 3 qubits, got {psi.n_qubits}")
    pair = check_pair(3, pair)
    numerator = concurrence_pure(psi, pair, "ghz") + concurrence_pure(psi, pair, "w")
    den = _spectator_denominator(psi, pair)
    if den < DENOMINATOR_TOL:
        warnings.warn(
            "spectator denominator below tolerance; reporting 0",
            DegenerateDenominatorWarning,
            stacklevel=2,
        )
        return 0.0
    return numerator / den


def _component_bound(class_tag: str) -> float:
    # ghz/w are bounded by 1 (Cauchy-Schwarz against a unitary flip); the
    # whole extrapolation is only bounded by numerator <= 2 over denominator >= 1
    return 1.0 if class_tag in ("ghz", "w") else 2.0


@dataclass(frozen=True)
class ConcurrenceVector:
    """One concurrence per qubit pair, keyed by the sorted 1-based pair."""

    n_qubits: int
    class_tag: str
    components: dict[tuple[int, int], float]

    def __post_init__(self):
        expected = all_pairs(self.n_qubits)
        if list(self.components.keys()) != expected:
            raise BadDimension(f"components must cover pairs {expected} in order")
        bound = _component_bound(self.class_tag) + COMPONENT_SLACK
        for pair, value in self.components.items():
            if not (-COMPONENT_SLACK <= value <= bound):
                raise DomainError(f"component {pair} = {value!r} outside [0, {bound}]")
        object.__setattr__(
            self, "components", {pair: float(v) for pair, v in self.components.items()}
        )

    def as_array(self) -> np.ndarray:
        return np.array(list(self.components.values()))


@dataclass(frozen=True)
class EntanglementVector:
    """Entropy-mapped companion of a concurrence vector, plus its Euclidean total."""

    n_qubits: int
    class_tag: str
    components: dict[tuple[int, int], float]
    total: float

    def __post_init__(self):
        object.__setattr__(
            self, "components", {pair: float(v) for pair, v in self.components.items()}
        )
        object.__setattr__(self, "total", float(self.total))

    def as_array(self) -> np.ndarray:
        return np.array(list(self.components.values()))


def concurrence_vector(
    source: PureState | DensityMatrix, cls: str, *, noise_floor: float = NOISE_FLOOR
) -> ConcurrenceVector:
    """All pair concurrences of one class; route picked by the input kind."""
    if cls == "whole":
        if not isinstance(source, PureState) or source.n_qubits != 3:
            raise BadDimension("whole measure needs a 3-qubit pure state")
        comps = {pair: whole_concurrence(source, pair) for pair in all_pairs(3)}
        return ConcurrenceVector(3, "whole", comps)
    cls = check_class(cls)
    n = source.n_qubits
    if isinstance(source, PureState):
        comps = {pair: concurrence_pure(source, pair, cls) for pair in all_pairs(n)}
    else:
        comps = {
            pair: concurrence_mixed(source, pair, cls, noise_floor=noise_floor)
            for pair in all_pairs(n)
        }
    return ConcurrenceVector(n, cls, comps)


def entanglement_vector(source_or_cv, cls: str | None = None) -> EntanglementVector:
    """Entropy map of each component, totalled in quadrature.

    Accepts either a state (with the class to measure) or an existing
    ConcurrenceVector. Components above 1 (possible only for the whole
    extrapolation) are clamped to the maximal entropy 1.
    """
    if isinstance(source_or_cv, ConcurrenceVector):
        cv = source_or_cv
    else:
        if cls is None:
            raise DomainError("a class is required when passing a state")
        cv = concurrence_vector(source_or_cv, cls)
    comps = {
        pair: entanglement_from_concurrence(min(c, 1.0)) for pair, c in cv.components.items()
    }
    total = float(np.sqrt(sum(e * e for e in comps.values())))
    return EntanglementVector(cv.n_qubits, cv.class_tag, comps, total)


@dataclass(frozen=True)
class ClassResult:
    """Concurrence and entanglement vectors of one class, with route metadata."""

    class_tag: str
    concurrence: ConcurrenceVector
    entanglement: EntanglementVector
    route: str
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        pairs = [
            {
                "i": i,
                "j": j,
                "concurrence": self.concurrence.components[(i, j)],
                "entanglement": self.entanglement.components[(i, j)],
            }
            for (i, j) in self.concurrence.components
        ]
        return {
            "class": self.class_tag,
            "pairs": pairs,
            "total": self.entanglement.total,
            "diagnostics": {"route": self.route, **self.diagnostics},
        }


@dataclass(frozen=True)
class MeasureReport:
    """Everything measured for one input state."""

    n_qubits: int
    kind: str
    results: tuple[ClassResult, ...]

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "kind": self.kind,
            "results": [r.to_dict() for r in self.results],
        }


def default_classes(source: PureState | DensityMatrix) -> list[str]:
    """ghz and w always; whole exactly when the input is a 3-qubit pure state."""
    classes = ["ghz", "w"]
    if isinstance(source, PureState) and source.n_qubits == 3:
        classes.append("whole")
    return classes


def measure_all(
    source: PureState | DensityMatrix,
    classes: list[str] | None = None,
    *,
    verify_routes: bool = False,
) -> MeasureReport:
    """Measure the requested classes (default: every applicable one).

    verify_routes=True additionally runs the other route on pure inputs and
    records the largest |pure - mixed| discrepancy per class.
    """
    if classes is None:
        classes = default_classes(source)
    is_pure = isinstance(source, PureState)
    results = []
    for cls in classes:
        if cls not in MEASURE_CLASSES:
            raise DomainError(f"unknown class {cls!r}; expected one of {MEASURE_CLASSES}")
        if cls == "whole" and (not is_pure or source.n_qubits != 3):
            raise BadDimension("whole measure needs a 3-qubit pure state")
        cv = concurrence_vector(source, cls)
        ev = entanglement_vector(cv)
        if cls == "whole":
            route = "whole-rescaled-pure"
        elif is_pure:
            route = "pure-closed-form"
        else:
            route = "mixed-eigenvalue"
        diagnostics = {}
        if verify_routes and is_pure and cls != "whole":
            delta = max(
                abs(concurrence_mixed(source, pair, cls) - cv.components[pair])
                for pair in cv.components
            )
            diagnostics["route_delta"] = delta
        results.append(ClassResult(cls, cv, ev, route, diagnostics))
    return MeasureReport(source.n_qubits, "pure" if is_pure else "mixed", tuple(results))
