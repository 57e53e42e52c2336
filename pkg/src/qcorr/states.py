"""Multipartite density operators and the constructors used throughout.

Basis ordering is big-endian: subsystem 0 is the most significant factor
of the composite index. Subsystems are addressed by 0-based position.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BadDistribution, BadRank, InvalidArity, InvalidState, SpecFormatError
from .linalg import as_matrix, hermitian_eig, hermitian_eigvals, hermiticity_error, tensor_all

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-8
NEGATIVE_EIG_TOL = 1e-9
NORM_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """Density operator on ``H_0 (x) H_1 (x) ...`` with the listed dimensions.

    Construction checks shape, Hermiticity and trace. Positivity needs a
    full eigendecomposition and is only checked by :meth:`validate`, which
    file loaders call; the library constructors are positive by design.
    """

    rho: np.ndarray
    dims: tuple[int, ...]
    label: str = field(default="")

    def __post_init__(self):
        rho = as_matrix(self.rho)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise InvalidState("dims must be nonempty")
        if any(d < 2 for d in dims):
            raise InvalidState(f"every subsystem needs dimension >= 2, got {dims}")
        dim = math.prod(dims)
        if rho.shape != (dim, dim):
            raise InvalidState(f"rho has shape {rho.shape}, dims {dims} need ({dim}, {dim})")
        herr = hermiticity_error(rho)
        if herr > HERMITIAN_TOL:
            raise InvalidState(f"rho is not Hermitian (max deviation {herr:.2e})")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"trace {tr:.10f} is not 1")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def purity(self) -> float:
        return float(np.sum(np.abs(self.rho) ** 2))

    def is_pure(self, tol: float = 1e-8) -> bool:
        return abs(self.purity() - 1.0) <= tol

    def validate(self) -> "MultipartiteState":
        w = hermitian_eigvals(self.rho)
        if w[0] < -NEGATIVE_EIG_TOL:
            raise InvalidState(f"rho has negative eigenvalue {w[0]:.3e}")
        return self

    def ket(self, tol: float = 1e-8) -> np.ndarray:
        """State vector of a pure state (global phase fixed by the
        eigensolver's phase convention)."""
        if not self.is_pure(tol):
            raise InvalidState("state is not pure")
        w, v = hermitian_eig(self.rho)
        return v[:, -1]


def from_ket(psi, dims: Sequence[int], label: str = "") -> MultipartiteState:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidState(f"state vector has norm {norm:.10f}")
    return MultipartiteState(np.outer(psi, psi.conj()), tuple(dims), label)


def basis_ket(bits: Sequence[int], dims: Sequence[int] | None = None) -> np.ndarray:
    dims = tuple(dims) if dims is not None else (2,) * len(bits)
    idx = int(np.ravel_multi_index(tuple(bits), dims))
    psi = np.zeros(math.prod(dims), dtype=np.complex128)
    psi[idx] = 1.0
    return psi


def _parse_bits(n: int, bits) -> tuple[int, ...]:
    if bits is None:
        return (0,) * n
    if isinstance(bits, str):
        bits = [int(ch) for ch in bits]
    bits = tuple(int(b) for b in bits)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise InvalidArity(f"need {n} bits in {{0,1}}, got {bits}")
    return bits


def ghz(n: int, bits=None, unitaries=None) -> MultipartiteState:
    """``(|b_1..b_n> + |~b_1..~b_n>)/sqrt(2)``, optionally followed by one
    2x2 unitary per qubit (the "some spin basis" freedom)."""
    if n < 2:
        raise InvalidArity(f"GHZ state needs n >= 2, got {n}")
    b = _parse_bits(n, bits)
    psi = (basis_ket(b) + basis_ket([1 - x for x in b])) / math.sqrt(2.0)
    if unitaries is not None:
        if len(unitaries) != n:
            raise InvalidArity(f"need {n} local unitaries, got {len(unitaries)}")
        psi = tensor_all(unitaries) @ psi
    label = "ghz%d_%s" % (n, "".join(map(str, b)))
    return from_ket(psi, (2,) * n, label)


def bell() -> MultipartiteState:
    return ghz(2)


def w_state(n: int = 3) -> MultipartiteState:
    psi = sum(basis_ket([1 if i == k else 0 for i in range(n)]) for k in range(n))
    return from_ket(psi / math.sqrt(n), (2,) * n, f"w{n}")


def schmidt_state(probs: Sequence[float]) -> MultipartiteState:
    """``sum_j sqrt(p_j) |j, j>`` on two ``len(probs)``-level systems.

    A single probability yields a qubit pair ``|00>`` so that both
    subsystems keep dimension >= 2.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-10:
        raise BadDistribution(f"not a probability vector: {probs}")
    d = max(len(p), 2)
    psi = np.zeros(d * d, dtype=np.complex128)
    for j, pj in enumerate(p):
        psi[j * d + j] = math.sqrt(pj)
    return from_ket(psi / np.linalg.norm(psi), (d, d), "schmidt")


def classical_correlated(n: int) -> MultipartiteState:
    """``(|0..0><0..0| + |1..1><1..1|)/2`` on ``n`` qubits."""
    if n < 2:
        raise InvalidArity(f"need n >= 2, got {n}")
    rho = np.zeros((2**n, 2**n), dtype=np.complex128)
    rho[0, 0] = rho[-1, -1] = 0.5
    return MultipartiteState(rho, (2,) * n, f"classical{n}")


def product_state(factors: Sequence) -> MultipartiteState:
    """Tensor product of density matrices or kets (1-d arrays)."""
    mats, dims = [], []
    for f in factors:
        if isinstance(f, MultipartiteState):
            mats.append(f.rho)
            dims.extend(f.dims)
            continue
        a = np.asarray(f, dtype=np.complex128)
        if a.ndim == 1:
            a = np.outer(a, a.conj())
        mats.append(a)
        dims.append(a.shape[0])
    return MultipartiteState(tensor_all(mats), tuple(dims))


def maximally_mixed(dims: Sequence[int]) -> MultipartiteState:
    d = math.prod(dims)
    return MultipartiteState(np.eye(d, dtype=np.complex128) / d, tuple(dims))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(dims: Sequence[int], seed=None) -> MultipartiteState:
    """Haar-random pure state: normalised complex Gaussian amplitudes."""
    dims = tuple(dims)
    if not dims:
        raise InvalidState("dims must be nonempty")
    psi = _complex_normal(_rng(seed), math.prod(dims))
    return from_ket(psi / np.linalg.norm(psi), dims, "random_pure")


def random_mixed(dims: Sequence[int], rank: int | None = None, seed=None) -> MultipartiteState:
    """Induced (Ginibre) ensemble ``G G^H / tr(G G^H)`` with ``G`` of shape
    ``(dim, rank)``; ``rank`` defaults to ``dim``."""
    dims = tuple(dims)
    dim = math.prod(dims)
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise BadRank(f"rank must lie in [1, {dim}], got {rank}")
    g = _complex_normal(_rng(seed), (dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return MultipartiteState(rho / np.trace(rho).real, dims, "random_mixed")


def haar_unitary(d: int, seed=None) -> np.ndarray:
    q, r = np.linalg.qr(_complex_normal(_rng(seed), (d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_local_unitaries(n: int, seed=None, d: int = 2) -> list[np.ndarray]:
    rng = _rng(seed)
    return [haar_unitary(d, rng) for _ in range(n)]


def apply_local_unitaries(state: MultipartiteState, unitaries) -> MultipartiteState:
    u = tensor_all(unitaries)
    rho = u @ state.rho @ u.conj().T
    return MultipartiteState(0.5 * (rho + rho.conj().T), state.dims, state.label)


def purify(state: MultipartiteState) -> MultipartiteState:
    """Minimal purification on ``dims + (r,)``.

    ``r`` is the numerical rank (eigenvalues above 1e-10), raised to 2 for
    rank-1 inputs so the ancilla is a genuine subsystem. Amplitudes are
    ``sum_i sqrt(l_i) |v_i> (x) |i>`` over the retained eigenpairs.
    """
    w, v = hermitian_eig(state.rho)
    keep = [i for i in range(len(w) - 1, -1, -1) if w[i] > RANK_TOL]
    r = max(len(keep), 2)
    psi = np.zeros((state.dim, r), dtype=np.complex128)
    for col, i in enumerate(keep):
        psi[:, col] = math.sqrt(w[i]) * v[:, i]
    psi = psi.reshape(-1)
    psi /= np.linalg.norm(psi)
    return from_ket(psi, state.dims + (r,), f"purified_{state.label}".rstrip("_"))


# -- StateSpec JSON ---------------------------------------------------------


def _complex_list(raw, what: str) -> list[complex]:
    try:
        return [complex(float(re), float(im)) for re, im in raw]
    except (TypeError, ValueError) as exc:
        raise SpecFormatError(f"{what}: expected [[re, im], ...]") from exc


def state_from_spec(spec: dict) -> MultipartiteState:
    """Build a state from a parsed StateSpec mapping.

    Raises:
        SpecFormatError: schema problems (missing keys, bad shapes).
        InvalidState: well-formed input that is not a valid density operator.
    """
    if not isinstance(spec, dict):
        raise SpecFormatError("StateSpec must be a JSON object")
    label = str(spec.get("label", ""))
    try:
        dims = tuple(int(d) for d in spec["dims"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError("'dims' must be a list of integers") from exc
    dim = math.prod(dims) if dims else 0
    if ("pure" in spec) == ("density" in spec):
        raise SpecFormatError("exactly one of 'pure' or 'density' is required")
    if "pure" in spec:
        amps = _complex_list(spec["pure"], "pure")
        if len(amps) != dim:
            raise SpecFormatError(f"'pure' has {len(amps)} amplitudes, dims need {dim}")
        return from_ket(amps, dims, label).validate()
    rows = spec["density"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise SpecFormatError(f"'density' needs {dim} rows")
    mat = [_complex_list(row, "density row") for row in rows]
    if any(len(row) != dim for row in mat):
        raise SpecFormatError(f"'density' rows need {dim} entries")
    return MultipartiteState(np.array(mat), dims, label).validate()


def load_state(path) -> MultipartiteState:
    try:
        spec = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read {path}: {exc}") from exc
    return state_from_spec(spec)


def state_to_spec(state: MultipartiteState, pure: bool | None = None) -> dict:
    pure = state.is_pure() if pure is None else pure
    out: dict = {"label": state.label, "dims": list(state.dims)}
    if pure:
        out["pure"] = [[z.real, z.imag] for z in state.ket()]
    else:
        out["density"] = [[[z.real, z.imag] for z in row] for row in state.rho]
    return out
