"""Partial trace and von Neumann entropy."""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BadIndexSet, InvalidState
from .linalg import hermitian_eigvals
from .states import MultipartiteState

ZERO_CLAMP = 1e-10
NEGATIVE_TOL = 1e-9


def log_base(base) -> float:
    if base in ("e", "E"):
        return math.e
    base = float(base)
    if base <= 1.0:
        raise ValueError(f"log base must exceed 1, got {base}")
    return base


def normalize_subset(n: int, subset: Iterable[int]) -> tuple[int, ...]:
    """Sorted tuple of distinct indices in ``range(n)``."""
    try:
        items = [int(i) for i in subset]
    except (TypeError, ValueError) as exc:
        raise BadIndexSet(f"not an index set: {subset!r}") from exc
    out = tuple(sorted(set(items)))
    if not out:
        raise BadIndexSet("index set is empty")
    if len(out) != len(items):
        raise BadIndexSet(f"repeated indices in {items}")
    if out[0] < 0 or out[-1] >= n:
        raise BadIndexSet(f"indices {items} outside range(0, {n})")
    return out


@lru_cache(maxsize=512)
def _trace_index(dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """``idx[t, k]`` = composite index of kept multi-index ``k`` joined with
    traced multi-index ``t``."""
    traced = [i for i in range(len(dims)) if i not in keep]
    kept_ranges = [range(dims[i]) for i in keep]
    traced_ranges = [range(dims[i]) for i in traced]
    d_keep = math.prod(dims[i] for i in keep)
    d_tr = math.prod(dims[i] for i in traced)
    idx = np.empty((d_tr, d_keep), dtype=np.intp)
    full = [0] * len(dims)
    for ti, t in enumerate(itertools.product(*traced_ranges)):
        for pos, val in zip(traced, t):
            full[pos] = val
        for ki, k in enumerate(itertools.product(*kept_ranges)):
            for pos, val in zip(keep, k):
                full[pos] = val
            idx[ti, ki] = np.ravel_multi_index(full, dims)
    return idx


def partial_trace(state: MultipartiteState, keep: Iterable[int]) -> MultipartiteState:
    """Reduced state on ``keep`` (kept subsystems stay in their original order).

    ``rho_K[k, k'] = sum_t rho[(k, t), (k', t)]``, summing explicitly over
    every multi-index ``t`` of the traced subsystems.
    """
    keep = normalize_subset(state.n, keep)
    if len(keep) == state.n:
        return state
    idx = _trace_index(state.dims, keep)
    rho = state.rho[idx[:, :, None], idx[:, None, :]].sum(axis=0)
    return MultipartiteState(rho, tuple(state.dims[i] for i in keep))


def permute_subsystems(state: MultipartiteState, order: Sequence[int]) -> MultipartiteState:
    """Reorder subsystems so that new position ``j`` holds old subsystem ``order[j]``."""
    order = [int(i) for i in order]
    if sorted(order) != list(range(state.n)):
        raise BadIndexSet(f"{order} is not a permutation of range({state.n})")
    d = state.dims
    t = state.rho.reshape(d + d)
    t = t.transpose(order + [state.n + i for i in order])
    new_dims = tuple(d[i] for i in order)
    dim = state.dim
    return MultipartiteState(t.reshape(dim, dim), new_dims, state.label)


def reduced_from_ket(psi: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a pure state ``psi`` as ``M M^H``.

    ``M`` is ``psi`` reshaped to (kept, traced). Independent of
    :func:`partial_trace`, used by the optimisers and as a test oracle.
    """
    dims = tuple(dims)
    keep = normalize_subset(len(dims), keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    t = np.asarray(psi).reshape(dims).transpose(list(keep) + traced)
    m = t.reshape(math.prod(dims[i] for i in keep), -1)
    return m @ m.conj().T


def entropy_of_spectrum(w: np.ndarray, base=2) -> float:
    """``-sum l log l`` over a spectrum; ``0 log 0 = 0``.

    Eigenvalues in ``[-1e-9, 1e-10]`` are treated as zero; anything more
    negative means the input was not a density operator.
    """
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -NEGATIVE_TOL:
        raise InvalidState(f"negative eigenvalue {w.min():.3e} in density operator")
    w = w[w > ZERO_CLAMP]
    return float(-np.sum(w * np.log(w)) / math.log(log_base(base)))


def matrix_entropy(rho, base=2) -> float:
    return entropy_of_spectrum(hermitian_eigvals(rho), base)


def von_neumann_entropy(state: MultipartiteState, base=2) -> float:
    """``S = -Tr rho log rho`` in units of ``log(base)`` (bits by default)."""
    return matrix_entropy(state.rho, base)


def subsystem_entropy(state: MultipartiteState, subset: Iterable[int], base=2) -> float:
    return von_neumann_entropy(partial_trace(state, subset), base)


class EntropyTable:
    """Memoised subsystem entropies of one state.

    Every quantity built from the same subset reuses the identical
    floating-point value, so algebraic identities such as telescoping sums
    hold to rounding of the final additions.
    """

    def __init__(self, state: MultipartiteState, base=2):
        self.state = state
        self.base = base
        self._cache: dict[tuple[int, ...], float] = {}

    def __call__(self, subset: Iterable[int]) -> float:
        key = normalize_subset(self.state.n, subset)
        if key not in self._cache:
            self._cache[key] = subsystem_entropy(self.state, key, self.base)
        return self._cache[key]

    def total(self) -> float:
        return self(range(self.state.n))
