"""Index of correlation, its decompositions, and the entropy inequalities
it is checked against.

All inequality checks return signed slacks (``lhs - rhs`` for ``lhs >= rhs``,
``-|lhs - rhs|`` for identities) and pass when the slack is at least
``-tol``. Subsystems are 0-based; the three parties of a tripartite state
are called A, B, C in verdict names.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .entropy import EntropyTable, log_base, normalize_subset
from .errors import BadPartition, NegativeEntropy, NotPure, OverlappingGroups, WrongArity
from .states import MultipartiteState

DEFAULT_TOL = 1e-8
_PARTY = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def sig12(x: float) -> float:
    """Round to 12 significant digits (the serialised precision)."""
    return float(f"{x:.12g}") + 0.0


@dataclass(frozen=True)
class SetPartition:
    """Disjoint nonempty blocks covering ``range(n)``, stored canonically
    (each block sorted, blocks ordered by their smallest element)."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = [tuple(sorted(int(i) for i in b)) for b in self.blocks]
        if not blocks or any(not b for b in blocks):
            raise BadPartition("partition blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if len(set(flat)) != len(flat):
            raise BadPartition(f"blocks overlap: {self.blocks}")
        if sorted(flat) != list(range(len(flat))):
            raise BadPartition(f"blocks do not cover range({len(flat)}): {self.blocks}")
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "|".join("".join(str(i) for i in b) if all(i < 10 for i in b) else ",".join(map(str, b))
                        for b in self.blocks)

    @classmethod
    def parse(cls, text: str) -> "SetPartition":
        """``"01|23"`` or ``"0,1|2,3"``."""
        blocks = []
        for part in text.split("|"):
            items = part.split(",") if "," in part else list(part)
            blocks.append(tuple(int(x) for x in items if x.strip()))
        return cls(tuple(blocks))

    @classmethod
    def finest(cls, n: int) -> "SetPartition":
        return cls(tuple((i,) for i in range(n)))


@dataclass
class Verdict:
    name: str
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "slack": sig12(self.slack), "pass": self.passed}


def inequality(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL) -> Verdict:
    slack = lhs - rhs
    return Verdict(name, slack, slack >= -tol)


def identity(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL) -> Verdict:
    slack = -abs(lhs - rhs)
    return Verdict(name, slack, slack >= -tol)


@dataclass
class CheckResult:
    verdicts: list[Verdict]

    @property
    def min_slack(self) -> float:
        return min(v.slack for v in self.verdicts)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def __getitem__(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)


@dataclass
class CorrelationReport:
    entropies: list[float]
    total_entropy: float
    index: float
    log_base: float
    blocks: list[list[int]] | None = None
    internal: list[float] | None = None
    external: float | None = None
    verdicts: list[Verdict] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        out = {
            "entropies": [sig12(x) for x in self.entropies],
            "total_entropy": sig12(self.total_entropy),
            "index": sig12(self.index),
            "blocks": self.blocks,
            "internal": None if self.internal is None else [sig12(x) for x in self.internal],
            "external": None if self.external is None else sig12(self.external),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "log_base": "e" if self.log_base == math.e else sig12(self.log_base),
        }
        for key, val in self.extras.items():
            out[key] = _round_nested(val)
        return out


def _round_nested(val):
    if isinstance(val, float):
        return sig12(val)
    if isinstance(val, (list, tuple)):
        return [_round_nested(v) for v in val]
    if isinstance(val, dict):
        return {k: _round_nested(v) for k, v in val.items()}
    return val


def _table(state: MultipartiteState, base, table: EntropyTable | None) -> EntropyTable:
    if table is not None:
        return table
    return EntropyTable(state, base)


def index_of_correlation(state: MultipartiteState, base=2, table: EntropyTable | None = None) -> float:
    """``I = sum_j S(j) - S``: information held in all correlations."""
    s = _table(state, base, table)
    return sum(s([j]) for j in range(state.n)) - s.total()


def mutual_information(state: MultipartiteState, a: Iterable[int], b: Iterable[int], base=2,
                       table: EntropyTable | None = None) -> float:
    """``S(a) + S(b) - S(a u b)`` for disjoint groups of subsystems."""
    a = normalize_subset(state.n, a)
    b = normalize_subset(state.n, b)
    if set(a) & set(b):
        raise OverlappingGroups(f"groups {a} and {b} overlap")
    s = _table(state, base, table)
    return s(a) + s(b) - s(a + b)


def decompose(state: MultipartiteState, partition: SetPartition, base=2,
              table: EntropyTable | None = None, tol: float = DEFAULT_TOL) -> CorrelationReport:
    """Split the index into per-block internal correlation and the external
    correlation between blocks.

    ``internal[b] = sum_{j in b} S(j) - S(b)`` and
    ``external = sum_b S(b) - S`` are evaluated from separate reduced
    states, so the reported ``decomposition_sum`` verdict is a genuine
    numerical check rather than an identity by construction.
    """
    if not isinstance(partition, SetPartition):
        partition = SetPartition(tuple(partition))
    if partition.n != state.n:
        raise BadPartition(f"partition covers {partition.n} subsystems, state has {state.n}")
    s = _table(state, base, table)
    singles = [s([j]) for j in range(state.n)]
    total = s.total()
    index = sum(singles) - total
    internal = [sum(singles[j] for j in b) - s(b) for b in partition.blocks]
    external = sum(s(b) for b in partition.blocks) - total
    verdicts = [identity("decomposition_sum", sum(internal) + external, index, tol),
                inequality("external_nonnegative", external, 0.0, tol)]
    verdicts += [inequality(f"internal_nonnegative[{i}]", x, 0.0, tol) for i, x in enumerate(internal)]
    return CorrelationReport(
        entropies=singles, total_entropy=total, index=index, log_base=log_base(base),
        blocks=[list(b) for b in partition.blocks], internal=internal, external=external,
        verdicts=verdicts)


@dataclass
class InvarianceResult:
    sum_first: float
    sum_second: float
    index: float
    difference: float
    passed: bool


def check_partition_invariance(state: MultipartiteState, p1: SetPartition, p2: SetPartition, base=2,
                               tol: float = DEFAULT_TOL, table: EntropyTable | None = None) -> InvarianceResult:
    """Internal plus external correlation must not depend on the partition."""
    s = _table(state, base, table)
    r1 = decompose(state, p1, base, s)
    r2 = decompose(state, p2, base, s)
    t1 = sum(r1.internal) + r1.external
    t2 = sum(r2.internal) + r2.external
    diff = abs(t1 - t2)
    worst = max(diff, abs(t1 - r1.index), abs(t2 - r1.index))
    return InvarianceResult(t1, t2, r1.index, diff, worst <= tol)


def _require_parties(state: MultipartiteState, n: int) -> None:
    if state.n != n:
        raise WrongArity(f"need exactly {n} subsystems, state has {state.n}")


def lambda_parameter(state: MultipartiteState, base=2, table: EntropyTable | None = None) -> float:
    """Inclusion-exclusion entropy combination of three parties:
    ``S(A)+S(B)+S(C) - S(AB) - S(AC) - S(BC) + S``. Can be negative."""
    _require_parties(state, 3)
    s = _table(state, base, table)
    return (s([0]) + s([1]) + s([2])
            - s([0, 1]) - s([0, 2]) - s([1, 2])
            + s.total())


def pairwise_expansion(state: MultipartiteState, order: Sequence[int] | None = None, base=2,
                       table: EntropyTable | None = None) -> list[float]:
    """Recursive expansion of the index into ``n - 1`` terms.

    With subsystems visited in ``order`` (default: stored order), term ``k``
    is ``I(o_k ; [o_{k+1} .. o_{n-1}])`` evaluated on the reduced state of
    ``{o_k, .., o_{n-1}}``. The terms telescope to the index.
    """
    n = state.n
    if n < 2:
        raise WrongArity("pairwise expansion needs at least 2 subsystems")
    order = list(range(n)) if order is None else [int(i) for i in order]
    if sorted(order) != list(range(n)):
        raise BadPartition(f"{order} is not a permutation of range({n})")
    s = _table(state, base, table)
    terms = []
    for k in range(n - 1):
        head, rest = [order[k]], order[k + 1:]
        terms.append(s(head) + s(rest) - s(head + rest))
    return terms


def check_strong_subadditivity(state: MultipartiteState, base=2, tol: float = DEFAULT_TOL,
                               table: EntropyTable | None = None) -> CheckResult:
    """Strong subadditivity in every labelling, in both its entropy form
    ``S(XY) + S(YZ) >= S(Y) + S`` and its correlation-monotonicity form
    ``I(X;[YZ]) >= I(X;Y)``, plus ``I([ABC]) >= I(X;Z) + I(Y;Z)``."""
    _require_parties(state, 3)
    s = _table(state, base, table)
    total = s.total()
    index = s([0]) + s([1]) + s([2]) - total
    verdicts = []
    for y in range(3):
        x, z = [i for i in range(3) if i != y]
        verdicts.append(inequality(
            f"strong_subadditivity[{_PARTY[y]}]",
            s([x, y]) + s([y, z]), s([y]) + total, tol))
    for x in range(3):
        for y in range(3):
            if y == x:
                continue
            z = 3 - x - y
            lhs = s([x]) + s([y, z]) - total
            rhs = s([x]) + s([y]) - s([x, y])
            verdicts.append(inequality(
                f"monotonicity[I({_PARTY[x]};{_PARTY[y]}{_PARTY[z]})>=I({_PARTY[x]};{_PARTY[y]})]",
                lhs, rhs, tol))
    for z in range(3):
        x, y = [i for i in range(3) if i != z]
        pair_sum = (s([x]) + s([z]) - s([x, z])) + (s([y]) + s([z]) - s([y, z]))
        verdicts.append(inequality(f"total_exceeds_pair_sum[{_PARTY[z]}]", index, pair_sum, tol))
    return CheckResult(verdicts)


def check_pure_tripartite_identities(state: MultipartiteState, base=2, tol: float = DEFAULT_TOL,
                                     table: EntropyTable | None = None) -> CheckResult:
    """Identities and bounds that hold for pure three-party states."""
    _require_parties(state, 3)
    if not state.is_pure(tol):
        raise NotPure(f"state purity {state.purity():.10f} is not 1")
    s = _table(state, base, table)
    single = [s([i]) for i in range(3)]

    def mi(a, b):
        return single[a] + single[b] - s([a, b])

    index = sum(single) - s.total()
    pairs = mi(0, 1) + mi(0, 2) + mi(1, 2)
    verdicts = [identity("pure_total_is_pair_sum", index, pairs, tol)]
    for x in range(3):
        y, z = [i for i in range(3) if i != x]
        ext = single[x] + s([y, z]) - s.total()
        name = f"{_PARTY[x]}"
        verdicts.append(identity(f"external_is_pair_sum[{name}]", mi(x, y) + mi(x, z), ext, tol))
        verdicts.append(inequality(f"entropy_difference_bound[{name}]",
                                   single[x], abs(single[y] - single[z]), tol))
        verdicts.append(inequality(f"pair_sum_below_entropy_sum[{name}]",
                                   sum(single), mi(x, y) + mi(x, z), tol))
    verdicts.append(identity("lambda_zero", lambda_parameter(state, base, s), 0.0, tol))
    return CheckResult(verdicts)


def check_araki_lieb(state: MultipartiteState, a: Iterable[int], b: Iterable[int], base=2,
                     tol: float = DEFAULT_TOL, table: EntropyTable | None = None) -> CheckResult:
    """``|S(a) - S(b)| <= S(ab) <= S(a) + S(b)`` on the groups ``a``, ``b``."""
    a = normalize_subset(state.n, a)
    b = normalize_subset(state.n, b)
    if set(a) & set(b):
        raise OverlappingGroups(f"groups {a} and {b} overlap")
    s = _table(state, base, table)
    sa, sb, sab = s(a), s(b), s(a + b)
    return CheckResult([inequality("araki_lieb_lower", sab, abs(sa - sb), tol),
                        inequality("subadditivity", sa + sb, sab, tol)])


@dataclass(frozen=True)
class CorrelationBounds:
    classical_max: float
    quantum_max: float
    gap: float
    bipartite_classical: float | None = None
    bipartite_quantum: float | None = None


def classical_quantum_bounds(marginal_entropies: Sequence[float]) -> CorrelationBounds:
    """Upper bounds on the index from the marginal entropies.

    Classical systems have ``S >= max_j S(j)``, so the index is at most the
    sum of all but the largest marginal; quantum systems may have ``S = 0``.
    The gap is therefore the largest marginal entropy. For two parties the
    ``2 min`` / ``min`` bounds are reported as well.
    """
    ent = [float(x) for x in marginal_entropies]
    if any(x < 0 for x in ent):
        raise NegativeEntropy(f"negative entropy in {ent}")
    if not ent:
        return CorrelationBounds(0.0, 0.0, 0.0)
    ent.sort(reverse=True)
    quantum = sum(ent)
    classical = sum(ent[1:])
    bi_c = bi_q = None
    if len(ent) == 2:
        bi_c = min(ent)
        bi_q = 2.0 * min(ent)
    return CorrelationBounds(classical, quantum, ent[0], bi_c, bi_q)


def is_necessarily_nonclassical(state: MultipartiteState, a: Iterable[int] = (0,), b: Iterable[int] = (1,),
                                base=2, tol: float = DEFAULT_TOL) -> bool:
    """True when ``I(a;b)`` exceeds ``min(S_max(a), S_max(b))``, the largest
    correlation any classical description of the two groups can carry;
    ``S_max = log(dim)``."""
    a = normalize_subset(state.n, a)
    b = normalize_subset(state.n, b)
    lb = math.log(log_base(base))
    smax_a = math.log(math.prod(state.dims[i] for i in a)) / lb
    smax_b = math.log(math.prod(state.dims[i] for i in b)) / lb
    return mutual_information(state, a, b, base) > min(smax_a, smax_b) + tol


def analyze(state: MultipartiteState, base=2, tol: float = DEFAULT_TOL,
            partition: SetPartition | None = None) -> CorrelationReport:
    """Everything the library can say about one state, as a single report."""
    s = EntropyTable(state, base)
    part = partition or SetPartition.finest(state.n)
    report = decompose(state, part, base, s, tol)
    singles = report.entropies
    bounds = classical_quantum_bounds([max(x, 0.0) for x in singles])
    report.verdicts.append(inequality("quantum_bound", bounds.quantum_max, report.index, tol))
    report.extras["tolerance"] = tol
    report.extras["pure"] = state.is_pure(tol)
    report.extras["bounds"] = {"classical_max": bounds.classical_max,
                               "quantum_max": bounds.quantum_max, "gap": bounds.gap}
    if state.n >= 2:
        report.extras["pairwise"] = pairwise_expansion(state, base=base, table=s)
        report.verdicts.append(identity("pairwise_telescopes",
                                        sum(report.extras["pairwise"]), report.index, tol))
    if state.n == 2:
        report.verdicts += check_araki_lieb(state, [0], [1], base, tol, s).verdicts
        report.extras["necessarily_nonclassical"] = is_necessarily_nonclassical(state, base=base, tol=tol)
    if state.n == 3:
        report.extras["lambda"] = lambda_parameter(state, base, s)
        report.verdicts += check_strong_subadditivity(state, base, tol, s).verdicts
        if state.is_pure(tol):
            report.verdicts += check_pure_tripartite_identities(state, base, tol, s).verdicts
    return report


def all_bipartitions(n: int) -> list[SetPartition]:
    """Every split of ``range(n)`` into two nonempty blocks."""
    out = []
    for r in range(1, n):
        for first in itertools.combinations(range(n), r):
            if 0 not in first:
                continue
            rest = tuple(i for i in range(n) if i not in first)
            out.append(SetPartition((first, rest)))
    return out
