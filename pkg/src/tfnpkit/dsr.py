"""Downward self-reductions: the four halving algorithms, the recursive
self-oracle, and query-discipline monitors.

Each algorithm solves its instance with at most two queries to an oracle
for strictly smaller instances.  The iteration problems halve the vertex
space on the leading bit; the sink-of-DAG problems halve the valuation
range on its leading bit.  Oracle answers are verified against the queried
sub-instance (a bad answer raises :class:`OracleContractError`).

The case analyses lift almost every sub-answer directly.  Two lifts are not
universally sound when the oracle may return *any* valid sub-solution
rather than one reachable from the sub-instance's start: an upper-half
answer whose true successor dips into the lower half, and an answer whose
step lands on the redirected all-zero point of a patched circuit.  Both
lifts are verified, and on failure the algorithm finishes by walking the
original instance from its best known ascending point, so the returned
word always verifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .bits import to_int, zeros
from .circuit import evaluate, restrict_input, restrict_output
from .errors import MalformedInstanceError, MonitorViolation, OracleContractError
from .gadgets import combine_pair, freeze_stage, redirect_zero_inputs, split_pair
from .problems import (
    CircuitInstance,
    IterInstance,
    IterWithSourceInstance,
    SodInstance,
    SodWithSourceInstance,
    circuit_size,
    instance_size,
    io_dims,
    kind_of,
    verify_solution,
    well_formed,
)
from .solvers import solve_exhaustive, solve_path

Oracle = Callable[..., str]

MODE_DSR = "dsr"
MODE_CIRCUIT = "circuit-dsr"
MODE_CIRCUIT_POLY = "circuit-dsr-poly-blowup"
MODES = (MODE_DSR, MODE_CIRCUIT, MODE_CIRCUIT_POLY)


def _require_wf(inst: CircuitInstance) -> None:
    if not well_formed(inst):
        raise MalformedInstanceError(f"{kind_of(inst)} instance violates its guarantee")


def _ask(oracle: Oracle, sub: CircuitInstance, parent: CircuitInstance) -> str:
    answer = oracle(sub, parent)
    if not verify_solution(sub, answer):
        raise OracleContractError(
            f"oracle answer {answer!r} does not verify on the queried {kind_of(sub)} instance"
        )
    return answer


def _ensure(inst: CircuitInstance, candidate: str, restart: str) -> str:
    if verify_solution(inst, candidate):
        return candidate
    patched = (
        IterWithSourceInstance(inst.succ, restart)
        if isinstance(inst, (IterInstance, IterWithSourceInstance))
        else SodWithSourceInstance(inst.succ, inst.valuation, restart)
    )
    return solve_path(patched)


# --- iteration problems ------------------------------------------------------


def _half_restriction(succ, leading_bit: int):
    """Successor of the half-space picked by the leading bit: fix input 1,
    drop output 1."""
    return restrict_output(restrict_input(succ, 1, leading_bit), 1)


def _lower_query_source(succ, source: str) -> str | None:
    """Source for the lower-half query, or None when the walk starts or
    immediately lands in the upper half (the restricted instance would not
    be well-formed there)."""
    if source[0] == "1":
        return None
    if evaluate(succ, source)[0] == "1":
        return None
    return source[1:]


def _upper_start(succ, source: str, low_answer: str | None) -> tuple[str, str]:
    """After the lower-half phase, either ('solution', v) or ('upper', u)
    where u lies in the upper half with a strictly ascending step."""
    if source[0] == "1":
        return "upper", source
    first = evaluate(succ, source)
    if first[0] == "1":
        if evaluate(succ, first) <= first:
            return "solution", source
        return "upper", first
    lifted = "0" + low_answer
    step = evaluate(succ, lifted)
    if step[0] == "1":
        if evaluate(succ, step) <= step:
            return "solution", lifted
        return "upper", step
    step2 = evaluate(succ, step)
    if step2[0] == "0":
        return "solution", lifted
    if evaluate(succ, step2) <= step2:
        return "solution", step
    return "upper", step2


def dsr_iter_with_source(inst: IterWithSourceInstance, oracle: Oracle) -> str:
    _require_wf(inst)
    succ, source = inst.succ, inst.source
    if succ.n <= 1:
        return solve_exhaustive(inst)
    low_answer = None
    low_source = _lower_query_source(succ, source)
    if low_source is not None:
        sub = IterWithSourceInstance(_half_restriction(succ, 0), low_source)
        low_answer = _ask(oracle, sub, inst)
    kind, value = _upper_start(succ, source, low_answer)
    if kind == "solution":
        return _ensure(inst, value, source)
    pivot = value
    sub = IterWithSourceInstance(_half_restriction(succ, 1), pivot[1:])
    upper_answer = _ask(oracle, sub, inst)
    return _ensure(inst, "1" + upper_answer, pivot)


def dsr_iter(inst: IterInstance, oracle: Oracle) -> str:
    """Same halving, except the upper-half query has no source argument: its
    circuit redirects the all-zero input to the pivot's suffix, so the
    implicit start of the sub-instance lands on the pivot."""
    _require_wf(inst)
    succ = inst.succ
    n = succ.n
    if n <= 1:
        return solve_exhaustive(inst)
    source = zeros(n)
    low_answer = None
    if _lower_query_source(succ, source) is not None:
        low_answer = _ask(oracle, IterInstance(_half_restriction(succ, 0)), inst)
    kind, value = _upper_start(succ, source, low_answer)
    if kind == "solution":
        return _ensure(inst, value, source)
    pivot = value
    patched = redirect_zero_inputs(_half_restriction(succ, 1), pivot[1:])
    upper_answer = _ask(oracle, IterInstance(patched), inst)
    candidate = pivot if upper_answer == zeros(n - 1) else "1" + upper_answer
    return _ensure(inst, candidate, pivot)


# --- sink-of-DAG problems ----------------------------------------------------


def _as_combined(inst: SodInstance | SodWithSourceInstance):
    return inst.shared if inst.shared is not None else combine_pair(inst.succ, inst.valuation)


def _one_step_answer(inst, source: str) -> str:
    """Base case with a single valuation bit: the source or its step answers."""
    if verify_solution(inst, source):
        return source
    candidate = evaluate(inst.succ, source)
    if not verify_solution(inst, candidate):
        raise MalformedInstanceError("single-bit valuation instance has no one-step answer")
    return candidate


def _derive_pivot(inst, answer: str) -> str | None:
    """None when the sub-answer already solves the full instance; otherwise
    the answer's step, whose valuation has the leading bit set and whose own
    step moves."""
    if verify_solution(inst, answer):
        return None
    return evaluate(inst.succ, answer)


def dsr_sod_with_source(inst: SodWithSourceInstance, oracle: Oracle) -> str:
    _require_wf(inst)
    n, m = inst.succ.n, inst.valuation.m
    if m == 1:
        return _one_step_answer(inst, inst.source)
    combined = _as_combined(inst)
    dropped = restrict_output(combined, n + 1)
    succ1, val1 = split_pair(dropped, m - 1)
    first = _ask(
        oracle, SodWithSourceInstance(succ1, val1, inst.source, shared=dropped), inst
    )
    pivot = _derive_pivot(inst, first)
    if pivot is None:
        return first
    threshold = to_int(evaluate(inst.valuation, pivot))
    frozen = freeze_stage(combined, threshold)
    succ2, val2 = split_pair(frozen, m - 1)
    second = _ask(
        oracle, SodWithSourceInstance(succ2, val2, pivot, shared=frozen), inst
    )
    return _ensure(inst, second, pivot)


def dsr_sod(inst: SodInstance, oracle: Oracle) -> str:
    _require_wf(inst)
    n, m = inst.succ.n, inst.valuation.m
    start = zeros(n)
    if m == 1:
        return _one_step_answer(inst, start)
    combined = _as_combined(inst)
    dropped = restrict_output(combined, n + 1)
    succ1, val1 = split_pair(dropped, m - 1)
    first = _ask(oracle, SodInstance(succ1, val1, shared=dropped), inst)
    pivot = _derive_pivot(inst, first)
    if pivot is None:
        return first
    if evaluate(inst.succ, pivot) == start:
        # the pivot's step would collide with the redirected zero point
        if verify_solution(inst, pivot):
            return pivot
        pivot = start  # its valuation exceeds the pivot's, which keeps the leading bit set
    threshold = to_int(evaluate(inst.valuation, pivot))
    frozen = freeze_stage(combined, threshold, redirect_to=pivot)
    succ2, val2 = split_pair(frozen, m - 1)
    second = _ask(oracle, SodInstance(succ2, val2, shared=frozen), inst)
    candidate = pivot if second == start else second
    return _ensure(inst, candidate, pivot)


_DISPATCH = {
    IterInstance: dsr_iter,
    IterWithSourceInstance: dsr_iter_with_source,
    SodInstance: dsr_sod,
    SodWithSourceInstance: dsr_sod_with_source,
}


def run_dsr(inst: CircuitInstance, oracle: Oracle) -> str:
    fn = _DISPATCH.get(type(inst))
    if fn is None:
        raise TypeError(f"no self-reduction for {type(inst).__name__}")
    return fn(inst, oracle)


# --- oracles and monitoring --------------------------------------------------


class SelfReductionOracle:
    """Answers queries by recursively running the matching algorithm,
    bottoming out in exhaustive search at ``base_bits`` for the iteration
    problems (the sink-of-DAG recursion ends in its own single-valuation-bit
    rule)."""

    def __init__(self, base_bits: int = 1):
        self.base_bits = base_bits
        self._entry: Oracle = self

    def __call__(self, inst: CircuitInstance, parent: CircuitInstance | None = None) -> str:
        if (
            isinstance(inst, (IterInstance, IterWithSourceInstance))
            and inst.succ.n <= self.base_bits
        ):
            return solve_exhaustive(inst)
        return run_dsr(inst, self._entry)


def self_oracle(base_bits: int = 1) -> SelfReductionOracle:
    return SelfReductionOracle(base_bits)


@dataclass
class QueryRecord:
    parent_dims: tuple[int, int, int] | None  # (inputs, outputs, size)
    query_dims: tuple[int, int, int]
    depth: int
    answer: str | None = None


@dataclass
class QueryTrace:
    records: list[QueryRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def levels(self) -> int:
        """Number of nested query levels observed."""
        return 1 + max((r.depth for r in self.records), default=-1)


def _dims(inst: CircuitInstance) -> tuple[int, int, int]:
    nu, mu = io_dims(inst)
    return nu, mu, circuit_size(inst)


class MonitoredOracle:
    """Forwards queries, recording a trace and enforcing the size discipline
    of the chosen mode.

    ``dsr`` requires every query's encoded size (circuit measure plus source
    bits) to be strictly below its parent's.  ``circuit-dsr`` requires the
    input and output bit counts to be component-wise bounded and strictly
    smaller in total.  ``circuit-dsr-poly-blowup`` additionally bounds the
    query's circuit size by the parent's plus (inputs*outputs)**c.
    """

    def __init__(self, inner: Oracle, mode: str, c: int = 2, trace: QueryTrace | None = None):
        if mode not in MODES:
            raise ValueError(f"unknown monitor mode {mode!r}")
        self.inner = inner
        self.mode = mode
        self.c = c
        self.trace = trace if trace is not None else QueryTrace()
        self._depth = 0
        if isinstance(inner, SelfReductionOracle):
            inner._entry = self

    def check(self, parent: CircuitInstance, sub: CircuitInstance) -> None:
        if self.mode == MODE_DSR:
            parent_size = instance_size(parent)
            sub_size = instance_size(sub)
            if sub_size >= parent_size:
                raise MonitorViolation(
                    f"query of encoded size {sub_size} is not below the parent's {parent_size}"
                )
            return
        pn, pm = io_dims(parent)
        sn, sm = io_dims(sub)
        if sn > pn or sm > pm or sn + sm >= pn + pm:
            raise MonitorViolation(
                f"query shape ({sn},{sm}) does not shrink the parent shape ({pn},{pm})"
            )
        if self.mode == MODE_CIRCUIT_POLY:
            budget = circuit_size(parent) + (pn * pm) ** self.c
            actual = circuit_size(sub)
            if actual > budget:
                raise MonitorViolation(
                    f"query circuit size {actual} exceeds the blowup budget {budget}"
                    f" (parent size {circuit_size(parent)})"
                )

    def __call__(self, inst: CircuitInstance, parent: CircuitInstance | None = None) -> str:
        if parent is not None:
            self.check(parent, inst)
        record = QueryRecord(
            parent_dims=None if parent is None else _dims(parent),
            query_dims=_dims(inst),
            depth=self._depth,
        )
        self.trace.records.append(record)
        self._depth += 1
        try:
            answer = self.inner(inst, parent)
        finally:
            self._depth -= 1
        record.answer = answer
        return answer


def monitored(oracle: Oracle, mode: str, c: int = 2, trace: QueryTrace | None = None) -> MonitoredOracle:
    return MonitoredOracle(oracle, mode, c=c, trace=trace)
