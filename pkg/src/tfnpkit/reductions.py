"""Inter-reductions among the four sink-finding problems, each paired with a
solution pullback.

Every pullback first checks that its argument verifies on the target
instance (raising :class:`PullbackContractError` otherwise) and always
returns a candidate that verifies on the source.  Where the textbook
construction admits target solutions with no local counterpart on the
source side (a descending point of an iteration instance, or the artificial
edge endpoint of a source-removal), the pullback falls back to following
the source instance's own successor walk, which is total at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .bits import zeros
from .circuit import Circuit, constant_circuit, evaluate
from .errors import PullbackContractError
from .gadgets import GateBuilder, combine_pair
from .problems import (
    IterInstance,
    IterWithSourceInstance,
    ProblemInstance,
    SodInstance,
    SodWithSourceInstance,
    verify_solution,
    well_formed,
)
from .solvers import solve_path


@dataclass(frozen=True, eq=False)
class ReductionResult:
    target: ProblemInstance
    pullback: Callable[[str], str]


def _checked_pullback(source, target, lift):
    def pullback(w: str) -> str:
        if not verify_solution(target, w):
            raise PullbackContractError("pullback argument does not verify on the target")
        v = lift(w)
        if not verify_solution(source, v):
            raise PullbackContractError("construction produced a non-verifying source candidate")
        return v

    return pullback


def iter_to_sod(inst: IterInstance) -> ReductionResult:
    """The successor doubles as its own valuation.  A target solution whose
    step descends is not an iteration solution; those pull back by walking
    the source from the all-zero word."""
    succ = inst.succ
    target = SodInstance(succ, succ, shared=combine_pair(succ, succ, name="pair"))

    def lift(w: str) -> str:
        if verify_solution(inst, w):
            return w
        return solve_path(inst)

    return ReductionResult(target, _checked_pullback(inst, target, lift))


def sod_to_iter(inst: SodInstance) -> ReductionResult:
    """Track the valuation in the high-order bits so the walk increases
    lexicographically; off-rail points are isolated fixed points.

    When the all-zero word already answers the source (its valuation does
    not rise), the canonical start would violate the target guarantee, so a
    trivially solvable target is emitted and the pullback is constant.
    """
    succ, val = inst.succ, inst.valuation
    n, m = succ.n, val.m

    builder = GateBuilder(m + n)
    y_refs, x_refs = builder.inputs[:m], builder.inputs[m:]
    v_refs = builder.embed(val, x_refs)
    on_rail = builder.eq_refs(y_refs, v_refs)
    s_refs = builder.embed(succ, x_refs)
    v_next = builder.embed(val, s_refs)
    outs = builder.mux(on_rail, v_next + s_refs, list(builder.inputs))
    lifted = builder.circuit(outs, name="succ")
    start = evaluate(val, zeros(n)) + zeros(n)
    target = IterWithSourceInstance(lifted, start)

    if not well_formed(target):
        # the start itself is stuck, which certifies the all-zero source answer
        trivial = IterWithSourceInstance(
            constant_circuit(m + n, "1" * (m + n), name="succ"), zeros(m + n)
        )
        return ReductionResult(trivial, _checked_pullback(inst, trivial, lambda w: zeros(n)))

    def lift(w: str) -> str:
        x = w[m:]
        if verify_solution(inst, x):
            return x
        return evaluate(succ, x)

    return ReductionResult(target, _checked_pullback(inst, target, lift))


def add_source(inst: IterInstance | SodInstance) -> ReductionResult:
    """The all-zero word is already a guaranteed start; solution sets coincide."""
    if isinstance(inst, IterInstance):
        target = IterWithSourceInstance(inst.succ, zeros(inst.succ.n))
    else:
        target = SodWithSourceInstance(
            inst.succ, inst.valuation, zeros(inst.succ.n), shared=inst.shared
        )
    return ReductionResult(target, _checked_pullback(inst, target, lambda w: w))


def _redirect_zero_to(c: Circuit, word: str) -> Circuit:
    """Successor computing ``word`` on the all-zero input and ``c`` elsewhere."""
    b = GateBuilder(c.n)
    at_zero = b.eq_zero(b.inputs)
    s_refs = b.embed(c, b.inputs)
    return b.circuit(b.mux_const(at_zero, word, s_refs), name="succ")


def drop_source(inst: IterWithSourceInstance | SodWithSourceInstance) -> ReductionResult:
    """Splice an artificial edge from the all-zero word to the declared
    source.  Solutions other than the artificial endpoint pull back
    unchanged; a solution at the all-zero word is an artifact of the new
    edge and pulls back by walking the source instance."""
    src = inst.source
    n = len(src)
    is_iter = isinstance(inst, IterWithSourceInstance)

    if src == zeros(n):
        target = IterInstance(inst.succ) if is_iter else SodInstance(
            inst.succ, inst.valuation, shared=inst.shared
        )
        return ReductionResult(target, _checked_pullback(inst, target, lambda w: w))

    patched = _redirect_zero_to(inst.succ, src)
    if is_iter:
        target: ProblemInstance = IterInstance(patched)
    else:
        target = SodInstance(patched, inst.valuation, shared=combine_pair(patched, inst.valuation))

    def lift(w: str) -> str:
        if verify_solution(inst, w):
            return w
        return solve_path(inst)

    return ReductionResult(target, _checked_pullback(inst, target, lift))
