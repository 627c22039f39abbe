"""Reference solvers establishing ground truth at desk scale."""

from __future__ import annotations

from .bits import all_bitstrings, zeros
from .circuit import evaluate
from .errors import MalformedInstanceError, SolveBoundError
from .problems import (
    ImplicitSodInstance,
    IterWithSourceInstance,
    ProblemInstance,
    SodWithSourceInstance,
    SvlInstance,
    instance_bits,
    verify_solution,
)


def _stepper(inst: ProblemInstance):
    if isinstance(inst, (ImplicitSodInstance, SvlInstance)):
        return inst.succ
    succ = inst.succ
    return lambda x: evaluate(succ, x)


def start_point(inst: ProblemInstance) -> str:
    """Where path solving begins: the explicit source if the instance has
    one, the all-zero word otherwise."""
    if isinstance(inst, (IterWithSourceInstance, SodWithSourceInstance)):
        return inst.source
    if isinstance(inst, (ImplicitSodInstance, SvlInstance)):
        return inst.source
    return zeros(instance_bits(inst))


def solve_path(inst: ProblemInstance, budget: int | None = None) -> str:
    """Iterate the successor from the source until the solution predicate
    holds; the step budget (default 2^n) turns guarantee violations into
    explicit errors instead of non-termination."""
    n = instance_bits(inst)
    if budget is None:
        budget = 1 << n
    step = _stepper(inst)
    x = start_point(inst)
    for _ in range(budget + 1):
        if verify_solution(inst, x):
            return x
        nxt = step(x)
        if nxt == x:
            break  # a non-verifying fixed point can never progress
        x = nxt
    raise MalformedInstanceError(
        f"no verifying candidate within {budget} steps; the instance guarantee must be violated"
    )


def solve_exhaustive(inst: ProblemInstance, bound: int = 16) -> str:
    """Smallest verifying candidate in lexicographic order; refuses above
    ``bound`` input bits."""
    n = instance_bits(inst)
    if n > bound:
        raise SolveBoundError(f"exhaustive scan refused: {n} bits exceeds bound {bound}")
    for cand in all_bitstrings(n):
        if verify_solution(inst, cand):
            return cand
    raise MalformedInstanceError("no candidate verifies; the instance guarantee must be violated")


def enumerate_solutions(inst: ProblemInstance, bound: int = 16) -> list[str]:
    """All verifying candidates in lexicographic order."""
    n = instance_bits(inst)
    if n > bound:
        raise SolveBoundError(f"exhaustive scan refused: {n} bits exceeds bound {bound}")
    return [cand for cand in all_bitstrings(n) if verify_solution(inst, cand)]
