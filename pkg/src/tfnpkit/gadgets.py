"""Small gate-level building blocks shared by the reductions.

All builders work on a :class:`GateBuilder`, which accumulates a gate list
with inputs first and hands out integer references.  The library covers the
pieces the constructions need: compare-to-constant, vector equality,
redirect-on-match input stages, and value-threshold freezes.
"""

from __future__ import annotations

from typing import Sequence

from .bits import check_bits, from_int
from .circuit import (
    AND,
    CONST,
    INPUT,
    NOT,
    OP_AND,
    OP_CONST,
    OP_INPUT,
    OP_NOT,
    OP_OR,
    OR,
    Circuit,
    Gate,
    evaluate,
    project_outputs,
)
from .errors import DimensionError


class GateBuilder:
    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = [INPUT(k) for k in range(n)]
        self.inputs = list(range(n))
        self._consts: dict[int, int] = {}

    def add(self, gate: Gate) -> int:
        self.gates.append(gate)
        return len(self.gates) - 1

    def const(self, bit: int) -> int:
        if bit not in self._consts:
            self._consts[bit] = self.add(CONST(bit))
        return self._consts[bit]

    def not_(self, a: int) -> int:
        return self.add(NOT(a))

    def and_(self, a: int, b: int) -> int:
        return self.add(AND(a, b))

    def or_(self, a: int, b: int) -> int:
        return self.add(OR(a, b))

    def and_all(self, refs: Sequence[int]) -> int:
        if not refs:
            return self.const(1)
        acc = refs[0]
        for r in refs[1:]:
            acc = self.and_(acc, r)
        return acc

    def or_all(self, refs: Sequence[int]) -> int:
        if not refs:
            return self.const(0)
        acc = refs[0]
        for r in refs[1:]:
            acc = self.or_(acc, r)
        return acc

    def eq_zero(self, refs: Sequence[int]) -> int:
        return self.and_all([self.not_(r) for r in refs])

    def eq_const(self, refs: Sequence[int], bits: str) -> int:
        check_bits(bits, len(refs))
        return self.and_all(
            [r if b == "1" else self.not_(r) for r, b in zip(refs, bits)]
        )

    def eq_refs(self, a_refs: Sequence[int], b_refs: Sequence[int]) -> int:
        if len(a_refs) != len(b_refs):
            raise DimensionError("vector equality needs equal widths")
        bits = []
        for a, b in zip(a_refs, b_refs):
            both = self.and_(a, b)
            neither = self.and_(self.not_(a), self.not_(b))
            bits.append(self.or_(both, neither))
        return self.and_all(bits)

    def lt_const(self, refs: Sequence[int], bits: str) -> int:
        """Reference that is true iff the value on ``refs`` (MSB first) is
        strictly below the constant ``bits``."""
        check_bits(bits, len(refs))
        terms = []
        prefix: int | None = None
        for r, b in zip(refs, bits):
            if b == "1":
                low = self.not_(r)
                terms.append(low if prefix is None else self.and_(prefix, low))
            eq = r if b == "1" else self.not_(r)
            prefix = eq if prefix is None else self.and_(prefix, eq)
        return self.or_all(terms)

    def mux(self, sel: int, then_refs: Sequence[int], else_refs: Sequence[int]) -> list[int]:
        if len(then_refs) != len(else_refs):
            raise DimensionError("mux arms need equal widths")
        nsel = self.not_(sel)
        return [
            self.or_(self.and_(sel, t), self.and_(nsel, e))
            for t, e in zip(then_refs, else_refs)
        ]

    def mux_const(self, sel: int, bits: str, else_refs: Sequence[int]) -> list[int]:
        """Mux whose selected arm is a hardcoded word: bit 1 becomes OR with
        the selector, bit 0 an AND with its negation."""
        check_bits(bits, len(else_refs))
        nsel = self.not_(sel)
        out = []
        for b, e in zip(bits, else_refs):
            out.append(self.or_(sel, e) if b == "1" else self.and_(nsel, e))
        return out

    def embed(self, c: Circuit, input_refs: Sequence[int]) -> list[int]:
        """Append a copy of ``c`` reading its inputs from ``input_refs``;
        returns the references carrying its outputs."""
        if len(input_refs) != c.n:
            raise DimensionError("embedding needs one reference per input")
        refs: list[int] = []
        for g in c.gates:
            if g.op == OP_INPUT:
                refs.append(input_refs[g.a])
            elif g.op == OP_CONST:
                refs.append(self.const(g.a))
            elif g.op == OP_NOT:
                refs.append(self.not_(refs[g.a]))
            elif g.op == OP_AND:
                refs.append(self.and_(refs[g.a], refs[g.b]))
            elif g.op == OP_OR:
                refs.append(self.or_(refs[g.a], refs[g.b]))
        return [refs[r] for r in c.outputs]

    def circuit(self, outputs: Sequence[int], name: str = "c") -> Circuit:
        return Circuit(self.n, len(outputs), tuple(self.gates), tuple(outputs), name=name)


def redirect_zero_inputs(c: Circuit, target: str, name: str | None = None) -> Circuit:
    """Wrap ``c`` with an input stage mapping the all-zero input to the
    hardcoded ``target`` word and passing every other input through."""
    check_bits(target, c.n)
    b = GateBuilder(c.n)
    sel = b.eq_zero(b.inputs)
    staged = b.mux_const(sel, target, b.inputs)
    outs = b.embed(c, staged)
    return b.circuit(outs, name=name or c.name)


def combine_pair(succ: Circuit, valuation: Circuit, name: str = "pair") -> Circuit:
    """One circuit computing successor and valuation on shared inputs, with
    the successor bits first in the output word."""
    if succ.n != valuation.n or succ.n != succ.m:
        raise DimensionError("pair must share inputs and have a square successor")
    b = GateBuilder(succ.n)
    s_refs = b.embed(succ, b.inputs)
    v_refs = b.embed(valuation, b.inputs)
    return b.circuit(s_refs + v_refs, name=name)


def split_pair(combined: Circuit, value_bits: int) -> tuple[Circuit, Circuit]:
    """Slice a combined successor/valuation circuit back into the two views."""
    n = combined.n
    if combined.m != n + value_bits:
        raise DimensionError("combined circuit has the wrong output count")
    succ = project_outputs(combined, range(n))
    valuation = project_outputs(combined, range(n, n + value_bits))
    return succ, valuation


def freeze_stage(
    combined: Circuit,
    frozen_below: int,
    *,
    redirect_to: str | None = None,
    name: str = "frozen",
) -> Circuit:
    """Next combined circuit of the valuation-halving step.

    Drops the valuation's most significant bit, freezes every point whose
    full valuation is strictly below ``frozen_below`` (the successor outputs
    the point itself there), and optionally redirects the all-zero input to
    ``redirect_to`` before anything else runs.  The valuation is computed
    once and shared between the threshold comparison and the remaining
    valuation outputs, so the size grows only by the gadget overhead.
    """
    n = combined.n
    m = combined.m - n
    if m < 2:
        raise DimensionError("freezing needs at least two valuation bits")
    b = GateBuilder(n)
    if redirect_to is not None:
        check_bits(redirect_to, n)
        sel = b.eq_zero(b.inputs)
        staged = b.mux_const(sel, redirect_to, b.inputs)
    else:
        staged = list(b.inputs)
    refs = b.embed(combined, staged)
    s_refs, v_refs = refs[:n], refs[n:]
    frozen = b.lt_const(v_refs, from_int(frozen_below, m))
    succ_out = b.mux(frozen, staged, s_refs)
    return b.circuit(succ_out + v_refs[1:], name=name)


def evaluate_pair(combined: Circuit, x: str) -> tuple[str, str]:
    """Successor word and valuation word of a combined circuit at ``x``."""
    out = evaluate(combined, x)
    return out[: combined.n], out[combined.n :]
