"""Boolean circuit IR: evaluation, layering, restrictions, and netlist text I/O.

A circuit is an immutable list of gates in topological order over the
alphabet {INPUT, CONST, NOT, AND, OR}; operands are integer references to
strictly earlier gates, and the output list names the gates whose values
form the output word.

The canonical size measure counts logic gates (NOT/AND/OR) plus wires,
where every input bit contributes one port wire, every gate operand one
wire, and every output one wire.  Under this measure removing an input
(with constant propagation) and removing an output (with dead-gate
elimination) both strictly shrink the circuit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .bits import check_bits, from_int
from .errors import DimensionError, NetlistError, RestrictionError

OP_INPUT = "input"
OP_CONST = "const"
OP_NOT = "not"
OP_AND = "and"
OP_OR = "or"

_BINARY = (OP_AND, OP_OR)
_LOGIC = (OP_NOT, OP_AND, OP_OR)


@dataclass(frozen=True, slots=True)
class Gate:
    """One gate; ``a`` is the input index for INPUT, the bit for CONST,
    and the first operand reference otherwise.  ``b`` is the second operand
    for AND/OR and unused elsewhere."""

    op: str
    a: int = 0
    b: int = 0


def INPUT(k: int) -> Gate:
    return Gate(OP_INPUT, k)


def CONST(bit: int) -> Gate:
    return Gate(OP_CONST, bit)


def NOT(a: int) -> Gate:
    return Gate(OP_NOT, a)


def AND(a: int, b: int) -> Gate:
    return Gate(OP_AND, a, b)


def OR(a: int, b: int) -> Gate:
    return Gate(OP_OR, a, b)


@dataclass(frozen=True)
class Circuit:
    n: int
    m: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]
    name: str = field(default="c", compare=False)

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise DimensionError(f"bad circuit shape n={self.n}, m={self.m}")
        for idx, g in enumerate(self.gates):
            if g.op == OP_INPUT:
                if not 0 <= g.a < self.n:
                    raise DimensionError(f"gate {idx}: input index {g.a} out of range")
            elif g.op == OP_CONST:
                if g.a not in (0, 1):
                    raise DimensionError(f"gate {idx}: constant must be 0 or 1")
            elif g.op in _LOGIC:
                refs = (g.a,) if g.op == OP_NOT else (g.a, g.b)
                for r in refs:
                    if not 0 <= r < idx:
                        raise DimensionError(f"gate {idx}: reference {r} is not an earlier gate")
            else:
                raise DimensionError(f"gate {idx}: unknown op {g.op!r}")
        if len(self.outputs) != self.m:
            raise DimensionError(f"expected {self.m} outputs, got {len(self.outputs)}")
        for r in self.outputs:
            if not 0 <= r < len(self.gates):
                raise DimensionError(f"output reference {r} out of range")


def size(c: Circuit) -> int:
    """Logic gate count plus wire count (input ports, operands, outputs)."""
    gates = 0
    wires = c.n + len(c.outputs)
    for g in c.gates:
        if g.op == OP_NOT:
            gates += 1
            wires += 1
        elif g.op in _BINARY:
            gates += 1
            wires += 2
    return gates + wires


def layers(c: Circuit) -> tuple[int, ...]:
    """Layer of each gate: inputs and constants sit at layer 1, and every
    other gate strictly above all of its operands.  Single linear pass."""
    out = []
    for g in c.gates:
        if g.op in (OP_INPUT, OP_CONST):
            out.append(1)
        elif g.op == OP_NOT:
            out.append(out[g.a] + 1)
        else:
            out.append(max(out[g.a], out[g.b]) + 1)
    return tuple(out)


def evaluate(c: Circuit, x: str) -> str:
    check_bits(x, c.n)
    vals = []
    for g in c.gates:
        if g.op == OP_INPUT:
            vals.append(x[g.a] == "1")
        elif g.op == OP_CONST:
            vals.append(bool(g.a))
        elif g.op == OP_NOT:
            vals.append(not vals[g.a])
        elif g.op == OP_AND:
            vals.append(vals[g.a] and vals[g.b])
        else:
            vals.append(vals[g.a] or vals[g.b])
    return "".join("1" if vals[r] else "0" for r in c.outputs)


_INPUT_MASKS: dict[tuple[int, int], int] = {}


def _input_mask(n: int, k: int) -> int:
    """Bit-parallel value of input k over all 2^n assignments; bit x of the
    mask is the k-th (most significant first) bit of x."""
    key = (n, k)
    cached = _INPUT_MASKS.get(key)
    if cached is not None:
        return cached
    block = 1 << (n - 1 - k)
    piece = (1 << block) - 1
    mask = 0
    for p in range(1 << k):
        mask |= piece << (2 * p * block + block)
    _INPUT_MASKS[key] = mask
    return mask


def output_masks(c: Circuit) -> list[int]:
    """For each output, the integer whose bit x is the output on input value x.

    Evaluates the whole truth table in one pass using word-parallel integer
    operations; usable for n up to ~16.
    """
    full = (1 << (1 << c.n)) - 1
    vals: list[int] = []
    for g in c.gates:
        if g.op == OP_INPUT:
            vals.append(_input_mask(c.n, g.a))
        elif g.op == OP_CONST:
            vals.append(full if g.a else 0)
        elif g.op == OP_NOT:
            vals.append(full ^ vals[g.a])
        elif g.op == OP_AND:
            vals.append(vals[g.a] & vals[g.b])
        else:
            vals.append(vals[g.a] | vals[g.b])
    return [vals[r] for r in c.outputs]


def eval_table(c: Circuit) -> list[int]:
    """Truth table as integers: entry x is the m-bit output on input value x."""
    masks = output_masks(c)
    table = []
    for x in range(1 << c.n):
        v = 0
        for mask in masks:
            v = (v << 1) | ((mask >> x) & 1)
        table.append(v)
    return table


def restrict_input(c: Circuit, position: int, bit: int) -> Circuit:
    """Remove input ``position`` (1-based) by fixing it to ``bit`` and
    propagating the constant forward.

    NOT of a constant folds to a constant; AND/OR with two constant operands
    fold; AND with a constant 0 (OR with 1) short-circuits to the constant;
    AND with a constant 1 (OR with 0) passes the other operand through.
    Constants surviving to an output are materialised as CONST gates.
    """
    if not 1 <= position <= c.n:
        raise RestrictionError(f"input position {position} out of range 1..{c.n}")
    if bit not in (0, 1):
        raise RestrictionError("restriction bit must be 0 or 1")
    k0 = position - 1
    gates: list[Gate] = []

    def emit(g: Gate) -> tuple[str, int]:
        gates.append(g)
        return ("g", len(gates) - 1)

    vals: list[tuple[str, int]] = []
    for g in c.gates:
        if g.op == OP_INPUT:
            if g.a == k0:
                vals.append(("c", bit))
            else:
                vals.append(emit(INPUT(g.a - 1 if g.a > k0 else g.a)))
        elif g.op == OP_CONST:
            vals.append(emit(g))
        elif g.op == OP_NOT:
            va = vals[g.a]
            vals.append(("c", va[1] ^ 1) if va[0] == "c" else emit(NOT(va[1])))
        else:
            va, vb = vals[g.a], vals[g.b]
            short = 0 if g.op == OP_AND else 1
            if va[0] == "c" and vb[0] == "c":
                folded = (va[1] & vb[1]) if g.op == OP_AND else (va[1] | vb[1])
                vals.append(("c", folded))
            elif va[0] == "c":
                vals.append(("c", short) if va[1] == short else vb)
            elif vb[0] == "c":
                vals.append(("c", short) if vb[1] == short else va)
            else:
                vals.append(emit(Gate(g.op, va[1], vb[1])))

    const_refs: dict[int, int] = {}
    outs = []
    for r in c.outputs:
        v = vals[r]
        if v[0] == "c":
            if v[1] not in const_refs:
                const_refs[v[1]] = emit(CONST(v[1]))[1]
            outs.append(const_refs[v[1]])
        else:
            outs.append(v[1])
    return Circuit(c.n - 1, c.m, tuple(gates), tuple(outs), name=c.name)


def project_outputs(c: Circuit, keep: Sequence[int]) -> Circuit:
    """Keep exactly the 0-based output indices in ``keep`` (in the given
    order), removing gates that no longer feed any remaining output.
    Input gates are always kept so the input arity is preserved."""
    refs = []
    for j in keep:
        if not 0 <= j < c.m:
            raise RestrictionError(f"output index {j} out of range 0..{c.m - 1}")
        refs.append(c.outputs[j])
    if not refs:
        raise RestrictionError("a circuit must keep at least one output")
    live = [False] * len(c.gates)
    for r in refs:
        live[r] = True
    for idx in range(len(c.gates) - 1, -1, -1):
        if live[idx]:
            g = c.gates[idx]
            if g.op == OP_NOT:
                live[g.a] = True
            elif g.op in _BINARY:
                live[g.a] = True
                live[g.b] = True
    remap: dict[int, int] = {}
    gates: list[Gate] = []
    for idx, g in enumerate(c.gates):
        if g.op == OP_INPUT or live[idx]:
            if g.op == OP_NOT:
                g = NOT(remap[g.a])
            elif g.op in _BINARY:
                g = Gate(g.op, remap[g.a], remap[g.b])
            remap[idx] = len(gates)
            gates.append(g)
    outs = tuple(remap[r] for r in refs)
    return Circuit(c.n, len(refs), tuple(gates), outs, name=c.name)


def restrict_output(c: Circuit, position: int) -> Circuit:
    """Remove output ``position`` (1-based) and delete the gates that fed
    only the removed output."""
    if c.m < 2:
        raise RestrictionError("cannot restrict the only output")
    if not 1 <= position <= c.m:
        raise RestrictionError(f"output position {position} out of range 1..{c.m}")
    keep = [j for j in range(c.m) if j != position - 1]
    return project_outputs(c, keep)


def pad_with_dead_gates(c: Circuit, count: int) -> Circuit:
    """Append ``count`` NOT gates that feed nothing; the behaviour is
    unchanged but the size measure grows.  Used to demonstrate monitor
    violations."""
    if count < 0:
        raise ValueError("count must be non-negative")
    gates = list(c.gates)
    ref = len(gates) - 1
    for _ in range(count):
        gates.append(NOT(ref))
        ref = len(gates) - 1
    return Circuit(c.n, c.m, tuple(gates), c.outputs, name=c.name)


def identity_circuit(n: int, name: str = "id") -> Circuit:
    gates = tuple(INPUT(k) for k in range(n))
    return Circuit(n, n, gates, tuple(range(n)), name=name)


def constant_circuit(n: int, bits: str, name: str = "k") -> Circuit:
    check_bits(bits)
    gates = [INPUT(k) for k in range(n)]
    outs = []
    refs: dict[str, int] = {}
    for b in bits:
        if b not in refs:
            gates.append(CONST(int(b)))
            refs[b] = len(gates) - 1
        outs.append(refs[b])
    return Circuit(n, len(bits), tuple(gates), tuple(outs), name=name)


def circuit_from_table(table: Sequence[int], n: int, m: int, name: str = "t") -> Circuit:
    """Synthesise a circuit computing the given truth table (entry x is the
    m-bit output for input value x) as a shared-minterm multiplexer."""
    if len(table) != 1 << n:
        raise DimensionError(f"table must have {1 << n} entries")
    for v in table:
        if not 0 <= v < 1 << m:
            raise DimensionError(f"table entry {v} does not fit in {m} bits")
    gates: list[Gate] = [INPUT(k) for k in range(n)]
    neg = []
    for k in range(n):
        gates.append(NOT(k))
        neg.append(len(gates) - 1)
    minterm = []
    for x in range(1 << n):
        lits = [(k if (x >> (n - 1 - k)) & 1 else neg[k]) for k in range(n)]
        acc = lits[0]
        for lit in lits[1:]:
            gates.append(AND(acc, lit))
            acc = len(gates) - 1
        minterm.append(acc)
    outs = []
    zero_ref = None
    for j in range(m):
        rows = [x for x in range(1 << n) if (table[x] >> (m - 1 - j)) & 1]
        if not rows:
            if zero_ref is None:
                gates.append(CONST(0))
                zero_ref = len(gates) - 1
            outs.append(zero_ref)
            continue
        acc = minterm[rows[0]]
        for x in rows[1:]:
            gates.append(OR(acc, minterm[x]))
            acc = len(gates) - 1
        outs.append(acc)
    return Circuit(n, m, tuple(gates), tuple(outs), name=name)


def random_circuit(rng, n: int, m: int, gate_count: int, name: str = "r") -> Circuit:
    """A random circuit whose gate list starts with all inputs, followed by
    ``gate_count`` random logic/constant gates; outputs reference random gates."""
    gates: list[Gate] = [INPUT(k) for k in range(n)]
    for _ in range(gate_count):
        top = len(gates)
        op = rng.choice((OP_NOT, OP_AND, OP_AND, OP_OR, OP_OR, OP_CONST))
        if op == OP_CONST:
            gates.append(CONST(rng.randrange(2)))
        elif op == OP_NOT:
            gates.append(NOT(rng.randrange(top)))
        else:
            gates.append(Gate(op, rng.randrange(top), rng.randrange(top)))
    outs = tuple(rng.randrange(len(gates)) for _ in range(m))
    return Circuit(n, m, tuple(gates), outs, name=name)


def successor_table(c: Circuit) -> list[str]:
    """Truth table of an n-to-m circuit as bit strings indexed by input value."""
    return [from_int(v, c.m) for v in eval_table(c)]


# --- netlist text format ---------------------------------------------------
#
#   circuit <name> inputs=<n> outputs=<m>
#   g<id> = INPUT <k> | CONST <0|1> | NOT g<a> | AND g<a> g<b> | OR g<a> g<b>
#   output <j> = g<id>
#
# Lines are independent; '#' starts a comment; gate ids must be defined
# before they are referenced.

_HEADER_RE = re.compile(r"^circuit\s+(\S+)\s+inputs=(\d+)\s+outputs=(\d+)$")
_GATE_RE = re.compile(r"^g(\d+)\s*=\s*([A-Z]+)\s*(.*)$")
_OUTPUT_RE = re.compile(r"^output\s+(\d+)\s*=\s*g(\d+)$")


def emit_netlist(c: Circuit) -> str:
    lines = [f"circuit {c.name} inputs={c.n} outputs={c.m}"]
    for idx, g in enumerate(c.gates):
        if g.op == OP_INPUT:
            lines.append(f"g{idx} = INPUT {g.a}")
        elif g.op == OP_CONST:
            lines.append(f"g{idx} = CONST {g.a}")
        elif g.op == OP_NOT:
            lines.append(f"g{idx} = NOT g{g.a}")
        else:
            lines.append(f"g{idx} = {g.op.upper()} g{g.a} g{g.b}")
    for j, r in enumerate(c.outputs):
        lines.append(f"output {j} = g{r}")
    return "\n".join(lines) + "\n"


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_netlist(text: str, first_line: int = 1) -> Circuit:
    rows: list[tuple[int, str]] = []
    for offset, raw in enumerate(text.splitlines()):
        stripped = _strip(raw)
        if stripped:
            rows.append((first_line + offset, stripped))
    if not rows:
        raise NetlistError("empty netlist", first_line)
    lineno, header = rows[0]
    match = _HEADER_RE.match(header)
    if not match:
        raise NetlistError(f"bad circuit header: {header!r}", lineno)
    name, n, m = match.group(1), int(match.group(2)), int(match.group(3))

    declared: dict[int, int] = {}
    for pos, (lineno, row) in enumerate(rows[1:], start=1):
        g = _GATE_RE.match(row)
        if g:
            gid = int(g.group(1))
            if gid in declared:
                raise NetlistError(f"duplicate gate id g{gid}", lineno)
            declared[gid] = pos

    gates: list[Gate] = []
    index_of: dict[int, int] = {}
    outputs: dict[int, int] = {}

    def resolve(gid: int, pos: int, lineno: int) -> int:
        if gid not in declared:
            raise NetlistError(f"dangling reference g{gid}", lineno)
        if declared[gid] >= pos:
            raise NetlistError(f"forward reference g{gid}", lineno)
        return index_of[gid]

    for pos, (lineno, row) in enumerate(rows[1:], start=1):
        g = _GATE_RE.match(row)
        if g:
            gid, op, rest = int(g.group(1)), g.group(2), g.group(3).strip()
            args = rest.split()
            if op == "INPUT":
                if len(args) != 1 or not args[0].isdigit():
                    raise NetlistError(f"bad INPUT arguments: {rest!r}", lineno)
                k = int(args[0])
                if not 0 <= k < n:
                    raise NetlistError(f"input index {k} out of range", lineno)
                gate = INPUT(k)
            elif op == "CONST":
                if len(args) != 1 or args[0] not in ("0", "1"):
                    raise NetlistError(f"bad CONST arguments: {rest!r}", lineno)
                gate = CONST(int(args[0]))
            elif op in ("NOT", "AND", "OR"):
                want = 1 if op == "NOT" else 2
                if len(args) != want or not all(a.startswith("g") and a[1:].isdigit() for a in args):
                    raise NetlistError(f"bad {op} arguments: {rest!r}", lineno)
                refs = [resolve(int(a[1:]), pos, lineno) for a in args]
                gate = NOT(refs[0]) if op == "NOT" else Gate(op.lower(), refs[0], refs[1])
            else:
                raise NetlistError(f"unknown gate op {op!r}", lineno)
            index_of[gid] = len(gates)
            gates.append(gate)
            continue
        o = _OUTPUT_RE.match(row)
        if o:
            j, gid = int(o.group(1)), int(o.group(2))
            if not 0 <= j < m:
                raise NetlistError(f"output index {j} out of range", lineno)
            if j in outputs:
                raise NetlistError(f"duplicate output {j}", lineno)
            outputs[j] = resolve(gid, pos, lineno)
            continue
        raise NetlistError(f"unparseable line: {row!r}", lineno)

    missing = [j for j in range(m) if j not in outputs]
    if missing:
        raise NetlistError(f"missing output declarations: {missing}", rows[-1][0])
    return Circuit(n, m, tuple(gates), tuple(outputs[j] for j in range(m)), name=name)
