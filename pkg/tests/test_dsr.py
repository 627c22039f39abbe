import random

import pytest

from tfnpkit import (
    IterInstance,
    IterWithSourceInstance,
    QueryTrace,
    dsr_iter,
    dsr_iter_with_source,
    dsr_sod,
    dsr_sod_with_source,
    enumerate_solutions,
    monitored,
    random_instance,
    run_dsr,
    self_oracle,
    size,
    verify_solution,
)
from tfnpkit.bits import from_int, ones, zeros
from tfnpkit.circuit import evaluate, pad_with_dead_gates
from tfnpkit.errors import MonitorViolation, OracleContractError
from tfnpkit.gadgets import redirect_zero_inputs
from tfnpkit.problems import instance_bits

from conftest import iter_tables, table_circuit


def test_worked_two_bit_chain():
    """Chain 00->01->10->11->11 from source 00: the lower query answers 0,
    the pivot is 10, the upper query answers 0, and the lift returns 10."""
    inst = IterWithSourceInstance(table_circuit([1, 2, 3, 3], 2), "00")
    trace = QueryTrace()
    answer = dsr_iter_with_source(inst, monitored(self_oracle(), "dsr", trace=trace))
    assert answer == "10"
    assert [r.answer for r in trace.records] == ["0", "0"]
    assert [r.query_dims[0] for r in trace.records] == [1, 1]


def test_upper_half_source_needs_one_query():
    inst = IterWithSourceInstance(table_circuit([0, 1, 3, 3], 2), "10")
    trace = QueryTrace()
    answer = dsr_iter_with_source(inst, monitored(self_oracle(), "dsr", trace=trace))
    assert verify_solution(inst, answer)
    assert len(trace.records) == 1
    assert answer == "1" + trace.records[0].answer


def test_iter_with_source_exhaustive_n2_and_dsr_mode():
    for table in iter_tables(2):
        c = table_circuit(table, 2)
        for s in range(4):
            if table[s] > s:
                inst = IterWithSourceInstance(c, from_int(s, 2))
                answer = dsr_iter_with_source(inst, monitored(self_oracle(), "dsr"))
                assert verify_solution(inst, answer)


def test_iter_exhaustive_n2():
    for table in iter_tables(2):
        if table[0] == 0:
            continue
        inst = IterInstance(table_circuit(table, 2))
        answer = dsr_iter(inst, monitored(self_oracle(), "circuit-dsr-poly-blowup"))
        assert verify_solution(inst, answer)


def test_sweep_n3_all_kinds(rng):
    for trial in range(150):
        for kind, fn in (
            ("iter", dsr_iter),
            ("iter-with-source", dsr_iter_with_source),
            ("sink-of-dag", dsr_sod),
            ("sink-of-dag-with-source", dsr_sod_with_source),
        ):
            inst = random_instance(kind, 3, rng, m=3)
            trace = QueryTrace()
            answer = fn(inst, monitored(self_oracle(), "circuit-dsr-poly-blowup", trace=trace))
            assert verify_solution(inst, answer)
            assert all(r.depth <= 4 for r in trace.records)


def test_lower_half_solution_needs_single_query(rng):
    # 00 -> 01 -> 01: both in the lower half, no pivot phase
    inst = IterInstance(table_circuit([1, 1, 0, 0], 2))
    trace = QueryTrace()
    answer = dsr_iter(inst, monitored(self_oracle(), "circuit-dsr-poly-blowup", trace=trace))
    assert answer == "00"
    assert len(trace.records) == 1


def test_single_valuation_bit_needs_no_oracle(rng):
    def forbidden(inst, parent=None):
        raise AssertionError("the one-bit case must not query")

    for _ in range(60):
        inst = random_instance("sink-of-dag-with-source", 3, rng, m=1)
        answer = dsr_sod_with_source(inst, forbidden)
        assert verify_solution(inst, answer)
        assert answer in (inst.source, evaluate(inst.succ, inst.source))


def test_direct_pass_branch(rng):
    # if the first sub-answer already verifies, it is returned unchanged
    hits = 0
    for _ in range(300):
        inst = random_instance("sink-of-dag-with-source", 2, rng, m=2)
        trace = QueryTrace()
        answer = dsr_sod_with_source(
            inst, monitored(self_oracle(), "circuit-dsr-poly-blowup", trace=trace)
        )
        assert verify_solution(inst, answer)
        if len(trace.records) == 1:
            assert answer == trace.records[0].answer
            hits += 1
    assert hits > 0


def test_query_count_at_most_two(rng):
    for kind in ("iter", "iter-with-source", "sink-of-dag", "sink-of-dag-with-source"):
        for _ in range(60):
            inst = random_instance(kind, 3, rng, m=2)
            trace = QueryTrace()
            run_dsr(inst, monitored(self_oracle(), "circuit-dsr-poly-blowup", trace=trace))
            top = [r for r in trace.records if r.depth == 0]
            assert len(top) <= 2


def test_trace_depth_matches_recursion(rng):
    for n in (2, 3, 4):
        for _ in range(20):
            inst = random_instance("iter-with-source", n, rng)
            trace = QueryTrace()
            dsr_iter_with_source(inst, monitored(self_oracle(), "dsr", trace=trace))
            if trace.records:
                assert trace.levels() <= n - 1


def test_redirect_gadget_cost_is_linear(rng):
    for n in (2, 4, 6, 8):
        for _ in range(10):
            c = __import__("tfnpkit").random_circuit(rng, n, n, 3 * n)
            target = "".join(rng.choice("01") for _ in range(n))
            wrapped = redirect_zero_inputs(c, target)
            overhead = size(wrapped) - size(c)
            assert overhead <= 8 * n + 6
            assert evaluate(wrapped, zeros(n)) == evaluate(c, target)
            probe = "1" + zeros(n - 1)
            assert evaluate(wrapped, probe) == evaluate(c, probe)


class AdversarialOracle:
    """Answers with a uniformly random valid solution of the queried
    sub-instance, never a path-derived one."""

    def __init__(self, seed):
        self.rng = random.Random(seed)

    def __call__(self, inst, parent=None):
        return self.rng.choice(enumerate_solutions(inst))


def test_soundness_under_adversarial_oracle(rng):
    for trial in range(400):
        kind = ("iter", "iter-with-source", "sink-of-dag", "sink-of-dag-with-source")[trial % 4]
        inst = random_instance(kind, 3, rng, m=3)
        answer = run_dsr(inst, AdversarialOracle(trial))
        assert verify_solution(inst, answer)


def test_lying_oracle_raises_contract_error(rng):
    def liar(inst, parent=None):
        n = instance_bits(inst)
        for cand in (zeros(n), ones(n)):
            if not verify_solution(inst, cand):
                return cand
        return zeros(n)

    raised = 0
    for _ in range(200):
        inst = random_instance("iter-with-source", 3, rng)
        try:
            answer = dsr_iter_with_source(inst, liar)
            assert verify_solution(inst, answer)
        except OracleContractError:
            raised += 1
    assert raised > 0


def test_monitor_boundary_equal_shape_is_violation(rng):
    inst = random_instance("iter", 3, rng)
    mon = monitored(lambda sub, parent=None: "000", "circuit-dsr")
    with pytest.raises(MonitorViolation):
        mon.check(inst, inst)  # same input/output shape must trip the check


def test_monitor_flags_inflated_queries(rng):
    inst = random_instance("iter", 3, rng)
    mon = monitored(self_oracle(), "circuit-dsr-poly-blowup", c=2)
    shrunk = __import__("tfnpkit").restrict_output(
        __import__("tfnpkit").restrict_input(inst.succ, 1, 0), 1
    )
    mon.check(inst, IterInstance(shrunk))  # honest restriction passes
    bloated = IterInstance(pad_with_dead_gates(shrunk, (3 * 3) ** 3))
    with pytest.raises(MonitorViolation):
        mon.check(inst, bloated)


def test_monitored_self_oracle_reports_zero_violations(rng):
    # a violation raises, so a clean pass is the assertion
    for _ in range(80):
        inst = random_instance("sink-of-dag", 3, rng, m=2)
        trace = QueryTrace()
        answer = dsr_sod(inst, monitored(self_oracle(), "circuit-dsr-poly-blowup", trace=trace))
        assert verify_solution(inst, answer)
