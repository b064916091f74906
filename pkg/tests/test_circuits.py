import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmlscale.circuits import (Circuit, Gate, GateCounts, GateDurations,
                               compose, count_gates, depth, dumps, inverse,
                               schedule_asap)
from qmlscale.oracle import random_circuit, phases_match, simulate_unitary

T = GateDurations(t_1q=7.9e-9, t_2q=30e-9)


def ghz_gates(n):
    return (Gate.h(0),) + tuple(Gate.cx(i, i + 1) for i in range(n - 1))


class TestGateValidation:
    def test_param_arity(self):
        with pytest.raises(ValueError):
            Gate("H", (0,), (0.1,))
        with pytest.raises(ValueError):
            Gate("RY", (0,))
        with pytest.raises(ValueError):
            Gate("U3", (0,), (0.1, 0.2))

    def test_distinct_qubits(self):
        with pytest.raises(ValueError):
            Gate("CX", (1, 1))

    def test_qubit_count(self):
        with pytest.raises(ValueError):
            Gate("CX", (0,))
        with pytest.raises(ValueError):
            Gate("H", (0, 1))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Gate("T", (0,))

    def test_out_of_range_qubit(self):
        with pytest.raises(ValueError):
            Circuit(2, (Gate.h(5),))


class TestDepth:
    def test_empty(self):
        assert depth(Circuit(5)) == 0

    def test_ghz4(self):
        assert depth(Circuit(4, ghz_gates(4))) == 4

    def test_parallel_hadamards(self):
        assert depth(Circuit(3, (Gate.h(0), Gate.h(1), Gate.h(2)))) == 1


class TestCountGates:
    def test_ghz4(self):
        assert count_gates(Circuit(4, ghz_gates(4))) == GateCounts(4, 3, 0)

    def test_empty(self):
        c = count_gates(Circuit(3))
        assert (c.total, c.two_qubit, c.swap) == (0, 0, 0)

    def test_swap_counted_twice(self):
        c = count_gates(Circuit(3, (Gate.cx(0, 1), Gate.swap(1, 2))))
        assert (c.total, c.two_qubit, c.swap) == (2, 2, 1)


class TestInverse:
    def test_h_self_inverse(self):
        c = Circuit(1, (Gate.h(0),))
        assert inverse(c).gates == (Gate.h(0),)

    def test_reversal_and_negation(self):
        c = Circuit(2, (Gate.ry(1, 0.3), Gate.cx(0, 1)))
        assert inverse(c).gates == (Gate.cx(0, 1), Gate.ry(1, -0.3))

    def test_u3_inverse_swaps_phi_lambda(self):
        c = Circuit(1, (Gate.u3(0, 0.1, 0.2, 0.3),))
        assert inverse(c).gates == (Gate.u3(0, -0.1, -0.3, -0.2),)

    def test_involution_on_random_circuits(self, rng):
        for _ in range(100):
            c = random_circuit(rng, int(rng.integers(1, 6)))
            assert inverse(inverse(c)) == c

    def test_preserves_counts(self, rng):
        for _ in range(20):
            c = random_circuit(rng, 4)
            a, b = count_gates(c), count_gates(inverse(c))
            assert (a.total, a.two_qubit) == (b.total, b.two_qubit)

    def test_unitary_roundtrip_is_identity(self, rng):
        for _ in range(25):
            n = int(rng.integers(1, 6))
            c = random_circuit(rng, n)
            u = simulate_unitary(compose(c, inverse(c)))
            assert phases_match(u, np.eye(1 << n, dtype=complex), 1e-9)


class TestCompose:
    def test_identity(self):
        c = Circuit(3, ghz_gates(3))
        assert compose(Circuit(3), c) == c

    def test_gate_count_adds(self):
        c = Circuit(4, ghz_gates(4))
        assert len(compose(c, inverse(c))) == 8

    def test_mismatch_raises(self):
        with pytest.raises(ValueError):
            compose(Circuit(2), Circuit(3))

    @given(st.integers(0, 400))
    @settings(max_examples=30, deadline=None)
    def test_depth_subadditive(self, seed):
        r = np.random.default_rng(seed)
        a, b = random_circuit(r, 4), random_circuit(r, 4)
        assert depth(compose(a, b)) <= depth(a) + depth(b)


class TestScheduleAsap:
    def test_single_slice_1q(self):
        s = schedule_asap(Circuit(2, (Gate.h(0), Gate.h(1))), T)
        assert len(s.timeslices) == 1
        assert s.timeslices[0].duration == pytest.approx(7.9e-9)

    def test_sequential_dependency(self):
        s = schedule_asap(Circuit(2, (Gate.h(0), Gate.cx(0, 1))), T)
        assert [t.duration for t in s.timeslices] == pytest.approx([7.9e-9, 30e-9])
        assert s.total_time == pytest.approx(37.9e-9)

    def test_slowest_gate_sets_duration(self):
        s = schedule_asap(Circuit(3, (Gate.h(0), Gate.cx(1, 2))), T)
        assert len(s.timeslices) == 1
        assert s.timeslices[0].duration == pytest.approx(30e-9)

    def test_matches_depth_and_partitions_gates(self, rng):
        for _ in range(30):
            c = random_circuit(rng, 5)
            s = schedule_asap(c, T)
            assert len(s.timeslices) == depth(c)
            seen = [i for ts in s.timeslices for i in ts.gate_indices]
            assert sorted(seen) == list(range(len(c)))

    def test_slices_have_disjoint_qubits(self, rng):
        for _ in range(30):
            c = random_circuit(rng, 5)
            for ts in schedule_asap(c, T).timeslices:
                qubits = [q for i in ts.gate_indices for q in c.gates[i].qubits]
                assert len(qubits) == len(set(qubits))

    def test_bad_durations(self):
        with pytest.raises(ValueError):
            GateDurations(0.0, 1.0)


class TestDumps:
    def test_format(self):
        c = Circuit(2, (Gate.h(0), Gate.cx(0, 1), Gate.ry(1, 0.25),
                        Gate.u3(0, math.pi, 0.0, -0.5)))
        assert dumps(c).splitlines() == [
            "H 0",
            "CX 0,1",
            "RY 1 0.25",
            "U3 0 3.14159265359,0,-0.5",
        ]

    def test_empty(self):
        assert dumps(Circuit(1)) == ""
