import numpy as np
import pytest

from qmlscale.circuits import Circuit, compose, count_gates, depth, inverse
from qmlscale.generators import (EntanglementStrategy, build_family,
                                 entanglement_pairs, ghz_circuit,
                                 kernel_circuit, parse_family, qnn_circuit,
                                 ttn_circuit, two_local, zz_feature_map)
from qmlscale.oracle import phases_match, simulate_unitary

L, C, S, P = (EntanglementStrategy.LINEAR, EntanglementStrategy.CIRCULAR,
              EntanglementStrategy.SCA, EntanglementStrategy.PAIRWISE)


def flat(sublayers):
    return [p for sub in sublayers for p in sub]


class TestEntanglementPairs:
    def test_linear(self):
        assert entanglement_pairs(L, 4, 0) == [[(0, 1), (1, 2), (2, 3)]]
        assert entanglement_pairs(L, 4, 3) == entanglement_pairs(L, 4, 0)

    def test_circular_long_edge_first(self):
        assert entanglement_pairs(C, 4, 0) == [[(3, 0), (0, 1), (1, 2), (2, 3)]]

    def test_pairwise_sublayers(self):
        assert entanglement_pairs(P, 5, 0) == [[(0, 1), (2, 3)], [(1, 2), (3, 4)]]

    def test_sca_golden(self):
        # frozen convention: shift by block, swap directions + reverse on odd blocks
        assert flat(entanglement_pairs(S, 4, 0)) == [(3, 0), (0, 1), (1, 2), (2, 3)]
        assert flat(entanglement_pairs(S, 4, 1)) == [(2, 1), (1, 0), (0, 3), (3, 2)]

    def test_sca_period(self):
        assert entanglement_pairs(S, 5, 2) == entanglement_pairs(S, 5, 12)

    def test_counts_per_block(self):
        for n in range(3, 12):
            assert len(flat(entanglement_pairs(L, n, 0))) == n - 1
            assert len(flat(entanglement_pairs(C, n, 0))) == n
            for b in range(4):
                assert len(flat(entanglement_pairs(S, n, b))) == n
            assert len(flat(entanglement_pairs(P, n, 0))) == n - 1

    def test_n2_wrap_dedup(self):
        assert len(flat(entanglement_pairs(C, 2, 0))) == 1
        assert len(flat(entanglement_pairs(S, 2, 1))) == 1

    def test_too_small(self):
        with pytest.raises(ValueError):
            entanglement_pairs(L, 1, 0)


class TestZZFeatureMap:
    def test_structure_n3_linear(self):
        c = zz_feature_map(3, L, 1, [0.1, 0.2, 0.3])
        kinds = [g.kind for g in c.gates]
        assert kinds == ["H"] * 3 + ["P"] * 3 + ["CX", "P", "CX", "CX", "P", "CX"]
        assert count_gates(c).two_qubit == 4
        assert depth(c) == 8

    def test_cx_double_of_single_twolocal_block(self):
        for strat in (L, C, S, P):
            n = 6
            zz = zz_feature_map(n, strat, 1, [0.1] * n)
            tl = two_local(n, strat, 1, [0.1] * (2 * n))
            assert count_gates(zz).two_qubit == 2 * count_gates(tl).two_qubit

    def test_n2_circular_degenerate(self):
        c = zz_feature_map(2, C, 1, [0.1, 0.2])
        assert count_gates(c).two_qubit == 2

    def test_data_length_checked(self):
        with pytest.raises(ValueError):
            zz_feature_map(3, L, 1, [0.1])

    def test_reps_stack(self):
        c1 = zz_feature_map(4, L, 1, [0.1] * 4)
        c2 = zz_feature_map(4, L, 2, [0.1] * 4)
        assert len(c2) == 2 * len(c1)


class TestTwoLocal:
    def test_counts_linear(self):
        c = two_local(4, L, 2, [0.1] * 12)
        counts = count_gates(c)
        assert counts.two_qubit == 6
        assert counts.total - counts.two_qubit == 12

    def test_pairwise_single_rep(self):
        c = two_local(4, P, 1, [0.1] * 8)
        assert count_gates(c).two_qubit == 3

    def test_no_reps(self):
        c = two_local(4, L, 0, [0.1] * 4)
        assert count_gates(c).two_qubit == 0
        assert len(c) == 4

    def test_param_length_checked(self):
        with pytest.raises(ValueError):
            two_local(4, L, 2, [0.1] * 11)

    def test_sca_blocks_differ(self):
        c = two_local(5, S, 2, [0.1] * 15)
        cxs = [g.qubits for g in c.gates if g.kind == "CX"]
        assert cxs[:5] != cxs[5:]


class TestKernel:
    def test_cx_count(self):
        c = kernel_circuit(3, L, [0.1, 0.2, 0.3], [0.4, 0.5, 0.6])
        assert count_gates(c).two_qubit == 8

    def test_same_data_gives_identity(self):
        x = [0.3, 0.7, 1.1]
        c = kernel_circuit(3, C, x, x)
        u = simulate_unitary(c)
        assert phases_match(u, np.eye(8, dtype=complex), 1e-9)

    def test_depth_bound(self):
        x1, x2 = [0.1] * 4, [0.9] * 4
        fmap = zz_feature_map(4, P, 1, x1)
        c = kernel_circuit(4, P, x1, x2)
        assert depth(c) <= 2 * depth(fmap)


class TestQnn:
    def test_cx_count_n10(self):
        assert count_gates(qnn_circuit(10, L)).two_qubit == 36

    def test_matches_kernel_budget(self):
        kern = build_family("kernel-linear", 10)
        qnn = build_family("qnn-linear", 10)
        assert count_gates(kern).two_qubit == count_gates(qnn).two_qubit == 36

    def test_smallest(self):
        assert count_gates(qnn_circuit(2, L)).two_qubit == 4


class TestTtn:
    def test_structure_n8(self):
        c = ttn_circuit(8)
        cx = [tuple(sorted(g.qubits)) for g in c.gates if g.kind == "CX"]
        assert cx == [(0, 1), (2, 3), (4, 5), (6, 7), (0, 2), (4, 6), (0, 4)]
        assert count_gates(c).two_qubit == 7
        assert depth(c) == 7

    def test_cx_direction_down_tree(self):
        c = ttn_circuit(4)
        cx = [g.qubits for g in c.gates if g.kind == "CX"]
        assert cx == [(1, 0), (3, 2), (2, 0)]

    def test_minimal(self):
        c = ttn_circuit(2)
        assert count_gates(c).two_qubit == 1
        assert depth(c) == 3

    def test_logarithmic_depth(self):
        assert depth(ttn_circuit(1024)) == 21
        assert depth(ttn_circuit(512)) == 19

    def test_power_of_two_required(self):
        with pytest.raises(ValueError):
            ttn_circuit(6)

    def test_matches_ghz_budget(self):
        for n in (4, 8, 16):
            assert count_gates(ttn_circuit(n)).two_qubit == \
                count_gates(ghz_circuit(n)).two_qubit == n - 1


class TestGhz:
    def test_small(self):
        c = ghz_circuit(4)
        assert count_gates(c).two_qubit == 3
        assert depth(c) == 4

    def test_large(self):
        assert count_gates(ghz_circuit(100)).two_qubit == 99


class TestFamilies:
    def test_parse(self):
        assert parse_family("kernel-sca") == ("kernel", S)
        assert parse_family("ghz") == ("ghz", None)
        with pytest.raises(ValueError):
            parse_family("kernel-zigzag")
        with pytest.raises(ValueError):
            parse_family("vqe")

    def test_deterministic_without_seed(self):
        for name in ("kernel-circular", "qnn-sca", "ttn", "ghz"):
            n = 8
            assert build_family(name, n) == build_family(name, n)

    def test_deterministic_with_seed(self):
        a = build_family("qnn-linear", 6, seed=9)
        b = build_family("qnn-linear", 6, seed=9)
        c = build_family("qnn-linear", 6, seed=10)
        assert a == b
        assert a != c

    def test_kernel_default_data_vectors_differ(self):
        # identical x1/x2 would let the optimizer cancel the whole circuit
        c = build_family("kernel-linear", 3)
        u = simulate_unitary(c)
        assert not phases_match(u, np.eye(8, dtype=complex), 1e-6)

    def test_all_families_valid(self):
        from qmlscale.generators import FAMILY_NAMES
        for name in FAMILY_NAMES:
            c = build_family(name, 8)
            assert isinstance(c, Circuit)
            assert c.n_qubits == 8
