"""Cube graph, hyperoctahedral group, and cycle representation properties."""

from __future__ import annotations

import random
from math import factorial

import pytest

from graycensus.cube import (
    MAX_DIMENSION,
    CubeGraph,
    CycleEdgeSet,
    DeltaSequence,
    SignedPermutation,
    all_automorphisms,
    automorphism_group_order,
    build_cube,
    delta_to_edge_set,
    edge_set_to_deltas,
    hamilton_orientations_per_partition,
    random_automorphism,
    validate_delta,
    verify_cycle_partition,
)
from oracles import find_two_cycle_decomposition_q4, naive_hamiltonian_cycle_edge_sets

Q3_DELTAS = DeltaSequence(3, (1, 2, 1, 3, 1, 2, 1, 3))


def edge_sets(n: int) -> list[CycleEdgeSet]:
    return [CycleEdgeSet(n, es) for es in naive_hamiltonian_cycle_edge_sets(n)]


class TestCubeGraph:
    def test_sizes(self) -> None:
        for n in range(1, 7):
            g = build_cube(n)
            assert g.num_vertices == 2 ** n
            assert g.num_edges == n * 2 ** (n - 1)
            assert len(list(g.edges())) == g.num_edges

    def test_adjacency_and_directions(self) -> None:
        g = CubeGraph(3)
        assert sorted(g.neighbors(0)) == [1, 2, 4]
        assert g.is_edge(5, 7) and not g.is_edge(3, 4)
        assert g.direction(0, 4) == 3
        with pytest.raises(ValueError):
            g.direction(3, 4)

    def test_dimension_cap(self) -> None:
        with pytest.raises(ValueError):
            CubeGraph(MAX_DIMENSION + 1)
        with pytest.raises(ValueError):
            CubeGraph(0)


class TestSignedPermutation:
    def test_composition_homomorphism(self) -> None:
        # apply(g o h, v) = apply(g, apply(h, v)) for random pairs
        rng = random.Random(7)
        for n in (2, 3, 4):
            for _ in range(25):
                g = random_automorphism(n, rng)
                h = random_automorphism(n, rng)
                gh = g.compose(h)
                for v in range(1 << n):
                    assert gh.apply_to_vertex(v) == g.apply_to_vertex(h.apply_to_vertex(v))

    def test_inverse_roundtrip(self) -> None:
        rng = random.Random(11)
        for n in (2, 3, 4):
            for _ in range(25):
                g = random_automorphism(n, rng)
                gi = g.inverse()
                for v in range(1 << n):
                    assert gi.apply_to_vertex(g.apply_to_vertex(v)) == v

    def test_group_order(self) -> None:
        # all 2^n * n! elements give distinct vertex maps
        for n in (1, 2, 3, 4):
            maps = {g.vertex_map() for g in all_automorphisms(n)}
            assert len(maps) == automorphism_group_order(n) == 2 ** n * factorial(n)

    def test_edges_stay_edges(self) -> None:
        rng = random.Random(13)
        g = random_automorphism(4, rng)
        cube = CubeGraph(4)
        for e in cube.edges():
            u, v = g.apply_to_edge(e)
            assert cube.is_edge(u, v)

    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            SignedPermutation(3, (1, 1, 2), 0)
        with pytest.raises(ValueError):
            SignedPermutation(3, (1, 2, 3), 8)
        with pytest.raises(ValueError):
            SignedPermutation.identity(2).compose(SignedPermutation.identity(3))


class TestDeltaSequences:
    def test_known_cycle_roundtrip(self) -> None:
        assert validate_delta(Q3_DELTAS)
        walk = Q3_DELTAS.walk()
        assert walk[0] == walk[-1] == 0
        assert len(set(walk[:-1])) == 8
        edges = delta_to_edge_set(Q3_DELTAS)
        assert edges.is_valid()
        back = edge_set_to_deltas(edges)
        assert Q3_DELTAS in back and len(back) == 2

    def test_direction_counts_even_and_cover(self) -> None:
        # every enumerated cycle: per-direction counts all even, >= 2, sum 2^n
        for n in (2, 3):
            for cycle in edge_sets(n):
                for d in edge_set_to_deltas(cycle):
                    counts = d.direction_counts()
                    assert sum(counts) == 2 ** n
                    assert all(c >= 2 and c % 2 == 0 for c in counts)

    def test_group_action_preserves_validity(self) -> None:
        rng = random.Random(17)
        for cycle in edge_sets(3):
            g = random_automorphism(3, rng)
            for d in edge_set_to_deltas(cycle.apply(g)):
                assert validate_delta(d)

    def test_invalid_sequences(self) -> None:
        assert not validate_delta(DeltaSequence(3, (1, 2, 1, 3)))  # too short
        assert not validate_delta(DeltaSequence(3, (1, 2) * 4))  # revisits
        assert not validate_delta(DeltaSequence(3, (1, 2, 1, 4, 1, 2, 1, 4)))  # bad label
        with pytest.raises(ValueError):
            delta_to_edge_set(DeltaSequence(3, (1, 2) * 4))

    def test_serialization(self) -> None:
        assert Q3_DELTAS.to_string() == "1,2,1,3,1,2,1,3"
        assert DeltaSequence.from_string(3, "1,2,1,3,1,2,1,3") == Q3_DELTAS
        with pytest.raises(ValueError):
            DeltaSequence.from_string(3, "1,2,x")
        es = delta_to_edge_set(Q3_DELTAS)
        assert CycleEdgeSet.from_string(3, es.to_string()) == es
        text = es.to_string()
        pairs = [tuple(map(int, p.split("-"))) for p in text.split(",")]
        assert pairs == sorted(pairs) and all(u < v for u, v in pairs)


class TestPartitions:
    def test_q4_two_cycle_decomposition(self) -> None:
        d1, d2 = find_two_cycle_decomposition_q4()
        parts = [delta_to_edge_set(DeltaSequence(4, d)) for d in (d1, d2)]
        check = verify_cycle_partition(4, parts)
        assert check.ok and check.reason is None and bool(check)

    def test_partition_reason_codes(self) -> None:
        d1, d2 = find_two_cycle_decomposition_q4()
        good = [delta_to_edge_set(DeltaSequence(4, d)) for d in (d1, d2)]
        assert verify_cycle_partition(4, [good[0], good[0]]).reason == "overlap"
        assert verify_cycle_partition(4, [good[0]]).reason == "incomplete-cover"
        broken = CycleEdgeSet(4, frozenset(list(good[1].edges)[:-1]))
        assert verify_cycle_partition(4, [good[0], broken]).reason == "not-a-cycle"
        with pytest.raises(ValueError):
            verify_cycle_partition(3, [])

    def test_orientation_count(self) -> None:
        assert [hamilton_orientations_per_partition(k) for k in (1, 2, 3)] == [1, 2, 4]
        with pytest.raises(ValueError):
            hamilton_orientations_per_partition(0)
