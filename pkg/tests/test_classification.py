"""Orbit classification: canonical forms, Burnside cross-check, spectra."""

from __future__ import annotations

import json
import random
from math import factorial

import pytest

from graycensus.classify import (
    MAX_ENUMERATION_DIMENSION,
    ORBIT_CONVENTION,
    burnside_orbit_count,
    canonical_form,
    classify_automorphism,
    classify_weights,
    count_fixed_cycles,
    enumerate_canonical_prefix_cycles,
    weight_spectrum,
    _classify_python,
)
from graycensus.cube import (
    DeltaSequence,
    SignedPermutation,
    automorphism_group_order,
    delta_to_edge_set,
    edge_set_to_deltas,
    random_automorphism,
    validate_delta,
)

pytestmark = []

Q4_SPECTRA = {(2, 2, 4, 8), (2, 2, 6, 6), (2, 4, 4, 6), (4, 4, 4, 4)}


class TestCanonicalForm:
    def test_idempotent(self) -> None:
        visited = 0
        checked = 0

        def visit(d: DeltaSequence) -> None:
            nonlocal visited, checked
            if visited % 5 == 0:
                c = canonical_form(d)
                assert canonical_form(c) == c
                checked += 1
            visited += 1

        enumerate_canonical_prefix_cycles(4, visit)
        assert checked > 20

    def test_constant_on_orbits(self) -> None:
        rng = random.Random(29)

        def visit(d: DeltaSequence) -> None:
            if rng.random() > 0.02:
                return
            base = canonical_form(d)
            cycle = delta_to_edge_set(d)
            for _ in range(3):
                g = random_automorphism(4, rng)
                assert canonical_form(cycle.apply(g)) == base

        enumerate_canonical_prefix_cycles(4, visit)

    def test_accepts_both_representations(self) -> None:
        d = DeltaSequence(3, (1, 2, 1, 3, 1, 2, 1, 3))
        assert canonical_form(d) == canonical_form(delta_to_edge_set(d))
        with pytest.raises(ValueError):
            canonical_form(DeltaSequence(3, (1, 2) * 4))


class TestWeightSpectra:
    def test_orbit_invariant(self) -> None:
        rng = random.Random(31)

        def visit(d: DeltaSequence) -> None:
            if rng.random() > 0.02:
                return
            spectrum = weight_spectrum(d)
            cycle = delta_to_edge_set(d)
            g = random_automorphism(4, rng)
            for image in edge_set_to_deltas(cycle.apply(g)):
                assert weight_spectrum(image) == spectrum

        enumerate_canonical_prefix_cycles(4, visit)

    def test_known_spectra(self) -> None:
        assert classify_weights(2) == {(2, 2): 1}
        assert classify_weights(3) == {(2, 2, 4): 6}
        by_weight = classify_weights(4)
        assert set(by_weight) == Q4_SPECTRA
        assert sum(by_weight.values()) == 1344


class TestEnumeration:
    def test_visit_counts_give_directed_counts(self, small_h_counts) -> None:
        # visits * n! = OH_n = 2 H_n
        for n in (2, 3, 4):
            visits = enumerate_canonical_prefix_cycles(n)
            assert visits * factorial(n) == 2 * small_h_counts[n]

    def test_visited_sequences_are_valid_and_prefix_canonical(self) -> None:
        seqs: list[tuple[int, ...]] = []

        def visit(d: DeltaSequence) -> None:
            assert validate_delta(d)
            firsts = []
            seen = set()
            for x in d.deltas:
                if x not in seen:
                    seen.add(x)
                    firsts.append(x)
            assert firsts == sorted(firsts)
            seqs.append(d.deltas)

        enumerate_canonical_prefix_cycles(3, visit)
        assert len(seqs) == len(set(seqs)) == 2

    def test_refuses_out_of_range(self) -> None:
        with pytest.raises(ValueError):
            enumerate_canonical_prefix_cycles(MAX_ENUMERATION_DIMENSION + 1)
        with pytest.raises(ValueError):
            classify_automorphism(6)


class TestOrbits:
    def test_known_orbit_counts(self) -> None:
        assert classify_automorphism(2).count == 1
        assert classify_automorphism(3).count == 1
        assert classify_automorphism(4).count == 9

    def test_orbit_sizes(self, small_h_counts) -> None:
        for n in (2, 3, 4):
            summary = classify_automorphism(n)
            order = automorphism_group_order(n)
            assert summary.total_cycles == small_h_counts[n]
            for orbit in summary.orbits:
                assert order % orbit.size == 0

    def test_class_count_chain(self, small_h_counts) -> None:
        # Weight_n <= Aut_n <= H_n: each refinement only splits classes
        for n in (2, 3, 4):
            summary = classify_automorphism(n)
            assert summary.weight_count <= summary.count <= small_h_counts[n]

    def test_canonical_representatives(self) -> None:
        summary = classify_automorphism(4)
        reps = [o.canonical for o in summary.orbits]
        assert all(canonical_form(r) == r for r in reps)
        assert reps == sorted(reps, key=lambda d: d.deltas)

    def test_output_lines_and_summary(self) -> None:
        summary = classify_automorphism(3)
        assert summary.lines() == ["1,2,1,3,1,2,1,3 6 2+2+4"]
        blob = json.dumps(summary.summary())
        assert json.loads(blob) == {
            "n": 3, "aut_count": 1, "weight_count": 1, "total_cycles": 6}
        assert summary.convention == ORBIT_CONVENTION

    def test_compiled_path_matches_python(self, monkeypatch) -> None:
        import graycensus.classify as classify_mod

        monkeypatch.setattr(classify_mod, "MAX_ENUMERATION_DIMENSION", 4)
        compiled = classify_mod.classify_automorphism(4)
        reference = _classify_python(4)
        assert compiled == reference


class TestBurnside:
    def test_orbit_counts(self) -> None:
        assert burnside_orbit_count(3) == 1
        assert burnside_orbit_count(4) == 9

    def test_matches_classification(self) -> None:
        for n in (3, 4):
            assert burnside_orbit_count(n) == classify_automorphism(n).count

    def test_identity_fixes_everything(self, small_h_counts) -> None:
        for n in (2, 3, 4):
            identity = SignedPermutation.identity(n)
            assert count_fixed_cycles(identity, n) == small_h_counts[n]

    def test_refuses_large_dimension(self) -> None:
        with pytest.raises(ValueError):
            burnside_orbit_count(5)


@pytest.mark.extended
class TestExtendedDimension:
    def test_aut_5(self) -> None:
        summary = classify_automorphism(5)
        assert summary.count == 237675
        assert summary.total_cycles == 906545760
        assert summary.weight_count == 28

    def test_weights_5(self) -> None:
        assert len(classify_weights(5)) == 28
