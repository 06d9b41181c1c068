"""Bruhat decompositions of one-chamber W-groupoids and the GL oracle."""

import numpy as np
import pytest

from wgroupoid.bruhat import (
    BruhatData,
    BruhatError,
    bruhat_word_of_matrix,
    check_property_B,
    from_one_chamber,
    gl_bruhat,
    permutation_to_element,
    validate_bruhat,
    wgroupoid_from_bruhat,
)
from wgroupoid.coxeter import CoxeterMatrix, CoxeterSystem
from wgroupoid.quotient import quotient, regular_action
from wgroupoid.wmetric import check_axioms


@pytest.fixture(scope="module")
def gl32_data():
    return gl_bruhat(3, 2)


class TestFromOneChamber:
    def test_gl_quotient_cells(self, gl32_quotient):
        data = from_one_chamber(gl32_quotient.wgroupoid)
        assert len(data.cells) == 6
        assert len(data.borel) == 8
        values = {tuple(w.word) for w in data.cells}
        assert values == {(), (0,), (1,), (0, 1), (1, 0), (0, 1, 0)}

    def test_multi_chamber_rejected(self, fano_singer_quotient):
        with pytest.raises(BruhatError, match="not one-chamber"):
            from_one_chamber(fano_singer_quotient.wgroupoid)

    def test_regular_w_action(self, thin_a2):
        q = quotient(regular_action(thin_a2))
        data = from_one_chamber(q.wgroupoid)
        assert len(data.borel) == 1
        assert all(len(m) == 1 for m in data.cells.values())
        # delta_B is the identity: each group element (a chamber of the thin
        # building) sits in the cell of its own Coxeter element
        for w, members in data.cells.items():
            (i,) = members
            chamber = data.group.labels[i].split(".")[-1]
            assert thin_a2.element_of[chamber] == w


class TestPropertyB:
    def test_gl_data_passes(self, gl32_data):
        report = check_property_B(gl32_data)
        assert report.all_passed

    def test_regular_data_passes(self, thin_a2):
        q = quotient(regular_action(thin_a2))
        data = from_one_chamber(q.wgroupoid)
        report = check_property_B(data)
        assert report.all_passed

    def test_swapped_cells_fail(self, gl32_data):
        d = gl32_data
        s = d.system.generators[0]
        st = d.system.mult(s, d.system.generators[1])
        cells = dict(d.cells)
        cells[s], cells[st] = cells[st], cells[s]
        mutant = BruhatData(d.group, d.system, d.borel, cells)
        report = check_property_B(mutant)
        assert not report.all_passed
        assert not report.b.passed
        assert report.b.witnesses

    def test_cs_closed_under_inverses(self, gl32_data):
        d = gl32_data
        for s in d.system.generators:
            cell = d.cells[s]
            assert {d.group.inverse(i) for i in cell} == cell


class TestEquivalenceWithBattery:
    def test_valid_data_induces_wgroupoid(self, gl32_data, thin_a2):
        for data in (gl32_data, from_one_chamber(quotient(regular_action(thin_a2)).wgroupoid)):
            G = wgroupoid_from_bruhat(data)
            report = check_axioms(G)
            assert report.battery_passed
            assert check_property_B(data).all_passed

    def test_corrupt_assignment_fails_both(self, gl32_data):
        d = gl32_data
        s = d.system.generators[0]
        st = d.system.mult(s, d.system.generators[1])
        cells = dict(d.cells)
        cells[s], cells[st] = cells[st], cells[s]
        mutant = BruhatData(d.group, d.system, d.borel, cells)
        G = wgroupoid_from_bruhat(mutant)
        assert not check_axioms(G).battery_passed
        assert not check_property_B(mutant).all_passed

    def test_nonconstant_on_coset_rejected(self, gl32_data):
        d = gl32_data
        # move one non-Borel element of C(s0) into C(s1): delta stops being
        # constant on its double coset
        s0, s1 = d.system.generators
        cells = {w: set(m) for w, m in d.cells.items()}
        victim = next(iter(cells[s0]))
        cells[s0].discard(victim)
        cells[s1].add(victim)
        mutant = BruhatData(
            d.group, d.system, d.borel, {w: frozenset(m) for w, m in cells.items()}
        )
        with pytest.raises(BruhatError, match="constant|injective"):
            validate_bruhat(mutant)


class TestRankProfileOracle:
    def test_identity_maps_to_identity(self, gl32_data):
        assert bruhat_word_of_matrix(np.eye(3, dtype=int), 2, gl32_data.system).is_identity()

    def test_antidiagonal_maps_to_longest(self, gl32_data):
        anti = np.fliplr(np.eye(3, dtype=int))
        w = bruhat_word_of_matrix(anti, 2, gl32_data.system)
        assert w == gl32_data.system.longest_element()

    def test_singular_rejected(self):
        with pytest.raises(BruhatError, match="singular"):
            bruhat_word_of_matrix(np.zeros((3, 3), dtype=int), 2)

    def test_cell_sizes_are_8_times_2_to_length(self, gl32_data):
        sizes = {
            tuple(w.word): len(m) for w, m in gl32_data.cells.items()
        }
        assert sizes == {
            (): 8,
            (0,): 16,
            (1,): 16,
            (0, 1): 32,
            (1, 0): 32,
            (0, 1, 0): 64,
        }
        assert sum(sizes.values()) == 168

    def test_oracle_matches_quotient_elementwise(self, gl32_data, gl32_quotient):
        data2 = from_one_chamber(gl32_quotient.wgroupoid)
        oracle = {
            gl32_data.group.labels[i]: w for w, m in gl32_data.cells.items() for i in m
        }
        quot = {
            data2.group.labels[i].split(".")[-1]: w
            for w, m in data2.cells.items()
            for i in m
        }
        assert set(oracle) == set(quot)
        for lab in oracle:
            assert oracle[lab].word == quot[lab].word

    def test_permutation_words_multiply_out(self):
        # every S_3 element: the word composes back to the permutation under
        # slot-swap composition, and its length equals the inversion count
        sys2 = CoxeterSystem(CoxeterMatrix.a(2))
        import itertools

        def compose(p, q):  # apply q first, then p (matrix convention)
            return tuple(p[q[i]] for i in range(len(p)))

        # generator g is the swap of slots (n-2-g, n-1-g)
        slot_swaps = {0: (0, 2, 1), 1: (1, 0, 2)}
        for p in itertools.permutations(range(3)):
            w = permutation_to_element(p, sys2)
            acc = (0, 1, 2)
            for letter in w.word:
                acc = compose(slot_swaps[letter], acc)
            assert acc == p
            inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
            assert w.length == inv
