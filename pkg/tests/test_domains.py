import itertools

import numpy as np
import pytest

from src.domains.base import DomainError, SamplingError, Slicing, UnsupportedSlicingError
from src.domains.compositions import Join, Mappings, Product, Sequences, Subsets
from src.domains.elementary import Boolean, CnfValues, NonCanonicalValueError, NoneDomain, Range, USet, Values
from src.domains.sampling import make_rng, randbelow
from src.domains.signals import Element, Skipped, coalesce
from src.domains.transformations import ElementError
from src.values.objects import MapValue, SetValue
from src.values.permutation import Permutation, apply


@pytest.fixture
def letters():
    return Values(["a", "b", "c"])


class TestSizes:
    def test_product(self, letters):
        d = Range(2) * letters
        assert d.size == 6
        assert list(d) == [(0, "a"), (0, "b"), (0, "c"), (1, "a"), (1, "b"), (1, "c")]

    def test_subsets(self):
        assert list(Subsets(Range(2))) == [SetValue(), SetValue([0]), SetValue([0, 1]), SetValue([1])]
        assert Subsets(Range(2)).size == 4

    def test_subsets_of_three(self):
        listed = [sorted(s) for s in Subsets(Range(3))]
        assert listed == [[], [0], [0, 1], [0, 1, 2], [0, 2], [1], [1, 2], [2]]

    def test_mappings(self):
        maps = list(Mappings(Range(2), Range(2)))
        assert len(maps) == 4
        assert maps[0] == MapValue({0: 0, 1: 0})
        assert maps[1] == MapValue({0: 0, 1: 1})

    def test_sequences(self):
        d = Sequences(Range(2), 3)
        assert d.size == 8
        assert list(d)[:4] == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]

    def test_join(self, letters):
        d = Range(2) + letters
        assert d.size == 5
        assert list(d) == [0, 1, "a", "b", "c"]

    def test_fixed_size_subsets(self):
        d = Subsets(Range(4), size=2)
        assert d.size == 6
        assert [sorted(s) for s in d] == [list(c) for c in itertools.combinations(range(4), 2)]

    def test_ground_is_deduplicated(self):
        assert Subsets(Values([1, 1, 2])).size == 4

    def test_large_sizes_are_exact(self):
        assert Subsets(Range(100)).size == 2**100
        assert Mappings(Range(20), Range(10)).size == 10**20

    def test_empty_cases(self):
        assert list(Sequences(Range(3), 0)) == [()]
        assert list(Mappings(Values([]), Range(3))) == [MapValue()]
        assert list(Range(0) * Range(3)) == []

    def test_negative_length_rejected(self):
        with pytest.raises(DomainError):
            Sequences(Range(2), -1)

    def test_non_basic_operands_rejected(self):
        with pytest.raises(DomainError, match="Subsets needs basic objects, but Values yields 1.5"):
            Subsets(Values([1, 1.5]))
        with pytest.raises(DomainError, match="Mappings needs basic objects"):
            Mappings(Values([[0]]), Range(2))
        with pytest.raises(DomainError, match="Mappings needs basic objects"):
            Mappings(Range(2), Values([0.5]))

    def test_non_basic_items_of_derived_operand(self):
        d = Subsets(Range(2).map(float))
        with pytest.raises(DomainError, match="Subsets needs basic objects, but MapTransformation yields 0.0"):
            d.size


class TestRepr:
    def test_range(self):
        assert repr(Range(4)) == "<Range size=4 {0, 1, 2, 3}>"

    def test_values(self):
        assert repr(Values(["Haystack", "diver"])) == "<Values size=2 {'Haystack', 'diver'}>"

    def test_compositions(self, letters):
        a = Range(2)
        assert repr(a * letters) == "<Product size=6 {(0, 'a'), (0, 'b'), (0, 'c'), (1, 'a'), ...}>"
        assert repr(Subsets(a)) == "<Subsets size=4 {{}, {0}, {0, 1}, {1}}>"
        assert repr(Mappings(a, a)) == "<Mappings size=4 {{0: 0; 1: 0}, {0: 0; 1: 1}, {0: 1; 1: 0}, ...}>"
        assert repr(Sequences(a, 3)) == "<Sequences size=8 {(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), ...}>"
        assert repr(a + letters) == "<Join size=5 {0, 1, 'a', 'b', 'c'}>"

    def test_map(self):
        assert repr(Range(5).map(lambda x: x * 10)) == "<MapTransformation size=5 {0, 10, 20, 30, 40}>"


class TestStrictness:
    def test_elementary(self, a):
        assert a.strict and Range(3).strict and Boolean().strict and NoneDomain().strict
        assert not Values([1]).strict

    def test_compositions_propagate(self, a):
        assert Subsets(a * a).strict
        assert not (a * Values([1])).strict

    def test_map_is_never_strict(self, a):
        d = Subsets(a.map(lambda x: x))
        assert not d.strict
        assert d.non_strict_part().name == "MapTransformation"

    def test_filter_strict_flag(self, a):
        assert not a.filter(lambda x: True).strict
        assert a.filter(lambda x: True, strict=True).strict

    def test_usets(self, a, b):
        assert Mappings(a * b, a).usets() == frozenset({a.uset, b.uset})
        assert Range(3).usets() == frozenset()

    def test_membership(self, a, b):
        a0, a1, _ = a.uset.atoms
        b0 = b.uset.atoms[0]
        assert (a0, b0) in a * b
        assert (b0, a0) not in a * b
        assert SetValue([(a0, a1)]) in Subsets(a * a)
        assert 5 not in Range(3)
        assert True not in Range(3)
        assert a0 in a + b
        assert MapValue({a0: 0, a1: 1, a.uset.atoms[2]: 0}) in Mappings(a, Range(2))

    def test_membership_closed_under_permutation(self, a, b):
        domain = Subsets(a * b)
        rng = make_rng(7)
        p = Permutation.from_indices(a.uset, [2, 0, 1]).compose(Permutation.swap(*b.uset.atoms))
        for _ in range(20):
            assert apply(domain.sample(rng), p) in domain


class TestCnfValues:
    def test_closure_iteration(self, a):
        a0, a1, a2 = a.uset.atoms
        assert list(CnfValues([a0])) == [a0, a1, a2]

    def test_cnfs_are_the_items(self, a):
        a0, a1, _ = a.uset.atoms
        assert list(CnfValues([(a0, a1)]).iter_canonical()) == [(a0, a1)]

    def test_closure_size(self, a):
        a0 = a.uset.atoms[0]
        assert CnfValues([(a0, a0)]).size == 3

    def test_rejects_non_canonical(self, a):
        with pytest.raises(NonCanonicalValueError, match="not a canonical form"):
            CnfValues([a.uset.atoms[1]])

    def test_rejects_duplicates(self, a):
        with pytest.raises(NonCanonicalValueError, match="listed twice"):
            CnfValues([a.uset.atoms[0], a.uset.atoms[0]])

    def test_membership(self, a):
        a0, a1, a2 = a.uset.atoms
        d = CnfValues([(a0, a1)])
        assert (a2, a0) in d
        assert (a1, a1) not in d


class TestSlicing:
    def test_iterate_from(self):
        d = Range(5) * Range(3)
        assert list(d.iterate_from(3, 2)) == [(1, 0), (1, 1)]

    @pytest.mark.parametrize("chunk", [1, 2, 5, 7, 15])
    def test_chunks_reproduce_iteration(self, chunk):
        d = Subsets(Range(2) * Range(2))
        pieces = []
        for offset in range(0, d.size, chunk):
            pieces.extend(d.iterate_from(offset, min(chunk, d.size - offset)))
        assert pieces == list(d)

    @pytest.mark.parametrize("domain", [
        Sequences(Range(3), 3),
        Mappings(Range(3), Range(2)),
        Subsets(Range(5), size=3),
        Range(2) + Range(4) * Range(2),
    ])
    def test_every_offset(self, domain):
        full = list(domain)
        for offset in range(domain.size):
            assert list(domain.iterate_from(offset, domain.size - offset)) == full[offset:]

    def test_window_checked(self):
        with pytest.raises(DomainError):
            list(Range(3).iterate_from(2, 2))

    def test_capabilities(self):
        filtered = Range(4).filter(lambda x: x % 2 == 0)
        assert Range(4).slicing is Slicing.FULL
        assert filtered.slicing is Slicing.FILTERED
        assert (filtered * Range(2)).slicing is Slicing.FILTERED
        assert filtered.size is None
        assert not filtered.exact_size
        assert filtered.span == 4

    def test_filtered_slice_signals(self):
        odd = Range(6).filter(lambda x: x % 2 == 1)
        assert list(odd.iterate_from(0, 6)) == [Skipped(1), Element(1), Skipped(1), Element(3), Skipped(1), Element(5)]

    def test_product_of_filtered_skips_whole_rows(self):
        evens = Range(4).filter(lambda x: x % 2 == 0)
        d = evens * Range(3)
        signals = list(d.iterate_skips(0, 12))
        assert signals == [
            Element((0, 0)), Element((0, 1)), Element((0, 2)),
            Skipped(3),
            Element((2, 0)), Element((2, 1)), Element((2, 2)),
            Skipped(3),
        ]

    def test_filtered_conservation(self):
        d = Range(7).filter(lambda x: x % 3 != 0) * Range(5).filter(lambda x: x > 1)
        serial = list(d)
        collected = []
        for offset in range(0, d.span, 4):
            count = min(4, d.span - offset)
            signals = list(d.iterate_skips(offset, count))
            produced = sum(1 for s in signals if isinstance(s, Element))
            skipped = sum(s.count for s in signals if isinstance(s, Skipped))
            assert produced + skipped == count
            collected.extend(s.value for s in signals if isinstance(s, Element))
        assert collected == serial

    def test_no_slicing_for_unsliceable(self):
        class Stream(Values):
            slicing = Slicing.NONE

        with pytest.raises(UnsupportedSlicingError):
            Stream([1, 2]).iterate_from(0, 1)

    def test_coalesce(self):
        assert list(coalesce([Skipped(1), Skipped(2), Element(0), Skipped(1)])) == [Skipped(3), Element(0), Skipped(1)]


class TestTransformations:
    def test_map(self):
        assert list(Range(5).map(lambda x: 10 * x)) == [0, 10, 20, 30, 40]

    def test_identity_filter(self):
        assert list(Range(3).filter(lambda x: True)) == [0, 1, 2]

    def test_callback_failure_names_element(self):
        d = Range(3).map(lambda x: 1 // (x - 1))
        with pytest.raises(ElementError, match="failed on 1"):
            list(d)

    def test_map_membership_undefined(self):
        with pytest.raises(DomainError):
            1 in Range(3).map(str)

    def test_filter_membership(self):
        assert 2 in Range(3).filter(lambda x: x > 0)
        assert 0 not in Range(3).filter(lambda x: x > 0)


class TestSampling:
    def test_single_element(self):
        rng = make_rng(1)
        assert {Range(1).sample(rng) for _ in range(20)} == {0}

    def test_seeded_is_reproducible(self, a):
        d = Subsets(a * a)
        first = [d.sample(make_rng(42)) for _ in range(3)]
        second = [d.sample(make_rng(42)) for _ in range(3)]
        assert first == second

    def test_product_is_uniform(self):
        d = Range(5) * Range(3)
        rng = make_rng(2024)
        draws = 15_000
        counts = {x: 0 for x in d}
        for _ in range(draws):
            counts[d.sample(rng)] += 1
        observed = np.array(list(counts.values()), dtype=float)
        expected = draws / d.size
        chi2 = float(((observed - expected) ** 2 / expected).sum())
        # 14 degrees of freedom; 36.12 is the 0.001 critical value
        assert chi2 < 36.12

    def test_join_weights_by_size(self):
        d = Range(1) + Range(3, 12)
        rng = make_rng(5)
        zeros = sum(1 for _ in range(10_000) if d.sample(rng) == 0)
        assert 700 < zeros < 1300

    def test_fixed_size_subsets(self):
        rng = make_rng(3)
        assert all(len(Subsets(Range(6), size=2).sample(rng)) == 2 for _ in range(50))

    def test_rejection_budget(self):
        never = Range(10).filter(lambda x: x > 100, rejection_budget=50)
        with pytest.raises(SamplingError, match="rejected all 50"):
            never.sample(make_rng(0))

    def test_randbelow_beyond_64_bits(self):
        rng = make_rng(11)
        bound = 2**100 + 7
        values = [randbelow(rng, bound) for _ in range(100)]
        assert all(0 <= v < bound for v in values)
        assert max(values) > 2**90

    def test_sample_huge_subsets(self):
        s = Subsets(Range(200)).sample(make_rng(8))
        assert 50 < len(s) < 150
