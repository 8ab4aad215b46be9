import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from src.values.codec import from_json, to_json
from src.values.isomorphism import canonical_form_oracle, has_gap, is_isomorphic
from src.values.objects import (
    MapValue,
    NotBasicObjectError,
    Ordering,
    SetValue,
    atoms,
    compare,
    is_basic,
    sort_key,
)
from src.values.permutation import InvalidPermutationError, Permutation, apply
from src.values.uset import UsetRegistry
from tests.strategies import A, B, basic_objects, permutations

a0, a1, a2 = A.uset.atoms
b0, b1 = B.uset.atoms


class TestOrdering:
    def test_rank_order(self):
        ranked = [None, False, 0, "a", a0, (), SetValue(), MapValue()]
        keys = [sort_key(o) for o in ranked]
        assert keys == sorted(keys)

    def test_tuples_compare_componentwise(self):
        assert compare((0, "a"), (0, "b")) is Ordering.LESS
        assert compare((1,), (0, 0)) is Ordering.LESS

    def test_bool_and_int_are_distinct(self):
        assert SetValue([True, 1]) != SetValue([1])
        assert len(SetValue([True, 1, 1])) == 2

    def test_atoms_order_by_index(self):
        assert compare(a2, a0) is Ordering.GREATER
        assert compare(a1, a1) is Ordering.EQUAL

    def test_not_basic(self):
        with pytest.raises(NotBasicObjectError):
            sort_key(1.5)
        assert not is_basic([1, 2])
        assert is_basic((a0, SetValue([1])))

    @given(basic_objects, basic_objects, basic_objects)
    @settings(max_examples=100, deadline=None)
    def test_total_order(self, x, y, z):
        assert compare(x, y) == -compare(y, x)
        if compare(x, y) <= 0 and compare(y, z) <= 0:
            assert compare(x, z) <= 0


class TestSetValue:
    def test_sorted_and_unique(self):
        s = SetValue([2, 1, 2])
        assert list(s) == [1, 2]
        assert repr(s) == "{1, 2}"
        assert repr(SetValue()) == "{}"

    def test_membership_and_max(self):
        s = SetValue([a2, a0])
        assert a0 in s
        assert a1 not in s
        assert 3.5 not in s
        assert s.max() == a2
        assert s.without_max() == SetValue([a0])

    def test_with_item(self):
        assert SetValue([1]).with_item(3).with_item(2) == SetValue([1, 2, 3])

    def test_to_set(self):
        assert SetValue([(a0, a1)]).to_set() == frozenset({(a0, a1)})

    def test_edge_pairs_unpack(self):
        graph = SetValue([(a0, a1), (a1, a1)])
        assert [x != y for (x, y) in graph] == [True, False]


class TestMapValue:
    def test_lookup(self):
        m = MapValue({(a0, b0): a1, (a1, b0): a0})
        assert m[(a0, b0)] == a1
        with pytest.raises(KeyError):
            m[(a2, b0)]

    def test_conflicting_keys(self):
        with pytest.raises(ValueError, match="Conflicting"):
            MapValue([(1, "x"), (1, "y")])

    def test_repr_and_dict(self):
        m = MapValue({1: 1, 0: 0})
        assert repr(m) == "{0: 0; 1: 1}"
        assert m.to_dict() == {0: 0, 1: 1}
        assert list(m) == [0, 1]

    def test_with_item(self):
        assert MapValue().with_item(0, "x").with_item(1, "y") == MapValue({0: "x", 1: "y"})


class TestUsets:
    def test_atoms_display(self):
        assert repr(a1) == "a1"
        assert repr((a0,)) == "(a0,)"

    def test_registry(self):
        registry = UsetRegistry()
        first = registry.register(2, "x")
        second = registry.register(3, "x")
        assert first != second
        assert registry.find("x") is second
        assert registry.get(first.id) is first
        assert registry.list_usets() == [first, second]
        with pytest.raises(ValueError):
            registry.register(0, "empty")

    def test_atoms_collects_nested(self):
        assert atoms((a0, SetValue([b1]), 3)) == frozenset({a0, b1})


class TestPermutation:
    def test_swap_and_inverse(self):
        p = Permutation.swap(a0, a1)
        assert p(a0) == a1
        assert p(a2) == a2
        assert p.inverse() == p
        assert p.as_mapping() == {a0: a1, a1: a0}

    def test_compose_applies_inner_first(self):
        cycle = Permutation.from_indices(A.uset, [1, 2, 0])
        swap = Permutation.swap(a0, a1)
        assert cycle.compose(swap)(a0) == cycle(a1)
        assert cycle.compose(cycle.inverse()) == Permutation.identity()

    def test_crossing_usets_rejected(self):
        with pytest.raises(InvalidPermutationError):
            Permutation({a0: b0, b0: a0})

    def test_not_a_permutation(self):
        with pytest.raises(InvalidPermutationError):
            Permutation.from_indices(A.uset, [0, 0, 1])

    def test_apply_to_set(self):
        assert apply(SetValue([a0, (a0, b1)]), Permutation.swap(a0, a2)) == SetValue([a2, (a2, b1)])

    @given(basic_objects, permutations)
    @settings(max_examples=100, deadline=None)
    def test_inverse_undoes(self, o, p):
        assert sort_key(apply(apply(o, p), p.inverse())) == sort_key(o)

    @given(basic_objects)
    def test_identity_fixes(self, o):
        assert sort_key(apply(o, Permutation.identity())) == sort_key(o)

    @given(basic_objects, permutations, permutations)
    @settings(max_examples=100, deadline=None)
    def test_action_composes(self, o, p, q):
        assert sort_key(apply(apply(o, p), q)) == sort_key(apply(o, q.compose(p)))

    def test_swap_to_absent_smaller_atom(self):
        o = SetValue([(a2, a1), (a1, b1)])
        assert compare(apply(o, Permutation.swap(a2, a0)), o) is Ordering.LESS
        assert compare(apply(o, Permutation.swap(b1, b0)), o) is Ordering.LESS

    @given(basic_objects)
    @settings(max_examples=200, deadline=None)
    def test_swap_to_absent_smaller_atom_decreases(self, o):
        present = atoms(o)
        for x in present:
            for y in x.uset.atoms[: x.index]:
                if y not in present:
                    assert compare(apply(o, Permutation.swap(x, y)), o) is Ordering.LESS


class TestIsomorphism:
    def test_atom_examples(self):
        assert is_isomorphic(a0, a2)
        assert is_isomorphic(b1, b0)
        assert not is_isomorphic(a0, b0)

    def test_tuple_examples(self):
        assert is_isomorphic((a0, b0), (a2, b1))
        assert not is_isomorphic((a0, a0), (a0, a2))

    def test_gap(self):
        assert has_gap([a1])
        assert not has_gap([a0, a1, b0])

    @given(basic_objects)
    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
    def test_gap_means_not_minimal(self, o):
        assume(has_gap(atoms(o)))
        assert sort_key(canonical_form_oracle(o)) != sort_key(o)

    @given(basic_objects, permutations, permutations)
    @settings(max_examples=100, deadline=None)
    def test_isomorphism_is_transitive(self, o, p, q):
        middle = apply(o, p)
        last = apply(middle, q)
        assert is_isomorphic(o, middle) and is_isomorphic(middle, last)
        assert is_isomorphic(o, last)

    @given(st.lists(st.sampled_from([a0, a1, a2, (a0, a1), (a1, a2), (a2, a2)]), max_size=3).map(SetValue), st.data())
    @settings(max_examples=100, deadline=None)
    def test_isomorphism_transitive_over_classes(self, x, data):
        y = data.draw(st.sampled_from([x, apply(x, Permutation.swap(a0, a2)), SetValue([a0])]))
        z = data.draw(st.sampled_from([y, apply(y, Permutation.swap(a1, a2)), SetValue([(a0, a1)])]))
        if is_isomorphic(x, y) and is_isomorphic(y, z):
            assert is_isomorphic(x, z)

    def test_oracle(self):
        assert canonical_form_oracle((a2, a1)) == (a0, a1)
        assert canonical_form_oracle((a1, a1)) == (a0, a0)
        assert canonical_form_oracle(SetValue([(a2, b1)])) == SetValue([(a0, b0)])

    @given(basic_objects, permutations)
    @settings(max_examples=100, deadline=None)
    def test_permuted_objects_are_isomorphic(self, o, p):
        assert is_isomorphic(o, apply(o, p))
        assert sort_key(canonical_form_oracle(o)) == sort_key(canonical_form_oracle(apply(o, p)))


class TestCodec:
    def test_atom_encoding(self):
        assert to_json(a0) == {"uset": "a", "i": 0}

    def test_nested_round_trip(self):
        o = MapValue({(a0, b1): SetValue([a1, None]), (a1, b0): (True, "x")})
        assert from_json(to_json(o), {"a": A.uset, "b": B.uset}) == o

    def test_unknown_uset(self):
        with pytest.raises(ValueError, match="Unknown uset"):
            from_json({"uset": "never-registered", "i": 0})

    def test_not_basic(self):
        with pytest.raises(NotBasicObjectError):
            to_json({1, 2})
