from hypothesis import strategies as st

from src.domains.compositions import Join, Mappings, Product, Sequences, Subsets
from src.domains.elementary import Boolean, Range, USet
from src.values.objects import MapValue, SetValue, sort_key
from src.values.permutation import Permutation

A = USet(3, "a")
B = USet(2, "b")

atoms = st.sampled_from(A.uset.atoms + B.uset.atoms)

leaves = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-3, max_value=3),
    st.sampled_from(["x", "y"]),
    atoms,
)


def _map_of(pairs):
    return MapValue({sort_key(k): (k, v) for k, v in pairs}.values())


basic_objects = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.lists(children, max_size=3).map(tuple),
        st.lists(children, max_size=3).map(SetValue),
        st.lists(st.tuples(children, children), max_size=3).map(_map_of),
    ),
    max_leaves=6,
)

permutations = st.builds(
    lambda pa, pb: Permutation.from_indices(A.uset, pa).compose(Permutation.from_indices(B.uset, pb)),
    st.permutations(range(3)),
    st.permutations(range(2)),
)

_leaf_domains = st.sampled_from([A, B, Range(2), Boolean()])


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ds: Product(ds)),
        st.tuples(children, children).map(lambda ds: Join(ds)),
        children.filter(lambda d: d.size <= 4).map(Subsets),
        children.filter(lambda d: d.size <= 3).map(lambda d: Sequences(d, 2)),
        st.tuples(children, children)
        .filter(lambda kv: kv[1].size ** kv[0].size <= 256)
        .map(lambda kv: Mappings(*kv)),
    )


strict_domains = st.recursive(_leaf_domains, _extend, max_leaves=4).filter(lambda d: d.size <= 2000)
