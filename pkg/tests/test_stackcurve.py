import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackycoh import descriptor as D
from stackycoh.gcoh import WildError
from stackycoh.groups import FiniteGroup
from stackycoh.stackcurve import (
    BETA_FACTORIZATION,
    EXTENSION_OPEN,
    ORBICURVE,
    UNSUPPORTED,
    PipelineError,
    UnsupportedCase,
    cohomology,
    cohomology_cyclic_tower,
    cohomology_orbicurve,
    cohomology_trivial_gerbe,
    cohomology_twisted_nodal,
    gerbe_root_decomposition,
    h2_abelian_crosscheck,
    h2_via_beta_factorization,
    kummer_h2,
    node_map,
    picard_orbicurve,
)
from stackycoh.zlin import AbelianGroup, AbelianHom, SymbolicGroup

indices = st.lists(st.integers(2, 9), min_size=0, max_size=4)
Zd = AbelianGroup.cyclic


# -- orbicurves ---------------------------------------------------------------


def test_orbicurve_table():
    desc = D.orbicurve([2, 3])
    got = [cohomology(desc, r).render() for r in range(6)]
    assert got == ["k*", "Z^1", "0", "Z/6", "0", "Z/6"]
    assert cohomology(desc, 3).provenance == ORBICURVE
    pic = picard_orbicurve(desc)
    assert pic.discrete_part == AbelianGroup.free(1)
    assert pic.coarse_quotient == AbelianGroup(0, (6,)) and pic.quotient_check


@settings(max_examples=80, deadline=None)
@given(indices, st.integers(0, 2))
def test_projective_picard_quotient_law(ds, genus):
    pic = picard_orbicurve(D.orbicurve(ds, genus))
    assert pic.quotient_check
    assert pic.coarse_quotient == AbelianGroup.from_cyclic_orders(ds)
    # the degree map t_l -> 1/d_l has image (1/lcm) Z, so the torsion has
    # order prod(d) / lcm(d)
    torsion = pic.discrete_part.torsion().order
    assert pic.discrete_part.free_rank == 1
    assert torsion == (math.prod(ds) // math.lcm(*ds) if ds else 1)
    assert pic.divisible_part.genus == genus


@settings(max_examples=60, deadline=None)
@given(indices)
def test_affine_picard_is_sum_of_point_groups(ds):
    pic = picard_orbicurve(D.orbicurve(ds, coarse=D.AFFINE_LINE))
    assert pic.discrete_part == AbelianGroup.from_cyclic_orders(ds)
    assert pic.divisible_part is None and pic.quotient_check


@settings(max_examples=60, deadline=None)
@given(indices, st.integers(0, 2), st.integers(2, 9))
def test_orbicurve_degree_parity(ds, genus, r):
    v = cohomology_orbicurve(D.orbicurve(ds, genus), r)
    assert v.resolved
    assert v.group == (AbelianGroup() if r % 2 == 0 else AbelianGroup.from_cyclic_orders(ds))


def test_orbicurve_guards():
    with pytest.raises(PipelineError):
        cohomology_orbicurve(D.product_gerbe([2], [2]), 2)
    with pytest.raises(PipelineError):
        cohomology_orbicurve(D.twisted_nodal([0], 1, nodes=[3]), 2)
    with pytest.raises(ValueError):
        cohomology(D.orbicurve([2]), -1)
    assert picard_orbicurve(D.orbicurve([2], 0, characteristic=5)).quotient_check


# -- twisted nodal --------------------------------------------------------------


def test_twisted_nodal_table():
    desc = D.twisted_nodal([0], 1, nodes=[3], smooth=[2])
    got = [cohomology_twisted_nodal(desc, r).render() for r in (2, 3, 4)]
    assert got == ["0", "Z/6", "0"]
    assert cohomology_twisted_nodal(desc, 3).group == AbelianGroup.from_cyclic_orders([3, 2])
    h1 = cohomology_twisted_nodal(desc, 1)
    assert not h1.resolved and h1.reason == EXTENSION_OPEN
    assert h1.pieces == (SymbolicGroup("Pic(C)", divisible=False), Zd(6))


def test_node_map_is_difference():
    rho = node_map(D.twisted_nodal([0, 0], 2, nodes=[2, 3]))
    assert rho.matrix.to_lists() == [[1, -1, 0, 0], [0, 0, 1, -1]]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 6), max_size=3), st.lists(st.integers(2, 6), max_size=3))
def test_twisted_nodal_euler_law(nodes, smooth):
    desc = D.twisted_nodal([0], max(len(nodes), 1), nodes=nodes, smooth=smooth)
    odd = cohomology_twisted_nodal(desc, 3).group
    even = cohomology_twisted_nodal(desc, 2).group
    # rho is onto, and |ker| / |coker| = |source| / |target|
    assert even == AbelianGroup()
    source = math.prod(nodes) ** 2 * math.prod(smooth)
    assert odd.order == source // math.prod(nodes)
    assert cohomology_twisted_nodal(desc, 5).group == odd


def test_twisted_nodal_guards():
    with pytest.raises(PipelineError):
        cohomology_twisted_nodal(D.orbicurve([2]), 2)
    gerby = D.twisted_nodal([0], 1, nodes=[2]).with_gerbe(D.TRIVIAL_PRODUCT, FiniteGroup.cyclic(2))
    with pytest.raises(UnsupportedCase):
        cohomology_twisted_nodal(gerby, 2)
    v = cohomology(gerby, 2)
    assert v.kind == "undetermined" and v.reason == UNSUPPORTED


# -- product gerbes -------------------------------------------------------------


@pytest.mark.parametrize("genus", [0, 1, 2])
@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_projective_product_gerbe_closed_form(genus, d, r):
    v = cohomology_trivial_gerbe(D.product_gerbe([], [d], genus=genus), r)
    assert v.resolved
    assert v.group == (Zd(d) * (2 * genus) if r % 2 == 0 else Zd(d) * 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), max_size=2), st.sampled_from([(2,), (3,), (2, 2), (4,)]),
       st.integers(0, 1), st.sampled_from([D.PROJECTIVE, D.AFFINE_LINE]), st.integers(2, 5))
def test_product_gerbe_filtration_is_multiplicative(ds, g0, genus, coarse, r):
    genus = genus if coarse == D.PROJECTIVE else 0
    v = cohomology_trivial_gerbe(D.product_gerbe(ds, list(g0), genus=genus, coarse=coarse), r)
    pieces = v.pieces
    assert len(pieces) == 3
    total = math.prod(p.order for p in pieces)
    assert v.order == total
    assert v.audit["order_law"]
    if v.resolved:
        assert v.group.order == total


def test_product_gerbe_degree_one_splits():
    v = cohomology_trivial_gerbe(D.product_gerbe([2], [3]), 1)
    assert v.resolved and v.render() == "Z^1 + Z/3"


def test_product_gerbe_pullback_audit():
    v = cohomology_trivial_gerbe(D.product_gerbe([2], [2], coarse=D.AFFINE_LINE), 3)
    (pb,) = v.audit["pullbacks"]
    assert pb["kernel"] == "0" and pb["point"] == "p1"


def test_product_gerbe_needs_abelian_generic_stabilizer():
    nonab = D.orbicurve([2]).with_gerbe(D.TRIVIAL_PRODUCT, FiniteGroup.dihedral(3))
    with pytest.raises(UnsupportedCase):
        cohomology_trivial_gerbe(nonab, 2)
    assert cohomology(nonab, 2).kind == "undetermined"


# -- cyclic towers --------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_tower_odd_degrees_order_p_cubed(p):
    v = cohomology_cyclic_tower(D.cyclic_tower([p], p), 3)
    assert v.order == p ** 3 and len(v.pieces) == 3
    assert v.audit["order_law"]


@pytest.mark.parametrize("p", [2, 3])
def test_tower_degree_one_is_not_split(p):
    v = cohomology_cyclic_tower(D.cyclic_tower([p], p), 1)
    assert not v.resolved and v.order == p * p
    assert v.pieces == (Zd(p), Zd(p))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(2, 6), st.integers(2, 7))
def test_tower_is_two_periodic(n0, d, r):
    desc = D.cyclic_tower([d], n0)
    a, b = cohomology_cyclic_tower(desc, r), cohomology_cyclic_tower(desc, r + 2)
    assert (a.render(), a.order) == (b.render(), b.order)


def test_tower_even_degrees_match_product_gerbe():
    desc = D.cyclic_tower([2], 2)
    product = cohomology_trivial_gerbe(desc.with_gerbe(D.TRIVIAL_PRODUCT), 2)
    assert cohomology_cyclic_tower(desc, 4).group == product.group


def test_tower_guard():
    with pytest.raises(PipelineError):
        cohomology_cyclic_tower(D.orbicurve([2]), 3)


# -- transfer route and crosschecks -------------------------------------------


@pytest.mark.parametrize("m", [3, 5])
def test_beta_factorization_dihedral(m):
    v = h2_via_beta_factorization(D.dihedral_quotient(m))
    assert v.group == Zd(m) and v.provenance == BETA_FACTORIZATION
    assert v.audit["exact"]
    assert cohomology(D.dihedral_quotient(m), 2).group == Zd(m)
    assert cohomology(D.dihedral_quotient(m), 3).kind == "undetermined"


def test_beta_factorization_takes_supplied_transfers():
    desc = D.dihedral_quotient(3)
    auto = h2_via_beta_factorization(desc)
    tau = AbelianHom.zero(Zd(3).presentation(), Zd(2).presentation())
    supplied = h2_via_beta_factorization(desc, {"origin": tau})
    assert supplied.audit["transfers"][0]["provenance"] == "supplied"
    # a zero transfer keeps the whole distinguished copy in the kernel
    assert supplied.group.order == auto.group.order
    with pytest.raises(PipelineError):
        h2_via_beta_factorization(D.product_gerbe([2], [2]))


@pytest.mark.parametrize("m", [3, 5])
def test_dihedral_crosscheck_reports_inequality(m):
    rep = h2_abelian_crosscheck(D.dihedral_quotient(m))
    assert rep["status"] == "unequal" and rep["exact"]
    assert rep["direct"]["value"] == f"Z/{m}" and rep["product_gerbe"]["value"] == "0"
    assert not rep["abelian_stabilizers"]
    assert not any(n.startswith("flagged") for n in rep["notes"])


@pytest.mark.parametrize("p", [2, 3])
def test_tower_crosscheck_flags_reference_order(p):
    rep = h2_abelian_crosscheck(D.cyclic_tower([p], p))
    assert rep["exact"]
    odd = rep["odd_degrees"]
    assert odd["tower"]["order"] == p ** 3
    assert odd["product_gerbe"]["order"] == p ** 3
    assert any(f"reference order {p * p}" in n for n in rep["notes"])
    assert len(odd["product_gerbe"]["audit"]["pieces"]) == 3


def test_crosscheck_agreement_cases():
    assert h2_abelian_crosscheck(D.orbicurve([2, 3], coarse=D.AFFINE_LINE))["status"] == "equal"
    rep = h2_abelian_crosscheck(D.product_gerbe([3], [3], coarse=D.AFFINE_LINE))
    assert rep["status"] == "equal" and rep["direct"]["value"] == "Z/3"
    with pytest.raises(UnsupportedCase):
        h2_abelian_crosscheck(D.twisted_nodal([0], 1, nodes=[2]))


# -- Kummer -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(indices, st.integers(0, 2), st.integers(1, 12))
def test_kummer_is_picard_mod_n(ds, genus, n):
    desc = D.orbicurve(ds, genus)
    assert kummer_h2(desc, n) == picard_orbicurve(desc).discrete_part.mod(n)


def test_kummer_examples():
    assert kummer_h2(D.orbicurve([5], coarse=D.AFFINE_LINE), 5) == Zd(5)
    assert kummer_h2(D.orbicurve([], genus=2), 4) == Zd(4)
    assert kummer_h2(D.orbicurve([2, 3]), 1) == AbelianGroup()
    assert kummer_h2(D.twisted_nodal([0, 1], 2, nodes=[3]), 2) == Zd(2) * 2
    with pytest.raises(UnsupportedCase):
        kummer_h2(D.twisted_nodal([0], 1, nodes=[2]), 2)
    with pytest.raises(WildError):
        kummer_h2(D.orbicurve([3], characteristic=2), 4)
    with pytest.raises(ValueError):
        kummer_h2(D.orbicurve([3]), 0)
    with pytest.raises(PipelineError):
        kummer_h2(D.product_gerbe([2], [2]), 2)


def test_gerbe_root_decomposition():
    group, statement = gerbe_root_decomposition(D.orbicurve([2]), [2, 2])
    assert group == AbelianGroup(0, (2, 2))
    assert statement["root_map_surjective"] and statement["factors"] == [2, 2]
    group, _ = gerbe_root_decomposition(D.orbicurve([], genus=1), [3])
    assert group == Zd(3)
