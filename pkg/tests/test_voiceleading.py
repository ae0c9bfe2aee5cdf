"""Voice-leading spaces: construction, transporters, homomorphisms,
conjugation, automorphism enumeration, and the table structures."""

import itertools
import random

import pytest

from mulingua.diagnostics import BudgetError, StructureError
from mulingua.musiclib import pitch_universe, ti_group
from mulingua.semantics import Atom, FinSet, PairV
from mulingua.voiceleading import (
    ExplicitTable, GroupAction, QuiverHom, SigmaVLSStructure,
    StructureIso, WindingPaths, arrow_payload, arrow_source, arrow_target,
    check_quiver_hom, compose_quiver_homs, conjugation_automorphism,
    enumerate_automorphisms, hom_to_quiver_hom, identity_quiver_hom,
    invert_quiver_hom, list_subjective, sigma_vls_signature,
    sigma_vls_to_structure, structure_to_sigma_vls, to_dot, transporters,
    validate_group_action, vls, vls_of_structure,
)

TI = ti_group(12)
PITCH = pitch_universe(12).carrier
TI_RULE = GroupAction(TI.group, TI.action)
TI_QUIVER = vls(PITCH, TI_RULE)


def pc(i):
    return Atom("PC", i % 12)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_ti_space_has_one_arrow_per_group_element_and_vertex():
    assert len(TI_QUIVER.vertices) == 12
    assert len(TI_QUIVER.arrows) == 288  # 24 group elements x 12 sources


def test_single_point_empty_rule():
    point = FinSet.of(Atom("pt", 0))
    q = vls(point, ExplicitTable({(Atom("pt", 0), Atom("pt", 0)): FinSet(())}))
    assert len(q.vertices) == 1 and len(q.arrows) == 0


def test_winding_classes_per_pair():
    q = vls(PITCH, WindingPaths(12, 1))
    assert len(q.arrows) == 3 * 144
    fiber = [a for a in q.arrows
             if q.src[a] == pc(0) and q.tgt[a] == pc(7)]
    assert [arrow_payload(a).index for a in fiber] == [7 - 12, 7, 7 + 12]


def test_arrow_projections():
    arrow = TI_QUIVER.arrows.elements[0]
    assert arrow_source(arrow) == TI_QUIVER.src[arrow]
    assert arrow_target(arrow) == TI_QUIVER.tgt[arrow]


def test_transporter_sets():
    assert transporters(TI_RULE, pc(0), pc(7)).elements == (
        TI.transposition(7), TI.inversion(7))
    assert transporters(TI_RULE, pc(0), pc(0)).elements == (
        TI.transposition(0), TI.inversion(0))


def test_transporters_partition_the_group():
    for x in (pc(0), pc(5)):
        seen = []
        for y in PITCH:
            seen.extend(transporters(TI_RULE, x, y))
        assert sorted(g.index for g in seen) == list(range(24))


def test_trivial_group_transporters():
    from mulingua.musiclib import trivial_group_structure
    trivial = trivial_group_structure()
    e = trivial.carrier("G").elements[0]
    points = FinSet.of(Atom("X", 0), Atom("X", 1))
    action = {(e, p): p for p in points}
    rule = GroupAction(trivial, action)
    assert transporters(rule, Atom("X", 0), Atom("X", 0)).elements == (e,)
    assert len(transporters(rule, Atom("X", 0), Atom("X", 1))) == 0


def test_invalid_action_is_rejected():
    bad_action = dict(TI.action)
    bad_action[(TI.transposition(0), pc(0))] = pc(1)  # breaks identity
    with pytest.raises(StructureError, match="invalid group action"):
        vls(PITCH, GroupAction(TI.group, bad_action))
    assert not validate_group_action(GroupAction(TI.group, bad_action), PITCH)


def test_rule_and_pitch_carrier_must_agree():
    with pytest.raises(StructureError, match="size"):
        vls(PITCH, WindingPaths(7, 1))
    stray = Atom("PC", 99)
    with pytest.raises(StructureError, match="outside the pitch set"):
        vls(PITCH, ExplicitTable({(stray, stray): FinSet(())}))
    bad_action = dict(TI.action)
    bad_action[(TI.transposition(0), stray)] = stray
    with pytest.raises(StructureError, match="outside the pitch set"):
        vls(PITCH, GroupAction(TI.group, bad_action))


def test_per_pair_transporters_have_size_two():
    fibers = {}
    for arrow in TI_QUIVER.arrows:
        key = (TI_QUIVER.src[arrow], TI_QUIVER.tgt[arrow])
        fibers[key] = fibers.get(key, 0) + 1
    assert len(fibers) == 144
    assert set(fibers.values()) == {2}


def test_list_subjective():
    entries = list_subjective(TI_QUIVER)
    assert len(entries) == 288
    assert entries[0][0] == pc(0)
    empty = vls(FinSet.of(Atom("pt", 0)),
                ExplicitTable({(Atom("pt", 0), Atom("pt", 0)): FinSet(())}))
    assert list_subjective(empty) == []
    flat = vls(PITCH, WindingPaths(12, 0))
    assert len(list_subjective(flat)) == 144


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

def test_identity_hom_checks():
    assert check_quiver_hom(TI_QUIVER, TI_QUIVER,
                            identity_quiver_hom(TI_QUIVER))


def test_vertex_shift_with_identity_arrows_fails():
    gamma0 = {v: pc(v.index + 1) for v in TI_QUIVER.vertices}
    h = QuiverHom({a: a for a in TI_QUIVER.arrows}, gamma0)
    v = check_quiver_hom(TI_QUIVER, TI_QUIVER, h)
    assert not v and "source square" in v.reason


def test_non_total_maps_are_rejected():
    v = check_quiver_hom(TI_QUIVER, TI_QUIVER, QuiverHom({}, {}))
    assert not v and "not total" in v.reason


def test_conjugation_by_identity_is_identity():
    h = conjugation_automorphism(TI_QUIVER, TI.transposition(0))
    assert h == identity_quiver_hom(TI_QUIVER)


def test_conjugation_by_inversion():
    h = conjugation_automorphism(TI_QUIVER, TI.inversion(0))
    assert check_quiver_hom(TI_QUIVER, TI_QUIVER, h)
    arrow = PairV(PairV(pc(0), pc(7)), TI.transposition(7))
    image = h.gamma1[arrow]
    assert image == PairV(PairV(pc(0), pc(5)), TI.transposition(5))


def test_all_conjugations_are_distinct_automorphisms():
    homs = [conjugation_automorphism(TI_QUIVER, g) for g in TI.elements()]
    assert len(homs) == 24
    assert all(check_quiver_hom(TI_QUIVER, TI_QUIVER, h) for h in homs)
    tables = {tuple(sorted((v.index, w.index)
                           for v, w in h.gamma0.items())) for h in homs}
    assert len(tables) == 24


def test_conjugation_is_functorial():
    elements = list(TI.elements())
    conj = {g: conjugation_automorphism(TI_QUIVER, g) for g in elements}
    star = TI.group.fun_tables["star"]
    for phi in elements:
        for psi in elements:
            composite = compose_quiver_homs(conj[psi], conj[phi])
            assert composite == conj[star[(phi, psi)]]


def test_conjugation_requires_group_element():
    with pytest.raises(StructureError):
        conjugation_automorphism(TI_QUIVER, pc(0))
    plain = vls(PITCH, WindingPaths(12, 0))
    with pytest.raises(StructureError):
        conjugation_automorphism(plain, TI.transposition(1))


# ---------------------------------------------------------------------------
# automorphism enumeration
# ---------------------------------------------------------------------------

from generators import explicit_quiver


def brute_force_automorphisms(q):
    verts = list(q.vertices)
    arrows = list(q.arrows)
    found = set()
    for vp in itertools.permutations(verts):
        g0 = dict(zip(verts, vp))
        for ap in itertools.permutations(arrows):
            g1 = dict(zip(arrows, ap))
            if all(q.src[g1[a]] == g0[q.src[a]]
                   and q.tgt[g1[a]] == g0[q.tgt[a]] for a in arrows):
                found.add((tuple(g0[v] for v in verts),
                           tuple(g1[a] for a in arrows)))
    return found


def as_key_set(q, homs):
    verts = list(q.vertices)
    arrows = list(q.arrows)
    return {(tuple(h.gamma0[v] for v in verts),
             tuple(h.gamma1[a] for a in arrows)) for h in homs}


def test_two_parallel_loops_swap():
    q = explicit_quiver(1, [(0, 0), (0, 0)])
    homs = enumerate_automorphisms(q)
    assert len(homs) == 2
    assert homs[0] == identity_quiver_hom(q)


def test_single_arrow_forces_identity():
    q = explicit_quiver(2, [(0, 1)])
    assert len(enumerate_automorphisms(q)) == 1


def test_directed_three_cycle_has_three_rotations():
    q = explicit_quiver(3, [(0, 1), (1, 2), (2, 0)])
    homs = enumerate_automorphisms(q)
    assert len(homs) == 3
    assert as_key_set(q, homs) == brute_force_automorphisms(q)


def test_enumeration_matches_brute_force_on_random_quivers():
    rng = random.Random(73)
    for _ in range(60):
        nv = rng.randrange(1, 4)
        na = rng.randrange(0, 5)
        pairs = [(rng.randrange(nv), rng.randrange(nv)) for _ in range(na)]
        q = explicit_quiver(nv, pairs)
        homs = enumerate_automorphisms(q)
        assert as_key_set(q, homs) == brute_force_automorphisms(q)
        assert all(check_quiver_hom(q, q, h) for h in homs)
        assert homs[0] == identity_quiver_hom(q)


def test_automorphisms_form_a_group():
    q = explicit_quiver(3, [(0, 1), (1, 0), (2, 2), (2, 2)])
    homs = enumerate_automorphisms(q)
    keys = as_key_set(q, homs)
    for f in homs:
        assert as_key_set(q, [invert_quiver_hom(f)]) <= keys
        for g in homs:
            assert as_key_set(q, [compose_quiver_homs(f, g)]) <= keys


def test_budget_refusal_suggests_conjugation():
    with pytest.raises(BudgetError, match="conjugation"):
        enumerate_automorphisms(TI_QUIVER, budget=1)
    with pytest.raises(BudgetError):
        enumerate_automorphisms(TI_QUIVER)  # 12! alone exceeds the default


def test_parallel_arrow_blowup_is_refused():
    q = explicit_quiver(1, [(0, 0)] * 12)  # 12! arrow bijections
    with pytest.raises(BudgetError):
        enumerate_automorphisms(q, budget=10 ** 6)


# ---------------------------------------------------------------------------
# table structures
# ---------------------------------------------------------------------------

def ti_table_structure():
    table = {(x, y): transporters(TI_RULE, x, y)
             for x in PITCH for y in PITCH}
    return SigmaVLSStructure(PITCH, TI.elements(), table)


def test_table_structure_round_trip():
    m = ti_table_structure()
    q = vls_of_structure(m)
    assert len(q.vertices) == 12 and len(q.arrows) == 288
    assert [(q.src[a], q.tgt[a], arrow_payload(a)) for a in q.arrows] == \
        list_subjective(TI_QUIVER)
    generic = sigma_vls_to_structure(m)
    assert generic.signature == sigma_vls_signature()
    again = structure_to_sigma_vls(generic)
    assert again.vlr_table == m.vlr_table


def test_empty_arrow_carrier():
    point = FinSet.of(Atom("Pitch", 0))
    m = SigmaVLSStructure(point, FinSet(()), {
        (Atom("Pitch", 0), Atom("Pitch", 0)): FinSet(())})
    q = vls_of_structure(m)
    assert len(q.vertices) == 1 and len(q.arrows) == 0


def test_two_pitch_one_arrow():
    pitches = FinSet.of(Atom("Pitch", 0), Atom("Pitch", 1))
    arrow = Atom("Arrow", 0)
    table = {(x, y): FinSet(()) for x in pitches for y in pitches}
    table[(Atom("Pitch", 0), Atom("Pitch", 1))] = FinSet.of(arrow)
    q = vls_of_structure(SigmaVLSStructure(pitches, FinSet.of(arrow), table))
    assert len(q.vertices) == 2 and len(q.arrows) == 1


def test_vlr_table_must_be_total():
    with pytest.raises(StructureError, match="not total"):
        SigmaVLSStructure(PITCH, TI.elements(), {})


def test_induced_hom_from_identity():
    m = ti_table_structure()
    h = StructureIso(m, m, {x: x for x in PITCH},
                     {g: g for g in TI.elements()})
    induced = hom_to_quiver_hom(h)
    assert induced == identity_quiver_hom(vls_of_structure(m))


def test_induced_hom_matches_conjugation():
    m = ti_table_structure()
    t1 = TI.transposition(1)
    t1_inv = TI.group.fun_tables["inv"][(t1,)]
    star = TI.group.fun_tables["star"]
    pitch_map = {x: TI.action[(t1, x)] for x in PITCH}
    arrow_map = {g: star[(star[(t1, g)], t1_inv)] for g in TI.elements()}
    induced = hom_to_quiver_hom(StructureIso(m, m, pitch_map, arrow_map))
    conjugated = conjugation_automorphism(TI_QUIVER, t1)
    assert induced.gamma0 == conjugated.gamma0
    assert induced.gamma1 == conjugated.gamma1


def test_induced_hom_rejects_broken_square():
    m = ti_table_structure()
    atoms = list(TI.elements())
    swapped = dict(zip(atoms, atoms))
    swapped[atoms[0]], swapped[atoms[1]] = atoms[1], atoms[0]
    with pytest.raises(StructureError, match=r"vlr square fails at \("):
        hom_to_quiver_hom(StructureIso(
            m, m, {x: x for x in PITCH}, swapped))


def test_induced_hom_is_functorial_on_identities_and_composites():
    m = ti_table_structure()
    star = TI.group.fun_tables["star"]
    inv = TI.group.fun_tables["inv"]

    def iso_for(phi):
        phi_inv = inv[(phi,)]
        return StructureIso(
            m, m,
            {x: TI.action[(phi, x)] for x in PITCH},
            {g: star[(star[(phi, g)], phi_inv)] for g in TI.elements()})

    t2, t3 = TI.transposition(2), TI.transposition(3)
    lhs = hom_to_quiver_hom(iso_for(star[(t2, t3)]))
    rhs = compose_quiver_homs(hom_to_quiver_hom(iso_for(t3)),
                              hom_to_quiver_hom(iso_for(t2)))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def test_dot_output_is_stable():
    q = explicit_quiver(2, [(0, 1), (1, 0)])
    out1 = to_dot(q, "pair")
    out2 = to_dot(q, "pair")
    assert out1 == out2
    assert out1.startswith("digraph pair {")
    assert '  v0 -> v1 [label="(atom a 0)"];' in out1
