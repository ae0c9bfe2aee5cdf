"""Judgment checking: formation rules, bidirectional term typing,
substitution, and context morphisms."""

import random

import pytest

from mulingua.diagnostics import TypeCheckError
from mulingua.kernel import (
    ContextMorphism, check_context_morphism, check_term,
    compose_context_morphisms, identity_morphism, infer_term,
    validate_signature, well_formed_context, well_formed_type,
)
from mulingua.musiclib import (
    group_signature, harmony_signature, music_signature,
)
from mulingua.syntax import (
    Absurd, App, Arrow, Base, Context, Coproduct, FamApp, Inl, Lambda, Pair,
    Pi, Power, Product, Prop, Proj1, Sigma, Star, Sup, TupleProj,
    Unit, Universe, Var, W, Zero, alpha_eq, free_vars, substitute,
)

from generators import random_group_element_term, random_typed_term

GROUP = group_signature()
HARMONY = harmony_signature()
MUSIC = music_signature(12)
G = Base("G")
EMPTY = Context()


# ---------------------------------------------------------------------------
# formation rules
# ---------------------------------------------------------------------------

def test_product_of_declared_bases_is_well_formed():
    assert well_formed_type(GROUP, EMPTY, Product(G, G))


def test_unknown_base_type_is_rejected():
    v = well_formed_type(GROUP, EMPTY, Pi("x", Zero(), Base("Mystery")))
    assert not v
    assert "unknown base type" in v.reason


def test_dependent_arity_family_telescope():
    ctx = Context.of(("n", Base("PC")))
    t = Sigma("x", Base("PC"),
              Arrow(FamApp("fin", (Var("x"),)), Base("PC")))
    assert well_formed_type(MUSIC, ctx, t)


def test_binder_shadowing_is_rejected():
    ctx = Context.of(("x", G))
    v = well_formed_type(GROUP, ctx, Pi("x", G, G))
    assert not v
    assert "shadowing" in v.reason


def test_level_violation_is_rejected():
    v = well_formed_type(GROUP, EMPTY, Product(G, Universe()))
    assert not v
    assert "level violation" in v.reason


def test_simple_types_and_constructors():
    for t in (Zero(), Unit(), Prop(), Power(G), Coproduct(G, Unit()),
              Arrow(Product(G, G), Prop())):
        assert well_formed_type(GROUP, EMPTY, t)


def test_signature_validation():
    assert validate_signature(GROUP)
    assert validate_signature(MUSIC)
    assert validate_signature(HARMONY)


def test_context_telescope_discipline():
    assert well_formed_context(MUSIC, Context.of(
        ("n", Base("PC")), ("s", Power(Base("PC")))))
    dup = Context.of(("n", Base("PC")), ("n", Base("IC")))
    assert not well_formed_context(MUSIC, dup)


# ---------------------------------------------------------------------------
# term checking
# ---------------------------------------------------------------------------

def test_interval_judgment():
    ctx = Context.of(("x", Base("Pitch")), ("y", Base("Pitch")))
    assert check_term(HARMONY, ctx, App("i", (Var("x"), Var("y"))),
                      Base("IVLS"))


def test_star_checks_against_unit():
    assert check_term(GROUP, EMPTY, Star(), Unit())


def test_triad_judgment():
    ctx = Context.of(("s", Base("DiatonicScale")), ("d", Base("ScaleDegree")))
    assert check_term(HARMONY, ctx, App("triad", (Var("s"), Var("d"))),
                      Base("Chord"))


def test_unbound_variable():
    v = check_term(GROUP, EMPTY, Var("nope"), G)
    assert not v and "unbound variable" in v.reason


def test_constants_are_valid_in_any_context():
    assert check_term(GROUP, EMPTY, Var("e"), G)
    assert check_term(GROUP, Context.of(("x", G)), Var("e"), G)


def test_arity_mismatch():
    v = check_term(GROUP, EMPTY, App("star", (App("e"),)), G)
    assert not v and "arity mismatch" in v.reason


def test_projection_of_non_product():
    v = check_term(GROUP, EMPTY, Proj1(App("e")), G)
    assert not v and "projection of non-product" in v.reason


def test_application_of_non_function():
    ctx = Context.of(("x", G))
    v = check_term(GROUP, ctx, App(Var("x"), (Var("x"),)), G)
    assert not v and "application of non-function" in v.reason


def test_sup_branch_domain_mismatch():
    wtype = W("x", Coproduct(Unit(), G), Unit())
    bad = Sup(Inl(Star()), Lambda("b", Zero(), Var("b")))
    v = check_term(GROUP, EMPTY, bad, wtype)
    assert not v and "domain" in v.reason


def test_sup_accepts_leaf_nodes():
    # constant empty arity: every label is a leaf
    wtype = W("x", G, Zero())
    leaf = Sup(App("e"), Lambda("b", Zero(), Absurd(Var("b"))))
    assert check_term(GROUP, EMPTY, leaf, wtype)


def test_dependent_arity_tree_type_is_well_formed():
    wtype = W("x", Base("PC"), FamApp("fin", (Var("x"),)))
    assert well_formed_type(MUSIC, EMPTY, wtype)


def test_dependent_pair_checking():
    ctx = Context.of(("p", Base("PC")))
    t = Sigma("x", Base("PC"), Arrow(FamApp("fin", (Var("x"),)), Base("PC")))
    term = Pair(Var("p"), Lambda("k", FamApp("fin", (Var("p"),)), Var("p")))
    assert check_term(MUSIC, ctx, term, t)


def test_tuple_projection_on_spine():
    ctx = Context.of(("t", Product(G, Product(G, Unit()))))
    assert infer_term(GROUP, ctx, TupleProj(Var("t"), 0)) == G
    assert infer_term(GROUP, ctx, TupleProj(Var("t"), 2)) == Unit()
    v = check_term(GROUP, ctx, TupleProj(Var("t"), 3), G)
    assert not v and "out of range" in v.reason


def test_absurd_checks_at_any_type():
    ctx = Context.of(("z", Zero()))
    assert check_term(GROUP, ctx, Absurd(Var("z")), G)
    assert check_term(GROUP, ctx, Absurd(Var("z")), Product(G, Prop()))


def test_lambda_against_arrow_and_pi():
    assert check_term(GROUP, EMPTY, Lambda("x", G, Var("x")), Arrow(G, G))
    wrong = check_term(GROUP, EMPTY, Lambda("x", Unit(), Var("x")),
                       Arrow(G, G))
    assert not wrong and "domain" in wrong.reason
    pc = Base("PC")
    assert check_term(MUSIC, EMPTY, Lambda("k", pc, Var("k")),
                      Pi("x", pc, pc))
    # lambdas whose body type mentions the binder synthesize a product
    section = Lambda("k", pc, Lambda("j", FamApp("fin", (Var("k"),)), Var("j")))
    inferred = infer_term(MUSIC, EMPTY, section)
    assert isinstance(inferred, Pi)


def test_bidirectional_coherence():
    rng = random.Random(7)
    ctx = Context.of(("a", G), ("b", G))
    for _ in range(60):
        term, t = random_typed_term(rng, ctx, 4)
        inferred = infer_term(GROUP, ctx, term)
        assert alpha_eq(inferred, t)
        assert check_term(GROUP, ctx, term, inferred)


def test_checker_rejects_ill_formed_expected_type():
    v = check_term(GROUP, EMPTY, Star(), Base("Mystery"))
    assert not v and "ill-formed expected type" in v.reason


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def test_alpha_equivalent_terms_compare_equal():
    left = Lambda("x", G, Var("x"))
    right = Lambda("y", G, Var("y"))
    assert left == right
    assert hash(left) == hash(right)
    assert Pair(left, Star()) == Pair(right, Star())
    assert Lambda("x", G, Var("z")) != Lambda("y", G, Var("y"))
    assert Pi("a", G, Product(G, G)) == Pi("b", G, Product(G, G))


def test_substitute_direct_replacement():
    term = App("i", (Var("x"), Var("y")))
    out = substitute(term, {"x": Var("c0"), "y": Var("c7")})
    assert out == App("i", (Var("c0"), Var("c7")))


def test_substitute_bound_occurrence_shielded():
    term = Lambda("x", G, Var("x"))
    assert substitute(term, {"x": App("e")}) == term


def test_substitute_capture_avoided():
    term = Lambda("y", G, Var("x"))
    out = substitute(term, {"x": Var("y")})
    assert isinstance(out, Lambda)
    assert out.binder != "y"
    assert out.body == Var("y")
    # alpha-equivalent to a lambda with any fresh binder returning y
    assert alpha_eq(out, Lambda("z", G, Var("y")))


def test_substitution_preserves_types():
    rng = random.Random(11)
    ctx = Context.of(("a", G), ("b", G))
    for _ in range(80):
        term, t = random_typed_term(rng, ctx, 5)
        replacement = random_group_element_term(rng, Context(), 3)
        out = substitute(term, {"a": replacement})
        assert check_term(GROUP, Context.of(("b", G)), out, t), \
            f"substitution broke typing for {term}"


def test_sequential_substitution_matches_simultaneous():
    # t[a := s][b := u] == t[a := s, b := u] for closed replacements
    rng = random.Random(113)
    ctx = Context.of(("a", G), ("b", G))
    for _ in range(60):
        term, _ = random_typed_term(rng, ctx, 5)
        s = random_group_element_term(rng, Context(), 3)
        u = random_group_element_term(rng, Context(), 3)
        sequential = substitute(substitute(term, {"a": s}), {"b": u})
        simultaneous = substitute(term, {"a": s, "b": u})
        assert alpha_eq(sequential, simultaneous)


def test_free_vars_after_substitution():
    rng = random.Random(13)
    ctx = Context.of(("a", G), ("b", G))
    for _ in range(60):
        term, _ = random_typed_term(rng, ctx, 4)
        replacement = random_group_element_term(rng, Context.of(("b", G)), 2)
        out = substitute(term, {"a": replacement})
        expected = (free_vars(term) - {"a"}) | (
            free_vars(replacement) if "a" in free_vars(term) else frozenset())
        assert free_vars(out) == expected


# ---------------------------------------------------------------------------
# context morphisms
# ---------------------------------------------------------------------------

def _random_morphism(rng, source: Context, target: Context) -> ContextMorphism:
    return ContextMorphism(source, target, tuple(
        random_group_element_term(rng, source, 2) for _ in target.names()))


def test_identity_laws():
    rng = random.Random(17)
    gamma = Context.of(("a", G), ("b", G))
    delta = Context.of(("x", G),)
    f = _random_morphism(rng, gamma, delta)
    assert compose_context_morphisms(identity_morphism(gamma), f) == f
    assert compose_context_morphisms(f, identity_morphism(delta)) == f


def test_composition_is_associative():
    rng = random.Random(19)
    a = Context.of(("a", G))
    b = Context.of(("b1", G), ("b2", G))
    c = Context.of(("c1", G))
    d = Context.of(("d1", G), ("d2", G))
    for _ in range(40):
        f = _random_morphism(rng, a, b)
        g = _random_morphism(rng, b, c)
        h = _random_morphism(rng, c, d)
        left = compose_context_morphisms(compose_context_morphisms(f, g), h)
        right = compose_context_morphisms(f, compose_context_morphisms(g, h))
        assert left == right


def test_morphism_checking():
    gamma = Context.of(("a", G))
    delta = Context.of(("x", G), ("y", G))
    good = ContextMorphism(gamma, delta, (Var("a"), App("inv", (Var("a"),))))
    assert check_context_morphism(GROUP, good)
    bad = ContextMorphism(gamma, delta, (Var("a"),))
    assert not check_context_morphism(GROUP, bad)
    ill = ContextMorphism(gamma, delta, (Var("a"), Star()))
    v = check_context_morphism(GROUP, ill)
    assert not v and "component 1" in v.reason


def test_composition_substitutes():
    gamma = Context.of(("a", G))
    delta = Context.of(("x", G))
    theta = Context.of(("y", G))
    f = ContextMorphism(gamma, delta, (App("inv", (Var("a"),)),))
    g = ContextMorphism(delta, theta, (App("star", (Var("x"), Var("x"))),))
    composed = compose_context_morphisms(f, g)
    assert composed.components == (App("star", (
        App("inv", (Var("a"),)), App("inv", (Var("a"),)))),)


def test_composition_context_mismatch():
    f = ContextMorphism(Context.of(("a", G)), Context.of(("x", G)), (Var("a"),))
    g = ContextMorphism(Context.of(("y", Unit())), Context(), ())
    with pytest.raises(TypeCheckError):
        compose_context_morphisms(f, g)
