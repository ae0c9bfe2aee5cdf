"""Propositions as types over finite families: inhabitation search,
the formula-to-type translation, and the packaged musical propositions
(the all-interval property and the dominant/leading-tone sentence).

Truth is inhabitation: a proposition holds when the corresponding type
has an element, and the element is the proof.  The search is canonical:
enumeration follows carrier order with pairs lexicographic, so proof
objects are reproducible byte for byte.  Dependent products are decided
fiber by fiber (a section exists iff every fiber is inhabited), never
by enumerating the full section space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .diagnostics import BudgetError, StructureError
from .semantics import (
    Env, FinSet, InlV, InrV, PairV, SectionV, StarV, Structure, TableV,
    TreeV, TruthV, Value, element_budget, eval_formula, interpret_type,
    iter_type, render_value, type_size,
)
from .syntax import (
    And, App, Arrow, Base, Bottom, Coproduct, Eq, Exists, FamApp, Forall,
    Formula, FormulaTerm, Implies, Lambda, Member, Not, Or, Pi, Power,
    Product, Prop, PropType, Proj1, Proj2, RelAtom, Sigma, Term, Top,
    TypeExpr, Unit, Var, W, Zero, show,
)

__all__ = [
    "FamilyType", "ProofObject", "all_interval_type", "constant_for",
    "domfunc_leading_tone_type", "explain_refutation", "first_empty_fiber",
    "inhabit", "interval_class", "pcset_predicate", "prop_as_type",
    "render_witness",
]


@dataclass(frozen=True)
class ProofObject:
    """A canonical inhabitant together with the proposition-as-type it
    proves."""

    value: Value
    of: TypeExpr


@dataclass(frozen=True)
class FamilyType:
    """A type family presented as one distinguished variable over an
    index type."""

    binder: str
    index_type: TypeExpr
    body: TypeExpr

    def fiber(self, st: Structure, value: Value,
              budget: Optional[int] = None) -> FinSet:
        return interpret_type(st, self.body, {self.binder: value}, budget)


def inhabit(st: Structure, t: TypeExpr, env: Optional[Env] = None,
            budget: Optional[int] = None) -> Optional[ProofObject]:
    """First inhabitant in canonical enumeration order, or None."""
    value = _first(st, t, dict(env or {}), element_budget(budget))
    if value is None:
        return None
    return ProofObject(value, t)


def _first(st: Structure, t: TypeExpr, env: Env, budget: int) -> Optional[Value]:
    match t:
        case Zero():
            return None
        case Unit():
            return StarV()
        case Prop():
            return TruthV(False)
        case Base(name):
            carrier = st.carrier(name)
            return carrier.elements[0] if len(carrier) else None
        case Product(a, b):
            left = _first(st, a, env, budget)
            if left is None:
                return None
            right = _first(st, b, env, budget)
            if right is None:
                return None
            return PairV(left, right)
        case Coproduct(a, b):
            left = _first(st, a, env, budget)
            if left is not None:
                return InlV(left)
            right = _first(st, b, env, budget)
            if right is not None:
                return InrV(right)
            return None
        case Arrow(a, b):
            dom = _domain(st, a, env, budget)
            if not dom:
                return TableV(())
            out = _first(st, b, env, budget)
            if out is None:
                return None
            return TableV(tuple((v, out) for v in dom))
        case Power(a):
            dom = _domain(st, a, env, budget)
            return TableV(tuple((v, TruthV(False)) for v in dom))
        case Pi(x, index_type, body):
            entries = []
            for v in _domain(st, index_type, env, budget):
                witness = _first(st, body, {**env, x: v}, budget)
                if witness is None:
                    return None
                entries.append((v, witness))
            return SectionV(tuple(entries))
        case Sigma(x, index_type, body):
            for v in _domain(st, index_type, env, budget):
                witness = _first(st, body, {**env, x: v}, budget)
                if witness is not None:
                    return PairV(v, witness)
            return None
        case W(x, label_type, arity_body):
            for label in _domain(st, label_type, env, budget):
                arity = interpret_type(st, arity_body, {**env, x: label}, budget)
                if len(arity) == 0:
                    return TreeV(label, ())
            return None
        case FamApp(_, _):
            fam = interpret_type(st, t, env, budget)
            return fam.elements[0] if len(fam) else None
        case PropType(f):
            return StarV() if eval_formula(st, f, env, budget) else None
    raise StructureError(f"cannot search {t!r}")


def _domain(st: Structure, t: TypeExpr, env: Env, budget: int) -> list[Value]:
    size = type_size(st, t, env, budget)
    if size > budget:
        raise BudgetError(
            f"index enumeration of {size} elements exceeds the budget ({budget})")
    return list(iter_type(st, t, env, budget))


def first_empty_fiber(st: Structure, t: Pi, env: Optional[Env] = None,
                      budget: Optional[int] = None) -> Optional[Value]:
    """For a dependent product: the first index value whose fiber is
    uninhabited, or None when a section exists."""
    env = dict(env or {})
    budget = element_budget(budget)
    for v in _domain(st, t.index_type, env, budget):
        if _first(st, t.body, {**env, t.binder: v}, budget) is None:
            return v
    return None


def explain_refutation(st: Structure, t: TypeExpr, env: Optional[Env] = None,
                       budget: Optional[int] = None) -> Optional[str]:
    """A one-line reason the type is empty, or None when it is inhabited."""
    env = dict(env or {})
    budget = element_budget(budget)
    if _first(st, t, env, budget) is not None:
        return None
    match t:
        case Zero():
            return "the empty type has no elements"
        case Base(name):
            return f"carrier {name!r} is empty"
        case Product(a, b):
            left = explain_refutation(st, a, env, budget)
            return left if left is not None else explain_refutation(st, b, env, budget)
        case Coproduct(_, _):
            return "neither summand is inhabited"
        case Arrow(_, b):
            return explain_refutation(st, b, env, budget)
        case Pi(x, _, body):
            bad = first_empty_fiber(st, t, env, budget)
            inner = explain_refutation(st, body, {**env, x: bad}, budget)
            return (f"fiber at {render_value(bad, st)} is empty"
                    + (f": {inner}" if inner else ""))
        case Sigma(_, index_type, _):
            return f"no element of {show(index_type)} admits a witness"
        case W(_, _, _):
            return "every label demands branches, so no finite tree exists"
        case PropType(f):
            return f"proposition {show(f)} is false"
        case FamApp(_, _):
            return "the family's set at this argument is empty"
    return "uninhabited"


# ---------------------------------------------------------------------------
# propositions as types
# ---------------------------------------------------------------------------

def prop_as_type(f: Formula) -> TypeExpr:
    """Conjunction becomes product, disjunction coproduct, implication
    function type, negation functions into the empty type, and the
    quantifiers dependent product and sum; atoms stay propositions
    (sub-singleton types)."""
    match f:
        case Top():
            return Unit()
        case Bottom():
            return Zero()
        case And(l, r):
            return Product(prop_as_type(l), prop_as_type(r))
        case Or(l, r):
            return Coproduct(prop_as_type(l), prop_as_type(r))
        case Implies(l, r):
            return Arrow(prop_as_type(l), prop_as_type(r))
        case Not(body):
            return Arrow(prop_as_type(body), Zero())
        case Forall(x, t, body):
            return Pi(x, t, prop_as_type(body))
        case Exists(x, t, body):
            return Sigma(x, t, prop_as_type(body))
        case RelAtom(_, _) | Eq(_, _, _) | Member(_, _):
            return PropType(f)
    raise StructureError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# packaged musical propositions
# ---------------------------------------------------------------------------

def constant_for(st: Structure, value: Value, t: TypeExpr) -> str:
    """Name of the first declared constant of the given type whose value
    matches."""
    for sym in st.signature.fun_symbols:
        if sym.is_constant and sym.codomain == t:
            if st.fun_tables.get(sym.name, {}).get(()) == value:
                return sym.name
    raise StructureError(
        f"no constant of type {show(t)} names the value {st.render(value)}")


def pcset_predicate(st: Structure, pcs: Iterable[Value],
                    carrier: str = "PC") -> Term:
    """A pitch-class set as a closed predicate term: a lambda testing
    equality against each member's constant."""
    base = Base(carrier)
    ordered = sorted(pcs, key=st.carrier(carrier).index)
    body: Formula = Bottom()
    for v in reversed(ordered):
        clause = Eq(base, Var("p"), App(constant_for(st, v, base)))
        body = clause if isinstance(body, Bottom) else Or(clause, body)
    return Lambda("p", base, FormulaTerm(body))


def interval_class(n: int, interval: int) -> int:
    """Representative of an interval under inversion: min(i, n - i)."""
    interval %= n
    return min(interval, n - interval)


def all_interval_type(st: Structure, chord: Iterable[Value]) -> TypeExpr:
    """The proposition that the chord realizes every interval class,
    as a dependent product over interval classes of dependent sums of
    witnessing pitch-class pairs.

    The chord enters as a closed predicate; each fiber constrains the
    pair to lie in the chord and to realize the bound interval class.
    """
    pc, ic = Base("PC"), Base("IC")
    chord_term = pcset_predicate(st, chord)
    pair = Var("q")
    realized = Eq(
        ic,
        App("intclass", (App("pcint", (Proj1(pair), Proj2(pair))),)),
        Var("i"))
    fiber = PropType(And(
        And(Member(Proj1(pair), chord_term), Member(Proj2(pair), chord_term)),
        realized))
    return Pi("i", ic, Sigma("q", Product(pc, pc), fiber))


def domfunc_leading_tone_type(st: Structure, key: Value) -> TypeExpr:
    """The proposition that every chord with dominant function in the
    key contains the key's leading tone: a dependent product over the
    dependent sum of chords paired with proofs of dominant function."""
    key_term = App(constant_for(st, key, Base("Key")))
    witness = Var("x")
    pairs = Sigma("c", Base("Chord"),
                  PropType(RelAtom("domfunc", (Var("c"), key_term))))
    body = PropType(RelAtom(
        "contains", (Proj1(witness), App("lt", (key_term,)))))
    return Pi("x", pairs, body)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_witness(v: Value, st: Optional[Structure] = None) -> str:
    """Proof objects in pair notation: dependent pairs as (x, p),
    sections as braced assignments."""
    match v:
        case PairV(a, b):
            return f"({render_witness(a, st)}, {render_witness(b, st)})"
        case SectionV(entries):
            inner = "; ".join(
                f"{render_witness(k, st)} => {render_witness(out, st)}"
                for k, out in entries)
            return "{" + inner + "}"
        case _:
            return render_value(v, st)
