"""Finite-set models: structures, interpretation, evaluation, theories.

A structure assigns finite carriers to base types, total lookup tables
to function symbols, subsets to relation symbols, and set-valued tables
to type families.  Types are interpreted compositionally: products as
cartesian products, coproducts as tagged unions, function types as all
tables, dependent products as all sections, powers as tables into the
two truth values, and tree types by depth-bounded enumeration.

Truth values are classical: ``Prop`` denotes {false, true}, conjunction
is meet, disjunction join, implication the order, and the quantifiers
are iterated meets and joins over the interpreted bound type.

Every enumeration follows one canonical order (carrier order, pairs
lexicographic, injections left first, tables by output tuples), so all
results are deterministic.  Function-type carriers are enumerated
lazily; the element budget (default 10^6, override via the
MULINGUA_BUDGET environment variable) bounds any enumeration a
quantifier actually demands.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .diagnostics import BudgetError, StructureError, Verdict
from .syntax import (
    Absurd, And, App, Arrow, Base, Bottom, Context, Coproduct, Eq, Exists,
    FamApp, Forall, Formula, FormulaTerm, Implies, Inl, Inr, Lambda, Member,
    Not, Or, Pair, Pi, Power, Product, Prop, PropType, Proj1, Proj2, RelAtom,
    Sigma, Signature, Star, Sup, Term, Top, TupleProj, TypeExpr, Unit,
    Universe, Var, W, Zero, free_vars, show,
)

DEFAULT_BUDGET = 10 ** 6
DEFAULT_TREE_DEPTH = 6

Env = dict[str, "Value"]


def element_budget(budget: Optional[int] = None) -> int:
    """Resolve the effective element budget (argument, then environment
    variable, then default)."""
    if budget is not None:
        return budget
    raw = os.environ.get("MULINGUA_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise BudgetError(
                f"MULINGUA_BUDGET must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# semantic values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """An element of a named finite carrier."""

    carrier: str
    index: int


@dataclass(frozen=True)
class StarV:
    pass


@dataclass(frozen=True)
class TruthV:
    value: bool


@dataclass(frozen=True)
class PairV:
    first: "Value"
    second: "Value"


@dataclass(frozen=True)
class InlV:
    value: "Value"


@dataclass(frozen=True)
class InrV:
    value: "Value"


@dataclass(frozen=True)
class RatV:
    """An exact rational leaf (used by rhythm-tree labels)."""

    value: Fraction


class _Tabular:
    """Shared lookup behaviour for table-like values."""

    entries: tuple[tuple["Value", "Value"], ...]

    def apply(self, argument: "Value") -> "Value":
        mapping = self.__dict__.get("_map")
        if mapping is None:
            mapping = dict(self.entries)
            object.__setattr__(self, "_map", mapping)
        try:
            return mapping[argument]
        except KeyError:
            raise StructureError(f"table has no entry for {argument!r}") from None

    def domain_values(self) -> tuple["Value", ...]:
        return tuple(k for k, _ in self.entries)


@dataclass(frozen=True)
class TableV(_Tabular):
    """A total function as a finite lookup table, keys in canonical
    domain order.  Also represents subsets, as tables into truth values."""

    entries: tuple[tuple["Value", "Value"], ...]


@dataclass(frozen=True)
class SectionV(_Tabular):
    """A dependent function: one value per index element, keys in
    canonical index order."""

    entries: tuple[tuple["Value", "Value"], ...]


@dataclass(frozen=True)
class TreeV:
    """A well-founded tree; branches ordered by the label's arity set."""

    label: "Value"
    branches: tuple["TreeV", ...]


Value = Union[Atom, StarV, TruthV, PairV, InlV, InrV, RatV, TableV, SectionV, TreeV]

FALSE = TruthV(False)
TRUE = TruthV(True)


@dataclass(frozen=True)
class FinSet:
    """A finite set of distinct values in a fixed canonical order."""

    elements: tuple[Value, ...]

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise StructureError("finite set has duplicate elements")

    @staticmethod
    def of(*elements: Value) -> "FinSet":
        return FinSet(tuple(elements))

    def __iter__(self) -> Iterator[Value]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v: Value) -> bool:
        members = self.__dict__.get("_members")
        if members is None:
            members = frozenset(self.elements)
            object.__setattr__(self, "_members", members)
        return v in members

    def index(self, v: Value) -> int:
        return self.elements.index(v)


PROP_SET = FinSet((FALSE, TRUE))


# ---------------------------------------------------------------------------
# structures
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Structure:
    """A model of a signature in finite sets.

    ``fun_tables`` maps each function symbol to a table keyed by
    argument tuples (constants use the empty tuple); ``rel_tables``
    holds the accepted tuples of each relation; ``fam_tables`` maps
    each type family to the finite set at each argument tuple.
    ``element_names`` optionally names carrier atoms for rendering.
    Structures are immutable after construction.
    """

    signature: Signature
    carriers: dict[str, FinSet]
    fun_tables: dict[str, dict[tuple[Value, ...], Value]] = field(default_factory=dict)
    rel_tables: dict[str, frozenset[tuple[Value, ...]]] = field(default_factory=dict)
    fam_tables: dict[str, dict[tuple[Value, ...], FinSet]] = field(default_factory=dict)
    element_names: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._eval_cache: dict[int, Optional[tuple[Term, Value]]] = {}
        for base in self.signature.base_types:
            if base not in self.carriers:
                raise StructureError(f"no carrier for base type {base!r}")
        for name, names in self.element_names.items():
            if name in self.carriers and len(names) != len(self.carriers[name]):
                raise StructureError(f"element names for {name!r} have wrong length")

    def carrier(self, name: str) -> FinSet:
        try:
            return self.carriers[name]
        except KeyError:
            raise StructureError(f"no carrier for base type {name!r}") from None

    def atom_name(self, v: Atom) -> str:
        names = self.element_names.get(v.carrier)
        if names is not None and 0 <= v.index < len(names):
            return names[v.index]
        return f"(atom {v.carrier} {v.index})"

    def named_atom(self, carrier: str, name: str) -> Atom:
        names = self.element_names.get(carrier)
        if names is None or name not in names:
            raise StructureError(f"no element named {name!r} in carrier {carrier!r}")
        return Atom(carrier, names.index(name))

    def constant_value(self, name: str) -> Value:
        table = self.fun_tables.get(name)
        if table is None:
            raise StructureError(f"no table for constant {name!r}")
        return table[()]

    def validate(self, budget: Optional[int] = None) -> Verdict:
        """Check every table is total on its domain and lands in its
        codomain.  Domains larger than the budget are trusted."""
        budget = element_budget(budget)
        for sym in self.signature.fun_symbols:
            table = self.fam_tables.get(sym.name) if sym.is_family \
                else self.fun_tables.get(sym.name)
            if table is None:
                return Verdict.failed(f"missing table for symbol {sym.name!r}")
            try:
                domain = list(self._domain_tuples(sym.domain, budget))
            except BudgetError:
                continue
            for args in domain:
                if args not in table:
                    return Verdict.failed(
                        f"table for {sym.name!r} is not total: missing "
                        f"{tuple(map(self.render, args))}")
                out = table[args]
                if sym.is_family:
                    if not isinstance(out, FinSet):
                        return Verdict.failed(
                            f"family {sym.name!r} must yield finite sets")
                elif not value_in_type(self, out, sym.codomain):
                    return Verdict.failed(
                        f"table for {sym.name!r} yields {self.render(out)} "
                        f"outside {show(sym.codomain)}")
        for rel in self.signature.rel_symbols:
            table = self.rel_tables.get(rel.name)
            if table is None:
                return Verdict.failed(f"missing table for relation {rel.name!r}")
            for tup in table:
                if len(tup) != rel.arity or not all(
                        value_in_type(self, v, t)
                        for v, t in zip(tup, rel.arity_types)):
                    return Verdict.failed(
                        f"relation {rel.name!r} contains a tuple outside its type")
        return Verdict.passed()

    def _domain_tuples(self, domain: tuple[TypeExpr, ...],
                       budget: int) -> Iterator[tuple[Value, ...]]:
        sets = []
        total = 1
        for t in domain:
            total *= type_size(self, t, budget=budget)
            if total > budget:
                raise BudgetError("domain too large to validate")
        for t in domain:
            sets.append(list(iter_type(self, t, budget=budget)))
        return itertools.product(*sets)

    def render(self, v: Value) -> str:
        return render_value(v, self)


# ---------------------------------------------------------------------------
# interpretation of types
# ---------------------------------------------------------------------------

def type_size(st: Structure, t: TypeExpr, env: Optional[Env] = None,
              budget: Optional[int] = None) -> int:
    """Cardinality of the interpretation, computed arithmetically where
    possible.  Raises ``BudgetError`` for tree types that keep growing
    past the depth bound."""
    env = env or {}
    budget = element_budget(budget)
    match t:
        case Base(name):
            return len(st.carrier(name))
        case Zero():
            return 0
        case Unit():
            return 1
        case Prop():
            return 2
        case Product(a, b):
            return type_size(st, a, env, budget) * type_size(st, b, env, budget)
        case Coproduct(a, b):
            return type_size(st, a, env, budget) + type_size(st, b, env, budget)
        case Arrow(a, b):
            return type_size(st, b, env, budget) ** type_size(st, a, env, budget)
        case Power(a):
            return 2 ** type_size(st, a, env, budget)
        case Pi(x, index_type, body):
            if x not in free_vars(body):
                return type_size(st, body, env, budget) ** type_size(st, index_type, env, budget)
            _guard(type_size(st, index_type, env, budget), budget)
            total = 1
            for v in iter_type(st, index_type, env, budget):
                total *= type_size(st, body, {**env, x: v}, budget)
            return total
        case Sigma(x, index_type, body):
            if x not in free_vars(body):
                return type_size(st, index_type, env, budget) * type_size(st, body, env, budget)
            _guard(type_size(st, index_type, env, budget), budget)
            total = 0
            for v in iter_type(st, index_type, env, budget):
                total += type_size(st, body, {**env, x: v}, budget)
            return total
        case W(_, _, _):
            return len(_tree_values(st, t, env, budget))
        case FamApp(_, _):
            return len(_family_set(st, t, env, budget))
        case PropType(f):
            return 1 if eval_formula(st, f, env, budget) else 0
        case Universe():
            raise StructureError("'Type' has no finite interpretation")
    raise StructureError(f"not a type expression: {t!r}")


def _guard(size: int, budget: int) -> None:
    if size > budget:
        raise BudgetError(
            f"enumeration of {size} elements exceeds the element budget ({budget})")


def iter_type(st: Structure, t: TypeExpr, env: Optional[Env] = None,
              budget: Optional[int] = None) -> Iterator[Value]:
    """Lazily enumerate the interpretation in canonical order."""
    env = env or {}
    budget = element_budget(budget)
    match t:
        case Base(name):
            yield from st.carrier(name)
        case Zero():
            return
        case Unit():
            yield StarV()
        case Prop():
            yield from PROP_SET
        case Product(a, b):
            for va in iter_type(st, a, env, budget):
                for vb in iter_type(st, b, env, budget):
                    yield PairV(va, vb)
        case Coproduct(a, b):
            for va in iter_type(st, a, env, budget):
                yield InlV(va)
            for vb in iter_type(st, b, env, budget):
                yield InrV(vb)
        case Arrow(a, b):
            dom = list(iter_type(st, a, env, budget))
            cod = list(iter_type(st, b, env, budget))
            for outputs in itertools.product(cod, repeat=len(dom)):
                yield TableV(tuple(zip(dom, outputs)))
        case Power(a):
            dom = list(iter_type(st, a, env, budget))
            for outputs in itertools.product(PROP_SET, repeat=len(dom)):
                yield TableV(tuple(zip(dom, outputs)))
        case Pi(x, index_type, body):
            index = list(iter_type(st, index_type, env, budget))
            fibers = [list(iter_type(st, body, {**env, x: v}, budget)) for v in index]
            for combo in itertools.product(*fibers):
                yield SectionV(tuple(zip(index, combo)))
        case Sigma(x, index_type, body):
            for v in iter_type(st, index_type, env, budget):
                for w in iter_type(st, body, {**env, x: v}, budget):
                    yield PairV(v, w)
        case W(_, _, _):
            yield from _tree_values(st, t, env, budget)
        case FamApp(_, _):
            yield from _family_set(st, t, env, budget)
        case PropType(f):
            if eval_formula(st, f, env, budget):
                yield StarV()
        case _:
            raise StructureError(f"cannot enumerate {t!r}")


def interpret_type(st: Structure, t: TypeExpr, env: Optional[Env] = None,
                   budget: Optional[int] = None) -> FinSet:
    """Materialize the interpretation as a finite set (budget-checked)."""
    budget = element_budget(budget)
    _guard(type_size(st, t, env, budget), budget)
    return FinSet(tuple(iter_type(st, t, env, budget)))


def _family_set(st: Structure, t: FamApp, env: Env, budget: int) -> FinSet:
    table = st.fam_tables.get(t.name)
    if table is None:
        raise StructureError(f"no table for type family {t.name!r}")
    key = tuple(eval_term(st, a, env, budget) for a in t.args)
    try:
        return table[key]
    except KeyError:
        raise StructureError(
            f"family table {t.name!r} has no entry for "
            f"{tuple(map(st.render, key))}") from None


def _tree_values(st: Structure, t: W, env: Env, budget: int,
                 depth: int = DEFAULT_TREE_DEPTH) -> tuple[TreeV, ...]:
    """All trees of the type, found as the fixpoint of depth-bounded
    enumeration; errors if new trees still appear at the bound."""
    labels = list(iter_type(st, t.label_type, env, budget))
    arities = {
        label: len(list(iter_type(st, t.arity_body, {**env, t.binder: label}, budget)))
        for label in labels
    }
    level: tuple[TreeV, ...] = ()
    for _ in range(depth):
        grown: list[TreeV] = []
        for label in labels:
            expected = len(level) ** arities[label]
            if len(grown) + expected > budget:
                raise BudgetError(
                    f"tree enumeration exceeds the element budget ({budget})")
            for combo in itertools.product(level, repeat=arities[label]):
                grown.append(TreeV(label, combo))
        new_level = tuple(grown)
        if new_level == level:
            return level
        level = new_level
    raise BudgetError(
        f"tree type still grows at depth {depth}; it has no finite enumeration")


def value_in_type(st: Structure, v: Value, t: TypeExpr,
                  env: Optional[Env] = None,
                  budget: Optional[int] = None) -> bool:
    """Semantic typing: does the value lie in the interpretation?  Checks
    table-like values entrywise without materializing function spaces."""
    env = env or {}
    budget = element_budget(budget)
    match t:
        case Base(name):
            return v in st.carrier(name)
        case Zero():
            return False
        case Unit():
            return v == StarV()
        case Prop():
            return isinstance(v, TruthV)
        case Product(a, b):
            return (isinstance(v, PairV)
                    and value_in_type(st, v.first, a, env, budget)
                    and value_in_type(st, v.second, b, env, budget))
        case Coproduct(a, b):
            if isinstance(v, InlV):
                return value_in_type(st, v.value, a, env, budget)
            if isinstance(v, InrV):
                return value_in_type(st, v.value, b, env, budget)
            return False
        case Arrow(a, b):
            if not isinstance(v, TableV):
                return False
            dom = tuple(iter_type(st, a, env, budget))
            return (v.domain_values() == dom
                    and all(value_in_type(st, out, b, env, budget)
                            for _, out in v.entries))
        case Power(a):
            if not isinstance(v, TableV):
                return False
            dom = tuple(iter_type(st, a, env, budget))
            return (v.domain_values() == dom
                    and all(isinstance(out, TruthV) for _, out in v.entries))
        case Pi(x, index_type, body):
            if not isinstance(v, (SectionV, TableV)):
                return False
            index = tuple(iter_type(st, index_type, env, budget))
            if v.domain_values() != index:
                return False
            return all(
                value_in_type(st, out, body, {**env, x: arg}, budget)
                for arg, out in v.entries)
        case Sigma(x, index_type, body):
            return (isinstance(v, PairV)
                    and value_in_type(st, v.first, index_type, env, budget)
                    and value_in_type(st, v.second, body,
                                      {**env, x: v.first}, budget))
        case W(x, label_type, arity_body):
            if not isinstance(v, TreeV):
                return False
            if not value_in_type(st, v.label, label_type, env, budget):
                return False
            arity = list(iter_type(st, arity_body, {**env, x: v.label}, budget))
            return (len(v.branches) == len(arity)
                    and all(value_in_type(st, b, t, env, budget)
                            for b in v.branches))
        case FamApp(_, _):
            return v in _family_set(st, t, env, budget)
        case PropType(f):
            return v == StarV() and eval_formula(st, f, env, budget)
    return False


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

_MISSING = object()


def eval_term(st: Structure, term: Term, env: Optional[Env] = None,
              budget: Optional[int] = None) -> Value:
    """Compositional evaluation of a checked term."""
    env = env or {}
    budget = element_budget(budget)
    return _eval(st, term, env, budget)


def _eval(st: Structure, term: Term, env: Env, budget: int) -> Value:
    # Closed subterms (notably big predicate lambdas) evaluate the same
    # under every environment, so memoize them per structure.  The cache
    # entry keeps a reference to the term so its id stays valid.
    if isinstance(term, (Lambda, FormulaTerm)):
        cached = st._eval_cache.get(id(term), _MISSING)
        if cached is _MISSING:
            if free_vars(term):
                st._eval_cache[id(term)] = None
            else:
                value = _eval_node(st, term, {}, budget)
                st._eval_cache[id(term)] = (term, value)
                return value
        elif cached is not None:
            return cached[1]
    return _eval_node(st, term, env, budget)


def _eval_node(st: Structure, term: Term, env: Env, budget: int) -> Value:
    match term:
        case Var(name):
            if name in env:
                return env[name]
            sym = st.signature.fun(name)
            if sym is not None and sym.is_constant:
                return st.constant_value(name)
            raise StructureError(f"unbound variable {name!r} at evaluation")
        case App(head, args) if isinstance(head, str):
            table = st.fun_tables.get(head)
            if table is None:
                raise StructureError(f"no table for symbol {head!r}")
            key = tuple(_eval(st, a, env, budget) for a in args)
            try:
                return table[key]
            except KeyError:
                raise StructureError(
                    f"table for {head!r} has no entry for "
                    f"{tuple(map(st.render, key))}") from None
        case App(head, args):
            value = _eval(st, head, env, budget)
            for a in args:
                if not isinstance(value, (TableV, SectionV)):
                    raise StructureError("application of a non-table value")
                value = value.apply(_eval(st, a, env, budget))
            return value
        case Pair(a, b):
            return PairV(_eval(st, a, env, budget), _eval(st, b, env, budget))
        case Proj1(p):
            v = _eval(st, p, env, budget)
            if not isinstance(v, PairV):
                raise StructureError("first projection of a non-pair value")
            return v.first
        case Proj2(p):
            v = _eval(st, p, env, budget)
            if not isinstance(v, PairV):
                raise StructureError("second projection of a non-pair value")
            return v.second
        case TupleProj(t, i):
            v = _eval(st, t, env, budget)
            spine = _value_spine(v)
            if not 0 <= i < len(spine):
                raise StructureError(f"projection index {i} out of range")
            return spine[i]
        case Inl(t):
            return InlV(_eval(st, t, env, budget))
        case Inr(t):
            return InrV(_eval(st, t, env, budget))
        case Lambda(x, annot, body):
            _guard(type_size(st, annot, env, budget), budget)
            return TableV(tuple(
                (v, _eval(st, body, {**env, x: v}, budget))
                for v in iter_type(st, annot, env, budget)))
        case FormulaTerm(f):
            return TruthV(eval_formula(st, f, env, budget))
        case Star():
            return StarV()
        case Sup(label, branches):
            label_v = _eval(st, label, env, budget)
            branch_v = _eval(st, branches, env, budget)
            if not isinstance(branch_v, (TableV, SectionV)):
                raise StructureError("sup branches must evaluate to a table")
            return TreeV(label_v, tuple(out for _, out in branch_v.entries))
        case Absurd(_):
            raise StructureError("evaluated a term of the empty type")
    raise StructureError(f"not a term: {term!r}")


def _value_spine(v: Value) -> tuple[Value, ...]:
    if isinstance(v, PairV):
        return (v.first,) + _value_spine(v.second)
    return (v,)


def eval_formula(st: Structure, f: Formula, env: Optional[Env] = None,
                 budget: Optional[int] = None) -> bool:
    """Two-valued semantics; quantifiers enumerate the bound type."""
    env = env or {}
    budget = element_budget(budget)
    match f:
        case RelAtom(name, args):
            table = st.rel_tables.get(name)
            if table is None:
                raise StructureError(f"no table for relation {name!r}")
            return tuple(_eval(st, a, env, budget) for a in args) in table
        case Eq(_, lhs, rhs):
            return _eval(st, lhs, env, budget) == _eval(st, rhs, env, budget)
        case Member(element, predicate):
            pred = _eval(st, predicate, env, budget)
            if not isinstance(pred, (TableV, SectionV)):
                raise StructureError("membership predicate is not a table")
            return pred.apply(_eval(st, element, env, budget)) == TRUE
        case Top():
            return True
        case Bottom():
            return False
        case And(l, r):
            return eval_formula(st, l, env, budget) and eval_formula(st, r, env, budget)
        case Or(l, r):
            return eval_formula(st, l, env, budget) or eval_formula(st, r, env, budget)
        case Implies(l, r):
            return (not eval_formula(st, l, env, budget)) or eval_formula(st, r, env, budget)
        case Not(body):
            return not eval_formula(st, body, env, budget)
        case Forall(x, t, body):
            return all(
                eval_formula(st, body, {**env, x: v}, budget)
                for v in _quantifier_domain(st, t, env, budget))
        case Exists(x, t, body):
            return any(
                eval_formula(st, body, {**env, x: v}, budget)
                for v in _quantifier_domain(st, t, env, budget))
    raise StructureError(f"not a formula: {f!r}")


def _quantifier_domain(st: Structure, t: TypeExpr, env: Env,
                       budget: int) -> Iterator[Value]:
    _guard(type_size(st, t, env, budget), budget)
    return iter_type(st, t, env, budget)


def all_environments(st: Structure, ctx: Context,
                     budget: Optional[int] = None) -> Iterator[Env]:
    """Every assignment of values to the context's telescope, in
    canonical order."""
    budget = element_budget(budget)
    entries = ctx.entries

    def rec(i: int, env: Env) -> Iterator[Env]:
        if i == len(entries):
            yield dict(env)
            return
        name, t = entries[i]
        for v in _quantifier_domain(st, t, env, budget):
            yield from rec(i + 1, {**env, name: v})

    yield from rec(0, {})


def derivable(st: Structure, ctx: Context, f: Formula,
              budget: Optional[int] = None) -> bool:
    """True when the formula evaluates to true under every substitution
    of the context in this model."""
    return all(eval_formula(st, f, env, budget)
               for env in all_environments(st, ctx, budget))


# ---------------------------------------------------------------------------
# theories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoryAxiom:
    label: str
    context: Context
    formula: Formula


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: tuple[TheoryAxiom, ...]


@dataclass(frozen=True)
class AxiomResult:
    label: str
    passed: bool
    counterexample: Optional[tuple[tuple[str, Value], ...]]


@dataclass(frozen=True)
class TheoryReport:
    theory: str
    structure: str
    results: tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self, st: Optional[Structure] = None) -> str:
        lines = []
        for r in self.results:
            if r.passed:
                lines.append(f"{r.label}: pass")
            else:
                env = " ".join(
                    f"({name} {render_value(v, st)})"
                    for name, v in (r.counterexample or ()))
                lines.append(f"{r.label}: FAIL counterexample ({env})")
        total = len(self.results)
        good = sum(1 for r in self.results if r.passed)
        lines.append(f"{total} axiom(s), {good} pass, {total - good} fail")
        return "\n".join(lines)


def check_theory(st: Structure, th: Theory, structure_name: str = "structure",
                 budget: Optional[int] = None) -> TheoryReport:
    """Evaluate every axiom under every substitution of its context,
    recording the first counterexample of each failing axiom."""
    if st.signature != th.signature:
        raise StructureError(
            f"structure is over {st.signature.name!r}, theory over "
            f"{th.signature.name!r}")
    results = []
    for axiom in th.axioms:
        counterexample = None
        for env in all_environments(st, axiom.context, budget):
            if not eval_formula(st, axiom.formula, env, budget):
                counterexample = tuple(
                    (name, env[name]) for name in axiom.context.names())
                break
        results.append(AxiomResult(axiom.label, counterexample is None,
                                   counterexample))
    return TheoryReport(th.name, structure_name, tuple(results))


# ---------------------------------------------------------------------------
# structure homomorphisms
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class StructureHom:
    """A family of maps between carriers, one per base type."""

    source: Structure
    target: Structure
    component_maps: dict[str, dict[Value, Value]]


def identity_hom(st: Structure) -> StructureHom:
    return StructureHom(st, st, {
        base: {v: v for v in st.carrier(base)}
        for base in st.signature.base_types})


def check_structure_hom(h: StructureHom,
                        budget: Optional[int] = None) -> Verdict:
    """Totality of the components, commuting squares for every function
    symbol, and preservation of every relation.  Compatibility with the
    constructors is checked at base types and extended componentwise
    through products, coproducts, and (for bijective components) powers
    and function types."""
    budget = element_budget(budget)
    sig = h.source.signature
    if sig != h.target.signature:
        return Verdict.failed("source and target have different signatures")
    for base in sig.base_types:
        cmap = h.component_maps.get(base)
        if cmap is None:
            return Verdict.failed(f"component map missing for {base!r}")
        for v in h.source.carrier(base):
            if v not in cmap:
                return Verdict.failed(f"component map for {base!r} is not total")
            if cmap[v] not in h.target.carrier(base):
                return Verdict.failed(
                    f"component map for {base!r} leaves the target carrier")
    for sym in sig.fun_symbols:
        if sym.is_family:
            continue
        try:
            domains = [list(iter_type(h.source, t, budget=budget))
                       for t in sym.domain]
        except BudgetError:
            return Verdict.failed(f"domain of {sym.name!r} exceeds the budget")
        for args in itertools.product(*domains):
            mapped_args = tuple(
                _transport(h, v, t, budget)
                for v, t in zip(args, sym.domain))
            lhs = _transport(h, h.source.fun_tables[sym.name][args],
                             sym.codomain, budget)
            rhs = h.target.fun_tables[sym.name][mapped_args]
            if lhs != rhs:
                shown = ", ".join(h.source.render(a) for a in args)
                return Verdict.failed(
                    f"square for {sym.name!r} fails at ({shown}): "
                    f"{h.target.render(lhs)} != {h.target.render(rhs)}")
    for rel in sig.rel_symbols:
        for tup in h.source.rel_tables.get(rel.name, frozenset()):
            mapped = tuple(
                _transport(h, v, t, budget)
                for v, t in zip(tup, rel.arity_types))
            if mapped not in h.target.rel_tables.get(rel.name, frozenset()):
                shown = ", ".join(h.source.render(v) for v in tup)
                return Verdict.failed(
                    f"relation {rel.name!r} not preserved at ({shown})")
    return Verdict.passed()


def _transport(h: StructureHom, v: Value, t: TypeExpr, budget: int) -> Value:
    match t:
        case Base(name):
            try:
                return h.component_maps[name][v]
            except KeyError:
                raise StructureError(
                    f"component map for {name!r} is not total") from None
        case Unit() | Prop():
            return v
        case Product(a, b):
            assert isinstance(v, PairV)
            return PairV(_transport(h, v.first, a, budget),
                         _transport(h, v.second, b, budget))
        case Coproduct(a, b):
            if isinstance(v, InlV):
                return InlV(_transport(h, v.value, a, budget))
            assert isinstance(v, InrV)
            return InrV(_transport(h, v.value, b, budget))
        case Arrow(_, _) | Power(_):
            assert isinstance(v, TableV)
            if isinstance(t, Arrow):
                dom_t, cod_t = t.dom, t.cod
            else:
                dom_t, cod_t = t.inner, Prop()
            moved = {
                _transport(h, arg, dom_t, budget): _transport(h, out, cod_t, budget)
                for arg, out in v.entries}
            target_dom = tuple(iter_type(h.target, dom_t, budget=budget))
            if set(moved) != set(target_dom):
                raise StructureError(
                    f"cannot transport along {show(t)}: component is not a "
                    "bijection")
            return TableV(tuple((arg, moved[arg]) for arg in target_dom))
    raise StructureError(f"component transport not supported for {show(t)}")


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_value(v: Value, st=None) -> str:
    """Deterministic S-expression rendering of a semantic value.  ``st``
    may be a structure, a plain atom-tag-to-names mapping, or None."""
    match v:
        case Atom(carrier, index):
            names = st.element_names if isinstance(st, Structure) else st
            if names:
                per_carrier = names.get(carrier)
                if per_carrier is not None and 0 <= index < len(per_carrier):
                    return per_carrier[index]
            return f"(atom {carrier} {index})"
        case StarV():
            return "star"
        case TruthV(b):
            return "true" if b else "false"
        case PairV(a, b):
            return f"(pair {render_value(a, st)} {render_value(b, st)})"
        case InlV(x):
            return f"(inl {render_value(x, st)})"
        case InrV(x):
            return f"(inr {render_value(x, st)})"
        case RatV(q):
            return str(q)
        case TableV(entries):
            if entries and all(isinstance(out, TruthV) for _, out in entries):
                members = " ".join(render_value(k, st)
                                   for k, out in entries if out.value)
                return f"(set {members})" if members else "(set)"
            body = " ".join(
                f"({render_value(k, st)} {render_value(out, st)})"
                for k, out in entries)
            return f"(table {body})" if entries else "(table)"
        case SectionV(entries):
            body = " ".join(
                f"({render_value(k, st)} {render_value(out, st)})"
                for k, out in entries)
            return f"(section {body})" if entries else "(section)"
        case TreeV(label, branches):
            inner = "".join(" " + render_value(b, st) for b in branches)
            return f"(tree {render_value(label, st)}{inner})"
    raise StructureError(f"not a value: {v!r}")
