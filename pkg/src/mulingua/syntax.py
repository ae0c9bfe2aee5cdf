"""Abstract syntax: signatures, type expressions, terms, and formulas.

Everything here is immutable data. The three syntactic categories are
mutually recursive: formulas contain terms, terms embed formulas (via
``FormulaTerm``), and type expressions may mention terms (family
application) and formulas (propositions read as types).

Binding forms (``Lambda``, ``Pi``, ``Sigma``, ``W``, ``Forall``,
``Exists``) compare and hash up to renaming of their bound variable;
all other nodes are plain structural data. ``substitute`` performs
simultaneous capture-avoiding substitution across all three categories.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union


# ---------------------------------------------------------------------------
# node classes
# ---------------------------------------------------------------------------

class _Binding:
    """Mixin for nodes with one bound variable: alpha-aware equality."""

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented if not isinstance(other, _Binding) else False
        return alpha_key(self) == alpha_key(other)

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return hash(alpha_key(self))


# -- type expressions -------------------------------------------------------

@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Prop:
    pass


@dataclass(frozen=True)
class Universe:
    """The level-1 kind of types.

    Only legal as the declared codomain of a function symbol, which turns
    that symbol into a type family; anywhere inside a level-0 type
    expression it is a level violation.
    """


@dataclass(frozen=True)
class Product:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class Coproduct:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class Arrow:
    dom: "TypeExpr"
    cod: "TypeExpr"


@dataclass(frozen=True, eq=False)
class Pi(_Binding):
    binder: str
    index_type: "TypeExpr"
    body: "TypeExpr"


@dataclass(frozen=True, eq=False)
class Sigma(_Binding):
    binder: str
    index_type: "TypeExpr"
    body: "TypeExpr"


@dataclass(frozen=True, eq=False)
class W(_Binding):
    """Well-founded trees: labels drawn from ``label_type``, each label's
    branching arity given by ``arity_body`` (which may mention the binder)."""

    binder: str
    label_type: "TypeExpr"
    arity_body: "TypeExpr"


@dataclass(frozen=True)
class Power:
    inner: "TypeExpr"


@dataclass(frozen=True)
class FamApp:
    """A declared type family applied to argument terms."""

    name: str
    args: tuple["Term", ...]


@dataclass(frozen=True)
class PropType:
    """A proposition read as the (sub-singleton) type of its proofs."""

    prop: "Formula"


TypeExpr = Union[
    Base, Zero, Unit, Prop, Universe, Product, Coproduct, Arrow,
    Pi, Sigma, W, Power, FamApp, PropType,
]


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    """Application of a signature symbol (head is a name) or of a term."""

    head: Union[str, "Term"]
    args: tuple["Term", ...] = ()


@dataclass(frozen=True)
class Pair:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Proj1:
    pair: "Term"


@dataclass(frozen=True)
class Proj2:
    pair: "Term"


@dataclass(frozen=True)
class Inl:
    value: "Term"


@dataclass(frozen=True)
class Inr:
    value: "Term"


@dataclass(frozen=True, eq=False)
class Lambda(_Binding):
    binder: str
    annot: "TypeExpr"
    body: "Term"


@dataclass(frozen=True)
class TupleProj:
    """0-based projection from a right-nested product spine."""

    tuple_term: "Term"
    index: int


@dataclass(frozen=True)
class Sup:
    """Tree constructor: a label plus a branch function into the same
    tree type."""

    label: "Term"
    branches: "Term"


@dataclass(frozen=True)
class FormulaTerm:
    formula: "Formula"


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Absurd:
    """Eliminate a term of the empty type at any expected type."""

    scrutinee: "Term"


Term = Union[
    Var, App, Pair, Proj1, Proj2, Inl, Inr, Lambda, TupleProj, Sup,
    FormulaTerm, Star, Absurd,
]


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class RelAtom:
    name: str
    args: tuple["Term", ...]


@dataclass(frozen=True)
class Eq:
    """Typed equality of two terms."""

    type: "TypeExpr"
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Member:
    """Propositional membership: a predicate evaluated at an element."""

    element: "Term"
    predicate: "Term"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, eq=False)
class Forall(_Binding):
    binder: str
    var_type: "TypeExpr"
    body: "Formula"


@dataclass(frozen=True, eq=False)
class Exists(_Binding):
    binder: str
    var_type: "TypeExpr"
    body: "Formula"


Formula = Union[
    RelAtom, Eq, Member, Top, Bottom, And, Or, Implies, Not, Forall, Exists,
]

Node = Union[TypeExpr, Term, Formula]


# ---------------------------------------------------------------------------
# signatures and contexts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunSymbol:
    """A function symbol f : A1, ..., An -> B.  Arity 0 gives a constant.
    A codomain of ``Universe()`` declares a type family instead."""

    name: str
    domain: tuple[TypeExpr, ...]
    codomain: TypeExpr

    @property
    def arity(self) -> int:
        return len(self.domain)

    @property
    def is_constant(self) -> bool:
        return self.arity == 0 and not self.is_family

    @property
    def is_family(self) -> bool:
        return isinstance(self.codomain, Universe)


@dataclass(frozen=True)
class RelSymbol:
    """A relation symbol R on A1, ..., An.  Arity 0 gives an atomic
    proposition."""

    name: str
    arity_types: tuple[TypeExpr, ...]

    @property
    def arity(self) -> int:
        return len(self.arity_types)


@dataclass(frozen=True)
class Signature:
    name: str
    base_types: tuple[str, ...]
    fun_symbols: tuple[FunSymbol, ...] = ()
    rel_symbols: tuple[RelSymbol, ...] = ()

    def __post_init__(self) -> None:
        for label, names in (
            ("base type", self.base_types),
            ("function symbol", [f.name for f in self.fun_symbols]),
            ("relation symbol", [r.name for r in self.rel_symbols]),
        ):
            seen = set()
            for n in names:
                if n in seen:
                    raise ValueError(f"duplicate {label} {n!r} in signature {self.name!r}")
                seen.add(n)

    def has_base(self, name: str) -> bool:
        return name in self.base_types

    def fun(self, name: str) -> Optional[FunSymbol]:
        for f in self.fun_symbols:
            if f.name == name:
                return f
        return None

    def rel(self, name: str) -> Optional[RelSymbol]:
        for r in self.rel_symbols:
            if r.name == name:
                return r
        return None

    def families(self) -> tuple[FunSymbol, ...]:
        return tuple(f for f in self.fun_symbols if f.is_family)

    def constants(self) -> tuple[FunSymbol, ...]:
        return tuple(f for f in self.fun_symbols if f.is_constant)


@dataclass(frozen=True)
class Context:
    """An ordered telescope of typed variables."""

    entries: tuple[tuple[str, TypeExpr], ...] = ()

    @staticmethod
    def of(*pairs: tuple[str, TypeExpr]) -> "Context":
        return Context(tuple(pairs))

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def type_of(self, name: str) -> Optional[TypeExpr]:
        for entry_name, entry_type in reversed(self.entries):
            if entry_name == name:
                return entry_type
        return None

    def extend(self, name: str, t: TypeExpr) -> "Context":
        return Context(self.entries + ((name, t),))

    def __iter__(self) -> Iterator[tuple[str, TypeExpr]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# alpha-equivalence
# ---------------------------------------------------------------------------

def alpha_key(node: Node, env: Optional[dict[str, int]] = None, depth: int = 0):
    """Canonical hashable rendering: bound variables become binder depths,
    free variables keep their names.  Two nodes are alpha-equivalent iff
    their keys are equal."""
    if env is None:
        env = {}

    def key(n: Node, e: dict[str, int], d: int):
        match n:
            case Var(name):
                return ("var", e.get(name, name))
            case App(head, args):
                h = head if isinstance(head, str) else key(head, e, d)
                return ("app", isinstance(head, str), h, tuple(key(a, e, d) for a in args))
            case Pair(a, b):
                return ("pair", key(a, e, d), key(b, e, d))
            case Proj1(t):
                return ("pr1", key(t, e, d))
            case Proj2(t):
                return ("pr2", key(t, e, d))
            case Inl(t):
                return ("inl", key(t, e, d))
            case Inr(t):
                return ("inr", key(t, e, d))
            case Lambda(x, ann, body):
                inner = {**e, x: d}
                return ("lambda", key(ann, e, d), key(body, inner, d + 1))
            case TupleProj(t, i):
                return ("proj", key(t, e, d), i)
            case Sup(label, branches):
                return ("sup", key(label, e, d), key(branches, e, d))
            case FormulaTerm(f):
                return ("fterm", key(f, e, d))
            case Star():
                return ("star",)
            case Absurd(t):
                return ("absurd", key(t, e, d))

            case Base(name):
                return ("base", name)
            case Zero():
                return ("zero",)
            case Unit():
                return ("unit",)
            case Prop():
                return ("prop",)
            case Universe():
                return ("universe",)
            case Product(a, b):
                return ("product", key(a, e, d), key(b, e, d))
            case Coproduct(a, b):
                return ("coproduct", key(a, e, d), key(b, e, d))
            case Arrow(a, b):
                return ("arrow", key(a, e, d), key(b, e, d))
            case Pi(x, ix, body):
                inner = {**e, x: d}
                return ("pi", key(ix, e, d), key(body, inner, d + 1))
            case Sigma(x, ix, body):
                inner = {**e, x: d}
                return ("sigma", key(ix, e, d), key(body, inner, d + 1))
            case W(x, lt, ab):
                inner = {**e, x: d}
                return ("w", key(lt, e, d), key(ab, inner, d + 1))
            case Power(a):
                return ("power", key(a, e, d))
            case FamApp(name, args):
                return ("famapp", name, tuple(key(a, e, d) for a in args))
            case PropType(f):
                return ("proptype", key(f, e, d))

            case RelAtom(name, args):
                return ("rel", name, tuple(key(a, e, d) for a in args))
            case Eq(t, l, r):
                return ("eq", key(t, e, d), key(l, e, d), key(r, e, d))
            case Member(el, pred):
                return ("member", key(el, e, d), key(pred, e, d))
            case Top():
                return ("top",)
            case Bottom():
                return ("bottom",)
            case And(l, r):
                return ("and", key(l, e, d), key(r, e, d))
            case Or(l, r):
                return ("or", key(l, e, d), key(r, e, d))
            case Implies(l, r):
                return ("implies", key(l, e, d), key(r, e, d))
            case Not(b):
                return ("not", key(b, e, d))
            case Forall(x, t, body):
                inner = {**e, x: d}
                return ("forall", key(t, e, d), key(body, inner, d + 1))
            case Exists(x, t, body):
                inner = {**e, x: d}
                return ("exists", key(t, e, d), key(body, inner, d + 1))
        raise TypeError(f"not a syntax node: {n!r}")

    return key(node, env, depth)


def alpha_eq(a: Node, b: Node) -> bool:
    return alpha_key(a) == alpha_key(b)


# ---------------------------------------------------------------------------
# free variables and substitution
# ---------------------------------------------------------------------------

def free_vars(node: Node) -> frozenset[str]:
    match node:
        case Var(name):
            return frozenset({name})
        case App(head, args):
            acc = free_vars(head) if not isinstance(head, str) else frozenset()
            for a in args:
                acc |= free_vars(a)
            return acc
        case Pair(a, b) | Product(a, b) | Coproduct(a, b) | Arrow(a, b) \
                | And(a, b) | Or(a, b) | Implies(a, b):
            return free_vars(a) | free_vars(b)
        case Proj1(t) | Proj2(t) | Inl(t) | Inr(t) | Absurd(t) | Power(t) | Not(t):
            return free_vars(t)
        case Lambda(x, ann, body):
            return free_vars(ann) | (free_vars(body) - {x})
        case TupleProj(t, _):
            return free_vars(t)
        case Sup(label, branches):
            return free_vars(label) | free_vars(branches)
        case FormulaTerm(f) | PropType(f):
            return free_vars(f)
        case Star() | Base(_) | Zero() | Unit() | Prop() | Universe() | Top() | Bottom():
            return frozenset()
        case Pi(x, ix, body) | Sigma(x, ix, body):
            return free_vars(ix) | (free_vars(body) - {x})
        case W(x, lt, ab):
            return free_vars(lt) | (free_vars(ab) - {x})
        case FamApp(_, args) | RelAtom(_, args):
            acc = frozenset()
            for a in args:
                acc |= free_vars(a)
            return acc
        case Eq(t, l, r):
            return free_vars(t) | free_vars(l) | free_vars(r)
        case Member(el, pred):
            return free_vars(el) | free_vars(pred)
        case Forall(x, t, body) | Exists(x, t, body):
            return free_vars(t) | (free_vars(body) - {x})
    raise TypeError(f"not a syntax node: {node!r}")


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(node: Node, subst: Mapping[str, Term]) -> Node:
    """Simultaneous capture-avoiding substitution of terms for variables.

    Works uniformly on terms, type expressions, and formulas; bound
    variables are renamed when a replacement would capture them.
    """
    if not subst:
        return node

    def go(n: Node, s: Mapping[str, Term]) -> Node:
        match n:
            case Var(name):
                return s.get(name, n)
            case App(head, args):
                new_head = head if isinstance(head, str) else go(head, s)
                return App(new_head, tuple(go(a, s) for a in args))
            case Pair(a, b):
                return Pair(go(a, s), go(b, s))
            case Proj1(t):
                return Proj1(go(t, s))
            case Proj2(t):
                return Proj2(go(t, s))
            case Inl(t):
                return Inl(go(t, s))
            case Inr(t):
                return Inr(go(t, s))
            case Lambda(x, ann, body):
                new_x, new_body, inner = _under_binder(x, body, s)
                return Lambda(new_x, go(ann, s), go(new_body, inner) if inner else new_body)
            case TupleProj(t, i):
                return TupleProj(go(t, s), i)
            case Sup(label, branches):
                return Sup(go(label, s), go(branches, s))
            case FormulaTerm(f):
                return FormulaTerm(go(f, s))
            case Star() | Base(_) | Zero() | Unit() | Prop() | Universe() | Top() | Bottom():
                return n
            case Absurd(t):
                return Absurd(go(t, s))

            case Product(a, b):
                return Product(go(a, s), go(b, s))
            case Coproduct(a, b):
                return Coproduct(go(a, s), go(b, s))
            case Arrow(a, b):
                return Arrow(go(a, s), go(b, s))
            case Pi(x, ix, body):
                new_x, new_body, inner = _under_binder(x, body, s)
                return Pi(new_x, go(ix, s), go(new_body, inner) if inner else new_body)
            case Sigma(x, ix, body):
                new_x, new_body, inner = _under_binder(x, body, s)
                return Sigma(new_x, go(ix, s), go(new_body, inner) if inner else new_body)
            case W(x, lt, ab):
                new_x, new_ab, inner = _under_binder(x, ab, s)
                return W(new_x, go(lt, s), go(new_ab, inner) if inner else new_ab)
            case Power(a):
                return Power(go(a, s))
            case FamApp(name, args):
                return FamApp(name, tuple(go(a, s) for a in args))
            case PropType(f):
                return PropType(go(f, s))

            case RelAtom(name, args):
                return RelAtom(name, tuple(go(a, s) for a in args))
            case Eq(t, l, r):
                return Eq(go(t, s), go(l, s), go(r, s))
            case Member(el, pred):
                return Member(go(el, s), go(pred, s))
            case And(l, r):
                return And(go(l, s), go(r, s))
            case Or(l, r):
                return Or(go(l, s), go(r, s))
            case Implies(l, r):
                return Implies(go(l, s), go(r, s))
            case Not(b):
                return Not(go(b, s))
            case Forall(x, t, body):
                new_x, new_body, inner = _under_binder(x, body, s)
                return Forall(new_x, go(t, s), go(new_body, inner) if inner else new_body)
            case Exists(x, t, body):
                new_x, new_body, inner = _under_binder(x, body, s)
                return Exists(new_x, go(t, s), go(new_body, inner) if inner else new_body)
        raise TypeError(f"not a syntax node: {n!r}")

    def _under_binder(x: str, body: Node, s: Mapping[str, Term]):
        """Restrict the substitution to the binder's scope and rename the
        binder if any replacement would capture it.  Returns the (possibly
        fresh) binder, the body ready for the inner substitution, and that
        substitution (None when nothing is left to do)."""
        body_fv = free_vars(body)
        active = {k: v for k, v in s.items() if k != x and k in body_fv}
        if not active:
            return x, body, None
        if any(x in free_vars(v) for v in active.values()):
            avoid = set(body_fv)
            for v in active.values():
                avoid |= free_vars(v)
            avoid |= set(active)
            new_x = fresh_name(x, avoid)
            active[x] = Var(new_x)
            return new_x, body, active
        return x, body, active

    return go(node, dict(subst))


# ---------------------------------------------------------------------------
# rendering (S-expression style, used in diagnostics and by the DSL printer)
# ---------------------------------------------------------------------------

def show(node: Node) -> str:
    match node:
        case Var(name):
            return name
        case App(head, args):
            if isinstance(head, str):
                return f"({head}{''.join(' ' + show(a) for a in args)})"
            return f"(apply {show(head)}{''.join(' ' + show(a) for a in args)})"
        case Pair(a, b):
            return f"(pair {show(a)} {show(b)})"
        case Proj1(t):
            return f"(pr1 {show(t)})"
        case Proj2(t):
            return f"(pr2 {show(t)})"
        case Inl(t):
            return f"(inl {show(t)})"
        case Inr(t):
            return f"(inr {show(t)})"
        case Lambda(x, ann, body):
            return f"(lambda ({x} {show(ann)}) {show(body)})"
        case TupleProj(t, i):
            return f"(proj {show(t)} {i})"
        case Sup(label, branches):
            return f"(sup {show(label)} {show(branches)})"
        case FormulaTerm(f):
            return f"(formula {show(f)})"
        case Star():
            return "star"
        case Absurd(t):
            return f"(absurd {show(t)})"

        case Base(name):
            return name
        case Zero():
            return "0"
        case Unit():
            return "1"
        case Prop():
            return "Prop"
        case Universe():
            return "Type"
        case Product(a, b):
            return f"(* {show(a)} {show(b)})"
        case Coproduct(a, b):
            return f"(+ {show(a)} {show(b)})"
        case Arrow(a, b):
            return f"(-> {show(a)} {show(b)})"
        case Pi(x, ix, body):
            return f"(pi ({x} {show(ix)}) {show(body)})"
        case Sigma(x, ix, body):
            return f"(sigma ({x} {show(ix)}) {show(body)})"
        case W(x, lt, ab):
            return f"(w ({x} {show(lt)}) {show(ab)})"
        case Power(a):
            return f"(power {show(a)})"
        case FamApp(name, args):
            return f"({name}{''.join(' ' + show(a) for a in args)})"
        case PropType(f):
            return f"(prop {show(f)})"

        case RelAtom(name, args):
            return f"(rel {name}{''.join(' ' + show(a) for a in args)})"
        case Eq(t, l, r):
            return f"(= {show(t)} {show(l)} {show(r)})"
        case Member(el, pred):
            return f"(in {show(el)} {show(pred)})"
        case Top():
            return "top"
        case Bottom():
            return "bottom"
        case And(l, r):
            return f"(and {show(l)} {show(r)})"
        case Or(l, r):
            return f"(or {show(l)} {show(r)})"
        case Implies(l, r):
            return f"(implies {show(l)} {show(r)})"
        case Not(b):
            return f"(not {show(b)})"
        case Forall(x, t, body):
            return f"(forall ({x} {show(t)}) {show(body)})"
        case Exists(x, t, body):
            return f"(exists ({x} {show(t)}) {show(body)})"
    raise TypeError(f"not a syntax node: {node!r}")
