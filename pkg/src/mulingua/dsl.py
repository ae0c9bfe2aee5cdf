"""The ``.mul`` source language: declarations for signatures, theories,
structures, contexts, terms, formulas, named types, and quiver requests.

Declarations resolve strictly top-down (no forward references) against
a workspace that already holds the built-in signatures, theories, and
models, and names are unique per kind.  Structures are validated for
totality as they load; judgment-level well-formedness of the other
declarations is the job of the ``check`` verb.

Grammar sketch::

    (signature NAME (types T ...)
               (fun (f (A ...) B) ...)
               (rel (R (A ...)) ...))
    (theory NAME over SIG (axiom [LABEL] (ctx (x A) ...) FORMULA) ...)
    (structure NAME of SIG
               (carrier T (e ...))
               (fun f ((args) val) ...)
               (rel R (tuple ...) ...))
    (context NAME (x A) ...)
    (term NAME CTX TERM)          ; CTX a context name or (ctx ...)
    (formula NAME CTX FORMULA)
    (type NAME TYPEEXPR)
    (quiver NAME table STRUCT)
    (quiver NAME group-action STRUCT PITCH-TYPE ACTION-FUN)
    (quiver NAME winding MODULUS MAX-WINDING)

Types use ``(* A B)``, ``(+ A B)``, ``(-> A B)``, ``(pi (x A) B)``,
``(sigma (x A) B)``, ``(w (x A) B)``, ``(power A)``, ``(prop F)``,
``0``, ``1``, ``Prop``, and family application ``(F t ...)``; a
function symbol whose codomain is ``Type`` declares a family.  Formulas
use ``(forall (x A) F)``, ``(exists (x A) F)``, ``(and F G)``,
``(or F G)``, ``(implies F G)``, ``(not F)``, ``(= A s t)``,
``(in t P)``, ``(rel R t ...)``, ``top``, ``bottom``.

Carrier element names may be symbols or bare integers; the words
``star``, ``true``, and ``false`` are reserved for value literals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import musiclib
from .diagnostics import StructureError
from .kernel import validate_signature
from .semantics import (
    Atom, FinSet, InlV, InrV, PairV, RatV, SectionV, StarV, Structure,
    TableV, Theory, TheoryAxiom, TreeV, TruthV, Value, iter_type,
    render_value,
)
from .sexpr import SNode, Sym, parse_sexprs
from .syntax import (
    Absurd, And, App, Arrow, Base, Bottom, Context, Coproduct, Eq, Exists,
    FamApp, Forall, Formula, FormulaTerm, FunSymbol, Implies, Inl, Inr,
    Lambda, Member, Not, Or, Pair, Pi, Power, Product, Prop, PropType,
    Proj1, Proj2, RelAtom, RelSymbol, Sigma, Signature, Star, Sup, Term,
    Top, TupleProj, TypeExpr, Unit, Universe, Var, W, Zero, show,
)
from .voiceleading import (
    GroupAction, Quiver, WindingPaths, sigma_vls_signature,
    structure_to_sigma_vls, vls, vls_of_structure,
)


@dataclass
class Workspace:
    """Everything nameable, builtin or loaded from source files.
    ``declared`` records what came from files, in order."""

    signatures: dict[str, Signature] = field(default_factory=dict)
    theories: dict[str, Theory] = field(default_factory=dict)
    structures: dict[str, Structure] = field(default_factory=dict)
    contexts: dict[str, Context] = field(default_factory=dict)
    terms: dict[str, tuple[Context, Term]] = field(default_factory=dict)
    formulas: dict[str, tuple[Context, Formula]] = field(default_factory=dict)
    types: dict[str, TypeExpr] = field(default_factory=dict)
    quivers: dict[str, Quiver] = field(default_factory=dict)
    declared: list[tuple[str, str]] = field(default_factory=list)

    _SINGULAR = {
        "signatures": "signature", "theories": "theory",
        "structures": "structure", "contexts": "context", "terms": "term",
        "formulas": "formula", "types": "type", "quivers": "quiver",
    }

    def _declare(self, kind: str, name: str, node: SNode) -> None:
        table = getattr(self, kind)
        if name in table:
            raise node.error(f"duplicate {self._SINGULAR[kind]} name {name!r}")
        self.declared.append((self._SINGULAR[kind], name))


# ---------------------------------------------------------------------------
# node helpers
# ---------------------------------------------------------------------------

def _sym(node: SNode, what: str = "a name") -> str:
    if not isinstance(node.value, Sym):
        raise node.error(f"expected {what}")
    return node.value.text


def _items(node: SNode, what: str = "a list") -> list[SNode]:
    if not node.is_list:
        raise node.error(f"expected {what}")
    return node.value


def _head(node: SNode) -> str:
    items = _items(node)
    if not items:
        raise node.error("empty expression")
    return _sym(items[0], "a keyword head")


def _element_name(node: SNode) -> str:
    if isinstance(node.value, Sym):
        return node.value.text
    if isinstance(node.value, int):
        return str(node.value)
    raise node.error("expected an element name")


# ---------------------------------------------------------------------------
# types, terms, formulas
# ---------------------------------------------------------------------------

def parse_type_node(node: SNode) -> TypeExpr:
    v = node.value
    if isinstance(v, int):
        if v == 0:
            return Zero()
        if v == 1:
            return Unit()
        raise node.error(f"unexpected number {v} in type position")
    if isinstance(v, Sym):
        if v.text == "Prop":
            return Prop()
        if v.text == "Type":
            return Universe()
        return Base(v.text)
    if isinstance(v, list):
        if not v:
            raise node.error("empty type expression")
        head = _sym(v[0], "a type constructor")
        rest = v[1:]
        if head in ("*", "+", "->"):
            if len(rest) < 2:
                raise node.error(f"'{head}' takes at least two types")
            parts = [parse_type_node(r) for r in rest]
            ctor = {"*": Product, "+": Coproduct, "->": Arrow}[head]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = ctor(p, out)
            return out
        if head in ("pi", "sigma", "w"):
            if len(rest) != 2:
                raise node.error(f"'{head}' takes a binder and a body")
            binder, index_type = _parse_binder(rest[0])
            body = parse_type_node(rest[1])
            ctor = {"pi": Pi, "sigma": Sigma, "w": W}[head]
            return ctor(binder, index_type, body)
        if head == "power":
            if len(rest) != 1:
                raise node.error("'power' takes one type")
            return Power(parse_type_node(rest[0]))
        if head == "prop":
            if len(rest) != 1:
                raise node.error("'prop' takes one formula")
            return PropType(parse_formula_node(rest[0]))
        return FamApp(head, tuple(parse_term_node(r) for r in rest))
    raise node.error("expected a type expression")


def _parse_binder(node: SNode) -> tuple[str, TypeExpr]:
    items = _items(node, "a binder (x A)")
    if len(items) != 2:
        raise node.error("a binder is written (x A)")
    return _sym(items[0], "a variable"), parse_type_node(items[1])


def parse_term_node(node: SNode) -> Term:
    v = node.value
    if isinstance(v, Sym):
        if v.text == "star":
            return Star()
        return Var(v.text)
    if isinstance(v, list):
        if not v:
            raise node.error("empty term")
        head = _sym(v[0], "a term head")
        rest = v[1:]
        match head:
            case "pair":
                if len(rest) != 2:
                    raise node.error("'pair' takes two terms")
                return Pair(parse_term_node(rest[0]), parse_term_node(rest[1]))
            case "pr1" | "pr2":
                if len(rest) != 1:
                    raise node.error(f"'{head}' takes one term")
                ctor = Proj1 if head == "pr1" else Proj2
                return ctor(parse_term_node(rest[0]))
            case "inl" | "inr":
                if len(rest) != 1:
                    raise node.error(f"'{head}' takes one term")
                ctor = Inl if head == "inl" else Inr
                return ctor(parse_term_node(rest[0]))
            case "lambda":
                if len(rest) != 2:
                    raise node.error("'lambda' takes a binder and a body")
                binder, annot = _parse_binder(rest[0])
                return Lambda(binder, annot, parse_term_node(rest[1]))
            case "proj":
                if len(rest) != 2 or not isinstance(rest[1].value, int):
                    raise node.error("'proj' takes a term and an index")
                return TupleProj(parse_term_node(rest[0]), rest[1].value)
            case "sup":
                if len(rest) != 2:
                    raise node.error("'sup' takes a label and a branch function")
                return Sup(parse_term_node(rest[0]), parse_term_node(rest[1]))
            case "formula":
                if len(rest) != 1:
                    raise node.error("'formula' takes one formula")
                return FormulaTerm(parse_formula_node(rest[0]))
            case "absurd":
                if len(rest) != 1:
                    raise node.error("'absurd' takes one term")
                return Absurd(parse_term_node(rest[0]))
            case "apply":
                if not rest:
                    raise node.error("'apply' takes a function term")
                return App(parse_term_node(rest[0]),
                           tuple(parse_term_node(r) for r in rest[1:]))
            case _:
                return App(head, tuple(parse_term_node(r) for r in rest))
    raise node.error("expected a term")


def parse_formula_node(node: SNode) -> Formula:
    v = node.value
    if isinstance(v, Sym):
        if v.text == "top":
            return Top()
        if v.text == "bottom":
            return Bottom()
        raise node.error(f"unknown formula {v.text!r}")
    if isinstance(v, list):
        if not v:
            raise node.error("empty formula")
        head = _sym(v[0], "a formula head")
        rest = v[1:]
        match head:
            case "and" | "or" | "implies":
                if len(rest) < 2:
                    raise node.error(f"'{head}' takes at least two formulas")
                parts = [parse_formula_node(r) for r in rest]
                ctor = {"and": And, "or": Or, "implies": Implies}[head]
                out = parts[-1]
                for p in reversed(parts[:-1]):
                    out = ctor(p, out)
                return out
            case "not":
                if len(rest) != 1:
                    raise node.error("'not' takes one formula")
                return Not(parse_formula_node(rest[0]))
            case "forall" | "exists":
                if len(rest) != 2:
                    raise node.error(f"'{head}' takes a binder and a body")
                binder, var_type = _parse_binder(rest[0])
                ctor = Forall if head == "forall" else Exists
                return ctor(binder, var_type, parse_formula_node(rest[1]))
            case "=":
                if len(rest) != 3:
                    raise node.error("'=' takes a type and two terms")
                return Eq(parse_type_node(rest[0]),
                          parse_term_node(rest[1]), parse_term_node(rest[2]))
            case "in":
                if len(rest) != 2:
                    raise node.error("'in' takes an element and a predicate")
                return Member(parse_term_node(rest[0]), parse_term_node(rest[1]))
            case "rel":
                if not rest:
                    raise node.error("'rel' takes a relation name")
                return RelAtom(_sym(rest[0], "a relation name"),
                               tuple(parse_term_node(r) for r in rest[1:]))
            case _:
                raise node.error(f"unknown formula head {head!r}")
    raise node.error("expected a formula")


# ---------------------------------------------------------------------------
# values (type-directed, with explicit fallbacks)
# ---------------------------------------------------------------------------

def parse_value_node(node: SNode, expected: Optional[TypeExpr],
                     scratch: Structure) -> Value:
    v = node.value
    if isinstance(v, Fraction):
        return RatV(v)
    if isinstance(v, (Sym, int)):
        text = v.text if isinstance(v, Sym) else str(v)
        if text == "star":
            return StarV()
        if text == "true":
            return TruthV(True)
        if text == "false":
            return TruthV(False)
        if isinstance(expected, Base):
            try:
                return scratch.named_atom(expected.name, text)
            except StructureError as err:
                raise node.error(str(err)) from None
        raise node.error(
            f"cannot resolve element {text!r} without a base type to look it "
            "up in")
    if isinstance(v, list):
        if not v:
            raise node.error("empty value")
        head = _sym(v[0], "a value head")
        rest = v[1:]
        match head:
            case "atom":
                if (len(rest) != 2 or not isinstance(rest[1].value, int)):
                    raise node.error("'atom' takes a carrier tag and an index")
                return Atom(_sym(rest[0], "a carrier tag"), rest[1].value)
            case "pair":
                first_t, second_t = _pair_types(expected)
                if len(rest) != 2:
                    raise node.error("'pair' takes two values")
                return PairV(parse_value_node(rest[0], first_t, scratch),
                             parse_value_node(rest[1], second_t, scratch))
            case "inl" | "inr":
                if len(rest) != 1:
                    raise node.error(f"'{head}' takes one value")
                inner_t = None
                if isinstance(expected, Coproduct):
                    inner_t = expected.left if head == "inl" else expected.right
                inner = parse_value_node(rest[0], inner_t, scratch)
                return InlV(inner) if head == "inl" else InrV(inner)
            case "set":
                domain_t = _subset_domain(node, expected)
                dom = list(iter_type(scratch, domain_t))
                members = {parse_value_node(r, domain_t, scratch) for r in rest}
                unknown = members - set(dom)
                if unknown:
                    raise node.error("set member outside the expected domain")
                return TableV(tuple((d, TruthV(d in members)) for d in dom))
            case "table" | "section":
                entries = []
                key_t, out_t = _table_types(expected)
                for entry in rest:
                    pair = _items(entry, "a (key value) entry")
                    if len(pair) != 2:
                        raise entry.error("a table entry is (key value)")
                    entries.append((parse_value_node(pair[0], key_t, scratch),
                                    parse_value_node(pair[1], out_t, scratch)))
                if key_t is not None:
                    order = {k: i for i, k in
                             enumerate(iter_type(scratch, key_t))}
                    entries.sort(key=lambda kv: order.get(kv[0], len(order)))
                ctor = TableV if head == "table" else SectionV
                return ctor(tuple(entries))
            case "tree":
                if not rest:
                    raise node.error("'tree' takes a label")
                label = parse_value_node(rest[0], None, scratch)
                branches = tuple(parse_value_node(r, None, scratch)
                                 for r in rest[1:])
                if not all(isinstance(b, TreeV) for b in branches):
                    raise node.error("tree branches must be trees")
                return TreeV(label, branches)
            case _:
                raise node.error(f"unknown value head {head!r}")
    raise node.error("expected a value")


def _pair_types(expected: Optional[TypeExpr]):
    if isinstance(expected, Product):
        return expected.left, expected.right
    return None, None


def _subset_domain(node: SNode, expected: Optional[TypeExpr]) -> TypeExpr:
    match expected:
        case Power(inner):
            return inner
        case Arrow(dom, Prop()):
            return dom
        case _:
            raise node.error(
                "'set' values need an expected subset type (power or "
                "predicate)")


def _table_types(expected: Optional[TypeExpr]):
    match expected:
        case Arrow(dom, cod):
            return dom, cod
        case Power(dom):
            return dom, Prop()
        case Pi(_, index_type, _):
            return index_type, None
        case _:
            return None, None


# ---------------------------------------------------------------------------
# declarations
# ---------------------------------------------------------------------------

def load_source(text: str, ws: Optional[Workspace] = None) -> Workspace:
    """Parse and resolve a source file into the workspace (a fresh one
    with the builtins when none is given)."""
    if ws is None:
        ws = builtin_workspace()
    for node in parse_sexprs(text):
        _load_declaration(node, ws)
    return ws


def _load_declaration(node: SNode, ws: Workspace) -> None:
    head = _head(node)
    items = node.value
    match head:
        case "signature":
            _load_signature(node, items, ws)
        case "theory":
            _load_theory(node, items, ws)
        case "structure":
            _load_structure(node, items, ws)
        case "context":
            name = _sym(items[1], "a context name")
            ws._declare("contexts", name, node)
            entries = tuple(_parse_binder(n) for n in items[2:])
            ws.contexts[name] = Context(entries)
        case "term":
            if len(items) != 4:
                raise node.error("'term' takes a name, a context, and a term")
            name = _sym(items[1], "a term name")
            ws._declare("terms", name, node)
            ws.terms[name] = (_resolve_context(items[2], ws),
                              parse_term_node(items[3]))
        case "formula":
            if len(items) == 2:
                name = f"formula{len(ws.formulas) + 1}"
                while name in ws.formulas:
                    name += "'"
                ws._declare("formulas", name, node)
                ws.formulas[name] = (Context(), parse_formula_node(items[1]))
            elif len(items) == 3:
                name = _sym(items[1], "a formula name")
                ws._declare("formulas", name, node)
                ws.formulas[name] = (Context(), parse_formula_node(items[2]))
            elif len(items) == 4:
                name = _sym(items[1], "a formula name")
                ws._declare("formulas", name, node)
                ws.formulas[name] = (_resolve_context(items[2], ws),
                                     parse_formula_node(items[3]))
            else:
                raise node.error(
                    "'formula' takes an optional name, an optional context, "
                    "and a formula")
        case "type":
            if len(items) != 3:
                raise node.error("'type' takes a name and a type expression")
            name = _sym(items[1], "a type name")
            ws._declare("types", name, node)
            ws.types[name] = parse_type_node(items[2])
        case "quiver":
            _load_quiver(node, items, ws)
        case _:
            raise node.error(f"unknown declaration head {head!r}")


def _resolve_context(node: SNode, ws: Workspace) -> Context:
    if isinstance(node.value, Sym):
        name = node.value.text
        if name not in ws.contexts:
            raise node.error(f"unknown context {name!r}")
        return ws.contexts[name]
    items = _items(node, "a context")
    if not items or _sym(items[0]) != "ctx":
        raise node.error("expected (ctx (x A) ...) or a context name")
    return Context(tuple(_parse_binder(n) for n in items[1:]))


def _load_signature(node: SNode, items: list[SNode], ws: Workspace) -> None:
    if len(items) < 2:
        raise node.error("'signature' takes a name")
    name = _sym(items[1], "a signature name")
    ws._declare("signatures", name, node)
    base_types: tuple[str, ...] = ()
    fun_symbols: list[FunSymbol] = []
    rel_symbols: list[RelSymbol] = []
    for clause in items[2:]:
        match _head(clause):
            case "types":
                base_types += tuple(_sym(n, "a type name")
                                    for n in clause.value[1:])
            case "fun":
                for entry in clause.value[1:]:
                    parts = _items(entry, "a (f (A ...) B) entry")
                    if len(parts) != 3:
                        raise entry.error(
                            "a function symbol is (name (domain ...) codomain)")
                    fun_symbols.append(FunSymbol(
                        _sym(parts[0], "a symbol name"),
                        tuple(parse_type_node(d)
                              for d in _items(parts[1], "a domain list")),
                        parse_type_node(parts[2])))
            case "rel":
                for entry in clause.value[1:]:
                    parts = _items(entry, "an (R (A ...)) entry")
                    if len(parts) != 2:
                        raise entry.error(
                            "a relation symbol is (name (types ...))")
                    rel_symbols.append(RelSymbol(
                        _sym(parts[0], "a relation name"),
                        tuple(parse_type_node(t)
                              for t in _items(parts[1], "an arity list"))))
            case other:
                raise clause.error(f"unknown signature clause {other!r}")
    try:
        sig = Signature(name, base_types, tuple(fun_symbols), tuple(rel_symbols))
    except ValueError as err:
        raise node.error(str(err)) from None
    verdict = validate_signature(sig)
    if not verdict:
        raise node.error(verdict.reason)
    ws.signatures[name] = sig


def _load_theory(node: SNode, items: list[SNode], ws: Workspace) -> None:
    if len(items) < 4 or _sym(items[2]) != "over":
        raise node.error("'theory' is (theory NAME over SIG (axiom ...) ...)")
    name = _sym(items[1], "a theory name")
    ws._declare("theories", name, node)
    sig_name = _sym(items[3], "a signature name")
    if sig_name not in ws.signatures:
        raise items[3].error(f"unknown signature {sig_name!r}")
    sig = ws.signatures[sig_name]
    axioms = []
    for clause in items[4:]:
        parts = _items(clause, "an axiom")
        if not parts or _sym(parts[0]) != "axiom":
            raise clause.error("expected (axiom [label] (ctx ...) FORMULA)")
        if len(parts) == 4:
            label = _sym(parts[1], "an axiom label")
            ctx_node, formula_node = parts[2], parts[3]
        elif len(parts) == 3:
            label = f"axiom{len(axioms) + 1}"
            ctx_node, formula_node = parts[1], parts[2]
        else:
            raise clause.error("expected (axiom [label] (ctx ...) FORMULA)")
        axioms.append(TheoryAxiom(label, _resolve_context(ctx_node, ws),
                                  parse_formula_node(formula_node)))
    ws.theories[name] = Theory(name, sig, tuple(axioms))


def _load_structure(node: SNode, items: list[SNode], ws: Workspace) -> None:
    if len(items) < 4 or _sym(items[2]) != "of":
        raise node.error("'structure' is (structure NAME of SIG ...)")
    name = _sym(items[1], "a structure name")
    ws._declare("structures", name, node)
    sig_name = _sym(items[3], "a signature name")
    if sig_name not in ws.signatures:
        raise items[3].error(f"unknown signature {sig_name!r}")
    sig = ws.signatures[sig_name]

    carriers: dict[str, FinSet] = {}
    element_names: dict[str, tuple[str, ...]] = {}
    for clause in items[4:]:
        if _head(clause) == "carrier":
            parts = clause.value
            if len(parts) != 3:
                raise clause.error("a carrier is (carrier T (names ...))")
            tag = _sym(parts[1], "a base type name")
            if not sig.has_base(tag):
                raise parts[1].error(
                    f"signature {sig_name!r} has no base type {tag!r}")
            names = tuple(_element_name(n)
                          for n in _items(parts[2], "an element list"))
            carriers[tag] = FinSet(tuple(
                Atom(tag, i) for i in range(len(names))))
            element_names[tag] = names
    missing = [b for b in sig.base_types if b not in carriers]
    if missing:
        raise node.error(f"missing carrier(s) for {missing}")
    scratch = Structure(sig, carriers, {}, {}, {}, element_names)

    fun_tables: dict[str, dict[tuple[Value, ...], Value]] = {}
    rel_tables: dict[str, frozenset[tuple[Value, ...]]] = {}
    fam_tables: dict[str, dict[tuple[Value, ...], FinSet]] = {}
    for clause in items[4:]:
        match _head(clause):
            case "carrier":
                pass
            case "fun":
                parts = clause.value
                fname = _sym(parts[1], "a function symbol")
                sym = sig.fun(fname)
                if sym is None:
                    raise parts[1].error(f"unknown function symbol {fname!r}")
                table: dict[tuple[Value, ...], Value] = {}
                for entry in parts[2:]:
                    pair = _items(entry, "an (args value) entry")
                    if len(pair) != 2:
                        raise entry.error("a table entry is ((args ...) value)")
                    arg_nodes = _items(pair[0], "an argument list")
                    if len(arg_nodes) != sym.arity:
                        raise pair[0].error(
                            f"{fname!r} takes {sym.arity} argument(s)")
                    key = tuple(
                        parse_value_node(a, d, scratch)
                        for a, d in zip(arg_nodes, sym.domain))
                    if sym.is_family:
                        members = _items(pair[1], "an element list")
                        fam_tables.setdefault(fname, {})[key] = FinSet(tuple(
                            parse_value_node(m, None, scratch)
                            for m in members))
                    else:
                        table[key] = parse_value_node(
                            pair[1], sym.codomain, scratch)
                if not sym.is_family:
                    fun_tables[fname] = table
            case "rel":
                parts = clause.value
                rname = _sym(parts[1], "a relation symbol")
                rel = sig.rel(rname)
                if rel is None:
                    raise parts[1].error(f"unknown relation symbol {rname!r}")
                tuples = set()
                for entry in parts[2:]:
                    vals = _items(entry, "a tuple")
                    if len(vals) != rel.arity:
                        raise entry.error(
                            f"{rname!r} takes {rel.arity} component(s)")
                    tuples.add(tuple(
                        parse_value_node(v, t, scratch)
                        for v, t in zip(vals, rel.arity_types)))
                rel_tables[rname] = frozenset(tuples)
            case other:
                raise clause.error(f"unknown structure clause {other!r}")
    for rel in sig.rel_symbols:
        rel_tables.setdefault(rel.name, frozenset())
    st = Structure(sig, carriers, fun_tables, rel_tables, fam_tables,
                   element_names)
    verdict = st.validate()
    if not verdict:
        raise node.error(verdict.reason)
    ws.structures[name] = st


def _load_quiver(node: SNode, items: list[SNode], ws: Workspace) -> None:
    if len(items) < 3:
        raise node.error("'quiver' takes a name and a rule form")
    name = _sym(items[1], "a quiver name")
    ws._declare("quivers", name, node)
    kind = _sym(items[2], "a rule kind")
    match kind:
        case "table":
            if len(items) != 4:
                raise node.error("(quiver NAME table STRUCT)")
            st = _resolve_structure(items[3], ws)
            try:
                q = vls_of_structure(structure_to_sigma_vls(st))
            except StructureError as err:
                raise node.error(str(err)) from None
            q.element_names = dict(st.element_names)
            ws.quivers[name] = q
        case "group-action":
            if len(items) != 6:
                raise node.error(
                    "(quiver NAME group-action STRUCT PITCH-TYPE ACTION-FUN)")
            st = _resolve_structure(items[3], ws)
            pitch_type = _sym(items[4], "a base type")
            act_name = _sym(items[5], "a function symbol")
            try:
                rule = _group_action_from(st, pitch_type, act_name)
                q = vls(st.carrier(pitch_type), rule)
            except StructureError as err:
                raise node.error(str(err)) from None
            q.element_names = dict(st.element_names)
            ws.quivers[name] = q
        case "winding":
            if (len(items) != 5 or not isinstance(items[3].value, int)
                    or not isinstance(items[4].value, int)):
                raise node.error("(quiver NAME winding MODULUS MAX-WINDING)")
            n, w = items[3].value, items[4].value
            pitch = FinSet(tuple(Atom("PC", i) for i in range(n)))
            q = vls(pitch, WindingPaths(n, w))
            q.element_names = {"PC": tuple(str(i) for i in range(n))}
            ws.quivers[name] = q
        case other:
            raise node.error(f"unknown quiver rule kind {other!r}")


def _resolve_structure(node: SNode, ws: Workspace) -> Structure:
    name = _sym(node, "a structure name")
    if name not in ws.structures:
        raise node.error(f"unknown structure {name!r}")
    return ws.structures[name]


def _group_action_from(st: Structure, pitch_type: str,
                       act_name: str) -> GroupAction:
    """Project a group-with-action structure onto a plain group plus an
    action table: the structure must carry star/e/inv on the acting type
    and an action symbol (acting type, pitch type) -> pitch type."""
    act = st.signature.fun(act_name)
    if act is None or act.arity != 2:
        raise StructureError(
            f"action symbol {act_name!r} must be binary")
    group_base = act.domain[0]
    if not isinstance(group_base, Base):
        raise StructureError("action's first argument must be a base type")
    if act.domain[1] != Base(pitch_type) or act.codomain != Base(pitch_type):
        raise StructureError(
            f"action symbol {act_name!r} must send "
            f"({group_base.name}, {pitch_type}) to {pitch_type}")
    for needed in ("star", "e", "inv"):
        if needed not in st.fun_tables:
            raise StructureError(
                f"group-action structures need a {needed!r} table")
    group = Structure(
        signature=musiclib.group_signature(),
        carriers={"G": st.carrier(group_base.name)},
        fun_tables={k: dict(st.fun_tables[k]) for k in ("star", "e", "inv")},
        element_names={k: v for k, v in st.element_names.items()},
    )
    action = {key: out for key, out in st.fun_tables[act_name].items()}
    return GroupAction(group, action)


# ---------------------------------------------------------------------------
# printing declarations back to source
# ---------------------------------------------------------------------------

def signature_to_dsl(sig: Signature) -> str:
    lines = [f"(signature {sig.name}"]
    lines.append("  (types " + " ".join(sig.base_types) + ")")
    if sig.fun_symbols:
        entries = " ".join(
            f"({f.name} ({' '.join(show(d) for d in f.domain)}) "
            f"{show(f.codomain)})"
            for f in sig.fun_symbols)
        lines.append(f"  (fun {entries})")
    if sig.rel_symbols:
        entries = " ".join(
            f"({r.name} ({' '.join(show(t) for t in r.arity_types)}))"
            for r in sig.rel_symbols)
        lines.append(f"  (rel {entries})")
    return "\n".join(lines) + ")"


def context_to_dsl(ctx: Context) -> str:
    return "(ctx " + " ".join(
        f"({name} {show(t)})" for name, t in ctx.entries) + ")"


def theory_to_dsl(th: Theory) -> str:
    lines = [f"(theory {th.name} over {th.signature.name}"]
    for axiom in th.axioms:
        lines.append(
            f"  (axiom {axiom.label} {context_to_dsl(axiom.context)} "
            f"{show(axiom.formula)})")
    return "\n".join(lines) + ")"


def structure_to_dsl(st: Structure, name: str) -> str:
    """Render a structure as a loadable declaration.  Atoms print by
    their element names, so only structures with named carriers can be
    exported faithfully."""
    sig = st.signature
    lines = [f"(structure {name} of {sig.name}"]
    for base in sig.base_types:
        names = st.element_names.get(base)
        if names is None:
            names = tuple(str(i) for i in range(len(st.carrier(base))))
        lines.append(f"  (carrier {base} ({' '.join(names)}))")
    for sym in sig.fun_symbols:
        if sym.is_family:
            table = st.fam_tables.get(sym.name, {})
            entries = " ".join(
                f"(({' '.join(render_value(a, st) for a in key)}) "
                f"({' '.join(render_value(m, st) for m in members)}))"
                for key, members in table.items())
        else:
            table = st.fun_tables.get(sym.name, {})
            entries = " ".join(
                f"(({' '.join(render_value(a, st) for a in key)}) "
                f"{render_value(out, st)})"
                for key, out in table.items())
        lines.append(f"  (fun {sym.name} {entries})")
    for rel in sig.rel_symbols:
        tuples = sorted(
            st.rel_tables.get(rel.name, frozenset()),
            key=lambda tup: tuple(render_value(v, st) for v in tup))
        entries = " ".join(
            f"({' '.join(render_value(v, st) for v in tup)})"
            for tup in tuples)
        lines.append(f"  (rel {rel.name} {entries})")
    return "\n".join(lines) + ")"


# ---------------------------------------------------------------------------
# builtins
# ---------------------------------------------------------------------------

def builtin_workspace() -> Workspace:
    """The stdlib: group and interval-system theories, cyclic models and
    falsifiers, the pitch-class structures, the dominance and
    leading-tone models, and the transposition/inversion quiver."""
    ws = Workspace()
    ws.signatures = {
        "group": musiclib.group_signature(),
        "gis": musiclib.gis_signature(),
        "music": musiclib.music_signature(12),
        "harmony": musiclib.harmony_signature(),
        "dominance": musiclib.dominance_signature(),
        "domfunc": musiclib.domfunc_signature(),
        "vls": sigma_vls_signature(),
    }
    ws.theories = {
        "group": musiclib.make_group_theory(),
        "gis": musiclib.make_gis_theory(),
    }
    ws.structures = {
        "z12": musiclib.cyclic_group_structure(12),
        "z12-sub": musiclib.subtraction_structure(12),
        "z7": musiclib.cyclic_group_structure(7),
        "trivial": musiclib.trivial_group_structure(),
        "z12gis": musiclib.z_gis_structure(12),
        "z7gis": musiclib.z_gis_structure(7),
        "gis-const": musiclib.constant_int_gis(12),
        "z12music": musiclib.z_music_structure(12),
        "harm-minor": musiclib.dominance_model("harmonic_minor"),
        "nat-minor": musiclib.dominance_model("natural_minor"),
        "domfunc-harm": musiclib.domfunc_model("harmonic_minor"),
        "domfunc-empty": musiclib.domfunc_model(empty=True),
        "domfunc-adversarial": musiclib.domfunc_model(
            "harmonic_minor", drop_leading_tone_of="A"),
        "triads": musiclib.triad_model(),
    }
    ti = musiclib.ti_group(12)
    pitch = musiclib.pitch_universe(12).carrier
    pc_names = {"PC": tuple(str(i) for i in range(12)),
                "TI": ti.group.element_names["TI"]}
    ti_quiver = vls(pitch, GroupAction(ti.group, ti.action))
    ti_quiver.element_names = pc_names
    winding = vls(pitch, WindingPaths(12, 1))
    winding.element_names = pc_names
    ws.quivers = {"ti-quiver": ti_quiver, "winding12": winding}
    ctx, formula = musiclib.dominance_formula()
    ws.formulas = {"dominance": (ctx, formula)}
    return ws
