"""Judgment checking: well-formed types, bidirectionally typed terms,
telescope contexts, and context morphisms composed by substitution.

Checking is bidirectional: introduction forms (pairs against dependent
sums, injections, tree nodes, ``absurd``) are checked against an
expected type, elimination forms and symbol applications synthesize
theirs.  Definitional equality of types is structural up to renaming of
bound variables; no reduction happens inside types, since dependency is
always over finite index types that are resolved at evaluation time.

Diagnostics report the leftmost-innermost failure: recursion fails fast
left to right and the deepest message propagates unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import TypeCheckError, Verdict
from .syntax import (
    Absurd, App, Arrow, Base, Context, Coproduct, FamApp,
    FormulaTerm, Inl, Inr, Lambda, Pair, Pi, Power, Product,
    Prop, PropType, Proj1, Proj2, Sigma, Signature, Star, Sup,
    Term, TupleProj, TypeExpr, Unit, Universe, Var, W, Zero,
    alpha_eq, free_vars, fresh_name, show, substitute,
)

__all__ = [
    "ContextMorphism", "check_context_morphism", "check_term",
    "compose_context_morphisms", "identity_morphism", "infer_term",
    "product_spine", "validate_signature", "well_formed_context",
    "well_formed_type",
]


# ---------------------------------------------------------------------------
# type formation
# ---------------------------------------------------------------------------

def well_formed_type(sig: Signature, ctx: Context, t: TypeExpr) -> Verdict:
    """Is ``t`` derivable by the formation rules over ``sig`` in ``ctx``?"""
    try:
        _wf_type(sig, ctx, t)
        return Verdict.passed()
    except TypeCheckError as err:
        return Verdict.failed(str(err))


def _wf_type(sig: Signature, ctx: Context, t: TypeExpr) -> None:
    match t:
        case Base(name):
            if not sig.has_base(name):
                raise TypeCheckError(f"unknown base type {name!r}")
        case Zero() | Unit() | Prop():
            pass
        case Universe():
            raise TypeCheckError(
                "level violation: 'Type' cannot occur inside a type expression")
        case Product(a, b) | Coproduct(a, b) | Arrow(a, b):
            _wf_type(sig, ctx, a)
            _wf_type(sig, ctx, b)
        case Power(a):
            _wf_type(sig, ctx, a)
        case Pi(x, index_type, body) | Sigma(x, index_type, body):
            if ctx.type_of(x) is not None:
                raise TypeCheckError(f"binder shadowing: {x!r} is already in scope")
            _wf_type(sig, ctx, index_type)
            _wf_type(sig, ctx.extend(x, index_type), body)
        case W(x, label_type, arity_body):
            if ctx.type_of(x) is not None:
                raise TypeCheckError(f"binder shadowing: {x!r} is already in scope")
            _wf_type(sig, ctx, label_type)
            _wf_type(sig, ctx.extend(x, label_type), arity_body)
        case FamApp(name, args):
            fam = sig.fun(name)
            if fam is None or not fam.is_family:
                raise TypeCheckError(f"unknown type family {name!r}")
            if len(args) != fam.arity:
                raise TypeCheckError(
                    f"arity mismatch: family {name!r} takes {fam.arity} "
                    f"argument(s), got {len(args)}")
            for arg, dom in zip(args, fam.domain):
                _check(sig, ctx, arg, dom)
        case PropType(f):
            from .logic import _wf_formula
            _wf_formula(sig, ctx, f)
        case _:
            raise TypeCheckError(f"not a type expression: {t!r}")


def well_formed_context(sig: Signature, ctx: Context) -> Verdict:
    """Telescope discipline: distinct names, each type well-formed over
    the earlier entries."""
    seen: list[tuple[str, TypeExpr]] = []
    for name, t in ctx:
        if any(name == n for n, _ in seen):
            return Verdict.failed(f"duplicate context variable {name!r}")
        v = well_formed_type(sig, Context(tuple(seen)), t)
        if not v:
            return Verdict.failed(f"entry {name!r}: {v.reason}")
        seen.append((name, t))
    return Verdict.passed()


def validate_signature(sig: Signature) -> Verdict:
    """Every symbol's domain and codomain types must be well-formed over
    the signature's own base types; 'Type' is legal only as the codomain
    of a family declaration."""
    empty = Context()
    for f in sig.fun_symbols:
        for d in f.domain:
            v = well_formed_type(sig, empty, d)
            if not v:
                return Verdict.failed(f"symbol {f.name!r}: {v.reason}")
        if not f.is_family:
            v = well_formed_type(sig, empty, f.codomain)
            if not v:
                return Verdict.failed(f"symbol {f.name!r}: {v.reason}")
    for r in sig.rel_symbols:
        for t in r.arity_types:
            v = well_formed_type(sig, empty, t)
            if not v:
                return Verdict.failed(f"relation {r.name!r}: {v.reason}")
    return Verdict.passed()


# ---------------------------------------------------------------------------
# terms: synthesis and checking
# ---------------------------------------------------------------------------

def infer_term(sig: Signature, ctx: Context, term: Term) -> TypeExpr:
    """Synthesize the type of an elimination-form term.

    Raises ``TypeCheckError`` for ill-typed terms and for introduction
    forms (injections, ``sup``, ``absurd``) that need an expected type.
    """
    return _infer(sig, ctx, term)


def check_term(sig: Signature, ctx: Context, term: Term,
               expected: TypeExpr) -> Verdict:
    """Is ``ctx |- term : expected`` derivable?"""
    wf = well_formed_type(sig, ctx, expected)
    if not wf:
        return Verdict.failed(f"ill-formed expected type: {wf.reason}")
    try:
        _check(sig, ctx, term, expected)
        return Verdict.passed()
    except TypeCheckError as err:
        return Verdict.failed(str(err))


def product_spine(t: TypeExpr) -> tuple[TypeExpr, ...]:
    """Flatten a right-nested product into its components."""
    if isinstance(t, Product):
        return (t.left,) + product_spine(t.right)
    return (t,)


def _infer(sig: Signature, ctx: Context, term: Term) -> TypeExpr:
    match term:
        case Var(name):
            t = ctx.type_of(name)
            if t is not None:
                return t
            f = sig.fun(name)
            if f is not None and f.is_constant:
                return f.codomain
            raise TypeCheckError(f"unbound variable {name!r}")
        case App(head, args) if isinstance(head, str):
            f = sig.fun(head)
            if f is None:
                if sig.rel(head) is not None:
                    raise TypeCheckError(
                        f"relation symbol {head!r} applied as a function; "
                        "use a relation atom")
                raise TypeCheckError(f"unknown function symbol {head!r}")
            if f.is_family:
                raise TypeCheckError(
                    f"type family {head!r} used in term position")
            if len(args) != f.arity:
                raise TypeCheckError(
                    f"arity mismatch: {head!r} takes {f.arity} argument(s), "
                    f"got {len(args)}")
            for arg, dom in zip(args, f.domain):
                _check(sig, ctx, arg, dom)
            return f.codomain
        case App(head, args):
            fun_type = _infer(sig, ctx, head)
            for arg in args:
                match fun_type:
                    case Arrow(dom, cod):
                        _check(sig, ctx, arg, dom)
                        fun_type = cod
                    case Pi(x, index_type, body):
                        _check(sig, ctx, arg, index_type)
                        fun_type = substitute(body, {x: arg})
                    case _:
                        raise TypeCheckError(
                            f"application of non-function: {show(head)} has "
                            f"type {show(fun_type)}")
            return fun_type
        case Pair(a, b):
            return Product(_infer(sig, ctx, a), _infer(sig, ctx, b))
        case Proj1(p):
            match _infer(sig, ctx, p):
                case Product(left, _):
                    return left
                case Sigma(_, index_type, _):
                    return index_type
                case other:
                    raise TypeCheckError(
                        f"projection of non-product: {show(p)} has type {show(other)}")
        case Proj2(p):
            match _infer(sig, ctx, p):
                case Product(_, right):
                    return right
                case Sigma(x, _, body):
                    return substitute(body, {x: Proj1(p)})
                case other:
                    raise TypeCheckError(
                        f"projection of non-product: {show(p)} has type {show(other)}")
        case TupleProj(t, i):
            inferred = _infer(sig, ctx, t)
            if not isinstance(inferred, Product):
                raise TypeCheckError(
                    f"projection of non-product: {show(t)} has type {show(inferred)}")
            spine = product_spine(inferred)
            if not 0 <= i < len(spine):
                raise TypeCheckError(
                    f"projection index {i} out of range for {show(inferred)}")
            return spine[i]
        case Lambda(x, annot, body):
            _wf_type(sig, ctx, annot)
            body_type = _infer(sig, ctx.extend(x, annot), body)
            if x in free_vars(body_type):
                return Pi(x, annot, body_type)
            return Arrow(annot, body_type)
        case Star():
            return Unit()
        case FormulaTerm(f):
            from .logic import _wf_formula
            _wf_formula(sig, ctx, f)
            return Prop()
        case Inl(_) | Inr(_):
            raise TypeCheckError(
                "injection needs an expected coproduct type to check against")
        case Sup(_, _):
            raise TypeCheckError(
                "sup needs an expected tree type to check against")
        case Absurd(_):
            raise TypeCheckError(
                "absurd needs an expected type to check against")
    raise TypeCheckError(f"not a term: {term!r}")


def _check(sig: Signature, ctx: Context, term: Term, expected: TypeExpr) -> None:
    match (term, expected):
        case (Pair(a, b), Product(left, right)):
            _check(sig, ctx, a, left)
            _check(sig, ctx, b, right)
        case (Pair(a, b), Sigma(x, index_type, body)):
            _check(sig, ctx, a, index_type)
            _check(sig, ctx, b, substitute(body, {x: a}))
        case (Pair(_, _), _):
            raise TypeCheckError(
                f"pair checked against non-product type {show(expected)}")
        case (Inl(v), Coproduct(left, _)):
            _check(sig, ctx, v, left)
        case (Inr(v), Coproduct(_, right)):
            _check(sig, ctx, v, right)
        case (Inl(_) | Inr(_), _):
            raise TypeCheckError(
                f"injection checked against non-coproduct type {show(expected)}")
        case (Lambda(x, annot, body), Arrow(dom, cod)):
            if not alpha_eq(annot, dom):
                raise TypeCheckError(
                    f"lambda domain annotation {show(annot)} does not match "
                    f"expected domain {show(dom)}")
            _check(sig, ctx.extend(x, annot), body, cod)
        case (Lambda(x, annot, body), Pi(y, index_type, pi_body)):
            if not alpha_eq(annot, index_type):
                raise TypeCheckError(
                    f"lambda domain annotation {show(annot)} does not match "
                    f"expected domain {show(index_type)}")
            avoid = set(ctx.names()) | free_vars(body) | free_vars(pi_body)
            z = fresh_name(x, avoid)
            _check(sig, ctx.extend(z, index_type),
                   substitute(body, {x: Var(z)}),
                   substitute(pi_body, {y: Var(z)}))
        case (Sup(label, branches), W(x, label_type, arity_body)):
            _check(sig, ctx, label, label_type)
            arity = substitute(arity_body, {x: label})
            _check(sig, ctx, branches, Arrow(arity, expected))
        case (Sup(_, _), _):
            raise TypeCheckError(
                f"sup checked against non-tree type {show(expected)}")
        case (Absurd(t), _):
            _check(sig, ctx, t, Zero())
        case _:
            inferred = _infer(sig, ctx, term)
            if not alpha_eq(inferred, expected):
                raise TypeCheckError(
                    f"type mismatch: {show(term)} has type {show(inferred)}, "
                    f"expected {show(expected)}")


# ---------------------------------------------------------------------------
# context morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContextMorphism:
    """A tuple of terms over the source context, one per target entry."""

    source: Context
    target: Context
    components: tuple[Term, ...]


def check_context_morphism(sig: Signature, m: ContextMorphism) -> Verdict:
    if len(m.components) != len(m.target):
        return Verdict.failed(
            f"component count {len(m.components)} does not match target "
            f"length {len(m.target)}")
    names = m.target.names()
    for i, ((_, target_type), component) in enumerate(zip(m.target, m.components)):
        expected = substitute(
            target_type, {names[j]: m.components[j] for j in range(i)})
        v = check_term(sig, m.source, component, expected)
        if not v:
            return Verdict.failed(f"component {i}: {v.reason}")
    return Verdict.passed()


def identity_morphism(ctx: Context) -> ContextMorphism:
    return ContextMorphism(ctx, ctx, tuple(Var(n) for n in ctx.names()))


def compose_context_morphisms(f: ContextMorphism,
                              g: ContextMorphism) -> ContextMorphism:
    """First ``f``, then ``g``: substitute f's components for g's source
    variables inside g's components."""
    if f.target != g.source:
        raise TypeCheckError("context mismatch: f.target != g.source")
    subst = dict(zip(g.source.names(), f.components))
    return ContextMorphism(
        f.source, g.target,
        tuple(substitute(c, subst) for c in g.components))
