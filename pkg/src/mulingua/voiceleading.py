"""Voice-leading spaces as quivers: the space constructor, rules for
arrow fibers (group-action transporters, winding classes on a discrete
circle, explicit tables), quiver homomorphisms, conjugation
automorphisms, exhaustive automorphism enumeration, and structures over
the minimal pitch/arrow signature.

Arrows are canonical triples ((x, y), t): a pair of vertices plus the
payload drawn from the rule's fiber at (x, y).  The source map takes
the first component of the pair component, the target the second.
Quivers carry no composition law, so winding classes can be truncated
at a maximum winding number without breaking anything.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import BudgetError, StructureError, Verdict
from .semantics import (
    Atom, FinSet, PairV, Structure, TableV, TruthV, Value, element_budget,
    render_value,
)
from .syntax import Base, FunSymbol, Power, Signature

__all__ = [
    "ExplicitTable", "GroupAction", "Quiver", "QuiverHom",
    "SigmaVLSStructure", "StructureIso", "VLRule", "WindingPaths",
    "arrow_payload", "arrow_source", "arrow_target",
    "check_quiver_hom", "compose_quiver_homs", "conjugation_automorphism",
    "enumerate_automorphisms", "hom_to_quiver_hom", "identity_quiver_hom",
    "invert_quiver_hom",
    "list_subjective", "sigma_vls_signature", "sigma_vls_to_structure",
    "structure_to_sigma_vls", "to_dot", "transporters",
    "validate_group_action", "vls", "vls_of_structure",
]


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class GroupAction:
    """Arrows from x to y are the group elements transporting x to y.
    The group is a structure with ``star``/``e``/``inv`` tables on a
    single base type."""

    group: Structure
    action: dict[tuple[Value, Value], Value]

    @property
    def group_type(self) -> str:
        return self.group.signature.base_types[0]

    def elements(self) -> FinSet:
        return self.group.carrier(self.group_type)

    def act(self, g: Value, x: Value) -> Value:
        try:
            return self.action[(g, x)]
        except KeyError:
            raise StructureError(
                f"action table has no entry for ({self.group.render(g)}, "
                f"{render_value(x)})") from None

    def multiply(self, g: Value, h: Value) -> Value:
        return self.group.fun_tables["star"][(g, h)]

    def inverse(self, g: Value) -> Value:
        return self.group.fun_tables["inv"][(g,)]

    def identity(self) -> Value:
        return self.group.fun_tables["e"][()]


@dataclass(frozen=True)
class WindingPaths:
    """Ways of getting between points of a discrete n-point circle:
    one class per integer displacement y - x + n*w with |w| bounded.
    Truncation only trims the arrow sets; quivers never compose arrows."""

    modulus: int
    max_winding: int

    def __post_init__(self) -> None:
        if self.max_winding < 0:
            raise StructureError("maximum winding must be non-negative")


@dataclass(eq=False)
class ExplicitTable:
    """Arrow fibers given directly per ordered vertex pair."""

    table: dict[tuple[Value, Value], FinSet]


VLRule = Union[GroupAction, WindingPaths, ExplicitTable]


def transporters(rule: GroupAction, x: Value, y: Value) -> FinSet:
    """The group elements carrying x to y, in group-carrier order."""
    return FinSet(tuple(
        g for g in rule.elements() if rule.act(g, x) == y))


def validate_group_action(rule: GroupAction, points: FinSet) -> Verdict:
    """Identity and compatibility laws, checked exhaustively."""
    e = rule.identity()
    for x in points:
        if rule.act(e, x) != x:
            return Verdict.failed(
                f"identity law fails at {render_value(x)}")
    for g in rule.elements():
        for h in rule.elements():
            gh = rule.multiply(g, h)
            for x in points:
                if rule.act(gh, x) != rule.act(g, rule.act(h, x)):
                    return Verdict.failed(
                        f"compatibility fails at ({rule.group.render(g)}, "
                        f"{rule.group.render(h)}, {render_value(x)})")
    return Verdict.passed()


# ---------------------------------------------------------------------------
# quivers
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Quiver:
    """Arrow set, vertex set, and total source/target maps.

    ``element_names`` is display metadata (atom tag to name tuple) used
    only when rendering."""

    arrows: FinSet
    vertices: FinSet
    src: dict[Value, Value]
    tgt: dict[Value, Value]
    rule: Optional[VLRule] = field(default=None, repr=False)
    element_names: dict[str, tuple[str, ...]] = field(
        default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for a in self.arrows:
            if a not in self.src or a not in self.tgt:
                raise StructureError("source/target maps are not total")
            if self.src[a] not in self.vertices or self.tgt[a] not in self.vertices:
                raise StructureError("source/target maps leave the vertex set")

    def render(self, v: Value) -> str:
        return render_value(v, self.element_names)


def arrow_source(arrow: Value) -> Value:
    assert isinstance(arrow, PairV) and isinstance(arrow.first, PairV)
    return arrow.first.first


def arrow_target(arrow: Value) -> Value:
    assert isinstance(arrow, PairV) and isinstance(arrow.first, PairV)
    return arrow.first.second


def arrow_payload(arrow: Value) -> Value:
    assert isinstance(arrow, PairV)
    return arrow.second


def _rule_fibers(pitch: FinSet, rule: VLRule) -> dict[tuple[Value, Value], FinSet]:
    match rule:
        case GroupAction():
            for (_, x) in rule.action:
                if x not in pitch:
                    raise StructureError(
                        "action table mentions points outside the pitch set")
            v = validate_group_action(rule, pitch)
            if not v:
                raise StructureError(f"invalid group action: {v.reason}")
            return {(x, y): transporters(rule, x, y)
                    for x in pitch for y in pitch}
        case WindingPaths(modulus, max_winding):
            if len(pitch) != modulus:
                raise StructureError(
                    f"winding rule over {modulus} points got a pitch set of "
                    f"size {len(pitch)}")
            index = {x: i for i, x in enumerate(pitch)}
            return {
                (x, y): FinSet(tuple(
                    Atom("disp", (index[y] - index[x]) % modulus + modulus * w)
                    for w in range(-max_winding, max_winding + 1)))
                for x in pitch for y in pitch}
        case ExplicitTable(table):
            for (x, y), fiber in table.items():
                if x not in pitch or y not in pitch:
                    raise StructureError(
                        "explicit table mentions vertices outside the pitch set")
            return {(x, y): table.get((x, y), FinSet(()))
                    for x in pitch for y in pitch}
    raise StructureError(f"not a voice-leading rule: {rule!r}")


def vls(pitch: FinSet, rule: VLRule) -> Quiver:
    """The voice-leading space of a pitch set and a rule: arrows are the
    triples ((x, y), t) with t in the rule's fiber at (x, y)."""
    fibers = _rule_fibers(pitch, rule)
    arrows = []
    src: dict[Value, Value] = {}
    tgt: dict[Value, Value] = {}
    for x in pitch:
        for y in pitch:
            for t in fibers[(x, y)]:
                arrow = PairV(PairV(x, y), t)
                arrows.append(arrow)
                src[arrow] = x
                tgt[arrow] = y
    return Quiver(FinSet(tuple(arrows)), pitch, src, tgt, rule)


def list_subjective(q: Quiver) -> list[tuple[Value, Value, Value]]:
    """The arrows of the space as (source, target, payload) triples, in
    canonical order."""
    return [(q.src[a], q.tgt[a], arrow_payload(a)) for a in q.arrows]


# ---------------------------------------------------------------------------
# quiver homomorphisms
# ---------------------------------------------------------------------------

@dataclass
class QuiverHom:
    """A vertex map and an arrow map."""

    gamma1: dict[Value, Value]
    gamma0: dict[Value, Value]


def identity_quiver_hom(q: Quiver) -> QuiverHom:
    return QuiverHom({a: a for a in q.arrows}, {v: v for v in q.vertices})


def invert_quiver_hom(h: QuiverHom) -> QuiverHom:
    """Inverse of a bijective homomorphism."""
    gamma1 = {b: a for a, b in h.gamma1.items()}
    gamma0 = {w: v for v, w in h.gamma0.items()}
    if len(gamma1) != len(h.gamma1) or len(gamma0) != len(h.gamma0):
        raise StructureError("homomorphism is not bijective")
    return QuiverHom(gamma1, gamma0)


def check_quiver_hom(q1: Quiver, q2: Quiver, h: QuiverHom) -> Verdict:
    """Both source and target squares must commute pointwise."""
    for v in q1.vertices:
        if v not in h.gamma0:
            return Verdict.failed(f"vertex map not total at {render_value(v)}")
        if h.gamma0[v] not in q2.vertices:
            return Verdict.failed("vertex map leaves the target vertex set")
    for a in q1.arrows:
        if a not in h.gamma1:
            return Verdict.failed(f"arrow map not total at {render_value(a)}")
        image = h.gamma1[a]
        if image not in q2.arrows:
            return Verdict.failed("arrow map leaves the target arrow set")
        if q2.src[image] != h.gamma0[q1.src[a]]:
            return Verdict.failed(
                f"source square fails at {render_value(a)}")
        if q2.tgt[image] != h.gamma0[q1.tgt[a]]:
            return Verdict.failed(
                f"target square fails at {render_value(a)}")
    return Verdict.passed()


def compose_quiver_homs(f: QuiverHom, g: QuiverHom) -> QuiverHom:
    """First f, then g."""
    return QuiverHom(
        {a: g.gamma1[b] for a, b in f.gamma1.items()},
        {v: g.gamma0[w] for v, w in f.gamma0.items()})


def conjugation_automorphism(q: Quiver, phi: Value) -> QuiverHom:
    """For a group-action space: vertices move by the action of phi,
    payloads by conjugation, so ((x, y), g) goes to
    ((phi x, phi y), phi g phi^-1)."""
    rule = q.rule
    if not isinstance(rule, GroupAction):
        raise StructureError(
            "conjugation automorphisms need a group-action space")
    if phi not in rule.elements():
        raise StructureError("conjugating element is not in the acting group")
    phi_inv = rule.inverse(phi)
    gamma0 = {x: rule.act(phi, x) for x in q.vertices}
    gamma1 = {}
    for a in q.arrows:
        x, y, g = arrow_source(a), arrow_target(a), arrow_payload(a)
        conjugated = rule.multiply(rule.multiply(phi, g), phi_inv)
        gamma1[a] = PairV(PairV(gamma0[x], gamma0[y]), conjugated)
    return QuiverHom(gamma1, gamma0)


# ---------------------------------------------------------------------------
# automorphism enumeration
# ---------------------------------------------------------------------------

def enumerate_automorphisms(q: Quiver,
                            budget: Optional[int] = None) -> list[QuiverHom]:
    """All quiver automorphisms, ordered lexicographically by the vertex
    image tuple and then by per-fiber arrow bijections; the identity is
    always first.

    Backtracks over vertex images with fiber-size pruning.  Refuses up
    front when the candidate space (vertex permutations times parallel-
    arrow bijections) exceeds the budget; conjugation automorphisms are
    the practical generator for large group-action spaces.
    """
    budget = element_budget(budget)
    vertices = list(q.vertices)
    n = len(vertices)
    fibers: dict[tuple[Value, Value], list[Value]] = {}
    for a in q.arrows:
        fibers.setdefault((q.src[a], q.tgt[a]), []).append(a)
    candidate_space = math.factorial(n)
    for fiber in fibers.values():
        candidate_space *= math.factorial(len(fiber))
        if candidate_space > budget:
            break
    if candidate_space > budget:
        raise BudgetError(
            f"automorphism candidate space exceeds the budget ({budget}); "
            "for group-action spaces use conjugation automorphisms instead")

    fiber_of = {pair: tuple(arrows) for pair, arrows in fibers.items()}

    def fiber_size(x: Value, y: Value) -> int:
        return len(fiber_of.get((x, y), ()))

    results: list[QuiverHom] = []

    def assign(i: int, image: list[Value], used: set[int]) -> None:
        if i == n:
            _emit(image)
            return
        for j, w in enumerate(vertices):
            if j in used:
                continue
            ok = True
            for k in range(i):
                if (fiber_size(vertices[i], vertices[k]) != fiber_size(w, image[k])
                        or fiber_size(vertices[k], vertices[i]) != fiber_size(image[k], w)):
                    ok = False
                    break
            if ok and fiber_size(vertices[i], vertices[i]) != fiber_size(w, w):
                ok = False
            if ok:
                used.add(j)
                image.append(w)
                assign(i + 1, image, used)
                image.pop()
                used.remove(j)

    def _emit(image: list[Value]) -> None:
        gamma0 = dict(zip(vertices, image))
        pairs = [(x, y) for x in vertices for y in vertices
                 if fiber_size(x, y) > 0]
        per_pair: list[list[dict[Value, Value]]] = []
        for (x, y) in pairs:
            source_fiber = fiber_of[(x, y)]
            target_fiber = fiber_of[(gamma0[x], gamma0[y])]
            per_pair.append([
                dict(zip(source_fiber, perm))
                for perm in itertools.permutations(target_fiber)])
        for combo in itertools.product(*per_pair):
            gamma1: dict[Value, Value] = {}
            for part in combo:
                gamma1.update(part)
            results.append(QuiverHom(gamma1, dict(gamma0)))

    assign(0, [], set())
    return results


# ---------------------------------------------------------------------------
# structures over the minimal pitch/arrow signature
# ---------------------------------------------------------------------------

def sigma_vls_signature() -> Signature:
    """Two base types and one symbol sending an ordered pitch pair to a
    subtype of arrows."""
    pitch, arrow = Base("Pitch"), Base("Arrow")
    return Signature(
        name="vls",
        base_types=("Pitch", "Arrow"),
        fun_symbols=(
            FunSymbol("vlr", (pitch, pitch), Power(arrow)),
        ),
    )


@dataclass(eq=False)
class SigmaVLSStructure:
    """A model of the minimal signature: pitch carrier, arrow carrier,
    and a total table of arrow subsets per ordered pitch pair."""

    pitch_carrier: FinSet
    arrow_carrier: FinSet
    vlr_table: dict[tuple[Value, Value], FinSet]

    def __post_init__(self) -> None:
        for x in self.pitch_carrier:
            for y in self.pitch_carrier:
                if (x, y) not in self.vlr_table:
                    raise StructureError(
                        "vlr table is not total on pitch pairs")
                for t in self.vlr_table[(x, y)]:
                    if t not in self.arrow_carrier:
                        raise StructureError(
                            "vlr table leaves the arrow carrier")


def vls_of_structure(m: SigmaVLSStructure) -> Quiver:
    """Same construction as ``vls`` with the structure's table as an
    explicit rule."""
    return vls(m.pitch_carrier, ExplicitTable(dict(m.vlr_table)))


def sigma_vls_to_structure(m: SigmaVLSStructure,
                           element_names: Optional[dict[str, tuple[str, ...]]] = None,
                           ) -> Structure:
    """Repackage as a generic structure over the minimal signature, with
    subsets as tables into the truth values."""
    arrows = tuple(m.arrow_carrier)
    table = {}
    for (x, y), fiber in m.vlr_table.items():
        table[(x, y)] = TableV(tuple(
            (a, TruthV(a in fiber)) for a in arrows))
    return Structure(
        signature=sigma_vls_signature(),
        carriers={"Pitch": m.pitch_carrier, "Arrow": m.arrow_carrier},
        fun_tables={"vlr": table},
        element_names=element_names or {},
    )


def structure_to_sigma_vls(st: Structure) -> SigmaVLSStructure:
    """Extract the table form from a structure over the minimal
    signature."""
    if st.signature != sigma_vls_signature():
        raise StructureError("structure is not over the pitch/arrow signature")
    pitch = st.carrier("Pitch")
    arrows = st.carrier("Arrow")
    vlr = st.fun_tables["vlr"]
    table = {}
    for x in pitch:
        for y in pitch:
            subset = vlr[(x, y)]
            assert isinstance(subset, TableV)
            table[(x, y)] = FinSet(tuple(
                a for a, flag in subset.entries if flag == TruthV(True)))
    return SigmaVLSStructure(pitch, arrows, table)


@dataclass(eq=False)
class StructureIso:
    """Pitch and arrow bijections between two table structures."""

    source: SigmaVLSStructure
    target: SigmaVLSStructure
    pitch_map: dict[Value, Value]
    arrow_map: dict[Value, Value]


def hom_to_quiver_hom(h: StructureIso) -> QuiverHom:
    """The quiver map ((x, y), t) -> ((h x, h y), h t) induced by a
    structure isomorphism.  Requires the square relating the two vlr
    tables to commute; the first violating pitch pair is reported
    otherwise.  The assignment is functorial: identities map to
    identities and composites to composites."""
    _check_bijection(h.pitch_map, h.source.pitch_carrier, h.target.pitch_carrier,
                     "pitch")
    _check_bijection(h.arrow_map, h.source.arrow_carrier, h.target.arrow_carrier,
                     "arrow")
    for x in h.source.pitch_carrier:
        for y in h.source.pitch_carrier:
            moved = {h.arrow_map[t] for t in h.source.vlr_table[(x, y)]}
            expected = set(h.target.vlr_table[(h.pitch_map[x], h.pitch_map[y])])
            if moved != expected:
                raise StructureError(
                    f"vlr square fails at ({render_value(x)}, {render_value(y)})")
    gamma0 = dict(h.pitch_map)
    gamma1 = {}
    for x in h.source.pitch_carrier:
        for y in h.source.pitch_carrier:
            for t in h.source.vlr_table[(x, y)]:
                arrow = PairV(PairV(x, y), t)
                gamma1[arrow] = PairV(
                    PairV(gamma0[x], gamma0[y]), h.arrow_map[t])
    return QuiverHom(gamma1, gamma0)


def _check_bijection(mapping: dict[Value, Value], source: FinSet,
                     target: FinSet, what: str) -> None:
    if set(mapping) != set(source.elements):
        raise StructureError(f"{what} map is not total on the source carrier")
    images = list(mapping.values())
    if len(set(images)) != len(images) or set(images) != set(target.elements):
        raise StructureError(f"{what} map is not a bijection onto the target")


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

def to_dot(q: Quiver, name: str = "quiver") -> str:
    """Graphviz rendering with stable ordering, so output is diffable."""
    lines = [f"digraph {name} {{"]
    index = {v: i for i, v in enumerate(q.vertices)}
    for v in q.vertices:
        lines.append(f'  v{index[v]} [label="{q.render(v)}"];')
    for a in q.arrows:
        label = q.render(arrow_payload(a))
        lines.append(
            f'  v{index[q.src[a]]} -> v{index[q.tgt[a]]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
