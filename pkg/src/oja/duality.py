"""Frobenius-algebra isomorphisms between Jacobian algebras and their orbifolds.

A witness maps the ambient variables of a source polynomial f₁ into a target
orbifold algebra.  `verify_algebra_iso` checks that the Jacobian relations die,
that the images generate, and that dimensions agree; `verify_frobenius_iso`
additionally matches the trace pairings on all basis pairs.  `search_iso`
hunts for such witnesses with a degree-graded ansatz whose scalar unknowns are
solved exactly over ℚ(ζ₂₄), and `duality_graph` assembles the verified
isomorphisms into a graph of (polynomial, group) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .jacobian import Fingerprint, fingerprint
from .linalg import rank
from .orbifold import OrbifoldAlgebra, orbifold_algebra
from .poly import Poly
from .scalar import (CycScalar, HALF_I, I_UNIT, SQRT2, SQRT3, kth_roots,
                     square_roots)
from .symmetry import (GroupElement, InvertiblePoly, SymmetryGroup,
                       matching_permutations)

_ZERO = CycScalar.zero()
_ONE = CycScalar.one()

Vector = Sequence[CycScalar]


class SearchFailure(ValueError):
    """Raised when the ansatz search space is exhausted without a witness."""


# --- witnesses and reports ---------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    """A candidate isomorphism Jac(f₁) → target, one image per variable."""

    source: InvertiblePoly
    target: OrbifoldAlgebra
    images: tuple[tuple[CycScalar, ...], ...]

    def image_str(self, i: int) -> str:
        return self.target.vector_str(list(self.images[i]))

    def to_json(self) -> dict:
        return {
            "source": {
                "polynomial": str(self.source.poly),
                "variables": list(self.source.vars),
            },
            "target": {
                "polynomial": str(self.target.ip.poly),
                "group": [str(g) for g in self.target.group],
            },
            "images": [
                [[self.target.label(k), c.to_json()]
                 for k, c in enumerate(img) if not c.is_zero()]
                for img in self.images
            ],
        }

    def __str__(self) -> str:
        parts = [f"{v} -> {self.image_str(i)}" for i, v in enumerate(self.source.vars)]
        return "; ".join(parts)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Report:
    passed: bool
    checks: tuple[Check, ...]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}

    def failure(self) -> str:
        return "; ".join(f"{c.name}: {c.detail}" for c in self.checks if not c.passed)


def source_algebra(ip: InvertiblePoly) -> OrbifoldAlgebra:
    """Jac(f₁) presented as the trivial-group orbifold algebra.

    This carries the same basis/product data as the plain quotient algebra and
    the trace pairing normalized with |G| = 1.
    """
    return orbifold_algebra(ip, SymmetryGroup.trivial(ip.arity))


def evaluate_in_target(target: OrbifoldAlgebra, images: Sequence[Vector],
                       p: Poly) -> list[CycScalar]:
    """Evaluate p at the given variable images inside the target algebra."""
    arity = len(p.vars)
    max_exp = [max((e[i] for e in p.terms), default=0) for i in range(arity)]
    powers: list[list[list[CycScalar]]] = []
    for i in range(arity):
        row = [target.identity_vector()]
        for _ in range(max_exp[i]):
            row.append(target.product(row[-1], list(images[i])))
        powers.append(row)
    out = target.zero_vector()
    for exps, coeff in p.terms.items():
        acc = target.identity_vector()
        for i, e in enumerate(exps):
            if e:
                acc = target.product(acc, powers[i][e])
        out = [a + coeff * b for a, b in zip(out, acc)]
    return out


def _image_matrix(w: IsoWitness) -> list[list[CycScalar]]:
    """Images of the source standard-monomial basis, as rows."""
    src = source_algebra(w.source)
    return [evaluate_in_target(w.target, w.images, Poly.monomial(w.source.vars, m))
            for _, m in src.basis]


def verify_algebra_iso(w: IsoWitness) -> Report:
    """Certify that the witness is an algebra isomorphism.

    Three checks: every Jacobian-ideal generator maps to zero; the images of
    the source standard monomials (all of weighted degree up to the socle
    degree) span the target; and the dimensions agree.
    """
    target = w.target
    src = source_algebra(w.source)
    checks = []

    bad = []
    for i in range(w.source.arity):
        partial = w.source.poly.partial_derivative(i)
        value = evaluate_in_target(target, w.images, partial)
        if any(not c.is_zero() for c in value):
            bad.append(f"relation {partial} maps to {target.vector_str(value)}")
    checks.append(Check("relations", not bad, "; ".join(bad)))

    matrix = [list(row) for row in _image_matrix(w)]
    r = rank(matrix)
    checks.append(Check("surjective", r == target.dim,
                        f"images of the source basis span {r} of {target.dim} dimensions"))

    checks.append(Check("dimension", src.dim == target.dim,
                        f"source {src.dim}, target {target.dim}"))
    return Report(all(c.passed for c in checks), tuple(checks))


def verify_frobenius_iso(w: IsoWitness) -> Report:
    """Certify pairing preservation on all basis pairs (algebra checks assumed)."""
    target = w.target
    src = source_algebra(w.source)
    phi = _image_matrix(w)
    mismatches = []
    for i in range(src.dim):
        for j in range(i, src.dim):
            got = target.pairing(phi[i], phi[j])
            expected = src.gram[i][j]
            if got != expected:
                mismatches.append(
                    f"eta({src.label(i)}, {src.label(j)}): {got} != {expected}")
    passed = not mismatches
    detail = "; ".join(mismatches[:4])
    if len(mismatches) > 4:
        detail += f"; ... {len(mismatches)} pairs differ"
    return Report(passed, (Check("pairings", passed, detail),))


def verify_witness(w: IsoWitness) -> Report:
    """Both verifications combined into a single report."""
    algebra = verify_algebra_iso(w)
    frobenius = verify_frobenius_iso(w)
    return Report(algebra.passed and frobenius.passed,
                  algebra.checks + frobenius.checks)


# --- ansatz search -----------------------------------------------------------

# Scalar guesses for unknowns no equation pins down, tried in order; roots of
# the actual relation equations are always preferred over these.
_HALF = CycScalar.from_rational(Fraction(1, 2))
_THIRD = CycScalar.from_rational(Fraction(1, 3))
_BANK = [
    _ONE, -_ONE, I_UNIT, -I_UNIT,
    _HALF, -_HALF, HALF_I, -HALF_I,
    CycScalar.from_rational(2), CycScalar.from_rational(-2),
    I_UNIT + I_UNIT, -(I_UNIT + I_UNIT),
    SQRT2 * _HALF, -(SQRT2 * _HALF),
    SQRT3 * _THIRD, -(SQRT3 * _THIRD),
    I_UNIT * SQRT3 * _THIRD, -(I_UNIT * SQRT3 * _THIRD),
    SQRT2, -SQRT2, SQRT3, -SQRT3,
    CycScalar.zeta(8), CycScalar.zeta(16),    # primitive cube roots of unity
    CycScalar.zeta(4), CycScalar.zeta(20),    # primitive sixth roots of unity
    _ZERO,
]


def _used_unknowns(eq: Poly) -> set[int]:
    return {i for exps in eq.terms for i, e in enumerate(exps) if e}


def _plug(eq: Poly, index: int, value: CycScalar) -> Poly:
    terms: dict[tuple[int, ...], CycScalar] = {}
    for exps, coeff in eq.terms.items():
        c = coeff * value**exps[index]
        if c.is_zero():
            continue
        key = exps[:index] + (0,) + exps[index + 1:]
        prev = terms.get(key)
        terms[key] = prev + c if prev is not None else c
    return Poly(eq.vars, terms)


def _univariate_profile(eq: Poly, index: int) -> dict[int, CycScalar] | None:
    """Map exponent-of-unknown -> coefficient, if eq involves only `index`."""
    profile: dict[int, CycScalar] = {}
    for exps, coeff in eq.terms.items():
        if any(e and i != index for i, e in enumerate(exps)):
            return None
        e = exps[index]
        profile[e] = profile.get(e, _ZERO) + coeff
    return {e: c for e, c in profile.items() if not c.is_zero()}


def _univariate_roots(profile: dict[int, CycScalar]) -> list[CycScalar] | None:
    """Exact roots for the equation shapes the ansatz produces, else None."""
    exponents = sorted(profile)
    if not exponents:
        return []
    if exponents == [0]:
        return []  # nonzero constant: no roots
    if len(exponents) == 1:
        return [_ZERO]  # A·u^j = 0
    if len(exponents) == 2 and exponents[0] == 0:
        j = exponents[1]
        value = -(profile[0] * profile[j].inverse())
        if j == 1:
            return [value]
        return kth_roots(value, j)
    if exponents == [0, 1, 2]:
        a, b, c = profile[2], profile[1], profile[0]
        disc = b * b - CycScalar.from_rational(4) * a * c
        half = CycScalar.from_rational(Fraction(1, 2)) * a.inverse()
        return [(-b + s) * half for s in square_roots(disc)]
    if exponents == [1, 2]:
        root = -(profile[1] * profile[2].inverse())
        return [_ZERO, root]
    if all(e % 2 == 0 for e in exponents) and exponents[-1] <= 4:
        inner = {e // 2: c for e, c in profile.items()}
        outer = _univariate_roots(inner)
        if outer is None:
            return None
        return [r for v in outer for r in square_roots(v)]
    return None


class _Budget:
    def __init__(self, nodes: int):
        self.left = nodes

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


def _solve_system(eqs: list[Poly], n_unknowns: int,
                  budget: _Budget) -> Iterator[dict[int, CycScalar]]:
    """DFS over exact solving steps, yielding complete assignments."""

    def recurse(eqs: list[Poly], assignment: dict[int, CycScalar]) -> Iterator[dict[int, CycScalar]]:
        if not budget.spend():
            return
        pending = []
        for eq in eqs:
            if not eq.terms:
                continue
            used = _used_unknowns(eq)
            if not used:
                return  # nonzero constant: contradiction
            pending.append((eq, used))

        if not pending:
            free = [i for i in range(n_unknowns) if i not in assignment]
            if not free:
                yield dict(assignment)
                return
            i = free[0]
            for value in _BANK:
                assignment[i] = value
                yield from recurse(eqs, assignment)
                del assignment[i]
            return

        # Deterministic step first: a linear equation in a single unknown.
        for eq, used in pending:
            if len(used) == 1:
                (index,) = used
                profile = _univariate_profile(eq, index)
                if profile is not None and sorted(profile) in ([1], [0, 1]):
                    value = -(profile.get(0, _ZERO) * profile[1].inverse())
                    assignment[index] = value
                    rest = [_plug(e, index, value) for e, _ in pending]
                    yield from recurse(rest, assignment)
                    del assignment[index]
                    return

        # Branching on the roots of a univariate equation.
        for eq, used in pending:
            if len(used) == 1:
                (index,) = used
                profile = _univariate_profile(eq, index)
                roots = _univariate_roots(profile) if profile is not None else None
                if roots is not None:
                    for value in roots:
                        assignment[index] = value
                        rest = [_plug(e, index, value) for e, _ in pending]
                        yield from recurse(rest, assignment)
                        del assignment[index]
                    return

        # Last resort: guess from the bank.  Aim at the smallest pending
        # equation so that one guess leaves it univariate and the branch is
        # resolved or contradicted immediately.
        counts: dict[int, int] = {}
        for _, used in pending:
            for i in used:
                counts[i] = counts.get(i, 0) + 1
        _, focus = min(pending, key=lambda item: (len(item[1]), len(item[0].terms)))
        index = max(focus, key=lambda i: (counts[i], -i))
        for value in _BANK:
            assignment[index] = value
            rest = [_plug(e, index, value) for e, _ in pending]
            yield from recurse(rest, assignment)
            del assignment[index]

    yield from recurse(eqs, {})


def _symbolic_product(target: OrbifoldAlgebra, u: list[Poly], v: list[Poly],
                      ring: tuple[str, ...]) -> list[Poly]:
    out = [Poly.zero(ring) for _ in range(target.dim)]
    for i, cu in enumerate(u):
        if cu.is_zero():
            continue
        for j, cv in enumerate(v):
            if cv.is_zero():
                continue
            prod = cu * cv
            for k, s in target.basis_product(i, j).items():
                out[k] = out[k] + prod.scale(s)
    return out


def _dedupe_key(eq: Poly) -> tuple:
    return tuple(sorted((exps, tuple(c.to_json())) for exps, c in eq.terms.items()))


def search_iso(source: InvertiblePoly, target: OrbifoldAlgebra,
               generator_candidates: Mapping[int, Sequence[int]] | None = None,
               *, require_frobenius: bool = True,
               max_nodes: int = 60000) -> IsoWitness:
    """Search for a witness by solving the relation (and pairing) equations.

    Each source variable is mapped to an unknown-scalar combination of the
    target basis elements matching its weighted degree; the resulting exact
    polynomial system over ℚ(ζ₂₄) is solved by a depth-first cascade of
    linear eliminations, radical extractions, and a small scalar bank.  Every
    solution is re-verified before being returned.  Raises `SearchFailure`
    when the ansatz space is exhausted.
    """
    src = source_algebra(source)
    if src.dim != target.dim:
        raise SearchFailure(f"dimensions differ: source {src.dim}, target {target.dim}")

    degrees = [Fraction(wt, source.degree) for wt in source.weights]
    candidates = {i: list(generator_candidates[i]) if generator_candidates is not None
                  else [k for k in range(target.dim) if target.degrees[k] == degrees[i]]
                  for i in range(source.arity)}

    layout: list[tuple[int, int]] = []  # unknown -> (variable, target basis index)
    for i in range(source.arity):
        layout.extend((i, k) for k in candidates[i])
    ring = tuple(f"u{t}" for t in range(len(layout)))

    sym_images: list[list[Poly]] = [[Poly.zero(ring) for _ in range(target.dim)]
                                    for _ in range(source.arity)]
    for t, (i, k) in enumerate(layout):
        sym_images[i][k] = sym_images[i][k] + Poly.variable(ring, t)

    power_cache: list[dict[int, list[Poly]]] = [
        {0: [Poly.constant(ring, _ONE) if k == target.identity_index else Poly.zero(ring)
             for k in range(target.dim)]}
        for _ in range(source.arity)]

    def sym_power(i: int, e: int) -> list[Poly]:
        cache = power_cache[i]
        top = max(cache)
        while top < e:
            cache[top + 1] = _symbolic_product(target, cache[top], sym_images[i], ring)
            top += 1
        return cache[e]

    def sym_evaluate(p: Poly) -> list[Poly]:
        out = [Poly.zero(ring) for _ in range(target.dim)]
        for exps, coeff in p.terms.items():
            acc = sym_power(0, exps[0]) if exps else out
            for i, e in enumerate(exps):
                if i == 0:
                    continue
                if e:
                    acc = _symbolic_product(target, acc, sym_power(i, e), ring)
            out = [a + b.scale(coeff) for a, b in zip(out, acc)]
        return out

    equations: dict[tuple, Poly] = {}

    def add_equation(eq: Poly) -> None:
        if eq.terms:
            equations.setdefault(_dedupe_key(eq), eq)

    for i in range(source.arity):
        for entry in sym_evaluate(source.poly.partial_derivative(i)):
            add_equation(entry)

    if require_frobenius:
        phi = [sym_evaluate(Poly.monomial(source.vars, m)) for _, m in src.basis]
        lam = [target.trace(row) for row in
               ([_ONE if k == l else _ZERO for l in range(target.dim)]
                for k in range(target.dim))]
        for i in range(src.dim):
            for j in range(i, src.dim):
                prod = _symbolic_product(target, phi[i], phi[j], ring)
                pairing = Poly.zero(ring)
                for k, entry in enumerate(prod):
                    if not lam[k].is_zero():
                        pairing = pairing + entry.scale(lam[k])
                add_equation(pairing - Poly.constant(ring, src.gram[i][j]))

    budget = _Budget(max_nodes)
    for assignment in _solve_system(list(equations.values()), len(layout), budget):
        images = [target.zero_vector() for _ in range(source.arity)]
        for t, (i, k) in enumerate(layout):
            images[i][k] = images[i][k] + assignment[t]
        w = IsoWitness(source, target, tuple(tuple(img) for img in images))
        if not verify_algebra_iso(w).passed:
            continue
        if require_frobenius and not verify_frobenius_iso(w).passed:
            continue
        return w
    if budget.left < 0:
        raise SearchFailure(f"search stopped after {max_nodes} nodes without a witness")
    raise SearchFailure("ansatz search space exhausted without a witness")


# --- row certificates --------------------------------------------------------


@dataclass(frozen=True)
class RowCertificate:
    """Outcome of certifying one catalog row.

    `level` is "frobenius" when a pairing-preserving isomorphism was verified,
    "algebra" when only an algebra isomorphism could be established, and
    "failed" when a supplied witness did not verify.
    """

    level: str
    method: str
    witness: IsoWitness
    report: Report

    @property
    def full(self) -> bool:
        return self.level == "frobenius"

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "method": self.method,
            "witness": self.witness.to_json(),
            "report": self.report.to_json(),
        }


def certify(source: InvertiblePoly, target: OrbifoldAlgebra,
            witness: IsoWitness | None = None, *,
            max_nodes: int = 60000) -> RowCertificate:
    """Certify Jac(source) ≅ target, preferring a supplied witness.

    Without a witness the ansatz search runs at Frobenius level first and
    falls back to an algebra-level search, so a pair whose algebras match but
    whose pairings cannot be matched is reported as level "algebra" rather
    than as an outright failure.  Raises SearchFailure when not even an
    algebra-level witness exists in the ansatz space.
    """
    if witness is not None:
        report = verify_witness(witness)
        level = "frobenius" if report.passed else "failed"
        return RowCertificate(level, "embedded witness", witness, report)
    try:
        found = search_iso(source, target, max_nodes=max_nodes)
    except SearchFailure:
        found = search_iso(source, target, require_frobenius=False,
                           max_nodes=max_nodes)
        return RowCertificate("algebra", "ansatz search", found,
                              verify_algebra_iso(found))
    return RowCertificate("frobenius", "ansatz search", found, verify_witness(found))


# --- the isomorphism graph ---------------------------------------------------


@dataclass(frozen=True)
class GraphNode:
    """A (polynomial, group) pair drawn in one of the graph's clusters."""

    label: str
    ip: InvertiblePoly
    group: SymmetryGroup
    cluster: int

    def describe(self) -> str:
        gens = [str(g) for g in self.group if not g.is_identity()]
        group = f"<{'; '.join(gens)}>" if gens else "{id}"
        return f"({self.ip.poly}, {group})"


@dataclass(frozen=True)
class GraphEdge:
    a: str
    b: str
    certificate: str


class DualityGraph:
    """Isomorphism graph over (polynomial, group) pairs, one clique per cluster."""

    def __init__(self, nodes: Sequence[GraphNode], edges: Sequence[GraphEdge],
                 components: Sequence[tuple[str, ...]],
                 certifications: Sequence[str],
                 fingerprints: Mapping[str, Fingerprint]):
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.components = tuple(components)
        self.certifications = tuple(certifications)
        self.fingerprints = dict(fingerprints)

    def component_sizes(self) -> list[int]:
        return sorted(len(c) for c in self.components)

    def fingerprint_comparisons(self) -> list[tuple[str, str, bool]]:
        """Fingerprint equality between same-dimension components.

        One representative node per component; this is reported evidence, not
        a non-isomorphism proof.  Distinct components may report equal
        fingerprints (the node list repeats some pairs verbatim).
        """
        out = []
        for comp_a, comp_b in combinations(self.components, 2):
            a, b = comp_a[0], comp_b[0]
            fa, fb = self.fingerprints[a], self.fingerprints[b]
            if fa.dim == fb.dim:
                out.append((a, b, fa == fb))
        return out

    def to_json(self) -> dict:
        by_label = {n.label: n for n in self.nodes}
        return {
            "nodes": [{
                "label": n.label,
                "polynomial": str(n.ip.poly),
                "group": [str(g) for g in n.group],
                "cluster": n.cluster,
                "dimension": self.fingerprints[n.label].dim,
                "fingerprint": self.fingerprints[n.label].to_json(),
            } for n in self.nodes],
            "edges": [{"a": e.a, "b": e.b, "certificate": e.certificate}
                      for e in self.edges],
            "components": [list(c) for c in self.components],
            "component_sizes": self.component_sizes(),
            "certifications": list(self.certifications),
            "fingerprint_comparisons": [
                {"a": a, "b": b, "node_a": by_label[a].describe(),
                 "node_b": by_label[b].describe(),
                 "dimension": self.fingerprints[a].dim, "equal": eq}
                for a, b, eq in self.fingerprint_comparisons()],
        }

    def to_dot(self) -> str:
        lines = ["graph duality {"]
        for n in self.nodes:
            lines.append(f'  "{n.label}" [label="{n.label}: {n.describe()}"];')
        for e in self.edges:
            lines.append(f'  "{e.a}" -- "{e.b}";')
        lines.append("}")
        return "\n".join(lines)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _transported_group(group: SymmetryGroup, perm: Sequence[int]) -> SymmetryGroup:
    members = [GroupElement(tuple(g.phases[perm.index(i)] for i in range(g.arity)))
               for g in group]
    return SymmetryGroup(members, tuple(members))


def _same_node(ip_a: InvertiblePoly, group_a: SymmetryGroup,
               ip_b: InvertiblePoly, group_b: SymmetryGroup) -> bool:
    """Equal up to a variable renaming that also transports the group."""
    for perm in matching_permutations(ip_a.poly, ip_b.poly):
        if _transported_group(group_a, perm) == group_b:
            return True
    return False


def _pair_key(ip: InvertiblePoly, group: SymmetryGroup) -> tuple:
    terms = tuple(sorted((exps, tuple(c.to_json()))
                         for exps, c in ip.poly.terms.items()))
    return (ip.vars, terms, tuple(g.phases for g in group))


def _describe_pair(ip: InvertiblePoly, group: SymmetryGroup) -> str:
    gens = [str(g) for g in group if not g.is_identity()]
    label = f"<{'; '.join(gens)}>" if gens else "{id}"
    return f"({ip.poly}, {label})"


def duality_graph(catalog, *, max_nodes: int = 60000) -> DualityGraph:
    """Assemble the catalog's isomorphism graph and certify every drawn edge.

    The catalog supplies the node list already partitioned into clusters; the
    same (polynomial, group) pair may appear in several clusters.  Every edge
    inside a cluster must be certified mechanically, by a chain of variable
    renamings and verified catalog rows (embedded witness or ansatz search);
    rows are only verified while some in-cluster edge still lacks a
    certificate.  Edges are drawn exclusively inside clusters — two clusters
    containing equal pairs stay separate components.  Raises ValueError if
    any drawn edge cannot be certified.
    """
    from .catalog import row_source, row_target, row_witness  # local to avoid a cycle

    nodes = [GraphNode(n.label, n.ip, n.group, n.cluster)
             for n in catalog.graph_nodes]
    clusters: dict[int, list[GraphNode]] = {}
    for node in nodes:
        clusters.setdefault(node.cluster, []).append(node)

    uf = _UnionFind()
    pairs: dict[tuple, tuple[InvertiblePoly, SymmetryGroup, str]] = {}
    certifications: list[str] = []

    def register(ip: InvertiblePoly, group: SymmetryGroup, name: str) -> tuple:
        """Intern a pair; a new pair is checked against all known ones for renamings."""
        key = _pair_key(ip, group)
        if key in pairs:
            return key
        uf.add(key)
        for other, (oip, ogroup, oname) in pairs.items():
            if _same_node(ip, group, oip, ogroup):
                uf.union(key, other)
                certifications.append(f"variable renaming: {name} ~ {oname}")
        pairs[key] = (ip, group, name)
        return key

    key_of = {node.label: register(node.ip, node.group, node.label)
              for node in nodes}

    def unlinked() -> list[tuple[str, str]]:
        return [(a.label, b.label)
                for members in clusters.values()
                for a, b in combinations(members, 2)
                if uf.find(key_of[a.label]) != uf.find(key_of[b.label])]

    def needy_roots() -> set:
        roots = set()
        for members in clusters.values():
            cluster_roots = {uf.find(key_of[m.label]) for m in members}
            if len(cluster_roots) > 1:
                roots |= cluster_roots
        return roots

    pending = list(catalog.rows)
    for only_relevant_rows in (True, False):
        if not unlinked():
            break
        for row in list(pending):
            needy = needy_roots()
            if not needy:
                break
            source = row_source(row)
            target_ip, target_group = row_target(row)
            a = register(source, SymmetryGroup.trivial(source.arity),
                         _describe_pair(source, SymmetryGroup.trivial(source.arity)))
            b = register(target_ip, target_group,
                         _describe_pair(target_ip, target_group))
            if uf.find(a) == uf.find(b):
                pending.remove(row)
                continue
            if only_relevant_rows and uf.find(a) not in needy and uf.find(b) not in needy:
                continue  # cannot help a still-unlinked cluster edge; deferred
            pending.remove(row)
            target = orbifold_algebra(target_ip, target_group)
            cert = certify(source, target, row_witness(row), max_nodes=max_nodes)
            name_a, name_b = pairs[a][2], pairs[b][2]
            if cert.full:
                uf.union(a, b)
                certifications.append(
                    f"row {row.index}: {name_a} ~ {name_b} by {cert.method}")
            else:
                certifications.append(
                    f"row {row.index}: {name_a} ~ {name_b} not certified "
                    f"({cert.level}-level result only); not linked")

    missing = unlinked()
    if missing:
        raise ValueError("uncertified edges remain: "
                         + "; ".join(f"{a} -- {b}" for a, b in missing))

    components = tuple(tuple(n.label for n in clusters[cid])
                       for cid in sorted(clusters))
    edges = [GraphEdge(a.label, b.label, "closure of certified isomorphisms")
             for cid in sorted(clusters)
             for a, b in combinations(clusters[cid], 2)]

    prints = {node.label: fingerprint(orbifold_algebra(node.ip, node.group))
              for node in nodes}

    return DualityGraph(nodes, edges, components, certifications, prints)
