"""Invertible polynomials, Berglund–Hübsch transposition, diagonal symmetries.

An invertible polynomial here is a sum of N monomials in N variables whose
exponent matrix E (row i = exponents of monomial i) is nonsingular and admits
a positive integral weight system E w = d * (1, ..., 1).  Its transpose swaps
the roles of rows and columns while keeping coefficients.

Diagonal symmetries are recorded as phase vectors: g = (q_1, ..., q_N) with
q_i in Q/Z acts by x_i -> e[q_i] x_i.  The full group G_f is generated by the
columns of E^{-1} taken mod 1 — equivalently all phase vectors with E q
integral — and |G_f| = |det E|, which the constructor cross-checks against
the Smith normal form of E.  The SL subgroup keeps the elements of integral
age (= phase sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from .linalg import det_rational, invert_rational, smith_diagonal
from .poly import Poly, grevlex_key
from .scalar import CycScalar


@dataclass(frozen=True)
class GroupElement:
    """A diagonal symmetry, stored as phases in [0, 1)."""

    phases: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(p % 1 for p in self.phases))

    @classmethod
    def identity(cls, arity: int) -> "GroupElement":
        return cls((Fraction(0),) * arity)

    @classmethod
    def parse(cls, text: str) -> "GroupElement":
        try:
            return cls(tuple(Fraction(part.strip()) for part in text.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad group element {text!r}: {exc}") from None

    @property
    def arity(self) -> int:
        return len(self.phases)

    def compose(self, other: "GroupElement") -> "GroupElement":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        return GroupElement(tuple(a + b for a, b in zip(self.phases, other.phases)))

    __mul__ = compose

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(-p for p in self.phases))

    def __pow__(self, n: int) -> "GroupElement":
        return GroupElement(tuple(n * p for p in self.phases))

    def order(self) -> int:
        return math.lcm(*(p.denominator for p in self.phases)) if self.phases else 1

    def age(self) -> Fraction:
        return sum(self.phases, Fraction(0))

    def fixed_indices(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.phases) if p == 0)

    def is_identity(self) -> bool:
        return all(p == 0 for p in self.phases)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.phases)


class SymmetryGroup:
    """A finite group of diagonal symmetries, iterated in a canonical order."""

    def __init__(self, elements: Iterable[GroupElement], generators: Sequence[GroupElement] = ()):
        elts = sorted(set(elements), key=lambda g: g.phases)
        if not elts:
            raise ValueError("a group needs at least the identity")
        arity = elts[0].arity
        if any(g.arity != arity for g in elts):
            raise ValueError("mixed arities in group")
        if not elts[0].is_identity():
            raise ValueError("identity missing")
        self.elements = tuple(elts)
        self.generators = tuple(generators)

    @classmethod
    def trivial(cls, arity: int) -> "SymmetryGroup":
        return cls([GroupElement.identity(arity)])

    @classmethod
    def generated_by(cls, generators: Iterable[GroupElement], arity: int) -> "SymmetryGroup":
        gens = [g for g in generators if not g.is_identity()]
        elements = {GroupElement.identity(arity)}
        frontier = [GroupElement.identity(arity)]
        while frontier:
            fresh = []
            for e in frontier:
                for g in gens:
                    h = e.compose(g)
                    if h not in elements:
                        elements.add(h)
                        fresh.append(h)
            frontier = fresh
        return cls(elements, tuple(gens))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self.elements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymmetryGroup) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def is_subgroup_of(self, other: "SymmetryGroup") -> bool:
        mine = set(self.elements)
        return mine <= set(other.elements)

    def __repr__(self) -> str:
        return f"SymmetryGroup[{', '.join(f'({g})' for g in self.elements)}]"


@dataclass(frozen=True)
class InvertiblePoly:
    poly: Poly
    exponents: tuple[tuple[int, ...], ...]
    coeffs: tuple[CycScalar, ...]
    weights: tuple[int, ...]
    degree: int

    @property
    def vars(self) -> tuple[str, ...]:
        return self.poly.vars

    @property
    def arity(self) -> int:
        return len(self.poly.vars)

    def normalized_weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.degree) for w in self.weights)


def _weight_system(rows: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], int]:
    n = len(rows)
    inv = invert_rational(rows)
    w_frac = [sum(inv[j]) for j in range(n)]  # E^{-1} * (1,...,1)
    d = math.lcm(*(x.denominator for x in w_frac)) if n else 1
    weights = tuple(int(x * d) for x in w_frac)
    if any(w <= 0 for w in weights):
        raise ValueError(f"no positive weight system (got {weights} over degree {d})")
    assert math.gcd(*weights, d) == 1
    return weights, d


def _assemble(vars: Sequence[str], rows: Sequence[tuple[int, ...]],
              coeffs: Sequence[CycScalar], check_nondegenerate: bool) -> InvertiblePoly:
    n = len(vars)
    if det_rational(rows) == 0:
        raise ValueError("exponent matrix is singular")
    weights, d = _weight_system(rows)
    poly = Poly(vars, dict(zip(rows, coeffs)))
    if len(poly.terms) != n:
        raise ValueError("duplicate monomials")
    if check_nondegenerate:
        from .jacobian import has_isolated_singularity  # deferred to avoid a cycle

        transposed = [tuple(rows[j][i] for j in range(n)) for i in range(n)]
        for candidate, label in ((poly, "polynomial"),
                                 (Poly(vars, dict(zip(transposed, coeffs))), "transpose")):
            if not has_isolated_singularity(candidate):
                raise ValueError(f"degenerate critical point: {label} {candidate} "
                                 "has an infinite-dimensional Jacobian algebra")
    return InvertiblePoly(poly, tuple(rows), tuple(coeffs), weights, d)


def build_invertible(f: Poly) -> InvertiblePoly:
    """Validate f as invertible and compute its canonical weight system.

    Monomial rows are ordered by descending grevlex, which fixes the pairing
    of monomials to variables that the transpose uses.
    """
    n = len(f.vars)
    rows = sorted(f.terms, key=grevlex_key, reverse=True)
    if len(rows) != n:
        raise ValueError(
            f"invertible polynomial needs exactly {n} monomials in {n} variables, got {len(rows)}")
    coeffs = [f.terms[e] for e in rows]
    return _assemble(f.vars, rows, coeffs, check_nondegenerate=True)


def transpose(ip: InvertiblePoly) -> InvertiblePoly:
    """Berglund–Hübsch transpose: transpose the exponent matrix, keep coefficients.

    Row order is preserved (row i of the transpose is column i of the
    original), which makes the operation an exact involution.
    """
    n = ip.arity
    rows = [tuple(ip.exponents[j][i] for j in range(n)) for i in range(n)]
    return _assemble(ip.vars, rows, ip.coeffs, check_nondegenerate=False)


def max_symmetry_group(ip: InvertiblePoly) -> SymmetryGroup:
    """The full diagonal symmetry group G_f, with order cross-checks."""
    inv = invert_rational(ip.exponents)
    n = ip.arity
    gens = [GroupElement(tuple(inv[i][j] for i in range(n))) for j in range(n)]
    group = SymmetryGroup.generated_by(gens, n)
    expected = abs(det_rational(ip.exponents))
    assert expected.denominator == 1
    snf_order = 1
    for dk in smith_diagonal([list(r) for r in ip.exponents]):
        snf_order *= dk
    if group.order != int(expected) or group.order != snf_order:
        raise AssertionError(
            f"group order {group.order} disagrees with |det E| = {expected} / SNF {snf_order}")
    for g in group:
        for row in ip.exponents:
            s = sum(e * p for e, p in zip(row, g.phases))
            if s.denominator != 1:
                raise AssertionError(f"generated element {g} is not a symmetry")
    return group


def sl_subgroup(group: SymmetryGroup) -> SymmetryGroup:
    """Elements of integral age (the SL(N) condition for diagonal matrices)."""
    members = [g for g in group if g.age().denominator == 1]
    return SymmetryGroup(members, tuple(g for g in group.generators if g in members))


def matching_permutations(f: Poly, g: Poly) -> list[tuple[int, ...]]:
    """All maps σ (variable i of f ↦ variable σ[i] of g) turning f into g."""
    if len(f.vars) != len(g.vars) or len(f.terms) != len(g.terms):
        return []
    n = len(f.vars)
    found = []
    for perm in permutations(range(n)):
        remapped = {}
        for exps, coeff in f.terms.items():
            new = [0] * n
            for i, e in enumerate(exps):
                new[perm[i]] = e
            remapped[tuple(new)] = coeff
        if remapped == g.terms:
            found.append(perm)
    return found


def same_up_to_variable_permutation(f: Poly, g: Poly) -> bool:
    """True when renaming variables turns f into g (coefficients included)."""
    return bool(matching_permutations(f, g))
