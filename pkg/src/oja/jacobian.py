"""Jacobian algebras as explicit finite-dimensional commutative algebras.

The quotient Jac(f) = K[x]/(df/dx_1, ..., df/dx_n) is materialized through a
reduced Groebner basis of the partial-derivative ideal in graded reverse
lexicographic order.  Finite dimensionality is equivalent to every variable
contributing a pure-power leading monomial, which also bounds the box of
standard monomials.  On top of the monomial basis live normal forms, class
multiplication, the socle, the residue-normalized trace functional, linear
solving in the quotient, and an isomorphism-invariant fingerprint.

All coefficient arithmetic happens in Q(zeta_24); nothing is approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import solve_linear
from .poly import Poly, grevlex_key
from .scalar import CycScalar

Monomial = tuple[int, ...]

_ZERO = CycScalar.zero()
_ONE = CycScalar.one()


# --- monomial helpers ---------------------------------------------------


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def leading_monomial(p: Poly) -> Monomial:
    """Largest exponent vector of p in grevlex order."""
    if p.is_zero():
        raise ValueError("zero polynomial has no leading monomial")
    return max(p.terms, key=grevlex_key)


def _monic(p: Poly) -> Poly:
    return p.scale(p.terms[leading_monomial(p)].inverse())


# --- division and Buchberger --------------------------------------------


def _reduce_terms(terms: Mapping[Monomial, CycScalar],
                  gens: Sequence[tuple[Monomial, Poly]]) -> dict[Monomial, CycScalar]:
    """Full normal form of a term dict modulo monic generators."""
    work = dict(terms)
    out: dict[Monomial, CycScalar] = {}
    while work:
        mono = max(work, key=grevlex_key)
        coeff = work.pop(mono)
        if coeff.is_zero():
            continue
        for lm, g in gens:
            if _divides(lm, mono):
                shift = tuple(m - l for m, l in zip(mono, lm))
                for exps, c in g.terms.items():
                    if exps == lm:
                        continue
                    key = _mono_mul(shift, exps)
                    prev = work.get(key)
                    work[key] = prev - coeff * c if prev is not None else -(coeff * c)
                break
        else:
            out[mono] = coeff
    return out


def _reduce_poly(p: Poly, gens: Sequence[tuple[Monomial, Poly]]) -> Poly:
    return Poly(p.vars, _reduce_terms(p.terms, gens))


def _spoly(f: Poly, g: Poly) -> Poly:
    lf, lg = leading_monomial(f), leading_monomial(g)
    lcm = _mono_lcm(lf, lg)
    a = Poly.monomial(f.vars, tuple(l - e for l, e in zip(lcm, lf)))
    b = Poly.monomial(g.vars, tuple(l - e for l, e in zip(lcm, lg)))
    return a * f - b * g


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Groebner basis in grevlex order."""

    generators: tuple[Poly, ...]
    order: str = "grevlex"

    @property
    def leading_monomials(self) -> tuple[Monomial, ...]:
        return tuple(leading_monomial(g) for g in self.generators)

    def reduce(self, p: Poly) -> Poly:
        """Unique normal form of p modulo the basis."""
        return _reduce_poly(p, [(leading_monomial(g), g) for g in self.generators])


def groebner(gens: Sequence[Poly]) -> GroebnerBasis:
    """Buchberger's algorithm with the normal selection strategy.

    Pairs whose leading monomials are coprime are discarded (first Buchberger
    criterion), as are pairs subsumed by an already-processed third generator
    (chain criterion).  The result is auto-reduced and monic.
    """
    if not gens:
        raise ValueError("empty generator list")
    basis = [_monic(g) for g in gens if not g.is_zero()]
    if not basis:
        raise ValueError("all generators are zero")
    pending = {(i, j) for i in range(len(basis)) for j in range(i)}

    def lm(i: int) -> Monomial:
        return leading_monomial(basis[i])

    while pending:
        i, j = min(pending, key=lambda pair: grevlex_key(_mono_lcm(lm(pair[0]), lm(pair[1]))))
        pending.discard((i, j))
        lcm = _mono_lcm(lm(i), lm(j))
        if lcm == _mono_mul(lm(i), lm(j)):
            continue  # coprime leading monomials
        if any(k != i and k != j and _divides(lm(k), lcm)
               and (min(i, k), max(i, k)) not in pending
               and (min(j, k), max(j, k)) not in pending
               for k in range(len(basis))):
            continue  # chain criterion
        remainder = _reduce_poly(_spoly(basis[i], basis[j]),
                                 [(leading_monomial(g), g) for g in basis])
        if remainder.is_zero():
            continue
        basis.append(_monic(remainder))
        new = len(basis) - 1
        pending.update((k, new) for k in range(new))

    # Minimalize: keep only generators whose leading monomial is not divisible
    # by another's.  Sorting ascending makes a single greedy pass sufficient.
    basis.sort(key=lambda g: grevlex_key(leading_monomial(g)))
    minimal: list[Poly] = []
    for g in basis:
        if not any(_divides(leading_monomial(h), leading_monomial(g)) for h in minimal):
            minimal.append(g)
    # Full inter-reduction of the tails.
    reduced = []
    for idx, g in enumerate(minimal):
        others = [(leading_monomial(h), h) for k, h in enumerate(minimal) if k != idx]
        reduced.append(_monic(_reduce_poly(g, others)))
    return GroebnerBasis(tuple(reduced))


# --- standard monomials ---------------------------------------------------


def _power_box(lms: Sequence[Monomial], arity: int) -> list[int] | None:
    """Per-variable exponent bounds from pure-power leading monomials.

    Returns None when some variable has no pure power among the leading
    monomials, which is exactly the infinite-dimensional case.
    """
    bounds: list[int | None] = [None] * arity
    for lm in lms:
        support = [i for i, e in enumerate(lm) if e]
        if not support:
            return [0] * arity  # the ideal contains a unit
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
    if any(b is None for b in bounds):
        return None
    return bounds  # type: ignore[return-value]


def _standard_monomials(lms: Sequence[Monomial], bounds: Sequence[int]) -> list[Monomial]:
    out = [m for m in cartesian(*(range(b) for b in bounds))
           if not any(_divides(lm, m) for lm in lms)]
    out.sort(key=grevlex_key)
    return out


def has_isolated_singularity(f: Poly) -> bool:
    """True iff the Jacobian algebra of f is finite-dimensional."""
    n = len(f.vars)
    if n == 0:
        return True
    partials = [f.partial_derivative(i) for i in range(n)]
    if any(p.is_zero() for p in partials):
        return False
    gb = groebner(partials)
    return _power_box(gb.leading_monomials, n) is not None


# --- the quotient algebra -------------------------------------------------


class QuotientAlgebra:
    """Jac(f) with an explicit standard-monomial basis.

    Instances are immutable apart from an internal product cache and are
    created through :func:`quotient_algebra`.
    """

    def __init__(self, f: Poly, weights: tuple[int, ...], degree: int,
                 gb: GroebnerBasis, basis: tuple[Monomial, ...],
                 socle: Monomial, hess_nf: Poly):
        self.f = f
        self.vars = f.vars
        self.weights = weights
        self.degree = degree
        self.gb = gb
        self.basis = basis
        self.mu = len(basis)
        self.socle = socle
        self.hess_nf = hess_nf
        # hess_nf = hess_coeff * socle monomial; nonzero by construction.
        self.hess_coeff = hess_nf.terms[socle]
        self.trace_scale = self.hess_coeff.inverse()
        self._index = {m: i for i, m in enumerate(basis)}
        self._products: dict[tuple[Monomial, Monomial], Poly] = {}

    # -- structure-constant protocol (shared with the orbifold algebra) --

    @property
    def dim(self) -> int:
        return self.mu

    @property
    def identity_index(self) -> int:
        return self._index[(0,) * len(self.vars)]

    def basis_product(self, i: int, j: int) -> dict[int, CycScalar]:
        nf = self.multiply(self.basis[i], self.basis[j])
        return {self._index[m]: c for m, c in nf.terms.items()}

    # -- normal forms and coordinates --

    def normal_form(self, p: Poly) -> Poly:
        if len(p.vars) != len(self.vars):
            raise ValueError("arity mismatch")
        return self.gb.reduce(p)

    def multiply(self, a: Monomial, b: Monomial) -> Poly:
        """Normal form of the product of two basis monomials, cached."""
        key = (a, b) if a <= b else (b, a)
        hit = self._products.get(key)
        if hit is None:
            hit = self.normal_form(Poly.monomial(self.vars, _mono_mul(a, b)))
            self._products[key] = hit
        return hit

    def coords(self, p: Poly) -> list[CycScalar]:
        """Coordinates of [p] over the standard-monomial basis."""
        nf = self.normal_form(p)
        vec = [_ZERO] * self.mu
        for m, c in nf.terms.items():
            vec[self._index[m]] = c
        return vec

    def from_coords(self, vec: Sequence[CycScalar]) -> Poly:
        return Poly(self.vars, {m: c for m, c in zip(self.basis, vec)})

    def weighted_degree(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    @property
    def socle_degree(self) -> int:
        return sum(self.degree - 2 * w for w in self.weights)

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "weights": list(self.weights),
            "degree": self.degree,
            "groebner_basis": [g.to_json() for g in self.gb.generators],
            "basis": [list(m) for m in self.basis],
            "mu": self.mu,
            "socle": list(self.socle),
            "trace_scale": self.trace_scale.to_json(),
        }

    def __repr__(self) -> str:
        return f"QuotientAlgebra({self.f}, mu={self.mu})"


_CACHE: dict[tuple, QuotientAlgebra] = {}


def _cache_key(f: Poly, weights: tuple[int, ...], degree: int) -> tuple:
    terms = tuple(sorted((m, tuple(c.to_json())) for m, c in f.terms.items()))
    return (f.vars, terms, weights, degree)


def quotient_algebra(f: Poly, weights: Sequence[int], degree: int) -> QuotientAlgebra:
    """Construct Jac(f) for a weighted homogeneous f.

    Raises if the quotient is infinite-dimensional or the socle candidate is
    not unique; the latter would make the trace normalization ambiguous, so
    the construction aborts rather than picking arbitrarily.
    """
    weights = tuple(weights)
    key = _cache_key(f, weights, degree)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit

    n = len(f.vars)
    if not f.is_weighted_homogeneous(weights, degree):
        raise ValueError(f"{f} is not weighted homogeneous for {weights}; degree {degree}")
    if n == 0:
        gb = GroebnerBasis((), "grevlex")
        algebra = QuotientAlgebra(f, weights, degree, gb, ((),), (), Poly.constant((), _ONE))
        _CACHE[key] = algebra
        return algebra

    partials = [f.partial_derivative(i) for i in range(n)]
    if any(p.is_zero() for p in partials):
        raise ValueError(f"Jacobian algebra of {f} is infinite-dimensional")
    gb = groebner(partials)
    bounds = _power_box(gb.leading_monomials, n)
    if bounds is None:
        raise ValueError(f"Jacobian algebra of {f} is infinite-dimensional")
    basis = tuple(_standard_monomials(gb.leading_monomials, bounds))

    socle_degree = sum(degree - 2 * w for w in weights)
    socle_candidates = [m for m in basis
                        if sum(w * e for w, e in zip(weights, m)) == socle_degree]
    if len(socle_candidates) != 1:
        raise ValueError(
            f"socle of Jac({f}) is not unique: weighted degree {socle_degree} "
            f"is carried by {socle_candidates}")
    socle = socle_candidates[0]

    hess_nf = gb.reduce(f.hessian())
    if set(hess_nf.terms) != {socle}:
        raise ValueError(f"Hessian class of {f} is not a nonzero multiple of the socle")
    for i in range(n):
        bumped = tuple(e + (1 if j == i else 0) for j, e in enumerate(socle))
        if not gb.reduce(Poly.monomial(f.vars, bumped)).is_zero():
            raise ValueError(f"socle of Jac({f}) is not annihilated by {f.vars[i]}")

    algebra = QuotientAlgebra(f, weights, degree, gb, basis, socle, hess_nf)
    _CACHE[key] = algebra
    return algebra


def milnor(f: Poly) -> int:
    """Dimension of Jac(f); raises when it is infinite."""
    n = len(f.vars)
    if n == 0:
        return 1
    partials = [f.partial_derivative(i) for i in range(n)]
    if any(p.is_zero() for p in partials):
        raise ValueError(f"Jacobian algebra of {f} is infinite-dimensional")
    gb = groebner(partials)
    bounds = _power_box(gb.leading_monomials, n)
    if bounds is None:
        raise ValueError(f"Jacobian algebra of {f} is infinite-dimensional")
    return len(_standard_monomials(gb.leading_monomials, bounds))


# --- trace functional ------------------------------------------------------


def trace_functional(algebra: QuotientAlgebra,
                     scale: int | Fraction | CycScalar) -> Callable[[Poly], CycScalar]:
    """The linear functional vanishing off the socle with λ([hess f]) = scale."""
    if isinstance(scale, (int, Fraction)):
        scale = CycScalar.from_rational(scale)
    factor = scale * algebra.trace_scale

    def trace(p: Poly) -> CycScalar:
        nf = algebra.normal_form(p)
        coeff = nf.terms.get(algebra.socle)
        return factor * coeff if coeff is not None else _ZERO

    return trace


# --- linear solving in the quotient ----------------------------------------


def solve_in_quotient(algebra: QuotientAlgebra, a: Poly, b: Poly,
                      support: Iterable[int] | None = None,
                      degree: int | None = None,
                      invariant_under: Sequence[Sequence[Fraction]] | None = None,
                      ) -> tuple[Poly, bool]:
    """Find H with [a·H] = [b] in the quotient, constrained as requested.

    H is sought as a combination of monomials inside the standard-monomial
    box, optionally restricted to the given variable support, to a fixed
    weighted degree, and to monomials m with Σᵢ phases[i]·m[i] integral for
    every phase vector in `invariant_under`.  Returns the normal form of a
    solution and whether its class is unique under the constraints: the
    kernel of the multiplication map on the candidate span must consist of
    representatives of the zero class.
    """
    a_nf = algebra.normal_form(a)
    if a_nf.is_zero():
        raise ValueError("cannot solve against the zero class")
    n = len(algebra.vars)
    bounds = [0] * n
    for lm in algebra.gb.leading_monomials:
        support_lm = [i for i, e in enumerate(lm) if e]
        if len(support_lm) == 1:
            i = support_lm[0]
            bounds[i] = lm[i] if bounds[i] == 0 else min(bounds[i], lm[i])
    allowed = set(support) if support is not None else None

    def admissible(m: Monomial) -> bool:
        if allowed is not None and any(e and i not in allowed for i, e in enumerate(m)):
            return False
        if degree is not None and algebra.weighted_degree(m) != degree:
            return False
        if invariant_under:
            for phases in invariant_under:
                if sum(Fraction(ph) * e for ph, e in zip(phases, m)) % 1 != 0:
                    return False
        return True

    candidates = [m for m in cartesian(*(range(bd) for bd in bounds)) if admissible(m)]
    candidates.sort(key=grevlex_key)
    if not candidates:
        raise ValueError("no admissible candidate monomials")

    columns = [algebra.coords(a_nf * Poly.monomial(algebra.vars, m)) for m in candidates]
    matrix = [[columns[j][i] for j in range(len(candidates))] for i in range(algebra.mu)]
    particular, nullspace = solve_linear(matrix, algebra.coords(b), _ZERO, _ONE)
    if particular is None:
        raise ValueError("no solution in the quotient under the given constraints")

    unique = all(
        algebra.normal_form(
            Poly(algebra.vars, dict(zip(candidates, vec)))).is_zero()
        for vec in nullspace)
    solution = Poly(algebra.vars, dict(zip(candidates, particular)))
    return algebra.normal_form(solution), unique


# --- fingerprints -----------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants of a finite commutative unital algebra.

    `powers` lists dim m^k for k = 0, 1, ... down to the first zero, where m
    is the ideal spanned by the non-identity basis vectors.
    """

    dim: int
    powers: tuple[int, ...]
    socle_dim: int

    def __str__(self) -> str:
        return (f"dim {self.dim}, radical powers "
                f"({', '.join(str(d) for d in self.powers)}), socle dim {self.socle_dim}")

    def to_json(self) -> dict:
        return {"dim": self.dim, "powers": list(self.powers), "socle_dim": self.socle_dim}


def _span_dim(vectors: list[list[CycScalar]]) -> list[list[CycScalar]]:
    """Row-reduce and drop zero rows, returning a basis of the span."""
    from .linalg import rref

    if not vectors:
        return []
    reduced, pivots = rref([list(v) for v in vectors])
    return [reduced[i] for i in range(len(pivots))]


def fingerprint(algebra) -> Fingerprint:
    """Fingerprint of any object exposing dim / identity_index / basis_product."""
    n = algebra.dim
    if n == 0:
        return Fingerprint(0, (0,), 0)
    one = algebra.identity_index
    generators = [i for i in range(n) if i != one]

    def times_basis(i: int, vec: list[CycScalar]) -> list[CycScalar]:
        out = [_ZERO] * n
        for j, c in enumerate(vec):
            if c.is_zero():
                continue
            for k, s in algebra.basis_product(i, j).items():
                out[k] = out[k] + c * s
        return out

    powers = [n]
    current = [[_ONE if j == i else _ZERO for j in range(n)] for i in generators]
    current = _span_dim(current)
    while current:
        powers.append(len(current))
        current = _span_dim([times_basis(i, vec) for i in generators for vec in current])
    powers.append(0)

    # Socle: simultaneous kernel of multiplication by every generator of m.
    if not generators:
        return Fingerprint(n, tuple(powers), n)
    rows: list[list[CycScalar]] = []
    for i in generators:
        mats = [algebra.basis_product(i, j) for j in range(n)]
        for k in range(n):
            rows.append([mats[j].get(k, _ZERO) for j in range(n)])
    _, nullspace = solve_linear(rows, [_ZERO] * len(rows), _ZERO, _ONE)
    return Fingerprint(n, tuple(powers), len(nullspace))
