"""Multivariate polynomials over Q(zeta_24) with exact exponent bookkeeping.

A `Poly` is a sparse map from exponent tuples to nonzero `CycScalar`
coefficients together with an ordered tuple of variable names; the zero
polynomial has an empty map.  Arity 0 is allowed and behaves as the scalar
ring itself (a single term with the empty exponent tuple), which is what the
fixed locus of a group element with no fixed coordinates restricts to.

Display and serialization order terms by descending graded-reverse-lex so
that equal polynomials always print and dump identically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalar import CycScalar


def grevlex_key(exps: Sequence[int]):
    """Sort key realizing graded reverse lexicographic order (ascending).

    Total degree first; ties are broken so that the monomial whose exponent
    difference has a negative last nonzero entry is the larger one.
    """
    return (sum(exps), tuple(-e for e in reversed(exps)))


class PolyParseError(ValueError):
    pass


class Poly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], CycScalar] | None = None):
        self.vars = tuple(vars)
        clean: dict[tuple[int, ...], CycScalar] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != len(self.vars):
                    raise ValueError(f"exponent tuple {exps} does not match arity {len(self.vars)}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if not coeff.is_zero():
                    key = tuple(exps)
                    if key in clean:
                        s = clean[key] + coeff
                        if s.is_zero():
                            del clean[key]
                        else:
                            clean[key] = s
                    else:
                        clean[key] = coeff
        self.terms = clean

    # --- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], value: CycScalar) -> "Poly":
        return cls(vars, {(0,) * len(vars): value})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], coeff: CycScalar | None = None) -> "Poly":
        return cls(vars, {tuple(exps): coeff if coeff is not None else CycScalar.one()})

    @classmethod
    def variable(cls, vars: Sequence[str], index: int) -> "Poly":
        exps = [0] * len(vars)
        exps[index] = 1
        return cls.monomial(vars, exps)

    # --- ring operations ----------------------------------------------

    def _check_ring(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"mixed variable rings {self.vars} vs {other.vars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_ring(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            s = terms.get(exps, CycScalar.zero()) + coeff
            if s.is_zero():
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Poly(self.vars, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_ring(other)
        terms: dict[tuple[int, ...], CycScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if key in terms:
                    s = terms[key] + prod
                    if s.is_zero():
                        del terms[key]
                    else:
                        terms[key] = s
                elif not prod.is_zero():
                    terms[key] = prod
        return Poly(self.vars, terms)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.constant(self.vars, CycScalar.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, scalar: CycScalar) -> "Poly":
        if scalar.is_zero():
            return Poly.zero(self.vars)
        return Poly(self.vars, {e: c * scalar for e, c in self.terms.items()})

    def map_coeffs(self, fn: Callable[[CycScalar], CycScalar]) -> "Poly":
        return Poly(self.vars, {e: fn(c) for e, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.vars == other.vars and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # --- calculus and structure ----------------------------------------

    def partial_derivative(self, index: int) -> "Poly":
        terms: dict[tuple[int, ...], CycScalar] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e:
                key = exps[:index] + (e - 1,) + exps[index + 1:]
                terms[key] = coeff * CycScalar.from_rational(e)
        return Poly(self.vars, terms)

    def hessian(self) -> "Poly":
        """Determinant of the matrix of second partials, exactly."""
        n = len(self.vars)
        second = [[self.partial_derivative(i).partial_derivative(j) for j in range(n)]
                  for i in range(n)]
        return _determinant(second, self.vars)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def weighted_degrees(self, weights: Sequence[int]) -> set[Fraction | int]:
        return {sum(w * e for w, e in zip(weights, exps)) for exps in self.terms}

    def is_weighted_homogeneous(self, weights: Sequence[int], degree: int) -> bool:
        return all(sum(w * e for w, e in zip(weights, exps)) == degree for exps in self.terms)

    def restrict(self, keep: Iterable[int]) -> "Poly":
        """Set all variables NOT in `keep` to zero, shrinking the ring.

        The surviving variables keep their names and relative order; the
        empty `keep` yields an arity-0 polynomial.
        """
        kept = sorted(set(keep))
        new_vars = tuple(self.vars[i] for i in kept)
        dropped = [i for i in range(len(self.vars)) if i not in set(kept)]
        terms: dict[tuple[int, ...], CycScalar] = {}
        for exps, coeff in self.terms.items():
            if any(exps[i] for i in dropped):
                continue
            terms[tuple(exps[i] for i in kept)] = coeff
        return Poly(new_vars, terms)

    def embed(self, ambient_vars: Sequence[str], positions: Sequence[int]) -> "Poly":
        """Lift into a larger ring, placing variable i at positions[i]."""
        if len(positions) != len(self.vars):
            raise ValueError("one position per variable required")
        terms: dict[tuple[int, ...], CycScalar] = {}
        for exps, coeff in self.terms.items():
            lifted = [0] * len(ambient_vars)
            for e, pos in zip(exps, positions):
                lifted[pos] = e
            terms[tuple(lifted)] = coeff
        return Poly(ambient_vars, terms)

    def substitute(self, index: int, replacement: "Poly") -> "Poly":
        """Replace one variable by a polynomial of the same ring."""
        self._check_ring(replacement)
        result = Poly.zero(self.vars)
        powers: dict[int, Poly] = {0: Poly.constant(self.vars, CycScalar.one())}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e not in powers:
                powers[e] = replacement**e
            rest = exps[:index] + (0,) + exps[index + 1:]
            result = result + powers[e].scale(coeff) * Poly.monomial(self.vars, rest)
        return result

    # --- presentation ---------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self._sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, exps) if e
            )
            if coeff.is_rational():
                q = coeff.rational_value()
                body = mono if abs(q) == 1 and mono else (f"{abs(q)}*{mono}" if mono else str(abs(q)))
                sign = q < 0
            else:
                body = f"({coeff})*{mono}" if mono else f"({coeff})"
                sign = False
            if not parts:
                parts.append(f"-{body}" if sign else body)
            else:
                parts.append(f"- {body}" if sign else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(exps), "coeff": coeff.to_json()}
                      for exps, coeff in self._sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        return cls(tuple(data["vars"]),
                   {tuple(t["exp"]): CycScalar.from_json(t["coeff"]) for t in data["terms"]})


def _determinant(matrix: list[list[Poly]], vars: Sequence[str]) -> Poly:
    """Laplace expansion memoized over column subsets (exact, division-free)."""
    n = len(matrix)
    if n == 0:
        return Poly.constant(vars, CycScalar.one())
    cache: dict[tuple[int, ...], Poly] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Poly:
        if not cols:
            return Poly.constant(vars, CycScalar.one())
        if cols in cache:
            return cache[cols]
        acc = Poly.zero(vars)
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            piece = entry * sub
            acc = acc + (piece if pos % 2 == 0 else -piece)
        cache[cols] = acc
        return acc

    return minor(0, tuple(range(n)))


# --- parsing ------------------------------------------------------------

def parse(text: str, vars: Sequence[str]) -> Poly:
    """Parse `coeff*x1^2*x2 + ...` into a Poly over the given variables.

    The grammar is sums/differences of terms, each an optional unsigned
    integer coefficient followed by `*`-separated variable powers.  Unknown
    variables and negative exponents are reported with their position.
    """
    vars = tuple(vars)
    index = {v: i for i, v in enumerate(vars)}
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def fail(message: str):
        raise PolyParseError(f"position {pos}: {message}")

    def read_uint() -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos:
            fail("expected an integer")
        return int(text[start:pos])

    def read_name() -> str:
        nonlocal pos
        start = pos
        if pos < n and (text[pos].isalpha() or text[pos] == "_"):
            pos += 1
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
        if start == pos:
            fail("expected a variable name")
        return text[start:pos]

    def read_factor() -> tuple[int, int]:
        nonlocal pos
        name_at = pos
        name = read_name()
        if name not in index:
            pos = name_at
            fail(f"unknown variable {name!r}")
        exp = 1
        skip_ws()
        if pos < n and text[pos] == "^":
            pos += 1
            skip_ws()
            if pos < n and text[pos] == "-":
                fail("negative exponent")
            exp = read_uint()
        return index[name], exp

    def read_term() -> Poly:
        nonlocal pos
        skip_ws()
        coeff = 1
        if pos < n and text[pos].isdigit():
            coeff = read_uint()
            skip_ws()
            if pos < n and text[pos] == "*":
                pos += 1
                skip_ws()
            elif pos < n and (text[pos].isalpha() or text[pos] == "_"):
                pass  # juxtaposition, e.g. "2x1"
            else:
                return Poly.constant(vars, CycScalar.from_rational(coeff))
        exps = [0] * len(vars)
        i, e = read_factor()
        exps[i] += e
        while True:
            skip_ws()
            if pos < n and text[pos] == "*":
                pos += 1
                skip_ws()
                i, e = read_factor()
                exps[i] += e
            elif pos < n and (text[pos].isalpha() or text[pos] == "_"):
                i, e = read_factor()
                exps[i] += e
            else:
                break
        return Poly.monomial(vars, exps, CycScalar.from_rational(coeff))

    skip_ws()
    if pos >= n:
        fail("empty polynomial")
    negative = False
    if text[pos] in "+-":
        negative = text[pos] == "-"
        pos += 1
    result = read_term()
    if negative:
        result = -result
    while True:
        skip_ws()
        if pos >= n:
            break
        if text[pos] == "+":
            pos += 1
            result = result + read_term()
        elif text[pos] == "-":
            pos += 1
            result = result - read_term()
        else:
            fail(f"unexpected character {text[pos]!r}")
    return result
