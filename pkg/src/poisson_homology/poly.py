"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in n variables is a map from exponent tuples to nonzero
Fraction coefficients.  All arithmetic is exact; there is no floating
point anywhere in this package.  Variables are addressed by 0-based
index; human-readable names only enter at the parse/format boundary.

The canonical textual form (emitted by :func:`format_polynomial` and
accepted by :func:`parse_polynomial`) uses integers, rationals ``p/q``,
variable names, ``+ - * ^`` and parentheses.  Multiplication is always
explicit: ``2*x^2*y``, never ``2x^2y``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

_ZERO = Fraction(0)


def grlex_key(exps: Exponent) -> tuple[int, Exponent]:
    """Sort key for graded lexicographic order with x0 > x1 > ... > x_{n-1}."""
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fractions; the zero polynomial has an empty map.  Instances are
    never mutated after construction, so they are safe to share freely.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exponent, Fraction] | None = None):
        if n < 1:
            raise ValueError(f"ring dimension must be >= 1, got {n}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != n:
                    raise ValueError(
                        f"monomial {exps} has {len(exps)} exponents, expected {n}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in monomial {exps}")
                if coeff != 0:
                    clean[exps] = Fraction(coeff)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def const(cls, n: int, value) -> "Polynomial":
        return cls(n, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for {n} variables")
        exps = [0] * n
        exps[i] = 1
        return cls(n, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls(n, {tuple(exps): Fraction(coeff)})

    # -- ring operations ----------------------------------------------

    def _check_dim(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise ValueError(
                f"ring dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_dim(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            c = out.get(exps, _ZERO) + coeff
            if c:
                out[exps] = c
            else:
                out.pop(exps, None)
        return _raw(self.n, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_dim(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            c = out.get(exps, _ZERO) - coeff
            if c:
                out[exps] = c
            else:
                out.pop(exps, None)
        return _raw(self.n, out)

    def __neg__(self) -> "Polynomial":
        return _raw(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_dim(other)
            if not self.terms or not other.terms:
                return Polynomial.zero(self.n)
            out: dict[Exponent, Fraction] = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    c = out.get(e, _ZERO) + ca * cb
                    if c:
                        out[e] = c
                    else:
                        out.pop(e, None)
            return _raw(self.n, out)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial.zero(self.n)
            return _raw(self.n, {e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not defined for polynomials")
        out = Polynomial.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- calculus -----------------------------------------------------

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable i (0-based)."""
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range for {self.n} variables")
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1:]
            c = out.get(lowered, _ZERO) + coeff * e
            if c:
                out[lowered] = c
        return _raw(self.n, out)

    def integrate(self, i: int) -> "Polynomial":
        """Antiderivative in variable i with zero constant of integration."""
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range for {self.n} variables")
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            raised = exps[:i] + (e + 1,) + exps[i + 1:]
            out[raised] = coeff / (e + 1)
        return _raw(self.n, out)

    # -- degrees ------------------------------------------------------

    def total_degree(self) -> int | None:
        """Maximum total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights: Sequence[int] | None = None) -> int | None:
        """Maximum weighted degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        if weights is None:
            return max(sum(e) for e in self.terms)
        return max(sum(w * k for w, k in zip(weights, e)) for e in self.terms)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        """True if all monomials share one weighted degree (zero counts)."""
        if not self.terms:
            return True
        if weights is None:
            degs = {sum(e) for e in self.terms}
        else:
            degs = {sum(w * k for w, k in zip(weights, e)) for e in self.terms}
        return len(degs) == 1

    # -- predicates and structure --------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.n, _ZERO)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), _ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {format_polynomial(self)!r})"


def _raw(n: int, terms: dict[Exponent, Fraction]) -> Polynomial:
    """Build a Polynomial from an already-normalized term dict (no copies)."""
    p = object.__new__(Polynomial)
    object.__setattr__(p, "n", n)
    object.__setattr__(p, "terms", terms)
    return p


def default_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(n)]


# -- canonical printer ------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(f: Polynomial, names: Sequence[str] | None = None) -> str:
    """Canonical text form: graded-lex term order, explicit ``*`` and ``^``.

    The output parses back to ``f`` with :func:`parse_polynomial` (given
    the same variable names), which is the round-trip contract used by
    the spec-file writer and the test suite.
    """
    if names is None:
        names = default_names(f.n)
    if len(names) != f.n:
        raise ValueError(f"{len(names)} names given for {f.n} variables")
    if not f.terms:
        return "0"
    parts: list[str] = []
    for exps in sorted(f.terms, key=grlex_key, reverse=True):
        coeff = f.terms[exps]
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts)


# -- parser -----------------------------------------------------------


class PolyParseError(ValueError):
    """Syntax or name error in polynomial text, with 0-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


_TOKEN_KINDS = {"+", "-", "*", "^", "/", "(", ")"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_KINDS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over +, -, *, ^ with rational literals p/q."""

    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = len(names)
        self.index = {name: i for i, name in enumerate(names)}

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise PolyParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolyParseError(f"unexpected {tok[1]!r}", tok[2])
        return result

    def expr(self) -> Polynomial:
        # leading sign(s)
        result = self.term()
        while True:
            kind, _, _ = self.peek()
            if kind == "+":
                self.advance()
                result = result + self.term()
            elif kind == "-":
                self.advance()
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.signed_factor()
        while self.peek()[0] == "*":
            self.advance()
            result = result * self.signed_factor()
        return result

    def signed_factor(self) -> Polynomial:
        sign = 1
        while self.peek()[0] in ("+", "-"):
            if self.advance()[0] == "-":
                sign = -sign
        f = self.factor()
        return f if sign > 0 else -f

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("int")
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        kind, text, col = self.advance()
        if kind == "int":
            value = Fraction(int(text))
            if self.peek()[0] == "/":
                self.advance()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    raise PolyParseError("zero denominator", den_tok[2])
                value = Fraction(int(text), den)
            return Polynomial.const(self.n, value)
        if kind == "name":
            idx = self.index.get(text)
            if idx is None:
                raise PolyParseError(f"unknown variable {text!r}", col)
            return Polynomial.variable(self.n, idx)
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolyParseError(f"unexpected {text!r}" if text else "unexpected end of input", col)


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse polynomial text over the given variable names.

    Raises :class:`PolyParseError` with the offending column for any
    syntax error or unknown variable.
    """
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    return _Parser(text, names).parse()


# -- monomial bases ---------------------------------------------------


def monomials_of_weighted_degree(
        n: int, degree: int, weights: Sequence[int] | None = None) -> Iterator[Exponent]:
    """Yield all exponent tuples of exact weighted degree, in lex order."""
    if weights is None:
        weights = (1,) * n
    if degree < 0:
        return

    def rec(i: int, remaining: int, prefix: tuple[int, ...]) -> Iterator[Exponent]:
        if i == n - 1:
            if remaining % weights[i] == 0:
                yield prefix + (remaining // weights[i],)
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            yield from rec(i + 1, remaining - w * e, prefix + (e,))

    yield from rec(0, degree, ())


def monomials_up_to_degree(
        n: int, bound: int, weights: Sequence[int] | None = None) -> Iterator[Exponent]:
    """Yield all exponent tuples of weighted degree <= bound, degree by degree."""
    for d in range(bound + 1):
        yield from monomials_of_weighted_degree(n, d, weights)
