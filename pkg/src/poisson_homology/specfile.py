"""Structure files: a flat sectioned key-value format for Poisson data.

Example::

    # three variables, one bracket entry per unordered pair
    [ring]
    vars = x, y, z
    weights = 1, 1, 1          # optional, defaults to all 1

    [bracket]                  # omitted pairs default to 0
    y, z = "y"
    z, x = "-1"

    [module]                   # optional, defaults to the regular module
    type = regular

Module types: ``regular``, ``twist-modular`` (regular twisted by the
modular derivation), ``twist`` with per-variable entries ``D.x = "..."``,
and ``explicit`` with ``rank = r`` plus rows ``action.x.k = "p1", ..., "pr"``
giving {e_k, x}_M in coordinates.  Polynomial values are always quoted.

Loading validates everything: antisymmetry is completed automatically
({y,x} from {x,y}), the Jacobi identity is checked on generator triples
and the module axioms on generator pairs; failures raise typed errors
carrying the offending data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .poly import Polynomial, PolyParseError, parse_polynomial
from .structure import (Derivation, JacobiFailure, PoissonStructure,
                        jacobi_check)
from .modules import (AxiomFailure, PoissonModule, check_axioms,
                      modular_twist, regular_module)


class SpecFileError(ValueError):
    """Malformed structure file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class JacobiError(ValueError):
    """Structure failed the Jacobi identity."""

    def __init__(self, failure: JacobiFailure, names):
        i, j, k = failure.triple
        triple = f"({names[i]}, {names[j]}, {names[k]})"
        super().__init__(
            f"Jacobi identity fails on {triple}: cyclic sum = "
            f"{_fmt(failure.residual, names)}")
        self.failure = failure


class ModuleAxiomError(ValueError):
    """Module data violated the Poisson module axioms."""

    def __init__(self, message: str, failure: AxiomFailure | None = None):
        super().__init__(message)
        self.failure = failure


def _fmt(poly: Polynomial, names) -> str:
    from .poly import format_polynomial
    return format_polynomial(poly, names)


@dataclass
class StructureSpec:
    """Parsed but unvalidated content of a structure file."""

    names: list[str]
    weights: tuple[int, ...]
    brackets: dict[tuple[int, int], Polynomial]      # keyed i < j
    module_type: str = "regular"
    derivation: dict[int, Polynomial] = field(default_factory=dict)
    rank: int = 1
    action_rows: dict[tuple[int, int], list[Polynomial]] = field(default_factory=dict)


# -- low-level parsing --------------------------------------------------


def _split_values(text: str, line: int) -> list[tuple[str, str]]:
    """Split a value field into comma-separated quoted or bare tokens."""
    out: list[tuple[str, str]] = []
    i = 0
    expecting_value = True
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            break
        if ch == ",":
            if expecting_value:
                raise SpecFileError("empty value before ','", line)
            expecting_value = True
            i += 1
            continue
        if not expecting_value:
            raise SpecFileError(f"expected ',' before {ch!r}", line)
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise SpecFileError("unterminated quote", line)
            out.append(("quoted", text[i + 1:end]))
            i = end + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in ",#":
                j += 1
            out.append(("bare", text[i:j]))
            i = j
        expecting_value = False
    if expecting_value and out:
        raise SpecFileError("trailing ','", line)
    return out


def parse_spec_text(text: str) -> StructureSpec:
    """Parse structure-file text into a :class:`StructureSpec`."""
    section = None
    entries: list[tuple[int, str, str, list[tuple[str, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecFileError("unterminated section header", lineno)
            section = line[1:-1].strip()
            if section not in ("ring", "bracket", "module"):
                raise SpecFileError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise SpecFileError("entry before any section header", lineno)
        if "=" not in line:
            raise SpecFileError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        entries.append((lineno, section, key.strip(), _split_values(value, lineno)))

    names = None
    weights = None
    ring_entries = [e for e in entries if e[1] == "ring"]
    for lineno, _, key, values in ring_entries:
        if key == "vars":
            if any(kind != "bare" for kind, _ in values):
                raise SpecFileError("vars must be bare identifiers", lineno)
            names = [tok for _, tok in values]
            if not names:
                raise SpecFileError("vars must list at least one variable", lineno)
            if len(set(names)) != len(names):
                raise SpecFileError("duplicate variable name", lineno)
        elif key == "weights":
            try:
                weights = tuple(int(tok) for _, tok in values)
            except ValueError:
                raise SpecFileError("weights must be integers", lineno) from None
            if any(w <= 0 for w in weights):
                raise SpecFileError("weights must be strictly positive", lineno)
        else:
            raise SpecFileError(f"unknown ring key {key!r}", lineno)
    if names is None:
        first_line = entries[0][0] if entries else 1
        raise SpecFileError("missing [ring] vars entry", first_line)
    if weights is None:
        weights = (1,) * len(names)
    if len(weights) != len(names):
        raise SpecFileError("weights length does not match vars",
                            ring_entries[-1][0])
    index = {name: i for i, name in enumerate(names)}

    def parse_poly_value(text_value: str, lineno: int) -> Polynomial:
        try:
            return parse_polynomial(text_value, names)
        except PolyParseError as exc:
            raise SpecFileError(f"bad polynomial {text_value!r}: {exc}", lineno) from None

    spec = StructureSpec(names=names, weights=weights, brackets={})
    seen_pairs: set[frozenset[int]] = set()
    for lineno, sect, key, values in entries:
        if sect != "bracket":
            continue
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2:
            raise SpecFileError("bracket key must be 'var, var'", lineno)
        try:
            i, j = index[parts[0]], index[parts[1]]
        except KeyError as exc:
            raise SpecFileError(f"unknown variable {exc.args[0]!r}", lineno) from None
        if i == j:
            raise SpecFileError("bracket of a variable with itself is zero; omit it", lineno)
        pair = frozenset((i, j))
        if pair in seen_pairs:
            raise SpecFileError(
                f"duplicate bracket entry for {{{parts[0]}, {parts[1]}}}", lineno)
        seen_pairs.add(pair)
        if len(values) != 1 or values[0][0] != "quoted":
            raise SpecFileError("bracket value must be one quoted polynomial", lineno)
        poly = parse_poly_value(values[0][1], lineno)
        if i < j:
            spec.brackets[(i, j)] = poly
        else:
            spec.brackets[(j, i)] = -poly

    module_entries = [e for e in entries if e[1] == "module"]
    for lineno, _, key, values in module_entries:
        if key == "type":
            if len(values) != 1 or values[0][0] != "bare":
                raise SpecFileError("module type must be a bare word", lineno)
            kind = values[0][1]
            if kind not in ("regular", "twist-modular", "twist", "explicit"):
                raise SpecFileError(f"unknown module type {kind!r}", lineno)
            spec.module_type = kind
        elif key.startswith("D."):
            var = key[2:].strip()
            if var not in index:
                raise SpecFileError(f"unknown variable {var!r} in derivation", lineno)
            if len(values) != 1 or values[0][0] != "quoted":
                raise SpecFileError("derivation value must be one quoted polynomial", lineno)
            spec.derivation[index[var]] = parse_poly_value(values[0][1], lineno)
        elif key == "rank":
            if len(values) != 1 or values[0][0] != "bare":
                raise SpecFileError("rank must be an integer", lineno)
            try:
                spec.rank = int(values[0][1])
            except ValueError:
                raise SpecFileError("rank must be an integer", lineno) from None
            if spec.rank < 1:
                raise SpecFileError("rank must be >= 1", lineno)
        elif key.startswith("action."):
            parts = key.split(".")
            if len(parts) != 3:
                raise SpecFileError("action key must be 'action.var.row'", lineno)
            var = parts[1].strip()
            if var not in index:
                raise SpecFileError(f"unknown variable {var!r} in action", lineno)
            try:
                row = int(parts[2])
            except ValueError:
                raise SpecFileError("action row index must be an integer", lineno) from None
            if any(kind != "quoted" for kind, _ in values):
                raise SpecFileError("action rows must be quoted polynomials", lineno)
            spec.action_rows[(index[var], row)] = [
                parse_poly_value(tok, lineno) for _, tok in values]
        else:
            raise SpecFileError(f"unknown module key {key!r}", lineno)

    return spec


# -- building validated objects ------------------------------------------


def build_structure(spec: StructureSpec) -> PoissonStructure:
    """Construct and Jacobi-validate the Poisson structure."""
    structure = PoissonStructure.from_upper_entries(
        len(spec.names), spec.brackets, names=spec.names, weights=spec.weights)
    failure = jacobi_check(structure)
    if failure is not None:
        raise JacobiError(failure, spec.names)
    return structure


def build_module(spec: StructureSpec, structure: PoissonStructure) -> PoissonModule:
    """Construct and axiom-validate the module described by the spec."""
    n = structure.n
    if spec.module_type == "regular":
        module = regular_module(structure)
    elif spec.module_type == "twist-modular":
        module = modular_twist(regular_module(structure))
    elif spec.module_type == "twist":
        values = [spec.derivation.get(i, Polynomial.zero(n)) for i in range(n)]
        try:
            from .modules import twist
            module = twist(regular_module(structure), Derivation(tuple(values)),
                           label="R^D")
        except ValueError as exc:
            raise ModuleAxiomError(str(exc)) from None
    elif spec.module_type == "explicit":
        rank = spec.rank
        zero = Polynomial.zero(n)
        action = []
        for i in range(n):
            matrix = []
            for k in range(rank):
                row = spec.action_rows.get((i, k), [zero] * rank)
                if len(row) != rank:
                    raise ModuleAxiomError(
                        f"action row for {spec.names[i]} row {k} has length "
                        f"{len(row)}, expected {rank}")
                matrix.append(row)
            action.append(matrix)
        module = PoissonModule(structure, rank, action, label="M")
    else:
        raise ModuleAxiomError(f"unknown module type {spec.module_type!r}")
    failure = check_axioms(module)
    if failure is not None:
        i, j = failure.pair
        raise ModuleAxiomError(
            f"Lie-module axiom fails for generator e{failure.generator} on "
            f"({spec.names[i]}, {spec.names[j]}): residual "
            f"({', '.join(_fmt(c, spec.names) for c in failure.residual.coords)})",
            failure)
    return module


def load_spec(path: str | Path) -> tuple[PoissonStructure, PoissonModule]:
    """Parse, build and validate a structure file."""
    text = Path(path).read_text()
    spec = parse_spec_text(text)
    structure = build_structure(spec)
    module = build_module(spec, structure)
    return structure, module
