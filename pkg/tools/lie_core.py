"""
lie_core.py
-----------
Exact arithmetic for so(n), sl(n) and gl(n) over their canonical bases.

Coordinates are (i, j) pairs with 1-based node indices:
  - so(n): (i, j) with i < j stands for B_ij = E_ij - E_ji
  - sl(n), gl(n): (i, j) stands for the unit matrix E_ij (diagonal included);
    sl(n) vectors keep the diagonal coefficients summing to zero.

All coefficients are fractions.Fraction, so ranks are exact.

Example:
    so6 = AlgebraKind(kind=GroupKind.SO, n=6)
    a = basis_vector(so6, "B", 1, 2)
    b = basis_vector(so6, "B", 2, 3)
    print(bracket(a, b))   # -> B_13
"""

# logging records closure progress at DEBUG level
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tools.errors import AlgebraMismatchError, BasisElementError

logger = logging.getLogger(__name__)

Coord = tuple[int, int]
Rational = Union[int, Fraction]


# ---------------- Algebra + basis tags ----------------
class GroupKind(str, Enum):
    SO = "so"
    SL = "sl"
    GL = "gl"


class BasisTag(str, Enum):
    B = "B"  # skew pair E_ij - E_ji
    E = "E"  # unit matrix
    C = "C"  # diagonal difference E_ii - E_jj


class AlgebraKind(BaseModel):
    """Which matrix Lie algebra we work in, and its size."""

    model_config = ConfigDict(frozen=True)

    kind: GroupKind
    n: int = Field(ge=2)

    def full_dimension(self) -> int:
        if self.kind is GroupKind.SO:
            return self.n * (self.n - 1) // 2
        if self.kind is GroupKind.SL:
            return self.n * self.n - 1
        return self.n * self.n

    def coordinates(self) -> list[Coord]:
        """Every canonical coordinate, in the fixed total order used for echelon forms."""
        nodes = range(1, self.n + 1)
        if self.kind is GroupKind.SO:
            return [(i, j) for i in nodes for j in nodes if i < j]
        return [(i, j) for i in nodes for j in nodes]

    def canonical_basis(self) -> list["LieVector"]:
        """A basis of the whole algebra: B_ij; E_ij (i != j) + C_i,i+1; or all E_ij."""
        if self.kind is GroupKind.SL:
            off = [basis_vector(self, BasisTag.E, i, j) for (i, j) in self.coordinates() if i != j]
            diag = [basis_vector(self, BasisTag.C, i, i + 1) for i in range(1, self.n)]
            return off + diag
        tag = BasisTag.B if self.kind is GroupKind.SO else BasisTag.E
        return [basis_vector(self, tag, i, j) for (i, j) in self.coordinates()]

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})"


class BasisElement(BaseModel):
    """
    One canonical generator: B_ij (i < j), E_ij, or C_ij (i != j).
    Tag rules that do not depend on the algebra are checked here;
    check_legal() adds the per-algebra rules.
    """

    model_config = ConfigDict(frozen=True)

    tag: BasisTag
    i: int = Field(ge=1)
    j: int = Field(ge=1)

    @model_validator(mode="after")
    def _tag_rules(self) -> "BasisElement":
        if self.tag is BasisTag.B and not self.i < self.j:
            raise BasisElementError(f"B_{self.i}{self.j}: B requires i < j")
        if self.tag is BasisTag.C and self.i == self.j:
            raise BasisElementError(f"C_{self.i}{self.j}: C requires i != j")
        return self

    def check_legal(self, algebra: AlgebraKind) -> None:
        """Raise BasisElementError if this element does not belong to the algebra."""
        if self.i > algebra.n or self.j > algebra.n:
            raise BasisElementError(f"{self}: index out of range 1..{algebra.n}")
        if algebra.kind is GroupKind.SO and self.tag is not BasisTag.B:
            raise BasisElementError(f"{self}: only B elements are legal in {algebra}")
        if algebra.kind is not GroupKind.SO and self.tag is BasisTag.B:
            raise BasisElementError(f"{self}: B elements are not legal in {algebra}")
        if algebra.kind is GroupKind.SL and self.tag is BasisTag.E and self.i == self.j:
            raise BasisElementError(f"{self}: diagonal E is not legal in {algebra}")

    def to_vector(self, algebra: AlgebraKind, coeff: Rational = 1) -> "LieVector":
        self.check_legal(algebra)
        c = Fraction(coeff)
        if self.tag is BasisTag.C:
            return LieVector(algebra, {(self.i, self.i): c, (self.j, self.j): -c})
        return LieVector(algebra, {(self.i, self.j): c})

    def __str__(self) -> str:
        return f"{self.tag.value}_{_pair_label(self.i, self.j)}"


def _pair_label(i: int, j: int) -> str:
    return f"{i}{j}" if i < 10 and j < 10 else f"{i},{j}"


# ---------------- Lie vectors ----------------
@dataclass(frozen=True)
class LieVector:
    """
    Sparse exact element of an algebra: coordinate -> nonzero Fraction.
    Immutable; arithmetic returns new vectors.
    """

    algebra: AlgebraKind
    coeffs: Mapping[Coord, Fraction]

    def __init__(self, algebra: AlgebraKind, coeffs: Optional[Mapping[Coord, Rational]] = None):
        clean = {}
        for (i, j), value in (coeffs or {}).items():
            value = Fraction(value)
            if value == 0:
                continue
            if not (1 <= i <= algebra.n and 1 <= j <= algebra.n):
                raise BasisElementError(f"coordinate ({i},{j}) out of range 1..{algebra.n}")
            if algebra.kind is GroupKind.SO and not i < j:
                raise BasisElementError(f"so coordinates need i < j, got ({i},{j})")
            clean[(i, j)] = value
        if algebra.kind is GroupKind.SL and sum(c for (i, j), c in clean.items() if i == j) != 0:
            raise BasisElementError("sl vectors must have zero trace")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def _trusted(cls, algebra: AlgebraKind, coeffs: dict[Coord, Fraction]) -> "LieVector":
        """Wrap an already-normalized dict without re-validating (kernel use only)."""
        v = object.__new__(cls)
        object.__setattr__(v, "algebra", algebra)
        object.__setattr__(v, "coeffs", coeffs)
        return v

    @classmethod
    def zero(cls, algebra: AlgebraKind) -> "LieVector":
        return cls._trusted(algebra, {})

    @classmethod
    def from_terms(cls, algebra: AlgebraKind, terms: Iterable[tuple[BasisElement, Rational]]) -> "LieVector":
        """Sum coefficient * element over the given terms."""
        total = cls.zero(algebra)
        for element, coeff in terms:
            total = total + element.to_vector(algebra, coeff)
        return total

    @classmethod
    def from_matrix(cls, algebra: AlgebraKind, rows: list[list[Rational]]) -> "LieVector":
        """Read a dense n x n matrix back into canonical coordinates (so: upper triangle)."""
        n = algebra.n
        if algebra.kind is GroupKind.SO:
            for i in range(n):
                for j in range(n):
                    if Fraction(rows[i][j]) != -Fraction(rows[j][i]):
                        raise BasisElementError("matrix is not skew-symmetric")
            return cls(algebra, {(i + 1, j + 1): rows[i][j] for i in range(n) for j in range(i + 1, n)})
        return cls(algebra, {(i + 1, j + 1): rows[i][j] for i in range(n) for j in range(n)})

    def to_matrix(self) -> list[list[Fraction]]:
        """Dense n x n rows of Fractions."""
        n = self.algebra.n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in self.coeffs.items():
            rows[i - 1][j - 1] += c
            if self.algebra.kind is GroupKind.SO:
                rows[j - 1][i - 1] -= c
        return rows

    # ----- queries -----
    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list[Coord]:
        return sorted(self.coeffs)

    def off_diagonal_support(self) -> list[Coord]:
        return [c for c in self.support() if c[0] != c[1]]

    def trace(self) -> Fraction:
        if self.algebra.kind is GroupKind.SO:
            return Fraction(0)
        return sum((c for (i, j), c in self.coeffs.items() if i == j), Fraction(0))

    def restrict(self, coords: Iterable[Coord]) -> "LieVector":
        """Keep only the listed coordinates (the result may leave sl; callers pick off-diagonal ones)."""
        keep = set(coords)
        return LieVector(self.algebra, {c: v for c, v in self.coeffs.items() if c in keep})

    # ----- arithmetic -----
    def _check_same(self, other: "LieVector") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatchError(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other: "LieVector") -> "LieVector":
        self._check_same(other)
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            _accumulate(out, c, v)
        return LieVector._trusted(self.algebra, out)

    def __neg__(self) -> "LieVector":
        return LieVector._trusted(self.algebra, {c: -v for c, v in self.coeffs.items()})

    def __sub__(self, other: "LieVector") -> "LieVector":
        return self + (-other)

    def __mul__(self, scalar: Rational) -> "LieVector":
        s = Fraction(scalar)
        if s == 0:
            return LieVector.zero(self.algebra)
        return LieVector._trusted(self.algebra, {c: v * s for c, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieVector):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.algebra, tuple(sorted(self.coeffs.items()))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        tag = "B" if self.algebra.kind is GroupKind.SO else "E"
        parts = []
        for (i, j) in self.support():
            c = self.coeffs[(i, j)]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            name = f"{tag}_{_pair_label(i, j)}"
            parts.append((sign, name if mag == 1 else f"{mag} {name}"))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        return text + "".join(f" {s} {t}" for s, t in parts[1:])


def basis_vector(algebra: AlgebraKind, tag: Union[BasisTag, str], i: int, j: int, coeff: Rational = 1) -> LieVector:
    """Shortcut: basis_vector(so6, "B", 1, 2) == B_12 in so(6)."""
    return BasisElement(tag=BasisTag(tag), i=i, j=j).to_vector(algebra, coeff)


def _accumulate(target: dict[Coord, Fraction], coord: Coord, value: Fraction) -> None:
    new = target.get(coord, 0) + value
    if new:
        target[coord] = new
    else:
        target.pop(coord, None)


# ---------------- Structure constants ----------------
def _skew(p: int, q: int) -> Optional[tuple[Coord, int]]:
    """B_pq as (ordered coordinate, sign); B_pp = 0."""
    if p == q:
        return None
    return ((p, q), 1) if p < q else ((q, p), -1)


def so_structure(i: int, j: int, k: int, l: int) -> list[tuple[Coord, int]]:
    """[B_ij, B_kl] = d_jk B_il + d_il B_jk + d_jl B_ki + d_ik B_lj, as signed ordered coordinates."""
    terms = []
    if j == k:
        terms.append(_skew(i, l))
    if i == l:
        terms.append(_skew(j, k))
    if j == l:
        terms.append(_skew(k, i))
    if i == k:
        terms.append(_skew(l, j))
    return [t for t in terms if t is not None]


def unit_structure(i: int, j: int, k: int, l: int) -> list[tuple[Coord, int]]:
    """[E_ij, E_kl] = d_jk E_il - d_li E_kj."""
    terms = []
    if j == k:
        terms.append(((i, l), 1))
    if l == i:
        terms.append(((k, j), -1))
    return terms


def _bracket_coeffs(kind: GroupKind, x: Mapping[Coord, Fraction], y: Mapping[Coord, Fraction]) -> dict[Coord, Fraction]:
    out: dict[Coord, Fraction] = {}
    if not x or not y:
        return out
    if kind is GroupKind.SO:
        # only pairs sharing a node bracket to something nonzero
        touching: dict[int, list[tuple[Coord, Fraction]]] = {}
        for (k, l), b in y.items():
            touching.setdefault(k, []).append(((k, l), b))
            touching.setdefault(l, []).append(((k, l), b))
        for (i, j), a in x.items():
            for node in (i, j):
                for (k, l), b in touching.get(node, ()):
                    if (k, l) == (i, j):
                        continue
                    for coord, sign in so_structure(i, j, k, l):
                        _accumulate(out, coord, sign * a * b)
        return out
    by_row: dict[int, list[tuple[int, Fraction]]] = {}
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for (k, l), b in y.items():
        by_row.setdefault(k, []).append((l, b))
        by_col.setdefault(l, []).append((k, b))
    for (i, j), a in x.items():
        # d_jk E_il
        for l, b in by_row.get(j, ()):
            _accumulate(out, (i, l), a * b)
        # - d_li E_kj
        for k, b in by_col.get(i, ()):
            _accumulate(out, (k, j), -a * b)
    return out


def bracket(x: LieVector, y: LieVector) -> LieVector:
    """[x, y] = xy - yx, expanded bilinearly over the structure constants."""
    if x.algebra != y.algebra:
        raise AlgebraMismatchError(f"cannot bracket {x.algebra} with {y.algebra}")
    return LieVector._trusted(x.algebra, _bracket_coeffs(x.algebra.kind, x.coeffs, y.coeffs))


# ---------------- Subalgebras ----------------
@dataclass(frozen=True)
class SubalgebraBasis:
    """
    Reduced row-echelon basis: each row has leading coefficient 1 at its pivot
    and zeros at every other row's pivot. Rows are sorted by pivot, so two
    bases of the same subspace compare equal.
    """

    algebra: Optional[AlgebraKind]
    basis: tuple[LieVector, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[Coord]:
        return [min(v.coeffs) for v in self.basis]

    def is_full(self) -> bool:
        return self.algebra is not None and self.dimension == self.algebra.full_dimension()


class _Echelon:
    """Mutable RREF accumulator used while a closure is being built."""

    def __init__(self) -> None:
        self.rows: dict[Coord, dict[Coord, Fraction]] = {}

    def reduce(self, vec: Mapping[Coord, Fraction]) -> dict[Coord, Fraction]:
        out = dict(vec)
        # RREF: subtracting one row never creates another row's pivot
        for pivot in [c for c in out if c in self.rows]:
            factor = out.get(pivot)
            if not factor:
                continue
            for coord, value in self.rows[pivot].items():
                _accumulate(out, coord, -factor * value)
        return out

    def insert(self, remainder: dict[Coord, Fraction]) -> dict[Coord, Fraction]:
        """Add an already-reduced nonzero vector; returns the stored (normalized) row."""
        pivot = min(remainder)
        lead = remainder[pivot]
        row = {c: v / lead for c, v in remainder.items()}
        for other in self.rows.values():
            factor = other.get(pivot)
            if factor:
                for coord, value in row.items():
                    _accumulate(other, coord, -factor * value)
        self.rows[pivot] = row
        return row

    def freeze(self, algebra: Optional[AlgebraKind]) -> SubalgebraBasis:
        ordered = tuple(LieVector._trusted(algebra, dict(self.rows[p])) for p in sorted(self.rows))
        return SubalgebraBasis(algebra=algebra, basis=ordered)


def _common_algebra(vectors: list[LieVector], algebra: Optional[AlgebraKind]) -> Optional[AlgebraKind]:
    found = algebra
    for v in vectors:
        if found is None:
            found = v.algebra
        elif v.algebra != found:
            raise AlgebraMismatchError(f"generators mix {found} and {v.algebra}")
    return found


def lie_closure(generators: list[LieVector], algebra: Optional[AlgebraKind] = None) -> SubalgebraBasis:
    """
    Basis of the Lie subalgebra generated by `generators`.

    Frontier fixpoint: every newly inserted vector is bracketed with the whole
    current basis; nonzero remainders become the next frontier. Stops at the
    first sweep that inserts nothing. Zero generators are dropped.
    `algebra` only matters when `generators` is empty.
    """
    algebra = _common_algebra(generators, algebra)
    echelon = _Echelon()
    frontier = []
    for g in generators:
        remainder = echelon.reduce(g.coeffs)
        if remainder:
            frontier.append(dict(echelon.insert(remainder)))

    if algebra is None:
        return echelon.freeze(None)

    full = algebra.full_dimension()
    sweep = 0
    while frontier and len(echelon.rows) < full:
        sweep += 1
        new_frontier = []
        for x in frontier:
            # snapshot: rows inserted during this sweep get their own turn next sweep
            for row in list(echelon.rows.values()):
                remainder = echelon.reduce(_bracket_coeffs(algebra.kind, x, row))
                if remainder:
                    new_frontier.append(dict(echelon.insert(remainder)))
        logger.debug("closure sweep %d in %s: +%d (dim %d)", sweep, algebra, len(new_frontier), len(echelon.rows))
        frontier = new_frontier
    return echelon.freeze(algebra)


def closure_dimension(generators: list[LieVector], algebra: Optional[AlgebraKind] = None) -> int:
    return lie_closure(generators, algebra).dimension


def membership(v: LieVector, s: SubalgebraBasis) -> bool:
    """True iff v lies in the span of s (zero is in every subalgebra)."""
    if v.is_zero():
        return True
    if s.algebra is None:
        return False
    if v.algebra != s.algebra:
        raise AlgebraMismatchError(f"{v.algebra} vector vs {s.algebra} subalgebra")
    echelon = _Echelon()
    echelon.rows = {min(row.coeffs): dict(row.coeffs) for row in s.basis}
    return not echelon.reduce(v.coeffs)
