"""Full-rank rational lattices in canonical form, plus box tilings.

A lattice is stored as the unique Hermite normal form of its scaled integer
version together with the smallest scale that clears all denominators, so two
bases of the same lattice always canonicalize identically. Intersections are
computed through duality: (L1 n L2)* = L1* + L2*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .abelian import DEFAULT_ENUMERATION_CAP, Subgroup, cyclic_subgroups, make_group
from .errors import CapExceededError, ValidationError
from .rationals import format_rational

_F0 = Fraction(0)
_F1 = Fraction(1)


def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def _integer_hnf(rows: list[list[int]], d: int) -> list[list[int]]:
    """Row-span HNF: upper triangular, positive diagonal, entries above each
    pivot reduced modulo it. Raises on rank deficiency."""
    work = [list(r) for r in rows if any(r)]
    result: list[list[int]] = []
    for col in range(d):
        sel = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not sel:
            raise ValidationError("generators are rank deficient (singular basis)")
        piv = sel[0]
        for r in sel[1:]:
            g, x, y = _xgcd(piv[col], r[col])
            q1, q2 = piv[col] // g, r[col] // g
            combo = [x * a + y * b for a, b in zip(piv, r)]
            other = [q1 * b - q2 * a for a, b in zip(piv, r)]
            piv = combo
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-a for a in piv]
        result.append(piv)
        work = rest
    for i in range(d):
        for k in range(i):
            q = result[k][i] // result[i][i]
            if q:
                result[k] = [a - q * b for a, b in zip(result[k], result[i])]
    return result


class RationalLattice:
    """Lattice spanned over Z by the rows of hnf/denominator."""

    __slots__ = ("dimension", "denominator", "hnf")

    def __init__(self, dimension: int, denominator: int, hnf: tuple[tuple[int, ...], ...]):
        self.dimension = dimension
        self.denominator = denominator
        self.hnf = hnf

    @property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        den = self.denominator
        return tuple(tuple(Fraction(v, den) for v in row) for row in self.hnf)

    @property
    def volume(self) -> Fraction:
        det = 1
        for i in range(self.dimension):
            det *= self.hnf[i][i]
        return Fraction(det, self.denominator ** self.dimension)

    def contains(self, vector: Sequence) -> bool:
        w = [Fraction(v) * self.denominator for v in vector]
        if any(v.denominator != 1 for v in w):
            return False
        w = [int(v) for v in w]
        for i in range(self.dimension):
            if w[i] % self.hnf[i][i] != 0:
                return False
            c = w[i] // self.hnf[i][i]
            if c:
                w = [a - c * b for a, b in zip(w, self.hnf[i])]
        return True

    def __eq__(self, other):
        if not isinstance(other, RationalLattice):
            return NotImplemented
        return (self.dimension, self.denominator, self.hnf) == \
            (other.dimension, other.denominator, other.hnf)

    def __hash__(self):
        return hash((self.dimension, self.denominator, self.hnf))

    def __repr__(self):
        return f"RationalLattice(d={self.dimension}, volume={self.volume})"

    def to_json(self) -> dict:
        return {"d": self.dimension,
                "basis": [[format_rational(v) for v in row] for row in self.basis]}


def _from_rational_rows(rows, d: int) -> RationalLattice:
    rows = [[Fraction(v) for v in row] for row in rows]
    if any(len(r) != d for r in rows):
        raise ValidationError(f"expected vectors of length {d}")
    den = 1
    for r in rows:
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
    int_rows = [[int(v * den) for v in r] for r in rows]
    H = _integer_hnf(int_rows, d)
    g = den
    for row in H:
        for v in row:
            g = math.gcd(g, v)
    return RationalLattice(d, den // g, tuple(tuple(v // g for v in row) for row in H))


def make_lattice(basis) -> RationalLattice:
    """Canonicalize a nonsingular square rational basis (rows are generators)."""
    rows = list(basis)
    d = len(rows)
    if d == 0:
        raise ValidationError("empty basis")
    return _from_rational_rows(rows, d)


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    d = len(mat)
    aug = [list(row) + [_F1 if i == j else _F0 for j in range(d)] for i, row in enumerate(mat)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if piv is None:
            raise ValidationError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [v / pval for v in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def dual(L: RationalLattice) -> RationalLattice:
    """Inverse-transpose basis; an involution with vol(dual) = 1/vol."""
    inv = _invert([list(row) for row in L.basis])
    d = L.dimension
    transposed = [[inv[j][i] for j in range(d)] for i in range(d)]
    return _from_rational_rows(transposed, d)


@dataclass(frozen=True)
class LatticePair:
    sum: RationalLattice
    intersection: RationalLattice


def sum_and_intersection(L1: RationalLattice, L2: RationalLattice) -> LatticePair:
    """Join generated by both bases; meet via (L1 n L2)* = L1* + L2*.
    Satisfies vol(sum) * vol(intersection) = vol(L1) * vol(L2)."""
    if L1.dimension != L2.dimension:
        raise ValidationError("lattices have different dimensions")
    d = L1.dimension
    total = _from_rational_rows(list(L1.basis) + list(L2.basis), d)
    meet = dual(_from_rational_rows(list(dual(L1).basis) + list(dual(L2).basis), d))
    return LatticePair(sum=total, intersection=meet)


@dataclass(frozen=True)
class Box:
    """Axis-aligned half-open box [0, a_1) x ... x [0, a_d)."""

    sides: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(Fraction(s) for s in self.sides))
        if not self.sides or any(s <= 0 for s in self.sides):
            raise ValidationError("box sides must be positive")

    @property
    def dimension(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> Fraction:
        return math.prod(self.sides, start=_F1)

    @property
    def diameter_squared(self) -> Fraction:
        return sum((s * s for s in self.sides), _F0)

    def to_json(self) -> dict:
        return {"sides": [format_rational(s) for s in self.sides]}


def box_tiling_multiplicity(L: RationalLattice, box: Box, x) -> int:
    """Number of lattice points lam with x - lam inside the box, counted
    exactly by bounding the HNF coefficients axis by axis."""
    d = L.dimension
    if box.dimension != d:
        raise ValidationError("box dimension mismatch")
    x = [Fraction(v) for v in x]
    if len(x) != d:
        raise ValidationError("point dimension mismatch")
    den, H = L.denominator, L.hnf

    count = 0
    # lam_i in (x_i - a_i, x_i]; row i is the first contributing coordinate i
    stack = [(0, [_F0] * d, )]
    while stack:
        i, partial = stack.pop()
        hii = H[i][i]
        upper = (x[i] * den - partial[i]) / hii
        lower = ((x[i] - box.sides[i]) * den - partial[i]) / hii
        c_lo = math.floor(lower) + 1
        c_hi = math.floor(upper)
        if i == d - 1:
            count += max(0, c_hi - c_lo + 1)
            continue
        for c in range(c_lo, c_hi + 1):
            nxt = partial.copy()
            for j in range(i, d):
                nxt[j] += c * H[i][j]
            stack.append((i + 1, nxt))
    return count


@dataclass(frozen=True)
class ScaledFamily:
    """The family shrunk by count**(1/d), reported through exact squares.

    tile_diameter_squared is a Fraction when count**(2/d) is rational (always
    for d = 2), otherwise None with the symbolic pair (d*p^2, count) standing
    for (d*p^2) / count**(2/d). Scaled bases are only representable when
    count**(1/d) is an integer.
    """

    count: int
    scaled_volume: Fraction
    tile_diameter_squared: Fraction | None
    tile_diameter_squared_symbolic: tuple[int, int]
    lattices: tuple[RationalLattice, ...] | None


@dataclass(frozen=True)
class ManyRelationsFamily:
    p: int
    d: int
    count: int
    lattices: tuple[RationalLattice, ...]
    subgroups: tuple[Subgroup, ...]
    common_tile: Box
    scaled: ScaledFamily


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _exact_root(value: int, k: int) -> int | None:
    r = round(value ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 1 and cand ** k == value:
            return cand
    return None


def many_relations_family(p: int, d: int,
                          cap: int = DEFAULT_ENUMERATION_CAP) -> ManyRelationsFamily:
    """One lattice per nontrivial cyclic subgroup G of (Z_p)^d: the preimage
    (p*Z)^d + G. All of them contain (p*Z)^d, share the box [0,p)^d as a
    common tile, and have volume p^(d-1); there are (p^d - 1)/(p - 1) of them.
    """
    p, d = int(p), int(d)
    if not _is_prime(p):
        raise ValidationError(f"{p} is not prime")
    if d < 2:
        raise ValidationError("need dimension d >= 2")
    if p ** d > cap:
        raise CapExceededError(f"p^d = {p ** d} exceeds enumeration cap {cap}")
    G = make_group([p] * d, cap=cap)
    subs = cyclic_subgroups(G)
    lattices = []
    for H in subs:
        rows = [[p if i == j else 0 for j in range(d)] for i in range(d)]
        rows.append(list(H.generators[0]))
        lattices.append(_from_rational_rows(rows, d))
    count = len(subs)
    assert count == (p ** d - 1) // (p - 1)

    dd_p2 = d * p * p
    root2 = _exact_root(count * count, d)
    diam2 = Fraction(dd_p2, root2) if root2 is not None else None
    root1 = _exact_root(count, d)
    scaled_lattices = None
    if root1 is not None:
        scaled_lattices = tuple(
            _from_rational_rows([[Fraction(v, L.denominator * root1) for v in row]
                                 for row in L.hnf], d)
            for L in lattices)
    scaled = ScaledFamily(
        count=count,
        scaled_volume=Fraction(p ** (d - 1), count),
        tile_diameter_squared=diam2,
        tile_diameter_squared_symbolic=(dd_p2, count),
        lattices=scaled_lattices,
    )
    return ManyRelationsFamily(
        p=p, d=d, count=count,
        lattices=tuple(lattices),
        subgroups=subs,
        common_tile=Box(tuple(Fraction(p) for _ in range(d))),
        scaled=scaled,
    )


@dataclass(frozen=True)
class BoxConvolutionStats:
    volume: Fraction
    diameter_squared: Fraction


def box_convolution_stats(boxes: Sequence[Box]) -> BoxConvolutionStats:
    """Support of the convolution of the box indicators is the box whose sides
    are the per-axis sums; returns its exact volume and squared diameter."""
    boxes = list(boxes)
    if not boxes:
        raise ValidationError("need at least one box")
    d = boxes[0].dimension
    if any(b.dimension != d for b in boxes):
        raise ValidationError("boxes have mixed dimensions")
    sides = tuple(sum((b.sides[i] for b in boxes), _F0) for i in range(d))
    total = Box(sides)
    return BoxConvolutionStats(volume=total.volume, diameter_squared=total.diameter_squared)
