"""Tiling functions on finite abelian groups.

A function f on G tiles with a subgroup H when every H-periodization sum is
the same constant; normalized tiling means that constant equals |H|. The
minimal common-tile support for a pair of subgroups is computed two ways: a
pipeline that quotients by the intersection and solves the margin problem on
the direct-sum part, and an independent brute-force oracle that enumerates
support sets and decides each by exact rational LP feasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Union

from . import copula as copula_mod
from .abelian import (
    Element,
    FiniteAbelianGroup,
    GroupLike,
    QuotientGroup,
    Subgroup,
    crt_iso,
    make_group,
    quotient,
    quotient_image,
    subgroup_calculus,
    subgroup_from_generators,
)
from .errors import CapExceededError, ValidationError
from .exactlp import feasible_nonnegative
from .rationals import format_rational, parse_rational

DEFAULT_ORACLE_CAP = 36


class GroupFunction:
    """Nonnegative rational-valued function on a group; zeros are not stored."""

    __slots__ = ("group", "values")

    def __init__(self, group: GroupLike, values: Mapping):
        vals = {}
        for x, v in values.items():
            x = group.check(x)
            v = Fraction(v)
            if v < 0:
                raise ValidationError(f"negative value {v} at {x}")
            if v != 0:
                vals[x] = v
        self.group = group
        self.values = dict(sorted(vals.items()))

    @property
    def support(self) -> tuple[Element, ...]:
        return tuple(self.values)

    @property
    def support_size(self) -> int:
        return len(self.values)

    def mass(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def __call__(self, x: Element) -> Fraction:
        return self.values.get(x, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self.group == other.group and self.values == other.values

    def __repr__(self):
        return f"GroupFunction(on {self.group!r}, support={self.support_size})"

    def to_json(self) -> dict:
        if not isinstance(self.group, FiniteAbelianGroup):
            raise ValidationError("only functions on plain product groups serialize")
        return {
            "group": list(self.group.orders),
            "values": [{"at": list(x), "v": format_rational(v)} for x, v in self.values.items()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GroupFunction":
        try:
            group = make_group(doc["group"])
            values = {tuple(item["at"]): parse_rational(item["v"]) for item in doc["values"]}
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed group-function document: {exc}") from exc
        return cls(group, values)


@dataclass(frozen=True)
class TilingCertificate:
    """Witness that the H-periodization of f is the constant `level`."""

    subgroup: Subgroup
    level: Fraction
    normalized: bool


@dataclass(frozen=True)
class TilingFailure:
    subgroup: Subgroup
    witness_x: Element
    sum_x: Fraction
    witness_y: Element
    sum_y: Fraction


TilingResult = Union[TilingCertificate, TilingFailure]


def tiling_level(f: GroupFunction, H: Subgroup) -> TilingResult:
    """Check whether sum_{g in H} f(x-g) is constant in x.

    The periodized sum at x equals the plain f-sum over the coset x + H, so
    the check walks cosets; on failure the two witnesses are the smallest
    coset representatives with differing sums.
    """
    G = f.group
    if H.parent != G:
        raise ValidationError("subgroup belongs to a different group")
    sums = []
    visited = set()
    for x in sorted(G.elements()):
        if x in visited:
            continue
        coset = [G.add(x, h) for h in H.elements]
        visited.update(coset)
        sums.append((x, sum((f(c) for c in coset), Fraction(0))))
    x0, s0 = sums[0]
    for x, s in sums[1:]:
        if s != s0:
            return TilingFailure(H, x0, s0, x, s)
    return TilingCertificate(H, s0, s0 == H.order)


def _require_normalized(f: GroupFunction, H: Subgroup, what: str) -> None:
    res = tiling_level(f, H)
    if isinstance(res, TilingFailure):
        raise ValidationError(
            f"{what}: periodization is not constant "
            f"({res.witness_x} -> {format_rational(res.sum_x)}, "
            f"{res.witness_y} -> {format_rational(res.sum_y)})")
    if not res.normalized:
        raise ValidationError(
            f"{what}: tiling level {format_rational(res.level)} != |H| = {H.order}")


@dataclass(frozen=True)
class ProjectedTile:
    quotient: QuotientGroup
    sub1: Subgroup
    sub2: Subgroup
    function: GroupFunction


def project_tile(f: GroupFunction, G1: Subgroup, G2: Subgroup) -> ProjectedTile:
    """Push f down to G/(G1 n G2) by averaging over the intersection.

    The projected function tiles with the images of G1 and G2 at their
    normalized levels, and its support is never larger than f's.
    """
    G = f.group
    _require_normalized(f, G1, "first subgroup")
    _require_normalized(f, G2, "second subgroup")
    calc = subgroup_calculus(G, G1, G2)
    K = calc.intersection
    Q = quotient(G, K)
    values = {}
    for rep in Q.representatives:
        total = sum((f(G.add(rep, g)) for g in K.elements), Fraction(0))
        if total:
            values[rep] = total / K.order
    return ProjectedTile(Q, quotient_image(Q, G1), quotient_image(Q, G2),
                         GroupFunction(Q, values))


def lift_tile(F: GroupFunction, G: GroupLike, kernel: Subgroup) -> GroupFunction:
    """Inverse of projection: place |kernel| * F(rep) at the representative of
    each coset, zero elsewhere; support size is preserved."""
    Q = F.group
    if not isinstance(Q, QuotientGroup) or Q.parent != G or Q.kernel.elements != kernel.elements:
        raise ValidationError("function does not live on the quotient of G by the kernel")
    return GroupFunction(G, {rep: kernel.order * v for rep, v in F.values.items()})


def multiple_construction(G1: Subgroup, G2: Subgroup) -> GroupFunction:
    """Common tile of support |G2| when G = G1 (+) G2 and |G1| divides |G2|.

    Pairs each element of G2 with the elements of G1 cycled |G2|/|G1| times
    and puts mass |G1| on every sum; this tiles with G1 at level |G1| and
    with G2 at level |G2|.
    """
    G = G1.parent
    if G2.parent != G:
        raise ValidationError("subgroups belong to different groups")
    calc = subgroup_calculus(G, G1, G2)
    if calc.intersection.order != 1 or G1.order * G2.order != G.order:
        raise ValidationError("group is not the internal direct sum of the subgroups")
    if G2.order % G1.order != 0:
        raise ValidationError(f"|G1| = {G1.order} does not divide |G2| = {G2.order}")
    g1s, g2s = G1.elements, G2.elements
    values = {}
    for j, b in enumerate(g2s):
        a = g1s[j % G1.order]
        values[G.add(a, b)] = Fraction(G1.order)
    return GroupFunction(G, values)


@dataclass(frozen=True)
class MinSupportResult:
    S: int
    witness: GroupFunction


def _check_pair(G: GroupLike, G1: Subgroup, G2: Subgroup) -> None:
    if G1.parent != G or G2.parent != G:
        raise ValidationError("subgroups belong to a different group")


def min_support(G: GroupLike, G1: Subgroup, G2: Subgroup,
                copula_cap: int = copula_mod.DEFAULT_SEARCH_CAP) -> MinSupportResult:
    """Smallest support of a nonnegative f with f*1_{G1} = |G1|, f*1_{G2} = |G2|.

    Pipeline: quotient by G1 n G2 (this preserves the answer), split over the
    cosets of the image sum (the tiling equations never couple different
    cosets), and solve the margin problem with m = |image of G1|, n = |image
    of G2| inside each coset. The witness is lifted back to G and re-verified.
    """
    _check_pair(G, G1, G2)
    calc = subgroup_calculus(G, G1, G2)
    K = calc.intersection
    Q = quotient(G, K)
    Gam1 = quotient_image(Q, G1)
    Gam2 = quotient_image(Q, G2)
    m, n = Gam1.order, Gam2.order
    if max(m, n) > copula_cap:
        raise CapExceededError(
            f"reduced subgroup orders ({m},{n}) exceed the margin-search cap {copula_cap}")
    sigma = subgroup_from_generators(Q, Gam1.elements + Gam2.elements)
    cosets = quotient(Q, sigma)
    plan = copula_mod.min_support_exact(m, n, cap=copula_cap)
    S = cosets.order * plan.S

    g1s, g2s = Gam1.elements, Gam2.elements
    values = {}
    for rep in cosets.representatives:
        for i, j in plan.pattern.sorted_edges:
            x = Q.add(rep, Q.add(g1s[i], g2s[j]))
            assert x not in values
            values[x] = plan.witness.entries[i][j]
    F = GroupFunction(Q, values)
    f = lift_tile(F, G, K)

    assert f.support_size == S
    assert S >= max(calc.index1, calc.index2)
    _require_normalized(f, G1, "solver witness vs first subgroup")
    _require_normalized(f, G2, "solver witness vs second subgroup")
    return MinSupportResult(S, f)


def min_support_bruteforce(G: GroupLike, G1: Subgroup, G2: Subgroup,
                           cap: int = DEFAULT_ORACLE_CAP) -> MinSupportResult:
    """Independent oracle: enumerate support sets of increasing size in
    lexicographic order and decide each candidate by exact rational LP
    feasibility of the periodization equations.

    The periodized sum at x equals the f-sum over the coset x + H, so the
    equations say: f sums to |G1| on every G1-coset and to |G2| on every
    G2-coset. Sizes that provably admit no candidate (a coset would get fewer
    points than its margin forces, given that no value may exceed
    min(|G1|, |G2|)) are skipped wholesale.
    """
    _check_pair(G, G1, G2)
    N = G.order
    if N > cap:
        raise CapExceededError(f"group order {N} exceeds brute-force cap {cap}")
    elems = sorted(G.elements())
    q1, q2 = quotient(G, G1), quotient(G, G2)
    rep_index1 = {rep: i for i, rep in enumerate(q1.representatives)}
    rep_index2 = {rep: i for i, rep in enumerate(q2.representatives)}
    id1 = [rep_index1[q1.reduce(x)] for x in elems]
    id2 = [rep_index2[q2.reduce(x)] for x in elems]
    k1, k2 = q1.order, q2.order
    vcap = min(G1.order, G2.order)
    need1 = -(-G1.order // vcap)
    need2 = -(-G2.order // vcap)
    size_floor = max(k1 * need1, k2 * need2)

    level1, level2 = Fraction(G1.order), Fraction(G2.order)
    for s in range(1, N + 1):
        if s < size_floor:
            continue
        for combo in combinations(range(N), s):
            c1 = [0] * k1
            c2 = [0] * k2
            for t in combo:
                c1[id1[t]] += 1
                c2[id2[t]] += 1
            if min(c1) < need1 or min(c2) < need2:
                continue
            rows = []
            rhs = []
            for c in range(k1):
                rows.append([Fraction(1 if id1[t] == c else 0) for t in combo])
                rhs.append(level1)
            for c in range(k2):
                rows.append([Fraction(1 if id2[t] == c else 0) for t in combo])
                rhs.append(level2)
            sol = feasible_nonnegative(rows, rhs)
            if sol is not None:
                witness = GroupFunction(G, {elems[t]: v for t, v in zip(combo, sol)})
                assert s >= max(k1, k2)
                return MinSupportResult(s, witness)
    raise RuntimeError("unreachable: the constant function 1 is always feasible")


def common_fundamental_domain(G: GroupLike, G1: Subgroup, G2: Subgroup) -> tuple[Element, ...]:
    """A set meeting every G1-coset and every G2-coset exactly once.

    Requires equal indices; extracted from the minimal-support witness, whose
    support at equal indices has exactly one point per coset on both sides.
    """
    _check_pair(G, G1, G2)
    index1, index2 = G.order // G1.order, G.order // G2.order
    if index1 != index2:
        raise ValidationError(f"indices differ: {index1} != {index2}")
    result = min_support(G, G1, G2)
    domain = result.witness.support
    assert len(domain) == index1
    for q in (quotient(G, G1), quotient(G, G2)):
        reps = [q.reduce(x) for x in domain]
        assert len(set(reps)) == len(domain)
    return domain


def matrix_as_cyclic_tile(A: copula_mod.CopulaMatrix) -> GroupFunction:
    """Transfer an m x n margin matrix to a function on Z_{mn} (coprime m, n)
    through the coordinatewise congruence isomorphism; the result tiles the
    subgroup generated by m at level n and the one generated by n at level m."""
    iso = crt_iso(A.m, A.n)
    G = make_group([A.m * A.n])
    values = {}
    for i in range(A.m):
        for j in range(A.n):
            v = A.entries[i][j]
            if v:
                values[(iso.to_cyclic(i, j),)] = v
    return GroupFunction(G, values)
