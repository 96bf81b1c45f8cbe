"""Fans of toric orbifolds and quotient-singularity classification.

Each maximal simplicial cone of a complete fan describes an affine chart
C^m / Gamma with Gamma abelian.  The group is extracted from the generator
matrix via Smith normal form, its diagonal action weights are read off the
unimodular factors, and the chart is classified as smooth, SU(m)
(Gorenstein, crepant-resolvable candidates) or U(m)-non-SU.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd, lcm
from typing import Iterator, Optional, Sequence

from .exact_linalg import (
    RationalMatrix,
    integer_determinant,
    smith_normal_form,
    solve_square,
    unimodular_inverse,
)

IntVector = tuple[int, ...]

SMOOTH = "smooth"
SU = "su"
U_NON_SU = "u_non_su"
UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class Cone:
    """Simplicial lattice cone given by its primitive generators."""

    generators: tuple[IntVector, ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "Cone":
        return Cone(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0]) if self.generators else 0

    def generator_matrix(self) -> list[list[int]]:
        """m x k matrix whose columns are the generators."""
        m = self.ambient_dim
        return [[g[i] for g in self.generators] for i in range(m)]


@dataclass(frozen=True)
class Fan:
    """Rays plus maximal cones (as 0-based ray index sets)."""

    dim: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"C{i + 1}" for i in range(len(self.max_cones)))
            )
        if len(self.labels) != len(self.max_cones):
            raise ValueError("one label per maximal cone required")

    def cone(self, index: int) -> Cone:
        return Cone(tuple(self.rays[i] for i in self.max_cones[index]))

    def cones(self) -> Iterator[tuple[str, Cone]]:
        for i in range(len(self.max_cones)):
            yield self.labels[i], self.cone(i)


@dataclass(frozen=True)
class QuotientData:
    """Gamma = Z^m / (generator lattice) with its diagonal action."""

    order: int
    cyclic_factors: tuple[int, ...]
    action_weights: tuple[IntVector, ...]  # one weight vector per cyclic factor
    classification: str
    isolated: bool


@dataclass(frozen=True)
class FanValidation:
    valid: bool
    violations: tuple[str, ...]


def _is_primitive(v: IntVector) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def validate_fan(fan: Fan) -> FanValidation:
    """Check primitivity, simpliciality and full-dimensionality of max cones.

    Violations are reported, not raised: non-simplicial cones fall outside
    the isolated-singularity setting but should not abort a database scan.
    """
    violations: list[str] = []
    for i, ray in enumerate(fan.rays):
        if len(ray) != fan.dim:
            violations.append(f"ray {i + 1} has length {len(ray)}, expected {fan.dim}")
        elif all(x == 0 for x in ray):
            violations.append(f"ray {i + 1} is zero")
        elif not _is_primitive(ray):
            violations.append(f"ray {i + 1} {list(ray)} is not primitive")
    if len(set(fan.rays)) != len(fan.rays):
        violations.append("rays are not pairwise distinct")
    for i, idx in enumerate(fan.max_cones):
        label = fan.labels[i]
        if any(j < 0 or j >= len(fan.rays) for j in idx):
            violations.append(f"cone {label}: ray index out of range")
            continue
        if len(set(idx)) != len(idx):
            violations.append(f"cone {label}: repeated ray")
            continue
        if len(idx) != fan.dim:
            violations.append(
                f"cone {label}: {len(idx)} generators, expected {fan.dim} "
                "(not full-dimensional simplicial)"
            )
            continue
        cone = fan.cone(i)
        if integer_determinant(cone.generator_matrix()) == 0:
            violations.append(f"cone {label}: generators are linearly dependent")
    return FanValidation(valid=not violations, violations=tuple(violations))


def cone_index(cone: Cone) -> int:
    """|Gamma| = |det| of the generator matrix."""
    m = cone.ambient_dim
    if len(cone.generators) != m:
        raise ValueError("cone is not full-dimensional")
    det = integer_determinant(cone.generator_matrix())
    if det == 0:
        raise ValueError("degenerate cone: zero determinant")
    return abs(det)


def quotient_action(cone: Cone) -> QuotientData:
    """Extract Gamma and its diagonal action weights from the cone.

    With G the generator-column matrix and G = U·D·V its Smith decomposition,
    Z^m/G(Z^m) is the direct sum of Z/d_i generated by the classes of the
    columns of U; the generator of the order-d_i factor acts on the chart
    coordinates by the d_i-th roots of unity with exponents given by column i
    of V^{-1} (mod d_i).  The invariant-monomial cross-check in the test
    suite pins this convention down.
    """
    order = cone_index(cone)
    g = cone.generator_matrix()
    snf = smith_normal_form(g)
    diag = snf.diagonal()
    v_inv = unimodular_inverse([list(r) for r in snf.v])
    factors: list[int] = []
    weights: list[IntVector] = []
    for i, d in enumerate(diag):
        if d <= 1:
            continue
        factors.append(d)
        weights.append(tuple(v_inv[j][i] % d for j in range(cone.ambient_dim)))
    prod = 1
    for d in factors:
        prod *= d
    if prod != order:
        raise RuntimeError("SNF diagonal inconsistent with |det|")
    isolated = _is_isolated_from_weights(factors, weights, cone.ambient_dim)
    classification = _classify(order, factors, weights)
    return QuotientData(
        order=order,
        cyclic_factors=tuple(factors),
        action_weights=tuple(weights),
        classification=classification,
        isolated=isolated,
    )


def group_elements(
    factors: Sequence[int], weights: Sequence[IntVector], m: int
) -> Iterator[tuple[int, tuple[int, ...], IntVector]]:
    """Yield (n, exponent tuple, eigenvalue exponents mod n) per element.

    n is the lcm of the cyclic orders; the element with exponent tuple ks
    acts on coordinate j by the n-th root of unity to the returned exponent.
    """
    if not factors:
        yield 1, (), tuple(0 for _ in range(m))
        return
    n = lcm(*factors)
    for ks in product(*(range(d) for d in factors)):
        exps = tuple(
            sum(k * w[j] * (n // d) for k, d, w in zip(ks, factors, weights)) % n
            for j in range(m)
        )
        yield n, ks, exps


def _is_isolated_from_weights(
    factors: Sequence[int], weights: Sequence[IntVector], m: int
) -> bool:
    """Gamma acts freely away from the origin iff no nontrivial element
    fixes a coordinate (all eigenvalue exponents nonzero)."""
    for _, ks, exps in group_elements(factors, weights, m):
        if not any(ks):
            continue
        if all(e == 0 for e in exps):
            raise RuntimeError("nontrivial element acts trivially (weights bug)")
        if any(e == 0 for e in exps):
            return False
    return True


def _faces_smooth(cone: Cone) -> bool:
    """True iff every proper nonempty face is a smooth cone."""
    m = cone.ambient_dim
    for size in range(1, m):
        for subset in combinations(range(m), size):
            sub = [[cone.generators[j][i] for j in subset] for i in range(m)]
            diag = smith_normal_form(sub).diagonal()
            nonzero = [d for d in diag if d != 0]
            if len(nonzero) != size or any(d != 1 for d in nonzero):
                return False
    return True


def is_isolated(cone: Cone) -> bool:
    """True iff the chart singularity is isolated.

    Both characterizations are computed and must agree: every proper face of
    the cone is smooth, and every nontrivial group element moves every
    coordinate axis.
    """
    qd_isolated = quotient_action(cone).isolated
    face_isolated = _faces_smooth(cone)
    if qd_isolated != face_isolated:
        raise RuntimeError(
            "isolation criteria disagree (face smoothness vs group freeness)"
        )
    return face_isolated


def gorenstein_covector(cone: Cone) -> Optional[IntVector]:
    """Integer covector u with <u, v_i> = 1 for all generators, if any."""
    m = cone.ambient_dim
    mat = RationalMatrix.from_rows([list(g) for g in cone.generators])
    try:
        u = solve_square(mat, [1] * m)
    except ValueError:
        raise ValueError("degenerate cone: singular generator system")
    if all(x.denominator == 1 for x in u):
        return tuple(int(x) for x in u)
    return None


def is_gorenstein(cone: Cone) -> bool:
    """True iff the generators lie on an integral affine hyperplane at
    height one (equivalently Gamma is in SU(m) for abelian toric quotients)."""
    return gorenstein_covector(cone) is not None


def _classify(
    order: int, factors: Sequence[int], weights: Sequence[IntVector]
) -> str:
    if order == 1:
        return SMOOTH
    su = all(sum(w) % d == 0 for d, w in zip(factors, weights))
    return SU if su else U_NON_SU


def classify(cone: Cone) -> str:
    """Smooth / SU / U-non-SU, cross-checked two ways.

    The weight-sum criterion (each generator has determinant one) must agree
    with the Gorenstein-covector test; a mismatch means the group extraction
    convention broke, so it raises rather than guessing.
    """
    data = quotient_action(cone)
    if data.classification == SMOOTH:
        return SMOOTH
    gor = is_gorenstein(cone)
    weight_su = data.classification == SU
    if gor != weight_su:
        raise RuntimeError("Gorenstein test disagrees with weight-sum criterion")
    return data.classification


def classify_fan(fan: Fan) -> list[tuple[str, Optional[QuotientData]]]:
    """Classify every maximal cone; results in input order.

    Cones outside the isolated-singularity setting (non-simplicial,
    degenerate) yield None -- consumers present them as unsupported rather
    than aborting a database scan.
    """
    out: list[tuple[str, Optional[QuotientData]]] = []
    for label, cone in fan.cones():
        try:
            data = quotient_action(cone)
            if data.classification != SMOOTH:
                # Exercise the double-entry bookkeeping on singular cones.
                classify(cone)
        except ValueError:
            out.append((label, None))
            continue
        out.append((label, data))
    return out


def invariant_monomial_count_weights(
    factors: Sequence[int],
    weights: Sequence[IntVector],
    m: int,
    max_degree: int,
) -> int:
    """Number of invariant monomials z^a, a in N^m, total degree <= bound,
    decided through the extracted action weights."""
    count = 0
    for a in product(range(max_degree + 1), repeat=m):
        if sum(a) > max_degree:
            continue
        if all(
            sum(w[j] * a[j] for j in range(m)) % d == 0
            for d, w in zip(factors, weights)
        ):
            count += 1
    return count


def invariant_monomial_count_lattice(cone: Cone, max_degree: int) -> int:
    """Same count decided through the toric dictionary, independently of the
    weight extraction: z^a descends to the quotient iff the corresponding
    character G^{-T} a is an integral point (of the dual cone, since a >= 0)."""
    m = cone.ambient_dim
    gt = RationalMatrix.from_rows(cone.generator_matrix()).transpose()
    # Columns of (G^T)^{-1}, computed once.
    inv_cols = [
        solve_square(gt, [int(i == j) for i in range(m)]) for j in range(m)
    ]
    count = 0
    for a in product(range(max_degree + 1), repeat=m):
        if sum(a) > max_degree:
            continue
        integral = True
        for i in range(m):
            coord = sum(inv_cols[j][i] * a[j] for j in range(m))
            if coord.denominator != 1:
                integral = False
                break
        if integral:
            count += 1
    return count
