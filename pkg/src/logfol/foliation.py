"""Validation of foliation data and construction of the logarithmic form.

A foliation instance on P^n is described by s homogeneous divisor
polynomials f_1..f_s and residue data for the codimension q: either a q x s
rational matrix L (one row per logarithmic 1-form factor) or a raw table of
scalars, one per q-element subset I of the divisors.  In matrix mode the
scalar attached to I is the q x q minor of L on the columns I, and the
resulting q-form is globally a wedge product of q logarithmic 1-forms; in
raw mode arbitrary scalars are allowed and decomposability must be checked
afterwards.

The polynomial q-form built from a validated instance is

    omega = sum over I of  lambda_I * (prod_{j not in I} f_j) * df_I,

df_I being the wedge of the df_i for i in I in increasing order.  Every
coefficient of omega is homogeneous of degree (sum_i deg f_i) - q and the
radial contraction of omega vanishes, so omega lives on P^n.

Validation is layered:

* ``basic``    homogeneity of the divisors and the descent conditions;
* ``generic``  basic, plus residue scalars pairwise distinct and nonzero,
               plus smoothness of each divisor hypersurface;
* ``full-snc`` generic, plus transversality of the divisor arrangement
               (every k-fold intersection, k up to q+2 by default, has
               codimension k or is empty).

A failed validation raises ``SpecValidationError`` carrying one structured
entry per failed check; nothing is reported by crashing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .forms import PForm, radial_contraction, wedge
from .groebner import Ideal, krull_dimension
from .poly import Poly

VALIDATION_LEVELS = ("basic", "generic", "full-snc")


def format_subset(subset) -> str:
    """Render a 0-based index tuple as a 1-based set, e.g. (0,2) -> '{1,3}'."""
    return "{" + ",".join(str(i + 1) for i in subset) + "}"


@dataclass(frozen=True)
class ValidationFailure:
    check: str
    subject: str
    message: str

    def __str__(self):
        return f"[{self.check}] {self.subject}: {self.message}"


class SpecValidationError(Exception):
    """Raised when a foliation spec fails validation; lists every failure."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(str(f) for f in self.failures))


class FoliationSpec:
    """Divisor arrangement plus residue data, before validation.

    ``residue_matrix`` is a q x s matrix of rationals (rows are the residue
    vectors of the q logarithmic 1-form factors); ``lambdas`` maps 0-based
    strictly increasing q-subsets of the divisor indices to rationals.
    Exactly one of the two must be given.
    """

    __slots__ = ("n", "q", "divisors", "residue_matrix", "lambdas")

    def __init__(self, n, q, divisors, residue_matrix=None, lambdas=None):
        if n < 2:
            raise ValueError("ambient projective dimension must be at least 2")
        if not 1 <= q <= n - 1:
            raise ValueError(f"codimension q={q} must satisfy 1 <= q <= n-1={n - 1}")
        divisors = tuple(divisors)
        s = len(divisors)
        if s <= q:
            raise ValueError(f"need more divisors than the codimension: s={s} <= q={q}")
        for i, f in enumerate(divisors):
            if not isinstance(f, Poly):
                raise TypeError("divisors must be Poly instances")
            if f.arity != n + 1:
                raise ValueError(f"divisor {i + 1} has arity {f.arity}, expected {n + 1}")
            if f.is_zero:
                raise ValueError(f"divisor {i + 1} is zero")
        if (residue_matrix is None) == (lambdas is None):
            raise ValueError("exactly one of residue_matrix and lambdas must be given")
        if residue_matrix is not None:
            rows = tuple(tuple(Fraction(entry) for entry in row) for row in residue_matrix)
            if len(rows) != q or any(len(row) != s for row in rows):
                raise ValueError(f"residue matrix must be {q} x {s}")
            residue_matrix = rows
        if lambdas is not None:
            table = {}
            for subset, value in lambdas.items():
                subset = tuple(subset)
                if len(subset) != q or len(set(subset)) != q or list(subset) != sorted(subset):
                    raise ValueError(f"lambda key {subset} is not an increasing q-subset")
                if subset[0] < 0 or subset[-1] >= s:
                    raise ValueError(f"lambda key {subset} out of range for s={s}")
                table[subset] = Fraction(value)
            lambdas = table
        self.n = n
        self.q = q
        self.divisors = divisors
        self.residue_matrix = residue_matrix
        self.lambdas = lambdas

    @property
    def s(self) -> int:
        return len(self.divisors)

    @property
    def arity(self) -> int:
        return self.n + 1

    @property
    def mode(self) -> str:
        return "matrix" if self.residue_matrix is not None else "raw"

    def subsets(self):
        return itertools.combinations(range(self.s), self.q)


def _det(matrix) -> Fraction:
    """Determinant by expansion along the first row (small matrices only)."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = Fraction(0)
    for col in range(size):
        sub = [row[:col] + row[col + 1:] for row in matrix[1:]]
        piece = matrix[0][col] * _det(sub)
        total += piece if col % 2 == 0 else -piece
    return total


def lambda_table(spec: FoliationSpec) -> dict:
    """Residue scalar for every q-subset: minors in matrix mode, as given in raw mode."""
    if spec.mode == "raw":
        return {subset: spec.lambdas.get(subset, Fraction(0)) for subset in spec.subsets()}
    table = {}
    for subset in spec.subsets():
        minor = [[spec.residue_matrix[k][i] for i in subset] for k in range(spec.q)]
        table[subset] = _det(minor)
    return table


@dataclass
class ValidatedSpec:
    """A foliation spec together with derived data and its validation record."""

    spec: FoliationSpec
    level: str
    degrees: tuple
    lambdas: dict
    certificate: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def s(self) -> int:
        return self.spec.s

    @property
    def arity(self) -> int:
        return self.spec.arity

    @property
    def divisors(self):
        return self.spec.divisors

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    def divisor_product(self) -> Poly:
        return reduce(lambda a, b: a * b, self.divisors)

    def complement_product(self, subset) -> Poly:
        """Product of the divisors away from ``subset``."""
        out = Poly.one(self.arity)
        skip = set(subset)
        for i, f in enumerate(self.divisors):
            if i not in skip:
                out = out * f
        return out


def _jacobian_ideal(f: Poly) -> Ideal:
    gens = [f] + [f.partial_derivative(i) for i in range(f.arity)]
    return Ideal(f.arity, [g for g in gens if not g.is_zero])


def transversality_violations(divisors, arity, max_size) -> list:
    """Subsets K (size 2..max_size) whose intersection has wrong codimension.

    The arrangement is transversal at K when the ideal (f_i : i in K) has
    height |K| or defines the empty projective locus.
    """
    bad = []
    for size in range(2, max_size + 1):
        for subset in itertools.combinations(range(len(divisors)), size):
            ideal = Ideal(arity, [divisors[i] for i in subset])
            dim = krull_dimension(ideal)
            height = arity - dim
            if height != size and dim > 0:
                bad.append((subset, height))
    return bad


def validate_spec(spec: FoliationSpec, level: str = "generic",
                  exhaustive_snc: bool = False) -> ValidatedSpec:
    """Run the validation checks for ``level`` and return a ValidatedSpec.

    Raises SpecValidationError listing every failed check.  With
    ``exhaustive_snc`` the transversality sweep covers subsets of all sizes
    up to min(s, n+1) instead of stopping at q+2.
    """
    if level not in VALIDATION_LEVELS:
        raise ValueError(f"unknown validation level {level!r}")
    failures = []
    certificate = []
    lam = lambda_table(spec)

    # homogeneity of each divisor
    degrees = []
    for i, f in enumerate(spec.divisors):
        d = f.homogeneous_degree()
        if d is None or d == 0:
            failures.append(ValidationFailure(
                "homogeneity", f"divisor {i + 1}",
                "must be homogeneous of positive degree"))
            degrees.append(None)
        else:
            degrees.append(d)
    homogeneous = all(d is not None for d in degrees)
    if homogeneous:
        certificate.append(f"homogeneity: degrees {tuple(degrees)}")

    # descent to projective space
    if homogeneous:
        if spec.mode == "matrix":
            for k, row in enumerate(spec.residue_matrix):
                weighted = sum(entry * d for entry, d in zip(row, degrees))
                if weighted != 0:
                    failures.append(ValidationFailure(
                        "descent", f"residue row {k + 1}",
                        f"degree-weighted sum is {weighted}, expected 0"))
            if not any(f.check == "descent" for f in failures):
                certificate.append("descent: every residue row is degree-orthogonal")
        else:
            vs_tmp = ValidatedSpec(spec, "basic", tuple(degrees), lam)
            if radial_contraction(build_form(vs_tmp)).is_zero:
                certificate.append("descent: radial contraction of the built form is zero")
            else:
                failures.append(ValidationFailure(
                    "descent", "lambda table",
                    "radial contraction of the built form is nonzero"))

    if level in ("generic", "full-snc"):
        zero_subsets = [I for I, value in lam.items() if value == 0]
        for I in zero_subsets:
            failures.append(ValidationFailure(
                "genericity", f"subset {format_subset(I)}", "residue scalar is zero"))
        by_value = {}
        for I, value in sorted(lam.items()):
            by_value.setdefault(value, []).append(I)
        for value, subsets in sorted(by_value.items()):
            if value != 0 and len(subsets) > 1:
                listed = ", ".join(format_subset(I) for I in subsets)
                failures.append(ValidationFailure(
                    "genericity", f"subsets {listed}",
                    f"residue scalar {value} repeats: not pairwise distinct"))
        if not any(f.check == "genericity" for f in failures):
            certificate.append("genericity: residue scalars pairwise distinct and nonzero")

        if homogeneous:
            for i, f in enumerate(spec.divisors):
                if krull_dimension(_jacobian_ideal(f)) > 0:
                    failures.append(ValidationFailure(
                        "smoothness", f"divisor {i + 1}",
                        "hypersurface is singular (Jacobian locus nonempty)"))
            if not any(f.check == "smoothness" for f in failures):
                certificate.append("smoothness: every divisor hypersurface is smooth")
        # positive-degree hypersurfaces on projective space are always ample
        certificate.append("ampleness: automatic for hypersurfaces on projective space")

    if level == "full-snc" and homogeneous:
        bound = min(spec.s, spec.n + 1) if exhaustive_snc else min(spec.s, spec.q + 2)
        bad = transversality_violations(spec.divisors, spec.arity, bound)
        for subset, height in bad:
            failures.append(ValidationFailure(
                "transversality", f"subset {format_subset(subset)}",
                f"intersection has codimension {height}, expected {len(subset)} or empty"))
        if not bad:
            certificate.append(f"transversality: all subsets of size <= {bound} are transversal")

    if failures:
        raise SpecValidationError(failures)
    return ValidatedSpec(spec, level, tuple(degrees), lam, certificate)


def build_form(vs: ValidatedSpec) -> PForm:
    """The polynomial q-form sum_I lambda_I (prod_{j not in I} f_j) df_I."""
    arity = vs.arity
    differentials = []
    for f in vs.divisors:
        coeffs = {}
        for j in range(arity):
            df = f.partial_derivative(j)
            if not df.is_zero:
                coeffs[(j,)] = df
        differentials.append(PForm(arity, 1, coeffs))
    total = PForm(arity, vs.q)
    for subset in sorted(vs.lambdas):
        scalar = vs.lambdas[subset]
        if scalar == 0:
            continue
        df_block = reduce(wedge, (differentials[i] for i in subset))
        total = total + df_block * (vs.complement_product(subset) * scalar)
    return total


def factor_forms(vs: ValidatedSpec) -> list:
    """Matrix mode only: the cleared 1-forms sum_i L[k][i] (prod_{j!=i} f_j) df_i.

    Their wedge equals (prod f_i)^(q-1) times the built q-form, which is the
    global decomposition property the matrix mode guarantees.
    """
    if vs.spec.mode != "matrix":
        raise ValueError("factor forms exist only in matrix mode")
    arity = vs.arity
    out = []
    for row in vs.spec.residue_matrix:
        form = PForm(arity, 1)
        for i, entry in enumerate(row):
            if entry == 0:
                continue
            f = vs.divisors[i]
            coeffs = {}
            for j in range(arity):
                df = f.partial_derivative(j)
                if not df.is_zero:
                    coeffs[(j,)] = df
            form = form + PForm(arity, 1, coeffs) * (vs.complement_product((i,)) * entry)
        out.append(form)
    return out


def degenerate_strata(lambdas: dict, q: int, s: int) -> list:
    """(q+1)-subsets where the alternating sum of the boundary residues is zero.

    At such a stratum the differential of the built form vanishes to higher
    order, the stratum escapes the Kupka locus, and the locus-level theorems
    are not expected to hold.  For q = 1 the condition coincides with the
    residues being pairwise distinct; for larger q it is strictly stronger
    and is the practical meaning of a generic residue choice.
    """
    bad = []
    for K in itertools.combinations(range(s), q + 1):
        total = Fraction(0)
        for k, omit in enumerate(K):
            subset = tuple(i for i in K if i != omit)
            term = lambdas.get(subset, Fraction(0))
            total += term if k % 2 == 0 else -term
        if total == 0:
            bad.append(K)
    return bad


def residues(vs: ValidatedSpec) -> dict:
    """The residue scalar along each q-fold intersection stratum."""
    return dict(sorted(vs.lambdas.items()))


def residues_along(vs: ValidatedSpec, divisor_index: int) -> dict:
    """Residues of the foliation induced on one divisor: the scalars of the
    strata that contain it."""
    if not 0 <= divisor_index < vs.s:
        raise IndexError(f"divisor index {divisor_index} out of range")
    return {I: value for I, value in sorted(vs.lambdas.items()) if divisor_index in I}
