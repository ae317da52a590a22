"""Scheme-theoretic invariants of a logarithmic foliation form.

Three homogeneous ideals control the geometry of a q-form omega built from
a divisor arrangement:

* the singular ideal, generated by all coefficients of omega; its locus is
  the singular scheme of the foliation;
* the Kupka ideal, the singular ideal plus the annihilator of the class of
  d(omega) modulo it; its locus carries the stable (Kupka) part of the
  singular scheme;
* the persistent ideal, in two combinatorial presentations: the sum of the
  principal ideals of the complementary products prod_{j not in J} f_j over
  q-subsets J, and the intersection over (q+1)-subsets K of the ideals
  (f_i : i in K).

For a generic transversal arrangement the expected picture, verified here
instance by instance, is: the two persistent presentations agree as ideals;
the Kupka locus has codimension exactly q+1 and coincides set-theoretically
with the persistent locus; the rest of the singular scheme is a residual
component of dimension at most q-1 disjoint from the Kupka locus.

Comparisons are made at two strengths.  The arrangement identity is an
exact ideal identity and is checked by equality of reduced Groebner bases;
the locus statements compare zero sets, so they are checked by mutual
radical membership, which is insensitive to embedded or non-reduced
structure.  Both results are recorded when they differ.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .foliation import (
    ValidatedSpec,
    build_form,
    degenerate_strata,
    format_subset,
    transversality_violations,
)
from .forms import (
    PForm,
    exterior_derivative,
    frobenius_check,
    plucker_check,
    radial_contraction,
)
from .groebner import (
    GREVLEX,
    Ideal,
    ideal_equal,
    ideal_intersection,
    ideal_quotient,
    ideal_saturation,
    ideal_sum,
    intersect_all,
    krull_dimension,
    module_annihilator,
    normal_form,
    projective_dimension,
    radical_membership,
)
from .poly import Poly


def singular_ideal(form: PForm) -> Ideal:
    """Ideal generated by every coefficient of the form."""
    if form.is_zero:
        raise ValueError("the zero form has no singular ideal")
    return Ideal(form.arity, list(form.coeffs.values()))


def kupka_ideal(form: PForm, singular: Ideal | None = None) -> Ideal:
    """Singular ideal plus the annihilator of the class of d(form) modulo it.

    When d(form) vanishes identically the class is zero, its annihilator is
    the whole ring, and the Kupka ideal is the unit ideal (empty locus).
    """
    if singular is None:
        singular = singular_ideal(form)
    differential = exterior_derivative(form)
    components = list(differential.coeffs.values())
    annihilator = module_annihilator(components, singular)
    return ideal_sum(singular, annihilator)


def persistent_sum(vs: ValidatedSpec) -> Ideal:
    """Ideal generated by the complementary products prod_{j not in J} f_j."""
    gens = [vs.complement_product(subset) for subset in vs.spec.subsets()]
    return Ideal(vs.arity, gens)


def persistent_cap(vs: ValidatedSpec) -> Ideal:
    """Intersection over (q+1)-subsets K of the ideals (f_i : i in K)."""
    pieces = []
    for subset in itertools.combinations(range(vs.s), vs.q + 1):
        pieces.append(Ideal(vs.arity, [vs.divisors[i] for i in subset]))
    return intersect_all(pieces, vs.arity)


def residual_ideal(singular: Ideal, kupka: Ideal) -> Ideal:
    """Saturation of the singular ideal by the Kupka ideal.

    Its locus is the closure of the part of the singular scheme away from
    the Kupka locus; the unit ideal means there is no residual component.
    """
    return ideal_saturation(singular, kupka)


@dataclass
class SchemeIdeals:
    """All five ideals attached to one validated instance."""

    singular: Ideal
    kupka: Ideal
    persistent_sum: Ideal
    persistent_cap: Ideal
    residual: Ideal


def scheme_ideals(vs: ValidatedSpec, form: PForm | None = None) -> SchemeIdeals:
    if form is None:
        form = build_form(vs)
    J = singular_ideal(form)
    K = kupka_ideal(form, J)
    return SchemeIdeals(
        singular=J,
        kupka=K,
        persistent_sum=persistent_sum(vs),
        persistent_cap=persistent_cap(vs),
        residual=residual_ideal(J, K),
    )


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    status: str          # "pass" | "fail" | "skipped"
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status,
                "details": self.details, "seconds": round(self.seconds, 6)}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, check: CheckResult):
        if any(c.name == check.name for c in self.checks):
            raise ValueError(f"duplicate check name {check.name!r}")
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _generator_strings(ideal: Ideal) -> list:
    return [str(g) for g in ideal.groebner_basis(GREVLEX).elements]


def radical_equal(I: Ideal, J: Ideal):
    """Mutual radical membership: same zero locus over the algebraic closure.

    Returns (equal, witness) where witness names a generator of one side
    that does not vanish on the other side's locus, if any.
    """
    for g in I.generators:
        if not radical_membership(g, J):
            return False, f"{g} not radical-member of the second ideal"
    for g in J.generators:
        if not radical_membership(g, I):
            return False, f"{g} not radical-member of the first ideal"
    return True, None


def verify_lemma(vs: ValidatedSpec, waive_preconditions: bool = False) -> CheckResult:
    """Check the arrangement identity: the sum of complementary-product
    ideals equals the intersection of the (q+1)-fold divisor-sum ideals.

    The identity requires the arrangement to be transversal; a violated
    precondition is reported rather than blamed on the identity itself.
    With ``waive_preconditions`` the equality is still evaluated and the
    violation recorded alongside the outcome.
    """
    t0 = time.perf_counter()
    bound = min(vs.s, vs.n + 1)
    violations = transversality_violations(vs.divisors, vs.arity, bound)
    precondition_ok = not violations
    details = {
        "precondition_ok": precondition_ok,
        "violations": [format_subset(subset) for subset, _ in violations],
    }
    if not precondition_ok:
        listed = ", ".join(details["violations"])
        details["message"] = f"precondition violated: snc at {listed}"
    if not precondition_ok and not waive_preconditions:
        return CheckResult("lemma", "skipped", details, time.perf_counter() - t0)
    sum_form = persistent_sum(vs)
    cap_form = persistent_cap(vs)
    equal = ideal_equal(sum_form, cap_form)
    details["ideals_equal"] = equal
    details["sum_generators"] = _generator_strings(sum_form)
    details["cap_generators"] = _generator_strings(cap_form)
    status = "pass" if equal else "fail"
    return CheckResult("lemma", status, details, time.perf_counter() - t0)


def verify_identities(vs: ValidatedSpec, form: PForm | None = None) -> CheckResult:
    """Structural identities of the built form: descent (radial contraction
    zero), integrability, decomposability in matrix mode, and a positive
    codimension of the coefficient ideal."""
    t0 = time.perf_counter()
    if form is None:
        form = build_form(vs)
    details = {}
    details["radial_contraction_zero"] = radial_contraction(form).is_zero
    details["integrable"] = frobenius_check(form)
    if vs.spec.mode == "matrix":
        details["decomposable"] = plucker_check(form)
    J = singular_ideal(form)
    codim = vs.n - projective_dimension(J)
    details["coefficient_ideal_projective_codim"] = codim
    details["coefficient_ideal_positive_codim"] = codim >= 1
    ok = all(v for k, v in details.items() if isinstance(v, bool))
    return CheckResult("identities", "pass" if ok else "fail",
                       details, time.perf_counter() - t0)


def verify_decomposition(vs: ValidatedSpec, ideals: SchemeIdeals | None = None,
                         form: PForm | None = None) -> VerificationReport:
    """Verify the decomposition of the singular scheme on one instance.

    Sub-checks, each reported independently:

    * kupka-codimension   the Kupka locus has projective codimension q+1
                          (empty is accepted only in the degenerate s <= q case);
    * residual-dimension  the residual locus has dimension <= q-1 or is empty;
    * kupka-formula       the Kupka locus equals the persistent locus
                          (mutual radical membership; exact ideal equality
                          is recorded as well);
    * disjointness        Kupka and residual loci do not meet;
    * singular-consistency  the singular locus is covered by the two parts:
                          same radical as the intersection of Kupka and
                          residual ideals.
    """
    if ideals is None:
        ideals = scheme_ideals(vs, form)
    report = VerificationReport()
    J, K, H = ideals.singular, ideals.kupka, ideals.residual
    n, q, s = vs.n, vs.q, vs.s

    t0 = time.perf_counter()
    cone = krull_dimension(K)
    proj = max(cone - 1, -1)
    expected = n - (q + 1)
    if proj == expected:
        status = "pass"
    elif proj == -1 and s <= q:
        status = "pass"
    else:
        status = "fail"
    report.add(CheckResult("kupka-codimension", status, {
        "cone_dimension": cone,
        "projective_dimension": proj,
        "expected_projective_dimension": expected,
        "generators": _generator_strings(K),
    }, time.perf_counter() - t0))

    t0 = time.perf_counter()
    proj_h = projective_dimension(H)
    status = "pass" if proj_h <= q - 1 else "fail"
    report.add(CheckResult("residual-dimension", status, {
        "projective_dimension": proj_h,
        "empty": proj_h == -1,
        "bound": q - 1,
        "generators": _generator_strings(H),
    }, time.perf_counter() - t0))

    t0 = time.perf_counter()
    same_locus, witness = radical_equal(K, ideals.persistent_cap)
    strict = ideal_equal(K, ideals.persistent_cap)
    details = {"radical_equal": same_locus, "ideals_equal": strict,
               "persistent_generators": _generator_strings(ideals.persistent_cap)}
    if witness:
        details["witness"] = witness
    if not same_locus:
        # a residue choice degenerating on some stratum is the usual culprit
        bad = degenerate_strata(vs.lambdas, q, s)
        if bad:
            details["degenerate_strata"] = [format_subset(K0) for K0 in bad]
    report.add(CheckResult("kupka-formula", "pass" if same_locus else "fail",
                           details, time.perf_counter() - t0))

    t0 = time.perf_counter()
    union = ideal_sum(K, H)
    proj_union = projective_dimension(union)
    report.add(CheckResult("disjointness", "pass" if proj_union == -1 else "fail", {
        "intersection_projective_dimension": proj_union,
    }, time.perf_counter() - t0))

    t0 = time.perf_counter()
    cover = ideal_intersection(K, H)
    same, witness = radical_equal(J, cover)
    details = {"radical_equal": same}
    if witness:
        details["witness"] = witness
    report.add(CheckResult("singular-consistency", "pass" if same else "fail",
                           details, time.perf_counter() - t0))
    return report
