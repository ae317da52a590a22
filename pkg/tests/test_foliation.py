import random
from fractions import Fraction
from functools import reduce

import pytest

from logfol.foliation import (
    FoliationSpec,
    SpecValidationError,
    build_form,
    factor_forms,
    lambda_table,
    residues,
    residues_along,
    validate_spec,
)
from logfol.forms import (
    PForm,
    frobenius_check,
    plucker_check,
    radial_contraction,
    wedge,
)
from logfol.poly import Poly
from logfol.sampling import random_validated_spec

from conftest import P, variables


def coordinate_spec(n, q, s, matrix):
    return FoliationSpec(n, q, [Poly.variable(n + 1, i) for i in range(s)],
                         residue_matrix=matrix)


# -- structural validation at construction -----------------------------------------

def test_structural_errors():
    x = variables(3)
    with pytest.raises(ValueError):
        FoliationSpec(2, 2, x, residue_matrix=[[1, 1, -2], [1, -1, 0]])  # q > n-1
    with pytest.raises(ValueError):
        FoliationSpec(2, 1, x[:2], residue_matrix=[[1, -1]], lambdas={(0,): 1})
    with pytest.raises(ValueError):
        FoliationSpec(2, 1, x, residue_matrix=[[1, 2]])  # wrong row width
    with pytest.raises(ValueError):
        FoliationSpec(2, 1, x, lambdas={(0, 1): 1})      # wrong subset size
    with pytest.raises(ValueError):
        FoliationSpec(3, 3, [Poly.variable(4, i) for i in range(3)],
                      residue_matrix=[[1, 1, -2]] * 3)   # s <= q


# -- validation levels ---------------------------------------------------------------

def test_full_snc_coordinate_instance():
    vs = validate_spec(coordinate_spec(2, 1, 3, [[1, 2, -3]]), "full-snc")
    assert vs.degrees == (1, 1, 1)
    assert vs.lambdas == {(0,): 1, (1,): 2, (2,): -3}
    assert any("transversality" in line for line in vs.certificate)


def test_duplicate_residues_rejected_at_generic():
    with pytest.raises(SpecValidationError) as err:
        validate_spec(coordinate_spec(2, 1, 3, [[1, 1, -2]]), "generic")
    failures = err.value.failures
    assert any(f.check == "genericity" and "{1}" in f.subject and "{2}" in f.subject
               for f in failures)
    # the same spec is fine at basic level
    validate_spec(coordinate_spec(2, 1, 3, [[1, 1, -2]]), "basic")


def test_zero_residue_rejected_at_generic():
    with pytest.raises(SpecValidationError) as err:
        validate_spec(coordinate_spec(2, 1, 3, [[0, 3, -3]]), "generic")
    assert any(f.check == "genericity" and "zero" in f.message for f in err.value.failures)


def test_concurrent_lines_fail_snc():
    x = variables(3)
    spec = FoliationSpec(2, 1, [x[0], x[1], x[0] + x[1]], residue_matrix=[[1, 2, -3]])
    with pytest.raises(SpecValidationError) as err:
        validate_spec(spec, "full-snc")
    assert any(f.check == "transversality" and f.subject == "subset {1,2,3}"
               for f in err.value.failures)
    validate_spec(spec, "generic")  # the lines themselves are smooth and distinct


def test_descent_violation_names_row():
    with pytest.raises(SpecValidationError) as err:
        validate_spec(coordinate_spec(2, 1, 3, [[1, 2, -1]]), "basic")
    assert any(f.check == "descent" and f.subject == "residue row 1"
               for f in err.value.failures)


def test_raw_mode_descent_checked_on_built_form():
    x = variables(3)
    good = FoliationSpec(2, 1, x, lambdas={(0,): 1, (1,): 2, (2,): -3})
    validate_spec(good, "basic")
    bad = FoliationSpec(2, 1, x, lambdas={(0,): 1, (1,): 2, (2,): -4})
    with pytest.raises(SpecValidationError) as err:
        validate_spec(bad, "basic")
    assert any(f.check == "descent" for f in err.value.failures)


def test_singular_divisor_rejected():
    x = variables(3)
    # x0^2 - x1*x2 is smooth, x0*x1 is a singular (reducible) conic
    spec = FoliationSpec(2, 1, [P("x0^2 - x1*x2", 3), x[1], x[0] * x[1]],
                         residue_matrix=[[1, 2, "-4"]])
    with pytest.raises(SpecValidationError) as err:
        validate_spec(spec, "generic")
    assert any(f.check == "smoothness" and f.subject == "divisor 3"
               for f in err.value.failures)


def test_non_homogeneous_divisor_fails_basic():
    spec = FoliationSpec(2, 1, [P("x0 + 1", 3), P("x1", 3), P("x2", 3)],
                         residue_matrix=[[1, 2, -3]])
    with pytest.raises(SpecValidationError) as err:
        validate_spec(spec, "basic")
    assert any(f.check == "homogeneity" for f in err.value.failures)


# -- construction -----------------------------------------------------------------------

def test_build_form_codim_one_instance():
    vs = validate_spec(coordinate_spec(2, 1, 3, [[1, 2, -3]]), "full-snc")
    x = variables(3)
    omega = build_form(vs)
    assert omega == PForm(3, 1, {(0,): x[1] * x[2], (1,): 2 * x[0] * x[2],
                                 (2,): -3 * x[0] * x[1]})
    assert radial_contraction(omega).is_zero


def test_build_form_codim_two_minors():
    spec = coordinate_spec(3, 2, 3, [[1, 1, -2], [1, -1, 0]])
    assert lambda_table(spec) == {(0, 1): -2, (0, 2): 2, (1, 2): -2}
    vs = validate_spec(spec, "basic")  # minors collide, so only basic validates
    omega = build_form(vs)
    x = variables(4)
    assert omega == PForm(4, 2, {(0, 1): -2 * x[2], (0, 2): 2 * x[1], (1, 2): -2 * x[0]})
    assert plucker_check(omega)
    assert frobenius_check(omega)


def test_matrix_and_raw_modes_agree():
    spec = coordinate_spec(3, 2, 4, [[4, 1, -2, -3], [1, 3, -2, -2]])
    vs = validate_spec(spec, "full-snc")
    raw = FoliationSpec(3, 2, vs.divisors, lambdas=vs.lambdas)
    vs_raw = validate_spec(raw, "full-snc")
    assert build_form(vs) == build_form(vs_raw)


def test_factor_form_wedge_identity():
    """In matrix mode the form decomposes: the wedge of the cleared 1-form
    factors equals F^(q-1) times the built q-form."""
    spec = coordinate_spec(3, 2, 4, [[4, 1, -2, -3], [1, 3, -2, -2]])
    vs = validate_spec(spec, "full-snc")
    factors = factor_forms(vs)
    assert len(factors) == 2
    lhs = reduce(wedge, factors)
    rhs = build_form(vs) * vs.divisor_product()  # q - 1 = 1 extra factor of F
    assert lhs == rhs


def test_coefficient_degrees():
    rng = random.Random(61)
    for _ in range(5):
        vs = random_validated_spec(rng, 3, 1, 4, level="generic")
        omega = build_form(vs)
        assert omega.homogeneous_coefficient_degree() == vs.degree_sum - vs.q


def test_scaling_residues_scales_form():
    spec = coordinate_spec(2, 1, 3, [[1, 2, -3]])
    vs = validate_spec(spec, "generic")
    scaled = FoliationSpec(2, 1, vs.divisors,
                           residue_matrix=[[Fraction(5), Fraction(10), Fraction(-15)]])
    vs5 = validate_spec(scaled, "generic")
    assert build_form(vs5) == build_form(vs) * 5


def test_built_forms_satisfy_identities():
    rng = random.Random(71)
    for _ in range(6):
        n = rng.choice([2, 3])
        q = rng.choice([1, 2]) if n == 3 else 1
        # s = q+1 with equal degrees forces duplicate residue minors, so
        # generic instances need at least q+2 divisors
        s = rng.randint(q + 2, 4)
        vs = random_validated_spec(rng, n, q, s, level="generic")
        omega = build_form(vs)
        assert radial_contraction(omega).is_zero
        assert frobenius_check(omega)
        assert plucker_check(omega)


# -- residues ------------------------------------------------------------------------------

def test_residue_table_codim_one():
    vs = validate_spec(coordinate_spec(2, 1, 3, [[1, 2, -3]]), "generic")
    assert residues(vs) == {(0,): 1, (1,): 2, (2,): -3}


def test_residue_table_matrix_minors():
    spec = coordinate_spec(3, 2, 3, [[1, 1, -2], [1, -1, 0]])
    vs = validate_spec(spec, "basic")
    assert residues(vs) == {(0, 1): -2, (0, 2): 2, (1, 2): -2}


def test_residues_along_divisor():
    spec = coordinate_spec(3, 2, 4, [[4, 1, -2, -3], [1, 3, -2, -2]])
    vs = validate_spec(spec, "full-snc")
    along_first = residues_along(vs, 0)
    assert set(along_first) == {(0, 1), (0, 2), (0, 3)}
    assert all(0 in subset for subset in along_first)
    assert along_first == {I: v for I, v in residues(vs).items() if 0 in I}
    with pytest.raises(IndexError):
        residues_along(vs, 9)
