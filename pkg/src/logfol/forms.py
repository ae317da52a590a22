"""Exterior algebra of differential forms with polynomial coefficients.

A p-form on the coordinate ring of affine (n+1)-space is stored as a map
from strictly increasing index tuples (the basis monomials dx_{j1}^...^dx_{jp})
to polynomial coefficients.  Signs follow one convention throughout:
basis tuples are kept increasing, and contracting with the j-th coordinate
field picks up (-1)^k when j sits at (zero-based) position k of the tuple.
The wedge, exterior derivative and contraction operators below are all
derived from that single choice and are checked against each other by the
anti-derivation laws in the test suite.

Contraction with the radial (Euler) field sum_i x_i d/dx_i detects descent
to projective space: a homogeneous form is the pullback of a form on P^n
exactly when its radial contraction vanishes.  The decomposability test
(contract with every coordinate (q-1)-multivector, wedge back, demand zero)
and the integrability test (same with an exterior derivative in between)
are the two pointwise conditions a q-form must satisfy to define a
codimension-q foliation away from its zero locus.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .poly import Poly

IndexTuple = tuple  # strictly increasing tuple of variable indices


def _merge_sign(a: IndexTuple, b: IndexTuple):
    """Merge two disjoint increasing tuples; return (merged, parity sign).

    The sign is (-1) to the number of transpositions needed to sort the
    concatenation a + b; None when the tuples share an index.
    """
    merged = []
    inversions = 0
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None, 0
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            inversions += len(a) - i
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), -1 if inversions % 2 else 1


class PForm:
    """A differential p-form with Poly coefficients, immutable by convention."""

    __slots__ = ("arity", "degree", "coeffs")

    def __init__(self, arity: int, degree: int, coeffs=None):
        if degree < 0:
            raise ValueError("form degree must be non-negative")
        self.arity = arity
        self.degree = degree
        clean = {}
        for subset, poly in (coeffs or {}).items():
            subset = tuple(subset)
            if len(subset) != degree:
                raise ValueError(f"index tuple {subset} does not have length {degree}")
            if any(subset[i] >= subset[i + 1] for i in range(len(subset) - 1)):
                raise ValueError(f"index tuple {subset} must be strictly increasing")
            if subset and not (0 <= subset[0] and subset[-1] < arity):
                raise ValueError(f"index tuple {subset} out of range for arity {arity}")
            if not isinstance(poly, Poly):
                raise TypeError("form coefficients must be Poly instances")
            if poly.arity != arity:
                raise ValueError("coefficient arity does not match form arity")
            if not poly.is_zero:
                clean[subset] = poly
        if degree > arity and clean:
            raise ValueError(f"a nonzero {degree}-form cannot exist on {arity} coordinates")
        self.coeffs = clean

    @staticmethod
    def zero(arity: int, degree: int) -> "PForm":
        return PForm(arity, degree)

    @staticmethod
    def from_poly(p: Poly) -> "PForm":
        """Wrap a polynomial as a 0-form."""
        return PForm(p.arity, 0, {(): p})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, subset) -> Poly:
        return self.coeffs.get(tuple(subset), Poly.zero(self.arity))

    def homogeneous_coefficient_degree(self):
        """Common degree of all coefficients, or None if mixed/zero."""
        degs = set()
        for poly in self.coeffs.values():
            d = poly.homogeneous_degree()
            if d is None:
                return None
            degs.add(d)
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- linear structure ------------------------------------------------------

    def _check_compatible(self, other: "PForm"):
        if self.arity != other.arity:
            raise ValueError("arity mismatch between forms")
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")

    def __add__(self, other):
        if not isinstance(other, PForm):
            return NotImplemented
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for subset, poly in other.coeffs.items():
            acc = coeffs.get(subset)
            total = poly if acc is None else acc + poly
            if total.is_zero:
                coeffs.pop(subset, None)
            else:
                coeffs[subset] = total
        return PForm(self.arity, self.degree, coeffs)

    def __neg__(self):
        return PForm(self.arity, self.degree, {s: -p for s, p in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, PForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction, Poly)):
            return PForm(self.arity, self.degree,
                         {s: p * scalar for s, p in self.coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PForm):
            return NotImplemented
        return (self.arity == other.arity and self.degree == other.degree
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.arity, self.degree, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        chunks = []
        for subset in sorted(self.coeffs):
            dx = "∧".join(f"dx{i}" for i in subset) or "1"
            chunks.append(f"({self.coeffs[subset]})·{dx}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"PForm({self})"


def wedge(a: PForm, b: PForm) -> PForm:
    """Exterior product a ∧ b."""
    if a.arity != b.arity:
        raise ValueError("arity mismatch between forms")
    degree = a.degree + b.degree
    if degree > a.arity:
        return PForm(a.arity, degree)
    coeffs = {}
    for sa, pa in a.coeffs.items():
        for sb, pb in b.coeffs.items():
            merged, sign = _merge_sign(sa, sb)
            if merged is None:
                continue
            term = pa * pb
            if sign < 0:
                term = -term
            acc = coeffs.get(merged)
            total = term if acc is None else acc + term
            if total.is_zero:
                coeffs.pop(merged, None)
            else:
                coeffs[merged] = total
    return PForm(a.arity, degree, coeffs)


def exterior_derivative(a: PForm) -> PForm:
    """d(sum c_J dx_J) = sum_i dc_J/dx_i dx_i ∧ dx_J."""
    coeffs = {}
    for subset, poly in a.coeffs.items():
        for i in range(a.arity):
            if i in subset:
                continue
            dp = poly.partial_derivative(i)
            if dp.is_zero:
                continue
            merged, sign = _merge_sign((i,), subset)
            term = dp if sign > 0 else -dp
            acc = coeffs.get(merged)
            total = term if acc is None else acc + term
            if total.is_zero:
                coeffs.pop(merged, None)
            else:
                coeffs[merged] = total
    return PForm(a.arity, a.degree + 1, coeffs)


def contract_index(a: PForm, index: int) -> PForm:
    """Interior product with the coordinate field d/dx_index."""
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    if not 0 <= index < a.arity:
        raise IndexError(f"index {index} out of range for arity {a.arity}")
    coeffs = {}
    for subset, poly in a.coeffs.items():
        if index not in subset:
            continue
        k = subset.index(index)
        reduced = subset[:k] + subset[k + 1:]
        coeffs[reduced] = poly if k % 2 == 0 else -poly
    return PForm(a.arity, a.degree - 1, coeffs)


def contract(a: PForm, indices) -> PForm:
    """Iterated interior product with d/dx_{j1} ∧ ... ∧ d/dx_{jp}.

    ``indices`` must be strictly increasing; the rightmost field is
    contracted first.  The empty multivector acts as the identity.
    """
    indices = tuple(indices)
    if any(indices[i] >= indices[i + 1] for i in range(len(indices) - 1)):
        raise ValueError("multivector indices must be strictly increasing")
    if len(indices) > a.degree:
        raise ValueError(f"cannot contract a {a.degree}-form with a {len(indices)}-multivector")
    out = a
    for index in reversed(indices):
        out = contract_index(out, index)
    return out


def radial_contraction(a: PForm) -> PForm:
    """Interior product with the radial field sum_i x_i d/dx_i.

    Vanishes exactly on homogeneous forms that descend to projective space.
    """
    if a.degree == 0:
        return PForm(a.arity, 0)
    out = PForm(a.arity, a.degree - 1)
    for i in range(a.arity):
        piece = contract_index(a, i)
        if not piece.is_zero:
            out = out + piece * Poly.variable(a.arity, i)
    return out


def plucker_check(a: PForm) -> bool:
    """Local decomposability of a q-form into a product of q 1-forms.

    Requires (i_Xi a) ∧ a = 0 for every coordinate (q-1)-multivector Xi;
    linearity over functions makes the coordinate multivectors sufficient.
    """
    q = a.degree
    if q < 1:
        raise ValueError("decomposability is only defined for forms of degree >= 1")
    for xi in itertools.combinations(range(a.arity), q - 1):
        if not wedge(contract(a, xi), a).is_zero:
            return False
    return True


def frobenius_check(a: PForm) -> bool:
    """Integrability of the distribution cut out by a q-form.

    Requires d(i_Xi a) ∧ a = 0 for every coordinate (q-1)-multivector Xi;
    for q = 1 this is the classical da ∧ a = 0.
    """
    q = a.degree
    if q < 1:
        raise ValueError("integrability is only defined for forms of degree >= 1")
    for xi in itertools.combinations(range(a.arity), q - 1):
        if not wedge(exterior_derivative(contract(a, xi)), a).is_zero:
            return False
    return True
