"""Differential forms on the chart with Series coefficients.

A form of degree p stores its components on strictly increasing index
tuples (0-based dx indices); an absent tuple means zero.  The same
structure serves the commutative, Moyal, and first-order fiber products:
the product is passed to :func:`wedge` as a callable ``(Series, Series)
-> Series`` (``None`` means the plain commutative product).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .series import INF, Series

def _merge_indices(left, right):
    """Merge disjoint sorted tuples; return (merged, sign) or None if they
    overlap.  The sign is the parity of the shuffle sorting left+right."""
    overlap = set(left) & set(right)
    if overlap:
        return None
    inversions = 0
    for a in left:
        for b in right:
            if a > b:
                inversions += 1
    merged = tuple(sorted(left + right))
    return merged, (-1) ** inversions


class EForm:
    """Homogeneous differential form with Series components."""

    __slots__ = ("ring", "degree", "comps")

    def __init__(self, ring, degree, comps):
        if not isinstance(degree, int) or degree < 0:
            raise InputError(f"form degree must be a nonnegative integer, got {degree!r}")
        clean = {}
        for idx, series in comps.items():
            idx = tuple(idx)
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise InputError(f"component index {idx!r} is not strictly increasing of length {degree}")
            if any(i < 0 or i >= ring.dim for i in idx):
                raise InputError(f"component index {idx!r} out of range for dimension {ring.dim}")
            if series.ring != ring:
                raise InputError("form components must share the form's ring")
            if series.terms or series.eps_valid < INF or series.y_valid < INF:
                clean[idx] = series
        self.ring = ring
        self.degree = degree
        self.comps = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring, degree=0):
        return cls(ring, degree, {})

    @classmethod
    def from_series(cls, series):
        return cls(series.ring, 0, {(): series})

    @classmethod
    def one_form(cls, ring, components):
        if len(components) != ring.dim:
            raise InputError(f"expected {ring.dim} one-form components")
        return cls(ring, 1, {(j,): s for j, s in enumerate(components)})

    @classmethod
    def two_form(cls, ring, matrix):
        """Build from an antisymmetric d x d matrix of Series."""
        d = ring.dim
        comps = {}
        for i in range(d):
            for j in range(d):
                if not (matrix[i][j] + matrix[j][i]).is_zero():
                    raise InputError("two-form matrix must be antisymmetric")
                if i < j:
                    comps[(i, j)] = matrix[i][j]
        return cls(ring, 2, comps)

    # -- access ----------------------------------------------------------

    def component(self, idx):
        return self.comps.get(tuple(idx), self.ring.zero())

    def as_series(self):
        if self.degree != 0:
            raise InputError("only 0-forms convert to a plain Series")
        return self.comps.get((), self.ring.zero())

    def is_zero(self):
        return all(s.is_zero() for s in self.comps.values())

    @property
    def eps_valid(self):
        return min((s.eps_valid for s in self.comps.values()), default=INF)

    @property
    def y_valid(self):
        return min((s.y_valid for s in self.comps.values()), default=INF)

    def min_bidegree(self):
        """Lowest (eps-order, total degree) over stored coefficients, for
        localizing residuals; None if the form vanishes on its window."""
        best = None
        for idx, s in self.comps.items():
            for (eps, y, _x) in s.terms:
                cand = (eps, len(idx) + sum(y))
                if best is None or cand < best:
                    best = cand
        return best

    def min_eps_order(self):
        orders = [s.min_eps_order() for s in self.comps.values()]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    # -- linear structure --------------------------------------------------

    def _same_shape(self, other):
        if self.ring != other.ring or self.degree != other.degree:
            raise InputError("form degree or ring mismatch")

    def __eq__(self, other):
        if not isinstance(other, EForm):
            return NotImplemented
        if self.ring != other.ring or self.degree != other.degree:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(self.component(k) == other.component(k) for k in keys)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __add__(self, other):
        self._same_shape(other)
        out = dict(self.comps)
        for idx, s in other.comps.items():
            out[idx] = out[idx] + s if idx in out else s
        return EForm(self.ring, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return EForm(self.ring, self.degree, {k: -s for k, s in self.comps.items()})

    def scale(self, q):
        q = Fraction(q)
        return EForm(self.ring, self.degree, {k: s * q for k, s in self.comps.items()})

    def scale_series(self, series):
        """Multiply every component by a fixed Series factor."""
        return EForm(self.ring, self.degree, {k: s * series for k, s in self.comps.items()})

    def map_components(self, fn):
        return EForm(self.ring, self.degree, {k: fn(s) for k, s in self.comps.items()})

    def eps_coefficient(self, j):
        return self.map_components(lambda s: s.eps_coefficient(j))

    def divide_by_eps(self, k=1):
        return self.map_components(lambda s: s.divide_by_eps(k))

    def truncate(self, eps_valid=None, y_valid=None):
        return self.map_components(lambda s: s.truncate(eps_valid, y_valid))

    # -- exterior algebra ----------------------------------------------------

    def contract_x(self, i):
        """Inner multiplication by the i-th coordinate direction."""
        if self.degree == 0:
            return EForm.zero(self.ring, 0)
        out = {}
        for idx, s in self.comps.items():
            if i in idx:
                pos = idx.index(i)
                rest = idx[:pos] + idx[pos + 1 :]
                val = s if pos % 2 == 0 else -s
                out[rest] = out[rest] + val if rest in out else val
        return EForm(self.ring, self.degree - 1, out)

    def apply_ops(self, ops):
        """The degree-raising derivation sum_j dx^j wedge (ops[j] applied
        componentwise); d_x is the special case ops[j] = d/dx^j."""
        if len(ops) != self.ring.dim:
            raise InputError(f"expected {self.ring.dim} coefficient operators")
        out = {}
        for idx, s in self.comps.items():
            for j, op in enumerate(ops):
                if j in idx:
                    continue
                val = op(s)
                if val.is_zero() and val.is_exact_zero:
                    continue
                sign = (-1) ** sum(1 for i in idx if i < j)
                merged = tuple(sorted(idx + (j,)))
                val = val if sign > 0 else -val
                out[merged] = out[merged] + val if merged in out else val
        return EForm(self.ring, self.degree + 1, out)

    def d_x(self):
        """Exterior derivative in the base variables only."""
        return self.apply_ops([lambda s, j=j: s.diff_x(j) for j in range(self.ring.dim)])

    def __str__(self):
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps):
            body = str(self.comps[idx])
            if idx:
                dx = "^".join(f"dx{i + 1}" for i in idx)
                body = f"({body}) {dx}" if " " in body else f"{body} {dx}"
            parts.append(body)
        return " + ".join(parts)

    def __repr__(self):
        return f"EForm(degree={self.degree}, {self})"

    def to_payload(self):
        return {
            "+".join(str(i + 1) for i in idx): self.comps[idx].to_payload()
            for idx in sorted(self.comps)
            if not self.comps[idx].is_zero()
        }


def wedge(a, b, product=None):
    """Wedge product with the given fiber product on coefficients.

    ``product`` is a callable (Series, Series) -> Series; None means the
    commutative series product.
    """
    if a.ring != b.ring:
        raise InputError("wedge operands must share a ring")
    deg = a.degree + b.degree
    out = {}
    for idx_a, s in a.comps.items():
        for idx_b, t in b.comps.items():
            merged = _merge_indices(idx_a, idx_b)
            if merged is None:
                continue
            key, sign = merged
            val = product(s, t) if product is not None else s * t
            if sign < 0:
                val = -val
            out[key] = out[key] + val if key in out else val
    return EForm(a.ring, deg, out)


def graded_commutator(a, b, product=None):
    """[a, b] = a wedge b - (-1)^{pq} b wedge a with the fiber product."""
    left = wedge(a, b, product)
    right = wedge(b, a, product)
    if (a.degree * b.degree) % 2:
        return left + right
    return left - right
