"""Truncated formal power series over the exact rationals.

Elements live in Q[x^1..x^d][[y^1..y^d, eps]] with three truncation caps:
``eps_cap`` and ``y_cap`` truncate silently (the series are formal in eps
and y), while ``x_cap`` is a hard error bound (x-dependence is an honest
polynomial and may never be chopped).

Besides the caps every :class:`Series` carries a *working precision*
``(eps_valid, y_valid)``: all stored coefficients with eps-power at most
``eps_valid`` and y-degree at most ``y_valid`` are exact coefficients of
the ideal untruncated object, and nothing outside that window is stored.
A value of ``INF`` on an axis means the object is known exactly there
(e.g. an honest polynomial).  Operations combine and decay these windows
conservatively, so ``(a - b).is_zero()`` always means "a equals b on the
common guaranteed window".
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InputError, VerificationError

INF = math.inf


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InputError(f"coefficients must be exact rationals, got {type(value).__name__}")


class SeriesRing:
    """Shared dimension and truncation caps for a family of Series.

    Two rings compare equal iff they have the same dimension and caps;
    all binary operations require operands from equal rings.
    """

    __slots__ = ("dim", "eps_cap", "y_cap", "x_cap", "_zero_exp")

    def __init__(self, dim, eps_cap, y_cap, x_cap):
        if not isinstance(dim, int) or dim < 1:
            raise InputError(f"dimension must be a positive integer, got {dim!r}")
        for name, cap in (("eps_cap", eps_cap), ("y_cap", y_cap), ("x_cap", x_cap)):
            if not isinstance(cap, int) or cap < 0:
                raise InputError(f"{name} must be a nonnegative integer, got {cap!r}")
        self.dim = dim
        self.eps_cap = eps_cap
        self.y_cap = y_cap
        self.x_cap = x_cap
        self._zero_exp = (0,) * dim

    def __eq__(self, other):
        return (
            isinstance(other, SeriesRing)
            and self.dim == other.dim
            and self.eps_cap == other.eps_cap
            and self.y_cap == other.y_cap
            and self.x_cap == other.x_cap
        )

    def __hash__(self):
        return hash((self.dim, self.eps_cap, self.y_cap, self.x_cap))

    def __repr__(self):
        return (
            f"SeriesRing(dim={self.dim}, eps_cap={self.eps_cap}, "
            f"y_cap={self.y_cap}, x_cap={self.x_cap})"
        )

    def with_caps(self, eps_cap=None, y_cap=None, x_cap=None):
        """A ring with the same dimension and selectively enlarged caps."""
        return SeriesRing(
            self.dim,
            self.eps_cap if eps_cap is None else eps_cap,
            self.y_cap if y_cap is None else y_cap,
            self.x_cap if x_cap is None else x_cap,
        )

    # -- constructors -------------------------------------------------

    def zero(self):
        return Series(self, {}, INF, INF)

    def const(self, value):
        c = _as_fraction(value)
        if c == 0:
            return self.zero()
        return Series(self, {(0, self._zero_exp, self._zero_exp): c}, INF, INF)

    def one(self):
        return self.const(1)

    def monomial(self, coeff, eps=0, y=None, x=None):
        """Single term coeff * eps^a * y^b * x^c (exponent tuples, 0-based)."""
        y = self._zero_exp if y is None else tuple(y)
        x = self._zero_exp if x is None else tuple(x)
        return self.from_terms([(coeff, eps, y, x)])

    def eps(self, power=1):
        return self.monomial(1, eps=power)

    def y(self, i, power=1):
        exp = [0] * self.dim
        exp[i] = power
        return self.monomial(1, y=exp)

    def x(self, i, power=1):
        exp = [0] * self.dim
        exp[i] = power
        return self.monomial(1, x=exp)

    def from_terms(self, terms):
        """Build a Series from (coeff, eps, y_exps, x_exps) tuples.

        Construction is strict: keys violating the caps raise rather than
        truncate, so data files cannot silently lose content.
        """
        acc = {}
        for coeff, eps, y, x in terms:
            c = _as_fraction(coeff)
            y = tuple(y)
            x = tuple(x)
            if len(y) != self.dim or len(x) != self.dim:
                raise InputError(
                    f"exponent vectors must have length {self.dim}, got {y!r}, {x!r}"
                )
            if not isinstance(eps, int) or eps < 0:
                raise InputError(f"eps power must be a nonnegative integer, got {eps!r}")
            if any(e < 0 or not isinstance(e, int) for e in y + x):
                raise InputError(f"exponents must be nonnegative integers: {y!r}, {x!r}")
            if eps > self.eps_cap:
                raise InputError(f"eps power {eps} exceeds cap {self.eps_cap}")
            if sum(y) > self.y_cap:
                raise InputError(f"y-degree {sum(y)} exceeds cap {self.y_cap}")
            if sum(x) > self.x_cap:
                raise InputError(f"x-degree {sum(x)} exceeds cap {self.x_cap}")
            key = (eps, y, x)
            c = acc.get(key, Fraction(0)) + c
            if c:
                acc[key] = c
            elif key in acc:
                del acc[key]
        return Series(self, acc, INF, INF)

    def from_payload(self, rows, eps_valid=INF, y_valid=INF):
        """Inverse of :meth:`Series.to_payload`."""
        terms = []
        for row in rows:
            num, den, eps, y, x = row
            terms.append((Fraction(num, den), eps, tuple(y), tuple(x)))
        s = self.from_terms(terms)
        return s.truncate(eps_valid, y_valid)


def _term_sort_key(key):
    eps, y, x = key
    return (eps, sum(y), y, sum(x), x)


class Series:
    """Immutable sparse series element of a :class:`SeriesRing`.

    ``terms`` maps ``(eps_power, y_exponents, x_exponents)`` to a nonzero
    Fraction.  Do not mutate; all operations return fresh objects.
    """

    __slots__ = ("ring", "terms", "eps_valid", "y_valid")

    def __init__(self, ring, terms, eps_valid, y_valid):
        self.ring = ring
        self.terms = terms
        self.eps_valid = eps_valid
        self.y_valid = y_valid

    # -- bookkeeping helpers ------------------------------------------

    @staticmethod
    def _build(ring, raw_terms, eps_valid, y_valid):
        """Normalize raw term data: drop zeros, truncate to caps and to the
        validity window, clamping validity when nonzero content crosses a cap."""
        ev, yv = eps_valid, y_valid
        kept = {}
        clamp_e = clamp_y = False
        for key, c in raw_terms.items():
            if not c:
                continue
            eps, y, x = key
            if sum(x) > ring.x_cap:
                raise InputError(
                    f"x-degree {sum(x)} exceeds cap {ring.x_cap}; "
                    "x-truncation would be wrong, raise the x cap"
                )
            if eps > ring.eps_cap:
                clamp_e = True
                continue
            if sum(y) > ring.y_cap:
                clamp_y = True
                continue
            kept[key] = c
        if clamp_e:
            ev = min(ev, ring.eps_cap)
        if clamp_y:
            yv = min(yv, ring.y_cap)
        if ev < INF or yv < INF:
            kept = {
                k: c for k, c in kept.items() if k[0] <= ev and sum(k[1]) <= yv
            }
        return Series(ring, kept, ev, yv)

    def _require_same_ring(self, other):
        if self.ring != other.ring:
            raise InputError("series from different rings (dimension or caps mismatch)")

    @property
    def is_exact_zero(self):
        return not self.terms and self.eps_valid == INF and self.y_valid == INF

    def is_zero(self):
        """True iff the series vanishes on its guaranteed window."""
        return not self.terms

    def _stored_mins(self):
        """Minimal (eps, y) orders of the stored content, INF when empty."""
        if not self.terms:
            return INF, INF
        return min(k[0] for k in self.terms), min(sum(k[1]) for k in self.terms)

    def min_eps_order(self):
        """Lowest eps power with a stored coefficient, or None if none."""
        if not self.terms:
            return None
        return min(k[0] for k in self.terms)

    def max_y_degree(self):
        if not self.terms:
            return 0
        return max(sum(k[1]) for k in self.terms)

    def truncate(self, eps_valid=None, y_valid=None):
        """Shrink the validity window (and drop the newly unreliable terms)."""
        ev = self.eps_valid if eps_valid is None else min(self.eps_valid, eps_valid)
        yv = self.y_valid if y_valid is None else min(self.y_valid, y_valid)
        if ev == self.eps_valid and yv == self.y_valid:
            return self
        kept = {k: c for k, c in self.terms.items() if k[0] <= ev and sum(k[1]) <= yv}
        return Series(self.ring, kept, ev, yv)

    # -- ring operations ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __neg__(self):
        return Series(
            self.ring,
            {k: -c for k, c in self.terms.items()},
            self.eps_valid,
            self.y_valid,
        )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._require_same_ring(other)
        merged = dict(self.terms)
        for k, c in other.terms.items():
            s = merged.get(k)
            if s is None:
                merged[k] = c
            else:
                s = s + c
                if s:
                    merged[k] = s
                else:
                    del merged[k]
        return Series._build(
            self.ring,
            merged,
            min(self.eps_valid, other.eps_valid),
            min(self.y_valid, other.y_valid),
        )

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def _scaled(self, q):
        q = _as_fraction(q)
        if q == 0:
            return self.ring.zero()
        return Series(
            self.ring,
            {k: c * q for k, c in self.terms.items()},
            self.eps_valid,
            self.y_valid,
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scaled(other)
        if not isinstance(other, Series):
            return NotImplemented
        self._require_same_ring(other)
        if self.is_exact_zero or other.is_exact_zero:
            return self.ring.zero()
        ring = self.ring
        # Window of the product: a coefficient is exact unless an unknown tail
        # of one factor, paired with possible content of the other, can reach
        # it.  Stored minima bound the known content; window edges bound the
        # tails; the cross terms cover tail-times-tail on mixed axes.
        ea, ya = self.eps_valid, self.y_valid
        eb, yb = other.eps_valid, other.y_valid
        sa_e, sa_y = self._stored_mins()
        sb_e, sb_y = other._stored_mins()
        ev = min(ea + sb_e, eb + sa_e, ea + eb + 1)
        yv = min(ya + sb_y, yb + sa_y, ya + yb + 1)
        if ea < INF and yb < INF and ev > ea and yv > yb:
            yv = yb
        if eb < INF and ya < INF and ev > eb and yv > ya:
            yv = ya
        lim_e = min(ring.eps_cap, ev)
        lim_y = min(ring.y_cap, yv)
        items_a = [(k[0], k[1], k[2], sum(k[1]), c) for k, c in self.terms.items()]
        items_b = [(k[0], k[1], k[2], sum(k[1]), c) for k, c in other.terms.items()]
        acc = {}
        clamp_e = clamp_y = False
        for e1, y1, x1, yd1, c1 in items_a:
            for e2, y2, x2, yd2, c2 in items_b:
                e = e1 + e2
                if e > lim_e:
                    if e > ring.eps_cap:
                        clamp_e = True
                    continue
                if yd1 + yd2 > lim_y:
                    if yd1 + yd2 > ring.y_cap:
                        clamp_y = True
                    continue
                x = tuple(a + b for a, b in zip(x1, x2))
                if sum(x) > ring.x_cap:
                    raise InputError(
                        f"x-degree {sum(x)} exceeds cap {ring.x_cap}; "
                        "x-truncation would be wrong, raise the x cap"
                    )
                key = (e, tuple(a + b for a, b in zip(y1, y2)), x)
                s = acc.get(key)
                prod = c1 * c2
                if s is None:
                    acc[key] = prod
                else:
                    s = s + prod
                    if s:
                        acc[key] = s
                    else:
                        del acc[key]
        if clamp_e:
            ev = min(ev, ring.eps_cap)
        if clamp_y:
            yv = min(yv, ring.y_cap)
        return Series(ring, acc, ev, yv)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InputError(f"exponent must be a nonnegative integer, got {n!r}")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base2 = base if n <= 1 else base * base
            base = base2
            n >>= 1
        return result

    # -- calculus ------------------------------------------------------

    def diff_x(self, i):
        """Formal partial derivative with respect to x^i (exact)."""
        self._check_index(i)
        out = {}
        for (eps, y, x), c in self.terms.items():
            k = x[i]
            if k:
                x2 = x[:i] + (k - 1,) + x[i + 1 :]
                key = (eps, y, x2)
                out[key] = out.get(key, Fraction(0)) + c * k
        return Series._build(self.ring, out, self.eps_valid, self.y_valid)

    def diff_y(self, i):
        """Formal partial derivative with respect to y^i.

        Loses one order of y working precision: the result is exact only up
        to y-degree ``y_valid - 1``.
        """
        self._check_index(i)
        out = {}
        for (eps, y, x), c in self.terms.items():
            k = y[i]
            if k:
                y2 = y[:i] + (k - 1,) + y[i + 1 :]
                key = (eps, y2, x)
                out[key] = out.get(key, Fraction(0)) + c * k
        yv = self.y_valid - 1 if self.y_valid < INF else INF
        return Series._build(self.ring, out, self.eps_valid, yv)

    def eval_y0(self):
        """Set y = 0: keep only y-free terms.  Exact in y afterwards."""
        if self.y_valid < 0:
            raise InputError("y working precision exhausted; increase the y cap")
        out = {k: c for k, c in self.terms.items() if not any(k[1])}
        return Series(self.ring, out, self.eps_valid, INF)

    def divide_by_eps(self, k=1):
        """Divide by eps^k; every stored term must carry at least eps^k.

        A failure means a cancellation the construction guarantees did not
        happen, so it is reported as a verification error.  The eps working
        precision drops by k.
        """
        if not isinstance(k, int) or k < 1:
            raise InputError(f"eps division order must be a positive integer, got {k!r}")
        out = {}
        for (eps, y, x), c in self.terms.items():
            if eps < k:
                raise VerificationError(
                    f"series not divisible by eps^{k}: term at eps^{eps}, "
                    f"y{tuple(y)}, x{tuple(x)} has coefficient {c}"
                )
            out[(eps - k, y, x)] = c
        ev = self.eps_valid - k if self.eps_valid < INF else INF
        return Series(self.ring, out, ev, self.y_valid)

    def eps_coefficient(self, j):
        """The coefficient of eps^j as an eps-free Series (exact in eps)."""
        if not isinstance(j, int) or j < 0:
            raise InputError(f"eps order must be a nonnegative integer, got {j!r}")
        if j > self.eps_valid:
            raise InputError(
                f"eps^{j} coefficient lies outside the working window "
                f"(valid to eps^{self.eps_valid}); increase the eps cap"
            )
        out = {(0, y, x): c for (eps, y, x), c in self.terms.items() if eps == j}
        return Series(self.ring, out, INF, self.y_valid)

    def map_coeff_by_ydeg(self, fn):
        """Scale each term's coefficient by a function of its y-degree."""
        out = {}
        for key, c in self.terms.items():
            c2 = c * fn(sum(key[1]))
            if c2:
                out[key] = c2
        return Series(self.ring, out, self.eps_valid, self.y_valid)

    def _check_index(self, i):
        if not isinstance(i, int) or not 0 <= i < self.ring.dim:
            raise InputError(f"variable index {i!r} out of range for dimension {self.ring.dim}")

    # -- substitution ---------------------------------------------------

    def compose_x(self, images, allow_eps=False):
        """Substitute x^i -> images[i] into an x-polynomial.

        The receiver must be free of y (and of eps unless ``allow_eps``);
        the images are arbitrary Series of the same ring.
        """
        ring = self.ring
        if len(images) != ring.dim:
            raise InputError(f"expected {ring.dim} substitution images, got {len(images)}")
        for img in images:
            self._require_same_ring(img)
        power_cache = [dict() for _ in range(ring.dim)]

        def img_power(i, k):
            cache = power_cache[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        out = ring.zero()
        for (eps, y, x), c in self.terms.items():
            if any(y):
                raise InputError("substitution source must not depend on y")
            if eps and not allow_eps:
                raise InputError("substitution source must not depend on eps")
            term = ring.monomial(c, eps=eps)
            for i, k in enumerate(x):
                if k:
                    term = term * img_power(i, k)
            out = out + term
        # An unknown tail of the source (outside its window) would feed the
        # composition too, so the result inherits the source's window.
        return out.truncate(self.eps_valid, self.y_valid)

    def subs_y_linear(self, matrix):
        """Substitute y^i -> sum_j matrix[i][j] * y^j (exact rational matrix)."""
        ring = self.ring
        if len(matrix) != ring.dim or any(len(row) != ring.dim for row in matrix):
            raise InputError("linear substitution matrix must be d x d")
        forms = []
        for i in range(ring.dim):
            f = ring.zero()
            for j, q in enumerate(matrix[i]):
                q = _as_fraction(q)
                if q:
                    f = f + ring.y(j) * q
            forms.append(f)
        cache = [dict() for _ in range(ring.dim)]

        def form_power(i, k):
            c = cache[i]
            if k not in c:
                c[k] = forms[i] ** k
            return c[k]

        out = ring.zero()
        for (eps, y, x), c in self.terms.items():
            term = ring.monomial(c, eps=eps, x=x)
            for i, k in enumerate(y):
                if k:
                    term = term * form_power(i, k)
            out = out + term
        return out.truncate(self.eps_valid, self.y_valid)

    # -- presentation ----------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def _term_text(self, key, coeff, with_sign):
        eps, y, x = key
        factors = []
        if eps:
            factors.append("eps" if eps == 1 else f"eps^{eps}")
        for i, k in enumerate(y):
            if k:
                factors.append(f"y{i + 1}" if k == 1 else f"y{i + 1}^{k}")
        for i, k in enumerate(x):
            if k:
                factors.append(f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}")
        mag = -coeff if (with_sign and coeff < 0) else coeff
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = " * ".join(factors)
        else:
            body = " * ".join([str(mag)] + factors)
        return body, coeff < 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (key, coeff) in enumerate(self.sorted_terms()):
            body, negative = self._term_text(key, coeff, with_sign=idx > 0)
            if idx == 0:
                parts.append(body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Series({self})"

    def to_payload(self):
        """Canonical structured form: sorted [num, den, eps, y, x] rows."""
        rows = []
        for (eps, y, x), c in self.sorted_terms():
            rows.append([c.numerator, c.denominator, eps, list(y), list(x)])
        return rows


class SeriesMatrix:
    """Square matrix of Series sharing one ring."""

    __slots__ = ("ring", "n", "rows")

    def __init__(self, ring, rows):
        self.ring = ring
        self.n = len(rows)
        for row in rows:
            if len(row) != self.n:
                raise InputError("matrix must be square")
            for entry in row:
                if entry.ring != ring:
                    raise InputError("matrix entries must share one ring")
        self.rows = [list(row) for row in rows]

    @classmethod
    def identity(cls, ring, n):
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        return SeriesMatrix(
            self.ring,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        return SeriesMatrix(
            self.ring,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            n = self.n
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    s = self.ring.zero()
                    for k in range(n):
                        s = s + self.rows[i][k] * other.rows[k][j]
                    row.append(s)
                out.append(row)
            return SeriesMatrix(self.ring, out)
        return SeriesMatrix(self.ring, [[a * other for a in row] for row in self.rows])

    def is_zero(self):
        return all(entry.is_zero() for row in self.rows for entry in row)

    def transpose(self):
        return SeriesMatrix(
            self.ring, [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    def inverse_unit(self):
        """Invert a matrix whose constant part (y = 0, eps = 0) is the identity.

        Uses the geometric series in N = I - J, which terminates under the
        caps because every entry of N has positive (y, eps)-order.
        """
        ring = self.ring
        n = self.n
        for i in range(n):
            for j in range(n):
                low = {
                    k: c
                    for k, c in self.rows[i][j].terms.items()
                    if k[0] == 0 and not any(k[1])
                }
                expect = {(0, ring._zero_exp, ring._zero_exp): Fraction(1)} if i == j else {}
                if low != expect:
                    raise InputError(
                        "matrix inverse needs unit constant part: entry "
                        f"({i}, {j}) has (y=0, eps=0) part not equal to "
                        f"{'1' if i == j else '0'}"
                    )
        ident = SeriesMatrix.identity(ring, n)
        nilp = ident - self
        acc = ident
        power = nilp
        steps = 0
        limit = ring.y_cap + 2 * ring.eps_cap + 2
        while not power.is_zero():
            acc = acc + power
            power = power * nilp
            steps += 1
            if steps > limit:
                raise InputError(
                    "geometric inverse did not terminate: matrix is not "
                    "unit-plus-positive-order"
                )
        return acc
