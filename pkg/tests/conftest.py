"""Shared builders and independent oracles for the test suite."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from starquant.series import SeriesRing


def small_ring(eps=2, y=4, x=4, d=2):
    return SeriesRing(d, eps, y, x)


# -- random generators (seeded by callers for determinism) -------------------


def random_series(rng, ring, *, pure_x=False, min_ydeg=0, max_deg=3, max_terms=4,
                  with_eps=False):
    """A small random Series with integer coefficients in [-3, 3]."""
    d = ring.dim
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        coeff = rng.choice([q for q in range(-3, 4) if q])
        eps = rng.randint(0, min(1, ring.eps_cap)) if with_eps else 0
        if pure_x:
            y = (0,) * d
        else:
            while True:
                y = tuple(rng.randint(0, max_deg) for _ in range(d))
                if min_ydeg <= sum(y) <= min(max_deg, ring.y_cap):
                    break
        x = tuple(0 for _ in range(d))
        if not pure_x and rng.random() < 0.4:
            xi = rng.randrange(d)
            x = tuple(1 if i == xi else 0 for i in range(d))
        if pure_x:
            while True:
                x = tuple(rng.randint(0, max_deg) for _ in range(d))
                if sum(x) <= min(max_deg, ring.x_cap):
                    break
        terms.append((coeff, eps, y, x))
    return ring.from_terms(terms)


def random_xpoly(rng, ring, max_deg=3, max_terms=4):
    return random_series(rng, ring, pure_x=True, max_deg=max_deg, max_terms=max_terms)


# -- hypothesis strategies ----------------------------------------------------


@st.composite
def series_strategy(draw, pure_x=False):
    ring = small_ring()
    n = draw(st.integers(min_value=0, max_value=4))
    terms = []
    for _ in range(n):
        coeff = draw(st.integers(min_value=-4, max_value=4).filter(bool))
        eps = 0 if pure_x else draw(st.integers(min_value=0, max_value=ring.eps_cap))
        if pure_x:
            y = (0, 0)
        else:
            y = draw(
                st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(
                    lambda t: sum(t) <= ring.y_cap
                )
            )
        x = draw(
            st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(
                lambda t: sum(t) <= ring.x_cap
            )
        )
        terms.append((coeff, eps, y, x))
    return ring.from_terms(terms)


# -- independent oracles ------------------------------------------------------


def reference_moyal(f, g, alpha_rows, n_max=None):
    """Moyal product by brute-force multi-index enumeration.

    Independent of the production implementation: iterates over all index
    sequences (i_1..i_n), (j_1..j_n) and applies iterated y-derivatives.
    """
    ring = f.ring
    d = ring.dim
    if n_max is None:
        n_max = ring.eps_cap
    out = f * g
    fact = 1
    for n in range(1, n_max + 1):
        fact *= n
        total = ring.zero()
        for idx_i in itertools.product(range(d), repeat=n):
            for idx_j in itertools.product(range(d), repeat=n):
                coeff = Fraction(1)
                for a, b in zip(idx_i, idx_j):
                    coeff *= Fraction(alpha_rows[a][b])
                    if not coeff:
                        break
                if not coeff:
                    continue
                df = f
                for a in idx_i:
                    df = df.diff_y(a)
                dg = g
                for b in idx_j:
                    dg = dg.diff_y(b)
                total = total + df * dg * coeff
        out = out + ring.eps(n) * total * Fraction(1, fact)
    return out


def poisson_x(f, g, alpha_rows):
    """Bracket sum alpha^{ij} d_{x^i} f d_{x^j} g for a constant rational matrix."""
    ring = f.ring
    out = ring.zero()
    for i in range(ring.dim):
        for j in range(ring.dim):
            q = Fraction(alpha_rows[i][j])
            if q:
                out = out + f.diff_x(i) * g.diff_x(j) * q
    return out


def random_chart(rng, ring, cubic=True, x_linear_gamma=True):
    """A random normalized chart: x + y + quadratic (Christoffel-style) and
    optional cubic jets, with small integer or x-linear coefficients."""
    from starquant.jets import ChartJetFamily

    d = ring.dim
    phi = []
    for j in range(d):
        s = ring.x(j) + ring.y(j)
        for k in range(d):
            for l in range(k, d):
                c = rng.randint(-2, 2)
                if not c:
                    continue
                y = [0] * d
                y[k] += 1
                y[l] += 1
                term = ring.monomial(Fraction(c, 2), y=y)
                if x_linear_gamma and rng.random() < 0.5:
                    term = term * ring.x(rng.randrange(d))
                s = s + term
        if cubic:
            for _ in range(rng.randint(0, 2)):
                y = [0] * d
                for _ in range(3):
                    y[rng.randrange(d)] += 1
                s = s + ring.monomial(rng.randint(-2, 2), y=y)
        phi.append(s)
    return ChartJetFamily(ring, phi)
