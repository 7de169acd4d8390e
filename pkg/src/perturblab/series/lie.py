"""Triangular recursion for canonical transformations generated by a series.

Coefficients are factorial-scaled: a Hamiltonian enters as the column
H_n with H(eps) = sum_n eps^n / n! * H_n, the generator as W_m, and the
transformed Hamiltonian leaves as K_n in the same scaling.  The table
entry T[k][n] obeys

    T[k][n] = T[k-1][n+1] + sum_{m=0}^{n} binom(n, m) {T[k-1][n-m], W_m}

with the input column in row k = 0 and the output along T[n][0].

The recursion is linear in the input column for a fixed generator, which
is what makes the inverse a triangular solve (see
:func:`lie_triangle_invert`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .fourier_taylor import FourierTaylorSeries, poisson_bracket


@dataclass
class LieTriangle:
    """Full table of the triangular recursion."""

    input_column: list[FourierTaylorSeries]
    generators: list[FourierTaylorSeries]
    order: int
    table: dict[tuple[int, int], FourierTaylorSeries] = field(repr=False)

    @property
    def output(self) -> list[FourierTaylorSeries]:
        return [self.table[(n, 0)] for n in range(self.order + 1)]

    def polynomial_coefficients(self) -> list[FourierTaylorSeries]:
        """Output rescaled to plain powers: K(eps) = sum eps^n * c_n."""
        out = []
        for n, f in enumerate(self.output):
            if f.exact:
                out.append(f.scale(Fraction(1, math.factorial(n))))
            else:
                out.append(f.scale(1.0 / math.factorial(n)))
        return out


def _pad_generators(w, order, template):
    gens = list(w)
    while len(gens) < order:
        gens.append(template.zero_like())
    return gens


def lie_triangle_transform(h: list[FourierTaylorSeries],
                           w: list[FourierTaylorSeries],
                           order: int | None = None) -> LieTriangle:
    """Run the triangle on input column h with generator column w.

    h[n] is the factorial-scaled coefficient of eps^n in the input;
    w[m] likewise for the generator.  Missing generators are treated as
    zero.  Returns the full table; the transformed coefficients are
    triangle.output.
    """
    if not h:
        raise ValueError("input column is empty")
    if order is None:
        order = len(h) - 1
    template = h[0]
    column = [h[n] if n < len(h) else template.zero_like() for n in range(order + 1)]
    gens = _pad_generators(w, order, template)

    table: dict[tuple[int, int], FourierTaylorSeries] = {}
    for n in range(order + 1):
        table[(0, n)] = column[n]
    for k in range(1, order + 1):
        for n in range(order + 1 - k):
            acc = table[(k - 1, n + 1)]
            for m in range(n + 1):
                br = poisson_bracket(table[(k - 1, n - m)], gens[m])
                c = math.comb(n, m)
                acc = acc + (br if c == 1 else br.scale(c))
            table[(k, n)] = acc
    return LieTriangle(input_column=column, generators=gens, order=order, table=table)


def lie_triangle_invert(k: list[FourierTaylorSeries],
                        w: list[FourierTaylorSeries],
                        order: int | None = None) -> list[FourierTaylorSeries]:
    """Recover the input column that the triangle would map to k.

    Uses linearity of the triangle in its input column: the unknown
    coefficient at order n enters the order-n output with coefficient
    one, so each order is a single subtraction once the lower ones are
    known.
    """
    if order is None:
        order = len(k) - 1
    h = [k[0]]
    zero = k[0].zero_like()
    for n in range(1, order + 1):
        trial = h + [zero]
        produced = lie_triangle_transform(trial, w, order=n).output[n]
        target = k[n] if n < len(k) else zero
        h.append(target - produced)
    return h
