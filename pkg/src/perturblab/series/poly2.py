"""Truncated complex polynomials in two variables, and polynomial jets.

Used to represent planar maps near a fixed point: a map is stored as
its first-component series P(z, w); when w is the complex conjugate of
z the second component is recovered by :func:`conjugate_swap`.  The
same class doubles as the coefficient container for jet transport,
where a flow map is integrated as a truncated polynomial in the initial
condition.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

Index = tuple[int, int]


class Poly2:
    """sum of c[a, b] * u^a * v^b truncated at total degree <= order."""

    __slots__ = ("order", "terms")

    def __init__(self, terms: Mapping[Index, complex] | None = None, order: int = 6):
        self.order = int(order)
        self.terms: dict[Index, complex] = {}
        if terms:
            for (a, b), c in terms.items():
                if a < 0 or b < 0:
                    raise ValueError("negative exponent")
                if a + b <= self.order and c != 0:
                    self.terms[(a, b)] = complex(c)

    @classmethod
    def variable(cls, which: int, order: int = 6) -> "Poly2":
        return cls({(1, 0) if which == 0 else (0, 1): 1.0}, order)

    @classmethod
    def constant(cls, value: complex, order: int = 6) -> "Poly2":
        return cls({(0, 0): value}, order)

    def copy(self) -> "Poly2":
        out = Poly2(None, self.order)
        out.terms = dict(self.terms)
        return out

    def coeff(self, a: int, b: int) -> complex:
        return self.terms.get((a, b), 0j)

    def __add__(self, other):
        if isinstance(other, Poly2):
            out = self.copy()
            for key, c in other.terms.items():
                out.terms[key] = out.terms.get(key, 0j) + c
            return out
        out = self.copy()
        out.terms[(0, 0)] = out.terms.get((0, 0), 0j) + complex(other)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly2(None, self.order)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly2) else -complex(other))

    def __rsub__(self, other):
        return (-self) + complex(other)

    def __mul__(self, other):
        if isinstance(other, Poly2):
            cap = min(self.order, other.order)
            out = Poly2(None, cap)
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    a, b = a1 + a2, b1 + b2
                    if a + b > cap:
                        continue
                    key = (a, b)
                    out.terms[key] = out.terms.get(key, 0j) + c1 * c2
            return out
        out = Poly2(None, self.order)
        z = complex(other)
        out.terms = {k: c * z for k, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def prune(self, tol: float = 1e-14) -> "Poly2":
        self.terms = {k: c for k, c in self.terms.items() if abs(c) >= tol}
        return self

    def degree_terms(self, deg: int) -> list[tuple[Index, complex]]:
        out = [(k, c) for k, c in self.terms.items() if k[0] + k[1] == deg]
        out.sort(key=lambda item: item[0])
        return out

    def truncate(self, order: int) -> "Poly2":
        out = Poly2(None, order)
        out.terms = {k: c for k, c in self.terms.items() if k[0] + k[1] <= order}
        return out

    def evaluate(self, u: complex, v: complex) -> complex:
        return sum(c * u ** a * v ** b for (a, b), c in self.terms.items())

    def max_abs_diff(self, other: "Poly2") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0j) - other.terms.get(k, 0j)) for k in keys),
                   default=0.0)

    def __repr__(self):
        return f"Poly2({len(self.terms)} terms, order {self.order})"


def conjugate_swap(p: Poly2) -> Poly2:
    """Series of the conjugate component: conj coefficients, swapped indices.

    Valid when the two variables are complex conjugates of each other,
    so conj(u^a v^b) = u^b v^a.
    """
    out = Poly2(None, p.order)
    out.terms = {(b, a): c.conjugate() for (a, b), c in p.terms.items()}
    return out


def substitute(p: Poly2, q1: Poly2, q2: Poly2) -> Poly2:
    """p(q1, q2) truncated at the common order."""
    cap = min(p.order, q1.order, q2.order)
    max_a = max((a for a, _ in p.terms), default=0)
    max_b = max((b for _, b in p.terms), default=0)
    one = Poly2.constant(1.0, cap)
    pow1 = [one]
    for _ in range(max_a):
        pow1.append(pow1[-1] * q1.truncate(cap))
    pow2 = [one]
    for _ in range(max_b):
        pow2.append(pow2[-1] * q2.truncate(cap))
    out = Poly2(None, cap)
    for (a, b), c in p.terms.items():
        out = out + (pow1[a] * pow2[b]) * c
    return out


def inverse_near_identity(phi: Poly2) -> Poly2:
    """psi with phi(psi, conj psi) = id, for phi = id + higher order."""
    order = phi.order
    ident = Poly2.variable(0, order)
    rest = phi - ident
    psi = ident.copy()
    for _ in range(max(order - 1, 1)):
        psi = ident - substitute(rest, psi, conjugate_swap(psi))
    return psi


def flow_polynomial_jet(rhs: Callable[[Sequence[Poly2], float], Sequence[Poly2]],
                        state0: Sequence[Poly2],
                        t0: float, t1: float, n_steps: int) -> list[Poly2]:
    """Integrate a polynomial jet with classical fourth-order Runge-Kutta.

    The right-hand side receives and returns lists of Poly2, so any rhs
    written with +, -, * works unchanged on jets.
    """
    h = (t1 - t0) / n_steps
    y = [p.copy() for p in state0]
    t = t0
    for _ in range(n_steps):
        k1 = rhs(y, t)
        k2 = rhs([yi + ki * (0.5 * h) for yi, ki in zip(y, k1)], t + 0.5 * h)
        k3 = rhs([yi + ki * (0.5 * h) for yi, ki in zip(y, k2)], t + 0.5 * h)
        k4 = rhs([yi + ki * h for yi, ki in zip(y, k3)], t + h)
        y = [yi + (a + 2.0 * b + 2.0 * c + d) * (h / 6.0)
             for yi, a, b, c, d in zip(y, k1, k2, k3, k4)]
        t += h
    return y
