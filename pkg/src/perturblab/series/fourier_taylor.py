"""Trigonometric polynomials in angles with polynomial action dependence.

A series is a finite sum of terms

    c[k, m] * exp(i k . phi) * I^m

indexed by an integer Fourier multi-index k (one entry per angle) and a
non-negative power multi-index m (one entry per action).  Coefficients
are either python complex numbers or exact :class:`RationalComplex`
values; the two modes share all the algebra, and exact mode keeps
identities checkable without tolerances.

Real-valued series satisfy c[-k, m] == conj(c[k, m]).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Mapping

from ._rational import RationalComplex

DEFAULT_TRUNCATION = 10
PRUNE_TOL = 1e-14

Key = tuple[tuple[int, ...], tuple[int, ...]]


def _coeff_is_small(c, tol: float) -> bool:
    if isinstance(c, RationalComplex):
        return c.is_zero()
    return abs(c) < tol


def _conj(c):
    if isinstance(c, RationalComplex):
        return c.conjugate()
    return c.conjugate() if isinstance(c, complex) else complex(c).conjugate()


class FourierTaylorSeries:
    """Finite Fourier-Taylor series in (angles, actions)."""

    __slots__ = ("n_angles", "n_actions", "truncation_order", "terms", "exact")

    def __init__(
        self,
        n_angles: int,
        n_actions: int,
        terms: Mapping[Key, object] | None = None,
        truncation_order: int = DEFAULT_TRUNCATION,
        exact: bool = False,
    ):
        self.n_angles = int(n_angles)
        self.n_actions = int(n_actions)
        self.truncation_order = int(truncation_order)
        self.exact = bool(exact)
        self.terms: dict[Key, object] = {}
        if terms:
            for (k, m), c in terms.items():
                self._set(tuple(k), tuple(m), self._coerce_coeff(c))

    # ------------------------------------------------------------------
    # construction helpers

    def _coerce_coeff(self, c):
        if self.exact:
            return RationalComplex.coerce(c)
        if isinstance(c, RationalComplex):
            return c.to_complex()
        return complex(c)

    def _set(self, k: tuple[int, ...], m: tuple[int, ...], c) -> None:
        if len(k) != self.n_angles or len(m) != self.n_actions:
            raise ValueError("multi-index length does not match variable counts")
        if any(mi < 0 for mi in m):
            raise ValueError("action powers must be non-negative")
        if sum(m) > self.truncation_order:
            return
        if _coeff_is_small(c, PRUNE_TOL):
            self.terms.pop((k, m), None)
        else:
            self.terms[(k, m)] = c

    @classmethod
    def zero(cls, n_angles: int, n_actions: int, truncation_order: int = DEFAULT_TRUNCATION,
             exact: bool = False) -> "FourierTaylorSeries":
        return cls(n_angles, n_actions, {}, truncation_order, exact)

    @classmethod
    def constant(cls, value, n_angles: int, n_actions: int,
                 truncation_order: int = DEFAULT_TRUNCATION, exact: bool = False):
        k = (0,) * n_angles
        m = (0,) * n_actions
        return cls(n_angles, n_actions, {(k, m): value}, truncation_order, exact)

    def zero_like(self) -> "FourierTaylorSeries":
        return FourierTaylorSeries(self.n_angles, self.n_actions, {},
                                   self.truncation_order, self.exact)

    def copy(self) -> "FourierTaylorSeries":
        out = self.zero_like()
        out.terms = dict(self.terms)
        return out

    # ------------------------------------------------------------------
    # mode handling

    def to_float(self) -> "FourierTaylorSeries":
        if not self.exact:
            return self.copy()
        out = FourierTaylorSeries(self.n_angles, self.n_actions, {},
                                  self.truncation_order, exact=False)
        for key, c in self.terms.items():
            out.terms[key] = c.to_complex()
        return out

    @staticmethod
    def _common(a: "FourierTaylorSeries", b: "FourierTaylorSeries"):
        if a.n_angles != b.n_angles or a.n_actions != b.n_actions:
            raise ValueError("series are defined over different variables")
        if a.exact and b.exact:
            return a, b
        return a.to_float(), b.to_float()

    # ------------------------------------------------------------------
    # algebra

    def __add__(self, other):
        if not isinstance(other, FourierTaylorSeries):
            return NotImplemented
        a, b = self._common(self, other)
        out = FourierTaylorSeries(a.n_angles, a.n_actions, {},
                                  min(a.truncation_order, b.truncation_order), a.exact)
        for key, c in a.terms.items():
            out._set(key[0], key[1], c)
        for key, c in b.terms.items():
            prev = out.terms.get(key)
            out._set(key[0], key[1], c if prev is None else prev + c)
        return out

    def __sub__(self, other):
        if not isinstance(other, FourierTaylorSeries):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = self.zero_like()
        for key, c in self.terms.items():
            out.terms[key] = -c
        return out

    def scale(self, scalar) -> "FourierTaylorSeries":
        if self.exact and isinstance(scalar, (float, complex)):
            return self.to_float().scale(scalar)
        out = self.zero_like()
        if not self.exact:
            scalar = complex(scalar) if not isinstance(scalar, RationalComplex) \
                else scalar.to_complex()
        for key, c in self.terms.items():
            out._set(key[0], key[1], c * scalar)
        return out

    def __mul__(self, other):
        if isinstance(other, FourierTaylorSeries):
            a, b = self._common(self, other)
            cap = min(a.truncation_order, b.truncation_order)
            out = FourierTaylorSeries(a.n_angles, a.n_actions, {}, cap, a.exact)
            for (k1, m1), c1 in a.terms.items():
                for (k2, m2), c2 in b.terms.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    if sum(m) > cap:
                        continue
                    k = tuple(x + y for x, y in zip(k1, k2))
                    prev = out.terms.get((k, m))
                    c = c1 * c2
                    out.terms[(k, m)] = c if prev is None else prev + c
            out.prune()
            return out
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def prune(self, tol: float = PRUNE_TOL) -> "FourierTaylorSeries":
        dead = [key for key, c in self.terms.items() if _coeff_is_small(c, tol)]
        for key in dead:
            del self.terms[key]
        return self

    # ------------------------------------------------------------------
    # calculus

    def dphi(self, i: int) -> "FourierTaylorSeries":
        """Partial derivative with respect to angle i."""
        out = self.zero_like()
        unit_i = RationalComplex.of(0, 1) if self.exact else 1j
        for (k, m), c in self.terms.items():
            if k[i] == 0:
                continue
            out._set(k, m, c * (unit_i * k[i]))
        return out

    def dI(self, i: int) -> "FourierTaylorSeries":
        """Partial derivative with respect to action i."""
        out = self.zero_like()
        for (k, m), c in self.terms.items():
            if m[i] == 0:
                continue
            m2 = tuple(x - 1 if j == i else x for j, x in enumerate(m))
            out._set(k, m2, c * m[i])
        return out

    # ------------------------------------------------------------------
    # queries

    def coeff(self, k: Iterable[int], m: Iterable[int]):
        key = (tuple(k), tuple(m))
        c = self.terms.get(key)
        if c is None:
            return RationalComplex.of(0) if self.exact else 0j
        return c

    def conjugate_series(self) -> "FourierTaylorSeries":
        """conj(f): coefficient at k becomes conj(coeff at -k)."""
        out = self.zero_like()
        for (k, m), c in self.terms.items():
            out._set(tuple(-x for x in k), m, _conj(c))
        return out

    def reality_defect(self) -> float:
        """Max |c(k,m) - conj(c(-k,m))| over all stored terms."""
        worst = 0.0
        for (k, m), c in self.terms.items():
            mirror = self.coeff(tuple(-x for x in k), m)
            diff = (c - _conj(mirror))
            worst = max(worst, abs(diff if not isinstance(diff, RationalComplex)
                                   else diff.to_complex()))
        return worst

    def is_real(self, tol: float = 1e-12) -> bool:
        return self.reality_defect() <= tol

    def angle_average(self, fast: Iterable[int] | None = None) -> "FourierTaylorSeries":
        """Drop every term oscillating in the given angles (default: all)."""
        fast_idx = tuple(range(self.n_angles)) if fast is None else tuple(fast)
        out = self.zero_like()
        for (k, m), c in self.terms.items():
            if all(k[i] == 0 for i in fast_idx):
                out._set(k, m, c)
        return out

    def max_abs_diff(self, other: "FourierTaylorSeries") -> float:
        a, b = self.to_float(), other.to_float()
        keys = set(a.terms) | set(b.terms)
        worst = 0.0
        for key in keys:
            worst = max(worst, abs(a.terms.get(key, 0j) - b.terms.get(key, 0j)))
        return worst

    def __eq__(self, other):
        if not isinstance(other, FourierTaylorSeries):
            return NotImplemented
        if self.exact and other.exact:
            a = {k: c for k, c in self.terms.items() if not c.is_zero()}
            b = {k: c for k, c in other.terms.items() if not c.is_zero()}
            return a == b
        return self.max_abs_diff(other) == 0.0

    def __hash__(self):
        return id(self)

    def evaluate(self, phi=(), actions=()) -> complex:
        phi = tuple(phi)
        actions = tuple(actions)
        total = 0j
        for (k, m), c in self.terms.items():
            val = c.to_complex() if isinstance(c, RationalComplex) else c
            phase = sum(ki * pi for ki, pi in zip(k, phi))
            val *= complex(math.cos(phase), math.sin(phase))
            for mi, Ii in zip(m, actions):
                val *= Ii ** mi
            total += val
        return total

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return (f"FourierTaylorSeries({self.n_angles} angles, {self.n_actions} actions, "
                f"{len(self.terms)} terms, {mode})")

    # ------------------------------------------------------------------
    # serialization

    @staticmethod
    def _sort_key(item):
        (k, m), _ = item
        return (sum(abs(x) for x in k), k, m)

    def to_json_dict(self) -> dict:
        out_terms = []
        for (k, m), c in sorted(self.terms.items(), key=self._sort_key):
            cc = c.to_complex() if isinstance(c, RationalComplex) else c
            out_terms.append({"k": list(k), "m": list(m),
                              "re": cc.real, "im": cc.imag})
        return {
            "variables": {"angles": self.n_angles, "actions": self.n_actions},
            "truncation": self.truncation_order,
            "terms": out_terms,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    @classmethod
    def from_json_dict(cls, data: dict) -> "FourierTaylorSeries":
        var = data["variables"]
        out = cls(var["angles"], var["actions"], {}, data["truncation"], exact=False)
        for t in data["terms"]:
            out._set(tuple(t["k"]), tuple(t["m"]), complex(t["re"], t["im"]))
        return out

    @classmethod
    def from_json(cls, text: str) -> "FourierTaylorSeries":
        return cls.from_json_dict(json.loads(text))


# ----------------------------------------------------------------------
# canonical structure


def poisson_bracket(f: FourierTaylorSeries, g: FourierTaylorSeries) -> FourierTaylorSeries:
    """{f, g} = sum_i df/dphi_i dg/dI_i - df/dI_i dg/dphi_i."""
    if f.n_angles != f.n_actions:
        raise ValueError("poisson bracket needs one action conjugate to each angle")
    a, b = FourierTaylorSeries._common(f, g)
    out = a.zero_like()
    for i in range(a.n_angles):
        out = out + a.dphi(i) * b.dI(i) - a.dI(i) * b.dphi(i)
    return out.prune()


# convenient exact builders used across tests and experiments

def cos_angle(i: int = 0, n_angles: int = 1, n_actions: int = 1,
              action_power: tuple[int, ...] | None = None,
              truncation_order: int = DEFAULT_TRUNCATION,
              exact: bool = False) -> FourierTaylorSeries:
    """cos(phi_i), optionally times I^action_power."""
    m = (0,) * n_actions if action_power is None else tuple(action_power)
    kp = tuple(1 if j == i else 0 for j in range(n_angles))
    km = tuple(-1 if j == i else 0 for j in range(n_angles))
    half = Fraction(1, 2) if exact else 0.5
    return FourierTaylorSeries(n_angles, n_actions, {(kp, m): half, (km, m): half},
                               truncation_order, exact)


def sin_angle(i: int = 0, n_angles: int = 1, n_actions: int = 1,
              action_power: tuple[int, ...] | None = None,
              truncation_order: int = DEFAULT_TRUNCATION,
              exact: bool = False) -> FourierTaylorSeries:
    """sin(phi_i), optionally times I^action_power."""
    m = (0,) * n_actions if action_power is None else tuple(action_power)
    kp = tuple(1 if j == i else 0 for j in range(n_angles))
    km = tuple(-1 if j == i else 0 for j in range(n_angles))
    if exact:
        cp = RationalComplex.of(0, Fraction(-1, 2))
        cm = RationalComplex.of(0, Fraction(1, 2))
    else:
        cp, cm = -0.5j, 0.5j
    return FourierTaylorSeries(n_angles, n_actions, {(kp, m): cp, (km, m): cm},
                               truncation_order, exact)


def action_monomial(power: tuple[int, ...], coefficient=1, n_angles: int = 1,
                    truncation_order: int = DEFAULT_TRUNCATION,
                    exact: bool = False) -> FourierTaylorSeries:
    """coefficient * I^power with no angle dependence."""
    k = (0,) * n_angles
    return FourierTaylorSeries(n_angles, len(power), {(k, tuple(power)): coefficient},
                               truncation_order, exact)
