"""Exact scalar arithmetic for the verification engine.

Three layers of scalars appear in the computations:

* ``Rational`` -- exact rational numbers (``fractions.Fraction``).
* ``GaussianRational`` -- complex numbers with rational real and imaginary
  parts, closed under field operations.  These are the entries of every
  operator matrix and the coefficients of every symbolic quantity.
* ``SymbolicScalar`` -- finite linear combinations of unit monomials
  ``pi^a * V(S^{d1})^{e1} * ...`` with ``GaussianRational`` coefficients,
  where ``V(S^d)`` denotes the volume of the round unit ``d``-sphere.
  Sphere volumes and powers of ``pi`` are carried symbolically so every
  comparison stays exact; :meth:`SymbolicScalar.numeric` evaluates to a
  ``complex`` float only when explicitly requested.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

Rational = Fraction

_RationalLike = Union[int, Fraction]


def _as_fraction(value: _RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class GaussianRational:
    """A complex number ``re + im*i`` with exact rational parts.

    Instances are immutable, hashable, and hash-compatible with
    ``fractions.Fraction`` whenever the imaginary part vanishes, so they can
    serve as dictionary keys alongside plain rationals (e.g. as pole
    locations).
    """

    __slots__ = ("re", "im")

    def __init__(self, re: _RationalLike = 0, im: _RationalLike = 0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("GaussianRational is immutable")

    # -- helpers ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction, _RationalABC)):
            return GaussianRational(_as_fraction(other))
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(other.re - self.re, other.im - self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.norm_squared()
        if not norm:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (GaussianRational(1) / self) ** (-exponent)
        result = GaussianRational(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons / conversions ---------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, _RationalABC)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if not self.im:
            return str(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{self.im} i"
        if not self.re:
            return imag
        if self.im > 0:
            return f"{self.re} + {imag}"
        return f"{self.re} - {imag.lstrip('-')}"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


I = GaussianRational(0, 1)
ONE = GaussianRational(1)
ZERO = GaussianRational(0)

_CoeffLike = Union[int, Fraction, GaussianRational]


def as_gaussian(value: _CoeffLike) -> GaussianRational:
    """Coerce an ``int``/``Fraction``/``GaussianRational`` to GaussianRational."""
    if isinstance(value, GaussianRational):
        return value
    return GaussianRational(_as_fraction(value))


# ---------------------------------------------------------------------------
# Symbolic scalars: GaussianRational combinations of pi^a * prod V(S^d)^e
# ---------------------------------------------------------------------------

_SphereSpec = Union[Mapping[int, int], Iterable[int], Iterable[tuple]]

# A unit monomial is keyed by (pi_exponent, ((sphere_dim, exponent), ...)).
UnitKey = tuple


def _normalize_spheres(spheres: _SphereSpec) -> tuple:
    merged: dict = {}
    if isinstance(spheres, Mapping):
        items = spheres.items()
    else:
        items = []
        for entry in spheres:
            if isinstance(entry, tuple):
                items.append(entry)
            else:
                items.append((entry, 1))
    for dim, exp in items:
        if dim < 0:
            raise ValueError(f"sphere dimension must be >= 0, got {dim}")
        merged[dim] = merged.get(dim, 0) + exp
    return tuple(sorted((d, e) for d, e in merged.items() if e))


def sphere_volume_float(dim: int) -> float:
    """Volume of the round unit sphere ``S^dim`` as a float."""
    if dim < 0:
        raise ValueError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((dim + 1) / 2.0) / math.gamma((dim + 1) / 2.0)


class SymbolicScalar:
    """An exact linear combination of monomials ``pi^a * prod V(S^d)^e``.

    The coefficients are :class:`GaussianRational`; zero coefficients are
    never stored, so equality of the term dictionaries is exact equality of
    the symbolic values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[UnitKey, GaussianRational] | None = None):
        clean: dict = {}
        if terms:
            for key, coeff in terms.items():
                coeff = as_gaussian(coeff)
                if coeff:
                    clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("SymbolicScalar is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def number(cls, value: _CoeffLike) -> "SymbolicScalar":
        return cls({(0, ()): as_gaussian(value)})

    @classmethod
    def unit(
        cls,
        coeff: _CoeffLike = 1,
        *,
        pi: int = 0,
        spheres: _SphereSpec = (),
    ) -> "SymbolicScalar":
        return cls({(pi, _normalize_spheres(spheres)): as_gaussian(coeff)})

    # -- predicates ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero

    def coefficient(self, *, pi: int = 0, spheres: _SphereSpec = ()) -> GaussianRational:
        """Coefficient of the monomial ``pi^pi * prod V(S^d)``."""
        return self.terms.get((pi, _normalize_spheres(spheres)), ZERO)

    def as_number(self) -> GaussianRational:
        """Return the value when no symbolic units are present."""
        if not self.terms:
            return ZERO
        if set(self.terms) == {(0, ())}:
            return self.terms[(0, ())]
        raise ValueError(f"not a plain number: {self.render()}")

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "SymbolicScalar":
        if isinstance(other, SymbolicScalar):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, _RationalABC)):
            return SymbolicScalar.number(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            total = terms.get(key, ZERO) + coeff
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return SymbolicScalar(terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return SymbolicScalar({key: -coeff for key, coeff in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for (pi1, sph1), c1 in self.terms.items():
            for (pi2, sph2), c2 in other.terms.items():
                merged: dict = {}
                for d, e in sph1:
                    merged[d] = merged.get(d, 0) + e
                for d, e in sph2:
                    merged[d] = merged.get(d, 0) + e
                key = (pi1 + pi2, tuple(sorted((d, e) for d, e in merged.items() if e)))
                total = terms.get(key, ZERO) + c1 * c2
                if total:
                    terms[key] = total
                else:
                    terms.pop(key, None)
        return SymbolicScalar(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, _RationalABC)):
            divisor = as_gaussian(other)
            return SymbolicScalar(
                {key: coeff / divisor for key, coeff in self.terms.items()}
            )
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- output ---------------------------------------------------------------
    @staticmethod
    def _render_units(key: UnitKey) -> list:
        pi_exp, spheres = key
        parts = []
        if pi_exp == 1:
            parts.append("pi")
        elif pi_exp:
            parts.append(f"pi^{pi_exp}")
        for dim, exp in spheres:
            name = f"V(S^{dim})"
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return parts

    def render(self) -> str:
        """Deterministic human-readable form, e.g. ``(-1/8 i) * pi * V(S^2)``."""
        if not self.terms:
            return "0"
        chunks = []
        for key in sorted(self.terms, reverse=True):
            coeff = self.terms[key]
            units = self._render_units(key)
            if units:
                chunks.append(" * ".join([f"({coeff})"] + units))
            else:
                chunks.append(str(coeff))
        return " + ".join(chunks)

    def numeric(self) -> complex:
        """Evaluate the symbolic units to floats and return a ``complex``."""
        total = 0j
        for (pi_exp, spheres), coeff in self.terms.items():
            factor = math.pi ** pi_exp
            for dim, exp in spheres:
                factor *= sphere_volume_float(dim) ** exp
            total += complex(coeff) * factor
        return total

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SymbolicScalar({self.render()!r})"


PI = SymbolicScalar.unit(pi=1)


def sphere_volume(dim: int) -> SymbolicScalar:
    """The volume of ``S^dim`` as a symbolic unit."""
    return SymbolicScalar.unit(spheres=(dim,))
