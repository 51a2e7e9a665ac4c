"""Boundary contributions: rational symbols in the normal covariable.

Everything here is a rational function of the normal covariable ``xi_n``
(tangential covariable fixed on the unit sphere ``|xi'| = 1``), either scalar
(:class:`ScalarRational`) or with operator coefficients in partial-fraction
form (:class:`RationalXnOp`).  The three analytic ingredients are

* :func:`pi_plus` -- the projection keeping partial-fraction terms with poles
  in the upper half-plane (the boundary-calculus symbol projection),
* :func:`line_integral` -- exact ``integral over R dxi_n`` by residues,
  ``2 pi i * sum`` of upper-half-plane residues with ``pi`` symbolic,
* :func:`boundary_density` -- assembly of the two boundary densities from the
  projected inverse symbol and the normal derivative of the next symbol,
  integrated over ``xi_n`` by residues and over ``xi'`` by sphere moments
  (odd tangential terms vanish by computed moments, not by assumption).

:func:`verify_boundary` asserts exact proportionality of each density to its
stated vector contraction and compares the engine's absolute constant with
the tabulated closed form, reporting both.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exterior import LinearOp, clifford_generator, clifford_word, trace_product
from .forms import random_vector
from .residue import CheckReport
from .scalars import (
    GaussianRational,
    I,
    SymbolicScalar,
    ZERO,
    as_gaussian,
    sphere_volume,
)
from .symbols import sphere_moment

_FLAVOR_WORDS: Dict[str, Tuple[str, ...]] = {
    "psi1": ("c", "c", "c"),
    "psi2": ("c", "chat", "chat"),
}


# ---------------------------------------------------------------------------
# Scalar rational functions of xi_n
# ---------------------------------------------------------------------------


def _conv(a: Sequence[GaussianRational], b: Sequence[GaussianRational]) -> Tuple[GaussianRational, ...]:
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return tuple(out)


def _strip(coeffs: Sequence[GaussianRational]) -> Tuple[GaussianRational, ...]:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _expand_factors(factors: Dict[GaussianRational, int]) -> Tuple[GaussianRational, ...]:
    poly: Tuple[GaussianRational, ...] = (as_gaussian(1),)
    for pole, mult in sorted(factors.items(), key=_pole_key):
        linear = (-pole, as_gaussian(1))
        for _ in range(mult):
            poly = _conv(poly, linear)
    return poly


def _pole_key(item) -> Tuple[Fraction, Fraction]:
    pole = item[0] if isinstance(item, tuple) else item
    return (pole.re, pole.im)


class ScalarRational:
    """``num(xi) / prod (xi - pole)^mult`` with exact Gaussian-rational data."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence, den: Dict[GaussianRational, int] | None = None):
        self.num = _strip([as_gaussian(c) for c in num])
        clean: Dict[GaussianRational, int] = {}
        for pole, mult in (den or {}).items():
            if mult < 0:
                raise ValueError("pole multiplicity must be >= 0")
            if mult:
                pole = as_gaussian(pole)
                clean[pole] = clean.get(pole, 0) + mult
        self.den = clean
        if not self.num:
            self.den = {}

    # -- structure -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def numerator_degree(self) -> int:
        return len(self.num) - 1 if self.num else -1

    @property
    def denominator_order(self) -> int:
        return sum(self.den.values())

    @property
    def decay_order(self) -> int:
        """Degree of decay at infinity (2 = at least quadratic)."""
        return self.denominator_order - self.numerator_degree

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "ScalarRational") -> "ScalarRational":
        if not isinstance(other, ScalarRational):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        target: Dict[GaussianRational, int] = dict(self.den)
        for pole, mult in other.den.items():
            target[pole] = max(target.get(pole, 0), mult)
        num_a = _conv(self.num, _expand_factors(_factor_deficit(self.den, target)))
        num_b = _conv(other.num, _expand_factors(_factor_deficit(other.den, target)))
        length = max(len(num_a), len(num_b))
        total = [
            (num_a[k] if k < len(num_a) else ZERO) + (num_b[k] if k < len(num_b) else ZERO)
            for k in range(length)
        ]
        return ScalarRational(total, target)

    def __mul__(self, other):
        if isinstance(other, ScalarRational):
            den = dict(self.den)
            for pole, mult in other.den.items():
                den[pole] = den.get(pole, 0) + mult
            return ScalarRational(_conv(self.num, other.num), den)
        if isinstance(other, (int, Fraction, GaussianRational)):
            scalar = as_gaussian(other)
            return ScalarRational([c * scalar for c in self.num], dict(self.den))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarRational":
        return self * (-1)

    def __sub__(self, other: "ScalarRational") -> "ScalarRational":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ScalarRational):
            return NotImplemented
        # compare as fractions: cross-multiplied numerators over the union den
        diff = self - other
        return diff.is_zero

    def evaluate(self, z: complex) -> complex:
        num = 0j
        for coeff in reversed(self.num):
            num = num * z + complex(coeff)
        den = 1j * 0 + 1.0
        for pole, mult in self.den.items():
            den *= (z - complex(pole)) ** mult
        return num / den

    # -- partial fractions ----------------------------------------------------
    def partial_fractions(self) -> Tuple[Tuple[GaussianRational, ...], Dict[Tuple[GaussianRational, int], GaussianRational]]:
        """Canonical decomposition ``poly + sum coeff/(xi-pole)^order``."""
        if self.is_zero:
            return (), {}
        num = self.num
        poly_part: Tuple[GaussianRational, ...] = ()
        den_poly = _expand_factors(self.den)
        if len(num) >= len(den_poly) and self.den:
            poly_part, num = _poly_divmod(num, den_poly)
            num = _strip(num)
        elif not self.den:
            return num, {}
        terms: Dict[Tuple[GaussianRational, int], GaussianRational] = {}
        for pole, mult in self.den.items():
            shifted = _taylor_shift(num, pole)
            series = _truncate(shifted, mult)
            for other_pole, other_mult in self.den.items():
                if other_pole == pole:
                    continue
                series = _series_mul(
                    series, _inverse_power_series(pole - other_pole, other_mult, mult), mult
                )
            for s, coeff in enumerate(series):
                if coeff:
                    terms[(pole, mult - s)] = coeff
        return poly_part, terms

    def line_integral(self) -> SymbolicScalar:
        """``integral over R`` by residues; requires at least quadratic decay."""
        if self.is_zero:
            return SymbolicScalar()
        if self.decay_order < 2:
            raise ValueError(
                f"insufficient decay for a line integral (decay order {self.decay_order} < 2)"
            )
        poly_part, terms = self.partial_fractions()
        if poly_part:
            raise ValueError("insufficient decay for a line integral (polynomial part)")
        total = ZERO
        for (pole, order), coeff in terms.items():
            if pole.im == 0:
                raise ValueError(f"pole on the real axis at {pole}")
            if order == 1 and pole.im > 0:
                total = total + coeff
        return SymbolicScalar.unit(GaussianRational(0, 2) * total, pi=1)

    def __repr__(self) -> str:
        return f"ScalarRational(num={self.num!r}, den={self.den!r})"


def _factor_deficit(current: Dict[GaussianRational, int], target: Dict[GaussianRational, int]) -> Dict[GaussianRational, int]:
    return {pole: target[pole] - current.get(pole, 0) for pole in target if target[pole] > current.get(pole, 0)}


def _poly_divmod(num: Sequence[GaussianRational], den: Sequence[GaussianRational]):
    num = list(num)
    quotient = [ZERO] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(quotient) - 1, -1, -1):
        coeff = num[k + len(den) - 1] / lead
        quotient[k] = coeff
        if coeff:
            for j, dj in enumerate(den):
                num[k + j] = num[k + j] - coeff * dj
    return _strip(quotient), tuple(num[: len(den) - 1])


def _taylor_shift(coeffs: Sequence[GaussianRational], center: GaussianRational) -> Tuple[GaussianRational, ...]:
    """Coefficients of ``p(t + center)`` given those of ``p(xi)``."""
    out = [ZERO] * len(coeffs)
    for t, a in enumerate(coeffs):
        if not a:
            continue
        power = as_gaussian(1)
        for s in range(t, -1, -1):
            out[s] = out[s] + a * math.comb(t, s) * power
            power = power * center
    return tuple(out)


def _truncate(coeffs: Sequence[GaussianRational], length: int) -> List[GaussianRational]:
    padded = list(coeffs[:length])
    while len(padded) < length:
        padded.append(ZERO)
    return padded


def _inverse_power_series(base: GaussianRational, mult: int, length: int) -> List[GaussianRational]:
    """Series of ``(t + base)^{-mult}`` around ``t = 0`` to the given length."""
    inv = GaussianRational(1) / base
    out = []
    for s in range(length):
        coeff = math.comb(mult + s - 1, s) * (inv ** (mult + s))
        if s % 2:
            coeff = -coeff
        out.append(coeff)
    return out


def _series_mul(a: Sequence[GaussianRational], b: Sequence[GaussianRational], length: int) -> List[GaussianRational]:
    out = [ZERO] * length
    for i, ai in enumerate(a):
        if not ai or i >= length:
            continue
        for j, bj in enumerate(b):
            if i + j >= length:
                break
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return out


# ---------------------------------------------------------------------------
# Operator-valued rational functions in partial-fraction form
# ---------------------------------------------------------------------------


class RationalXnOp:
    """Partial-fraction sum ``sum coeff_op/(xi_n - pole)^order`` + polynomial.

    Terms are canonical: pairwise-distinct ``(pole, order)`` keys, no zero
    operator coefficients, deterministic order.
    """

    __slots__ = ("n", "terms", "poly")

    def __init__(
        self,
        n: int,
        terms: Sequence[Tuple[GaussianRational, int, LinearOp]] = (),
        poly: Sequence[Tuple[int, LinearOp]] = (),
    ):
        self.n = n
        merged: Dict[Tuple[GaussianRational, int], LinearOp] = {}
        for pole, order, coeff in terms:
            pole = as_gaussian(pole)
            if order < 1:
                raise ValueError("pole order must be >= 1")
            if coeff.n != n:
                raise ValueError("coefficient operator dimension mismatch")
            key = (pole, order)
            merged[key] = coeff if key not in merged else merged[key] + coeff
        self.terms = [
            (pole, order, op)
            for (pole, order), op in sorted(
                merged.items(), key=lambda kv: (_pole_key(kv[0][0]), kv[0][1])
            )
            if not op.is_zero
        ]
        poly_merged: Dict[int, LinearOp] = {}
        for degree, coeff in poly:
            if degree < 0:
                raise ValueError("polynomial degree must be >= 0")
            poly_merged[degree] = coeff if degree not in poly_merged else poly_merged[degree] + coeff
        self.poly = [
            (degree, op) for degree, op in sorted(poly_merged.items()) if not op.is_zero
        ]

    @classmethod
    def from_scalar(cls, scalar: ScalarRational, op: LinearOp) -> "RationalXnOp":
        """Distribute a scalar rational function onto an operator coefficient."""
        poly_part, pf = scalar.partial_fractions()
        terms = [(pole, order, op.scale(coeff)) for (pole, order), coeff in pf.items()]
        poly = [(deg, op.scale(c)) for deg, c in enumerate(poly_part) if c]
        return cls(op.n, terms, poly)

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.poly

    def __add__(self, other: "RationalXnOp") -> "RationalXnOp":
        if not isinstance(other, RationalXnOp) or other.n != self.n:
            return NotImplemented
        return RationalXnOp(self.n, list(self.terms) + list(other.terms), list(self.poly) + list(other.poly))

    def scale(self, scalar) -> "RationalXnOp":
        return RationalXnOp(
            self.n,
            [(pole, order, op.scale(scalar)) for pole, order, op in self.terms],
            [(deg, op.scale(scalar)) for deg, op in self.poly],
        )

    def __eq__(self, other):
        if not isinstance(other, RationalXnOp):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms and self.poly == other.poly

    __hash__ = None

    def trace_against(self, word: LinearOp) -> ScalarRational:
        """``tr(word . self)`` as a scalar rational function of ``xi_n``."""
        total = ScalarRational(())
        for pole, order, op in self.terms:
            value = trace_product(word, op)
            if value:
                total = total + ScalarRational([value], {pole: order})
        for degree, op in self.poly:
            value = trace_product(word, op)
            if value:
                total = total + ScalarRational([ZERO] * degree + [value])
        return total

    def __repr__(self) -> str:
        return f"RationalXnOp(n={self.n}, terms={len(self.terms)}, poly={len(self.poly)})"


def _half_plane_projection(r: RationalXnOp, keep_upper: bool) -> RationalXnOp:
    if r.poly:
        raise ValueError("projection requires a decaying symbol (no polynomial part)")
    kept = []
    for pole, order, op in r.terms:
        if pole.im == 0:
            raise ValueError(f"pole on the real axis at {pole}")
        if (pole.im > 0) == keep_upper:
            kept.append((pole, order, op))
    return RationalXnOp(r.n, kept)


def pi_plus(r: RationalXnOp) -> RationalXnOp:
    """Keep the partial-fraction terms with poles in the upper half-plane."""
    return _half_plane_projection(r, True)


def pi_minus(r: RationalXnOp) -> RationalXnOp:
    """Keep the partial-fraction terms with poles in the lower half-plane."""
    return _half_plane_projection(r, False)


@dataclass(frozen=True)
class SymbolicOperator:
    """A finite sum ``sum unit_k * op_k`` with symbolic scalar units."""

    n: int
    terms: Tuple[Tuple[tuple, LinearOp], ...]

    @classmethod
    def single(cls, unit_scalar: SymbolicScalar, op: LinearOp) -> "SymbolicOperator":
        terms = []
        for key, coeff in unit_scalar.terms.items():
            scaled = op.scale(coeff)
            if not scaled.is_zero:
                terms.append((key, scaled))
        return cls(op.n, tuple(sorted(terms, key=lambda kv: kv[0], reverse=True)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def trace(self) -> SymbolicScalar:
        total = SymbolicScalar()
        for key, op in self.terms:
            total = total + SymbolicScalar({key: 1}) * op.trace()
        return total


def line_integral(r: Union[RationalXnOp, ScalarRational]) -> Union[SymbolicOperator, SymbolicScalar]:
    """Exact ``integral over R dxi_n`` by residues, ``pi`` kept symbolic.

    Scalar inputs give a :class:`SymbolicScalar`; operator-valued inputs give
    a :class:`SymbolicOperator`.  Requires at least quadratic decay: no
    polynomial part and vanishing total order-1 coefficient.
    """
    if isinstance(r, ScalarRational):
        return r.line_integral()
    if r.poly:
        raise ValueError("insufficient decay for a line integral (polynomial part)")
    order_one_total = LinearOp.zero(r.n)
    for pole, order, op in r.terms:
        if pole.im == 0:
            raise ValueError(f"pole on the real axis at {pole}")
        if order == 1:
            order_one_total = order_one_total + op
    if not order_one_total.is_zero:
        raise ValueError("insufficient decay for a line integral (1/xi tail)")
    residue_sum = LinearOp.zero(r.n)
    for pole, order, op in r.terms:
        if order == 1 and pole.im > 0:
            residue_sum = residue_sum + op
    return SymbolicOperator.single(
        SymbolicScalar.unit(GaussianRational(0, 2), pi=1), residue_sum
    )


# ---------------------------------------------------------------------------
# Boundary densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryArgs:
    """Arguments of a boundary density evaluation."""

    flavor: str  # "psi1" | "psi2"
    u: tuple
    v: tuple
    w: tuple
    m: int

    def __post_init__(self):
        if self.flavor not in _FLAVOR_WORDS:
            raise ValueError(f"flavor must be psi1 or psi2, got {self.flavor!r}")
        n = 2 * self.m
        for vec in (self.u, self.v, self.w):
            if len(vec) != n:
                raise ValueError(f"vectors must have length n = 2m = {n}")


def resolvent_symbol_channels(n: int) -> Dict[Tuple[int, ...], RationalXnOp]:
    """Channels of the order ``-1`` inverse symbol ``i c(xi)/|xi|^2`` at ``|xi'| = 1``.

    Keyed by the tangential monomial exponent: key ``e_a`` (length ``n-1``)
    carries the implicit scalar ``xi_a`` times ``i c_a/(1+xi_n^2)``; the zero
    key carries ``i xi_n c_n/(1+xi_n^2)``.
    """
    channels: Dict[Tuple[int, ...], RationalXnOp] = {}
    den = {I: 1, -I: 1}
    for a in range(1, n):
        alpha = [0] * (n - 1)
        alpha[a - 1] = 1
        channels[tuple(alpha)] = RationalXnOp.from_scalar(
            ScalarRational([I], den), clifford_generator("c", n, a)
        )
    channels[(0,) * (n - 1)] = RationalXnOp.from_scalar(
        ScalarRational([ZERO, I], den), clifford_generator("c", n, n)
    )
    return channels


def normal_derivative_symbol(m: int) -> ScalarRational:
    """``d/dxi_n (1+xi_n^2)^{1-m} = 2(1-m) xi_n (1+xi_n^2)^{-m}`` at ``|xi'|=1``."""
    return ScalarRational([0, 2 * (1 - m)], {I: m, -I: m})


def boundary_density(args: BoundaryArgs) -> SymbolicScalar:
    """Exact boundary density in units ``pi * V(S^{n-2})``.

    Assembles the projected inverse symbol, multiplies by the normal
    derivative of the next symbol order, traces against the argument word,
    integrates over ``xi_n`` by residues and over the tangential sphere by
    exact moments (odd moments vanish as computed outputs).
    """
    m = args.m
    n = 2 * m
    word = clifford_word(n, list(zip(_FLAVOR_WORDS[args.flavor], (args.u, args.v, args.w))))
    derivative = normal_derivative_symbol(m)
    total = SymbolicScalar()
    for alpha, channel in resolvent_symbol_channels(n).items():
        projected = pi_plus(channel)
        scalar = projected.trace_against(word) * derivative
        integral = scalar.line_integral()
        moment = sphere_moment(alpha, n - 1)
        total = total + moment * integral
    return total


def closed_form_boundary_coefficient(flavor: str, m: int) -> SymbolicScalar:
    """Tabulated boundary coefficient (a rational multiple of ``i pi``).

    psi1: ``(2m-2)! (1-m) 2^{-2m+1} i pi / (m! (m-1)!)``;
    psi2: the same with ``(m-1)`` in place of ``(1-m)``.
    """
    if flavor not in _FLAVOR_WORDS:
        raise ValueError(f"flavor must be psi1 or psi2, got {flavor!r}")
    if m < 2:
        raise ValueError("m must be >= 2")
    sign_factor = (1 - m) if flavor == "psi1" else (m - 1)
    value = Fraction(
        math.factorial(2 * m - 2) * sign_factor,
        2 ** (2 * m - 1) * math.factorial(m) * math.factorial(m - 1),
    )
    return SymbolicScalar.unit(GaussianRational(0, value), pi=1)


def boundary_contraction(flavor: str, u: Sequence, v: Sequence, w: Sequence):
    """The vector contraction each density is proportional to."""
    n = len(u)
    guv = sum(a * b for a, b in zip(u, v))
    guw = sum(a * b for a, b in zip(u, w))
    gvw = sum(a * b for a, b in zip(v, w))
    if flavor == "psi1":
        return u[n - 1] * gvw - v[n - 1] * guw + w[n - 1] * guv
    if flavor == "psi2":
        return u[n - 1] * gvw
    raise ValueError(f"flavor must be psi1 or psi2, got {flavor!r}")


def verify_boundary(flavor: str, m: int, trials: int = 20, seed: int = 0) -> CheckReport:
    """Check proportionality and the absolute constant of one boundary density.

    Proportionality of the density to the stated contraction is asserted
    unconditionally; the engine's constant is then compared exactly against
    the tabulated closed form, with both values rendered.
    """
    if flavor not in _FLAVOR_WORDS:
        raise ValueError(f"flavor must be psi1 or psi2, got {flavor!r}")
    if m < 2:
        raise ValueError("m must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = 2 * m
    rng = random.Random(f"{seed}:boundary:{flavor}:{m}")
    tr_id = 1 << n
    per_unit_expected = closed_form_boundary_coefficient(flavor, m) * sphere_volume(n - 2)
    ratios = set()
    proportional = True
    failures = 0
    rep_pass: Optional[Tuple[str, str]] = None
    rep_fail: Optional[Tuple[str, str, str]] = None
    for trial in range(trials):
        u, v, w = (random_vector(n, rng) for _ in range(3))
        args = BoundaryArgs(flavor, tuple(u), tuple(v), tuple(w), m)
        computed = boundary_density(args)
        contraction = boundary_contraction(flavor, u, v, w)
        if not contraction:
            if not computed.is_zero:
                proportional = False
                failures += 1
                if rep_fail is None:
                    rep_fail = (computed.render(), "0", f"trial {trial} (contraction 0)")
            continue
        ratios.add(computed / (contraction * tr_id))
        expected = per_unit_expected * (contraction * tr_id)
        if computed == expected:
            if rep_pass is None:
                rep_pass = (computed.render(), expected.render())
        else:
            failures += 1
            if rep_fail is None:
                rep_fail = (computed.render(), expected.render(), f"trial {trial}")
    if len(ratios) > 1:
        proportional = False
    check_id = "Psi1" if flavor == "psi1" else "Psi2"
    engine_constant = next(iter(ratios)).render() if len(ratios) == 1 else "nonconstant"
    detail = (
        f"proportionality to the stated contraction: {'holds' if proportional else 'FAILS'}; "
        f"engine constant per unit contraction*Tr(Id) = {engine_constant}; "
        f"tabulated closed form = {per_unit_expected.render()}"
    )
    if failures or not proportional:
        computed_str, expected_str, where = rep_fail if rep_fail else ("nonconstant", per_unit_expected.render(), "ratios differ")
        return CheckReport(
            check_id, n, trials, "fail", computed_str, expected_str,
            detail=f"{failures} mismatches; first at {where}; {detail}",
        )
    computed_str, expected_str = rep_pass if rep_pass else ("0", "0")
    return CheckReport(check_id, n, trials, "pass", computed_str, expected_str, detail=detail)
